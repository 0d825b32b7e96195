//! The model-file language: lexer, AST, recursive-descent parser and printer.

mod lexer;
mod parser;
mod print;

use std::fmt;

pub use lexer::{lex, Tok, Token};
pub use parser::{parse_document, parse_expr};
pub use print::{print_ast, print_document};

/// Line and column of a token, 1-based. Positions never take part in AST
/// equality, so a printed and reparsed document compares equal.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of: {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Expression syntax tree, before any name resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Num(String),
    Ident(String),
    Call(String, Vec<Ast>),
    /// `u[t,x,x]`
    Jet(String, Vec<String>),
    /// `D(expr; v1, v2)`
    Deriv(Box<Ast>, Vec<String>),
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DeclKind {
    Indep,
    Dep,
    Param,
    Reduced,
    Func,
}

impl DeclKind {
    pub const ALL: [DeclKind; 5] = [
        DeclKind::Indep,
        DeclKind::Dep,
        DeclKind::Param,
        DeclKind::Reduced,
        DeclKind::Func,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            DeclKind::Indep => "indep",
            DeclKind::Dep => "dep",
            DeclKind::Param => "param",
            DeclKind::Reduced => "reduced",
            DeclKind::Func => "func",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclEntry {
    pub name: String,
    /// Argument list of a `func` declaration.
    pub args: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub entries: Vec<DeclEntry>,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Pde,
    Field,
    Ansatz,
    Ode,
    Solution,
    Run,
}

/// How the body of a clause is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `key a, b, c`
    Names,
    /// `key target = expr`
    Assign,
    /// `key lhs = rhs`
    Equation,
    /// `key expr, expr`
    Values,
}

impl BlockKind {
    pub const ALL: [BlockKind; 6] = [
        BlockKind::Pde,
        BlockKind::Field,
        BlockKind::Ansatz,
        BlockKind::Ode,
        BlockKind::Solution,
        BlockKind::Run,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BlockKind::Pde => "pde",
            BlockKind::Field => "field",
            BlockKind::Ansatz => "ansatz",
            BlockKind::Ode => "ode",
            BlockKind::Solution => "solution",
            BlockKind::Run => "run",
        }
    }

    pub fn keys(self) -> &'static [(&'static str, Shape)] {
        use Shape::*;
        match self {
            BlockKind::Pde => &[("vars", Names), ("dep", Names), ("eq", Equation)],
            BlockKind::Field => &[("dep", Names), ("xi", Assign), ("eta", Assign)],
            BlockKind::Ansatz => &[
                ("from", Names),
                ("dep", Names),
                ("new", Assign),
                ("newdep", Names),
                ("rule", Assign),
                ("hint", Assign),
                ("field", Names),
                ("invariants", Names),
            ],
            BlockKind::Ode => &[("var", Names), ("dep", Names), ("eq", Equation)],
            BlockKind::Solution => &[("vars", Names), ("dep", Names), ("value", Assign), ("side", Equation)],
            BlockKind::Run => &[
                ("ode", Names),
                ("param", Assign),
                ("ic", Assign),
                ("span", Values),
                ("method", Names),
                ("tol", Values),
                ("step", Values),
                ("points", Values),
            ],
        }
    }

    pub fn shape(self, key: &str) -> Option<Shape> {
        self.keys().iter().find(|(k, _)| *k == key).map(|(_, s)| *s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Names(Vec<String>),
    Assign(String, Ast),
    Equation(Ast, Ast),
    Values(Vec<Ast>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub key: String,
    pub body: Body,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub name: String,
    pub clauses: Vec<Clause>,
    pub pos: Pos,
}

impl Block {
    pub fn clauses(&self, key: &str) -> std::vec::IntoIter<&Clause> {
        self.clauses
            .iter()
            .filter(|c| c.key == key)
            .collect::<Vec<_>>()
            .into_iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Decl(Decl),
    Block(Block),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Document {
    pub items: Vec<Item>,
}

impl Document {
    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.items.iter().filter_map(|i| match i {
            Item::Block(b) => Some(b),
            Item::Decl(_) => None,
        })
    }

    pub fn decls(&self) -> impl Iterator<Item = &Decl> {
        self.items.iter().filter_map(|i| match i {
            Item::Decl(d) => Some(d),
            Item::Block(_) => None,
        })
    }
}
