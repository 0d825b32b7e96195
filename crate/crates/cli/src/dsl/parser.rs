use super::lexer::{lex, Tok, Token};
use super::{
    Ast, BinOp, Block, BlockKind, Body, Clause, Decl, DeclEntry, DeclKind, Document, Item, ParseError, Pos, Shape,
};

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

fn expected(what: &[&str]) -> Vec<String> {
    what.iter().map(|s| s.to_string()).collect()
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn error(&self, what: &[&str]) -> ParseError {
        ParseError {
            pos: self.pos(),
            message: format!("unexpected {}", self.peek()),
            expected: expected(what),
        }
    }

    fn at_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.at_punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline || self.at_punct(';') {
            self.bump();
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    /// A block or variable name: words joined by `-` with no spaces, as in
    /// `du-field` or `x3-phi`.
    fn name(&mut self) -> Result<String, ParseError> {
        let mut out = match self.peek().clone() {
            Tok::Ident(s) | Tok::Number(s) => {
                self.bump();
                s
            }
            _ => return Err(self.error(&["name"])),
        };
        while let (Some(dash), Some(next)) = (self.toks.get(self.i), self.toks.get(self.i + 1)) {
            let prev = &self.toks[self.i - 1];
            let prev_len = match &prev.tok {
                Tok::Ident(s) | Tok::Number(s) => s.chars().count(),
                _ => 1,
            };
            let glued = dash.tok == Tok::Punct('-')
                && dash.pos.line == prev.pos.line
                && dash.pos.col == prev.pos.col + prev_len
                && next.pos.line == dash.pos.line
                && next.pos.col == dash.pos.col + 1;
            match (&next.tok, glued) {
                (Tok::Ident(s) | Tok::Number(s), true) => {
                    out.push('-');
                    out.push_str(s);
                    self.i += 2;
                }
                _ => break,
            }
        }
        Ok(out)
    }

    fn names(&mut self) -> Result<Vec<String>, ParseError> {
        let mut v = vec![self.name()?];
        while self.at_punct(',') {
            self.bump();
            v.push(self.name()?);
        }
        Ok(v)
    }

    fn idents(&mut self) -> Result<Vec<String>, ParseError> {
        let mut v = vec![self.ident()?];
        while self.at_punct(',') {
            self.bump();
            v.push(self.ident()?);
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Punct('+') => BinOp::Add,
                Tok::Punct('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Punct('*') => BinOp::Mul,
                Tok::Punct('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.at_punct('-') {
            self.bump();
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.at_punct('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Ast::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        const START: &[&str] = &["number", "identifier", "`(`", "`-`", "`D(`"];
        match self.peek().clone() {
            Tok::Number(s) => {
                self.bump();
                Ok(Ast::Num(s))
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.at_punct('(') {
                    self.bump();
                    if name == "D" {
                        let e = self.expr()?;
                        if !self.at_punct(';') {
                            return Err(self.error(&["`;`"]));
                        }
                        self.bump();
                        let vars = self.idents()?;
                        self.expect_punct(')')?;
                        return Ok(Ast::Deriv(Box::new(e), vars));
                    }
                    let mut args = vec![self.expr()?];
                    while self.at_punct(',') {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect_punct(')')?;
                    Ok(Ast::Call(name, args))
                } else if self.at_punct('[') {
                    self.bump();
                    let vars = self.idents()?;
                    self.expect_punct(']')?;
                    Ok(Ast::Jet(name, vars))
                } else {
                    Ok(Ast::Ident(name))
                }
            }
            _ => Err(self.error(START)),
        }
    }

    fn end_of_clause(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Newline | Tok::Punct(';') => {
                self.bump();
                Ok(())
            }
            Tok::Punct('}') => Ok(()),
            _ => Err(self.error(&["end of line", "`;`", "`}`", "operator"])),
        }
    }

    fn clause(&mut self, kind: BlockKind) -> Result<Clause, ParseError> {
        let pos = self.pos();
        let keys: Vec<&str> = kind.keys().iter().map(|(k, _)| *k).collect();
        let key = match self.peek().clone() {
            Tok::Ident(k) if kind.shape(&k).is_some() => k,
            Tok::Ident(k) => {
                return Err(ParseError {
                    pos,
                    message: format!("unknown clause `{k}` in {} block", kind.keyword()),
                    expected: expected(&keys),
                })
            }
            _ => {
                let mut e = self.error(&keys);
                e.expected.push("`}`".into());
                return Err(e);
            }
        };
        self.bump();
        let body = match kind.shape(&key).expect("checked") {
            Shape::Names => Body::Names(self.names()?),
            Shape::Assign => {
                let target = self.name()?;
                self.expect_punct('=')?;
                Body::Assign(target, self.expr()?)
            }
            Shape::Equation => {
                let lhs = self.expr()?;
                self.expect_punct('=')?;
                Body::Equation(lhs, self.expr()?)
            }
            Shape::Values => {
                let mut v = vec![self.expr()?];
                while self.at_punct(',') {
                    self.bump();
                    v.push(self.expr()?);
                }
                Body::Values(v)
            }
        };
        self.end_of_clause()?;
        Ok(Clause { key, body, pos })
    }

    fn block(&mut self, kind: BlockKind) -> Result<Block, ParseError> {
        let pos = self.pos();
        self.bump();
        let name = self.name()?;
        self.expect_punct('{')?;
        let mut clauses = Vec::new();
        loop {
            self.skip_newlines();
            if self.at_punct('}') {
                self.bump();
                break;
            }
            if *self.peek() == Tok::Eof {
                return Err(self.error(&["`}`"]));
            }
            clauses.push(self.clause(kind)?);
        }
        Ok(Block {
            kind,
            name,
            clauses,
            pos,
        })
    }

    fn decl(&mut self, kind: DeclKind) -> Result<Decl, ParseError> {
        let pos = self.pos();
        self.bump();
        let mut entries = Vec::new();
        loop {
            let name = self.ident()?;
            let args = if kind == DeclKind::Func {
                self.expect_punct('(')?;
                let a = self.idents()?;
                self.expect_punct(')')?;
                Some(a)
            } else {
                None
            };
            entries.push(DeclEntry { name, args });
            if !self.at_punct(',') {
                break;
            }
            self.bump();
        }
        match self.peek() {
            Tok::Newline | Tok::Punct(';') | Tok::Eof => Ok(Decl { kind, entries, pos }),
            _ => Err(self.error(&["`,`", "end of line"])),
        }
    }

    fn document(&mut self) -> Result<Document, ParseError> {
        let mut items = Vec::new();
        loop {
            self.skip_newlines();
            let word = match self.peek().clone() {
                Tok::Eof => return Ok(Document { items }),
                Tok::Ident(w) => w,
                _ => return Err(self.error(&top_level())),
            };
            if let Some(k) = DeclKind::ALL.into_iter().find(|k| k.keyword() == word) {
                items.push(Item::Decl(self.decl(k)?));
            } else if let Some(k) = BlockKind::ALL.into_iter().find(|k| k.keyword() == word) {
                items.push(Item::Block(self.block(k)?));
            } else {
                return Err(self.error(&top_level()));
            }
        }
    }
}

fn top_level() -> Vec<&'static str> {
    DeclKind::ALL
        .iter()
        .map(|k| k.keyword())
        .chain(BlockKind::ALL.iter().map(|k| k.keyword()))
        .collect()
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    Parser { toks: lex(text)?, i: 0 }.document()
}

/// Parses a standalone expression.
pub fn parse_expr(text: &str) -> Result<Ast, ParseError> {
    let toks: Vec<Token> = lex(text)?.into_iter().filter(|t| t.tok != Tok::Newline).collect();
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}
