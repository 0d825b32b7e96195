//! Name resolution and construction of core objects from a parsed document.

use std::collections::BTreeMap;
use std::str::FromStr;

use liesym_core::expr::{normalize, Atom, Expr, FuncSymbol, MultiIndex, Rational, RawExpr, Symbol, SymbolKind};
use liesym_core::jet::{expand_pde, Pde};
use liesym_core::lie::VectorField;
use liesym_core::ode::Method;
use liesym_core::reduction::{invariants_for, Ansatz, ReducedEquation, ReductionError, SideCondition};
use thiserror::Error;

use crate::dsl::{parse_document, parse_expr, Ast, BinOp, Block, BlockKind, Body, DeclKind, Document, ParseError, Pos};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{pos}: unknown identifier `{name}`; names must be declared before use with `indep`, `dep`, `param`, `reduced` or `func NAME(ARGS)`")]
    Unknown { name: String, pos: Pos },
    #[error("{pos}: {message}")]
    Semantic { pos: Pos, message: String },
    #[error("no {kind} named `{name}`")]
    Missing { kind: &'static str, name: String },
    #[error("{kind} `{name}`: {message}")]
    Build {
        kind: &'static str,
        name: String,
        message: String,
    },
    #[error("ansatz `{name}`: {source}")]
    Ansatz { name: String, source: ReductionError },
}

fn semantic(pos: Pos, message: impl Into<String>) -> ModelError {
    ModelError::Semantic {
        pos,
        message: message.into(),
    }
}

/// Exact value of a decimal literal such as `12`, `0.25` or `1e-9`.
pub fn decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    let scale = exp - frac.len() as i32;
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let text = if scale >= 0 {
        format!("{digits}{}", "0".repeat(scale as usize))
    } else {
        format!("{digits}/1{}", "0".repeat((-scale) as usize))
    };
    Rational::from_str(&text).ok()
}

/// Declared names of a document.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    symbols: BTreeMap<String, Symbol>,
    funcs: BTreeMap<String, Vec<Symbol>>,
}

impl Scope {
    pub fn from_document(doc: &Document) -> Result<Scope, ModelError> {
        let mut scope = Scope::default();
        for d in doc.decls() {
            for e in &d.entries {
                if scope.symbols.contains_key(&e.name) || scope.funcs.contains_key(&e.name) {
                    let same = match (d.kind, scope.symbols.get(&e.name)) {
                        (DeclKind::Func, _) => false,
                        (k, Some(s)) => s.kind() == symbol_kind(k),
                        (_, None) => false,
                    };
                    if same {
                        continue;
                    }
                    return Err(semantic(d.pos, format!("`{}` is declared twice", e.name)));
                }
                if e.name == "D" || e.name == "exp" || e.name == "tanh" {
                    return Err(semantic(d.pos, format!("`{}` is reserved", e.name)));
                }
                match d.kind {
                    DeclKind::Func => {
                        let args = e.args.as_deref().unwrap_or(&[]);
                        let syms = args
                            .iter()
                            .map(|a| scope.variable(a, d.pos).cloned())
                            .collect::<Result<Vec<_>, _>>()?;
                        scope.funcs.insert(e.name.clone(), syms);
                    }
                    k => {
                        scope
                            .symbols
                            .insert(e.name.clone(), Symbol::new(e.name.as_str(), symbol_kind(k)));
                    }
                }
            }
        }
        Ok(scope)
    }

    pub fn symbol(&self, name: &str, pos: Pos) -> Result<&Symbol, ModelError> {
        self.symbols.get(name).ok_or_else(|| ModelError::Unknown {
            name: name.to_string(),
            pos,
        })
    }

    /// An independent or reduced variable.
    pub fn variable(&self, name: &str, pos: Pos) -> Result<&Symbol, ModelError> {
        let s = self.symbol(name, pos)?;
        match s.kind() {
            SymbolKind::Independent | SymbolKind::Reduced => Ok(s),
            k => Err(semantic(pos, format!("`{name}` is a {k:?} symbol, not a variable"))),
        }
    }

    pub fn dependent(&self, name: &str, pos: Pos) -> Result<&Symbol, ModelError> {
        let s = self.symbol(name, pos)?;
        match s.kind() {
            SymbolKind::Dependent => Ok(s),
            k => Err(semantic(
                pos,
                format!("`{name}` is a {k:?} symbol, not a dependent variable"),
            )),
        }
    }

    pub fn function(&self, name: &str) -> Option<FuncSymbol> {
        self.funcs.get(name).map(|args| FuncSymbol::new(name, args.clone()))
    }

    fn vars(&self, names: &[String], pos: Pos) -> Result<Vec<Symbol>, ModelError> {
        names.iter().map(|n| self.variable(n, pos).cloned()).collect()
    }

    pub fn raw(&self, a: &Ast, pos: Pos) -> Result<RawExpr, ModelError> {
        let bx = |e: &Ast| self.raw(e, pos).map(Box::new);
        Ok(match a {
            Ast::Num(s) => RawExpr::Num(decimal(s).ok_or_else(|| semantic(pos, format!("bad number `{s}`")))?),
            Ast::Ident(name) => {
                if let Some(s) = self.symbols.get(name) {
                    RawExpr::Atom(Atom::sym(s))
                } else if let Some(f) = self.function(name) {
                    RawExpr::Atom(Atom::Func(f))
                } else {
                    return Err(ModelError::Unknown {
                        name: name.clone(),
                        pos,
                    });
                }
            }
            Ast::Call(f, args) => match (f.as_str(), args.as_slice()) {
                ("exp", [arg]) => RawExpr::Exp(bx(arg)?),
                ("tanh", [arg]) => RawExpr::Tanh(bx(arg)?),
                ("exp" | "tanh", _) => return Err(semantic(pos, format!("`{f}` takes one argument"))),
                _ => {
                    let func = self
                        .function(f)
                        .ok_or_else(|| ModelError::Unknown { name: f.clone(), pos })?;
                    let given: Vec<Option<&str>> = args
                        .iter()
                        .map(|a| match a {
                            Ast::Ident(s) => Some(s.as_str()),
                            _ => None,
                        })
                        .collect();
                    let declared: Vec<Option<&str>> = func.args.iter().map(|s| Some(s.name())).collect();
                    if given != declared {
                        return Err(semantic(
                            pos,
                            format!(
                                "`{f}` must be applied to its declared arguments ({})",
                                func.args.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
                            ),
                        ));
                    }
                    RawExpr::Atom(Atom::Func(func))
                }
            },
            Ast::Jet(name, vars) => {
                let vars = self.vars(vars, pos)?;
                if let Some(f) = self.function(name) {
                    if let Some(v) = vars.iter().find(|v| !f.has_arg(v)) {
                        return Err(semantic(pos, format!("`{name}` does not depend on `{v}`")));
                    }
                    RawExpr::Atom(Atom::Func(f.with_orders(MultiIndex::from_vars(&vars))))
                } else {
                    let dep = self.dependent(name, pos)?;
                    RawExpr::Atom(Atom::jet(dep, MultiIndex::from_vars(&vars)))
                }
            }
            Ast::Deriv(e, vars) => RawExpr::Derivative(bx(e)?, self.vars(vars, pos)?),
            Ast::Neg(e) => RawExpr::Neg(bx(e)?),
            Ast::Bin(op, l, r) => {
                let (l, r) = (bx(l)?, bx(r)?);
                match op {
                    BinOp::Add => RawExpr::Add(vec![*l, *r]),
                    BinOp::Sub => RawExpr::Sub(l, r),
                    BinOp::Mul => RawExpr::Mul(vec![*l, *r]),
                    BinOp::Div => RawExpr::Div(l, r),
                    BinOp::Pow => RawExpr::Pow(l, r),
                }
            }
        })
    }

    pub fn expr(&self, a: &Ast, pos: Pos) -> Result<Expr, ModelError> {
        normalize(&self.raw(a, pos)?).map_err(|e| semantic(pos, e.to_string()))
    }

    /// Parses and resolves a standalone expression.
    pub fn parse(&self, text: &str) -> Result<Expr, ModelError> {
        self.expr(&parse_expr(text)?, Pos::default())
    }

    /// Numeric value of a constant expression.
    pub fn number(&self, a: &Ast, pos: Pos) -> Result<f64, ModelError> {
        let e = self.expr(a, pos)?;
        e.eval::<f64>(&|_| None, None)
            .ok_or_else(|| semantic(pos, format!("`{e}` is not a numeric constant")))
    }
}

fn symbol_kind(k: DeclKind) -> SymbolKind {
    match k {
        DeclKind::Indep => SymbolKind::Independent,
        DeclKind::Dep => SymbolKind::Dependent,
        DeclKind::Param => SymbolKind::Parameter,
        DeclKind::Reduced => SymbolKind::Reduced,
        DeclKind::Func => unreachable!("functions are not symbols"),
    }
}

/// A candidate closed-form solution with side conditions on its opaque
/// functions.
#[derive(Clone, Debug)]
pub struct Solution {
    pub name: String,
    pub dependent: Symbol,
    pub independents: Vec<Symbol>,
    pub value: Expr,
    pub side: Vec<SideCondition>,
}

/// Settings of a numerical run.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub name: String,
    pub ode: String,
    pub params: BTreeMap<String, f64>,
    pub n: Option<i64>,
    pub ic: Vec<(String, f64)>,
    pub span: Option<(f64, f64)>,
    pub method: Option<Method>,
    pub tol: Option<(f64, f64)>,
    pub step: Option<f64>,
    pub points: Option<usize>,
}

/// A resolved model: every block turned into its core object.
#[derive(Clone, Debug)]
pub struct Model {
    pub doc: Document,
    pub scope: Scope,
    pub pdes: BTreeMap<String, Pde>,
    pub fields: BTreeMap<String, VectorField>,
    pub odes: BTreeMap<String, ReducedEquation>,
    pub solutions: BTreeMap<String, Solution>,
    pub runs: BTreeMap<String, RunSpec>,
    ansatz_blocks: BTreeMap<String, Block>,
}

fn single<'a>(b: &'a Block, key: &str) -> Result<Option<&'a Body>, ModelError> {
    let mut it = b.clauses(key);
    let first = it.next();
    if let Some(extra) = it.next() {
        return Err(semantic(
            extra.pos,
            format!("`{key}` given twice in {} `{}`", b.kind.keyword(), b.name),
        ));
    }
    Ok(first.map(|c| &c.body))
}

fn required<'a>(b: &'a Block, key: &str) -> Result<(&'a Body, Pos), ModelError> {
    let c = b.clauses(key).next().ok_or_else(|| {
        semantic(
            b.pos,
            format!("{} `{}` needs a `{key}` clause", b.kind.keyword(), b.name),
        )
    })?;
    single(b, key)?;
    Ok((&c.body, c.pos))
}

fn names_of(body: &Body) -> &[String] {
    match body {
        Body::Names(v) => v,
        _ => unreachable!("shape checked by the parser"),
    }
}

fn one_name<'a>(b: &'a Block, key: &str) -> Result<(&'a str, Pos), ModelError> {
    let (body, pos) = required(b, key)?;
    match names_of(body) {
        [n] => Ok((n.as_str(), pos)),
        _ => Err(semantic(pos, format!("`{key}` takes exactly one name"))),
    }
}

fn build_err(kind: &'static str, name: &str, e: impl std::fmt::Display) -> ModelError {
    ModelError::Build {
        kind,
        name: name.to_string(),
        message: e.to_string(),
    }
}

impl Model {
    pub fn parse(text: &str) -> Result<Model, ModelError> {
        Model::from_document(parse_document(text)?)
    }

    pub fn from_document(doc: Document) -> Result<Model, ModelError> {
        let scope = Scope::from_document(&doc)?;
        let mut m = Model {
            doc: doc.clone(),
            scope,
            pdes: BTreeMap::new(),
            fields: BTreeMap::new(),
            odes: BTreeMap::new(),
            solutions: BTreeMap::new(),
            runs: BTreeMap::new(),
            ansatz_blocks: BTreeMap::new(),
        };
        let mut seen = std::collections::BTreeSet::new();
        for b in doc.blocks() {
            if !seen.insert((b.kind, b.name.clone())) {
                return Err(semantic(
                    b.pos,
                    format!("{} `{}` is defined twice", b.kind.keyword(), b.name),
                ));
            }
        }
        for kind in BlockKind::ALL {
            for b in doc.blocks().filter(|b| b.kind == kind) {
                match kind {
                    BlockKind::Pde => {
                        let p = m.build_pde(b)?;
                        m.pdes.insert(b.name.clone(), p);
                    }
                    BlockKind::Field => {
                        let f = m.build_field(b)?;
                        m.fields.insert(b.name.clone(), f);
                    }
                    BlockKind::Ode => {
                        let o = m.build_ode(b)?;
                        m.odes.insert(b.name.clone(), o);
                    }
                    BlockKind::Solution => {
                        let s = m.build_solution(b)?;
                        m.solutions.insert(b.name.clone(), s);
                    }
                    BlockKind::Ansatz => {
                        m.ansatz_blocks.insert(b.name.clone(), b.clone());
                    }
                    BlockKind::Run => {
                        let r = m.build_run(b)?;
                        m.runs.insert(b.name.clone(), r);
                    }
                }
            }
        }
        Ok(m)
    }

    fn equation(&self, b: &Block) -> Result<Expr, ModelError> {
        let (body, pos) = required(b, "eq")?;
        let Body::Equation(l, r) = body else { unreachable!() };
        Ok(self.scope.expr(l, pos)? - self.scope.expr(r, pos)?)
    }

    fn build_pde(&self, b: &Block) -> Result<Pde, ModelError> {
        let (vars, pos) = required(b, "vars")?;
        let vars = self.scope.vars(names_of(vars), pos)?;
        let (dep, pos) = one_name(b, "dep")?;
        let dep = self.scope.dependent(dep, pos)?.clone();
        let lhs = self.equation(b)?;
        expand_pde(&b.name, lhs, &vars, &dep).map_err(|e| build_err("pde", &b.name, e))
    }

    fn build_field(&self, b: &Block) -> Result<VectorField, ModelError> {
        let (dep, pos) = one_name(b, "dep")?;
        let dep = self.scope.dependent(dep, pos)?.clone();
        let mut xi = Vec::new();
        for c in b.clauses("xi") {
            let Body::Assign(v, e) = &c.body else { unreachable!() };
            xi.push((self.scope.variable(v, c.pos)?.clone(), self.scope.expr(e, c.pos)?));
        }
        let eta = match b.clauses("eta").next() {
            Some(c) => {
                single(b, "eta")?;
                let Body::Assign(v, e) = &c.body else { unreachable!() };
                if v != dep.name() {
                    return Err(semantic(
                        c.pos,
                        format!("`eta` must name the dependent variable `{dep}`"),
                    ));
                }
                self.scope.expr(e, c.pos)?
            }
            None => Expr::zero(),
        };
        VectorField::new(&b.name, &dep, xi, eta).map_err(|e| build_err("field", &b.name, e))
    }

    fn build_ode(&self, b: &Block) -> Result<ReducedEquation, ModelError> {
        let (var, pos) = one_name(b, "var")?;
        let var = self.scope.variable(var, pos)?.clone();
        let (dep, pos) = one_name(b, "dep")?;
        let dep = self.scope.dependent(dep, pos)?.clone();
        Ok(ReducedEquation::new(self.equation(b)?, vec![var], dep))
    }

    fn build_solution(&self, b: &Block) -> Result<Solution, ModelError> {
        let (vars, pos) = required(b, "vars")?;
        let independents = self.scope.vars(names_of(vars), pos)?;
        let (dep, pos) = one_name(b, "dep")?;
        let dependent = self.scope.dependent(dep, pos)?.clone();
        let (body, pos) = required(b, "value")?;
        let Body::Assign(target, e) = body else { unreachable!() };
        if target != dependent.name() {
            return Err(semantic(
                pos,
                format!("`value` must name the dependent variable `{dependent}`"),
            ));
        }
        let value = self.scope.expr(e, pos)?;
        let mut side = Vec::new();
        for c in b.clauses("side") {
            let Body::Equation(l, r) = &c.body else { unreachable!() };
            let lhs = self.scope.expr(l, c.pos)?;
            let f = match lhs.as_atom() {
                Some(Atom::Func(f)) => f.clone(),
                _ => {
                    return Err(semantic(
                        c.pos,
                        "the left side of `side` must be a single function or derivative",
                    ))
                }
            };
            side.push((f, self.scope.expr(r, c.pos)?));
        }
        Ok(Solution {
            name: b.name.clone(),
            dependent,
            independents,
            value,
            side,
        })
    }

    fn build_run(&self, b: &Block) -> Result<RunSpec, ModelError> {
        let (ode, pos) = one_name(b, "ode")?;
        if !self.odes.contains_key(ode) {
            return Err(semantic(pos, format!("run refers to unknown ode `{ode}`")));
        }
        let mut params = BTreeMap::new();
        let mut n = None;
        for c in b.clauses("param") {
            let Body::Assign(p, e) = &c.body else { unreachable!() };
            let sym = self.scope.symbol(p, c.pos)?;
            if sym.is_exponent_parameter() {
                let v = self.scope.number(e, c.pos)?;
                if v.fract() != 0.0 {
                    return Err(semantic(c.pos, "the exponent parameter must be an integer"));
                }
                n = Some(v as i64);
            } else {
                params.insert(p.clone(), self.scope.number(e, c.pos)?);
            }
        }
        let mut ic = Vec::new();
        for c in b.clauses("ic") {
            let Body::Assign(s, e) = &c.body else { unreachable!() };
            ic.push((s.clone(), self.scope.number(e, c.pos)?));
        }
        let values = |key: &str| -> Result<Option<Vec<f64>>, ModelError> {
            match b.clauses(key).next() {
                None => Ok(None),
                Some(c) => {
                    single(b, key)?;
                    let Body::Values(v) = &c.body else { unreachable!() };
                    v.iter()
                        .map(|a| self.scope.number(a, c.pos))
                        .collect::<Result<Vec<_>, _>>()
                        .map(Some)
                }
            }
        };
        let span = match values("span")? {
            None => None,
            Some(v) if v.len() == 2 => Some((v[0], v[1])),
            Some(_) => return Err(semantic(b.pos, "`span` takes two values")),
        };
        let tol = match values("tol")? {
            None => None,
            Some(v) if v.len() == 1 => Some((v[0], v[0])),
            Some(v) if v.len() == 2 => Some((v[0], v[1])),
            Some(_) => return Err(semantic(b.pos, "`tol` takes one or two values")),
        };
        let step = values("step")?.map(|v| v[0]);
        let points = values("points")?.map(|v| v[0] as usize);
        let method = match single(b, "method")? {
            None => None,
            Some(body) => match names_of(body) {
                [m] => Some(m.parse::<Method>().map_err(|e| build_err("run", &b.name, e))?),
                _ => return Err(semantic(b.pos, "`method` takes one name")),
            },
        };
        Ok(RunSpec {
            name: b.name.clone(),
            ode: ode.to_string(),
            params,
            n,
            ic,
            span,
            method,
            tol,
            step,
            points,
        })
    }

    pub fn pde(&self, name: &str) -> Result<&Pde, ModelError> {
        self.pdes.get(name).ok_or_else(|| ModelError::Missing {
            kind: "pde",
            name: name.to_string(),
        })
    }

    pub fn field(&self, name: &str) -> Result<&VectorField, ModelError> {
        self.fields.get(name).ok_or_else(|| ModelError::Missing {
            kind: "field",
            name: name.to_string(),
        })
    }

    pub fn ode(&self, name: &str) -> Result<&ReducedEquation, ModelError> {
        self.odes.get(name).ok_or_else(|| ModelError::Missing {
            kind: "ode",
            name: name.to_string(),
        })
    }

    pub fn solution(&self, name: &str) -> Result<&Solution, ModelError> {
        self.solutions.get(name).ok_or_else(|| ModelError::Missing {
            kind: "solution",
            name: name.to_string(),
        })
    }

    pub fn run(&self, name: &str) -> Result<&RunSpec, ModelError> {
        self.runs.get(name).ok_or_else(|| ModelError::Missing {
            kind: "run",
            name: name.to_string(),
        })
    }

    /// An equation by name, looked up among both PDEs and ODEs.
    pub fn reduced(&self, name: &str) -> Result<ReducedEquation, ModelError> {
        if let Some(o) = self.odes.get(name) {
            return Ok(o.clone());
        }
        let p = self.pde(name)?;
        Ok(ReducedEquation::new(
            p.lhs().clone(),
            p.independents().to_vec(),
            p.dependent().clone(),
        ))
    }

    pub fn ansatz_names(&self) -> impl Iterator<Item = &String> {
        self.ansatz_blocks.keys()
    }

    /// Builds an ansatz; generator-derived ones run the invariant solver.
    pub fn ansatz(&self, name: &str) -> Result<Ansatz, ModelError> {
        let b = self.ansatz_blocks.get(name).ok_or_else(|| ModelError::Missing {
            kind: "ansatz",
            name: name.to_string(),
        })?;
        let err = |source: ReductionError| ModelError::Ansatz {
            name: name.to_string(),
            source,
        };
        let (from, pos) = required(b, "from")?;
        let from = self.scope.vars(names_of(from), pos)?;
        let (newdep, pos) = one_name(b, "newdep")?;
        let newdep = self.scope.dependent(newdep, pos)?.clone();
        if let Some(body) = single(b, "field")? {
            let [fname] = names_of(body) else {
                return Err(semantic(b.pos, "`field` takes one name"));
            };
            let field = self.field(fname)?;
            let names = match single(b, "invariants")? {
                Some(body) => self.scope.vars(names_of(body), b.pos)?,
                None => Vec::new(),
            };
            let mut a = invariants_for(field, &from, &names, &newdep).map_err(err)?;
            a.name = name.to_string();
            return Ok(a);
        }
        let (dep, pos) = one_name(b, "dep")?;
        let dep = self.scope.dependent(dep, pos)?.clone();
        let mut new = Vec::new();
        for c in b.clauses("new") {
            let Body::Assign(v, e) = &c.body else { unreachable!() };
            new.push((self.scope.variable(v, c.pos)?.clone(), self.scope.expr(e, c.pos)?));
        }
        let (body, pos) = required(b, "rule")?;
        let Body::Assign(target, e) = body else { unreachable!() };
        if target != dep.name() {
            return Err(semantic(
                pos,
                format!("`rule` must name the old dependent variable `{dep}`"),
            ));
        }
        let rule = self.scope.expr(e, pos)?;
        let mut hints = Vec::new();
        for c in b.clauses("hint") {
            let Body::Assign(v, e) = &c.body else { unreachable!() };
            hints.push((self.scope.variable(v, c.pos)?.clone(), self.scope.expr(e, c.pos)?));
        }
        Ansatz::new(name, from, dep, new, newdep, rule, hints).map_err(err)
    }
}

/// The independent and dependent symbols of a named ODE's state.
pub fn symbol_named(model: &Model, name: &str) -> Option<Symbol> {
    model.scope.symbols.get(name).cloned()
}
