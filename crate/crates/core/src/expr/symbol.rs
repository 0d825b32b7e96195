use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Name of the parameter that may appear inside exponents.
pub const EXPONENT_PARAMETER: &str = "n";

/// Role of a named symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Independent,
    Reduced,
    Parameter,
    Dependent,
}

impl SymbolKind {
    /// Sort rank: variables < parameters < dependent variables.
    fn rank(self) -> u8 {
        match self {
            SymbolKind::Independent | SymbolKind::Reduced => 0,
            SymbolKind::Parameter => 1,
            SymbolKind::Dependent => 2,
        }
    }

    pub fn is_variable(self) -> bool {
        matches!(self, SymbolKind::Independent | SymbolKind::Reduced)
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct SymbolData {
    kind: SymbolKind,
    name: String,
}

/// A named symbol with a fixed kind. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol(Arc<SymbolData>);

impl Symbol {
    pub fn new(name: impl Into<String>, kind: SymbolKind) -> Self {
        Symbol(Arc::new(SymbolData {
            kind,
            name: name.into(),
        }))
    }

    pub fn independent(name: &str) -> Self {
        Self::new(name, SymbolKind::Independent)
    }

    pub fn parameter(name: &str) -> Self {
        Self::new(name, SymbolKind::Parameter)
    }

    pub fn dependent(name: &str) -> Self {
        Self::new(name, SymbolKind::Dependent)
    }

    /// The parameter `n` that exponents are allowed to depend on.
    pub fn exponent_parameter() -> Self {
        Self::parameter(EXPONENT_PARAMETER)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.0.kind
    }

    pub fn is_exponent_parameter(&self) -> bool {
        self.0.kind == SymbolKind::Parameter && self.0.name == EXPONENT_PARAMETER
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .kind
            .rank()
            .cmp(&other.0.kind.rank())
            .then_with(|| self.0.name.cmp(&other.0.name))
            .then_with(|| self.0.kind.cmp(&other.0.kind))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("symbol `{name}` already declared as {existing:?}, cannot redeclare as {requested:?}")]
    KindConflict {
        name: String,
        existing: SymbolKind,
        requested: SymbolKind,
    },
    #[error("function `{0}` already declared with different arguments")]
    FunctionConflict(String),
    #[error("name `{0}` is used both as a symbol and as a function")]
    NameClash(String),
}

/// Registry of symbols and opaque functions. Names are unique; a symbol's
/// kind is fixed by its first declaration.
#[derive(Debug, Clone, Default)]
pub struct Context {
    symbols: BTreeMap<String, Symbol>,
    functions: BTreeMap<String, Vec<Symbol>>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str, kind: SymbolKind) -> Result<Symbol, ContextError> {
        if self.functions.contains_key(name) {
            return Err(ContextError::NameClash(name.to_string()));
        }
        if let Some(existing) = self.symbols.get(name) {
            if existing.kind() != kind {
                return Err(ContextError::KindConflict {
                    name: name.to_string(),
                    existing: existing.kind(),
                    requested: kind,
                });
            }
            return Ok(existing.clone());
        }
        let sym = Symbol::new(name, kind);
        self.symbols.insert(name.to_string(), sym.clone());
        Ok(sym)
    }

    pub fn declare_function(&mut self, name: &str, args: Vec<Symbol>) -> Result<(), ContextError> {
        if self.symbols.contains_key(name) {
            return Err(ContextError::NameClash(name.to_string()));
        }
        match self.functions.get(name) {
            Some(existing) if *existing != args => Err(ContextError::FunctionConflict(name.to_string())),
            _ => {
                self.functions.insert(name.to_string(), args);
                Ok(())
            }
        }
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn function_args(&self, name: &str) -> Option<&[Symbol]> {
        self.functions.get(name).map(Vec::as_slice)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &[Symbol])> {
        self.functions.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_puts_variables_before_parameters() {
        let t = Symbol::independent("t");
        let x = Symbol::independent("x");
        let a = Symbol::parameter("alpha");
        let u = Symbol::dependent("u");
        let mut v = vec![u.clone(), a.clone(), x.clone(), t.clone()];
        v.sort();
        assert_eq!(v, vec![t, x, a, u]);
    }

    #[test]
    fn redeclaring_with_other_kind_fails() {
        let mut ctx = Context::new();
        ctx.declare("t", SymbolKind::Independent).unwrap();
        assert!(ctx.declare("t", SymbolKind::Independent).is_ok());
        assert!(matches!(
            ctx.declare("t", SymbolKind::Parameter),
            Err(ContextError::KindConflict { .. })
        ));
        assert!(matches!(
            ctx.declare_function("t", vec![]),
            Err(ContextError::NameClash(_))
        ));
    }
}
