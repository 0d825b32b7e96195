use std::collections::BTreeMap;

use super::{jet_order, ReducedEquation, ReductionError};
use crate::expr::{Atom, Exponent, Expr, MultiIndex, Substitution, Symbol, SymbolKind};
use crate::jet::Pde;
use crate::lie::VectorField;

/// A change of variables: new independents as functions of the old ones and
/// the old dependent variable expressed through the new one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ansatz {
    pub name: String,
    pub old_independents: Vec<Symbol>,
    pub old_dependent: Symbol,
    pub new_independents: Vec<(Symbol, Expr)>,
    pub new_dependent: Symbol,
    /// `old_dependent = rule`.
    pub rule: Expr,
    /// Old variables in terms of new ones, used to clear leftovers.
    pub hints: Vec<(Symbol, Expr)>,
    /// The invariant the rule was solved from, when derived from a generator.
    pub dependent_invariant: Option<Expr>,
}

impl Ansatz {
    pub fn new(
        name: &str,
        old_independents: Vec<Symbol>,
        old_dependent: Symbol,
        new_independents: Vec<(Symbol, Expr)>,
        new_dependent: Symbol,
        rule: Expr,
        hints: Vec<(Symbol, Expr)>,
    ) -> Result<Self, ReductionError> {
        if !rule.contains_symbol(&new_dependent) {
            return Err(ReductionError::MissingDependent(new_dependent.name().to_string()));
        }
        let a = Ansatz {
            name: name.to_string(),
            old_independents,
            old_dependent,
            new_independents,
            new_dependent,
            rule,
            hints,
            dependent_invariant: None,
        };
        if !a.full_rank() {
            return Err(ReductionError::DegenerateJacobian);
        }
        Ok(a)
    }

    pub fn identity(independents: &[Symbol], dependent: &Symbol) -> Self {
        Ansatz {
            name: "identity".to_string(),
            old_independents: independents.to_vec(),
            old_dependent: dependent.clone(),
            new_independents: independents.iter().map(|s| (s.clone(), Expr::sym(s))).collect(),
            new_dependent: dependent.clone(),
            rule: Expr::sym(dependent),
            hints: Vec::new(),
            dependent_invariant: None,
        }
    }

    pub fn new_variables(&self) -> Vec<Symbol> {
        self.new_independents.iter().map(|(s, _)| s.clone()).collect()
    }

    /// True if some maximal minor of `∂(new)/∂(old)` is nonzero.
    pub fn full_rank(&self) -> bool {
        let rows: Vec<Vec<Expr>> = self
            .new_independents
            .iter()
            .map(|(_, e)| self.old_independents.iter().map(|o| e.diff_sym(o)).collect())
            .collect();
        let k = rows.len();
        let m = self.old_independents.len();
        if k > m {
            return false;
        }
        combinations(m, k).into_iter().any(|cols| {
            let minor: Vec<Vec<Expr>> = rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect();
            !determinant(&minor).is_zero()
        })
    }

    /// Old variables that are not also new variables.
    fn eliminated(&self) -> Vec<Symbol> {
        let new = self.new_variables();
        self.old_independents
            .iter()
            .filter(|o| !new.contains(o))
            .cloned()
            .collect()
    }

    /// Total derivative along an old variable of an expression in old
    /// variables and jets of the new dependent.
    fn chain(&self, e: &Expr, o: &Symbol) -> Expr {
        let mut out = e.diff_sym(o);
        for j in e.jet_vars() {
            if j.dependent != self.new_dependent {
                continue;
            }
            let de = e.diff(&Atom::Jet(j.clone()));
            let mut inner = Expr::zero();
            for (s, expr) in &self.new_independents {
                let ds = expr.diff_sym(o);
                if !ds.is_zero() {
                    inner += &Expr::atom(Atom::Jet(j.derive(s))) * &ds;
                }
            }
            out += &de * &inner;
        }
        out
    }

    fn jet_images(&self, indices: impl IntoIterator<Item = MultiIndex>) -> Substitution {
        let mut memo: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        memo.insert(MultiIndex::empty(), self.rule.clone());
        let mut map = Substitution::new();
        for idx in indices {
            let img = self.image(&idx, &mut memo);
            map.insert(Atom::jet(&self.old_dependent, idx), img);
        }
        map
    }

    fn image(&self, idx: &MultiIndex, memo: &mut BTreeMap<MultiIndex, Expr>) -> Expr {
        if let Some(e) = memo.get(idx) {
            return e.clone();
        }
        let last = idx.vars().pop().expect("non-empty index");
        let prev = idx.without(&last).expect("index contains its own variable");
        let base = self.image(&prev, memo);
        let e = self.chain(&base, &last);
        memo.insert(idx.clone(), e.clone());
        e
    }
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..m {
        for mut rest in combinations(m, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
    }
    out
}

fn determinant(m: &[Vec<Expr>]) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<Expr>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][c] * &determinant(&minor);
                if c % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

fn mentions(e: &Expr, vars: &[Symbol]) -> Option<Symbol> {
    vars.iter().find(|v| e.contains_symbol(v)).cloned()
}

/// Pulls `pde` back under `a`: every jet of the old dependent is rewritten
/// through the chain rule, old variables are cleared with the hints, and an
/// overall monomial factor in the eliminated variables is cancelled. The
/// result is scaled so its highest derivative has rational coefficient one.
pub fn pullback(pde: &Pde, a: &Ansatz) -> Result<ReducedEquation, ReductionError> {
    let lhs = pde.lhs();
    let indices: Vec<MultiIndex> = lhs
        .jet_vars()
        .into_iter()
        .filter(|j| j.dependent == a.old_dependent)
        .map(|j| j.index)
        .collect();
    let map = a.jet_images(indices);
    let mut e = lhs.substitute_all(&map)?;
    if !a.hints.is_empty() {
        let hints: Substitution = a.hints.iter().map(|(s, x)| (Atom::Sym(s.clone()), x.clone())).collect();
        e = e.substitute_all(&hints)?;
    }
    let old = a.eliminated();
    if let Some((m, _)) = e.terms().first() {
        let (factor, _) = m.split(|atom| old.iter().any(|o| atom.depends_on(&Atom::Sym(o.clone()))));
        if !factor.is_one() {
            e = e.div(&factor.to_expr())?;
        }
    }
    if let Some(var) = mentions(&e, &old) {
        return Err(ReductionError::ResidualOldVariable {
            var: var.name().to_string(),
            expr: e.to_string(),
        });
    }
    let e = scale_leading(&e, &a.new_dependent);
    Ok(ReducedEquation::new(e, a.new_variables(), a.new_dependent.clone()))
}

/// Scales `e` so the rational coefficient on its highest jet is one.
pub(crate) fn scale_leading(e: &Expr, dep: &Symbol) -> Expr {
    let order = jet_order(e, dep);
    let lead = e
        .jet_vars()
        .into_iter()
        .filter(|j| &j.dependent == dep && j.order() == order)
        .max_by(|x, y| x.index.cmp(&y.index));
    let Some(lead) = lead else { return e.clone() };
    let atom = Atom::Jet(lead);
    let c = e
        .terms()
        .iter()
        .find(|(m, _)| m.depends_on(&atom))
        .map(|(_, c)| c.clone());
    match c {
        Some(c) => e.scale(&c.recip()),
        None => e.clone(),
    }
}

fn is_constant(e: &Expr) -> bool {
    e.atoms().iter().all(|a| match a {
        Atom::Const(_) => true,
        Atom::Sym(s) => s.kind() == SymbolKind::Parameter,
        Atom::Exp(x) | Atom::Tanh(x) => is_constant(x),
        Atom::Jet(_) | Atom::Func(_) => false,
    })
}

#[derive(Clone, Debug)]
enum Shape {
    Fixed,
    Translation(Expr),
    Scaling(Expr, Expr),
}

fn shape(coeff: &Expr, var: &Atom) -> Result<Shape, ReductionError> {
    let b = coeff.diff(var);
    let a = coeff - &(&b * &Expr::atom(var.clone()));
    if !is_constant(&a) || !is_constant(&b) {
        return Err(ReductionError::Unsupported(format!(
            "coefficient {coeff} is not affine and diagonal"
        )));
    }
    Ok(if b.is_zero() {
        if a.is_zero() {
            Shape::Fixed
        } else {
            Shape::Translation(a)
        }
    } else {
        Shape::Scaling(a, b)
    })
}

fn ratio_exponent(num: &Expr, den: &Expr) -> Result<Exponent, ReductionError> {
    let r = num
        .div(den)
        .map_err(|_| ReductionError::Unsupported(format!("ratio {num} / {den}")))?;
    Exponent::from_expr(&r).map_err(|_| ReductionError::Unsupported(format!("exponent {r}")))
}

/// Zeroth-order invariants of a generator whose coefficients are
/// `a + b z` in their own variable `z` with constant `a`, `b`. The first
/// translated independent variable (otherwise the first scaled one) is the
/// reference that gets eliminated; each other moving variable consumes a
/// name from `new_names`, and fixed variables are kept.
pub fn invariants_for(
    field: &VectorField,
    independents: &[Symbol],
    new_names: &[Symbol],
    new_dependent: &Symbol,
) -> Result<Ansatz, ReductionError> {
    let dep = field.dependent().clone();
    let mut shapes = Vec::new();
    for s in independents {
        shapes.push((s.clone(), shape(&field.xi(s), &Atom::Sym(s.clone()))?));
    }
    for s in field.xi_map().keys() {
        if !independents.contains(s) {
            return Err(ReductionError::Unsupported(format!(
                "field moves undeclared variable {}",
                s.name()
            )));
        }
    }
    let dep_shape = shape(field.eta(), &Atom::sym(&dep))?;

    let reference = shapes
        .iter()
        .find(|(_, sh)| matches!(sh, Shape::Translation(_)))
        .or_else(|| shapes.iter().find(|(_, sh)| matches!(sh, Shape::Scaling(..))))
        .cloned()
        .ok_or_else(|| ReductionError::Unsupported("field does not move any independent variable".into()))?;
    let (r, rshape) = reference;
    let zr = Expr::sym(&r);

    // Invariant of a moving variable z with shape sh, as (invariant, z in
    // terms of the new symbol w).
    let invariant = |z: &Expr, sh: &Shape, w: &Expr| -> Result<(Expr, Expr), ReductionError> {
        match (&rshape, sh) {
            (_, Shape::Fixed) => Ok((z.clone(), w.clone())),
            (Shape::Translation(ar), Shape::Translation(a)) => {
                let k = a.div(ar)?;
                Ok((z - &(&k * &zr), w + &(&k * &zr)))
            }
            (Shape::Translation(ar), Shape::Scaling(a, b)) => {
                let shift = a.div(b)?;
                let rate = &b.div(ar)? * &zr;
                Ok((
                    &(z + &shift) * &Expr::exp(-rate.clone()),
                    &(w * &Expr::exp(rate)) - &shift,
                ))
            }
            (Shape::Scaling(ar, br), Shape::Scaling(a, b)) => {
                let base = &zr + &ar.div(br)?;
                let p = ratio_exponent(b, br)?;
                let shift = a.div(b)?;
                let unsupported = |_| ReductionError::Unsupported(format!("power of {base}"));
                Ok((
                    &(z + &shift) * &base.pow(-p).map_err(unsupported)?,
                    &(w * &base.pow(p).map_err(unsupported)?) - &shift,
                ))
            }
            (Shape::Scaling(..), Shape::Translation(_)) => Err(ReductionError::Unsupported(
                "translation alongside a scaling reference".into(),
            )),
            (Shape::Fixed, _) => unreachable!("reference always moves"),
        }
    };

    let mut names = new_names.iter();
    let mut new_independents = Vec::new();
    let mut hints = Vec::new();
    for (s, sh) in &shapes {
        if *s == r {
            continue;
        }
        if let Shape::Fixed = sh {
            new_independents.push((s.clone(), Expr::sym(s)));
            continue;
        }
        let w = names
            .next()
            .ok_or_else(|| ReductionError::Unsupported("not enough names for the invariants".into()))?;
        let (inv, back) = invariant(&Expr::sym(s), sh, &Expr::sym(w))?;
        new_independents.push((w.clone(), inv));
        hints.push((s.clone(), back));
    }
    let (dep_inv, rule) = invariant(&Expr::sym(&dep), &dep_shape, &Expr::sym(new_dependent))?;
    let mut a = Ansatz::new(
        &format!("invariants of {}", field.name),
        independents.to_vec(),
        dep,
        new_independents,
        new_dependent.clone(),
        rule,
        hints,
    )?;
    a.dependent_invariant = Some(dep_inv);
    Ok(a)
}
