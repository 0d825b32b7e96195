use std::collections::{BTreeMap, BTreeSet};

use super::{LieError, VectorField};
use crate::expr::{Atom, Expr, MultiIndex, Symbol};
use crate::jet::{on_manifold, total_derivative, Pde};

/// A generator extended to jet space: `eta_ext[J]` is the coefficient of
/// `∂/∂u_J`.
#[derive(Clone, Debug)]
pub struct ProlongedField {
    pub base: VectorField,
    pub independents: Vec<Symbol>,
    pub order: u32,
    pub eta_ext: BTreeMap<MultiIndex, Expr>,
}

/// Default decomposition: peel off the largest variable of the index.
fn last_var(idx: &MultiIndex) -> Symbol {
    idx.entries().last().expect("nonempty index").0.clone()
}

struct Prolonger<'a, F: Fn(&MultiIndex) -> Symbol> {
    field: &'a VectorField,
    independents: &'a [Symbol],
    pick: F,
    /// D_i ξ^j, keyed by (i, j).
    dxi: BTreeMap<(Symbol, Symbol), Expr>,
    memo: BTreeMap<MultiIndex, Expr>,
}

impl<F: Fn(&MultiIndex) -> Symbol> Prolonger<'_, F> {
    fn dxi(&mut self, i: &Symbol, j: &Symbol) -> Expr {
        let key = (i.clone(), j.clone());
        if let Some(e) = self.dxi.get(&key) {
            return e.clone();
        }
        let e = total_derivative(&self.field.xi(j), i);
        self.dxi.insert(key, e.clone());
        e
    }

    /// η^[J] = D_i η^[J-i] - Σ_j u_{(J-i)+j} D_i ξ^j
    fn eta(&mut self, idx: &MultiIndex) -> Expr {
        if idx.is_empty() {
            return self.field.eta().clone();
        }
        if let Some(e) = self.memo.get(idx) {
            return e.clone();
        }
        let i = (self.pick)(idx);
        let lower = idx.without(&i).expect("picked variable is in the index");
        let prev = self.eta(&lower);
        let mut out = total_derivative(&prev, &i);
        let dep = self.field.dependent().clone();
        for j in self.independents {
            let d = self.dxi(&i, j);
            if d.is_zero() {
                continue;
            }
            let ujet = Expr::atom(Atom::jet(&dep, lower.with(j)));
            out = out - &ujet * &d;
        }
        self.memo.insert(idx.clone(), out.clone());
        out
    }
}

/// Prolongs `field` to all multi-indices of order `1..=order` over
/// `independents`.
pub fn prolong(field: &VectorField, independents: &[Symbol], order: u32) -> Result<ProlongedField, LieError> {
    prolong_with(field, independents, order, last_var)
}

/// Like [`prolong`], choosing which variable to peel off each index with
/// `pick`. Every choice gives the same coefficients.
pub fn prolong_with(
    field: &VectorField,
    independents: &[Symbol],
    order: u32,
    pick: impl Fn(&MultiIndex) -> Symbol,
) -> Result<ProlongedField, LieError> {
    if order > 3 {
        return Err(LieError::OrderTooHigh(order));
    }
    let needed: BTreeSet<MultiIndex> = MultiIndex::all_up_to(independents, order).into_iter().collect();
    let eta_ext = prolong_indices(field, independents, &needed, pick);
    Ok(ProlongedField {
        base: field.clone(),
        independents: independents.to_vec(),
        order,
        eta_ext,
    })
}

fn prolong_indices(
    field: &VectorField,
    independents: &[Symbol],
    needed: &BTreeSet<MultiIndex>,
    pick: impl Fn(&MultiIndex) -> Symbol,
) -> BTreeMap<MultiIndex, Expr> {
    let mut p = Prolonger {
        field,
        independents,
        pick,
        dxi: BTreeMap::new(),
        memo: BTreeMap::new(),
    };
    needed.iter().map(|idx| (idx.clone(), p.eta(idx))).collect()
}

/// `X^[n](e) = η ∂_u e + Σ ξ^i ∂_i e + Σ_J η^[J] ∂e/∂u_J`.
pub fn apply(px: &ProlongedField, e: &Expr) -> Result<Expr, LieError> {
    let dep = px.base.dependent();
    let mut out = px.base.act(e);
    for j in e.jet_vars() {
        if &j.dependent != dep || j.index.is_empty() {
            continue;
        }
        let coeff = px.eta_ext.get(&j.index).ok_or(LieError::OrderExceeded {
            found: j.order(),
            order: px.order,
        })?;
        if coeff.is_zero() {
            continue;
        }
        out += coeff * &e.diff(&Atom::Jet(j));
    }
    Ok(out)
}

/// Symmetry residual of `field` for `pde`: the prolonged field applied to
/// the equation, restricted to the solution manifold. Zero iff `field`
/// generates a point symmetry.
pub fn check_symmetry(field: &VectorField, pde: &Pde) -> Result<Expr, LieError> {
    let needed: BTreeSet<MultiIndex> = pde
        .lhs()
        .jet_vars()
        .into_iter()
        .filter(|j| j.dependent == *pde.dependent() && !j.index.is_empty())
        .map(|j| j.index)
        .collect();
    let order = needed.iter().map(MultiIndex::order).max().unwrap_or(0);
    if order > 3 {
        return Err(LieError::OrderTooHigh(order));
    }
    let eta_ext = prolong_indices(field, pde.independents(), &needed, last_var);
    let px = ProlongedField {
        base: field.clone(),
        independents: pde.independents().to_vec(),
        order,
        eta_ext,
    };
    let applied = apply(&px, pde.lhs())?;
    Ok(on_manifold(&applied, pde)?)
}
