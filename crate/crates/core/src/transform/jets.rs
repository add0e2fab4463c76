//! Jet substitution tables: how derivatives of the unknown rewrite under a
//! rational change of the independent variables.
//!
//! For the inverse table (the one used to transform equations), the order-1
//! block solves the transposed-Jacobian system and higher orders follow by
//! differentiating rows and solving again with the same matrix. The forward
//! table expresses the new-variable jets in the old ones by the chain rule
//! alone (entries polynomial in the derivatives of the substitution); the
//! two tables compose to the identity.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::TransformError;
use crate::kernel::{RatFunc, VarId, VarRegistry};
use crate::tower::{jacobian, ratfunc_determinant};

/// Linear combination of jets: sorted multi-index -> coefficient.
pub type JetRow = BTreeMap<Vec<usize>, RatFunc>;

/// Table of jet rewrites up to a derivation order.
#[derive(Debug, Clone)]
pub struct JetTable {
    pub n: usize,
    pub order: usize,
    rows: BTreeMap<Vec<usize>, JetRow>,
}

impl JetTable {
    pub fn row(&self, multi_index: &[usize]) -> Option<&JetRow> {
        self.rows.get(multi_index)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Vec<usize>, &JetRow)> {
        self.rows.iter()
    }
}

/// All sorted multi-indices over `n` variables with length `k`.
fn indices_of_order(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let prev = indices_of_order(n, k - 1);
    for p in prev {
        let lo = p.last().copied().unwrap_or(0);
        for i in lo..n {
            let mut q = p.clone();
            q.push(i);
            out.push(q);
        }
    }
    out
}

fn d_dz(row: &JetRow, j: usize, z: VarId) -> JetRow {
    let mut out: JetRow = BTreeMap::new();
    for (idx, c) in row {
        // product rule: c' * jet + c * d(jet)/dz_j (symbolically: jet index
        // gains a j)
        let dc = c.derivative(z);
        if !dc.is_zero() {
            add_into(&mut out, idx.clone(), dc);
        }
        let mut bumped = idx.clone();
        bumped.push(j);
        bumped.sort_unstable();
        add_into(&mut out, bumped, c.clone());
    }
    out
}

fn add_into(row: &mut JetRow, idx: Vec<usize>, c: RatFunc) {
    use std::collections::btree_map::Entry;
    match row.entry(idx) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().add(&c);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// Inverse of a small matrix of rational functions (adjugate / determinant).
fn invert_matrix(m: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>, TransformError> {
    let n = m.len();
    let det = ratfunc_determinant(m);
    if det.is_zero() {
        return Err(TransformError::SingularJacobian);
    }
    let mut inv = vec![vec![RatFunc::zero(m[0][0].registry()); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            // cofactor C_ji / det
            let minor: Vec<Vec<RatFunc>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, mr)| {
                    mr.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != i)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let mdet = if minor.is_empty() {
                RatFunc::one(m[0][0].registry())
            } else {
                ratfunc_determinant(&minor)
            };
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let cof = if sign > 0 { mdet } else { mdet.neg() };
            *cell = cof.div(&det);
        }
    }
    Ok(inv)
}

/// Table rewriting old-variable jets as combinations of new-variable jets:
/// the transformation applied to equations. For one variable this is the
/// classic lower-triangular scheme with diagonal (1/r')^k.
pub fn inverse_jet_table(
    r: &[RatFunc],
    z_vars: &[VarId],
    order: usize,
) -> Result<JetTable, TransformError> {
    let n = z_vars.len();
    assert_eq!(r.len(), n);
    let reg: &Arc<VarRegistry> = r[0].registry();
    let jac = jacobian(r, z_vars);
    // transposed Jacobian, inverted once
    let jt: Vec<Vec<RatFunc>> = (0..n)
        .map(|j| (0..n).map(|i| jac[i][j].clone()).collect())
        .collect();
    let jt_inv = invert_matrix(&jt)?;

    let mut rows: BTreeMap<Vec<usize>, JetRow> = BTreeMap::new();
    let mut base: JetRow = BTreeMap::new();
    base.insert(vec![], RatFunc::one(reg));
    rows.insert(vec![], base);

    for k in 0..order {
        for parent in indices_of_order(n, k) {
            let parent_row = rows.get(&parent).cloned().ok_or_else(|| {
                TransformError::InvalidParametrization("missing jet row".into())
            })?;
            // rhs_j = d/dz_j(parent row)
            let rhs: Vec<JetRow> = (0..n).map(|j| d_dz(&parent_row, j, z_vars[j])).collect();
            // children_i = sum_j jt_inv[i][j] * rhs_j
            for i in 0..n {
                let mut child = parent.clone();
                child.push(i);
                child.sort_unstable();
                if rows.contains_key(&child) {
                    continue;
                }
                let mut row: JetRow = BTreeMap::new();
                for (j, rj) in rhs.iter().enumerate() {
                    let w = &jt_inv[i][j];
                    if w.is_zero() {
                        continue;
                    }
                    for (idx, c) in rj {
                        add_into(&mut row, idx.clone(), w.mul(c));
                    }
                }
                rows.insert(child, row);
            }
        }
    }
    Ok(JetTable {
        n,
        order,
        rows,
    })
}

/// Table expressing new-variable jets in old-variable jets by direct chain
/// rule; entries are polynomials in the derivatives of the substitution.
pub fn forward_jet_table(
    r: &[RatFunc],
    z_vars: &[VarId],
    order: usize,
) -> Result<JetTable, TransformError> {
    let n = z_vars.len();
    let reg: &Arc<VarRegistry> = r[0].registry();
    let jac = jacobian(r, z_vars);
    let mut rows: BTreeMap<Vec<usize>, JetRow> = BTreeMap::new();
    let mut base: JetRow = BTreeMap::new();
    base.insert(vec![], RatFunc::one(reg));
    rows.insert(vec![], base);
    for k in 0..order {
        for parent in indices_of_order(n, k) {
            let parent_row = rows.get(&parent).cloned().unwrap();
            for j in 0..n {
                let mut child = parent.clone();
                child.push(j);
                child.sort_unstable();
                if rows.contains_key(&child) {
                    continue;
                }
                // d/dz_j of sum_I c_I y_I(r): c_I' y_I + c_I sum_i J[i][j] y_{I+i}
                let mut row: JetRow = BTreeMap::new();
                for (idx, c) in &parent_row {
                    let dc = c.derivative(z_vars[j]);
                    if !dc.is_zero() {
                        add_into(&mut row, idx.clone(), dc);
                    }
                    for (i, jrow) in jac.iter().enumerate() {
                        let w = &jrow[j];
                        if w.is_zero() {
                            continue;
                        }
                        let mut bumped = idx.clone();
                        bumped.push(i);
                        bumped.sort_unstable();
                        add_into(&mut row, bumped, c.mul(w));
                    }
                }
                rows.insert(child, row);
            }
        }
    }
    Ok(JetTable {
        n,
        order,
        rows,
    })
}

/// Symbolic composition: rewrites every old jet through `inverse` and then
/// `forward`; the result must be the identity map on jets.
pub fn compose_is_identity(forward: &JetTable, inverse: &JetTable) -> bool {
    // forward rows: z-jet K = sum_I m_{K,I} x-jet I
    // inverse rows: x-jet I = sum_K n_{I,K} z-jet K
    // check: substituting inverse into forward returns exactly z-jet K
    for (kidx, frow) in forward.rows() {
        let mut acc: JetRow = BTreeMap::new();
        for (iidx, m) in frow {
            let irow = match inverse.row(iidx) {
                Some(r) => r,
                None => return false,
            };
            for (zidx, c) in irow {
                add_into(&mut acc, zidx.clone(), m.mul(c));
            }
        }
        // expect exactly {kidx: 1}
        let entries: Vec<_> = acc.iter().filter(|(_, c)| !c.is_zero()).collect();
        if entries.len() != 1 {
            return false;
        }
        let (idx, c) = entries[0];
        if idx != kidx || !c.is_one() {
            return false;
        }
    }
    true
}
