//! Exact linear algebra helpers.
//!
//! - [`SpanBasis`]: an incrementally built reduced basis for the span of
//!   sparse vectors over `Q(q)`, used for straightening and rank checks.
//!   Pivots are chosen as the lowest-complexity nonzero entry (fewest
//!   polynomial terms) to limit coefficient growth.
//! - [`solve_integer`]: integer solutions of `M x = b` via diagonalization
//!   with unimodular row/column operations.
//! - [`solve_gf2`]: elimination over the two-element field.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::scalar::QScalar;

/// A sparse vector over `Q(q)` with ordered keys.
pub type SparseVec<K> = BTreeMap<K, QScalar>;

fn scaled_sub<K: Ord + Clone>(target: &mut SparseVec<K>, factor: &QScalar, other: &SparseVec<K>) {
    if factor.is_zero() {
        return;
    }
    for (k, v) in other {
        let delta = factor * v;
        match target.entry(k.clone()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                let neg = -&delta;
                if !neg.is_zero() {
                    e.insert(neg);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let next = e.get() - &delta;
                if next.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = next;
                }
            }
        }
    }
}

struct BasisRow<K> {
    pivot: K,
    vec: SparseVec<K>,
    /// Expansion of `vec` over the originally inserted vectors, by index.
    rep: BTreeMap<usize, QScalar>,
}

/// Outcome of inserting a vector into a [`SpanBasis`].
pub enum InsertOutcome {
    /// The vector was independent of the basis so far.
    Independent,
    /// The vector already lies in the span; the coordinates over previously
    /// inserted vectors are returned.
    Dependent(BTreeMap<usize, QScalar>),
}

/// Reduced spanning basis with coordinate tracking over the inserted vectors.
#[derive(Default)]
pub struct SpanBasis<K: Ord + Clone> {
    rows: Vec<BasisRow<K>>,
    inserted: usize,
}

impl<K: Ord + Clone> SpanBasis<K> {
    pub fn new() -> Self {
        SpanBasis {
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce `v` against the basis. Returns the residue together with the
    /// coordinates such that `v = residue + sum coords[i] * inserted[i]`.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, BTreeMap<usize, QScalar>) {
        let mut residue = v.clone();
        let mut coords: BTreeMap<usize, QScalar> = BTreeMap::new();
        for row in &self.rows {
            let Some(c) = residue.get(&row.pivot) else {
                continue;
            };
            let factor = c
                .checked_div(&row.vec[&row.pivot])
                .expect("basis pivot entries are nonzero");
            scaled_sub(&mut residue, &factor, &row.vec);
            for (i, r) in &row.rep {
                let add = &factor * r;
                let entry = coords.entry(*i).or_insert_with(QScalar::zero);
                *entry = &*entry + &add;
                if entry.is_zero() {
                    coords.remove(i);
                }
            }
        }
        (residue, coords)
    }

    /// Insert a vector, extending the basis when it is independent.
    pub fn insert(&mut self, v: SparseVec<K>) -> InsertOutcome {
        let index = self.inserted;
        self.inserted += 1;
        let (residue, coords) = self.reduce(&v);
        if residue.is_empty() {
            return InsertOutcome::Dependent(coords);
        }
        // Pivot on the lowest-complexity entry of the residue.
        let pivot = residue
            .iter()
            .min_by_key(|(_, c)| c.complexity())
            .map(|(k, _)| k.clone())
            .expect("nonempty residue");
        let mut rep: BTreeMap<usize, QScalar> = BTreeMap::new();
        rep.insert(index, QScalar::one());
        for (i, c) in coords {
            let neg = -&c;
            if !neg.is_zero() {
                rep.insert(i, neg);
            }
        }
        // Back-eliminate the new pivot from existing rows to keep the basis
        // reduced.
        let pivot_val = residue[&pivot].clone();
        for row in &mut self.rows {
            let Some(c) = row.vec.get(&pivot) else {
                continue;
            };
            let factor = c.checked_div(&pivot_val).expect("pivot entry nonzero");
            scaled_sub(&mut row.vec, &factor, &residue);
            let mut rep_delta: BTreeMap<usize, QScalar> = BTreeMap::new();
            for (i, r) in &rep {
                rep_delta.insert(*i, &factor * r);
            }
            for (i, d) in rep_delta {
                let entry = row.rep.entry(i).or_insert_with(QScalar::zero);
                *entry = &*entry - &d;
                if entry.is_zero() {
                    row.rep.remove(&i);
                }
            }
        }
        self.rows.push(BasisRow {
            pivot,
            vec: residue,
            rep,
        });
        InsertOutcome::Independent
    }
}

/// Solve `M x = b` over the integers. `m` is given row-major with `rows x
/// cols` entries. Returns `None` when no integer solution exists.
// Index loops mirror the simultaneous row/column updates of the
// diagonalization; iterator forms fight the borrow checker here.
#[allow(clippy::needless_range_loop)]
pub fn solve_integer(m: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = m.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut rhs: Vec<BigInt> = b.to_vec();
    // Column operations are accumulated in v so that x = v * y.
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if i == j {
                        BigInt::from(1)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();

    let mut r = 0usize;
    let mut c = 0usize;
    while r < rows && c < cols {
        // Find the nonzero entry of smallest magnitude in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in r..rows {
            for j in c..cols {
                if !a[i][j].is_zero()
                    && best
                        .map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                        .unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(r, pi);
        rhs.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(c, pj);
        }
        v.swap(c, pj);

        let mut again = false;
        // Clear the pivot column with row operations.
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let qv = a[i][c].div_floor(&a[r][c]);
            if !qv.is_zero() {
                for j in 0..cols {
                    let t = &qv * &a[r][j];
                    a[i][j] -= t;
                }
                let t = &qv * &rhs[r];
                rhs[i] -= t;
            }
            if !a[i][c].is_zero() {
                again = true;
            }
        }
        // Clear the pivot row with column operations (tracked in v).
        for j in 0..cols {
            if j == c || a[r][j].is_zero() {
                continue;
            }
            let qv = a[r][j].div_floor(&a[r][c]);
            if !qv.is_zero() {
                for i in 0..rows {
                    let t = &qv * &a[i][c];
                    a[i][j] -= t;
                }
                for i in 0..cols {
                    let t = &qv * &v[i][c];
                    v[i][j] -= t;
                }
            }
            if !a[r][j].is_zero() {
                again = true;
            }
        }
        if again {
            continue; // Smaller remainders appeared; repeat on this block.
        }
        r += 1;
        c += 1;
    }

    // a is now diagonal on the processed block; solve D y = rhs.
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let diag = if i < cols {
            a[i][i].clone()
        } else {
            BigInt::zero()
        };
        if diag.is_zero() {
            if !rhs[i].is_zero() {
                return None;
            }
            continue;
        }
        let (qv, rem) = rhs[i].div_rem(&diag);
        if !rem.is_zero() {
            return None;
        }
        y[i] = qv;
    }
    // x = v * y.
    let x = (0..cols)
        .map(|i| (0..cols).map(|j| &v[i][j] * &y[j]).sum())
        .collect();
    Some(x)
}

/// Solve `M x = b` over GF(2). Returns `None` when inconsistent.
pub fn solve_gf2(m: &[Vec<bool>], b: &[bool]) -> Option<Vec<bool>> {
    let rows = m.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<bool>> = m.to_vec();
    let mut rhs = b.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c]) else {
            continue;
        };
        a.swap(r, p);
        rhs.swap(r, p);
        for i in 0..rows {
            if i != r && a[i][c] {
                let pivot_row = a[r].clone();
                for (entry, pv) in a[i].iter_mut().zip(&pivot_row) {
                    *entry ^= pv;
                }
                rhs[i] ^= rhs[r];
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    if rhs[r..rows].iter().any(|&b| b) {
        return None;
    }
    let mut x = vec![false; cols];
    for c in 0..cols {
        if let Some(p) = pivot_of_col[c] {
            x[c] = rhs[p];
        }
    }
    Some(x)
}
