//! Quantum matrices `O_q(M(m,n))`: PBW monomials, the straightening product,
//! quantum determinants, quantum minors and the transpose isomorphism.
//!
//! Elements are stored on the PBW basis given by products of the generators
//! `x[i,j]` in lexicographic `(i,j)` order. Multiplication rewrites words to
//! this normal form using the defining relations; `MatrixAlgebra` carries the
//! shape together with a precomputed table of the pairwise rewrite rules.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};

use crate::scalar::QScalar;
use crate::{Error, Result};

/// Shape of a quantum matrix algebra: `m` rows, `n` columns.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct AlgebraShape {
    pub m: usize,
    pub n: usize,
}

impl AlgebraShape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidShape(format!(
                "matrix shape needs m, n >= 1, got {m}x{n}"
            )));
        }
        Ok(AlgebraShape { m, n })
    }

    pub fn num_generators(&self) -> usize {
        self.m * self.n
    }
}

/// A generator `x[row, col]`, 1-indexed on both coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GenIndex {
    pub row: usize,
    pub col: usize,
}

impl GenIndex {
    pub fn new(row: usize, col: usize) -> Self {
        GenIndex { row, col }
    }

    pub fn check(&self, shape: &AlgebraShape) -> Result<()> {
        if self.row == 0 || self.row > shape.m || self.col == 0 || self.col > shape.n {
            return Err(Error::GeneratorOutOfBounds {
                row: self.row,
                col: self.col,
                m: shape.m,
                n: shape.n,
            });
        }
        Ok(())
    }

    fn flat(&self, shape: &AlgebraShape) -> usize {
        (self.row - 1) * shape.n + (self.col - 1)
    }

    fn from_flat(flat: usize, shape: &AlgebraShape) -> Self {
        GenIndex {
            row: flat / shape.n + 1,
            col: flat % shape.n + 1,
        }
    }
}

/// A PBW basis monomial: the exponent vector over all generators in
/// lexicographic `(row, col)` order. The derived `Ord` is the lexicographic
/// order on exponent vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PbwMonomial {
    exps: Vec<u32>,
}

impl PbwMonomial {
    pub fn unit(shape: &AlgebraShape) -> Self {
        PbwMonomial {
            exps: vec![0; shape.num_generators()],
        }
    }

    pub fn from_sorted_word(word: &[GenIndex], shape: &AlgebraShape) -> Self {
        let mut exps = vec![0u32; shape.num_generators()];
        for g in word {
            exps[g.flat(shape)] += 1;
        }
        PbwMonomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn width(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Expand back into the nondecreasing word of generators.
    pub fn word(&self, shape: &AlgebraShape) -> Vec<GenIndex> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for (flat, &e) in self.exps.iter().enumerate() {
            for _ in 0..e {
                out.push(GenIndex::from_flat(flat, shape));
            }
        }
        out
    }

    /// Letters with multiplicities, in lexicographic order.
    pub fn letters(&self, shape: &AlgebraShape) -> Vec<(GenIndex, u32)> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(flat, &e)| (GenIndex::from_flat(flat, shape), e))
            .collect()
    }
}

/// An element of `O_q(M(m,n))`: a finite coefficient table on PBW monomials.
/// No zero coefficients are stored, so equality of elements is equality of
/// tables.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NcPoly {
    terms: BTreeMap<PbwMonomial, QScalar>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &QScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &PbwMonomial) -> QScalar {
        self.terms.get(mono).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn from_term(mono: PbwMonomial, coeff: QScalar) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(mono, coeff);
        p
    }

    pub fn add_term(&mut self, mono: PbwMonomial, coeff: QScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scaled(&self, c: &QScalar) -> Self {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Total degree of the highest term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn into_table(self) -> BTreeMap<PbwMonomial, QScalar> {
        self.terms
    }

    /// Golden-format rendering, e.g. `x[1,1]*x[2,2] - q*x[1,2]*x[2,1]`.
    /// Terms are listed by descending PBW monomial in the lexicographic
    /// exponent order.
    pub fn render(&self, shape: &AlgebraShape) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let mono_str = render_pbw(mono, shape);
            push_term(&mut out, i == 0, coeff, mono_str.as_deref(), false);
        }
        out
    }
}

fn render_pbw(mono: &PbwMonomial, shape: &AlgebraShape) -> Option<String> {
    if mono.is_unit() {
        return None;
    }
    let mut s = String::new();
    for (i, (g, e)) in mono.letters(shape).into_iter().enumerate() {
        if i > 0 {
            s.push('*');
        }
        let _ = write!(s, "x[{},{}]", g.row, g.col);
        if e > 1 {
            let _ = write!(s, "^{e}");
        }
    }
    Some(s)
}

/// Shared term renderer: writes `coeff*mono` with sign folded into the
/// separators; `spaced_star` switches to the `coeff * mono` style used for
/// localized elements. `mono` of `None` means the empty monomial.
pub(crate) fn push_term(
    out: &mut String,
    first: bool,
    coeff: &QScalar,
    mono: Option<&str>,
    spaced_star: bool,
) {
    let (neg, mag) = coefficient_magnitude(coeff);
    if first {
        if neg {
            out.push('-');
        }
    } else if neg {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    match mono {
        None => out.push_str(&mag),
        Some(m) => {
            if mag == "1" {
                out.push_str(m);
            } else {
                out.push_str(&mag);
                out.push_str(if spaced_star { " * " } else { "*" });
                out.push_str(m);
            }
        }
    }
}

/// Split a scalar into a display sign and a positive magnitude string that
/// can safely be juxtaposed with `*`.
fn coefficient_magnitude(coeff: &QScalar) -> (bool, String) {
    use num_traits::Signed;
    if let Some((c, e)) = coeff.as_laurent_monomial() {
        let neg = c.is_negative();
        let abs = c.abs();
        let q_part = match e {
            0 => None,
            1 => Some("q".to_string()),
            _ => Some(format!("q^{e}")),
        };
        let s = match (abs == 1u32.into(), q_part) {
            (true, None) => "1".to_string(),
            (true, Some(qp)) => qp,
            (false, None) => abs.to_string(),
            (false, Some(qp)) => format!("{abs}*{qp}"),
        };
        return (neg, s);
    }
    // General fractions render parenthesized so products stay unambiguous.
    let neg = coeff
        .num()
        .leading()
        .is_some_and(num_traits::Signed::is_negative);
    let pos = if neg { -coeff } else { coeff.clone() };
    if pos.den() == &crate::scalar::ZPoly::one() {
        (neg, format!("({})", pos.num().render(true)))
    } else {
        (neg, pos.render_human())
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;

    fn add(self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;

    fn sub(self, other: &NcPoly) -> NcPoly {
        self + &-other
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;

    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// Whether the defining relations carry the standard constants or the
/// deliberately corrupted ones used by the harness self-test.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum RelationMode {
    #[default]
    Standard,
    /// Replaces the correction constant `q - q^-1` of the diagonal relation
    /// with `q^2 - q^-1`. Normal forms stay well defined (the rewriting still
    /// terminates) but the rule set is no longer consistent, so confluence,
    /// centrality and commutation checks must fail.
    PerturbedDiagonal,
}

/// How an out-of-order adjacent pair of generators rewrites.
#[derive(Clone, Debug)]
enum PairRule {
    /// Already nondecreasing; nothing to do.
    InOrder,
    /// `a*b = coeff * (b*a)`.
    Swap { coeff: QScalar },
    /// `a*b = b*a + extra_coeff * (e1*e2)` with `e1 <= e2` already ordered.
    SwapCorrect {
        extra: (GenIndex, GenIndex),
        extra_coeff: QScalar,
    },
}

/// A quantum matrix algebra: the shape plus the precomputed pairwise rewrite
/// rules. All operations are pure; the algebra value is freely shareable.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    shape: AlgebraShape,
    mode: RelationMode,
    rules: Vec<PairRule>,
}

impl MatrixAlgebra {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        MatrixAlgebra::with_mode(m, n, RelationMode::Standard)
    }

    pub fn with_mode(m: usize, n: usize, mode: RelationMode) -> Result<Self> {
        let shape = AlgebraShape::new(m, n)?;
        let g = shape.num_generators();
        let mut rules = Vec::with_capacity(g * g);
        for a_flat in 0..g {
            for b_flat in 0..g {
                let a = GenIndex::from_flat(a_flat, &shape);
                let b = GenIndex::from_flat(b_flat, &shape);
                rules.push(make_rule(a, b, mode));
            }
        }
        Ok(MatrixAlgebra { shape, mode, rules })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn mode(&self) -> RelationMode {
        self.mode
    }

    fn rule(&self, a: GenIndex, b: GenIndex) -> &PairRule {
        &self.rules[a.flat(&self.shape) * self.shape.num_generators() + b.flat(&self.shape)]
    }

    pub fn one(&self) -> NcPoly {
        NcPoly::from_term(PbwMonomial::unit(&self.shape), QScalar::one())
    }

    pub fn scalar(&self, c: QScalar) -> NcPoly {
        NcPoly::from_term(PbwMonomial::unit(&self.shape), c)
    }

    /// The generator `x[row, col]` as an element.
    pub fn gen(&self, row: usize, col: usize) -> Result<NcPoly> {
        let g = GenIndex::new(row, col);
        g.check(&self.shape)?;
        Ok(NcPoly::from_term(
            PbwMonomial::from_sorted_word(&[g], &self.shape),
            QScalar::one(),
        ))
    }

    pub fn generators(&self) -> Vec<GenIndex> {
        (0..self.shape.num_generators())
            .map(|f| GenIndex::from_flat(f, &self.shape))
            .collect()
    }

    /// PBW expansion of the product of the letters of `word`.
    ///
    /// Rewrites the leftmost out-of-order adjacent pair until the word is
    /// nondecreasing. Termination: writing a word's row sequence and column
    /// sequence separately, every rewrite strictly decreases the pair
    /// (row inversions, column inversions) lexicographically — the swap rules
    /// remove one inversion, and the diagonal correction term swaps the two
    /// rows while keeping the columns in place, so it also drops a row
    /// inversion. Confluence is a tested property, not an assumption.
    pub fn word_normal_form(&self, word: &[GenIndex]) -> Result<NcPoly> {
        for g in word {
            g.check(&self.shape)?;
        }
        let mut out = NcPoly::zero();
        let mut work: Vec<(QScalar, Vec<GenIndex>)> = vec![(QScalar::one(), word.to_vec())];
        while let Some((coeff, w)) = work.pop() {
            match first_descent(&w) {
                None => out.add_term(PbwMonomial::from_sorted_word(&w, &self.shape), coeff),
                Some(t) => match self.rule(w[t], w[t + 1]) {
                    PairRule::InOrder => unreachable!("descent position must be out of order"),
                    PairRule::Swap { coeff: c } => {
                        let mut sw = w.clone();
                        sw.swap(t, t + 1);
                        work.push((&coeff * c, sw));
                    }
                    PairRule::SwapCorrect { extra, extra_coeff } => {
                        let mut sw = w.clone();
                        sw.swap(t, t + 1);
                        let mut ex = w.clone();
                        ex[t] = extra.0;
                        ex[t + 1] = extra.1;
                        work.push((coeff.clone(), sw));
                        work.push((&coeff * extra_coeff, ex));
                    }
                },
            }
        }
        Ok(out)
    }

    /// Product in the algebra; bilinear extension of `word_normal_form`.
    pub fn mul(&self, a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut out = NcPoly::zero();
        for (ma, ca) in a.terms() {
            let wa = ma.word(&self.shape);
            for (mb, cb) in b.terms() {
                let mut word = wa.clone();
                word.extend(mb.word(&self.shape));
                let prod = self.word_normal_form(&word)?;
                let c = ca * cb;
                for (m, v) in prod.terms() {
                    out.add_term(m.clone(), v * &c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, a: &NcPoly, e: u32) -> Result<NcPoly> {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }

    fn check_element(&self, a: &NcPoly) -> Result<()> {
        let width = self.shape.num_generators();
        for (m, _) in a.terms() {
            if m.width() != width {
                return Err(Error::ShapeMismatch(format!(
                    "element with {}-generator monomials used in a {}x{} algebra",
                    m.width(),
                    self.shape.m,
                    self.shape.n
                )));
            }
        }
        Ok(())
    }

    /// The quantum determinant: the signed `(-q)^{inversions}` sum over all
    /// permutation words. Requires a square shape.
    pub fn quantum_determinant(&self) -> Result<NcPoly> {
        if self.shape.m != self.shape.n {
            return Err(Error::NonSquareShape {
                m: self.shape.m,
                n: self.shape.n,
            });
        }
        let all: Vec<usize> = (1..=self.shape.n).collect();
        self.quantum_minor(&all, &all)
    }

    /// The quantum minor `[rows | cols]`: the quantum determinant of the
    /// subalgebra on the given rows and columns, expanded directly as the
    /// permutation sum in the ambient PBW basis.
    pub fn quantum_minor(&self, rows: &[usize], cols: &[usize]) -> Result<NcPoly> {
        let rows = checked_subset(rows, self.shape.m, "row")?;
        let cols = checked_subset(cols, self.shape.n, "column")?;
        if rows.len() != cols.len() {
            return Err(Error::BadMinorIndex(format!(
                "{} rows vs {} columns",
                rows.len(),
                cols.len()
            )));
        }
        let t = rows.len();
        let mut out = NcPoly::zero();
        for (perm, inversions) in permutations_with_inversions(t) {
            let word: Vec<GenIndex> = (0..t)
                .map(|i| GenIndex::new(rows[i], cols[perm[i]]))
                .collect();
            let coeff = (&QScalar::from_int(-1) * &QScalar::q()).pow(inversions as i64)?;
            let expanded = self.word_normal_form(&word)?;
            for (m, v) in expanded.terms() {
                out.add_term(m.clone(), v * &coeff);
            }
        }
        Ok(out)
    }

    /// The algebra with rows and columns exchanged.
    pub fn transposed(&self) -> MatrixAlgebra {
        MatrixAlgebra::with_mode(self.shape.n, self.shape.m, self.mode)
            .expect("transposed shape is valid")
    }

    /// The transpose isomorphism `x[i,j] -> x'[j,i]` onto the transposed
    /// algebra; an involution that sends `[I|J]` to `[J|I]`.
    pub fn transpose(&self, a: &NcPoly) -> Result<NcPoly> {
        self.check_element(a)?;
        let target = self.transposed();
        let mut out = NcPoly::zero();
        for (m, c) in a.terms() {
            let word: Vec<GenIndex> = m
                .word(&self.shape)
                .into_iter()
                .map(|g| GenIndex::new(g.col, g.row))
                .collect();
            let nf = target.word_normal_form(&word)?;
            for (mono, v) in nf.terms() {
                out.add_term(mono.clone(), v * c);
            }
        }
        Ok(out)
    }
}

fn checked_subset(ixs: &[usize], bound: usize, what: &str) -> Result<Vec<usize>> {
    if ixs.is_empty() {
        return Err(Error::BadMinorIndex(format!("empty {what} set")));
    }
    let mut v = ixs.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != ixs.len() {
        return Err(Error::BadMinorIndex(format!("repeated {what} index")));
    }
    if v[0] == 0 || *v.last().unwrap() > bound {
        return Err(Error::BadMinorIndex(format!(
            "{what} index out of bounds 1..={bound}"
        )));
    }
    Ok(v)
}

fn first_descent(word: &[GenIndex]) -> Option<usize> {
    (0..word.len().saturating_sub(1)).find(|&t| word[t] > word[t + 1])
}

fn make_rule(a: GenIndex, b: GenIndex, mode: RelationMode) -> PairRule {
    if a <= b {
        return PairRule::InOrder;
    }
    // Here a > b lexicographically; write a = x[r2,c2], b = x[r1,c1].
    let (r2, c2) = (a.row, a.col);
    let (r1, c1) = (b.row, b.col);
    if r1 == r2 || c1 == c2 {
        // Same row (c2 > c1) or same column (r2 > r1): x_b x_a = q x_a x_b.
        return PairRule::Swap {
            coeff: QScalar::q_pow(-1),
        };
    }
    if c2 < c1 {
        // r2 > r1 and c2 < c1: the antidiagonal pair commutes.
        return PairRule::Swap {
            coeff: QScalar::one(),
        };
    }
    // r2 > r1, c2 > c1: x_a x_b = x_b x_a - (q - q^-1) x[r1,c2] x[r2,c1].
    let constant = match mode {
        RelationMode::Standard => QScalar::q_minus_qinv(),
        RelationMode::PerturbedDiagonal => &QScalar::q_pow(2) - &QScalar::q_pow(-1),
    };
    PairRule::SwapCorrect {
        extra: (GenIndex::new(r1, c2), GenIndex::new(r2, c1)),
        extra_coeff: -&constant,
    }
}

/// All permutations of `0..len` with their inversion counts, in a fixed
/// deterministic order.
pub fn permutations_with_inversions(len: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    let mut used = vec![false; len];
    fn rec(
        len: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, usize)>,
    ) {
        if current.len() == len {
            let inv = (0..len)
                .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
                .filter(|&(i, j)| current[i] > current[j])
                .count();
            out.push((current.clone(), inv));
            return;
        }
        for v in 0..len {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(len, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(len, &mut current, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(alg: &MatrixAlgebra, pairs: &[(usize, usize)]) -> NcPoly {
        let w: Vec<GenIndex> = pairs.iter().map(|&(r, c)| GenIndex::new(r, c)).collect();
        alg.word_normal_form(&w).unwrap()
    }

    #[test]
    fn antidiagonal_pair_commutes() {
        let alg = MatrixAlgebra::new(2, 2).unwrap();
        let lhs = word(&alg, &[(2, 1), (1, 2)]);
        let rhs = word(&alg, &[(1, 2), (2, 1)]);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.render(alg.shape()), "x[1,2]*x[2,1]");
    }

    #[test]
    fn diagonal_pair_rewrites_with_correction() {
        let alg = MatrixAlgebra::new(2, 2).unwrap();
        let got = word(&alg, &[(2, 2), (1, 1)]);
        // One application of the diagonal relation, checked by hand:
        // x22*x11 = x11*x22 - (q - q^-1)*x12*x21.
        let mut expected = word(&alg, &[(1, 1), (2, 2)]);
        expected = &expected - &word(&alg, &[(1, 2), (2, 1)]).scaled(&QScalar::q_minus_qinv());
        assert_eq!(got, expected);
        assert_eq!(
            got.render(alg.shape()),
            "x[1,1]*x[2,2] - (q^2 - 1)/(q)*x[1,2]*x[2,1]"
        );
    }

    #[test]
    fn same_row_swap_inverts_the_relation() {
        let alg = MatrixAlgebra::new(2, 2).unwrap();
        let got = word(&alg, &[(1, 2), (1, 1)]);
        let expected = word(&alg, &[(1, 1), (1, 2)]).scaled(&QScalar::q_pow(-1));
        assert_eq!(got, expected);
    }

    #[test]
    fn mul_unit_and_commutator() {
        let alg = MatrixAlgebra::new(2, 2).unwrap();
        let b = &word(&alg, &[(1, 1), (2, 1)]) + &word(&alg, &[(1, 2)]);
        assert_eq!(alg.mul(&alg.one(), &b).unwrap(), b);
        let x11 = alg.gen(1, 1).unwrap();
        let x22 = alg.gen(2, 2).unwrap();
        let comm = &alg.mul(&x11, &x22).unwrap() - &alg.mul(&x22, &x11).unwrap();
        let expected = word(&alg, &[(1, 2), (2, 1)]).scaled(&QScalar::q_minus_qinv());
        assert_eq!(comm, expected);
    }

    #[test]
    fn mul_is_bilinear_on_a_sum() {
        let alg = MatrixAlgebra::new(2, 2).unwrap();
        let x11 = alg.gen(1, 1).unwrap();
        let x12 = alg.gen(1, 2).unwrap();
        let sum = &x11 + &x12;
        let got = alg.mul(&sum, &x11).unwrap();
        let expected = &word(&alg, &[(1, 1), (1, 1)])
            + &word(&alg, &[(1, 1), (1, 2)]).scaled(&QScalar::q_pow(-1));
        assert_eq!(got, expected);
    }

    #[test]
    fn quantum_determinant_small_cases() {
        let alg1 = MatrixAlgebra::new(1, 1).unwrap();
        assert_eq!(alg1.quantum_determinant().unwrap(), alg1.gen(1, 1).unwrap());

        let alg2 = MatrixAlgebra::new(2, 2).unwrap();
        let dq = alg2.quantum_determinant().unwrap();
        let expected =
            &word(&alg2, &[(1, 1), (2, 2)]) - &word(&alg2, &[(1, 2), (2, 1)]).scaled(&QScalar::q());
        assert_eq!(dq, expected);
        assert_eq!(dq.render(alg2.shape()), "x[1,1]*x[2,2] - q*x[1,2]*x[2,1]");

        assert!(MatrixAlgebra::new(2, 3)
            .unwrap()
            .quantum_determinant()
            .is_err());
    }

    #[test]
    fn quantum_determinant_is_central() {
        for n in [2usize, 3] {
            let alg = MatrixAlgebra::new(n, n).unwrap();
            let dq = alg.quantum_determinant().unwrap();
            for g in alg.generators() {
                let x = alg.gen(g.row, g.col).unwrap();
                assert_eq!(
                    alg.mul(&dq, &x).unwrap(),
                    alg.mul(&x, &dq).unwrap(),
                    "the determinant must commute with x[{},{}] in the {n}x{n} shape",
                    g.row,
                    g.col
                );
            }
        }
    }

    #[test]
    fn quantum_minor_examples() {
        let alg = MatrixAlgebra::new(2, 3).unwrap();
        assert_eq!(
            alg.quantum_minor(&[1], &[2]).unwrap(),
            alg.gen(1, 2).unwrap()
        );
        let m12 = alg.quantum_minor(&[1, 2], &[1, 2]).unwrap();
        let expected =
            &word(&alg, &[(1, 1), (2, 2)]) - &word(&alg, &[(1, 2), (2, 1)]).scaled(&QScalar::q());
        assert_eq!(m12, expected);
        let m13 = alg.quantum_minor(&[1, 2], &[1, 3]).unwrap();
        let expected =
            &word(&alg, &[(1, 1), (2, 3)]) - &word(&alg, &[(1, 3), (2, 1)]).scaled(&QScalar::q());
        assert_eq!(m13, expected);
        assert!(alg.quantum_minor(&[1, 2], &[1]).is_err());
        assert!(alg.quantum_minor(&[1, 2], &[1, 4]).is_err());
    }

    /// Independent oracle: expansion of a quantum minor along its first row,
    /// `[I|J] = sum_l (-q)^(l-1) * x[i_1, j_l] * [I \ i_1 | J \ j_l]`.
    fn laplace_minor(alg: &MatrixAlgebra, rows: &[usize], cols: &[usize]) -> NcPoly {
        if rows.len() == 1 {
            return alg.gen(rows[0], cols[0]).unwrap();
        }
        let mut out = NcPoly::zero();
        for (l, &j) in cols.iter().enumerate() {
            let sub_rows: Vec<usize> = rows[1..].to_vec();
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let sub = laplace_minor(alg, &sub_rows, &sub_cols);
            let x = alg.gen(rows[0], j).unwrap();
            let term = alg.mul(&x, &sub).unwrap();
            let sign = (&QScalar::from_int(-1) * &QScalar::q())
                .pow(l as i64)
                .unwrap();
            out = &out + &term.scaled(&sign);
        }
        out
    }

    #[test]
    fn minors_match_laplace_expansion_in_3x3() {
        let alg = MatrixAlgebra::new(3, 3).unwrap();
        let subsets2: Vec<Vec<usize>> = vec![vec![1, 2], vec![1, 3], vec![2, 3]];
        for rows in &subsets2 {
            for cols in &subsets2 {
                assert_eq!(
                    alg.quantum_minor(rows, cols).unwrap(),
                    laplace_minor(&alg, rows, cols),
                    "2x2 minor {rows:?}|{cols:?}"
                );
            }
        }
        let all = vec![1, 2, 3];
        assert_eq!(
            alg.quantum_minor(&all, &all).unwrap(),
            laplace_minor(&alg, &all, &all)
        );
    }

    #[test]
    fn transpose_examples() {
        let alg = MatrixAlgebra::new(2, 3).unwrap();
        let x12 = alg.gen(1, 2).unwrap();
        let t = alg.transpose(&x12).unwrap();
        let talg = alg.transposed();
        assert_eq!(t, talg.gen(2, 1).unwrap());

        let alg22 = MatrixAlgebra::new(2, 2).unwrap();
        let m = alg22.quantum_minor(&[1, 2], &[1, 2]).unwrap();
        assert_eq!(alg22.transpose(&m).unwrap(), m);
    }

    #[test]
    fn transpose_sends_minors_to_flipped_minors() {
        let alg = MatrixAlgebra::new(2, 3).unwrap();
        let talg = alg.transposed();
        let m = alg.quantum_minor(&[1, 2], &[1, 3]).unwrap();
        assert_eq!(
            alg.transpose(&m).unwrap(),
            talg.quantum_minor(&[1, 3], &[1, 2]).unwrap()
        );
    }

    #[test]
    fn transpose_is_an_involution_and_multiplicative() {
        let alg = MatrixAlgebra::new(2, 2).unwrap();
        let talg = alg.transposed();
        let a = &word(&alg, &[(1, 1), (2, 2)]) + &word(&alg, &[(1, 2)]).scaled(&QScalar::q());
        let b = &word(&alg, &[(2, 1), (2, 2)]) - &alg.one();
        let round = alg.transpose(&a).and_then(|t| talg.transpose(&t)).unwrap();
        assert_eq!(round, a);
        let lhs = alg.transpose(&alg.mul(&a, &b).unwrap()).unwrap();
        let rhs = talg
            .mul(&alg.transpose(&a).unwrap(), &alg.transpose(&b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn out_of_bounds_word_is_an_error() {
        let alg = MatrixAlgebra::new(2, 2).unwrap();
        assert!(alg.word_normal_form(&[GenIndex::new(3, 1)]).is_err());
        assert!(alg.gen(1, 3).is_err());
    }

    #[test]
    fn perturbed_relations_change_normal_forms() {
        let alg = MatrixAlgebra::with_mode(2, 2, RelationMode::PerturbedDiagonal).unwrap();
        let good = MatrixAlgebra::new(2, 2).unwrap();
        assert_ne!(
            word(&alg, &[(2, 2), (1, 1)]),
            word(&good, &[(2, 2), (1, 1)])
        );
    }
}
