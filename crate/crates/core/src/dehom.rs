//! The skew Laurent picture of the localized quantum grassmannian:
//! `T = O_q(M(k,p))[y^{±1}; σ]` with `p = n - k` and `σ` scaling every
//! generator by `q`. Provides arithmetic in `T`, the letterwise translation
//! maps in both directions, membership tests, and the two gradings of `T`
//! by conjugation with `y` and with the distinguished minor
//! `[1..k | p+1-k..p]`.

use std::collections::BTreeMap;

use crate::grassmann::{GrassAlgebra, LocalizedElement, PluckerIndex};
use crate::qmatrix::{MatrixAlgebra, NcPoly, PbwMonomial, RelationMode};
use crate::scalar::QScalar;
use crate::{Error, Result};

/// A quantum minor index `[I | J]` of `O_q(M(k,p))` with `|I| = |J|`.
/// The empty minor denotes the unit of the algebra.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct MinorIndex {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, k: usize, p: usize) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::BadMinorIndex(format!(
                "{} rows vs {} columns",
                rows.len(),
                cols.len()
            )));
        }
        let strict = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if !strict(&rows) || !strict(&cols) {
            return Err(Error::BadMinorIndex(
                "index sets must be strictly increasing".to_string(),
            ));
        }
        if rows.iter().any(|&r| r == 0 || r > k) || cols.iter().any(|&c| c == 0 || c > p) {
            return Err(Error::BadMinorIndex(format!(
                "indices out of bounds for a {k}x{p} algebra"
            )));
        }
        Ok(MinorIndex { rows, cols })
    }

    pub fn empty() -> Self {
        MinorIndex {
            rows: Vec::new(),
            cols: Vec::new(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// An element of `T`: a finite coefficient table on pairs (PBW monomial of
/// `O_q(M(k,p))`, integer `y`-power), with `y`-powers kept on the right.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TElement {
    terms: BTreeMap<(PbwMonomial, i64), QScalar>,
}

impl TElement {
    pub fn zero() -> Self {
        TElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PbwMonomial, i64), &QScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, mono: PbwMonomial, ypow: i64, coeff: QScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((mono, ypow)) {
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

    pub fn add(&self, other: &TElement) -> TElement {
        let mut out = self.clone();
        for ((m, s), c) in &other.terms {
            out.add_term(m.clone(), *s, c.clone());
        }
        out
    }

    pub fn scaled(&self, c: &QScalar) -> TElement {
        if c.is_zero() {
            return TElement::zero();
        }
        TElement {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Whether every monomial carries `ypow == 0`, i.e. the element lies in
    /// the quantum matrix subalgebra.
    pub fn is_matrix_element(&self) -> bool {
        self.terms.keys().all(|(_, s)| *s == 0)
    }

    /// Split into `y`-weight homogeneous components keyed by the weight.
    pub fn y_homogeneous_parts(&self) -> BTreeMap<i64, TElement> {
        let mut out: BTreeMap<i64, TElement> = BTreeMap::new();
        for ((m, s), c) in &self.terms {
            out.entry(y_weight(m))
                .or_insert_with(TElement::zero)
                .add_term(m.clone(), *s, c.clone());
        }
        out
    }

    /// Rendering such as `x[1,1]*y^-2 + (q - 1)*y`, `y`-powers rightmost.
    /// Terms are listed by descending storage key.
    pub fn render(&self, ctx: &DehomContext) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let shape = ctx.matrix().shape();
        let mut out = String::new();
        for (i, ((mono, ypow), coeff)) in self.terms.iter().rev().enumerate() {
            let mut parts: Vec<String> = Vec::new();
            if !mono.is_unit() {
                let mut s = String::new();
                for (j, (g, e)) in mono.letters(shape).into_iter().enumerate() {
                    if j > 0 {
                        s.push('*');
                    }
                    s.push_str(&format!("x[{},{}]", g.row, g.col));
                    if e > 1 {
                        s.push_str(&format!("^{e}"));
                    }
                }
                parts.push(s);
            }
            match *ypow {
                0 => {}
                1 => parts.push("y".to_string()),
                e => parts.push(format!("y^{e}")),
            }
            let joined = if parts.is_empty() {
                None
            } else {
                Some(parts.join("*"))
            };
            crate::qmatrix::push_term(&mut out, i == 0, coeff, joined.as_deref(), false);
        }
        out
    }
}

/// Total `x`-degree of a monomial: its weight under conjugation by `y`,
/// since `y x_{ij} y^-1 = q x_{ij}`.
pub fn y_weight(mono: &PbwMonomial) -> i64 {
    mono.degree() as i64
}

/// The dehomogenisation context: a grassmannian `O_q(G(k,n))` together with
/// the matrix algebra `O_q(M(k,p))` it localizes to.
#[derive(Clone, Debug)]
pub struct DehomContext {
    grass: GrassAlgebra,
    matrix: MatrixAlgebra,
}

impl DehomContext {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        DehomContext::with_mode(k, n, RelationMode::Standard)
    }

    pub fn with_mode(k: usize, n: usize, mode: RelationMode) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidShape(format!(
                "dehomogenisation needs k < n, got k={k}, n={n}"
            )));
        }
        let grass = GrassAlgebra::with_mode(k, n, mode)?;
        let matrix = MatrixAlgebra::with_mode(k, n - k, mode)?;
        Ok(DehomContext { grass, matrix })
    }

    pub fn grass(&self) -> &GrassAlgebra {
        &self.grass
    }

    pub fn matrix(&self) -> &MatrixAlgebra {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.grass.shape().k
    }

    pub fn p(&self) -> usize {
        self.grass.shape().p()
    }

    pub fn one(&self) -> TElement {
        let mut t = TElement::zero();
        t.add_term(PbwMonomial::unit(self.matrix.shape()), 0, QScalar::one());
        t
    }

    pub fn y_power(&self, e: i64) -> TElement {
        let mut t = TElement::zero();
        t.add_term(PbwMonomial::unit(self.matrix.shape()), e, QScalar::one());
        t
    }

    pub fn x_gen(&self, row: usize, col: usize) -> Result<TElement> {
        let p = self.matrix.gen(row, col)?;
        Ok(self.from_matrix(&p, 0))
    }

    /// Lift a matrix-algebra element into `T` with a common `y`-power.
    pub fn from_matrix(&self, a: &NcPoly, ypow: i64) -> TElement {
        let mut t = TElement::zero();
        for (m, c) in a.terms() {
            t.add_term(m.clone(), ypow, c.clone());
        }
        t
    }

    /// Product in `T`. The twist `y^s m = q^{s deg(m)} m y^s` moves all
    /// `y`-powers to the right; the `x`-parts multiply by PBW straightening
    /// in `O_q(M(k,p))`.
    pub fn t_mul(&self, a: &TElement, b: &TElement) -> TElement {
        let mut out = TElement::zero();
        for ((ma, sa), ca) in &a.terms {
            for ((mb, sb), cb) in &b.terms {
                let twist = QScalar::q_pow(sa * y_weight(mb));
                let coeff = &(ca * cb) * &twist;
                let mut word = ma.word(self.matrix.shape());
                word.extend(mb.word(self.matrix.shape()));
                let prod = self
                    .matrix
                    .word_normal_form(&word)
                    .expect("monomials are in-shape by construction");
                for (m, v) in prod.terms() {
                    out.add_term(m.clone(), sa + sb, v * &coeff);
                }
            }
        }
        out
    }

    /// Translation of a quantum minor of `O_q(M(k,p))` into a Plucker
    /// coordinate: `[I|J] = [({1..k} \ (k+1-I)) ⊔ (k+J)] [u]^-1`. The paired
    /// `[u]`-power is always `-1` and is left to the caller.
    pub fn minor_to_plucker(&self, minor: &MinorIndex) -> Result<PluckerIndex> {
        let k = self.k();
        let reflected: Vec<usize> = minor.rows().iter().map(|&i| k + 1 - i).collect();
        let mut cols: Vec<usize> = (1..=k).filter(|c| !reflected.contains(c)).collect();
        cols.extend(minor.cols().iter().map(|&j| j + k));
        PluckerIndex::from_set(cols, self.grass.shape())
    }

    /// Translation of a Plucker coordinate into a quantum minor:
    /// `[L] = [(k+1) - ({1..k} \ L_{<=k}) | L_{>k} - k] y`. For `L = u` the
    /// minor is empty, denoting the unit. The paired `y`-power is `+1`.
    pub fn plucker_to_minor(&self, index: &PluckerIndex) -> MinorIndex {
        let k = self.k();
        let low: Vec<usize> = index.cols().iter().copied().filter(|&c| c <= k).collect();
        let mut rows: Vec<usize> = (1..=k)
            .filter(|c| !low.contains(c))
            .map(|c| k + 1 - c)
            .collect();
        rows.sort_unstable();
        let cols: Vec<usize> = index
            .cols()
            .iter()
            .copied()
            .filter(|&c| c > k)
            .map(|c| c - k)
            .collect();
        MinorIndex { rows, cols }
    }

    /// Row membership read off from the Plucker index alone:
    /// `i in I` iff `(k+1) - i` is not a column of `L`.
    pub fn belongs_row(&self, i: usize, index: &PluckerIndex) -> bool {
        !index.contains(self.k() + 1 - i)
    }

    /// Column membership read off from the Plucker index alone:
    /// `j in J` iff `j + k` is a column of `L`.
    pub fn belongs_col(&self, j: usize, index: &PluckerIndex) -> bool {
        index.contains(j + self.k())
    }

    /// The embedded quantum minor of a minor index, with the empty minor
    /// denoting the unit.
    pub fn minor_poly(&self, minor: &MinorIndex) -> Result<NcPoly> {
        if minor.is_empty() {
            return Ok(self.matrix.one());
        }
        self.matrix.quantum_minor(minor.rows(), minor.cols())
    }

    /// Letterwise forward map through the dehomogenisation identification:
    /// `[L] -> [I|J] y` and `[u]^e -> y^e`, extended multiplicatively.
    pub fn forward(&self, a: &LocalizedElement) -> Result<TElement> {
        let mut out = TElement::zero();
        for ((word, upow), coeff) in a.terms() {
            let mut letters_product = self.one();
            for letter in word.letters() {
                let minor = self.plucker_to_minor(letter);
                let image = self.from_matrix(&self.minor_poly(&minor)?, 1);
                letters_product = self.t_mul(&letters_product, &image);
            }
            let acc = self.t_mul(&letters_product, &self.y_power(*upow));
            out = out.add(&acc.scaled(coeff));
        }
        Ok(out)
    }

    /// Letterwise backward map: each generator `x[i,j]` returns to its
    /// defining Plucker coordinate times `[u]^-1`, and `y^s` to `[u]^s`.
    pub fn backward(&self, t: &TElement) -> Result<LocalizedElement> {
        let mut out = LocalizedElement::zero();
        for ((mono, ypow), coeff) in &t.terms {
            let mut acc = self.grass.u_power(0);
            for g in mono.word(self.matrix.shape()) {
                let minor = MinorIndex::new(vec![g.row], vec![g.col], self.k(), self.p())?;
                let letter = self.minor_to_plucker(&minor)?;
                let image = self
                    .grass
                    .loc_mul(&self.grass.letter(&letter), &self.grass.u_power(-1));
                acc = self.grass.loc_mul(&acc, &image);
            }
            acc = self.grass.loc_mul(&acc, &self.grass.u_power(*ypow));
            out = out.add(&acc.scaled(coeff));
        }
        Ok(out)
    }

    /// The distinguished minor `[1..k | p+1-k..p]`; requires `k <= p`, i.e.
    /// `2k <= n`.
    pub fn distinguished_minor(&self) -> Result<MinorIndex> {
        let (k, p) = (self.k(), self.p());
        if k > p {
            return Err(Error::InvalidShape(format!(
                "the distinguished minor needs 2k <= n, got k={k}, p={p}"
            )));
        }
        MinorIndex::new((1..=k).collect(), (p + 1 - k..=p).collect(), k, p)
    }

    /// Weight of a monomial under conjugation by the distinguished minor
    /// `[I|J]`: the number of `x`-factors in columns `j < p+1-k` (with
    /// multiplicity) plus `k` per `y`-power, so that
    /// `[I|J] m = q^{-weight} m [I|J]`.
    pub fn minor_weight(&self, mono: &PbwMonomial, ypow: i64) -> Result<i64> {
        let (k, p) = (self.k(), self.p());
        if k > p {
            return Err(Error::InvalidShape(format!(
                "minor grading needs 2k <= n, got k={k}, p={p}"
            )));
        }
        let threshold = p + 1 - k;
        let low: i64 = mono
            .letters(self.matrix.shape())
            .into_iter()
            .filter(|(g, _)| g.col < threshold)
            .map(|(_, e)| e as i64)
            .sum();
        Ok(low + ypow * k as i64)
    }

    /// Whether a `T` element is `y`-weight homogeneous; returns the weight.
    pub fn y_homogeneous_weight(&self, t: &TElement) -> Option<i64> {
        let mut weight = None;
        for (m, _) in t.terms.keys() {
            let w = y_weight(m);
            match weight {
                None => weight = Some(w),
                Some(prev) if prev != w => return None,
                _ => {}
            }
        }
        weight
    }

    /// Whether a `T` element is minor-weight homogeneous; returns the weight.
    pub fn minor_homogeneous_weight(&self, t: &TElement) -> Result<Option<i64>> {
        let mut weight = None;
        for (m, s) in t.terms.keys() {
            let w = self.minor_weight(m, *s)?;
            match weight {
                None => weight = Some(w),
                Some(prev) if prev != w => return Ok(None),
                _ => {}
            }
        }
        Ok(weight)
    }

    /// Membership filter for the matrix subalgebra: true exactly when the
    /// element is `y`-weight homogeneous of weight 1 and minor-weight
    /// homogeneous of weight 0 or 1. With `k >= 2` this forces every
    /// monomial to carry `ypow = 0`.
    pub fn membership_filter(&self, t: &TElement) -> Result<bool> {
        if t.is_zero() {
            return Ok(false);
        }
        if self.y_homogeneous_weight(t) != Some(1) {
            return Ok(false);
        }
        let ok = matches!(self.minor_homogeneous_weight(t)?, Some(0) | Some(1));
        if ok && self.k() >= 2 {
            debug_assert!(t.is_matrix_element());
        }
        Ok(ok)
    }
}
