//! The quantum grassmannian `O_q(G(k,n))` inside `O_q(M(k,n))`: quantum
//! Plucker coordinates, the componentwise partial order and standard
//! monomials, the d-statistic, straightening by exact linear algebra, and
//! arithmetic in the localization at `[u] = [1..k]`.
//!
//! Formal words in Plucker coordinates are kept unexpanded; the single source
//! of truth for equality is the PBW embedding into the ambient quantum matrix
//! algebra. Localized elements are canonicalized only as far as collecting
//! all `[u]`-powers on the right of each term, which the d-statistic
//! commutation rule makes exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::linalg::{InsertOutcome, SpanBasis, SparseVec};
use crate::qmatrix::{MatrixAlgebra, NcPoly, PbwMonomial, RelationMode};
use crate::scalar::QScalar;
use crate::{Error, Result};

/// Shape of a quantum grassmannian: `k`-subsets of columns `1..=n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GrassShape {
    pub k: usize,
    pub n: usize,
}

impl GrassShape {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidShape(format!(
                "grassmannian shape needs 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        Ok(GrassShape { k, n })
    }

    /// Number of matrix columns left after dehomogenisation.
    pub fn p(&self) -> usize {
        self.n - self.k
    }

    /// Shapes on which the automorphism-level statements are made.
    pub fn supports_automorphisms(&self) -> bool {
        self.k >= 2 && 2 * self.k <= self.n
    }
}

/// A quantum Plucker coordinate `[c_1, .., c_k]`: a strictly increasing
/// `k`-subset of `1..=n`. The derived `Ord` is plain lexicographic order on
/// the column lists (a total order used for storage); the domain partial
/// order is [`PluckerIndex::poset_leq`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PluckerIndex {
    cols: Vec<usize>,
}

impl PluckerIndex {
    pub fn new(cols: Vec<usize>, shape: &GrassShape) -> Result<Self> {
        if cols.len() != shape.k {
            return Err(Error::BadPluckerIndex(format!(
                "expected {} columns, got {:?}",
                shape.k, cols
            )));
        }
        if !cols.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::BadPluckerIndex(format!(
                "columns must be strictly increasing, got {cols:?}"
            )));
        }
        if cols[0] == 0 || *cols.last().unwrap() > shape.n {
            return Err(Error::BadPluckerIndex(format!(
                "columns out of bounds 1..={}: {cols:?}",
                shape.n
            )));
        }
        Ok(PluckerIndex { cols })
    }

    /// Build from any set of distinct columns, sorting them first.
    pub fn from_set(mut cols: Vec<usize>, shape: &GrassShape) -> Result<Self> {
        cols.sort_unstable();
        PluckerIndex::new(cols, shape)
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn contains(&self, col: usize) -> bool {
        self.cols.binary_search(&col).is_ok()
    }

    /// The componentwise partial order on Plucker coordinates.
    pub fn poset_leq(&self, other: &PluckerIndex) -> bool {
        debug_assert_eq!(self.cols.len(), other.cols.len());
        self.cols.iter().zip(&other.cols).all(|(a, b)| a <= b)
    }

    pub fn render(&self) -> String {
        let mut s = String::from("[");
        for (i, c) in self.cols.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{c}");
        }
        s.push(']');
        s
    }
}

/// A formal word in Plucker coordinates. Words are inputs to straightening
/// and embedding; no relations are applied at this level.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct PluckerWord {
    letters: Vec<PluckerIndex>,
}

impl PluckerWord {
    pub fn empty() -> Self {
        PluckerWord {
            letters: Vec::new(),
        }
    }

    pub fn new(letters: Vec<PluckerIndex>) -> Self {
        PluckerWord { letters }
    }

    pub fn single(letter: PluckerIndex) -> Self {
        PluckerWord {
            letters: vec![letter],
        }
    }

    pub fn letters(&self) -> &[PluckerIndex] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Whether consecutive letters are nondecreasing in the partial order.
    pub fn is_standard(&self) -> bool {
        self.letters.windows(2).all(|w| w[0].poset_leq(&w[1]))
    }

    pub fn concat(&self, other: &PluckerWord) -> PluckerWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        PluckerWord { letters }
    }

    pub fn render(&self) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters.iter().map(|l| l.render()).collect()
    }
}

/// An element of the localization `O_q(G(k,n))[[u]^-1]`: a linear combination
/// of formal Plucker words times an integer power of `[u]`, with all
/// `[u]`-powers collected on the right and no `[u]` letters left inside the
/// words.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LocalizedElement {
    terms: BTreeMap<(PluckerWord, i64), QScalar>,
}

impl LocalizedElement {
    pub fn zero() -> Self {
        LocalizedElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(PluckerWord, i64), &QScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, word: PluckerWord, upow: i64, coeff: QScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((word, upow)) {
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
            return LocalizedElement::zero();
        }
        LocalizedElement {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &LocalizedElement) -> LocalizedElement {
        let mut out = self.clone();
        for ((w, e), c) in &other.terms {
            out.add_term(w.clone(), *e, c.clone());
        }
        out
    }

    pub fn min_upow(&self) -> i64 {
        self.terms.keys().map(|(_, e)| *e).min().unwrap_or(0)
    }

    /// `Some((coeff, letter))` when the element is a single scalar multiple
    /// of one Plucker letter with no `[u]` power.
    pub fn as_scalar_letter(&self) -> Option<(QScalar, PluckerIndex)> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((word, upow), coeff) = self.terms.iter().next()?;
        if *upow != 0 || word.len() != 1 {
            return None;
        }
        Some((coeff.clone(), word.letters()[0].clone()))
    }

    /// Rendering such as `q^2 * [1,3][1,4] * u^-2`. Terms are listed by
    /// descending storage key.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, ((word, upow), coeff)) in self.terms.iter().rev().enumerate() {
            let mut parts: Vec<String> = Vec::new();
            if !word.is_empty() {
                parts.push(word.render());
            }
            match *upow {
                0 => {}
                1 => parts.push("u".to_string()),
                e => parts.push(format!("u^{e}")),
            }
            let mono = if parts.is_empty() {
                None
            } else {
                Some(parts.join(" * "))
            };
            crate::qmatrix::push_term(&mut out, i == 0, coeff, mono.as_deref(), true);
        }
        out
    }
}

/// The quantum grassmannian of shape `(k, n)` with its ambient `k x n`
/// quantum matrix algebra.
#[derive(Clone, Debug)]
pub struct GrassAlgebra {
    shape: GrassShape,
    ambient: MatrixAlgebra,
}

impl GrassAlgebra {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        GrassAlgebra::with_mode(k, n, RelationMode::Standard)
    }

    pub fn with_mode(k: usize, n: usize, mode: RelationMode) -> Result<Self> {
        let shape = GrassShape::new(k, n)?;
        let ambient = MatrixAlgebra::with_mode(k, n, mode)?;
        Ok(GrassAlgebra { shape, ambient })
    }

    pub fn shape(&self) -> &GrassShape {
        &self.shape
    }

    pub fn ambient(&self) -> &MatrixAlgebra {
        &self.ambient
    }

    pub fn mode(&self) -> RelationMode {
        self.ambient.mode()
    }

    /// The minimal coordinate `[u] = [1..k]`.
    pub fn u_index(&self) -> PluckerIndex {
        PluckerIndex::new((1..=self.shape.k).collect(), &self.shape)
            .expect("u is always a valid index")
    }

    /// The maximal coordinate `[w] = [n-k+1..n]`.
    pub fn w_index(&self) -> PluckerIndex {
        PluckerIndex::new(
            (self.shape.n - self.shape.k + 1..=self.shape.n).collect(),
            &self.shape,
        )
        .expect("w is always a valid index")
    }

    /// All Plucker coordinates in lexicographic order.
    pub fn plucker_indices(&self) -> Vec<PluckerIndex> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        fn rec(
            start: usize,
            n: usize,
            k: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if current.len() == k {
                out.push(current.clone());
                return;
            }
            for c in start..=n {
                current.push(c);
                rec(c + 1, n, k, current, out);
                current.pop();
            }
        }
        let mut raw = Vec::new();
        rec(1, self.shape.n, self.shape.k, &mut current, &mut raw);
        for cols in raw {
            out.push(PluckerIndex { cols });
        }
        out
    }

    /// The d-statistic: the number of entries of `index` outside `{1..k}`.
    /// Zero exactly for `[u]`, and at most `k`.
    pub fn d_value(&self, index: &PluckerIndex) -> usize {
        index.cols.iter().filter(|&&c| c > self.shape.k).count()
    }

    pub fn d_value_word(&self, word: &PluckerWord) -> i64 {
        word.letters.iter().map(|l| self.d_value(l) as i64).sum()
    }

    /// The quantum minor `[1..k | index]` in the ambient algebra.
    pub fn embed_index(&self, index: &PluckerIndex) -> NcPoly {
        let rows: Vec<usize> = (1..=self.shape.k).collect();
        self.ambient
            .quantum_minor(&rows, &index.cols)
            .expect("Plucker index is a valid minor")
    }

    /// Multiplicative extension of the embedding to words.
    pub fn embed_word(&self, word: &PluckerWord) -> NcPoly {
        let mut out = self.ambient.one();
        for letter in &word.letters {
            out = self
                .ambient
                .mul(&out, &self.embed_index(letter))
                .expect("embedded letters share the ambient shape");
        }
        out
    }

    /// Embedding of a localized element; requires every `[u]`-power to be
    /// nonnegative.
    pub fn embed_localized(&self, a: &LocalizedElement) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        let u_embed = self.embed_index(&self.u_index());
        let mut u_pows: BTreeMap<i64, NcPoly> = BTreeMap::new();
        u_pows.insert(0, self.ambient.one());
        for ((word, upow), coeff) in &a.terms {
            if *upow < 0 {
                return Err(Error::UndefinedOnInput(format!(
                    "cannot embed a term with u^{upow} into the quantum matrix algebra"
                )));
            }
            if !u_pows.contains_key(upow) {
                let mut acc = self.ambient.one();
                for _ in 0..*upow {
                    acc = self.ambient.mul(&acc, &u_embed)?;
                }
                u_pows.insert(*upow, acc);
            }
            let base = self.embed_word(word);
            let total = self.ambient.mul(&base, &u_pows[upow])?;
            out = &out + &total.scaled(coeff);
        }
        Ok(out)
    }

    /// Turn a formal word times a `[u]`-power into canonical localized form:
    /// `[u]` letters are moved out of the word to the right, each move past a
    /// letter `[I]` contributing `q^{d(I)}`.
    pub fn localize(&self, coeff: QScalar, word: &PluckerWord, upow: i64) -> LocalizedElement {
        let u = self.u_index();
        let mut exponent: i64 = 0;
        let mut kept: Vec<PluckerIndex> = Vec::new();
        let mut extra_u: i64 = 0;
        // Suffix d-sums over the letters that stay.
        let mut suffix_d: Vec<i64> = vec![0; word.letters.len() + 1];
        for (i, l) in word.letters.iter().enumerate().rev() {
            suffix_d[i] = suffix_d[i + 1] + if *l == u { 0 } else { self.d_value(l) as i64 };
        }
        for (i, l) in word.letters.iter().enumerate() {
            if *l == u {
                exponent += suffix_d[i + 1];
                extra_u += 1;
            } else {
                kept.push(l.clone());
            }
        }
        let mut out = LocalizedElement::zero();
        out.add_term(
            PluckerWord::new(kept),
            upow + extra_u,
            &coeff * &QScalar::q_pow(exponent),
        );
        out
    }

    /// A single Plucker coordinate as a localized element.
    pub fn letter(&self, index: &PluckerIndex) -> LocalizedElement {
        self.localize(QScalar::one(), &PluckerWord::single(index.clone()), 0)
    }

    /// `[u]^e` as a localized element.
    pub fn u_power(&self, e: i64) -> LocalizedElement {
        let mut out = LocalizedElement::zero();
        out.add_term(PluckerWord::empty(), e, QScalar::one());
        out
    }

    /// Product in the localization. `[u]`-powers move right through a word
    /// with the d-statistic rule `[u]^e [I] = q^{e d(I)} [I] [u]^e`.
    pub fn loc_mul(&self, a: &LocalizedElement, b: &LocalizedElement) -> LocalizedElement {
        let mut out = LocalizedElement::zero();
        for ((wa, ea), ca) in &a.terms {
            for ((wb, eb), cb) in &b.terms {
                let twist = QScalar::q_pow(*ea * self.d_value_word(wb));
                let coeff = &(ca * cb) * &twist;
                out.add_term(wa.concat(wb), ea + eb, coeff);
            }
        }
        out
    }

    /// Decidable equality in the localization: right-multiply both sides by
    /// `[u]^M` to clear negative powers, embed, and compare exactly.
    pub fn loc_eq(&self, a: &LocalizedElement, b: &LocalizedElement) -> bool {
        let m = (-a.min_upow().min(b.min_upow())).max(0);
        let shift = self.u_power(m);
        let ea = self
            .embed_localized(&self.loc_mul(a, &shift))
            .expect("powers cleared");
        let eb = self
            .embed_localized(&self.loc_mul(b, &shift))
            .expect("powers cleared");
        ea == eb
    }

    /// All standard monomials of the given degree: nondecreasing chains in
    /// the Plucker poset, in a fixed lexicographic order. Degree zero yields
    /// the empty word.
    pub fn enumerate_standard(&self, degree: usize) -> Vec<PluckerWord> {
        let letters = self.plucker_indices();
        let mut out = Vec::new();
        let mut current: Vec<PluckerIndex> = Vec::new();
        fn rec(
            letters: &[PluckerIndex],
            degree: usize,
            current: &mut Vec<PluckerIndex>,
            out: &mut Vec<PluckerWord>,
        ) {
            if current.len() == degree {
                out.push(PluckerWord::new(current.clone()));
                return;
            }
            for l in letters {
                if current.last().map(|prev| prev.poset_leq(l)).unwrap_or(true) {
                    current.push(l.clone());
                    rec(letters, degree, current, out);
                    current.pop();
                }
            }
        }
        rec(&letters, degree, &mut current, &mut out);
        out
    }
}

/// Options for straightening; the degree cap guards the desk-scale linear
/// algebra.
#[derive(Clone, Copy, Debug)]
pub struct StraightenOptions {
    pub max_degree: usize,
}

impl Default for StraightenOptions {
    fn default() -> Self {
        StraightenOptions { max_degree: 3 }
    }
}

/// A prepared straightening context for one degree: the standard monomials
/// of that degree with their embeddings in reduced basis form. Building it
/// also certifies that the embedded standard monomials are linearly
/// independent.
pub struct Straightener {
    degree: usize,
    standard: Vec<PluckerWord>,
    basis: SpanBasis<PbwMonomial>,
}

impl Straightener {
    pub fn build(alg: &GrassAlgebra, degree: usize, opts: &StraightenOptions) -> Result<Self> {
        if degree > opts.max_degree {
            return Err(Error::DegreeCapExceeded {
                degree,
                cap: opts.max_degree,
            });
        }
        let standard = alg.enumerate_standard(degree);
        let mut basis = SpanBasis::new();
        for word in &standard {
            let embedded = alg.embed_word(word);
            match basis.insert(embedded.into_table()) {
                InsertOutcome::Independent => {}
                InsertOutcome::Dependent(_) => {
                    return Err(Error::BasisContradiction(format!(
                        "standard monomial {} is dependent on earlier ones at degree {degree}",
                        word.render()
                    )));
                }
            }
        }
        Ok(Straightener {
            degree,
            standard,
            basis,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn standard_monomials(&self) -> &[PluckerWord] {
        &self.standard
    }

    /// The unique standard-basis expansion of a formal word, computed by
    /// exact reduction against the embedded standard monomials. Aborts with
    /// an error (rather than guessing) when the system is inconsistent,
    /// since that would contradict the basis property.
    pub fn straighten(
        &self,
        alg: &GrassAlgebra,
        word: &PluckerWord,
    ) -> Result<Vec<(QScalar, PluckerWord)>> {
        if word.len() != self.degree {
            return Err(Error::ShapeMismatch(format!(
                "word of degree {} straightened against a degree-{} table",
                word.len(),
                self.degree
            )));
        }
        let target: SparseVec<PbwMonomial> = alg.embed_word(word).into_table();
        let (residue, coords) = self.basis.reduce(&target);
        if !residue.is_empty() {
            return Err(Error::BasisContradiction(format!(
                "word {} does not lie in the span of the degree-{} standard monomials",
                word.render(),
                self.degree
            )));
        }
        let mut out: Vec<(QScalar, PluckerWord)> = coords
            .into_iter()
            .map(|(i, c)| (c, self.standard[i].clone()))
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(out)
    }
}

/// One-shot straightening against a freshly built table.
pub fn straighten(
    alg: &GrassAlgebra,
    word: &PluckerWord,
    opts: &StraightenOptions,
) -> Result<Vec<(QScalar, PluckerWord)>> {
    let table = Straightener::build(alg, word.len(), opts)?;
    table.straighten(alg, word)
}

/// Render one `coeff * word` line of a standard-basis expansion, in the same
/// coefficient style as localized elements (`q^-2 * [1,2][3,4]`).
pub fn render_expansion_term(coeff: &QScalar, word: &PluckerWord) -> String {
    let mut out = String::new();
    let mono = if word.is_empty() {
        None
    } else {
        Some(word.render())
    };
    crate::qmatrix::push_term(&mut out, true, coeff, mono.as_deref(), true);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn px(alg: &GrassAlgebra, cols: &[usize]) -> PluckerIndex {
        PluckerIndex::new(cols.to_vec(), alg.shape()).unwrap()
    }

    fn word(alg: &GrassAlgebra, lists: &[&[usize]]) -> PluckerWord {
        PluckerWord::new(lists.iter().map(|c| px(alg, c)).collect())
    }

    #[test]
    fn d_value_examples() {
        let g24 = GrassAlgebra::new(2, 4).unwrap();
        assert_eq!(g24.d_value(&px(&g24, &[1, 2])), 0);
        assert_eq!(g24.d_value(&px(&g24, &[3, 4])), 2);
        let g36 = GrassAlgebra::new(3, 6).unwrap();
        assert_eq!(g36.d_value(&px(&g36, &[1, 3, 5])), 1);
    }

    #[test]
    fn embed_examples() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        let m = g.ambient();
        let e12 = g.embed_index(&px(&g, &[1, 2]));
        assert_eq!(e12, m.quantum_minor(&[1, 2], &[1, 2]).unwrap());
        assert_eq!(e12.render(m.shape()), "x[1,1]*x[2,2] - q*x[1,2]*x[2,1]");
        let e13 = g.embed_index(&px(&g, &[1, 3]));
        assert_eq!(e13.render(m.shape()), "x[1,1]*x[2,3] - q*x[1,3]*x[2,1]");
    }

    #[test]
    fn u_commutation_instance_d2() {
        // embed([u][34]) = q^2 embed([34][u]) in G(2,4).
        let g = GrassAlgebra::new(2, 4).unwrap();
        let u = px(&g, &[1, 2]);
        let i34 = px(&g, &[3, 4]);
        let left = g.embed_word(&PluckerWord::new(vec![u.clone(), i34.clone()]));
        let right = g.embed_word(&PluckerWord::new(vec![i34, u]));
        assert_eq!(left, right.scaled(&QScalar::q_pow(2)));
    }

    #[test]
    fn poset_comparisons() {
        let g = GrassAlgebra::new(3, 6).unwrap();
        assert!(px(&g, &[1, 2, 3]).poset_leq(&px(&g, &[4, 5, 6])));
        assert!(px(&g, &[1, 3, 5]).poset_leq(&px(&g, &[2, 4, 5])));
        assert!(!px(&g, &[1, 4, 6]).poset_leq(&px(&g, &[2, 3, 5])));
    }

    #[test]
    fn poset_axioms_up_to_n6() {
        for n in 2..=6 {
            for k in 1..=n {
                let g = GrassAlgebra::new(k, n).unwrap();
                let all = g.plucker_indices();
                for a in &all {
                    assert!(a.poset_leq(a));
                }
                for a in &all {
                    for b in &all {
                        if a.poset_leq(b) && b.poset_leq(a) {
                            assert_eq!(a, b);
                        }
                        for c in &all {
                            if a.poset_leq(b) && b.poset_leq(c) {
                                assert!(a.poset_leq(c));
                            }
                        }
                    }
                }
                let u = g.u_index();
                let w = g.w_index();
                assert!(all.iter().all(|x| u.poset_leq(x) && x.poset_leq(&w)));
            }
        }
    }

    #[test]
    fn standard_enumeration_counts() {
        let g24 = GrassAlgebra::new(2, 4).unwrap();
        assert_eq!(g24.enumerate_standard(1).len(), 6);
        let g36 = GrassAlgebra::new(3, 6).unwrap();
        assert_eq!(g36.enumerate_standard(1).len(), 20);
        assert_eq!(g24.enumerate_standard(0), vec![PluckerWord::empty()]);

        // Degree 2 count agrees with brute force over all ordered pairs.
        let letters = g24.plucker_indices();
        let mut expected = 0usize;
        for a in &letters {
            for b in &letters {
                if a.poset_leq(b) {
                    expected += 1;
                }
            }
        }
        assert_eq!(g24.enumerate_standard(2).len(), expected);
    }

    #[test]
    fn localize_strips_u_letters() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        // [u][34] localizes to q^2 [34] u.
        let w = word(&g, &[&[1, 2], &[3, 4]]);
        let loc = g.localize(QScalar::one(), &w, 0);
        let mut expected = LocalizedElement::zero();
        expected.add_term(word(&g, &[&[3, 4]]), 1, QScalar::q_pow(2));
        assert_eq!(loc, expected);
    }

    #[test]
    fn loc_mul_examples() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        // ([u][u]^-1) * a == a.
        let unit = g.loc_mul(&g.u_power(1), &g.u_power(-1));
        let a = g.letter(&px(&g, &[1, 3]));
        assert_eq!(g.loc_mul(&unit, &a), a);

        // ([13] u^-1)([14] u^-1) = q^-1 [13][14] u^-2.
        let lhs = g.loc_mul(
            &g.loc_mul(&a, &g.u_power(-1)),
            &g.loc_mul(&g.letter(&px(&g, &[1, 4])), &g.u_power(-1)),
        );
        let mut expected = LocalizedElement::zero();
        expected.add_term(word(&g, &[&[1, 3], &[1, 4]]), -2, QScalar::q_pow(-1));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn loc_eq_examples() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        let a = g.letter(&px(&g, &[1, 3]));
        assert!(g.loc_eq(&a, &a));
        let via_u = g.loc_mul(&g.loc_mul(&a, &g.u_power(-1)), &g.u_power(1));
        assert!(g.loc_eq(&via_u, &a));

        // q^{d(I)} [I][u] u^-1 == [u][I] u^-1 for every coordinate.
        for idx in g.plucker_indices() {
            let d = g.d_value(&idx) as i64;
            let i = g.letter(&idx);
            let u = g.u_power(1);
            let lhs = g
                .loc_mul(&g.loc_mul(&i, &u), &g.u_power(-1))
                .scaled(&QScalar::q_pow(d));
            let rhs = g.loc_mul(&g.loc_mul(&u, &i), &g.u_power(-1));
            assert!(g.loc_eq(&lhs, &rhs), "failed for {}", idx.render());
        }
    }

    #[test]
    fn u_commutation_exhaustive_small_shapes() {
        for (k, n) in [(2usize, 4usize), (2, 5), (3, 6)] {
            let g = GrassAlgebra::new(k, n).unwrap();
            let u = g.u_index();
            for idx in g.plucker_indices() {
                let d = g.d_value(&idx) as i64;
                let left = g.embed_word(&PluckerWord::new(vec![u.clone(), idx.clone()]));
                let right = g.embed_word(&PluckerWord::new(vec![idx.clone(), u.clone()]));
                assert_eq!(
                    left,
                    right.scaled(&QScalar::q_pow(d)),
                    "u-commutation failed for {} in G({k},{n})",
                    idx.render()
                );
            }
        }
    }

    #[test]
    fn straighten_standard_word_is_identity() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        let w = word(&g, &[&[1, 3], &[2, 4]]);
        assert!(w.is_standard());
        let out = straighten(&g, &w, &StraightenOptions::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].0.is_one());
        assert_eq!(out[0].1, w);
    }

    #[test]
    fn straighten_34_12_has_forced_leading_coefficient() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        let w = word(&g, &[&[3, 4], &[1, 2]]);
        let out = straighten(&g, &w, &StraightenOptions::default()).unwrap();
        // [34][12] = q^-2 [12][34] exactly: the coefficient is forced by the
        // u-commutation rule with d([34]) = 2.
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, QScalar::q_pow(-2));
        assert_eq!(out[0].1, word(&g, &[&[1, 2], &[3, 4]]));
    }

    #[test]
    fn straighten_round_trips_through_embedding_degree2() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        let table = Straightener::build(&g, 2, &StraightenOptions::default()).unwrap();
        let letters = g.plucker_indices();
        for a in &letters {
            for b in &letters {
                let w = PluckerWord::new(vec![a.clone(), b.clone()]);
                let out = table.straighten(&g, &w).unwrap();
                let mut recombined = NcPoly::zero();
                for (c, s) in &out {
                    recombined = &recombined + &g.embed_word(s).scaled(c);
                }
                assert_eq!(
                    recombined,
                    g.embed_word(&w),
                    "round trip for {}",
                    w.render()
                );
            }
        }
    }

    #[test]
    fn straighten_rejects_degree_beyond_cap() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        let w = word(&g, &[&[1, 2], &[1, 2], &[1, 2], &[1, 2]]);
        let err = straighten(&g, &w, &StraightenOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::DegreeCapExceeded { degree: 4, cap: 3 }
        ));
    }

    #[test]
    fn embedded_standard_monomials_are_independent_degree2() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        // Building the table certifies independence of all embedded
        // degree-2 standard monomials.
        let table = Straightener::build(&g, 2, &StraightenOptions::default()).unwrap();
        assert_eq!(
            table.standard_monomials().len(),
            g.enumerate_standard(2).len()
        );
    }

    #[test]
    fn embed_localized_rejects_negative_powers() {
        let g = GrassAlgebra::new(2, 4).unwrap();
        let a = g.loc_mul(&g.letter(&px(&g, &[1, 3])), &g.u_power(-1));
        assert!(g.embed_localized(&a).is_err());
    }

    #[test]
    fn straightening_aborts_loudly_when_the_basis_property_breaks() {
        // Under the corrupted relation constant the embedded standard
        // monomials no longer span the degree-2 products; the solver must
        // report that instead of guessing.
        let g = GrassAlgebra::with_mode(2, 4, RelationMode::PerturbedDiagonal).unwrap();
        let outcome = Straightener::build(&g, 2, &StraightenOptions::default()).and_then(|t| {
            let letters = g.plucker_indices();
            for a in &letters {
                for b in &letters {
                    t.straighten(&g, &PluckerWord::new(vec![a.clone(), b.clone()]))?;
                }
            }
            Ok(())
        });
        assert!(matches!(outcome, Err(Error::BasisContradiction(_))));
    }
}
