//! Automorphisms of the quantum grassmannian: the column-scaling torus, the
//! row/column/`y` torus acting through dehomogenisation, its faithful
//! canonical form, the diagram automorphism (for `n = 2k`), the
//! `k <-> (n-k)` isomorphism, the order-reversing antiautomorphism, and the
//! solver deciding when a scalar action on Plucker coordinates is realizable
//! by column scalings over the rationals.
//!
//! Letterwise maps on Plucker coordinates are trivially multiplicative on
//! formal words, so the executable content of "is an (anti)automorphism" is
//! respect for the straightening relations: a map is certified by checking
//! `map(straighten(a*b)) = map(a) * map(b)` through the PBW embeddings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dehom::{DehomContext, TElement};
use crate::grassmann::{
    GrassAlgebra, GrassShape, LocalizedElement, PluckerIndex, PluckerWord, Straightener,
};
use crate::linalg::{solve_gf2, solve_integer};
use crate::scalar::QScalar;
use crate::{Error, Result};

/// A column-scaling torus element: one nonzero scalar per column of the
/// ambient quantum matrix algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct H0Element {
    entries: Vec<QScalar>,
}

impl H0Element {
    pub fn new(entries: Vec<QScalar>, shape: &GrassShape) -> Result<Self> {
        if entries.len() != shape.n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} column scalars, got {}",
                shape.n,
                entries.len()
            )));
        }
        if entries.iter().any(QScalar::is_zero) {
            return Err(Error::NotInvertible(
                "torus entries must be nonzero".to_string(),
            ));
        }
        Ok(H0Element { entries })
    }

    pub fn ones(shape: &GrassShape) -> Self {
        H0Element {
            entries: vec![QScalar::one(); shape.n],
        }
    }

    pub fn entries(&self) -> &[QScalar] {
        &self.entries
    }

    /// The scalar multiplying a Plucker coordinate: the product of the
    /// entries over the columns of the index.
    pub fn letter_scalar(&self, index: &PluckerIndex) -> QScalar {
        index
            .cols()
            .iter()
            .fold(QScalar::one(), |acc, &c| &acc * &self.entries[c - 1])
    }
}

/// A torus element acting on `T` by row scalars, column scalars and a `y`
/// scalar: `x[i,j] -> alpha_i beta_j x[i,j]`, `y -> alpha0 y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct H1Element {
    pub alpha0: QScalar,
    pub alpha: Vec<QScalar>,
    pub beta: Vec<QScalar>,
}

impl H1Element {
    pub fn new(alpha0: QScalar, alpha: Vec<QScalar>, beta: Vec<QScalar>) -> Result<Self> {
        if alpha0.is_zero()
            || alpha.iter().any(QScalar::is_zero)
            || beta.iter().any(QScalar::is_zero)
        {
            return Err(Error::NotInvertible(
                "torus entries must be nonzero".to_string(),
            ));
        }
        Ok(H1Element {
            alpha0,
            alpha,
            beta,
        })
    }

    pub fn ones(k: usize, p: usize) -> Self {
        H1Element {
            alpha0: QScalar::one(),
            alpha: vec![QScalar::one(); k],
            beta: vec![QScalar::one(); p],
        }
    }

    fn check_shape(&self, ctx: &DehomContext) -> Result<()> {
        if self.alpha.len() != ctx.k() || self.beta.len() != ctx.p() {
            return Err(Error::ShapeMismatch(format!(
                "torus element sized ({}, {}) used with k={}, p={}",
                self.alpha.len(),
                self.beta.len(),
                ctx.k(),
                ctx.p()
            )));
        }
        Ok(())
    }

    /// The scalar multiplying a Plucker coordinate `[L] = [I|J][u]`:
    /// `alpha0 * alpha_I * beta_J`.
    pub fn letter_scalar(&self, index: &PluckerIndex, ctx: &DehomContext) -> QScalar {
        let minor = ctx.plucker_to_minor(index);
        let mut s = self.alpha0.clone();
        for &i in minor.rows() {
            s = &s * &self.alpha[i - 1];
        }
        for &j in minor.cols() {
            s = &s * &self.beta[j - 1];
        }
        s
    }

    /// Scalars of the action on the generators of `T`, in the fixed order
    /// `x[1,1], .., x[k,p], y`. Two torus elements act identically exactly
    /// when these lists agree.
    pub fn action_scalars(&self, ctx: &DehomContext) -> Result<Vec<QScalar>> {
        self.check_shape(ctx)?;
        let mut out = Vec::with_capacity(ctx.k() * ctx.p() + 1);
        for i in 1..=ctx.k() {
            for j in 1..=ctx.p() {
                out.push(&self.alpha[i - 1] * &self.beta[j - 1]);
            }
        }
        out.push(self.alpha0.clone());
        Ok(out)
    }
}

/// The faithful normal form of a torus action: `beta_p = 1`. Distinct
/// canonical forms act distinctly, and every torus action has exactly one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HCanonical {
    inner: H1Element,
}

impl HCanonical {
    pub fn element(&self) -> &H1Element {
        &self.inner
    }
}

/// Rescale by the kernel element with `lambda = beta_p` to reach the
/// canonical form `(alpha0; alpha_i beta_p; beta_j / beta_p, .., 1)`.
pub fn h1_canonicalize(f: &H1Element) -> Result<HCanonical> {
    let beta_p = f
        .beta
        .last()
        .ok_or_else(|| Error::InvalidShape("torus element with no column part".to_string()))?;
    let inv = beta_p.inverse()?;
    let alpha = f.alpha.iter().map(|a| a * beta_p).collect();
    let mut beta: Vec<QScalar> = f.beta.iter().map(|b| b * &inv).collect();
    *beta.last_mut().unwrap() = QScalar::one();
    Ok(HCanonical {
        inner: H1Element {
            alpha0: f.alpha0.clone(),
            alpha,
            beta,
        },
    })
}

/// The row/column/`y` torus element with the same action as a column-scaling
/// element: `(a_1..a_k; a_k^-1,..,a_1^-1; a_{k+1},..,a_n)`.
pub fn h0_to_h1(g: &H0Element, shape: &GrassShape) -> Result<H1Element> {
    if g.entries.len() != shape.n {
        return Err(Error::ShapeMismatch(format!(
            "expected {} entries, got {}",
            shape.n,
            g.entries.len()
        )));
    }
    let k = shape.k;
    let alpha0 = g.entries[..k]
        .iter()
        .fold(QScalar::one(), |acc, a| &acc * a);
    let mut alpha = Vec::with_capacity(k);
    for i in 1..=k {
        alpha.push(g.entries[k - i].inverse()?);
    }
    let beta = g.entries[k..].to_vec();
    H1Element::new(alpha0, alpha, beta)
}

/// Apply a column-scaling torus element to a localized element.
pub fn h0_apply(g: &H0Element, a: &LocalizedElement, alg: &GrassAlgebra) -> LocalizedElement {
    let u_scalar = g.letter_scalar(&alg.u_index());
    let mut out = LocalizedElement::zero();
    for ((word, upow), coeff) in a.terms() {
        let mut s = coeff.clone();
        for l in word.letters() {
            s = &s * &g.letter_scalar(l);
        }
        s = &s * &u_scalar.pow(*upow).expect("torus entries are nonzero");
        out.add_term(word.clone(), *upow, s);
    }
    out
}

/// Apply a row/column/`y` torus element to a localized element through the
/// dehomogenisation dictionary.
pub fn h1_apply_loc(
    f: &H1Element,
    a: &LocalizedElement,
    ctx: &DehomContext,
) -> Result<LocalizedElement> {
    f.check_shape(ctx)?;
    let mut out = LocalizedElement::zero();
    for ((word, upow), coeff) in a.terms() {
        let mut s = coeff.clone();
        for l in word.letters() {
            s = &s * &f.letter_scalar(l, ctx);
        }
        s = &s * &f.alpha0.pow(*upow)?;
        out.add_term(word.clone(), *upow, s);
    }
    Ok(out)
}

/// Apply a row/column/`y` torus element on the skew Laurent side.
pub fn h1_apply_t(f: &H1Element, t: &TElement, ctx: &DehomContext) -> Result<TElement> {
    f.check_shape(ctx)?;
    let mut out = TElement::zero();
    for ((mono, ypow), coeff) in t.terms() {
        let mut s = &coeff.clone() * &f.alpha0.pow(*ypow)?;
        for (g, e) in mono.letters(ctx.matrix().shape()) {
            let factor = &f.alpha[g.row - 1] * &f.beta[g.col - 1];
            s = &s * &factor.pow(e as i64)?;
        }
        out.add_term(mono.clone(), *ypow, s);
    }
    Ok(out)
}

/// A letterwise map on Plucker coordinates: each letter goes to a scalar
/// times a letter of the target shape, words map letter by letter (in
/// reversed order for antiautomorphisms).
#[derive(Clone, Debug)]
pub struct LetterMap {
    source: GrassShape,
    target: GrassShape,
    images: BTreeMap<PluckerIndex, (QScalar, PluckerIndex)>,
    reverses: bool,
}

impl LetterMap {
    pub fn source(&self) -> &GrassShape {
        &self.source
    }

    pub fn target(&self) -> &GrassShape {
        &self.target
    }

    pub fn reverses(&self) -> bool {
        self.reverses
    }

    pub fn image(&self, l: &PluckerIndex) -> Result<&(QScalar, PluckerIndex)> {
        self.images
            .get(l)
            .ok_or_else(|| Error::UndefinedOnInput(format!("no image for {}", l.render())))
    }

    /// Image of a formal word: the product of the letter scalars together
    /// with the mapped letters, reversed for antiautomorphisms.
    pub fn apply_word(&self, word: &PluckerWord) -> Result<(QScalar, PluckerWord)> {
        let mut scalar = QScalar::one();
        let mut letters = Vec::with_capacity(word.len());
        for l in word.letters() {
            let (c, img) = self.image(l)?;
            scalar = &scalar * c;
            letters.push(img.clone());
        }
        if self.reverses {
            letters.reverse();
        }
        Ok((scalar, PluckerWord::new(letters)))
    }

    /// Image of a localized element. Nonnegative `[u]`-powers are expanded
    /// into explicit letters; negative powers require the map to fix `[u]`
    /// up to a scalar (antiautomorphisms send `[u]` elsewhere, so they are
    /// undefined on negative powers).
    pub fn apply_loc(
        &self,
        a: &LocalizedElement,
        target_alg: &GrassAlgebra,
    ) -> Result<LocalizedElement> {
        let source_u = PluckerIndex::new((1..=self.source.k).collect(), &self.source)?;
        let target_u = PluckerIndex::new((1..=self.target.k).collect(), &self.target)?;
        let mut out = LocalizedElement::zero();
        for ((word, upow), coeff) in a.terms() {
            let (scalar, mapped, out_pow) = if *upow >= 0 {
                let mut expanded = word.clone();
                for _ in 0..*upow {
                    expanded = expanded.concat(&PluckerWord::single(source_u.clone()));
                }
                let (s, w) = self.apply_word(&expanded)?;
                (s, w, 0)
            } else {
                if self.reverses {
                    return Err(Error::UndefinedOnInput(
                        "an antiautomorphism image of u^-1 leaves the localized ring".to_string(),
                    ));
                }
                let (cu, u_img) = self.image(&source_u)?.clone();
                if u_img != target_u {
                    return Err(Error::UndefinedOnInput(format!(
                        "map sends [u] to {} and so does not extend to u^{upow}",
                        u_img.render()
                    )));
                }
                let (s, w) = self.apply_word(word)?;
                (&s * &cu.pow(*upow)?, w, *upow)
            };
            let localized = target_alg.localize(&scalar * coeff, &mapped, out_pow);
            out = out.add(&localized);
        }
        Ok(out)
    }
}

fn w0_sorted(cols: &[usize], n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = cols.iter().map(|&c| n + 1 - c).collect();
    out.sort_unstable();
    out
}

fn complement(cols: &[usize], n: usize) -> Vec<usize> {
    (1..=n).filter(|c| !cols.contains(c)).collect()
}

/// The diagram automorphism `[I] -> [w0(complement of I)]`; only defined
/// when `n = 2k`.
pub fn diagram_tau(alg: &GrassAlgebra) -> Result<LetterMap> {
    let shape = *alg.shape();
    if shape.n != 2 * shape.k {
        return Err(Error::InvalidShape(format!(
            "the diagram automorphism needs n = 2k, got k={}, n={}",
            shape.k, shape.n
        )));
    }
    let mut images = BTreeMap::new();
    for l in alg.plucker_indices() {
        let img = PluckerIndex::new(w0_sorted(&complement(l.cols(), shape.n), shape.n), &shape)?;
        images.insert(l, (QScalar::one(), img));
    }
    Ok(LetterMap {
        source: shape,
        target: shape,
        images,
        reverses: false,
    })
}

/// The isomorphism onto the complementary grassmannian,
/// `[L] -> [w0(complement of L)]` from `G(k,n)` to `G(n-k,n)`.
pub fn kn_isomorphism(alg: &GrassAlgebra) -> Result<(LetterMap, GrassAlgebra)> {
    let shape = *alg.shape();
    let target_alg = GrassAlgebra::with_mode(shape.n - shape.k, shape.n, alg.mode())?;
    let target = *target_alg.shape();
    let mut images = BTreeMap::new();
    for l in alg.plucker_indices() {
        let img = PluckerIndex::new(w0_sorted(&complement(l.cols(), shape.n), shape.n), &target)?;
        images.insert(l, (QScalar::one(), img));
    }
    Ok((
        LetterMap {
            source: shape,
            target,
            images,
            reverses: false,
        },
        target_alg,
    ))
}

/// The order-reversing antiautomorphism `θ([I]) = [w0(I)]`; it swaps the
/// extreme coordinates `[u]` and `[w]`.
pub fn theta(alg: &GrassAlgebra) -> Result<LetterMap> {
    let shape = *alg.shape();
    let mut images = BTreeMap::new();
    for l in alg.plucker_indices() {
        let img = PluckerIndex::new(w0_sorted(l.cols(), shape.n), &shape)?;
        images.insert(l, (QScalar::one(), img));
    }
    Ok(LetterMap {
        source: shape,
        target: shape,
        images,
        reverses: true,
    })
}

/// A descriptor of an element of the automorphism group: a canonical torus
/// part plus an optional diagram flag (allowed only when `n = 2k`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutoSpec {
    pub torus: HCanonical,
    pub diagram: bool,
}

impl AutoSpec {
    /// Build without certification; shape preconditions are still enforced.
    pub fn new_unchecked(torus: HCanonical, diagram: bool, ctx: &DehomContext) -> Result<Self> {
        if diagram && ctx.grass().shape().n != 2 * ctx.k() {
            return Err(Error::InvalidShape(format!(
                "the diagram flag needs n = 2k, got k={}, n={}",
                ctx.k(),
                ctx.grass().shape().n
            )));
        }
        torus.inner.check_shape(ctx)?;
        Ok(AutoSpec { torus, diagram })
    }

    /// Build and certify degree-2 multiplicativity against a straightening
    /// table (see [`certify_degree2`]).
    pub fn certified(
        torus: HCanonical,
        diagram: bool,
        ctx: &DehomContext,
        table: &Straightener,
    ) -> Result<Self> {
        let spec = AutoSpec::new_unchecked(torus, diagram, ctx)?;
        let map = spec.letter_map(ctx)?;
        let report = certify_degree2(&map, ctx.grass(), ctx.grass(), table)?;
        if let Some(first) = report.failures.first() {
            return Err(Error::BasisContradiction(format!(
                "automorphism certification failed: {first}"
            )));
        }
        Ok(spec)
    }

    pub fn identity(ctx: &DehomContext) -> Self {
        AutoSpec {
            torus: HCanonical {
                inner: H1Element::ones(ctx.k(), ctx.p()),
            },
            diagram: false,
        }
    }

    /// The letterwise map: torus scaling then the optional diagram step.
    pub fn letter_map(&self, ctx: &DehomContext) -> Result<LetterMap> {
        let shape = *ctx.grass().shape();
        let mut images = BTreeMap::new();
        for l in ctx.grass().plucker_indices() {
            let scalar = self.torus.inner.letter_scalar(&l, ctx);
            let target = if self.diagram {
                PluckerIndex::new(w0_sorted(&complement(l.cols(), shape.n), shape.n), &shape)?
            } else {
                l.clone()
            };
            images.insert(l, (scalar, target));
        }
        Ok(LetterMap {
            source: shape,
            target: shape,
            images,
            reverses: false,
        })
    }

    pub fn apply(&self, a: &LocalizedElement, ctx: &DehomContext) -> Result<LocalizedElement> {
        self.letter_map(ctx)?.apply_loc(a, ctx.grass())
    }
}

/// Result of one multiplicativity certification run.
#[derive(Clone, Debug, Default)]
pub struct CertifyReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Exhaustive degree-2 certification: for every ordered pair of letters,
/// the image of the straightened product must equal the product of the
/// images, compared through the target embedding.
pub fn certify_degree2(
    map: &LetterMap,
    source: &GrassAlgebra,
    target: &GrassAlgebra,
    table: &Straightener,
) -> Result<CertifyReport> {
    let mut report = CertifyReport::default();
    let letters = source.plucker_indices();
    for a in &letters {
        for b in &letters {
            let word = PluckerWord::new(vec![a.clone(), b.clone()]);
            certify_word(map, source, target, table, &word, &mut report)?;
        }
    }
    Ok(report)
}

/// Spot certification on caller-chosen words of the table's degree.
pub fn certify_words(
    map: &LetterMap,
    source: &GrassAlgebra,
    target: &GrassAlgebra,
    table: &Straightener,
    words: &[PluckerWord],
) -> Result<CertifyReport> {
    let mut report = CertifyReport::default();
    for word in words {
        certify_word(map, source, target, table, word, &mut report)?;
    }
    Ok(report)
}

fn certify_word(
    map: &LetterMap,
    source: &GrassAlgebra,
    target: &GrassAlgebra,
    table: &Straightener,
    word: &PluckerWord,
    report: &mut CertifyReport,
) -> Result<()> {
    let expansion = table.straighten(source, word)?;
    let mut lhs = LocalizedElement::zero();
    for (c, s) in &expansion {
        let (cs, ws) = map.apply_word(s)?;
        lhs = lhs.add(&target.localize(&cs * c, &ws, 0));
    }
    let (cr, wr) = map.apply_word(word)?;
    let rhs = target.localize(cr, &wr, 0);
    report.checked += 1;
    if !target.loc_eq(&lhs, &rhs) {
        report.failures.push(format!(
            "image of {} straightened differs from the image product",
            word.render()
        ));
    }
    Ok(())
}

/// `Some(c)` when `image == c * base` as canonical localized elements with a
/// single term each.
pub fn scalar_multiple(image: &LocalizedElement, base: &LocalizedElement) -> Option<QScalar> {
    if image.num_terms() != 1 || base.num_terms() != 1 {
        return None;
    }
    let (ki, ci) = image.terms().next()?;
    let (kb, cb) = base.terms().next()?;
    if ki != kb {
        return None;
    }
    ci.checked_div(cb).ok()
}

/// Scalars `(lambda, mu)` with `spec([u]) = lambda [u]` and
/// `spec([w]) = mu [w]`. Errors if either image is not a scalar multiple of
/// the same extreme coordinate.
pub fn extreme_scalars(spec: &AutoSpec, ctx: &DehomContext) -> Result<(QScalar, QScalar)> {
    let grass = ctx.grass();
    let mut out = Vec::with_capacity(2);
    for idx in [grass.u_index(), grass.w_index()] {
        let base = grass.letter(&idx);
        let image = spec.apply(&base, ctx)?;
        match scalar_multiple(&image, &base) {
            Some(c) => out.push(c),
            None => {
                return Err(Error::UndefinedOnInput(format!(
                    "image of {} is not a scalar multiple of itself",
                    idx.render()
                )))
            }
        }
    }
    Ok((out[0].clone(), out[1].clone()))
}

/// The column-scaling adjustment `(lambda^-1, 1, .., 1, mu^-1)` that fixes
/// both extreme coordinates after composition.
pub fn adjustment_h0(lambda: &QScalar, mu: &QScalar, shape: &GrassShape) -> Result<H0Element> {
    let mut entries = vec![QScalar::one(); shape.n];
    entries[0] = lambda.inverse()?;
    entries[shape.n - 1] = mu.inverse()?;
    H0Element::new(entries, shape)
}

/// Outcome of the column-scaling realizability solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    Found(H0Element),
    /// No column scaling realizes the targets; names the first infeasible
    /// subsystem ("sign" or "prime <p>").
    Infeasible {
        subsystem: String,
    },
}

/// Decide whether the scalar action `[L] -> target(L) [L]` is realized by a
/// column-scaling element over the rationals. Targets must be nonzero
/// rationals and cover every Plucker coordinate. The multiplicative system
/// splits over the sign group and one integer exponent system per prime;
/// any returned witness is verified by substitution.
pub fn realize_in_h0(
    targets: &BTreeMap<PluckerIndex, QScalar>,
    alg: &GrassAlgebra,
) -> Result<Realization> {
    let shape = *alg.shape();
    let letters = alg.plucker_indices();
    let mut rationals: Vec<(BigInt, BigInt)> = Vec::with_capacity(letters.len());
    for l in &letters {
        let t = targets
            .get(l)
            .ok_or_else(|| Error::UndefinedOnInput(format!("missing target for {}", l.render())))?;
        let Some((num, den)) = t.as_rational() else {
            return Err(Error::UnsupportedScope(format!(
                "target for {} is not rational: {}",
                l.render(),
                t.render_human()
            )));
        };
        if num.is_zero() {
            return Err(Error::NotInvertible(format!(
                "target for {} must be nonzero",
                l.render()
            )));
        }
        rationals.push((num, den));
    }

    // Membership matrix: one row per coordinate, one column per index.
    let membership: Vec<Vec<bool>> = letters
        .iter()
        .map(|l| (1..=shape.n).map(|c| l.contains(c)).collect())
        .collect();
    let int_matrix: Vec<Vec<BigInt>> = membership
        .iter()
        .map(|row| row.iter().map(|&b| BigInt::from(b as i64)).collect())
        .collect();

    // Sign subsystem over GF(2).
    let sign_rhs: Vec<bool> = rationals.iter().map(|(n, _)| n.is_negative()).collect();
    let Some(signs) = solve_gf2(&membership, &sign_rhs) else {
        return Ok(Realization::Infeasible {
            subsystem: "sign".to_string(),
        });
    };

    // One integer exponent subsystem per prime.
    let mut primes: Vec<BigInt> = Vec::new();
    for (num, den) in &rationals {
        for (p, _) in factor_positive(&num.abs()) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        for (p, _) in factor_positive(den) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort();

    let mut exponents: Vec<Vec<BigInt>> = Vec::new();
    for p in &primes {
        let rhs: Vec<BigInt> = rationals
            .iter()
            .map(|(num, den)| {
                BigInt::from(valuation(&num.abs(), p) as i64 - valuation(den, p) as i64)
            })
            .collect();
        match solve_integer(&int_matrix, &rhs) {
            Some(e) => exponents.push(e),
            None => {
                return Ok(Realization::Infeasible {
                    subsystem: format!("prime {p}"),
                })
            }
        }
    }

    // Assemble the witness and verify it by substitution.
    let mut entries = Vec::with_capacity(shape.n);
    for i in 0..shape.n {
        let mut v = QScalar::one();
        for (p, e) in primes.iter().zip(exponents.iter().map(|col| &col[i])) {
            let base = QScalar::integer(p.clone());
            let exp = i64::try_from(e).map_err(|_| {
                Error::UnsupportedScope("exponent too large for witness assembly".to_string())
            })?;
            v = &v * &base.pow(exp)?;
        }
        if signs[i] {
            v = -&v;
        }
        entries.push(v);
    }
    let witness = H0Element::new(entries, &shape)?;
    for (l, (num, den)) in letters.iter().zip(&rationals) {
        let got = witness.letter_scalar(l);
        let want = QScalar::integer(num.clone()).checked_div(&QScalar::integer(den.clone()))?;
        assert_eq!(got, want, "solver witness failed verification");
    }
    Ok(Realization::Found(witness))
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut v = 0;
    let mut n = n.clone();
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

fn factor_positive(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    assert!(n.is_positive(), "factor_positive needs a positive integer");
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::StraightenOptions;

    fn ctx(k: usize, n: usize) -> DehomContext {
        DehomContext::new(k, n).unwrap()
    }

    fn px(alg: &GrassAlgebra, cols: &[usize]) -> PluckerIndex {
        PluckerIndex::new(cols.to_vec(), alg.shape()).unwrap()
    }

    fn qs(v: i64) -> QScalar {
        QScalar::from_int(v)
    }

    #[test]
    fn h0_apply_examples() {
        let c = ctx(2, 4);
        let g_all_ones = H0Element::ones(c.grass().shape());
        let a = c.grass().letter(&px(c.grass(), &[1, 2]));
        assert_eq!(h0_apply(&g_all_ones, &a, c.grass()), a);

        let g = H0Element::new(vec![qs(2), qs(1), qs(1), qs(1)], c.grass().shape()).unwrap();
        let got = h0_apply(&g, &a, c.grass());
        assert_eq!(got, a.scaled(&qs(2)));
    }

    #[test]
    fn h0_apply_is_multiplicative_via_embeddings() {
        let c = ctx(2, 4);
        let g = H0Element::new(
            vec![qs(2), qs(3), QScalar::rational(5, 7).unwrap(), QScalar::q()],
            c.grass().shape(),
        )
        .unwrap();
        let a = c.grass().letter(&px(c.grass(), &[1, 3]));
        let b = c.grass().letter(&px(c.grass(), &[2, 4]));
        let lhs = h0_apply(&g, &c.grass().loc_mul(&a, &b), c.grass());
        let rhs = c
            .grass()
            .loc_mul(&h0_apply(&g, &a, c.grass()), &h0_apply(&g, &b, c.grass()));
        assert!(c.grass().loc_eq(&lhs, &rhs));
    }

    #[test]
    fn canonicalize_is_identity_on_canonical_forms() {
        let f = H1Element::new(qs(3), vec![qs(2), QScalar::q()], vec![qs(5), qs(1)]).unwrap();
        assert_eq!(h1_canonicalize(&f).unwrap().element(), &f);
    }

    #[test]
    fn auto_apply_with_diagram_flag_moves_letters() {
        let c = ctx(3, 6);
        let spec = AutoSpec {
            torus: HCanonical {
                inner: H1Element::ones(3, 3),
            },
            diagram: true,
        };
        let src = c.grass().letter(&px(c.grass(), &[1, 2, 6]));
        let expected = c.grass().letter(&px(c.grass(), &[2, 3, 4]));
        assert_eq!(spec.apply(&src, &c).unwrap(), expected);
    }

    #[test]
    fn h1_action_on_the_worked_example() {
        // f = (1; 2, 1; 1, 1) multiplies [13], [14], [34] by 2 and fixes
        // [12], [23], [24].
        let c = ctx(2, 4);
        let f = H1Element::new(qs(1), vec![qs(2), qs(1)], vec![qs(1), qs(1)]).unwrap();
        let expected = [
            (vec![1usize, 2], 1i64),
            (vec![1, 3], 2),
            (vec![1, 4], 2),
            (vec![2, 3], 1),
            (vec![2, 4], 1),
            (vec![3, 4], 2),
        ];
        for (cols, factor) in expected {
            let l = px(c.grass(), &cols);
            let got = h1_apply_loc(&f, &c.grass().letter(&l), &c).unwrap();
            assert_eq!(
                got,
                c.grass().letter(&l).scaled(&qs(factor)),
                "action on {:?}",
                cols
            );
        }
    }

    #[test]
    fn h1_routes_agree_through_the_dictionary() {
        let c = ctx(2, 4);
        let f = H1Element::new(
            QScalar::q(),
            vec![qs(2), QScalar::q_pow(-1)],
            vec![qs(3), qs(5)],
        )
        .unwrap();
        for l in c.grass().plucker_indices() {
            let loc = c.grass().letter(&l);
            let via_loc = c.forward(&h1_apply_loc(&f, &loc, &c).unwrap()).unwrap();
            let via_t = h1_apply_t(&f, &c.forward(&loc).unwrap(), &c).unwrap();
            assert_eq!(via_loc, via_t, "routes disagree on {}", l.render());
        }
    }

    #[test]
    fn h0_to_h1_formula_and_agreement() {
        let c = ctx(2, 4);
        let g = H0Element::new(vec![qs(2), qs(3), qs(5), qs(7)], c.grass().shape()).unwrap();
        let f = h0_to_h1(&g, c.grass().shape()).unwrap();
        assert_eq!(f.alpha0, qs(6));
        assert_eq!(
            f.alpha,
            vec![qs(3).inverse().unwrap(), qs(2).inverse().unwrap()]
        );
        assert_eq!(f.beta, vec![qs(5), qs(7)]);
        for l in c.grass().plucker_indices() {
            let a = c.grass().letter(&l);
            assert_eq!(
                h0_apply(&g, &a, c.grass()),
                h1_apply_loc(&f, &a, &c).unwrap(),
                "disagreement on {}",
                l.render()
            );
        }
    }

    #[test]
    fn canonicalize_kills_kernel_elements() {
        let c = ctx(2, 4);
        let lam = QScalar::q();
        let kernel = H1Element::new(
            qs(1),
            vec![lam.clone(), lam.clone()],
            vec![lam.inverse().unwrap(), lam.inverse().unwrap()],
        )
        .unwrap();
        let canon = h1_canonicalize(&kernel).unwrap();
        assert_eq!(canon.element(), &H1Element::ones(2, 2));
        // Kernel elements act as the identity on the generators of T.
        assert_eq!(
            kernel.action_scalars(&c).unwrap(),
            H1Element::ones(2, 2).action_scalars(&c).unwrap()
        );

        // Composing with a kernel element does not change the canonical form.
        let f = H1Element::new(qs(5), vec![qs(2), qs(3)], vec![qs(7), qs(11)]).unwrap();
        let composed = H1Element::new(
            &f.alpha0 * &qs(1),
            f.alpha.iter().map(|a| a * &lam).collect(),
            f.beta.iter().map(|b| b * &lam.inverse().unwrap()).collect(),
        )
        .unwrap();
        assert_eq!(
            h1_canonicalize(&f).unwrap(),
            h1_canonicalize(&composed).unwrap()
        );
        // And the canonical form acts identically.
        assert_eq!(
            f.action_scalars(&c).unwrap(),
            h1_canonicalize(&f)
                .unwrap()
                .element()
                .action_scalars(&c)
                .unwrap()
        );
    }

    #[test]
    fn realize_all_ones() {
        let c = ctx(2, 4);
        let targets: BTreeMap<PluckerIndex, QScalar> = c
            .grass()
            .plucker_indices()
            .into_iter()
            .map(|l| (l, qs(1)))
            .collect();
        match realize_in_h0(&targets, c.grass()).unwrap() {
            Realization::Found(g) => {
                for l in c.grass().plucker_indices() {
                    assert!(g.letter_scalar(&l).is_one());
                }
            }
            Realization::Infeasible { .. } => panic!("all-ones must be realizable"),
        }
    }

    #[test]
    fn realize_worked_example_is_infeasible_at_prime_2() {
        let c = ctx(2, 4);
        let table = [
            (vec![1usize, 2], 1i64),
            (vec![1, 3], 2),
            (vec![1, 4], 2),
            (vec![2, 3], 1),
            (vec![2, 4], 1),
            (vec![3, 4], 2),
        ];
        let targets: BTreeMap<PluckerIndex, QScalar> = table
            .iter()
            .map(|(cols, v)| (px(c.grass(), cols), qs(*v)))
            .collect();
        assert_eq!(
            realize_in_h0(&targets, c.grass()).unwrap(),
            Realization::Infeasible {
                subsystem: "prime 2".to_string()
            }
        );
    }

    #[test]
    fn realize_recovers_a_generated_action() {
        let c = ctx(2, 4);
        let g = H0Element::new(vec![qs(2), qs(3), qs(1), qs(1)], c.grass().shape()).unwrap();
        let targets: BTreeMap<PluckerIndex, QScalar> = c
            .grass()
            .plucker_indices()
            .into_iter()
            .map(|l| {
                let s = g.letter_scalar(&l);
                (l, s)
            })
            .collect();
        match realize_in_h0(&targets, c.grass()).unwrap() {
            Realization::Found(h) => {
                for l in c.grass().plucker_indices() {
                    assert_eq!(h.letter_scalar(&l), g.letter_scalar(&l));
                }
            }
            Realization::Infeasible { .. } => panic!("generated targets must be realizable"),
        }
    }

    #[test]
    fn realize_rejects_non_rational_targets() {
        let c = ctx(2, 4);
        let mut targets: BTreeMap<PluckerIndex, QScalar> = c
            .grass()
            .plucker_indices()
            .into_iter()
            .map(|l| (l, qs(1)))
            .collect();
        targets.insert(px(c.grass(), &[1, 2]), QScalar::q());
        assert!(matches!(
            realize_in_h0(&targets, c.grass()),
            Err(Error::UnsupportedScope(_))
        ));
    }

    #[test]
    fn diagram_tau_examples() {
        let g36 = GrassAlgebra::new(3, 6).unwrap();
        let tau = diagram_tau(&g36).unwrap();
        let (c, img) = tau.image(&px(&g36, &[1, 2, 6])).unwrap();
        assert!(c.is_one());
        assert_eq!(*img, px(&g36, &[2, 3, 4]));
        // u is fixed, and tau is an involution on all twenty coordinates.
        let (_, u_img) = tau.image(&g36.u_index()).unwrap();
        assert_eq!(*u_img, g36.u_index());
        for l in g36.plucker_indices() {
            let (_, once) = tau.image(&l).unwrap();
            let (_, twice) = tau.image(once).unwrap();
            assert_eq!(*twice, l);
        }
        assert!(diagram_tau(&GrassAlgebra::new(2, 5).unwrap()).is_err());
    }

    #[test]
    fn kn_isomorphism_examples() {
        let g25 = GrassAlgebra::new(2, 5).unwrap();
        let (map, target) = kn_isomorphism(&g25).unwrap();
        assert_eq!(target.shape().k, 3);
        let (_, img) = map.image(&px(&g25, &[1, 2])).unwrap();
        assert_eq!(*img, px(&target, &[1, 2, 3]));
        let (_, img) = map.image(&px(&g25, &[4, 5])).unwrap();
        assert_eq!(*img, px(&target, &[3, 4, 5]));
        // [u] goes to the target [u'].
        let (_, u_img) = map.image(&g25.u_index()).unwrap();
        assert_eq!(*u_img, target.u_index());
    }

    #[test]
    fn theta_examples() {
        let g24 = GrassAlgebra::new(2, 4).unwrap();
        let th = theta(&g24).unwrap();
        let (_, img) = th.image(&px(&g24, &[1, 2])).unwrap();
        assert_eq!(*img, px(&g24, &[3, 4]));
        let (_, img) = th.image(&px(&g24, &[1, 3])).unwrap();
        assert_eq!(*img, px(&g24, &[2, 4]));
        // theta(theta(w)) = w for degree <= 2 words: w0 is an involution and
        // the double reversal restores the order.
        let letters = g24.plucker_indices();
        for a in &letters {
            for b in &letters {
                let w = PluckerWord::new(vec![a.clone(), b.clone()]);
                let (_, once) = th.apply_word(&w).unwrap();
                let (_, twice) = th.apply_word(&once).unwrap();
                assert_eq!(twice, w);
            }
        }
    }

    #[test]
    fn theta_is_an_antiautomorphism_on_pairs() {
        let g24 = GrassAlgebra::new(2, 4).unwrap();
        let th = theta(&g24).unwrap();
        let table = Straightener::build(&g24, 2, &StraightenOptions::default()).unwrap();
        let report = certify_degree2(&th, &g24, &g24, &table).unwrap();
        assert_eq!(report.checked, 36);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn certification_accepts_the_pair_swap_that_is_the_diagram_map() {
        // Swapping [14] and [23] while fixing everything else is exactly the
        // diagram automorphism of G(2,4); certification accepts it.
        let g24 = GrassAlgebra::new(2, 4).unwrap();
        let tau = diagram_tau(&g24).unwrap();
        let (_, img) = tau.image(&px(&g24, &[1, 4])).unwrap();
        assert_eq!(*img, px(&g24, &[2, 3]));
        let table = Straightener::build(&g24, 2, &StraightenOptions::default()).unwrap();
        let report = certify_degree2(&tau, &g24, &g24, &table).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn certification_catches_a_wrong_map() {
        // Scaling only [34] by q cannot respect the quadratic relation that
        // ties [12][34] to the other products.
        let g24 = GrassAlgebra::new(2, 4).unwrap();
        let mut images = BTreeMap::new();
        for l in g24.plucker_indices() {
            images.insert(l.clone(), (QScalar::one(), l));
        }
        let a = px(&g24, &[3, 4]);
        images.insert(a.clone(), (QScalar::q(), a));
        let bad = LetterMap {
            source: *g24.shape(),
            target: *g24.shape(),
            images,
            reverses: false,
        };
        let table = Straightener::build(&g24, 2, &StraightenOptions::default()).unwrap();
        let report = certify_degree2(&bad, &g24, &g24, &table).unwrap();
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn auto_spec_apply_and_extremes() {
        let c = ctx(2, 4);
        let id = AutoSpec::identity(&c);
        let a = c.grass().letter(&px(c.grass(), &[1, 3]));
        assert_eq!(id.apply(&a, &c).unwrap(), a);

        let torus = h1_canonicalize(
            &H1Element::new(qs(3), vec![qs(2), qs(1)], vec![qs(1), qs(5)]).unwrap(),
        )
        .unwrap();
        let spec = AutoSpec::new_unchecked(torus, true, &c).unwrap();
        let (lambda, mu) = extreme_scalars(&spec, &c).unwrap();
        let h = adjustment_h0(&lambda, &mu, c.grass().shape()).unwrap();
        let composed_u = h0_apply(
            &h,
            &spec
                .apply(&c.grass().letter(&c.grass().u_index()), &c)
                .unwrap(),
            c.grass(),
        );
        assert_eq!(composed_u, c.grass().letter(&c.grass().u_index()));
        let composed_w = h0_apply(
            &h,
            &spec
                .apply(&c.grass().letter(&c.grass().w_index()), &c)
                .unwrap(),
            c.grass(),
        );
        assert_eq!(composed_w, c.grass().letter(&c.grass().w_index()));
    }

    #[test]
    fn diagram_flag_requires_square_split() {
        let c = ctx(2, 5);
        let torus = HCanonical {
            inner: H1Element::ones(2, 3),
        };
        assert!(AutoSpec::new_unchecked(torus, true, &c).is_err());
    }

    #[test]
    fn certified_constructor_accepts_torus_and_diagram_specs() {
        let c = ctx(2, 4);
        let table = Straightener::build(c.grass(), 2, &StraightenOptions::default()).unwrap();
        let torus = h1_canonicalize(
            &H1Element::new(qs(3), vec![qs(2), QScalar::q()], vec![qs(1), qs(5)]).unwrap(),
        )
        .unwrap();
        let spec = AutoSpec::certified(torus.clone(), false, &c, &table).unwrap();
        assert!(!spec.diagram);
        let spec = AutoSpec::certified(torus, true, &c, &table).unwrap();
        assert!(spec.diagram);
    }

    #[test]
    fn closed_field_scaling_instances() {
        // With a k-th root supplied explicitly, a single-row scaling is
        // realized by a column scaling: g has b^-(k-1) at position k+1-i and
        // b elsewhere.
        let c = ctx(2, 4);
        let b = qs(2);
        let alpha_i = &b * &b; // b^k with k = 2, row i = 1.
        let f = H1Element::new(qs(1), vec![alpha_i, qs(1)], vec![qs(1), qs(1)]).unwrap();
        let g = H0Element::new(
            vec![b.clone(), b.inverse().unwrap(), b.clone(), b.clone()],
            c.grass().shape(),
        )
        .unwrap();
        for l in c.grass().plucker_indices() {
            let a = c.grass().letter(&l);
            assert_eq!(
                h0_apply(&g, &a, c.grass()),
                h1_apply_loc(&f, &a, &c).unwrap(),
                "disagreement on {}",
                l.render()
            );
        }

        // The all-y case: alpha0 = b^k realized by g = (b, .., b).
        let f = H1Element::new(&b * &b, vec![qs(1), qs(1)], vec![qs(1), qs(1)]).unwrap();
        let g =
            H0Element::new(vec![b.clone(), b.clone(), b.clone(), b], c.grass().shape()).unwrap();
        for l in c.grass().plucker_indices() {
            let a = c.grass().letter(&l);
            assert_eq!(
                h0_apply(&g, &a, c.grass()),
                h1_apply_loc(&f, &a, &c).unwrap()
            );
        }
    }
}
