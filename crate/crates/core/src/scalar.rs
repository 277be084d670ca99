//! The coefficient field `Q(q)`: rational functions in the formal deformation
//! parameter `q`, stored as a canonical fraction of integer polynomials.
//!
//! Canonical form: `gcd(num, den) = 1` (including integer content), the
//! denominator is nonzero with positive leading coefficient, and Laurent
//! inputs such as `q^-3` are folded into the fraction. Two equal field
//! elements therefore have identical representations and equality is a
//! plain structural comparison.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Integer-coefficient univariate polynomial in `q`, coefficients stored in
/// ascending degree with no trailing zero. The empty vector is the zero
/// polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        ZPoly::from_coeffs(vec![c])
    }

    /// `c * q^e` with `e >= 0`.
    pub fn monomial(c: BigInt, e: usize) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        ZPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Number of trailing zero coefficients, i.e. the exact power of `q`
    /// dividing the polynomial. Zero for the zero polynomial.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Multiply by `q^e` (`e >= 0`).
    pub fn shift_up(&self, e: usize) -> Self {
        if self.is_zero() || e == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    /// Divide by `q^e`; requires `valuation() >= e`.
    pub fn shift_down(&self, e: usize) -> Self {
        if e == 0 {
            return self.clone();
        }
        debug_assert!(self.valuation() >= e);
        ZPoly::from_coeffs(self.coeffs[e..].to_vec())
    }

    /// `Some((c, e))` when the polynomial is the single term `c * q^e`.
    pub fn as_monomial(&self) -> Option<(&BigInt, usize)> {
        let e = self.valuation();
        if !self.is_zero() && self.coeffs.len() == e + 1 {
            Some((&self.coeffs[e], e))
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divide all coefficients by `c`, which must divide exactly.
    fn div_content(&self, c: &BigInt) -> Self {
        debug_assert!(!c.is_zero());
        ZPoly {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    fn primitive(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            self.clone()
        } else {
            self.div_content(&c)
        }
    }

    pub fn neg(&self) -> Self {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            coeffs.push(a + b);
        }
        ZPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        ZPoly::from_coeffs(coeffs)
    }

    /// Exact division; `divisor` must divide `self` with zero remainder.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "exact_div by zero polynomial");
        if self.is_zero() {
            return ZPoly::zero();
        }
        if let Some((c, e)) = divisor.as_monomial() {
            return self.shift_down(e).div_content(c);
        }
        let dd = divisor.degree().unwrap();
        let dn = self.degree().expect("degree checked above");
        assert!(dn >= dd, "exact_div: divisor degree exceeds dividend");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        for i in (dd..=dn).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let (qc, r) = rem[i].div_rem(&lead);
            assert!(r.is_zero(), "exact_div: non-exact division");
            for j in 0..dd {
                let t = &qc * &divisor.coeffs[j];
                rem[i - dd + j] -= t;
            }
            rem[i] = BigInt::zero();
            quot[i - dd] = qc;
        }
        assert!(
            rem.iter().all(|c| c.is_zero()),
            "exact_div: nonzero remainder"
        );
        ZPoly::from_coeffs(quot)
    }

    /// Pseudo-remainder of `self` by `divisor` (any associate works for the
    /// primitive remainder sequence below).
    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("pseudo_rem by zero");
        let lead = divisor.leading().unwrap();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let top = r.leading().unwrap().clone();
            r = r.scale(lead).sub(&divisor.shift_up(dr - dd).scale(&top));
        }
        r
    }

    /// Polynomial gcd over `Z[q]` including integer content, normalized to a
    /// positive leading coefficient. Uses the primitive pseudo-remainder
    /// sequence; inner polynomials are re-primitivized every round to keep
    /// coefficients small.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.positive_leading();
        }
        if b.is_zero() {
            return a.positive_leading();
        }
        let content_gcd = a.content().gcd(&b.content());
        // Fast path for constant arguments.
        if a.degree() == Some(0) || b.degree() == Some(0) {
            return ZPoly::constant(content_gcd);
        }
        let mut p = a.primitive();
        let mut r = b.primitive();
        while !r.is_zero() {
            let next = p.pseudo_rem(&r).primitive();
            p = r;
            r = next;
        }
        p.positive_leading().scale(&content_gcd)
    }

    fn positive_leading(&self) -> Self {
        match self.leading() {
            Some(l) if l.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Render with a configurable separator style: `spaced` gives
    /// `"q^2 - 1"`, otherwise `"q^2-1"`. Terms are listed by descending
    /// degree.
    pub fn render(&self, spaced: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for e in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[e];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    out.push('-');
                }
                first = false;
            } else if c.is_negative() {
                out.push_str(if spaced { " - " } else { "-" });
            } else {
                out.push_str(if spaced { " + " } else { "+" });
            }
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => out.push_str(&mag.to_string()),
                (_, true) => {}
                (_, false) => {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
            }
            if e == 1 {
                out.push('q');
            } else if e >= 2 {
                out.push_str(&format!("q^{e}"));
            }
        }
        out
    }
}

/// An element of the field `Q(q)` in canonical fraction form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QScalar {
    num: ZPoly,
    den: ZPoly,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar {
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        QScalar {
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        QScalar::integer(BigInt::from(v))
    }

    pub fn integer(v: BigInt) -> Self {
        QScalar {
            num: ZPoly::constant(v),
            den: ZPoly::one(),
        }
    }

    /// The rational number `a / b`; `b` must be nonzero.
    pub fn rational(a: i64, b: i64) -> Result<Self> {
        QScalar::from_ratio(
            ZPoly::constant(BigInt::from(a)),
            ZPoly::constant(BigInt::from(b)),
        )
    }

    /// The generator `q`.
    pub fn q() -> Self {
        QScalar {
            num: ZPoly::monomial(BigInt::one(), 1),
            den: ZPoly::one(),
        }
    }

    /// `q^e` for any integer `e`; `q_pow(a) * q_pow(b) == q_pow(a + b)`.
    pub fn q_pow(e: i64) -> Self {
        if e >= 0 {
            QScalar {
                num: ZPoly::monomial(BigInt::one(), e as usize),
                den: ZPoly::one(),
            }
        } else {
            QScalar {
                num: ZPoly::one(),
                den: ZPoly::monomial(BigInt::one(), (-e) as usize),
            }
        }
    }

    /// The ubiquitous commutation coefficient `q - q^-1 = (q^2 - 1)/q`.
    pub fn q_minus_qinv() -> Self {
        &QScalar::q() - &QScalar::q_pow(-1)
    }

    /// Build from a numerator/denominator pair, normalizing to canonical
    /// form. Errors when the denominator is zero.
    pub fn from_ratio(num: ZPoly, den: ZPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QScalar::normalized(num, den))
    }

    fn normalized(mut num: ZPoly, mut den: ZPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return QScalar::zero();
        }
        let v = num.valuation().min(den.valuation());
        if v > 0 {
            num = num.shift_down(v);
            den = den.shift_down(v);
        }
        let g = ZPoly::gcd(&num, &den);
        if g.degree() != Some(0) || !g.leading().unwrap().is_one() {
            num = num.exact_div(&g);
            den = den.exact_div(&g);
        }
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        QScalar { num, den }
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == ZPoly::one() && self.den == ZPoly::one()
    }

    /// `Some((num, den))` when the value is a rational constant.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        if self.num.degree().is_some_and(|d| d > 0) || self.den.degree().is_some_and(|d| d > 0) {
            return None;
        }
        let n = self
            .num
            .coeffs()
            .first()
            .cloned()
            .unwrap_or_else(BigInt::zero);
        let d = self
            .den
            .coeffs()
            .first()
            .cloned()
            .unwrap_or_else(BigInt::one);
        Some((n, d))
    }

    /// `Some((c, e))` when the value is the Laurent monomial `c * q^e` with
    /// integer `c` (denominator a plain power of `q`).
    pub fn as_laurent_monomial(&self) -> Option<(BigInt, i64)> {
        let (nc, ne) = self.num.as_monomial()?;
        let (dc, de) = self.den.as_monomial()?;
        if !dc.is_one() {
            return None;
        }
        Some((nc.clone(), ne as i64 - de as i64))
    }

    pub fn checked_div(&self, other: &QScalar) -> Result<QScalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QScalar::normalized(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inverse(&self) -> Result<QScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QScalar::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<QScalar> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = QScalar::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Complexity measure used by pivot selection in exact elimination.
    pub fn complexity(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    /// Human-readable rendering, e.g. `q^2 - 1` or `(q^2 - 1)/(q)`.
    pub fn render_human(&self) -> String {
        if self.den == ZPoly::one() {
            self.num.render(true)
        } else {
            format!("({})/({})", self.num.render(true), self.den.render(true))
        }
    }

    /// Compact bracketed exact form used in JSON reports, e.g. `(q^2-1)/(q)`.
    pub fn render_exact(&self) -> String {
        if self.den == ZPoly::one() {
            format!("({})", self.num.render(false))
        } else {
            format!("({})/({})", self.num.render(false), self.den.render(false))
        }
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_human())
    }
}

impl Add for &QScalar {
    type Output = QScalar;

    fn add(self, other: &QScalar) -> QScalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return QScalar::normalized(self.num.add(&other.num), self.den.clone());
        }
        QScalar::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
}

impl Sub for &QScalar {
    type Output = QScalar;

    fn sub(self, other: &QScalar) -> QScalar {
        self + &(-other)
    }
}

impl Mul for &QScalar {
    type Output = QScalar;

    fn mul(self, other: &QScalar) -> QScalar {
        if self.is_zero() || other.is_zero() {
            return QScalar::zero();
        }
        QScalar::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }
}

impl Neg for &QScalar {
    type Output = QScalar;

    fn neg(self) -> QScalar {
        QScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}
