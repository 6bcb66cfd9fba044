//! Sparse bivariate Laurent polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots;

/// Exponent vector of a monomial `z1^a1 z2^a2`.
pub type Exponent = [i64; 2];

/// `sum lambda_a z^a` over a finite support; every stored coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialJson", into = "PolynomialJson")]
pub struct LaurentPolynomial {
    terms: BTreeMap<Exponent, Complex64>,
}

/// Which variable stays free when restricting to a torus fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    First,
    Second,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::First => 0,
            Axis::Second => 1,
        }
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::First => Axis::Second,
            Axis::Second => Axis::First,
        }
    }
}

impl LaurentPolynomial {
    /// Builds a polynomial, summing repeated exponents and dropping zero terms.
    pub fn new(terms: impl IntoIterator<Item = (Exponent, Complex64)>) -> Result<Self> {
        let mut map: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (exp, coef) in terms {
            *map.entry(exp).or_insert(Complex64::new(0.0, 0.0)) += coef;
        }
        map.retain(|_, c| c.norm() != 0.0);
        if map.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        Ok(Self { terms: map })
    }

    /// Convenience constructor for real coefficients: `(a1, a2, coefficient)`.
    pub fn from_real(terms: &[(i64, i64, f64)]) -> Result<Self> {
        Self::new(terms.iter().map(|&(a, b, c)| ([a, b], Complex64::new(c, 0.0))))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: Exponent) -> Option<Complex64> {
        self.terms.get(&exp).copied()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().copied().collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        Self::new(self.terms.iter().map(|(e, c)| (*e, c * factor)))
    }

    /// Componentwise minimum of the support.
    pub fn min_exponent(&self) -> Exponent {
        let mut m = [i64::MAX, i64::MAX];
        for e in self.terms.keys() {
            m[0] = m[0].min(e[0]);
            m[1] = m[1].min(e[1]);
        }
        m
    }

    /// Multiplies by `z^shift`.
    pub fn shift(&self, shift: Exponent) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0] + shift[0], e[1] + shift[1]], *c))
                .collect(),
        }
    }

    /// Divides by the componentwise-minimal monomial so every exponent is nonnegative.
    pub fn clear_denominators(&self) -> Self {
        let m = self.min_exponent();
        self.shift([-m[0], -m[1]])
    }

    /// `sum lambda_a z^a`; both coordinates must be nonzero.
    pub fn evaluate(&self, z: [Complex64; 2]) -> Result<Complex64> {
        if z[0].norm() == 0.0 || z[1].norm() == 0.0 {
            return Err(Error::OffTorus);
        }
        Ok(self.evaluate_unchecked(z))
    }

    pub(crate) fn evaluate_unchecked(&self, z: [Complex64; 2]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * z[0].powi(e[0] as i32) * z[1].powi(e[1] as i32))
            .sum()
    }

    /// `sum |lambda_a| |z^a|`, the natural scale for residual checks at `z`.
    pub fn term_magnitude_sum(&self, z: [Complex64; 2]) -> f64 {
        let (l0, l1) = (z[0].norm().ln(), z[1].norm().ln());
        self.terms
            .iter()
            .map(|(e, c)| c.norm() * (e[0] as f64 * l0 + e[1] as f64 * l1).exp())
            .sum()
    }

    /// Restricts to the fiber where the non-free variable equals `fixed`.
    pub fn fiber_restrict(&self, free: Axis, fixed: Complex64) -> Result<UnivariateComplexPoly> {
        if fixed.norm() == 0.0 {
            return Err(Error::OffTorus);
        }
        let fi = free.index();
        let oi = free.other().index();
        let mut grouped: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (e, c) in &self.terms {
            *grouped.entry(e[fi]).or_insert(Complex64::new(0.0, 0.0)) += c * fixed.powi(e[oi] as i32);
        }
        UnivariateComplexPoly::from_sparse(&grouped)
    }

    /// Degree after clearing denominators by the componentwise-minimal monomial.
    pub fn total_degree(&self) -> i64 {
        let m = self.min_exponent();
        self.terms
            .keys()
            .map(|e| (e[0] - m[0]) + (e[1] - m[1]))
            .max()
            .unwrap_or(0)
    }

    /// Splits `f(x + iy)` into real and imaginary polynomials in `(x1, x2, y1, y2)`.
    pub fn realify(&self) -> Result<RealPair> {
        if self.terms.keys().any(|e| e[0] < 0 || e[1] < 0) {
            return Err(Error::NegativeExponent);
        }
        let mut acc: BTreeMap<[u32; 4], Complex64> = BTreeMap::new();
        for (e, lambda) in &self.terms {
            let (a1, a2) = (e[0] as u32, e[1] as u32);
            for k1 in 0..=a1 {
                for k2 in 0..=a2 {
                    let binom = binomial(a1, k1) * binomial(a2, k2);
                    let unit = i_power(k1 + k2);
                    let key = [a1 - k1, a2 - k2, k1, k2];
                    *acc.entry(key).or_insert(Complex64::new(0.0, 0.0)) += lambda * unit * binom;
                }
            }
        }
        let mut re_part = RealPoly::default();
        let mut im_part = RealPoly::default();
        for (key, c) in acc {
            if c.re != 0.0 {
                re_part.terms.insert(key, c.re);
            }
            if c.im != 0.0 {
                im_part.terms.insert(key, c.im);
            }
        }
        Ok(RealPair { re_part, im_part })
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn i_power(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (name, p) in [("z1", e[0]), ("z2", e[1])] {
                match p {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: [i64; 2],
    coef: [f64; 2],
}

impl TryFrom<PolynomialJson> for LaurentPolynomial {
    type Error = Error;

    fn try_from(value: PolynomialJson) -> Result<Self> {
        Self::new(
            value
                .terms
                .into_iter()
                .map(|t| (t.exp, Complex64::new(t.coef[0], t.coef[1]))),
        )
    }
}

impl From<LaurentPolynomial> for PolynomialJson {
    fn from(p: LaurentPolynomial) -> Self {
        PolynomialJson {
            terms: p
                .terms
                .into_iter()
                .map(|(exp, c)| TermJson { exp, coef: [c.re, c.im] })
                .collect(),
        }
    }
}

/// Dense univariate polynomial `w^shift * sum coeffs[k] w^k` with `coeffs[0] != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariateComplexPoly {
    coeffs: Vec<Complex64>,
    shift: i64,
}

impl UnivariateComplexPoly {
    /// Coefficients whose magnitude is below this fraction of the largest one
    /// are treated as cancelled at either end of the dense list.
    const CANCELLATION: f64 = 1e-14;

    fn from_sparse(grouped: &BTreeMap<i64, Complex64>) -> Result<Self> {
        let scale = grouped.values().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::DegenerateFiber);
        }
        let cutoff = scale * Self::CANCELLATION;
        let significant: Vec<(i64, Complex64)> = grouped
            .iter()
            .filter(|(_, c)| c.norm() > cutoff)
            .map(|(k, c)| (*k, *c))
            .collect();
        let lo = significant.first().map(|p| p.0).ok_or(Error::DegenerateFiber)?;
        let hi = significant.last().map(|p| p.0).unwrap_or(lo);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (k, c) in grouped {
            if (lo..=hi).contains(k) {
                coeffs[(k - lo) as usize] = *c;
            }
        }
        Ok(Self { coeffs, shift: lo })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Power of `w` factored out so that the constant coefficient is nonzero.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates the full fiber polynomial `w^shift * p(w)`.
    pub fn evaluate(&self, w: Complex64) -> Complex64 {
        roots::horner(&self.coeffs, w) * w.powi(self.shift as i32)
    }

    /// Roots of the shifted polynomial; all of them are nonzero.
    pub fn roots(&self) -> Vec<Complex64> {
        roots::roots(&self.coeffs)
    }
}

/// Sparse real polynomial in `(x1, x2, y1, y2)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RealPoly {
    pub terms: BTreeMap<[u32; 4], f64>,
}

impl RealPoly {
    pub fn evaluate(&self, v: [f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * (0..4).map(|i| v[i].powi(e[i] as i32)).product::<f64>())
            .sum()
    }
}

/// Real and imaginary parts of a polynomial under `z = x + iy`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealPair {
    pub re_part: RealPoly,
    pub im_part: RealPoly,
}

impl RealPair {
    pub fn evaluate(&self, x: [f64; 2], y: [f64; 2]) -> Complex64 {
        let v = [x[0], x[1], y[0], y[1]];
        Complex64::new(self.re_part.evaluate(v), self.im_part.evaluate(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line() -> LaurentPolynomial {
        LaurentPolynomial::from_real(&[(1, 0, 1.0), (0, 1, 1.0), (0, 0, 1.0)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = line();
        assert!((f.evaluate([c(1.0, 0.0), c(1.0, 0.0)]).unwrap() - 3.0).norm() < 1e-15);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let w2 = Complex64::from_polar(1.0, 4.0 * PI / 3.0);
        assert!(f.evaluate([w, w2]).unwrap().norm() < 1e-14);
        let g = LaurentPolynomial::from_real(&[(1, -1, 2.0)]).unwrap();
        assert!((g.evaluate([c(3.0, 0.0), c(2.0, 0.0)]).unwrap() - 3.0).norm() < 1e-15);
    }

    #[test]
    fn evaluate_rejects_zero_coordinate() {
        assert_eq!(line().evaluate([c(0.0, 0.0), c(1.0, 0.0)]), Err(Error::OffTorus));
    }

    #[test]
    fn construction_drops_zero_and_merges() {
        let f = LaurentPolynomial::new([([1, 0], c(1.0, 0.0)), ([1, 0], c(-1.0, 0.0)), ([0, 0], c(2.0, 0.0))]).unwrap();
        assert_eq!(f.term_count(), 1);
        assert!(LaurentPolynomial::from_real(&[(1, 1, 0.0)]).is_err());
    }

    #[test]
    fn fiber_examples() {
        let p = line().fiber_restrict(Axis::First, c(1.0, 0.0)).unwrap();
        assert_eq!(p.shift(), 0);
        assert_eq!(p.coeffs(), &[c(2.0, 0.0), c(1.0, 0.0)]);

        let f2 = LaurentPolynomial::from_real(&[(2, 1, 1.0), (1, 2, 1.0), (1, 1, 5.0), (0, 0, 1.0)]).unwrap();
        let p = f2.fiber_restrict(Axis::First, c(1.0, 0.0)).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0, 0.0), c(6.0, 0.0), c(1.0, 0.0)]);

        let mono = LaurentPolynomial::from_real(&[(1, 1, 1.0)]).unwrap();
        let p = mono.fiber_restrict(Axis::First, c(0.3, -2.0)).unwrap();
        assert_eq!(p.shift(), 1);
        assert_eq!(p.degree(), 0);
        assert!(p.roots().is_empty());
    }

    #[test]
    fn fiber_identically_zero() {
        // z1 - z1 z2 vanishes on the fiber z2 = 1
        let f = LaurentPolynomial::from_real(&[(1, 0, 1.0), (1, 1, -1.0)]).unwrap();
        assert_eq!(f.fiber_restrict(Axis::First, c(1.0, 0.0)), Err(Error::DegenerateFiber));
    }

    #[test]
    fn total_degree_examples() {
        let f2 = LaurentPolynomial::from_real(&[(2, 1, 1.0), (1, 2, 1.0), (1, 1, 5.0), (0, 0, 1.0)]).unwrap();
        assert_eq!(f2.total_degree(), 3);
        let f1 = LaurentPolynomial::from_real(&[(1, 0, 2.0), (0, 1, 1.0), (0, 0, 1.0)]).unwrap();
        assert_eq!(f1.total_degree(), 1);
        let g = LaurentPolynomial::from_real(&[(-1, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.total_degree(), 2);
    }

    #[test]
    fn realify_examples() {
        let z1 = LaurentPolynomial::from_real(&[(1, 0, 1.0)]).unwrap().realify().unwrap();
        assert_eq!(z1.re_part.terms, BTreeMap::from([([1, 0, 0, 0], 1.0)]));
        assert_eq!(z1.im_part.terms, BTreeMap::from([([0, 0, 1, 0], 1.0)]));

        let sq = LaurentPolynomial::from_real(&[(2, 0, 1.0)]).unwrap().realify().unwrap();
        assert_eq!(sq.re_part.terms, BTreeMap::from([([2, 0, 0, 0], 1.0), ([0, 0, 2, 0], -1.0)]));
        assert_eq!(sq.im_part.terms, BTreeMap::from([([1, 0, 1, 0], 2.0)]));

        let iz = LaurentPolynomial::new([([1, 1], c(0.0, 1.0))]).unwrap().realify().unwrap();
        assert_eq!(iz.re_part.terms, BTreeMap::from([([1, 0, 0, 1], -1.0), ([0, 1, 1, 0], -1.0)]));
        assert_eq!(iz.im_part.terms, BTreeMap::from([([1, 1, 0, 0], 1.0), ([0, 0, 1, 1], -1.0)]));
    }

    #[test]
    fn realify_rejects_negative_exponents() {
        let g = LaurentPolynomial::from_real(&[(-1, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.realify(), Err(Error::NegativeExponent));
        assert!(g.clear_denominators().realify().is_ok());
    }

    #[test]
    fn json_shape() {
        let f = LaurentPolynomial::from_real(&[(1, 0, 2.0)]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"terms":[{"exp":[1,0],"coef":[2.0,0.0]}]}"#);
        let back: LaurentPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<LaurentPolynomial>(r#"{"terms":[]}"#).is_err());
    }
}
