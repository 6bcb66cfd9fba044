//! Ronkin function by tensor trapezoid quadrature over the torus.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::order::{order_at, OrderVector, DEFAULT_TRIALS};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::laurent::LaurentPolynomial;

/// Nodes where `|f|` falls below this are skipped.
pub const SINGULAR_THRESHOLD: f64 = 1e-14;
/// Largest standard deviation accepted for a Ronkin coefficient.
pub const COEFFICIENT_SPREAD: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RonkinEstimate {
    pub value: f64,
    pub skipped_nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RonkinCoefficient {
    pub alpha: OrderVector,
    pub mean: f64,
    pub std_dev: f64,
    pub samples: usize,
}

pub fn ronkin(f: &LaurentPolynomial, x: [f64; 2], quad_n: usize) -> Result<RonkinEstimate> {
    ronkin_with(f, x, quad_n, Exec::default())
}

/// Average of `log |f|` over the torus fiber above `x` on `quad_n^2` nodes.
pub fn ronkin_with(f: &LaurentPolynomial, x: [f64; 2], quad_n: usize, exec: Exec) -> Result<RonkinEstimate> {
    if quad_n < 64 {
        return Err(Error::InvalidInput(format!("quadrature needs at least 64 nodes per axis, got {quad_n}")));
    }
    let n = quad_n;
    // node angles are offset by half a step to stay off symmetric zero sets
    let theta = |k: usize| TAU * (k as f64 + 0.5) / n as f64;
    let terms: Vec<([i64; 2], Complex64)> = f
        .terms()
        .map(|(a, c)| (*a, c * (a[0] as f64 * x[0] + a[1] as f64 * x[1]).exp()))
        .collect();
    // phase tables e^{i a2 theta_l}, one row per term
    let second: Vec<Vec<Complex64>> = terms
        .iter()
        .map(|(a, _)| (0..n).map(|l| Complex64::from_polar(1.0, a[1] as f64 * theta(l))).collect())
        .collect();
    let rows = exec.map(n, |k| {
        let t1 = theta(k);
        let first: Vec<Complex64> = terms.iter().map(|(a, c)| c * Complex64::from_polar(1.0, a[0] as f64 * t1)).collect();
        let mut sum = 0.0;
        let mut skipped = 0usize;
        for l in 0..n {
            let v: Complex64 = first.iter().zip(&second).map(|(c, s)| c * s[l]).sum();
            let m = v.norm();
            if m < SINGULAR_THRESHOLD {
                skipped += 1;
            } else {
                sum += m.ln();
            }
        }
        (sum, skipped)
    });
    let (mut total, mut skipped) = (0.0, 0usize);
    for (s, k) in rows {
        total += s;
        skipped += k;
    }
    if skipped > 0 {
        log::warn!("ronkin at {x:?}: skipped {skipped} near-singular nodes");
    }
    let used = n * n - skipped;
    if used == 0 {
        return Err(Error::NearAmoeba(format!("f vanishes at every quadrature node above {x:?}")));
    }
    Ok(RonkinEstimate { value: total / used as f64, skipped_nodes: skipped })
}

/// Intercept `R_f(x) - <alpha, x>` averaged over sample points of `E_alpha`.
pub fn ronkin_coefficient(
    f: &LaurentPolynomial,
    samples: &[[f64; 2]],
    alpha: OrderVector,
    quad_n: usize,
    exec: Exec,
) -> Result<RonkinCoefficient> {
    if samples.len() < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 samples, got {}", samples.len())));
    }
    let mut values = Vec::with_capacity(samples.len());
    for &x in samples {
        let found = order_at(f, x, DEFAULT_TRIALS)?;
        if found != alpha {
            return Err(Error::WrongOrder { point: x, found, expected: alpha });
        }
        let r = ronkin_with(f, x, quad_n, exec)?.value;
        values.push(r - alpha[0] as f64 * x[0] - alpha[1] as f64 * x[1]);
    }
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let std_dev = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m).sqrt();
    if std_dev > COEFFICIENT_SPREAD {
        return Err(Error::QuadratureTooCoarse(std_dev));
    }
    Ok(RonkinCoefficient { alpha, mean, std_dev, samples: samples.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(t: &[(i64, i64, f64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_real(t).unwrap()
    }

    #[test]
    fn monomial_is_affine() {
        let f = poly(&[(1, 1, 2.0)]);
        let x = [0.3, -1.2];
        let r = ronkin(&f, x, 64).unwrap();
        assert!((r.value - (2f64.ln() + x[0] + x[1])).abs() < 1e-12);
    }

    #[test]
    fn line_values() {
        let f = poly(&[(1, 0, 1.0), (0, 1, 1.0), (0, 0, 1.0)]);
        assert!((ronkin(&f, [3.0, 0.0], 256).unwrap().value - 3.0).abs() < 1e-3);
        assert!(ronkin(&f, [-5.0, -5.0], 256).unwrap().value.abs() < 1e-3);
    }

    #[test]
    fn coefficients() {
        let line1 = poly(&[(1, 0, 1.0), (0, 1, 1.0), (0, 0, 1.0)]);
        let c = ronkin_coefficient(&line1, &[[-3.0, -3.0], [-4.0, -2.5], [-2.5, -5.0]], [0, 0], 256, Exec::default()).unwrap();
        assert!(c.mean.abs() < 1e-3);
        let line4 = poly(&[(1, 0, 1.0), (0, 1, 1.0), (0, 0, 4.0)]);
        let c = ronkin_coefficient(&line4, &[[-1.0, -1.0], [-2.0, 0.0], [0.0, -3.0]], [0, 0], 256, Exec::default()).unwrap();
        assert!((c.mean - 4f64.ln()).abs() < 1e-3);
        let skew = poly(&[(1, 0, 2.0), (0, 1, 1.0), (0, 0, 1.0)]);
        let c = ronkin_coefficient(&skew, &[[3.0, 0.0], [4.0, 1.0], [3.5, -2.0]], [1, 0], 256, Exec::default()).unwrap();
        assert!((c.mean - 2f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn wrong_order_is_rejected() {
        let f = poly(&[(1, 0, 1.0), (0, 1, 1.0), (0, 0, 1.0)]);
        let err = ronkin_coefficient(&f, &[[3.0, 0.0], [-3.0, -3.0], [-4.0, -4.0]], [0, 0], 64, Exec::default()).unwrap_err();
        assert!(matches!(err, Error::WrongOrder { found: [1, 0], .. }));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = poly(&[(2, 1, 1.0), (1, 2, 1.0), (1, 1, 5.0), (0, 0, 1.0)]);
        let a = ronkin_with(&f, [0.2, -0.4], 128, Exec::Sequential).unwrap();
        let b = ronkin_with(&f, [0.2, -0.4], 128, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
