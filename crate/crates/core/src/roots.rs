//! Univariate complex root finding.
//!
//! Durand–Kerner simultaneous iteration with a companion-matrix eigenvalue
//! fallback when the iteration fails to converge (clustered or multiple roots).

use nalgebra::DMatrix;
use num_complex::Complex64;

pub const MAX_ITERATIONS: usize = 200;
pub const TOLERANCE: f64 = 1e-12;

/// All complex roots of `sum coeffs[k] w^k`, with multiplicity.
///
/// Trailing zero coefficients are ignored. A constant polynomial has no roots.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let coeffs = trim_leading_zeros(coeffs);
    let degree = coeffs.len().saturating_sub(1);
    match degree {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / coeffs[1]],
        2 => quadratic(coeffs),
        _ => durand_kerner(coeffs, MAX_ITERATIONS, TOLERANCE)
            .unwrap_or_else(|| companion_roots(coeffs)),
    }
}

/// Roots of `c0 + c1 w + c2 w^2` without cancellation between `-c1` and the square root.
fn quadratic(c: &[Complex64]) -> Vec<Complex64> {
    let disc = (c[1] * c[1] - 4.0 * c[0] * c[2]).sqrt();
    let q = if (c[1].conj() * disc).re >= 0.0 { -0.5 * (c[1] + disc) } else { -0.5 * (c[1] - disc) };
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / c[2], c[0] / q]
}

fn trim_leading_zeros(coeffs: &[Complex64]) -> &[Complex64] {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1] == Complex64::new(0.0, 0.0) {
        end -= 1;
    }
    &coeffs[..end]
}

/// Horner evaluation, ascending coefficients.
pub fn horner(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
}

/// Fujiwara's bound on root moduli of a polynomial with nonzero leading term.
fn root_radius(monic: &[Complex64]) -> f64 {
    let n = monic.len() - 1;
    let mut bound: f64 = 0.0;
    for (k, c) in monic[..n].iter().enumerate() {
        let power = (n - k) as f64;
        let mut term = c.norm().powf(1.0 / power);
        if k == 0 {
            term *= 0.5f64.powf(1.0 / power);
        }
        bound = bound.max(term);
    }
    2.0 * bound.max(f64::MIN_POSITIVE)
}

/// Returns `None` if the iteration has not converged after `max_iter` sweeps.
pub fn durand_kerner(coeffs: &[Complex64], max_iter: usize, tol: f64) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = root_radius(&monic);
    // points on a circle, rotated off the real axis so conjugate-symmetric
    // inputs do not stall
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, 0.4 + k as f64 * std::f64::consts::TAU / n as f64))
        .collect();
    for _ in 0..max_iter {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(f64::EPSILON, 0.0);
            }
            let step = horner(&monic, z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if !max_step.is_finite() {
            return None;
        }
        if max_step < tol {
            polish(&monic, &mut z);
            return Some(z);
        }
    }
    None
}

/// One Newton step per root; keeps the step only if it lowers the residual.
fn polish(coeffs: &[Complex64], z: &mut [Complex64]) {
    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    for w in z.iter_mut() {
        let value = horner(coeffs, *w);
        let slope = horner(&deriv, *w);
        if slope.norm() > 0.0 {
            let candidate = *w - value / slope;
            if candidate.is_finite() && horner(coeffs, candidate).norm() < value.norm() {
                *w = candidate;
            }
        }
    }
}

/// Eigenvalues of the companion matrix via complex Schur decomposition.
pub fn companion_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    let schur = m.schur();
    match schur.eigenvalues() {
        Some(values) => values.iter().copied().collect(),
        None => {
            let (_, t) = schur.unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn quadratic_roots() {
        // w^2 + 6w + 1 -> -3 ± 2√2
        let r = sorted_by_re(roots(&[c(1.0, 0.0), c(6.0, 0.0), c(1.0, 0.0)]));
        assert!((r[0].re - (-3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!((r[1].re - (-3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn cube_roots_of_unity() {
        let r = roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.len(), 3);
        for w in r {
            assert!((w.powu(3) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn double_root_falls_back_or_converges() {
        // (w-1)^2 (w+2)
        let coeffs = [c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let r = roots(&coeffs);
        assert_eq!(r.len(), 3);
        for w in &r {
            assert!(horner(&coeffs, *w).norm() < 1e-10);
        }
        let comp = companion_roots(&coeffs);
        assert!(comp.iter().any(|w| (w - c(-2.0, 0.0)).norm() < 1e-8));
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(roots(&[c(3.0, 0.0)]).is_empty());
        assert!(roots(&[c(3.0, 0.0), c(0.0, 0.0)]).is_empty());
    }

    #[test]
    fn degree_eight_residuals() {
        let coeffs: Vec<Complex64> = (0..9).map(|k| c(1.0 + k as f64, (k as f64).sin())).collect();
        let r = roots(&coeffs);
        assert_eq!(r.len(), 8);
        for w in r {
            assert!(horner(&coeffs, w).norm() < 1e-8 * (1.0 + w.norm().powi(8)));
        }
    }
}
