//! Aberth–Ehrlich simultaneous root finding in double precision.

use num_complex::Complex64;

/// Horner evaluation of `p` and `p'` at `z`, coefficients ascending.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|p(z)|` relative to `sum |c_i| |z|^i`, the natural rounding scale.
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (p, _) = eval_with_derivative(coeffs, z);
    let r = z.norm();
    let scale = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All roots of the polynomial with ascending coefficients `coeffs`
/// (leading coefficient nonzero). Returns `None` if the largest update has
/// not dropped below `tol` after `max_iter` sweeps.
pub fn aberth(coeffs: &[Complex64], tol: f64, max_iter: usize) -> Option<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Some(Vec::new());
    }
    let lead = coeffs[n];
    if n == 1 {
        return Some(vec![-coeffs[0] / lead]);
    }
    // Cauchy bound on the root moduli, starting points spread on that circle
    let bound = 1.0 + coeffs[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let radius = bound.min(
        // a geometric-mean radius is usually much closer to the roots
        ((coeffs[0] / lead).norm().powf(1.0 / n as f64)).max(1e-3),
    );
    let mut z: Vec<Complex64> =
        (0..n).map(|j| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4)).collect();
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = if dp.norm() == 0.0 { Complex64::new(1e-8, 1e-8) } else { p / dp };
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < tol {
            return Some(z);
        }
    }
    None
}
