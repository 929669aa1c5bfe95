//! Polynomial root finding (Aberth–Ehrlich with Newton polish).

use num_complex::Complex64;

/// Evaluates a polynomial with ascending coefficients at a complex point.
pub fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Evaluates the polynomial and its derivative at a real point.
pub fn eval_real(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial with ascending coefficients.
///
/// Trailing zero leading coefficients are stripped. Returns an empty vector for
/// constant polynomials.
pub fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();

    // Cauchy bound for the initial circle.
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-17 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&monic, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            *zi -= p / dp;
        }
    }
    z
}

/// Real roots (imaginary part below `imag_tol` relative to magnitude), sorted ascending.
pub fn real_roots(coeffs: &[f64], imag_tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> =
        roots(coeffs).into_iter().filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs())).map(|z| z.re).collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Finds a root of `f` in `[a, b]` given a sign change, by bisection refined with secant steps.
pub fn bracket_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() < 1e-15 * (1.0 + m.abs()) {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}
