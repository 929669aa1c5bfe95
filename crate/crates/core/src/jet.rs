//! Second-order forward-mode jets over the four chart coordinates.
//!
//! A [`Jet`] carries a value together with its gradient and Hessian with
//! respect to the chart coordinates. Every metric, vector field and map in the
//! crate is written once against this type, which yields exact first and
//! second partial derivatives without hand-differentiated formulas.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub const DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: [f64; DIM],
    pub h: [[f64; DIM]; DIM],
}

impl Default for Jet {
    fn default() -> Self {
        Jet::cst(0.0)
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::cst(v)
    }
}

impl Jet {
    pub const fn cst(v: f64) -> Self {
        Jet { v, d: [0.0; DIM], h: [[0.0; DIM]; DIM] }
    }

    /// The coordinate function `x_i` evaluated at `v`.
    pub fn var(i: usize, v: f64) -> Self {
        let mut j = Jet::cst(v);
        j.d[i] = 1.0;
        j
    }

    /// Seeds all four coordinates of a chart point.
    pub fn point(x: &[f64; DIM]) -> [Jet; DIM] {
        [Jet::var(0, x[0]), Jet::var(1, x[1]), Jet::var(2, x[2]), Jet::var(3, x[3])]
    }

    /// Value-only seeding (derivative parts zero).
    pub fn constants(x: &[f64; DIM]) -> [Jet; DIM] {
        [Jet::cst(x[0]), Jet::cst(x[1]), Jet::cst(x[2]), Jet::cst(x[3])]
    }

    pub fn value(&self) -> f64 {
        self.v
    }

    /// Applies a scalar function given its value and first two derivatives at
    /// `self.v`.
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Jet {
        let mut out = Jet::cst(f0);
        for i in 0..DIM {
            out.d[i] = f1 * self.d[i];
        }
        for i in 0..DIM {
            for j in 0..DIM {
                out.h[i][j] = f1 * self.h[i][j] + f2 * self.d[i] * self.d[j];
            }
        }
        out
    }

    pub fn recip(self) -> Jet {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqrt(self) -> Jet {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn exp(self) -> Jet {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Jet {
        let r = 1.0 / self.v;
        self.chain(self.v.ln(), r, -r * r)
    }

    pub fn sin(self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sinh(self) -> Jet {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Jet {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(c, s, c)
    }

    pub fn tanh(self) -> Jet {
        let t = self.v.tanh();
        let s2 = 1.0 - t * t;
        self.chain(t, s2, -2.0 * t * s2)
    }

    pub fn atan(self) -> Jet {
        let q = 1.0 / (1.0 + self.v * self.v);
        self.chain(self.v.atan(), q, -2.0 * self.v * q * q)
    }

    /// Quadrant-aware arctangent of `y / x`.
    pub fn atan2(y: Jet, x: Jet) -> Jet {
        let value = y.v.atan2(x.v);
        let branch = if x.v.abs() >= y.v.abs() { (y / x).atan() } else { -(x / y).atan() };
        Jet { v: value, ..branch }
    }

    pub fn powf(self, p: f64) -> Jet {
        let f0 = self.v.powf(p);
        let f1 = p * self.v.powf(p - 1.0);
        let f2 = p * (p - 1.0) * self.v.powf(p - 2.0);
        self.chain(f0, f1, f2)
    }

    pub fn powi(self, n: i32) -> Jet {
        let f0 = self.v.powi(n);
        let f1 = if n == 0 { 0.0 } else { n as f64 * self.v.powi(n - 1) };
        let f2 = if n == 0 || n == 1 { 0.0 } else { (n * (n - 1)) as f64 * self.v.powi(n - 2) };
        self.chain(f0, f1, f2)
    }

    pub fn square(self) -> Jet {
        self * self
    }

    pub fn abs(self) -> Jet {
        if self.v < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn scale(self, k: f64) -> Jet {
        let mut out = self;
        out.v *= k;
        for i in 0..DIM {
            out.d[i] *= k;
            for j in 0..DIM {
                out.h[i][j] *= k;
            }
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self.v += o.v;
        for i in 0..DIM {
            self.d[i] += o.d[i];
            for j in 0..DIM {
                self.h[i][j] += o.h[i][j];
            }
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        self.v -= o.v;
        for i in 0..DIM {
            self.d[i] -= o.d[i];
            for j in 0..DIM {
                self.h[i][j] -= o.h[i][j];
            }
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut out = Jet::cst(self.v * o.v);
        for i in 0..DIM {
            out.d[i] = self.v * o.d[i] + o.v * self.d[i];
        }
        for i in 0..DIM {
            for j in 0..DIM {
                out.h[i][j] = self.v * o.h[i][j] + o.v * self.h[i][j] + self.d[i] * o.d[j] + o.d[i] * self.d[j];
            }
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, o: f64) -> Jet {
        self.v += o;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, o: f64) -> Jet {
        self.v -= o;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(o)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, o: f64) -> Jet {
        self.scale(1.0 / o)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        o + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        (-o) + self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        o.scale(self)
    }
}

impl Div<Jet> for f64 {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        o.recip().scale(self)
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, o: Jet) {
        *self = *self - o;
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, o: Jet) {
        *self = *self * o;
    }
}

pub type JetMatrix = [[Jet; DIM]; DIM];

pub fn zero_matrix() -> JetMatrix {
    [[Jet::cst(0.0); DIM]; DIM]
}

/// Symmetric outer product `a ⊗ b + b ⊗ a` scaled by `k / 2`, accumulated into `m`.
pub fn add_sym_outer(m: &mut JetMatrix, k: Jet, a: &[Jet; DIM], b: &[Jet; DIM]) {
    for i in 0..DIM {
        for j in 0..DIM {
            m[i][j] += k * (a[i] * b[j] + b[i] * a[j]) * 0.5;
        }
    }
}

/// Inverse of a 4×4 jet matrix by Gauss–Jordan elimination with partial pivoting.
pub fn invert(m: &JetMatrix) -> Option<JetMatrix> {
    let mut a = *m;
    let mut inv = zero_matrix();
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Jet::cst(1.0);
    }
    for col in 0..DIM {
        let pivot = (col..DIM).max_by(|&p, &q| a[p][col].v.abs().total_cmp(&a[q][col].v.abs()))?;
        if a[pivot][col].v.abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let r = a[col][col].recip();
        for j in 0..DIM {
            a[col][j] = a[col][j] * r;
            inv[col][j] = inv[col][j] * r;
        }
        for row in 0..DIM {
            if row == col {
                continue;
            }
            let f = a[row][col];
            if f.v == 0.0 && f.d.iter().all(|&x| x == 0.0) {
                continue;
            }
            for j in 0..DIM {
                a[row][j] = a[row][j] - f * a[col][j];
                inv[row][j] = inv[row][j] - f * inv[col][j];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: impl Fn(&[Jet; 4]) -> Jet, x: [f64; 4]) {
        let j = f(&Jet::point(&x));
        let h = 1e-5;
        for i in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let jp = f(&Jet::point(&xp));
            let jm = f(&Jet::point(&xm));
            let d = (jp.v - jm.v) / (2.0 * h);
            assert!((d - j.d[i]).abs() < 1e-7 * (1.0 + d.abs()), "grad {i}: {d} vs {}", j.d[i]);
            for k in 0..4 {
                let dd = (jp.d[k] - jm.d[k]) / (2.0 * h);
                assert!((dd - j.h[i][k]).abs() < 1e-6 * (1.0 + dd.abs()), "hess {i}{k}: {dd} vs {}", j.h[i][k]);
            }
        }
    }

    #[test]
    fn elementary_functions_match_finite_differences() {
        let x = [0.3, -0.7, 1.1, 0.45];
        fd_check(|p| (p[0] * p[1]).sin() + p[2].exp() * p[3].cosh(), x);
        fd_check(|p| (p[0] * p[0] + p[3] + 2.0).sqrt() / (p[1] - 3.0), x);
        fd_check(|p| (p[2] + 2.0).ln() * p[3].tanh() - p[0].atan(), x);
        fd_check(|p| (p[3] + 1.0).powf(1.7320508) * p[1].sinh(), x);
        fd_check(|p| Jet::atan2(p[0] - 0.4, p[1] * 2.0), x);
        fd_check(|p| Jet::atan2(p[1] * 5.0, p[0]), x);
    }

    #[test]
    fn inverse_reproduces_identity_with_derivatives() {
        let p = Jet::point(&[0.2, 0.4, -0.3, 1.5]);
        let mut m = zero_matrix();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (p[i] * p[j]).scale(0.1) + if i == j { p[3] + 2.0 } else { Jet::cst(0.05) };
            }
        }
        let inv = invert(&m).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Jet::cst(0.0);
                for k in 0..4 {
                    acc += m[i][k] * inv[k][j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((acc.v - target).abs() < 1e-13);
                assert!(acc.d.iter().all(|d| d.abs() < 1e-12));
                assert!(acc.h.iter().flatten().all(|d| d.abs() < 1e-12));
            }
        }
    }
}
