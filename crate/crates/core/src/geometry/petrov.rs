use super::np::WeylScalars;
use super::selfdual::{symmetric_eigenvalues, SelfDualBlocks};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PetrovType {
    O,
    D,
    I,
    /// Algebraically special but not of the Ψ₂-only pattern (II, III or N).
    Special,
}

impl fmt::Display for PetrovType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PetrovType::O => "O",
            PetrovType::D => "D",
            PetrovType::I => "I",
            PetrovType::Special => "special",
        };
        f.write_str(s)
    }
}

/// Classification of one trace-free 3×3 Weyl block.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PetrovSide {
    pub kind: PetrovType,
    pub eigenvalues: [f64; 3],
    /// Some eigenvalue gap fell inside the ambiguity band.
    pub ambiguous: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PetrovLabel {
    pub plus: PetrovSide,
    pub minus: PetrovSide,
}

impl PetrovLabel {
    pub fn ambiguous(&self) -> bool {
        self.plus.ambiguous || self.minus.ambiguous
    }
}

impl fmt::Display for PetrovLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+, {}-)", self.plus.kind, self.minus.kind)
    }
}

/// Tolerances for multiplicity decisions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PetrovTolerance {
    /// Absolute size below which a block counts as zero.
    pub zero: f64,
    /// Relative gap (to the largest |eigenvalue|) below which eigenvalues coincide.
    pub relative: f64,
}

impl Default for PetrovTolerance {
    fn default() -> Self {
        PetrovTolerance { zero: 1e-7, relative: 1e-6 }
    }
}

/// Eigenvalue-multiplicity classification of a trace-free symmetric block.
pub fn classify_block(w: &[[f64; 3]; 3], tol: PetrovTolerance) -> PetrovSide {
    let e = symmetric_eigenvalues(w);
    let scale = e.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale < tol.zero {
        return PetrovSide { kind: PetrovType::O, eigenvalues: e, ambiguous: scale > 0.1 * tol.zero };
    }
    let gaps = [e[1] - e[0], e[2] - e[1]];
    let eq = tol.relative * scale;
    let equal = gaps.iter().filter(|&&g| g <= eq).count();
    let ambiguous = gaps.iter().any(|&g| g > eq && g <= 10.0 * eq);
    let kind = match equal {
        0 => PetrovType::I,
        1 => PetrovType::D,
        // Three equal trace-free eigenvalues would all be zero.
        _ => PetrovType::O,
    };
    PetrovSide { kind, eigenvalues: e, ambiguous }
}

/// Euclidean "Petrov-like" type from the W± blocks.
pub fn petrov_classify(blocks: &SelfDualBlocks, tol: PetrovTolerance) -> PetrovLabel {
    PetrovLabel { plus: classify_block(&blocks.weyl_plus(), tol), minus: classify_block(&blocks.weyl_minus(), tol) }
}

/// Lorentzian classification from NP scalars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzianPetrov {
    pub kind: PetrovType,
    /// Invariants I and J as [re, im].
    pub i: [f64; 2],
    pub j: [f64; 2],
    /// Roots of `μ³ − Iμ + 2J = 0`, the eigenvalues of the complex Weyl matrix, as [re, im].
    pub eigenvalues: [[f64; 2]; 3],
    pub ambiguous: bool,
}

/// Roots of `μ³ + pμ + q = 0` by Cardano, taking the larger cube-root branch.
fn depressed_cubic_roots(p: Complex64, q: Complex64) -> [Complex64; 3] {
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let (a, b) = (-q / 2.0 + disc, -q / 2.0 - disc);
    let w = if a.norm() >= b.norm() { a } else { b };
    if w.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 3];
    }
    let u = w.powf(1.0 / 3.0);
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let mut uk = u;
    for r in out.iter_mut() {
        *r = uk - p / (uk * 3.0);
        uk *= omega;
    }
    out
}

/// Coincident Weyl eigenvalues mark algebraically special points. The gaps are
/// compared with the largest eigenvalue, so the decision is linear in the
/// distance to the special set (the discriminant `I³ − 27J²` is quadratic there).
pub fn petrov_from_scalars(s: &WeylScalars, tol: PetrovTolerance) -> LorentzianPetrov {
    let p = s.all();
    let scale = p.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let i_inv = p[0] * p[4] - p[1] * p[3] * 4.0 + p[2] * p[2] * 3.0;
    let j_inv = p[4] * (p[2] * p[0] - p[1] * p[1]) - p[3] * (p[3] * p[0] - p[1] * p[2]) + p[2] * (p[3] * p[1] - p[2] * p[2]);
    let pack = |z: Complex64| [z.re, z.im];
    let mu = depressed_cubic_roots(-i_inv, j_inv * 2.0);
    let eigenvalues = [pack(mu[0]), pack(mu[1]), pack(mu[2])];
    if scale < tol.zero {
        return LorentzianPetrov {
            kind: PetrovType::O,
            i: pack(i_inv),
            j: pack(j_inv),
            eigenvalues,
            ambiguous: scale > 0.1 * tol.zero,
        };
    }
    let small = |z: Complex64| z.norm() <= tol.relative * scale;
    let only_psi2 = small(p[0]) && small(p[1]) && small(p[3]) && small(p[4]);
    let size = mu.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let gaps = [(mu[0] - mu[1]).norm(), (mu[1] - mu[2]).norm(), (mu[2] - mu[0]).norm()];
    let eq = tol.relative * size;
    let special = gaps.iter().any(|&g| g <= eq);
    let kind = if only_psi2 {
        PetrovType::D
    } else if special {
        PetrovType::Special
    } else {
        PetrovType::I
    };
    let ambiguous = !only_psi2 && gaps.iter().any(|&g| g > eq && g <= 10.0 * eq);
    LorentzianPetrov { kind, i: pack(i_inv), j: pack(j_inv), eigenvalues, ambiguous }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_rules() {
        let t = PetrovTolerance::default();
        assert_eq!(classify_block(&[[1.0, 0.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, 1.0]], t).kind, PetrovType::D);
        assert_eq!(classify_block(&[[1.0, 0.0, 0.0], [0.0, -3.0, 0.0], [0.0, 0.0, 2.0]], t).kind, PetrovType::I);
        assert_eq!(classify_block(&[[0.0; 3]; 3], t).kind, PetrovType::O);
        let near = classify_block(&[[1.0, 0.0, 0.0], [0.0, -2.000003, 0.0], [0.0, 0.0, 1.000003]], t);
        assert!(near.ambiguous);
    }

    #[test]
    fn psi2_only_is_type_d() {
        let s = WeylScalars { psi: [[0.0, 0.0], [0.0, 0.0], [0.3, 0.0], [0.0, 0.0], [0.0, 0.0]] };
        assert_eq!(petrov_from_scalars(&s, PetrovTolerance::default()).kind, PetrovType::D);
        let g = WeylScalars { psi: [[0.5, 0.0], [0.0, 0.0], [0.3, 0.0], [0.0, 0.0], [-0.7, 0.0]] };
        assert_eq!(petrov_from_scalars(&g, PetrovTolerance::default()).kind, PetrovType::I);
    }

    #[test]
    fn cubic_roots_are_weyl_eigenvalues() {
        // Ψ₀Ψ₄ = 9Ψ₂² with Ψ₁ = Ψ₃ = 0 has a repeated eigenvalue.
        let d = WeylScalars { psi: [[1.8, 0.0], [0.0, 0.0], [0.2, 0.0], [0.0, 0.0], [0.2, 0.0]] };
        assert_eq!(petrov_from_scalars(&d, PetrovTolerance::default()).kind, PetrovType::Special);
        let near = WeylScalars { psi: [[1.81, 0.0], [0.0, 0.0], [0.2, 0.0], [0.0, 0.0], [0.2, 0.0]] };
        assert_eq!(petrov_from_scalars(&near, PetrovTolerance::default()).kind, PetrovType::I);
        let (p, q) = (Complex64::new(-0.7, 0.2), Complex64::new(0.3, -0.1));
        for r in depressed_cubic_roots(p, q) {
            assert!((r * r * r + p * r + q).norm() < 1e-14);
        }
    }
}
