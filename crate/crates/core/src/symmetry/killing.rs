//! Catalogued Killing vectors.

use super::fields::VectorField;
use crate::jet::Jet;

fn z() -> Jet {
    Jet::cst(0.0)
}

fn one() -> Jet {
    Jet::cst(1.0)
}

/// Bianchi II generators in the chart (x, y, z, t).
pub fn bianchi2_killing() -> Vec<VectorField> {
    vec![
        VectorField::new("L1", |_| [one(), z(), z(), z()]),
        VectorField::new("L2", |p| [-p[2], one(), z(), z()]),
        VectorField::new("L3", |_| [z(), z(), one(), z()]),
        VectorField::new("L4", |p| {
            let (y, zz) = (p[1], p[2]);
            [(y * y - zz * zz) * -0.5, -zz, y, z()]
        }),
    ]
}

/// Bianchi III generators, including the fourth vector available when the
/// σ₁ and σ₃ coefficients agree.
pub fn bianchi3_killing() -> Vec<VectorField> {
    vec![
        VectorField::new("L1", |p| [one(), z(), p[2], z()]),
        VectorField::new("L2", |_| [z(), one(), z(), z()]),
        VectorField::new("L3", |_| [z(), z(), one(), z()]),
        VectorField::new("L4", |p| {
            let (x, zz) = (p[0], p[2]);
            [zz, z(), (zz * zz - (x * 2.0).exp()) * 0.5, z()]
        }),
    ]
}

pub fn bianchi5_killing() -> Vec<VectorField> {
    vec![
        VectorField::new("L1", |p| [one(), -p[1], -p[2], z()]),
        VectorField::new("L2", |_| [z(), one(), z(), z()]),
        VectorField::new("L3", |_| [z(), z(), one(), z()]),
    ]
}

/// Structure relations `[L_a, L_b] = Σ c_k L_k` expected for each class.
pub fn structure_relations(class: crate::catalog::BianchiClass) -> Vec<(usize, usize, Vec<(f64, usize)>)> {
    use crate::catalog::BianchiClass::*;
    match class {
        II => vec![
            (0, 1, vec![]),
            (1, 2, vec![(1.0, 0)]),
            (2, 0, vec![]),
            (3, 1, vec![(-1.0, 2)]),
            (3, 2, vec![(1.0, 1)]),
            (3, 0, vec![]),
        ],
        III => vec![
            (0, 1, vec![]),
            (1, 2, vec![]),
            (2, 0, vec![(1.0, 2)]),
            (0, 3, vec![(1.0, 3)]),
            (2, 3, vec![(1.0, 0)]),
            (1, 3, vec![]),
        ],
        V => vec![(0, 1, vec![(1.0, 1)]), (1, 2, vec![]), (2, 0, vec![(-1.0, 2)])],
    }
}

/// Ten de Sitter generators in one of the two conformally flat charts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeSitterChart {
    /// (v, u, z, t) with v = eˣ, built from type III.
    Type3,
    /// (y, z, v, θ) with v = e⁻ˣ, built from type V.
    Type5,
}

pub fn desitter_killing_catalog(chart: DeSitterChart) -> Vec<VectorField> {
    match chart {
        DeSitterChart::Type3 => desitter_type3(),
        DeSitterChart::Type5 => desitter_type5(),
    }
}

fn desitter_type3() -> Vec<VectorField> {
    // components ordered (v, u, z, t)
    let f = |t: Jet| (t * t + 1.0).sqrt() / t;
    let mut out = vec![
        VectorField::new("K1", |p| [p[0], z(), p[2], z()]),
        VectorField::new("K2", |_| [z(), one(), z(), z()]),
        VectorField::new("K3", |_| [z(), z(), one(), z()]),
        VectorField::new("K4", |p| {
            let (v, zz) = (p[0], p[2]);
            [zz * v, z(), (zz * zz - v * v) * 0.5, z()]
        }),
    ];
    for (label, phase) in [("P1c", false), ("P1s", true)] {
        out.push(VectorField::new(label, move |p| {
            let (v, u, t) = (p[0], p[1], p[3]);
            let ff = f(t);
            let (tu, pu) = trig_pair(u, phase);
            let k = ff * tu / v;
            [k * v, -pu / (v * ff), z(), k * t]
        }));
    }
    for (label, phase) in [("P2c", false), ("P2s", true)] {
        out.push(VectorField::new(label, move |p| {
            let (v, u, zz, t) = (p[0], p[1], p[2], p[3]);
            let ff = f(t);
            let (tu, pu) = trig_pair(u, phase);
            let k = ff * tu / v;
            [k * zz * v, -zz * pu / (v * ff), -(k * v * v), k * zz * t]
        }));
    }
    for (label, phase) in [("P3c", false), ("P3s", true)] {
        out.push(VectorField::new(label, move |p| {
            let (v, u, zz, t) = (p[0], p[1], p[2], p[3]);
            let ff = f(t);
            let (tu, pu) = trig_pair(u, phase);
            let k = ff * tu / v;
            let w = v * v + zz * zz;
            [k * (v * v - zz * zz) * v, w * pu / (v * ff), k * v * v * zz * 2.0, -(k * w * t)]
        }));
    }
    out
}

/// `(cos u, sin u)` for the cosine member of a pair and `(sin u, −cos u)` for the sine member.
fn trig_pair(u: Jet, sine: bool) -> (Jet, Jet) {
    if sine {
        (u.sin(), -u.cos())
    } else {
        (u.cos(), u.sin())
    }
}

fn desitter_type5() -> Vec<VectorField> {
    // components ordered (y, z, v, θ)
    vec![
        VectorField::new("P1", |_| [one(), z(), z(), z()]),
        VectorField::new("P2", |_| [z(), one(), z(), z()]),
        VectorField::new("M3", |p| [-p[1], p[0], z(), z()]),
        VectorField::new("Q1", |p| {
            let (y, zz, v) = (p[0], p[1], p[2]);
            [(-(y * y) + zz * zz + v * v) * 0.5, -(y * zz), -(y * v), z()]
        }),
        VectorField::new("Q2", |p| {
            let (y, zz, v) = (p[0], p[1], p[2]);
            [-(zz * y), (y * y - zz * zz + v * v) * 0.5, -(zz * v), z()]
        }),
        VectorField::new("L3", |p| [-p[0], -p[1], -p[2], z()]),
        VectorField::new("C1", |p| {
            let (v, th) = (p[2], p[3]);
            [z(), z(), -th.tanh().recip(), -v.recip()]
        }),
        VectorField::new("C2", |p| {
            let (y, v, th) = (p[0], p[2], p[3]);
            let ct = th.tanh().recip();
            [ct * v, z(), -(ct * y), -(y / v)]
        }),
        VectorField::new("C3", |p| {
            let (zz, v, th) = (p[1], p[2], p[3]);
            let ct = th.tanh().recip();
            [z(), ct * v, -(ct * zz), -(zz / v)]
        }),
        VectorField::new("C4", |p| {
            let (y, zz, v, th) = (p[0], p[1], p[2], p[3]);
            let ct = th.tanh().recip();
            let r2 = y * y + zz * zz;
            [-(ct * v * y), -(ct * v * zz), (r2 - v * v) * ct * 0.5, (r2 + v * v) / (v * 2.0)]
        }),
    ]
}
