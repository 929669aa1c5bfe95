//! Adaptive Gauss–Kronrod (7/15) quadrature.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Integrates `f` over `[a, b]` to the requested absolute/relative tolerance.
///
/// Returns the estimate and the accumulated error estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let mut stack = vec![(a, b, gk15(&f, a, b), 0usize)];
    let mut total = 0.0;
    let mut err = 0.0;
    while let Some((lo, hi, (val, e), depth)) = stack.pop() {
        let tol = abs_tol.max(rel_tol * val.abs()) * ((hi - lo) / (b - a)).abs().sqrt();
        if e <= tol || depth > 40 || !e.is_finite() || !tol.is_finite() {
            total += val;
            err += e;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, gk15(&f, lo, mid), depth + 1));
        stack.push((mid, hi, gk15(&f, mid, hi), depth + 1));
    }
    (total, err)
}
