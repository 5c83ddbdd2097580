//! Adaptive Gauss–Kronrod quadrature (7/15 point pair).

/// Kronrod-15 abscissae on [0, 1] side of the symmetric rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod-15 weights.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss-7 weights, matching the odd-indexed Kronrod abscissae.
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod panel; returns (kronrod estimate, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let f_mid = f(mid);
    let mut kron = WGK[7] * f_mid;
    let mut gauss = WG[3] * f_mid;

    for i in 0..7 {
        let dx = half * XGK[i];
        let fsum = f(mid - dx) + f(mid + dx);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    kron *= half;
    gauss *= half;
    (kron, (kron - gauss).abs())
}

/// Adaptive quadrature of `f` over the finite interval `[a, b]`.
///
/// Panels are split until the local error estimate meets a tolerance
/// apportioned by panel width. Worst-case work is capped by `max_panels`;
/// the final estimate is still returned if the cap is hit (the error
/// estimate simply stops improving), which is the behaviour wanted inside
/// optimizer objectives.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let max_panels = 2000;
    let mut stack = vec![(a, b)];
    let mut total = 0.0;
    let mut panels = 0;
    while let Some((lo, hi)) = stack.pop() {
        let (est, err) = gk15(&f, lo, hi);
        panels += 1;
        let local_tol = tol * (hi - lo) / (b - a);
        if err <= local_tol.max(1e-300) || panels >= max_panels || (hi - lo) < 1e-14 * (b - a) {
            total += est;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    total
}

/// Integrate a nonnegative density-like integrand on (0, ∞).
///
/// The upper limit is located by doubling from `start_hi` until `f` falls
/// below `floor` (and at least past the point where it is still rising).
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, start_hi: f64, floor: f64, tol: f64) -> f64 {
    let hi = upper_cutoff(&f, start_hi, floor);
    integrate(f, 0.0, hi, tol)
}

/// Doubling search for the point beyond which `f` stays below `floor`.
pub fn upper_cutoff<F: Fn(f64) -> f64>(f: &F, start_hi: f64, floor: f64) -> f64 {
    let mut hi = start_hi.max(1e-6);
    let mut doublings = 0;
    while (f(hi) > floor || f(0.5 * hi) > floor) && doublings < 64 {
        hi *= 2.0;
        doublings += 1;
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_exactly() {
        // x^3 on [0, 2] = 4
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_gaussian() {
        let v = integrate(
            |x| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            -8.0,
            8.0,
            1e-12,
        );
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn infinite_tail_exponential() {
        let v = integrate_to_infinity(|x| (-x).exp(), 1.0, 1e-14, 1e-12);
        assert!((v - 1.0).abs() < 1e-9);
    }
}
