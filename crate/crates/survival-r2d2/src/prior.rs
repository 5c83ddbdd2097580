//! The prior machinery: the map between the global coefficient variance W
//! and the Weibull Bayesian R², the exact prior density on W induced by a
//! Beta(a, b) law on the rescaled R², its Generalized Beta Prime
//! approximation, and the mixture-model variant of the R² map.
//!
//! Throughout, c = Γ(1 + 2/θ) and d = Γ(1 + 1/θ)²; the attainable R² range
//! is [0, d/c). Gamma laws are parameterized shape–rate everywhere so the
//! compound-gamma representation of the GBP holds exactly:
//! W | γ ~ Gamma(a*, γ), γ ~ Gamma(b*, d*)  ⟺  W ~ GBP(a*, b*, 1, d*).

use crate::error::{Error, Result};
use crate::numeric::opt::nelder_mead;
use crate::numeric::quad;
use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::gamma;

/// Beta(a, b) hyperparameters on the rescaled R².
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct R2d2Hyper {
    pub a: f64,
    pub b: f64,
}

impl R2d2Hyper {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidParams(format!(
                "Beta hyperparameters must be positive, got ({a}, {b})"
            )))
        }
    }
}

/// Generalized Beta Prime parameters with the power parameter pinned to 1,
/// which is what makes the Gibbs reparameterization available.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GbpParams {
    pub a_star: f64,
    pub b_star: f64,
    pub c_star: f64,
    pub d_star: f64,
}

impl GbpParams {
    pub fn new(a_star: f64, b_star: f64, d_star: f64) -> Result<Self> {
        if a_star > 0.0 && b_star > 0.0 && d_star > 0.0 {
            Ok(Self {
                a_star,
                b_star,
                c_star: 1.0,
                d_star,
            })
        } else {
            Err(Error::InvalidParams(format!(
                "GBP parameters must be positive, got ({a_star}, {b_star}, {d_star})"
            )))
        }
    }

    /// Median of the c* = 1 law via the Beta representation:
    /// X/d* / (1 + X/d*) ~ Beta(a*, b*).
    pub fn median(&self) -> f64 {
        use statrs::distribution::{Beta, ContinuousCDF};
        let beta = Beta::new(self.a_star, self.b_star).expect("validated parameters");
        let q = beta.inverse_cdf(0.5);
        self.d_star * q / (1.0 - q)
    }
}

/// Result of fitting the GBP approximation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GbpFit {
    pub params: GbpParams,
    /// Pearson χ²-divergence between the exact prior and the fitted GBP.
    pub divergence: f64,
    /// Set when (a, b) sits in the regime where the fit is known to be
    /// ill-conditioned; the caller should surface the divergence to the
    /// user instead of trusting the overlay blindly.
    pub ill_conditioned: bool,
    pub evaluations: usize,
}

/// (c, d) = (Γ(1 + 2/θ), Γ(1 + 1/θ)²).
pub fn weibull_cd(theta: f64) -> (f64, f64) {
    let g1 = gamma(1.0 + 1.0 / theta);
    let c = gamma(1.0 + 2.0 / theta);
    (c, g1 * g1)
}

/// Upper bound of the attainable R²: d/c ∈ (0, 1).
pub fn r2_max(theta: f64) -> f64 {
    let (c, d) = weibull_cd(theta);
    d / c
}

/// R² as a function of the global variance W:
/// (e^w − 1) / ((c/d) e^w − 1), strictly increasing from 0 to d/c.
pub fn r2_from_w(w: f64, theta: f64) -> f64 {
    debug_assert!(w >= 0.0 && theta > 0.0);
    if w == 0.0 {
        return 0.0;
    }
    let (c, d) = weibull_cd(theta);
    // d (1 - e^{-w}) / (c - d e^{-w}) avoids overflow for large w
    let em = (-w).exp();
    d * (-(-w).exp_m1()) / (c - d * em)
}

/// Inverse of [`r2_from_w`]; errors outside [0, r2_max).
pub fn w_from_r2(r2: f64, theta: f64) -> Result<f64> {
    let (c, d) = weibull_cd(theta);
    let rmax = d / c;
    if !(0.0..rmax).contains(&r2) {
        return Err(Error::OutOfSupport(format!(
            "r2 = {r2} not in [0, {rmax})"
        )));
    }
    // e^w = (1 - r2) / (1 - r2 c/d)
    Ok((-r2).ln_1p() - (-r2 * c / d).ln_1p())
}

/// Log of the exact prior density of W induced by Beta(a, b) on the
/// rescaled R²:
///
/// π(w) = e^w c^a (c − d)^b (e^w − 1)^{a−1} / (B(a,b) (c e^w − d)^{a+b})
pub fn prior_w_ln_density(w: f64, theta: f64, hyper: &R2d2Hyper) -> f64 {
    if w <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let (c, d) = weibull_cd(theta);
    let (a, b) = (hyper.a, hyper.b);
    // ln(e^w - 1) and ln(c e^w - d), stable at both ends
    let ln_em1 = if w > 36.0 { w } else { w.exp_m1().ln() };
    let ln_ced = w + (c - d * (-w).exp()).ln();
    -ln_beta(a, b) + w + a * c.ln() + b * (c - d).ln() + (a - 1.0) * ln_em1 - (a + b) * ln_ced
}

/// Exact prior density of W; underflow returns 0.
pub fn prior_w_density(w: f64, theta: f64, hyper: &R2d2Hyper) -> f64 {
    let ln = prior_w_ln_density(w, theta, hyper);
    if ln == f64::NEG_INFINITY {
        0.0
    } else {
        ln.exp()
    }
}

/// |∂R²/∂w| = d (c − d) e^w / (c e^w − d)², the change-of-variables
/// Jacobian of the R² map.
pub fn r2_jacobian(w: f64, theta: f64) -> f64 {
    let (c, d) = weibull_cd(theta);
    // d (c - d) e^{-w} / (c - d e^{-w})^2
    let em = (-w).exp();
    let denom = c - d * em;
    d * (c - d) * em / (denom * denom)
}

fn ln1p_exp(t: f64) -> f64 {
    if t > 33.0 {
        t
    } else {
        t.exp().ln_1p()
    }
}

/// Log density of GBP(a, b, c, d):
/// f(x) = c (x/d)^{ac−1} (1 + (x/d)^c)^{−(a+b)} / (d B(a, b))
pub fn gbp_ln_density(x: f64, p: &GbpParams) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let (a, b, c, d) = (p.a_star, p.b_star, p.c_star, p.d_star);
    let ln_ratio = x.ln() - d.ln();
    c.ln() + (a * c - 1.0) * ln_ratio - (a + b) * ln1p_exp(c * ln_ratio) - d.ln() - ln_beta(a, b)
}

/// GBP density; see [`gbp_ln_density`].
pub fn gbp_density(x: f64, p: &GbpParams) -> f64 {
    let ln = gbp_ln_density(x, p);
    if ln == f64::NEG_INFINITY {
        0.0
    } else {
        ln.exp()
    }
}

/// Quadrature window (w_lo, w_hi) covering all but ~1e-12 of the exact
/// prior mass. The upper end comes from a doubling search; the lower end
/// from the w^{a−1} behaviour of the density at the origin.
pub fn density_support(theta: f64, hyper: &R2d2Hyper) -> (f64, f64) {
    let a = hyper.a;
    let w_hi = quad::upper_cutoff(&|w| prior_w_density(w, theta, hyper), 1.0, 1e-12);
    // near zero, pi(w) ~ K w^{a-1}: solve K w_lo^a / a = 1e-14
    let probe = 1e-8;
    let k = prior_w_density(probe, theta, hyper) / probe.powf(a - 1.0);
    let w_lo = if k.is_finite() && k > 0.0 {
        ((1e-14 * a / k).ln() / a).exp().clamp(1e-290, 1e-4)
    } else {
        1e-290
    };
    (w_lo, w_hi)
}

/// ∫ f(w) dw over the prior support, integrating in t = ln w so the
/// endpoint singularity at w → 0 (for a < 1) is handled smoothly.
fn integrate_over_support<F: Fn(f64) -> f64>(f: F, w_lo: f64, w_hi: f64, tol: f64) -> f64 {
    quad::integrate(
        |t| {
            let w = t.exp();
            f(w) * w
        },
        w_lo.ln(),
        w_hi.ln(),
        tol,
    )
}

/// Normalization check of the exact prior: ∫ π(w) dw.
pub fn prior_w_mass(theta: f64, hyper: &R2d2Hyper) -> f64 {
    let (w_lo, w_hi) = density_support(theta, hyper);
    integrate_over_support(|w| prior_w_density(w, theta, hyper), w_lo, w_hi, 1e-10)
}

/// Pearson χ²-divergence ∫ (π(w) − g(w))² / g(w) dw between the exact
/// prior and a candidate GBP, over the exact prior's support window.
pub fn pearson_divergence(theta: f64, hyper: &R2d2Hyper, p: &GbpParams) -> f64 {
    let (w_lo, w_hi) = density_support(theta, hyper);
    integrate_over_support(
        |w| {
            let pi = prior_w_density(w, theta, hyper);
            let g = gbp_density(w, p);
            if g <= 0.0 {
                if pi > 0.0 {
                    return f64::INFINITY;
                }
                return 0.0;
            }
            let diff = pi - g;
            diff * diff / g
        },
        w_lo,
        w_hi,
        1e-8,
    )
}

/// Fit GBP(a*, b*, 1, d*) to the exact prior of W by minimizing the
/// Pearson χ²-divergence with a Nelder–Mead search on the log-parameters,
/// started at (a, b, 1).
///
/// The fit is deterministic. For extreme hyperparameters (a or b below
/// 0.2) the objective is known to be ill-conditioned; the fit is still
/// returned with `ill_conditioned` set rather than failing outright.
pub fn fit_gbp_approx(theta: f64, hyper: &R2d2Hyper) -> Result<GbpFit> {
    if !(theta > 0.0) {
        return Err(Error::InvalidParams(format!("theta = {theta}")));
    }
    let objective = |x: &[f64]| {
        let params = GbpParams {
            a_star: x[0].exp(),
            b_star: x[1].exp(),
            c_star: 1.0,
            d_star: x[2].exp(),
        };
        pearson_divergence(theta, hyper, &params)
    };
    let x0 = [hyper.a.ln(), hyper.b.ln(), 0.0];
    let fit = nelder_mead(objective, &x0, 0.4, 2000);
    if !fit.value.is_finite() || fit.value >= f64::MAX / 8.0 {
        return Err(Error::NoConvergence(format!(
            "GBP fit degenerate for (a, b) = ({}, {})",
            hyper.a, hyper.b
        )));
    }
    let params = GbpParams::new(fit.x[0].exp(), fit.x[1].exp(), fit.x[2].exp())?;
    Ok(GbpFit {
        params,
        divergence: fit.value,
        ill_conditioned: hyper.a < 0.2 || hyper.b < 0.2,
        evaluations: fit.evaluations,
    })
}

// ---------------------------------------------------------------------------
// Mixture-model variant of the R² map
// ---------------------------------------------------------------------------

/// Weibull mixture on the intercept: component intercepts β₀ⱼ with equal
/// Dirichlet(1/m, …, 1/m) weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub m: usize,
    pub beta0s: Vec<f64>,
    pub sigma2_gamma: f64,
}

impl MixtureSpec {
    pub fn new(beta0s: Vec<f64>, sigma2_gamma: f64) -> Result<Self> {
        if beta0s.is_empty() {
            return Err(Error::InvalidParams("mixture needs m >= 1".into()));
        }
        Ok(Self {
            m: beta0s.len(),
            beta0s,
            sigma2_gamma,
        })
    }

    /// Coefficients (h, A, B) of the mixture R² map
    ///
    ///   R²(w) = h (e^w − 1) / ((h + A) e^w − (h + B)),
    ///
    /// obtained by integrating the mixture mean/variance functions against
    /// η_j ~ N(β₀ⱼ, W) with Dirichlet(1/m,…,1/m) weights marginalized out:
    /// with s₁ = Σ e^{β₀ⱼ}, s₂ = Σ e^{2β₀ⱼ},
    ///
    ///   h = (d/m²) s₂,  A = (c/m − d/m²) s₂,  B = (d/m²)(s₁² − s₂).
    ///
    /// At m = 1, A = (c − d) e^{2β₀} and B = 0, reproducing the
    /// single-component map exactly.
    pub fn r2_coefficients(&self, theta: f64) -> (f64, f64, f64) {
        let (c, d) = weibull_cd(theta);
        let m = self.m as f64;
        let s1: f64 = self.beta0s.iter().map(|b| b.exp()).sum();
        let s2: f64 = self.beta0s.iter().map(|b| (2.0 * b).exp()).sum();
        let h = d / (m * m) * s2;
        let a = (c / m - d / (m * m)) * s2;
        let b = d / (m * m) * (s1 * s1 - s2);
        (h, a, b)
    }
}

/// Mixture-model R² as a function of W; reduces to [`r2_from_w`] at m = 1.
pub fn mixture_r2_from_w(w: f64, theta: f64, spec: &MixtureSpec) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let (h, a, b) = spec.r2_coefficients(theta);
    // h (1 - e^{-w}) / ((h + A) - (h + B) e^{-w})
    let em = (-w).exp();
    h * (-(-w).exp_m1()) / ((h + a) - (h + b) * em)
}

/// Upper bound of the mixture R²: h / (h + A).
pub fn mixture_r2_max(theta: f64, spec: &MixtureSpec) -> f64 {
    let (h, a, _) = spec.r2_coefficients(theta);
    h / (h + a)
}

/// Prior density on W induced by Beta(a, b) on the rescaled mixture R²,
/// by change of variables through the mixture R² map.
pub fn mixture_prior_w_density(
    w: f64,
    theta: f64,
    spec: &MixtureSpec,
    hyper: &R2d2Hyper,
) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let (h, a_c, b_c) = spec.r2_coefficients(theta);
    let (dd, ee) = (h + a_c, h + b_c);
    let rmax = h / dd;
    let r = mixture_r2_from_w(w, theta, spec);
    let r_tilde = (r / rmax).clamp(0.0, 1.0);
    // |dR²/dw| = h (D - E) e^{-w} / (D - E e^{-w})^2
    let em = (-w).exp();
    let denom = dd - ee * em;
    let jac = h * (dd - ee) * em / (denom * denom);
    let (a, b) = (hyper.a, hyper.b);
    let ln_beta_pdf = if r_tilde <= 0.0 || r_tilde >= 1.0 {
        // endpoint: finite only for a, b >= 1; density limit is 0 when the
        // exponent is positive
        if (r_tilde <= 0.0 && a > 1.0) || (r_tilde >= 1.0 && b > 1.0) {
            f64::NEG_INFINITY
        } else if (r_tilde <= 0.0 && a == 1.0) || (r_tilde >= 1.0 && b == 1.0) {
            -ln_beta(a, b)
        } else {
            return f64::INFINITY;
        }
    } else {
        (a - 1.0) * r_tilde.ln() + (b - 1.0) * (-r_tilde).ln_1p() - ln_beta(a, b)
    };
    if ln_beta_pdf == f64::NEG_INFINITY {
        return 0.0;
    }
    ln_beta_pdf.exp() / rmax * jac
}

#[cfg(test)]
mod tests {
    use super::*;

    const THETA_HALF_LOG: f64 = 1.648_721_270_700_128_2; // e^{0.5}

    #[test]
    fn r2_zero_at_w_zero() {
        for &theta in &[0.5, 1.0, 3.0] {
            assert_eq!(r2_from_w(0.0, theta), 0.0);
        }
    }

    #[test]
    fn r2_exponential_case_hand_value() {
        // θ=1: c = Γ(3) = 2, d = Γ(2)² = 1; w = ln 2 gives (2-1)/(4-1) = 1/3
        let r2 = r2_from_w(2.0f64.ln(), 1.0);
        assert!((r2 - 1.0 / 3.0).abs() < 1e-14, "r2 = {r2}");
    }

    #[test]
    fn r2_limit_is_d_over_c() {
        let r2 = r2_from_w(800.0, 1.0);
        assert!((r2 - 0.5).abs() < 1e-12);
        assert!(r2 < 0.5 + 1e-12);
    }

    #[test]
    fn r2_max_approaches_one_for_large_shape() {
        assert!(r2_max(100.0) > 0.99);
        for &theta in &[0.5, 1.0, THETA_HALF_LOG, 3.0] {
            let rm = r2_max(theta);
            assert!(rm > 0.0 && rm < 1.0);
        }
    }

    #[test]
    fn r2_strictly_increasing() {
        for &theta in &[0.5, 1.0, THETA_HALF_LOG, 3.0] {
            let mut prev = -1.0;
            for k in 0..200 {
                let w = k as f64 * 0.1;
                let r = r2_from_w(w, theta);
                assert!(r > prev || (w == 0.0 && r == 0.0), "not increasing at w={w}");
                prev = r;
            }
        }
    }

    #[test]
    fn w_from_r2_inverts() {
        // hand case
        let w = w_from_r2(1.0 / 3.0, 1.0).unwrap();
        assert!((w - 2.0f64.ln()).abs() < 1e-14);
        assert_eq!(w_from_r2(0.0, 1.0).unwrap(), 0.0);
        // roundtrip on [0, 20]; beyond w ≈ 12 the map's condition number
        // dw/dr² grows like e^w, so the attainable roundtrip error in f64
        // is e^w · ulp-sized regardless of implementation — the tolerance
        // tracks that floor
        for &theta in &[0.5, 1.0, THETA_HALF_LOG, 3.0] {
            let (c, d) = weibull_cd(theta);
            let cond_const = c * c / (d * (c - d));
            for k in 0..=40 {
                let w = k as f64 * 0.5;
                let back = w_from_r2(r2_from_w(w, theta), theta).unwrap();
                let tol = (20.0 * f64::EPSILON * cond_const * w.exp()).max(1e-10);
                assert!(
                    (back - w).abs() < tol,
                    "w={w} back={back} theta={theta}"
                );
            }
        }
    }

    #[test]
    fn w_from_r2_rejects_boundary() {
        let rm = r2_max(1.0);
        assert!(matches!(w_from_r2(rm, 1.0), Err(Error::OutOfSupport(_))));
        assert!(matches!(w_from_r2(-0.1, 1.0), Err(Error::OutOfSupport(_))));
    }

    #[test]
    fn exact_density_normalizes() {
        for &(a, b) in &[(0.5, 0.5), (1.0, 5.0), (5.0, 1.0)] {
            let hyper = R2d2Hyper::new(a, b).unwrap();
            let mass = prior_w_mass(THETA_HALF_LOG, &hyper);
            assert!(
                (mass - 1.0).abs() < 1e-3,
                "mass = {mass} for (a,b)=({a},{b})"
            );
        }
        // across the shape grid
        let hyper = R2d2Hyper::new(0.5, 0.5).unwrap();
        for &theta in &[0.5, 1.0, THETA_HALF_LOG, 3.0] {
            let mass = prior_w_mass(theta, &hyper);
            assert!((mass - 1.0).abs() < 1e-3, "mass = {mass} at theta={theta}");
        }
    }

    #[test]
    fn flat_beta_reduces_to_jacobian_over_range() {
        // a = b = 1: the density is the pure change of variables
        let hyper = R2d2Hyper::new(1.0, 1.0).unwrap();
        for &theta in &[1.0, THETA_HALF_LOG] {
            let rmax = r2_max(theta);
            for &w in &[0.05, 0.3, 1.0, 2.5, 6.0] {
                let lhs = prior_w_density(w, theta, &hyper);
                let rhs = r2_jacobian(w, theta) / rmax;
                assert!(
                    (lhs - rhs).abs() < 1e-12 * rhs.max(1.0),
                    "w={w}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn gbp_density_normalizes() {
        let p = GbpParams {
            a_star: 2.0,
            b_star: 3.0,
            c_star: 1.0,
            d_star: 1.0,
        };
        let mass = quad::integrate(
            |t| {
                let x = t.exp();
                gbp_density(x, &p) * x
            },
            (1e-12f64).ln(),
            (1e6f64).ln(),
            1e-10,
        );
        assert!((mass - 1.0).abs() < 1e-6, "mass = {mass}");
    }

    #[test]
    fn gbp_reduces_to_beta_prime() {
        // c = d = 1: f(x) = x^{a-1} (1+x)^{-(a+b)} / B(a,b)
        let p = GbpParams {
            a_star: 2.5,
            b_star: 1.5,
            c_star: 1.0,
            d_star: 1.0,
        };
        for &x in &[0.1f64, 0.7, 2.0, 9.0] {
            let direct =
                ((p.a_star - 1.0) * x.ln() - (p.a_star + p.b_star) * x.ln_1p()
                    - ln_beta(p.a_star, p.b_star))
                .exp();
            assert!((gbp_density(x, &p) - direct).abs() < 1e-12 * direct);
        }
    }

    #[test]
    fn gbp_vanishes_at_origin_when_ac_exceeds_one() {
        let p = GbpParams {
            a_star: 2.0,
            b_star: 1.0,
            c_star: 1.0,
            d_star: 1.0,
        };
        assert!(gbp_density(1e-14, &p) < 1e-10);
    }

    #[test]
    fn gbp_matches_compound_gamma_marginal() {
        // marginal of W | γ ~ Gamma(a, rate γ), γ ~ Gamma(b, rate d),
        // integrated numerically over γ
        let p = GbpParams {
            a_star: 1.7,
            b_star: 2.3,
            c_star: 1.0,
            d_star: 0.8,
        };
        let (a, b, d) = (p.a_star, p.b_star, p.d_star);
        use statrs::function::gamma::ln_gamma;
        for &w in &[0.05f64, 0.3, 1.0, 2.0, 5.0] {
            let marginal = quad::integrate(
                |t| {
                    let g = t.exp();
                    let ln_w_given_g = a * g.ln() + (a - 1.0) * w.ln() - g * w - ln_gamma(a);
                    let ln_g = b * d.ln() + (b - 1.0) * g.ln() - d * g - ln_gamma(b);
                    (ln_w_given_g + ln_g).exp() * g
                },
                (1e-10f64).ln(),
                (1e4f64).ln(),
                1e-12,
            );
            let direct = gbp_density(w, &p);
            assert!(
                (marginal - direct).abs() < 1e-8,
                "w={w}: {marginal} vs {direct}"
            );
        }
    }

    #[test]
    fn gbp_fit_is_close_for_reference_prior() {
        let hyper = R2d2Hyper::new(0.5, 0.5).unwrap();
        let fit = fit_gbp_approx(THETA_HALF_LOG, &hyper).unwrap();
        assert!(
            fit.divergence < 0.05,
            "divergence = {} with params {:?}",
            fit.divergence,
            fit.params
        );
        assert!(!fit.ill_conditioned);
    }

    #[test]
    fn gbp_fit_flags_extreme_priors() {
        let hyper = R2d2Hyper::new(0.1, 3.0).unwrap();
        match fit_gbp_approx(1.0, &hyper) {
            Ok(fit) => assert!(fit.ill_conditioned),
            Err(Error::NoConvergence(_)) => {}
            Err(other) => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn gbp_fit_deterministic() {
        let hyper = R2d2Hyper::new(1.0, 5.0).unwrap();
        let f1 = fit_gbp_approx(1.0, &hyper).unwrap();
        let f2 = fit_gbp_approx(1.0, &hyper).unwrap();
        assert_eq!(f1.params.a_star, f2.params.a_star);
        assert_eq!(f1.divergence, f2.divergence);
    }

    #[test]
    fn mixture_single_component_reduces_exactly() {
        let spec = MixtureSpec::new(vec![0.3], 1.0).unwrap();
        let hyper = R2d2Hyper::new(0.5, 2.0).unwrap();
        for &theta in &[0.7, 1.0, 2.0] {
            for k in 0..=60 {
                let w = 0.02 + k as f64 * 0.2;
                let single = r2_from_w(w, theta);
                let mixed = mixture_r2_from_w(w, theta, &spec);
                assert!(
                    (single - mixed).abs() < 1e-12,
                    "w={w} theta={theta}: {single} vs {mixed}"
                );
                let ds = prior_w_density(w, theta, &hyper);
                let dm = mixture_prior_w_density(w, theta, &spec, &hyper);
                assert!(
                    (ds - dm).abs() < 1e-10 * ds.max(1.0),
                    "density w={w}: {ds} vs {dm}"
                );
            }
            assert!((mixture_r2_max(theta, &spec) - r2_max(theta)).abs() < 1e-14);
        }
    }

    #[test]
    fn mixture_r2_zero_at_zero() {
        let spec = MixtureSpec::new(vec![0.0, 1.0, -0.5], 1.0).unwrap();
        assert_eq!(mixture_r2_from_w(0.0, 1.3, &spec), 0.0);
    }

    #[test]
    fn mixture_density_normalizes() {
        let spec = MixtureSpec::new(vec![0.0, 0.4], 1.0).unwrap();
        let hyper = R2d2Hyper::new(2.0, 3.0).unwrap();
        let mass = quad::integrate(
            |t| {
                let w = t.exp();
                mixture_prior_w_density(w, 1.0, &spec, &hyper) * w
            },
            (1e-10f64).ln(),
            (200.0f64).ln(),
            1e-10,
        );
        assert!((mass - 1.0).abs() < 1e-4, "mass = {mass}");
    }

    #[test]
    fn mixture_two_component_closed_form_hand_check() {
        // m=2, β₀=(0,0), θ=1: c=2, d=1 → h = 1/2, A = 3/2, B = 1/2,
        // R²(W) = 0.5(e^W − 1)/(2e^W − 1)
        let spec = MixtureSpec::new(vec![0.0, 0.0], 1.0).unwrap();
        let w = 1.0f64;
        let expected = 0.5 * (w.exp() - 1.0) / (2.0 * w.exp() - 1.0);
        let got = mixture_r2_from_w(w, 1.0, &spec);
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
    }
}
