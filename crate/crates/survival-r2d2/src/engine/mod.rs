//! Metropolis-within-Gibbs samplers for the censored Weibull model.
//!
//! All Weibull-likelihood chains share the same skeleton built on the
//! auxiliary-variable representation: a latent u_i per observation turns
//! the e^{−y_iᶿ e^{−θη_i}} likelihood factor into an indicator
//! I(u_i > y_iᶿ e^{−θη_i}), which makes every β_j update a truncated
//! normal draw. The intercept and shape are random-walk Metropolis steps
//! against the u-marginal likelihood; drawing u immediately after them and
//! before the β sweep makes the composite [β₀, θ, u] move a valid blocked
//! draw (chain-rule factorization of their joint conditional), and keeps
//! the β truncation bounds fresh.
//!
//! Iteration order: β₀ (MH) → log θ (MH) → u → β sweep → variance blocks.
//! MH step sizes adapt in windows of 100 iterations during burn-in only,
//! targeting acceptance in [0.30, 0.50]; after burn-in the kernel is
//! fixed.

mod gaussian;
mod glm;
mod horseshoe;
mod r2d2;

pub use gaussian::{run_gaussian_weibull_chain, WeibullRegressionData};
pub use glm::{run_linear_chain, run_logistic_chain};
pub use horseshoe::run_horseshoe_chain;
pub use r2d2::{run_r2d2_chain, R2d2Sampler};

use crate::dists;
use crate::error::{Error, Result};
use crate::model::SurvivalDataset;
use crate::numeric::{median_ci95, seed::derive_rng};
use crate::prior::{r2_from_w, GbpParams, R2d2Hyper};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Smallest prior variance the β sweep will hand to the truncated-normal
/// sampler; φ_j and β_j² are floored at the same scale before entering
/// GIG parameters.
pub(crate) const VAR_FLOOR: f64 = 1e-290;

/// Settings shared by every chain.
#[derive(Debug, Clone, Serialize)]
pub struct SamplerConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    /// Beta hyperparameters on the rescaled R² (R2D2 chain only).
    pub hyper: R2d2Hyper,
    /// GBP approximation fitted at the shape MLE (R2D2 chain only).
    pub gbp: GbpParams,
    /// Prior mean of log θ.
    pub t1: f64,
    /// Prior variance of log θ.
    pub t2: f64,
    /// Prior mean of the intercept.
    pub mu_b0: f64,
    /// Prior variance of the intercept (also the fixed coefficient
    /// variance of the non-penalized Weibull chain).
    pub sig2_b0: f64,
    pub seed: u64,
    /// Burn-in acceptance-rate window the MH scales adapt toward.
    pub target_accept: (f64, f64),
}

impl SamplerConfig {
    /// Uninformative defaults: t₁ = 0, t₂ = 100, μ_β₀ = 0, σ²_β₀ = 100.
    pub fn new(iterations: usize, burn_in: usize, thin: usize, seed: u64) -> Self {
        Self {
            iterations,
            burn_in,
            thin,
            hyper: R2d2Hyper { a: 0.5, b: 0.5 },
            gbp: GbpParams {
                a_star: 1.0,
                b_star: 1.0,
                c_star: 1.0,
                d_star: 1.0,
            },
            t1: 0.0,
            t2: 100.0,
            mu_b0: 0.0,
            sig2_b0: 100.0,
            seed,
            target_accept: (0.30, 0.50),
        }
    }

    /// Desk-scale profile: 20k iterations, 6k burn-in, thin 3.
    pub fn desk(seed: u64) -> Self {
        Self::new(20_000, 6_000, 3, seed)
    }

    /// Full-scale profile: 100k iterations, 30k burn-in, thin 3.
    pub fn paper(seed: u64) -> Self {
        Self::new(100_000, 30_000, 3, seed)
    }

    /// Mediator-model profile: 20k iterations, 5k burn-in.
    pub fn mediator(seed: u64) -> Self {
        Self::new(20_000, 5_000, 1, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.iterations {
            return Err(Error::InvalidParams(format!(
                "burn_in {} must be < iterations {}",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidParams("thin must be >= 1".into()));
        }
        if !(self.t2 > 0.0) || !(self.sig2_b0 > 0.0) {
            return Err(Error::InvalidParams(
                "prior variances t2 and sig2_b0 must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Number of retained draws: ⌊(iterations − burn_in)/thin⌋.
    pub fn retained(&self) -> usize {
        (self.iterations - self.burn_in) / self.thin
    }

    pub(crate) fn keep(&self, iteration_1based: usize) -> bool {
        iteration_1based > self.burn_in && (iteration_1based - self.burn_in) % self.thin == 0
    }
}

/// One adaptive random-walk block.
#[derive(Debug, Clone)]
pub struct MhBlock {
    pub name: &'static str,
    pub scale: f64,
    window_accepted: u32,
    window_proposed: u32,
    post_accepted: u64,
    post_proposed: u64,
}

impl MhBlock {
    pub fn new(name: &'static str, scale: f64) -> Self {
        Self {
            name,
            scale,
            window_accepted: 0,
            window_proposed: 0,
            post_accepted: 0,
            post_proposed: 0,
        }
    }

    pub fn record(&mut self, accepted: bool, in_burn_in: bool) {
        if in_burn_in {
            self.window_proposed += 1;
            if accepted {
                self.window_accepted += 1;
            }
        } else {
            self.post_proposed += 1;
            if accepted {
                self.post_accepted += 1;
            }
        }
    }

    /// Window check every 100 burn-in proposals: nudge the scale by
    /// ×1.1 / ×0.9 toward the target band.
    pub fn adapt(&mut self, target: (f64, f64)) {
        if self.window_proposed >= 100 {
            let rate = self.window_accepted as f64 / self.window_proposed as f64;
            if rate > target.1 {
                self.scale *= 1.1;
            } else if rate < target.0 {
                self.scale *= 0.9;
            }
            self.window_accepted = 0;
            self.window_proposed = 0;
        }
    }

    /// Post-burn-in acceptance rate.
    pub fn rate(&self) -> f64 {
        if self.post_proposed == 0 {
            f64::NAN
        } else {
            self.post_accepted as f64 / self.post_proposed as f64
        }
    }
}

/// All R2D2-chain unknowns at one iteration.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub beta0: f64,
    pub beta: DVector<f64>,
    pub log_theta: f64,
    pub w: f64,
    pub gamma: f64,
    pub phi: DVector<f64>,
    pub u: Vec<f64>,
    /// Cached linear predictor β₀ + Xβ.
    pub eta: DVector<f64>,
    pub mh_beta0: MhBlock,
    pub mh_log_theta: MhBlock,
}

impl ChainState {
    /// Assemble a state from parts, recomputing the cached predictor.
    pub fn with_values(
        x: &DMatrix<f64>,
        beta0: f64,
        beta: DVector<f64>,
        log_theta: f64,
        w: f64,
        gamma: f64,
        phi: DVector<f64>,
        u: Vec<f64>,
    ) -> Self {
        let mut eta = x * &beta;
        eta.add_scalar_mut(beta0);
        Self {
            beta0,
            beta,
            log_theta,
            w,
            gamma,
            phi,
            u,
            eta,
            mh_beta0: MhBlock::new("beta0", 0.5),
            mh_log_theta: MhBlock::new("log_theta", 0.2),
        }
    }

    pub fn theta(&self) -> f64 {
        self.log_theta.exp()
    }
}

/// Summary of one scalar parameter: posterior median and equal-tailed
/// 95% interval.
#[derive(Debug, Clone, Serialize)]
pub struct ParamSummary {
    pub name: String,
    pub median: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Post-burn-in acceptance rate of one MH block.
#[derive(Debug, Clone, Serialize)]
pub struct BlockRate {
    pub block: String,
    pub rate: f64,
}

/// Thinned post-burn-in draws with per-parameter summaries.
#[derive(Debug, Clone)]
pub struct PosteriorDraws {
    pub names: Vec<String>,
    /// draws[param][draw index]
    pub draws: Vec<Vec<f64>>,
    pub summaries: Vec<ParamSummary>,
    pub accept: Vec<BlockRate>,
    pub seed: u64,
    pub config_echo: String,
    /// Index of the first regression coefficient in `names`.
    pub coef_offset: usize,
    /// Number of regression coefficients.
    pub n_coef: usize,
    pub warnings: Vec<String>,
}

impl PosteriorDraws {
    pub(crate) fn from_columns(
        names: Vec<String>,
        draws: Vec<Vec<f64>>,
        accept: Vec<BlockRate>,
        config: &SamplerConfig,
        coef_offset: usize,
        n_coef: usize,
        warnings: Vec<String>,
    ) -> Self {
        let summaries = names
            .iter()
            .zip(&draws)
            .map(|(name, col)| {
                let (median, lo, hi) = median_ci95(col);
                ParamSummary {
                    name: name.clone(),
                    median,
                    lo,
                    hi,
                }
            })
            .collect();
        Self {
            names,
            draws,
            summaries,
            accept,
            seed: config.seed,
            config_echo: serde_json::to_string(config).unwrap_or_default(),
            coef_offset,
            n_coef,
            warnings,
        }
    }

    pub fn retained(&self) -> usize {
        self.draws.first().map_or(0, |c| c.len())
    }

    /// Draws of a named parameter.
    pub fn param(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.draws[i].as_slice())
    }

    /// Draws of the j-th regression coefficient.
    pub fn coef_draws(&self, j: usize) -> &[f64] {
        &self.draws[self.coef_offset + j]
    }

    pub fn coef_summary(&self, j: usize) -> &ParamSummary {
        &self.summaries[self.coef_offset + j]
    }

    /// Write a trace CSV: one row per retained draw, one column per
    /// parameter, with a leading draw index.
    pub fn write_trace_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["draw".to_string()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header)?;
        for t in 0..self.retained() {
            let mut row = vec![t.to_string()];
            row.extend(self.draws.iter().map(|col| format!("{:.17e}", col[t])));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Posterior draws of the Bayesian R², obtained by pushing each retained
/// (W, θ) pair through the R² map. Monotone in W draw-by-draw.
pub fn bayes_r2_posterior(draws: &PosteriorDraws) -> Result<Vec<f64>> {
    let w = draws
        .param("W")
        .ok_or_else(|| Error::InvalidData("draws lack a W column".into()))?;
    let log_theta = draws
        .param("log_theta")
        .ok_or_else(|| Error::InvalidData("draws lack a log_theta column".into()))?;
    Ok(w.iter()
        .zip(log_theta)
        .map(|(&w, &s)| r2_from_w(w, s.exp()))
        .collect())
}

// ---------------------------------------------------------------------------
// Shared Weibull-likelihood machinery
// ---------------------------------------------------------------------------

/// Precomputed quantities for a Weibull-likelihood chain on a fixed design.
pub(crate) struct WeibullCore {
    pub times: Vec<f64>,
    pub events: Vec<bool>,
    pub x: DMatrix<f64>,
    pub ln_y: Vec<f64>,
    /// Σ_i δ_i X_ij per column; zero under the standardization contract.
    pub sum_delta_x: Vec<f64>,
    pub n_events: f64,
}

impl WeibullCore {
    pub fn new(times: &[f64], events: &[bool], x: &DMatrix<f64>) -> Self {
        let ln_y: Vec<f64> = times.iter().map(|t| t.ln()).collect();
        let p = x.ncols();
        let mut sum_delta_x = vec![0.0; p];
        for j in 0..p {
            let col = x.column(j);
            sum_delta_x[j] = events
                .iter()
                .enumerate()
                .filter(|(_, &e)| e)
                .map(|(i, _)| col[i])
                .sum();
        }
        Self {
            times: times.to_vec(),
            events: events.to_vec(),
            x: x.clone(),
            ln_y,
            sum_delta_x,
            n_events: events.iter().filter(|&&e| e).count() as f64,
        }
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Censored Weibull log-likelihood at shape θ and linear predictor η.
    pub fn log_lik(&self, theta: f64, eta: &DVector<f64>) -> f64 {
        let ln_theta = theta.ln();
        let mut total = 0.0;
        for i in 0..self.n() {
            let z = theta * (self.ln_y[i] - eta[i]);
            if self.events[i] {
                total += ln_theta + (theta - 1.0) * self.ln_y[i] - theta * eta[i];
            }
            total -= z.exp();
        }
        total
    }

    /// Random-walk MH update of the intercept against the u-marginal
    /// likelihood plus its normal prior. Shifts the cached η on accept.
    pub fn mh_beta0<R: Rng + ?Sized>(
        &self,
        beta0: &mut f64,
        eta: &mut DVector<f64>,
        theta: f64,
        prior_mean: f64,
        prior_var: f64,
        block: &mut MhBlock,
        in_burn_in: bool,
        rng: &mut R,
    ) {
        let z: f64 = rng.sample(StandardNormal);
        let proposal = *beta0 + block.scale * z;
        let shift = proposal - *beta0;
        // Δ loglik = −θ ñ shift − Σ_i (e^{θ(lny−η−shift)} − e^{θ(lny−η)})
        let mut delta = -theta * self.n_events * shift;
        let damp = (-theta * shift).exp();
        for i in 0..self.n() {
            let base = (theta * (self.ln_y[i] - eta[i])).exp();
            delta -= base * (damp - 1.0);
        }
        let dp = proposal - prior_mean;
        let dc = *beta0 - prior_mean;
        delta += -(dp * dp - dc * dc) / (2.0 * prior_var);
        let accepted = delta.is_finite() && rng.random::<f64>().ln() < delta;
        if accepted {
            *beta0 = proposal;
            eta.add_scalar_mut(shift);
        }
        block.record(accepted, in_burn_in);
    }

    /// Random-walk MH update of log θ against the u-marginal likelihood
    /// plus the normal prior on log θ.
    pub fn mh_log_theta<R: Rng + ?Sized>(
        &self,
        log_theta: &mut f64,
        eta: &DVector<f64>,
        t1: f64,
        t2: f64,
        block: &mut MhBlock,
        in_burn_in: bool,
        rng: &mut R,
    ) {
        let z: f64 = rng.sample(StandardNormal);
        let proposal = *log_theta + block.scale * z;
        let cur = self.log_lik(log_theta.exp(), eta);
        let new = self.log_lik(proposal.exp(), eta);
        let dp = proposal - t1;
        let dc = *log_theta - t1;
        let delta = new - cur - (dp * dp - dc * dc) / (2.0 * t2);
        let accepted = delta.is_finite() && rng.random::<f64>().ln() < delta;
        if accepted {
            *log_theta = proposal;
        }
        block.record(accepted, in_burn_in);
    }

    /// Draw the auxiliary variables: u_i ~ Exp(1) shifted above
    /// y_iᶿ e^{−θη_i}.
    pub fn draw_u<R: Rng + ?Sized>(
        &self,
        theta: f64,
        eta: &DVector<f64>,
        u: &mut [f64],
        iteration: usize,
        rng: &mut R,
    ) -> Result<()> {
        for i in 0..self.n() {
            let floor = (theta * (self.ln_y[i] - eta[i])).exp();
            if !floor.is_finite() {
                return Err(Error::ChainDiverged {
                    iteration,
                    detail: format!("u floor overflow at observation {i}"),
                });
            }
            u[i] = dists::sample_truncated_exponential(floor, rng);
        }
        Ok(())
    }

    /// Gibbs sweep over the coefficients: each β_j is a truncated normal
    /// with prior variance `prior_vars[j]`, conditional mean
    /// −θ σ_j² Σ_i δ_i X_ij, and bounds intersected over observations.
    /// The cached η is updated incrementally.
    #[allow(clippy::too_many_arguments)]
    pub fn beta_sweep<R: Rng + ?Sized>(
        &self,
        beta: &mut DVector<f64>,
        eta: &mut DVector<f64>,
        theta: f64,
        ln_u: &[f64],
        prior_vars: &[f64],
        iteration: usize,
        rng: &mut R,
    ) -> Result<()> {
        let inv_theta = 1.0 / theta;
        for j in 0..self.p() {
            let col = self.x.column(j);
            let old = beta[j];
            let mut lower = f64::NEG_INFINITY;
            let mut upper = f64::INFINITY;
            for i in 0..self.n() {
                let xij = col[i];
                if xij == 0.0 {
                    continue;
                }
                // constraint: x_ij β_j > ln y_i − (η_i − x_ij β_j) − ln u_i / θ
                let rest = eta[i] - xij * old;
                let bound = (self.ln_y[i] - rest - ln_u[i] * inv_theta) / xij;
                if xij > 0.0 {
                    lower = lower.max(bound);
                } else {
                    upper = upper.min(bound);
                }
            }
            if lower >= upper {
                return Err(Error::InfeasibleRegion {
                    index: j,
                    lower,
                    upper,
                });
            }
            let var = prior_vars[j].max(VAR_FLOOR);
            let mean = -theta * var * self.sum_delta_x[j];
            let new = dists::sample_truncated_normal(mean, var.sqrt(), lower, upper, rng)
                .map_err(|e| Error::ChainDiverged {
                    iteration,
                    detail: format!("beta[{j}] draw failed: {e}"),
                })?;
            let diff = new - old;
            if diff != 0.0 {
                for i in 0..self.n() {
                    eta[i] += col[i] * diff;
                }
            }
            beta[j] = new;
        }
        Ok(())
    }

    /// Intercept initialization: mean log time of the uncensored rows.
    pub fn init_beta0(&self) -> f64 {
        let sum: f64 = self
            .ln_y
            .iter()
            .zip(&self.events)
            .filter(|(_, &e)| e)
            .map(|(&ly, _)| ly)
            .sum();
        sum / self.n_events
    }
}

/// Truncation interval contributed by observation `i` to coefficient `j`,
/// exactly as one case of the sweep's intersection:
/// X_ij > 0 yields a lower bound, X_ij < 0 an upper bound, X_ij = 0 no
/// constraint. The intercept sits inside the bound numerator.
pub fn beta_truncation_bounds(
    i: usize,
    j: usize,
    state: &ChainState,
    data: &SurvivalDataset,
) -> (f64, f64) {
    let xij = data.x_std[(i, j)];
    if xij == 0.0 {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    let theta = state.theta();
    let rest = state.eta[i] - xij * state.beta[j];
    let bound = (data.times[i].ln() - rest - state.u[i].ln() / theta) / xij;
    if xij > 0.0 {
        (bound, f64::INFINITY)
    } else {
        (f64::NEG_INFINITY, bound)
    }
}

/// Intersection over all observations of [`beta_truncation_bounds`]; this
/// is the interval the sweep actually samples from.
pub fn intersect_beta_bounds(
    j: usize,
    state: &ChainState,
    data: &SurvivalDataset,
) -> Result<(f64, f64)> {
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for i in 0..data.n() {
        let (lo, hi) = beta_truncation_bounds(i, j, state, data);
        lower = lower.max(lo);
        upper = upper.min(hi);
    }
    if lower >= upper {
        Err(Error::InfeasibleRegion {
            index: j,
            lower,
            upper,
        })
    } else {
        Ok((lower, upper))
    }
}

/// Convenience: the RNG every chain entry point derives from its config.
pub(crate) fn chain_rng(config: &SamplerConfig, label: u64) -> rand_chacha::ChaCha12Rng {
    derive_rng(config.seed, &[0xC4A1, label])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn toy_dataset(x_col: Vec<f64>) -> SurvivalDataset {
        let n = x_col.len();
        SurvivalDataset {
            times: vec![1.0; n],
            events: vec![true; n],
            x_raw: DMatrix::from_column_slice(n, 1, &x_col),
            x_std: DMatrix::from_column_slice(n, 1, &x_col),
            col_means: vec![0.0],
            col_sds: vec![1.0],
        }
    }

    fn state_for(data: &SurvivalDataset, u: Vec<f64>) -> ChainState {
        ChainState::with_values(
            &data.x_std,
            0.0,
            dvector![0.0],
            0.0,
            1.0,
            1.0,
            dvector![1.0],
            u,
        )
    }

    #[test]
    fn bounds_single_observation_hand_case() {
        // u = e, y = 1, θ = 1, β₀ = 0, other terms 0, X_ij = 1 ⟹ β_j > −1
        let data = toy_dataset(vec![1.0]);
        let state = state_for(&data, vec![std::f64::consts::E]);
        let (lo, hi) = beta_truncation_bounds(0, 0, &state, &data);
        assert!((lo + 1.0).abs() < 1e-12, "lo = {lo}");
        assert_eq!(hi, f64::INFINITY);
    }

    #[test]
    fn bounds_sign_flip_case() {
        let data = toy_dataset(vec![-1.0]);
        let state = state_for(&data, vec![std::f64::consts::E]);
        let (lo, hi) = beta_truncation_bounds(0, 0, &state, &data);
        assert_eq!(lo, f64::NEG_INFINITY);
        assert!((hi - 1.0).abs() < 1e-12, "hi = {hi}");
    }

    #[test]
    fn bounds_zero_column_unconstrained() {
        let data = toy_dataset(vec![0.0, 0.0, 0.0]);
        let state = state_for(&data, vec![1.0, 1.0, 1.0]);
        let (lo, hi) = intersect_beta_bounds(0, &state, &data).unwrap();
        assert_eq!((lo, hi), (f64::NEG_INFINITY, f64::INFINITY));
    }

    #[test]
    fn bounds_intersection_takes_tightest() {
        let data = toy_dataset(vec![1.0, 2.0]);
        // u_i chosen so the second observation binds harder
        let state = state_for(&data, vec![(4.0f64).exp(), (1.0f64).exp()]);
        // bound_i = (ln y − 0 − ln u_i/θ)/x_ij = −ln(u_i)/x_ij
        let (lo, _) = intersect_beta_bounds(0, &state, &data).unwrap();
        assert!((lo - (-0.5)).abs() < 1e-12, "lo = {lo}");
    }

    #[test]
    fn retained_count_matches_floor_formula() {
        let config = SamplerConfig::new(20_000, 6_000, 3, 1);
        assert_eq!(config.retained(), 4666);
        let kept = (1..=config.iterations).filter(|&it| config.keep(it)).count();
        assert_eq!(kept, config.retained());
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::new(100, 200, 1, 0).validate().is_err());
        assert!(SamplerConfig::new(100, 50, 0, 0).validate().is_err());
        assert!(SamplerConfig::new(100, 50, 2, 0).validate().is_ok());
    }

    #[test]
    fn mh_block_adapts_only_on_full_windows() {
        let mut block = MhBlock::new("x", 1.0);
        for _ in 0..99 {
            block.record(true, true);
        }
        block.adapt((0.3, 0.5));
        assert_eq!(block.scale, 1.0);
        block.record(true, true);
        block.adapt((0.3, 0.5));
        assert!((block.scale - 1.1).abs() < 1e-12);
    }
}
