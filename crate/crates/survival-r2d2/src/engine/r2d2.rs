//! The R2D2 chain: shrinkage through a global variance W with GBP prior
//! (via the compound-gamma representation) and Dirichlet local weights φ
//! updated through their GIG auxiliaries.

use super::{chain_rng, BlockRate, ChainState, PosteriorDraws, SamplerConfig, WeibullCore, VAR_FLOOR};
use crate::dists::{sample_gig, GigSpec};
use crate::error::{Error, Result};
use crate::model::{weibull_mle_theta, SurvivalDataset};
use crate::numeric::seed::derive_rng;
use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

/// Step-able R2D2 sampler; `run_r2d2_chain` is the one-call entry point.
pub struct R2d2Sampler<'a> {
    core: WeibullCore,
    config: &'a SamplerConfig,
    /// Dirichlet concentration ξ = a*/p, which fixes the GIG order of the
    /// φ auxiliaries at a*/p − 1/2.
    xi: f64,
}

impl<'a> R2d2Sampler<'a> {
    pub fn new(data: &SurvivalDataset, config: &'a SamplerConfig) -> Result<Self> {
        config.validate()?;
        if data.p() == 0 {
            return Err(Error::InvalidData(
                "R2D2 chain needs at least one covariate".into(),
            ));
        }
        Ok(Self {
            core: WeibullCore::new(&data.times, &data.events, &data.x_std),
            config,
            xi: config.gbp.a_star / data.p() as f64,
        })
    }

    /// Feasible initial state: β = 0, intercept at the mean log event
    /// time, shape at its MLE, W at the GBP prior median, φ uniform,
    /// γ from its prior, u from its full conditional.
    pub fn init_state<R: Rng + ?Sized>(
        &self,
        data: &SurvivalDataset,
        rng: &mut R,
    ) -> Result<ChainState> {
        let p = self.core.p();
        let beta0 = self.core.init_beta0();
        let log_theta = weibull_mle_theta(data)?.ln();
        let w = self.config.gbp.median();
        let gamma = Gamma::new(self.config.gbp.b_star, 1.0 / self.config.gbp.d_star)
            .expect("validated gbp")
            .sample(rng);
        let phi = DVector::from_element(p, 1.0 / p as f64);
        let mut state = ChainState::with_values(
            &self.core.x,
            beta0,
            DVector::zeros(p),
            log_theta,
            w,
            gamma,
            phi,
            vec![0.0; self.core.n()],
        );
        let theta = state.theta();
        let (eta, u) = (&state.eta.clone(), &mut state.u);
        self.core.draw_u(theta, eta, u, 0, rng)?;
        Ok(state)
    }

    /// One full iteration: β₀ (MH), log θ (MH), u, β sweep, then the
    /// variance blocks W → γ → φ.
    pub fn step<R: Rng + ?Sized>(
        &self,
        state: &mut ChainState,
        iteration: usize,
        in_burn_in: bool,
        rng: &mut R,
    ) -> Result<()> {
        let config = self.config;
        let gbp = &config.gbp;
        let p = self.core.p();

        self.core.mh_beta0(
            &mut state.beta0,
            &mut state.eta,
            state.log_theta.exp(),
            config.mu_b0,
            config.sig2_b0,
            &mut state.mh_beta0,
            in_burn_in,
            rng,
        );
        self.core.mh_log_theta(
            &mut state.log_theta,
            &state.eta,
            config.t1,
            config.t2,
            &mut state.mh_log_theta,
            in_burn_in,
            rng,
        );
        let theta = state.theta();

        let eta_snapshot = state.eta.clone();
        self.core
            .draw_u(theta, &eta_snapshot, &mut state.u, iteration, rng)?;
        let ln_u: Vec<f64> = state.u.iter().map(|u| u.ln()).collect();

        let prior_vars: Vec<f64> = state.phi.iter().map(|phi| phi * state.w).collect();
        self.core.beta_sweep(
            &mut state.beta,
            &mut state.eta,
            theta,
            &ln_u,
            &prior_vars,
            iteration,
            rng,
        )?;

        // W | β, φ, γ ~ GIG(Σ β_j²/φ_j, 2γ, a* − p/2)
        let chi: f64 = state
            .beta
            .iter()
            .zip(state.phi.iter())
            .map(|(b, phi)| b * b / phi)
            .sum::<f64>()
            .max(VAR_FLOOR);
        let lambda_w = gbp.a_star - p as f64 / 2.0;
        let spec = GigSpec::new(chi, 2.0 * state.gamma, lambda_w).map_err(|e| {
            Error::ChainDiverged {
                iteration,
                detail: format!("W update: {e}"),
            }
        })?;
        state.w = sample_gig(&spec, rng);

        // γ | W ~ Gamma(a* + b*, rate d* + W)
        state.gamma = Gamma::new(gbp.a_star + gbp.b_star, 1.0 / (gbp.d_star + state.w))
            .expect("positive parameters")
            .sample(rng);

        // T_j | β_j, γ ~ GIG(β_j², 2γ, a*/p − 1/2); φ_j = T_j / Σ T_j
        let lambda_t = self.xi - 0.5;
        let mut t_sum = 0.0;
        let mut t = vec![0.0; p];
        for j in 0..p {
            let chi_j = (state.beta[j] * state.beta[j]).max(VAR_FLOOR);
            let spec = GigSpec::new(chi_j, 2.0 * state.gamma, lambda_t).map_err(|e| {
                Error::ChainDiverged {
                    iteration,
                    detail: format!("phi auxiliary {j}: {e}"),
                }
            })?;
            t[j] = sample_gig(&spec, rng);
            t_sum += t[j];
        }
        if !(t_sum > 0.0) || !t_sum.is_finite() {
            return Err(Error::ChainDiverged {
                iteration,
                detail: format!("phi auxiliaries degenerate (sum = {t_sum})"),
            });
        }
        for j in 0..p {
            state.phi[j] = (t[j] / t_sum).max(VAR_FLOOR);
        }

        if !(state.w.is_finite()
            && state.gamma.is_finite()
            && state.beta0.is_finite()
            && state.log_theta.is_finite())
        {
            return Err(Error::ChainDiverged {
                iteration,
                detail: format!(
                    "non-finite state: beta0={} log_theta={} W={} gamma={}",
                    state.beta0, state.log_theta, state.w, state.gamma
                ),
            });
        }

        if in_burn_in {
            state.mh_beta0.adapt(config.target_accept);
            state.mh_log_theta.adapt(config.target_accept);
        }
        Ok(())
    }

    pub(crate) fn core(&self) -> &WeibullCore {
        &self.core
    }
}

/// Run the R2D2 chain; all randomness derives from `config.seed`.
pub fn run_r2d2_chain(data: &SurvivalDataset, config: &SamplerConfig) -> Result<PosteriorDraws> {
    let sampler = R2d2Sampler::new(data, config)?;
    let mut rng = chain_rng(config, 0x52_32_44_32);
    let mut state = sampler.init_state(data, &mut rng)?;
    let p = data.p();

    let retained = config.retained();
    let n_params = 1 + p + 3; // beta0, beta, log_theta, W, gamma
    let mut draws: Vec<Vec<f64>> = (0..n_params).map(|_| Vec::with_capacity(retained)).collect();

    for it in 1..=config.iterations {
        sampler.step(&mut state, it, it <= config.burn_in, &mut rng)?;
        if config.keep(it) {
            draws[0].push(state.beta0);
            for j in 0..p {
                draws[1 + j].push(state.beta[j]);
            }
            draws[1 + p].push(state.log_theta);
            draws[2 + p].push(state.w);
            draws[3 + p].push(state.gamma);
        }
    }

    let mut names = vec!["beta0".to_string()];
    names.extend((0..p).map(|j| format!("beta[{j}]")));
    names.push("log_theta".into());
    names.push("W".into());
    names.push("gamma".into());
    let accept = vec![
        BlockRate {
            block: "beta0".into(),
            rate: state.mh_beta0.rate(),
        },
        BlockRate {
            block: "log_theta".into(),
            rate: state.mh_log_theta.rate(),
        },
    ];
    Ok(PosteriorDraws::from_columns(
        names,
        draws,
        accept,
        config,
        1,
        p,
        vec![],
    ))
}

/// Prior draw of the shrinkage block (W, γ, φ, β) given the fitted GBP,
/// used by the joint-distribution checks.
pub fn draw_shrinkage_prior<R: Rng + ?Sized>(
    p: usize,
    config: &SamplerConfig,
    rng: &mut R,
) -> (f64, f64, DVector<f64>, DVector<f64>) {
    let gbp = &config.gbp;
    let gamma = Gamma::new(gbp.b_star, 1.0 / gbp.d_star)
        .expect("positive")
        .sample(rng);
    let w: f64 = Gamma::new(gbp.a_star, 1.0 / gamma)
        .expect("positive")
        .sample(rng);
    let xi = gbp.a_star / p as f64;
    let mut g = vec![0.0; p];
    let mut sum = 0.0;
    for gj in g.iter_mut() {
        *gj = Gamma::new(xi, 1.0).expect("positive").sample(rng);
        sum += *gj;
    }
    let phi = DVector::from_fn(p, |j, _| (g[j] / sum).max(VAR_FLOOR));
    let beta = DVector::from_fn(p, |j, _| {
        let sd = (phi[j] * w).sqrt();
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        sd * z
    });
    (w, gamma, phi, beta)
}

/// Deterministic RNG for callers that need auxiliary streams tied to a
/// chain seed (replicate harnesses, tests).
pub fn aux_rng(config: &SamplerConfig, label: u64) -> rand_chacha::ChaCha12Rng {
    derive_rng(config.seed, &[0xA0_B1, label])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prior::{fit_gbp_approx, R2d2Hyper};

    fn small_dataset(seed: u64, n: usize, p: usize) -> SurvivalDataset {
        use nalgebra::DMatrix;
        let mut rng = derive_rng(seed, &[1]);
        let x = DMatrix::from_fn(n, p, |_, _| {
            let z: f64 = rng.sample(rand_distr::StandardNormal);
            z
        });
        let times: Vec<f64> = (0..n)
            .map(|_| {
                let u: f64 = rng.random();
                (-u.ln()).powf(1.0 / 1.5)
            })
            .collect();
        let events: Vec<bool> = (0..n).map(|i| i % 3 != 0).collect();
        SurvivalDataset::new(times, events, x).unwrap()
    }

    fn desk_config(seed: u64, iterations: usize, burn_in: usize) -> SamplerConfig {
        let mut config = SamplerConfig::new(iterations, burn_in, 2, seed);
        config.hyper = R2d2Hyper { a: 0.5, b: 0.5 };
        config.gbp = fit_gbp_approx(1.5, &config.hyper).unwrap().params;
        config
    }

    #[test]
    fn chain_is_bit_reproducible() {
        let data = small_dataset(42, 40, 4);
        let config = desk_config(7, 600, 200);
        let a = run_r2d2_chain(&data, &config).unwrap();
        let b = run_r2d2_chain(&data, &config).unwrap();
        assert_eq!(a.draws, b.draws);
        // and a different seed actually changes the stream
        let config2 = desk_config(8, 600, 200);
        let c = run_r2d2_chain(&data, &config2).unwrap();
        assert_ne!(a.draws, c.draws);
    }

    #[test]
    fn state_invariants_hold_along_the_chain() {
        let data = small_dataset(43, 30, 3);
        let config = desk_config(9, 300, 100);
        let sampler = R2d2Sampler::new(&data, &config).unwrap();
        let mut rng = chain_rng(&config, 0x52_32_44_32);
        let mut state = sampler.init_state(&data, &mut rng).unwrap();
        for it in 1..=300 {
            sampler.step(&mut state, it, it <= 100, &mut rng).unwrap();
            let phi_sum: f64 = state.phi.iter().sum();
            assert!((phi_sum - 1.0).abs() < 1e-12, "phi sum = {phi_sum}");
            assert!(state.phi.iter().all(|&p| p > 0.0));
            assert!(state.w > 0.0 && state.gamma > 0.0);
            let theta = state.theta();
            for i in 0..data.n() {
                let floor = (theta * (data.times[i].ln() - state.eta[i])).exp();
                assert!(
                    state.u[i] > floor,
                    "u feasibility broken at obs {i}: {} <= {floor}",
                    state.u[i]
                );
            }
        }
    }

    #[test]
    fn eta_cache_stays_consistent() {
        let data = small_dataset(44, 25, 3);
        let config = desk_config(10, 200, 80);
        let sampler = R2d2Sampler::new(&data, &config).unwrap();
        let mut rng = chain_rng(&config, 0x52_32_44_32);
        let mut state = sampler.init_state(&data, &mut rng).unwrap();
        for it in 1..=200 {
            sampler.step(&mut state, it, it <= 80, &mut rng).unwrap();
        }
        let direct = {
            let mut eta = &data.x_std * &state.beta;
            eta.add_scalar_mut(state.beta0);
            eta
        };
        for i in 0..data.n() {
            assert!((state.eta[i] - direct[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn draws_have_expected_shape() {
        let data = small_dataset(45, 20, 2);
        let config = desk_config(11, 500, 100);
        let draws = run_r2d2_chain(&data, &config).unwrap();
        assert_eq!(draws.retained(), config.retained());
        assert_eq!(draws.names.len(), 1 + 2 + 3);
        assert_eq!(draws.n_coef, 2);
        assert!(draws.param("W").is_some());
        let r2 = super::super::bayes_r2_posterior(&draws).unwrap();
        assert_eq!(r2.len(), draws.retained());
        assert!(r2.iter().all(|&r| (0.0..1.0).contains(&r)));
    }

    #[test]
    fn r2_draws_are_monotone_in_w_at_fixed_theta() {
        // sorting by W sorts R² identically when θ is held fixed
        use crate::prior::r2_from_w;
        let mut ws: Vec<f64> = vec![0.3, 2.0, 0.01, 5.0, 1.0];
        ws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let r2: Vec<f64> = ws.iter().map(|&w| r2_from_w(w, 1.7)).collect();
        assert!(r2.windows(2).all(|p| p[0] < p[1]));
    }
}
