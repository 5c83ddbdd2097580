//! Non-penalized Weibull chain: fixed N(0, σ²) coefficient priors, the
//! same auxiliary-u machinery for β, MH for β₀ and log θ. This is the
//! outcome model of the mediation pipeline, so the covariates carry no
//! standardization contract and n = 0 (prior-only) is allowed.

use super::{chain_rng, BlockRate, ChainState, PosteriorDraws, SamplerConfig, WeibullCore};
use crate::error::{Error, Result};
use crate::model::weibull_mle_theta_raw;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Weibull regression input without the shrinkage-chain standardization
/// contract; any covariate scaling (or none) is the caller's choice.
#[derive(Debug, Clone)]
pub struct WeibullRegressionData {
    pub times: Vec<f64>,
    pub events: Vec<bool>,
    pub x: DMatrix<f64>,
}

impl WeibullRegressionData {
    pub fn new(times: Vec<f64>, events: Vec<bool>, x: DMatrix<f64>) -> Result<Self> {
        if events.len() != times.len() {
            return Err(Error::LengthMismatch(times.len(), events.len()));
        }
        if x.nrows() != times.len() {
            return Err(Error::LengthMismatch(times.len(), x.nrows()));
        }
        for (i, &t) in times.iter().enumerate() {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidData(format!(
                    "time at row {} must be strictly positive and finite",
                    i + 1
                )));
            }
        }
        Ok(Self { times, events, x })
    }

    pub fn from_survival(data: &crate::model::SurvivalDataset) -> Self {
        Self {
            times: data.times.clone(),
            events: data.events.clone(),
            x: data.x_std.clone(),
        }
    }
}

/// Run the fixed-Gaussian Weibull chain. Coefficients (including the
/// intercept) carry N(mu_b0, sig2_b0) priors and log θ ~ N(t1, t2); with
/// n = 0 every iteration draws directly from those priors.
pub fn run_gaussian_weibull_chain(
    data: &WeibullRegressionData,
    config: &SamplerConfig,
) -> Result<PosteriorDraws> {
    config.validate()?;
    let p = data.x.ncols();
    let n = data.times.len();
    let mut rng = chain_rng(config, 0x47_41_55);

    let retained = config.retained();
    let n_params = 1 + p + 1; // beta0, beta, log_theta
    let mut draws: Vec<Vec<f64>> = (0..n_params).map(|_| Vec::with_capacity(retained)).collect();

    let mut names = vec!["beta0".to_string()];
    names.extend((0..p).map(|j| format!("beta[{j}]")));
    names.push("log_theta".into());

    if n == 0 {
        // prior-only mode: retained draws are iid prior samples
        for _ in 0..retained {
            let z: f64 = rng.sample(StandardNormal);
            draws[0].push(config.mu_b0 + config.sig2_b0.sqrt() * z);
            for j in 0..p {
                let z: f64 = rng.sample(StandardNormal);
                draws[1 + j].push(config.sig2_b0.sqrt() * z);
            }
            let z: f64 = rng.sample(StandardNormal);
            draws[1 + p].push(config.t1 + config.t2.sqrt() * z);
        }
        return Ok(PosteriorDraws::from_columns(
            names,
            draws,
            vec![],
            config,
            1,
            p,
            vec![],
        ));
    }

    let core = WeibullCore::new(&data.times, &data.events, &data.x);
    let log_theta0 = match weibull_mle_theta_raw(&data.times, &data.events) {
        Ok(theta) => theta.ln(),
        Err(_) => config.t1,
    };
    let beta0_init = if core.n_events > 0.0 {
        core.init_beta0()
    } else {
        config.mu_b0
    };
    let mut state = ChainState::with_values(
        &core.x,
        beta0_init,
        DVector::zeros(p),
        log_theta0,
        1.0,
        1.0,
        DVector::from_element(p.max(1), 1.0 / p.max(1) as f64),
        vec![0.0; n],
    );
    {
        let theta = state.theta();
        let eta = state.eta.clone();
        core.draw_u(theta, &eta, &mut state.u, 0, &mut rng)?;
    }
    let prior_vars = vec![config.sig2_b0; p];

    for it in 1..=config.iterations {
        let in_burn_in = it <= config.burn_in;
        core.mh_beta0(
            &mut state.beta0,
            &mut state.eta,
            state.log_theta.exp(),
            config.mu_b0,
            config.sig2_b0,
            &mut state.mh_beta0,
            in_burn_in,
            &mut rng,
        );
        core.mh_log_theta(
            &mut state.log_theta,
            &state.eta,
            config.t1,
            config.t2,
            &mut state.mh_log_theta,
            in_burn_in,
            &mut rng,
        );
        let theta = state.theta();
        let eta_snapshot = state.eta.clone();
        core.draw_u(theta, &eta_snapshot, &mut state.u, it, &mut rng)?;
        let ln_u: Vec<f64> = state.u.iter().map(|u| u.ln()).collect();
        core.beta_sweep(
            &mut state.beta,
            &mut state.eta,
            theta,
            &ln_u,
            &prior_vars,
            it,
            &mut rng,
        )?;

        if in_burn_in {
            state.mh_beta0.adapt(config.target_accept);
            state.mh_log_theta.adapt(config.target_accept);
        }
        if config.keep(it) {
            draws[0].push(state.beta0);
            for j in 0..p {
                draws[1 + j].push(state.beta[j]);
            }
            draws[1 + p].push(state.log_theta);
        }
    }

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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::seed::derive_rng;
    use crate::numeric::{mean, variance};

    #[test]
    fn prior_only_mode_matches_prior_moments() {
        let data = WeibullRegressionData::new(vec![], vec![], DMatrix::zeros(0, 2)).unwrap();
        let mut config = SamplerConfig::new(30_000, 1_000, 1, 17);
        config.sig2_b0 = 100.0;
        config.t2 = 9.0;
        let draws = run_gaussian_weibull_chain(&data, &config).unwrap();
        let b = draws.coef_draws(0);
        assert!(mean(b).abs() < 0.3, "mean = {}", mean(b));
        assert!((variance(b) - 100.0).abs() < 4.0, "var = {}", variance(b));
        let lt = draws.param("log_theta").unwrap();
        assert!((variance(lt) - 9.0).abs() < 0.5);
    }

    #[test]
    fn p_zero_theta_concentrates_near_mle() {
        let mut rng = derive_rng(31, &[4]);
        let true_theta = 1.8f64;
        let times: Vec<f64> = (0..600)
            .map(|_| {
                let u: f64 = rng.random();
                0.7 * (-u.ln()).powf(1.0 / true_theta)
            })
            .collect();
        let events = vec![true; 600];
        let mle = weibull_mle_theta_raw(&times, &events).unwrap();
        let data = WeibullRegressionData::new(times, events, DMatrix::zeros(600, 0)).unwrap();
        let config = SamplerConfig::new(4_000, 1_000, 1, 5);
        let draws = run_gaussian_weibull_chain(&data, &config).unwrap();
        let lt = draws.param("log_theta").unwrap();
        let posterior_median = crate::numeric::median_ci95(lt).0;
        assert!(
            (posterior_median - mle.ln()).abs() < 0.08,
            "median {posterior_median} vs mle {}",
            mle.ln()
        );
    }
}
