//! Horseshoe-prior variant: β_j ~ N(0, λ_j²τ²) with half-Cauchy λ_j and τ
//! sampled through their inverse-gamma auxiliary representation. The
//! likelihood side (β₀, log θ, u, truncated-normal β sweep) is identical
//! to the R2D2 chain; only the variance blocks differ.

use super::{chain_rng, BlockRate, ChainState, PosteriorDraws, SamplerConfig, WeibullCore, VAR_FLOOR};
use crate::error::Result;
use crate::model::{weibull_mle_theta, SurvivalDataset};
use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

/// Inverse-gamma draw with shape `a` and rate `b` (density ∝ x^{−a−1}e^{−b/x}).
fn inv_gamma<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let g: f64 = Gamma::new(a, 1.0 / b).expect("positive parameters").sample(rng);
    1.0 / g
}

/// Run the Horseshoe chain; all randomness derives from `config.seed`.
/// The `hyper`/`gbp` fields of the config are ignored.
pub fn run_horseshoe_chain(data: &SurvivalDataset, config: &SamplerConfig) -> Result<PosteriorDraws> {
    config.validate()?;
    let core = WeibullCore::new(&data.times, &data.events, &data.x_std);
    let p = core.p();
    let mut rng = chain_rng(config, 0x48_53);

    let mut state = ChainState::with_values(
        &core.x,
        core.init_beta0(),
        DVector::zeros(p),
        weibull_mle_theta(data)?.ln(),
        1.0,
        1.0,
        DVector::from_element(p.max(1), 1.0 / p.max(1) as f64),
        vec![0.0; core.n()],
    );
    {
        let theta = state.theta();
        let eta = state.eta.clone();
        core.draw_u(theta, &eta, &mut state.u, 0, &mut rng)?;
    }
    let mut lambda2 = vec![1.0f64; p];
    let mut nu = vec![1.0f64; p];
    let mut tau2 = 1.0f64;
    let mut xi_aux = 1.0f64;

    let retained = config.retained();
    let n_params = 1 + p + 2; // beta0, beta, log_theta, tau2
    let mut draws: Vec<Vec<f64>> = (0..n_params).map(|_| Vec::with_capacity(retained)).collect();

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

        let prior_vars: Vec<f64> = lambda2.iter().map(|l2| l2 * tau2).collect();
        core.beta_sweep(
            &mut state.beta,
            &mut state.eta,
            theta,
            &ln_u,
            &prior_vars,
            it,
            &mut rng,
        )?;

        // λ_j² | ν_j, β_j, τ² ~ IG(1, 1/ν_j + β_j²/(2τ²)); ν_j ~ IG(1, 1 + 1/λ_j²)
        for j in 0..p {
            let b = state.beta[j];
            lambda2[j] = inv_gamma(1.0, 1.0 / nu[j] + b * b / (2.0 * tau2), &mut rng).max(VAR_FLOOR);
            nu[j] = inv_gamma(1.0, 1.0 + 1.0 / lambda2[j], &mut rng);
        }
        // τ² | ξ, β, λ ~ IG((p+1)/2, 1/ξ + Σ β_j²/(2λ_j²)); ξ ~ IG(1, 1 + 1/τ²)
        let ss: f64 = state
            .beta
            .iter()
            .zip(&lambda2)
            .map(|(b, l2)| b * b / (2.0 * l2))
            .sum();
        tau2 = inv_gamma((p as f64 + 1.0) / 2.0, 1.0 / xi_aux + ss, &mut rng).max(VAR_FLOOR);
        xi_aux = inv_gamma(1.0, 1.0 + 1.0 / tau2, &mut rng);

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
            draws[2 + p].push(tau2);
        }
    }

    let mut names = vec!["beta0".to_string()];
    names.extend((0..p).map(|j| format!("beta[{j}]")));
    names.push("log_theta".into());
    names.push("tau2".into());
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
