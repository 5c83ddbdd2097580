//! Bayesian mediator models: logistic regression (logit link) sampled by
//! per-coordinate adaptive random-walk MH, and linear regression with a
//! fully conjugate Gibbs sweep. Both place a hierarchical N(0, σ²I)
//! prior on the coefficient vector (intercept included) with
//! σ² ~ InvGamma(0.1, 0.1); the linear model additionally samples its
//! noise variance from the same inverse-gamma family.

use super::{chain_rng, BlockRate, MhBlock, PosteriorDraws, SamplerConfig};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

const IG_SHAPE: f64 = 0.1;
const IG_RATE: f64 = 0.1;

fn inv_gamma<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let g: f64 = Gamma::new(a, 1.0 / b).expect("positive parameters").sample(rng);
    1.0 / g
}

fn softplus(t: f64) -> f64 {
    if t > 33.0 {
        t
    } else {
        t.exp().ln_1p()
    }
}

/// Prepend an intercept column.
fn with_intercept(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut xd = DMatrix::zeros(n, x.ncols() + 1);
    for i in 0..n {
        xd[(i, 0)] = 1.0;
        for j in 0..x.ncols() {
            xd[(i, j + 1)] = x[(i, j)];
        }
    }
    xd
}

fn glm_names(p: usize, extra: &[&str]) -> Vec<String> {
    let mut names = vec!["intercept".to_string()];
    names.extend((0..p).map(|k| format!("coef[{k}]")));
    names.extend(extra.iter().map(|s| s.to_string()));
    names
}

/// Logistic mediator model: Pr(M = 1) = expit(ξ + x*ᵀα).
///
/// A constant response, or an MH coordinate whose post-burn-in acceptance
/// collapses below 5%, produces a `SeparationWarning` entry in the result
/// warnings — reported, never fatal.
pub fn run_logistic_chain(
    response: &[f64],
    x_star: &DMatrix<f64>,
    config: &SamplerConfig,
) -> Result<PosteriorDraws> {
    config.validate()?;
    let n = response.len();
    if x_star.nrows() != n {
        return Err(Error::LengthMismatch(n, x_star.nrows()));
    }
    if n == 0 {
        return Err(Error::InvalidData("logistic model needs observations".into()));
    }
    for (i, &m) in response.iter().enumerate() {
        if m != 0.0 && m != 1.0 {
            return Err(Error::InvalidData(format!(
                "binary mediator value at row {} must be 0 or 1, got {m}",
                i + 1
            )));
        }
    }
    let mut warnings = Vec::new();
    if response.iter().all(|&m| m == response[0]) {
        warnings.push(format!(
            "SeparationWarning: response is constant ({})",
            response[0]
        ));
    }

    let xd = with_intercept(x_star);
    let q = xd.ncols();
    let p = q - 1;
    let mut rng = chain_rng(config, 0x4C_4F_47);

    let mut coefs = DVector::<f64>::zeros(q);
    let mut lp = DVector::<f64>::zeros(n);
    let mut sigma2 = 1.0f64;
    let mut blocks: Vec<MhBlock> = (0..q).map(|_| MhBlock::new("coef", 0.5)).collect();

    let retained = config.retained();
    let mut draws: Vec<Vec<f64>> = (0..q + 1).map(|_| Vec::with_capacity(retained)).collect();

    for it in 1..=config.iterations {
        let in_burn_in = it <= config.burn_in;
        for k in 0..q {
            let z: f64 = rng.sample(StandardNormal);
            let step = blocks[k].scale * z;
            let proposal = coefs[k] + step;
            // Δ loglik with lp maintained incrementally
            let mut delta = 0.0;
            for i in 0..n {
                let d = xd[(i, k)] * step;
                if d != 0.0 {
                    delta += response[i] * d - (softplus(lp[i] + d) - softplus(lp[i]));
                }
            }
            delta += -(proposal * proposal - coefs[k] * coefs[k]) / (2.0 * sigma2);
            let accepted = delta.is_finite() && rng.random::<f64>().ln() < delta;
            if accepted {
                for i in 0..n {
                    lp[i] += xd[(i, k)] * step;
                }
                coefs[k] = proposal;
            }
            blocks[k].record(accepted, in_burn_in);
            if in_burn_in {
                blocks[k].adapt(config.target_accept);
            }
        }
        let ss: f64 = coefs.iter().map(|c| c * c).sum();
        sigma2 = inv_gamma(IG_SHAPE + q as f64 / 2.0, IG_RATE + ss / 2.0, &mut rng);

        if config.keep(it) {
            for k in 0..q {
                draws[k].push(coefs[k]);
            }
            draws[q].push(sigma2);
        }
    }

    let accept: Vec<BlockRate> = blocks
        .iter()
        .enumerate()
        .map(|(k, b)| BlockRate {
            block: if k == 0 {
                "intercept".into()
            } else {
                format!("coef[{}]", k - 1)
            },
            rate: b.rate(),
        })
        .collect();
    for rate in &accept {
        if rate.rate.is_finite() && rate.rate < 0.05 {
            warnings.push(format!(
                "SeparationWarning: acceptance collapsed for {} (rate {:.3})",
                rate.block, rate.rate
            ));
        }
    }
    Ok(PosteriorDraws::from_columns(
        glm_names(p, &["sigma2"]),
        draws,
        accept,
        config,
        1,
        p,
        warnings,
    ))
}

/// Linear mediator model: M = ξ + x*ᵀα + ε, ε ~ N(0, σ²), with conjugate
/// updates for the coefficients and both variances.
pub fn run_linear_chain(
    response: &[f64],
    x_star: &DMatrix<f64>,
    config: &SamplerConfig,
) -> Result<PosteriorDraws> {
    config.validate()?;
    let n = response.len();
    if x_star.nrows() != n {
        return Err(Error::LengthMismatch(n, x_star.nrows()));
    }
    if n == 0 {
        return Err(Error::InvalidData("linear model needs observations".into()));
    }
    let xd = with_intercept(x_star);
    let q = xd.ncols();
    let p = q - 1;
    let y = DVector::from_column_slice(response);
    let xtx = xd.transpose() * &xd;
    let xty = xd.transpose() * &y;
    let yty = y.dot(&y);
    let mut rng = chain_rng(config, 0x4C_49_4E);

    let mut sigma2 = {
        let mean = response.iter().sum::<f64>() / n as f64;
        let v = response.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n as f64;
        v.max(1e-6)
    };
    let mut tau2 = 1.0f64;
    let mut beta = DVector::<f64>::zeros(q);

    let retained = config.retained();
    let mut draws: Vec<Vec<f64>> = (0..q + 2).map(|_| Vec::with_capacity(retained)).collect();

    for it in 1..=config.iterations {
        // β | σ², τ² ~ N(A⁻¹ Xᵀy/σ², A⁻¹), A = XᵀX/σ² + I/τ²
        let mut a = &xtx / sigma2;
        for k in 0..q {
            a[(k, k)] += 1.0 / tau2;
        }
        let chol = nalgebra::Cholesky::new(a).ok_or_else(|| Error::NonFiniteResult("linear Gibbs precision"))?;
        let mean = chol.solve(&(&xty / sigma2));
        let z = DVector::from_fn(q, |_, _| {
            let z: f64 = rng.sample(StandardNormal);
            z
        });
        let noise = chol
            .l()
            .transpose()
            .solve_upper_triangular(&z)
            .ok_or_else(|| Error::NonFiniteResult("linear Gibbs sampling solve"))?;
        beta = mean + noise;

        let rss = (yty - 2.0 * beta.dot(&xty) + (&xtx * &beta).dot(&beta)).max(0.0);
        sigma2 = inv_gamma(IG_SHAPE + n as f64 / 2.0, IG_RATE + rss / 2.0, &mut rng);
        let ss: f64 = beta.iter().map(|b| b * b).sum();
        tau2 = inv_gamma(IG_SHAPE + q as f64 / 2.0, IG_RATE + ss / 2.0, &mut rng);

        if config.keep(it) {
            for k in 0..q {
                draws[k].push(beta[k]);
            }
            draws[q].push(sigma2);
            draws[q + 1].push(tau2);
        }
    }

    Ok(PosteriorDraws::from_columns(
        glm_names(p, &["sigma2", "tau2"]),
        draws,
        vec![],
        config,
        1,
        p,
        vec![],
    ))
}
