//! Survival data representation, covariate standardization, the censored
//! Weibull log-likelihood and the shape MLE.
//!
//! Event coding: `events[i] == true` means the event was observed
//! (uncensored); `false` means the recorded time is a right-censoring
//! time. The likelihood uses the event indicator as the exponent on the
//! density term, so a censored record contributes survival mass only.

use crate::error::{Error, Result};
use crate::numeric::opt::brent_min;
use nalgebra::DMatrix;
use std::path::Path;

/// Right-censored survival data with covariates standardized over the
/// uncensored rows.
#[derive(Debug, Clone)]
pub struct SurvivalDataset {
    pub times: Vec<f64>,
    pub events: Vec<bool>,
    pub x_raw: DMatrix<f64>,
    pub x_std: DMatrix<f64>,
    pub col_means: Vec<f64>,
    pub col_sds: Vec<f64>,
}

/// Weibull regression parameters on the standardized-covariate scale.
#[derive(Debug, Clone)]
pub struct WeibullParams {
    /// Shape θ > 0.
    pub theta: f64,
    /// Intercept β₀.
    pub beta0: f64,
    /// Coefficients on the standardized covariates.
    pub beta: Vec<f64>,
}

impl SurvivalDataset {
    /// Build a dataset, validating times/events and standardizing the
    /// covariates over the uncensored rows.
    pub fn new(times: Vec<f64>, events: Vec<bool>, x_raw: DMatrix<f64>) -> Result<Self> {
        let n = times.len();
        if events.len() != n {
            return Err(Error::LengthMismatch(n, events.len()));
        }
        if x_raw.nrows() != n {
            return Err(Error::LengthMismatch(n, x_raw.nrows()));
        }
        for (i, &t) in times.iter().enumerate() {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidData(format!(
                    "time at row {} must be strictly positive and finite, got {}",
                    i + 1,
                    t
                )));
            }
        }
        let (x_std, col_means, col_sds) = standardize(&x_raw, &events)?;
        Ok(Self {
            times,
            events,
            x_raw,
            x_std,
            col_means,
            col_sds,
        })
    }

    pub fn n(&self) -> usize {
        self.times.len()
    }

    pub fn p(&self) -> usize {
        self.x_raw.ncols()
    }

    /// Number of uncensored observations.
    pub fn n_events(&self) -> usize {
        self.events.iter().filter(|&&e| e).count()
    }

    /// Map standardized-scale coefficients back to the raw covariate scale.
    pub fn back_transform_beta(&self, beta_std: &[f64]) -> Vec<f64> {
        beta_std
            .iter()
            .zip(&self.col_sds)
            .map(|(b, sd)| b / sd)
            .collect()
    }

    /// Intercept on the raw scale matching [`Self::back_transform_beta`].
    pub fn back_transform_intercept(&self, beta0_std: f64, beta_std: &[f64]) -> f64 {
        let shift: f64 = beta_std
            .iter()
            .zip(self.col_means.iter().zip(&self.col_sds))
            .map(|(b, (m, sd))| b * m / sd)
            .sum();
        beta0_std - shift
    }

    /// Read a dataset from CSV: header row with required columns `time` and
    /// `status` (1 = event observed), every other column a covariate.
    /// Returns the dataset and the covariate names in column order.
    pub fn from_csv<P: AsRef<Path>>(path: P) -> Result<(Self, Vec<String>)> {
        let mut reader = csv::Reader::from_path(path.as_ref())?;
        let headers = reader.headers()?.clone();
        let find = |name: &str| headers.iter().position(|h| h == name);
        let time_idx = find("time")
            .ok_or_else(|| Error::InvalidData("missing required column `time`".into()))?;
        let status_idx = find("status")
            .ok_or_else(|| Error::InvalidData("missing required column `status`".into()))?;
        let cov_idx: Vec<usize> = (0..headers.len())
            .filter(|&i| i != time_idx && i != status_idx)
            .collect();
        let cov_names: Vec<String> = cov_idx.iter().map(|&i| headers[i].to_string()).collect();

        let mut times = Vec::new();
        let mut events = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for record in reader.records() {
            let record = record?;
            let line = record
                .position()
                .map(|p| p.line().to_string())
                .unwrap_or_else(|| "?".into());
            let parse = |idx: usize, what: &str| -> Result<f64> {
                record
                    .get(idx)
                    .ok_or_else(|| {
                        Error::InvalidData(format!("line {line}: missing field `{what}`"))
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| {
                        Error::InvalidData(format!("line {line}: `{what}` is not a number"))
                    })
            };
            times.push(parse(time_idx, "time")?);
            let status = parse(status_idx, "status")?;
            if status != 0.0 && status != 1.0 {
                return Err(Error::InvalidData(format!(
                    "line {line}: `status` must be 0 or 1, got {status}"
                )));
            }
            events.push(status == 1.0);
            let mut row = Vec::with_capacity(cov_idx.len());
            for (&ci, name) in cov_idx.iter().zip(&cov_names) {
                row.push(parse(ci, name)?);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::InvalidData("no data rows".into()));
        }
        let n = rows.len();
        let p = cov_idx.len();
        let x = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
        Ok((Self::new(times, events, x)?, cov_names))
    }
}

/// Standardize each column of `x_raw` by the mean and standard deviation of
/// its uncensored rows (sample sd, n−1 denominator).
pub fn standardize(
    x_raw: &DMatrix<f64>,
    events: &[bool],
) -> Result<(DMatrix<f64>, Vec<f64>, Vec<f64>)> {
    let n_unc = events.iter().filter(|&&e| e).count();
    if n_unc < 2 {
        return Err(Error::TooFewEvents(n_unc));
    }
    let p = x_raw.ncols();
    let mut means = vec![0.0; p];
    let mut sds = vec![0.0; p];
    for j in 0..p {
        let mut sum = 0.0;
        for (i, &e) in events.iter().enumerate() {
            if e {
                sum += x_raw[(i, j)];
            }
        }
        let m = sum / n_unc as f64;
        let mut ss = 0.0;
        for (i, &e) in events.iter().enumerate() {
            if e {
                let d = x_raw[(i, j)] - m;
                ss += d * d;
            }
        }
        let sd = (ss / (n_unc - 1) as f64).sqrt();
        if sd == 0.0 || !sd.is_finite() {
            return Err(Error::DegenerateColumn(j));
        }
        means[j] = m;
        sds[j] = sd;
    }
    let x_std = DMatrix::from_fn(x_raw.nrows(), p, |i, j| (x_raw[(i, j)] - means[j]) / sds[j]);
    Ok((x_std, means, sds))
}

/// Censored Weibull log-likelihood with log-scale linear predictor
/// η_i = β₀ + x_iᵀβ on the standardized covariates:
///
/// Σ_i [ δ_i (log θ + (θ−1) log y_i − θ η_i) − y_iᶿ e^{−θ η_i} ]
pub fn log_likelihood(data: &SurvivalDataset, params: &WeibullParams) -> Result<f64> {
    if params.beta.len() != data.p() {
        return Err(Error::LengthMismatch(params.beta.len(), data.p()));
    }
    if !(params.theta > 0.0) || !params.theta.is_finite() {
        return Err(Error::InvalidParams(format!(
            "theta must be positive and finite, got {}",
            params.theta
        )));
    }
    let theta = params.theta;
    let ln_theta = theta.ln();
    let mut total = 0.0;
    for i in 0..data.n() {
        let mut eta = params.beta0;
        for j in 0..data.p() {
            eta += data.x_std[(i, j)] * params.beta[j];
        }
        let ln_y = data.times[i].ln();
        // y^θ e^{-θη} in one exp to avoid intermediate overflow
        let hazard_mass = (theta * (ln_y - eta)).exp();
        if data.events[i] {
            total += ln_theta + (theta - 1.0) * ln_y - theta * eta;
        }
        total -= hazard_mass;
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFiniteResult("log_likelihood"))
    }
}

/// Intercept-only profile log-likelihood at shape θ.
///
/// The profile intercept solves ∂ℓ/∂β₀ = 0, which gives
/// e^{θβ₀} = Σ y_iᶿ / ñ in closed form.
fn profile_loglik(times: &[f64], events: &[bool], ln_times: &[f64], theta: f64) -> f64 {
    let n_unc = events.iter().filter(|&&e| e).count() as f64;
    let sum_y_theta: f64 = ln_times.iter().map(|&ly| (theta * ly).exp()).sum();
    if !sum_y_theta.is_finite() || sum_y_theta <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let beta0 = (sum_y_theta / n_unc).ln() / theta;
    let sum_dln: f64 = ln_times
        .iter()
        .zip(events)
        .filter(|(_, &e)| e)
        .map(|(&ly, _)| ly)
        .sum();
    let _ = times;
    n_unc * theta.ln() + (theta - 1.0) * sum_dln - theta * beta0 * n_unc - n_unc
}

/// Maximum-likelihood Weibull shape under the intercept-only model.
///
/// Searches log θ over [−5, 5] with a derivative-free line search; the
/// scale is profiled out in closed form at each θ, so the problem is 1-D.
pub fn weibull_mle_theta(data: &SurvivalDataset) -> Result<f64> {
    weibull_mle_theta_raw(&data.times, &data.events)
}

/// [`weibull_mle_theta`] on raw vectors, for callers without a full dataset.
pub fn weibull_mle_theta_raw(times: &[f64], events: &[bool]) -> Result<f64> {
    let n_unc = events.iter().filter(|&&e| e).count();
    if n_unc < 2 {
        return Err(Error::TooFewEvents(n_unc));
    }
    let ln_times: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let neg_profile = |log_theta: f64| -profile_loglik(times, events, &ln_times, log_theta.exp());
    let (log_theta_hat, _) = brent_min(neg_profile, -5.0, 5.0, 1e-10, 500)
        .map_err(|_| Error::NoConvergence("weibull shape MLE".into()))?;
    Ok(log_theta_hat.exp())
}
