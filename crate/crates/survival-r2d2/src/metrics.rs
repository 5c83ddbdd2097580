//! Estimation-error, selection-accuracy, coverage and concordance metrics
//! for the benchmark and the application pipeline.

use crate::engine::PosteriorDraws;
use crate::error::{Error, Result};
use serde::Serialize;

/// Per-covariate selection evidence.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionScore {
    /// 1 − 2·min(P̂(β>0), P̂(β<0)): the largest two-sided credible level
    /// at which the interval still excludes zero.
    pub scores: Vec<f64>,
    /// Whether the 95% equal-tailed interval excludes zero.
    pub flags: Vec<bool>,
}

/// Sum of squared errors split by the true-coefficient pattern:
/// (overall, over true non-zeros, over true zeros); the split is exact.
pub fn sse_decomposition(beta_hat: &[f64], beta_true: &[f64]) -> Result<(f64, f64, f64)> {
    if beta_hat.len() != beta_true.len() {
        return Err(Error::LengthMismatch(beta_hat.len(), beta_true.len()));
    }
    let mut nonzero = 0.0;
    let mut zero = 0.0;
    for (est, truth) in beta_hat.iter().zip(beta_true) {
        let d = (est - truth) * (est - truth);
        if *truth != 0.0 {
            nonzero += d;
        } else {
            zero += d;
        }
    }
    Ok((nonzero + zero, nonzero, zero))
}

/// Rank-based (Mann–Whitney) AUC of `scores` against the nonzero-truth
/// labels; ties count one half.
pub fn selection_auc(scores: &[f64], truth_nonzero: &[bool]) -> Result<f64> {
    if scores.len() != truth_nonzero.len() {
        return Err(Error::LengthMismatch(scores.len(), truth_nonzero.len()));
    }
    let pos: Vec<f64> = scores
        .iter()
        .zip(truth_nonzero)
        .filter(|(_, &t)| t)
        .map(|(&s, _)| s)
        .collect();
    let neg: Vec<f64> = scores
        .iter()
        .zip(truth_nonzero)
        .filter(|(_, &t)| !t)
        .map(|(&s, _)| s)
        .collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::OneClassOnly);
    }
    let mut wins = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (pos.len() * neg.len()) as f64)
}

/// Fraction of coefficients whose 95% credible interval contains the
/// truth. `cis` are (lo, hi) pairs.
pub fn coverage(cis: &[(f64, f64)], beta_true: &[f64]) -> Result<f64> {
    if cis.len() != beta_true.len() {
        return Err(Error::LengthMismatch(cis.len(), beta_true.len()));
    }
    if cis.is_empty() {
        return Ok(f64::NAN);
    }
    let hits = cis
        .iter()
        .zip(beta_true)
        .filter(|((lo, hi), t)| *lo <= **t && **t <= *hi)
        .count();
    Ok(hits as f64 / cis.len() as f64)
}

/// Coverage computed from a chain's coefficient intervals.
pub fn coverage_from_draws(draws: &PosteriorDraws, beta_true: &[f64]) -> Result<f64> {
    let cis: Vec<(f64, f64)> = (0..draws.n_coef)
        .map(|j| {
            let s = draws.coef_summary(j);
            (s.lo, s.hi)
        })
        .collect();
    coverage(&cis, beta_true)
}

/// Harrell's concordance index. A pair is comparable when the smaller
/// observed time belongs to an event; it is concordant when that member
/// carries the higher risk. Risk ties count one half.
pub fn c_index(risk: &[f64], times: &[f64], events: &[bool]) -> Result<f64> {
    let n = risk.len();
    if times.len() != n {
        return Err(Error::LengthMismatch(n, times.len()));
    }
    if events.len() != n {
        return Err(Error::LengthMismatch(n, events.len()));
    }
    let mut comparable = 0.0;
    let mut concordant = 0.0;
    for i in 0..n {
        for k in (i + 1)..n {
            let (first, second) = if times[i] < times[k] { (i, k) } else { (k, i) };
            if times[i] == times[k] || !events[first] {
                continue;
            }
            comparable += 1.0;
            if risk[first] > risk[second] {
                concordant += 1.0;
            } else if risk[first] == risk[second] {
                concordant += 0.5;
            }
        }
    }
    if comparable == 0.0 {
        return Err(Error::NoComparablePairs);
    }
    Ok(concordant / comparable)
}

/// CI-exclusion significance flags and their continuous relaxation.
///
/// The flag applies the paper-style rule (95% equal-tailed interval
/// excludes zero); the score is the largest two-sided level at which the
/// interval would still exclude zero, clamped to [0, 1].
pub fn significance_and_scores(draws: &PosteriorDraws) -> SelectionScore {
    let mut scores = Vec::with_capacity(draws.n_coef);
    let mut flags = Vec::with_capacity(draws.n_coef);
    for j in 0..draws.n_coef {
        let col = draws.coef_draws(j);
        let pos = col.iter().filter(|&&b| b > 0.0).count() as f64 / col.len() as f64;
        let neg = col.iter().filter(|&&b| b < 0.0).count() as f64 / col.len() as f64;
        scores.push((1.0 - 2.0 * pos.min(neg)).clamp(0.0, 1.0));
        let s = draws.coef_summary(j);
        flags.push(s.lo > 0.0 || s.hi < 0.0);
    }
    SelectionScore { scores, flags }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::SamplerConfig;

    #[test]
    fn sse_hand_cases() {
        assert_eq!(
            sse_decomposition(&[1.0, 2.0], &[1.0, 2.0]).unwrap(),
            (0.0, 0.0, 0.0)
        );
        assert_eq!(
            sse_decomposition(&[1.0, 0.0], &[0.0, 0.0]).unwrap(),
            (1.0, 0.0, 1.0)
        );
        let (o, nz, z) = sse_decomposition(&[2.0, -1.0], &[2.5, 0.0]).unwrap();
        assert!((o - 1.25).abs() < 1e-15);
        assert!((nz - 0.25).abs() < 1e-15);
        assert!((z - 1.0).abs() < 1e-15);
        assert!(sse_decomposition(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn sse_additivity_random_inputs() {
        let hat = [0.3, -1.2, 4.0, 0.0, 2.2, -0.7];
        let truth = [0.0, -1.0, 4.5, 0.0, 0.0, -0.5];
        let (o, nz, z) = sse_decomposition(&hat, &truth).unwrap();
        assert!((o - (nz + z)).abs() == 0.0);
    }

    #[test]
    fn auc_hand_cases() {
        let truth = [true, false, true, false];
        assert_eq!(selection_auc(&[0.9, 0.4, 0.8, 0.1], &truth).unwrap(), 1.0);
        let truth2 = [false, true, true, false];
        assert_eq!(selection_auc(&[0.9, 0.4, 0.8, 0.1], &truth2).unwrap(), 0.5);
        // all tied scores: 0.5
        assert_eq!(
            selection_auc(&[0.2, 0.2, 0.2], &[true, false, true]).unwrap(),
            0.5
        );
        assert!(matches!(
            selection_auc(&[0.1, 0.2], &[true, true]),
            Err(Error::OneClassOnly)
        ));
    }

    #[test]
    fn auc_invariant_under_monotone_transform() {
        let scores = [0.9, 0.4, 0.8, 0.1, 0.55];
        let truth = [true, false, true, false, true];
        let a = selection_auc(&scores, &truth).unwrap();
        let transformed: Vec<f64> = scores.iter().map(|s| (s * 7.0).exp()).collect();
        let b = selection_auc(&transformed, &truth).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn auc_matches_brute_force_pair_count() {
        let scores = [0.3, 0.3, 0.9, 0.2, 0.7, 0.5];
        let truth = [false, true, true, false, false, true];
        let auc = selection_auc(&scores, &truth).unwrap();
        let mut total = 0.0;
        let mut wins = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                if truth[i] && !truth[j] {
                    total += 1.0;
                    if scores[i] > scores[j] {
                        wins += 1.0;
                    } else if scores[i] == scores[j] {
                        wins += 0.5;
                    }
                }
            }
        }
        assert_eq!(auc, wins / total);
    }

    #[test]
    fn coverage_hand_cases() {
        assert_eq!(coverage(&[(-1.0, 1.0); 4], &[0.0; 4]).unwrap(), 1.0);
        assert_eq!(coverage(&[(1.0, 2.0); 3], &[0.0; 3]).unwrap(), 0.0);
        let cis = [(-1.0, 1.0), (2.0, 3.0), (0.4, 0.6)];
        let truth = [0.0, 2.5, 0.9];
        assert!((coverage(&cis, &truth).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn c_index_hand_cases() {
        // risks exactly reverse times, all events: perfect concordance
        let times = [1.0, 2.0, 3.0, 4.0];
        let risks = [4.0, 3.0, 2.0, 1.0];
        assert_eq!(c_index(&risks, &times, &[true; 4]).unwrap(), 1.0);
        // risks equal to times: fully discordant
        assert_eq!(c_index(&times, &times, &[true; 4]).unwrap(), 0.0);
        // censoring removes pairs: times (1,2,3), events (1,0,1),
        // comparable pairs are (1,2) and (1,3) only, both concordant
        let c = c_index(&[3.0, 1.0, 2.0], &[1.0, 2.0, 3.0], &[true, false, true]).unwrap();
        assert_eq!(c, 1.0);
        assert!(matches!(
            c_index(&[1.0, 2.0], &[1.0, 2.0], &[false, true]),
            Err(Error::NoComparablePairs)
        ));
    }

    #[test]
    fn c_index_complement_under_risk_negation() {
        let times = [0.3, 1.2, 0.9, 2.0, 1.7, 0.5];
        let events = [true, false, true, true, false, true];
        let risks = [2.0, 0.4, 1.1, -0.3, 0.9, 1.4];
        let c = c_index(&risks, &times, &events).unwrap();
        let neg: Vec<f64> = risks.iter().map(|r| -r).collect();
        let cn = c_index(&neg, &times, &events).unwrap();
        assert!((c + cn - 1.0).abs() < 1e-15);
    }

    fn draws_from_columns(cols: Vec<Vec<f64>>) -> PosteriorDraws {
        let config = SamplerConfig::new(10, 5, 1, 0);
        let n = cols.len();
        let names = (0..n).map(|j| format!("beta[{j}]")).collect();
        PosteriorDraws::from_columns(names, cols, vec![], &config, 0, n, vec![])
    }

    #[test]
    fn significance_scores_hand_cases() {
        // all draws positive: score 1, flag set
        let all_pos: Vec<f64> = (1..=1000).map(|i| i as f64 / 1000.0).collect();
        // symmetric around 0: score ~0, no flag
        let sym: Vec<f64> = (0..1000).map(|i| (i as f64 - 499.5) / 250.0).collect();
        // 97% positive mass: score ≈ 0.94 and the 2.5% quantile is > 0
        let mut mostly: Vec<f64> = (0..970).map(|i| 0.01 + i as f64 / 970.0).collect();
        mostly.extend((0..30).map(|i| -0.01 - i as f64 / 30.0));
        let draws = draws_from_columns(vec![all_pos, sym, mostly]);
        let sel = significance_and_scores(&draws);
        assert_eq!(sel.scores[0], 1.0);
        assert!(sel.flags[0]);
        assert!(sel.scores[1] < 0.01);
        assert!(!sel.flags[1]);
        assert!(
            (sel.scores[2] - 0.94).abs() < 0.005,
            "score = {}",
            sel.scores[2]
        );
        assert!(sel.flags[2]);
    }

    #[test]
    fn significance_invariant_to_draw_order() {
        let col: Vec<f64> = (0..500)
            .map(|i| ((i * 37) % 500) as f64 / 100.0 - 1.0)
            .collect();
        let mut shuffled = col.clone();
        shuffled.reverse();
        let a = significance_and_scores(&draws_from_columns(vec![col]));
        let b = significance_and_scores(&draws_from_columns(vec![shuffled]));
        assert_eq!(a.flags, b.flags);
        assert_eq!(a.scores, b.scores);
    }
}
