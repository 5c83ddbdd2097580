//! Derivative-free optimizers: golden-section/parabolic line search and a
//! Nelder–Mead simplex.

use crate::error::{Error, Result};

/// Brent-style minimization of a unimodal `f` on `[a, b]`.
///
/// Golden-section steps with parabolic interpolation when it is safe.
/// Returns (argmin, min).
pub fn brent_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_iter: usize) -> Result<(f64, f64)> {
    const GOLD: f64 = 0.381_966_011_250_105; // 2 - golden ratio
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut x = a + GOLD * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = tol * x.abs() + 1e-12;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            return Ok((x, fx));
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // parabolic fit through (v, w, x)
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_old = e;
            e = d;
            if p.abs() < (0.5 * q * e_old).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if (u - a) < tol2 || (b - u) < tol2 {
                    d = if m > x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < m { b - x } else { a - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "brent_min exceeded {max_iter} iterations"
    )))
}

/// Result of a Nelder–Mead run.
pub struct SimplexFit {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex minimization with an evaluation budget.
///
/// Standard coefficients (reflect 1, expand 2, contract 1/2, shrink 1/2).
/// `converged` is set when the simplex collapses in both value spread and
/// edge length before the budget runs out.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    initial_step: f64,
    budget: usize,
) -> SimplexFit {
    let n = x0.len();
    let mut evals = 0;
    let eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::MAX / 4.0
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += if p[i].abs() > 1e-8 {
            initial_step * p[i].abs()
        } else {
            initial_step
        };
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p, &mut evals)).collect();

    while evals < budget {
        // order ascending
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
        let ordered: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let ordered_vals: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = ordered;
        values = ordered_vals;

        let spread = values[n] - values[0];
        let size: f64 = (0..n)
            .map(|i| {
                simplex[1..]
                    .iter()
                    .map(|p| (p[i] - simplex[0][i]).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread < 1e-12 * (1.0 + values[0].abs()) && size < 1e-10 {
            return SimplexFit {
                x: simplex[0].clone(),
                value: values[0],
                evaluations: evals,
                converged: true,
            };
        }

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|p| p[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|i| 2.0 * centroid[i] - worst[i]).collect();
        let fr = eval(&reflect, &mut evals);

        if fr < values[0] {
            let expand: Vec<f64> = (0..n).map(|i| 3.0 * centroid[i] - 2.0 * worst[i]).collect();
            let fe = eval(&expand, &mut evals);
            if fe < fr {
                simplex[n] = expand;
                values[n] = fe;
            } else {
                simplex[n] = reflect;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflect;
            values[n] = fr;
        } else {
            let contract: Vec<f64> = if fr < values[n] {
                (0..n).map(|i| 1.5 * centroid[i] - 0.5 * worst[i]).collect()
            } else {
                (0..n).map(|i| 0.5 * centroid[i] + 0.5 * worst[i]).collect()
            };
            let fc = eval(&contract, &mut evals);
            if fc < values[n].min(fr) {
                simplex[n] = contract;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                for k in 1..=n {
                    for i in 0..n {
                        simplex[k][i] = 0.5 * (simplex[k][i] + simplex[0][i]);
                    }
                    values[k] = eval(&simplex[k], &mut evals);
                }
            }
        }
    }

    let mut best = 0;
    for k in 1..=n {
        if values[k] < values[best] {
            best = k;
        }
    }
    SimplexFit {
        x: simplex[best].clone(),
        value: values[best],
        evaluations: evals,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_quadratic_min() {
        let (x, fx) = brent_min(|x| (x - 1.3) * (x - 1.3) + 2.0, -5.0, 5.0, 1e-10, 200).unwrap();
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let fit = nelder_mead(
            |x| {
                let a = 1.0 - x[0];
                let b = x[1] - x[0] * x[0];
                a * a + 100.0 * b * b
            },
            &[-1.2, 1.0],
            0.5,
            4000,
        );
        assert!((fit.x[0] - 1.0).abs() < 1e-4, "x0 = {}", fit.x[0]);
        assert!((fit.x[1] - 1.0).abs() < 1e-4, "x1 = {}", fit.x[1]);
    }
}
