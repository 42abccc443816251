//! Small dense Levenberg–Marquardt solver shared by the curve fits.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Stop once the scaled step is below this fraction of the scaled parameters.
    pub step_tolerance: f64,
    pub initial_damping: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 100,
            step_tolerance: 1e-10,
            initial_damping: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmSolution {
    pub params: Vec<f64>,
    /// Euclidean norm of the residual vector at `params`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn cost(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Minimises `|residuals(x)|²` starting from `x0`.
///
/// Parameters are scaled by `scale` (typically their initial magnitudes) so
/// the damping acts on comparable quantities. `residuals` returns `None` for
/// parameter vectors outside the model's domain; such trial steps are rejected.
pub fn levenberg_marquardt<F>(residuals: F, x0: &[f64], scale: &[f64], opts: LmOptions) -> Option<LmSolution>
where
    F: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let n = x0.len();
    assert_eq!(n, scale.len());
    let unscale = |p: &DVector<f64>| -> Vec<f64> { p.iter().zip(scale).map(|(v, s)| v * s).collect() };

    let mut p = DVector::from_iterator(n, x0.iter().zip(scale).map(|(x, s)| x / s));
    let mut r = residuals(&unscale(&p))?;
    let m = r.len();
    let mut c = cost(&r);
    let mut lambda = opts.initial_damping;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        iterations += 1;

        let mut jac = DMatrix::<f64>::zeros(m, n);
        for k in 0..n {
            let h = 1e-6 * p[k].abs().max(1.0);
            let mut plus = p.clone();
            let mut minus = p.clone();
            plus[k] += h;
            minus[k] -= h;
            let (rp, rm) = match (residuals(&unscale(&plus)), residuals(&unscale(&minus))) {
                (Some(a), Some(b)) => (a, b),
                _ => return None,
            };
            for i in 0..m {
                jac[(i, k)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * rv;

        let mut accepted = false;
        while lambda < 1e20 {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &p + &step;
            if let Some(rt) = residuals(&unscale(&trial)) {
                let ct = cost(&rt);
                if ct.is_finite() && ct <= c {
                    let rel = step.norm() / (p.norm() + f64::EPSILON);
                    p = trial;
                    r = rt;
                    c = ct;
                    lambda = (lambda / 10.0).max(1e-12);
                    accepted = true;
                    if rel < opts.step_tolerance {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !accepted {
            // No downhill step at any damping: we are at a minimum to
            // working precision.
            converged = true;
        }
        if converged {
            break;
        }
    }

    Some(LmSolution {
        params: unscale(&p),
        residual_norm: c.sqrt(),
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_a_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 2.0).collect();
        let sol = levenberg_marquardt(
            |p| Some(xs.iter().zip(&ys).map(|(x, y)| p[0] * x + p[1] - y).collect()),
            &[1.0, 1.0],
            &[1.0, 1.0],
            LmOptions::default(),
        )
        .unwrap();
        assert!(sol.converged);
        assert!((sol.params[0] - 3.0).abs() < 1e-9);
        assert!((sol.params[1] + 2.0).abs() < 1e-9);
    }

    #[test]
    fn rosenbrock_minimum() {
        let sol = levenberg_marquardt(
            |p| Some(vec![10.0 * (p[1] - p[0] * p[0]), 1.0 - p[0]]),
            &[-1.2, 1.0],
            &[1.0, 1.0],
            LmOptions {
                max_iterations: 500,
                ..LmOptions::default()
            },
        )
        .unwrap();
        assert!((sol.params[0] - 1.0).abs() < 1e-8, "{:?}", sol);
        assert!((sol.params[1] - 1.0).abs() < 1e-8);
    }
}
