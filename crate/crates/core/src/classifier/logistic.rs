use super::linalg::SquareMatrix;
use super::model::{FitInfo, LinearModel, Objective};
use super::training_set::TrainingSet;
use crate::error::{Error, Result};
use crate::scalar::{dot, norm_sq, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticOptions {
    pub max_iters: usize,
    /// Stop once the gradient's Euclidean norm falls below this.
    pub tol: f64,
}

impl Default for LogisticOptions {
    fn default() -> Self {
        Self {
            max_iters: 100,
            tol: 1e-8,
        }
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus<T: Scalar>(z: T) -> T {
    if z > T::zero() {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// `Σ [log(1 + e^z) − y z] + λ‖w‖²` with `z = w·x + b`.
pub fn logistic_loss<T: Scalar>(ts: &TrainingSet<T>, weights: &[T], bias: T, lambda: T) -> T {
    let data = ts.rows().zip(&ts.labels).fold(T::zero(), |acc, (x, &y)| {
        let z = dot(weights, x) + bias;
        acc + softplus(z) - T::of(f64::from(y)) * z
    });
    data + lambda * norm_sq(weights)
}

/// L2-regularized logistic regression (bias unregularized) by damped Newton
/// steps with backtracking. Non-convergence is reported in `fit`, not as an error.
pub fn train_logistic<T: Scalar>(
    ts: &TrainingSet<T>,
    lambda: T,
    opts: LogisticOptions,
) -> Result<LinearModel<T>> {
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(Error::argument(format!("logistic lambda must be >= 0, got {lambda}")));
    }
    let d = ts.dim;
    let two = T::of(2.0);
    let tol = T::of(opts.tol);
    let mean = T::of(ts.positive_fraction().clamp(1e-6, 1.0 - 1e-6));
    // params = [w; b]
    let mut params = vec![T::zero(); d + 1];
    params[d] = (mean / (T::one() - mean)).ln();
    let mut loss = logistic_loss(ts, &params[..d], params[d], lambda);
    let mut xt = vec![T::zero(); d + 1];
    xt[d] = T::one();

    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        let mut grad = vec![T::zero(); d + 1];
        let mut hess = SquareMatrix::zeros(d + 1);
        for (x, &y) in ts.rows().zip(&ts.labels) {
            xt[..d].copy_from_slice(x);
            let p = sigmoid(dot(&params, &xt));
            let r = p - T::of(f64::from(y));
            for (g, &v) in grad.iter_mut().zip(&xt) {
                *g += r * v;
            }
            hess.rank_one_upper(&xt, p * (T::one() - p));
        }
        hess.symmetrize();
        for j in 0..d {
            grad[j] += two * lambda * params[j];
            hess.add_to(j, j, two * lambda);
        }
        if norm_sq(&grad).sqrt() < tol {
            converged = true;
            break;
        }
        iterations += 1;

        // Levenberg damping until the Hessian factors.
        let mut damping = T::zero();
        let step = loop {
            let mut h = hess.clone();
            h.add_diagonal(damping);
            if let Some(s) = h.cholesky_solve(&grad) {
                break s;
            }
            damping = if damping == T::zero() {
                T::of(1e-10)
            } else {
                damping * T::of(10.0)
            };
            if !damping.is_finite() {
                return Err(Error::data("logistic Hessian could not be regularized"));
            }
        };

        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<T> = params.iter().zip(&step).map(|(&p, &s)| p - t * s).collect();
            let trial_loss = logistic_loss(ts, &trial[..d], trial[d], lambda);
            if trial_loss <= loss {
                params = trial;
                loss = trial_loss;
                accepted = true;
                break;
            }
            t *= T::of(0.5);
        }
        if !accepted {
            // No descent possible at working precision.
            break;
        }
    }

    let bias = params.pop().expect("bias slot");
    Ok(LinearModel {
        weights: params,
        bias,
        lambda,
        objective: Objective::Logistic,
        fit: FitInfo {
            iterations,
            converged,
        },
    })
}
