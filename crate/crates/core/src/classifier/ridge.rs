use super::linalg::SquareMatrix;
use super::model::{FitInfo, LinearModel, Objective};
use super::training_set::TrainingSet;
use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

/// `Σ (w·x + b − y)² + λ‖w‖²`.
pub fn ridge_objective<T: Scalar>(ts: &TrainingSet<T>, weights: &[T], bias: T, lambda: T) -> T {
    let sse = ts
        .rows()
        .zip(&ts.labels)
        .fold(T::zero(), |acc, (x, &y)| {
            let r = dot(weights, x) + bias - T::of(f64::from(y));
            acc + r * r
        });
    sse + lambda * crate::scalar::norm_sq(weights)
}

/// Column means and label mean.
fn means<T: Scalar>(ts: &TrainingSet<T>) -> (Vec<T>, T) {
    let m = T::of(ts.len() as f64);
    let mut x_mean = vec![T::zero(); ts.dim];
    let mut y_mean = T::zero();
    for (x, &y) in ts.rows().zip(&ts.labels) {
        for (acc, &v) in x_mean.iter_mut().zip(x) {
            *acc += v;
        }
        y_mean += T::of(f64::from(y));
    }
    for v in &mut x_mean {
        *v /= m;
    }
    (x_mean, y_mean / m)
}

/// Centered normal equations `(XcᵀXc + λI) w = Xcᵀ yc` and their right-hand side.
pub(crate) fn normal_equations<T: Scalar>(
    ts: &TrainingSet<T>,
    lambda: T,
) -> (SquareMatrix<T>, Vec<T>, Vec<T>, T) {
    let (x_mean, y_mean) = means(ts);
    let mut gram = SquareMatrix::zeros(ts.dim);
    let mut rhs = vec![T::zero(); ts.dim];
    let mut xc = vec![T::zero(); ts.dim];
    for (x, &y) in ts.rows().zip(&ts.labels) {
        for ((c, &v), &mu) in xc.iter_mut().zip(x).zip(&x_mean) {
            *c = v - mu;
        }
        gram.rank_one_upper(&xc, T::one());
        let yc = T::of(f64::from(y)) - y_mean;
        for (r, &c) in rhs.iter_mut().zip(&xc) {
            *r += c * yc;
        }
    }
    gram.symmetrize();
    gram.add_diagonal(lambda);
    (gram, rhs, x_mean, y_mean)
}

/// Exact ridge fit with an unregularized bias.
pub fn train_ridge<T: Scalar>(ts: &TrainingSet<T>, lambda: T) -> Result<LinearModel<T>> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::argument(format!("ridge lambda must be positive, got {lambda}")));
    }
    let (gram, rhs, x_mean, y_mean) = normal_equations(ts, lambda);
    let weights = gram
        .cholesky_solve(&rhs)
        .ok_or_else(|| Error::data("ridge normal equations are not positive definite"))?;
    let bias = y_mean - dot(&weights, &x_mean);
    Ok(LinearModel {
        weights,
        bias,
        lambda,
        objective: Objective::Ridge,
        fit: FitInfo {
            iterations: 1,
            converged: true,
        },
    })
}
