//! Exact one-dimensional minimizers along a descent direction, clamped to
//! `[0, θ_max]`.
//!
//! Both routines return the closed-form value; in debug builds the value is
//! cross-checked by re-evaluating the objective at the applied step.

use crate::error::{Error, Result};
use crate::instance::QuadraticObjective;
use crate::linalg;
use crate::Real;

/// Result of an exact line search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSolution<T> {
    /// Unclamped minimizer over `θ ≥ 0`.
    pub theta_star: T,
    /// Applied step, `min(theta_star, θ_max)`.
    pub theta: T,
    pub clamped: bool,
    /// Objective at `theta`: `‖y + θa‖` for the norm search, `f(y + θa)`
    /// for the quadratic search.
    pub value: T,
}

/// Minimizes `‖y + θa‖` over `θ ∈ [0, θ_max]`; requires `⟨a, y⟩ < 0`.
///
/// `theta_max` may be `+∞`.
pub fn exact_norm_step<T: Real>(y: &[T], a: &[T], theta_max: T) -> Result<StepSolution<T>> {
    let ay = linalg::dot(a, y);
    if !(ay < T::zero()) {
        return Err(Error::NotDescent(ay.as_f64()));
    }
    let aa = linalg::norm_sq(a);
    let yy = linalg::norm_sq(y);
    let theta_star = -ay / aa;
    let sol = if theta_star > theta_max {
        let t = theta_max;
        let sq = yy + (ay + ay) * t + aa * t * t;
        StepSolution { theta_star, theta: t, clamped: true, value: sq.max(T::zero()).sqrt() }
    } else {
        let sq = yy - ay * ay / aa;
        StepSolution { theta_star, theta: theta_star, clamped: false, value: sq.max(T::zero()).sqrt() }
    };
    debug_assert!({
        let mut moved = y.to_vec();
        linalg::axpy(sol.theta, a, &mut moved);
        let direct = linalg::norm_sq(&moved);
        (direct - sol.value * sol.value).abs() <= T::tol(1e-9) * (T::one() + yy)
    });
    Ok(sol)
}

/// Minimizes `f(y + θa)` over `θ ∈ [0, θ_max]`; requires `⟨a, ∇f(y)⟩ < 0`.
pub fn exact_quadratic_step<T: Real>(
    y: &[T],
    a: &[T],
    obj: &QuadraticObjective<T>,
    theta_max: T,
) -> Result<StepSolution<T>> {
    let grad = obj.gradient(y);
    let slope = linalg::dot(a, &grad);
    if !(slope < T::zero()) {
        return Err(Error::NotDescent(slope.as_f64()));
    }
    let curv = obj.curvature(a);
    if !(curv > T::zero()) {
        return Err(Error::NonPositiveCurvature(curv.as_f64()));
    }
    let f0 = obj.value(y);
    let half = T::lit(0.5);
    let theta_star = -slope / curv;
    let sol = if theta_star > theta_max {
        let t = theta_max;
        StepSolution {
            theta_star,
            theta: t,
            clamped: true,
            value: f0 + slope * t + half * curv * t * t,
        }
    } else {
        StepSolution {
            theta_star,
            theta: theta_star,
            clamped: false,
            value: f0 - slope * slope / (curv + curv),
        }
    };
    debug_assert!({
        let mut moved = y.to_vec();
        linalg::axpy(sol.theta, a, &mut moved);
        let direct = obj.value(&moved);
        (direct - sol.value).abs() <= T::tol(1e-8) * (T::one() + f0.abs() + direct.abs())
    });
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14
    }

    #[test]
    fn norm_step_examples() {
        let s = exact_norm_step(&[1.0, 0.0], &[-1.0, 0.0], 1.0).unwrap();
        assert!(close(s.theta, 1.0) && close(s.value, 0.0) && !s.clamped);

        let s = exact_norm_step(&[1.0, 0.0], &[-1.0, 1.0], 1.0).unwrap();
        assert!(close(s.theta, 0.5) && close(s.value * s.value, 0.5));

        let s = exact_norm_step(&[1.0, 0.0], &[-1.0, 1.0], 0.25).unwrap();
        assert!(s.clamped && close(s.theta, 0.25) && close(s.value * s.value, 0.625));
        assert!(close(s.theta_star, 0.5));
    }

    #[test]
    fn norm_step_rejects_ascent() {
        assert!(matches!(
            exact_norm_step(&[1.0, 0.0], &[1.0, 0.0], 1.0),
            Err(Error::NotDescent(_))
        ));
        assert!(exact_norm_step(&[1.0, 0.0], &[0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn infinite_theta_max() {
        let s = exact_norm_step(&[1.0, 0.0], &[-1.0, 1.0], f64::INFINITY).unwrap();
        assert!(!s.clamped && close(s.theta, 0.5));
    }

    #[test]
    fn quadratic_step_examples() {
        let id = QuadraticObjective::identity(2);
        let s = exact_quadratic_step(&[1.0, 0.0], &[-1.0, 0.0], &id, 1.0).unwrap();
        assert!(close(s.theta, 1.0) && close(s.value, 0.0));

        let q = QuadraticObjective::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0]).unwrap();
        let s = exact_quadratic_step(&[1.0, 0.0], &[-1.0, 0.0], &q, 1.0).unwrap();
        assert!(close(s.theta_star, 1.0) && close(s.value, 0.0));

        let s = exact_quadratic_step(&[1.0, 0.0], &[-1.0, 1.0], &id, f64::INFINITY).unwrap();
        assert!(close(s.theta, 0.5) && close(s.value, 0.25));
    }

    #[test]
    fn quadratic_step_rejects_ascent() {
        let id = QuadraticObjective::identity(2);
        assert!(matches!(
            exact_quadratic_step(&[1.0, 0.0], &[0.0, 1.0], &id, 1.0),
            Err(Error::NotDescent(_))
        ));
    }

    #[test]
    fn single_precision() {
        let s = exact_norm_step(&[1.0f32, 0.0], &[-1.0, 1.0], 1.0).unwrap();
        assert!((s.theta - 0.5).abs() < 1e-6);
    }
}
