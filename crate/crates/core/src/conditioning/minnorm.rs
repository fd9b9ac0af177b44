use crate::error::{Error, Result};
use crate::instance::{Instance, QuadraticObjective, SimplexIterate};
use crate::linalg;
use crate::solvers::{fw_away_run, RunOptions};
use crate::Real;

const FW_MAX_ITER: usize = 100_000;
const MAX_MAJOR: usize = 1_000;

/// Minimum-norm point of `conv(columns)` and its norm.
///
/// Frank-Wolfe with away steps on `½‖y‖²` locates the optimal face; a
/// Wolfe-style active-set pass then solves the affine least-squares problem
/// on that face exactly. The result satisfies `⟨y*, a_i − y*⟩ ≥ −tol` for
/// every column.
pub fn min_norm_point<T: Real>(columns: &[Vec<T>], tol: T) -> Result<(Vec<T>, T)> {
    if columns.is_empty() {
        return Err(Error::Dimension("min_norm_point needs at least one column".into()));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let m = columns[0].len();
    if columns.iter().all(|c| c.iter().all(|v| *v == T::zero())) {
        return Ok((vec![T::zero(); m], T::zero()));
    }
    let inst = Instance::new(columns.to_vec())?;
    let scale = inst.norm_max();
    let start = (0..inst.n())
        .min_by(|&a, &b| {
            linalg::norm_sq(inst.column(a))
                .partial_cmp(&linalg::norm_sq(inst.column(b)))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let gap_tol = (tol * tol).max(T::lit(1e-15) * scale * scale);
    let fw = fw_away_run(
        &inst,
        &QuadraticObjective::identity(m),
        SimplexIterate::vertex(&inst, start)?,
        RunOptions::new(gap_tol, FW_MAX_ITER),
    )?;
    let fw_y = fw.iterate.y().to_vec();

    let polished = polish(&inst, fw.iterate.x(), scale);
    let mut best: Option<Vec<T>> = None;
    for cand in polished.into_iter().chain(std::iter::once(fw_y)) {
        if optimality_violation(&inst, &cand) <= tol {
            let better = best
                .as_ref()
                .is_none_or(|b| linalg::norm_sq(&cand) < linalg::norm_sq(b));
            if better {
                best = Some(cand);
            }
        }
    }
    match best {
        Some(y) => {
            let n = linalg::norm(&y);
            Ok((y, n))
        }
        None => Err(Error::NoConvergence(format!(
            "min-norm point not certified to tolerance {tol}"
        ))),
    }
}

/// `max_i (‖y‖² − ⟨y, a_i⟩)`, which is `≤ 0` exactly at the minimizer.
fn optimality_violation<T: Real>(inst: &Instance<T>, y: &[T]) -> T {
    let yy = linalg::norm_sq(y);
    inst.columns()
        .iter()
        .map(|a| yy - linalg::dot(a, y))
        .fold(T::neg_infinity(), T::max)
}

/// Affine minimizer `argmin ‖Σ α_i a_i‖` subject to `Σ α_i = 1` over the
/// given indices, through the bordered Gram system.
fn affine_min<T: Real>(inst: &Instance<T>, idx: &[usize]) -> Option<Vec<T>> {
    let k = idx.len();
    let mut mat = vec![vec![T::zero(); k + 1]; k + 1];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            mat[r][c] = linalg::dot(inst.column(i), inst.column(j));
        }
        mat[r][k] = T::one();
        mat[k][r] = T::one();
    }
    let mut rhs = vec![T::zero(); k + 1];
    rhs[k] = T::one();
    let sol = linalg::solve_dense(&mat, &rhs, T::tol(1e-13))?;
    Some(sol[..k].to_vec())
}

/// Wolfe's minimum-norm-point iteration started from the weights `x`.
fn polish<T: Real>(inst: &Instance<T>, x: &[T], scale: T) -> Option<Vec<T>> {
    let mut corral: Vec<usize> = Vec::new();
    let mut lambda: Vec<T> = Vec::new();
    let mut order: Vec<usize> = (0..x.len()).filter(|&i| x[i] > T::zero()).collect();
    order.sort_by(|&a, &b| x[b].partial_cmp(&x[a]).unwrap_or(std::cmp::Ordering::Equal));
    // keep an affinely independent subset of the support
    let mut diffs: Vec<Vec<T>> = Vec::new();
    for &i in &order {
        if corral.is_empty() {
            corral.push(i);
            lambda.push(x[i]);
            continue;
        }
        let d = linalg::sub(inst.column(i), inst.column(corral[0]));
        let mut trial = diffs.clone();
        trial.push(d);
        if linalg::orthonormal_basis(&trial, T::tol(1e-9)).len() == trial.len() {
            diffs = trial;
            corral.push(i);
            lambda.push(x[i]);
        }
    }
    let total: T = lambda.iter().copied().sum();
    lambda.iter_mut().for_each(|l| *l = *l / total);

    let tiny = T::tol(1e-14);
    for _ in 0..MAX_MAJOR {
        // minor cycles
        loop {
            let alpha = affine_min(inst, &corral)?;
            if alpha.iter().all(|&a| a > tiny) {
                lambda = alpha;
                break;
            }
            let mut theta = T::one();
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a <= tiny {
                    let denom = *l - *a;
                    if denom > T::zero() {
                        theta = theta.min(*l / denom);
                    }
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = *l + theta * (*a - *l);
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > tiny).collect();
            if keep.iter().all(|&k| k) {
                // remove the weakest entry so the loop makes progress
                let worst = (0..lambda.len())
                    .min_by(|&a, &b| lambda[a].partial_cmp(&lambda[b]).unwrap())
                    .unwrap();
                corral.remove(worst);
                lambda.remove(worst);
            } else {
                let mut c2 = Vec::new();
                let mut l2 = Vec::new();
                for (t, &kp) in keep.iter().enumerate() {
                    if kp {
                        c2.push(corral[t]);
                        l2.push(lambda[t]);
                    }
                }
                corral = c2;
                lambda = l2;
            }
            if corral.is_empty() {
                return None;
            }
            let s: T = lambda.iter().copied().sum();
            lambda.iter_mut().for_each(|l| *l = *l / s);
        }
        let y = combination(inst, &corral, &lambda);
        let scores = inst.inner_products(&y);
        let j = (0..scores.len())
            .min_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap())
            .unwrap();
        let yy = linalg::norm_sq(&y);
        if scores[j] >= yy - T::tol(1e-15) * scale * scale || corral.contains(&j) {
            return Some(y);
        }
        corral.push(j);
        lambda.push(T::zero());
    }
    None
}

fn combination<T: Real>(inst: &Instance<T>, idx: &[usize], w: &[T]) -> Vec<T> {
    let mut y = vec![T::zero(); inst.m()];
    for (&i, &wi) in idx.iter().zip(w) {
        linalg::axpy(wi, inst.column(i), &mut y);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_between_unit_vectors() {
        let s = 3f64.sqrt() / 2.0;
        let (y, n) = min_norm_point(&[vec![1.0, 0.0], vec![0.5, s]], 1e-10).unwrap();
        assert!((n - s).abs() < 1e-12);
        assert!((y[0] - 0.75).abs() < 1e-12 && (y[1] - s / 2.0).abs() < 1e-12);
    }

    #[test]
    fn origin_inside_and_singleton() {
        let cols = vec![vec![1.0, 0.0], vec![0.0, -1.0], vec![0.0, 1.0]];
        let (_, n) = min_norm_point(&cols, 1e-10).unwrap();
        assert!(n < 1e-10);
        let (y, n) = min_norm_point(&[vec![1.0, 0.0]], 1e-10).unwrap();
        assert_eq!((y, n), (vec![1.0, 0.0], 1.0));
    }

    #[test]
    fn triangle_face_in_three_dimensions() {
        // the nearest point of the triangle e1 + e2 + e3 plane patch is its
        // centroid (1/3, 1/3, 1/3)
        let cols = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![2.0, 2.0, 2.0],
        ];
        let (y, n) = min_norm_point(&cols, 1e-10).unwrap();
        assert!((n - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(y.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn zero_columns_only() {
        let (y, n) = min_norm_point(&[vec![0.0, 0.0]], 1e-10).unwrap();
        assert_eq!((y, n), (vec![0.0, 0.0], 0.0));
    }
}
