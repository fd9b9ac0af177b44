use crate::error::{Error, Result};
use crate::linalg;
use crate::Real;

/// Largest dimension handled by facet enumeration.
pub const MAX_RADIUS_DIM: usize = 3;

/// Distance from the origin to the boundary of `conv(points)` for points in
/// `R^d` (`d ≤ 3`) whose hull contains the origin in its interior.
///
/// Every affinely independent `d`-subset spans a candidate hyperplane; the
/// ones with all points on one closed side support facets, and the answer
/// is the smallest distance from the origin to such a hyperplane.
pub fn inscribed_radius<T: Real>(points: &[Vec<T>]) -> Result<T> {
    let d = points.first().map_or(0, |p| p.len());
    if d == 0 {
        return Err(Error::Dimension("inscribed radius needs points in R^d, d ≥ 1".into()));
    }
    if d > MAX_RADIUS_DIM {
        return Err(Error::Unsupported(format!(
            "inscribed radius in dimension {d} (at most {MAX_RADIUS_DIM} supported)"
        )));
    }
    let scale = points.iter().map(|p| linalg::norm(p)).fold(T::zero(), T::max);
    let side_tol = T::tol(1e-9) * (T::one() + scale);
    let mut best: Option<T> = None;
    for subset in subsets(points.len(), d) {
        let Some(normal) = hyperplane_normal(points, &subset) else {
            continue;
        };
        let offset = linalg::dot(&normal, &points[subset[0]]);
        let side: Vec<T> = points.iter().map(|p| linalg::dot(&normal, p) - offset).collect();
        let below = side.iter().all(|&s| s <= side_tol);
        let above = side.iter().all(|&s| s >= -side_tol);
        if below || above {
            let dist = offset.abs();
            best = Some(best.map_or(dist, |b: T| b.min(dist)));
        }
    }
    best.ok_or_else(|| Error::Dimension("points do not span a full-dimensional hull".into()))
}

/// Unit normal of the hyperplane through the chosen points, or `None` when
/// they are affinely dependent.
fn hyperplane_normal<T: Real>(points: &[Vec<T>], subset: &[usize]) -> Option<Vec<T>> {
    let d = points[0].len();
    let p0 = &points[subset[0]];
    let diffs: Vec<Vec<T>> = subset[1..].iter().map(|&i| linalg::sub(&points[i], p0)).collect();
    let basis = linalg::orthonormal_basis(&diffs, T::tol(1e-9));
    if basis.len() != diffs.len() {
        return None;
    }
    let mut best: Option<Vec<T>> = None;
    let mut best_norm = T::zero();
    for k in 0..d {
        let mut e = vec![T::zero(); d];
        e[k] = T::one();
        let r = linalg::project_out(&basis, &e);
        let r = linalg::project_out(&basis, &r);
        let nr = linalg::norm(&r);
        if nr > best_norm {
            best_norm = nr;
            best = Some(linalg::scale(&r, T::one() / nr));
        }
    }
    best
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for t in i..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}
