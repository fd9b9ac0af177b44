//! Small dense helpers over `Vec<T>` vectors.

use crate::Real;

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Dot product with Neumaier compensated summation.
pub fn dot_compensated<T: Real>(a: &[T], b: &[T]) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        let term = x * y;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp = comp + ((sum - t) + term);
        } else {
            comp = comp + ((term - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

#[inline]
pub fn norm_sq<T: Real>(a: &[T]) -> T {
    dot(a, a)
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    norm_sq(a).sqrt()
}

pub fn norm_inf<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn scale<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

/// `y += alpha * x`
pub fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

/// `sum_i weights[i] * columns[i]`
pub fn combine<T: Real>(columns: &[Vec<T>], weights: &[T], dim: usize) -> Vec<T> {
    let mut out = vec![T::zero(); dim];
    for (col, &w) in columns.iter().zip(weights) {
        if w != T::zero() {
            axpy(w, col, &mut out);
        }
    }
    out
}

/// Row-major matrix-vector product.
pub fn mat_vec<T: Real>(rows: &[Vec<T>], x: &[T]) -> Vec<T> {
    rows.iter().map(|r| dot(r, x)).collect()
}

/// Upper-triangular `M` with `MᵀM = Q` (row-major). Returns `None` if `Q` is
/// not numerically positive definite.
pub fn cholesky_upper<T: Real>(q: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = q.len();
    let mut m = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        let mut diag = q[i][i];
        for k in 0..i {
            diag = diag - m[k][i] * m[k][i];
        }
        if !(diag > T::zero()) || !diag.is_finite() {
            return None;
        }
        let d = diag.sqrt();
        m[i][i] = d;
        for j in (i + 1)..n {
            let mut s = q[i][j];
            for k in 0..i {
                s = s - m[k][i] * m[k][j];
            }
            m[i][j] = s / d;
        }
    }
    Some(m)
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `pivot_tol` times the
/// largest entry of `a`.
pub fn solve_dense<T: Real>(a: &[Vec<T>], b: &[T], pivot_tol: T) -> Option<Vec<T>> {
    let n = b.len();
    let mut mat: Vec<Vec<T>> = a.to_vec();
    let mut rhs = b.to_vec();
    let scale = mat
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |acc, &v| acc.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    for col in 0..n {
        let (piv, piv_val) = (col..n)
            .map(|r| (r, mat[r][col].abs()))
            .fold((col, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_val <= pivot_tol * scale {
            return None;
        }
        mat.swap(col, piv);
        rhs.swap(col, piv);
        for r in (col + 1)..n {
            let factor = mat[r][col] / mat[col][col];
            if factor != T::zero() {
                for c in col..n {
                    let v = mat[col][c];
                    mat[r][c] = mat[r][c] - factor * v;
                }
                rhs[r] = rhs[r] - factor * rhs[col];
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut s = rhs[r];
        for c in (r + 1)..n {
            s = s - mat[r][c] * x[c];
        }
        x[r] = s / mat[r][r];
    }
    Some(x)
}

/// Orthonormal basis of `span(vectors)` by modified Gram-Schmidt with one
/// reorthogonalization pass. A vector is considered dependent when its
/// residual falls below `rel_tol` times its original norm (or the largest
/// input norm, whichever is larger).
pub fn orthonormal_basis<T: Real>(vectors: &[Vec<T>], rel_tol: T) -> Vec<Vec<T>> {
    let max_norm = vectors.iter().map(|v| norm(v)).fold(T::zero(), T::max);
    let mut basis: Vec<Vec<T>> = Vec::new();
    if max_norm == T::zero() {
        return basis;
    }
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&r, q);
                axpy(-c, q, &mut r);
            }
        }
        let nr = norm(&r);
        if nr > rel_tol * max_norm {
            basis.push(scale(&r, T::one() / nr));
        }
    }
    basis
}

/// Coordinates of `v` in the orthonormal `basis`.
pub fn coordinates<T: Real>(basis: &[Vec<T>], v: &[T]) -> Vec<T> {
    basis.iter().map(|q| dot(q, v)).collect()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub fn project_out<T: Real>(basis: &[Vec<T>], v: &[T]) -> Vec<T> {
    let mut r = v.to_vec();
    for q in basis {
        let c = dot(&r, q);
        axpy(-c, q, &mut r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_of_diagonal() {
        let q = vec![vec![4.0, 0.0], vec![0.0, 1.0]];
        let m = cholesky_upper(&q).unwrap();
        assert_eq!(m, vec![vec![2.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn cholesky_reconstructs() {
        let q = vec![
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.2],
            vec![0.5, -0.2, 2.0],
        ];
        let m = cholesky_upper(&q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                assert!((s - q[i][j]).abs() < 1e-14);
            }
        }
        assert!(cholesky_upper(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_none());
    }

    #[test]
    fn solve_and_singular() {
        let a = vec![vec![0.0f64, 2.0], vec![1.0, 1.0]];
        let x = solve_dense(&a, &[2.0, 3.0], 1e-12).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        assert!(solve_dense(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0], 1e-12).is_none());
    }

    #[test]
    fn gram_schmidt_rank() {
        let v = vec![vec![1.0f64, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]];
        let b = orthonormal_basis(&v, 1e-9);
        assert_eq!(b.len(), 2);
        assert!(dot(&b[0], &b[1]).abs() < 1e-15);
        let p = project_out(&b, &[1.0, -1.0, 5.0]);
        assert!((p[0] - 1.0).abs() < 1e-15 && (p[1] + 1.0).abs() < 1e-15 && p[2].abs() < 1e-15);
    }

    #[test]
    fn compensated_dot_matches() {
        let a = [1e16, 1.0, -1e16];
        let b = [1.0, 1.0, 1.0];
        assert_eq!(dot_compensated(&a, &b), 1.0);
    }
}
