//! Independent reference computations for the integration tests. Nothing
//! here calls into the library's numerical routines.

#![allow(dead_code)]

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn combo(cols: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let m = cols[0].len();
    let mut y = vec![0.0; m];
    for (c, &wi) in cols.iter().zip(w) {
        for k in 0..m {
            y[k] += wi * c[k];
        }
    }
    y
}

pub fn quad_value(q: &[Vec<f64>], b: &[f64], y: &[f64]) -> f64 {
    let qy: Vec<f64> = q.iter().map(|r| dot(r, y)).collect();
    0.5 * dot(y, &qy) + dot(b, y)
}

/// Gaussian elimination with partial pivoting; `None` if a pivot is below
/// `1e-12` relative to the largest entry.
pub fn gauss(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())?;
        if a[p][c].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(c, p);
        rhs.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            rhs[r] -= f * rhs[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (rhs[r] - s) / a[r][r];
    }
    Some(x)
}

/// Minimizes `½⟨y,Qy⟩ + ⟨b,y⟩` over `conv(cols)` by solving the KKT system
/// of every support set and keeping the best feasible candidate.
/// Returns `(f*, y*, x*)`.
pub fn qp_oracle(cols: &[Vec<f64>], q: &[Vec<f64>], b: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let n = cols.len();
    let m = cols[0].len();
    let qcol: Vec<Vec<f64>> = cols
        .iter()
        .map(|c| (0..m).map(|r| dot(&q[r], c)).collect())
        .collect();
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let k = s.len();
        let mut mat = vec![vec![0.0; k + 1]; k + 1];
        let mut rhs = vec![0.0; k + 1];
        for (r, &i) in s.iter().enumerate() {
            for (c, &j) in s.iter().enumerate() {
                mat[r][c] = dot(&cols[i], &qcol[j]);
            }
            mat[r][k] = 1.0;
            mat[k][r] = 1.0;
            rhs[r] = -dot(b, &cols[i]);
        }
        rhs[k] = 1.0;
        let Some(sol) = gauss(mat, rhs) else { continue };
        if sol[..k].iter().any(|&v| v < -1e-12) {
            continue;
        }
        let mut x = vec![0.0; n];
        for (t, &i) in s.iter().enumerate() {
            x[i] = sol[t].max(0.0);
        }
        let tot: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= tot);
        let y = combo(cols, &x);
        let f = quad_value(q, b, &y);
        if best.as_ref().is_none_or(|bst| f < bst.0) {
            best = Some((f, y, x));
        }
    }
    best.expect("some vertex is always feasible")
}

pub fn identity(m: usize) -> Vec<Vec<f64>> {
    (0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// Minimum-norm point of `conv(cols)` through [`qp_oracle`] with `Q = I`.
pub fn min_norm_oracle(cols: &[Vec<f64>]) -> f64 {
    let m = cols[0].len();
    let (f, _, _) = qp_oracle(cols, &identity(m), &vec![0.0; m]);
    (2.0 * f).max(0.0).sqrt()
}

/// Minimum of `g` over `points` equally spaced samples of `[0, theta_max]`
/// (both ends included); returns `(θ, g(θ))`.
pub fn grid_min(theta_max: f64, points: usize, g: impl Fn(f64) -> f64) -> (f64, f64) {
    let h = theta_max / (points - 1) as f64;
    let mut best = (0.0, g(0.0));
    for i in 1..points {
        let t = i as f64 * h;
        let v = g(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}

/// Distance from the origin to the line through `p` and `q` in the plane.
pub fn line_distance(p: &[f64], q: &[f64]) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1]];
    (p[0] * d[1] - p[1] * d[0]).abs() / (d[0] * d[0] + d[1] * d[1]).sqrt()
}

pub fn equilateral() -> Vec<Vec<f64>> {
    [90.0f64, 210.0, 330.0]
        .iter()
        .map(|d| vec![d.to_radians().cos(), d.to_radians().sin()])
        .collect()
}

/// Inscribed radius of a planar point set whose hull contains the origin:
/// the smallest distance to a supporting line through two of the points.
pub fn planar_inradius(cols: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let (p, q) = (&cols[i], &cols[j]);
            let normal = [p[1] - q[1], q[0] - p[0]];
            if normal[0].hypot(normal[1]) < 1e-12 {
                continue;
            }
            let side: Vec<f64> = cols
                .iter()
                .map(|c| normal[0] * (c[0] - p[0]) + normal[1] * (c[1] - p[1]))
                .collect();
            let tol = 1e-12;
            if side.iter().all(|&s| s >= -tol) || side.iter().all(|&s| s <= tol) {
                best = best.min(line_distance(p, q));
            }
        }
    }
    best
}
