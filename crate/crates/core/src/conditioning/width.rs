use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::instance::{Instance, QuadraticObjective};
use crate::linalg;
use crate::simplexlp::{solve_lp, LpProblem, LpStatus};
use crate::Real;

/// Directions with `‖Ax‖` at or below this are skipped.
pub const DIRECTION_TOL: f64 = 1e-10;
/// Supports are enumerated exhaustively up to this many columns.
pub const EXHAUSTIVE_SUPPORT_N: usize = 12;
const RANDOM_SUPPORTS: usize = 4096;
const HULL_TOL: f64 = 1e-8;

/// The optimal `(λ, u, v)` of the restricted-width LP at a point `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiCertificate<T> {
    pub lambda: T,
    /// Supported inside `S(x)`.
    pub u: Vec<T>,
    pub v: Vec<T>,
    /// `false` when no positive `λ` is feasible; the width is then reported
    /// as zero.
    pub positive: bool,
}

fn unit_direction<T: Real>(inst: &Instance<T>, x: &[T]) -> Result<Vec<T>> {
    if x.len() != inst.n() {
        return Err(Error::Dimension(format!("weight vector has length {}, expected {}", x.len(), inst.n())));
    }
    if x.iter().any(|v| !(*v >= T::zero())) {
        return Err(Error::InvalidIterate("weights must be nonnegative".into()));
    }
    let y = inst.apply(x);
    let ny = linalg::norm(&y);
    if !(ny > T::tol(DIRECTION_TOL)) {
        return Err(Error::InvalidIterate(format!("‖Ax‖ = {ny} is too small to define a direction")));
    }
    Ok(linalg::scale(&y, T::one() / ny))
}

/// Restricted width at `x`: the largest `λ` with `Au − Av = λ·Ax/‖Ax‖`,
/// `u, v ∈ Δ`, `S(u) ⊆ S(x)`, computed by one LP.
pub fn phi_at<T: Real>(inst: &Instance<T>, x: &[T]) -> Result<(T, PhiCertificate<T>)> {
    let dir = unit_direction(inst, x)?;
    let (m, n) = (inst.m(), inst.n());
    let support: Vec<usize> = (0..n).filter(|&i| x[i] > T::zero()).collect();
    let k = support.len();
    // variables: u_S (k) | v (n) | λ
    let p = k + n + 1;
    let mut e = Vec::with_capacity(m + 2);
    for r in 0..m {
        let mut row = vec![T::zero(); p];
        for (t, &i) in support.iter().enumerate() {
            row[t] = inst.column(i)[r];
        }
        for j in 0..n {
            row[k + j] = -inst.column(j)[r];
        }
        row[k + n] = -dir[r];
        e.push(row);
    }
    let mut su = vec![T::zero(); p];
    su[..k].iter_mut().for_each(|v| *v = T::one());
    let mut sv = vec![T::zero(); p];
    sv[k..k + n].iter_mut().for_each(|v| *v = T::one());
    e.push(su);
    e.push(sv);
    let mut g = vec![T::zero(); m];
    g.push(T::one());
    g.push(T::one());
    let mut c = vec![T::zero(); p];
    c[k + n] = T::one();
    let sol = solve_lp(&LpProblem { c, e, g })?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::LpNumerical(format!("width LP returned {:?}", sol.status)));
    }
    let mut u = vec![T::zero(); n];
    for (t, &i) in support.iter().enumerate() {
        u[i] = sol.z[t];
    }
    let v = sol.z[k..k + n].to_vec();
    let lambda = sol.z[k + n];
    let residual = linalg::norm(&linalg::sub(
        &linalg::sub(&inst.apply(&u), &inst.apply(&v)),
        &linalg::scale(&dir, lambda),
    ));
    if residual > T::tol(1e-8) * (T::one() + inst.norm_max()) {
        return Err(Error::LpNumerical(format!("width certificate residual {residual}")));
    }
    let positive = lambda > T::zero();
    let value = if positive { lambda } else { T::zero() };
    Ok((value, PhiCertificate { lambda, u, v, positive }))
}

/// Relative width at `x`:
/// `max_{ℓ ∈ S(x)} ⟨a_ℓ, ŷ⟩ − min_j ⟨a_j, ŷ⟩` with `ŷ = Ax/‖Ax‖`.
pub fn w_at<T: Real>(inst: &Instance<T>, x: &[T]) -> Result<T> {
    let dir = unit_direction(inst, x)?;
    let scores = inst.inner_products(&dir);
    let lo = scores.iter().copied().fold(T::infinity(), T::min);
    let hi = (0..inst.n())
        .filter(|&i| x[i] > T::zero())
        .map(|i| scores[i])
        .fold(T::neg_infinity(), T::max);
    Ok(hi - lo)
}

fn support_sets(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    if n <= EXHAUSTIVE_SUPPORT_N {
        (1u32..(1u32 << n))
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
            .collect()
    } else {
        let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        while out.len() < RANDOM_SUPPORTS {
            let s: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            if !s.is_empty() {
                out.push(s);
            }
        }
        out
    }
}

/// Seeded sample of weight vectors: for each support, its barycenter plus
/// `budget` random convex combinations (half spread out, half concentrated
/// near faces), followed by the instance's reference points.
fn sample_pool<T: Real>(inst: &Instance<T>, budget: usize, seed: u64) -> Vec<Vec<T>> {
    let n = inst.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flat = Gamma::new(1.0, 1.0).expect("valid shape");
    let spiky = Gamma::new(0.25, 1.0).expect("valid shape");
    let mut pool = Vec::new();
    for s in support_sets(n, &mut rng) {
        let mut bary = vec![T::zero(); n];
        let w = T::one() / T::lit(s.len() as f64);
        s.iter().for_each(|&i| bary[i] = w);
        pool.push(bary);
        if s.len() == 1 {
            continue;
        }
        for b in 0..budget {
            let dist = if b % 2 == 0 { &flat } else { &spiky };
            let raw: Vec<f64> = s.iter().map(|_| f64::max(dist.sample(&mut rng), 1e-300)).collect();
            let total: f64 = raw.iter().sum();
            let mut x = vec![T::zero(); n];
            for (&i, r) in s.iter().zip(&raw) {
                x[i] = T::lit(r / total);
            }
            pool.push(x);
        }
    }
    pool.extend(inst.reference_points().iter().cloned());
    pool
}

fn check_budget(budget: usize) -> Result<()> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    Ok(())
}

/// Multiplicative coordinate descent on the weights of `x` (support kept).
fn refine<T: Real>(inst: &Instance<T>, x: &[T], start: T) -> T {
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] > T::zero()).collect();
    let mut cur = x.to_vec();
    let mut best = start;
    let mut step = 1.0f64;
    let mut evals = 0usize;
    let limit = 60 * support.len() + 100;
    while step > 1e-3 && evals < limit {
        let mut improved = false;
        for &i in &support {
            for factor in [1.0 + step, 1.0 / (1.0 + step)] {
                let mut trial = cur.clone();
                trial[i] = trial[i] * T::lit(factor);
                let total: T = trial.iter().copied().sum();
                trial.iter_mut().for_each(|v| *v = *v / total);
                evals += 1;
                if let Ok((val, _)) = phi_at(inst, &trial) {
                    if val < best {
                        best = val;
                        cur = trial;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Upper estimate of the restricted width `φ(A) = min_x φ(A, x)`: the
/// minimum of [`phi_at`] over a seeded sample of supports and directions,
/// refined by coordinate descent around the best few samples.
///
/// Every evaluated point is feasible for the outer minimization, so the
/// result can only overestimate `φ(A)`.
pub fn phi_estimate<T: Real>(inst: &Instance<T>, budget: usize, seed: u64) -> Result<T> {
    check_budget(budget)?;
    let mut scored: Vec<(T, Vec<T>)> = Vec::new();
    for x in sample_pool(inst, budget, seed) {
        if let Ok((val, _)) = phi_at(inst, &x) {
            scored.push((val, x));
        }
    }
    if scored.is_empty() {
        return Err(Error::NoConvergence("no sampled direction with Ax ≠ 0".into()));
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = scored[0].0;
    for (val, x) in scored.iter().take(3) {
        best = best.min(refine(inst, x, *val));
    }
    Ok(best)
}

/// Upper estimate of the relative width `w(A)` over the same sample as
/// [`phi_estimate`] (without refinement).
pub fn w_estimate<T: Real>(inst: &Instance<T>, budget: usize, seed: u64) -> Result<T> {
    check_budget(budget)?;
    sample_pool(inst, budget, seed)
        .iter()
        .filter_map(|x| w_at(inst, x).ok())
        .reduce(T::min)
        .ok_or_else(|| Error::NoConvergence("no sampled direction with Ax ≠ 0".into()))
}

/// `d(A) = max_{i,j} ‖a_i − a_j‖`.
pub fn diameter<T: Real>(columns: &[Vec<T>]) -> T {
    let mut d = T::zero();
    for (i, a) in columns.iter().enumerate() {
        for b in &columns[i + 1..] {
            d = d.max(linalg::norm(&linalg::sub(a, b)));
        }
    }
    d
}

/// Distance-like slack of `y` from `conv(A)`: the least `‖Ax − y‖₁` over
/// `x ∈ Δ`.
fn hull_slack<T: Real>(inst: &Instance<T>, y: &[T]) -> Result<T> {
    let (m, n) = (inst.m(), inst.n());
    // variables: x (n) | s⁺ (m) | s⁻ (m)
    let p = n + 2 * m;
    let mut e = Vec::with_capacity(m + 1);
    for r in 0..m {
        let mut row = vec![T::zero(); p];
        for j in 0..n {
            row[j] = inst.column(j)[r];
        }
        row[n + r] = T::one();
        row[n + m + r] = -T::one();
        e.push(row);
    }
    let mut sum = vec![T::zero(); p];
    sum[..n].iter_mut().for_each(|v| *v = T::one());
    e.push(sum);
    let mut g = y.to_vec();
    g.push(T::one());
    let mut c = vec![T::zero(); p];
    c[n..].iter_mut().for_each(|v| *v = -T::one());
    let sol = solve_lp(&LpProblem { c, e, g })?;
    match sol.status {
        LpStatus::Optimal => Ok(-sol.value),
        other => Err(Error::LpNumerical(format!("hull membership LP returned {other:?}"))),
    }
}

/// The shifted and rescaled columns `M(a_i − y*)`, `MᵀM = Q`, whose
/// geometry controls the linear rate for the quadratic solver.
pub fn transform_instance<T: Real>(
    inst: &Instance<T>,
    obj: &QuadraticObjective<T>,
    y_star: &[T],
) -> Result<Instance<T>> {
    if obj.dim() != inst.m() || y_star.len() != inst.m() {
        return Err(Error::Dimension("objective, optimum and instance dimensions differ".into()));
    }
    let slack = hull_slack(inst, y_star)?;
    if slack > T::tol(HULL_TOL) {
        return Err(Error::InvalidParameter(format!(
            "y* lies outside conv(A) (ℓ1 slack {slack})"
        )));
    }
    let cols = inst
        .columns()
        .iter()
        .map(|a| obj.apply_factor(&linalg::sub(a, y_star)))
        .collect();
    let mut out = Instance::new(cols)?;
    if let Some(l) = inst.label() {
        out = out.with_label(format!("{l}-transformed"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{make_example, make_figure1};

    #[test]
    fn phi_at_vertex_of_figure1() {
        let inst = make_figure1::<f64>();
        let (phi, cert) = phi_at(&inst, &[0.0, 1.0, 0.0]).unwrap();
        assert!((phi - 2.0).abs() < 1e-12);
        assert!(cert.positive);
        assert!((cert.u[1] - 1.0).abs() < 1e-12 && (cert.v[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_at_reference_points() {
        let (eps, delta) = (0.3, 0.6);
        let e1 = make_example::<f64>(1, eps, delta).unwrap();
        let (p1, _) = phi_at(&e1, &e1.reference_points()[0]).unwrap();
        assert!((p1 - (1.0 + delta) * eps).abs() < 1e-10);
        let e3 = make_example::<f64>(3, eps, delta).unwrap();
        let (p3, _) = phi_at(&e3, &e3.reference_points()[0]).unwrap();
        assert!((p3 - 2.0 * eps * delta / (1.0 + eps)).abs() < 1e-10);
    }

    #[test]
    fn phi_at_rejects_null_direction() {
        let inst = make_figure1::<f64>();
        assert!(phi_at(&inst, &[0.0, 0.5, 0.5]).is_err());
        assert!(w_at(&inst, &[0.0, 0.5, 0.5]).is_err());
    }

    #[test]
    fn width_of_opposite_pair() {
        let inst = Instance::new(vec![vec![1.0f64, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert!((w_estimate(&inst, 8, 0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn estimates_on_figure1() {
        let inst = make_figure1::<f64>();
        let phi = phi_estimate(&inst, 16, 3).unwrap();
        let w = w_estimate(&inst, 16, 3).unwrap();
        assert!(phi >= 1.0 / 2f64.sqrt() - 1e-8 && phi <= 2.0);
        assert!(w >= phi - 1e-9);
        assert!(phi_estimate(&inst, 0, 3).is_err());
    }

    #[test]
    fn diameters() {
        let inst = make_figure1::<f64>();
        assert_eq!(diameter(inst.columns()), 2.0);
        assert_eq!(diameter(&[vec![3.0, 4.0]]), 0.0);
    }

    #[test]
    fn transforms() {
        let inst = make_figure1::<f64>();
        let id = QuadraticObjective::identity(2);
        assert_eq!(transform_instance(&inst, &id, &[0.0, 0.0]).unwrap().columns(), inst.columns());
        let t = transform_instance(&inst, &id, &[0.0, 0.5]).unwrap();
        assert_eq!(t.columns(), &[vec![1.0, -0.5], vec![0.0, -1.5], vec![0.0, 0.5]]);
        let q = QuadraticObjective::new(vec![vec![4.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0]).unwrap();
        let single = Instance::new(vec![vec![1.0, 0.0]]).unwrap();
        assert!(transform_instance(&single, &q, &[1.0, 0.0]).is_err());
        let pair = Instance::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(transform_instance(&pair, &q, &[0.0, 0.0]).unwrap().column(0), &[2.0, 0.0]);
        assert!(transform_instance(&inst, &id, &[2.0, 0.0]).is_err());
    }
}
