//! Dense two-phase simplex for small equality-form LPs:
//! maximize `⟨c, z⟩` subject to `Ez = g`, `z ≥ 0`.
//!
//! Pricing is Dantzig's largest reduced cost; after `3·(p + q)` degenerate
//! pivots the solver switches to Bland's rule for the rest of the solve.
//! The basis matrix is refactored from scratch at every pivot, which is
//! cheap at the sizes used here (a few dozen rows).

use crate::error::{Error, Result};
use crate::linalg;
use crate::Real;

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
/// Smallest acceptable pivot magnitude.
pub const PIVOT_TOL: f64 = 1e-11;
const OPT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-12;
const ROW_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<T> {
    pub c: Vec<T>,
    /// Constraint rows, each of length `p = c.len()`.
    pub e: Vec<Vec<T>>,
    pub g: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Optimal point (empty unless optimal).
    pub z: Vec<T>,
    pub value: T,
    /// Final basic indices (original variables only).
    pub basis: Vec<usize>,
    /// Dual multipliers for the original rows, with `⟨g, dual⟩ = value` and
    /// `c − Eᵀ dual ≤ 0` at an optimum.
    pub dual: Vec<T>,
}

impl<T: Real> LpSolution<T> {
    fn without_point(status: LpStatus) -> Self {
        Self { status, z: Vec::new(), value: T::nan(), basis: Vec::new(), dual: Vec::new() }
    }
}

struct Lu<T> {
    lu: Vec<Vec<T>>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    fn factor(mut a: Vec<Vec<T>>) -> Option<Self> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().flatten().fold(T::zero(), |m, &v| m.max(v.abs()));
        if scale == T::zero() && n > 0 {
            return None;
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&r1, &r2| a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap())
                .unwrap();
            if a[piv][col].abs() <= T::tol(1e-14) * scale {
                return None;
            }
            a.swap(col, piv);
            perm.swap(col, piv);
            for r in (col + 1)..n {
                let f = a[r][col] / a[col][col];
                a[r][col] = f;
                if f != T::zero() {
                    for c in (col + 1)..n {
                        let v = a[col][c];
                        a[r][c] = a[r][c] - f * v;
                    }
                }
            }
        }
        Some(Self { lu: a, perm })
    }

    /// Solves `B x = b`.
    fn solve(&self, b: &[T]) -> Vec<T> {
        let n = b.len();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            for c in 0..r {
                x[r] = x[r] - self.lu[r][c] * x[c];
            }
        }
        for r in (0..n).rev() {
            for c in (r + 1)..n {
                x[r] = x[r] - self.lu[r][c] * x[c];
            }
            x[r] = x[r] / self.lu[r][r];
        }
        x
    }

    /// Solves `Bᵀ x = c`.
    fn solve_transpose(&self, c: &[T]) -> Vec<T> {
        let n = c.len();
        let mut w = c.to_vec();
        for r in 0..n {
            for k in 0..r {
                w[r] = w[r] - self.lu[k][r] * w[k];
            }
            w[r] = w[r] / self.lu[r][r];
        }
        for r in (0..n).rev() {
            for k in (r + 1)..n {
                w[r] = w[r] - self.lu[k][r] * w[k];
            }
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[i];
        }
        x
    }
}

/// Working problem after row preprocessing, with artificial columns
/// `p..p+q` appended.
struct Tableau<T> {
    cols: Vec<Vec<T>>,
    g: Vec<T>,
    p: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl<T: Real> Tableau<T> {
    fn q(&self) -> usize {
        self.g.len()
    }

    fn factor(&self, basis: &[usize]) -> Result<Lu<T>> {
        let q = self.q();
        let mat = (0..q)
            .map(|r| basis.iter().map(|&j| self.cols[j][r]).collect())
            .collect();
        Lu::factor(mat).ok_or_else(|| Error::LpNumerical("singular basis".into()))
    }

    /// Primal simplex from a feasible `basis`, maximizing `cost` over the
    /// columns flagged in `allowed`.
    fn run(&self, cost: &[T], allowed: &[bool], basis: &mut [usize]) -> Result<Phase> {
        let q = self.q();
        let total = self.cols.len();
        let cscale = T::one() + cost.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        let opt_tol = T::tol(OPT_TOL) * cscale;
        let piv_tol = T::tol(PIVOT_TOL);
        let degenerate_limit = 3 * (self.p + q);
        let max_pivots = 200 * (self.p + q) + 1000;
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut in_basis = vec![false; total];
        basis.iter().for_each(|&j| in_basis[j] = true);

        for _ in 0..max_pivots {
            let lu = self.factor(basis)?;
            let xb = lu.solve(&self.g);
            let cb: Vec<T> = basis.iter().map(|&j| cost[j]).collect();
            let pi = lu.solve_transpose(&cb);

            let mut candidates: Vec<(usize, T)> = (0..total)
                .filter(|&j| allowed[j] && !in_basis[j])
                .map(|j| (j, cost[j] - linalg::dot(&pi, &self.cols[j])))
                .filter(|&(_, d)| d > opt_tol)
                .collect();
            if candidates.is_empty() {
                return Ok(Phase::Optimal);
            }
            if !bland {
                candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            }

            let mut chosen = None;
            let mut ambiguous = false;
            for &(j, _) in &candidates {
                let w = lu.solve(&self.cols[j]);
                let wmax = w.iter().fold(T::zero(), |m, &v| m.max(v));
                if wmax <= T::tol(1e-13) {
                    return Ok(Phase::Unbounded);
                }
                let mut best: Option<(usize, T)> = None;
                for r in 0..q {
                    if w[r] > piv_tol {
                        let ratio = xb[r].max(T::zero()) / w[r];
                        best = match best {
                            None => Some((r, ratio)),
                            Some((br, bt)) => {
                                let tie = (ratio - bt).abs() <= T::tol(1e-12) * (T::one() + bt);
                                let better = if tie {
                                    if bland {
                                        basis[r] < basis[br]
                                    } else {
                                        w[r] > w[br]
                                    }
                                } else {
                                    ratio < bt
                                };
                                if better { Some((r, ratio)) } else { Some((br, bt)) }
                            }
                        };
                    }
                }
                match best {
                    Some((r, t)) => {
                        chosen = Some((j, r, t));
                        break;
                    }
                    None => ambiguous = true,
                }
            }
            let Some((j, r, t)) = chosen else {
                debug_assert!(ambiguous);
                return Err(Error::LpNumerical(
                    "only pivots below tolerance remain".into(),
                ));
            };
            if t <= T::tol(DEGENERATE_STEP) {
                degenerate += 1;
                if degenerate >= degenerate_limit {
                    bland = true;
                }
            }
            in_basis[basis[r]] = false;
            in_basis[j] = true;
            basis[r] = j;
        }
        Err(Error::LpNumerical("pivot limit exceeded".into()))
    }
}

/// Rows kept after removing linear dependence, and which original rows were
/// sign-flipped. Returns `None` if a dependent row is inconsistent.
fn independent_rows<T: Real>(e: &[Vec<T>], g: &[T]) -> Option<Vec<usize>> {
    let tol = T::tol(ROW_RANK_TOL);
    let mut basis_e: Vec<Vec<T>> = Vec::new();
    let mut basis_aug: Vec<Vec<T>> = Vec::new();
    let mut kept = Vec::new();
    let gscale = T::one() + linalg::norm_inf(g);
    for (i, row) in e.iter().enumerate() {
        let rn = linalg::norm(row);
        let mut aug = row.clone();
        aug.push(g[i] / gscale);
        let res_e = linalg::project_out(&basis_e, &linalg::project_out(&basis_e, row));
        let ne = linalg::norm(&res_e);
        if ne > tol * (T::one() + rn) {
            basis_e.push(linalg::scale(&res_e, T::one() / ne));
            let res_a = linalg::project_out(&basis_aug, &linalg::project_out(&basis_aug, &aug));
            let na = linalg::norm(&res_a);
            basis_aug.push(linalg::scale(&res_a, T::one() / na));
            kept.push(i);
        } else {
            let res_a = linalg::project_out(&basis_aug, &linalg::project_out(&basis_aug, &aug));
            if linalg::norm(&res_a) > T::tol(FEAS_TOL) * (T::one() + rn) {
                return None;
            }
        }
    }
    Some(kept)
}

/// Solves `max ⟨c, z⟩ s.t. Ez = g, z ≥ 0`.
pub fn solve_lp<T: Real>(prob: &LpProblem<T>) -> Result<LpSolution<T>> {
    let p = prob.c.len();
    if prob.e.len() != prob.g.len() || prob.e.iter().any(|r| r.len() != p) || p == 0 {
        return Err(Error::Dimension("LP data have inconsistent sizes".into()));
    }
    let finite = prob.c.iter().chain(prob.g.iter()).chain(prob.e.iter().flatten()).all(|v| v.is_finite());
    if !finite {
        return Err(Error::InvalidParameter("LP data must be finite".into()));
    }

    let Some(kept) = independent_rows(&prob.e, &prob.g) else {
        return Ok(LpSolution::without_point(LpStatus::Infeasible));
    };
    let q = kept.len();
    let flip: Vec<bool> = kept.iter().map(|&i| prob.g[i] < T::zero()).collect();
    let sign = |r: usize| if flip[r] { -T::one() } else { T::one() };
    let g: Vec<T> = kept.iter().enumerate().map(|(r, &i)| prob.g[i] * sign(r)).collect();
    let mut cols: Vec<Vec<T>> = (0..p)
        .map(|j| kept.iter().enumerate().map(|(r, &i)| prob.e[i][j] * sign(r)).collect())
        .collect();
    for r in 0..q {
        let mut a = vec![T::zero(); q];
        a[r] = T::one();
        cols.push(a);
    }
    let tab = Tableau { cols, g, p };
    let gscale = T::one() + linalg::norm_inf(&prob.g);

    // phase 1
    let mut basis: Vec<usize> = (p..p + q).collect();
    let mut cost1 = vec![T::zero(); p + q];
    cost1[p..].iter_mut().for_each(|c| *c = -T::one());
    let all = vec![true; p + q];
    tab.run(&cost1, &all, &mut basis)?;
    let lu = tab.factor(&basis)?;
    let xb = lu.solve(&tab.g);
    let infeas: T = basis
        .iter()
        .zip(&xb)
        .filter(|(&j, _)| j >= p)
        .map(|(_, &v)| v.max(T::zero()))
        .sum();
    if infeas > T::tol(FEAS_TOL) * gscale {
        return Ok(LpSolution::without_point(LpStatus::Infeasible));
    }

    // pivot remaining (zero-level) artificials out of the basis
    for r in 0..q {
        if basis[r] < p {
            continue;
        }
        let lu = tab.factor(&basis)?;
        let mut best: Option<(usize, T)> = None;
        for j in 0..p {
            if basis.contains(&j) {
                continue;
            }
            let w = lu.solve(&tab.cols[j]);
            if best.is_none_or(|(_, bw)| w[r].abs() > bw) {
                best = Some((j, w[r].abs()));
            }
        }
        match best {
            Some((j, w)) if w > T::tol(PIVOT_TOL) => basis[r] = j,
            _ => return Err(Error::LpNumerical("cannot remove artificial variable".into())),
        }
    }

    // phase 2
    let mut cost2 = prob.c.clone();
    cost2.extend(std::iter::repeat_n(T::zero(), q));
    let mut allowed = vec![true; p];
    allowed.extend(std::iter::repeat_n(false, q));
    if let Phase::Unbounded = tab.run(&cost2, &allowed, &mut basis)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded));
    }

    let lu = tab.factor(&basis)?;
    let xb = lu.solve(&tab.g);
    let mut z = vec![T::zero(); p];
    for (&j, &v) in basis.iter().zip(&xb) {
        if v < -T::tol(FEAS_TOL) * gscale {
            return Err(Error::LpNumerical(format!("basic variable {j} is negative ({v})")));
        }
        z[j] = v.max(T::zero());
    }
    let cb: Vec<T> = basis.iter().map(|&j| cost2[j]).collect();
    let pi = lu.solve_transpose(&cb);
    let mut dual = vec![T::zero(); prob.e.len()];
    for (r, &i) in kept.iter().enumerate() {
        dual[i] = pi[r] * sign(r);
    }

    let residual = prob
        .e
        .iter()
        .zip(&prob.g)
        .map(|(row, &gi)| (linalg::dot(row, &z) - gi).abs())
        .fold(T::zero(), T::max);
    if residual > T::tol(FEAS_TOL) * gscale {
        return Err(Error::LpNumerical(format!("equality residual {residual} too large")));
    }
    let value = linalg::dot(&prob.c, &z);
    Ok(LpSolution { status: LpStatus::Optimal, z, value, basis, dual })
}
