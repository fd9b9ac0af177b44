use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::linalg;
use crate::simplexlp::{solve_lp, LpProblem, LpStatus};
use crate::Real;

/// `max x_i` above this value puts `i` in `B`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// The canonical split `B ∪ N` of column indices (0-based): `A_B x_B = 0`
/// has a strictly positive solution and some `y` has `A_Nᵀy > 0`,
/// `A_Bᵀy = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T> {
    pub b: Vec<usize>,
    pub n: Vec<usize>,
    /// `x ∈ Δ` with `Ax = 0` and `x_i > 0` exactly on `B`.
    pub interior_witness: Option<Vec<T>>,
    /// Unit `y` with `A_Nᵀy > 0` and `A_Bᵀy = 0`.
    pub dual_witness: Option<Vec<T>>,
}

fn membership_lp<T: Real>(inst: &Instance<T>, i: usize) -> LpProblem<T> {
    let (m, n) = (inst.m(), inst.n());
    let mut e: Vec<Vec<T>> = (0..m)
        .map(|r| (0..n).map(|j| inst.column(j)[r]).collect())
        .collect();
    e.push(vec![T::one(); n]);
    let mut g = vec![T::zero(); m];
    g.push(T::one());
    let mut c = vec![T::zero(); n];
    c[i] = T::one();
    LpProblem { c, e, g }
}

/// `max t` s.t. `⟨a_i, y⟩ ≥ t (i ∈ N)`, `A_Bᵀy = 0`, `‖y‖∞ ≤ 1`, with
/// `y = y⁺ − y⁻`.
fn dual_witness<T: Real>(inst: &Instance<T>, b: &[usize], nset: &[usize]) -> Result<Vec<T>> {
    let m = inst.m();
    let nn = nset.len();
    // variables: y⁺ (m) | y⁻ (m) | t | s (nn) | p (m) | q (m)
    let p = 2 * m + 1 + nn + 2 * m;
    let t_idx = 2 * m;
    let mut e = Vec::new();
    let mut g = Vec::new();
    for (r, &i) in nset.iter().enumerate() {
        let mut row = vec![T::zero(); p];
        for k in 0..m {
            row[k] = inst.column(i)[k];
            row[m + k] = -inst.column(i)[k];
        }
        row[t_idx] = -T::one();
        row[t_idx + 1 + r] = -T::one();
        e.push(row);
        g.push(T::zero());
    }
    for &i in b {
        let mut row = vec![T::zero(); p];
        for k in 0..m {
            row[k] = inst.column(i)[k];
            row[m + k] = -inst.column(i)[k];
        }
        e.push(row);
        g.push(T::zero());
    }
    let base = t_idx + 1 + nn;
    for k in 0..2 * m {
        let mut row = vec![T::zero(); p];
        row[k] = T::one();
        row[base + k] = T::one();
        e.push(row);
        g.push(T::one());
    }
    let mut c = vec![T::zero(); p];
    c[t_idx] = T::one();
    let sol = solve_lp(&LpProblem { c, e, g })?;
    if sol.status != LpStatus::Optimal || !(sol.value > T::tol(MEMBERSHIP_TOL)) {
        return Err(Error::LpNumerical(format!(
            "dual witness LP returned {:?} with value {}",
            sol.status, sol.value
        )));
    }
    let y: Vec<T> = (0..m).map(|k| sol.z[k] - sol.z[m + k]).collect();
    let ny = linalg::norm(&y);
    let y = linalg::scale(&y, T::one() / ny);
    let tol = T::tol(MEMBERSHIP_TOL);
    let min_n = nset
        .iter()
        .map(|&i| linalg::dot(inst.column(i), &y))
        .fold(T::infinity(), T::min);
    let max_b = b
        .iter()
        .map(|&i| linalg::dot(inst.column(i), &y).abs())
        .fold(T::zero(), T::max);
    if !(min_n >= tol) || max_b > tol * (T::one() + inst.norm_max()) {
        return Err(Error::LpNumerical(format!(
            "dual witness fails verification (min over N {min_n}, max over B {max_b})"
        )));
    }
    Ok(y)
}

/// Computes the canonical partition by one membership LP per undecided
/// index, `max { x_i : Ax = 0, Σx = 1, x ≥ 0 }`.
pub fn canonical_partition<T: Real>(inst: &Instance<T>) -> Result<Partition<T>> {
    let n = inst.n();
    let tol = T::tol(MEMBERSHIP_TOL);
    let mut in_b = vec![false; n];
    let mut decided = vec![false; n];
    let mut maximizers: Vec<Vec<T>> = Vec::new();
    for i in 0..n {
        if decided[i] {
            continue;
        }
        let sol = solve_lp(&membership_lp(inst, i))?;
        match sol.status {
            LpStatus::Infeasible => {
                decided.iter_mut().for_each(|d| *d = true);
                break;
            }
            LpStatus::Unbounded => {
                return Err(Error::LpNumerical("membership LP reported unbounded".into()))
            }
            LpStatus::Optimal => {
                decided[i] = true;
                if sol.value > tol {
                    for (k, &zk) in sol.z.iter().enumerate() {
                        if zk > tol {
                            in_b[k] = true;
                            decided[k] = true;
                        }
                    }
                    in_b[i] = true;
                    maximizers.push(sol.z);
                }
            }
        }
    }
    let b: Vec<usize> = (0..n).filter(|&i| in_b[i]).collect();
    let nset: Vec<usize> = (0..n).filter(|&i| !in_b[i]).collect();
    let interior_witness = (!maximizers.is_empty()).then(|| {
        let inv = T::one() / T::lit(maximizers.len() as f64);
        let mut avg = vec![T::zero(); n];
        for z in &maximizers {
            linalg::axpy(inv, z, &mut avg);
        }
        for (k, v) in avg.iter_mut().enumerate() {
            if !in_b[k] {
                *v = T::zero();
            }
        }
        avg
    });
    let dual_witness = if nset.is_empty() {
        None
    } else {
        Some(dual_witness(inst, &b, &nset)?)
    };
    Ok(Partition { b, n: nset, interior_witness, dual_witness })
}
