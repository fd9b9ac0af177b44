//! Named instances and seeded random families.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::conditioning::canonical_partition;
use crate::error::{Error, Result};
use crate::instance::{Instance, QuadraticObjective};
use crate::linalg;
use crate::Real;

fn from_rows<T: Real>(rows: &[Vec<f64>]) -> Vec<Vec<T>> {
    let n = rows[0].len();
    (0..n)
        .map(|j| rows.iter().map(|r| T::lit(r[j])).collect())
        .collect()
}

/// `A = [1 0 0; 0 −1 1]`, the zig-zag example.
pub fn make_figure1<T: Real>() -> Instance<T> {
    Instance::new(from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, -1.0, 1.0]]))
        .expect("static instance")
        .with_label("figure1")
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must lie in (0, 1)")))
    }
}

/// The three small worked examples (one per partition case). Each comes
/// with its distinguished weight vector attached as a reference point.
/// Example 2 is returned with an appended zero column.
pub fn make_example<T: Real>(which: u8, eps: f64, delta: f64) -> Result<Instance<T>> {
    check_unit_interval("delta", delta)?;
    let (rows, xbar): (Vec<Vec<f64>>, Vec<f64>) = match which {
        1 => {
            check_unit_interval("eps", eps)?;
            let ed = eps * delta;
            (
                vec![
                    vec![-1.0, 1.0, -1.0, 1.0, -1.0, 1.0],
                    vec![-eps, -eps, eps, eps, ed, ed],
                ],
                vec![0.0, 0.0, 0.0, 0.0, 0.5, 0.5],
            )
        }
        2 => (
            vec![vec![1.0, -1.0, 0.0], vec![delta, delta, 0.0]],
            vec![0.5, 0.5, 0.0],
        ),
        3 => {
            check_unit_interval("eps", eps)?;
            let h = 1.0 / (2.0 * (1.0 + eps));
            (
                vec![
                    vec![-1.0, 1.0, -1.0, 1.0, 0.0, 0.0],
                    vec![-eps, -eps, eps, eps, 1.0, -1.0],
                    vec![0.0, 0.0, 0.0, 0.0, delta, delta],
                ],
                vec![0.0, 0.0, h, h, 0.0, eps / (1.0 + eps)],
            )
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "example {other} does not exist (expected 1, 2 or 3)"
            )))
        }
    };
    Instance::new(from_rows(&rows))?
        .with_label(format!("example{which}"))
        .with_reference_point(xbar.iter().map(|&v| T::lit(v)).collect())
}

/// Where the origin sits relative to `conv(A)` in a random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RandomMode {
    Interior,
    Boundary,
    Infeasible,
}

impl FromStr for RandomMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior" => Ok(Self::Interior),
            "boundary" => Ok(Self::Boundary),
            "infeasible" => Ok(Self::Infeasible),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for RandomMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Interior => "interior",
            Self::Boundary => "boundary",
            Self::Infeasible => "infeasible",
        })
    }
}

const INTERIOR_RETRIES: usize = 100;

fn gaussian(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.sample(StandardNormal)).collect()
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = linalg::norm(&v);
    linalg::scale(&v, 1.0 / n)
}

fn random_unit(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    loop {
        let g = gaussian(rng, m);
        if linalg::norm(&g) > 1e-3 {
            return unit(g);
        }
    }
}

fn interior_columns(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<Vec<Vec<f64>>> {
    for _ in 0..INTERIOR_RETRIES {
        let mut cols = Vec::with_capacity(n);
        for k in 0..m {
            let mut v = linalg::scale(&gaussian(rng, m), 0.3);
            v[k] += 1.0;
            cols.push(unit(v));
        }
        let mut v = linalg::scale(&gaussian(rng, m), 0.3);
        let c = -1.0 / (m as f64).sqrt();
        v.iter_mut().for_each(|e| *e += c);
        cols.push(unit(v));
        while cols.len() < n {
            cols.push(random_unit(rng, m));
        }
        cols.shuffle(rng);

        let inst = Instance::<f64>::new(cols.clone())?;
        let part = canonical_partition(&inst)?;
        let rank = linalg::orthonormal_basis(&cols, 1e-9).len();
        if part.n.is_empty() && rank == m {
            return Ok(cols);
        }
    }
    Err(Error::NoConvergence(format!(
        "no interior instance verified after {INTERIOR_RETRIES} attempts"
    )))
}

/// Seeded random instance with unit columns.
///
/// * `Interior`: `0 ∈ int conv(A)`, verified through the canonical partition.
/// * `Infeasible`: every column has first coordinate ≥ 0.5, so `e_1`
///   separates the origin from the hull.
/// * `Boundary`: an interior instance in the first `m − 1` coordinates plus
///   the column `e_m`.
pub fn random_instance<T: Real>(m: usize, n: usize, seed: u64, mode: RandomMode) -> Result<Instance<T>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols: Vec<Vec<f64>> = match mode {
        RandomMode::Infeasible => (0..n)
            .map(|_| {
                let first: f64 = rng.random_range(0.5..=1.0);
                let mut v = vec![first; 1];
                if m > 1 {
                    let rest = random_unit(&mut rng, m - 1);
                    let r = (1.0 - first * first).max(0.0).sqrt();
                    v.extend(rest.iter().map(|&e| e * r));
                }
                unit(v)
            })
            .collect(),
        RandomMode::Interior => {
            if n < m + 1 {
                return Err(Error::InvalidParameter(format!(
                    "interior mode needs n ≥ m + 1 (got m = {m}, n = {n})"
                )));
            }
            interior_columns(&mut rng, m, n)?
        }
        RandomMode::Boundary => {
            if m < 2 || n < m + 1 {
                return Err(Error::InvalidParameter(format!(
                    "boundary mode needs m ≥ 2 and n ≥ m + 1 (got m = {m}, n = {n})"
                )));
            }
            let mut cols: Vec<Vec<f64>> = interior_columns(&mut rng, m - 1, n - 1)?
                .into_iter()
                .map(|mut c| {
                    c.push(0.0);
                    c
                })
                .collect();
            let mut extra = vec![0.0; m];
            extra[m - 1] = 1.0;
            cols.push(extra);
            cols
        }
    };
    let cols = cols
        .into_iter()
        .map(|c| c.into_iter().map(T::lit).collect())
        .collect();
    Ok(Instance::new(cols)?.with_label(format!("random-{mode}-m{m}-n{n}-s{seed}")))
}

/// Seeded positive-definite objective: `Q = GᵀG/m + I/2` and `b` with
/// standard normal entries, `G` an `m × m` standard normal matrix.
pub fn random_objective<T: Real>(m: usize, seed: u64) -> Result<QuadraticObjective<T>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<Vec<f64>> = (0..m).map(|_| gaussian(&mut rng, m)).collect();
    let q: Vec<Vec<T>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let gg: f64 = (0..m).map(|k| g[k][i] * g[k][j]).sum::<f64>() / m as f64;
                    T::lit(gg + if i == j { 0.5 } else { 0.0 })
                })
                .collect()
        })
        .collect();
    let b = gaussian(&mut rng, m).into_iter().map(T::lit).collect();
    QuadraticObjective::new(q, b)
}
