use crate::error::{Error, Result};
use crate::linalg;
use crate::Real;

/// Symmetric tolerance for `Q` (elementwise).
pub const SYMMETRY_TOL: f64 = 1e-12;

/// `f(y) = ½⟨y, Qy⟩ + ⟨b, y⟩` with `Q` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective<T> {
    q: Vec<Vec<T>>,
    b: Vec<T>,
    factor: Vec<Vec<T>>,
}

impl<T: Real> QuadraticObjective<T> {
    /// `q` is given row-major.
    pub fn new(q: Vec<Vec<T>>, b: Vec<T>) -> Result<Self> {
        let m = b.len();
        if m == 0 || q.len() != m || q.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!(
                "Q must be {m}×{m} to match b of length {m}"
            )));
        }
        let tol = T::tol(SYMMETRY_TOL);
        for i in 0..m {
            for j in (i + 1)..m {
                if (q[i][j] - q[j][i]).abs() > tol {
                    return Err(Error::InvalidObjective(format!(
                        "Q is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let factor = linalg::cholesky_upper(&q)
            .ok_or_else(|| Error::InvalidObjective("Q is not positive definite".into()))?;
        Ok(Self { q, b, factor })
    }

    /// `Q = I`, `b = 0`, i.e. `f(y) = ½‖y‖²`.
    pub fn identity(m: usize) -> Self {
        let q = (0..m)
            .map(|i| (0..m).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::new(q, vec![T::zero(); m]).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn q(&self) -> &[Vec<T>] {
        &self.q
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    /// Upper-triangular Cholesky factor `M` with `MᵀM = Q`.
    pub fn factor(&self) -> &[Vec<T>] {
        &self.factor
    }

    pub fn value(&self, y: &[T]) -> T {
        let qy = linalg::mat_vec(&self.q, y);
        T::lit(0.5) * linalg::dot(y, &qy) + linalg::dot(&self.b, y)
    }

    /// `∇f(y) = Qy + b`.
    pub fn gradient(&self, y: &[T]) -> Vec<T> {
        linalg::add(&linalg::mat_vec(&self.q, y), &self.b)
    }

    /// `⟨a, Qa⟩`.
    pub fn curvature(&self, a: &[T]) -> T {
        linalg::dot(a, &linalg::mat_vec(&self.q, a))
    }

    /// `M v` with the Cholesky factor.
    pub fn apply_factor(&self, v: &[T]) -> Vec<T> {
        linalg::mat_vec(&self.factor, v)
    }
}
