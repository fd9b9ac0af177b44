use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::linalg;
use crate::Real;

/// Tolerance on `|Σx − 1|` when accepting caller-supplied weights.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// A point of the standard simplex with its support and cached image `y = Ax`.
///
/// Entries removed by drop steps are stored as exact zeros, so `support`
/// always equals `{ i : x_i > 0 }`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexIterate<T> {
    x: Vec<T>,
    support: Vec<usize>,
    y: Vec<T>,
}

impl<T: Real> SimplexIterate<T> {
    /// The vertex `e_j` (0-based `j`).
    pub fn vertex(inst: &Instance<T>, j: usize) -> Result<Self> {
        if j >= inst.n() {
            return Err(Error::InvalidIterate(format!(
                "vertex index {} out of range 1..={}",
                j + 1,
                inst.n()
            )));
        }
        let mut x = vec![T::zero(); inst.n()];
        x[j] = T::one();
        Ok(Self {
            x,
            support: vec![j],
            y: inst.column(j).to_vec(),
        })
    }

    pub fn from_weights(inst: &Instance<T>, x: Vec<T>) -> Result<Self> {
        if x.len() != inst.n() {
            return Err(Error::Dimension(format!(
                "weight vector has length {}, expected {}",
                x.len(),
                inst.n()
            )));
        }
        if x.iter().any(|&v| !(v >= T::zero()) || !v.is_finite()) {
            return Err(Error::InvalidIterate("weights must be finite and nonnegative".into()));
        }
        let total: T = x.iter().copied().sum();
        if (total - T::one()).abs() > T::tol(SIMPLEX_TOL) {
            return Err(Error::InvalidIterate(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let support = (0..x.len()).filter(|&i| x[i] > T::zero()).collect();
        let y = inst.apply(&x);
        Ok(Self { x, support, y })
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    pub fn weight(&self, i: usize) -> T {
        self.x[i]
    }

    pub fn is_vertex(&self) -> bool {
        self.support.len() == 1
    }

    /// `x ← (1 − θ)x + θ e_j`, `y ← y + θ a` with `a = a_j − y`.
    pub(crate) fn regular_update(&mut self, j: usize, theta: T, dir: &[T], inst: &Instance<T>) {
        if theta >= T::one() {
            self.x.iter_mut().for_each(|v| *v = T::zero());
            self.x[j] = T::one();
            self.support = vec![j];
            self.y = inst.column(j).to_vec();
            return;
        }
        let keep = T::one() - theta;
        for v in self.x.iter_mut() {
            *v = *v * keep;
        }
        self.x[j] = self.x[j] + theta;
        linalg::axpy(theta, dir, &mut self.y);
        self.rebuild_support();
    }

    /// `x ← x + θ (x − e_ℓ)`, `y ← y + θ a` with `a = y − a_ℓ`. A drop step
    /// writes an exact zero into `x_ℓ`.
    pub(crate) fn away_update(&mut self, l: usize, theta: T, drop: bool, dir: &[T]) {
        let grow = T::one() + theta;
        for v in self.x.iter_mut() {
            *v = *v * grow;
        }
        if drop {
            self.x[l] = T::zero();
        } else {
            self.x[l] = self.x[l] - theta;
            if self.x[l] < T::zero() {
                self.x[l] = T::zero();
            }
        }
        linalg::axpy(theta, dir, &mut self.y);
        self.rebuild_support();
    }

    fn rebuild_support(&mut self) {
        self.support.clear();
        self.support
            .extend((0..self.x.len()).filter(|&i| self.x[i] > T::zero()));
    }

    /// Recomputes `y = Ax` from scratch and rescales `x` onto `Σx = 1`.
    pub fn refresh(&mut self, inst: &Instance<T>) {
        let total: T = self.x.iter().copied().sum();
        if total > T::zero() && total != T::one() {
            for v in self.x.iter_mut() {
                *v = *v / total;
            }
        }
        self.y = inst.apply(&self.x);
    }

    /// Largest violation among the simplex, support and cache invariants;
    /// returns `(|Σx − 1|, ‖y − Ax‖)` after checking `x ≥ 0` and the support.
    pub fn audit(&self, inst: &Instance<T>) -> Result<(T, T)> {
        if self.x.iter().any(|&v| v < T::zero()) {
            return Err(Error::InvalidIterate("negative weight".into()));
        }
        let expected: Vec<usize> = (0..self.x.len()).filter(|&i| self.x[i] > T::zero()).collect();
        if expected != self.support {
            return Err(Error::InvalidIterate("support out of sync with weights".into()));
        }
        let total: T = self.x.iter().copied().sum();
        let drift = linalg::norm(&linalg::sub(&self.y, &inst.apply(&self.x)));
        Ok(((total - T::one()).abs(), drift))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::make_figure1;

    #[test]
    fn vertex_and_weights() {
        let inst = make_figure1::<f64>();
        let v = SimplexIterate::vertex(&inst, 0).unwrap();
        assert_eq!(v.y(), &[1.0, 0.0]);
        assert!(v.is_vertex());
        let w = SimplexIterate::from_weights(&inst, vec![0.0, 0.5, 0.5]).unwrap();
        assert_eq!(w.support(), &[1, 2]);
        assert_eq!(w.y(), &[0.0, 0.0]);
        assert!(SimplexIterate::from_weights(&inst, vec![0.5, 0.4, 0.0]).is_err());
        assert!(SimplexIterate::from_weights(&inst, vec![1.5, -0.5, 0.0]).is_err());
        assert!(SimplexIterate::vertex(&inst, 3).is_err());
    }

    #[test]
    fn drop_writes_exact_zero() {
        let inst = make_figure1::<f64>();
        let mut it = SimplexIterate::from_weights(&inst, vec![0.2, 0.8, 0.0]).unwrap();
        let dir = linalg::sub(it.y(), inst.column(0));
        it.away_update(0, 0.25, true, &dir);
        assert_eq!(it.x(), &[0.0, 1.0, 0.0]);
        assert_eq!(it.support(), &[1]);
        let (sum_err, drift) = it.audit(&inst).unwrap();
        assert!(sum_err < 1e-15 && drift < 1e-15);
    }
}
