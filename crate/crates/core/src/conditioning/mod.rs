//! Condition measures of a column matrix `A`.
//!
//! * [`rho`]: signed distance from the origin to the boundary of `conv(A)`
//!   (positive iff the origin lies outside).
//! * [`canonical_partition`]: the split `B ∪ N` of column indices.
//! * [`rho_b`], [`rho_n`]: the inscribed radius of `conv(A_B)` inside
//!   `L = span(A_B)` and the distance of `conv(A_N)` projected onto `L⊥`.
//! * [`phi_at`], [`phi_estimate`], [`w_estimate`]: restricted and relative
//!   widths. The estimates are minima over finite samples and therefore
//!   upper bounds; [`theorem3_bound`] supplies the certified lower bound.
//! * [`diameter`], [`transform_instance`]: quantities for the quadratic
//!   solver's rate.
//! * [`condition_report`]: everything above with cross-checks.

mod minnorm;
mod partition;
mod radius;
mod report;
mod width;

pub use minnorm::min_norm_point;
pub use partition::{canonical_partition, Partition, MEMBERSHIP_TOL};
pub use radius::{inscribed_radius, MAX_RADIUS_DIM};
pub use report::{condition_report, ConditionReport, Flags, PartitionReport};
pub use width::{
    diameter, phi_at, phi_estimate, transform_instance, w_at, w_estimate, PhiCertificate,
};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::linalg;
use crate::Real;

/// Relative threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-9;
/// Optimality tolerance passed to [`min_norm_point`].
pub const MIN_NORM_TOL: f64 = 1e-10;

/// Orthonormal basis of `L = span{a_i : i ∈ B}`.
pub fn l_basis<T: Real>(inst: &Instance<T>, part: &Partition<T>) -> Vec<Vec<T>> {
    let cols: Vec<Vec<T>> = part.b.iter().map(|&i| inst.column(i).to_vec()).collect();
    linalg::orthonormal_basis(&cols, T::tol(RANK_TOL))
}

/// `ρ(A)`, computing the partition on the way.
pub fn rho<T: Real>(inst: &Instance<T>) -> Result<T> {
    rho_with_partition(inst, &canonical_partition(inst)?)
}

/// `ρ(A)` given its partition:
/// `‖min-norm point‖` when `B = ∅`, `−(inscribed radius)` when the origin is
/// interior, and `0` otherwise.
pub fn rho_with_partition<T: Real>(inst: &Instance<T>, part: &Partition<T>) -> Result<T> {
    if part.b.is_empty() {
        return Ok(min_norm_point(inst.columns(), T::tol(MIN_NORM_TOL))?.1);
    }
    let rank = linalg::orthonormal_basis(inst.columns(), T::tol(RANK_TOL)).len();
    if !part.n.is_empty() || rank < inst.m() {
        return Ok(T::zero());
    }
    Ok(-inscribed_radius(inst.columns())?)
}

/// `ρ_B(A)`: minus the inscribed radius of `conv(A_B)` relative to `L`.
/// `None` when `B = ∅` or `L = {0}`.
pub fn rho_b<T: Real>(inst: &Instance<T>, part: &Partition<T>) -> Result<Option<T>> {
    if part.b.is_empty() {
        return Ok(None);
    }
    let basis = l_basis(inst, part);
    if basis.is_empty() {
        return Ok(None);
    }
    if basis.len() > MAX_RADIUS_DIM {
        return Err(Error::Unsupported(format!(
            "dim L = {} exceeds {MAX_RADIUS_DIM}",
            basis.len()
        )));
    }
    let coords: Vec<Vec<T>> = part
        .b
        .iter()
        .map(|&i| linalg::coordinates(&basis, inst.column(i)))
        .collect();
    Ok(Some(-inscribed_radius(&coords)?))
}

/// `ρ_N(A)`: norm of the min-norm point of `{P a_i : i ∈ N}`, `P` the
/// projector onto `L⊥`. `None` when `N = ∅`.
pub fn rho_n<T: Real>(inst: &Instance<T>, part: &Partition<T>) -> Result<Option<T>> {
    if part.n.is_empty() {
        return Ok(None);
    }
    let basis = l_basis(inst, part);
    let projected: Vec<Vec<T>> = part
        .n
        .iter()
        .map(|&i| linalg::project_out(&basis, inst.column(i)))
        .collect();
    Ok(Some(min_norm_point(&projected, T::tol(MIN_NORM_TOL))?.1))
}

/// Which case of the lower bound on `φ(A)` applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem3Case {
    /// `N = ∅`: bound `|ρ_B|`.
    A,
    /// `B = ∅`: bound `ρ_N`, valid for `[A 0]` only.
    B,
    /// `B ≠ ∅`, `L = {0}`: bound `ρ_N`.
    C,
    /// `N ≠ ∅`, `L ≠ {0}`: bound `|ρ_B| ρ_N / √(‖A‖² + ρ_N²)`.
    D,
}

impl Theorem3Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Theorem3Case::A => "a",
            Theorem3Case::B => "b",
            Theorem3Case::C => "c",
            Theorem3Case::D => "d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem3Bound<T> {
    pub value: T,
    pub case: Theorem3Case,
}

impl<T> Theorem3Bound<T> {
    /// Case (b) bounds the width of the matrix with an appended zero column,
    /// not of `A` itself.
    pub fn augmented_only(&self) -> bool {
        self.case == Theorem3Case::B
    }
}

/// Certified lower bound on `φ(A)` from the partition and `ρ_B`, `ρ_N`.
pub fn theorem3_bound<T: Real>(
    inst: &Instance<T>,
    part: &Partition<T>,
    rho_b: Option<T>,
    rho_n: Option<T>,
) -> Result<Theorem3Bound<T>> {
    let need = |v: Option<T>, name: &str| {
        v.ok_or_else(|| Error::InvalidParameter(format!("{name} is required for this case")))
    };
    if part.b.is_empty() {
        return Ok(Theorem3Bound { value: need(rho_n, "rho_N")?, case: Theorem3Case::B });
    }
    let l_trivial = l_basis(inst, part).is_empty();
    if part.n.is_empty() {
        if l_trivial {
            return Err(Error::InvalidParameter("N = ∅ requires L ≠ {0}".into()));
        }
        return Ok(Theorem3Bound { value: need(rho_b, "rho_B")?.abs(), case: Theorem3Case::A });
    }
    if l_trivial {
        return Ok(Theorem3Bound { value: need(rho_n, "rho_N")?, case: Theorem3Case::C });
    }
    let rb = need(rho_b, "rho_B")?.abs();
    let rn = need(rho_n, "rho_N")?;
    let na = inst.norm_max();
    Ok(Theorem3Bound {
        value: rb * rn / (na * na + rn * rn).sqrt(),
        case: Theorem3Case::D,
    })
}
