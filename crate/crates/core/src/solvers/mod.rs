//! Von Neumann, von Neumann with away steps, and Frank-Wolfe with away
//! steps over `conv(A)`.
//!
//! Every solver starts from a simplex iterate, logs one [`StepRecord`] per
//! step and stops on its own criterion:
//!
//! * feasibility solvers (`vn_run`, `vn_away_run`): `‖y_k‖ ≤ eps`, or a
//!   separating vector `y_k` with `Aᵀy_k > 0`;
//! * `fw_away_run`: Frank-Wolfe gap `⟨y_k − a_j, ∇f(y_k)⟩ ≤ gap_tol`.
//!
//! Ties in every argmin/argmax go to the lowest index.

mod away;
mod trace;
mod vn;

pub use away::{fw_away_run, fw_away_step, fw_gap, vn_away_run, vn_away_step};
pub use trace::{write_trace_csv, trace_csv_header};
pub use vn::{vn_run, vn_step};

use crate::error::{Error, Result};
use crate::instance::{Instance, QuadraticObjective, SimplexIterate};
use crate::linalg;
use crate::Real;

/// `y` is recomputed from `x` after this many steps.
pub const REFRESH_EVERY: usize = 100;

/// Default stopping tolerance for the feasibility solvers.
pub const DEFAULT_EPS: f64 = 1e-8;

/// Relative margin for the strict test `Aᵀy > 0`.
pub const CERT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Regular,
    Away,
    /// An away step that reached `θ_max` and removed an index from the support.
    Drop,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Regular => "regular",
            StepKind::Away => "away",
            StepKind::Drop => "drop",
        }
    }
}

/// One step of a solver, from iterate `k − 1` to iterate `k`.
///
/// `obj` and `support_size` describe the iterate reached by the step:
/// `obj` is `‖y_k‖²` for the feasibility solvers and `f(y_k)` for the
/// quadratic solver. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord<T> {
    pub k: usize,
    pub kind: StepKind,
    pub j: Option<usize>,
    pub l: Option<usize>,
    pub theta: T,
    pub theta_max: T,
    pub obj: T,
    pub support_size: usize,
    pub y_snapshot: Option<Vec<T>>,
}

impl<T> StepRecord<T> {
    /// Steps that are not drop steps carry the per-step contraction
    /// guarantee.
    pub fn is_drop(&self) -> bool {
        self.kind == StepKind::Drop
    }
}

/// Per-step log of a run plus the starting objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<T> {
    pub initial_obj: T,
    pub initial_support: usize,
    pub initial_y: Vec<T>,
    pub steps: Vec<StepRecord<T>>,
    /// Visited iterates `x_0, x_1, …`; empty unless requested.
    pub path: Vec<SimplexIterate<T>>,
}

impl<T: Real> Trace<T> {
    fn start(it: &SimplexIterate<T>, obj: T, record_path: bool) -> Self {
        Self {
            initial_obj: obj,
            initial_support: it.support().len(),
            initial_y: it.y().to_vec(),
            steps: Vec::new(),
            path: if record_path { vec![it.clone()] } else { Vec::new() },
        }
    }

    /// Objective of every iterate, starting with `x_0`.
    pub fn objectives(&self) -> Vec<T> {
        std::iter::once(self.initial_obj)
            .chain(self.steps.iter().map(|s| s.obj))
            .collect()
    }

    /// Largest `#drop − #non-drop` over all prefixes (≤ 0 expected).
    pub fn max_drop_surplus(&self) -> isize {
        let mut surplus = 0isize;
        let mut worst = 0isize;
        for s in &self.steps {
            surplus += if s.is_drop() { 1 } else { -1 };
            worst = worst.max(surplus);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunStatus {
    Converged,
    InfeasibleCertificate,
    IterationLimit,
    /// No descent direction exists but the stopping rule is not met; only
    /// reachable through rounding at tolerances below machine precision.
    Stalled,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::InfeasibleCertificate => "infeasible_certificate",
            RunStatus::IterationLimit => "iteration_limit",
            RunStatus::Stalled => "stalled",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult<T> {
    pub status: RunStatus,
    pub iterate: SimplexIterate<T>,
    /// `y` with `Aᵀy > 0`, present iff `status` is `InfeasibleCertificate`.
    pub certificate: Option<Vec<T>>,
    pub trace: Trace<T>,
    pub iterations: usize,
    /// Frank-Wolfe gap at the final iterate (quadratic solver only).
    pub final_gap: Option<T>,
    pub warnings: Vec<String>,
}

/// Stopping and logging options shared by all solvers.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions<T> {
    /// `eps` for the feasibility solvers, `gap_tol` for the quadratic one.
    pub tol: T,
    pub max_iter: usize,
    pub snapshots: bool,
    pub record_path: bool,
    /// Keep one [`StepRecord`] per step in the trace.
    pub keep_steps: bool,
}

impl<T: Real> RunOptions<T> {
    pub fn new(tol: T, max_iter: usize) -> Self {
        Self { tol, max_iter, snapshots: false, record_path: false, keep_steps: true }
    }

    pub fn with_snapshots(mut self) -> Self {
        self.snapshots = true;
        self
    }

    pub fn with_path(mut self) -> Self {
        self.record_path = true;
        self
    }

    /// Drops the per-step records; counts and the final iterate are kept.
    pub fn without_steps(mut self) -> Self {
        self.keep_steps = false;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol >= T::zero()) || self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "tolerance must be nonnegative and max_iter ≥ 1".into(),
            ));
        }
        Ok(())
    }
}

impl<T: Real> Default for RunOptions<T> {
    fn default() -> Self {
        Self::new(T::lit(DEFAULT_EPS), 1_000_000)
    }
}

/// What a single step produced.
#[derive(Debug, Clone)]
pub enum StepOutcome<T> {
    Moved(SimplexIterate<T>, StepRecord<T>),
    /// `Aᵀy > 0`: the carried `y` separates the origin from `conv(A)`.
    Certificate(Vec<T>),
    /// No direction with negative slope.
    Stationary,
}

/// A step applied in place.
pub(crate) enum Advance<T> {
    Moved(StepRecord<T>),
    Certificate(Vec<T>),
    Stationary,
}

impl<T> Advance<T> {
    fn into_outcome(self, next: SimplexIterate<T>) -> StepOutcome<T> {
        match self {
            Advance::Moved(rec) => StepOutcome::Moved(next, rec),
            Advance::Certificate(y) => StepOutcome::Certificate(y),
            Advance::Stationary => StepOutcome::Stationary,
        }
    }
}

/// `min_i ⟨a_i, y⟩ > 1e-12·(1 + ‖y‖)`, evaluated with compensated sums.
pub fn certificate_check<T: Real>(inst: &Instance<T>, y: &[T]) -> bool {
    let tol = T::tol(CERT_TOL) * (T::one() + linalg::norm(y));
    inst.columns()
        .iter()
        .all(|c| linalg::dot_compensated(c, y) > tol)
}

/// Lowest index attaining the minimum of `scores`.
pub(crate) fn argmin<T: Real>(scores: &[T]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s < scores[best] {
            best = i;
        }
    }
    best
}

/// Lowest index in `support` attaining the maximum of `scores`.
pub(crate) fn argmax_over<T: Real>(scores: &[T], support: &[usize]) -> usize {
    let mut best = support[0];
    for &i in &support[1..] {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    best
}

/// Empirical `w_f` over visited iterates:
/// `min_x max_{ℓ ∈ S(x), j} ⟨∇f(Ax), a_ℓ − a_j⟩ / √(2(f(Ax) − f*))`,
/// skipping iterates with `f(Ax) ≤ f*`.
pub fn empirical_wf<T: Real>(
    inst: &Instance<T>,
    obj: &QuadraticObjective<T>,
    path: &[SimplexIterate<T>],
    f_star: T,
) -> Result<T> {
    if path.is_empty() {
        return Err(Error::InvalidParameter("empty trace".into()));
    }
    let mut best: Option<T> = None;
    let mut lowest = T::infinity();
    for it in path {
        let y = inst.apply(it.x());
        let fy = obj.value(&y);
        lowest = lowest.min(fy);
        let excess = fy - f_star;
        if !(excess > T::zero()) {
            continue;
        }
        let g = obj.gradient(&y);
        let scores = inst.inner_products(&g);
        let lo = scores[argmin(&scores)];
        let hi = scores[argmax_over(&scores, it.support())];
        let ratio = (hi - lo) / (T::lit(2.0) * excess).sqrt();
        best = Some(best.map_or(ratio, |b: T| b.min(ratio)));
    }
    if f_star > lowest + T::tol(1e-12) * (T::one() + lowest.abs()) {
        return Err(Error::InvalidParameter(format!(
            "f_star = {f_star} exceeds the trace minimum {lowest}"
        )));
    }
    best.ok_or_else(|| Error::InvalidParameter("every iterate attains f_star".into()))
}
