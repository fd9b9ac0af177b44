use super::{
    certificate_check, Advance, RunOptions, RunResult, RunStatus, StepKind, StepOutcome,
    StepRecord, Trace, REFRESH_EVERY,
};
use crate::error::{Error, Result};
use crate::instance::{Instance, SimplexIterate};
use crate::linalg;
use crate::linesearch::exact_norm_step;
use crate::Real;

/// One iteration of the plain von Neumann algorithm.
///
/// Moves toward the column `a_j` forming the widest angle with `y`, taking
/// the minimum-norm point on the segment `[y, a_j]`.
pub fn vn_step<T: Real>(inst: &Instance<T>, it: &SimplexIterate<T>, k: usize) -> Result<StepOutcome<T>> {
    if !inst.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let mut next = it.clone();
    Ok(vn_advance(inst, &mut next, k)?.into_outcome(next))
}

fn widest_column<T: Real>(inst: &Instance<T>, y: &[T]) -> usize {
    let mut best = 0;
    let mut low = T::infinity();
    for (i, c) in inst.columns().iter().enumerate() {
        let s = linalg::dot(c, y);
        if s < low {
            low = s;
            best = i;
        }
    }
    best
}

fn vn_advance<T: Real>(inst: &Instance<T>, next: &mut SimplexIterate<T>, k: usize) -> Result<Advance<T>> {
    let y = next.y();
    if certificate_check(inst, y) {
        return Ok(Advance::Certificate(y.to_vec()));
    }
    let j = widest_column(inst, y);
    let dir = linalg::sub(inst.column(j), y);
    if !(linalg::dot(&dir, y) < T::zero()) {
        return Ok(Advance::Stationary);
    }
    let ls = exact_norm_step(y, &dir, T::one())?;
    next.regular_update(j, ls.theta, &dir, inst);
    if k % REFRESH_EVERY == 0 {
        next.refresh(inst);
    }
    let record = StepRecord {
        k,
        kind: StepKind::Regular,
        j: Some(j),
        l: None,
        theta: ls.theta,
        theta_max: T::one(),
        obj: linalg::norm_sq(next.y()),
        support_size: next.support().len(),
        y_snapshot: None,
    };
    Ok(Advance::Moved(record))
}

pub(super) type Stepper<'a, T> = dyn Fn(&mut SimplexIterate<T>, usize) -> Result<Advance<T>> + 'a;

/// Shared driver for the two feasibility solvers.
pub(super) fn feasibility_loop<T: Real>(
    inst: &Instance<T>,
    x0: SimplexIterate<T>,
    opts: RunOptions<T>,
    step: &Stepper<'_, T>,
) -> Result<RunResult<T>> {
    opts.validate()?;
    if !inst.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let mut it = x0;
    let mut trace = Trace::start(&it, linalg::norm_sq(it.y()), opts.record_path);
    let mut warnings = Vec::new();
    let mut certificate = None;
    let bound_tol = T::one() + T::tol(1e-12);
    let mut k = 0;
    let status = loop {
        if linalg::norm(it.y()) <= opts.tol {
            break RunStatus::Converged;
        }
        if k == opts.max_iter {
            break RunStatus::IterationLimit;
        }
        match step(&mut it, k + 1)? {
            Advance::Certificate(y) => {
                certificate = Some(y);
                break RunStatus::InfeasibleCertificate;
            }
            Advance::Stationary => break RunStatus::Stalled,
            Advance::Moved(mut record) => {
                if opts.snapshots {
                    record.y_snapshot = Some(it.y().to_vec());
                }
                if record.obj > bound_tol && warnings.is_empty() {
                    warnings.push(format!(
                        "‖y_{}‖² = {} exceeds 1 on a normalized instance",
                        record.k, record.obj
                    ));
                }
                if opts.keep_steps {
                    trace.steps.push(record);
                }
                if opts.record_path {
                    trace.path.push(it.clone());
                }
                k += 1;
            }
        }
    };
    Ok(RunResult {
        status,
        iterate: it,
        certificate,
        trace,
        iterations: k,
        final_gap: None,
        warnings,
    })
}

/// Runs the plain von Neumann algorithm until `‖y_k‖ ≤ opts.tol`, a
/// certificate `Aᵀy_k > 0` is found, or `opts.max_iter` steps.
pub fn vn_run<T: Real>(inst: &Instance<T>, x0: SimplexIterate<T>, opts: RunOptions<T>) -> Result<RunResult<T>> {
    feasibility_loop(inst, x0, opts, &|it, k| vn_advance(inst, it, k))
}
