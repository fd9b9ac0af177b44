use super::vn::feasibility_loop;
use super::{
    argmax_over, argmin, certificate_check, Advance, RunOptions, RunResult, RunStatus, StepKind,
    StepOutcome, StepRecord, Trace, REFRESH_EVERY,
};
use crate::error::{Error, Result};
use crate::instance::{Instance, QuadraticObjective, SimplexIterate};
use crate::linalg;
use crate::linesearch::{exact_norm_step, exact_quadratic_step, StepSolution};
use crate::Real;

/// Direction chosen by the away-step rule.
struct Choice<T> {
    away: bool,
    j: usize,
    l: usize,
    dir: Vec<T>,
    slope: T,
    theta_max: T,
}

/// Picks between the regular direction `a_j − y` and the away direction
/// `y − a_ℓ` using the slopes `⟨·, g⟩`; ties go to the regular step, and a
/// singleton support always takes the regular step.
fn choose<T: Real>(inst: &Instance<T>, it: &SimplexIterate<T>, g: &[T]) -> Choice<T> {
    let y = it.y();
    let scores = inst.inner_products(g);
    let j = argmin(&scores);
    let l = argmax_over(&scores, it.support());
    let reg = linalg::sub(inst.column(j), y);
    let reg_slope = linalg::dot(&reg, g);
    let xl = it.weight(l);
    if it.support().len() > 1 && xl < T::one() {
        let away = linalg::sub(y, inst.column(l));
        let away_slope = linalg::dot(&away, g);
        if away_slope < reg_slope {
            return Choice {
                away: true,
                j,
                l,
                dir: away,
                slope: away_slope,
                theta_max: xl / (T::one() - xl),
            };
        }
    }
    Choice { away: false, j, l, dir: reg, slope: reg_slope, theta_max: T::one() }
}

fn apply<T: Real>(
    inst: &Instance<T>,
    next: &mut SimplexIterate<T>,
    choice: &Choice<T>,
    ls: &StepSolution<T>,
    k: usize,
) -> StepRecord<T> {
    let kind = if choice.away {
        let drop = ls.theta >= choice.theta_max;
        next.away_update(choice.l, ls.theta, drop, &choice.dir);
        if drop {
            StepKind::Drop
        } else {
            StepKind::Away
        }
    } else {
        next.regular_update(choice.j, ls.theta, &choice.dir, inst);
        StepKind::Regular
    };
    if k % REFRESH_EVERY == 0 {
        next.refresh(inst);
    }
    StepRecord {
        k,
        kind,
        j: Some(choice.j),
        l: if choice.away { Some(choice.l) } else { None },
        theta: ls.theta,
        theta_max: choice.theta_max,
        obj: T::zero(),
        support_size: next.support().len(),
        y_snapshot: None,
    }
}

/// One iteration of the von Neumann algorithm with away steps.
pub fn vn_away_step<T: Real>(
    inst: &Instance<T>,
    it: &SimplexIterate<T>,
    k: usize,
) -> Result<StepOutcome<T>> {
    if !inst.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let mut next = it.clone();
    Ok(vn_away_advance(inst, &mut next, k)?.into_outcome(next))
}

fn vn_away_advance<T: Real>(inst: &Instance<T>, it: &mut SimplexIterate<T>, k: usize) -> Result<Advance<T>> {
    let y = it.y();
    if certificate_check(inst, y) {
        return Ok(Advance::Certificate(y.to_vec()));
    }
    let choice = choose(inst, it, y);
    if !(choice.slope < T::zero()) {
        return Ok(Advance::Stationary);
    }
    let ls = exact_norm_step(y, &choice.dir, choice.theta_max)?;
    let mut record = apply(inst, it, &choice, &ls, k);
    record.obj = linalg::norm_sq(it.y());
    Ok(Advance::Moved(record))
}

/// Runs the von Neumann algorithm with away steps from a vertex `x0`.
pub fn vn_away_run<T: Real>(
    inst: &Instance<T>,
    x0: SimplexIterate<T>,
    opts: RunOptions<T>,
) -> Result<RunResult<T>> {
    if !x0.is_vertex() {
        return Err(Error::InvalidIterate("starting point must be a vertex of the simplex".into()));
    }
    feasibility_loop(inst, x0, opts, &|it, k| vn_away_advance(inst, it, k))
}

/// Frank-Wolfe gap `⟨y − a_j, ∇f(y)⟩` at the best column `a_j`.
pub fn fw_gap<T: Real>(inst: &Instance<T>, obj: &QuadraticObjective<T>, y: &[T]) -> T {
    let g = obj.gradient(y);
    let scores = inst.inner_products(&g);
    let j = argmin(&scores);
    linalg::dot(y, &g) - scores[j]
}

/// One iteration of Frank-Wolfe with away steps for `min f(y)` over
/// `conv(A)`. Returns `Stationary` when the gap is at most `gap_tol`.
pub fn fw_away_step<T: Real>(
    inst: &Instance<T>,
    obj: &QuadraticObjective<T>,
    it: &SimplexIterate<T>,
    gap_tol: T,
    k: usize,
) -> Result<StepOutcome<T>> {
    let mut next = it.clone();
    Ok(fw_away_advance(inst, obj, &mut next, gap_tol, k)?.into_outcome(next))
}

fn fw_away_advance<T: Real>(
    inst: &Instance<T>,
    obj: &QuadraticObjective<T>,
    it: &mut SimplexIterate<T>,
    gap_tol: T,
    k: usize,
) -> Result<Advance<T>> {
    let y = it.y();
    let g = obj.gradient(y);
    let choice = choose(inst, it, &g);
    let gap = linalg::dot(y, &g) - linalg::dot(inst.column(choice.j), &g);
    if gap <= gap_tol || !(choice.slope < T::zero()) {
        return Ok(Advance::Stationary);
    }
    let ls = exact_quadratic_step(y, &choice.dir, obj, choice.theta_max)?;
    let mut record = apply(inst, it, &choice, &ls, k);
    record.obj = obj.value(it.y());
    Ok(Advance::Moved(record))
}

/// Runs Frank-Wolfe with away steps from a vertex `x0` until the gap is at
/// most `opts.tol` (so `f(y_k) − f* ≤ opts.tol`) or `opts.max_iter` steps.
pub fn fw_away_run<T: Real>(
    inst: &Instance<T>,
    obj: &QuadraticObjective<T>,
    x0: SimplexIterate<T>,
    opts: RunOptions<T>,
) -> Result<RunResult<T>> {
    opts.validate()?;
    if obj.dim() != inst.m() {
        return Err(Error::Dimension("objective and instance dimensions differ".into()));
    }
    if !x0.is_vertex() {
        return Err(Error::InvalidIterate("starting point must be a vertex of the simplex".into()));
    }
    let mut it = x0;
    let mut trace = Trace::start(&it, obj.value(it.y()), opts.record_path);
    let mut k = 0;
    let status = loop {
        if k == opts.max_iter {
            break RunStatus::IterationLimit;
        }
        match fw_away_advance(inst, obj, &mut it, opts.tol, k + 1)? {
            Advance::Moved(mut record) => {
                if opts.snapshots {
                    record.y_snapshot = Some(it.y().to_vec());
                }
                if opts.keep_steps {
                    trace.steps.push(record);
                }
                if opts.record_path {
                    trace.path.push(it.clone());
                }
                k += 1;
            }
            _ => {
                break if fw_gap(inst, obj, it.y()) <= opts.tol {
                    RunStatus::Converged
                } else {
                    RunStatus::Stalled
                }
            }
        }
    };
    let gap = fw_gap(inst, obj, it.y());
    Ok(RunResult {
        status,
        iterate: it,
        certificate: None,
        trace,
        iterations: k,
        final_gap: Some(gap),
        warnings: Vec::new(),
    })
}
