use anyhow::Result;

use awaysteps::conditioning::rho_with_partition;
use awaysteps::{
    canonical_partition, random_instance, rho_b, rho_n, theorem3_bound, make_figure1, vn_away_run,
    vn_run, Instance64, Iterate64, RandomMode, RunOptions, RunResult64, RunStatus,
};

pub const BENCH_HEADER: &str = "instance,algo,status,iters,final_obj,bound_L,max_contraction_violation";

const STEP_SLACK: f64 = 1e-12;
const REL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub eps: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Random instances per family.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub algo: String,
    pub status: RunStatus,
    pub iters: usize,
    pub final_obj: f64,
    /// Rate parameter used in the audit: `L` for vn-away, `|ρ|` for vn.
    pub bound_l: Option<f64>,
    /// Largest amount by which any audited inequality failed (0 if none).
    pub max_violation: f64,
}

impl BenchRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.algo.clone(),
            self.status.as_str().to_string(),
            self.iters.to_string(),
            format!("{:e}", self.final_obj),
            self.bound_l.map_or(String::new(), |v| format!("{v}")),
            format!("{:e}", self.max_violation),
        ]
    }
}

/// Where the origin sits and the rate constants that follow from it.
struct Geometry {
    rho: f64,
    in_hull: bool,
    /// Certified lower bound on the restricted width (origin in the hull).
    l: Option<f64>,
}

fn geometry(inst: &Instance64) -> Result<Geometry> {
    let part = canonical_partition(inst)?;
    let in_hull = !part.b.is_empty();
    let rho = rho_with_partition(inst, &part).unwrap_or(0.0);
    let l = if in_hull {
        let rb = rho_b(inst, &part)?;
        let rn = rho_n(inst, &part)?;
        Some(theorem3_bound(inst, &part, rb, rn)?.value)
    } else {
        None
    };
    Ok(Geometry { rho, in_hull, l })
}

fn excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).max(0.0)
}

/// Audits a vn-away run: per-step and aggregate contraction when the
/// origin is in the hull, and the `8/k` and `⌈8/ρ²⌉` bounds otherwise.
fn audit_away(res: &RunResult64, g: &Geometry) -> f64 {
    let objs = res.trace.objectives();
    let mut worst = 0.0f64;
    for (k, &o) in objs.iter().enumerate().skip(1) {
        worst = worst.max(excess(o, 8.0 / k as f64 + REL_SLACK));
        worst = worst.max(excess(o, objs[k - 1] + STEP_SLACK));
    }
    if let Some(l) = g.l {
        let c = 1.0 - l * l / 16.0;
        for (s, step) in res.trace.steps.iter().enumerate() {
            if !step.is_drop() {
                worst = worst.max(excess(objs[s + 1], c * objs[s] + STEP_SLACK));
            }
        }
        for (k, &o) in objs.iter().enumerate() {
            worst = worst.max(excess(o, c.powf(k as f64 / 2.0) * objs[0] * (1.0 + REL_SLACK)));
        }
    } else if g.rho > 0.0 {
        let cap = (8.0 / (g.rho * g.rho)).ceil() as usize;
        if res.status != RunStatus::InfeasibleCertificate || res.iterations > cap {
            worst = worst.max((res.iterations.saturating_sub(cap)).max(1) as f64);
        }
    }
    worst
}

/// Audits a vn run: `‖y_k‖² ≤ 1/k`, monotone objective, the per-step rate
/// `1 − ρ²` when the origin is interior, and `⌈1/ρ²⌉` without it.
fn audit_vn(res: &RunResult64, g: &Geometry) -> f64 {
    let objs = res.trace.objectives();
    let mut worst = 0.0f64;
    for (k, &o) in objs.iter().enumerate().skip(1) {
        worst = worst.max(excess(o, 1.0 / k as f64 + REL_SLACK));
        worst = worst.max(excess(o, objs[k - 1] + STEP_SLACK));
        if g.rho < 0.0 {
            worst = worst.max(excess(o, (1.0 - g.rho * g.rho) * objs[k - 1] + STEP_SLACK));
        }
    }
    if !g.in_hull && g.rho > 0.0 {
        let cap = (1.0 / (g.rho * g.rho)).ceil() as usize;
        if res.status != RunStatus::InfeasibleCertificate || res.iterations > cap {
            worst = worst.max((res.iterations.saturating_sub(cap)).max(1) as f64);
        }
    }
    worst
}

fn bench_instances(cfg: &BenchConfig) -> Result<Vec<Instance64>> {
    let mut out = vec![make_figure1()];
    for s in 0..cfg.count {
        let seed = cfg.seed.wrapping_mul(1000).wrapping_add(s as u64);
        let m = 2 + s % 2;
        out.push(random_instance(m, m + 3, seed, RandomMode::Interior)?);
        out.push(random_instance(3, 6, seed, RandomMode::Boundary)?);
        out.push(random_instance(m, 4 + s % 5, seed, RandomMode::Infeasible)?);
    }
    Ok(out)
}

/// Runs both feasibility solvers on every bench instance from `e_1`.
/// Rows are sorted by instance label, then algorithm.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for inst in bench_instances(cfg)? {
        let g = geometry(&inst)?;
        let label = inst.label().unwrap_or("unnamed").to_string();
        let opts = RunOptions::new(cfg.eps, cfg.max_iter);

        let vn = vn_run(&inst, Iterate64::vertex(&inst, 0)?, opts)?;
        rows.push(BenchRow {
            instance: label.clone(),
            algo: "vn".into(),
            status: vn.status,
            iters: vn.iterations,
            final_obj: awaysteps::linalg::norm_sq(vn.iterate.y()),
            bound_l: (g.rho != 0.0).then_some(g.rho.abs()),
            max_violation: audit_vn(&vn, &g),
        });

        let away = vn_away_run(&inst, Iterate64::vertex(&inst, 0)?, opts)?;
        rows.push(BenchRow {
            instance: label,
            algo: "vn-away".into(),
            status: away.status,
            iters: away.iterations,
            final_obj: awaysteps::linalg::norm_sq(away.iterate.y()),
            bound_l: g.l.or((g.rho > 0.0).then_some(g.rho)),
            max_violation: audit_away(&away, &g),
        });
    }
    rows.sort_by(|a, b| (&a.instance, &a.algo).cmp(&(&b.instance, &b.algo)));
    Ok(rows)
}
