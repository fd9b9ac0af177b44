//! Away-step variants of the von Neumann and Frank-Wolfe algorithms over
//! the convex hull of a column matrix, together with the geometric
//! condition measures that govern their linear convergence.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the bottom of this file fix the scalar type.
//!
//! ```
//! use awaysteps::{make_figure1, vn_away_run, RunOptions, RunStatus, SimplexIterate};
//!
//! let inst = make_figure1::<f64>();
//! let x0 = SimplexIterate::vertex(&inst, 0).unwrap();
//! let res = vn_away_run(&inst, x0, RunOptions::new(1e-8, 10_000)).unwrap();
//! assert_eq!(res.status, RunStatus::Converged);
//! ```

pub mod conditioning;
pub mod error;
pub mod instance;
pub mod linalg;
pub mod linesearch;
pub mod scalar;
pub mod simplexlp;
pub mod solvers;

pub use conditioning::{
    canonical_partition, condition_report, diameter, min_norm_point, phi_at, phi_estimate, rho,
    rho_b, rho_n, theorem3_bound, transform_instance, w_estimate, ConditionReport, Partition,
    PhiCertificate, Theorem3Bound, Theorem3Case,
};
pub use error::{Error, Result};
pub use instance::{
    load_instance, make_example, make_figure1, parse_instance, random_instance, random_objective, save_instance,
    Instance, QuadraticObjective, RandomMode, SimplexIterate,
};
pub use linesearch::{exact_norm_step, exact_quadratic_step, StepSolution};
pub use scalar::Real;
pub use simplexlp::{solve_lp, LpProblem, LpSolution, LpStatus};
pub use solvers::{
    certificate_check, empirical_wf, fw_away_run, fw_away_step, vn_away_run, vn_away_step, vn_run,
    vn_step, write_trace_csv, RunOptions, RunResult, RunStatus, StepKind, StepOutcome, StepRecord,
    Trace,
};

pub type Instance64 = Instance<f64>;
pub type Instance32 = Instance<f32>;
pub type Iterate64 = SimplexIterate<f64>;
pub type Iterate32 = SimplexIterate<f32>;
pub type Objective64 = QuadraticObjective<f64>;
pub type Objective32 = QuadraticObjective<f32>;
pub type RunResult64 = RunResult<f64>;
pub type RunResult32 = RunResult<f32>;
pub type Partition64 = Partition<f64>;
pub type Partition32 = Partition<f32>;
