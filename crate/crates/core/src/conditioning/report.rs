use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    canonical_partition, diameter, l_basis, phi_at, phi_estimate, rho_b, rho_n,
    rho_with_partition, theorem3_bound, w_estimate,
};
use crate::error::Result;
use crate::instance::Instance;
use crate::Real;

const FLAG_TOL: f64 = 1e-8;

/// Partition with 1-based indices, as written to reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub interior_witness: Option<Vec<f64>>,
    pub dual_witness: Option<Vec<f64>>,
}

/// Consistency checks; `None` when a check does not apply or an input is
/// missing.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Flags {
    /// `w_upper ≥ |ρ|` (origin in the hull).
    pub prop1_ok: Option<bool>,
    /// `phi_lower > 0` (origin in the hull).
    pub cor1_ok: Option<bool>,
    /// `phi_lower ≤ phi_upper ≤ w_upper`.
    pub sandwich_ok: Option<bool>,
    /// `|ρ| ≤ 1` for unit columns.
    pub rho_bound_ok: Option<bool>,
    /// `w_upper ≤ 2` for unit columns.
    pub w_bound_ok: Option<bool>,
}

impl Flags {
    /// True when no applicable check failed.
    pub fn all_ok(&self) -> bool {
        [self.prop1_ok, self.cor1_ok, self.sandwich_ok, self.rho_bound_ok, self.w_bound_ok]
            .iter()
            .all(|f| f.unwrap_or(true))
    }
}

/// Every condition measure of an instance plus cross-checks. Fields that
/// could not be computed are `None` with a message under `errors`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub label: Option<String>,
    pub m: usize,
    pub n: usize,
    pub normalized: bool,
    pub rho: Option<f64>,
    pub partition: PartitionReport,
    #[serde(rename = "rho_B")]
    pub rho_b: Option<f64>,
    #[serde(rename = "rho_N")]
    pub rho_n: Option<f64>,
    #[serde(rename = "L_dim")]
    pub l_dim: usize,
    pub theorem3_case: Option<String>,
    /// Certified lower bound on the restricted width.
    pub phi_lower: Option<f64>,
    /// The lower bound holds for `[A 0]` only.
    pub phi_lower_augmented_only: bool,
    /// Sampling estimate: an upper bound on the restricted width.
    pub phi_upper: Option<f64>,
    /// Sampling estimate: an upper bound on the relative width.
    pub w_upper: Option<f64>,
    /// Restricted width at each reference point of the instance.
    pub phi_at_reference: Vec<Option<f64>>,
    pub diameter: f64,
    #[serde(rename = "norm_A")]
    pub norm_a: f64,
    /// Empirical `w_f` along a solver trace, when one was run.
    pub w_f: Option<f64>,
    pub flags: Flags,
    /// `w_upper − phi_upper`, a measurement only.
    pub conjecture_gap: Option<f64>,
    pub budget: usize,
    pub seed: u64,
    pub errors: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

fn record<V>(errors: &mut BTreeMap<String, String>, key: &str, r: Result<V>) -> Option<V> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.insert(key.to_string(), e.to_string());
            None
        }
    }
}

fn to_f64<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}

/// Computes a [`ConditionReport`]. Only a failure of the partition itself
/// is returned as an error; all later failures are recorded per field.
pub fn condition_report<T: Real>(inst: &Instance<T>, budget: usize, seed: u64) -> Result<ConditionReport> {
    let part = canonical_partition(inst)?;
    let mut errors = BTreeMap::new();
    let rho = record(&mut errors, "rho", rho_with_partition(inst, &part));
    let rb = record(&mut errors, "rho_B", rho_b(inst, &part)).flatten();
    let rn = record(&mut errors, "rho_N", rho_n(inst, &part)).flatten();
    let bound = record(&mut errors, "phi_lower", theorem3_bound(inst, &part, rb, rn));
    let phi_upper = record(&mut errors, "phi_upper", phi_estimate(inst, budget, seed));
    let w_upper = record(&mut errors, "w_upper", w_estimate(inst, budget, seed));
    let phi_at_reference = inst
        .reference_points()
        .iter()
        .map(|x| phi_at(inst, x).ok().map(|(v, _)| v.as_f64()))
        .collect();

    let tol = FLAG_TOL;
    let rho = rho.map(|v| v.as_f64());
    let phi_lower = bound.map(|b| b.value.as_f64());
    let augmented_only = bound.is_some_and(|b| b.augmented_only());
    let phi_upper = phi_upper.map(|v| v.as_f64());
    let w_upper = w_upper.map(|v| v.as_f64());
    let in_hull = !part.b.is_empty();

    let mut flags = Flags::default();
    if in_hull {
        flags.prop1_ok = rho.zip(w_upper).map(|(r, w)| w >= r.abs() - tol);
        flags.cor1_ok = phi_lower.map(|p| p > 0.0);
    }
    flags.sandwich_ok = match (phi_upper, w_upper) {
        (Some(pu), Some(wu)) => {
            let lower_ok = match phi_lower {
                Some(pl) if !augmented_only => pl <= pu + tol,
                _ => true,
            };
            Some(lower_ok && pu <= wu + tol)
        }
        _ => None,
    };
    if inst.is_normalized() {
        flags.rho_bound_ok = rho.map(|r| r.abs() <= 1.0 + tol);
        flags.w_bound_ok = w_upper.map(|w| w <= 2.0 + tol);
    }

    let mut notes = vec![
        "phi_upper and w_upper are minima over sampled directions, hence upper estimates".to_string(),
        "phi_lower is a certified lower bound on the restricted width".to_string(),
        format!("sampling seed {seed}, budget {budget} directions per support"),
    ];
    if augmented_only {
        notes.push("origin outside the hull: phi_lower bounds the matrix with an appended zero column".into());
    }

    Ok(ConditionReport {
        label: inst.label().map(str::to_string),
        m: inst.m(),
        n: inst.n(),
        normalized: inst.is_normalized(),
        rho,
        partition: PartitionReport {
            b: part.b.iter().map(|i| i + 1).collect(),
            n: part.n.iter().map(|i| i + 1).collect(),
            interior_witness: part.interior_witness.as_deref().map(to_f64),
            dual_witness: part.dual_witness.as_deref().map(to_f64),
        },
        rho_b: rb.map(|v| v.as_f64()),
        rho_n: rn.map(|v| v.as_f64()),
        l_dim: l_basis(inst, &part).len(),
        theorem3_case: bound.map(|b| b.case.as_str().to_string()),
        phi_lower,
        phi_lower_augmented_only: augmented_only,
        phi_upper,
        w_upper,
        phi_at_reference,
        diameter: diameter(inst.columns()).as_f64(),
        norm_a: inst.norm_max().as_f64(),
        w_f: None,
        flags,
        conjecture_gap: phi_upper.zip(w_upper).map(|(p, w)| w - p),
        budget,
        seed,
        errors,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{make_example, make_figure1, random_instance, RandomMode};

    #[test]
    fn figure1_report() {
        let r = condition_report(&make_figure1::<f64>(), 16, 0).unwrap();
        assert_eq!(r.rho, Some(0.0));
        assert!((r.phi_lower.unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.theorem3_case.as_deref(), Some("d"));
        assert_eq!(r.partition.b, vec![2, 3]);
        for f in [r.flags.prop1_ok, r.flags.cor1_ok, r.flags.sandwich_ok, r.flags.rho_bound_ok, r.flags.w_bound_ok] {
            assert_eq!(f, Some(true));
        }
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("rho_B").is_some() && json.get("notes").is_some());
    }

    #[test]
    fn example2_report_uses_case_c() {
        let r = condition_report(&make_example::<f64>(2, 0.5, 0.5).unwrap(), 8, 0).unwrap();
        assert_eq!(r.partition.b, vec![3]);
        assert_eq!(r.theorem3_case.as_deref(), Some("c"));
        assert!((r.phi_lower.unwrap() - 0.5).abs() < 1e-10);
        assert!((r.rho_n.unwrap() - 0.5).abs() < 1e-10);
        assert_eq!(r.l_dim, 0);
    }

    #[test]
    fn infeasible_report_marks_augmented_bound() {
        let inst = random_instance::<f64>(2, 4, 7, RandomMode::Infeasible).unwrap();
        let r = condition_report(&inst, 8, 0).unwrap();
        assert!(r.partition.b.is_empty());
        assert!(r.rho.unwrap() > 0.0);
        assert!(r.phi_lower_augmented_only);
        assert_eq!(r.theorem3_case.as_deref(), Some("b"));
    }

    #[test]
    fn four_dimensional_interior_records_unsupported() {
        let inst = random_instance::<f64>(4, 6, 1, RandomMode::Interior).unwrap();
        let r = condition_report(&inst, 2, 0).unwrap();
        assert!(r.rho.is_none());
        assert!(r.errors.contains_key("rho"));
        assert!(r.phi_upper.is_some() && r.w_upper.is_some());
    }
}
