//! Problem data: the column matrix, quadratic objectives, simplex iterates,
//! JSON I/O and instance generators.

mod generate;
mod iterate;
mod objective;

pub use generate::{make_example, make_figure1, random_instance, random_objective, RandomMode};
pub use iterate::SimplexIterate;
pub use objective::QuadraticObjective;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::Real;

/// Tolerance on `| ‖a_i‖ − 1 |` for a column to count as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// The column matrix `A = [a_1 ... a_n]` together with optional metadata.
///
/// Instances are immutable once built. Zero columns are allowed but the
/// matrix as a whole must be nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    columns: Vec<Vec<T>>,
    m: usize,
    normalized: bool,
    label: Option<String>,
    reference_points: Vec<Vec<T>>,
    objective: Option<QuadraticObjective<T>>,
}

impl<T: Real> Instance<T> {
    pub fn new(columns: Vec<Vec<T>>) -> Result<Self> {
        let m = columns.first().map(Vec::len).unwrap_or(0);
        if columns.is_empty() || m == 0 {
            return Err(Error::Dimension("need at least one column of length ≥ 1".into()));
        }
        if let Some((i, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != m) {
            return Err(Error::Dimension(format!(
                "column {} has length {}, expected {}",
                i + 1,
                c.len(),
                m
            )));
        }
        if columns.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
        if columns.iter().all(|c| c.iter().all(|&v| v == T::zero())) {
            return Err(Error::ZeroMatrix);
        }
        let tol = T::tol(NORMALIZATION_TOL);
        let normalized = columns
            .iter()
            .all(|c| (linalg::norm(c) - T::one()).abs() <= tol);
        Ok(Self {
            columns,
            m,
            normalized,
            label: None,
            reference_points: Vec::new(),
            objective: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Attaches named weight vectors that estimators add to their sampling
    /// pools.
    pub fn with_reference_point(mut self, x: Vec<T>) -> Result<Self> {
        if x.len() != self.n() {
            return Err(Error::Dimension(format!(
                "reference point has length {}, expected {}",
                x.len(),
                self.n()
            )));
        }
        self.reference_points.push(x);
        Ok(self)
    }

    pub fn with_objective(mut self, obj: QuadraticObjective<T>) -> Result<Self> {
        if obj.dim() != self.m {
            return Err(Error::Dimension(format!(
                "objective has dimension {}, instance has m = {}",
                obj.dim(),
                self.m
            )));
        }
        self.objective = Some(obj);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<T>] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &[T] {
        &self.columns[i]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn reference_points(&self) -> &[Vec<T>] {
        &self.reference_points
    }

    pub fn objective(&self) -> Option<&QuadraticObjective<T>> {
        self.objective.as_ref()
    }

    /// `‖A‖ = max_i ‖a_i‖`.
    pub fn norm_max(&self) -> T {
        self.columns.iter().map(|c| linalg::norm(c)).fold(T::zero(), T::max)
    }

    /// `Ax` for a weight vector of length `n`.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        linalg::combine(&self.columns, x, self.m)
    }

    /// `⟨a_i, y⟩` for every column.
    pub fn inner_products(&self, y: &[T]) -> Vec<T> {
        self.columns.iter().map(|c| linalg::dot(c, y)).collect()
    }

    /// Scales every column to unit length.
    pub fn normalize_columns(&self) -> Result<Self> {
        let mut columns = Vec::with_capacity(self.n());
        for (i, c) in self.columns.iter().enumerate() {
            let nrm = linalg::norm(c);
            if nrm == T::zero() {
                return Err(Error::ZeroColumn(i + 1));
            }
            if (nrm - T::one()).abs() <= T::tol(NORMALIZATION_TOL) {
                columns.push(c.clone());
            } else {
                columns.push(linalg::scale(c, T::one() / nrm));
            }
        }
        let mut out = Self::new(columns)?;
        out.normalized = true;
        out.label = self.label.clone();
        out.objective = self.objective.clone();
        // reference points are not carried over
        Ok(out)
    }

    /// Same columns with the objective and metadata dropped, converted to
    /// another scalar type.
    pub fn cast<U: Real>(&self) -> Instance<U> {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|&v| U::lit(v.as_f64())).collect())
            .collect();
        Instance::new(columns).expect("cast of a valid instance")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    columns: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objective: Option<ObjectiveFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    reference_points: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ObjectiveFile {
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
    b: Vec<f64>,
}

fn to_t<T: Real>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::lit(x)).collect()
}

fn to_f64s<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}

/// Parses an instance from its JSON text.
pub fn parse_instance<T: Real>(text: &str) -> Result<Instance<T>> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let mut inst = Instance::new(file.columns.iter().map(|c| to_t(c)).collect())?;
    if let Some(name) = file.name {
        inst = inst.with_label(name);
    }
    for x in &file.reference_points {
        inst = inst.with_reference_point(to_t(x))?;
    }
    if let Some(obj) = file.objective {
        let q = obj.q.iter().map(|r| to_t(r)).collect();
        inst = inst.with_objective(QuadraticObjective::new(q, to_t(&obj.b))?)?;
    }
    Ok(inst)
}

pub fn load_instance<T: Real>(path: impl AsRef<Path>) -> Result<Instance<T>> {
    parse_instance(&fs::read_to_string(path)?)
}

/// JSON text for an instance; every value is written in shortest
/// round-trip form so reloading reproduces the data bit for bit.
pub fn instance_to_json<T: Real>(inst: &Instance<T>) -> Result<String> {
    let file = InstanceFile {
        columns: inst.columns.iter().map(|c| to_f64s(c)).collect(),
        objective: inst.objective.as_ref().map(|o| ObjectiveFile {
            q: o.q().iter().map(|r| to_f64s(r)).collect(),
            b: to_f64s(o.b()),
        }),
        name: inst.label.clone(),
        reference_points: inst.reference_points.iter().map(|x| to_f64s(x)).collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn save_instance<T: Real>(inst: &Instance<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, instance_to_json(inst)?)?;
    Ok(())
}
