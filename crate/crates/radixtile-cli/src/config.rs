//! JSON description of a radix system.

use std::path::Path;

use radixtile::exact_linalg::{int_vec, IntMatrix, IntVector};
use radixtile::radix_system::{new_system, RadixSystem};
use serde::{Deserialize, Serialize};

/// A digit written either as a bare integer (one-dimensional systems) or as a vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Digit {
    Scalar(i64),
    Vector(Vec<i64>),
}

impl Digit {
    fn to_vector(&self) -> IntVector {
        match self {
            Digit::Scalar(x) => int_vec(&[*x]),
            Digit::Vector(v) => int_vec(v),
        }
    }
}

fn default_transpose() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub dim: usize,
    /// The matrix `A`, row-major.
    pub matrix: Vec<Vec<i64>>,
    pub digits: Vec<Digit>,
    #[serde(default)]
    pub dual_digits: Option<Vec<Digit>>,
    /// When true (the default) the radix base is `A^T`; otherwise `A` itself.
    #[serde(default = "default_transpose")]
    pub transpose: bool,
}

impl SystemConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn matrix(&self) -> Result<IntMatrix, String> {
        if self.matrix.len() != self.dim {
            return Err(format!(
                "matrix has {} rows, dim is {}",
                self.matrix.len(),
                self.dim
            ));
        }
        IntMatrix::from_rows(&self.matrix).map_err(|e| e.to_string())
    }

    /// Radix base `B`.
    pub fn base(&self) -> Result<IntMatrix, String> {
        let a = self.matrix()?;
        Ok(if self.transpose { a.transpose() } else { a })
    }

    /// The matrix `A` with `B = A^T`, used by the dual system.
    pub fn dual_matrix(&self) -> Result<IntMatrix, String> {
        Ok(self.base()?.transpose())
    }

    fn vectors(&self, ds: &[Digit], what: &str) -> Result<Vec<IntVector>, String> {
        let out: Vec<IntVector> = ds.iter().map(Digit::to_vector).collect();
        if let Some(bad) = out.iter().position(|v| v.len() != self.dim) {
            return Err(format!("{what} {bad} has the wrong dimension"));
        }
        Ok(out)
    }

    pub fn digits(&self) -> Result<Vec<IntVector>, String> {
        self.vectors(&self.digits, "digit")
    }

    pub fn dual_digits(&self) -> Result<Option<Vec<IntVector>>, String> {
        self.dual_digits
            .as_ref()
            .map(|ds| self.vectors(ds, "dual digit"))
            .transpose()
    }

    pub fn system(&self) -> Result<RadixSystem, String> {
        new_system(self.base()?, self.digits()?).map_err(|e| e.to_string())
    }
}
