use serde::{Deserialize, Serialize};

use ordtopo_core::nets::Family;
use ordtopo_core::{Carrier, IntervalSemantics, Rat, SearchConfig, SetExpr, Vector};

use crate::CliError;

/// A problem document: a carrier, a semantics, search overrides and exactly
/// one task block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ProblemDoc {
    pub carrier: Carrier,
    #[serde(default)]
    pub semantics: IntervalSemantics,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_set: Option<CheckSetTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremTask>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    QuasiOrderClosed,
    OrderOpen,
    OrderClosed,
    Solid,
}

fn all_properties() -> Vec<Property> {
    vec![
        Property::QuasiOrderClosed,
        Property::OrderOpen,
        Property::OrderClosed,
        Property::Solid,
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSetTask {
    pub set: SetExpr,
    #[serde(default = "all_properties")]
    pub properties: Vec<Property>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogKind {
    /// The symmetric chain plus single-coordinate perturbations.
    #[default]
    Full,
    /// The symmetric chain only.
    Chain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceTask {
    pub family: Family,
    pub limit: Vector,
    #[serde(default)]
    pub catalog: CatalogKind,
    /// Defaults to the search config's neighborhood depth.
    #[serde(default)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitTask {
    pub set: SetExpr,
    /// Centers to fit around; sampled from the set when absent.
    #[serde(default)]
    pub points: Option<Vec<Vector>>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    50
}

fn default_depth() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TheoremTask {
    ExampleE1 {},
    T1 {
        family: Family,
        x: Vector,
        #[serde(default = "default_depth")]
        depth: usize,
    },
    Band {
        set: SetExpr,
    },
    TauSubset {
        catalog: Vec<SetExpr>,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default)]
        seed: u64,
    },
    VectorTopology {
        catalog: Vec<SetExpr>,
        shifts: Vec<Vector>,
        scalars: Vec<Rat>,
    },
}

impl ProblemDoc {
    /// Parses and schema-checks a document. Errors name the offending field.
    pub fn parse(text: &str) -> Result<ProblemDoc, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: ProblemDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Input(format!("at {path}: {}", e.into_inner()))
        })?;
        let blocks = [
            doc.check_set.is_some(),
            doc.convergence.is_some(),
            doc.fit.is_some(),
            doc.theorem.is_some(),
        ];
        match blocks.iter().filter(|b| **b).count() {
            1 => Ok(doc),
            n => Err(CliError::Input(format!(
                "a document needs exactly one of check-set, convergence, fit, theorem; found {n}"
            ))),
        }
    }
}
