//! Machine-readable reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use skein_torus_core::embed::SuiteReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityJson {
    pub id: String,
    pub pass: bool,
    pub residual_terms: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteJson {
    pub suite: String,
    pub genus: u32,
    pub closed: bool,
    #[serde(default)]
    pub mutated: bool,
    pub pass: bool,
    pub identities: Vec<IdentityJson>,
    pub wall_time_ms: u64,
}

impl SuiteJson {
    pub fn from_report(r: &SuiteReport, wall_time_ms: u64) -> Self {
        SuiteJson {
            suite: r.suite.clone(),
            genus: r.genus,
            closed: r.closed,
            mutated: r.mutated,
            pass: r.passed(),
            identities: r
                .identities
                .iter()
                .map(|i| IdentityJson {
                    id: i.id.clone(),
                    pass: i.pass,
                    residual_terms: i.residual_terms(),
                    detail: i.detail.clone(),
                })
                .collect(),
            wall_time_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitiesJson {
    pub genus: u32,
    pub closed: bool,
    pub pass: bool,
    pub suites: Vec<SuiteJson>,
    /// Suites with no matching configuration on this graph (only for `all`).
    pub skipped: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityJson {
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowsJson {
    pub pass: bool,
    /// `Tr r(c)` per catalogued curve, as power-basis coefficient vectors.
    pub traces: BTreeMap<String, String>,
    pub central_powers: SuiteJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibleJson {
    pub pass: bool,
    pub commutant_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnicityJson {
    pub pass: bool,
    pub gauge_x: BTreeMap<String, String>,
    pub gauge_y: BTreeMap<String, String>,
    pub intertwiner_found: bool,
    pub solution_dim: usize,
    pub mismatched_rejected: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shadows: Option<ShadowsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<IrreducibleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unicity: Option<UnicityJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub p: u32,
    pub genus: u32,
    pub closed: bool,
    pub dim: usize,
    pub x: BTreeMap<String, String>,
    pub y: BTreeMap<String, String>,
    pub boundary: String,
    pub genericity: GenericityJson,
    pub pass: bool,
    pub checks: ChecksJson,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: BTreeMap<String, i16>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub genus: u32,
    pub closed: bool,
    pub expr: String,
    pub text: String,
    pub terms: Vec<TermJson>,
}
