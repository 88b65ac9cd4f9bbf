//! Checkers for the results on U-dominant dimension, run over a bimodule
//! context and a seeded sample of modules.
//!
//! Verdict semantics. Conditions that are computed exactly (dimensions,
//! exactness of explicit sequences, projective dimensions within the bound)
//! are *definite*. A condition quantified over all modules is evaluated on
//! the samples; it is definite only when a sample refutes it. A group of
//! conditions claimed equivalent is PASS when all values agree, FAIL when
//! two definite values disagree, and UNDETERMINED otherwise (the sample
//! did not contain a refutation). A FAIL is downgraded to UNDETERMINED when
//! the context's selforthogonality is only known up to the Ext bound.

pub mod checks;
pub mod random;
pub mod samples;
pub mod suite;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::bimodule::BimoduleContext;
use crate::error::Result;

pub use checks::{run_check, CLAIMS};
pub use random::{random_module, RandomSuiteSpec};
pub use samples::{build_samples, Samples};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Undetermined,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Undetermined => "UNDETERMINED",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub ext_bound: usize,
    pub d_max: usize,
    pub resolution_length: usize,
    pub seed: u64,
    pub samples_left: usize,
    pub samples_right: usize,
}

/// One evaluated condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub value: bool,
    pub exact: bool,
}

impl Condition {
    pub fn exact(name: impl Into<String>, value: bool) -> Self {
        Condition {
            name: name.into(),
            value,
            exact: true,
        }
    }

    pub fn sampled(name: impl Into<String>, value: bool) -> Self {
        Condition {
            name: name.into(),
            value,
            exact: false,
        }
    }

    fn definite(&self) -> bool {
        self.exact || !self.value
    }
}

/// A set of conditions that should all have the same truth value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub name: String,
    pub conditions: Vec<Condition>,
    pub verdict: Verdict,
}

impl Group {
    pub fn new(name: impl Into<String>, conditions: Vec<Condition>) -> Self {
        let all_same = conditions.windows(2).all(|w| w[0].value == w[1].value);
        let definite_true = conditions.iter().any(|c| c.definite() && c.value);
        let definite_false = conditions.iter().any(|c| c.definite() && !c.value);
        let verdict = if all_same {
            Verdict::Pass
        } else if definite_true && definite_false {
            Verdict::Fail
        } else {
            Verdict::Undetermined
        };
        Group {
            name: name.into(),
            conditions,
            verdict,
        }
    }

    /// A single exact assertion.
    pub fn assert(name: impl Into<String>, ok: bool) -> Self {
        Group {
            name: name.into(),
            conditions: vec![Condition::exact("holds", ok)],
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub claim: String,
    pub context: String,
    pub verdict: Verdict,
    pub detail: String,
    pub groups: Vec<Group>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub bounds: Bounds,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// A context with both sides and their samples.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub name: String,
    pub left: BimoduleContext,
    pub right: BimoduleContext,
    pub samples: Samples,
    pub spec: RandomSuiteSpec,
    pub resolution_length: usize,
}

pub const DEFAULT_RESOLUTION_LENGTH: usize = 6;

impl Prepared {
    pub fn new(name: &str, ctx: BimoduleContext, spec: RandomSuiteSpec) -> Result<Prepared> {
        let right = ctx.side_swap();
        let samples = build_samples(&ctx, &right, &spec, name)?;
        Ok(Prepared {
            name: name.into(),
            left: ctx,
            right,
            samples,
            spec,
            resolution_length: DEFAULT_RESOLUTION_LENGTH,
        })
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            ext_bound: self.left.ext_bound(),
            d_max: self.spec.d_max,
            resolution_length: self.resolution_length,
            seed: self.spec.seed,
            samples_left: self.samples.left.modules.len(),
            samples_right: self.samples.right.modules.len(),
        }
    }

    /// Runs the given claims (or all of them) in claim-id order.
    pub fn run(&self, claims: &[&str]) -> Result<Vec<CheckResult>> {
        let mut ids: Vec<&str> = if claims.is_empty() { CLAIMS.to_vec() } else { claims.to_vec() };
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter().map(|c| run_check(self, c)).collect()
    }
}
