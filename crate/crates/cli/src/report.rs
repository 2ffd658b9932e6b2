//! Report envelope and parameter resolution.

use lacunary::criterion::Mode;
use lacunary::lattice::default_delta;
use lacunary::numfield::DEFAULT_PRECISION_CAP;
use lacunary::scalar::parse_rat;
use lacunary::Rat;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::problem::ProblemFile;
use crate::{CliError, Common};

pub const DEFAULT_PREC: u32 = 256;
pub const DEFAULT_HEIGHT: &str = "10000";

/// Fully resolved numeric and mode parameters: flag, else problem file,
/// else default.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub prec: u32,
    pub height: String,
    pub delta: String,
    pub mode: Mode,
    pub strict: bool,
    pub subsets: bool,
    pub precision_cap: u32,
}

impl Params {
    pub fn resolve(args: &Common, problem: &ProblemFile) -> Result<Self, CliError> {
        let p = Params {
            prec: args.prec.or(problem.prec).unwrap_or(DEFAULT_PREC),
            height: args.height.clone().or(problem.height.clone()).unwrap_or(DEFAULT_HEIGHT.into()),
            delta: args.delta.clone().or(problem.delta.clone()).unwrap_or(default_delta().to_string()),
            mode: args.mode.or(problem.mode).unwrap_or(Mode::Theorem2),
            strict: args.strict || problem.strict.unwrap_or(false),
            subsets: args.subsets,
            precision_cap: args.precision_cap.or(problem.precision_cap).unwrap_or(DEFAULT_PRECISION_CAP),
        };
        p.height_int()?;
        p.delta_rat()?;
        if p.prec < 64 {
            return Err(CliError::input(format!("--prec must be at least 64, got {}", p.prec)));
        }
        Ok(p)
    }

    pub fn height_int(&self) -> Result<BigInt, CliError> {
        let h: BigInt = self
            .height
            .parse()
            .map_err(|_| CliError::input(format!("height {:?} is not an integer", self.height)))?;
        if h < BigInt::from(1) {
            return Err(CliError::input(format!("height must be positive, got {h}")));
        }
        Ok(h)
    }

    pub fn delta_rat(&self) -> Result<Rat, CliError> {
        Ok(parse_rat(&self.delta)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Tool {
    pub fn current() -> Self {
        Tool { name: "lacunary".into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl From<&CliError> for ErrorJson {
    fn from(e: &CliError) -> Self {
        ErrorJson { code: e.code, kind: e.kind.into(), message: e.message.clone() }
    }
}

/// Everything that may differ between two otherwise identical runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub unix_time_ms: u128,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: Tool,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Params>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
    pub metadata: Metadata,
}

impl Report {
    /// The report without its metadata, which is all that reproducibility
    /// promises.
    pub fn body(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("metadata");
        }
        v
    }
}
