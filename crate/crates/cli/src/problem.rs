//! Problem files: the JSON input shared by every subcommand.

use std::path::Path;

use lacunary::criterion::{Mode, SeriesJson, SeriesSpec};
use lacunary::numfield::{FieldSpec, NumberField};
use lacunary::polyq::parse_poly;
use lacunary::serieval::Theta;
use lacunary::{Error, RatPoly};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaJson {
    pub function: Theta,
    /// Evaluate at `z = q^-i`.
    #[serde(default = "one")]
    pub i: u32,
    /// Derivative order; only supported at `i = 1`.
    #[serde(default)]
    pub derivative: u32,
}

fn one() -> u32 {
    1
}

/// A sub-collection of the series, decided (or evaluated, or hunted) on
/// its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub series: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesJson>,
    /// Bare order polynomials for `equiv` and `condition`; defaults to the
    /// order polynomials of `series`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polys: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta: Vec<ThetaJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskJson>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let p: ProblemFile =
            serde_json::from_str(text).map_err(|e| CliError::input(format!("schema error: {e}")))?;
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<(), CliError> {
        for (t, task) in self.tasks.iter().enumerate() {
            if task.series.is_empty() {
                return Err(CliError::input(format!("task {t} selects no series")));
            }
            if let Some(&j) = task.series.iter().find(|&&j| j >= self.series.len()) {
                return Err(CliError::input(format!("task {t} refers to missing series {j}")));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Result<NumberField, CliError> {
        let spec = self.field.as_ref().ok_or_else(|| CliError::input("problem has no \"field\"".into()))?;
        Ok(spec.build()?)
    }

    pub fn series_specs(&self, field: &NumberField) -> Result<Vec<SeriesSpec>, CliError> {
        self.series
            .iter()
            .enumerate()
            .map(|(j, s)| s.build(field).map_err(|e| CliError::from(e).context(format!("series {j}"))))
            .collect()
    }

    /// Order polynomials: `polys` if given, else those of `series`.
    pub fn order_polys(&self) -> Result<Vec<RatPoly>, CliError> {
        let raw: Vec<&Vec<String>> = if self.polys.is_empty() {
            self.series.iter().map(|s| &s.f).collect()
        } else {
            self.polys.iter().collect()
        };
        if raw.is_empty() {
            return Err(CliError::input("problem has neither \"polys\" nor \"series\"".into()));
        }
        Ok(raw.into_iter().map(|c| parse_poly(c)).collect::<Result<_, Error>>()?)
    }

    /// The task list, defaulting to one task over every series.
    pub fn task_list(&self) -> Vec<TaskJson> {
        if self.tasks.is_empty() {
            vec![TaskJson { label: None, series: (0..self.series.len()).collect() }]
        } else {
            self.tasks.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        let e = ProblemFile::parse(r#"{"field": {"min_poly": ["-2", "1"], "root_hint": ["1", "3"]}, "colour": 1}"#)
            .unwrap_err();
        assert_eq!(e.code, 3);
        assert!(e.message.contains("colour"), "{}", e.message);
    }

    #[test]
    fn task_bounds_checked() {
        let e = ProblemFile::parse(r#"{"series": [], "tasks": [{"series": [0]}]}"#).unwrap_err();
        assert!(e.message.contains("missing series 0"));
    }

    #[test]
    fn roundtrip() {
        let text = r#"{"polys": [["0","0","1"]], "mode": "corollary1", "prec": 128}"#;
        let p = ProblemFile::parse(text).unwrap();
        let again = ProblemFile::parse(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, again);
    }
}
