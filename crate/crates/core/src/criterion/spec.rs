//! Series descriptions `sum_{n>=1} chi(n) P(n) / q^f(n)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::numfield::{elem_to_strings, parse_elem, FieldElem, NumberField};
use crate::polyq::{parse_poly, poly_to_strings, validate_order_poly};
use crate::{Error, FieldPoly, Rat, RatPoly, Result};

/// Periodic coefficient twist: `chi(n) = values[n mod values.len()]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist {
    pub values: Vec<FieldElem>,
}

impl Twist {
    /// `(-1)^n`.
    pub fn alternating() -> Self {
        Twist { values: vec![FieldElem::rational(Rat::from_integer(1.into())), FieldElem::rational(Rat::from_integer((-1).into()))] }
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn at(&self, n: i64) -> &FieldElem {
        &self.values[n.rem_euclid(self.values.len() as i64) as usize]
    }

    /// True when every value equals the first.
    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| *v == self.values[0])
    }
}

/// One series `sum_{n>=1} chi(n) P(n) q^(-f(n))`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub f: RatPoly,
    pub p: FieldPoly,
    pub twist: Option<Twist>,
}

impl SeriesSpec {
    pub fn new(f: RatPoly, p: FieldPoly) -> Self {
        SeriesSpec { f, p, twist: None }
    }

    /// Numerator with rational coefficients.
    pub fn rational(f: RatPoly, p: &RatPoly) -> Self {
        SeriesSpec::new(f, p.map(|c| FieldElem::rational(c.clone())))
    }

    pub fn with_twist(mut self, twist: Twist) -> Self {
        self.twist = Some(twist);
        self
    }

    /// `a(n) = chi(n) P(n)`.
    pub fn coefficient(&self, n: i64) -> FieldElem {
        let x = FieldElem::rational(Rat::from_integer(n.into()));
        let v = self.p.eval(&x);
        match &self.twist {
            Some(t) => t.at(n).clone() * v,
            None => v,
        }
    }

    /// Order polynomial hypotheses, nonzero numerator, nonempty twist.
    pub fn validate(&self) -> Result<()> {
        validate_order_poly(&self.f)?;
        if self.p.is_zero() {
            return Err(Error::Hypothesis("numerator polynomial is zero".into()));
        }
        if let Some(t) = &self.twist {
            if t.values.is_empty() {
                return Err(Error::Hypothesis("twist period must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn twist_period(&self) -> usize {
        self.twist.as_ref().map_or(1, Twist::period)
    }
}


#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistJson {
    pub period: usize,
    pub values: Vec<Vec<String>>,
}

/// JSON form `{"f": [...], "P": [[...], ...], "twist": {...}}`, numerator
/// coefficients given as field coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub f: Vec<String>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistJson>,
}

impl SeriesJson {
    pub fn build(&self, field: &NumberField) -> Result<SeriesSpec> {
        let f = parse_poly(&self.f)?;
        let p = FieldPoly::new(self.p.iter().map(|c| parse_elem(field, c)).collect::<Result<_>>()?);
        let twist = match &self.twist {
            None => None,
            Some(t) => {
                if t.period == 0 || t.values.len() != t.period {
                    return Err(Error::Parse(format!(
                        "twist period {} does not match {} values",
                        t.period,
                        t.values.len()
                    )));
                }
                let values = t.values.iter().map(|v| parse_elem(field, v)).collect::<Result<_>>()?;
                Some(Twist { values })
            }
        };
        Ok(SeriesSpec { f, p, twist })
    }

    pub fn of(s: &SeriesSpec) -> Self {
        SeriesJson {
            f: poly_to_strings(&s.f),
            p: s.p.coeffs().iter().map(elem_to_strings).collect(),
            twist: s.twist.as_ref().map(|t| TwistJson {
                period: t.period(),
                values: t.values.iter().map(elem_to_strings).collect(),
            }),
        }
    }
}
