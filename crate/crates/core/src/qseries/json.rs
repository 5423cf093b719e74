//! JSON form of a series:
//! `{ "eta_offset": "d/24", "precision": N, "coeffs": ["num/den", ...] }`.
//! Every number is an exact string.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::QSeries;
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, parse_rational, PadicValuation, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeriesJson {
    pub eta_offset: String,
    pub precision: usize,
    pub coeffs: Vec<String>,
}

impl From<&QSeries> for QSeriesJson {
    fn from(s: &QSeries) -> Self {
        Self {
            eta_offset: format!("{}/24", s.offset_24ths()),
            precision: s.precision(),
            coeffs: s.coeffs().iter().map(format_rational).collect(),
        }
    }
}

impl TryFrom<QSeriesJson> for QSeries {
    type Error = Error;

    fn try_from(j: QSeriesJson) -> Result<Self> {
        if j.coeffs.len() != j.precision {
            return Err(Error::Parse(format!(
                "precision {} but {} coefficients",
                j.precision,
                j.coeffs.len()
            )));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()?;
        QSeries::new(coeffs, parse_rational(&j.eta_offset)?)
    }
}

impl QSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&QSeriesJson::from(self)).expect("plain strings serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: QSeriesJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("series JSON: {e}")))?;
        QSeries::try_from(j)
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = QSeriesJson::deserialize(de)?;
        QSeries::try_from(j).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn ser_rational<S: Serializer>(
    x: &Rational,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_rational(x))
}

/// Finite valuations as JSON integers, `+inf` as the string `"inf"`.
pub(crate) fn ser_valuation<S: Serializer>(
    v: &PadicValuation,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        PadicValuation::Finite(n) => ser.serialize_i64(*n),
        PadicValuation::Infinite => ser.serialize_str("inf"),
    }
}

pub(crate) fn ser_opt_valuation<S: Serializer>(
    v: &Option<PadicValuation>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_valuation(v, ser),
        None => ser.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::ratio;
    use crate::qseries::{eisenstein_g, eta_power};

    #[test]
    fn schema_is_exact_strings() {
        let s = eta_power(-8, 3);
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["eta_offset"], "-8/24");
        assert_eq!(v["precision"], 3);
        assert_eq!(v["coeffs"], serde_json::json!(["1", "8", "44"]));
    }

    #[test]
    fn rationals_keep_their_denominators() {
        let g = eisenstein_g(2, 2).unwrap();
        assert_eq!(
            g.to_json(),
            r#"{"eta_offset":"0/24","precision":2,"coeffs":["-1/24","1"]}"#
        );
    }

    #[test]
    fn parse_rejects_inconsistent_precision() {
        let bad = r#"{"eta_offset":"0/24","precision":3,"coeffs":["1"]}"#;
        assert!(QSeries::from_json(bad).is_err());
        let bad_offset = r#"{"eta_offset":"1/7","precision":1,"coeffs":["1"]}"#;
        assert!(QSeries::from_json(bad_offset).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn emitted_json_round_trips(
                coeffs in prop::collection::vec((-500i64..500, 1i64..97), 1..12),
                d in -48i64..48,
            ) {
                let s = QSeries::from_coeffs(coeffs.into_iter().map(|(n, m)| ratio(n, m)).collect())
                    .with_eta_offset(ratio(d, 24))
                    .unwrap();
                let text = s.to_json();
                let back = QSeries::from_json(&text).unwrap();
                prop_assert_eq!(&back, &s);
                prop_assert_eq!(back.to_json(), text);
            }
        }
    }
}
