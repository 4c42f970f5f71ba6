//! Serde helper writing non-finite floats as the strings "inf", "-inf" and
//! "nan", which JSON cannot represent as numbers.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(f64),
    Tag(String),
}

pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    match Repr::deserialize(d)? {
        Repr::Num(v) => Ok(v),
        Repr::Tag(t) => match t.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(serde::de::Error::custom(format!("unexpected float tag {other:?}"))),
        },
    }
}

/// The same encoding for vectors of floats.
pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Wrapped(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }

    #[derive(Serialize, Deserialize)]
    struct Wrapped(#[serde(with = "super")] f64);
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    struct Probe {
        #[serde(with = "super")]
        v: f64,
    }

    #[test]
    fn infinity_round_trips_as_string() {
        let s = serde_json::to_string(&Probe { v: f64::INFINITY }).unwrap();
        assert_eq!(s, r#"{"v":"inf"}"#);
        let back: Probe = serde_json::from_str(&s).unwrap();
        assert_eq!(back.v, f64::INFINITY);
        let back: Probe = serde_json::from_str(r#"{"v":0.25}"#).unwrap();
        assert_eq!(back.v, 0.25);
    }
}
