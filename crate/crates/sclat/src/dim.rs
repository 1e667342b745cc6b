use serde::de::Error as _;
use std::fmt;

/// A dimension value: either a non-negative integer or minus infinity
/// (the dimension of the bottom element).
///
/// The derived `Ord` puts `NegInf` below every `Finite(_)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    NegInf,
    Finite(u32),
}

impl Dim {
    pub fn finite(self) -> Option<u32> {
        match self {
            Dim::NegInf => None,
            Dim::Finite(n) => Some(n),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == Dim::NegInf
    }

    /// `self < k` as integers, with `NegInf` below everything.
    pub fn lt(self, k: u32) -> bool {
        match self {
            Dim::NegInf => true,
            Dim::Finite(n) => n < k,
        }
    }

    pub fn max(self, other: Dim) -> Dim {
        std::cmp::max(self, other)
    }
}

impl From<u32> for Dim {
    fn from(n: u32) -> Dim {
        Dim::Finite(n)
    }
}

impl PartialEq<u32> for Dim {
    fn eq(&self, other: &u32) -> bool {
        matches!(self, Dim::Finite(n) if n == other)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::NegInf => write!(f, "-inf"),
            Dim::Finite(n) => write!(f, "{n}"),
        }
    }
}

impl serde::Serialize for Dim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Dim::NegInf => s.serialize_str("-inf"),
            Dim::Finite(n) => s.serialize_u32(*n),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Dim {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Dim, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) if s == "-inf" => Ok(Dim::NegInf),
            serde_json::Value::Number(n) => n
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .map(Dim::Finite)
                .ok_or_else(|| D::Error::custom("dimension out of range")),
            _ => Err(D::Error::custom("expected non-negative integer or \"-inf\"")),
        }
    }
}
