//! Unreduced dihedral-angle fractions.
//!
//! An [`AngleFraction`] `k/q` stands for the angle `kπ/q` split into `k`
//! fundamental parts of `π/q`. The pair is never reduced: `2/4` and `1/2`
//! denote the same angle but different decompositions.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Float, FloatConst};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("invalid angle fraction {parts}/{denom}: need 1 <= parts < denom and denom >= 2")]
    Invalid { parts: u32, denom: u32 },
    #[error("denominator mismatch merging {0} and {1}")]
    DenominatorMismatch(AngleFraction, AngleFraction),
    #[error("merging {0} and {1} exceeds a straight angle")]
    NonConvex(AngleFraction, AngleFraction),
    #[error("cannot parse angle fraction {0:?}")]
    Parse(String),
}

/// Dihedral angle `parts·π/denom` made of `parts` copies of `π/denom`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleFraction {
    parts: u32,
    denom: u32,
}

/// Outcome of placing two angles side by side around a common edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeResult {
    Angle(AngleFraction),
    /// The two angles add up to exactly π: the faces become coplanar.
    Flat,
}

impl AngleFraction {
    pub fn new(parts: u32, denom: u32) -> Result<Self, AngleError> {
        if parts == 0 || denom < 2 || parts >= denom {
            return Err(AngleError::Invalid { parts, denom });
        }
        Ok(Self { parts, denom })
    }

    /// The single-part angle `π/denom`.
    pub fn fundamental(denom: u32) -> Self {
        assert!(denom >= 2, "fundamental angle needs denom >= 2");
        Self { parts: 1, denom }
    }

    pub fn parts(self) -> u32 {
        self.parts
    }

    pub fn denom(self) -> u32 {
        self.denom
    }

    pub fn is_fundamental(self) -> bool {
        self.parts == 1
    }

    /// Angle in units of π, as an exact rational.
    pub fn ratio(self) -> Ratio<i64> {
        Ratio::new(self.parts as i64, self.denom as i64)
    }

    /// Angle in radians.
    pub fn value<T: Float + FloatConst>(self) -> T {
        T::PI() * T::from(self.parts).unwrap() / T::from(self.denom).unwrap()
    }

    /// Whether the angle is a Coxeter angle `π/m` (it may still be split).
    pub fn is_submultiple_of_pi(self) -> bool {
        self.denom.is_multiple_of(self.parts)
    }

    pub fn merge(self, other: Self) -> Result<MergeResult, AngleError> {
        if self.denom != other.denom {
            return Err(AngleError::DenominatorMismatch(self, other));
        }
        let total = self.parts + other.parts;
        match total.cmp(&self.denom) {
            std::cmp::Ordering::Less => Ok(MergeResult::Angle(Self {
                parts: total,
                denom: self.denom,
            })),
            std::cmp::Ordering::Equal => Ok(MergeResult::Flat),
            std::cmp::Ordering::Greater => Err(AngleError::NonConvex(self, other)),
        }
    }
}

/// Convenience alias for [`AngleFraction::value`] at `f64`.
pub fn angle_value(a: AngleFraction) -> f64 {
    a.value::<f64>()
}

impl fmt::Display for AngleFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.parts, self.denom)
    }
}

impl FromStr for AngleFraction {
    type Err = AngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AngleError::Parse(s.to_string());
        let (k, q) = s.split_once('/').ok_or_else(err)?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(k) || !digits(q) {
            return Err(err());
        }
        let parts: u32 = k.parse().map_err(|_| err())?;
        let denom: u32 = q.parse().map_err(|_| err())?;
        // Leading zeros would break the bit-exact round trip.
        if parts.to_string() != k || denom.to_string() != q {
            return Err(err());
        }
        Self::new(parts, denom)
    }
}

impl Serialize for AngleFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AngleFraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn af(k: u32, q: u32) -> AngleFraction {
        AngleFraction::new(k, q).unwrap()
    }

    #[test]
    fn merge_examples() {
        assert_eq!(af(1, 4).merge(af(1, 4)), Ok(MergeResult::Angle(af(2, 4))));
        assert!(matches!(
            af(1, 3).merge(af(1, 4)),
            Err(AngleError::DenominatorMismatch(..))
        ));
        assert_eq!(af(2, 5).merge(af(3, 5)), Ok(MergeResult::Flat));
        assert!(matches!(
            af(3, 5).merge(af(3, 5)),
            Err(AngleError::NonConvex(..))
        ));
    }

    #[test]
    fn values_and_fundamentality() {
        assert!((angle_value(af(1, 2)) - PI / 2.0).abs() < 1e-15);
        assert!((angle_value(af(2, 4)) - PI / 2.0).abs() < 1e-15);
        assert!((angle_value(af(1, 5)) - PI / 5.0).abs() < 1e-15);
        assert_ne!(af(1, 2), af(2, 4));
        assert!(af(1, 7).is_fundamental());
        assert!(!af(2, 4).is_fundamental());
        assert!(!af(3, 5).is_fundamental());
        assert!((af(1, 3).value::<f32>() - std::f32::consts::FRAC_PI_3).abs() < 1e-6);
    }

    #[test]
    fn invalid_fractions_rejected() {
        assert!(AngleFraction::new(0, 3).is_err());
        assert!(AngleFraction::new(1, 1).is_err());
        assert!(AngleFraction::new(4, 4).is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(af(2, 4).to_string(), "2/4");
        assert_eq!("3/5".parse::<AngleFraction>().unwrap(), af(3, 5));
        for bad in ["", "1", "1/", "/2", "01/2", "1/02", "1 /2", "+1/2", "1/2/3", "2/2"] {
            assert!(bad.parse::<AngleFraction>().is_err(), "{bad}");
        }
        let json = serde_json::to_string(&af(2, 4)).unwrap();
        assert_eq!(json, "\"2/4\"");
        assert_eq!(serde_json::from_str::<AngleFraction>(&json).unwrap(), af(2, 4));
    }
}
