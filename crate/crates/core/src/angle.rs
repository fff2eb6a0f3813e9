//! Angle arithmetic on the circle.
//!
//! Every angle that leaves this crate is canonical, i.e. lies in `(-π, π]`.
//! Comparisons between angles are always made modulo `2π`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default tolerance (radians) for treating two angles as equal.
pub const ANGLE_TOLERANCE: f64 = 1e-9;

/// Reduces `theta` into the canonical range `(-π, π]`.
pub fn wrap(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let mut r = theta.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    // rem_euclid can land on exactly TAU for tiny negative inputs
    if r <= -PI {
        r += TAU;
    }
    r
}

/// Shortest distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

/// Midpoint of `a` and `b` taken along the shorter arc joining them.
///
/// Symmetric in its arguments. For antipodal points `(a + b)/2` is returned.
pub fn circular_midpoint(a: f64, b: f64) -> f64 {
    let (a, b) = (wrap(a), wrap(b));
    let mid = (a + b) / 2.0;
    if (a - b).abs() <= PI {
        wrap(mid)
    } else {
        wrap(mid + PI)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse angle `{0}`: expected a number or a multiple of pi such as `4pi/10`")]
pub struct AngleParseError(pub String);

/// Parses an angle written either as a plain number of radians (`0.31`) or as a
/// rational multiple of π (`pi`, `-pi/2`, `4pi/10`, `3*pi/8`, `0.5pi`).
pub fn parse_angle(text: &str) -> Result<f64, AngleParseError> {
    let err = || AngleParseError(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err());
    }
    let lower = s.to_ascii_lowercase();
    let Some(pi_at) = lower.find("pi").or_else(|| lower.find('π')) else {
        return lower
            .parse::<f64>()
            .map_err(|_| err())
            .and_then(|v| if v.is_finite() { Ok(v) } else { Err(err()) });
    };
    let pi_len = if lower[pi_at..].starts_with("pi") {
        2
    } else {
        'π'.len_utf8()
    };
    let head = lower[..pi_at].trim_end_matches('*');
    let tail = &lower[pi_at + pi_len..];

    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| err())?,
    };
    let denom = if tail.is_empty() {
        1.0
    } else if let Some(d) = tail.strip_prefix('/') {
        d.parse::<f64>().map_err(|_| err())?
    } else {
        return Err(err());
    };
    if denom == 0.0 || !coef.is_finite() || !denom.is_finite() {
        return Err(err());
    }
    Ok(coef * PI / denom)
}

/// An angle that can be written in configuration files either as radians or
/// as a multiple of π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(pub f64);

impl Angle {
    pub fn radians(self) -> f64 {
        self.0
    }
}

impl FromStr for Angle {
    type Err = AngleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_angle(s).map(Angle)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl serde::Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> serde::Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = Angle;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an angle in radians or a string such as \"4pi/10\"")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle(v))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Angle, E> {
                parse_angle(v).map(Angle).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}
