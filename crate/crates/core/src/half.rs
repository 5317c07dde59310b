//! Exact half-integers stored as twice their value.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A half-integer `n/2`, stored as the integer `n`.
///
/// Used for both the spin `j` and the projection `m`; arithmetic on the
/// stored value keeps basis indexing exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInteger {
    twice: i32,
}

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { twice: 0 };
    pub const HALF: HalfInteger = HalfInteger { twice: 1 };
    pub const ONE: HalfInteger = HalfInteger { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        HalfInteger { twice }
    }

    pub const fn from_integer(n: i32) -> Self {
        HalfInteger { twice: 2 * n }
    }

    /// Converts a float, failing unless it is a multiple of 1/2 within 1e-9.
    pub fn from_f64(x: f64) -> Result<Self, Error> {
        let t = 2.0 * x;
        let r = t.round();
        if !x.is_finite() || (t - r).abs() > 1e-9 || r.abs() > i32::MAX as f64 {
            return Err(Error::InvalidHalfInteger(format!("{x}")));
        }
        Ok(HalfInteger { twice: r as i32 })
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// `j(j+1)`.
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }

    /// True when `self`, read as `m`, is a valid projection for spin `j`.
    pub fn is_projection_of(self, j: HalfInteger) -> bool {
        j.twice >= 0 && self.twice.abs() <= j.twice && (j.twice - self.twice) % 2 == 0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInteger {
    type Err = Error;

    /// Accepts `"3/2"`, `"-1/2"`, `"2"` or a decimal such as `"1.5"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::InvalidHalfInteger(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Ok(HalfInteger::from_twice(num)),
                "1" => num.checked_mul(2).map(HalfInteger::from_twice).ok_or_else(bad),
                _ => Err(bad()),
            };
        }
        if let Ok(n) = s.parse::<i32>() {
            return n.checked_mul(2).map(HalfInteger::from_twice).ok_or_else(bad);
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        HalfInteger::from_f64(x).map_err(|_| bad())
    }
}
