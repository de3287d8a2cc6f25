//! Exact quantities used by the cost model.
//!
//! Money is held in paise and quantities in kilograms so that every cost in
//! the model is an integer; rounding happens only where the model says so.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};

use serde::{Serialize, Serializer};

/// Amount of money in minor units (paise; 100 per rupee).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_paise(paise: i64) -> Self {
        Money(paise)
    }

    pub const fn from_rupees(rupees: i64) -> Self {
        Money(rupees * 100)
    }

    /// Rounds to the nearest paisa.
    pub fn from_rupees_f64(rupees: f64) -> Self {
        Money((rupees * 100.0).round() as i64)
    }

    pub const fn paise(self) -> i64 {
        self.0
    }

    pub fn rupees(self) -> f64 {
        self.0 as f64 / 100.0
    }

    pub fn scale(self, factor: u64) -> Self {
        Money(self.0 * factor as i64)
    }

    /// Digits grouped in thousands: `37,312,500`.
    pub fn grouped(self) -> String {
        let plain = self.to_string();
        let (sign, rest) = plain.strip_prefix('-').map_or(("", plain.as_str()), |r| ("-", r));
        let (int, frac) = rest.split_once('.').map_or((rest, None), |(i, f)| (i, Some(f)));
        let mut out = String::new();
        for (i, c) in int.chars().enumerate() {
            if i > 0 && (int.len() - i) % 3 == 0 {
                out.push(',');
            }
            out.push(c);
        }
        match frac {
            Some(f) => format!("{sign}{out}.{f}"),
            None => format!("{sign}{out}"),
        }
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        if abs % 100 == 0 {
            write!(f, "{sign}{}", abs / 100)
        } else {
            write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
        }
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl std::iter::Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

/// Mass in whole kilograms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Quantity(u64);

impl Quantity {
    pub const ZERO: Quantity = Quantity(0);

    pub const fn from_kg(kg: u64) -> Self {
        Quantity(kg)
    }

    pub const fn from_tons(tons: u64) -> Self {
        Quantity(tons * 1000)
    }

    /// Rounds to the nearest kilogram; `None` for negative or non-finite input.
    pub fn from_tons_f64(tons: f64) -> Option<Self> {
        (tons.is_finite() && tons >= 0.0).then(|| Quantity((tons * 1000.0).round() as u64))
    }

    pub const fn kg(self) -> u64 {
        self.0
    }

    pub fn tons(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn min(self, other: Quantity) -> Quantity {
        Quantity(self.0.min(other.0))
    }

    pub fn saturating_sub(self, other: Quantity) -> Quantity {
        Quantity(self.0.saturating_sub(other.0))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 1000 == 0 {
            write!(f, "{}", self.0 / 1000)
        } else {
            let s = format!("{}.{:03}", self.0 / 1000, self.0 % 1000);
            f.write_str(s.trim_end_matches('0'))
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.tons())
    }
}

impl Add for Quantity {
    type Output = Quantity;
    fn add(self, rhs: Quantity) -> Quantity {
        Quantity(self.0 + rhs.0)
    }
}

impl Sub for Quantity {
    type Output = Quantity;
    fn sub(self, rhs: Quantity) -> Quantity {
        Quantity(self.0 - rhs.0)
    }
}

impl std::iter::Sum for Quantity {
    fn sum<I: Iterator<Item = Quantity>>(iter: I) -> Quantity {
        iter.fold(Quantity::ZERO, Add::add)
    }
}

/// A percentage held in millionths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Percent(u64);

const PERCENT_SCALE: u64 = 1_000_000;

impl Percent {
    pub fn from_f64(pct: f64) -> Option<Self> {
        (pct.is_finite() && (0.0..=100.0).contains(&pct))
            .then(|| Percent((pct * PERCENT_SCALE as f64).round() as u64))
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / PERCENT_SCALE as f64
    }

    /// `q * pct / 100` in tons, as an exact fraction `(numerator, denominator)`.
    fn tons_of(self, q: Quantity) -> (u128, u128) {
        (q.kg() as u128 * self.0 as u128, 100 * 1000 * PERCENT_SCALE as u128)
    }

    /// Tons of `q` covered by this percentage, rounded half up.
    pub fn round_half_up_tons(self, q: Quantity) -> u64 {
        let (num, den) = self.tons_of(q);
        ((2 * num + den) / (2 * den)) as u64
    }

    /// Tons of `q` covered by this percentage, rounded up.
    pub fn ceil_tons(self, q: Quantity) -> u64 {
        let (num, den) = self.tons_of(q);
        num.div_ceil(den) as u64
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}
