//! Exact truncated formal power series in `q` and in `(x, q)`.
//!
//! Coefficients are stored densely up to and including the truncation
//! order `N`. Nothing here ever extends precision on its own: binary
//! operations require equal orders, and substitutions refuse to run when
//! the operand is too short to supply every requested coefficient.

mod bivariate;
mod product;

pub use bivariate::{SeriesXQ, Substitution};
pub use product::{expand_product, expand_product_q, Factor, ProductSpec};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, usage, Error, Result};

/// Truncated series `c_0 + c_1 q + ... + c_N q^N` with exact integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesQ {
    coeffs: Vec<BigInt>,
}

impl SeriesQ {
    pub fn zero(order: usize) -> Self {
        SeriesQ {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, BigInt::one(), order)
    }

    /// `c q^n`, or zero when `n` lies beyond the truncation order.
    pub fn monomial(n: usize, c: BigInt, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = c;
        }
        s
    }

    /// Builds a series from coefficients `c_0..c_N`; the order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(usage("a series needs at least the constant coefficient"));
        }
        Ok(SeriesQ { coeffs })
    }

    /// Small-integer convenience constructor; missing coefficients are zero,
    /// extra ones are dropped.
    pub fn from_i64s(values: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (c, v) in s.coeffs.iter_mut().zip(values) {
            *c = BigInt::from(*v);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&BigInt> {
        self.coeffs.get(n).ok_or(Error::OutOfRange {
            index: n,
            order: self.order(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lowers the truncation order. Raising it is refused: the missing
    /// coefficients are unknown, not zero.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InsufficientPrecision {
                needed: order,
                available: self.order(),
            });
        }
        Ok(SeriesQ {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(usage(format!(
                "truncation orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SeriesQ { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SeriesQ { coeffs })
    }

    pub fn neg(&self) -> Self {
        SeriesQ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        SeriesQ {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be `1` or `-1`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(domain(format!(
                "cannot invert a series with constant term {c0}"
            )));
        }
        let order = self.order();
        let mut g = Self::zero(order);
        g.coeffs[0] = c0.clone();
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &g.coeffs[n - j];
                }
            }
            // c0 = ±1, so dividing by c0 is multiplying by it.
            g.coeffs[n] = -(acc * c0);
        }
        Ok(g)
    }

    /// Multiplies by `q^shift`, dropping what falls past the order.
    pub fn shift(&self, shift: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for n in shift..=order {
            out.coeffs[n] = self.coeffs[n - shift].clone();
        }
        out
    }

    /// In place `f <- f * (1 + sign * q^exp)`.
    pub fn mul_binomial(&mut self, sign: i64, exp: usize) {
        let order = self.order();
        if exp == 0 {
            let factor = BigInt::from(1 + sign);
            for c in &mut self.coeffs {
                *c *= &factor;
            }
            return;
        }
        for n in (exp..=order).rev() {
            let prev = self.coeffs[n - exp].clone();
            self.coeffs[n] += prev * sign;
        }
    }

    /// In place `f <- f / (1 + sign * q^exp)` for `exp >= 1`.
    pub fn div_binomial(&mut self, sign: i64, exp: usize) -> Result<()> {
        if exp == 0 {
            return Err(domain("division by a binomial without a q-power"));
        }
        for n in exp..=self.order() {
            let prev = self.coeffs[n - exp].clone();
            self.coeffs[n] -= prev * sign;
        }
        Ok(())
    }

    /// `f(q) -> f(q^m)` truncated at `order`; needs `self.order() >= order / m`.
    pub fn substitute_q_power(&self, m: usize, order: usize) -> Result<Self> {
        if m == 0 {
            return Err(usage("q must be replaced by a positive power of q"));
        }
        let needed = order / m;
        if needed > self.order() {
            return Err(Error::InsufficientPrecision {
                needed,
                available: self.order(),
            });
        }
        let mut out = Self::zero(order);
        for n in 0..=needed {
            out.coeffs[n * m] = self.coeffs[n].clone();
        }
        Ok(out)
    }

    /// First index where the two series differ, with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, BigInt, BigInt)> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(n, (a, b))| (n, a.clone(), b.clone()))
    }
}

impl fmt::Display for SeriesQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if wrote {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            match (n, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{mag}q^{n}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesQRepr {
    #[serde(rename = "N")]
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for SeriesQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesQRepr {
            order: self.order(),
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SeriesQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SeriesQRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(D::Error::custom(format!(
                "expected {} coefficients, found {}",
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(SeriesQ { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(order: usize) -> SeriesQ {
        SeriesQ::from_i64s(&vec![1; order + 1], order)
    }

    #[test]
    fn difference_of_squares() {
        let a = SeriesQ::from_i64s(&[1, 1], 5);
        let b = SeriesQ::from_i64s(&[1, -1], 5);
        assert_eq!(a.mul(&b).unwrap(), SeriesQ::from_i64s(&[1, 0, -1], 5));
    }

    #[test]
    fn multiply_by_one() {
        let f = SeriesQ::from_i64s(&[3, -1, 4, 1, -5], 6);
        assert_eq!(f.mul(&SeriesQ::one(6)).unwrap(), f);
    }

    #[test]
    fn geometric_times_one_minus_q() {
        let g = geometric(8);
        let one_minus_q = SeriesQ::from_i64s(&[1, -1], 8);
        assert_eq!(g.mul(&one_minus_q).unwrap(), SeriesQ::one(8));
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let err = SeriesQ::one(3).mul(&SeriesQ::one(4)).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
        assert!(matches!(
            SeriesQ::one(3).add(&SeriesQ::one(4)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn invert_geometric() {
        let f = SeriesQ::from_i64s(&[1, -1], 4);
        assert_eq!(f.invert().unwrap(), geometric(4));
        assert_eq!(SeriesQ::one(4).invert().unwrap(), SeriesQ::one(4));
        let neg = SeriesQ::from_i64s(&[-1, 1], 4);
        assert_eq!(neg.invert().unwrap(), geometric(4).neg());
    }

    #[test]
    fn invert_rejects_non_unit() {
        let f = SeriesQ::from_i64s(&[2, 1], 4);
        assert!(matches!(f.invert(), Err(Error::Domain(_))));
        assert!(matches!(SeriesQ::zero(3).invert(), Err(Error::Domain(_))));
    }

    #[test]
    fn coefficient_access() {
        let f = SeriesQ::from_i64s(&[1, 0, 3], 2);
        assert_eq!(f.coeff(2).unwrap(), &BigInt::from(3));
        assert_eq!(
            f.coeff(3).unwrap_err(),
            Error::OutOfRange { index: 3, order: 2 }
        );
    }

    #[test]
    fn binomial_helpers_match_full_products() {
        let mut f = SeriesQ::from_i64s(&[1, 2, 3, 4, 5, 6], 5);
        let g = f.clone();
        f.mul_binomial(-1, 2);
        let expect = g.mul(&SeriesQ::from_i64s(&[1, 0, -1], 5)).unwrap();
        assert_eq!(f, expect);
        f.div_binomial(-1, 2).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn substitution_needs_enough_precision() {
        let f = geometric(3);
        let s = f.substitute_q_power(2, 6).unwrap();
        assert_eq!(s, SeriesQ::from_i64s(&[1, 0, 1, 0, 1, 0, 1], 6));
        assert_eq!(
            f.substitute_q_power(2, 8).unwrap_err(),
            Error::InsufficientPrecision {
                needed: 4,
                available: 3
            }
        );
    }

    #[test]
    fn json_shape() {
        let f = SeriesQ::from_i64s(&[1, -2], 2);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"N":2,"coeffs":["1","-2","0"]}"#);
        let back: SeriesQ = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<SeriesQ>(r#"{"N":3,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn display() {
        let f = SeriesQ::from_i64s(&[1, -1, 0, 2], 3);
        assert_eq!(f.to_string(), "1 - q + 2q^3 + O(q^4)");
    }
}
