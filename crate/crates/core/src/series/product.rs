use std::fmt;

use super::{SeriesQ, SeriesXQ};
use crate::error::{domain, usage, Result};

/// One q-Pochhammer factor `(s x^e q^c; q^d)_n = prod_{j<n} (1 - s x^e q^{c+jd})`,
/// infinite when `length` is `None`, in the denominator when `inverted`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub sign: i64,
    pub x_power: usize,
    pub base: usize,
    pub step: usize,
    pub length: Option<usize>,
    pub inverted: bool,
}

impl Factor {
    /// `(q^base; q^step)_inf`.
    pub fn poch(base: usize, step: usize) -> Self {
        Factor {
            sign: 1,
            x_power: 0,
            base,
            step,
            length: None,
            inverted: false,
        }
    }

    /// `(-q^base; q^step)_inf`.
    pub fn poch_neg(base: usize, step: usize) -> Self {
        Factor {
            sign: -1,
            ..Self::poch(base, step)
        }
    }

    pub fn take(self, length: usize) -> Self {
        Factor {
            length: Some(length),
            ..self
        }
    }

    pub fn with_x(self, x_power: usize) -> Self {
        Factor { x_power, ..self }
    }

    pub fn inverse(self) -> Self {
        Factor {
            inverted: !self.inverted,
            ..self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.step == 0 {
            return Err(usage("q-Pochhammer step must be at least 1"));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(usage("q-Pochhammer base sign must be +1 or -1"));
        }
        if self.inverted && self.base == 0 && self.length != Some(0) {
            return Err(domain(
                "a denominator factor with q^0 in its base is not a unit series",
            ));
        }
        Ok(())
    }

    /// q-exponents `c + jd` of the sub-factors that matter below `q^order`.
    fn exponents(&self, order: usize) -> impl Iterator<Item = usize> + '_ {
        let limit = self.length.unwrap_or(usize::MAX);
        (0..limit)
            .map(move |j| self.base + j * self.step)
            .take_while(move |&e| e <= order)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        let x = match self.x_power {
            0 => String::new(),
            1 => "x".to_string(),
            e => format!("x^{e}"),
        };
        let q = match self.base {
            0 if x.is_empty() => "1".to_string(),
            0 => String::new(),
            1 => "q".to_string(),
            c => format!("q^{c}"),
        };
        let step = if self.step == 1 {
            "q".to_string()
        } else {
            format!("q^{}", self.step)
        };
        let len = self
            .length
            .map_or_else(|| "inf".to_string(), |n| n.to_string());
        write!(f, "({sign}{x}{q};{step})_{len}")
    }
}

/// A finite product of q-Pochhammer factors and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ProductSpec {
    pub factors: Vec<Factor>,
}

impl ProductSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn times(mut self, factor: Factor) -> Self {
        self.factors.push(factor);
        self
    }

    pub fn over(mut self, factor: Factor) -> Self {
        self.factors.push(factor.inverse());
        self
    }

    /// Multiplies by the triple product `(q^a, q^{m-a}, q^m; q^m)_inf`.
    pub fn triple(self, a: usize, modulus: usize) -> Self {
        self.times(Factor::poch(a, modulus))
            .times(Factor::poch(modulus - a, modulus))
            .times(Factor::poch(modulus, modulus))
    }

    /// Named products exposed on the command line.
    pub fn named(name: &str) -> Option<Self> {
        let spec = match name {
            "euler" => Self::new().times(Factor::poch(1, 1)),
            "partitions" => Self::new().over(Factor::poch(1, 1)),
            "overpartitions" => Self::new()
                .times(Factor::poch_neg(1, 1))
                .over(Factor::poch(1, 1)),
            "distinct" => Self::new().times(Factor::poch_neg(1, 1)),
            "odd" => Self::new().over(Factor::poch(1, 2)),
            _ => return None,
        };
        Some(spec)
    }

    pub const NAMES: [&'static str; 5] = ["euler", "partitions", "overpartitions", "distinct", "odd"];

    pub fn has_x(&self) -> bool {
        self.factors.iter().any(|f| f.x_power > 0)
    }

    fn validate(&self) -> Result<()> {
        self.factors.iter().try_for_each(Factor::validate)
    }

    /// In place `f <- f * product`.
    pub fn apply_xq(&self, f: &mut SeriesXQ) -> Result<()> {
        self.validate()?;
        let order = f.order();
        for factor in &self.factors {
            let sign = -factor.sign;
            for e in factor.exponents(order) {
                if factor.inverted {
                    f.div_binomial(sign, factor.x_power, e)?;
                } else {
                    f.mul_binomial(sign, factor.x_power, e);
                }
            }
        }
        Ok(())
    }

    /// In place `f <- f * product`; the product must not involve `x`.
    pub fn apply_q(&self, f: &mut SeriesQ) -> Result<()> {
        self.validate()?;
        if self.has_x() {
            return Err(usage("product involves x; expand it as a two-variable series"));
        }
        let order = f.order();
        for factor in &self.factors {
            let sign = -factor.sign;
            for e in factor.exponents(order) {
                if factor.inverted {
                    f.div_binomial(sign, e)?;
                } else {
                    f.mul_binomial(sign, e);
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num: Vec<String> = self
            .factors
            .iter()
            .filter(|x| !x.inverted)
            .map(ToString::to_string)
            .collect();
        let den: Vec<String> = self
            .factors
            .iter()
            .filter(|x| x.inverted)
            .map(ToString::to_string)
            .collect();
        let num = if num.is_empty() { "1".to_string() } else { num.join(" ") };
        if den.is_empty() {
            write!(f, "{num}")
        } else {
            write!(f, "{num} / {}", den.join(" "))
        }
    }
}

/// Exact expansion of `spec` as a two-variable series up to `q^order`.
pub fn expand_product(spec: &ProductSpec, order: usize) -> Result<SeriesXQ> {
    let mut f = SeriesXQ::one(order);
    spec.apply_xq(&mut f)?;
    Ok(f)
}

/// Exact expansion of an `x`-free product up to `q^order`.
pub fn expand_product_q(spec: &ProductSpec, order: usize) -> Result<SeriesQ> {
    let mut f = SeriesQ::one(order);
    spec.apply_q(&mut f)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn euler_function_pentagonal() {
        let f = expand_product_q(&ProductSpec::named("euler").unwrap(), 12).unwrap();
        let expect = SeriesQ::from_i64s(&[1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1], 12);
        assert_eq!(f, expect);
    }

    #[test]
    fn overpartition_generating_function() {
        let f = expand_product_q(&ProductSpec::named("overpartitions").unwrap(), 4).unwrap();
        assert_eq!(f, SeriesQ::from_i64s(&[1, 2, 4, 8, 14], 4));
    }

    #[test]
    fn empty_product_is_one() {
        assert_eq!(expand_product_q(&ProductSpec::new(), 7).unwrap(), SeriesQ::one(7));
        assert_eq!(expand_product(&ProductSpec::new(), 7).unwrap(), SeriesXQ::one(7));
    }

    #[test]
    fn euler_distinct_equals_odd() {
        let distinct = expand_product_q(&ProductSpec::named("distinct").unwrap(), 40).unwrap();
        let odd = expand_product_q(&ProductSpec::named("odd").unwrap(), 40).unwrap();
        assert_eq!(distinct, odd);
    }

    #[test]
    fn zero_step_is_a_usage_error() {
        let spec = ProductSpec::new().times(Factor::poch(1, 0));
        assert!(matches!(expand_product_q(&spec, 5), Err(Error::Usage(_))));
    }

    #[test]
    fn non_unit_denominator_is_rejected() {
        let spec = ProductSpec::new().over(Factor::poch(0, 2));
        assert!(matches!(expand_product_q(&spec, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_base_numerator_vanishes() {
        // (1; q^4)_inf = 0
        let spec = ProductSpec::new().times(Factor::poch(0, 4));
        assert!(expand_product_q(&spec, 5).unwrap().is_zero());
    }

    #[test]
    fn finite_factor() {
        // (q; q)_2 = (1 - q)(1 - q^2)
        let spec = ProductSpec::new().times(Factor::poch(1, 1).take(2));
        assert_eq!(
            expand_product_q(&spec, 5).unwrap(),
            SeriesQ::from_i64s(&[1, -1, -1, 1], 5)
        );
    }

    #[test]
    fn x_products_need_the_two_variable_path() {
        let spec = ProductSpec::new().times(Factor::poch_neg(1, 2).with_x(1));
        assert!(matches!(expand_product_q(&spec, 5), Err(Error::Usage(_))));
        let f = expand_product(&spec, 4).unwrap();
        // (-xq; q^2)_inf = 1 + x q + x q^3 + x^2 q^4 + ...
        assert_eq!(f.coeff(1, 1).unwrap(), 1.into());
        assert_eq!(f.coeff(1, 3).unwrap(), 1.into());
        assert_eq!(f.coeff(2, 4).unwrap(), 1.into());
        assert!(f.x_degree_within_q_degree());
    }

    #[test]
    fn display() {
        let spec = ProductSpec::new()
            .times(Factor::poch_neg(1, 1))
            .triple(2, 8)
            .over(Factor::poch(2, 2));
        assert_eq!(
            spec.to_string(),
            "(-q;q)_inf (q^2;q^8)_inf (q^6;q^8)_inf (q^8;q^8)_inf / (q^2;q^2)_inf"
        );
    }
}
