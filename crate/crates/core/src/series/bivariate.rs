use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SeriesQ;
use crate::error::{domain, usage, Error, Result};

/// Truncated two-variable series `sum_n p_n(x) q^n`, `n <= N`.
///
/// Each `p_n` is an exact integer polynomial stored by ascending power of
/// `x` with trailing zeros trimmed, so structural equality is coefficient
/// equality. There is no a priori cap on the degree of `p_n`; family
/// generating functions satisfy `deg p_n <= n` and can be checked with
/// [`SeriesXQ::x_degree_within_q_degree`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesXQ {
    coeffs: Vec<Vec<BigInt>>,
}

/// Formal substitution `x -> x^x_power * q^x_q_shift`, `q -> q^q_power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub x_power: usize,
    pub x_q_shift: usize,
    pub q_power: usize,
}

impl Substitution {
    /// `x -> x q^e`, `q` untouched.
    pub fn shift_x(e: usize) -> Self {
        Substitution {
            x_power: 1,
            x_q_shift: e,
            q_power: 1,
        }
    }

    /// `x -> x^2`, `q -> q^2`.
    pub fn doubled() -> Self {
        Substitution {
            x_power: 2,
            x_q_shift: 0,
            q_power: 2,
        }
    }
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn add_shifted(dst: &mut Vec<BigInt>, src: &[BigInt], x_shift: usize, sign: i64) {
    if src.is_empty() {
        return;
    }
    if dst.len() < src.len() + x_shift {
        dst.resize(src.len() + x_shift, BigInt::zero());
    }
    for (j, c) in src.iter().enumerate() {
        if !c.is_zero() {
            dst[j + x_shift] += c * sign;
        }
    }
    trim(dst);
}

fn poly_mul_acc(dst: &mut Vec<BigInt>, a: &[BigInt], b: &[BigInt]) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if dst.len() < a.len() + b.len() - 1 {
        dst.resize(a.len() + b.len() - 1, BigInt::zero());
    }
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                dst[i + j] += ai * bj;
            }
        }
    }
}

impl SeriesXQ {
    pub fn zero(order: usize) -> Self {
        SeriesXQ {
            coeffs: vec![Vec::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, 0, BigInt::one(), order)
    }

    /// `c x^m q^n`, or zero when `n` lies beyond the order.
    pub fn monomial(m: usize, n: usize, c: BigInt, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order && !c.is_zero() {
            let mut p = vec![BigInt::zero(); m + 1];
            p[m] = c;
            s.coeffs[n] = p;
        }
        s
    }

    /// Builds a series from per-`q^n` polynomials (ascending in `x`).
    pub fn from_polys(mut coeffs: Vec<Vec<BigInt>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(usage("a series needs at least the constant coefficient"));
        }
        coeffs.iter_mut().for_each(trim);
        Ok(SeriesXQ { coeffs })
    }

    /// Embeds an `x`-free series.
    pub fn from_q(f: &SeriesQ) -> Self {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| if c.is_zero() { Vec::new() } else { vec![c.clone()] })
            .collect();
        SeriesXQ { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The polynomial multiplying `q^n`, trimmed.
    pub fn poly(&self, n: usize) -> Result<&[BigInt]> {
        self.coeffs
            .get(n)
            .map(Vec::as_slice)
            .ok_or(Error::OutOfRange {
                index: n,
                order: self.order(),
            })
    }

    /// Coefficient of `x^m q^n`.
    pub fn coeff(&self, m: usize, n: usize) -> Result<BigInt> {
        Ok(self.poly(n)?.get(m).cloned().unwrap_or_default())
    }

    /// Degree in `x` of the `q^n` coefficient; `None` for the zero polynomial.
    pub fn x_degree(&self, n: usize) -> Option<usize> {
        self.coeffs.get(n).and_then(|p| p.len().checked_sub(1))
    }

    pub fn max_x_degree(&self) -> Option<usize> {
        (0..=self.order()).filter_map(|n| self.x_degree(n)).max()
    }

    /// True when every `q^n` coefficient has `x`-degree at most `n`, which
    /// holds for any generating function where `x` counts parts.
    pub fn x_degree_within_q_degree(&self) -> bool {
        (0..=self.order()).all(|n| self.x_degree(n).is_none_or(|d| d <= n))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Vec::is_empty)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InsufficientPrecision {
                needed: order,
                available: self.order(),
            });
        }
        Ok(SeriesXQ {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    /// Drops every `x^m` with `m > bound`. Substitutions and products
    /// commute with this, so it can be applied early to save work.
    pub fn truncate_x(&self, bound: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| {
                let mut p = p[..p.len().min(bound + 1)].to_vec();
                trim(&mut p);
                p
            })
            .collect();
        SeriesXQ { coeffs }
    }

    /// Sets `x = 1`.
    pub fn at_x_one(&self) -> SeriesQ {
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| p.iter().sum::<BigInt>())
            .collect();
        SeriesQ::from_coeffs(coeffs).expect("order is at least zero")
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
        let mut out = self.clone();
        out.add_assign_scaled(other, 1);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let mut out = self.clone();
        out.add_assign_scaled(other, -1);
        Ok(out)
    }

    fn add_assign_scaled(&mut self, other: &Self, sign: i64) {
        for (dst, src) in self.coeffs.iter_mut().zip(&other.coeffs) {
            add_shifted(dst, src, 0, sign);
        }
    }

    /// In place `self += sign * x^m q^n * other`, terms past the order dropped.
    pub fn add_monomial_multiple(
        &mut self,
        other: &Self,
        sign: i64,
        m: usize,
        n: usize,
    ) -> Result<()> {
        self.check_same_order(other)?;
        let order = self.order();
        for k in n..=order {
            add_shifted(&mut self.coeffs[k], &other.coeffs[k - n], m, sign);
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        SeriesXQ {
            coeffs: self
                .coeffs
                .iter()
                .map(|p| p.iter().map(|c| -c).collect())
                .collect(),
        }
    }

    /// Multiplies by `x^m q^n`.
    pub fn mul_monomial(&self, m: usize, n: usize) -> Self {
        let mut out = Self::zero(self.order());
        out.add_monomial_multiple(self, 1, m, n)
            .expect("same order by construction");
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                poly_mul_acc(&mut out.coeffs[i + j], a, b);
            }
        }
        out.coeffs.iter_mut().for_each(trim);
        Ok(out)
    }

    /// Multiplicative inverse; the `q^0` coefficient must be the constant
    /// polynomial `1` or `-1` (otherwise the inverse is not a polynomial in
    /// `x` at each `q`-order).
    pub fn invert(&self) -> Result<Self> {
        let p0 = &self.coeffs[0];
        let unit = p0.len() == 1 && (p0[0].is_one() || (-&p0[0]).is_one());
        if !unit {
            return Err(domain(
                "cannot invert a series whose q^0 coefficient is not 1 or -1",
            ));
        }
        let c0 = p0[0].clone();
        let order = self.order();
        let mut g = Self::zero(order);
        g.coeffs[0] = vec![c0.clone()];
        for n in 1..=order {
            let mut acc = Vec::new();
            for j in 1..=n {
                poly_mul_acc(&mut acc, &self.coeffs[j], &g.coeffs[n - j]);
            }
            let mut p: Vec<BigInt> = acc.into_iter().map(|c| -(c * &c0)).collect();
            trim(&mut p);
            g.coeffs[n] = p;
        }
        Ok(g)
    }

    /// In place `f <- f * (1 + sign * x^x_exp q^q_exp)`.
    pub fn mul_binomial(&mut self, sign: i64, x_exp: usize, q_exp: usize) {
        if q_exp == 0 {
            for p in &mut self.coeffs {
                let src = p.clone();
                add_shifted(p, &src, x_exp, sign);
            }
            return;
        }
        for n in (q_exp..=self.order()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            add_shifted(&mut hi[0], &lo[n - q_exp], x_exp, sign);
        }
    }

    /// In place `f <- f / (1 + sign * x^x_exp q^q_exp)`; needs `q_exp >= 1`
    /// so the geometric expansion terminates at every `q`-order.
    pub fn div_binomial(&mut self, sign: i64, x_exp: usize, q_exp: usize) -> Result<()> {
        if q_exp == 0 {
            return Err(domain("division by a binomial without a q-power"));
        }
        for n in q_exp..=self.order() {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            add_shifted(&mut hi[0], &lo[n - q_exp], x_exp, -sign);
        }
        Ok(())
    }

    /// Applies `sub` and truncates at `order`. Every output coefficient up to
    /// `q^order` must come from an operand coefficient that exists, so the
    /// operand needs order at least `order / q_power`.
    pub fn scale_substitute(&self, sub: Substitution, order: usize) -> Result<Self> {
        if sub.x_power == 0 || sub.q_power == 0 {
            return Err(usage("substitution powers of x and q must be positive"));
        }
        let needed = order / sub.q_power;
        if needed > self.order() {
            return Err(Error::InsufficientPrecision {
                needed,
                available: self.order(),
            });
        }
        let mut out = Self::zero(order);
        for n in 0..=needed {
            for (j, c) in self.coeffs[n].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let target = sub.q_power * n + sub.x_q_shift * j;
                if target > order {
                    continue;
                }
                let m = sub.x_power * j;
                let p = &mut out.coeffs[target];
                if p.len() <= m {
                    p.resize(m + 1, BigInt::zero());
                }
                p[m] += c;
            }
        }
        out.coeffs.iter_mut().for_each(trim);
        Ok(out)
    }

    /// First `(m, n)` in `q`-major order where the series differ, restricted
    /// to `m <= x_bound` when a bound is given.
    pub fn first_difference(
        &self,
        other: &Self,
        x_bound: Option<usize>,
    ) -> Option<(usize, usize, BigInt, BigInt)> {
        for (n, (p, r)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            let len = p.len().max(r.len());
            let len = x_bound.map_or(len, |b| len.min(b + 1));
            for m in 0..len {
                let a = p.get(m).cloned().unwrap_or_default();
                let b = r.get(m).cloned().unwrap_or_default();
                if a != b {
                    return Some((m, n, a, b));
                }
            }
        }
        None
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesXQRepr {
    #[serde(rename = "N")]
    order: usize,
    coeffs: Vec<Vec<String>>,
}

impl Serialize for SeriesXQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesXQRepr {
            order: self.order(),
            coeffs: self
                .coeffs
                .iter()
                .map(|p| p.iter().map(ToString::to_string).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SeriesXQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SeriesXQRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(D::Error::custom(format!(
                "expected {} coefficient polynomials, found {}",
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|p| {
                p.iter()
                    .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        SeriesXQ::from_polys(coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(m: usize, n: usize, order: usize) -> SeriesXQ {
        SeriesXQ::monomial(m, n, BigInt::one(), order)
    }

    #[test]
    fn monomial_substitution() {
        // x q with x -> x q^2 is x q^3
        let f = mono(1, 1, 6);
        let g = f.scale_substitute(Substitution::shift_x(2), 6).unwrap();
        assert_eq!(g, mono(1, 3, 6));
    }

    #[test]
    fn substituting_one_is_one() {
        let one = SeriesXQ::one(5);
        for sub in [Substitution::shift_x(3), Substitution::doubled()] {
            assert_eq!(one.scale_substitute(sub, 5).unwrap(), one);
        }
    }

    #[test]
    fn q_squared_substitution() {
        // sum_m x^m q^m, q -> q^2 gives sum x^m q^{2m}
        let mut f = SeriesXQ::zero(6);
        for m in 0..=6 {
            f.add_monomial_multiple(&SeriesXQ::one(6), 1, m, m).unwrap();
        }
        let sub = Substitution {
            x_power: 1,
            x_q_shift: 0,
            q_power: 2,
        };
        let g = f.scale_substitute(sub, 6).unwrap();
        let mut expect = SeriesXQ::zero(6);
        for m in 0..=3 {
            expect
                .add_monomial_multiple(&SeriesXQ::one(6), 1, m, 2 * m)
                .unwrap();
        }
        assert_eq!(g, expect);
    }

    #[test]
    fn substitution_refuses_missing_coefficients() {
        let f = SeriesXQ::one(3);
        assert_eq!(
            f.scale_substitute(Substitution::doubled(), 8).unwrap_err(),
            Error::InsufficientPrecision {
                needed: 4,
                available: 3
            }
        );
        assert!(f.scale_substitute(Substitution::doubled(), 7).is_ok());
    }

    #[test]
    fn invert_one_minus_xq() {
        let mut f = SeriesXQ::one(5);
        f.mul_binomial(-1, 1, 1);
        let g = f.invert().unwrap();
        for n in 0..=5 {
            assert_eq!(g.coeff(n, n).unwrap(), BigInt::one());
            assert_eq!(g.x_degree(n), Some(n));
        }
        assert_eq!(f.mul(&g).unwrap(), SeriesXQ::one(5));
    }

    #[test]
    fn invert_needs_unit_constant_polynomial() {
        let mut f = SeriesXQ::one(4);
        f.mul_binomial(-1, 1, 0); // 1 - x
        assert!(matches!(f.invert(), Err(Error::Domain(_))));
    }

    #[test]
    fn binomial_division_inverts_multiplication() {
        let mut f = mono(0, 0, 8);
        f.mul_binomial(1, 2, 3);
        f.mul_binomial(-1, 1, 1);
        let snapshot = f.clone();
        f.div_binomial(-1, 1, 1).unwrap();
        f.div_binomial(1, 2, 3).unwrap();
        assert_eq!(f, SeriesXQ::one(8));
        assert_ne!(snapshot, f);
    }

    #[test]
    fn x_bound_restricts_comparison() {
        let a = mono(3, 3, 4);
        let b = SeriesXQ::zero(4);
        assert!(a.first_difference(&b, Some(2)).is_none());
        assert_eq!(
            a.first_difference(&b, None),
            Some((3, 3, BigInt::one(), BigInt::zero()))
        );
    }

    #[test]
    fn json_shape() {
        let mut f = SeriesXQ::one(2);
        f.mul_binomial(1, 1, 1);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"N":2,"coeffs":[["1"],["0","1"],[]]}"#);
        let back: SeriesXQ = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn at_x_one_sums_polynomials() {
        let mut f = SeriesXQ::one(3);
        f.mul_binomial(1, 1, 1);
        f.mul_binomial(1, 2, 1);
        assert_eq!(f.at_x_one(), SeriesQ::from_i64s(&[1, 2, 1], 3));
    }
}
