//! The `Qbar_{k,i}(x; q)` kernel and the multisums.
//!
//! The kernel is computed in doubled-index form
//! `DQ_{K,I}(x; q) = Qbar_{K/2,I/2}(x^2; q^2)`, which is a genuine series in
//! `x` and `q` for every integer `K, I` (half-integer `k, i` included):
//!
//! ```text
//! DQ_{K,I} = sum_{n>=0} (-1)^n x^{Kn} q^{Kn^2+Kn-In} (1 - x^I q^{(2n+1)I})
//!            * (-x^2 q^{2n+2}; q^2)_inf (-q^2; q^2)_n
//!            / ((q^2; q^2)_n (x^2 q^{2n+2}; q^2)_inf)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::series::{Factor, ProductSpec, SeriesQ, SeriesXQ, Substitution};

/// Doubled indices `(K, I) = (2k, 2i)` of `Qbar_{k,i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DoubledIndex {
    pub k: u32,
    pub i: u32,
}

impl DoubledIndex {
    /// Accepts `K >= 1` and `0 <= I <= K + 1`; `I = K + 1` appears as the
    /// boundary term of the shift relation.
    pub fn new(k: u32, i: u32) -> Result<Self> {
        if k == 0 {
            return Err(usage("kernel index K must be at least 1"));
        }
        if i > k + 1 {
            return Err(usage(format!("kernel index needs 0 <= I <= K+1 (K={k}, I={i})")));
        }
        Ok(DoubledIndex { k, i })
    }
}

impl fmt::Display for DoubledIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Qbar_{{{}/2,{}/2}}", self.k, self.i)
    }
}

/// One signed monomial `sign * x^m q^n`.
type Term = (i64, usize, i64);

/// `sum_n [t_n(x, q)] * factors_n` where `terms(n)` gives the numerator
/// monomials of the `n`-th summand. The smallest `q`-exponent among them
/// must increase with `n` once `n >= 1`, which ends the sum.
fn kernel_sum(order: usize, terms: impl Fn(i64) -> [Term; 2]) -> Result<SeriesXQ> {
    let mut total = SeriesXQ::zero(order);
    for n in 0i64.. {
        let t = terms(n);
        let lowest = t.iter().map(|&(_, _, e)| e).min().expect("two terms");
        debug_assert!(lowest >= 0, "negative q-power in kernel summand");
        if lowest > order as i64 {
            if n == 0 {
                continue;
            }
            break;
        }
        let mut summand = SeriesXQ::zero(order);
        for (sign, m, e) in t {
            if e <= order as i64 {
                summand.add_monomial_multiple(&SeriesXQ::one(order), sign, m, e as usize)?;
            }
        }
        let n = n as usize;
        let base = 2 * n + 2;
        ProductSpec::new()
            .times(Factor::poch_neg(base, 2).with_x(2))
            .times(Factor::poch_neg(2, 2).take(n))
            .over(Factor::poch(2, 2).take(n))
            .over(Factor::poch(base, 2).with_x(2))
            .apply_xq(&mut summand)?;
        total.add_monomial_multiple(&summand, 1, 0, 0)?;
    }
    Ok(total)
}

fn sign(n: i64) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `DQ_{K,I}(x; q)` up to `q^order`.
pub fn qbar_doubled(idx: DoubledIndex, order: usize) -> Result<SeriesXQ> {
    let (k, i) = (i64::from(idx.k), i64::from(idx.i));
    kernel_sum(order, |n| {
        let base = k * n * n + k * n - i * n;
        let s = sign(n);
        [
            (s, (k * n) as usize, base),
            (-s, (k * n + i) as usize, base + (2 * n + 1) * i),
        ]
    })
}

/// `Qbar_{k,i}(x; q)` for integer `k, i`, by contracting the doubled form.
pub fn qbar(k: u32, i: u32, order: usize) -> Result<SeriesXQ> {
    let doubled = qbar_doubled(DoubledIndex::new(2 * k, 2 * i)?, 2 * order)?;
    contract(&doubled, order)
}

/// Inverse of `x -> x^2, q -> q^2` on a series supported on even powers.
fn contract(f: &SeriesXQ, order: usize) -> Result<SeriesXQ> {
    let polys = (0..=order)
        .map(|n| {
            let p = f.poly(2 * n)?;
            debug_assert!(f.poly(2 * n + 1).map_or(true, <[_]>::is_empty));
            Ok(p.iter().step_by(2).cloned().collect())
        })
        .collect::<Result<Vec<Vec<BigInt>>>>()?;
    SeriesXQ::from_polys(polys)
}

/// Both sides of `(xq) DQ_{K,-1} = -DQ_{K,1}`. The left side is summed
/// termwise with the factor `xq` folded into each numerator, so no negative
/// powers of `q` ever appear.
pub fn reflect_minus(k: u32, order: usize) -> Result<(SeriesXQ, SeriesXQ)> {
    DoubledIndex::new(k, 1)?;
    let kk = i64::from(k);
    let lhs = kernel_sum(order, |n| {
        let base = kk * n * n + kk * n;
        let s = sign(n);
        [
            (s, (kk * n + 1) as usize, base + n + 1),
            (-s, (kk * n) as usize, base - n),
        ]
    })?;
    let rhs = qbar_doubled(DoubledIndex::new(k, 1)?, order)?.neg();
    Ok((lhs, rhs))
}

/// Shift relation for `2 <= I <= K`:
/// `DQ_{K,I} - DQ_{K,I-2} = (xq)^I DQ_{K,K-I}(xq) + (xq)^{I-2} DQ_{K,K-I+2}(xq)`.
pub fn shift_relation_sides(idx: DoubledIndex, order: usize) -> Result<(SeriesXQ, SeriesXQ)> {
    let DoubledIndex { k, i } = idx;
    if !(2..=k).contains(&i) {
        return Err(usage(format!("shift relation needs 2 <= I <= K (K={k}, I={i})")));
    }
    let dq = |i| qbar_doubled(DoubledIndex::new(k, i)?, order);
    let lhs = dq(i)?.sub(&dq(i - 2)?)?;
    let shifted = |j| dq(j)?.scale_substitute(Substitution::shift_x(1), order);
    let mut rhs = SeriesXQ::zero(order);
    rhs.add_monomial_multiple(&shifted(k - i)?, 1, i as usize, i as usize)?;
    rhs.add_monomial_multiple(&shifted(k - i + 2)?, 1, (i - 2) as usize, (i - 2) as usize)?;
    Ok((lhs, rhs))
}

/// Double recurrence expressing `Qbar_{k,a}` through `Qbar_{k,*}(xq^2)`,
/// in doubled form (`K = 2k`, `I = 2a`), for `0 <= a <= k`:
///
/// ```text
/// DQ_{2k,2a}(x) = sum_{i=1}^{a} (xq)^{2i} S(k-i) + sum_{i=0}^{a-1} (xq)^{2i} S(k-i)
/// S(c) = sum_{h=1}^{c} x^{2h} q^{4h} DQ_{2k,2k-2h}(xq^2)
///      + sum_{h=0}^{c-1} x^{2h} q^{4h} DQ_{2k,2k-2h}(xq^2)
/// ```
pub fn double_recurrence_sides(k: u32, a: u32, order: usize) -> Result<(SeriesXQ, SeriesXQ)> {
    if k == 0 || a > k {
        return Err(usage(format!("double recurrence needs 0 <= a <= k, k >= 1 (k={k}, a={a})")));
    }
    let kk = 2 * k;
    let mut shifted = BTreeMap::new();
    for j in 0..=k {
        let dq = qbar_doubled(DoubledIndex::new(kk, 2 * j)?, order)?;
        shifted.insert(j, dq.scale_substitute(Substitution::shift_x(2), order)?);
    }
    let inner = |c: u32| -> Result<SeriesXQ> {
        let mut s = SeriesXQ::zero(order);
        for h in 1..=c {
            s.add_monomial_multiple(&shifted[&(k - h)], 1, 2 * h as usize, 4 * h as usize)?;
        }
        for h in 0..c {
            s.add_monomial_multiple(&shifted[&(k - h)], 1, 2 * h as usize, 4 * h as usize)?;
        }
        Ok(s)
    };
    let mut rhs = SeriesXQ::zero(order);
    for i in 1..=a {
        rhs.add_monomial_multiple(&inner(k - i)?, 1, 2 * i as usize, 2 * i as usize)?;
    }
    for i in 0..a {
        rhs.add_monomial_multiple(&inner(k - i)?, 1, 2 * i as usize, 2 * i as usize)?;
    }
    let lhs = qbar_doubled(DoubledIndex::new(kk, 2 * a)?, order)?;
    Ok((lhs, rhs))
}

/// Which multisum: the exponent's linear part and the denominator base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MultisumVariant {
    /// `q^{N_1^2+...+N_{k-1}^2 + N_a+...+N_{k-1}} / prod (q;q)_{n_j}`.
    AndrewsGordon,
    /// `q^{sum N_j^2 + 2(N_a + N_{a+2} + ... + N_{k-2})} / prod (q^2;q^2)_{n_j}`,
    /// for `k ≡ a (mod 2)`.
    EvenParity,
    /// `q^{sum N_j^2 + sum_{j=1,3,...,a-3} n_j + N_{a-1}+...+N_{k-1}}
    /// / prod (q^2;q^2)_{n_j}`, for `k` odd and `a` even.
    OddParity,
}

/// `n_j = N_j - N_{j+1}` with `N_k = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultisumSpec {
    pub k: u32,
    pub a: u32,
    pub variant: MultisumVariant,
}

impl MultisumSpec {
    pub fn new(k: u32, a: u32, variant: MultisumVariant) -> Result<Self> {
        if k == 0 || !(1..=k).contains(&a) {
            return Err(usage(format!("multisum needs k >= a >= 1 (k={k}, a={a})")));
        }
        match variant {
            MultisumVariant::AndrewsGordon => {}
            MultisumVariant::EvenParity if k % 2 != a % 2 => {
                return Err(usage(format!(
                    "this multisum requires k ≡ a (mod 2) (k={k}, a={a})"
                )))
            }
            MultisumVariant::OddParity if k.is_multiple_of(2) || a % 2 == 1 => {
                return Err(usage(format!(
                    "this multisum requires k odd and a even (k={k}, a={a})"
                )))
            }
            _ => {}
        }
        Ok(MultisumSpec { k, a, variant })
    }

    /// The `q`-exponent for `big[j-1] = N_j`, `j = 1..k-1`.
    fn exponent(&self, big: &[u64]) -> u64 {
        let at = |j: u32| -> u64 {
            if (1..self.k).contains(&j) {
                big[j as usize - 1]
            } else {
                0
            }
        };
        let quad: u64 = big.iter().map(|v| v * v).sum();
        let (k, a) = (self.k, self.a);
        let linear: u64 = match self.variant {
            MultisumVariant::AndrewsGordon => (a..k).map(at).sum(),
            MultisumVariant::EvenParity => (a..k.saturating_sub(1)).step_by(2).map(|j| 2 * at(j)).sum(),
            MultisumVariant::OddParity => {
                let small: u64 = (1..a.saturating_sub(2))
                    .step_by(2)
                    .map(|j| at(j) - at(j + 1))
                    .sum();
                small + (a - 1..k).map(at).sum::<u64>()
            }
        };
        quad + linear
    }

    fn step(&self) -> usize {
        match self.variant {
            MultisumVariant::AndrewsGordon => 1,
            _ => 2,
        }
    }
}

/// The multisum up to `q^order`, exactly.
pub fn multisum(spec: &MultisumSpec, order: usize) -> Result<SeriesQ> {
    let mut total = SeriesQ::zero(order);
    let depth = spec.k as usize - 1;
    let mut big = Vec::with_capacity(depth);
    let top = (order as f64).sqrt() as u64 + 1;
    accumulate(spec, order, depth, top, &mut big, &mut total)?;
    Ok(total)
}

fn accumulate(
    spec: &MultisumSpec,
    order: usize,
    depth: usize,
    bound: u64,
    big: &mut Vec<u64>,
    total: &mut SeriesQ,
) -> Result<()> {
    let quad: u64 = big.iter().map(|v| v * v).sum();
    if quad > order as u64 {
        return Ok(());
    }
    if big.len() == depth {
        let e = spec.exponent(big);
        if e > order as u64 {
            return Ok(());
        }
        let mut term = SeriesQ::monomial(e as usize, BigInt::from(1), order);
        let step = spec.step();
        for j in 0..depth {
            let next = big.get(j + 1).copied().unwrap_or(0);
            let n_j = (big[j] - next) as usize;
            for t in 1..=n_j {
                term.div_binomial(-1, step * t)?;
            }
        }
        *total = total.add(&term)?;
        return Ok(());
    }
    for v in 0..=bound {
        big.push(v);
        accumulate(spec, order, depth, v, big, total)?;
        big.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(k: u32, i: u32) -> DoubledIndex {
        DoubledIndex::new(k, i).unwrap()
    }

    #[test]
    fn rogers_ramanujan_at_x_one() {
        let s = multisum(&MultisumSpec::new(2, 2, MultisumVariant::AndrewsGordon).unwrap(), 8).unwrap();
        assert_eq!(s, SeriesQ::from_i64s(&[1, 1, 1, 1, 2, 2, 3, 3, 4], 8));
    }

    #[test]
    fn initial_values() {
        for k in 1..=7 {
            for i in 1..=k {
                let q = qbar_doubled(idx(k, i), 12).unwrap();
                assert_eq!(q.poly(0).unwrap(), &[BigInt::from(1)][..], "K={k} I={i}");
                assert!((1..=12).all(|n| q.coeff(0, n).unwrap() == BigInt::from(0)));
            }
        }
    }

    #[test]
    fn index_zero_vanishes() {
        for k in 1..=6 {
            assert!(qbar_doubled(idx(k, 0), 14).unwrap().is_zero());
        }
    }

    #[test]
    fn odd_half_index_has_negative_coefficients() {
        let q = qbar_doubled(idx(3, 4), 6).unwrap();
        assert_eq!(q.coeff(3, 2).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn contracted_kernel_matches_doubled() {
        let single = qbar(2, 1, 6).unwrap();
        let doubled = qbar_doubled(idx(4, 2), 12).unwrap();
        assert_eq!(
            single.scale_substitute(Substitution::doubled(), 12).unwrap(),
            doubled
        );
    }

    #[test]
    fn reflection_small() {
        for k in 1..=5 {
            let (l, r) = reflect_minus(k, 12).unwrap();
            assert_eq!(l, r, "K={k}");
        }
    }

    #[test]
    fn shift_relation_small() {
        for k in 2..=5 {
            for i in 2..=k {
                let (l, r) = shift_relation_sides(idx(k, i), 12).unwrap();
                assert_eq!(l, r, "K={k} I={i}");
            }
        }
        assert!(shift_relation_sides(idx(4, 1), 5).is_err());
    }

    #[test]
    fn double_recurrence_small() {
        for k in 1..=3 {
            for a in 0..=k {
                let (l, r) = double_recurrence_sides(k, a, 12).unwrap();
                assert_eq!(l, r, "k={k} a={a}");
            }
        }
    }

    #[test]
    fn multisum_parity_domains() {
        assert!(MultisumSpec::new(3, 2, MultisumVariant::EvenParity).is_err());
        assert!(MultisumSpec::new(4, 2, MultisumVariant::EvenParity).is_ok());
        assert!(MultisumSpec::new(3, 2, MultisumVariant::OddParity).is_ok());
        let err = MultisumSpec::new(4, 2, MultisumVariant::OddParity).unwrap_err();
        assert!(err.to_string().contains("k odd and a even"));
        assert!(MultisumSpec::new(2, 3, MultisumVariant::AndrewsGordon).is_err());
    }

    #[test]
    fn single_index_multisum_is_one() {
        let s = multisum(&MultisumSpec::new(1, 1, MultisumVariant::AndrewsGordon).unwrap(), 5).unwrap();
        assert_eq!(s, SeriesQ::one(5));
    }
}
