//! Partition and overpartition families and their exact counts.
//!
//! Every count here comes from enumerating all (over)partitions of `n` and
//! filtering with [`admits`], which checks each family's defining clauses
//! literally. This is the independent side of every series identity.

mod overpartition;

pub use overpartition::{
    enumerate_overpartitions, enumerate_partitions, visit_overpartitions, visit_partitions,
    Multiplicity, OverPartition, Part,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::series::{SeriesQ, SeriesXQ};

/// Default largest `n` enumerated without an explicit override.
pub const DEFAULT_BUDGET: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Partitions into parts not congruent to `0, ±a (mod 2k+1)`.
    A,
    /// Gordon's gap condition `λ_j - λ_{j+k-1} >= 2`, at most `a-1` ones.
    B,
    /// `B_{k,a}` with every even part occurring an even number of times.
    W,
    /// `B_{k,a}` with every odd part occurring an even number of times.
    Wbar,
    /// The residue-side partner of `W` (needs `k ≡ a mod 2`).
    G,
    /// Overpartitions whose non-overlined parts avoid `0, ±i (mod 2k)`;
    /// for `i = k`, no part divisible by `k`.
    Abar,
    /// Overpartition gap condition with at most `i-1` non-overlined ones.
    Bbar,
    /// Frequency conditions with even total at even sizes.
    U,
    /// Frequency conditions with even total at odd sizes.
    Ubar,
    /// `U_{k,a}` split by the number of ones.
    Urefined,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::A,
        Family::B,
        Family::W,
        Family::Wbar,
        Family::G,
        Family::Abar,
        Family::Bbar,
        Family::U,
        Family::Ubar,
        Family::Urefined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::W => "W",
            Family::Wbar => "Wbar",
            Family::G => "G",
            Family::Abar => "Abar",
            Family::Bbar => "Bbar",
            Family::U => "U",
            Family::Ubar => "Ubar",
            Family::Urefined => "Urefined",
        }
    }

    /// Families of ordinary partitions (no overlines).
    pub fn is_partition_family(self) -> bool {
        matches!(self, Family::A | Family::B | Family::W | Family::Wbar | Family::G)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                usage(format!(
                    "unknown family `{s}`; valid families: {}",
                    names.join(", ")
                ))
            })
    }
}

/// A family together with its parameters. For `Abar`/`Bbar` the second
/// index (written `i` in the literature) is stored in `a`; `i` is only used
/// by `Urefined`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub k: u32,
    pub a: u32,
    pub i: Option<u32>,
}

impl FamilySpec {
    pub fn new(family: Family, k: u32, a: u32, i: Option<u32>) -> Result<Self> {
        let spec = FamilySpec { family, k, a, i };
        spec.validate()?;
        Ok(spec)
    }

    pub fn of(family: Family, k: u32, a: u32) -> Result<Self> {
        Self::new(family, k, a, None)
    }

    fn validate(&self) -> Result<()> {
        let FamilySpec { family, k, a, i } = *self;
        if i.is_some() && family != Family::Urefined {
            return Err(usage(format!("family {family} takes no refinement index i")));
        }
        if k == 0 {
            return Err(usage(format!("family {family} needs k >= 1")));
        }
        match family {
            Family::A | Family::B | Family::W | Family::Wbar | Family::Abar | Family::Bbar => {
                if !(1..=k).contains(&a) {
                    return Err(usage(format!("family {family} needs k >= a >= 1 (k={k}, a={a})")));
                }
            }
            Family::G => {
                if !(1..=k).contains(&a) {
                    return Err(usage(format!("family G needs k >= a >= 1 (k={k}, a={a})")));
                }
                if k % 2 != a % 2 {
                    return Err(usage(format!(
                        "family G is defined only for k ≡ a (mod 2) (k={k}, a={a})"
                    )));
                }
            }
            // a = 0 is the empty family and a = k+1 drops the clause on ones;
            // both occur as boundary terms of the difference relations.
            Family::U | Family::Ubar => {
                if a > k + 1 {
                    return Err(usage(format!("family {family} needs a <= k+1 (k={k}, a={a})")));
                }
            }
            Family::Urefined => {
                if !(1..=k + 1).contains(&a) {
                    return Err(usage(format!("family Urefined needs 1 <= a <= k+1 (k={k}, a={a})")));
                }
                match i {
                    Some(i) if (1..=a).contains(&i) => {}
                    Some(i) => {
                        return Err(usage(format!("refinement index needs 1 <= i <= a (i={i}, a={a})")))
                    }
                    None => return Err(usage("family Urefined needs the refinement index i")),
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.i {
            Some(i) => write!(f, "{}^{}_{{{},{}}}", self.family, i, self.k, self.a),
            None => write!(f, "{}_{{{},{}}}", self.family, self.k, self.a),
        }
    }
}

fn residue_hit(l: u32, modulus: u32, a: u32) -> bool {
    let r = l % modulus;
    r == 0 || r == a % modulus || r == (modulus - a % modulus) % modulus
}

/// `λ_j - λ_{j+k-1} >= 2` (or `>= 1` after an overlined `λ_j` when
/// `overline_relaxes`) on the canonical sequence, wherever `λ_{j+k-1}` exists.
fn gap_condition(item: &OverPartition, k: u32, overline_relaxes: bool) -> bool {
    let seq = item.canonical_sequence();
    let span = k as usize - 1;
    seq.iter().zip(seq.iter().skip(span)).all(|(hi, lo)| {
        let need = if overline_relaxes && hi.overlined { 1 } else { 2 };
        hi.size - lo.size >= need
    })
}

fn u_clauses(item: &OverPartition, k: u32, a: u32, parity_on_odd: bool) -> bool {
    // (i) f_1 <= a - 1 + f_1bar
    if item.plain(1) + 1 > a + item.overlined(1) {
        return false;
    }
    for l in 1..=item.largest_part() + 1 {
        let odd = l % 2 == 1;
        if odd != parity_on_odd {
            // (ii) an overlined copy needs a plain companion
            if item.plain(l) < item.overlined(l) {
                return false;
            }
        } else if !item.total(l).is_multiple_of(2) {
            // (iii) even total frequency
            return false;
        }
        // (iv) f_l + f_lbar + f_{l+1} <= k - 1 + f_{l+1,bar}
        if item.total(l) + item.plain(l + 1) + 1 > k + item.overlined(l + 1) {
            return false;
        }
    }
    true
}

/// Whether `item` satisfies the defining conditions of `spec`.
pub fn admits(spec: &FamilySpec, item: &OverPartition) -> bool {
    let FamilySpec { family, k, a, i } = *spec;
    if family.is_partition_family() && !item.is_partition() {
        return false;
    }
    let even_mult = |want_odd: bool| {
        item.sizes()
            .filter(|(l, _)| (l % 2 == 1) == want_odd)
            .all(|(_, m)| m.total() % 2 == 0)
    };
    match family {
        Family::A => item.sizes().all(|(l, _)| !residue_hit(l, 2 * k + 1, a)),
        Family::B => item.plain(1) < a && gap_condition(item, k, false),
        Family::W => admits(&FamilySpec { family: Family::B, ..*spec }, item) && even_mult(false),
        Family::Wbar => admits(&FamilySpec { family: Family::B, ..*spec }, item) && even_mult(true),
        Family::G => {
            let m = 2 * k + 2;
            if k % 2 == 0 {
                item.sizes().all(|(l, mult)| {
                    if l % 2 == 1 {
                        mult.total() <= 1
                    } else {
                        !residue_hit(l, m, a)
                    }
                })
            } else {
                item.sizes().all(|(l, _)| l % 4 != 2 && !residue_hit(l, m, a))
            }
        }
        Family::Abar => {
            if a < k {
                item.sizes()
                    .filter(|(_, m)| m.plain > 0)
                    .all(|(l, _)| !residue_hit(l, 2 * k, a))
            } else {
                item.sizes().all(|(l, _)| l % k != 0)
            }
        }
        Family::Bbar => item.plain(1) < a && gap_condition(item, k, true),
        Family::U => u_clauses(item, k, a, false),
        Family::Ubar => u_clauses(item, k, a, true),
        Family::Urefined => {
            let i = i.expect("validated");
            u_clauses(item, k, a, false)
                && match item.overlined(1) {
                    1 => item.plain(1) == i,
                    _ => item.plain(1) + 1 == i,
                }
        }
    }
}

fn check_budget(n: u32, budget: u32) -> Result<()> {
    if n > budget {
        return Err(usage(format!(
            "n = {n} exceeds the enumeration budget {budget}; raise it explicitly"
        )));
    }
    Ok(())
}

fn visit_family(spec: &FamilySpec, n: u32, mut visit: impl FnMut(&OverPartition)) {
    let mut filtered = |item: &OverPartition| {
        if admits(spec, item) {
            visit(item);
        }
    };
    if spec.family.is_partition_family() {
        visit_partitions(n, &mut filtered);
    } else {
        visit_overpartitions(n, &mut filtered);
    }
}

/// Number of members of `spec` of weight `n`.
pub fn count(spec: &FamilySpec, n: u32) -> u64 {
    let mut c = 0;
    visit_family(spec, n, |_| c += 1);
    c
}

/// Number of members of `spec` of weight `n` with exactly `m` parts.
pub fn count_by_parts(spec: &FamilySpec, m: u64, n: u32) -> u64 {
    let mut c = 0;
    visit_family(spec, n, |item| {
        if item.num_parts() == m {
            c += 1;
        }
    });
    c
}

/// `U^i_{k,a}(n)`.
pub fn refined_count(k: u32, a: u32, i: u32, n: u32) -> Result<u64> {
    let spec = FamilySpec::new(Family::Urefined, k, a, Some(i))?;
    Ok(count(&spec, n))
}

/// `sum_n count(spec, n) q^n` up to `q^order`.
pub fn family_series(spec: &FamilySpec, order: u32) -> Result<SeriesQ> {
    family_series_budgeted(spec, order, DEFAULT_BUDGET)
}

pub fn family_series_budgeted(spec: &FamilySpec, order: u32, budget: u32) -> Result<SeriesQ> {
    check_budget(order, budget)?;
    let coeffs = (0..=order).map(|n| BigInt::from(count(spec, n))).collect();
    SeriesQ::from_coeffs(coeffs)
}

/// `sum_{m,n} count_by_parts(spec, m, n) x^m q^n` up to `q^order`.
pub fn family_series_xq(spec: &FamilySpec, order: u32) -> Result<SeriesXQ> {
    family_series_xq_budgeted(spec, order, DEFAULT_BUDGET)
}

pub fn family_series_xq_budgeted(spec: &FamilySpec, order: u32, budget: u32) -> Result<SeriesXQ> {
    check_budget(order, budget)?;
    let polys = (0..=order)
        .map(|n| {
            let mut by_parts: Vec<u64> = Vec::new();
            visit_family(spec, n, |item| {
                let m = item.num_parts() as usize;
                if by_parts.len() <= m {
                    by_parts.resize(m + 1, 0);
                }
                by_parts[m] += 1;
            });
            by_parts.into_iter().map(BigInt::from).collect()
        })
        .collect();
    SeriesXQ::from_polys(polys)
}

/// One exported count: CSV columns `family,k,a,i,n,m,count`, with `m`
/// empty for totals over all part counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub family: Family,
    pub k: u32,
    pub a: u32,
    pub i: Option<u32>,
    pub n: u32,
    pub m: Option<u64>,
    pub count: u64,
}

impl CountRow {
    pub const CSV_HEADER: &'static str = "family,k,a,i,n,m,count";

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.family,
            self.k,
            self.a,
            opt(self.i.map(u64::from)),
            self.n,
            opt(self.m),
            self.count
        )
    }
}

/// Rows `(n, count)` for `0 <= n <= n_max`, optionally split by part count.
pub fn count_table(spec: &FamilySpec, n_max: u32, by_parts: bool, budget: u32) -> Result<Vec<CountRow>> {
    check_budget(n_max, budget)?;
    let row = |n, m, count| CountRow {
        family: spec.family,
        k: spec.k,
        a: spec.a,
        i: spec.i,
        n,
        m,
        count,
    };
    let mut rows = Vec::new();
    if by_parts {
        let series = family_series_xq_budgeted(spec, n_max, budget)?;
        for n in 0..=n_max {
            let poly = series.poly(n as usize)?;
            for (m, c) in poly.iter().enumerate() {
                let c = u64::try_from(c).expect("counts are non-negative");
                if c > 0 {
                    rows.push(row(n, Some(m as u64), c));
                }
            }
        }
    } else {
        for n in 0..=n_max {
            rows.push(row(n, None, count(spec, n)));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, k: u32, a: u32) -> FamilySpec {
        FamilySpec::of(f, k, a).unwrap()
    }

    fn op(parts: &[i32]) -> OverPartition {
        OverPartition::from_signed(parts).unwrap()
    }

    #[test]
    fn u_rejects_lone_overlined_one() {
        assert!(!admits(&spec(Family::U, 2, 2), &op(&[-1])));
        assert!(admits(&spec(Family::U, 2, 2), &op(&[1])));
    }

    #[test]
    fn bbar_accepts_single_overlined_two() {
        assert!(admits(&spec(Family::Bbar, 2, 1), &op(&[-2])));
    }

    #[test]
    fn empty_item_is_admitted_everywhere() {
        let empty = OverPartition::empty();
        for f in Family::ALL {
            let s = match f {
                Family::Urefined => FamilySpec::new(f, 3, 3, Some(1)).unwrap(),
                Family::G => spec(f, 3, 1),
                _ => spec(f, 3, 2),
            };
            assert!(admits(&s, &empty), "{s}");
        }
    }

    #[test]
    fn hand_counted_examples() {
        assert_eq!(count(&spec(Family::B, 2, 2), 4), 2);
        assert_eq!(count(&spec(Family::A, 2, 2), 4), 2);
        assert_eq!(count(&spec(Family::Abar, 2, 1), 2), 2);
        assert_eq!(count(&spec(Family::Bbar, 2, 1), 2), 2);
        assert_eq!(count(&spec(Family::U, 2, 2), 1), 1);
    }

    #[test]
    fn overlined_member_of_a_partition_family_is_rejected() {
        assert!(!admits(&spec(Family::A, 2, 2), &op(&[-4])));
        assert!(admits(&spec(Family::A, 2, 2), &op(&[4])));
    }

    #[test]
    fn gap_condition_on_canonical_order() {
        // Bbar_{2,2}: 2bar,2 allowed (overlined head needs gap >= 1? no: 2-2 = 0)
        assert!(!admits(&spec(Family::Bbar, 2, 2), &op(&[-2, 2])));
        assert!(admits(&spec(Family::Bbar, 2, 2), &op(&[-2, 1])));
        assert!(!admits(&spec(Family::Bbar, 2, 2), &op(&[2, 1])));
        assert!(admits(&spec(Family::Bbar, 3, 2), &op(&[-2, 2, 1])));
        assert!(!admits(&spec(Family::Bbar, 3, 2), &op(&[2, 2, 1])));
    }

    #[test]
    fn g_needs_matching_parity() {
        assert!(matches!(FamilySpec::of(Family::G, 3, 2), Err(Error::Usage(_))));
        assert!(FamilySpec::of(Family::G, 4, 2).is_ok());
    }

    #[test]
    fn parameter_validation() {
        assert!(FamilySpec::of(Family::B, 2, 3).is_err());
        assert!(FamilySpec::of(Family::B, 0, 0).is_err());
        assert!(FamilySpec::of(Family::U, 2, 0).is_ok());
        assert!(FamilySpec::of(Family::U, 2, 3).is_ok());
        assert!(FamilySpec::of(Family::U, 2, 4).is_err());
        assert!(FamilySpec::new(Family::U, 2, 2, Some(1)).is_err());
        assert!(FamilySpec::new(Family::Urefined, 2, 2, None).is_err());
        assert!(FamilySpec::new(Family::Urefined, 2, 2, Some(3)).is_err());
        assert!(refined_count(4, 2, 0, 3).is_err());
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("Bbar".parse::<Family>().unwrap(), Family::Bbar);
        assert_eq!("ubar".parse::<Family>().unwrap(), Family::Ubar);
        let err = "Q".parse::<Family>().unwrap_err().to_string();
        assert!(err.contains("Urefined"), "{err}");
    }

    #[test]
    fn refined_count_on_empty() {
        assert_eq!(refined_count(3, 2, 1, 0).unwrap(), 1);
        assert_eq!(refined_count(3, 2, 2, 0).unwrap(), 0);
    }

    #[test]
    fn u_with_a_zero_is_empty() {
        let s = spec(Family::U, 4, 0);
        assert!((0..=10).all(|n| count(&s, n) == 0));
        let s = spec(Family::Ubar, 4, 0);
        assert!((0..=10).all(|n| count(&s, n) == 0));
    }

    #[test]
    fn budget_is_enforced() {
        let s = spec(Family::U, 2, 2);
        assert!(matches!(family_series(&s, 31), Err(Error::Usage(_))));
        assert!(family_series_budgeted(&s, 31, 31).is_ok());
    }

    #[test]
    fn series_basics() {
        let s = spec(Family::U, 4, 2);
        assert_eq!(family_series(&s, 0).unwrap(), SeriesQ::one(0));
        let xq = family_series_xq(&s, 12).unwrap();
        assert!(xq.x_degree_within_q_degree());
        assert_eq!(xq.coeff(1, 1).unwrap(), BigInt::from(1));
        assert_eq!(xq.at_x_one(), family_series(&s, 12).unwrap());
    }

    #[test]
    fn csv_rows() {
        let s = FamilySpec::of(Family::Bbar, 2, 1).unwrap();
        let rows = count_table(&s, 2, false, DEFAULT_BUDGET).unwrap();
        assert_eq!(rows[2].to_csv(), "Bbar,2,1,,2,,2");
        let rows = count_table(&s, 2, true, DEFAULT_BUDGET).unwrap();
        assert!(rows.iter().all(|r| r.m.is_some()));
        assert_eq!(rows.iter().filter(|r| r.n == 2).map(|r| r.count).sum::<u64>(), 2);
    }
}
