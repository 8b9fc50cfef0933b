//! The split of a `U_{2k,2a}` overpartition into distinct odd parts and a
//! `Bbar_{k,a}` overpartition of half the remaining weight.
//!
//! For every odd size with odd total frequency one plain copy moves to
//! `gamma`. Every size now has even total `t`, and the remaining copies are
//! paired and halved: `beta_prime` gets `t/2` copies of that size, overlined
//! exactly when the original size was. The `Ubar_{2k,2a}` side runs the same
//! steps with the roles of odd and even sizes swapped.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, usage, Result};
use crate::families::{
    admits, count, visit_overpartitions, Family, FamilySpec, Multiplicity, OverPartition,
};

/// Which of the two maps: `U_{2k,2a}` with odd removed parts, or
/// `Ubar_{2k,2a}` with even removed parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    U,
    Ubar,
}

impl Side {
    fn family(self) -> Family {
        match self {
            Side::U => Family::U,
            Side::Ubar => Family::Ubar,
        }
    }

    fn removes(self, size: u32) -> bool {
        (size % 2 == 1) == (self == Side::U)
    }
}

/// Image of one overpartition. `gamma` is strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SplitPair {
    pub gamma: Vec<u32>,
    pub beta_prime: OverPartition,
}

impl SplitPair {
    pub fn weight(&self) -> u64 {
        self.gamma.iter().map(|&g| u64::from(g)).sum::<u64>() + 2 * self.beta_prime.weight()
    }
}

fn source_spec(side: Side, k: u32, a: u32) -> Result<FamilySpec> {
    if k == 0 || a == 0 || a > k {
        return Err(usage(format!("the split needs k >= a >= 1 (k={k}, a={a})")));
    }
    FamilySpec::of(side.family(), 2 * k, 2 * a)
}

/// Splits `lambda`, which must be admissible for `U_{2k,2a}` (or `Ubar`).
pub fn forward_on(side: Side, lambda: &OverPartition, k: u32, a: u32) -> Result<SplitPair> {
    let spec = source_spec(side, k, a)?;
    if !admits(&spec, lambda) {
        return Err(domain(format!("{lambda} is not in {spec}")));
    }
    let mut gamma = Vec::new();
    let mut freq = vec![Multiplicity::default(); lambda.largest_part() as usize];
    for (size, m) in lambda.sizes() {
        let mut total = m.total();
        if side.removes(size) && total % 2 == 1 {
            gamma.push(size);
            total -= 1;
        }
        let half = total / 2;
        freq[size as usize - 1] = Multiplicity {
            plain: half - u32::from(m.overlined),
            overlined: m.overlined,
        };
    }
    gamma.reverse();
    Ok(SplitPair {
        gamma,
        beta_prime: OverPartition::from_multiplicities(freq),
    })
}

/// Reassembles an overpartition from its split, rejecting pairs whose
/// reconstruction falls outside the source family.
pub fn inverse_on(side: Side, pair: &SplitPair, k: u32, a: u32) -> Result<OverPartition> {
    let spec = source_spec(side, k, a)?;
    if pair.gamma.windows(2).any(|w| w[0] <= w[1]) {
        return Err(domain("gamma must have distinct parts in decreasing order"));
    }
    if let Some(&g) = pair.gamma.iter().find(|&&g| g == 0 || !side.removes(g)) {
        return Err(domain(format!("gamma part {g} has the wrong parity")));
    }
    let top = pair
        .beta_prime
        .largest_part()
        .max(pair.gamma.first().copied().unwrap_or(0));
    let mut freq = vec![Multiplicity::default(); top as usize];
    for (size, m) in pair.beta_prime.sizes() {
        freq[size as usize - 1] = Multiplicity {
            plain: 2 * m.total() - u32::from(m.overlined),
            overlined: m.overlined,
        };
    }
    for &g in &pair.gamma {
        freq[g as usize - 1].plain += 1;
    }
    let lambda = OverPartition::from_multiplicities(freq);
    if !admits(&spec, &lambda) {
        return Err(domain(format!("{lambda} rebuilt from the pair is not in {spec}")));
    }
    Ok(lambda)
}

pub fn forward(lambda: &OverPartition, k: u32, a: u32) -> Result<SplitPair> {
    forward_on(Side::U, lambda, k, a)
}

pub fn inverse(pair: &SplitPair, k: u32, a: u32) -> Result<OverPartition> {
    inverse_on(Side::U, pair, k, a)
}

/// Partitions of `n` into distinct parts of the parity that `side` removes,
/// each strictly decreasing.
fn distinct_parts(side: Side, n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, step_ok: &dyn Fn(u32) -> bool, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev().filter(|&p| step_ok(p)) {
            cur.push(p);
            go(n - p, p - 1, step_ok, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &|p| side.removes(p), &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionRow {
    pub n: u32,
    /// Members of the source family of weight `n`.
    pub source: u64,
    /// Pairs `(gamma, beta')` with `|gamma| + 2|beta'| = n`.
    pub pairs: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub side: Side,
    pub k: u32,
    pub a: u32,
    pub n_max: u32,
    pub passed: bool,
    pub rows: Vec<BijectionRow>,
    /// Human-readable violations, each naming the offending item.
    pub witnesses: Vec<String>,
}

fn check_weight(side: Side, n: u32, k: u32, a: u32) -> (BijectionRow, Vec<String>) {
    let spec = source_spec(side, k, a).expect("validated by caller");
    let target = FamilySpec::of(Family::Bbar, k, a).expect("k >= a >= 1");
    let mut witnesses = Vec::new();
    let mut images = std::collections::HashSet::new();
    let mut source = 0u64;
    visit_overpartitions(n, |lambda| {
        if !admits(&spec, lambda) {
            return;
        }
        source += 1;
        let pair = match forward_on(side, lambda, k, a) {
            Ok(p) => p,
            Err(e) => {
                witnesses.push(format!("forward {lambda}: {e}"));
                return;
            }
        };
        if pair.weight() != u64::from(n) {
            witnesses.push(format!("weight of {lambda} not conserved"));
        }
        if !admits(&target, &pair.beta_prime) {
            witnesses.push(format!("{lambda} maps to {} outside {target}", pair.beta_prime));
        }
        match inverse_on(side, &pair, k, a) {
            Ok(back) if &back == lambda => {}
            Ok(back) => witnesses.push(format!("{lambda} round-trips to {back}")),
            Err(e) => witnesses.push(format!("inverse of the image of {lambda}: {e}")),
        }
        if !images.insert(pair) {
            witnesses.push(format!("{lambda} shares its image with another item"));
        }
    });

    // Every pair must come from some source item, which also gives the
    // count identity.
    let mut pairs = 0u64;
    for g in (0..=n).filter(|g| (n - g).is_multiple_of(2)) {
        let gammas = distinct_parts(side, g);
        if gammas.is_empty() {
            continue;
        }
        let half = (n - g) / 2;
        pairs += gammas.len() as u64 * count(&target, half);
        visit_overpartitions(half, |beta| {
            if !admits(&target, beta) {
                return;
            }
            for gamma in &gammas {
                let pair = SplitPair {
                    gamma: gamma.clone(),
                    beta_prime: beta.clone(),
                };
                if !images.contains(&pair) {
                    witnesses.push(format!("pair ({gamma:?}, {beta}) is not an image"));
                }
            }
        });
    }
    if pairs != source {
        witnesses.push(format!("n={n}: {source} source items but {pairs} pairs"));
    }
    let ok = witnesses.is_empty();
    (BijectionRow { n, source, pairs, ok }, witnesses)
}

/// Exhaustive check for every `n <= n_max`: forward is total and injective,
/// images are admissible pairs of the right weight, both round trips hold,
/// and the two sides have equal counts.
pub fn check_bijection_on(side: Side, k: u32, a: u32, n_max: u32) -> Result<BijectionReport> {
    source_spec(side, k, a)?;
    let results: Vec<_> = (0..=n_max)
        .into_par_iter()
        .map(|n| check_weight(side, n, k, a))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut witnesses = Vec::new();
    for (row, w) in results {
        rows.push(row);
        witnesses.extend(w);
    }
    Ok(BijectionReport {
        side,
        k,
        a,
        n_max,
        passed: witnesses.is_empty(),
        rows,
        witnesses,
    })
}

pub fn check_bijection(k: u32, a: u32, n_max: u32) -> Result<BijectionReport> {
    check_bijection_on(Side::U, k, a, n_max)
}
