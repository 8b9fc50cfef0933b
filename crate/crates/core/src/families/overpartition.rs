use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// How often one part size occurs: `plain` non-overlined copies and at most
/// one overlined copy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiplicity {
    pub plain: u32,
    pub overlined: bool,
}

impl Multiplicity {
    pub fn total(self) -> u32 {
        self.plain + u32::from(self.overlined)
    }

    pub fn is_empty(self) -> bool {
        self.total() == 0
    }
}

/// One entry of the canonical part sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub size: u32,
    pub overlined: bool,
}

/// An overpartition stored by frequencies: entry `l - 1` holds
/// `(f_l, f_lbar)`. Trailing empty entries are never stored, so derived
/// equality is equality of overpartitions. A partition is an overpartition
/// with no overlined parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OverPartition {
    freq: Vec<Multiplicity>,
}

impl OverPartition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds from a list of parts in any order. Fails when a size is
    /// overlined twice or a part is zero.
    pub fn from_parts(parts: &[Part]) -> Result<Self> {
        let mut op = Self::empty();
        for p in parts {
            if p.size == 0 {
                return Err(domain("parts must be positive"));
            }
            let m = op.entry_mut(p.size);
            if p.overlined {
                if m.overlined {
                    return Err(domain(format!("size {} overlined twice", p.size)));
                }
                m.overlined = true;
            } else {
                m.plain += 1;
            }
        }
        op.trim();
        Ok(op)
    }

    /// Shorthand for tests and examples: positive entries are plain parts,
    /// negative entries are overlined parts of that size.
    pub fn from_signed(parts: &[i32]) -> Result<Self> {
        let parts: Vec<Part> = parts
            .iter()
            .map(|&p| Part {
                size: p.unsigned_abs(),
                overlined: p < 0,
            })
            .collect();
        Self::from_parts(&parts)
    }

    /// A partition with the given multiset of parts.
    pub fn partition(parts: &[u32]) -> Result<Self> {
        let parts: Vec<Part> = parts
            .iter()
            .map(|&size| Part {
                size,
                overlined: false,
            })
            .collect();
        Self::from_parts(&parts)
    }

    pub(crate) fn from_multiplicities(freq: Vec<Multiplicity>) -> Self {
        let mut op = OverPartition { freq };
        op.trim();
        op
    }

    fn entry_mut(&mut self, size: u32) -> &mut Multiplicity {
        let idx = size as usize - 1;
        if self.freq.len() <= idx {
            self.freq.resize(idx + 1, Multiplicity::default());
        }
        &mut self.freq[idx]
    }

    fn trim(&mut self) {
        while self.freq.last().is_some_and(|m| m.is_empty()) {
            self.freq.pop();
        }
    }

    pub fn multiplicity(&self, size: u32) -> Multiplicity {
        if size == 0 {
            return Multiplicity::default();
        }
        self.freq
            .get(size as usize - 1)
            .copied()
            .unwrap_or_default()
    }

    /// `f_l`: non-overlined copies of `l`.
    pub fn plain(&self, size: u32) -> u32 {
        self.multiplicity(size).plain
    }

    /// `f_lbar`: 0 or 1.
    pub fn overlined(&self, size: u32) -> u32 {
        u32::from(self.multiplicity(size).overlined)
    }

    /// `f_l + f_lbar`.
    pub fn total(&self, size: u32) -> u32 {
        self.multiplicity(size).total()
    }

    pub fn largest_part(&self) -> u32 {
        self.freq.len() as u32
    }

    /// Sizes that occur, ascending, with their multiplicities.
    pub fn sizes(&self) -> impl Iterator<Item = (u32, Multiplicity)> + '_ {
        self.freq
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_empty())
            .map(|(i, m)| (i as u32 + 1, *m))
    }

    pub fn weight(&self) -> u64 {
        self.sizes()
            .map(|(l, m)| u64::from(l) * u64::from(m.total()))
            .sum()
    }

    pub fn num_parts(&self) -> u64 {
        self.freq.iter().map(|m| u64::from(m.total())).sum()
    }

    pub fn is_partition(&self) -> bool {
        self.freq.iter().all(|m| !m.overlined)
    }

    /// Parts in non-increasing order; within one size the overlined copy
    /// comes first.
    pub fn canonical_sequence(&self) -> Vec<Part> {
        let mut seq = Vec::with_capacity(self.num_parts() as usize);
        for (idx, m) in self.freq.iter().enumerate().rev() {
            let size = idx as u32 + 1;
            if m.overlined {
                seq.push(Part {
                    size,
                    overlined: true,
                });
            }
            seq.extend((0..m.plain).map(|_| Part {
                size,
                overlined: false,
            }));
        }
        seq
    }
}

impl fmt::Display for OverPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.canonical_sequence().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if p.overlined {
                write!(f, "{}\u{305}", p.size)?;
            } else {
                write!(f, "{}", p.size)?;
            }
        }
        write!(f, ")")
    }
}

impl Serialize for OverPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.canonical_sequence().serialize(s)
    }
}

impl<'de> Deserialize<'de> for OverPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<Part>::deserialize(d)?;
        OverPartition::from_parts(&parts).map_err(serde::de::Error::custom)
    }
}

struct Enumerator<'a, F> {
    allow_overlines: bool,
    stack: Vec<Multiplicity>,
    visit: &'a mut F,
}

impl<F: FnMut(&OverPartition)> Enumerator<'_, F> {
    // Chooses the multiplicity of size `l` with `remaining` weight left.
    // Choices ascend in (overlined, plain), so emission order is
    // lexicographic on the frequency vector.
    fn run(&mut self, l: u32, remaining: u32) {
        if remaining == 0 {
            let op = OverPartition {
                freq: self.stack.clone(),
            };
            (self.visit)(&op);
            return;
        }
        if l > remaining {
            return;
        }
        let max_ov = u32::from(self.allow_overlines);
        for ov in 0..=max_ov {
            let mut plain = 0;
            while l * (plain + ov) <= remaining {
                self.stack.push(Multiplicity {
                    plain,
                    overlined: ov == 1,
                });
                self.run(l + 1, remaining - l * (plain + ov));
                self.stack.pop();
                plain += 1;
            }
        }
    }
}

/// Calls `visit` once for every overpartition of `n`, in lexicographic
/// order of the frequency vector `((f_1bar, f_1), (f_2bar, f_2), ...)`.
pub fn visit_overpartitions(n: u32, mut visit: impl FnMut(&OverPartition)) {
    Enumerator {
        allow_overlines: true,
        stack: Vec::new(),
        visit: &mut visit,
    }
    .run(1, n);
}

/// Same as [`visit_overpartitions`] restricted to ordinary partitions.
pub fn visit_partitions(n: u32, mut visit: impl FnMut(&OverPartition)) {
    Enumerator {
        allow_overlines: false,
        stack: Vec::new(),
        visit: &mut visit,
    }
    .run(1, n);
}

pub fn enumerate_overpartitions(n: u32) -> impl Iterator<Item = OverPartition> {
    let mut all = Vec::new();
    visit_overpartitions(n, |op| all.push(op.clone()));
    all.into_iter()
}

pub fn enumerate_partitions(n: u32) -> impl Iterator<Item = OverPartition> {
    let mut all = Vec::new();
    visit_partitions(n, |op| all.push(op.clone()));
    all.into_iter()
}
