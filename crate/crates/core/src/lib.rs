//! Exact q-series machinery for parity-restricted Rogers-Ramanujan-Gordon
//! identities on overpartitions.
//!
//! - [`series`]: truncated power series in `q` and `(x, q)` with big-integer
//!   coefficients, plus q-Pochhammer product expansion.
//! - [`qkernel`]: the `Qbar` kernel in doubled-index form, its shift and
//!   reflection relations, and the Andrews-Gordon style multisums.
//! - [`families`]: brute-force enumeration of partitions and overpartitions
//!   and the counting families built on them.
//! - [`identities`]: a registry of every identity as an equality of two
//!   series, and the exact coefficient checker.
//! - [`bijection`]: the map splitting a `U_{2k,2a}` overpartition into
//!   distinct odd parts and a `Bbar_{k,a}` overpartition.
//! - [`cli`]: argument parsing and rendering for the `rrg` binary.

pub mod bijection;
pub mod cli;
pub mod error;
pub mod families;
pub mod identities;
pub mod qkernel;
pub mod series;

pub use error::{Error, Result};
