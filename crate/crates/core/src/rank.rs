//! Closed-form invariants of `L_{m,d}` and `L_{m,d}^+`.
//!
//! Inputs outside the hypotheses of the underlying theorems are answered with
//! [`Coverage::NotCovered`] (or an error for the cyclicity statement), never
//! with an extrapolated value.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{Level, SquarefreeOdd};
use crate::splitting::ramification_data;
use crate::symbols::{closed_form_unit_index, unit_class_table, DEFAULT_TABLE_LEVEL_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("t - 1 - e is negative for t = {t}, e = {e}")]
    NegativeRank { t: u64, e: u64 },
    #[error("d = {0} is a prime congruent to 7 mod 8, excluded by hypothesis")]
    HypothesisViolated(u64),
    #[error("levels must be consecutive and ascending, found {prev} then {next}")]
    NonConsecutiveLevels { prev: u32, next: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// A value that a theorem determines, or the marker that no theorem does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage<T> {
    Covered(T),
    NotCovered,
}

impl<T> Coverage<T> {
    pub fn covered(self) -> Option<T> {
        match self {
            Coverage::Covered(v) => Some(v),
            Coverage::NotCovered => None,
        }
    }

    pub fn is_covered(&self) -> bool {
        matches!(self, Coverage::Covered(_))
    }
}

impl<T: Serialize> Serialize for Coverage<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Coverage::Covered(v) => v.serialize(s),
            Coverage::NotCovered => s.serialize_str("not_covered"),
        }
    }
}

/// `h(L_{m,d})` is odd exactly when `d` is a prime `= 3, 5 (mod 8)`.
pub fn class_number_parity(d: &SquarefreeOdd, _level: Level) -> Parity {
    if d.is_prime() && d.all_three_or_five() {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// 2-rank of `Cl(L_{m,d})` when every prime divisor is `3` or `5 (mod 8)`:
/// `2r - 2` for a single class mod 8, `2r - 3` for mixed classes, `0` for a
/// prime.
pub fn rank2(d: &SquarefreeOdd, _level: Level) -> Coverage<u32> {
    if !d.all_three_or_five() {
        return Coverage::NotCovered;
    }
    let r = d.r() as u32;
    Coverage::Covered(match (d.is_prime(), d.same_coset()) {
        (true, _) => 0,
        (false, true) => 2 * r - 2,
        (false, false) => 2 * r - 3,
    })
}

/// Lower bound on the 2-rank implied by parity arguments alone, for inputs
/// where [`rank2`] is not covered.
pub fn rank2_lower_bound(d: &SquarefreeOdd, level: Level) -> u32 {
    if let Coverage::Covered(r) = rank2(d, level) {
        return r;
    }
    match (d.is_prime(), d.residues8()[0]) {
        // two independent unramified quadratic extensions
        (true, 1) => 2,
        _ => 1,
    }
}

/// Ambiguous class number formula `t - 1 - e`.
pub fn ambiguous_rank(t: u64, e: u64) -> Result<u64, RankError> {
    (t.checked_sub(1).and_then(|x| x.checked_sub(e))).ok_or(RankError::NegativeRank { t, e })
}

/// `Cl_2(L_{m,d})` is cyclic and non-trivial exactly when `d = pq` with
/// `p = 5` and `q = 3 (mod 8)`.
pub fn cyclicity(d: &SquarefreeOdd, _level: Level) -> Result<bool, RankError> {
    if d.is_prime() && d.residues8()[0] == 7 {
        return Err(RankError::HypothesisViolated(d.value()));
    }
    Ok(is_five_three_pair(d))
}

fn is_five_three_pair(d: &SquarefreeOdd) -> bool {
    let mut res = d.residues8().to_vec();
    res.sort_unstable();
    res == [3, 5]
}

/// 2-rank of `Cl(L_{m,d}^+)`: `r - 2` when `d = 1 (mod 4)` and some prime
/// divisor is `3 (mod 4)`, otherwise `r - 1`.
pub fn real_rank2(d: &SquarefreeOdd, _level: Level) -> Coverage<u32> {
    if !d.all_three_or_five() {
        return Coverage::NotCovered;
    }
    let r = d.r() as u32;
    let has_three_mod_four = d.primes().iter().any(|p| p % 4 == 3);
    Coverage::Covered(if d.mod4() == 1 && has_three_mod_four {
        r - 2
    } else {
        r - 1
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaBound {
    /// lambda is 0 or 1; which one is not determined.
    ZeroOrOne,
    Unknown,
}

/// Facts about the cyclotomic `Z_2`-extension of `Q(sqrt(-1), sqrt d)` and its
/// Iwasawa module `X_inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IwasawaReport {
    pub x_infinity_trivial: bool,
    /// `None` when `d` is a prime `= 7 (mod 8)`. The trivial module counts as
    /// cyclic.
    pub x_infinity_cyclic: Option<bool>,
    pub lambda_bound: LambdaBound,
}

pub fn iwasawa_report(d: &SquarefreeOdd) -> IwasawaReport {
    let trivial = d.is_prime() && d.all_three_or_five();
    let pair = is_five_three_pair(d);
    let excluded = d.is_prime() && d.residues8()[0] == 7;
    IwasawaReport {
        x_infinity_trivial: trivial,
        x_infinity_cyclic: (!excluded).then_some(trivial || pair),
        lambda_bound: if pair {
            LambdaBound::ZeroOrOne
        } else {
            LambdaBound::Unknown
        },
    }
}

/// Outcome of applying the rank stabilization criterion to a sequence of
/// consecutive layers of a `Z_2`-extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationWitness {
    pub sequence: Vec<(u32, u64)>,
    pub stabilized_from: Option<u32>,
    /// First listed level. The caller asserts that every ramified prime is
    /// totally ramified from here on; this is recorded, not checked.
    pub total_ramification_assumed_from: Option<u32>,
}

impl StabilizationWitness {
    /// Value at any level, including levels past the end of the sequence once
    /// stabilization has been observed.
    pub fn value_at(&self, level: u32) -> Option<u64> {
        if let Some(&(_, v)) = self.sequence.iter().find(|(l, _)| *l == level) {
            return Some(v);
        }
        let from = self.stabilized_from?;
        (level >= from)
            .then(|| {
                self.sequence
                    .iter()
                    .find(|(l, _)| *l == from)
                    .map(|&(_, v)| v)
            })
            .flatten()
    }
}

pub fn fukuda_stabilize(sequence: &[(u32, u64)]) -> Result<StabilizationWitness, RankError> {
    for w in sequence.windows(2) {
        if w[1].0 != w[0].0 + 1 {
            return Err(RankError::NonConsecutiveLevels {
                prev: w[0].0,
                next: w[1].0,
            });
        }
    }
    Ok(StabilizationWitness {
        sequence: sequence.to_vec(),
        stabilized_from: sequence
            .windows(2)
            .find(|w| w[0].1 == w[1].1)
            .map(|w| w[0].0),
        total_ramification_assumed_from: sequence.first().map(|&(l, _)| l),
    })
}

/// Everything the closed forms say about `(d, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub d: u64,
    pub m: Level,
    pub r: usize,
    pub residues8: Vec<u8>,
    pub parity: Parity,
    pub rank2: Coverage<u32>,
    pub rank2_lower_bound: u32,
    /// Unit index exponent `e_{m,d}`.
    pub e: Coverage<u32>,
    pub t: u64,
    pub cyclic_nontrivial: Coverage<bool>,
    pub real_rank2: Coverage<u32>,
    pub iwasawa: IwasawaReport,
}

/// Unit index exponent: from the symbol table for composite `d` (levels past
/// the table cap reuse the cap, the rows being level independent mod 8), and
/// `1` for a prime `d = 3, 5 (mod 8)`.
pub fn unit_index(d: &SquarefreeOdd, level: Level) -> Coverage<u32> {
    if !d.all_three_or_five() {
        return Coverage::NotCovered;
    }
    if d.is_prime() {
        return Coverage::Covered(1);
    }
    let table_level = if level.get() > DEFAULT_TABLE_LEVEL_CAP {
        Level::new(DEFAULT_TABLE_LEVEL_CAP).expect("cap is a valid level")
    } else {
        level
    };
    let table = unit_class_table(d, table_level).expect("covered composite d");
    debug_assert_eq!(table.e, closed_form_unit_index(d));
    Coverage::Covered(table.e)
}

pub fn rank_report(d: &SquarefreeOdd, level: Level) -> RankReport {
    let rank = rank2(d, level);
    RankReport {
        d: d.value(),
        m: level,
        r: d.r(),
        residues8: d.residues8().to_vec(),
        parity: class_number_parity(d, level),
        rank2: rank,
        rank2_lower_bound: rank2_lower_bound(d, level),
        e: unit_index(d, level),
        t: ramification_data(d, level).ramified_primes_over_km,
        cyclic_nontrivial: match cyclicity(d, level) {
            Ok(c) => Coverage::Covered(c),
            Err(_) => Coverage::NotCovered,
        },
        real_rank2: real_rank2(d, level),
        iwasawa: iwasawa_report(d),
    }
}
