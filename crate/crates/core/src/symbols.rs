//! Quadratic norm residue symbols `(alpha, d / P)` for `L_{m,d}/K_m` at the
//! cyclotomic units of `K_m`, and the unit index exponent `e_{m,d}`.
//!
//! Only primes `p = 3, 5 (mod 8)` are handled. Each symbol descends through
//! the norm maps `K_m -> K_{m-1} -> ... -> K_3`, so its value depends on `p`
//! and `k` modulo 8 alone.

use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{is_prime, Level, SquarefreeOdd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("{p} is {residue} mod 8; symbols are only tabulated for 3 and 5")]
    UnsupportedResidue { p: u64, residue: u8 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("k = {k} must be odd with 1 < k < 2^(m-1) = {bound}")]
    KOutOfRange { k: u64, bound: u64 },
    #[error("{0} is prime; the unit table needs a composite d")]
    NotComposite(u64),
    #[error("level {level} exceeds the table cap {cap}")]
    LevelTooLarge { level: u32, cap: u32 },
}

/// A value of a quadratic norm residue symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolValue {
    Plus,
    Minus,
}

impl SymbolValue {
    pub fn from_sign(negative: bool) -> Self {
        if negative {
            SymbolValue::Minus
        } else {
            SymbolValue::Plus
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            SymbolValue::Plus => 1,
            SymbolValue::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == SymbolValue::Minus
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        SymbolValue::from_sign(self.is_minus() != rhs.is_minus())
    }
}

impl TryFrom<i8> for SymbolValue {
    type Error = i8;
    fn try_from(v: i8) -> Result<Self, i8> {
        match v {
            1 => Ok(SymbolValue::Plus),
            -1 => Ok(SymbolValue::Minus),
            other => Err(other),
        }
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolValue::Plus => "+1",
            SymbolValue::Minus => "-1",
        })
    }
}

impl Serialize for SymbolValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

fn check_prime(p: u64) -> Result<u8, SymbolError> {
    if !is_prime(p) {
        return Err(SymbolError::NotPrime(p));
    }
    let residue = (p % 8) as u8;
    match residue {
        3 | 5 => Ok(residue),
        _ => Err(SymbolError::UnsupportedResidue { p, residue }),
    }
}

/// `(zeta_{2^m}, p / P)`: always -1 for `p = 3, 5 (mod 8)`.
pub fn zeta_symbol(p: u64, _level: Level) -> Result<SymbolValue, SymbolError> {
    check_prime(p)?;
    Ok(SymbolValue::Minus)
}

/// `(epsilon_2, p / P)` at a prime of `K_3` over `p`, with `epsilon_2 = 1 + sqrt 2`.
pub fn epsilon2_symbol(p: u64) -> Result<SymbolValue, SymbolError> {
    Ok(SymbolValue::from_sign(check_prime(p)? == 3))
}

fn check_k(k: u64, level: Level) -> Result<(), SymbolError> {
    let bound = level.degree();
    if k % 2 == 1 && 1 < k && k < bound {
        Ok(())
    } else {
        Err(SymbolError::KOutOfRange { k, bound })
    }
}

fn xi_value(k: u64, p_residue: u8) -> SymbolValue {
    SymbolValue::from_sign(p_residue == 3 && matches!(k % 8, 3 | 5))
}

/// `(xi_{k,m}, d / P)` where `P` lies over `p`: -1 exactly when
/// `p = 3 (mod 8)` and `k = +-3 (mod 8)`.
pub fn xi_symbol(k: u64, p: u64, level: Level) -> Result<SymbolValue, SymbolError> {
    check_k(k, level)?;
    Ok(xi_value(k, check_prime(p)?))
}

/// A generator of the cyclotomic units of `K_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitGenerator {
    Zeta,
    Xi { k: u64 },
}

impl fmt::Display for UnitGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitGenerator::Zeta => f.write_str("zeta"),
            UnitGenerator::Xi { k } => write!(f, "xi_{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolRow {
    pub generator: UnitGenerator,
    /// One entry per prime divisor of `d`, in ascending order of the prime.
    pub values: Vec<SymbolValue>,
}

/// Local symbols of every generator at every prime divisor of `d`.
///
/// Both primes of `K_m` over a given `p` carry the same values, so the columns
/// are indexed by rational primes; [`UnitClassTable::prime_ideal_columns`]
/// expands them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitClassTable {
    pub level: Level,
    pub d: u64,
    pub primes: Vec<u64>,
    pub rows: Vec<SymbolRow>,
    /// `(E : E cap N) = 2^e`, the GF(2)-rank of the rows.
    pub e: u32,
}

/// Largest level for which the table enumerates all `xi_{k,m}`.
pub const DEFAULT_TABLE_LEVEL_CAP: u32 = 12;

pub fn unit_class_table(d: &SquarefreeOdd, level: Level) -> Result<UnitClassTable, SymbolError> {
    unit_class_table_capped(d, level, DEFAULT_TABLE_LEVEL_CAP)
}

pub fn unit_class_table_capped(
    d: &SquarefreeOdd,
    level: Level,
    cap: u32,
) -> Result<UnitClassTable, SymbolError> {
    if d.is_prime() {
        return Err(SymbolError::NotComposite(d.value()));
    }
    if level.get() > cap {
        return Err(SymbolError::LevelTooLarge {
            level: level.get(),
            cap,
        });
    }
    let residues = d
        .primes()
        .iter()
        .map(|&p| check_prime(p))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = vec![SymbolRow {
        generator: UnitGenerator::Zeta,
        values: vec![SymbolValue::Minus; residues.len()],
    }];
    rows.extend((3..level.degree()).step_by(2).map(|k| SymbolRow {
        generator: UnitGenerator::Xi { k },
        values: residues.iter().map(|&r| xi_value(k, r)).collect(),
    }));
    let e = gf2_rank(rows.iter().map(|row| sign_mask(&row.values)));
    Ok(UnitClassTable {
        level,
        d: d.value(),
        primes: d.primes().to_vec(),
        rows,
        e,
    })
}

impl UnitClassTable {
    /// Rows repeated per prime ideal of `K_m` (each `p` splits into two).
    pub fn prime_ideal_columns(&self) -> Vec<Vec<SymbolValue>> {
        self.rows
            .iter()
            .map(|row| row.values.iter().flat_map(|&v| [v, v]).collect())
            .collect()
    }
}

/// Closed-form unit index: 1 when all prime divisors share a class mod 8,
/// 2 otherwise.
pub fn closed_form_unit_index(d: &SquarefreeOdd) -> u32 {
    if d.same_coset() {
        1
    } else {
        2
    }
}

fn sign_mask(values: &[SymbolValue]) -> u64 {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_minus())
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

/// Rank over GF(2) of bit-vectors of length at most 64.
pub fn gf2_rank(rows: impl IntoIterator<Item = u64>) -> u32 {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in rows {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}
