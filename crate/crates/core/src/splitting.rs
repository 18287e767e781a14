//! Decomposition of rational primes in `K_m = Q(zeta_{2^m})`, in its real
//! subfield `K_m^+`, and the ramification data of `L_{m,d} = K_m(sqrt d)`.
//!
//! The closed forms come from cyclotomic reciprocity: an odd prime `p` is
//! unramified in `K_m` with residue degree equal to the order of `p` modulo
//! `2^m`. [`factorization_oracle`] recomputes the same data by factoring
//! `x^{2^{m-1}} + 1` over `F_p`.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, mult_order_mod_2m, Level, SquarefreeOdd};
use crate::fp_poly::{distinct_degree, FpPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not handled in the real subfield")]
    InvalidPrime,
    #[error("factorization oracle supports m <= {max}, got {0}", max = ORACLE_MAX_LEVEL)]
    LevelTooLarge(u32),
    #[error("prime {p} of d is {residue} mod 8; only 3 and 5 are supported")]
    UnsupportedResidue { p: u64, residue: u8 },
    #[error("irreducible factors of x^N + 1 mod {p} have unequal degrees {degrees:?}")]
    UnequalDegrees { p: u64, degrees: Vec<usize> },
}

/// Ramification index, residue degree and number of primes above `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitType {
    pub e: u64,
    pub f: u64,
    pub g: u64,
    pub field_degree: u64,
}

impl SplitType {
    pub fn is_inert(&self) -> bool {
        self.e == 1 && self.g == 1
    }
}

/// Which order contains `(1 + sqrt(+-d))/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegerRingTag {
    /// `Z[zeta, (1 + sqrt d)/2]`, for `d = 1 (mod 4)`.
    AdjoinHalfSqrtD,
    /// `Z[zeta, (1 + sqrt(-d))/2]`, for `d = 3 (mod 4)`.
    AdjoinHalfSqrtMinusD,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationData {
    pub level: Level,
    pub d: u64,
    /// Number of primes of `K_m` ramified in `L_{m,d}`.
    pub ramified_primes_over_km: u64,
    pub relative_discriminant_generator: u64,
    pub ring_of_integers: IntegerRingTag,
}

pub fn split_in_km(p: u64, level: Level) -> Result<SplitType, SplitError> {
    if !is_prime(p) {
        return Err(SplitError::NotPrime(p));
    }
    let n = level.degree();
    if p == 2 {
        return Ok(SplitType {
            e: n,
            f: 1,
            g: 1,
            field_degree: n,
        });
    }
    let f = mult_order_mod_2m(p, level);
    Ok(SplitType {
        e: 1,
        f,
        g: n / f,
        field_degree: n,
    })
}

/// Order of `p` in `(Z/2^m)^* / {+-1}`, a cyclic 2-group.
fn order_up_to_sign(p: u64, level: Level) -> u64 {
    let md = level.modulus() as u128;
    let mask = md - 1;
    let mut x = p as u128 & mask;
    let mut f = 1u64;
    while x != 1 && x != md - 1 {
        x = (x * x) & mask;
        f *= 2;
    }
    f
}

/// Splitting of an odd prime in `K_m^+`.
///
/// For `p = 3, 5 (mod 8)` the prime is inert. For `p = +-1 (mod 8)` the data is
/// read off the order of `p` modulo `{+-1}`; no closed form is claimed there.
pub fn split_in_km_plus(p: u64, level: Level) -> Result<SplitType, SplitError> {
    if p == 2 {
        return Err(SplitError::InvalidPrime);
    }
    if !is_prime(p) {
        return Err(SplitError::NotPrime(p));
    }
    let n = level.real_degree();
    let f = match p % 8 {
        3 | 5 => n,
        _ => order_up_to_sign(p, level),
    };
    Ok(SplitType {
        e: 1,
        f,
        g: n / f,
        field_degree: n,
    })
}

/// Highest level the polynomial oracle accepts (degree 64).
pub const ORACLE_MAX_LEVEL: u32 = 7;

/// Splitting of `p` in `K_m` from the factorization of `x^{2^{m-1}} + 1` mod `p`.
pub fn factorization_oracle(p: u64, level: Level) -> Result<SplitType, SplitError> {
    if level.get() > ORACLE_MAX_LEVEL {
        return Err(SplitError::LevelTooLarge(level.get()));
    }
    if p == 2 || !is_prime(p) {
        return Err(SplitError::NotPrime(p));
    }
    let n = level.degree() as usize;
    let mut coeffs = vec![0u64; n + 1];
    coeffs[0] = 1;
    coeffs[n] = 1;
    let parts = distinct_degree(&FpPoly::new(coeffs, p));
    match parts.as_slice() {
        [(f, g)] => Ok(SplitType {
            e: 1,
            f: *f as u64,
            g: *g as u64,
            field_degree: n as u64,
        }),
        _ => Err(SplitError::UnequalDegrees {
            p,
            degrees: parts.iter().map(|&(deg, _)| deg).collect(),
        }),
    }
}

pub fn ramification_data(d: &SquarefreeOdd, level: Level) -> RamificationData {
    let t = d
        .primes()
        .iter()
        .map(|&p| split_in_km(p, level).expect("prime divisor").g)
        .sum();
    RamificationData {
        level,
        d: d.value(),
        ramified_primes_over_km: t,
        relative_discriminant_generator: d.value(),
        ring_of_integers: if d.mod4() == 1 {
            IntegerRingTag::AdjoinHalfSqrtD
        } else {
            IntegerRingTag::AdjoinHalfSqrtMinusD
        },
    }
}

fn require_three_or_five(d: &SquarefreeOdd) -> Result<(), SplitError> {
    match d
        .primes()
        .iter()
        .zip(d.residues8())
        .find(|(_, &r)| r != 3 && r != 5)
    {
        Some((&p, &residue)) => Err(SplitError::UnsupportedResidue { p, residue }),
        None => Ok(()),
    }
}

/// Number of primes of `K_m^+` ramified in `L_{m,d}^+`: the primes over `d`,
/// plus the dyadic prime when `d = 3 (mod 4)`.
pub fn real_ramified_count(d: &SquarefreeOdd, _level: Level) -> Result<u64, SplitError> {
    require_three_or_five(d)?;
    let r = d.r() as u64;
    Ok(if d.mod4() == 1 { r } else { r + 1 })
}
