//! Fundamental units of real quadratic fields from continued fractions.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::OracleError;
use crate::arith::{factorize, isqrt};

/// Largest radicand accepted by [`fundamental_unit`].
pub const MAX_RADICAND: u64 = 10_000_000;

/// The fundamental unit `epsilon > 1` of `Q(sqrt l)`.
///
/// When `half` is set the unit is `(x + y sqrt l)/2` and `x^2 - l y^2 = 4 norm`,
/// otherwise it is `x + y sqrt l` and `x^2 - l y^2 = norm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalUnit {
    #[serde(serialize_with = "ser_big")]
    pub x: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub y: BigUint,
    pub norm: i8,
    pub radicand: u64,
    pub half: bool,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl FundamentalUnit {
    /// `x^2 - l y^2` as an exact integer.
    pub fn pell_value(&self) -> BigInt {
        let x = BigInt::from(self.x.clone());
        let y = BigInt::from(self.y.clone());
        &x * &x - BigInt::from(self.radicand) * &y * &y
    }

    /// Checks the defining Pell equation exactly.
    pub fn satisfies_pell(&self) -> bool {
        let scale = if self.half { 4 } else { 1 };
        self.pell_value() == BigInt::from(scale * self.norm as i64)
    }

    /// Rational part `u` when the unit is written `u + v sqrt l` with integer
    /// coordinates; `None` for a genuinely half-integral unit.
    pub fn integral_rational_part(&self) -> Option<BigUint> {
        if !self.half {
            return Some(self.x.clone());
        }
        let two = BigUint::from(2u32);
        (&self.x % &two).is_zero().then(|| &self.x / two)
    }
}

/// Continued fraction of `(p0 + sqrt l)/q0` via the `(P, Q)` recurrence.
struct QuadraticCf {
    l: i64,
    s: i64,
    p: i64,
    q: i64,
}

impl Iterator for QuadraticCf {
    type Item = i64;
    fn next(&mut self) -> Option<i64> {
        debug_assert!(self.q > 0);
        let a = (self.p + self.s).div_euclid(self.q);
        self.p = a * self.q - self.p;
        self.q = (self.l - self.p * self.p) / self.q;
        Some(a)
    }
}

/// Convergents `(num, den)` of a continued fraction, starting with `a_0/1`.
fn convergents(cf: impl Iterator<Item = i64>) -> impl Iterator<Item = (BigInt, BigInt)> {
    let mut prev = (BigInt::zero(), BigInt::one());
    let mut cur = (BigInt::one(), BigInt::zero());
    cf.map(move |a| {
        let a = BigInt::from(a);
        let next = (&a * &cur.0 + &prev.0, &a * &cur.1 + &prev.1);
        prev = std::mem::replace(&mut cur, next);
        cur.clone()
    })
}

fn to_biguint(v: BigInt) -> BigUint {
    debug_assert!(v.sign() != Sign::Minus);
    v.to_biguint().expect("non-negative")
}

/// Smallest unit `> 1` of the maximal order of `Q(sqrt l)`.
///
/// Every such unit `s + t omega` has `s/t` among the convergents of
/// `-conj(omega)`, and they appear in increasing order, so the first
/// convergent of norm `+-1` is fundamental.
pub fn fundamental_unit(l: u64) -> Result<FundamentalUnit, OracleError> {
    if l < 2 {
        return Err(OracleError::NotSquarefree(l));
    }
    if l > MAX_RADICAND {
        return Err(OracleError::TooLarge(l as i64));
    }
    if !factorize(l).is_squarefree() {
        return Err(OracleError::NotSquarefree(l));
    }
    let li = l as i64;
    let half = l % 4 == 1;
    let cf = QuadraticCf {
        l: li,
        s: isqrt(l) as i64,
        p: if half { -1 } else { 0 },
        q: if half { 2 } else { 1 },
    };
    let big_l = BigInt::from(l);
    let quarter = BigInt::from((li - 1) / 4);
    for (s, t) in convergents(cf) {
        let norm = if half {
            // N(s + t (1 + sqrt l)/2) = s^2 + st - t^2 (l - 1)/4
            &s * &s + &s * &t - &t * &t * &quarter
        } else {
            &s * &s - &big_l * &t * &t
        };
        if norm.abs().is_one() {
            let sign = if norm.is_positive() { 1 } else { -1 };
            let (x, y) = if half { (2 * &s + &t, t) } else { (s, t) };
            return Ok(FundamentalUnit {
                x: to_biguint(x),
                y: to_biguint(y),
                norm: sign,
                radicand: l,
                half,
            });
        }
    }
    unreachable!("continued fraction expansions are infinite")
}

/// `u - 1` and `u + 1` are both non-squares.
pub fn shifts_nonsquare(u: &BigUint) -> bool {
    let is_sq = |v: &BigUint| {
        let r = v.sqrt();
        &r * &r == *v
    };
    let one = BigUint::one();
    !(is_sq(&(u + &one)) || (u >= &one && is_sq(&(u - &one))))
}

/// Splits `l = pq` or `l = 2pq` with `p = 5`, `q = 3 (mod 8)`.
pub fn five_three_shape(l: u64) -> Option<(u64, u64)> {
    let odd = if l.is_multiple_of(2) { l / 2 } else { l };
    let f = factorize(odd);
    match f.factors.as_slice() {
        [(a, 1), (b, 1)] => {
            let (p, q) = if a % 8 == 5 { (*a, *b) } else { (*b, *a) };
            (p % 8 == 5 && q % 8 == 3).then_some((p, q))
        }
        _ => None,
    }
}

/// For `l = pq` or `2pq` with `p = 5`, `q = 3 (mod 8)`: neither `u + 1` nor
/// `u - 1` is a square, `u` being the rational part of the fundamental unit.
pub fn check_nonsquare_shifts(l: u64) -> Result<bool, OracleError> {
    if five_three_shape(l).is_none() {
        return Err(OracleError::ShapeViolation(l));
    }
    let unit = fundamental_unit(l)?;
    let u = unit
        .integral_rational_part()
        .ok_or(OracleError::ShapeViolation(l))?;
    Ok(shifts_nonsquare(&u))
}
