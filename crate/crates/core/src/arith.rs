//! Exact integer foundations.
//!
//! Everything here works on machine integers: `u64` for inputs, `u128` for
//! intermediate products. Primality is deterministic Miller-Rabin with the
//! first twelve prime bases, which is exact below 2^64 (in fact below 3.3e24).

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is even")]
    NotOdd(u64),
    #[error("{n} is divisible by {p}^2")]
    NotSquarefree { n: u64, p: u64 },
    #[error("{0} is smaller than 3")]
    TooSmall(u64),
    #[error("Kronecker symbol (0/0) is undefined")]
    Undefined,
    #[error("level m = {0} is outside the supported range 3..={max}", max = Level::MAX)]
    LevelOutOfRange(u32),
}

/// The exponent `m` of the cyclotomic field `Q(zeta_{2^m})`.
///
/// Always at least 3. The upper cap keeps `2^m` inside a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Level(u32);

impl Level {
    pub const MIN: u32 = 3;
    pub const MAX: u32 = 63;

    pub fn new(m: u32) -> Result<Self, ArithError> {
        if (Self::MIN..=Self::MAX).contains(&m) {
            Ok(Level(m))
        } else {
            Err(ArithError::LevelOutOfRange(m))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `2^m`, the conductor of `K_m`.
    pub fn modulus(self) -> u64 {
        1u64 << self.0
    }

    /// `[K_m : Q] = 2^{m-1}`.
    pub fn degree(self) -> u64 {
        1u64 << (self.0 - 1)
    }

    /// `[K_m^+ : Q] = 2^{m-2}`.
    pub fn real_degree(self) -> u64 {
        1u64 << (self.0 - 2)
    }

    pub fn next(self) -> Option<Level> {
        Level::new(self.0 + 1).ok()
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test on the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A complete factorization into prime powers, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeFactorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Multiplies the factors back together (in `u128`, so it never overflows
    /// for a valid factorization of a `u64`).
    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Trial division up to 10^6, then Pollard rho (Brent) for what is left.
pub fn factorize(n: u64) -> PrimeFactorization {
    assert!(n >= 1, "factorize: n must be positive");
    let mut primes = Vec::new();
    let mut rest = n;
    while rest.is_multiple_of(2) {
        primes.push(2);
        rest /= 2;
    }
    let mut p = 3;
    while p <= TRIAL_LIMIT && p * p <= rest {
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
        p += 2;
    }
    if rest > 1 {
        split_large(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    PrimeFactorization { value: n, factors }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = isqrt(n);
    if r * r == n {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let d = (1..)
        .map(|c| pollard_brent(n, c))
        .find(|&d| d != n)
        .expect("rho eventually finds a factor of a composite");
    split_large(d, out);
    split_large(n / d, out);
}

fn pollard_brent(n: u64, c: u64) -> u64 {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

/// An odd square-free integer `d >= 3` together with its prime data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquarefreeOdd {
    value: u64,
    primes: Vec<u64>,
    residues8: Vec<u8>,
    residues16: Vec<u8>,
}

impl SquarefreeOdd {
    pub fn new(n: u64) -> Result<Self, ArithError> {
        if n < 3 {
            return Err(ArithError::TooSmall(n));
        }
        if n.is_multiple_of(2) {
            return Err(ArithError::NotOdd(n));
        }
        let fact = factorize(n);
        if let Some(&(p, _)) = fact.factors.iter().find(|&&(_, e)| e > 1) {
            return Err(ArithError::NotSquarefree { n, p });
        }
        let primes: Vec<u64> = fact.primes().collect();
        Ok(SquarefreeOdd {
            value: n,
            residues8: primes.iter().map(|p| (p % 8) as u8).collect(),
            residues16: primes.iter().map(|p| (p % 16) as u8).collect(),
            primes,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn residues8(&self) -> &[u8] {
        &self.residues8
    }

    pub fn residues16(&self) -> &[u8] {
        &self.residues16
    }

    /// Number of prime divisors.
    pub fn r(&self) -> usize {
        self.primes.len()
    }

    pub fn is_prime(&self) -> bool {
        self.primes.len() == 1
    }

    pub fn mod4(&self) -> u8 {
        (self.value % 4) as u8
    }

    /// All prime divisors are `3` or `5 (mod 8)`.
    pub fn all_three_or_five(&self) -> bool {
        self.residues8.iter().all(|&r| r == 3 || r == 5)
    }

    /// All prime divisors share one residue class mod 8.
    pub fn same_coset(&self) -> bool {
        self.residues8.windows(2).all(|w| w[0] == w[1])
    }
}

/// Shorthand for [`SquarefreeOdd::new`].
pub fn validate_squarefree_odd(n: u64) -> Result<SquarefreeOdd, ArithError> {
    SquarefreeOdd::new(n)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i128, n: i128) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// The Kronecker symbol `(a/n)`, returning -1, 0 or +1.
pub fn kronecker_symbol(a: i64, n: i64) -> Result<i8, ArithError> {
    let (a, mut n) = (a as i128, n as i128);
    if n == 0 {
        return match a {
            0 => Err(ArithError::Undefined),
            1 | -1 => Ok(1),
            _ => Ok(0),
        };
    }
    let mut t = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            t = -t;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        let r = a.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            t = -t;
        }
    }
    Ok(t * jacobi(a, n))
}

/// Order of the odd integer `p` in `(Z/2^m)^*`.
///
/// Every such order is a power of two dividing `2^{m-2}`, so the search is
/// over the exponents `2^j` only.
pub fn mult_order_mod_2m(p: u64, level: Level) -> u64 {
    assert!(p % 2 == 1, "mult_order_mod_2m: p must be odd");
    let mask = (level.modulus() as u128) - 1;
    let mut x = p as u128 & mask;
    let mut order = 1u64;
    while x != 1 {
        x = (x * x) & mask;
        order *= 2;
    }
    order
}
