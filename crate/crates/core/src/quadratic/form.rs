use std::fmt;

use serde::Serialize;

use super::OracleError;
use crate::arith::isqrt;

/// The form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns `(g, u, v)` with `u a + v b = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Sign-aware square-root data for a positive non-square discriminant.
#[derive(Debug, Clone, Copy)]
struct SqrtD {
    d: i128,
    s: i128,
}

impl SqrtD {
    fn new(d: i64) -> Self {
        SqrtD {
            d: d as i128,
            s: isqrt(d as u64) as i128,
        }
    }

    /// The representative `r = b (mod 2|c|)` used by the reduction operator.
    fn normalize(&self, b: i128, c: i128) -> i128 {
        let m = 2 * c.abs();
        if c.abs() > self.s {
            // -|c| < r <= |c|
            let mut r = b.rem_euclid(m);
            if r > c.abs() {
                r -= m;
            }
            r
        } else {
            // sqrt(D) - 2|c| < r < sqrt(D), i.e. s - 2|c| < r <= s
            let lo = self.s - m + 1;
            lo + (b - lo).rem_euclid(m)
        }
    }

    fn is_reduced(&self, a: i128, b: i128) -> bool {
        let two_a = 2 * a.abs();
        b > 0 && b <= self.s && b > self.s - two_a && two_a - b <= self.s
    }
}

impl BinaryQuadraticForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryQuadraticForm { a, b, c }
    }

    /// Checks primitivity and that the discriminant is not a square.
    pub fn try_new(a: i64, b: i64, c: i64) -> Result<Self, OracleError> {
        let f = BinaryQuadraticForm { a, b, c };
        f.validate()?;
        Ok(f)
    }

    pub fn discriminant(&self) -> i64 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        (b * b - 4 * a * c) as i64
    }

    pub fn is_primitive(&self) -> bool {
        gcd_i128(gcd_i128(self.a as i128, self.b as i128), self.c as i128) == 1
    }

    fn validate(&self) -> Result<(), OracleError> {
        let d = self.discriminant();
        if d >= 0 && crate::arith::is_square(d as u64) {
            return Err(OracleError::SquareDiscriminant(d));
        }
        if !self.is_primitive() {
            return Err(OracleError::ImprimitiveForm(*self));
        }
        Ok(())
    }

    /// Principal form of discriminant `d`.
    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        BinaryQuadraticForm {
            a: 1,
            b,
            c: (b * b - d) / 4,
        }
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn opposite(&self) -> Self {
        BinaryQuadraticForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    /// For definite forms: `|b| <= a <= c`, with `b >= 0` when either bound is
    /// attained (sign-flipped for negative definite forms). For indefinite
    /// forms: `|sqrt D - 2|a|| < b < sqrt D`.
    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d < 0 {
            let (a, b, c) = if self.a < 0 {
                (-self.a, self.b, -self.c)
            } else {
                (self.a, self.b, self.c)
            };
            b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
        } else {
            SqrtD::new(d).is_reduced(self.a as i128, self.b as i128)
        }
    }

    /// Reduces `self`. Definite forms get their unique reduced representative;
    /// indefinite forms get some reduced form on their cycle.
    pub fn reduce(&self) -> Result<Self, OracleError> {
        self.validate()?;
        Ok(self.reduce_unchecked())
    }

    pub(crate) fn reduce_unchecked(&self) -> Self {
        let d = self.discriminant();
        if d < 0 {
            if self.a < 0 {
                let neg = BinaryQuadraticForm::new(-self.a, self.b, -self.c).reduce_definite();
                BinaryQuadraticForm::new(-neg.a, neg.b, -neg.c)
            } else {
                self.reduce_definite()
            }
        } else {
            self.reduce_indefinite()
        }
    }

    fn reduce_definite(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b.abs() > a {
                // b <- b mod 2a into (-a, a]
                let m = 2 * a;
                let mut r = b.rem_euclid(m);
                if r > a {
                    r -= m;
                }
                let k = (r - b) / m;
                c += k * (k * a + b);
                b = r;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                b = -b;
            }
            break;
        }
        BinaryQuadraticForm::new(a as i64, b as i64, c as i64)
    }

    fn reduce_indefinite(&self) -> Self {
        let sq = SqrtD::new(self.discriminant());
        let mut f = *self;
        while !sq.is_reduced(f.a as i128, f.b as i128) {
            f = f.rho_with(&sq);
        }
        f
    }

    fn rho_with(&self, sq: &SqrtD) -> Self {
        let c = self.c as i128;
        let r = sq.normalize(-(self.b as i128), c);
        BinaryQuadraticForm::new(self.c, r as i64, ((r * r - sq.d) / (4 * c)) as i64)
    }

    /// One step of the reduction operator for indefinite forms:
    /// `(a, b, c) -> (c, r, (r^2 - D)/4c)` with `r = -b (mod 2c)` normalized.
    pub fn rho(&self) -> Self {
        self.rho_with(&SqrtD::new(self.discriminant()))
    }

    /// Gauss composition (not reduced). Both forms must share a discriminant.
    pub fn compose(&self, other: &Self) -> Self {
        let d = self.discriminant() as i128;
        debug_assert_eq!(d, other.discriminant() as i128);
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        let s = (b1 + b2) / 2;
        let (g1, u1, v1) = ext_gcd(a1, a2);
        let (g, u2, w) = ext_gcd(g1, s);
        let (u, v) = (u2 * u1, u2 * v1);
        let a3 = a1 * a2 / (g * g);
        let b3_raw = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + d) / 2) / g;
        let m = 2 * a3.abs();
        let mut b3 = b3_raw.rem_euclid(m);
        if b3 > a3.abs() {
            b3 -= m;
        }
        let c3 = (b3 * b3 - d) / (4 * a3);
        BinaryQuadraticForm::new(a3 as i64, b3 as i64, c3 as i64)
    }

    /// Evaluates the form at `(x, y)`.
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (a, b, c, x, y) = (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            x as i128,
            y as i128,
        );
        a * x * x + b * x * y + c * y * y
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}
