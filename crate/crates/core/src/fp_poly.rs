//! Dense univariate polynomials over a prime field, just enough for
//! distinct-degree factorization.

use crate::arith::{mul_mod, pow_mod};

/// Coefficients from the constant term up; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FpPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut f = FpPoly { coeffs, p };
        f.trim();
        f
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(vec![0, 1], p)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let p = self.p;
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        FpPoly::new(coeffs, p)
    }

    fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(vec![], self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        FpPoly::new(out, p)
    }

    /// Quotient and remainder of division by a non-zero polynomial.
    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = self.inv(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (FpPoly::new(vec![], p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], lead_inv, p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = (rem[k] + p - mul_mod(c, b, p)) % p;
            }
        }
        rem.truncate(dd);
        (FpPoly::new(quot, p), FpPoly::new(rem, p))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.div_rem(divisor).1
    }

    fn monic(mut self) -> FpPoly {
        if let Some(&lead) = self.coeffs.last() {
            let inv = self.inv(lead);
            for c in self.coeffs.iter_mut() {
                *c = mul_mod(*c, inv, self.p);
            }
        }
        self
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus` by square and multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &FpPoly) -> FpPoly {
        let mut base = self.rem(modulus);
        let mut acc = FpPoly::new(vec![1], self.p).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }
}

/// Distinct-degree factorization of a square-free polynomial: returns the
/// pairs `(degree, number of irreducible factors of that degree)`.
pub(crate) fn distinct_degree(f: &FpPoly) -> Vec<(usize, usize)> {
    let p = f.p;
    let x = FpPoly::x(p);
    let mut rest = f.clone().monic();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 0;
    while let Some(deg) = rest.degree() {
        i += 1;
        if deg < 2 * i {
            if deg > 0 {
                out.push((deg, 1));
            }
            break;
        }
        h = h.pow_mod(p, &rest);
        let g = rest.gcd(&h.sub(&x));
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            out.push((i, gd / i));
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_roundtrip() {
        let a = FpPoly::new(vec![3, 0, 5, 1, 6], 7);
        let b = FpPoly::new(vec![2, 1], 7);
        let (q, r) = a.div_rem(&b);
        assert!(r.degree().is_none_or(|d| d < 1));
        assert_eq!(a.sub(&q.mul(&b)), r);
    }

    #[test]
    fn ddf_small_cases() {
        // x^2 + 1 over F_3 is irreducible
        assert_eq!(
            distinct_degree(&FpPoly::new(vec![1, 0, 1], 3)),
            vec![(2, 1)]
        );
        // x^2 - 1 over F_5 splits
        assert_eq!(
            distinct_degree(&FpPoly::new(vec![4, 0, 1], 5)),
            vec![(1, 2)]
        );
        // (x^2 + 1)(x - 1) over F_3
        assert_eq!(
            distinct_degree(&FpPoly::new(vec![2, 1, 2, 1], 3)),
            vec![(1, 1), (2, 1)]
        );
    }
}
