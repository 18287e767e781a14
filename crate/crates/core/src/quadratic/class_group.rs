//! Class groups of quadratic fields from reduced binary quadratic forms.
//!
//! Narrow classes are enumerated directly: reduced forms for negative
//! discriminants, cycles of reduced forms for positive ones. The wide group is
//! the quotient by the class of `(-1, b0, -c0)`, which is trivial exactly when
//! the fundamental unit has norm -1.

use std::collections::HashMap;

use serde::Serialize;

use super::form::BinaryQuadraticForm;
use super::unit::fundamental_unit;
use super::OracleError;
use crate::arith::{factorize, isqrt};

/// Largest `|D|` accepted by [`class_group`].
pub const MAX_DISCRIMINANT: i64 = 10_000_000;

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let sqf = |n: i64| factorize(n.unsigned_abs()).is_squarefree();
    match d.rem_euclid(4) {
        1 => sqf(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && sqf(m)
        }
        _ => false,
    }
}

/// Discriminant of `Q(sqrt l)` for a square-free `l != 1`.
pub fn field_discriminant(l: i64) -> i64 {
    if l.rem_euclid(4) == 1 {
        l
    } else {
        4 * l
    }
}

/// Structure of the class group of a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QfClassGroup {
    pub discriminant: i64,
    pub narrow_order: u64,
    pub wide_order: u64,
    /// Orders of the cyclic factors of the 2-part of the wide group, ascending.
    pub two_part_divisors: Vec<u64>,
    pub two_rank_narrow: u32,
    /// Norm of the fundamental unit; `None` for imaginary fields.
    pub unit_norm: Option<i8>,
}

impl QfClassGroup {
    /// Wide 2-class number.
    pub fn two_part_wide(&self) -> u64 {
        self.two_part_divisors.iter().product()
    }
}

/// The narrow class group as an explicit finite abelian group.
#[derive(Debug, Clone)]
pub struct FormClassGroup {
    discriminant: i64,
    reps: Vec<BinaryQuadraticForm>,
    index: HashMap<(i64, i64), usize>,
}

impl FormClassGroup {
    /// Enumerates the narrow class group of a fundamental discriminant.
    pub fn new(d: i64) -> Result<Self, OracleError> {
        if d.unsigned_abs() > MAX_DISCRIMINANT as u64 {
            return Err(OracleError::TooLarge(d));
        }
        if !is_fundamental_discriminant(d) {
            return Err(OracleError::NotFundamental(d));
        }
        Ok(if d < 0 {
            Self::definite(d)
        } else {
            Self::indefinite(d)
        })
    }

    fn definite(d: i64) -> Self {
        let mut reps = Vec::new();
        let amax = isqrt((d.unsigned_abs()) / 3);
        for a in 1..=amax as i64 {
            for b in (-a + 1)..=a {
                if (b - d).rem_euclid(2) != 0 || (b * b - d) % (4 * a) != 0 {
                    continue;
                }
                let f = BinaryQuadraticForm::new(a, b, (b * b - d) / (4 * a));
                if f.is_reduced() && f.is_primitive() {
                    reps.push(f);
                }
            }
        }
        let index = reps
            .iter()
            .enumerate()
            .map(|(i, f)| ((f.a, f.b), i))
            .collect();
        FormClassGroup {
            discriminant: d,
            reps,
            index,
        }
    }

    fn indefinite(d: i64) -> Self {
        let s = isqrt(d as u64) as i64;
        let mut reduced = Vec::new();
        for b in 1..=s {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let n = (d - b * b) / 4;
            // reduced iff (s - b)/2 < |a| <= (s + b)/2
            let lo = (s - b) / 2 + 1;
            let hi = (s + b) / 2;
            for abs_a in lo.max(1)..=hi {
                if n % abs_a != 0 {
                    continue;
                }
                for a in [abs_a, -abs_a] {
                    let f = BinaryQuadraticForm::new(a, b, -n / a);
                    if f.is_reduced() && f.is_primitive() {
                        reduced.push(f);
                    }
                }
            }
        }
        let mut index = HashMap::with_capacity(reduced.len());
        let mut reps = Vec::new();
        for f in &reduced {
            if index.contains_key(&(f.a, f.b)) {
                continue;
            }
            let id = reps.len();
            let mut g = *f;
            let mut cycle_min = g;
            loop {
                index.insert((g.a, g.b), id);
                cycle_min = cycle_min.min(g);
                g = g.rho();
                if g == *f {
                    break;
                }
            }
            reps.push(cycle_min);
        }
        FormClassGroup {
            discriminant: d,
            reps,
            index,
        }
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Canonical representative of class `i`.
    pub fn representative(&self, i: usize) -> BinaryQuadraticForm {
        self.reps[i]
    }

    /// Class index of any primitive form of this discriminant.
    pub fn class_of(&self, f: &BinaryQuadraticForm) -> usize {
        let r = f.reduce_unchecked();
        self.index[&(r.a, r.b)]
    }

    pub fn identity(&self) -> usize {
        self.class_of(&BinaryQuadraticForm::principal(self.discriminant))
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.class_of(&self.reps[i].compose(&self.reps[j]))
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.class_of(&self.reps[i].opposite())
    }

    /// Class of `(-1, b0, -c0)`; trivial iff some unit has norm -1.
    pub fn negative_principal(&self) -> usize {
        let p = BinaryQuadraticForm::principal(self.discriminant);
        self.class_of(&BinaryQuadraticForm::new(-p.a, p.b, -p.c))
    }

    /// 2-part elementary divisors of `G / H`, where `H` is the subgroup
    /// generated by `h` (of order at most 2).
    ///
    /// Uses `|{x : x^{2^k} in H}| / |H| = prod_i 2^{min(k, a_i)}`.
    pub fn two_part_divisors_mod(&self, h: usize) -> Vec<u64> {
        let id = self.identity();
        let h_order = if h == id { 1 } else { 2 };
        debug_assert_eq!(self.compose(h, h), id);
        let in_h = |x: usize| x == id || x == h;
        let max_k = (self.order() as u64).trailing_zeros() as usize + 1;
        // height[x] = least k with x^{2^k} in H, if any
        let mut counts = vec![0usize; max_k + 1];
        for x in 0..self.order() {
            let mut y = x;
            for (k, slot) in counts.iter_mut().enumerate() {
                if in_h(y) {
                    // contributes to every count from k onward
                    *slot += 1;
                    break;
                }
                if k == max_k {
                    break;
                }
                y = self.compose(y, y);
            }
        }
        // cumulative: n_k = #{x : height <= k}
        let mut cum = Vec::with_capacity(counts.len());
        let mut acc = 0;
        for c in counts {
            acc += c;
            cum.push(acc / h_order);
        }
        let log2 = |n: usize| {
            debug_assert!(n.is_power_of_two());
            n.trailing_zeros() as usize
        };
        // at_least[k] = number of a_i >= k, for k >= 1
        let mut at_least: Vec<usize> = (1..cum.len())
            .map(|k| log2(cum[k]) - log2(cum[k - 1]))
            .collect();
        at_least.push(0);
        let mut divisors = Vec::new();
        for k in 1..at_least.len() {
            let exactly = at_least[k - 1] - at_least[k];
            divisors.extend(std::iter::repeat_n(1u64 << k, exactly));
        }
        divisors
    }

    pub fn two_rank(&self) -> u32 {
        self.two_part_divisors_mod(self.identity()).len() as u32
    }
}

/// Narrow and wide class group data for a fundamental discriminant.
pub fn class_group(d: i64) -> Result<QfClassGroup, OracleError> {
    let group = FormClassGroup::new(d)?;
    let narrow = group.order() as u64;
    let id = group.identity();
    let (wide_order, h, unit_norm) = if d < 0 {
        (narrow, id, None)
    } else {
        let l = if d % 4 == 0 { d / 4 } else { d };
        let norm = fundamental_unit(l as u64)?.norm;
        if norm == -1 {
            (narrow, id, Some(norm))
        } else {
            (narrow / 2, group.negative_principal(), Some(norm))
        }
    };
    Ok(QfClassGroup {
        discriminant: d,
        narrow_order: narrow,
        wide_order,
        two_part_divisors: group.two_part_divisors_mod(h),
        two_rank_narrow: group.two_rank(),
        unit_norm,
    })
}

/// Genus theory: number of prime discriminants dividing `D`, minus one.
pub fn genus_two_rank(d: i64) -> Result<u32, OracleError> {
    if !is_fundamental_discriminant(d) {
        return Err(OracleError::NotFundamental(d));
    }
    Ok(factorize(d.unsigned_abs()).factors.len() as u32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_discriminants() {
        for d in [-3, -4, -7, -8, 5, 8, 12, 13, -15, 60, 105, -20] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [0, 1, -1, 4, -12, 9, 16, 45, 2, 3, -16, 20] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }

    #[test]
    fn class_group_examples() {
        let g = class_group(-23).unwrap();
        assert_eq!(g.narrow_order, 3);
        assert!(g.two_part_divisors.is_empty());
        assert_eq!(class_group(-4).unwrap().narrow_order, 1);
        let g = class_group(60).unwrap();
        assert_eq!(g.narrow_order, 4);
        assert_eq!(g.wide_order, 2);
        assert_eq!(g.two_part_wide(), 2);
        assert_eq!(g.unit_norm, Some(1));
        let g = class_group(8).unwrap();
        assert_eq!((g.narrow_order, g.wide_order), (1, 1));
        let g = class_group(12).unwrap();
        assert_eq!((g.narrow_order, g.wide_order), (2, 1));
        // Q(sqrt(-5)): h = 2; Q(sqrt(-21)): C2 x C2; Q(sqrt(-14)): C4
        assert_eq!(class_group(-20).unwrap().two_part_divisors, vec![2]);
        assert_eq!(class_group(-84).unwrap().two_part_divisors, vec![2, 2]);
        assert_eq!(class_group(-56).unwrap().two_part_divisors, vec![4]);
        // Q(sqrt 79): h = 3, h+ = 6
        let g = class_group(316).unwrap();
        assert_eq!((g.narrow_order, g.wide_order), (6, 3));
        assert!(g.two_part_divisors.is_empty());
        assert!(matches!(
            class_group(45),
            Err(OracleError::NotFundamental(45))
        ));
        assert!(matches!(
            class_group(-40_000_003),
            Err(OracleError::TooLarge(_))
        ));
    }

    #[test]
    fn imaginary_class_numbers_match_table() {
        // h(D) for the first fundamental discriminants
        let known = [
            (-3, 1),
            (-4, 1),
            (-7, 1),
            (-8, 1),
            (-11, 1),
            (-15, 2),
            (-19, 1),
            (-20, 2),
            (-23, 3),
            (-24, 2),
            (-31, 3),
            (-35, 2),
            (-39, 4),
            (-40, 2),
            (-47, 5),
            (-163, 1),
            (-71, 7),
        ];
        for (d, h) in known {
            assert_eq!(class_group(d).unwrap().narrow_order, h, "D={d}");
        }
    }

    #[test]
    fn negative_principal_tracks_unit_norm() {
        for d in (5..3000).filter(|&d| is_fundamental_discriminant(d)) {
            let g = FormClassGroup::new(d).unwrap();
            let l = if d % 4 == 0 { d / 4 } else { d };
            let norm = fundamental_unit(l as u64).unwrap().norm;
            assert_eq!(g.negative_principal() == g.identity(), norm == -1, "D={d}");
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_two_rank(-15), Ok(1));
        assert_eq!(genus_two_rank(-4), Ok(0));
        assert_eq!(genus_two_rank(105), Ok(2));
        assert_eq!(class_group(-15).unwrap().two_rank_narrow, 1);
        assert_eq!(class_group(105).unwrap().two_rank_narrow, 2);
        assert!(genus_two_rank(12 * 4).is_err());
    }
}
