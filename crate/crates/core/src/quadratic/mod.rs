//! Brute-force layer over quadratic fields: class groups from binary quadratic
//! forms, fundamental units from continued fractions, genus 2-ranks, and the
//! Kuroda evaluation of `h_2(Q(sqrt 2, sqrt(pq)))`.

mod class_group;
mod form;
mod unit;

use thiserror::Error;

pub use class_group::{
    class_group, field_discriminant, genus_two_rank, is_fundamental_discriminant, FormClassGroup,
    QfClassGroup, MAX_DISCRIMINANT,
};
pub use form::BinaryQuadraticForm;
pub use unit::{
    check_nonsquare_shifts, five_three_shape, fundamental_unit, shifts_nonsquare, FundamentalUnit,
    MAX_RADICAND,
};

use crate::arith::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("form {0} is not primitive")]
    ImprimitiveForm(BinaryQuadraticForm),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is outside the supported range")]
    TooLarge(i64),
    #[error("{0} is not a square-free integer >= 2")]
    NotSquarefree(u64),
    #[error("{0} is not of the shape pq or 2pq with p = 5, q = 3 mod 8")]
    ShapeViolation(u64),
    #[error("need primes p = 5 and q = 3 mod 8, got p = {p}, q = {q}")]
    ResidueViolation { p: u64, q: u64 },
    #[error("Kuroda product gave {value} (h2(pq) = {h2_pq}, h2(2pq) = {h2_2pq}), expected 2")]
    OracleDisagreement {
        value: String,
        h2_pq: u64,
        h2_2pq: u64,
    },
}

/// 2-class number of `Q(sqrt 2)`. The field has class number one; the
/// oracle confirms this through `class_group(8)`.
pub const H2_OF_Q_SQRT2: u64 = 1;

/// Unit index of `Q(sqrt 2, sqrt(pq))` over its quadratic subfields, from the
/// fundamental system `{eps_2, eps_pq, sqrt(eps_pq eps_2pq)}`.
pub const KURODA_UNIT_INDEX: u64 = 2;

/// Inputs and result of one Kuroda evaluation.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct KurodaEvaluation {
    pub p: u64,
    pub q: u64,
    pub h2_pq: u64,
    pub h2_2pq: u64,
    pub h2_2: u64,
    pub unit_index: u64,
    pub value: u64,
}

/// `h_2(Q(sqrt 2, sqrt(pq))) = Q h_2(pq) h_2(2pq) h_2(2) / 4` for primes
/// `p = 5`, `q = 3 (mod 8)`, with the quadratic 2-class numbers taken from the
/// form oracle.
pub fn kuroda_evaluation(p: u64, q: u64) -> Result<KurodaEvaluation, OracleError> {
    if !(is_prime(p) && is_prime(q) && p % 8 == 5 && q % 8 == 3) {
        return Err(OracleError::ResidueViolation { p, q });
    }
    let pq = (p * q) as i64;
    let h2_pq = class_group(field_discriminant(pq))?.two_part_wide();
    let h2_2pq = class_group(field_discriminant(2 * pq))?.two_part_wide();
    let numerator = KURODA_UNIT_INDEX * h2_pq * h2_2pq * H2_OF_Q_SQRT2;
    if !numerator.is_multiple_of(4) || numerator / 4 != 2 {
        return Err(OracleError::OracleDisagreement {
            value: format!("{numerator}/4"),
            h2_pq,
            h2_2pq,
        });
    }
    Ok(KurodaEvaluation {
        p,
        q,
        h2_pq,
        h2_2pq,
        h2_2: H2_OF_Q_SQRT2,
        unit_index: KURODA_UNIT_INDEX,
        value: numerator / 4,
    })
}

pub fn kuroda_h2_l3_plus(p: u64, q: u64) -> Result<u64, OracleError> {
    kuroda_evaluation(p, q).map(|k| k.value)
}

/// The `count` smallest pairs `(p, q)` of primes with `p = 5`, `q = 3 (mod 8)`,
/// ordered by `pq`, then by `p`.
pub fn five_three_pairs(count: usize) -> Vec<(u64, u64)> {
    let mut bound = 64u64;
    loop {
        let fives: Vec<u64> = (5..bound).step_by(8).filter(|&p| is_prime(p)).collect();
        let threes: Vec<u64> = (3..bound).step_by(8).filter(|&q| is_prime(q)).collect();
        let mut pairs: Vec<(u64, u64)> = fives
            .iter()
            .flat_map(|&p| threes.iter().map(move |&q| (p, q)))
            .filter(|&(p, q)| p * q < 3 * bound)
            .collect();
        // every pair with pq < 3 * bound has both primes below bound
        pairs.sort_by_key(|&(p, q)| (p * q, p));
        if pairs.len() >= count {
            pairs.truncate(count);
            return pairs;
        }
        bound *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kuroda_examples() {
        assert_eq!(kuroda_h2_l3_plus(5, 3), Ok(2));
        assert_eq!(kuroda_h2_l3_plus(13, 3), Ok(2));
        assert_eq!(kuroda_h2_l3_plus(5, 11), Ok(2));
        assert_eq!(
            kuroda_h2_l3_plus(3, 5),
            Err(OracleError::ResidueViolation { p: 3, q: 5 })
        );
        assert_eq!(class_group(8).unwrap().two_part_wide(), H2_OF_Q_SQRT2);
    }

    #[test]
    fn pair_enumeration() {
        let pairs = five_three_pairs(5);
        assert_eq!(pairs, vec![(5, 3), (13, 3), (5, 11), (29, 3), (5, 19)]);
        let many = five_three_pairs(50);
        assert_eq!(many.len(), 50);
        assert!(many.windows(2).all(|w| w[0].0 * w[0].1 <= w[1].0 * w[1].1));
    }
}
