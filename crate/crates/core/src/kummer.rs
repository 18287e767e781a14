//! The norm equation `n = x^2 - y^2 zeta_8` over `Z[zeta_8]`, and the
//! representations `p = a^2 + 16 b^2 = e^2 - 32 f^2` for primes `p = 1 (mod 8)`.
//!
//! A solution `(x, y)` is the same thing as an element `alpha = x + y zeta_16`
//! of `Z[zeta_16]` with relative norm `alpha * sigma(alpha) = n`, where
//! `sigma(zeta_16) = -zeta_16`.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, is_prime, isqrt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KummerError {
    #[error("{0} is not a prime congruent to 1 mod 8")]
    NotOneModEight(u64),
    #[error("no representation of {p} found with search bound {bound}")]
    SearchExhausted { p: u64, bound: u64 },
}

/// Which cyclotomic ring an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RingLevel {
    /// `Z[zeta_8] = Z[x]/(x^4 + 1)`
    Eight,
    /// `Z[zeta_16] = Z[x]/(x^8 + 1)`
    Sixteen,
}

impl RingLevel {
    pub fn rank(self) -> usize {
        match self {
            RingLevel::Eight => 4,
            RingLevel::Sixteen => 8,
        }
    }
}

/// An element of `Z[zeta_8]` or `Z[zeta_16]` in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CycloElement {
    #[serde(skip)]
    level: RingLevel,
    coords: Vec<i64>,
}

impl CycloElement {
    pub fn new(level: RingLevel, coords: Vec<i64>) -> Self {
        assert_eq!(
            coords.len(),
            level.rank(),
            "coordinate length must match ring rank"
        );
        CycloElement { level, coords }
    }

    pub fn constant(level: RingLevel, c: i64) -> Self {
        let mut coords = vec![0; level.rank()];
        coords[0] = c;
        CycloElement { level, coords }
    }

    pub fn zero(level: RingLevel) -> Self {
        Self::constant(level, 0)
    }

    /// The generator `zeta_8` or `zeta_16`.
    pub fn zeta(level: RingLevel) -> Self {
        let mut coords = vec![0; level.rank()];
        coords[1] = 1;
        CycloElement { level, coords }
    }

    pub fn level(&self) -> RingLevel {
        self.level
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn max_abs(&self) -> i64 {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn is_constant(&self, c: i64) -> bool {
        self.coords[0] == c && self.coords[1..].iter().all(|&v| v == 0)
    }

    /// `x + y zeta_16` for `x, y` in `Z[zeta_8]`.
    pub fn lift(x: &CycloElement, y: &CycloElement) -> CycloElement {
        assert!(x.level == RingLevel::Eight && y.level == RingLevel::Eight);
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .flat_map(|(&a, &b)| [a, b])
            .collect();
        CycloElement::new(RingLevel::Sixteen, coords)
    }

    /// Inverse of [`CycloElement::lift`].
    pub fn split(&self) -> (CycloElement, CycloElement) {
        assert_eq!(self.level, RingLevel::Sixteen);
        let x = self.coords.iter().step_by(2).copied().collect();
        let y = self.coords.iter().skip(1).step_by(2).copied().collect();
        (
            CycloElement::new(RingLevel::Eight, x),
            CycloElement::new(RingLevel::Eight, y),
        )
    }

    /// `zeta_16 -> -zeta_16`, fixing `Z[zeta_8]`.
    pub fn sigma(&self) -> CycloElement {
        assert_eq!(self.level, RingLevel::Sixteen);
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
            .collect();
        CycloElement::new(RingLevel::Sixteen, coords)
    }

    /// `N_{Q(zeta_16)/Q(zeta_8)}`, as an element of `Z[zeta_8]`.
    pub fn relative_norm(&self) -> CycloElement {
        let prod = self * &self.sigma();
        let (x, y) = prod.split();
        debug_assert!(y.coords.iter().all(|&c| c == 0));
        x
    }
}

impl Add for &CycloElement {
    type Output = CycloElement;
    fn add(self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level, rhs.level);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a + b)
            .collect();
        CycloElement::new(self.level, coords)
    }
}

impl Sub for &CycloElement {
    type Output = CycloElement;
    fn sub(self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level, rhs.level);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a - b)
            .collect();
        CycloElement::new(self.level, coords)
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement::new(self.level, self.coords.iter().map(|c| -c).collect())
    }
}

/// Multiplication modulo `x^n + 1`.
impl Mul for &CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level, rhs.level);
        let n = self.level.rank();
        let mut out = vec![0i64; n];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coords.iter().enumerate() {
                let k = i + j;
                if k < n {
                    out[k] += a * b;
                } else {
                    out[k - n] -= a * b;
                }
            }
        }
        CycloElement::new(self.level, out)
    }
}

/// A pair `(x, y)` in `Z[zeta_8]^2` with `x^2 - y^2 zeta_8 = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormSolution {
    pub n: u64,
    pub x: CycloElement,
    pub y: CycloElement,
}

impl NormSolution {
    /// `x^2 - y^2 zeta_8`.
    pub fn evaluate(&self) -> CycloElement {
        let z = CycloElement::zeta(RingLevel::Eight);
        &(&self.x * &self.x) - &(&(&self.y * &self.y) * &z)
    }

    /// Exact ring identity check.
    pub fn verify(&self) -> bool {
        self.evaluate().is_constant(self.n as i64)
    }

    /// `alpha = x + y zeta_16`.
    pub fn alpha(&self) -> CycloElement {
        CycloElement::lift(&self.x, &self.y)
    }

    pub fn from_alpha(n: u64, alpha: &CycloElement) -> Self {
        let (x, y) = alpha.split();
        NormSolution { n, x, y }
    }
}

/// Every prime occurring to an odd power in `n` is `1 (mod 16)` or
/// `7 (mod 8)`. This is a sufficient condition for `n = x^2 - y^2 zeta_8` to be
/// solvable over `Q(zeta_8)`; `false` means only that it does not apply.
pub fn solvable_by_theorem(n: u64) -> bool {
    assert!(n >= 1);
    factorize(n)
        .factors
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .all(|&(p, _)| p % 16 == 1 || p % 8 == 7)
}

/// All elements of `Z[zeta_8]` with coordinates in `[-bound, bound]`.
fn box_elements(bound: i64) -> impl Iterator<Item = CycloElement> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(4);
    (0..total).map(move |mut idx| {
        let mut coords = vec![0i64; 4];
        for c in coords.iter_mut() {
            *c = (idx % side) as i64 - bound;
            idx /= side;
        }
        CycloElement::new(RingLevel::Eight, coords)
    })
}

/// `(|c|, c < 0)` per coordinate of `(y, x)`.
type SearchKey = Vec<(i64, bool)>;

/// Bounded exhaustive search for integral solutions of `x^2 - y^2 zeta_8 = n`.
///
/// Squares of all `x` in the box are tabulated once, so each query is a single
/// pass over `y`. The returned solution minimizes `max(|x|_inf, |y|_inf)`, then
/// the coordinate vector `(y, x)` lexicographically, with integers ordered
/// `0, 1, -1, 2, -2, ...`.
pub struct NormSearcher {
    bound: i64,
    squares: HashMap<Vec<i64>, Vec<CycloElement>>,
    ys: Vec<(CycloElement, CycloElement)>,
}

impl NormSearcher {
    pub fn new(bound: u64) -> Self {
        let bound = bound as i64;
        let zeta = CycloElement::zeta(RingLevel::Eight);
        let mut squares: HashMap<Vec<i64>, Vec<CycloElement>> = HashMap::new();
        let mut ys = Vec::new();
        for x in box_elements(bound) {
            let sq = &x * &x;
            ys.push((x.clone(), &sq * &zeta));
            squares.entry(sq.coords).or_default().push(x);
        }
        NormSearcher { bound, squares, ys }
    }

    pub fn bound(&self) -> u64 {
        self.bound as u64
    }

    pub fn search(&self, n: u64) -> Option<NormSolution> {
        let mut best: Option<(i64, SearchKey, NormSolution)> = None;
        for (y, y2z) in &self.ys {
            let mut target = y2z.coords.clone();
            target[0] += n as i64;
            let Some(xs) = self.squares.get(&target) else {
                continue;
            };
            for x in xs {
                let size = x.max_abs().max(y.max_abs());
                let key: SearchKey = y
                    .coords
                    .iter()
                    .chain(&x.coords)
                    .map(|&c| (c.abs(), c < 0))
                    .collect();
                let better = match &best {
                    None => true,
                    Some((s, k, _)) => (size, &key) < (*s, k),
                };
                if better {
                    let sol = NormSolution {
                        n,
                        x: x.clone(),
                        y: y.clone(),
                    };
                    best = Some((size, key, sol));
                }
            }
        }
        best.map(|(_, _, sol)| sol)
    }
}

/// One-shot form of [`NormSearcher::search`].
pub fn search_norm_solution(n: u64, bound: u64) -> Option<NormSolution> {
    NormSearcher::new(bound).search(n)
}

/// `p = a^2 + 16 b^2` and `p = e^2 - 32 f^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OneModEightRepresentation {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub e: u64,
    pub f: u64,
}

/// Default ceiling on `f` when searching `p = e^2 - 32 f^2`.
pub const DEFAULT_F_BOUND: u64 = 1_000_000;

pub fn represent_p_1mod8(p: u64) -> Result<OneModEightRepresentation, KummerError> {
    represent_p_1mod8_bounded(p, DEFAULT_F_BOUND)
}

/// Smallest `b >= 1` and smallest `f >= 1` giving the two representations.
pub fn represent_p_1mod8_bounded(
    p: u64,
    f_bound: u64,
) -> Result<OneModEightRepresentation, KummerError> {
    if !is_prime(p) || p % 8 != 1 {
        return Err(KummerError::NotOneModEight(p));
    }
    let exhausted = |bound| KummerError::SearchExhausted { p, bound };
    let b_bound = isqrt(p / 16);
    let (a, b) = (1..=b_bound)
        .find_map(|b| {
            let rest = p - 16 * b * b;
            let a = isqrt(rest);
            (a * a == rest).then_some((a, b))
        })
        .ok_or(exhausted(b_bound))?;
    let (e, f) = (1..=f_bound)
        .find_map(|f| {
            let sum = (p as u128) + 32 * (f as u128) * (f as u128);
            let sum = u64::try_from(sum).ok()?;
            let e = isqrt(sum);
            (e * e == sum).then_some((e, f))
        })
        .ok_or(exhausted(f_bound))?;
    Ok(OneModEightRepresentation { p, a, b, e, f })
}

/// `a` and `e` both odd, the congruence that makes `a + 4bi` and
/// `e + 4f sqrt 2` squares modulo 4.
pub fn unramified_witness_check(p: u64) -> Result<bool, KummerError> {
    let rep = represent_p_1mod8(p)?;
    Ok(rep.a % 2 == 1 && rep.e % 2 == 1)
}
