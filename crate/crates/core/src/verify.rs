//! Cross-check suites: closed forms against independent oracles.
//!
//! Every suite is a list of checks; each check reports how many cases it ran
//! and the first few failures. Checks within a run are executed on worker
//! threads but always reported in a fixed order.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{is_prime, Level, SquarefreeOdd};
use crate::kummer::{represent_p_1mod8, solvable_by_theorem, NormSearcher};
use crate::quadratic::{
    check_nonsquare_shifts, class_group, field_discriminant, five_three_pairs, genus_two_rank,
    is_fundamental_discriminant, kuroda_h2_l3_plus, FormClassGroup,
};
use crate::rank::{ambiguous_rank, class_number_parity, rank2, Coverage, Parity};
use crate::splitting::{factorization_oracle, ramification_data, split_in_km, split_in_km_plus};
use crate::symbols::{closed_form_unit_index, unit_class_table, xi_symbol};

/// Environment variable holding an upper limit for every suite budget.
pub const BUDGET_ENV: &str = "CYCLO2RANK_VERIFY_BUDGET";

/// Search box used by the Kummer suite.
pub const KUMMER_SEARCH_BOUND: u64 = 8;

const MAX_REPORTED_FAILURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Splitting,
    Symbols,
    Ranks,
    Quadratic,
    Kummer,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Splitting,
        Suite::Symbols,
        Suite::Ranks,
        Suite::Quadratic,
        Suite::Kummer,
    ];

    /// Budget used when none is given. Its meaning depends on the suite: a
    /// prime bound, a bound on `d`, a number of `(p, q)` pairs, or a bound on
    /// `n`.
    pub fn default_budget(self) -> u64 {
        match self {
            Suite::Splitting => 1000,
            Suite::Symbols => 10_000,
            Suite::Ranks => 100_000,
            Suite::Quadratic => 50,
            Suite::Kummer => 200,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Splitting => "splitting",
            Suite::Symbols => "symbols",
            Suite::Ranks => "ranks",
            Suite::Quadratic => "quadratic",
            Suite::Kummer => "kummer",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// Up to five failing cases, described.
    pub examples: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok  " } else { "FAIL" };
        write!(
            f,
            "{status} {}/{}: {} cases, {} failures",
            self.suite, self.name, self.cases, self.failures
        )?;
        for e in &self.examples {
            write!(f, "\n       {e}")?;
        }
        Ok(())
    }
}

struct Tally {
    cases: u64,
    failures: u64,
    examples: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_REPORTED_FAILURES {
                self.examples.push(describe());
            }
        }
    }

    fn finish(self, suite: Suite, name: &str) -> CheckOutcome {
        CheckOutcome {
            suite,
            name: name.to_string(),
            cases: self.cases,
            failures: self.failures,
            examples: self.examples,
        }
    }
}

/// Resolves the budget for `suite`: the request (or default), capped by the
/// ceiling if one is set.
pub fn effective_budget(suite: Suite, requested: Option<u64>, ceiling: Option<u64>) -> u64 {
    let b = requested.unwrap_or(suite.default_budget());
    ceiling.map_or(b, |c| b.min(c))
}

/// Reads the ceiling from [`BUDGET_ENV`]; unset or unparsable means none.
pub fn budget_ceiling_from_env() -> Option<u64> {
    std::env::var(BUDGET_ENV).ok()?.trim().parse().ok()
}

fn lv(m: u32) -> Level {
    Level::new(m).expect("valid level")
}

fn odd_primes_below(bound: u64) -> impl Iterator<Item = u64> {
    (3..bound).step_by(2).filter(|&p| is_prime(p))
}

/// Valid `d < bound` all of whose prime factors are `3, 5 (mod 8)`.
fn covered_d_below(bound: u64) -> impl Iterator<Item = SquarefreeOdd> {
    (3..bound)
        .step_by(2)
        .filter_map(|n| SquarefreeOdd::new(n).ok())
        .filter(|d| d.all_three_or_five())
}

type CheckFn = Box<dyn Fn(u64) -> CheckOutcome + Send + Sync>;

fn checks(suite: Suite) -> Vec<CheckFn> {
    match suite {
        Suite::Splitting => vec![
            Box::new(splitting_vs_oracle),
            Box::new(splitting_degree_product),
            Box::new(splitting_tower),
            Box::new(real_inertness),
        ],
        Suite::Symbols => vec![
            Box::new(symbol_level_independence),
            Box::new(symbol_rank_vs_closed_form),
        ],
        Suite::Ranks => vec![Box::new(rank_vs_symbol_table), Box::new(rank_vs_ambiguous)],
        Suite::Quadratic => vec![Box::new(kuroda_pairs), Box::new(genus_vs_forms)],
        Suite::Kummer => vec![Box::new(kummer_search), Box::new(representations)],
    }
}

/// Runs the given suites with their budgets and returns outcomes in suite,
/// then check, order.
pub fn run(suites: &[(Suite, u64)]) -> Vec<CheckOutcome> {
    let jobs: Vec<(CheckFn, u64)> = suites
        .iter()
        .flat_map(|&(suite, budget)| checks(suite).into_iter().map(move |c| (c, budget)))
        .collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(check, budget)| s.spawn(move || check(*budget)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    })
}

pub fn run_suite(suite: Suite, budget: u64) -> Vec<CheckOutcome> {
    run(&[(suite, budget)])
}

fn splitting_vs_oracle(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for p in odd_primes_below(bound) {
        for m in 3..=6 {
            let a = split_in_km(p, lv(m));
            let b = factorization_oracle(p, lv(m));
            let ok = matches!((&a, &b), (Ok(x), Ok(y)) if x.f == y.f && x.g == y.g);
            t.check(ok, || {
                format!("p={p} m={m}: closed form {a:?}, oracle {b:?}")
            });
        }
    }
    t.finish(
        Suite::Splitting,
        "split_in_km matches factorization of x^(2^(m-1)) + 1",
    )
}

fn splitting_degree_product(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for p in std::iter::once(2).chain(odd_primes_below(bound)) {
        for m in 3..=20 {
            let s = split_in_km(p, lv(m)).expect("prime");
            t.check(s.e * s.f * s.g == lv(m).degree(), || {
                format!("p={p} m={m}: {s:?}")
            });
        }
    }
    t.finish(Suite::Splitting, "efg equals the field degree")
}

fn splitting_tower(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for p in odd_primes_below(bound) {
        for m in 3..=30 {
            let lo = split_in_km(p, lv(m)).expect("prime");
            let hi = split_in_km(p, lv(m + 1)).expect("prime");
            let ok = (hi.f == lo.f || hi.f == 2 * lo.f) && hi.g >= lo.g;
            t.check(ok, || format!("p={p} m={m}: {lo:?} then {hi:?}"));
        }
    }
    t.finish(
        Suite::Splitting,
        "residue degree stays or doubles up the tower",
    )
}

fn real_inertness(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for p in odd_primes_below(bound) {
        for m in 3..=8 {
            let s = split_in_km_plus(p, lv(m)).expect("odd prime");
            let expect_inert = p % 8 == 3 || p % 8 == 5;
            t.check(s.is_inert() == expect_inert, || {
                format!("p={p} m={m}: {s:?}")
            });
        }
    }
    t.finish(Suite::Splitting, "K_m^+ inert exactly for p = 3, 5 mod 8")
}

fn symbol_level_independence(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    let primes: Vec<u64> = odd_primes_below(bound.min(1000))
        .filter(|p| p % 8 == 3 || p % 8 == 5)
        .collect();
    for &p in &primes {
        for k in (3..128).step_by(2) {
            let top = xi_symbol(k, p, lv(8)).expect("k in range");
            for m in 3..8 {
                if k >= 1 << (m - 1) {
                    continue;
                }
                let v = xi_symbol(k, p, lv(m)).expect("k in range");
                t.check(v == top, || {
                    format!("k={k} p={p}: m={m} gives {v}, m=8 gives {top}")
                });
            }
        }
    }
    t.finish(Suite::Symbols, "xi symbols independent of m")
}

fn symbol_rank_vs_closed_form(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for d in covered_d_below(bound).filter(|d| !d.is_prime()) {
        for m in 3..=6 {
            let table = unit_class_table(&d, lv(m)).expect("covered composite");
            let e = closed_form_unit_index(&d);
            t.check(table.e == e, || {
                format!(
                    "d={} m={m}: table rank {}, closed form {e}",
                    d.value(),
                    table.e
                )
            });
        }
    }
    t.finish(
        Suite::Symbols,
        "GF(2) rank of symbol table equals closed-form e",
    )
}

fn rank_vs_symbol_table(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for d in covered_d_below(bound).filter(|d| !d.is_prime() && d.r() <= 4) {
        let r = d.r() as u32;
        let values: Vec<_> = [3, 8]
            .into_iter()
            .map(|m| {
                let e = unit_class_table(&d, lv(m)).expect("covered composite").e;
                (rank2(&d, lv(m)), Coverage::Covered(2 * r - 1 - e))
            })
            .collect();
        let ok = values.iter().all(|(a, b)| a == b) && values[0].0 == values[1].0;
        t.check(ok, || {
            format!("d={}: (rank2, 2r-1-e) = {values:?}", d.value())
        });
    }
    t.finish(Suite::Ranks, "rank2 = 2r - 1 - e for m = 3 and 8")
}

fn rank_vs_ambiguous(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for d in covered_d_below(bound) {
        for m in [3, 5, 9] {
            let level = lv(m);
            let tcount = ramification_data(&d, level).ramified_primes_over_km;
            let e = if d.is_prime() {
                1
            } else {
                unit_class_table(&d, level).expect("covered composite").e as u64
            };
            let amb = ambiguous_rank(tcount, e).map(|v| v as u32);
            let closed = rank2(&d, level).covered();
            let parity_ok = (class_number_parity(&d, level) == Parity::Odd) == (closed == Some(0));
            t.check(amb.clone().ok() == closed && parity_ok, || {
                format!(
                    "d={} m={m}: t={tcount} e={e} ambiguous {amb:?} closed {closed:?}",
                    d.value()
                )
            });
        }
    }
    t.finish(Suite::Ranks, "rank2 and parity agree with t - 1 - e")
}

fn kuroda_pairs(count: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for (p, q) in five_three_pairs(count as usize) {
        let pq = p * q;
        let mut problems = Vec::new();
        for l in [pq, 2 * pq] {
            match class_group(field_discriminant(l as i64)) {
                Ok(g) => {
                    if g.two_part_wide() != 2 {
                        problems.push(format!("h2({l}) = {}", g.two_part_wide()));
                    }
                    if g.unit_norm != Some(1) {
                        problems.push(format!("N(eps_{l}) = {:?}", g.unit_norm));
                    }
                }
                Err(e) => problems.push(format!("class group of {l}: {e}")),
            }
            if check_nonsquare_shifts(l) != Ok(true) {
                problems.push(format!("shift condition for {l}"));
            }
        }
        match kuroda_h2_l3_plus(p, q) {
            Ok(2) => {}
            other => problems.push(format!("Kuroda gave {other:?}")),
        }
        t.check(problems.is_empty(), || {
            format!("(p, q) = ({p}, {q}): {}", problems.join("; "))
        });
    }
    t.finish(
        Suite::Quadratic,
        "h2(pq) = h2(2pq) = 2, units of norm 1, Kuroda value 2",
    )
}

fn genus_vs_forms(count: u64) -> CheckOutcome {
    let bound = 400 * count as i64;
    let mut t = Tally::new();
    for n in 3..=bound {
        for d in [-n, n] {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let genus = genus_two_rank(d).expect("fundamental");
            let forms = FormClassGroup::new(d).map(|g| g.two_rank());
            t.check(forms == Ok(genus), || {
                format!("D={d}: genus {genus}, forms {forms:?}")
            });
        }
    }
    t.finish(
        Suite::Quadratic,
        "genus 2-rank equals narrow 2-rank from forms",
    )
}

fn kummer_search(bound: u64) -> CheckOutcome {
    let searcher = NormSearcher::new(KUMMER_SEARCH_BOUND);
    let mut t = Tally::new();
    for n in (1..bound).filter(|&n| solvable_by_theorem(n)) {
        let sol = searcher.search(n);
        let ok = sol.as_ref().is_some_and(|s| s.verify());
        t.check(ok, || format!("n={n}: {sol:?}"));
    }
    t.finish(
        Suite::Kummer,
        "bounded search solves every n covered by the theorem",
    )
}

fn representations(bound: u64) -> CheckOutcome {
    let mut t = Tally::new();
    for p in (17..25 * bound).step_by(8).filter(|&p| is_prime(p)) {
        let rep = represent_p_1mod8(p);
        let ok = rep.as_ref().is_ok_and(|r| {
            r.a % 2 == 1
                && r.e % 2 == 1
                && r.a * r.a + 16 * r.b * r.b == p
                && r.e * r.e - 32 * r.f * r.f == p
        });
        t.check(ok, || format!("p={p}: {rep:?}"));
    }
    t.finish(Suite::Kummer, "p = a^2 + 16b^2 = e^2 - 32f^2 with a, e odd")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        assert_eq!(effective_budget(Suite::Kummer, None, None), 200);
        assert_eq!(effective_budget(Suite::Kummer, Some(50), None), 50);
        assert_eq!(effective_budget(Suite::Ranks, None, Some(1000)), 1000);
        assert_eq!(effective_budget(Suite::Ranks, Some(10), Some(1000)), 10);
        assert_eq!("kummer".parse::<Suite>(), Ok(Suite::Kummer));
        assert!("all".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        let plan: Vec<_> = Suite::ALL.into_iter().map(|s| (s, 60)).collect();
        let out = run(&plan);
        assert!(out.iter().all(|c| c.passed()), "{out:#?}");
        let order: Vec<_> = out.iter().map(|c| c.suite).collect();
        let mut sorted = order.clone();
        sorted.sort_by_key(|s| Suite::ALL.iter().position(|x| x == s));
        assert_eq!(order, sorted);
    }
}
