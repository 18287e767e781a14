//! Small reference tables regenerated from the library itself.

use std::fmt::Write;

use crate::arith::{is_prime, Level};
use crate::splitting::split_in_km;
use crate::symbols::{epsilon2_symbol, xi_symbol, zeta_symbol, SymbolValue};

/// Names accepted by [`render`].
pub const TABLE_NAMES: &[&str] = &["splitting16", "symbols"];

/// One row of the splitting table of `Q(zeta_16)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Splitting16Row {
    pub k: u64,
    pub f: u64,
    pub g: u64,
}

fn smallest_prime_in_class(k: u64, modulus: u64) -> u64 {
    (k..)
        .step_by(modulus as usize)
        .find(|&p| is_prime(p))
        .expect("Dirichlet")
}

/// Residue degree and number of primes in `Q(zeta_16)` for each odd class
/// `k (mod 16)`, computed at the smallest prime of that class.
pub fn splitting16() -> Vec<Splitting16Row> {
    let level = Level::new(4).expect("valid level");
    (1..16)
        .step_by(2)
        .map(|k| {
            let p = smallest_prime_in_class(k, 16);
            let s = split_in_km(p, level).expect("prime");
            Splitting16Row { k, f: s.f, g: s.g }
        })
        .collect()
}

/// One row of the symbol table: a unit and its symbol at primes `= 3` and
/// `= 5 (mod 8)`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SymbolTableRow {
    pub unit: String,
    pub at_3_mod_8: SymbolValue,
    pub at_5_mod_8: SymbolValue,
}

/// Symbols of `zeta`, `eps_2` and `xi_k` (by `k mod 8`), evaluated at the
/// representative primes 3 and 5 on `K_5`.
pub fn symbol_rows() -> Vec<SymbolTableRow> {
    let level = Level::new(5).expect("valid level");
    let eval = |f: &dyn Fn(u64) -> SymbolValue| (f(3), f(5));
    let mut rows = Vec::new();
    let (a, b) = eval(&|p| zeta_symbol(p, level).expect("3, 5 mod 8"));
    rows.push(SymbolTableRow {
        unit: "zeta".into(),
        at_3_mod_8: a,
        at_5_mod_8: b,
    });
    let (a, b) = eval(&|p| epsilon2_symbol(p).expect("3, 5 mod 8"));
    rows.push(SymbolTableRow {
        unit: "eps_2".into(),
        at_3_mod_8: a,
        at_5_mod_8: b,
    });
    // k = 9, 3, 5, 7 cover the classes 1, 3, 5, 7 mod 8
    for (k, class) in [(9, 1), (3, 3), (5, 5), (7, 7)] {
        let (a, b) = eval(&|p| xi_symbol(k, p, level).expect("valid k"));
        rows.push(SymbolTableRow {
            unit: format!("xi_k (k = {class} mod 8)"),
            at_3_mod_8: a,
            at_5_mod_8: b,
        });
    }
    rows
}

/// CSV text of a named table, or `None` for an unknown name.
pub fn render(name: &str) -> Option<String> {
    let mut out = String::new();
    match name {
        "splitting16" => {
            out.push_str("k,f,g\n");
            for row in splitting16() {
                writeln!(out, "{},{},{}", row.k, row.f, row.g).unwrap();
            }
        }
        "symbols" => {
            out.push_str("unit,p=3 mod 8,p=5 mod 8\n");
            for row in symbol_rows() {
                writeln!(out, "{},{},{}", row.unit, row.at_3_mod_8, row.at_5_mod_8).unwrap();
            }
        }
        _ => return None,
    }
    Some(out)
}
