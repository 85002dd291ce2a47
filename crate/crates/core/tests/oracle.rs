//! Recurrence engine against explicit determinants.

use cantor_hankel::hankel::{hankel_det, hankel_det_mod3};
use cantor_hankel::recurrence::{Engine, FORMULAS};
use cantor_hankel::{Kind, Residue3};
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

/// Exact determinant with the boundary conventions of the recurrences:
/// `|Γ_0^0| = 2`, `|Δ_{−1}^p| = [p = 0]`.
fn exact_cell(kind: Kind, n: i64, p: u64) -> BigInt {
    match (kind, n) {
        (Kind::Gamma, 0) if p == 0 => BigInt::from(2),
        (Kind::Delta, -1) => BigInt::from((p == 0) as u8),
        (_, n) if n >= 0 => hankel_det(kind, p, n as usize),
        _ => panic!("no cell {kind} {n}"),
    }
}

#[test]
fn engine_matches_mod3_oracle() {
    let engine = Engine::new();
    let mismatches: Vec<(Kind, u64, u64)> = (1..=40u64)
        .into_par_iter()
        .flat_map_iter(|n| {
            let engine = &engine;
            (0..=81u64).flat_map(move |p| {
                [Kind::Gamma, Kind::Delta].into_iter().filter_map(move |kind| {
                    let got = engine.value(kind, n as i64, p);
                    (got != hankel_det_mod3(kind, p, n as usize)).then_some((kind, n, p))
                })
            })
        })
        .collect();
    assert!(mismatches.is_empty(), "first mismatches: {:?}", &mismatches[..mismatches.len().min(5)]);
}

#[test]
fn gamma_formulas_hold_over_integers() {
    for f in FORMULAS.iter().filter(|f| f.exact) {
        for m in 2..=8i64 {
            for q in 0..=27u64 {
                let (kind, n, p) = f.target(m, q);
                let lhs = exact_cell(kind, n, p);
                let rhs = f.evaluate(m, q, BigInt::one(), exact_cell);
                assert_eq!(lhs, rhs, "formula ({}) at m = {m}, q = {q}", f.number);
            }
        }
    }
}

#[test]
fn all_formulas_hold_mod3_including_boundary_extension() {
    // m = 0 and m = 1 exercise the extension of the recurrences by the boundary values.
    for f in FORMULAS.iter() {
        for m in 0..=8i64 {
            for q in 0..=27u64 {
                let (kind, n, p) = f.target(m, q);
                let lhs = Residue3::from_bigint(&exact_cell(kind, n, p));
                let rhs = f.evaluate(m, q, Residue3::ONE, |k, n, p| Residue3::from_bigint(&exact_cell(k, n, p)));
                assert_eq!(lhs, rhs, "formula ({}) at m = {m}, q = {q}", f.number);
            }
        }
    }
}

#[test]
fn formula_two_with_shifted_square_is_wrong() {
    // The alternative reading |Γ_{m+2}|² in the second term of formula (2) fails somewhere.
    let alternative = |m: i64, q: u64| {
        let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let c = exact_cell;
        &sign * c(Kind::Gamma, m, q) * c(Kind::Gamma, m + 1, q) * c(Kind::Delta, m, q)
            - &sign * c(Kind::Gamma, m + 2, q).pow(2) * c(Kind::Delta, m - 1, q)
    };
    let disagreements = (2..=8i64)
        .flat_map(|m| (0..=27u64).map(move |q| (m, q)))
        .filter(|&(m, q)| exact_cell(Kind::Gamma, 3 * m + 1, 3 * q) != alternative(m, q))
        .count();
    assert!(disagreements > 0);
}
