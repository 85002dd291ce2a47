//! Kernel operators and the two-dimensional automaton against the engine.

use cantor_hankel::kernel::*;
use cantor_hankel::recurrence::Engine;
use cantor_hankel::{Kind, Residue3};
use num_bigint::BigUint;
use proptest::prelude::*;

/// The rewriting table, transcribed independently of the recurrence table.
const RULES: [(&str, &str); 18] = [
    ("G00", "F*G^2*D + F[1,0]*G*G[1,0]*D[-1,0]"),
    ("G02", "F*G[0,1]^2*D"),
    ("D00", "F*G*D^2 + F[1,0]*G[1,0]*D[-1,0]*D"),
    ("D02", "F*G[0,1]*D*D[0,1] + F[1,0]*G[1,1]*D*D[-1,1]"),
    ("G10", "F*G[1,0]*G*D + F[1,0]*G[1,0]^2*D[-1,0]"),
    ("G12", "F*G[1,0]*G[0,1]*D[0,1] + F[1,0]*G[1,0]*G[1,1]*D[-1,1]"),
    ("D10", "F[1,0]*G[1,0]*D^2"),
    ("D12", "F*G[1,0]*D[0,1]^2"),
    ("G20", "F*G[1,0]^2*D"),
    ("G22", "F[1,0]*G[1,1]^2*D"),
    ("D20", "F*G[2,0]*D^2 + F[1,0]*G[1,0]*D*D[1,0]"),
    ("D22", "F*G[2,0]*D[0,1]^2"),
    ("G01", "F*G[0,1]*G*D + F[1,0]*G[1,0]*G[0,1]*D[-1,0]"),
    ("G21", "F[1,0]*G[1,0]^2*D[0,1]"),
    ("D01", "F*G[0,1]*D^2"),
    ("D21", "F*G[2,0]*D*D[0,1] + F[1,0]*G[1,0]*D[0,1]*D[1,0]"),
    ("G11", "F[1,0]*G[1,0]^2*D[-1,1]"),
    ("D11", "F*G[1,1]*D^2"),
];

fn parse_key(key: &str) -> (Kind, u8, u8) {
    let b = key.as_bytes();
    let kind = if b[0] == b'G' { Kind::Gamma } else { Kind::Delta };
    (kind, b[1] - b'0', b[2] - b'0')
}

#[test]
fn transcribed_rules_match_derived_rules() {
    for (key, text) in RULES {
        let (kind, r, s) = parse_key(key);
        let transcribed: KernelExpr = text.parse().unwrap();
        assert_eq!(decimation_rule(kind, r, s), transcribed, "{key}");
        assert_eq!(apply_t(r, s, &KernelExpr::base(kind)).unwrap(), transcribed, "{key}");
    }
}

#[test]
fn rules_hold_pointwise() {
    let e = Engine::new();
    for (key, text) in RULES {
        let (kind, r, s) = parse_key(key);
        let rule: KernelExpr = text.parse().unwrap();
        for n in 0..=30u64 {
            for p in 0..=30u64 {
                let want = e.value(kind, (3 * n + r as u64) as i64, 3 * p + s as u64);
                assert_eq!(rule.evaluate(&e, n, p).unwrap(), want, "{key} at ({n}, {p})");
            }
        }
    }
}

#[test]
fn closures_are_finite_closed_and_sound() {
    let e = Engine::new();
    for kind in [Kind::Gamma, Kind::Delta] {
        let c = kernel_closure(&KernelExpr::base(kind), DEFAULT_STATE_CAP).unwrap();
        println!("kernel closure of {kind}: {} states", c.states.len());
        for (i, state) in c.states.iter().enumerate() {
            for d in 0..9u8 {
                let next = apply_t(d / 3, d % 3, state).unwrap();
                assert_eq!(next, c.states[c.transitions[i][d as usize]]);
            }
            let word = &c.words[i];
            let scale = 3u64.pow(word.len() as u32);
            let r: u64 = word.iter().rev().fold(0, |acc, &(a, _)| 3 * acc + a as u64);
            let s: u64 = word.iter().rev().fold(0, |acc, &(_, b)| 3 * acc + b as u64);
            for n in (0..=20u64).step_by(if word.len() > 3 { 5 } else { 1 }) {
                for p in (0..=20u64).step_by(if word.len() > 3 { 5 } else { 1 }) {
                    let want = e.value(kind, (scale * n + r) as i64, scale * p + s);
                    assert_eq!(state.evaluate(&e, n, p).unwrap(), want, "state {i} = {state} at ({n}, {p})");
                }
            }
        }
    }
}

#[test]
fn automata_match_engine_grid() {
    let e = Engine::new();
    for kind in [Kind::Gamma, Kind::Delta] {
        let d = Dfao2D::for_kind(&e, kind, DEFAULT_STATE_CAP).unwrap();
        let closure = kernel_closure(&KernelExpr::base(kind), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(d.len(), closure.states.len());
        for n in 1..=96u64 {
            for p in 0..=127u64 {
                assert_eq!(d.evaluate_u64(n, p), e.value(kind, n as i64, p), "{kind} ({n}, {p})");
            }
        }
    }
    let d = Dfao2D::for_kind(&e, Kind::Gamma, DEFAULT_STATE_CAP).unwrap();
    assert_eq!(d.evaluate_u64(1, 0), Residue3::ONE);
    assert_eq!(d.evaluate_u64(3, 0), Residue3::TWO);
}

#[test]
fn automaton_table_round_trip() {
    let e = Engine::new();
    let d = Dfao2D::for_kind(&e, Kind::Gamma, DEFAULT_STATE_CAP).unwrap();
    let text = d.export(DfaoFormat::Table);
    assert_eq!(Dfao2D::parse_table(&text).unwrap(), d);
    let dot = d.export(DfaoFormat::Dot);
    assert_eq!(dot.matches(" [label=\"").count() - dot.matches(" -> ").count() + 1, d.len());
}

#[test]
fn fixed_n_slices_are_automatic() {
    let e = Engine::new();
    for kind in [Kind::Gamma, Kind::Delta] {
        let d = Dfao2D::for_kind(&e, kind, DEFAULT_STATE_CAP).unwrap();
        for n in 0..=10u64 {
            let slice = d.fixed_n_slice(&BigUint::from(n));
            for p in 0..729u64 {
                assert_eq!(slice.evaluate(&BigUint::from(p)), e.value(kind, n as i64, p), "{kind} n = {n}, p = {p}");
            }
        }
    }
}

fn arb_generator() -> impl Strategy<Value = String> {
    prop_oneof![
        (0..=2i64, 0..=2i64).prop_map(|(a, b)| format!("G[{a},{b}]")),
        (-1..=2i64, 0..=2i64).prop_map(|(a, b)| format!("D[{a},{b}]")),
        (0..=1i64).prop_map(|a| format!("F[{a},0]")),
    ]
}

fn arb_expr() -> impl Strategy<Value = KernelExpr> {
    let monomial = (1..=2i64, proptest::collection::vec(arb_generator(), 1..4))
        .prop_map(|(c, gs)| format!("{c}*{}", gs.join("*")));
    proptest::collection::vec(monomial, 1..4).prop_map(|ms| ms.join(" + ").parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn decimation_is_sound_pointwise(e in arb_expr()) {
        let engine = Engine::new();
        for d in 0..9u8 {
            let (alpha, beta) = (d / 3, d % 3);
            let image = apply_t(alpha, beta, &e).unwrap();
            for n in 0..=30u64 {
                for p in 0..=30u64 {
                    let direct = e.evaluate(&engine, 3 * n + alpha as u64, 3 * p + beta as u64).unwrap();
                    prop_assert_eq!(image.evaluate(&engine, n, p).unwrap(), direct);
                }
            }
        }
    }

    #[test]
    fn text_round_trip(e in arb_expr()) {
        prop_assert_eq!(e.to_string().parse::<KernelExpr>().unwrap(), e);
    }
}
