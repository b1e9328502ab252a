//! Library building blocks against the reference evaluator.

mod common;

use charsum::{
    enumerate_characters, jacobi_direct_k2, Character, JacobiQuery, SumResult, UnitGroupContext,
};
use common::Oracle;
use num_complex::Complex64;

const MODULI: [(u64, u32); 12] = [
    (2, 2),
    (2, 3),
    (2, 4),
    (2, 6),
    (3, 1),
    (3, 2),
    (3, 4),
    (5, 1),
    (5, 3),
    (7, 2),
    (11, 2),
    (13, 1),
];

fn pair(chi: &Character) -> (u64, u64) {
    (chi.sign() as u64, chi.exponent())
}

#[test]
fn character_values_match() {
    for (p, m) in MODULI {
        let o = Oracle::new(p, m);
        let ctx = UnitGroupContext::new(p, m).unwrap();
        assert_eq!(ctx.generator(), o.generator, "generator mod {p}^{m}");
        for chi in enumerate_characters(&ctx, false) {
            let (e, c) = pair(&chi);
            for x in -3..o.q as i64 {
                let want = o.chi(e, c, x);
                let got = chi.eval(x).map_or(Complex64::new(0.0, 0.0), |ph| ph.to_complex());
                assert!((want - got).norm() < 1e-9, "mod {p}^{m} ({e}, {c}) at {x}");
            }
        }
    }
}

#[test]
fn conductors_match() {
    for (p, m) in MODULI {
        let o = Oracle::new(p, m);
        let ctx = UnitGroupContext::new(p, m).unwrap();
        for chi in enumerate_characters(&ctx, false) {
            let (e, c) = pair(&chi);
            let brute = o.conductor_exponent_brute(e, c);
            assert_eq!(chi.conductor_exponent(), brute, "mod {p}^{m} ({e}, {c})");
            assert_eq!(o.conductor_exponent(e, c), brute, "oracle shortcut mod {p}^{m} ({e}, {c})");
        }
        let prim = enumerate_characters(&ctx, true);
        assert!(prim.iter().all(|c| o.is_primitive(c.sign() as u64, c.exponent())));
    }
}

#[test]
fn direct_pairs_match_brute() {
    for (p, m) in [(3u64, 2u32), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
        let o = Oracle::new(p, m);
        let ctx = UnitGroupContext::new(p, m).unwrap();
        let prim = enumerate_characters(&ctx, true);
        for n in 0..=m - 2 {
            let b = p.pow(n) as i64;
            for a in prim.iter().step_by(3) {
                for c in enumerate_characters(&ctx, false).iter().step_by(2) {
                    let q = JacobiQuery::new(vec![a.clone(), c.clone()], b).unwrap();
                    let got = jacobi_direct_k2(&q).unwrap().to_complex();
                    let want = o.jacobi(&[(0, a.exponent()), (0, c.exponent())], b);
                    let scale = (p as f64).powf((m + n) as f64 / 2.0);
                    assert!((got - want).norm() <= 1e-6 * scale, "mod {p}^{m} B {b} ({}, {}): {got} vs {want}", a.exponent(), c.exponent());
                }
            }
        }
    }
}

#[test]
fn json_round_trip() {
    for (p, m) in [(2u64, 5u32), (3, 3), (5, 2)] {
        let ctx = UnitGroupContext::new(p, m).unwrap();
        for chi in enumerate_characters(&ctx, false) {
            let r = charsum::gauss_closed(&chi).unwrap();
            let (back, base) = SumResult::from_json(&r.to_json(p)).unwrap();
            assert_eq!(base, p);
            assert_eq!(back.as_exact(), r.as_exact());
            assert_eq!(back.method, r.method);
            let b = charsum::gauss_brute(&chi, &charsum::EvalOptions::default()).unwrap();
            let (back, _) = SumResult::from_json(&b.to_json(p)).unwrap();
            assert!((back.to_complex() - b.to_complex()).norm() < 1e-12);
        }
    }
    assert!(SumResult::from_json("{").is_err());
    assert!(SumResult::from_json("{\"value\": 3}").is_err());
}
