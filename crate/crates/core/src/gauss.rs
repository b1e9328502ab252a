//! Gauss sums `G(chi, p^m) = sum_x chi(x) e(x / p^m)`.

use num_complex::Complex64;

use crate::arith::{jacobi_symbol, mod_inverse, two_over};
use crate::character::Character;
use crate::error::{Error, Result};
use crate::options::EvalOptions;
use crate::unit_group::epsilon;
use crate::value::{ExactValue, Method, Phase, SumResult, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GaussMethod {
    #[default]
    Auto,
    Brute,
    Closed,
}

/// Direct summation over the units mod `p^m`.
pub fn gauss_brute(chi: &Character, opts: &EvalOptions) -> Result<SumResult> {
    let md = chi.modulus();
    let q = md.q();
    if q > opts.gauss_term_guard {
        return Err(Error::ResourceLimit {
            what: "brute-force Gauss sum",
            needed: q as u128,
            limit: opts.gauss_term_guard,
        });
    }
    let den = Character::value_denominator(md) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut terms = 0u64;
    for x in 1..q {
        let Some(log) = chi.context().decompose_reduced(x as usize) else {
            continue;
        };
        let (num, _) = chi.phase_index(log.sign, log.index);
        let turn = (num as f64 / den + x as f64 / q as f64).fract();
        let theta = std::f64::consts::TAU * turn;
        acc += Complex64::new(theta.cos(), theta.sin());
        terms += 1;
    }
    Ok(SumResult::numeric(acc, terms, Method::Brute, "direct sum over units"))
}

/// Smallest `j` the closed form accepts.
pub fn minimal_j(p: u64, m: u32) -> u32 {
    let half = m.div_ceil(2);
    if p == 2 {
        half + 2
    } else {
        half
    }
}

/// Closed-form evaluation for `m >= 2`.
pub fn gauss_closed(chi: &Character) -> Result<SumResult> {
    let md = chi.modulus();
    let v = gauss_closed_with_j(chi, minimal_j(md.p(), md.m()))?;
    Ok(SumResult::exact(v, Method::GaussClosed, "minimal j"))
}

/// Closed form using `R_j` for an explicit `j` (any admissible `j` gives
/// the same value).
pub fn gauss_closed_with_j(chi: &Character, j: u32) -> Result<ExactValue> {
    closed_value(chi, j, true)
}

fn closed_value(chi: &Character, j: u32, cubic_fix: bool) -> Result<ExactValue> {
    let md = *chi.modulus();
    let (p, m) = (md.p(), md.m());
    if m == 1 {
        return Err(Error::unsupported(
            "no closed form for the phase of a mod-p Gauss sum",
        ));
    }
    if j < minimal_j(p, m) {
        return Err(Error::invalid(format!(
            "j = {j} is below the admissible minimum {}",
            minimal_j(p, m)
        )));
    }
    if !chi.is_primitive() {
        return Ok(ExactValue::zero(p));
    }
    let q = md.q();
    let c = chi.representative();
    let ctx = chi.context();

    if p == 2 && m <= 4 {
        let phase = match m {
            2 => Phase::QUARTER,
            3 => Phase::eighth(1 - chi.parity() as i64),
            _ => {
                let at = chi.eval(-(c as i64)).expect("c is odd");
                at + Phase::new(-(c as i128), 16)
            }
        };
        return Ok(ExactValue::power(2, m as i64, phase));
    }

    let rj = ctx.r_j(j)?;
    let alpha = (q as i128 - (c as i128 * mod_inverse(rj as i64, q)? as i128) % q as i128) as i64;
    let mut phase = chi.eval(alpha).expect("alpha is a unit") + Phase::new(alpha as i128, q);
    if p == 2 {
        if m % 2 == 1 && two_over(c) < 0 {
            phase = phase + Phase::HALF;
        }
        phase = phase + Phase::eighth(c as i64);
    } else {
        let r = ctx.r()?;
        let leg = jacobi_symbol(-2 * (r * (c % p)) as i64, p as i64)?;
        if m % 2 == 1 && leg < 0 {
            phase = phase + Phase::HALF;
        }
        phase = phase + epsilon(p, m)?;
        if cubic_fix && p == 3 && m == 3 {
            // The quadratic stationary-phase step leaves a cubic term here.
            phase = phase + Phase::new(-((r * c) as i128), 3);
        }
    }
    Ok(ExactValue::power(p, m as i64, phase))
}

pub fn gauss_eval(chi: &Character, method: GaussMethod, opts: &EvalOptions) -> Result<SumResult> {
    match method {
        GaussMethod::Brute => gauss_brute(chi, opts),
        GaussMethod::Closed => gauss_closed(chi),
        GaussMethod::Auto if chi.modulus().m() >= 2 => gauss_closed(chi),
        GaussMethod::Auto => gauss_brute(chi, opts),
    }
}

/// `G(chi, p^j)` as exactly as available: closed form for `m >= 2`, `-1`
/// for the principal character mod `p`, brute force otherwise.
pub(crate) fn gauss_value(chi: &Character, opts: &EvalOptions) -> Result<Value> {
    if chi.modulus().m() >= 2 {
        return Ok(Value::Exact(gauss_closed_with_j(
            chi,
            minimal_j(chi.modulus().p(), chi.modulus().m()),
        )?));
    }
    if chi.is_principal() {
        return Ok(Value::Exact(ExactValue::root_of_unity(chi.modulus().p(), Phase::HALF)));
    }
    Ok(gauss_brute(chi, opts)?.value)
}

/// `conj(G(chi, p^j)) = conj(chi)(-1) G(conj(chi), p^j)`.
pub(crate) fn gauss_value_conj(chi: &Character, opts: &EvalOptions) -> Result<Value> {
    let bar = chi.conj();
    let g = gauss_value(&bar, opts)?;
    let sign = Value::Exact(ExactValue::root_of_unity(
        chi.modulus().p(),
        Phase::from_sign(bar.parity()),
    ));
    g.multiply(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::enumerate_characters;
    use crate::unit_group::UnitGroupContext;
    use std::sync::Arc;

    fn ctx(p: u64, m: u32) -> Arc<UnitGroupContext> {
        UnitGroupContext::new(p, m).unwrap()
    }

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn brute_examples() {
        let c4 = ctx(2, 2);
        let chi = Character::new(&c4, 0, 1).unwrap();
        let g = gauss_brute(&chi, &opts()).unwrap().to_complex();
        assert!((g - Complex64::new(0.0, 2.0)).norm() < 1e-12);

        let c9 = ctx(3, 2);
        let chi = Character::new(&c9, 1, 0).unwrap();
        let g = gauss_brute(&chi, &opts()).unwrap().to_complex();
        // 3 e(7/18)
        assert!((g - Complex64::new(-2.298_133_329_356_934, 1.928_362_829_059_617)).norm() < 1e-9);

        let g = gauss_brute(&Character::principal(&c9), &opts()).unwrap().to_complex();
        assert!(g.norm() < 1e-12);
    }

    #[test]
    fn closed_examples() {
        let c9 = ctx(3, 2);
        assert!(gauss_closed(&Character::new(&c9, 3, 0).unwrap()).unwrap().is_exact_zero());
        let g = gauss_closed(&Character::new(&c9, 1, 0).unwrap()).unwrap();
        assert_eq!(g.as_exact().unwrap(), &ExactValue::power(3, 2, Phase::new(7, 18)));

        let c8 = ctx(2, 3);
        // Odd and primitive: 2^(3/2) omega^2. The odd character with c = 0 is
        // induced from mod 4, so its sum vanishes.
        let g = gauss_closed(&Character::new(&c8, 1, 1).unwrap()).unwrap();
        assert_eq!(g.as_exact().unwrap(), &ExactValue::power(2, 3, Phase::QUARTER));
        assert!(gauss_closed(&Character::new(&c8, 0, 1).unwrap()).unwrap().is_exact_zero());
        assert!(gauss_brute(&Character::new(&c8, 0, 1).unwrap(), &opts()).unwrap().to_complex().norm() < 1e-12);

        let c4 = ctx(2, 2);
        let g = gauss_closed(&Character::new(&c4, 0, 1).unwrap()).unwrap();
        assert_eq!(g.as_exact().unwrap(), &ExactValue::power(2, 2, Phase::QUARTER));

        assert!(matches!(
            gauss_closed(&Character::new(&ctx(5, 1), 1, 0).unwrap()),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn eval_dispatch() {
        let c9 = ctx(3, 2);
        let chi = Character::new(&c9, 1, 0).unwrap();
        assert_eq!(gauss_eval(&chi, GaussMethod::Auto, &opts()).unwrap().method, Method::GaussClosed);
        let chi3 = Character::new(&ctx(3, 1), 1, 0).unwrap();
        assert_eq!(gauss_eval(&chi3, GaussMethod::Auto, &opts()).unwrap().method, Method::Brute);
        let tight = EvalOptions::with_term_guard(8);
        assert!(matches!(
            gauss_eval(&chi, GaussMethod::Brute, &tight),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn literal_formula_is_off_by_cube_root_mod_27() {
        let c27 = ctx(3, 3);
        let r = c27.r().unwrap();
        for chi in enumerate_characters(&c27, true) {
            let brute = gauss_brute(&chi, &opts()).unwrap().to_complex();
            let literal = closed_value(&chi, 2, false).unwrap();
            let fixed = closed_value(&chi, 2, true).unwrap();
            assert!((fixed.to_complex() - brute).norm() < 1e-9);
            assert!((literal.to_complex() - brute).norm() > 1.0);
            let c = chi.representative();
            assert_eq!(fixed.phase() - literal.phase(), Phase::new(-((r * c) as i128), 3));
        }
    }

    #[test]
    fn closed_matches_brute_small() {
        for (p, m) in [(3u64, 2u32), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 7)] {
            let c = ctx(p, m);
            for chi in enumerate_characters(&c, false) {
                let b = gauss_brute(&chi, &opts()).unwrap().to_complex();
                let g = gauss_closed(&chi).unwrap().to_complex();
                assert!((b - g).norm() < 1e-9, "{chi:?}: brute {b} closed {g}");
            }
        }
    }

    #[test]
    fn j_independence() {
        for (p, m) in [(3u64, 5u32), (5, 4), (7, 3), (2, 5), (2, 8), (2, 9)] {
            let c = ctx(p, m);
            for chi in enumerate_characters(&c, true) {
                let base = gauss_closed_with_j(&chi, minimal_j(p, m)).unwrap();
                for j in minimal_j(p, m)..=m {
                    assert_eq!(gauss_closed_with_j(&chi, j).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn conjugation_identity() {
        for (p, m) in [(3u64, 2u32), (3, 5), (5, 3), (7, 2), (2, 3), (2, 6), (13, 1)] {
            let c = ctx(p, m);
            for chi in enumerate_characters(&c, false) {
                let lhs = gauss_brute(&chi, &opts()).unwrap().to_complex().conj();
                let rhs = gauss_value_conj(&chi, &opts()).unwrap().to_complex();
                assert!((lhs - rhs).norm() < 1e-9);
            }
        }
    }
}
