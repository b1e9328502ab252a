//! Generalized Jacobi sums
//! `J_B(chi_1, ..., chi_k, p^m) = sum over x_1 + ... + x_k = B of chi_1(x_1)...chi_k(x_k)`.
//!
//! Four routes are provided: the brute-force oracle, the closed form for
//! `m >= n + 2`, the Gauss-sum quotient for `m > n`, and the characteristic
//! equation method for `k = 2`, odd `p`. [`jacobi_eval`] dispatches between
//! them.

use std::borrow::Cow;
use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{jacobi_symbol, mod_inverse, two_over, valuation};
use crate::character::Character;
use crate::error::{Error, Result};
use crate::gauss::{gauss_value, gauss_value_conj};
use crate::options::EvalOptions;
use crate::unit_group::{epsilon, PrimePowerModulus, UnitGroupContext};
use crate::value::{ExactValue, Method, Phase, SumResult, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum JacobiMethod {
    #[default]
    Auto,
    Brute,
    Closed,
    Quotient,
    Direct,
}

/// A sum `J_B(chi_1, ..., chi_k, p^m)`; `B` is stored reduced mod `p^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiQuery {
    chars: Vec<Character>,
    b: u64,
}

impl JacobiQuery {
    pub fn new(chars: Vec<Character>, b: i64) -> Result<Self> {
        let first = chars
            .first()
            .ok_or_else(|| Error::invalid("a Jacobi sum needs at least one character"))?;
        let md = *first.modulus();
        if let Some(bad) = chars.iter().find(|c| *c.modulus() != md) {
            return Err(Error::ModulusMismatch {
                left: md.q(),
                right: bad.modulus().q(),
            });
        }
        Ok(JacobiQuery {
            b: b.rem_euclid(md.q() as i64) as u64,
            chars,
        })
    }

    pub fn chars(&self) -> &[Character] {
        &self.chars
    }

    pub fn k(&self) -> usize {
        self.chars.len()
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn modulus(&self) -> &PrimePowerModulus {
        self.chars[0].modulus()
    }

    pub fn context(&self) -> &Arc<UnitGroupContext> {
        self.chars[0].context()
    }

    /// `n` with `B = p^n B'`, `p` not dividing `B'`; `m` when `B = 0 mod p^m`.
    pub fn n(&self) -> u32 {
        let md = self.modulus();
        if self.b == 0 {
            md.m()
        } else {
            valuation(self.b, md.p())
        }
    }

    /// `B'` (1 when `B = 0 mod p^m`).
    pub fn b_unit(&self) -> u64 {
        if self.b == 0 {
            1
        } else {
            self.b / self.modulus().p_pow(self.n())
        }
    }

    pub fn product(&self) -> Character {
        let mut it = self.chars.iter();
        let first = it.next().expect("non-empty").clone();
        it.fold(first, |acc, c| acc.multiply(c).expect("same modulus"))
    }

    /// Sum of the integer representatives `c_i` in `[1, exponent_modulus]`.
    pub fn exponent_sum(&self) -> u64 {
        self.chars.iter().map(Character::representative).sum()
    }

    /// `v = p^-n (c_1 + ... + c_k)` when the division is exact.
    pub fn v(&self) -> Option<u64> {
        let pn = self.modulus().p().checked_pow(self.n())?;
        let s = self.exponent_sum();
        (s % pn == 0).then_some(s / pn)
    }

    pub fn any_primitive(&self) -> bool {
        self.chars.iter().any(Character::is_primitive)
    }

    pub fn all_primitive(&self) -> bool {
        self.chars.iter().all(Character::is_primitive)
    }

    fn with_b(&self, b: u64) -> JacobiQuery {
        JacobiQuery {
            chars: self.chars.clone(),
            b,
        }
    }
}

/// Nested summation over `x_1..x_{k-1}` with `x_k = B - sum x_i`.
pub fn jacobi_brute(query: &JacobiQuery, opts: &EvalOptions) -> Result<SumResult> {
    let md = *query.modulus();
    let q = md.q() as usize;
    let k = query.k();
    let terms = (q as u128).pow(k as u32 - 1);
    if terms > opts.jacobi_term_guard as u128 {
        return Err(Error::ResourceLimit {
            what: "brute-force Jacobi sum",
            needed: terms,
            limit: opts.jacobi_term_guard,
        });
    }
    let den = Character::value_denominator(&md) as usize;
    const SKIP: u32 = u32::MAX;
    let tables: Vec<Vec<u32>> = query
        .chars
        .iter()
        .map(|chi| {
            (0..q)
                .map(|x| match chi.context().decompose_reduced(x) {
                    Some(log) => chi.phase_index(log.sign, log.index).0 as u32,
                    None => SKIP,
                })
                .collect()
        })
        .collect();

    // hist[s] counts tuples whose character product is e(s / den).
    let mut hist = vec![0u64; den];
    let b = query.b as usize;
    if k == 1 {
        if tables[0][b] != SKIP {
            hist[tables[0][b] as usize] += 1;
        }
    } else {
        accumulate(&tables, 0, 0, b, q, den, &mut hist);
    }
    let z: Complex64 = hist
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(s, &n)| Phase::new(s as i128, den as u64).to_complex() * n as f64)
        .sum();
    Ok(SumResult::numeric(z, terms as u64, Method::Brute, "nested direct sum"))
}

fn accumulate(
    tables: &[Vec<u32>],
    depth: usize,
    phase: usize,
    rest: usize,
    q: usize,
    den: usize,
    hist: &mut [u64],
) {
    let k = tables.len();
    let table = &tables[depth];
    if depth + 2 == k {
        let last = &tables[k - 1];
        for (x, &t) in table.iter().enumerate() {
            if t == u32::MAX {
                continue;
            }
            let xk = (rest + q - x) % q;
            let tk = last[xk];
            if tk == u32::MAX {
                continue;
            }
            let mut s = phase + t as usize + tk as usize;
            while s >= den {
                s -= den;
            }
            hist[s] += 1;
        }
        return;
    }
    for (x, &t) in table.iter().enumerate() {
        if t == u32::MAX {
            continue;
        }
        let s = (phase + t as usize) % den;
        accumulate(tables, depth + 1, s, (rest + q - x) % q, q, den, hist);
    }
}

/// Rewrite `J_B` as `chi_1...chi_k(B') * J_{p^n}`.
///
/// Returns the query with `B = p^n` (or `0`) and the exact prefactor.
pub fn normalize_b(query: &JacobiQuery) -> (Cow<'_, JacobiQuery>, ExactValue) {
    let p = query.modulus().p();
    let unit = query.b_unit();
    if unit == 1 {
        return (Cow::Borrowed(query), ExactValue::one(p));
    }
    let phase = query
        .product()
        .eval(unit as i64)
        .expect("B' is a unit");
    (
        Cow::Owned(query.with_b(query.modulus().p_pow(query.n()))),
        ExactValue::root_of_unity(p, phase),
    )
}

/// `B = 0 mod p^m`: `phi(p^m) chi_k(-1) J(chi_1..chi_{k-1})` when the product
/// is principal, zero otherwise.
pub fn jacobi_top_case(query: &JacobiQuery, opts: &EvalOptions) -> Result<SumResult> {
    if query.b != 0 {
        return Err(Error::invalid("top case needs B = 0 mod p^m"));
    }
    let k = query.k();
    if k < 2 {
        return Err(Error::Precondition("top case needs k >= 2".into()));
    }
    let md = *query.modulus();
    if !query.product().is_principal() {
        return Ok(SumResult::exact(
            ExactValue::zero(md.p()),
            Method::TopCase,
            "product character is not principal",
        ));
    }
    let last = &query.chars[k - 1];
    let factor = ExactValue::new(md.p(), 0, md.phi(), Phase::from_sign(last.parity()));
    let (inner, notes): (Value, Cow<'static, str>) = if k == 2 {
        (Value::Exact(ExactValue::one(md.p())), "inner sum is chi_1(1)".into())
    } else {
        let sub = JacobiQuery::new(query.chars[..k - 1].to_vec(), 1)?;
        let r = jacobi_eval(&sub, JacobiMethod::Auto, opts)?;
        (r.value, format!("inner J via {}", r.method).into())
    };
    Ok(SumResult {
        value: inner.multiply(&Value::Exact(factor))?,
        method: Method::TopCase,
        notes,
    })
}

/// Closed-form evaluation for `m >= n + 2`, `k >= 2`, at least one primitive
/// character.
pub fn jacobi_closed(query: &JacobiQuery) -> Result<SumResult> {
    if query.k() < 2 {
        return Err(Error::Precondition("closed form needs k >= 2".into()));
    }
    let (red, prefactor) = normalize_b(query);
    let md = *red.modulus();
    let (p, m, n) = (md.p(), md.m(), red.n());
    if n == m || m < n + 2 {
        return Err(Error::unsupported(format!(
            "closed form needs m >= n + 2 (m = {m}, n = {n})"
        )));
    }
    if !red.any_primitive() {
        return Err(Error::Precondition("no primitive character".into()));
    }
    if p == 2 && (m, n) == (2, 0) || (m, n) == (4, 0) && p == 2 {
        return Err(Error::unsupported(format!(
            "no stated closed form for p = 2, m = {m}, n = 0"
        )));
    }
    if !red.all_primitive() {
        return Ok(SumResult::exact(
            ExactValue::zero(p),
            Method::JacobiClosed,
            "not all characters primitive",
        ));
    }
    if red.product().conductor_exponent() != m - n {
        return Ok(SumResult::exact(
            ExactValue::zero(p),
            Method::JacobiClosed,
            "product not induced by a primitive mod p^(m-n) character",
        ));
    }
    let v = if p == 2 {
        two_adic_value(&red)?
    } else {
        odd_value(&red)?
    };
    Ok(SumResult::exact(
        v.multiply(&prefactor)?,
        Method::JacobiClosed,
        "",
    ))
}

/// `prod chi_i(c_i)` as a phase.
fn char_at_own_exponent(red: &JacobiQuery, negate: bool) -> Phase {
    red.chars
        .iter()
        .map(|chi| {
            let c = chi.representative() as i64;
            chi.eval(if negate { -c } else { c }).expect("primitive exponents are units")
        })
        .sum()
}

fn sign_phase(s: i8) -> Phase {
    Phase::from_sign(s)
}

fn odd_value(red: &JacobiQuery) -> Result<ExactValue> {
    let ctx = red.context();
    let md = *red.modulus();
    let (p, m, n) = (md.p(), md.m(), red.n());
    let k = red.k() as u32;
    let v = red.v().expect("p^n divides the exponent sum");
    let pi = p as i64;
    let r = ctx.r()?;
    let leg = |x: i64| jacobi_symbol(x, pi);
    let c_legendre = red
        .chars
        .iter()
        .map(|c| leg((c.representative() % p) as i64))
        .try_fold(1i8, |acc, s| s.map(|s| acc * s))?;

    let mut sign = 1i8;
    let mut pow_sign = |s: i8, e: u32| {
        if e % 2 == 1 {
            sign *= s;
        }
    };
    pow_sign(leg(-2 * r as i64)?, m * (k - 1) + n);
    pow_sign(leg((v % p) as i64)?, m - n);
    pow_sign(c_legendre, m);

    let product = red.product();
    let mut phase = char_at_own_exponent(red, false) - product.eval(v as i64).expect("v is a unit");
    phase = phase + sign_phase(sign) + epsilon(p, m)?.times(k as i64) - epsilon(p, m - n)?;
    if p == 3 && m - n == 3 && n >= 1 {
        // The mod-27 Gauss sum in the denominator carries an extra e(-rv/3).
        phase = phase + Phase::new((r * v) as i128, 3);
    }
    Ok(ExactValue::power(p, (m * (k - 1) + n) as i64, phase))
}

fn two_adic_value(red: &JacobiQuery) -> Result<ExactValue> {
    let md = *red.modulus();
    let (m, n) = (md.m(), red.n());
    let k = red.k() as i64;
    let half_exp = (m as i64) * (k - 1) + n as i64;
    let product = red.product();
    let two_over_c: i8 = red.chars.iter().map(|c| two_over(c.representative())).product();
    let odd_m_sign = |s: i8, e: u32| if e % 2 == 1 { s } else { 1 };

    let phase = match (m, n) {
        (3, 0) => {
            let l = red.chars.iter().filter(|c| c.parity() < 0).count();
            sign_phase(if (l / 2) % 2 == 1 { -1 } else { 1 })
        }
        (3, 1) => {
            let parity_sum: i64 = red.chars.iter().map(|c| c.parity() as i64).sum();
            Phase::new(3, 4) + Phase::eighth(k - parity_sum)
        }
        (4, 1) => {
            let v = red.v().expect("2 divides the exponent sum") as i64;
            Phase::eighth(product.parity() as i64 - 1 - v) + char_at_own_exponent(red, true)
        }
        (4, 2) => {
            let v = red.v().expect("4 divides the exponent sum") as i64;
            Phase::QUARTER.times(1 - v) + char_at_own_exponent(red, false)
        }
        _ if m >= 5 => {
            let v = red.v().expect("2^n divides the exponent sum");
            let base = char_at_own_exponent(red, false) + sign_phase(odd_m_sign(two_over_c, m));
            if m - n == 2 {
                // Equivalent to the omega-adjusted form when v = 1 mod 4, and
                // valid for every v.
                base + Phase::QUARTER.times(v as i64 - 1)
            } else {
                let mut phase = base - product.eval(v as i64).expect("v is odd")
                    + sign_phase(odd_m_sign(two_over(v), m - n))
                    + Phase::eighth((((1u64 << n.min(3)) - 1) % 8 * (v % 8)) as i64);
                let parity = product.parity();
                match m - n {
                    3 => {
                        phase = phase + Phase::eighth(1 + parity as i64);
                        if v % 4 == 3 {
                            phase = phase + sign_phase(-parity);
                        }
                    }
                    4 => phase = phase + sign_phase(parity) + Phase::eighth(2 * v as i64),
                    _ => {}
                }
                phase
            }
        }
        _ => {
            return Err(Error::unsupported(format!(
                "no stated closed form for p = 2, m = {m}, n = {n}"
            )))
        }
    };
    Ok(ExactValue::power(2, half_exp, phase))
}

/// Evaluation through Gauss sums for `m > n` with at least one primitive
/// character.
pub fn jacobi_via_gauss(query: &JacobiQuery, opts: &EvalOptions) -> Result<SumResult> {
    if query.b == 0 {
        return jacobi_top_case(query, opts);
    }
    let (red, prefactor) = normalize_b(query);
    let md = *red.modulus();
    let (p, m, n) = (md.p(), md.m(), red.n());
    let Some(pos) = red.chars.iter().position(Character::is_primitive) else {
        return Err(Error::Precondition("no primitive character".into()));
    };
    let product = red.product();
    if product.conductor_exponent() > m - n {
        return Ok(SumResult::exact(
            ExactValue::zero(p),
            Method::GaussQuotient,
            "product is not a mod p^(m-n) character",
        ));
    }
    let reduced = product.reduce_to_modulus(m - n)?;

    let (value, notes) = if red.all_primitive() && reduced.is_primitive() {
        let mut num = Value::Exact(ExactValue::one(p));
        for chi in &red.chars {
            num = num.multiply(&gauss_value(chi, opts)?)?;
        }
        (num.divide(&gauss_value(&reduced, opts)?)?, "symmetric form")
    } else {
        let mut chars = red.chars.clone();
        let last = chars.remove(pos);
        let mut acc = Value::Exact(ExactValue::power(p, 2 * n as i64, Phase::ONE));
        acc = acc.multiply(&gauss_value_conj(&reduced, opts)?)?;
        for chi in &chars {
            acc = acc.multiply(&gauss_value(chi, opts)?)?;
        }
        (acc.divide(&gauss_value_conj(&last, opts)?)?, "asymmetric form")
    };
    Ok(SumResult {
        value: value.multiply(&Value::Exact(prefactor))?,
        method: Method::GaussQuotient,
        notes: notes.into(),
    })
}

/// Direct evaluation for `k = 2`, odd `p`, `m >= n + 2` by solving the
/// characteristic equation `c_1 + c_2 - c_1 b x = 0 mod p^(floor((m+n)/2)+1)`.
pub fn jacobi_direct_k2(query: &JacobiQuery) -> Result<SumResult> {
    if query.k() != 2 {
        return Err(Error::invalid(format!(
            "direct method needs exactly two characters, got {}",
            query.k()
        )));
    }
    let md = *query.modulus();
    if !md.is_odd() {
        return Err(Error::unsupported("direct method is for odd p"));
    }
    let (red, prefactor) = normalize_b(query);
    let (p, m, n) = (md.p(), md.m(), red.n());
    if n == m || m < n + 2 {
        return Err(Error::unsupported(format!(
            "direct method needs m >= n + 2 (m = {m}, n = {n})"
        )));
    }
    let (chi1, chi2) = match (red.chars[0].is_primitive(), red.chars[1].is_primitive()) {
        (true, _) => (&red.chars[0], &red.chars[1]),
        (false, true) => (&red.chars[1], &red.chars[0]),
        (false, false) => return Err(Error::Precondition("no primitive character".into())),
    };
    let zero = |why: &'static str| Ok(SumResult::exact(ExactValue::zero(p), Method::DirectK2, why));
    if !chi2.is_primitive() {
        return zero("p divides c_2 but not c_1");
    }
    let (c1, c2) = (chi1.representative(), chi2.representative());
    let s = c1 + c2;
    if valuation(s, p) != n {
        return zero("characteristic equation has no solution");
    }
    let q = md.q();
    let pn = md.p_pow(n);
    let w = s / pn;
    let b = pn as i128;
    // x0 = w c_1^-1 (B')^-1 with B' = 1 after normalization.
    let x0 = (w as i128 * mod_inverse(c1 as i64, q)? as i128 % q as i128) as i64;
    let level = md.p_pow((m + n) / 2 + 1) as i128;
    debug_assert_eq!((s as i128 - c1 as i128 * b * x0 as i128).rem_euclid(level), 0);
    let bx0_minus_1 = (b * x0 as i128 - 1).rem_euclid(q as i128) as i64;
    debug_assert!(x0 % p as i64 != 0 && bx0_minus_1 % p as i64 != 0);

    let prod = chi1.multiply(chi2)?;
    let r = red.context().r()?;
    let leg = jacobi_symbol(
        (-2i128 * (c2 % p) as i128 * r as i128 * x0 as i128).rem_euclid(p as i128) as i64,
        p as i64,
    )?;
    let mut phase = -prod.eval(x0).expect("x0 is a unit") + chi2.eval(bx0_minus_1).expect("unit");
    if (m - n) % 2 == 1 && leg < 0 {
        phase = phase + Phase::HALF;
    }
    phase = phase + epsilon(p, m - n)?;
    if p == 3 && m - n == 3 && n >= 1 {
        // Same cubic term as the closed form at this level.
        phase = phase + Phase::new((r * w) as i128, 3);
    }
    let v = ExactValue::power(p, (m + n) as i64, phase);
    Ok(SumResult::exact(
        v.multiply(&prefactor)?,
        Method::DirectK2,
        "characteristic equation solution",
    ))
}

/// Evaluate with the requested route. `Auto` picks the top case for
/// `B = 0 mod p^m`, the closed form when `m >= n + 2` (falling back to the
/// quotient), the quotient when `m = n + 1`, and reduces tuples with no
/// primitive character to the modulus `p^(m-1)`.
pub fn jacobi_eval(query: &JacobiQuery, method: JacobiMethod, opts: &EvalOptions) -> Result<SumResult> {
    match method {
        JacobiMethod::Brute => jacobi_brute(query, opts),
        JacobiMethod::Closed => jacobi_closed(query),
        JacobiMethod::Quotient => jacobi_via_gauss(query, opts),
        JacobiMethod::Direct => jacobi_direct_k2(query),
        JacobiMethod::Auto => jacobi_auto(query, opts),
    }
}

fn jacobi_auto(query: &JacobiQuery, opts: &EvalOptions) -> Result<SumResult> {
    let md = *query.modulus();
    let (m, n) = (md.m(), query.n());
    if query.k() == 1 {
        return jacobi_brute(query, opts);
    }
    if n == m {
        return jacobi_top_case(query, opts);
    }
    if m >= n + 2 {
        match jacobi_closed(query) {
            Ok(r) => return Ok(r),
            Err(e) if e.allows_fallback() => {}
            Err(e) => return Err(e),
        }
    }
    if query.any_primitive() {
        return jacobi_via_gauss(query, opts);
    }
    if m >= 2 {
        // Every character factors through p^(m-1); each free variable then
        // has p lifts.
        let chars = query
            .chars
            .iter()
            .map(|c| c.reduce_to_modulus(m - 1))
            .collect::<Result<Vec<_>>>()?;
        let sub = JacobiQuery::new(chars, (query.b % md.p_pow(m - 1)) as i64)?;
        let inner = jacobi_auto(&sub, opts)?;
        let lift = ExactValue::power(md.p(), 2 * (query.k() as i64 - 1), Phase::ONE);
        return Ok(SumResult {
            value: inner.value.multiply(&Value::Exact(lift))?,
            method: inner.method,
            notes: format!("reduced to mod {}; {}", sub.modulus().q(), inner.notes).into(),
        });
    }
    jacobi_brute(query, opts)
}
