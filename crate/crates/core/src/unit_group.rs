//! Unit groups modulo `p^m`: canonical generators, discrete-log tables and
//! the constants `r`, `R_j`, `epsilon` consumed by the closed forms.

use std::sync::{Arc, OnceLock};

use crate::arith::{is_prime, mul_mod, pow_mod, prime_factors};
use crate::error::{Error, Result};
use crate::value::Phase;

/// Largest modulus for which a full discrete-log table is built.
pub const DLOG_TABLE_LIMIT: u64 = 1 << 21;

const NON_UNIT: u32 = u32::MAX;
const SIGN_BIT: u32 = 1 << 31;

/// A validated prime power `q = p^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimePowerModulus {
    p: u64,
    m: u32,
    q: u64,
    phi: u64,
}

impl PrimePowerModulus {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::invalid("exponent m must be at least 1"));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q < (1 << 62))
            .ok_or_else(|| Error::invalid(format!("{p}^{m} is too large")))?;
        Ok(PrimePowerModulus {
            p,
            m,
            q,
            phi: q / p * (p - 1),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// `p^j` for `j <= m`.
    pub fn p_pow(&self, j: u32) -> u64 {
        self.p.pow(j)
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Order of the cyclic part that characters are labelled against:
    /// `phi(p^m)` for odd `p`, `2^(m-2)` for `p = 2` (1 when `m <= 2`).
    pub fn exponent_modulus(&self) -> u64 {
        if self.is_odd() {
            self.phi
        } else if self.m >= 2 {
            1 << (self.m - 2)
        } else {
            1
        }
    }
}

/// Discrete-log coordinates of a unit: `x = (-1)^sign * g^index`.
///
/// For odd `p` the sign is always 0 and `g` is the primitive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitLog {
    pub sign: u8,
    pub index: u64,
}

/// Smallest primitive root modulo `p^2`, hence modulo every power of `p`.
pub fn find_primitive_root(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    let p2 = p * p;
    let order = p * (p - 1);
    let mut cofactors: Vec<u64> = prime_factors(p - 1).into_iter().map(|l| order / l).collect();
    cofactors.push(order / p);
    (2..p2)
        .find(|&a| a % p != 0 && cofactors.iter().all(|&e| pow_mod(a, e, p2) != 1))
        .ok_or_else(|| Error::invalid(format!("no primitive root found for {p}")))
}

/// `epsilon_{p^m}`: 1 when `p^m = 1 mod 4`, `i` when `p^m = 3 mod 4`.
pub fn epsilon(p: u64, m: u32) -> Result<Phase> {
    if p == 2 {
        return Err(Error::invalid("epsilon is defined for odd p only"));
    }
    Ok(if p % 4 == 3 && m % 2 == 1 {
        Phase::QUARTER
    } else {
        Phase::ONE
    })
}

/// The unit group mod `p^m` with its canonical generator and cached constants.
///
/// Immutable after construction apart from lazily filled caches.
#[derive(Debug)]
pub struct UnitGroupContext {
    modulus: PrimePowerModulus,
    generator: u64,
    /// `x -> index`, with the sign bit packed into bit 31 for `p = 2`.
    dlog: Vec<u32>,
    r: Option<u64>,
    rj_cache: Vec<OnceLock<u64>>,
    sub_contexts: Vec<OnceLock<Arc<UnitGroupContext>>>,
}

impl UnitGroupContext {
    pub fn new(p: u64, m: u32) -> Result<Arc<Self>> {
        // Size check first: primality testing is trial division.
        match p.checked_pow(m.max(1)) {
            Some(q) if q <= DLOG_TABLE_LIMIT => {}
            needed => {
                return Err(Error::ResourceLimit {
                    what: "discrete-log table",
                    needed: needed.map_or(u128::MAX, u128::from),
                    limit: DLOG_TABLE_LIMIT,
                })
            }
        }
        Self::for_modulus(PrimePowerModulus::new(p, m)?)
    }

    pub fn for_modulus(modulus: PrimePowerModulus) -> Result<Arc<Self>> {
        let q = modulus.q();
        if q > DLOG_TABLE_LIMIT {
            return Err(Error::ResourceLimit {
                what: "discrete-log table",
                needed: q as u128,
                limit: DLOG_TABLE_LIMIT,
            });
        }
        let mut dlog = vec![NON_UNIT; q as usize];
        let (generator, r) = if modulus.is_odd() {
            let p = modulus.p();
            let a = find_primitive_root(p)?;
            let mut x = 1u64;
            for t in 0..modulus.phi() {
                dlog[x as usize] = t as u32;
                x = mul_mod(x, a, q);
            }
            let r = (pow_mod(a, p - 1, p * p) - 1) / p % p;
            (a, Some(r))
        } else {
            match modulus.m() {
                1 => dlog[1] = 0,
                2 => {
                    dlog[1] = 0;
                    dlog[3] = SIGN_BIT;
                }
                _ => {
                    let mut x = 1u64;
                    for t in 0..modulus.exponent_modulus() {
                        dlog[x as usize] = t as u32;
                        dlog[(q - x) as usize] = t as u32 | SIGN_BIT;
                        x = mul_mod(x, 5, q);
                    }
                }
            }
            (5, None)
        };
        let m = modulus.m() as usize;
        Ok(Arc::new(UnitGroupContext {
            modulus,
            generator,
            dlog,
            r,
            rj_cache: (0..=m + 4).map(|_| OnceLock::new()).collect(),
            sub_contexts: (0..m).map(|_| OnceLock::new()).collect(),
        }))
    }

    pub fn modulus(&self) -> &PrimePowerModulus {
        &self.modulus
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn m(&self) -> u32 {
        self.modulus.m()
    }

    pub fn q(&self) -> u64 {
        self.modulus.q()
    }

    /// The primitive root `a` (odd `p`, smallest modulo `p^2`, not reduced mod `q`) or `5` (`p = 2`).
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn is_unit(&self, x: i64) -> bool {
        x.rem_euclid(self.p() as i64) != 0
    }

    /// Discrete-log coordinates of `x mod q`.
    pub fn unit_decompose(&self, x: i64) -> Result<UnitLog> {
        let q = self.q();
        let xr = x.rem_euclid(q as i64) as usize;
        self.decompose_reduced(xr).ok_or(Error::NonUnit { x, q })
    }

    #[inline]
    pub(crate) fn decompose_reduced(&self, x: usize) -> Option<UnitLog> {
        let raw = self.dlog[x];
        if raw == NON_UNIT {
            return None;
        }
        Some(UnitLog {
            sign: (raw >> 31) as u8,
            index: (raw & !SIGN_BIT) as u64,
        })
    }

    /// `r mod p` with `a^(p-1) = 1 + r p`.
    pub fn r(&self) -> Result<u64> {
        self.r
            .ok_or_else(|| Error::invalid("r is defined for odd p only"))
    }

    /// `R_j mod p^m`, where `a^phi(p^j) = 1 + R_j p^j` (odd `p`, `j >= 1`) or
    /// `5^(2^(j-2)) = 1 + R_j 2^j` (`p = 2`, `j >= 2`).
    pub fn r_j(&self, j: u32) -> Result<u64> {
        let min_j = if self.modulus.is_odd() { 1 } else { 2 };
        if j < min_j {
            return Err(Error::invalid(format!("R_j needs j >= {min_j}, got {j}")));
        }
        if let Some(slot) = self.rj_cache.get(j as usize) {
            if let Some(&v) = slot.get() {
                return Ok(v);
            }
            let v = self.compute_r_j(j)?;
            return Ok(*slot.get_or_init(|| v));
        }
        self.compute_r_j(j)
    }

    fn compute_r_j(&self, j: u32) -> Result<u64> {
        let p = self.p();
        let m = self.m();
        let pj = p
            .checked_pow(j)
            .ok_or_else(|| Error::invalid(format!("j = {j} is too large")))?;
        let big = p
            .checked_pow(j + m)
            .filter(|&b| b < (1 << 63))
            .ok_or_else(|| Error::invalid(format!("j = {j} is too large for modulus")))?;
        let power = if self.modulus.is_odd() {
            pow_mod(self.generator, pj / p * (p - 1), big)
        } else {
            pow_mod(5, 1u64 << (j - 2), big)
        };
        // power = 1 mod p^j, so the subtraction and division are exact.
        debug_assert_eq!(power % pj, 1 % pj);
        Ok(((power + big - 1) % big) / pj % self.q())
    }

    /// The context for `p^j`, `1 <= j <= m`, sharing the same generator.
    pub fn sub_context(self: &Arc<Self>, j: u32) -> Result<Arc<UnitGroupContext>> {
        if j == self.m() {
            return Ok(Arc::clone(self));
        }
        if j == 0 || j > self.m() {
            return Err(Error::invalid(format!(
                "sub-modulus exponent {j} out of range 1..={}",
                self.m()
            )));
        }
        let slot = &self.sub_contexts[j as usize];
        if let Some(ctx) = slot.get() {
            return Ok(Arc::clone(ctx));
        }
        let ctx = UnitGroupContext::new(self.p(), j)?;
        Ok(Arc::clone(slot.get_or_init(|| ctx)))
    }
}

pub fn compute_r(ctx: &UnitGroupContext) -> Result<u64> {
    ctx.r()
}

pub fn compute_rj(ctx: &UnitGroupContext, j: u32) -> Result<u64> {
    ctx.r_j(j)
}

pub fn unit_decompose(ctx: &UnitGroupContext, x: i64) -> Result<UnitLog> {
    ctx.unit_decompose(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots() {
        assert_eq!(find_primitive_root(3), Ok(2));
        assert_eq!(find_primitive_root(5), Ok(2));
        assert_eq!(find_primitive_root(7), Ok(3));
        // 10 is a primitive root mod 487 but not mod 487^2.
        assert_ne!(find_primitive_root(487), Ok(10));
        assert!(find_primitive_root(2).is_err());
        assert!(find_primitive_root(9).is_err());
    }

    // Exhaustive order computation mod p^2.
    fn order_mod(a: u64, n: u64) -> u64 {
        let mut x = a % n;
        let mut k = 1;
        while x != 1 {
            x = x * a % n;
            k += 1;
        }
        k
    }

    #[test]
    fn primitive_root_is_smallest_generator_mod_p_squared() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
            let a = find_primitive_root(p).unwrap();
            let full = p * (p - 1);
            assert_eq!(order_mod(a, p * p), full);
            for b in 2..a {
                if b % p != 0 {
                    assert_ne!(order_mod(b, p * p), full, "p={p} b={b}");
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let ctx = UnitGroupContext::new(3, 2).unwrap();
        assert_eq!(ctx.unit_decompose(5).unwrap(), UnitLog { sign: 0, index: 5 });
        assert_eq!(ctx.unit_decompose(1).unwrap(), UnitLog { sign: 0, index: 0 });
        assert_eq!(ctx.unit_decompose(6), Err(Error::NonUnit { x: 6, q: 9 }));

        let ctx = UnitGroupContext::new(2, 4).unwrap();
        // 7 = -9 = -(5^2) mod 16
        assert_eq!(ctx.unit_decompose(7).unwrap(), UnitLog { sign: 1, index: 2 });
        assert_eq!(ctx.unit_decompose(11).unwrap(), UnitLog { sign: 1, index: 1 });
        assert!(ctx.unit_decompose(4).is_err());

        let ctx = UnitGroupContext::new(2, 2).unwrap();
        assert_eq!(ctx.unit_decompose(3).unwrap(), UnitLog { sign: 1, index: 0 });
        let ctx = UnitGroupContext::new(2, 1).unwrap();
        assert_eq!(ctx.unit_decompose(1).unwrap(), UnitLog { sign: 0, index: 0 });
    }

    #[test]
    fn dlog_tables_are_bijections() {
        for p in [3u64, 5, 7, 11, 13] {
            for m in 1..=5u32 {
                let Ok(modulus) = PrimePowerModulus::new(p, m) else { continue };
                if modulus.q() > 20_000 {
                    continue;
                }
                let ctx = UnitGroupContext::for_modulus(modulus).unwrap();
                let q = modulus.q();
                let a = ctx.generator();
                assert_eq!(pow_mod(a, modulus.phi(), q), 1);
                let mut seen = vec![false; modulus.phi() as usize];
                for x in 0..q {
                    match ctx.unit_decompose(x as i64) {
                        Ok(log) => {
                            assert_eq!(pow_mod(a, log.index, q), x);
                            assert!(!seen[log.index as usize]);
                            seen[log.index as usize] = true;
                        }
                        Err(_) => assert_eq!(x % p, 0),
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    #[test]
    fn two_adic_decomposition_is_unique() {
        for m in 3..=10u32 {
            let ctx = UnitGroupContext::new(2, m).unwrap();
            let q = ctx.q();
            let mut seen = std::collections::HashSet::new();
            for x in (1..q).step_by(2) {
                let log = ctx.unit_decompose(x as i64).unwrap();
                assert!(log.index < 1 << (m - 2));
                let mut y = pow_mod(5, log.index, q);
                if log.sign == 1 {
                    y = q - y;
                }
                assert_eq!(y, x);
                assert!(seen.insert((log.sign, log.index)));
            }
        }
    }

    #[test]
    fn r_examples() {
        assert_eq!(UnitGroupContext::new(3, 2).unwrap().r(), Ok(1));
        assert_eq!(UnitGroupContext::new(5, 1).unwrap().r(), Ok(3));
        assert_eq!(UnitGroupContext::new(7, 3).unwrap().r(), Ok(6));
        assert!(UnitGroupContext::new(2, 3).unwrap().r().is_err());
    }

    #[test]
    fn r_j_examples() {
        assert_eq!(UnitGroupContext::new(3, 2).unwrap().r_j(1), Ok(1));
        let ctx = UnitGroupContext::new(2, 4).unwrap();
        assert_eq!(ctx.r_j(2), Ok(1));
        assert_eq!(ctx.r_j(3), Ok(3));
        assert!(ctx.r_j(1).is_err());
        assert!(UnitGroupContext::new(3, 2).unwrap().r_j(0).is_err());
    }

    #[test]
    fn r_j_defining_relation() {
        // Check a^phi(p^j) = 1 + R_j p^j mod p^(j+m) directly.
        for (p, m) in [(3u64, 4u32), (5, 3), (7, 2), (2, 6), (2, 9)] {
            let ctx = UnitGroupContext::new(p, m).unwrap();
            let lo = if p == 2 { 2 } else { 1 };
            for j in lo..=m + 2 {
                let rj = ctx.r_j(j).unwrap();
                let big = p.pow(j + m);
                let lhs = if p == 2 {
                    pow_mod(5, 1 << (j - 2), big)
                } else {
                    pow_mod(ctx.generator(), p.pow(j - 1) * (p - 1), big)
                };
                assert_eq!(lhs, (1 + rj * p.pow(j)) % big, "p={p} m={m} j={j}");
            }
        }
    }

    #[test]
    fn r_j_congruences_odd() {
        for (p, m) in [(3u64, 7u32), (5, 5), (7, 4), (11, 3), (13, 3)] {
            let ctx = UnitGroupContext::new(p, m).unwrap();
            assert_ne!(ctx.r().unwrap() % p, 0);
            for j in 1..=m {
                for i in 1..=j {
                    let pi = p.pow(i);
                    assert_eq!(ctx.r_j(j).unwrap() % pi, ctx.r_j(i).unwrap() % pi);
                }
            }
        }
    }

    #[test]
    fn r_j_congruences_two() {
        for m in 3..=14u32 {
            let ctx = UnitGroupContext::new(2, m).unwrap();
            for i in 2..m {
                let ri = ctx.r_j(i).unwrap();
                let next = ctx.r_j(i + 1).unwrap();
                assert_eq!(ri % 2, 1);
                let modulus = 1u64 << (i + 2).min(m);
                assert_eq!(next % modulus, (ri + (1 << (i - 1))) % modulus, "m={m} i={i}");
            }
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(3, 2), Ok(Phase::ONE));
        assert_eq!(epsilon(3, 3), Ok(Phase::QUARTER));
        assert_eq!(epsilon(5, 1), Ok(Phase::ONE));
        assert!(epsilon(2, 3).is_err());
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimePowerModulus::new(4, 2).is_err());
        assert!(PrimePowerModulus::new(3, 0).is_err());
        assert!(PrimePowerModulus::new(2, 70).is_err());
        let md = PrimePowerModulus::new(5, 3).unwrap();
        assert_eq!((md.q(), md.phi()), (125, 100));
        assert!(matches!(
            UnitGroupContext::new(2, 40),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
