//! Word-sized modular arithmetic helpers.
//!
//! Moduli stay below 2^63; products are formed in `u128`.

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Exponent of `p` in `x`; `x` must be nonzero.
pub fn valuation(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0 && p > 1);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Trial division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The unique `y` in `[1, q)` with `x*y = 1 mod q` (`y = 0` when `q = 1`).
pub fn mod_inverse(x: i64, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let a = reduce(x as i128, q) as i128;
    let (mut old_r, mut r) = (a, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 && q != 1 {
        return Err(Error::NonInvertible { x, q });
    }
    Ok(reduce(old_s, q))
}

/// Jacobi symbol `(num / den)` for odd positive `den`, by quadratic reciprocity.
pub fn jacobi_symbol(num: i64, den: i64) -> Result<i8> {
    if den <= 0 || den % 2 == 0 {
        return Err(Error::invalid(format!(
            "Jacobi symbol needs an odd positive denominator, got {den}"
        )));
    }
    let mut n = den as u64;
    let mut a = reduce(num as i128, n);
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Kronecker-style `(2 / c)` for odd `c`, the only even numerator the
/// character-sum formulas need.
pub fn two_over(c: u64) -> i8 {
    debug_assert!(c % 2 == 1);
    if matches!(c % 8, 1 | 7) {
        1
    } else {
        -1
    }
}
