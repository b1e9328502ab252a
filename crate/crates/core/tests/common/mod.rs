//! Reference evaluator for the integration tests.
//!
//! Everything here is recomputed from first principles: its own generator
//! search, its own discrete logs, plain complex summation. Characters are
//! named the same way as in the library, by (sign bit, exponent).

#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;

pub fn e(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * turns)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn order(a: u64, n: u64) -> u64 {
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = x * a % n;
        k += 1;
    }
    k
}

/// Smallest primitive root mod `p^2`, odd `p`.
pub fn smallest_root_mod_p2(p: u64) -> u64 {
    let n = p * p;
    (2..n)
        .find(|&a| gcd(a, p) == 1 && order(a, n) == p * (p - 1))
        .expect("cyclic")
}

pub struct Oracle {
    pub p: u64,
    pub m: u32,
    pub q: u64,
    pub phi: u64,
    /// Order of the cyclic factor the exponent lives on.
    pub cmod: u64,
    pub generator: u64,
    /// `x -> (s, t)` with `x = (-1)^s g^t`, `None` for non-units.
    logs: Vec<Option<(u64, u64)>>,
}

impl Oracle {
    pub fn new(p: u64, m: u32) -> Oracle {
        let q = p.pow(m);
        let phi = q / p * (p - 1);
        let mut logs = vec![None; q as usize];
        let (generator, cmod) = if p == 2 {
            match m {
                1 => logs[1] = Some((0, 0)),
                2 => {
                    logs[1] = Some((0, 0));
                    logs[3] = Some((1, 0));
                }
                _ => {
                    let mut x = 1;
                    for t in 0..q / 4 {
                        logs[x as usize] = Some((0, t));
                        logs[(q - x) as usize] = Some((1, t));
                        x = x * 5 % q;
                    }
                }
            }
            (5, if m >= 3 { q / 4 } else { 1 })
        } else {
            let a = smallest_root_mod_p2(p);
            let mut x = 1;
            for t in 0..phi {
                assert!(logs[x as usize].is_none(), "generator repeats");
                logs[x as usize] = Some((0, t));
                x = x * a % q;
            }
            (a, phi)
        };
        Oracle {
            p,
            m,
            q,
            phi,
            cmod,
            generator,
            logs,
        }
    }

    pub fn log(&self, x: i64) -> Option<(u64, u64)> {
        self.logs[x.rem_euclid(self.q as i64) as usize]
    }

    /// `chi_{(e, c)}(x)`, zero off the units.
    pub fn chi(&self, e_bit: u64, c: u64, x: i64) -> Complex64 {
        match self.log(x) {
            None => Complex64::new(0.0, 0.0),
            Some((s, t)) => {
                let sign = if (e_bit * s) % 2 == 1 { -1.0 } else { 1.0 };
                e((c * t % self.cmod) as f64 / self.cmod as f64) * sign
            }
        }
    }

    pub fn gauss(&self, e_bit: u64, c: u64) -> Complex64 {
        (0..self.q as i64)
            .map(|x| self.chi(e_bit, c, x) * e(x as f64 / self.q as f64))
            .sum()
    }

    /// `J_B` by plain nested summation.
    pub fn jacobi(&self, chars: &[(u64, u64)], b: i64) -> Complex64 {
        let q = self.q as usize;
        let tables: Vec<Vec<Complex64>> = chars
            .iter()
            .map(|&(e_bit, c)| (0..q as i64).map(|x| self.chi(e_bit, c, x)).collect())
            .collect();
        fn go(tables: &[Vec<Complex64>], rest: usize, q: usize) -> Complex64 {
            if tables.len() == 1 {
                return tables[0][rest];
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..q {
                let v = tables[0][x];
                if v.norm_sqr() == 0.0 {
                    continue;
                }
                acc += v * go(&tables[1..], (rest + q - x) % q, q);
            }
            acc
        }
        go(&tables, b.rem_euclid(self.q as i64) as usize, q)
    }

    fn is_one(z: Complex64) -> bool {
        (z - 1.0).norm() < 1e-9
    }

    /// Conductor exponent from the cyclic filtration: units `= 1 mod p^f`
    /// are generated by `1 + p^f` (by `1 + 2^f`, `f >= 2`, when `p = 2`).
    pub fn conductor_exponent(&self, e_bit: u64, c: u64) -> u32 {
        let principal = Self::is_one(self.chi(e_bit, c, self.generator as i64))
            && Self::is_one(self.chi(e_bit, c, -1));
        if principal {
            return 0;
        }
        let start = if self.p == 2 { 2 } else { 1 };
        (start..=self.m)
            .find(|&f| f == self.m || Self::is_one(self.chi(e_bit, c, 1 + self.p.pow(f) as i64)))
            .unwrap_or(self.m)
    }

    pub fn is_primitive(&self, e_bit: u64, c: u64) -> bool {
        self.conductor_exponent(e_bit, c) == self.m
    }

    /// Pointwise product, `(e_1 + e_2, c_1 + c_2)`.
    pub fn product(&self, chars: &[(u64, u64)]) -> (u64, u64) {
        chars
            .iter()
            .fold((0, 0), |(e, c), &(e2, c2)| ((e + e2) % 2, (c + c2) % self.cmod))
    }

    /// Smallest `f` with `chi` trivial on units `= 1 mod p^f`.
    pub fn conductor_exponent_brute(&self, e_bit: u64, c: u64) -> u32 {
        (0..=self.m)
            .find(|&f| {
                let pf = self.p.pow(f) as i64;
                (0..self.q as i64)
                    .filter(|x| x.rem_euclid(pf) == 1 % pf && self.log(*x).is_some())
                    .all(|x| (self.chi(e_bit, c, x) - 1.0).norm() < 1e-9)
            })
            .expect("trivial mod p^m")
    }

    /// `(x / p)` by Euler's criterion, odd `p`.
    pub fn legendre(&self, x: i64) -> i64 {
        let p = self.p as i64;
        let x = x.rem_euclid(p);
        if x == 0 {
            return 0;
        }
        let mut acc = 1i64;
        for _ in 0..(p - 1) / 2 {
            acc = acc * x % p;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    }

    /// `r = (a^(p-1) - 1) / p mod p` for the oracle's generator.
    pub fn r(&self) -> u64 {
        let p2 = self.p * self.p;
        let mut x = 1;
        for _ in 0..self.p - 1 {
            x = x * self.generator % p2;
        }
        (x - 1) / self.p % self.p
    }

    /// `epsilon_{p^j}`: `i` when `p^j = 3 mod 4`, else 1.
    pub fn epsilon(&self, j: u32) -> Complex64 {
        if self.p.pow(j) % 4 == 3 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    /// All characters as (sign bit, exponent).
    pub fn characters(&self) -> Vec<(u64, u64)> {
        let signs = if self.p == 2 && self.m >= 2 { 2 } else { 1 };
        (0..signs)
            .flat_map(|s| (0..self.cmod).map(move |c| (s, c)))
            .collect()
    }
}
