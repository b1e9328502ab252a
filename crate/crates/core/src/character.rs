//! Multiplicative characters modulo `p^m`, labelled by their exponent on the
//! canonical generators.
//!
//! For odd `p`, `chi(a) = e(c / phi(p^m))`. For `p = 2` the unit group is
//! `<-1> x <5>` (for `m >= 3`) and a character is the pair `(e, c)` with
//! `chi(-1) = (-1)^e`, `chi(5) = e(c / 2^(m-2))`.

use std::fmt;
use std::sync::Arc;

use crate::arith::valuation;
use crate::error::{Error, Result};
use crate::unit_group::{PrimePowerModulus, UnitGroupContext};
use crate::value::Phase;

#[derive(Clone)]
pub struct Character {
    ctx: Arc<UnitGroupContext>,
    sign: u8,
    exponent: u64,
}

impl Character {
    /// Build the character with exponent `c` (reduced into canonical range)
    /// and, for `p = 2`, sign bit `sign`.
    pub fn new(ctx: &Arc<UnitGroupContext>, c: i64, sign: u8) -> Result<Self> {
        let md = ctx.modulus();
        if sign > 1 {
            return Err(Error::invalid(format!("sign bit must be 0 or 1, got {sign}")));
        }
        if sign == 1 && (md.is_odd() || md.m() == 1) {
            return Err(Error::invalid(format!(
                "sign bit is only meaningful for p = 2, m >= 2 (modulus {})",
                md.q()
            )));
        }
        let exponent = c.rem_euclid(md.exponent_modulus() as i64) as u64;
        Ok(Character {
            ctx: Arc::clone(ctx),
            sign,
            exponent,
        })
    }

    pub fn principal(ctx: &Arc<UnitGroupContext>) -> Self {
        Character {
            ctx: Arc::clone(ctx),
            sign: 0,
            exponent: 0,
        }
    }

    pub fn context(&self) -> &Arc<UnitGroupContext> {
        &self.ctx
    }

    pub fn modulus(&self) -> &PrimePowerModulus {
        self.ctx.modulus()
    }

    /// Canonical exponent in `[0, exponent_modulus)`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn sign(&self) -> u8 {
        self.sign
    }

    /// The exponent as an integer in `[1, exponent_modulus]`, the range the
    /// closed-form evaluations use.
    pub fn representative(&self) -> u64 {
        if self.exponent == 0 {
            self.modulus().exponent_modulus()
        } else {
            self.exponent
        }
    }

    pub fn is_principal(&self) -> bool {
        self.exponent == 0 && self.sign == 0
    }

    /// `chi(-1)` as `+1` or `-1`.
    pub fn parity(&self) -> i8 {
        let md = self.modulus();
        let odd = if md.is_odd() {
            self.exponent % 2 == 1
        } else {
            self.sign == 1
        };
        if odd {
            -1
        } else {
            1
        }
    }

    /// `chi(x)`, or `None` when `p | x`.
    pub fn eval(&self, x: i64) -> Option<Phase> {
        let xr = x.rem_euclid(self.ctx.q() as i64) as usize;
        self.eval_reduced(xr)
    }

    #[inline]
    pub(crate) fn eval_reduced(&self, x: usize) -> Option<Phase> {
        let log = self.ctx.decompose_reduced(x)?;
        let (num, den) = self.phase_index(log.sign, log.index);
        Some(Phase::new(num as i128, den))
    }

    /// Common denominator of all values of characters mod `p^m`.
    pub fn value_denominator(md: &PrimePowerModulus) -> u64 {
        if md.is_odd() {
            md.phi()
        } else {
            md.exponent_modulus().max(2)
        }
    }

    /// Numerator of `chi` at a unit with the given log, over
    /// [`Character::value_denominator`].
    #[inline]
    pub(crate) fn phase_index(&self, sign: u8, index: u64) -> (u64, u64) {
        let md = self.modulus();
        if md.is_odd() {
            let phi = md.phi();
            (((self.exponent as u128 * index as u128) % phi as u128) as u64, phi)
        } else {
            let cm = md.exponent_modulus();
            let den = cm.max(2);
            let cyc = (self.exponent as u128 * index as u128 % cm as u128) as u64 * (den / cm);
            let sgn = (self.sign & sign) as u64 * (den / 2);
            ((cyc + sgn) % den, den)
        }
    }

    pub fn multiply(&self, other: &Character) -> Result<Character> {
        self.check_same_modulus(other)?;
        let cm = self.modulus().exponent_modulus();
        Ok(Character {
            ctx: Arc::clone(&self.ctx),
            sign: self.sign ^ other.sign,
            exponent: (self.exponent + other.exponent) % cm,
        })
    }

    pub fn conj(&self) -> Character {
        let cm = self.modulus().exponent_modulus();
        Character {
            ctx: Arc::clone(&self.ctx),
            sign: self.sign,
            exponent: (cm - self.exponent) % cm,
        }
    }

    pub fn pow(&self, n: i64) -> Character {
        let cm = self.modulus().exponent_modulus();
        Character {
            ctx: Arc::clone(&self.ctx),
            sign: if n.rem_euclid(2) == 1 { self.sign } else { 0 },
            exponent: (self.exponent as i128 * n as i128).rem_euclid(cm as i128) as u64,
        }
    }

    /// The `f` with conductor `p^f`.
    pub fn conductor_exponent(&self) -> u32 {
        let md = self.modulus();
        let m = md.m();
        if md.is_odd() {
            if self.exponent == 0 {
                0
            } else {
                m - valuation(self.exponent, md.p()).min(m)
            }
        } else if m == 1 {
            0
        } else if self.exponent != 0 {
            m - valuation(self.exponent, 2)
        } else if self.sign == 1 {
            2
        } else {
            0
        }
    }

    pub fn conductor(&self) -> u64 {
        self.modulus().p_pow(self.conductor_exponent())
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor_exponent() == self.modulus().m()
    }

    /// The character mod `p^j` that induces this one.
    pub fn reduce_to_modulus(&self, j: u32) -> Result<Character> {
        let md = *self.modulus();
        let f = self.conductor_exponent();
        if j == 0 || j > md.m() || f > j {
            return Err(Error::NotReducible {
                conductor: self.conductor(),
                target: md.p().checked_pow(j).unwrap_or(u64::MAX),
            });
        }
        let ctx = self.ctx.sub_context(j)?;
        let shift = md.p_pow(md.m() - j);
        let (sign, exponent) = if md.is_odd() {
            (0, self.exponent / shift)
        } else if j >= 3 {
            (self.sign, self.exponent / shift)
        } else if j == 2 {
            (self.sign, 0)
        } else {
            (0, 0)
        };
        debug_assert!(md.is_odd() && self.exponent % shift == 0 || !md.is_odd());
        Ok(Character {
            ctx,
            sign,
            exponent,
        })
    }

    fn check_same_modulus(&self, other: &Character) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.modulus().q(),
                right: other.modulus().q(),
            });
        }
        Ok(())
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus()
            && self.sign == other.sign
            && self.exponent == other.exponent
    }
}

impl Eq for Character {}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let md = self.modulus();
        if md.is_odd() {
            write!(f, "chi[mod {}; c={}]", md.q(), self.exponent)
        } else {
            write!(f, "chi[mod {}; e={}, c={}]", md.q(), self.sign, self.exponent)
        }
    }
}

pub fn make_character(ctx: &Arc<UnitGroupContext>, c: i64, sign: u8) -> Result<Character> {
    Character::new(ctx, c, sign)
}

pub fn enumerate_characters(ctx: &Arc<UnitGroupContext>, primitive_only: bool) -> Vec<Character> {
    let md = ctx.modulus();
    let signs: &[u8] = if md.is_odd() || md.m() == 1 { &[0] } else { &[0, 1] };
    let cm = md.exponent_modulus();
    signs
        .iter()
        .flat_map(|&s| (0..cm).map(move |c| (s, c)))
        .map(|(sign, exponent)| Character {
            ctx: Arc::clone(ctx),
            sign,
            exponent,
        })
        .filter(|chi| !primitive_only || chi.is_primitive())
        .collect()
}
