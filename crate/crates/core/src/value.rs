//! Exact values `scale * p^(t/2) * e(s/N)` and the `SumResult` wrapper
//! shared by every evaluation route.

use std::borrow::Cow;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, valuation};
use crate::error::{Error, Result};

/// A root of unity `e^{2 pi i num/den}` stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };
    /// `-1`
    pub const HALF: Phase = Phase { num: 1, den: 2 };
    /// `i`
    pub const QUARTER: Phase = Phase { num: 1, den: 4 };

    pub fn new(num: i128, den: u64) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let n = num.rem_euclid(den as i128) as u64;
        let g = gcd(n, den);
        Phase {
            num: n / g,
            den: den / g,
        }
    }

    /// `omega^k` with `omega = e^{pi i/4}`.
    pub fn eighth(k: i64) -> Phase {
        Phase::new(k as i128, 8)
    }

    /// `+1 -> 1`, `-1 -> e(1/2)`.
    pub fn from_sign(sign: i8) -> Phase {
        debug_assert!(sign == 1 || sign == -1);
        if sign < 0 {
            Phase::HALF
        } else {
            Phase::ONE
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn times(self, k: i64) -> Phase {
        Phase::new(self.num as i128 * k as i128, self.den)
    }

    pub fn to_complex(self) -> Complex64 {
        // Exact for the axis-aligned cases.
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            _ => {
                let theta = std::f64::consts::TAU * self.num as f64 / self.den as f64;
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        let g = gcd(self.den, rhs.den);
        let den = self.den / g * rhs.den;
        let num = self.num as i128 * (rhs.den / g) as i128 + rhs.num as i128 * (self.den / g) as i128;
        Phase::new(num, den)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-(self.num as i128), self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ONE, |a, b| a + b)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}

/// A closed-form character-sum value: zero, or `scale * p^(half_exp/2) * phase`.
///
/// Canonical form keeps `p` out of `scale`, so two equal values always have
/// identical fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactValue {
    p: u64,
    zero: bool,
    half_exp: i64,
    scale: u64,
    phase: Phase,
}

impl ExactValue {
    pub fn zero(p: u64) -> Self {
        ExactValue {
            p,
            zero: true,
            half_exp: 0,
            scale: 0,
            phase: Phase::ONE,
        }
    }

    pub fn one(p: u64) -> Self {
        Self::root_of_unity(p, Phase::ONE)
    }

    pub fn root_of_unity(p: u64, phase: Phase) -> Self {
        ExactValue {
            p,
            zero: false,
            half_exp: 0,
            scale: 1,
            phase,
        }
    }

    /// `p^(half_exp/2) * phase`.
    pub fn power(p: u64, half_exp: i64, phase: Phase) -> Self {
        Self::new(p, half_exp, 1, phase)
    }

    /// A scale of zero yields the zero value.
    pub fn new(p: u64, half_exp: i64, scale: u64, phase: Phase) -> Self {
        if scale == 0 {
            return Self::zero(p);
        }
        let v = valuation(scale, p);
        ExactValue {
            p,
            zero: false,
            half_exp: half_exp + 2 * v as i64,
            scale: scale / p.pow(v),
            phase,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn base(&self) -> u64 {
        self.p
    }

    pub fn half_exp(&self) -> i64 {
        self.half_exp
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn magnitude(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.scale as f64 * (self.p as f64).powf(self.half_exp as f64 / 2.0)
        }
    }

    pub fn rotate(self, phase: Phase) -> Self {
        if self.zero {
            self
        } else {
            ExactValue {
                phase: self.phase + phase,
                ..self
            }
        }
    }

    pub fn conj(self) -> Self {
        ExactValue {
            phase: -self.phase,
            ..self
        }
    }

    pub fn multiply(&self, other: &ExactValue) -> Result<ExactValue> {
        self.check_base(other)?;
        if self.zero || other.zero {
            return Ok(ExactValue::zero(self.p));
        }
        let scale = self
            .scale
            .checked_mul(other.scale)
            .ok_or_else(|| Error::invalid("scale overflow"))?;
        Ok(ExactValue::new(
            self.p,
            self.half_exp + other.half_exp,
            scale,
            self.phase + other.phase,
        ))
    }

    pub fn divide(&self, other: &ExactValue) -> Result<ExactValue> {
        self.check_base(other)?;
        if other.zero {
            return Err(Error::DivisionByZero);
        }
        if self.zero {
            return Ok(*self);
        }
        if self.scale % other.scale != 0 {
            return Err(Error::invalid(format!(
                "scale {} is not divisible by {}",
                self.scale, other.scale
            )));
        }
        Ok(ExactValue::new(
            self.p,
            self.half_exp - other.half_exp,
            self.scale / other.scale,
            self.phase - other.phase,
        ))
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase.to_complex() * self.magnitude()
        }
    }

    fn check_base(&self, other: &ExactValue) -> Result<()> {
        if self.p != other.p {
            return Err(Error::invalid(format!(
                "base mismatch: {} vs {}",
                self.p, other.p
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "0");
        }
        if self.scale != 1 {
            write!(f, "{}*", self.scale)?;
        }
        write!(f, "{}^({}/2)*{}", self.p, self.half_exp, self.phase)
    }
}

pub fn multiply_values(a: &ExactValue, b: &ExactValue) -> Result<ExactValue> {
    a.multiply(b)
}

pub fn divide_values(a: &ExactValue, b: &ExactValue) -> Result<ExactValue> {
    a.divide(b)
}

pub fn to_complex(v: &ExactValue) -> Complex64 {
    v.to_complex()
}

/// Either a closed-form value or a floating-point sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Exact(ExactValue),
    /// `terms` counts the summands that produced `z`.
    Numeric { z: Complex64, terms: u64 },
}

impl Value {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(e) => e.to_complex(),
            Value::Numeric { z, .. } => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&ExactValue> {
        match self {
            Value::Exact(e) => Some(e),
            Value::Numeric { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    fn terms(&self) -> u64 {
        match self {
            Value::Exact(_) => 0,
            Value::Numeric { terms, .. } => *terms,
        }
    }

    pub fn multiply(&self, other: &Value) -> Result<Value> {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(a.multiply(b)?)),
            _ => Ok(Value::Numeric {
                z: self.to_complex() * other.to_complex(),
                terms: self.terms() + other.terms(),
            }),
        }
    }

    pub fn divide(&self, other: &Value) -> Result<Value> {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(a.divide(b)?)),
            _ => {
                if let Value::Exact(b) = other {
                    if b.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                }
                Ok(Value::Numeric {
                    z: self.to_complex() / other.to_complex(),
                    terms: self.terms() + other.terms(),
                })
            }
        }
    }

    pub fn conj(&self) -> Value {
        match self {
            Value::Exact(e) => Value::Exact(e.conj()),
            Value::Numeric { z, terms } => Value::Numeric {
                z: z.conj(),
                terms: *terms,
            },
        }
    }
}

/// Which evaluation route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Brute,
    GaussClosed,
    JacobiClosed,
    GaussQuotient,
    DirectK2,
    TopCase,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::GaussClosed => "gauss-closed",
            Method::JacobiClosed => "jacobi-closed",
            Method::GaussQuotient => "gauss-quotient",
            Method::DirectK2 => "direct-k2",
            Method::TopCase => "top-case",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Some(match s {
            "brute" => Method::Brute,
            "gauss-closed" => Method::GaussClosed,
            "jacobi-closed" => Method::JacobiClosed,
            "gauss-quotient" => Method::GaussQuotient,
            "direct-k2" => Method::DirectK2,
            "top-case" => Method::TopCase,
            _ => return None,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SumResult {
    pub value: Value,
    pub method: Method,
    pub notes: Cow<'static, str>,
}

impl SumResult {
    pub fn exact(value: ExactValue, method: Method, notes: impl Into<Cow<'static, str>>) -> Self {
        SumResult {
            value: Value::Exact(value),
            method,
            notes: notes.into(),
        }
    }

    pub fn numeric(z: Complex64, terms: u64, method: Method, notes: impl Into<Cow<'static, str>>) -> Self {
        SumResult {
            value: Value::Numeric { z, terms },
            method,
            notes: notes.into(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.value.to_complex()
    }

    pub fn as_exact(&self) -> Option<&ExactValue> {
        self.value.as_exact()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.as_exact().is_some_and(|e| e.is_zero())
    }

    pub fn to_record(&self, p: u64) -> SumResultRecord {
        let z = self.to_complex();
        let (zero, half_exp, scale, phase_num, phase_den, terms) = match &self.value {
            Value::Exact(e) => (
                e.is_zero(),
                Some(e.half_exp()),
                Some(e.scale()),
                Some(e.phase().num()),
                Some(e.phase().den()),
                None,
            ),
            Value::Numeric { terms, .. } => (false, None, None, None, None, Some(*terms)),
        };
        SumResultRecord {
            zero,
            p,
            half_exp,
            scale,
            phase_num,
            phase_den,
            re: z.re,
            im: z.im,
            method: self.method.as_str().to_string(),
            terms,
            notes: self.notes.to_string(),
            generator: None,
        }
    }

    pub fn to_json(&self, p: u64) -> String {
        serde_json::to_string(&self.to_record(p)).expect("record serializes")
    }

    /// Parse one JSON object in the `to_json` layout.
    pub fn from_json(s: &str) -> Result<(SumResult, u64)> {
        let rec: SumResultRecord =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("bad result JSON: {e}")))?;
        let p = rec.p;
        Ok((rec.into_result()?, p))
    }
}

const MAX_DECODED_HALF_EXP: u64 = 1 << 32;

/// Wire form of a [`SumResult`], one JSON object per evaluation.
///
/// Exact values fill `half_exp`, `scale`, `phase_num`, `phase_den`; numeric
/// values leave them null and report `terms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumResultRecord {
    pub zero: bool,
    pub p: u64,
    pub half_exp: Option<i64>,
    pub scale: Option<u64>,
    pub phase_num: Option<u64>,
    pub phase_den: Option<u64>,
    pub re: f64,
    pub im: f64,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<u64>,
    #[serde(default)]
    pub notes: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<u64>,
}

impl SumResultRecord {
    pub fn into_result(self) -> Result<SumResult> {
        let method = Method::parse(&self.method)
            .ok_or_else(|| Error::invalid(format!("unknown method {:?}", self.method)))?;
        // Bounds keep primality testing and exponent arithmetic cheap.
        if self.p > u32::MAX as u64 || !is_prime(self.p) {
            return Err(Error::invalid(format!("base {} is not a supported prime", self.p)));
        }
        if self.half_exp.is_some_and(|t| t.unsigned_abs() > MAX_DECODED_HALF_EXP) {
            return Err(Error::invalid("exponent out of range"));
        }
        let value = match (self.half_exp, self.scale, self.phase_num, self.phase_den) {
            (Some(t), Some(scale), Some(num), Some(den)) => {
                if self.zero {
                    Value::Exact(ExactValue::zero(self.p))
                } else {
                    if den == 0 || num >= den || scale == 0 {
                        return Err(Error::invalid("malformed exact value"));
                    }
                    let phase = Phase::new(num as i128, den);
                    if phase.num() != num || phase.den() != den {
                        return Err(Error::invalid("phase fraction is not reduced"));
                    }
                    let v = ExactValue::new(self.p, t, scale, phase);
                    if v.scale() != scale {
                        return Err(Error::invalid("scale is not canonical"));
                    }
                    Value::Exact(v)
                }
            }
            (None, None, None, None) => {
                if !self.re.is_finite() || !self.im.is_finite() {
                    return Err(Error::invalid("non-finite numeric value"));
                }
                Value::Numeric {
                    z: Complex64::new(self.re, self.im),
                    terms: self.terms.unwrap_or(0),
                }
            }
            _ => return Err(Error::invalid("partially specified exact value")),
        };
        Ok(SumResult {
            value,
            method,
            notes: Cow::Owned(self.notes),
        })
    }
}

/// Compare two results: exact pairs by their canonical fields, anything
/// else by `|a - b| <= tol * max(1, |b|)`.
pub fn approx_equal(a: &SumResult, b: &SumResult, tol: f64) -> bool {
    approx_equal_values(&a.value, &b.value, tol)
}

pub fn approx_equal_values(a: &Value, b: &Value, tol: f64) -> bool {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => x == y,
        _ => {
            let (za, zb) = (a.to_complex(), b.to_complex());
            (za - zb).norm() <= tol * zb.norm().max(1.0)
        }
    }
}
