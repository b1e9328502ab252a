//! Property sweeps: every evaluation route checked against direct summation
//! and against the structural identities that tie the sums together.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{jacobi_symbol, pow_mod};
use crate::character::{enumerate_characters, Character};
use crate::error::{Error, Result};
use crate::gauss::{gauss_brute, gauss_closed, gauss_closed_with_j, minimal_j};
use crate::jacobi::{
    jacobi_brute, jacobi_closed, jacobi_direct_k2, jacobi_eval, jacobi_via_gauss, JacobiMethod,
    JacobiQuery,
};
use crate::options::EvalOptions;
use crate::parse::format_tuple;
use crate::unit_group::{epsilon, UnitGroupContext};
use crate::value::{ExactValue, Phase, SumResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    GaussOracle,
    GaussMagnitude,
    JIndependence,
    PathAgreement,
    ZeroClassification,
    Translation,
    MagnitudeLaw,
    Induction,
    PowerCharacter,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::GaussOracle,
        Suite::GaussMagnitude,
        Suite::JIndependence,
        Suite::PathAgreement,
        Suite::ZeroClassification,
        Suite::Translation,
        Suite::MagnitudeLaw,
        Suite::Induction,
        Suite::PowerCharacter,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::GaussOracle => "gauss-oracle",
            Suite::GaussMagnitude => "gauss-magnitude",
            Suite::JIndependence => "j-independence",
            Suite::PathAgreement => "path-agreement",
            Suite::ZeroClassification => "zero-classification",
            Suite::Translation => "translation",
            Suite::MagnitudeLaw => "magnitude-law",
            Suite::Induction => "induction",
            Suite::PowerCharacter => "power-character",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BPolicy {
    /// `B = p^n` for every `0 <= n <= m`.
    AllPowers,
    /// The powers of `p` plus this many random `B` per tuple.
    Sample(usize),
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    pub m_range: (u32, u32),
    /// Moduli above this are left out of the Jacobi suites.
    pub max_modulus: u64,
    /// Bound for the Gauss suites, which are much cheaper.
    pub max_gauss_modulus: u64,
    pub k_range: (usize, usize),
    pub b_policy: BPolicy,
    /// Character tuples per (modulus, k) beyond which tuples are sampled.
    pub sample_cap: usize,
    pub tolerance: f64,
    pub jobs: usize,
    pub term_guard: u64,
    pub seed: u64,
    pub suites: Vec<Suite>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            primes: vec![2, 3, 5, 7],
            m_range: (1, 7),
            max_modulus: 128,
            max_gauss_modulus: 2048,
            k_range: (2, 3),
            b_policy: BPolicy::AllPowers,
            sample_cap: 200,
            tolerance: 1e-6,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            term_guard: EvalOptions::default().jacobi_term_guard,
            seed: 0,
            suites: Suite::ALL.to_vec(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::invalid("prime list is empty"));
        }
        if let Some(p) = self.primes.iter().find(|&&p| !crate::arith::is_prime(p)) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let (lo, hi) = self.m_range;
        if lo == 0 || lo > hi {
            return Err(Error::invalid(format!("bad m range {lo}..={hi}")));
        }
        let (klo, khi) = self.k_range;
        if klo < 2 || klo > khi {
            return Err(Error::invalid(format!("bad k range {klo}..={khi} (k >= 2)")));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.sample_cap == 0 || self.jobs == 0 || self.term_guard == 0 {
            return Err(Error::invalid("sample cap, jobs and term guard must be positive"));
        }
        if matches!(self.b_policy, BPolicy::Sample(0)) {
            return Err(Error::invalid("B sample count must be positive"));
        }
        Ok(())
    }

    fn opts(&self) -> EvalOptions {
        EvalOptions {
            gauss_term_guard: self.term_guard,
            jacobi_term_guard: self.term_guard,
        }
    }

    fn runs(&self, s: Suite) -> bool {
        self.suites.contains(&s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedRegime,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedRegime => "skipped-regime",
        }
    }
}

/// One comparison between two evaluations of the same quantity.
#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyRecord {
    pub p: u64,
    pub m: u32,
    pub k: usize,
    pub n: u32,
    #[serde(rename = "B")]
    pub b: u64,
    pub c_tuple: String,
    pub e_tuple: String,
    pub method_a: String,
    pub method_b: String,
    pub re_a: f64,
    pub im_a: f64,
    pub re_b: f64,
    pub im_b: f64,
    /// `|a - b|` relative to the theoretical magnitude of the sum.
    pub deviation: f64,
    pub status: Status,
    #[serde(skip)]
    pub suite: Suite,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn total(&self) -> usize {
        self.pass + self.fail + self.skipped
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} checks: {} pass, {} fail, {} skipped",
            self.total(),
            self.pass,
            self.fail,
            self.skipped
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub records: Vec<DiscrepancyRecord>,
}

impl SweepReport {
    pub fn summary(&self) -> Summary {
        summarize(self.records.iter())
    }

    pub fn suite_summary(&self, suite: Suite) -> Summary {
        summarize(self.records.iter().filter(|r| r.suite == suite))
    }

    pub fn failures(&self) -> impl Iterator<Item = &DiscrepancyRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }
}

fn summarize<'a>(records: impl Iterator<Item = &'a DiscrepancyRecord>) -> Summary {
    let mut s = Summary::default();
    for r in records {
        match r.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::SkippedRegime => s.skipped += 1,
        }
    }
    s
}

/// Query coordinates shared by all records of one task.
#[derive(Clone)]
struct Descriptor {
    p: u64,
    m: u32,
    k: usize,
    n: u32,
    b: u64,
    c_tuple: String,
    e_tuple: String,
    scale: f64,
    suite: Suite,
}

impl Descriptor {
    fn gauss(chi: &Character, suite: Suite) -> Self {
        let md = chi.modulus();
        Descriptor {
            p: md.p(),
            m: md.m(),
            k: 1,
            n: 0,
            b: 1,
            c_tuple: chi.exponent().to_string(),
            e_tuple: chi.sign().to_string(),
            scale: (md.q() as f64).sqrt(),
            suite,
        }
    }

    fn jacobi(query: &JacobiQuery, suite: Suite) -> Self {
        let md = query.modulus();
        let (m, n, k) = (md.m(), query.n(), query.k());
        Descriptor {
            p: md.p(),
            m,
            k,
            n,
            b: query.b(),
            c_tuple: format_tuple(query.chars().iter().map(Character::exponent)),
            e_tuple: format_tuple(query.chars().iter().map(Character::sign)),
            scale: (md.p() as f64).powf((m as f64 * (k as f64 - 1.0) + n as f64) / 2.0),
            suite,
        }
    }

    fn record(&self, a: (&str, Complex64), b: (&str, Complex64), deviation: f64, status: Status) -> DiscrepancyRecord {
        DiscrepancyRecord {
            p: self.p,
            m: self.m,
            k: self.k,
            n: self.n,
            b: self.b,
            c_tuple: self.c_tuple.clone(),
            e_tuple: self.e_tuple.clone(),
            method_a: a.0.to_string(),
            method_b: b.0.to_string(),
            re_a: a.1.re,
            im_a: a.1.im,
            re_b: b.1.re,
            im_b: b.1.im,
            deviation,
            status,
            suite: self.suite,
        }
    }

    fn compare(&self, tol: f64, a: (&str, &SumResult), b: (&str, &SumResult)) -> DiscrepancyRecord {
        let (za, zb) = (a.1.to_complex(), b.1.to_complex());
        let deviation = (za - zb).norm() / self.scale;
        let exact_mismatch = matches!((a.1.as_exact(), b.1.as_exact()), (Some(x), Some(y)) if x != y);
        let status = if exact_mismatch || !(deviation <= tol) {
            Status::Fail
        } else {
            Status::Pass
        };
        self.record((a.0, za), (b.0, zb), deviation, status)
    }

    fn compare_complex(&self, tol: f64, a: (&str, Complex64), b: (&str, Complex64)) -> DiscrepancyRecord {
        let deviation = (a.1 - b.1).norm() / self.scale;
        let status = if deviation <= tol { Status::Pass } else { Status::Fail };
        self.record(a, b, deviation, status)
    }

    fn skipped(&self, what: &str, why: &Error) -> DiscrepancyRecord {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        self.record((what, nan), (&why.to_string(), nan), f64::NAN, Status::SkippedRegime)
    }

    fn failed(&self, what: &str, why: &Error) -> DiscrepancyRecord {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        self.record((what, nan), (&why.to_string(), nan), f64::NAN, Status::Fail)
    }

    /// Record for a path that may legitimately decline the query.
    fn outcome(&self, label: &str, err: &Error) -> DiscrepancyRecord {
        if err.allows_fallback() || matches!(err, Error::ResourceLimit { .. }) {
            self.skipped(label, err)
        } else {
            self.failed(label, err)
        }
    }
}

type Task = Box<dyn Fn() -> Vec<DiscrepancyRecord> + Send + Sync>;

/// Run every configured suite. Records come back in a deterministic order
/// that does not depend on `jobs`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let mut tasks: Vec<Task> = Vec::new();
    for ctx in contexts(cfg, cfg.max_gauss_modulus.max(cfg.max_modulus))? {
        let q = ctx.modulus().q();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ q.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        if q <= cfg.max_gauss_modulus {
            gauss_tasks(cfg, &ctx, &mut rng, &mut tasks);
        }
        if q <= cfg.max_modulus {
            jacobi_tasks(cfg, &ctx, &mut rng, &mut tasks);
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let records = pool.install(|| tasks.par_iter().flat_map_iter(|t| t()).collect());
    Ok(SweepReport { records })
}

fn contexts(cfg: &SweepConfig, bound: u64) -> Result<Vec<Arc<UnitGroupContext>>> {
    let mut out = Vec::new();
    for &p in &cfg.primes {
        for m in cfg.m_range.0..=cfg.m_range.1 {
            match p.checked_pow(m) {
                Some(q) if q <= bound => out.push(UnitGroupContext::new(p, m)?),
                _ => break,
            }
        }
    }
    Ok(out)
}

fn sample<T: Clone>(items: &[T], cap: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    if items.len() <= cap {
        items.to_vec()
    } else {
        items.choose_multiple(rng, cap).cloned().collect()
    }
}

/// All k-tuples of `chars` when there are at most `cap`, otherwise `cap`
/// uniformly random tuples.
fn tuples(chars: &[Character], k: usize, cap: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Character>> {
    let total = (chars.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total <= cap as u128 {
        let mut out = Vec::with_capacity(total as usize);
        let mut idx = vec![0usize; k];
        loop {
            out.push(idx.iter().map(|&i| chars[i].clone()).collect());
            let mut d = 0;
            while d < k {
                idx[d] += 1;
                if idx[d] < chars.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == k {
                return out;
            }
        }
    }
    (0..cap)
        .map(|_| (0..k).map(|_| chars[rng.gen_range(0..chars.len())].clone()).collect())
        .collect()
}

fn gauss_tasks(cfg: &SweepConfig, ctx: &Arc<UnitGroupContext>, rng: &mut ChaCha8Rng, tasks: &mut Vec<Task>) {
    let md = *ctx.modulus();
    let all = enumerate_characters(ctx, false);
    let chars = sample(&all, cfg.sample_cap.max(500), rng);
    let (tol, opts) = (cfg.tolerance, cfg.opts());
    for chi in chars {
        let chi = Arc::new(chi);
        if cfg.runs(Suite::GaussOracle) && md.m() >= 2 {
            let chi = Arc::clone(&chi);
            tasks.push(Box::new(move || {
                let d = Descriptor::gauss(&chi, Suite::GaussOracle);
                let closed = match gauss_closed(&chi) {
                    Ok(r) => r,
                    Err(e) => return vec![d.failed("gauss-closed", &e)],
                };
                let mut out = Vec::new();
                if !chi.is_primitive() && !closed.is_exact_zero() {
                    out.push(d.record(
                        ("gauss-closed", closed.to_complex()),
                        ("exact-zero", Complex64::new(0.0, 0.0)),
                        f64::NAN,
                        Status::Fail,
                    ));
                }
                match gauss_brute(&chi, &opts) {
                    Ok(b) => out.push(d.compare(tol, ("gauss-closed", &closed), ("brute", &b))),
                    Err(e) => out.push(d.outcome("brute", &e)),
                }
                out
            }));
        }
        if cfg.runs(Suite::GaussMagnitude) {
            let chi = Arc::clone(&chi);
            tasks.push(Box::new(move || {
                let d = Descriptor::gauss(&chi, Suite::GaussMagnitude);
                let expected = if chi.is_primitive() {
                    d.scale
                } else if md.m() == 1 {
                    1.0
                } else {
                    0.0
                };
                match gauss_brute(&chi, &opts) {
                    Ok(b) => vec![d.compare_complex(
                        tol,
                        ("brute-magnitude", Complex64::new(b.to_complex().norm(), 0.0)),
                        ("magnitude-law", Complex64::new(expected, 0.0)),
                    )],
                    Err(e) => vec![d.outcome("brute", &e)],
                }
            }));
        }
        let j0 = minimal_j(md.p(), md.m());
        if cfg.runs(Suite::JIndependence) && md.m() >= 2 && j0 < md.m() && chi.is_primitive() {
            let chi = Arc::clone(&chi);
            tasks.push(Box::new(move || {
                let d = Descriptor::gauss(&chi, Suite::JIndependence);
                let base = match gauss_closed_with_j(&chi, j0) {
                    Ok(v) => SumResult::exact(v, crate::value::Method::GaussClosed, ""),
                    Err(e) => return vec![d.failed("gauss-closed", &e)],
                };
                let label0 = format!("gauss-closed-j{j0}");
                (j0 + 1..=md.m())
                    .map(|j| match gauss_closed_with_j(&chi, j) {
                        Ok(v) => d.compare(
                            tol,
                            (&label0, &base),
                            (&format!("gauss-closed-j{j}"), &SumResult::exact(v, base.method, "")),
                        ),
                        Err(e) => d.failed(&format!("gauss-closed-j{j}"), &e),
                    })
                    .collect()
            }));
        }
    }
}

fn powers_of_p(md: &crate::unit_group::PrimePowerModulus) -> Vec<u64> {
    (0..=md.m()).map(|n| md.p_pow(n) % md.q()).collect()
}

fn jacobi_tasks(cfg: &SweepConfig, ctx: &Arc<UnitGroupContext>, rng: &mut ChaCha8Rng, tasks: &mut Vec<Task>) {
    let md = *ctx.modulus();
    let q = md.q();
    let chars = enumerate_characters(ctx, false);
    let (tol, opts) = (cfg.tolerance, cfg.opts());

    for k in cfg.k_range.0..=cfg.k_range.1 {
        let runs_paths = cfg.runs(Suite::PathAgreement) || cfg.runs(Suite::ZeroClassification);
        if runs_paths {
            for tuple in tuples(&chars, k, cfg.sample_cap, rng) {
                let mut bs = powers_of_p(&md);
                if let BPolicy::Sample(s) = cfg.b_policy {
                    bs.extend((0..s).map(|_| rng.gen_range(0..q)));
                }
                let paths = cfg.runs(Suite::PathAgreement);
                let zeros = cfg.runs(Suite::ZeroClassification);
                tasks.push(Box::new(move || {
                    bs.iter()
                        .flat_map(|&b| {
                            let query = JacobiQuery::new(tuple.clone(), b as i64).expect("same modulus");
                            path_records(&query, &opts, tol, paths, zeros)
                        })
                        .collect()
                }));
            }
        }

        if cfg.runs(Suite::MagnitudeLaw) && md.m() >= 2 {
            let tuples = tuples(&chars, k, cfg.sample_cap, rng);
            for tuple in tuples.into_iter().filter(|t| t.iter().any(Character::is_primitive)) {
                tasks.push(Box::new(move || {
                    let query = JacobiQuery::new(tuple.clone(), md.p_pow(md.m() - 1) as i64)
                        .expect("same modulus");
                    vec![magnitude_record(&query, &opts, tol)]
                }));
            }
        }
    }

    if cfg.runs(Suite::Translation) && q <= 81 {
        for pair in tuples(&chars, 2, cfg.sample_cap, rng) {
            tasks.push(Box::new(move || translation_records(&pair, &opts, tol)));
        }
    }

    if cfg.runs(Suite::Induction) && md.is_odd() && md.m() >= 2 && cfg.k_range.1 >= 3 {
        let prim: Vec<Character> = chars.iter().filter(|c| c.is_primitive()).cloned().collect();
        let pairs: Vec<Vec<Character>> = tuples(&prim, 2, usize::MAX, rng)
            .into_iter()
            .filter(|t| t[0].multiply(&t[1]).is_ok_and(|c| c.is_primitive()))
            .collect();
        for pair in sample(&pairs, cfg.sample_cap, rng) {
            let third = chars[rng.gen_range(0..chars.len())].clone();
            let n = rng.gen_range(0..md.m());
            tasks.push(Box::new(move || vec![induction_record(&pair, &third, n, &opts, tol)]));
        }
    }

    if cfg.runs(Suite::PowerCharacter) && md.is_odd() && md.m() % 2 == 0 {
        let prim: Vec<Character> = chars.iter().filter(|c| c.is_primitive()).cloned().collect();
        let p = md.p();
        for k in cfg.k_range.0..=cfg.k_range.1.min(3) {
            for _ in 0..cfg.sample_cap {
                let chi = prim[rng.gen_range(0..prim.len())].clone();
                let ns: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=3 * p)).collect();
                tasks.push(Box::new(move || power_record(&chi, &ns, tol).into_iter().collect()));
            }
        }
    }
}

/// What the vanishing criteria say about `J`, when they say anything.
pub fn predicted_zero(query: &JacobiQuery) -> Option<bool> {
    let md = query.modulus();
    let (m, n) = (md.m(), query.n());
    let product = query.product();
    if n == m {
        return (query.k() == 2).then(|| !product.is_principal());
    }
    // Mod p the principal character does not annihilate the sum.
    if !query.any_primitive() || m < 2 {
        return None;
    }
    let ok = query.all_primitive()
        && if m >= n + 2 {
            product.conductor_exponent() == m - n
        } else {
            product.conductor_exponent() <= 1
        };
    Some(!ok)
}

fn path_records(query: &JacobiQuery, opts: &EvalOptions, tol: f64, paths: bool, zeros: bool) -> Vec<DiscrepancyRecord> {
    let d = Descriptor::jacobi(query, Suite::PathAgreement);
    let md = query.modulus();
    let brute = match jacobi_brute(query, opts) {
        Ok(b) => b,
        Err(e) => return vec![d.outcome("brute", &e)],
    };
    let mut out = Vec::new();
    if paths {
        let mut exact: Vec<(&str, SumResult)> = Vec::new();
        let mut push = |label: &'static str, r: Result<SumResult>, out: &mut Vec<DiscrepancyRecord>| match r {
            Ok(r) => {
                out.push(d.compare(tol, ("brute", &brute), (label, &r)));
                if r.as_exact().is_some() {
                    exact.push((label, r));
                }
            }
            Err(e) => out.push(d.outcome(label, &e)),
        };
        let (m, n) = (md.m(), query.n());
        if m >= n + 2 {
            push("closed", jacobi_closed(query), &mut out);
        }
        if (m > n && query.any_primitive()) || n == m {
            push("quotient", jacobi_via_gauss(query, opts), &mut out);
        }
        if md.is_odd() && query.k() == 2 && m >= n + 2 && query.any_primitive() {
            push("direct", jacobi_direct_k2(query), &mut out);
        }
        push("auto", jacobi_eval(query, JacobiMethod::Auto, opts), &mut out);
        for i in 0..exact.len() {
            for j in i + 1..exact.len() {
                out.push(d.compare(tol, (exact[i].0, &exact[i].1), (exact[j].0, &exact[j].1)));
            }
        }
    }
    if zeros {
        if let Some(zero) = predicted_zero(query) {
            let d = Descriptor { suite: Suite::ZeroClassification, ..d.clone() };
            let z = brute.to_complex();
            let brute_zero = z.norm() <= 1e-9 * d.scale.max(1.0);
            let status = if brute_zero == zero { Status::Pass } else { Status::Fail };
            let label = if zero { "predicted-zero" } else { "predicted-nonzero" };
            out.push(d.record(
                ("brute", z),
                (label, Complex64::new(0.0, 0.0)),
                if brute_zero == zero { 0.0 } else { 1.0 },
                status,
            ));
        }
    }
    out
}

/// `m = n + 1 >= 2`, some character primitive: zero unless every character is
/// primitive and the product is a mod `p` character, then `|J|` is `p^(mk/2 - 1)` or `p^((mk - 1)/2)`.
fn magnitude_record(query: &JacobiQuery, opts: &EvalOptions, tol: f64) -> DiscrepancyRecord {
    let d = Descriptor::jacobi(query, Suite::MagnitudeLaw);
    let md = query.modulus();
    let (p, m, k) = (md.p() as f64, md.m() as f64, query.k() as f64);
    let product = query.product();
    let expected = if !query.all_primitive() || product.conductor_exponent() > 1 {
        0.0
    } else if product.is_principal() {
        p.powf(m * k / 2.0 - 1.0)
    } else {
        p.powf((m * k - 1.0) / 2.0)
    };
    match jacobi_brute(query, opts) {
        Ok(b) => {
            let got = b.to_complex().norm();
            let deviation = (got - expected).abs() / expected.max(1.0);
            let status = if deviation <= tol { Status::Pass } else { Status::Fail };
            d.record(
                ("brute-magnitude", Complex64::new(got, 0.0)),
                ("magnitude-law", Complex64::new(expected, 0.0)),
                deviation,
                status,
            )
        }
        Err(e) => d.outcome("brute", &e),
    }
}

/// `J_B = chi_1...chi_k(B') J_{p^n}` for every `B` in `[1, q)`.
fn translation_records(pair: &[Character], opts: &EvalOptions, tol: f64) -> Vec<DiscrepancyRecord> {
    let md = *pair[0].modulus();
    let product = pair[0].multiply(&pair[1]).expect("same modulus");
    let mut powers: Vec<Option<Complex64>> = vec![None; md.m() as usize + 1];
    let mut out = Vec::new();
    for b in 1..md.q() {
        let query = JacobiQuery::new(pair.to_vec(), b as i64).expect("same modulus");
        let d = Descriptor::jacobi(&query, Suite::Translation);
        let n = query.n();
        let unit = query.b_unit();
        let base = match powers[n as usize] {
            Some(z) => z,
            None => {
                let at_power = query.clone();
                let at_power = JacobiQuery::new(at_power.chars().to_vec(), md.p_pow(n) as i64).expect("same modulus");
                match jacobi_brute(&at_power, opts) {
                    Ok(r) => *powers[n as usize].insert(r.to_complex()),
                    Err(e) => {
                        out.push(d.outcome("brute", &e));
                        continue;
                    }
                }
            }
        };
        let factor = product.eval(unit as i64).expect("B' is a unit").to_complex();
        match jacobi_brute(&query, opts) {
            Ok(r) => out.push(d.compare_complex(tol, ("brute", r.to_complex()), ("translated-brute", factor * base))),
            Err(e) => out.push(d.outcome("brute", &e)),
        }
    }
    out
}

/// `J(chi_1, chi_2, chi_3) = chi_1(c_1) chi_2(c_2) conj(chi_1 chi_2)(c_1 + c_2)
/// p^(m/2) delta_2 J(chi_1 chi_2, chi_3)`, odd `p`, `chi_1 chi_2` primitive.
fn induction_record(pair: &[Character], third: &Character, n: u32, opts: &EvalOptions, tol: f64) -> DiscrepancyRecord {
    let md = *third.modulus();
    let (p, m) = (md.p(), md.m());
    let b = md.p_pow(n) as i64;
    let triple = vec![pair[0].clone(), pair[1].clone(), third.clone()];
    let query = JacobiQuery::new(triple, b).expect("same modulus");
    let d = Descriptor::jacobi(&query, Suite::Induction);
    let prod = pair[0].multiply(&pair[1]).expect("same modulus");
    let inner = JacobiQuery::new(vec![prod.clone(), third.clone()], b).expect("same modulus");
    let (lhs, rhs_inner) = match (jacobi_brute(&query, opts), jacobi_brute(&inner, opts)) {
        (Ok(l), Ok(r)) => (l.to_complex(), r.to_complex()),
        (Err(e), _) | (_, Err(e)) => return d.outcome("brute", &e),
    };
    let (c1, c2) = (pair[0].representative(), pair[1].representative());
    let v = c1 + c2;
    let factor = || -> Result<ExactValue> {
        let r = third.context().r()?;
        let t = (p as i128 * p as i128 - (2 * r as i128 * (v % p) as i128 * (c1 % p) as i128 * (c2 % p) as i128) % p as i128) as i64;
        let leg = jacobi_symbol(t, p as i64)?;
        let mut phase = pair[0].eval(c1 as i64).expect("unit")
            + pair[1].eval(c2 as i64).expect("unit")
            - prod.eval(v as i64).expect("unit")
            + epsilon(p, m)?;
        if m % 2 == 1 && leg < 0 {
            phase = phase + Phase::HALF;
        }
        Ok(ExactValue::power(p, m as i64, phase))
    };
    match factor() {
        Ok(f) => d.compare_complex(tol, ("brute", lhs), ("induction", f.to_complex() * rhs_inner)),
        Err(e) => d.failed("induction", &e),
    }
}

/// `J(chi^n_1, ..., chi^n_k) = p^((k-1)m/2) conj(chi)(u^u) chi(n_1^n_1 ... n_k^n_k)`
/// for even `m` when every power and `chi^u` are primitive.
fn power_record(chi: &Character, ns: &[u64], tol: f64) -> Option<DiscrepancyRecord> {
    let md = *chi.modulus();
    let (p, q, m) = (md.p(), md.q(), md.m());
    let u: u64 = ns.iter().sum();
    if u % p == 0 || ns.iter().any(|n| n % p == 0) {
        return None;
    }
    let chars: Vec<Character> = ns.iter().map(|&n| chi.pow(n as i64)).collect();
    if !chars.iter().all(Character::is_primitive) {
        return None;
    }
    let query = JacobiQuery::new(chars, 1).expect("same modulus");
    let d = Descriptor::jacobi(&query, Suite::PowerCharacter);
    let powers = ns.iter().fold(1u64, |acc, &n| crate::arith::mul_mod(acc, pow_mod(n % q, n, q), q));
    let phase = chi.eval(powers as i64).expect("unit") - chi.eval(pow_mod(u % q, u, q) as i64).expect("unit");
    let formula = SumResult::exact(
        ExactValue::power(p, (ns.len() as i64 - 1) * m as i64, phase),
        crate::value::Method::JacobiClosed,
        "",
    );
    Some(match jacobi_closed(&query) {
        Ok(r) => d.compare(tol, ("closed", &r), ("power-character", &formula)),
        Err(e) => d.failed("closed", &e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            primes: vec![2, 3],
            m_range: (1, 4),
            max_modulus: 27,
            max_gauss_modulus: 81,
            sample_cap: 40,
            jobs: 2,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn small_sweep_passes_and_covers_every_suite() {
        let report = run_sweep(&small()).unwrap();
        let fails: Vec<_> = report.failures().take(5).collect();
        assert!(fails.is_empty(), "{fails:#?}");
        for s in Suite::ALL {
            assert!(report.suite_summary(s).pass > 0, "no passing checks for {s}");
        }
    }

    #[test]
    fn deterministic_regardless_of_jobs() {
        let mut a = small();
        a.seed = 7;
        let mut b = a.clone();
        b.jobs = 1;
        let (ra, rb) = (run_sweep(&a).unwrap(), run_sweep(&b).unwrap());
        assert_eq!(ra.records.len(), rb.records.len());
        for (x, y) in ra.records.iter().zip(&rb.records) {
            assert_eq!((&x.c_tuple, x.b, &x.method_b), (&y.c_tuple, y.b, &y.method_b));
            assert_eq!(x.re_a.to_bits(), y.re_a.to_bits());
        }
    }

    #[test]
    fn tiny_tolerance_reports_failures() {
        let cfg = SweepConfig {
            tolerance: 1e-15,
            suites: vec![Suite::GaussOracle],
            ..small()
        };
        assert!(run_sweep(&cfg).unwrap().summary().fail > 0);
    }

    #[test]
    fn config_validation() {
        let bad = [
            SweepConfig { primes: vec![], ..small() },
            SweepConfig { primes: vec![4], ..small() },
            SweepConfig { tolerance: 0.0, ..small() },
            SweepConfig { k_range: (1, 2), ..small() },
            SweepConfig { m_range: (3, 2), ..small() },
            SweepConfig { jobs: 0, ..small() },
        ];
        for cfg in bad {
            assert!(matches!(run_sweep(&cfg), Err(Error::InvalidArgument(_))));
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
