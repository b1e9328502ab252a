//! Wall-clock comparison of closed forms against direct summation.

use std::hint::black_box;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::character::{enumerate_characters, Character};
use crate::error::{Error, Result};
use crate::gauss::{gauss_brute, gauss_closed};
use crate::jacobi::{jacobi_brute, jacobi_eval, JacobiMethod, JacobiQuery};
use crate::options::EvalOptions;
use crate::unit_group::UnitGroupContext;

/// Closed-form timings are taken over batches this long so that a single
/// evaluation well under a microsecond still registers.
const CLOSED_BATCH: u32 = 256;

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub p: u64,
    pub m: u32,
    pub k: usize,
    pub terms: u128,
    pub reps: usize,
    /// Median seconds per brute-force evaluation; `None` when skipped.
    pub brute_median: Option<f64>,
    pub closed_median: f64,
    pub speedup: Option<f64>,
    pub closed_method: String,
    pub status: &'static str,
}

fn median(mut xs: Vec<Duration>) -> f64 {
    xs.sort();
    let n = xs.len();
    let mid = if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2
    };
    mid.as_secs_f64()
}

fn time_closed(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<f64> {
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        for _ in 0..CLOSED_BATCH {
            f()?;
        }
        samples.push(start.elapsed() / CLOSED_BATCH);
    }
    Ok(median(samples))
}

fn time_brute(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<f64> {
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        f()?;
        samples.push(start.elapsed());
    }
    Ok(median(samples))
}

/// Random primitive characters, so the closed form does real work.
fn primitive_tuple(ctx: &Arc<UnitGroupContext>, k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Character>> {
    let prim = enumerate_characters(ctx, true);
    if prim.is_empty() {
        return Err(Error::invalid(format!(
            "no primitive characters mod {}",
            ctx.modulus().q()
        )));
    }
    Ok((0..k).map(|_| prim[rng.gen_range(0..prim.len())].clone()).collect())
}

/// Time the Gauss sum (`k = 1`) or `J_1(chi_1..chi_k)` over `p^m`, brute
/// force against the automatic closed route. A brute force run above the
/// term guard is skipped rather than failing.
pub fn bench(p: u64, m: u32, k: usize, reps: usize, seed: u64, opts: &EvalOptions) -> Result<BenchRow> {
    if reps == 0 {
        return Err(Error::invalid("reps must be positive"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let ctx = UnitGroupContext::new(p, m)?;
    let q = ctx.modulus().q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chars = primitive_tuple(&ctx, k, &mut rng)?;

    let (terms, closed_median, closed_method, brute) = if k == 1 {
        let chi = &chars[0];
        let method = gauss_closed(chi)?.method;
        let t = time_closed(reps, || gauss_closed(black_box(chi)).map(|r| drop(black_box(r))))?;
        let brute = (q <= opts.gauss_term_guard)
            .then(|| time_brute(reps, || gauss_brute(black_box(chi), opts).map(|r| drop(black_box(r)))))
            .transpose()?;
        (q as u128, t, method, brute)
    } else {
        let query = JacobiQuery::new(chars, 1)?;
        let method = jacobi_eval(&query, JacobiMethod::Auto, opts)?.method;
        let t = time_closed(reps, || {
            jacobi_eval(black_box(&query), JacobiMethod::Auto, opts).map(|r| drop(black_box(r)))
        })?;
        let terms = (q as u128).pow(k as u32 - 1);
        let brute = (terms <= opts.jacobi_term_guard as u128)
            .then(|| time_brute(reps, || jacobi_brute(black_box(&query), opts).map(|r| drop(black_box(r)))))
            .transpose()?;
        (terms, t, method, brute)
    };
    Ok(BenchRow {
        p,
        m,
        k,
        terms,
        reps,
        brute_median: brute,
        closed_median,
        speedup: brute.map(|b| b / closed_median.max(1e-12)),
        closed_method: closed_method.as_str().to_string(),
        status: if brute.is_some() { "measured" } else { "brute-skipped" },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_rows() {
        let row = bench(3, 4, 1, 3, 1, &EvalOptions::default()).unwrap();
        assert_eq!((row.terms, row.status), (81, "measured"));
        assert!(row.speedup.unwrap() > 0.0);
        let row = bench(5, 4, 3, 1, 1, &EvalOptions::with_term_guard(1000)).unwrap();
        assert_eq!(row.status, "brute-skipped");
        assert!(row.brute_median.is_none());
        assert!(bench(3, 2, 2, 0, 1, &EvalOptions::default()).is_err());
        assert!(bench(2, 1, 1, 1, 1, &EvalOptions::default()).is_err());
    }
}
