#![no_main]

use charsum::parse::parse_query;
use charsum::{jacobi_eval, EvalOptions, JacobiMethod};
use libfuzzer_sys::fuzz_target;

// Layout: p selector, m, B, then "chars" optionally followed by "|signs".
const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 4, 1];

fuzz_target!(|data: &[u8]| {
    let [sel, m, b, rest @ ..] = data else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let p = PRIMES[*sel as usize % PRIMES.len()];
    let m = u32::from(*m % 6);
    let (chars, signs) = match text.split_once('|') {
        Some((c, s)) => (c, Some(s)),
        None => (text, None),
    };
    let Ok(query) = parse_query(p, m, chars, signs, i64::from(*b as i8)) else { return };
    let opts = EvalOptions::with_term_guard(1 << 14);
    if let Ok(r) = jacobi_eval(&query, JacobiMethod::Auto, &opts) {
        assert!(r.to_complex().norm().is_finite());
    }
});
