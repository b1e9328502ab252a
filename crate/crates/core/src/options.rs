/// Environment variable overriding both brute-force term guards.
pub const TERM_GUARD_ENV: &str = "CHARSUM_TERM_GUARD";

pub const DEFAULT_GAUSS_TERM_GUARD: u64 = 10_000_000;
pub const DEFAULT_JACOBI_TERM_GUARD: u64 = 100_000_000;

/// Limits for the brute-force oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub gauss_term_guard: u64,
    pub jacobi_term_guard: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            gauss_term_guard: DEFAULT_GAUSS_TERM_GUARD,
            jacobi_term_guard: DEFAULT_JACOBI_TERM_GUARD,
        }
    }
}

impl EvalOptions {
    pub fn with_term_guard(guard: u64) -> Self {
        EvalOptions {
            gauss_term_guard: guard,
            jacobi_term_guard: guard,
        }
    }

    /// Defaults, with `CHARSUM_TERM_GUARD` applied when it parses.
    pub fn from_env() -> Self {
        std::env::var(TERM_GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .map(Self::with_term_guard)
            .unwrap_or_default()
    }
}
