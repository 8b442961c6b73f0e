//! Numeric tolerances.
//!
//! All comparisons are absolute for values of magnitude up to 1 and relative
//! beyond that, so workloads with totals in the thousands keep the same number
//! of significant digits of slack as unit-scale ones.

/// Default comparison tolerance.
pub const TOL: f64 = 1e-9;

/// Pieces shorter than this (relative to their end time) are dropped by the
/// algorithms instead of being placed.
pub const MIN_PIECE: f64 = 1e-12;

/// Environment variable that overrides [`TOL`] for the command line tool.
pub const TOL_ENV: &str = "SCHED_TOL";

/// `tol` scaled to the magnitude of the values being compared.
#[inline]
pub fn scaled(tol: f64, magnitude: f64) -> f64 {
    tol * magnitude.abs().max(1.0)
}

/// Tolerance from `SCHED_TOL`, falling back to [`TOL`] when unset.
pub fn from_env() -> Result<f64, String> {
    match std::env::var(TOL_ENV) {
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(format!("{TOL_ENV} must be a positive number, got {raw:?}")),
        },
        Err(_) => Ok(TOL),
    }
}
