//! Kummer's confluent hypergeometric function M(a, c, z) by its power series.

use super::{FunValue, SpecParams};
use crate::error::{Error, Result};

pub const MAX_TERMS: usize = 10_000;
const TERM_REL_STOP: f64 = 1e-16;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Direct summation of Σ (a)_k/(c)_k z^k/k!.
fn series(a: f64, c: f64, z: f64) -> Result<FunValue> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut max_term = 1.0_f64;
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (c + kf) * z / (kf + 1.0);
        sum += term;
        max_term = max_term.max(term.abs());
        if term == 0.0 {
            return Ok(FunValue::new(sum, (kf + 2.0) * f64::EPSILON * max_term));
        }
        if (term / sum).abs() < TERM_REL_STOP {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            // Geometric tail bound once the term ratio is below one and shrinking.
            let ratio = ((a + kf + 1.0) / (c + kf + 1.0) * z / (kf + 2.0)).abs();
            let tail = if ratio < 1.0 {
                term.abs() * ratio / (1.0 - ratio)
            } else {
                term.abs()
            };
            let rounding = (kf + 2.0) * f64::EPSILON * max_term;
            return Ok(FunValue::new(sum, tail + rounding));
        }
    }
    Err(Error::SeriesNonConvergence { a, c, z, terms: MAX_TERMS })
}

/// M(a, c, z). Negative arguments use M(a, c, z) = e^z M(c − a, c, −z), which keeps
/// every series term positive when 0 < a < c.
pub fn kummer_m(p: SpecParams) -> Result<FunValue> {
    let SpecParams { a, c, z } = p;
    if is_nonpositive_integer(c) {
        return Err(Error::InvalidC(c));
    }
    if !(a.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::InvalidArgument(format!("M({a}, {c}, {z})")));
    }
    if z >= 0.0 {
        series(a, c, z)
    } else {
        let m = series(c - a, c, -z)?;
        let scale = z.exp();
        Ok(FunValue::new(m.value * scale, m.abs_err * scale))
    }
}

/// ∂_z M(a, c, z) = (a/c) M(a + 1, c + 1, z).
pub fn kummer_m_dz(p: SpecParams) -> Result<FunValue> {
    let SpecParams { a, c, z } = p;
    if is_nonpositive_integer(c) {
        return Err(Error::InvalidC(c));
    }
    let shifted = kummer_m(SpecParams { a: a + 1.0, c: c + 1.0, z })?;
    Ok(shifted.scaled(a / c))
}

/// Zero of z ↦ M(a, c, z) in [lo, hi] by bisection on the series.
pub fn kummer_m_zero(a: f64, c: f64, lo: f64, hi: f64) -> Result<f64> {
    let f = |z: f64| kummer_m(SpecParams { a, c, z }).map(|v| v.value);
    let (mut lo, mut hi) = (lo, hi);
    let (mut f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    while hi - lo > 1e-14 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
