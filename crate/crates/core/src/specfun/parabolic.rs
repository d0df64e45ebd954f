//! Parabolic cylinder functions D_μ(z) and the constant α with D_{1/2}(−α) = 0.

use std::sync::OnceLock;

use super::gamma::ln_gamma_signed;
use super::quad::{integrate_log_density, Quadrature};
use super::FunValue;
use crate::error::{Error, Result};
use crate::roots::brent;

/// D_μ(z) for μ < 0 from
/// `D_μ(z) = e^{-z²/4}/Γ(-μ) ∫₀^∞ t^{-μ-1} e^{-(t²/2 + z t)} dt`.
fn by_quadrature(mu: f64, z: f64, quad: &Quadrature) -> Result<FunValue> {
    let s = -mu; // t^{s-1}
    let p = if s >= 0.5 { 2.0 } else { 1.0 / s };
    let power = p * s - 1.0;
    let ln_p = p.ln();
    let log_f = move |u: f64| {
        let t = u.powf(p);
        let mut g = ln_p - 0.5 * t * t - z * t;
        if power != 0.0 {
            g += power * u.ln();
        }
        g
    };
    // Maximiser of k ln t - t²/2 - z t with k = s - 1/p (exactly 0 when s < 1/2,
    // but rounding can leave it slightly negative).
    let k = (s - 1.0 / p).max(0.0);
    let t_peak = if k == 0.0 {
        (-z).max(0.0)
    } else {
        let disc = (z * z + 4.0 * k).sqrt();
        if z <= 0.0 {
            0.5 * (disc - z)
        } else {
            2.0 * k / (z + disc)
        }
    };
    let r = integrate_log_density(log_f, t_peak.powf(1.0 / p), quad)?;
    let (ln_g, _) = ln_gamma_signed(s)?;
    let scale = (r.ln_scale - 0.25 * z * z - ln_g).exp();
    let value = r.value * scale;
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("D_{mu}({z}) overflows")));
    }
    Ok(FunValue::new(value, r.abs_err * scale))
}

/// D_μ(z) for μ < 0 (quadrature) or μ ∈ [0, 1] (one step of
/// `D_μ = z D_{μ-1} - (μ-1) D_{μ-2}`; D₀ and D₁ are elementary).
pub fn parabolic_d(mu: f64, z: f64) -> Result<FunValue> {
    parabolic_d_with(mu, z, &Quadrature::default())
}

pub fn parabolic_d_with(mu: f64, z: f64, quad: &Quadrature) -> Result<FunValue> {
    if !(mu.is_finite() && z.is_finite()) {
        return Err(Error::InvalidArgument(format!("D_{mu}({z})")));
    }
    if mu < 0.0 {
        return by_quadrature(mu, z, quad);
    }
    if mu > 1.0 {
        return Err(Error::Unsupported(format!("D_mu for mu = {mu} > 1")));
    }
    let gauss = (-0.25 * z * z).exp();
    if mu == 0.0 {
        return Ok(FunValue::new(gauss, gauss * f64::EPSILON));
    }
    if mu == 1.0 {
        let v = z * gauss;
        return Ok(FunValue::new(v, (v * f64::EPSILON).abs()));
    }
    let d1 = by_quadrature(mu - 1.0, z, quad)?;
    let d2 = by_quadrature(mu - 2.0, z, quad)?;
    let t1 = z * d1.value;
    let t2 = (mu - 1.0) * d2.value;
    let value = t1 - t2;
    let abs_err = z.abs() * d1.abs_err
        + (mu - 1.0).abs() * d2.abs_err
        + 2.0 * f64::EPSILON * (t1.abs() + t2.abs());
    Ok(FunValue::new(value, abs_err))
}

/// f(β) = β − ½ D_{−3/2}(−β)/D_{−1/2}(−β) = −D_{1/2}(−β)/D_{−1/2}(−β).
pub fn alpha_equation(beta: f64) -> Result<f64> {
    let num = parabolic_d(-1.5, -beta)?;
    let den = parabolic_d(-0.5, -beta)?;
    Ok(beta - 0.5 * num.value / den.value)
}

/// α > 0, where −α is the negative zero of D_{1/2}.
pub fn alpha_root() -> Result<f64> {
    brent(alpha_equation, 0.5, 1.0, 1e-14, 200)
}

static ALPHA: OnceLock<f64> = OnceLock::new();

/// Cached [`alpha_root`].
pub fn alpha() -> f64 {
    *ALPHA.get_or_init(|| alpha_root().expect("alpha bracket [0.5, 1] is valid"))
}
