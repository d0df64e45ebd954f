//! Tricomi's confluent hypergeometric function U(a, c, z) for real a, c and z > 0.
//!
//! Routing:
//! - `a > 0`, `z > SMALL_Z`: the integral
//!   `U = Γ(a)⁻¹ ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{c-a-1} dt`, integrated in `u` with `t = u^p`
//!   (`p = 2` for `a ≥ 1/2`, `p = 1/a` below) so the endpoint factor is bounded.
//! - `a > 0`, `z ≤ SMALL_Z`: the convergent small-z expansions (logarithmic series for
//!   integer `c`, the two-M connection formula otherwise). Values of `c` within
//!   `NEAR_INTEGER` of an integer fall back to quadrature, where the connection formula
//!   cancels badly.
//! - `a = -1/2`: `U(-1/2, c, z) = z U(1/2, c+1, z) - (c - 1/2) U(1/2, c, z)`.
//!
//! Values are carried as [`Scaled`] so that ratios like `U(3/2, c+1, z)/U(1/2, c, z)`
//! stay finite when `U` itself would overflow (`c` in the thousands, or `z` tiny).

use super::gamma::{digamma, ln_gamma_signed, EULER_GAMMA};
use super::kummer::kummer_m;
use super::quad::{integrate_log_density, Quadrature};
use super::{FunValue, SpecParams};
use crate::error::{Error, Result};

/// Below this argument the small-z expansions replace quadrature.
pub const SMALL_Z: f64 = 1e-3;
const NEAR_INTEGER: f64 = 0.05;

/// `mant · exp(ln_scale)` with relative error `rel_err`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mant: f64,
    pub ln_scale: f64,
    pub rel_err: f64,
}

impl Scaled {
    pub fn value(&self) -> f64 {
        self.mant * self.ln_scale.exp()
    }

    /// `self / other` without forming either value.
    pub fn ratio(&self, other: &Scaled) -> f64 {
        self.mant / other.mant * (self.ln_scale - other.ln_scale).exp()
    }

    pub fn to_fun_value(self) -> Result<FunValue> {
        let v = self.value();
        if !v.is_finite() {
            return Err(Error::NonFinite(format!(
                "U value {}·e^{} not representable",
                self.mant, self.ln_scale
            )));
        }
        Ok(FunValue::new(v, (v * self.rel_err).abs()))
    }

    fn mul(self, factor: f64) -> Scaled {
        Scaled { mant: self.mant * factor, ..self }
    }

    /// Signed linear combination `Σ wᵢ sᵢ`; the relative error accounts for cancellation.
    pub fn combine(parts: &[(f64, Scaled)]) -> Scaled {
        let ln_scale = parts
            .iter()
            .filter(|(w, s)| *w != 0.0 && s.mant != 0.0)
            .map(|(_, s)| s.ln_scale)
            .fold(f64::NEG_INFINITY, f64::max);
        if ln_scale == f64::NEG_INFINITY {
            return Scaled { mant: 0.0, ln_scale: 0.0, rel_err: 0.0 };
        }
        let mut mant = 0.0;
        let mut abs_err = 0.0;
        let mut gross = 0.0;
        for (w, s) in parts {
            let t = w * s.mant * (s.ln_scale - ln_scale).exp();
            mant += t;
            abs_err += (t * s.rel_err).abs();
            gross += t.abs();
        }
        abs_err += 4.0 * f64::EPSILON * gross;
        let rel_err = if mant != 0.0 { (abs_err / mant).abs() } else { f64::INFINITY };
        Scaled { mant, ln_scale, rel_err }
    }
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

/// Scaled U(a, c, z) with the default quadrature rule.
pub fn tricomi_u_scaled(a: f64, c: f64, z: f64) -> Result<Scaled> {
    tricomi_u_scaled_with(a, c, z, &Quadrature::default())
}

pub fn tricomi_u_scaled_with(a: f64, c: f64, z: f64, quad: &Quadrature) -> Result<Scaled> {
    if !(a.is_finite() && c.is_finite() && z.is_finite()) || z <= 0.0 {
        return Err(Error::InvalidArgument(format!("U({a}, {c}, {z}) needs finite a, c and z > 0")));
    }
    if a == -0.5 {
        let hi = tricomi_u_scaled_with(0.5, c + 1.0, z, quad)?;
        let lo = tricomi_u_scaled_with(0.5, c, z, quad)?;
        return Ok(Scaled::combine(&[(z, hi), (-(c - 0.5), lo)]));
    }
    if a <= 0.0 {
        return Err(Error::Unsupported(format!("U({a}, {c}, {z}): only a > 0 or a = -1/2")));
    }
    let frac = (c - c.round()).abs();
    if z <= SMALL_Z && (frac == 0.0 || frac >= NEAR_INTEGER) {
        small_z(a, c, z)
    } else {
        by_quadrature(a, c, z, quad)
    }
}

/// Quadrature route of the integral representation, for any a > 0.
pub fn tricomi_u_quadrature(a: f64, c: f64, z: f64, quad: &Quadrature) -> Result<Scaled> {
    if !(a > 0.0 && z > 0.0) {
        return Err(Error::Unsupported(format!("integral representation needs a, z > 0 (a = {a}, z = {z})")));
    }
    by_quadrature(a, c, z, quad)
}

fn by_quadrature(a: f64, c: f64, z: f64, quad: &Quadrature) -> Result<Scaled> {
    let p = if a >= 0.5 { 2.0 } else { 1.0 / a };
    let m = c - a - 1.0;
    let power = p * a - 1.0;
    let ln_p = p.ln();
    let log_f = move |u: f64| {
        let t = u.powf(p);
        let mut g = ln_p - z * t;
        if power != 0.0 {
            g += power * u.ln();
        }
        if m != 0.0 {
            g += m * t.ln_1p();
        }
        g
    };
    // Maximiser of (a - 1/p) ln t - z t + m ln(1 + t), a root of z t² - B t - k = 0.
    let k = (a - 1.0 / p).max(0.0); // rounding can leave it just below 0 when a < 1/2
    let b = k + m - z;
    let t_peak = if k == 0.0 {
        (b / z).max(0.0)
    } else {
        let disc = (b * b + 4.0 * z * k).sqrt();
        if b >= 0.0 {
            (b + disc) / (2.0 * z)
        } else {
            2.0 * k / (disc - b)
        }
    };
    let u_peak = t_peak.powf(1.0 / p);
    let r = integrate_log_density(log_f, u_peak, quad)?;
    let (ln_gamma_a, _) = ln_gamma_signed(a)?;
    if !(r.value > 0.0) {
        return Err(Error::Quadrature(format!("nonpositive integral for U({a}, {c}, {z})")));
    }
    Ok(Scaled {
        mant: r.value,
        ln_scale: r.ln_scale - ln_gamma_a,
        rel_err: r.abs_err / r.value,
    })
}

fn small_z(a: f64, c: f64, z: f64) -> Result<Scaled> {
    if is_integer(c) {
        if c >= 1.0 {
            log_series(a, (c - 1.0) as u64, z)
        } else {
            // U(a, c, z) = z^{1-c} U(a-c+1, 2-c, z), now with 2 - c >= 2.
            let inner = log_series(a - c + 1.0, (1.0 - c) as u64, z)?;
            Ok(Scaled { ln_scale: inner.ln_scale + (1.0 - c) * z.ln(), ..inner })
        }
    } else {
        connection(a, c, z)
    }
}

/// Non-integer c:
/// U = Γ(1-c)/Γ(a-c+1) M(a,c,z) + Γ(c-1)/Γ(a) z^{1-c} M(a-c+1, 2-c, z).
fn connection(a: f64, c: f64, z: f64) -> Result<Scaled> {
    let mut parts = Vec::with_capacity(2);
    let arg = a - c + 1.0;
    if !(arg <= 0.0 && is_integer(arg)) {
        let (l1, s1) = ln_gamma_signed(1.0 - c)?;
        let (l2, s2) = ln_gamma_signed(arg)?;
        let m = kummer_m(SpecParams { a, c, z })?;
        parts.push((
            s1 * s2,
            Scaled { mant: m.value, ln_scale: l1 - l2, rel_err: m.rel_err() + 1e-14 },
        ));
    }
    let (l3, s3) = ln_gamma_signed(c - 1.0)?;
    let (l4, s4) = ln_gamma_signed(a)?;
    let m2 = kummer_m(SpecParams { a: arg, c: 2.0 - c, z })?;
    parts.push((
        s3 * s4,
        Scaled {
            mant: m2.value,
            ln_scale: l3 - l4 + (1.0 - c) * z.ln(),
            rel_err: m2.rel_err() + 1e-14,
        },
    ));
    Ok(Scaled::combine(&parts))
}

/// c = n + 1 with n ≥ 0: the logarithmic expansion
/// U = (-1)^{n+1}/(n! Γ(a-n)) Σ_k (a)_k z^k/((n+1)_k k!) [ln z + ψ(a+k) - ψ(1+k) - ψ(n+k+1)]
///   + Γ(a)⁻¹ Σ_{k=1}^{n} (k-1)! (1-a+k)_{n-k}/(n-k)! z^{-k}.
fn log_series(a: f64, n: u64, z: f64) -> Result<Scaled> {
    let nf = n as f64;
    let ln_z = z.ln();
    let (ln_gamma_a, _) = ln_gamma_signed(a)?;
    let mut parts = Vec::with_capacity(2);

    if n >= 1 {
        // Terms relative to T_n = (n-1)! z^{-n}: T_k = T_{k+1} (1-a+k) z / (k (n-k)).
        let mut rel = 1.0_f64;
        let mut sum = 1.0_f64;
        for k in (1..n).rev() {
            let kf = k as f64;
            rel *= (1.0 - a + kf) * z / (kf * (nf - kf));
            sum += rel;
            if rel == 0.0 {
                break;
            }
        }
        let (ln_fact, _) = ln_gamma_signed(nf)?;
        parts.push((
            1.0,
            Scaled { mant: sum, ln_scale: ln_fact - nf * ln_z - ln_gamma_a, rel_err: 2e-15 * (1.0 + nf).ln() },
        ));
    }

    let shifted = a - nf;
    if !(shifted <= 0.0 && is_integer(shifted)) {
        let (ln_g, sign_g) = ln_gamma_signed(shifted)?;
        let (ln_nfact, _) = ln_gamma_signed(nf + 1.0)?;
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 } * sign_g;
        let mut psi_a = digamma(a)?;
        let mut psi_1 = -EULER_GAMMA;
        let mut psi_n = digamma(nf + 1.0)?;
        let mut term = 1.0_f64;
        let mut sum = 0.0_f64;
        let mut gross = 0.0_f64;
        let mut small_run = 0;
        for k in 0..super::kummer::MAX_TERMS {
            let kf = k as f64;
            let t = term * (ln_z + psi_a - psi_1 - psi_n);
            sum += t;
            gross += t.abs();
            if t.abs() <= 1e-17 * sum.abs() {
                small_run += 1;
                if small_run >= 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
            term *= (a + kf) * z / ((nf + 1.0 + kf) * (kf + 1.0));
            psi_a += 1.0 / (a + kf);
            psi_1 += 1.0 / (kf + 1.0);
            psi_n += 1.0 / (nf + 1.0 + kf);
        }
        let rel_err = 8.0 * f64::EPSILON * gross / sum.abs().max(f64::MIN_POSITIVE) + 1e-15;
        parts.push((sign, Scaled { mant: sum, ln_scale: -ln_nfact - ln_g, rel_err }));
    }
    Ok(Scaled::combine(&parts))
}

/// U(a, c, z) as a plain value with an absolute error estimate.
pub fn tricomi_u(p: SpecParams) -> Result<FunValue> {
    tricomi_u_scaled(p.a, p.c, p.z)?.to_fun_value()
}

/// U'(a, c, z) = -a U(a+1, c+1, z), scaled.
pub fn tricomi_u_dz_scaled(a: f64, c: f64, z: f64) -> Result<Scaled> {
    let shifted = tricomi_u_scaled(a + 1.0, c + 1.0, z)?;
    Ok(shifted.mul(-a))
}

/// U'(a, c, z) = -a U(a+1, c+1, z).
pub fn tricomi_u_dz(p: SpecParams) -> Result<FunValue> {
    tricomi_u_dz_scaled(p.a, p.c, p.z)?.to_fun_value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn u(a: f64, c: f64, z: f64) -> f64 {
        tricomi_u(SpecParams { a, c, z }).unwrap().value
    }

    #[test]
    fn elementary_closed_forms() {
        // U(a, a+1, z) = z^{-a}
        for &z in &[1e-6, 1e-4, 0.01, 0.5, 3.0, 40.0, 1e4] {
            for &a in &[0.5, 1.5, 2.5, 0.25] {
                let v = u(a, a + 1.0, z);
                assert!((v * z.powf(a) - 1.0).abs() < 1e-12, "a={a} z={z} v={v}");
            }
            assert!((u(1.0, 2.0, z) * z - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn large_z_leading_behaviour() {
        let z: f64 = 1e4;
        let v = u(0.5, 2.0, z);
        assert!((z.sqrt() * v - 1.0).abs() < 1e-3);
    }

    #[test]
    fn small_z_log_expansion() {
        // U(a,1,z) = -(ln z + ψ(a) + 2γ)/Γ(a) + O(z ln z)
        let z: f64 = 1e-4;
        let psi_half = digamma(0.5).unwrap();
        let lead = -(z.ln() + psi_half + 2.0 * EULER_GAMMA) / PI.sqrt();
        let v = u(0.5, 1.0, z);
        assert!((v / lead - 1.0).abs() < 1e-2, "{v} vs {lead}");
    }

    #[test]
    fn routes_agree_across_the_switch() {
        let q = Quadrature::default();
        for &c in &[1.0, 2.0, 3.0, 0.75, 1.75, 2.5, -1.0, -2.25, 0.5, 6.0] {
            for &a in &[0.5, 1.5] {
                for &z in &[1e-4, 5e-4, 1e-3] {
                    let series = small_z(a, c, z).unwrap().value();
                    let quad = by_quadrature(a, c, z, &q).unwrap().value();
                    assert!(
                        (series / quad - 1.0).abs() < 1e-11,
                        "a={a} c={c} z={z}: {series} vs {quad}"
                    );
                }
            }
        }
    }

    #[test]
    fn minus_half_route() {
        // z^{1/2} U(-1/2, c, z) → 1, first correction a(a+1-c)/z ≈ 6e-4 here.
        let z: f64 = 2e3;
        let v = u(-0.5, 3.0, z);
        assert!((v / z.sqrt() - 1.0).abs() < 2e-3);
    }

    #[test]
    fn unsupported_a() {
        assert!(matches!(tricomi_u(SpecParams { a: -1.0, c: 2.0, z: 1.0 }), Err(Error::Unsupported(_))));
        assert!(matches!(tricomi_u(SpecParams { a: 0.0, c: 2.0, z: 1.0 }), Err(Error::Unsupported(_))));
        assert!(tricomi_u(SpecParams { a: 0.5, c: 2.0, z: 0.0 }).is_err());
    }

    #[test]
    fn scaled_survives_overflow() {
        // U(1/2, 400, 1e-9) ~ Γ(399)/Γ(1/2) z^{-399}, far beyond f64.
        let s = tricomi_u_scaled(0.5, 400.0, 1e-9).unwrap();
        assert!(s.mant > 0.0 && s.ln_scale > 700.0);
        assert!(tricomi_u(SpecParams { a: 0.5, c: 400.0, z: 1e-9 }).is_err());
    }
}
