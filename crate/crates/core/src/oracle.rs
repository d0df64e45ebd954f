//! Independent DtN values from the radial ODE
//!   −v″ − v′/r + (br − m/r)² v = 0,   m = n − ν,
//! integrated in Riccati form w = v′/v:  w′ = −w² − w/r + (br − m/r)².
//! No special functions are involved.

use crate::error::{Error, Result};
use crate::steklov::{check_flux, SpectralParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    InwardFromInfinity,
    OutwardFromZero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootConfig {
    pub r_max: f64,
    pub r_min: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub direction: Direction,
    /// Multiplier on the asymptotic seed; 1 except in robustness checks.
    pub seed_scale: f64,
}

const DEFAULT_TOL: f64 = 1e-11;
const DEFAULT_R_MIN: f64 = 1e-4;

impl ShootConfig {
    pub fn new(r_max: f64, r_min: f64, abs_tol: f64, rel_tol: f64, direction: Direction) -> Result<Self> {
        if !(r_max > 1.0 && r_max.is_finite() && r_min > 0.0 && r_min < 1.0) {
            return Err(Error::InvalidArgument(format!("need r_max > 1 > r_min > 0 (r_max = {r_max}, r_min = {r_min})")));
        }
        for t in [abs_tol, rel_tol] {
            if !(t > 0.0 && t <= 1e-6) {
                return Err(Error::InvalidArgument(format!("integrator tolerance {t} outside (0, 1e-6]")));
            }
        }
        Ok(Self { r_max, r_min, abs_tol, rel_tol, direction, seed_scale: 1.0 })
    }

    /// r_max = max(8, √((|m| + 25)/b) + 4).
    pub fn exterior(p: &SpectralParams) -> Self {
        let r_max = 8f64.max(((p.m().abs() + 25.0) / p.b.abs()).sqrt() + 4.0);
        Self {
            r_max,
            r_min: DEFAULT_R_MIN,
            abs_tol: DEFAULT_TOL,
            rel_tol: DEFAULT_TOL,
            direction: Direction::InwardFromInfinity,
            seed_scale: 1.0,
        }
    }

    pub fn interior() -> Self {
        Self {
            r_max: 8.0,
            r_min: DEFAULT_R_MIN,
            abs_tol: DEFAULT_TOL,
            rel_tol: DEFAULT_TOL,
            direction: Direction::OutwardFromZero,
            seed_scale: 1.0,
        }
    }

    pub fn tightened(&self) -> Self {
        Self { abs_tol: self.abs_tol * 0.5, rel_tol: self.rel_tol * 0.5, ..*self }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;

/// Adaptive DP45 for a scalar ODE from `x0` to `x1` (either direction).
/// `blow_up(x, y)` flags a pole crossing.
fn dopri<F, B>(f: F, x0: f64, x1: f64, y0: f64, atol: f64, rtol: f64, blow_up: B) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    B: Fn(f64, f64) -> bool,
{
    let span = x1 - x0;
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-3).min(1e-3 * x0.abs().max(1e-3));
    let mut k = [0.0; 7];
    k[0] = f(x, y);
    for _ in 0..MAX_STEPS {
        if (x1 - x) * dir <= 0.0 {
            return Ok(y);
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        for s in 1..7 {
            let mut acc = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                acc += h * A[s][j] * kj;
            }
            k[s] = f(x + C[s] * h, acc);
        }
        let y5 = y + h * (0..7).map(|j| B5[j] * k[j]).sum::<f64>();
        let y4 = y + h * (0..7).map(|j| B4[j] * k[j]).sum::<f64>();
        let scale = atol + rtol * y.abs().max(y5.abs());
        let err = ((y5 - y4) / scale).abs();
        if !err.is_finite() {
            h *= 0.1;
            continue;
        }
        if err <= 1.0 {
            x += h;
            y = y5;
            k[0] = k[6]; // FSAL
            if blow_up(x, y) {
                return Err(Error::Integrator(format!("Riccati variable blew up at r = {x} (w = {y})")));
            }
            if x == x1 {
                return Ok(y);
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-14 * x.abs().max(1.0) {
            return Err(Error::Integrator(format!("step size underflow at r = {x}")));
        }
    }
    Err(Error::Integrator(format!("more than {MAX_STEPS} steps")))
}

fn potential(b: f64, m: f64, r: f64) -> f64 {
    let q = b * r - m / r;
    q * q
}

fn riccati(b: f64, m: f64) -> impl Fn(f64, f64) -> f64 {
    move |r, w| -w * w - w / r + potential(b, m, r)
}

/// Exterior DtN value −w(1) of the solution decaying at infinity (b > 0).
pub fn exterior_shoot(p: SpectralParams, cfg: ShootConfig) -> Result<f64> {
    if !(p.b > 0.0) {
        return Err(Error::InvalidArgument(format!("exterior shooting needs b > 0, got {}", p.b)));
    }
    let (b, m) = (p.b, p.m());
    let mut r_max = cfg.r_max;
    let mut last = None;
    // A pole in w means the growing branch leaked in; start further out.
    for _ in 0..4 {
        let seed = cfg.seed_scale * (-b * r_max + (m - 1.0) / r_max);
        let bound = 1e6 * (1.0 + b * r_max + m.abs());
        match dopri(riccati(b, m), r_max, 1.0, seed, cfg.abs_tol, cfg.rel_tol, |_, w| w.abs() > bound) {
            Ok(w1) => return Ok(-w1),
            Err(e) => last = Some(e),
        }
        r_max *= 1.5;
    }
    Err(last.expect("at least one attempt"))
}

/// Interior DtN value w(1) of the solution regular at the origin, v ~ r^{|n−ν|}.
pub fn interior_shoot(n: i64, b: f64, nu: f64, cfg: ShootConfig) -> Result<f64> {
    check_flux(nu)?;
    if !b.is_finite() {
        return Err(Error::InvalidArgument(format!("field b = {b}")));
    }
    let m = n as f64 - nu;
    let r0 = cfg.r_min;
    let seed = cfg.seed_scale * m.abs() / r0;
    let bound = 1e6 * (1.0 + b.abs() + m.abs() / r0);
    dopri(riccati(b, m), r0, 1.0, seed, cfg.abs_tol, cfg.rel_tol, |_, w| w.abs() > bound)
}
