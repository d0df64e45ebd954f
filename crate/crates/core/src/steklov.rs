//! Closed-form magnetic Steklov eigenvalues of the disk (interior) and its complement
//! (exterior), with an Aharonov–Bohm flux ν.
//!
//! Exterior, with shifted index m = n − ν and b > 0:
//!   λ̌ = −m + b + b·U(3/2, m+2, b)/U(1/2, m+1, b)
//! and for b < 0 the same expression at (−m, −b).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::tricomi::tricomi_u_scaled;
use crate::specfun::{alpha, kummer_m, SpecParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub n: i64,
    pub b: f64,
    pub nu: f64,
}

impl SpectralParams {
    pub fn new(n: i64, b: f64, nu: f64) -> Result<Self> {
        check_flux(nu)?;
        if !b.is_finite() {
            return Err(Error::InvalidArgument(format!("field b = {b}")));
        }
        Ok(Self { n, b, nu })
    }

    /// Shifted angular index n − ν.
    pub fn m(&self) -> f64 {
        self.n as f64 - self.nu
    }
}

/// The flux is normalised to (−1/2, 1/2].
pub fn check_flux(nu: f64) -> Result<()> {
    if nu > -0.5 && nu <= 0.5 {
        Ok(())
    } else {
        Err(Error::FluxOutOfRange(nu))
    }
}

fn fold(m: f64, b: f64) -> Result<(f64, f64)> {
    if b == 0.0 {
        return Err(Error::InvalidArgument(
            "exterior eigenvalue needs b != 0; b -> 0 is covered by the weak-field laws".into(),
        ));
    }
    if !b.is_finite() {
        return Err(Error::InvalidArgument(format!("field b = {b}")));
    }
    Ok(if b > 0.0 { (m, b) } else { (-m, -b) })
}

/// λ̌ as a function of the shifted index m = n − ν and b ≠ 0.
pub fn exterior_eigenvalue_shifted(m: f64, b: f64) -> Result<f64> {
    let (m, z) = fold(m, b)?;
    let c = m + 1.0;
    let num = tricomi_u_scaled(1.5, c + 1.0, z)?;
    let den = tricomi_u_scaled(0.5, c, z)?;
    Ok(-m + z + z * num.ratio(&den))
}

pub fn exterior_eigenvalue(p: SpectralParams) -> Result<f64> {
    exterior_eigenvalue_shifted(p.m(), p.b)
}

/// Both closed forms: the derivative form above and the contiguous form
/// `−m − b + 2b·U(1/2, m+2, b)/U(1/2, m+1, b)`.
pub fn exterior_eigenvalue_forms(p: SpectralParams) -> Result<(f64, f64)> {
    let (m, z) = fold(p.m(), p.b)?;
    let c = m + 1.0;
    let den = tricomi_u_scaled(0.5, c, z)?;
    let u32 = tricomi_u_scaled(1.5, c + 1.0, z)?;
    let up = tricomi_u_scaled(0.5, c + 1.0, z)?;
    let first = -m + z + z * u32.ratio(&den);
    let second = -m - z + 2.0 * z * up.ratio(&den);
    Ok((first, second))
}

/// dλ̌/db in the shifted index, b > 0 branch:
/// λ̌′ = R·(z − (m − 1/2)·U(1/2, m, z)/U(1/2, m+1, z)), R = U(3/2, m+2, z)/U(1/2, m+1, z).
fn dz_positive(m: f64, z: f64) -> Result<f64> {
    let c = m + 1.0;
    let den = tricomi_u_scaled(0.5, c, z)?;
    let r = tricomi_u_scaled(1.5, c + 1.0, z)?.ratio(&den);
    let q = tricomi_u_scaled(0.5, c - 1.0, z)?.ratio(&den);
    Ok(r * (z - (m - 0.5) * q))
}

pub fn exterior_eigenvalue_dz_shifted(m: f64, b: f64) -> Result<f64> {
    let (mm, z) = fold(m, b)?;
    let d = dz_positive(mm, z)?;
    Ok(if b > 0.0 { d } else { -d })
}

pub fn exterior_eigenvalue_dz(p: SpectralParams) -> Result<f64> {
    exterior_eigenvalue_dz_shifted(p.m(), p.b)
}

/// Interior eigenvalue for a real index m ≥ 0 and any b:
/// `m − b + 2b·M′(1/2, m+1, b)/M(1/2, m+1, b)`, with `M′ = M(3/2, m+2, b)/(2(m+1))`.
fn interior_nonneg(m: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Ok(m);
    }
    let c = m + 1.0;
    let top = kummer_m(SpecParams::new(1.5, c + 1.0, b))?;
    let bottom = kummer_m(SpecParams::new(0.5, c, b))?;
    Ok(m - b + b / c * top.value / bottom.value)
}

/// λₙ(b) of the disk without flux; negative n through λₙ(b) = λ₋ₙ(−b).
pub fn interior_eigenvalue(n: i64, b: f64) -> Result<f64> {
    interior_eigenvalue_shifted(n as f64, b)
}

/// Interior eigenvalue for shifted index m = n − ν.
pub fn interior_eigenvalue_shifted(m: f64, b: f64) -> Result<f64> {
    if !b.is_finite() {
        return Err(Error::InvalidArgument(format!("field b = {b}")));
    }
    if m >= 0.0 {
        interior_nonneg(m, b)
    } else {
        interior_nonneg(-m, -b)
    }
}

/// Interior Aharonov–Bohm DtN spectrum |k − ν| (no constant field).
pub fn interior_ab_eigenvalue(k: i64, nu: f64) -> Result<f64> {
    check_flux(nu)?;
    Ok((k as f64 - nu).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundState {
    pub n_min: i64,
    pub lambda: f64,
}

// Modes required on each side of the minimiser, each strictly larger than the last.
const RISING: i64 = 3;

/// inf over n of λ̌ₙ(b, ν), searched outward from the crossing-law seed.
pub fn ground_state(b: f64, nu: f64) -> Result<GroundState> {
    check_flux(nu)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("ground state needs b > 0, got {b}")));
    }
    let seed = (b + alpha() * b.sqrt() + nu).round() as i64;
    let limit = 50 + b.ceil() as i64;
    let mut values: BTreeMap<i64, f64> = BTreeMap::new();
    let mut half = RISING;
    loop {
        let (lo, hi) = (seed - half, seed + half);
        let missing: Vec<i64> = (lo..=hi).filter(|n| !values.contains_key(n)).collect();
        let fresh: Vec<(i64, f64)> = missing
            .par_iter()
            .map(|&n| exterior_eigenvalue_shifted(n as f64 - nu, b).map(|v| (n, v)))
            .collect::<Result<_>>()?;
        values.extend(fresh);

        let (n_min, lambda) = values
            .range(lo..=hi)
            .min_by(|x, y| x.1.total_cmp(y.1))
            .map(|(&n, &v)| (n, v))
            .expect("window is nonempty");
        let rising = |dir: i64| -> bool {
            (0..RISING).all(|k| {
                let a = values.get(&(n_min + dir * k));
                let c = values.get(&(n_min + dir * (k + 1)));
                matches!((a, c), (Some(a), Some(c)) if c > a)
            })
        };
        if rising(1) && rising(-1) {
            return Ok(GroundState { n_min, lambda });
        }
        if half >= limit {
            return Err(Error::WindowOverflow { seed, limit });
        }
        half = (half + RISING).min(limit);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormReport {
    /// max over |n| ≤ n_max of |λ̌ₙ(b,ν) − |n − ν||.
    pub norm: f64,
    pub argmax: i64,
    /// Largest gap among n_max − 9 ≤ |n| ≤ n_max.
    pub tail: f64,
}

/// Norm of the difference between the exterior magnetic DtN map and the interior
/// Aharonov–Bohm one; both are diagonal in the Fourier basis.
pub fn dtn_diff_norm(b: f64, nu: f64, n_max: i64) -> Result<NormReport> {
    check_flux(nu)?;
    if n_max < 10 {
        return Err(Error::InvalidArgument(format!("n_max = {n_max} < 10")));
    }
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!("norm needs b > 0, got {b}")));
    }
    let gaps: Vec<(i64, f64)> = (-n_max..=n_max)
        .into_par_iter()
        .map(|n| {
            let lam = exterior_eigenvalue_shifted(n as f64 - nu, b)?;
            Ok((n, (lam - (n as f64 - nu).abs()).abs()))
        })
        .collect::<Result<_>>()?;
    let (argmax, norm) = gaps
        .iter()
        .copied()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("nonempty");
    let tail = gaps
        .iter()
        .filter(|(n, _)| n.abs() >= n_max - 9)
        .map(|g| g.1)
        .fold(0.0, f64::max);
    Ok(NormReport { norm, argmax, tail })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub b: f64,
    pub entries: Vec<(i64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveTable {
    pub nu: f64,
    pub rows: Vec<CurveRow>,
}

/// λ̌ₙ(b, ν) for n_lo ≤ n ≤ n_hi. At b = 0 the row holds the b → 0⁺ limits |n − ν|.
pub fn spectrum_window(b: f64, nu: f64, n_lo: i64, n_hi: i64) -> Result<CurveRow> {
    check_flux(nu)?;
    if n_lo > n_hi {
        return Err(Error::InvalidArgument(format!("empty mode range [{n_lo}, {n_hi}]")));
    }
    let entries = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| {
            let m = n as f64 - nu;
            let v = if b == 0.0 { m.abs() } else { exterior_eigenvalue_shifted(m, b)? };
            Ok((n, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveRow { b, entries })
}

/// One row per b; b values must be strictly increasing.
pub fn curve_table(nu: f64, bs: &[f64], n_lo: i64, n_hi: i64) -> Result<CurveTable> {
    if bs.is_empty() {
        return Err(Error::InvalidArgument("empty b grid".into()));
    }
    if bs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("b grid must be strictly increasing".into()));
    }
    let rows = bs
        .par_iter()
        .map(|&b| spectrum_window(b, nu, n_lo, n_hi))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveTable { nu, rows })
}
