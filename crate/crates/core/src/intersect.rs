//! Crossing points ž_n(ν) of adjacent exterior curves λ̌ₙ, λ̌ₙ₊₁, i.e. the positive root of
//! U(−1/2, n−ν+1, z), and the minimum structure they induce.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::brent;
use crate::specfun::tricomi::tricomi_u_scaled;
use crate::steklov::{
    check_flux, exterior_eigenvalue_dz_shifted, exterior_eigenvalue_shifted, ground_state,
};

const LEFT_END: f64 = 1e-6;
const LEFT_END_FLOOR: f64 = 1e-14;
const Z_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingPoint {
    pub n: i64,
    pub nu: f64,
    pub z: f64,
    pub lambda_at_z: f64,
    /// |λ̌ₙ(z) − (n − ν + 1 − z)|
    pub g_residual: f64,
    /// |U(−1/2, c, z)| / (z·U(1/2, c+1, z) + (c − 1/2)·U(1/2, c, z)), c = n − ν + 1
    pub defining_residual: f64,
    /// |λ̌ₙ(z) − λ̌ₙ₊₁(z)|
    pub curve_residual: f64,
}

/// U(−1/2, c, z)/U(1/2, c, z) and the scale of the two terms it is made of.
fn signed_ratio(c: f64, z: f64) -> Result<(f64, f64)> {
    let lo = tricomi_u_scaled(0.5, c, z)?;
    let hi = tricomi_u_scaled(0.5, c + 1.0, z)?;
    let t = z * hi.ratio(&lo);
    Ok((t - (c - 0.5), t + (c - 0.5).abs()))
}

/// ž_n(ν): unique positive zero of z ↦ U(−1/2, n−ν+1, z), which lies below n − ν + 1.
pub fn crossing_z(n: i64, nu: f64) -> Result<f64> {
    check_flux(nu)?;
    let c = n as f64 - nu + 1.0;
    if n < 0 || c <= 0.0 {
        return Err(Error::InvalidArgument(format!("crossing needs n >= 0 and n - nu + 1 > 0 (n = {n}, nu = {nu})")));
    }
    let f = |z: f64| signed_ratio(c, z).map(|r| r.0);
    let f_hi = f(c)?;
    let mut lo = LEFT_END;
    let mut f_lo = f(lo)?;
    while f_lo.signum() == f_hi.signum() && lo > LEFT_END_FLOOR {
        lo *= 0.1;
        f_lo = f(lo)?;
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi: c, f_lo, f_hi });
    }
    brent(f, lo, c, Z_TOL, 200)
}

pub fn crossing(n: i64, nu: f64) -> Result<CrossingPoint> {
    let z = crossing_z(n, nu)?;
    let m = n as f64 - nu;
    let c = m + 1.0;
    let lambda_at_z = exterior_eigenvalue_shifted(m, z)?;
    let next = exterior_eigenvalue_shifted(m + 1.0, z)?;
    let (val, scale) = signed_ratio(c, z)?;
    Ok(CrossingPoint {
        n,
        nu,
        z,
        lambda_at_z,
        g_residual: (lambda_at_z - (c - z)).abs(),
        defining_residual: val.abs() / scale,
        curve_residual: (lambda_at_z - next).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeMinimum {
    pub n: i64,
    pub nu: f64,
    pub z_star: f64,
    pub lambda_min: f64,
    /// Closed value (n − ν − z*)/z*.
    pub second_deriv: f64,
    /// Five-point difference of λ̌′ₙ at z*.
    pub second_deriv_fd: f64,
    /// λ̌′ₙ(z*).
    pub slope: f64,
}

const FD_STEP: f64 = 1e-4;

/// λ̌ₙ attains its minimum at ž_{n−1}(ν).
pub fn minimum_of_mode(n: i64, nu: f64) -> Result<ModeMinimum> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("minimum_of_mode needs n >= 1, got {n}")));
    }
    let z = crossing_z(n - 1, nu)?;
    let m = n as f64 - nu;
    let d = |x: f64| exterior_eigenvalue_dz_shifted(m, x);
    let h = FD_STEP;
    // Differencing λ̌′ rather than λ̌: the second difference of λ̌ loses ~ε/h² to rounding.
    let fd = (-d(z + 2.0 * h)? + 8.0 * d(z + h)? - 8.0 * d(z - h)? + d(z - 2.0 * h)?) / (12.0 * h);
    Ok(ModeMinimum {
        n,
        nu,
        z_star: z,
        lambda_min: exterior_eigenvalue_shifted(m, z)?,
        second_deriv: (m - z) / z,
        second_deriv_fd: fd,
        slope: d(z)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub n: i64,
    pub z: f64,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub nu: f64,
    pub crossings: Vec<CrossingPoint>,
    pub violations: Vec<Violation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const GRID: usize = 100;

/// Checks ž₀ < … < ž_{n_max}, that λ̌ₙ increases on [ž_{n−1}, ž_n] and that the ground
/// state there is mode n.
pub fn crossing_monotonicity(n_max: i64, nu: f64) -> Result<MonotonicityReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max = {n_max} < 2")));
    }
    let crossings = (0..=n_max)
        .into_par_iter()
        .map(|n| crossing(n, nu))
        .collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    for w in crossings.windows(2) {
        if !(w[1].z > w[0].z) {
            violations.push(Violation { n: w[1].n, z: w[1].z, what: format!("crossing not above previous ({})", w[0].z) });
        }
    }
    let per_mode: Vec<Vec<Violation>> = (1..=n_max as usize)
        .into_par_iter()
        .map(|k| -> Result<Vec<Violation>> {
            let n = k as i64;
            let (lo, hi) = (crossings[k - 1].z, crossings[k].z);
            let m = n as f64 - nu;
            let mut out = Vec::new();
            let mut prev = f64::NEG_INFINITY;
            for i in 0..GRID {
                let z = lo + (hi - lo) * i as f64 / (GRID - 1) as f64;
                let v = exterior_eigenvalue_shifted(m, z)?;
                if v < prev {
                    out.push(Violation { n, z, what: format!("decrease {prev} -> {v}") });
                }
                prev = v;
                if i > 0 && i + 1 < GRID {
                    let g = ground_state(z, nu)?;
                    if g.n_min != n {
                        out.push(Violation { n, z, what: format!("ground state in mode {}", g.n_min) });
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    violations.extend(per_mode.into_iter().flatten());
    Ok(MonotonicityReport { nu, crossings, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_crossings_match_reference() {
        // 30-digit evaluations of the root of U(−1/2, n+1, z).
        let reference = [(0, 0.195_303_622_857_1), (1, 0.842_705_205_249_8), (2, 1.586_067_634_039_3), (5, 4.021_182_632_269_0)];
        for (n, z) in reference {
            let c = crossing(n, 0.0).unwrap();
            assert!((c.z - z).abs() < 1e-10, "n = {n}: {} vs {z}", c.z);
            assert!(c.z < n as f64 + 1.0);
            assert!(c.g_residual < 1e-8 && c.curve_residual < 1e-8 && c.defining_residual < 1e-9);
        }
    }

    #[test]
    fn half_flux_ground_mode_has_no_crossing() {
        // c = 1/2: U(−1/2, 1/2, z) = z^{1/2}·U(0, 3/2, z) = √z, which never vanishes.
        assert!(matches!(crossing(0, 0.5), Err(Error::Bracket { .. })));
        assert!(crossing(1, 0.5).is_ok());
    }

    #[test]
    fn minimum_structure() {
        let mm = minimum_of_mode(3, 0.0).unwrap();
        assert!(mm.slope.abs() < 1e-8);
        assert!(mm.second_deriv > 0.0);
        assert!((mm.second_deriv - mm.second_deriv_fd).abs() < 1e-6, "{mm:?}");
        assert!(minimum_of_mode(0, 0.0).is_err());
    }
}
