//! Adaptive Gauss–Kronrod (10/21) quadrature of positive, log-scaled integrands on (0, ∞).
//!
//! The integrand is supplied through its logarithm `g(u)` together with the location of
//! its maximum. The driver normalises by `exp(g(peak))`, locates the region where the
//! integrand is within `e^{-TAIL_DROP}` of the peak, splits it into geometrically growing
//! panels around the peak and then bisects the panel with the largest error until the
//! global error estimate meets the relative tolerance.

use crate::error::{Error, Result};

/// Adaptive rule configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Quadrature {
    pub fn new(rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-6) {
            return Err(Error::InvalidArgument(format!(
                "quadrature rel_tol {rel_tol} outside (0, 1e-6]"
            )));
        }
        if max_subdivisions < 1 {
            return Err(Error::InvalidArgument("max_subdivisions must be >= 1".into()));
        }
        Ok(Self { rel_tol, max_subdivisions })
    }

    /// Same rule with the tolerance halved; used by oracle re-runs.
    pub fn tightened(&self) -> Self {
        Self { rel_tol: self.rel_tol * 0.5, max_subdivisions: self.max_subdivisions * 2 }
    }
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_subdivisions: 2000 }
    }
}

/// Integral value `value * exp(ln_scale)` with absolute error `abs_err * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaled {
    pub value: f64,
    pub ln_scale: f64,
    pub abs_err: f64,
}

// Panels are dropped once the integrand falls below e^{-TAIL_DROP} of its peak.
const TAIL_DROP: f64 = 75.0;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_906_116_980,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

/// One 21-point Kronrod panel with the embedded 10-point Gauss estimate.
pub(crate) fn gk21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = (fc * WGK[10]).abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs() + 50.0 * f64::EPSILON * abs_sum * half.abs();
    (value, err)
}

fn panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let (value, err) = gk21(f, lo, hi);
    Panel { lo, hi, value, err }
}

/// Adaptive integration of `f` over the given breakpoints.
pub(crate) fn integrate_panels<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    quad: &Quadrature,
) -> Result<(f64, f64)> {
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| panel(f, w[0], w[1]))
        .collect();
    if panels.is_empty() {
        return Err(Error::Quadrature("empty integration range".into()));
    }
    let mut subdivisions = 0usize;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Quadrature("non-finite integrand".into()));
        }
        if err <= quad.rel_tol * total.abs() || err == 0.0 {
            return Ok((total, err));
        }
        if subdivisions >= quad.max_subdivisions {
            return Err(Error::Quadrature(format!(
                "tolerance {:e} not met after {} subdivisions (estimate {:e} of {:e})",
                quad.rel_tol, subdivisions, err, total
            )));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.total_cmp(&b.1.err))
            .expect("nonempty");
        let worst = panels.swap_remove(idx);
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Panel has collapsed to adjacent floats; accept it as is.
            panels.push(Panel { err: 0.0, ..worst });
            continue;
        }
        panels.push(panel(f, worst.lo, mid));
        panels.push(panel(f, mid, worst.hi));
        subdivisions += 1;
    }
}

/// Integrates `exp(log_f(u))` over (0, ∞), where `peak` is the maximiser of `log_f`
/// on [0, ∞) (`0.0` when the integrand is nonincreasing).
pub fn integrate_log_density<G: Fn(f64) -> f64>(
    log_f: G,
    peak: f64,
    quad: &Quadrature,
) -> Result<LogScaled> {
    if !(peak >= 0.0 && peak.is_finite()) {
        return Err(Error::Quadrature(format!("invalid peak location {peak}")));
    }
    let mut reference = log_f(peak);
    if !reference.is_finite() {
        // Integrable endpoint singularity at 0 (or an inexact peak); step off it.
        let probe = if peak > 0.0 { peak } else { 1e-12 };
        reference = log_f(probe);
        if !reference.is_finite() {
            return Err(Error::Quadrature(format!("log-integrand not finite near {peak}")));
        }
    }
    let g = |u: f64| log_f(u) - reference;

    // Half-width: the offset d at which the integrand has dropped by about e^{-1}.
    let mut d = if peak > 0.0 { peak } else { 1.0 };
    if g(peak + d) < -1.0 {
        for _ in 0..2100 {
            d *= 0.5;
            if g(peak + d) >= -1.0 {
                break;
            }
        }
    } else {
        for _ in 0..2100 {
            if g(peak + d) < -1.0 {
                break;
            }
            d *= 2.0;
            if !d.is_finite() {
                return Err(Error::Quadrature("integrand does not decay".into()));
            }
        }
    }
    if !(d > 0.0) {
        return Err(Error::Quadrature("could not size the peak".into()));
    }

    let mut breaks = Vec::with_capacity(64);
    // Left side: panels peak - d·2^j down to where the integrand is negligible, then 0.
    let mut left = Vec::new();
    let mut step = d;
    loop {
        let u = peak - step;
        if u <= 0.0 {
            break;
        }
        left.push(u);
        if g(u) < -TAIL_DROP {
            break;
        }
        step *= 2.0;
    }
    breaks.push(0.0);
    breaks.extend(left.iter().rev());
    if peak > 0.0 {
        breaks.push(peak);
    }
    let mut step = d;
    loop {
        let u = peak + step;
        if !u.is_finite() {
            return Err(Error::Quadrature("integrand does not decay".into()));
        }
        breaks.push(u);
        if g(u) < -TAIL_DROP {
            break;
        }
        step *= 2.0;
    }

    let f = |u: f64| {
        let v = g(u);
        if v.is_nan() {
            0.0
        } else {
            v.exp()
        }
    };
    let (value, abs_err) = integrate_panels(&f, &breaks, quad)?;
    Ok(LogScaled { value, ln_scale: reference, abs_err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_and_gauss_exact_on_polynomials() {
        // G10 is exact to degree 19, K21 to degree 31.
        for deg in 0..=31 {
            let f = |x: f64| x.powi(deg);
            let exact = (1.0 - (-1f64).powi(deg + 1)) / (deg as f64 + 1.0);
            let (k, _) = gk21(&f, -1.0, 1.0);
            assert!((k - exact).abs() < 1e-14, "kronrod degree {deg}");
        }
        for deg in 0..=19 {
            let f = |x: f64| x.powi(deg);
            let (_, err) = gk21(&f, -1.0, 1.0);
            assert!(err < 1e-13, "gauss degree {deg}: err {err}");
        }
    }

    #[test]
    fn gaussian_half_line() {
        // ∫_0^∞ e^{-(u-3)^2} du = √π (1 + erf 3) / 2
        let q = Quadrature::default();
        let r = integrate_log_density(|u: f64| -(u - 3.0) * (u - 3.0), 3.0, &q).unwrap();
        let exact = 0.5 * std::f64::consts::PI.sqrt() * (1.0 + 0.999_977_909_503_001_4);
        let v = r.value * r.ln_scale.exp();
        assert!((v - exact).abs() < 1e-13 * exact, "{v} vs {exact}");
    }

    #[test]
    fn heavy_scaled_tail() {
        // ∫_0^∞ u^{-1/2} ... via u=s^2: 2∫ e^{-z s^2} ds = √(π/z), z = 1e-9.
        let z = 1e-9;
        let q = Quadrature::default();
        let r = integrate_log_density(|s: f64| 2f64.ln() - z * s * s, 0.0, &q).unwrap();
        let v = r.value * r.ln_scale.exp();
        let exact = (std::f64::consts::PI / z).sqrt();
        assert!((v / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(Quadrature::new(1e-3, 10).is_err());
        assert!(Quadrature::new(1e-10, 0).is_err());
        assert!(Quadrature::new(1e-10, 1).is_ok());
    }
}
