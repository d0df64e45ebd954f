//! Identity-based checks of the special functions: contiguous relations, ODE residuals,
//! recurrences, positivity, large-argument behaviour and external reference values.

use magsteklov::specfun::parabolic::parabolic_d_with;
use magsteklov::specfun::quad::Quadrature;
use magsteklov::specfun::tricomi::{tricomi_u_dz_scaled, tricomi_u_scaled, tricomi_u_scaled_with};
use magsteklov::specfun::{alpha_root, kummer_m, kummer_m_dz, parabolic_d, tricomi_u, tricomi_u_dz, SpecParams};

fn u(a: f64, c: f64, z: f64) -> f64 {
    tricomi_u(SpecParams::new(a, c, z)).unwrap().value
}

fn m(a: f64, c: f64, z: f64) -> f64 {
    kummer_m(SpecParams::new(a, c, z)).unwrap().value
}

fn d(mu: f64, z: f64) -> f64 {
    parabolic_d(mu, z).unwrap().value
}

fn rel_residual(terms: &[f64]) -> f64 {
    let scale = terms.iter().fold(0.0_f64, |s, t| s.max(t.abs()));
    terms.iter().sum::<f64>().abs() / scale
}

const ZS: [f64; 4] = [0.1, 1.0, 10.0, 100.0];

#[test]
pub fn contiguous_relation_a() {
    // U(a,c,z) − U(a,c−1,z) − a U(a+1,c,z) = 0
    for a in [0.5, 1.5] {
        for c in 2..=12 {
            let c = c as f64;
            for z in ZS {
                let r = rel_residual(&[u(a, c, z), -u(a, c - 1.0, z), -a * u(a + 1.0, c, z)]);
                assert!(r <= 1e-9, "a={a} c={c} z={z}: {r:e}");
            }
        }
    }
}

#[test]
pub fn contiguous_relation_b() {
    // U(a−1,c,z) + (c−a) U(a,c,z) − z U(a,c+1,z) = 0; a − 1 = −1/2 uses the a = −1/2 route.
    for a in [0.5, 1.5] {
        for c in 2..=12 {
            let c = c as f64;
            for z in ZS {
                let r = rel_residual(&[u(a - 1.0, c, z), (c - a) * u(a, c, z), -z * u(a, c + 1.0, z)]);
                assert!(r <= 1e-9, "a={a} c={c} z={z}: {r:e}");
            }
        }
    }
}

#[test]
pub fn kummer_ode_residual() {
    // z M″ + (c − z) M′ − a M = 0 with M′, M″ from the shift identity.
    for a in [-0.5, 0.5, 1.5] {
        for c in [1.0, 1.75, 2.0, 5.0, 11.0] {
            for z in [0.05, 0.7, 3.0, 12.0] {
                let m1 = a / c * m(a + 1.0, c + 1.0, z);
                let m2 = a * (a + 1.0) / (c * (c + 1.0)) * m(a + 2.0, c + 2.0, z);
                let r = rel_residual(&[z * m2, (c - z) * m1, -a * m(a, c, z)]);
                assert!(r <= 1e-8, "a={a} c={c} z={z}: {r:e}");
            }
        }
    }
}

#[test]
pub fn tricomi_ode_residual() {
    // same ODE; U′ = −a U(a+1,c+1), U″ = a(a+1) U(a+2,c+2)
    for a in [0.5, 1.5] {
        for c in [-2.5, 0.5, 1.0, 2.0, 3.75, 9.0] {
            for z in [0.0005, 0.05, 0.7, 3.0, 40.0] {
                let u1 = -a * u(a + 1.0, c + 1.0, z);
                let u2 = a * (a + 1.0) * u(a + 2.0, c + 2.0, z);
                let r = rel_residual(&[z * u2, (c - z) * u1, -a * u(a, c, z)]);
                assert!(r <= 1e-8, "a={a} c={c} z={z}: {r:e}");
            }
        }
    }
}

#[test]
pub fn parabolic_ode_residual() {
    // D′_μ = z D_μ/2 − D_{μ+1} and D′_{μ+1} = −z D_{μ+1}/2 + (μ+1) D_μ give
    // D″_μ = D_μ/2 + z D′_μ/2 − D′_{μ+1}; then D″ + (μ + 1/2 − z²/4) D = 0.
    for mu in [-1.5, -0.5] {
        for i in 0..=24 {
            let z = -3.0 + 0.25 * i as f64;
            let (w, w_up) = (d(mu, z), d(mu + 1.0, z));
            let w1 = 0.5 * z * w - w_up;
            let w_up1 = -0.5 * z * w_up + (mu + 1.0) * w;
            let w2 = 0.5 * w + 0.5 * z * w1 - w_up1;
            let r = w2 + (mu + 0.5 - 0.25 * z * z) * w;
            assert!(r.abs() <= 1e-8, "mu={mu} z={z}: {r:e}");
        }
    }
}

#[test]
pub fn parabolic_first_order_recurrences_agree() {
    // z D_μ/2 − D_{μ+1} = −z D_μ/2 + μ D_{μ−1}
    for mu in [-1.5, -2.5] {
        for z in [-3.0, -1.0, 0.0, 0.5, 2.0, 3.0] {
            let lhs = 0.5 * z * d(mu, z) - d(mu + 1.0, z);
            let rhs = -0.5 * z * d(mu, z) + mu * d(mu - 1.0, z);
            assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()), "mu={mu} z={z}");
        }
    }
}

#[test]
pub fn parabolic_recurrence_at_minus_half() {
    let z = -0.5;
    let r = d(0.5, z) - z * d(-0.5, z) - 0.5 * d(-1.5, z);
    assert!(r.abs() <= 1e-10);
}

#[test]
pub fn positivity() {
    for a in [0.25, 0.5, 1.5, 3.0] {
        for c in [-4.0, -0.5, 0.5, 1.0, 2.5, 30.0] {
            for z in [1e-6, 1e-3, 0.2, 5.0, 300.0] {
                let v = tricomi_u(SpecParams::new(a, c, z)).unwrap();
                assert!(v.value - v.abs_err > 0.0, "U({a},{c},{z}) = {v:?}");
            }
        }
    }
    for mu in [-0.25, -0.5, -1.5, -3.0] {
        for z in [-4.0, -1.0, 0.0, 2.0, 8.0] {
            let v = parabolic_d(mu, z).unwrap();
            assert!(v.value - v.abs_err > 0.0, "D_{mu}({z}) = {v:?}");
        }
    }
}

#[test]
pub fn asymptotic_sandwich() {
    // |z^a U(a,c,z) − 1| ≤ 2|a(a+1−c)|/z for z ≥ 100
    for a in [0.5, 1.5] {
        for c in [1.0, 2.0, 5.0, 12.0] {
            for z in [100.0_f64, 400.0, 1e4] {
                let dev = (z.powf(a) * u(a, c, z) - 1.0).abs();
                let bound = 2.0 * (a * (a + 1.0 - c)).abs() / z;
                assert!(dev <= bound, "a={a} c={c} z={z}: {dev:e} > {bound:e}");
            }
        }
    }
    let z: f64 = 1e4;
    assert!((z.sqrt() * u(0.5, 2.0, z) - 1.0).abs() <= 1e-3);
}

#[test]
pub fn uniform_large_index_law() {
    // n/z + U′(1/2,n+1,z)/U(1/2,n+1,z) ∈ [1 − C/n, 1 + C/n]
    let mut c_fit: f64 = 0.0;
    for n in [50, 100, 200, 350, 500] {
        for z in [1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0] {
            let nf = n as f64;
            // U itself overflows here (≈ e^7000 at n = 500, z = 1e-4); use the scaled ratio.
            let up = tricomi_u_dz_scaled(0.5, nf + 1.0, z).unwrap();
            let q = nf / z + up.ratio(&tricomi_u_scaled(0.5, nf + 1.0, z).unwrap());
            c_fit = c_fit.max(nf * (q - 1.0).abs());
        }
    }
    println!("uniform large-n law: fitted C = {c_fit:.4}");
    assert!(c_fit < 1.0, "{c_fit}");
}

#[test]
pub fn derivatives_match_finite_differences() {
    let h = 1e-6;
    let (a, c, z) = (0.5, 3.0, 2.0);
    let fd = (u(a, c, z + h) - u(a, c, z - h)) / (2.0 * h);
    let du = tricomi_u_dz(SpecParams::new(a, c, z)).unwrap().value;
    assert!((fd - du).abs() <= 1e-8 * (1.0 + du.abs()));
    assert!(du < 0.0);
    let (a, c, z) = (0.5, 2.0, 0.7);
    let fd = (m(a, c, z + h) - m(a, c, z - h)) / (2.0 * h);
    let dm = kummer_m_dz(SpecParams::new(a, c, z)).unwrap().value;
    assert!((fd - dm).abs() <= 1e-8 * (1.0 + dm.abs()));
}

/// Double-double accumulator: (hi, lo) with |lo| ≤ ulp(hi)/2.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }
    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.0, o.0);
        let t = s.1 + self.1 + o.1;
        Dd::two_sum(s.0, t)
    }
    fn mul_f(self, x: f64) -> Dd {
        let p = self.0 * x;
        let e = self.0.mul_add(x, -p);
        Dd::two_sum(p, e + self.1 * x)
    }
    fn div_f(self, x: f64) -> Dd {
        let q = self.0 / x;
        let r = Dd::two_sum(self.0, -(q * x)).add(Dd(-q.mul_add(x, -(q * x)), self.1));
        Dd::two_sum(q, r.0 / x)
    }
}

fn kummer_dd(a: f64, c: f64, z: f64) -> f64 {
    let mut term = Dd(1.0, 0.0);
    let mut sum = term;
    for k in 0..200 {
        let kf = k as f64;
        term = term.mul_f(a + kf).mul_f(z).div_f((c + kf) * (kf + 1.0));
        sum = sum.add(term);
    }
    sum.0 + sum.1
}

#[test]
pub fn kummer_against_extended_precision() {
    // external 30-digit value and an in-test double-double summation
    let reference = 1.328_191_827_486_684_9;
    let v = m(0.5, 2.0, 1.0);
    assert!((v - reference).abs() <= 1e-12);
    assert!((v - kummer_dd(0.5, 2.0, 1.0)).abs() <= 1e-12);
    let dm = kummer_m_dz(SpecParams::new(0.5, 2.0, 1.0)).unwrap().value;
    assert!((dm - 0.425_195_826_890_405_5).abs() <= 1e-12);
    assert!((dm - 0.25 * kummer_dd(1.5, 3.0, 1.0)).abs() <= 1e-12);
}

#[test]
pub fn tricomi_reference_values() {
    let tight = Quadrature::default().tightened();
    let fine = tricomi_u_scaled_with(0.5, 2.0, 1.0, &tight).unwrap().value();
    let v = u(0.5, 2.0, 1.0);
    assert!((v - fine).abs() <= 1e-10);
    assert!((v - 1.200_346_934_790_947_7).abs() <= 1e-12);
    let du = tricomi_u_dz(SpecParams::new(0.5, 2.0, 1.0)).unwrap().value;
    assert!((du + 0.5 * u(1.5, 3.0, 1.0)).abs() <= 1e-15);
    assert!((du + 0.770_403_614_970_443_4).abs() <= 1e-12);
}

#[test]
pub fn alpha_and_half_order_zero() {
    let start = std::time::Instant::now();
    let a = alpha_root().unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert!((a - 0.764_950_867_3).abs() <= 1e-8);
    assert!(d(0.5, -a).abs() <= 1e-8);
    let tight = Quadrature::default().tightened();
    let d0 = parabolic_d_with(-0.5, 0.0, &tight).unwrap().value;
    assert!((d0 - 1.216_280_214_257_520_3).abs() <= 1e-12);
}
