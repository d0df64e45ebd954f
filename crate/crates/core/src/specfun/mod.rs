//! Special functions: Γ, Kummer M, Tricomi U and parabolic cylinder D.

pub mod gamma;
pub mod kummer;
pub mod parabolic;
pub mod quad;
pub mod tricomi;

pub use gamma::{digamma, gamma, ln_gamma_signed, recip_gamma};
pub use kummer::{kummer_m, kummer_m_dz, kummer_m_zero};
pub use parabolic::{alpha, alpha_root, parabolic_d};
pub use quad::Quadrature;
pub use tricomi::{tricomi_u, tricomi_u_dz, tricomi_u_scaled, Scaled};

/// A function value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunValue {
    pub value: f64,
    pub abs_err: f64,
}

impl FunValue {
    pub fn new(value: f64, abs_err: f64) -> Self {
        Self { value, abs_err: abs_err.abs() }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self::new(self.value * factor, self.abs_err * factor)
    }

    pub fn rel_err(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.abs_err / self.value.abs()
        }
    }
}

/// Parameters (a, c, z) of a confluent hypergeometric function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecParams {
    pub a: f64,
    pub c: f64,
    pub z: f64,
}

impl SpecParams {
    pub fn new(a: f64, c: f64, z: f64) -> Self {
        Self { a, c, z }
    }
}
