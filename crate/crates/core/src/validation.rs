//! Analytic validation modes: coefficient sets with known spectra, outside
//! the α > 2 family (constant diffusion is permitted here on purpose).

use crate::operator::RadialCoefficients;

/// a ≡ 1 with a power-law potential V = scale · r^power.
#[derive(Debug, Clone, Copy)]
pub struct ConstantDiffusion {
    pub potential_scale: f64,
    pub potential_power: f64,
}

impl RadialCoefficients for ConstantDiffusion {
    fn diffusion(&self, _r: f64) -> f64 {
        1.0
    }

    fn potential(&self, r: f64) -> f64 {
        if self.potential_scale == 0.0 {
            0.0
        } else {
            self.potential_scale * r.powf(self.potential_power)
        }
    }

    fn inverse_diffusion(&self, _r: f64) -> f64 {
        1.0
    }
}

/// Pure Laplacian: ℓ = 0 ground level on a ball of radius R is −π²/R².
pub fn laplacian() -> ConstantDiffusion {
    ConstantDiffusion { potential_scale: 0.0, potential_power: 0.0 }
}

/// Harmonic oscillator Δ − r²: ℓ = 0 levels −(4k+3) in dimension 3.
pub fn harmonic() -> ConstantDiffusion {
    ConstantDiffusion { potential_scale: 1.0, potential_power: 2.0 }
}
