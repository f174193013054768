//! Hydrogen 2s → 3p transition dipole (atomic units).

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate_semi_infinite, QuadratureConfig};

/// Normalized radial functions, r in Bohr radii.
pub fn r20(r: f64) -> f64 {
    std::f64::consts::FRAC_1_SQRT_2 * (1.0 - 0.5 * r) * (-0.5 * r).exp()
}

pub fn r31(r: f64) -> f64 {
    8.0 / (27.0 * 6f64.sqrt()) * r * (1.0 - r / 6.0) * (-r / 3.0).exp()
}

/// ∫₀^∞ R₃₁ r R₂₀ r² dr in a₀ (sign dropped).
pub fn radial_integral_2s3p() -> f64 {
    let cfg = QuadratureConfig::default().with_tolerances(1e-13, 1e-15);
    integrate_semi_infinite(|r: f64| r31(r) * r20(r) * r.powi(3), &cfg).value.abs()
}

/// Dipole magnitudes for 2s → 3p with m = ±1 along the direction of motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydrogenDipole {
    pub radial: f64,
    /// (|d_x|, |d_y|, |d_z|) in e·a₀.
    pub dipoles: [f64; 3],
}

/// |⟨1, ±1| x̂ |0, 0⟩| = |⟨1, ±1| ŷ |0, 0⟩| = 1/√6 and the z element vanishes.
pub fn hydrogen_dipole_2s3p() -> HydrogenDipole {
    let radial = radial_integral_2s3p();
    let d = radial / 6f64.sqrt();
    HydrogenDipole { radial, dipoles: [d, d, 0.0] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Composite Simpson on [0, 120] a₀ with a fine uniform grid.
    fn simpson(f: impl Fn(f64) -> f64) -> f64 {
        let (b, n) = (120.0, 400_000usize);
        let h = b / n as f64;
        let mut s = f(0.0) + f(b);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn wavefunctions_are_normalized() {
        let cfg = QuadratureConfig::default().with_tolerances(1e-13, 1e-15);
        for f in [r20 as fn(f64) -> f64, r31] {
            let norm = integrate_semi_infinite(|r: f64| f(r).powi(2) * r * r, &cfg).value;
            assert!((norm - 1.0).abs() < 1e-8);
            assert!((simpson(|r| f(r).powi(2) * r * r) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn radial_integral_matches_brute_force() {
        let brute = simpson(|r| r31(r) * r20(r) * r.powi(3)).abs();
        let adaptive = radial_integral_2s3p();
        assert_relative_eq!(adaptive, brute, max_relative = 1e-9);
        assert_relative_eq!(adaptive, 3.0648, max_relative = 1e-4);
    }

    #[test]
    fn angular_selection() {
        let d = hydrogen_dipole_2s3p();
        assert_eq!(d.dipoles[2], 0.0);
        assert_eq!(d.dipoles[0], d.dipoles[1]);
        assert_relative_eq!(2.0 * d.dipoles[0].powi(2), d.radial.powi(2) / 3.0, max_relative = 1e-14);
    }
}
