//! Infinite-plane physics: spectrum, energy eigenstates, ladder algebra,
//! coherent states and classical / semiclassical orbits.

mod coherent;
mod fock;
mod orbit;

pub use coherent::{
    coherent_amplitude, coherent_expectations, evolve_coherent, measure_expectations,
};
pub use coherent::{CoherentExpectations, CoherentLabel, CoherentState};
pub use fock::{fock_energy_and_angular_momentum, ladder_apply, FockLabel, FockState, Ladder};
pub use orbit::{wrap_into_torus, ClassicalOrbit};

use crate::config::MagneticSystem;
use crate::error::{Error, Result};
use crate::oscillator::{OscillatorBasis, DEFAULT_MAX_LEVEL};
use crate::plane::Amplitude;
use crate::C64;

/// `ω (n + 1/2)`.
pub fn landau_energy<S: MagneticSystem + ?Sized>(cfg: &S, n: usize) -> f64 {
    cfg.omega() * (n as f64 + 0.5)
}

/// Bohr-Sommerfeld radius `sqrt(2n / eB)`; requires `n >= 1`.
pub fn semiclassical_radius<S: MagneticSystem + ?Sized>(cfg: &S, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "semiclassical orbits need n >= 1".into(),
        ));
    }
    Ok((2.0 * n as f64 / cfg.mass_omega()).sqrt())
}

/// Bohr-Sommerfeld energy `nω`; requires `n >= 1`.
pub fn semiclassical_energy<S: MagneticSystem + ?Sized>(cfg: &S, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "semiclassical orbits need n >= 1".into(),
        ));
    }
    Ok(n as f64 * cfg.omega())
}

/// Orbit energy `M ω² r² / 2` for a given radius.
pub fn orbit_energy<S: MagneticSystem + ?Sized>(cfg: &S, radius: f64) -> f64 {
    0.5 * cfg.mass() * cfg.omega().powi(2) * radius * radius
}

fn basis_for<S: MagneticSystem + ?Sized>(cfg: &S, n: usize) -> Result<OscillatorBasis> {
    OscillatorBasis::new(cfg.mass_omega(), DEFAULT_MAX_LEVEL.max(n))
}

/// `ψ_n(x + p_y/Mω) exp(i p_y y)`: Landau level `n` with definite `p_y`.
#[derive(Clone, Copy, Debug)]
pub struct LandauPy {
    basis: OscillatorBasis,
    n: usize,
    p_y: f64,
}

/// `ψ_n(y - p_x/Mω) exp(i p_x x) exp(-i eB x y)`: Landau level `n` with
/// definite translation generator `P_x`.
#[derive(Clone, Copy, Debug)]
pub struct LandauPx {
    basis: OscillatorBasis,
    n: usize,
    p_x: f64,
}

pub fn eigenstate_py<S: MagneticSystem + ?Sized>(cfg: &S, n: usize, p_y: f64) -> Result<LandauPy> {
    Ok(LandauPy {
        basis: basis_for(cfg, n)?,
        n,
        p_y,
    })
}

pub fn eigenstate_px<S: MagneticSystem + ?Sized>(cfg: &S, n: usize, p_x: f64) -> Result<LandauPx> {
    Ok(LandauPx {
        basis: basis_for(cfg, n)?,
        n,
        p_x,
    })
}

impl Amplitude for LandauPy {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        let shift = self.p_y / self.basis.mass_frequency();
        C64::from_polar(self.basis.eval_unchecked(self.n, x + shift), self.p_y * y)
    }
}

impl Amplitude for LandauPx {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        let k = self.basis.mass_frequency();
        let shift = self.p_x / k;
        C64::from_polar(
            self.basis.eval_unchecked(self.n, y - shift),
            self.p_x * x - k * x * y,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InfiniteConfig;
    use crate::fd::{FieldParams, Operator};
    use crate::plane::PlaneGrid;

    #[test]
    fn spectrum_values() {
        assert_eq!(landau_energy(&InfiniteConfig::unit(), 0), 0.5);
        let cfg = InfiniteConfig::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(landau_energy(&cfg, 3), 7.0);
        for n in 0..100 {
            let gap = landau_energy(&cfg, n + 1) - landau_energy(&cfg, n);
            assert!((gap - cfg.omega()).abs() <= 4.0 * f64::EPSILON * landau_energy(&cfg, n + 1));
        }
    }

    #[test]
    fn semiclassical_values() {
        let cfg = InfiniteConfig::unit();
        assert_eq!(semiclassical_radius(&cfg, 2).unwrap(), 2.0);
        assert_eq!(semiclassical_energy(&cfg, 5).unwrap(), 5.0);
        assert!(semiclassical_radius(&cfg, 0).is_err());
        assert!(semiclassical_energy(&cfg, 0).is_err());
        let cfg = InfiniteConfig::new(1.3, 0.7, 2.1).unwrap();
        for n in 1..20 {
            let r = semiclassical_radius(&cfg, n).unwrap();
            let e = semiclassical_energy(&cfg, n).unwrap();
            assert!((orbit_energy(&cfg, r) - e).abs() < 1e-12 * e);
            assert!((e - landau_energy(&cfg, n) + cfg.omega() / 2.0).abs() < 1e-12 * e);
        }
    }

    #[test]
    fn eigenstates_at_origin() {
        let cfg = InfiniteConfig::new(1.0, 1.0, 2.0).unwrap();
        let basis = OscillatorBasis::new(2.0, 4).unwrap();
        let s = eigenstate_py(&cfg, 0, 0.0).unwrap().amplitude(0.0, 0.0);
        assert_eq!(s.im, 0.0);
        assert!((s.re - basis.eval(0, 0.0).unwrap()).abs() < 1e-15 && s.re > 0.0);
        let s = eigenstate_px(&cfg, 0, 0.0).unwrap().amplitude(0.0, 0.0);
        assert!((s - basis.eval(0, 0.0).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn py_shift_is_translation() {
        let cfg = InfiniteConfig::new(1.0, 1.0, 1.5).unwrap();
        let s = 0.8;
        let p_y = cfg.mass_omega() * s;
        let shifted = eigenstate_py(&cfg, 2, p_y).unwrap();
        let base = eigenstate_py(&cfg, 2, 0.0).unwrap();
        for &(x, y) in &[(0.1, 0.2), (-1.0, 3.0), (0.7, -0.4)] {
            let expect = base.amplitude(x + s, y) * C64::from_polar(1.0, p_y * y);
            assert!((shifted.amplitude(x, y) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn energy_residuals() {
        let cfg = InfiniteConfig::new(1.0, 1.0, 1.0).unwrap();
        let p = FieldParams::of(&cfg);
        let grid = PlaneGrid::centered((0.0, 0.0), 9.0, 0.03);
        for n in 0..3 {
            let e = C64::from(landau_energy(&cfg, n));
            let s = grid.sample(&eigenstate_py(&cfg, n, 0.4).unwrap());
            assert!(s.eigen_residual(Operator::H, p, e).unwrap() < 1e-6);
            // the P_x state is a plane wave in x whose local wavenumber grows
            // like eB y, so it gets a narrow, finer window
            let strip = PlaneGrid {
                x0: -1.5,
                y0: -9.0,
                hx: 0.01,
                hy: 0.01,
                nx: 301,
                ny: 1801,
            };
            let s = strip.sample(&eigenstate_px(&cfg, n, -0.3).unwrap());
            assert!(s.eigen_residual(Operator::H, p, e).unwrap() < 1e-6);
        }
    }
}
