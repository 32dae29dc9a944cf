//! Gauge structure of the twisted torus: transition functions, Polyakov
//! loops, the cocycle condition and the boundary-condition residual.
//!
//! Wave functions on the torus obey
//! `Ψ(x+Lx, y) = exp(iθx - 2πi f y/Ly) Ψ(x, y)` and
//! `Ψ(x, y+Ly) = exp(iθy) Ψ(x, y)`, with `f = eB Lx Ly / 2π`. Both orders of
//! applying the two shifts agree only if `f` is an integer.

use serde::{Deserialize, Serialize};

use crate::config::{MagneticSystem, TorusConfig};
use crate::error::{Error, Result};
use crate::torus_states::SampledState;
use crate::{C64, TAU};

/// Torus data with a flux that is allowed to be non-integer. Only used to
/// show what goes wrong without flux quantization; everything physical is
/// built from a [`TorusConfig`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusGeometry {
    pub mass: f64,
    pub charge: f64,
    pub lx: f64,
    pub ly: f64,
    /// `eB Lx Ly / 2π`
    pub flux: f64,
    pub theta_x: f64,
    pub theta_y: f64,
}

impl TorusGeometry {
    /// Integer flux, if the flux is one.
    pub fn nphi(&self) -> Result<u32> {
        let r = self.flux.round();
        if (self.flux - r).abs() < 1e-12 * self.flux.abs().max(1.0) && r >= 1.0 {
            Ok(r as u32)
        } else {
            Err(Error::InvalidParameter(format!(
                "flux {} is not a positive integer",
                self.flux
            )))
        }
    }

    /// Same torus with the flux replaced (field rescaled accordingly).
    pub fn with_flux(&self, flux: f64) -> Self {
        Self { flux, ..*self }
    }

    /// `(Lx/f, Ly/f)`.
    pub fn steps(&self) -> (f64, f64) {
        (self.lx / self.flux, self.ly / self.flux)
    }

    /// Phase picked up by `Ψ` under `x -> x + Lx` at height `y`.
    pub fn x_boundary_phase(&self, y: f64) -> C64 {
        C64::from_polar(1.0, self.theta_x - TAU * self.flux * y / self.ly)
    }

    /// Phase picked up by `Ψ` under `y -> y + Ly`.
    pub fn y_boundary_phase(&self) -> C64 {
        C64::from_polar(1.0, self.theta_y)
    }
}

impl From<&TorusConfig> for TorusGeometry {
    fn from(c: &TorusConfig) -> Self {
        Self {
            mass: c.mass(),
            charge: c.charge(),
            lx: c.lx(),
            ly: c.ly(),
            flux: c.nphi() as f64,
            theta_x: c.theta_x(),
            theta_y: c.theta_y(),
        }
    }
}

impl From<TorusConfig> for TorusGeometry {
    fn from(c: TorusConfig) -> Self {
        (&c).into()
    }
}

impl MagneticSystem for TorusGeometry {
    fn mass(&self) -> f64 {
        self.mass
    }
    fn charge(&self) -> f64 {
        self.charge
    }
    fn field(&self) -> f64 {
        TAU * self.flux / (self.charge * self.lx * self.ly)
    }
}

/// Gauge functions gluing the torus edges:
/// `φx(y) = θx/e - B Lx y`, `φy(x) = θy/e`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionFunctions {
    charge: f64,
    field: f64,
    lx: f64,
    theta_x: f64,
    theta_y: f64,
}

impl TransitionFunctions {
    pub fn standard(geom: &TorusGeometry) -> Self {
        Self {
            charge: geom.charge,
            field: geom.field(),
            lx: geom.lx,
            theta_x: geom.theta_x,
            theta_y: geom.theta_y,
        }
    }

    pub fn phi_x(&self, y: f64) -> f64 {
        self.theta_x / self.charge - self.field * self.lx * y
    }

    pub fn phi_y(&self, _x: f64) -> f64 {
        self.theta_y / self.charge
    }
}

/// `φy(x+Lx) + φx(y) - φx(y+Ly) - φy(x)`; equals `2π nΦ / e`.
pub fn cocycle_defect(tf: &TransitionFunctions, geom: &TorusGeometry, x: f64, y: f64) -> f64 {
    tf.phi_y(x + geom.lx) + tf.phi_x(y) - tf.phi_x(y + geom.ly) - tf.phi_y(x)
}

/// `exp(ie Φx(y)) = exp(i eB Lx y - iθx)`.
pub fn polyakov_phase_x(geom: &TorusGeometry, y: f64) -> C64 {
    C64::from_polar(1.0, geom.charge * geom.field() * geom.lx * y - geom.theta_x)
}

/// `exp(ie Φy(x)) = exp(i eB Ly x - iθy)`.
pub fn polyakov_phase_y(geom: &TorusGeometry, x: f64) -> C64 {
    C64::from_polar(1.0, geom.charge * geom.field() * geom.ly * x - geom.theta_y)
}

/// `|exp(-ie B Lx Ly) - 1|`: mismatch between the two orders of applying the
/// boundary shifts, relative to `|Ψ|`.
pub fn boundary_consistency_defect(geom: &TorusGeometry) -> f64 {
    (C64::from_polar(1.0, -TAU * geom.flux) - 1.0).norm()
}

/// Sup-norm violation of the twisted boundary conditions on the boundary
/// lines of a closed sampled state, relative to the state's sup norm.
/// The zero state has residual 0.
pub fn boundary_residual(state: &SampledState) -> Result<f64> {
    if !state.is_closed() {
        return Err(Error::MissingBoundary);
    }
    let geom = state.geometry();
    let (nx, ny) = state.intervals();
    let scale = state.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let hy = geom.ly / ny as f64;
    let mut worst: f64 = 0.0;
    for j in 0..=ny {
        let y = j as f64 * hy;
        let d = state.stored(nx, j) - geom.x_boundary_phase(y) * state.stored(0, j);
        worst = worst.max(d.norm());
    }
    let py = geom.y_boundary_phase();
    for i in 0..=nx {
        let d = state.stored(i, ny) - py * state.stored(i, 0);
        worst = worst.max(d.norm());
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn geom(nphi: u32, e: f64, tx: f64, ty: f64) -> TorusGeometry {
        TorusConfig::new(1.0, e, 1.3, 0.8, nphi, tx, ty)
            .unwrap()
            .into()
    }

    #[test]
    fn polyakov_values() {
        let g = geom(2, 1.0, 0.0, 0.0);
        assert!((polyakov_phase_x(&g, 0.0) - 1.0).norm() < 1e-15);
        let g = geom(2, 1.0, PI, 0.0);
        assert!((polyakov_phase_x(&g, 0.0) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn polyakov_periodicity() {
        let g = geom(3, 1.7, 0.4, 2.2);
        let (ax, ay) = g.steps();
        for k in 0..20 {
            let s = 0.173 * k as f64;
            assert!((polyakov_phase_x(&g, s) - polyakov_phase_x(&g, s + 2.0 * ay)).norm() < 1e-12);
            assert!((polyakov_phase_y(&g, s) - polyakov_phase_y(&g, s - ax)).norm() < 1e-12);
            assert!((polyakov_phase_x(&g, s).norm() - 1.0).abs() < 1e-15);
        }
        let shifted = TorusGeometry {
            theta_x: g.theta_x + TAU,
            ..g
        };
        assert!((polyakov_phase_x(&g, 0.3) - polyakov_phase_x(&shifted, 0.3)).norm() < 1e-12);
    }

    #[test]
    fn cocycle_is_flux() {
        let g = geom(1, 1.0, 0.3, 0.1);
        let tf = TransitionFunctions::standard(&g);
        assert!((cocycle_defect(&tf, &g, 0.0, 0.0) - TAU).abs() < 1e-12);
        let g = geom(3, 2.0, 0.3, 0.1);
        let tf = TransitionFunctions::standard(&g);
        let reference = cocycle_defect(&tf, &g, 0.0, 0.0);
        assert!((reference - 3.0 * PI).abs() < 1e-12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let (x, y) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            assert!((cocycle_defect(&tf, &g, x, y) - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn consistency_needs_integer_flux() {
        let g = geom(2, 1.0, 0.0, 0.0);
        assert!(boundary_consistency_defect(&g) < 1e-12);
        assert!(boundary_consistency_defect(&g.with_flux(2.5)) > 1.9);
        assert!(g.with_flux(2.5).nphi().is_err());
        assert_eq!(g.nphi().unwrap(), 2);
    }
}
