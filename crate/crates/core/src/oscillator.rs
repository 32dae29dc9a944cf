//! Normalized one-dimensional harmonic-oscillator eigenfunctions and
//! uniform-grid quadrature.

use crate::error::{Error, Result};
use crate::C64;

/// Default highest level for bases built by the rest of the crate.
pub const DEFAULT_MAX_LEVEL: usize = 64;

/// Eigenfunctions `ψ_n` of `p²/2M + Mω²u²/2`, parametrized by `Mω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatorBasis {
    mass_frequency: f64,
    max_level: usize,
}

impl OscillatorBasis {
    pub fn new(mass_frequency: f64, max_level: usize) -> Result<Self> {
        if !(mass_frequency.is_finite() && mass_frequency > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "M*omega must be > 0, got {mass_frequency}"
            )));
        }
        Ok(Self {
            mass_frequency,
            max_level,
        })
    }

    pub fn mass_frequency(&self) -> f64 {
        self.mass_frequency
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// Oscillator length `1/sqrt(Mω)`.
    pub fn length(&self) -> f64 {
        1.0 / self.mass_frequency.sqrt()
    }

    /// Half-width beyond which `ψ_n` is below ~1e-14 of its scale: turning
    /// point plus eight oscillator lengths.
    pub fn cutoff(&self, n: usize) -> f64 {
        ((2.0 * n as f64 + 1.0).sqrt() + 8.0) * self.length()
    }

    /// Grid spacing giving 12 points per oscillator length.
    pub fn recommended_step(&self) -> f64 {
        self.length() / 12.0
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_level {
            Err(Error::LevelOutOfRange {
                level: n,
                max: self.max_level,
            })
        } else {
            Ok(())
        }
    }

    /// `ψ_n(u)`, with `ψ_n(u) > 0` as `u → +∞`.
    pub fn eval(&self, n: usize, u: f64) -> Result<f64> {
        self.check(n)?;
        Ok(self.eval_unchecked(n, u))
    }

    pub(crate) fn eval_unchecked(&self, n: usize, u: f64) -> f64 {
        let xi = self.mass_frequency.sqrt() * u;
        let mut prev = 0.0;
        let mut cur = self.ground(xi);
        for k in 0..n {
            let next = (2.0 / (k as f64 + 1.0)).sqrt() * xi * cur
                - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Fill `out[k] = ψ_k(u)` for `k < out.len()`.
    pub fn eval_all(&self, u: f64, out: &mut [f64]) -> Result<()> {
        if let Some(last) = out.len().checked_sub(1) {
            self.check(last)?;
        }
        let xi = self.mass_frequency.sqrt() * u;
        let mut prev = 0.0;
        let mut cur = self.ground(xi);
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = cur;
            let next = (2.0 / (k as f64 + 1.0)).sqrt() * xi * cur
                - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        Ok(())
    }

    fn ground(&self, xi: f64) -> f64 {
        (self.mass_frequency / std::f64::consts::PI).powf(0.25) * (-0.5 * xi * xi).exp()
    }
}

/// Uniform 1-D grid `start + k*step`, `k = 0..len`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1 {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid1 {
    /// Symmetric grid over `[-half_width, half_width]` with spacing at most `max_step`.
    pub fn symmetric(half_width: f64, max_step: f64) -> Self {
        let intervals = ((2.0 * half_width / max_step).ceil() as usize).max(2);
        Self {
            start: -half_width,
            step: 2.0 * half_width / intervals as f64,
            len: intervals + 1,
        }
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.point(k))
    }

    /// Trapezoid weight of node `k`.
    pub fn weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.len {
            0.5 * self.step
        } else {
            self.step
        }
    }
}

/// Trapezoidal approximation of `∫ conj(f) g` on a shared uniform grid.
pub fn quadrature_inner_product(
    grid_f: &Grid1,
    f: &[C64],
    grid_g: &Grid1,
    g: &[C64],
) -> Result<C64> {
    if grid_f != grid_g {
        return Err(Error::GridMismatch(format!("{grid_f:?} vs {grid_g:?}")));
    }
    if f.len() != grid_f.len || g.len() != grid_g.len {
        return Err(Error::GridMismatch(format!(
            "sample lengths {} and {} for grid of {}",
            f.len(),
            g.len(),
            grid_f.len
        )));
    }
    Ok(f.iter()
        .zip(g)
        .enumerate()
        .map(|(k, (a, b))| a.conj() * b * grid_f.weight(k))
        .sum())
}

/// Sample `ψ_n` on a grid as complex values.
pub fn sample_level(basis: &OscillatorBasis, n: usize, grid: &Grid1) -> Result<Vec<C64>> {
    grid.points()
        .map(|u| basis.eval(n, u).map(C64::from))
        .collect()
}
