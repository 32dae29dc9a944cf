use serde::{Deserialize, Serialize};

use super::SampledState;
use crate::error::{Error, Result};
use crate::plane::Amplitude;
use crate::torus_gauge::TorusGeometry;

/// `|Ψ|²` on the periodic nodes `(i Lx/nx, j Ly/ny)`, normalized so that
/// the trapezoid integral over the torus is 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMap {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    /// row-major, `x` fastest
    pub values: Vec<f64>,
    /// node indices of the maximum
    pub argmax: (usize, usize),
}

impl DensityMap {
    fn from_values(nx: usize, ny: usize, lx: f64, ly: f64, mut values: Vec<f64>) -> Result<Self> {
        let cell = lx * ly / (nx * ny) as f64;
        let total: f64 = values.iter().sum::<f64>() * cell;
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidParameter(
                "state has no weight on the grid".into(),
            ));
        }
        values.iter_mut().for_each(|v| *v /= total);
        let mut best = 0;
        for (k, v) in values.iter().enumerate() {
            if *v > values[best] {
                best = k;
            }
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            values,
            argmax: (best % nx, best / nx),
        })
    }

    pub fn from_sampled(state: &SampledState) -> Result<Self> {
        let (nx, ny) = state.intervals();
        let g = state.geometry();
        let values = state
            .periodic_values()
            .iter()
            .map(|v| v.norm_sqr())
            .collect();
        Self::from_values(nx, ny, g.lx, g.ly, values)
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Torus coordinates of the maximum.
    pub fn argmax_position(&self) -> (f64, f64) {
        (
            self.argmax.0 as f64 * self.lx / self.nx as f64,
            self.argmax.1 as f64 * self.ly / self.ny as f64,
        )
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.lx * self.ly / (self.nx * self.ny) as f64
    }

    pub fn max(&self) -> f64 {
        self.values[self.argmax.1 * self.nx + self.argmax.0]
    }

    /// Strict local maxima on the periodic grid (8-neighbourhood), in
    /// row-major order.
    pub fn local_maxima(&self) -> Vec<(usize, usize)> {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let mut out = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let v = self.at(i as usize, j as usize);
                let is_max = (-1..=1).all(|dj: isize| {
                    (-1..=1).all(|di: isize| {
                        (di == 0 && dj == 0)
                            || v > self.at(
                                (i + di).rem_euclid(nx) as usize,
                                (j + dj).rem_euclid(ny) as usize,
                            )
                    })
                });
                if is_max {
                    out.push((i as usize, j as usize));
                }
            }
        }
        out
    }
}

/// Density of an analytic amplitude at `nx x ny` resolution.
pub fn density_map<A: Amplitude + ?Sized>(
    geom: &TorusGeometry,
    state: &A,
    nx: usize,
    ny: usize,
) -> Result<DensityMap> {
    if nx == 0 || ny == 0 {
        return Err(Error::GridTooCoarse(format!("{nx}x{ny} density grid")));
    }
    let (hx, hy) = (geom.lx / nx as f64, geom.ly / ny as f64);
    let mut values = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            values.push(state.amplitude(i as f64 * hx, j as f64 * hy).norm_sqr());
        }
    }
    DensityMap::from_values(nx, ny, geom.lx, geom.ly, values)
}
