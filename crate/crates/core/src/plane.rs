//! Sampling of infinite-volume states on a finite rectangular window.

use crate::error::{Error, Result};
use crate::fd::{self, FieldParams, Lattice, Operator};
use crate::C64;

/// A closed-form wave function that can be evaluated anywhere.
pub trait Amplitude {
    fn amplitude(&self, x: f64, y: f64) -> C64;
}

impl<F: Fn(f64, f64) -> C64> Amplitude for F {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        self(x, y)
    }
}

/// Uniform window of `nx * ny` nodes starting at `(x0, y0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneGrid {
    pub x0: f64,
    pub y0: f64,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl PlaneGrid {
    /// Square window centred on `center` with half-width `half` and spacing
    /// no larger than `max_step`.
    pub fn centered(center: (f64, f64), half: f64, max_step: f64) -> Self {
        let intervals = ((2.0 * half / max_step).ceil() as usize).max(4);
        let h = 2.0 * half / intervals as f64;
        Self {
            x0: center.0 - half,
            y0: center.1 - half,
            hx: h,
            hy: h,
            nx: intervals + 1,
            ny: intervals + 1,
        }
    }

    pub fn coord(&self, i: isize, j: isize) -> (f64, f64) {
        (self.x0 + i as f64 * self.hx, self.y0 + j as f64 * self.hy)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sample<A: Amplitude + ?Sized>(&self, state: &A) -> PlaneSample {
        let mut values = Vec::with_capacity(self.len());
        for j in 0..self.ny {
            for i in 0..self.nx {
                let (x, y) = self.coord(i as isize, j as isize);
                values.push(state.amplitude(x, y));
            }
        }
        PlaneSample {
            grid: *self,
            values,
        }
    }

    /// The window shrunk by `margin` nodes on every side.
    pub fn shrink(&self, margin: usize) -> Self {
        let (x0, y0) = self.coord(margin as isize, margin as isize);
        Self {
            x0,
            y0,
            nx: self.nx - 2 * margin,
            ny: self.ny - 2 * margin,
            ..*self
        }
    }

    fn weight(&self, i: usize, j: usize) -> f64 {
        let wx = if i == 0 || i + 1 == self.nx { 0.5 } else { 1.0 };
        let wy = if j == 0 || j + 1 == self.ny { 0.5 } else { 1.0 };
        wx * wy * self.hx * self.hy
    }
}

/// Complex samples on a [`PlaneGrid`], row-major in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneSample {
    pub grid: PlaneGrid,
    pub values: Vec<C64>,
}

const STENCIL: usize = fd::STENCIL_RADIUS;

impl PlaneSample {
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.values[j * self.grid.nx + i]
    }

    /// Trapezoidal `∫ conj(self) other`.
    pub fn inner(&self, other: &PlaneSample) -> Result<C64> {
        if !grids_match(&self.grid, &other.grid) {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        let g = &self.grid;
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..g.ny {
            for i in 0..g.nx {
                let k = j * g.nx + i;
                acc += self.values[k].conj() * other.values[k] * g.weight(i, j);
            }
        }
        Ok(acc)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self)
            .map(|v| v.re.max(0.0).sqrt())
            .unwrap_or(0.0)
    }

    pub fn scale(&mut self, s: C64) {
        self.values.iter_mut().for_each(|v| *v *= s);
    }

    /// `self - s * other`.
    pub fn minus_scaled(&self, s: C64, other: &PlaneSample) -> Result<PlaneSample> {
        if !grids_match(&self.grid, &other.grid) {
            return Err(Error::GridMismatch("difference of samples".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - s * b)
            .collect();
        Ok(PlaneSample {
            grid: self.grid,
            values,
        })
    }

    /// Restriction to the window shrunk by `margin` nodes.
    pub fn interior(&self, margin: usize) -> PlaneSample {
        let g = self.grid.shrink(margin);
        let mut values = Vec::with_capacity(g.len());
        for j in 0..g.ny {
            for i in 0..g.nx {
                values.push(self.at(i + margin, j + margin));
            }
        }
        PlaneSample { grid: g, values }
    }

    /// Apply a differential operator on the interior nodes (stencil-width margin
    /// removed). Errors if the spacing is too coarse for the stencil.
    pub fn apply(&self, op: Operator, p: FieldParams) -> Result<PlaneSample> {
        let measure = fd::step_measure((self.grid.hx, self.grid.hy), p);
        if measure > fd::MAX_STEP_SQ_MASS_OMEGA {
            return Err(Error::GridTooCoarse(format!(
                "h^2 M omega = {measure:.3e} > {:.1e}",
                fd::MAX_STEP_SQ_MASS_OMEGA
            )));
        }
        let inner = self.grid.shrink(STENCIL);
        let mut values = Vec::with_capacity(inner.len());
        for j in 0..inner.ny {
            for i in 0..inner.nx {
                values.push(fd::apply_at(
                    op,
                    p,
                    self,
                    (i + STENCIL) as isize,
                    (j + STENCIL) as isize,
                ));
            }
        }
        Ok(PlaneSample {
            grid: inner,
            values,
        })
    }

    /// `(<O>, ΔO)` on the interior, normalized by the interior norm. `ΔO` uses
    /// `<O²> = ‖OΨ‖²`, valid for Hermitian `O`.
    pub fn expectation(&self, op: Operator, p: FieldParams) -> Result<(C64, f64)> {
        let applied = self.apply(op, p)?;
        let me = self.interior(STENCIL);
        let n2 = me.inner(&me)?.re;
        let mean = me.inner(&applied)? / n2;
        let second = applied.inner(&applied)?.re / n2;
        Ok((mean, (second - mean.norm_sqr()).max(0.0).sqrt()))
    }

    /// `‖OΨ - λΨ‖ / ‖Ψ‖` on the interior.
    pub fn eigen_residual(&self, op: Operator, p: FieldParams, eigenvalue: C64) -> Result<f64> {
        let applied = self.apply(op, p)?;
        let me = self.interior(STENCIL);
        let diff = applied.minus_scaled(eigenvalue, &me)?;
        Ok(diff.norm() / me.norm())
    }
}

fn grids_match(a: &PlaneGrid, b: &PlaneGrid) -> bool {
    let close = |u: f64, v: f64| (u - v).abs() <= 1e-12 * (1.0 + u.abs().max(v.abs()));
    a.nx == b.nx
        && a.ny == b.ny
        && close(a.x0, b.x0)
        && close(a.y0, b.y0)
        && close(a.hx, b.hx)
        && close(a.hy, b.hy)
}

impl Lattice for PlaneSample {
    fn steps(&self) -> (f64, f64) {
        (self.grid.hx, self.grid.hy)
    }
    fn coord(&self, i: isize, j: isize) -> (f64, f64) {
        self.grid.coord(i, j)
    }
    /// Zero outside the window.
    fn value(&self, i: isize, j: isize) -> C64 {
        if i < 0 || j < 0 || i as usize >= self.grid.nx || j as usize >= self.grid.ny {
            C64::new(0.0, 0.0)
        } else {
            self.at(i as usize, j as usize)
        }
    }
}
