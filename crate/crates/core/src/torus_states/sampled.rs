use crate::error::{Error, Result};
use crate::fd::{self, FieldParams, Lattice, Operator};
use crate::plane::Amplitude;
use crate::torus_gauge::TorusGeometry;
use crate::{C64, TAU};

/// Complex amplitudes on a uniform grid over the torus fundamental domain.
///
/// A closed state stores `(nx+1) x (ny+1)` nodes covering `[0,Lx] x [0,Ly]`
/// including both boundary lines; an open state stores the `nx x ny`
/// periodic nodes only. Values are row-major with `x` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledState {
    geom: TorusGeometry,
    nx: usize,
    ny: usize,
    closed: bool,
    values: Vec<C64>,
}

impl SampledState {
    /// Sample an amplitude on the closed grid with `nx x ny` intervals.
    pub fn sample<A: Amplitude + ?Sized>(
        geom: &TorusGeometry,
        nx: usize,
        ny: usize,
        amp: &A,
    ) -> Result<Self> {
        check_dims(nx, ny)?;
        let (hx, hy) = (geom.lx / nx as f64, geom.ly / ny as f64);
        let mut values = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                values.push(amp.amplitude(i as f64 * hx, j as f64 * hy));
            }
        }
        Ok(Self {
            geom: *geom,
            nx,
            ny,
            closed: true,
            values,
        })
    }

    /// Wrap periodic-node values (no boundary lines), e.g. a lattice
    /// eigenvector.
    pub fn from_periodic(
        geom: &TorusGeometry,
        nx: usize,
        ny: usize,
        values: Vec<C64>,
    ) -> Result<Self> {
        check_dims(nx, ny)?;
        if values.len() != nx * ny {
            return Err(Error::GridMismatch(format!(
                "{} values for a {nx}x{ny} grid",
                values.len()
            )));
        }
        Ok(Self {
            geom: *geom,
            nx,
            ny,
            closed: false,
            values,
        })
    }

    /// Closed copy whose boundary lines are filled from the twisted
    /// boundary conditions.
    pub fn closed(&self) -> Self {
        if self.closed {
            return self.clone();
        }
        let mut values = Vec::with_capacity((self.nx + 1) * (self.ny + 1));
        for j in 0..=self.ny {
            for i in 0..=self.nx {
                values.push(self.value(i as isize, j as isize));
            }
        }
        Self {
            closed: true,
            values,
            ..self.clone()
        }
    }

    /// Values at the `nx x ny` periodic nodes.
    pub fn periodic_values(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.push(self.stored(i, j));
            }
        }
        out
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geom
    }

    pub fn intervals(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn steps(&self) -> (f64, f64) {
        (self.geom.lx / self.nx as f64, self.geom.ly / self.ny as f64)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    fn cols(&self) -> usize {
        if self.closed {
            self.nx + 1
        } else {
            self.nx
        }
    }

    /// Stored node `(i, j)`; `i <= nx`, `j <= ny` for closed states.
    pub fn stored(&self, i: usize, j: usize) -> C64 {
        self.values[j * self.cols() + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.nx != other.nx || self.ny != other.ny || self.geom != other.geom {
            return Err(Error::GridMismatch(format!(
                "{}x{} vs {}x{} (or different torus)",
                self.nx, self.ny, other.nx, other.ny
            )));
        }
        Ok(())
    }

    /// `∫ conj(self) other` over the torus; the duplicated boundary lines are
    /// excluded, which makes the rule exact for band-limited periodic
    /// integrands.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.compatible(other)?;
        let (hx, hy) = self.steps();
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..self.ny {
            for i in 0..self.nx {
                acc += self.stored(i, j).conj() * other.stored(i, j);
            }
        }
        Ok(acc * (hx * hy))
    }

    pub fn norm(&self) -> f64 {
        self.inner(self)
            .map(|v| v.re.max(0.0).sqrt())
            .unwrap_or(0.0)
    }

    /// Scale to unit norm; returns the factor applied.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        let f = if n > 0.0 { 1.0 / n } else { 1.0 };
        self.values.iter_mut().for_each(|v| *v *= f);
        f
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: C64, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let (a, b) = (self.closed(), other.closed());
        Ok(Self {
            values: a
                .values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| x + s * y)
                .collect(),
            ..a
        })
    }

    /// Pointwise sup distance relative to `self`'s sup norm.
    pub fn relative_sup_distance(&self, other: &Self) -> Result<f64> {
        let d = self.add_scaled(C64::new(-1.0, 0.0), other)?;
        Ok(d.max_abs() / self.max_abs().max(f64::MIN_POSITIVE))
    }

    fn nphi(&self) -> Result<u32> {
        self.geom.nphi()
    }

    fn shift_nodes(&self, n: usize, nphi: u32) -> Result<usize> {
        if !n.is_multiple_of(nphi as usize) {
            return Err(Error::Incommensurate {
                nx: self.nx,
                ny: self.ny,
                nphi,
            });
        }
        Ok(n / nphi as usize)
    }

    /// `(Tx Ψ)(x, y) = exp(2πi y/Ly - iθx/nΦ) Ψ(x + Lx/nΦ, y)`.
    pub fn apply_tx(&self) -> Result<Self> {
        let nphi = self.nphi()?;
        let s = self.shift_nodes(self.nx, nphi)? as isize;
        let (_, hy) = self.steps();
        let mut values = Vec::with_capacity((self.nx + 1) * (self.ny + 1));
        for j in 0..=self.ny {
            let gauge = C64::from_polar(
                1.0,
                TAU * j as f64 * hy / self.geom.ly - self.geom.theta_x / nphi as f64,
            );
            for i in 0..=self.nx {
                values.push(gauge * self.value(i as isize + s, j as isize));
            }
        }
        Ok(Self {
            closed: true,
            values,
            ..self.clone()
        })
    }

    /// `(Ty Ψ)(x, y) = exp(-iθy/nΦ) Ψ(x, y + Ly/nΦ)`.
    pub fn apply_ty(&self) -> Result<Self> {
        let nphi = self.nphi()?;
        let s = self.shift_nodes(self.ny, nphi)? as isize;
        let phase = C64::from_polar(1.0, -self.geom.theta_y / nphi as f64);
        let mut values = Vec::with_capacity((self.nx + 1) * (self.ny + 1));
        for j in 0..=self.ny {
            for i in 0..=self.nx {
                values.push(phase * self.value(i as isize, j as isize + s));
            }
        }
        Ok(Self {
            closed: true,
            values,
            ..self.clone()
        })
    }

    /// Apply `Tx` (`times` > 0) or its inverse powers.
    pub fn apply_tx_pow(&self, times: i64) -> Result<Self> {
        self.apply_pow(times, Self::apply_tx)
    }

    pub fn apply_ty_pow(&self, times: i64) -> Result<Self> {
        self.apply_pow(times, Self::apply_ty)
    }

    fn apply_pow(&self, times: i64, f: fn(&Self) -> Result<Self>) -> Result<Self> {
        let nphi = self.nphi()? as i64;
        // T^nΦ is the identity on states obeying the boundary conditions
        let k = times.rem_euclid(nphi);
        let mut s = self.closed();
        for _ in 0..k {
            s = f(&s)?;
        }
        Ok(s)
    }

    /// Finite-difference application of a differential operator at every
    /// node. Neighbours across the boundary come from the twisted periodic
    /// extension. Coordinates are taken in the fundamental domain, so only
    /// operators commuting with the magnetic translations (`H`, `a`, `a†`,
    /// `Mv`) map torus states to torus states.
    pub fn apply_operator(&self, op: Operator) -> Result<Self> {
        let p = FieldParams::of(&self.geom);
        let measure = fd::step_measure(self.steps(), p);
        if measure > fd::MAX_STEP_SQ_MASS_OMEGA {
            return Err(Error::GridTooCoarse(format!(
                "h^2 M omega = {measure:.3e} > {:.1e}",
                fd::MAX_STEP_SQ_MASS_OMEGA
            )));
        }
        let mut values = Vec::with_capacity((self.nx + 1) * (self.ny + 1));
        for j in 0..=self.ny {
            for i in 0..=self.nx {
                values.push(fd::apply_at(op, p, self, i as isize, j as isize));
            }
        }
        Ok(Self {
            closed: true,
            values,
            ..self.clone()
        })
    }

    /// `‖OΨ - λΨ‖ / ‖Ψ‖`.
    pub fn eigen_residual(&self, op: Operator, eigenvalue: C64) -> Result<f64> {
        let applied = self.apply_operator(op)?;
        let diff = applied.add_scaled(-eigenvalue, self)?;
        Ok(diff.norm() / self.norm())
    }

    /// `<Ψ|OΨ> / <Ψ|Ψ>`.
    pub fn expectation(&self, op: Operator) -> Result<C64> {
        let applied = self.apply_operator(op)?;
        Ok(self.inner(&applied)? / self.inner(self)?.re)
    }
}

fn check_dims(nx: usize, ny: usize) -> Result<()> {
    if nx < 4 || ny < 4 {
        return Err(Error::GridTooCoarse(format!("{nx}x{ny} intervals")));
    }
    Ok(())
}

impl Lattice for SampledState {
    fn steps(&self) -> (f64, f64) {
        SampledState::steps(self)
    }

    fn coord(&self, i: isize, j: isize) -> (f64, f64) {
        let (hx, hy) = SampledState::steps(self);
        (i as f64 * hx, j as f64 * hy)
    }

    /// Stored value, or its image under the twisted boundary conditions.
    fn value(&self, i: isize, j: isize) -> C64 {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let (qy, j0) = (j.div_euclid(ny), j.rem_euclid(ny));
        let (qx, i0) = (i.div_euclid(nx), i.rem_euclid(nx));
        let mut v = self.stored(i0 as usize, j0 as usize);
        if qy != 0 {
            v *= C64::from_polar(1.0, qy as f64 * self.geom.theta_y);
        }
        if qx != 0 {
            let y0 = j0 as f64 * self.geom.ly / self.ny as f64;
            v *= C64::from_polar(
                1.0,
                qx as f64 * (self.geom.theta_x - TAU * self.geom.flux * y0 / self.geom.ly),
            );
        }
        v
    }
}
