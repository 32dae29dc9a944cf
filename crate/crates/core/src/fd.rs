//! Fourth-order finite-difference realizations of the differential
//! operators of the problem, in the Landau gauge `A = (0, Bx)`.

use serde::{Deserialize, Serialize};

use crate::config::MagneticSystem;
use crate::C64;

/// Largest `h² Mω` for which stencils are trusted to the 1e-6 level.
pub const MAX_STEP_SQ_MASS_OMEGA: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    /// `[(-i∂x)² + (-i∂y + eBx)²] / 2M`
    H,
    /// `x(-i∂y + eBx/2) - y(-i∂x + eBy/2)`
    L,
    /// `-i∂x + eBy`, generator of (gauge-covariant) x translations
    Px,
    /// `-i∂y`
    Py,
    /// `i∂y / eB`
    Rx,
    /// `y - i∂x / eB`
    Ry,
    A,
    ADag,
    B,
    BDag,
    /// Kinetic momentum `M v_x = -i∂x`
    MvX,
    /// Kinetic momentum `M v_y = -i∂y + eBx`
    MvY,
    /// `x - R_x`
    RelX,
    /// `y - R_y`
    RelY,
}

impl Operator {
    pub const ALL: [Operator; 14] = [
        Operator::H,
        Operator::L,
        Operator::Px,
        Operator::Py,
        Operator::Rx,
        Operator::Ry,
        Operator::A,
        Operator::ADag,
        Operator::B,
        Operator::BDag,
        Operator::MvX,
        Operator::MvY,
        Operator::RelX,
        Operator::RelY,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::H => "H",
            Operator::L => "L",
            Operator::Px => "Px",
            Operator::Py => "Py",
            Operator::Rx => "Rx",
            Operator::Ry => "Ry",
            Operator::A => "a",
            Operator::ADag => "a_dag",
            Operator::B => "b",
            Operator::BDag => "b_dag",
            Operator::MvX => "Mvx",
            Operator::MvY => "Mvy",
            Operator::RelX => "x-Rx",
            Operator::RelY => "y-Ry",
        }
    }
}

impl std::str::FromStr for Operator {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        Operator::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::Error::Parse(format!("unknown operator `{s}`")))
    }
}

/// A uniformly sampled field that can answer for any lattice index, either
/// from storage or through an extension rule.
pub trait Lattice {
    fn steps(&self) -> (f64, f64);
    fn coord(&self, i: isize, j: isize) -> (f64, f64);
    fn value(&self, i: isize, j: isize) -> C64;
}

/// Mass and `eB` entering the operators.
#[derive(Clone, Copy, Debug)]
pub struct FieldParams {
    pub mass: f64,
    pub eb: f64,
}

impl FieldParams {
    pub fn of<S: MagneticSystem + ?Sized>(s: &S) -> Self {
        Self {
            mass: s.mass(),
            eb: s.mass_omega(),
        }
    }
}

struct Derivs {
    f: C64,
    dx: C64,
    dy: C64,
    dxx: C64,
    dyy: C64,
}

/// Derivatives at node `(i, j)`. The y-stencil acts on
/// `χ(y') = exp(i eB x (y' - y)) ψ(x, y')`, whose derivatives at `y' = y`
/// are the covariant ones `(∂y + i eB x)^m ψ`. Stripping the gauge phase
/// keeps the stencil accurate even where the canonical momentum `eB x` is
/// large; the plain derivatives are recovered exactly from the covariant
/// ones.
/// Half width of the central-difference stencils.
pub const STENCIL_RADIUS: usize = 3;

/// Sixth-order central first and second derivatives from the values at
/// offsets `-3..=3` (index 3 is the centre).
fn central(v: &[C64; 7], h: f64) -> (C64, C64) {
    let d1 = (-v[0] + v[1] * 9.0 - v[2] * 45.0 + v[4] * 45.0 - v[5] * 9.0 + v[6]) / (60.0 * h);
    let d2 = (v[0] * 2.0 - v[1] * 27.0 + v[2] * 270.0 - v[3] * 490.0 + v[4] * 270.0 - v[5] * 27.0
        + v[6] * 2.0)
        / (180.0 * h * h);
    (d1, d2)
}

/// Derivatives at node `(i, j)`. The y-stencil acts on
/// `χ(y') = exp(i eB x (y' - y)) ψ(x, y')`, whose derivatives at `y' = y`
/// are the covariant ones `(∂y + i eB x)^m ψ`. Stripping the gauge phase
/// keeps the stencil accurate even where the canonical momentum `eB x` is
/// large; the plain derivatives are recovered exactly from the covariant
/// ones.
fn derivs<Lt: Lattice + ?Sized>(lat: &Lt, i: isize, j: isize, eb: f64) -> Derivs {
    let (hx, hy) = lat.steps();
    let (x, _) = lat.coord(i, j);
    let f = lat.value(i, j);
    let along_x: [C64; 7] = std::array::from_fn(|m| lat.value(i + m as isize - 3, j));
    let along_y: [C64; 7] = std::array::from_fn(|m| {
        let d = m as isize - 3;
        lat.value(i, j + d) * C64::from_polar(1.0, eb * x * d as f64 * hy)
    });
    let (dx, dxx) = central(&along_x, hx);
    let (cov_y, cov_yy) = central(&along_y, hy);
    let ikx = C64::new(0.0, eb * x);
    let dy = cov_y - ikx * f;
    let dyy = cov_yy - ikx * dy * 2.0 - ikx * ikx * f;
    Derivs {
        f,
        dx,
        dy,
        dxx,
        dyy,
    }
}

/// Apply `op` at lattice node `(i, j)`.
pub fn apply_at<Lt: Lattice + ?Sized>(
    op: Operator,
    p: FieldParams,
    lat: &Lt,
    i: isize,
    j: isize,
) -> C64 {
    let (x, y) = lat.coord(i, j);
    let k = p.eb;
    let d = derivs(lat, i, j, k);
    let im = C64::i();
    let c = (k / 2.0).sqrt();
    match op {
        Operator::H => {
            (-d.dxx - d.dyy - im * 2.0 * k * x * d.dy + d.f * (k * x).powi(2)) / (2.0 * p.mass)
        }
        Operator::L => {
            x * (-im * d.dy + d.f * (k * x / 2.0)) - y * (-im * d.dx + d.f * (k * y / 2.0))
        }
        Operator::Px => -im * d.dx + d.f * (k * y),
        Operator::Py => -im * d.dy,
        Operator::Rx => im * d.dy / k,
        Operator::Ry => d.f * y - im * d.dx / k,
        Operator::A => (d.f * x + (d.dx - im * d.dy) / k) * c,
        Operator::ADag => (d.f * x - (d.dx + im * d.dy) / k) * c,
        Operator::B => (im * y * d.f + (d.dx + im * d.dy) / k) * c,
        Operator::BDag => (-im * y * d.f - (d.dx - im * d.dy) / k) * c,
        Operator::MvX => -im * d.dx,
        Operator::MvY => -im * d.dy + d.f * (k * x),
        Operator::RelX => d.f * x - im * d.dy / k,
        Operator::RelY => im * d.dx / k,
    }
}

/// `h² Mω` for the coarser direction.
pub fn step_measure(steps: (f64, f64), p: FieldParams) -> f64 {
    steps.0.max(steps.1).powi(2) * p.eb
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Analytic<F: Fn(f64, f64) -> C64> {
        h: f64,
        f: F,
    }

    impl<F: Fn(f64, f64) -> C64> Lattice for Analytic<F> {
        fn steps(&self) -> (f64, f64) {
            (self.h, self.h)
        }
        fn coord(&self, i: isize, j: isize) -> (f64, f64) {
            (i as f64 * self.h, j as f64 * self.h)
        }
        fn value(&self, i: isize, j: isize) -> C64 {
            let (x, y) = self.coord(i, j);
            (self.f)(x, y)
        }
    }

    #[test]
    fn derivatives_of_plane_wave() {
        let (kx, ky) = (1.3, -0.7);
        let lat = Analytic {
            h: 0.005,
            f: |x: f64, y: f64| C64::from_polar(1.0, kx * x + ky * y),
        };
        let p = FieldParams { mass: 1.0, eb: 1.0 };
        let f = lat.value(5, 3);
        let py = apply_at(Operator::Py, p, &lat, 5, 3);
        assert!((py - f * ky).norm() < 1e-9);
        let mvx = apply_at(Operator::MvX, p, &lat, 5, 3);
        assert!((mvx - f * kx).norm() < 1e-9);
    }

    #[test]
    fn operator_names_parse() {
        for op in Operator::ALL {
            assert_eq!(op.name().parse::<Operator>().unwrap(), op);
        }
        assert!("q".parse::<Operator>().is_err());
    }
}
