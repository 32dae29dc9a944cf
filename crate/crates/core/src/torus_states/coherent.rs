use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::eigen::HasGeometry;
use super::{LatticeSumPolicy, SampledState};
use crate::config::{MagneticSystem, TorusConfig};
use crate::error::{Error, Result};
use crate::landau_inf::{coherent_amplitude, CoherentLabel, CoherentState};
use crate::plane::Amplitude;
use crate::torus_gauge::TorusGeometry;
use crate::{C64, TAU};

/// Periodic image sum of an infinite-plane coherent state,
/// `Σ_{n_x, n_y} Tx^{nΦ n_x} Ty^{nΦ n_y} |λ λ'>`, divided by its norm.
#[derive(Clone, Debug)]
pub struct TorusCoherent {
    geom: TorusGeometry,
    plane: CoherentState,
    label: CoherentLabel,
    /// packet peak `(<x>, <y>)`
    peak: (f64, f64),
    reach: f64,
    range: Option<i64>,
    norm: f64,
}

impl TorusCoherent {
    fn new(geom: &TorusGeometry, label: CoherentLabel, policy: LatticeSumPolicy) -> Result<Self> {
        let k = geom.mass_omega();
        let plane = coherent_amplitude(geom, label);
        let reach = (4.0 * (1.0 / policy.tolerance).ln() / k).sqrt();
        let mut st = Self {
            geom: *geom,
            plane,
            label,
            peak: label.mean_position(k),
            reach,
            range: None,
            norm: 1.0,
        };
        if let Some(c) = policy.cutoff {
            let tail = st.fixed_cutoff_tail(c as i64);
            if tail > policy.tolerance {
                return Err(Error::Truncation {
                    tail,
                    tolerance: policy.tolerance,
                });
            }
            st.range = Some(c as i64);
        }
        let n2 = norm_squared_sum(geom, label);
        if n2 < 1e-24 {
            return Err(Error::InvalidParameter(
                "coherent image sum vanishes at this centre".into(),
            ));
        }
        st.norm = 1.0 / n2.sqrt();
        Ok(st)
    }

    /// Twice the largest omitted Gaussian factor, evaluated over the domain
    /// widened by a quarter period on each side.
    fn fixed_cutoff_tail(&self, c: i64) -> f64 {
        let k = self.geom.mass_omega();
        let gap = |centre: f64, period: f64| {
            // nearest omitted image: n = ±(c+1), image centre at centre - n period
            let margin = 0.25 * period;
            let dist = |p: f64| {
                if p < -margin {
                    -margin - p
                } else if p > period + margin {
                    p - period - margin
                } else {
                    0.0
                }
            };
            let n = (c + 1) as f64;
            dist(centre - n * period).min(dist(centre + n * period))
        };
        let d = gap(self.peak.0, self.geom.lx).min(gap(self.peak.1, self.geom.ly));
        2.0 * (-k * d * d / 4.0).exp()
    }

    fn image_range(&self, coord: f64, centre: f64, period: f64) -> std::ops::RangeInclusive<i64> {
        match self.range {
            Some(c) => -c..=c,
            None => {
                let lo = ((centre - self.reach - coord) / period).ceil() as i64;
                let hi = ((centre + self.reach - coord) / period).floor() as i64;
                lo..=hi
            }
        }
    }

    fn raw(&self, x: f64, y: f64) -> C64 {
        let g = &self.geom;
        let mut acc = C64::new(0.0, 0.0);
        for ny in self.image_range(y, self.peak.1, g.ly) {
            for nx in self.image_range(x, self.peak.0, g.lx) {
                let phase = -g.theta_x * nx as f64 - g.theta_y * ny as f64
                    + TAU * g.flux * nx as f64 * y / g.ly;
                let v = self
                    .plane
                    .amplitude(x + nx as f64 * g.lx, y + ny as f64 * g.ly);
                acc += v * C64::from_polar(1.0, phase);
            }
        }
        acc
    }

    pub fn label(&self) -> CoherentLabel {
        self.label
    }

    /// `1/sqrt(N²)` with `N²` from the overlap double sum.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// Norm of the un-normalized image sum by grid quadrature; compare with
    /// `1 / normalization()`.
    pub fn quadrature_norm(&self) -> Result<f64> {
        let raw = RawImageSum(self);
        let g = &self.geom;
        let h = 1.0 / (12.0 * g.mass_omega().sqrt());
        let nx = ((g.lx / h).ceil() as usize).max(16);
        let ny = ((g.ly / h).ceil() as usize).max(16);
        Ok(SampledState::sample(g, nx, ny, &raw)?.norm())
    }
}

struct RawImageSum<'a>(&'a TorusCoherent);

impl Amplitude for RawImageSum<'_> {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        self.0.raw(x, y)
    }
}

impl Amplitude for TorusCoherent {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        self.raw(x, y) * self.norm
    }
}

impl HasGeometry for TorusCoherent {
    fn geometry(&self) -> &TorusGeometry {
        &self.geom
    }
}

pub fn torus_coherent_analytic(
    geom: &TorusGeometry,
    label: CoherentLabel,
    policy: LatticeSumPolicy,
) -> Result<TorusCoherent> {
    TorusCoherent::new(geom, label, policy)
}

/// Unit-normalized sampled torus coherent state.
pub fn torus_coherent(
    cfg: &TorusConfig,
    label: CoherentLabel,
    policy: LatticeSumPolicy,
    nx: usize,
    ny: usize,
) -> Result<SampledState> {
    let geom: TorusGeometry = cfg.into();
    let st = TorusCoherent::new(&geom, label, policy)?;
    let mut s = SampledState::sample(&geom, nx, ny, &st)?;
    s.normalize();
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    X,
    Y,
}

/// `<Ψ|T^l Ψ> / <Ψ|Ψ>` by grid quadrature.
pub fn translation_expectation(state: &SampledState, dir: Direction, l: i64) -> Result<C64> {
    let shifted = match dir {
        Direction::X => state.apply_tx_pow(l)?,
        Direction::Y => state.apply_ty_pow(l)?,
    };
    Ok(state.inner(&shifted)? / state.inner(state)?.re)
}

/// Un-normalized overlap sum `Σ_m <λ λ'| U_m T^l |λ λ'>` over the image
/// lattice `U_m = Tx^{nΦ m_x} Ty^{nΦ m_y}`, for an orbit centre `(X, Y)`.
/// For `l = 0` this is `N²`.
fn overlap_sum(geom: &TorusGeometry, center: (f64, f64), dir: Direction, l: i64) -> C64 {
    let f = geom.flux;
    let k = geom.mass_omega();
    let (lx, ly) = (geom.lx, geom.ly);
    let (x0, y0) = center;
    let q = PI * PI / k;
    // Gaussian factors exp(-q s²/L²) below 1e-20 are dropped
    let span = |len: f64| ((46.0 / q).sqrt() * len / f).ceil() as i64 + 2;
    let lf = l as f64;
    let mut acc = C64::new(0.0, 0.0);
    let (mx_span, my_span) = (span(ly), span(lx));
    for my in -my_span..=my_span {
        for mx in -mx_span..=mx_span {
            let (mxf, myf) = (mx as f64, my as f64);
            let (sx, sy, sign_exp) = match dir {
                Direction::X => (f * mxf + lf, f * myf, (f * mxf + lf) * myf),
                Direction::Y => (f * mxf, f * myf + lf, mxf * (f * myf + lf)),
            };
            let gauss = (-q * (sx * sx / (ly * ly) + sy * sy / (lx * lx))).exp();
            if gauss == 0.0 {
                continue;
            }
            let sign = if (sign_exp.round() as i64).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            let phase =
                (TAU * y0 / ly - geom.theta_x / f) * sx - (TAU * x0 / lx + geom.theta_y / f) * sy;
            acc += C64::from_polar(sign * gauss, phase);
        }
    }
    acc
}

fn norm_squared_sum(geom: &TorusGeometry, label: CoherentLabel) -> f64 {
    overlap_sum(geom, label.center(geom.mass_omega()), Direction::X, 0).re
}

/// Phase that `<T^l>` carries for an orbit centre `(X, Y)`:
/// `(2πY/Ly - θx/nΦ) l` along x, `-(2πX/Lx + θy/nΦ) l` along y.
fn leading_phase(geom: &TorusGeometry, center: (f64, f64), dir: Direction, l: i64) -> f64 {
    let f = geom.flux;
    match dir {
        Direction::X => (TAU * center.1 / geom.ly - geom.theta_x / f) * l as f64,
        Direction::Y => -(TAU * center.0 / geom.lx + geom.theta_y / f) * l as f64,
    }
}

/// Prefactor `B_l` of `<T^l> = exp(i leading phase) B_l` for a torus
/// coherent state with orbit centre `(X, Y)`. Complex in general.
pub fn b_lattice_sum(geom: &TorusGeometry, center: (f64, f64), dir: Direction, l: i64) -> C64 {
    let s = overlap_sum(geom, center, dir, l) / overlap_sum(geom, center, dir, 0).re;
    s * C64::from_polar(1.0, -leading_phase(geom, center, dir, l))
}

/// Model of `(<Tx>, <Ty>)` for orbit centre `(X, Y)`.
fn model(geom: &TorusGeometry, c: (f64, f64)) -> [C64; 2] {
    [
        overlap_sum(geom, c, Direction::X, 1) / overlap_sum(geom, c, Direction::X, 0).re,
        overlap_sum(geom, c, Direction::Y, 1) / overlap_sum(geom, c, Direction::Y, 0).re,
    ]
}

fn misfit(geom: &TorusGeometry, c: (f64, f64), tx: C64, ty: C64) -> f64 {
    let [mx, my] = model(geom, c);
    (tx - mx).norm_sqr() + (ty - my).norm_sqr()
}

/// Every orbit centre `(X mod Lx, Y mod Ly)` whose model expectations match
/// the measured `<Tx>` and `<Ty>`, sorted by misfit.
///
/// The bare phases give `Y = Ly (arg<Tx> + θx/nΦ)/2π` and
/// `X = -Lx (arg<Ty> + θy/nΦ)/2π` only up to the phases of the `B_1`
/// prefactors, which themselves depend on the centre, so the bare estimate
/// and a coarse scan are refined by Gauss-Newton on the full model.
///
/// For nΦ ≥ 3 the answer is unique. For nΦ = 2 the state itself fixes the
/// centre only up to a point reflection, and since `Tx` and `Ty` then each
/// have just two eigenvalues the two expectations carry one real number
/// apiece; several candidates come back. For nΦ = 1 both translations are
/// pure phases and every centre fits.
pub fn center_candidates(geom: &TorusGeometry, tx: C64, ty: C64) -> Vec<(f64, f64)> {
    let f = geom.flux;
    let wrap = |c: (f64, f64)| (c.0.rem_euclid(geom.lx), c.1.rem_euclid(geom.ly));
    let bare = wrap((
        -geom.lx * (ty.arg() + geom.theta_y / f) / TAU,
        geom.ly * (tx.arg() + geom.theta_x / f) / TAU,
    ));
    let mut starts = vec![bare];
    let n = 24;
    let mut scan: Vec<((f64, f64), f64)> = (0..n * n)
        .map(|idx| {
            let c = (
                geom.lx * (idx % n) as f64 / n as f64,
                geom.ly * (idx / n) as f64 / n as f64,
            );
            (c, misfit(geom, c, tx, ty))
        })
        .collect();
    scan.sort_by(|a, b| a.1.total_cmp(&b.1));
    starts.extend(scan.iter().take(12).map(|s| s.0));
    let tolerance = (1e-7 * (tx.norm() + ty.norm())).max(1e-14).powi(2);
    let same = |a: (f64, f64), b: (f64, f64)| {
        let d = |u: f64, l: f64| (u - l * (u / l).round()).abs();
        d(a.0 - b.0, geom.lx) < 1e-6 * geom.lx && d(a.1 - b.1, geom.ly) < 1e-6 * geom.ly
    };
    let mut found: Vec<((f64, f64), f64)> = Vec::new();
    for s in starts {
        let c = wrap(gauss_newton(geom, s, tx, ty));
        let r = misfit(geom, c, tx, ty);
        if r < tolerance && !found.iter().any(|(p, _)| same(*p, c)) {
            found.push((c, r));
        }
    }
    found.sort_by(|a, b| a.1.total_cmp(&b.1));
    found.into_iter().map(|(c, _)| c).collect()
}

/// Orbit centre `(<R_x> mod Lx, <R_y> mod Ly)` of a torus coherent state
/// from its measured `<Tx>` and `<Ty>`. Fails with
/// [`Error::AmbiguousCenter`] when more than one centre fits, which is
/// always the case for nΦ ≤ 2.
pub fn recover_center(geom: &TorusGeometry, tx: C64, ty: C64) -> Result<(f64, f64)> {
    let found = center_candidates(geom, tx, ty);
    match found.len() {
        0 => Err(Error::CenterNotFound(format!(
            "no centre reproduces <Tx> = {tx}, <Ty> = {ty}"
        ))),
        1 => Ok(found[0]),
        _ => Err(Error::AmbiguousCenter(found)),
    }
}

fn gauss_newton(geom: &TorusGeometry, start: (f64, f64), tx: C64, ty: C64) -> (f64, f64) {
    let mut c = start;
    let residual = |c: (f64, f64)| {
        let [mx, my] = model(geom, c);
        let (dx, dy) = (tx - mx, ty - my);
        [dx.re, dx.im, dy.re, dy.im]
    };
    let scale = geom.lx.max(geom.ly);
    for _ in 0..60 {
        let r = residual(c);
        let h = 1e-7 * scale;
        let rx = residual((c.0 + h, c.1));
        let ry = residual((c.0, c.1 + h));
        let rx2 = residual((c.0 - h, c.1));
        let ry2 = residual((c.0, c.1 - h));
        let jx: Vec<f64> = (0..4).map(|i| (rx[i] - rx2[i]) / (2.0 * h)).collect();
        let jy: Vec<f64> = (0..4).map(|i| (ry[i] - ry2[i]) / (2.0 * h)).collect();
        let (a11, a12, a22) = (dot(&jx, &jx), dot(&jx, &jy), dot(&jy, &jy));
        let (b1, b2) = (dot(&jx, &r), dot(&jy, &r));
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-300 {
            break;
        }
        // J is the Jacobian of the residual itself, so the step is -J⁺ r
        let (mut dx, mut dy) = (-(a22 * b1 - a12 * b2) / det, -(a11 * b2 - a12 * b1) / det);
        let cap = 0.1 * scale;
        let len = dx.hypot(dy);
        if len > cap {
            dx *= cap / len;
            dy *= cap / len;
        }
        let current = dot(&r, &r);
        let mut accepted = false;
        for _ in 0..30 {
            let trial = (c.0 + dx, c.1 + dy);
            let rt = residual(trial);
            if dot(&rt, &rt) <= current {
                c = trial;
                accepted = true;
                break;
            }
            dx *= 0.5;
            dy *= 0.5;
        }
        if !accepted || len < 1e-14 * scale {
            break;
        }
    }
    c
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
