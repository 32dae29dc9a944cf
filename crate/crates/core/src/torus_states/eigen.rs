use std::ops::RangeInclusive;

use super::{DegeneracyBasis, LatticeSumPolicy, SampledState, TorusLabel};
use crate::config::{MagneticSystem, TorusConfig};
use crate::error::{Error, Result};
use crate::oscillator::{OscillatorBasis, DEFAULT_MAX_LEVEL};
use crate::plane::Amplitude;
use crate::torus_gauge::TorusGeometry;
use crate::{C64, TAU};

/// Closed-form torus Landau eigenstate.
///
/// `|n l_y>` is the sum over `n_x` of
/// `ψ_n(x + (nΦ n_x + l + θy/2π) Lx/nΦ) exp(2πi y (nΦ n_x + l + θy/2π)/Ly - iθx n_x)`;
/// `|n l_x>` is the analogous sum over `n_y` built from the `P_x` eigenstates.
#[derive(Clone, Debug)]
pub struct TorusEigenstate {
    geom: TorusGeometry,
    osc: OscillatorBasis,
    n: usize,
    basis: DegeneracyBasis,
    /// `l + θ/2π`
    offset: f64,
    range: Option<RangeInclusive<i64>>,
    reach: f64,
    norm: f64,
}

/// Smallest distance beyond which `|ψ_n|` stays below `tol` times its
/// ground-state peak.
pub(crate) fn envelope_reach(osc: &OscillatorBasis, n: usize, tol: f64) -> f64 {
    let ell = osc.length();
    let peak = (osc.mass_frequency() / std::f64::consts::PI).powf(0.25);
    let start = (2.0 * n as f64 + 1.0).sqrt() * ell;
    let mut d = start;
    loop {
        if envelope(osc, n, d) <= tol * peak {
            return d;
        }
        d += 0.125 * ell;
    }
}

/// `max_{u >= d} |ψ_n(u)|`, scanned over the next twenty oscillator lengths.
fn envelope(osc: &OscillatorBasis, n: usize, d: f64) -> f64 {
    let ell = osc.length();
    (0..=80)
        .map(|k| osc.eval_unchecked(n, d.abs() + 0.25 * k as f64 * ell).abs())
        .fold(0.0, f64::max)
}

impl TorusEigenstate {
    fn new(geom: &TorusGeometry, label: TorusLabel, policy: LatticeSumPolicy) -> Result<Self> {
        let osc = OscillatorBasis::new(geom.mass_omega(), DEFAULT_MAX_LEVEL)?;
        if label.n > osc.max_level() {
            return Err(Error::LevelOutOfRange {
                level: label.n,
                max: osc.max_level(),
            });
        }
        let theta = match label.basis {
            DegeneracyBasis::Ly => geom.theta_y,
            DegeneracyBasis::Lx => geom.theta_x,
        };
        let offset = label.l as f64 + theta / TAU;
        let mut st = Self {
            geom: *geom,
            osc,
            n: label.n,
            basis: label.basis,
            offset,
            range: None,
            reach: envelope_reach(&osc, label.n, policy.tolerance),
            norm: 1.0,
        };
        if let Some(k) = policy.cutoff {
            let tail = st.fixed_cutoff_tail(k as i64);
            if tail > policy.tolerance {
                return Err(Error::Truncation {
                    tail,
                    tolerance: policy.tolerance,
                });
            }
            st.range = Some(-(k as i64)..=k as i64);
        }
        st.norm = 1.0 / reference_norm(&st)?;
        Ok(st)
    }

    /// Period along the summed direction and the shift step.
    fn period_and_step(&self) -> (f64, f64) {
        match self.basis {
            DegeneracyBasis::Ly => (self.geom.lx, self.geom.lx / self.geom.flux),
            DegeneracyBasis::Lx => (self.geom.ly, self.geom.ly / self.geom.flux),
        }
    }

    /// Relative size of the largest omitted term anywhere in the fundamental
    /// domain (widened by a quarter period for stencils), doubled.
    fn fixed_cutoff_tail(&self, k: i64) -> f64 {
        let (period, step) = self.period_and_step();
        let margin = 0.25 * period;
        let peak = (self.osc.mass_frequency() / std::f64::consts::PI).powf(0.25);
        // term centres sit at sign * (m period + offset step); the window is
        // [-margin, period + margin] in the summed coordinate
        let centre = |m: i64| match self.basis {
            DegeneracyBasis::Ly => -(m as f64 * period + self.offset * step),
            DegeneracyBasis::Lx => m as f64 * period + self.offset * step,
        };
        let distance = |c: f64| {
            if c < -margin {
                -margin - c
            } else if c > period + margin {
                c - period - margin
            } else {
                0.0
            }
        };
        let d = distance(centre(k + 1)).min(distance(centre(-k - 1)));
        2.0 * envelope(&self.osc, self.n, d) / peak
    }

    fn terms(&self, coord: f64) -> RangeInclusive<i64> {
        if let Some(r) = &self.range {
            return r.clone();
        }
        let (period, step) = self.period_and_step();
        // centre of term m: Ly basis at -(m period + offset step) in x,
        // Lx basis at +(m period + offset step) in y
        let s = match self.basis {
            DegeneracyBasis::Ly => -coord,
            DegeneracyBasis::Lx => coord,
        };
        let lo = ((s - self.reach - self.offset * step) / period).ceil() as i64;
        let hi = ((s + self.reach - self.offset * step) / period).floor() as i64;
        lo..=hi
    }

    fn raw(&self, x: f64, y: f64) -> C64 {
        let g = &self.geom;
        let f = g.flux;
        let mut acc = C64::new(0.0, 0.0);
        match self.basis {
            DegeneracyBasis::Ly => {
                let ax = g.lx / f;
                for m in self.terms(x) {
                    let k = f * m as f64 + self.offset;
                    let amp = self.osc.eval_unchecked(self.n, x + k * ax);
                    if amp != 0.0 {
                        acc += C64::from_polar(amp, TAU * y * k / g.ly - g.theta_x * m as f64);
                    }
                }
            }
            DegeneracyBasis::Lx => {
                let ay = g.ly / f;
                for m in self.terms(y) {
                    let k = f * m as f64 + self.offset;
                    let amp = self.osc.eval_unchecked(self.n, y - k * ay);
                    if amp != 0.0 {
                        let phase = TAU * x / g.lx * (k - f * y / g.ly) + g.theta_y * m as f64;
                        acc += C64::from_polar(amp, phase);
                    }
                }
            }
        }
        acc
    }

    /// Normalization constant found by quadrature.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn energy(&self) -> f64 {
        self.geom.omega() * (self.n as f64 + 0.5)
    }
}

impl Amplitude for TorusEigenstate {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        self.raw(x, y) * self.norm
    }
}

/// Norm of the un-normalized sum on a grid with at least 12 points per
/// oscillator length.
fn reference_norm<A: Amplitude + HasGeometry>(st: &A) -> Result<f64> {
    let g = st.geometry();
    let h = 1.0 / (12.0 * g.mass_omega().sqrt());
    let nx = ((g.lx / h).ceil() as usize).max(16);
    let ny = ((g.ly / h).ceil() as usize).max(16);
    let s = SampledState::sample(g, nx, ny, st)?;
    let n = s.norm();
    if n == 0.0 {
        return Err(Error::InvalidParameter(
            "lattice sum vanishes identically".into(),
        ));
    }
    Ok(n)
}

pub(crate) trait HasGeometry {
    fn geometry(&self) -> &TorusGeometry;
}

impl HasGeometry for TorusEigenstate {
    fn geometry(&self) -> &TorusGeometry {
        &self.geom
    }
}

/// Analytic eigenstate on a torus of possibly non-integer flux.
pub fn torus_eigenstate_analytic(
    geom: &TorusGeometry,
    label: TorusLabel,
    policy: LatticeSumPolicy,
) -> Result<TorusEigenstate> {
    TorusEigenstate::new(geom, label, policy)
}

/// Unit-normalized sampled eigenstate on the closed `nx x ny` grid.
pub fn torus_eigenstate(
    cfg: &TorusConfig,
    label: TorusLabel,
    policy: LatticeSumPolicy,
    nx: usize,
    ny: usize,
) -> Result<SampledState> {
    let st = TorusEigenstate::new(&cfg.into(), label, policy)?;
    let mut s = SampledState::sample(&cfg.into(), nx, ny, &st)?;
    s.normalize();
    Ok(s)
}

/// All `nΦ` states of level `n` in the chosen degeneracy basis.
pub fn level_basis(
    cfg: &TorusConfig,
    n: usize,
    basis: DegeneracyBasis,
    policy: LatticeSumPolicy,
    nx: usize,
    ny: usize,
) -> Result<Vec<SampledState>> {
    (0..cfg.nphi() as i64)
        .map(|l| torus_eigenstate(cfg, TorusLabel { n, l, basis }, policy, nx, ny))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::Operator;
    use crate::torus_gauge::boundary_residual;
    use std::f64::consts::PI;

    #[test]
    fn quadrature_normalization_matches_unfolded_integral() {
        // unfolding the sum gives ∫|Σ|² = Ly (resp. Lx)
        let cfg = TorusConfig::new(1.0, 1.0, 1.3, 0.7, 3, 0.4, 1.9).unwrap();
        for n in 0..3 {
            let a =
                torus_eigenstate_analytic(&cfg.into(), TorusLabel::ly(n, 1), Default::default())
                    .unwrap();
            assert!((a.normalization() - 1.0 / 0.7f64.sqrt()).abs() < 1e-12);
            let a =
                torus_eigenstate_analytic(&cfg.into(), TorusLabel::lx(n, 2), Default::default())
                    .unwrap();
            assert!((a.normalization() - 1.0 / 1.3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_and_energy() {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 2, 0.7, 2.9).unwrap();
        for label in [TorusLabel::ly(1, 0), TorusLabel::lx(1, 1)] {
            let s = torus_eigenstate(&cfg, label, Default::default(), 120, 120).unwrap();
            assert!(boundary_residual(&s).unwrap() < 1e-10);
            let e = C64::from(cfg.omega() * 1.5);
            assert!(s.eigen_residual(Operator::H, e).unwrap() < 1e-6);
        }
    }

    #[test]
    fn fixed_cutoff_truncation_error() {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 1, 0.0, 0.0).unwrap();
        let err = torus_eigenstate_analytic(
            &cfg.into(),
            TorusLabel::ly(0, 0),
            LatticeSumPolicy::fixed(0, 1e-12),
        );
        assert!(matches!(err, Err(Error::Truncation { .. })));
        let ok = torus_eigenstate_analytic(
            &cfg.into(),
            TorusLabel::ly(0, 0),
            LatticeSumPolicy::fixed(6, 1e-12),
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn twisted_ground_state_peaks_at_centre() {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 1, PI, PI).unwrap();
        let s = torus_eigenstate(&cfg, TorusLabel::ly(0, 0), Default::default(), 64, 64).unwrap();
        let (mut best, mut at) = (0.0, (0, 0));
        for j in 0..64 {
            for i in 0..64 {
                let v = s.stored(i, j).norm();
                if v > best {
                    best = v;
                    at = (i, j);
                }
            }
        }
        assert_eq!(at, (32, 32));
    }
}
