use serde::{Deserialize, Serialize};

use crate::config::MagneticSystem;
use crate::error::Result;
use crate::fd::{FieldParams, Operator};
use crate::plane::{Amplitude, PlaneGrid, PlaneSample};
use crate::C64;

/// Eigenvalues `(λ, λ')` of `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentLabel {
    pub lambda: C64,
    pub lambda_prime: C64,
}

impl CoherentLabel {
    pub fn new(lambda: C64, lambda_prime: C64) -> Self {
        Self {
            lambda,
            lambda_prime,
        }
    }

    /// Label whose orbit centre sits at `(rx, ry)`.
    pub fn centered_at(mass_omega: f64, lambda: C64, rx: f64, ry: f64) -> Self {
        Self {
            lambda,
            lambda_prime: C64::new(rx, ry) * (mass_omega / 2.0).sqrt(),
        }
    }

    /// `(<R_x>, <R_y>) = sqrt(2/Mω) (Re λ', Im λ')`.
    pub fn center(&self, mass_omega: f64) -> (f64, f64) {
        let s = (2.0 / mass_omega).sqrt();
        (s * self.lambda_prime.re, s * self.lambda_prime.im)
    }

    /// `(<x>, <y>)`: orbit centre plus `sqrt(2/Mω) (Re λ, -Im λ)`.
    pub fn mean_position(&self, mass_omega: f64) -> (f64, f64) {
        let s = (2.0 / mass_omega).sqrt();
        let (rx, ry) = self.center(mass_omega);
        (rx + s * self.lambda.re, ry - s * self.lambda.im)
    }
}

/// `(λ e^{-iωt}, λ')`.
pub fn evolve_coherent(label: CoherentLabel, omega: f64, t: f64) -> CoherentLabel {
    CoherentLabel {
        lambda: label.lambda * C64::from_polar(1.0, -omega * t),
        ..label
    }
}

/// Unit-normalized infinite-volume coherent state.
#[derive(Clone, Copy, Debug)]
pub struct CoherentState {
    mass_omega: f64,
    label: CoherentLabel,
    /// real part of the exponent at the density peak, subtracted before
    /// exponentiating
    peak: f64,
    norm: f64,
}

impl CoherentState {
    fn exponent(&self, x: f64, y: f64) -> C64 {
        let k = self.mass_omega;
        let c = (k / 2.0).sqrt();
        let l = self.label.lambda;
        let lp = self.label.lambda_prime;
        C64::new(-(k / 4.0) * (x * x + y * y), -(k / 2.0) * x * y)
            + ((l + lp) * x + C64::i() * (l - lp) * y) * c
    }

    pub fn label(&self) -> CoherentLabel {
        self.label
    }

    /// Normalization constant of the peak-shifted exponential. Multiplying
    /// by `exp(-peak)` gives the coefficient of the bare exponential.
    pub fn normalization(&self) -> (f64, f64) {
        (self.norm, self.peak)
    }
}

impl Amplitude for CoherentState {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        (self.exponent(x, y) - self.peak).exp() * self.norm
    }
}

/// Window wide enough to hold the packet and fine enough for the
/// finite-difference stencils.
pub(crate) fn packet_grid(mass_omega: f64, center: (f64, f64), widths: f64) -> PlaneGrid {
    let ell = 1.0 / mass_omega.sqrt();
    PlaneGrid::centered(center, widths * ell, 0.03 * ell)
}

/// Coherent state `|λ λ'>` with its normalization fixed by quadrature.
pub fn coherent_amplitude<S: MagneticSystem + ?Sized>(
    cfg: &S,
    label: CoherentLabel,
) -> CoherentState {
    let k = cfg.mass_omega();
    let mut state = CoherentState {
        mass_omega: k,
        label,
        peak: 0.0,
        norm: 1.0,
    };
    let (xc, yc) = label.mean_position(k);
    state.peak = state.exponent(xc, yc).re;
    let ell = 1.0 / k.sqrt();
    let grid = PlaneGrid::centered((xc, yc), 10.0 * ell, ell / 12.0);
    let n = grid.sample(&state).norm();
    state.norm = 1.0 / n;
    state
}

/// The fourteen closed-form moments of a coherent state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentExpectations {
    pub rx: f64,
    pub d_rx: f64,
    pub ry: f64,
    pub d_ry: f64,
    pub rel_x: f64,
    pub d_rel_x: f64,
    pub rel_y: f64,
    pub d_rel_y: f64,
    pub mvx: f64,
    pub d_mvx: f64,
    pub mvy: f64,
    pub d_mvy: f64,
    pub energy: f64,
    pub d_energy: f64,
}

impl CoherentExpectations {
    pub fn as_array(&self) -> [(&'static str, f64); 14] {
        [
            ("<Rx>", self.rx),
            ("dRx", self.d_rx),
            ("<Ry>", self.ry),
            ("dRy", self.d_ry),
            ("<x-Rx>", self.rel_x),
            ("d(x-Rx)", self.d_rel_x),
            ("<y-Ry>", self.rel_y),
            ("d(y-Ry)", self.d_rel_y),
            ("<Mvx>", self.mvx),
            ("d(Mvx)", self.d_mvx),
            ("<Mvy>", self.mvy),
            ("d(Mvy)", self.d_mvy),
            ("<H>", self.energy),
            ("dH", self.d_energy),
        ]
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .map(|(a, b)| (a.1 - b.1).abs())
            .fold(0.0, f64::max)
    }
}

pub fn coherent_expectations<S: MagneticSystem + ?Sized>(
    cfg: &S,
    label: CoherentLabel,
) -> CoherentExpectations {
    let k = cfg.mass_omega();
    let w = cfg.omega();
    let s = (2.0 / k).sqrt();
    let d_pos = 1.0 / (2.0 * k).sqrt();
    let v = (2.0 * k).sqrt();
    let d_v = (k / 2.0).sqrt();
    let l = label.lambda;
    let lp = label.lambda_prime;
    CoherentExpectations {
        rx: s * lp.re,
        d_rx: d_pos,
        ry: s * lp.im,
        d_ry: d_pos,
        rel_x: s * l.re,
        d_rel_x: d_pos,
        rel_y: -s * l.im,
        d_rel_y: d_pos,
        mvx: v * l.im,
        d_mvx: d_v,
        mvy: v * l.re,
        d_mvy: d_v,
        energy: w * (l.norm_sqr() + 0.5),
        d_energy: w * l.norm(),
    }
}

/// The same moments measured by finite differences and quadrature on a
/// sampled coherent state.
pub fn measure_expectations<S: MagneticSystem + ?Sized>(
    cfg: &S,
    label: CoherentLabel,
) -> Result<CoherentExpectations> {
    let k = cfg.mass_omega();
    let state = coherent_amplitude(cfg, label);
    let sample = packet_grid(k, label.mean_position(k), 11.0).sample(&state);
    measure_sample(&sample, FieldParams::of(cfg))
}

pub(crate) fn measure_sample(sample: &PlaneSample, p: FieldParams) -> Result<CoherentExpectations> {
    let m = |op| sample.expectation(op, p).map(|(mean, d)| (mean.re, d));
    let (rx, d_rx) = m(Operator::Rx)?;
    let (ry, d_ry) = m(Operator::Ry)?;
    let (rel_x, d_rel_x) = m(Operator::RelX)?;
    let (rel_y, d_rel_y) = m(Operator::RelY)?;
    let (mvx, d_mvx) = m(Operator::MvX)?;
    let (mvy, d_mvy) = m(Operator::MvY)?;
    let (energy, d_energy) = m(Operator::H)?;
    Ok(CoherentExpectations {
        rx,
        d_rx,
        ry,
        d_ry,
        rel_x,
        d_rel_x,
        rel_y,
        d_rel_y,
        mvx,
        d_mvx,
        mvy,
        d_mvy,
        energy,
        d_energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InfiniteConfig;

    #[test]
    fn closed_form_simple_cases() {
        let cfg = InfiniteConfig::unit();
        let e = coherent_expectations(
            &cfg,
            CoherentLabel::new(C64::new(0.0, 0.0), C64::new(0.3, 0.1)),
        );
        assert_eq!(e.energy, 0.5);
        assert_eq!(e.d_energy, 0.0);
        let cfg = InfiniteConfig::new(1.0, 1.0, 2.0).unwrap();
        let e = coherent_expectations(
            &cfg,
            CoherentLabel::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        );
        assert!((e.rx - 1.0).abs() < 1e-15);
        assert_eq!(e.ry, 0.0);
    }

    #[test]
    fn evolution_is_periodic() {
        let l = CoherentLabel::new(C64::new(0.4, -0.2), C64::new(1.0, 2.0));
        assert_eq!(evolve_coherent(l, 2.0, 0.0), l);
        let back = evolve_coherent(l, 2.0, std::f64::consts::PI);
        assert!((back.lambda - l.lambda).norm() < 1e-15);
        assert_eq!(back.lambda_prime, l.lambda_prime);
    }

    #[test]
    fn normalization_matches_gaussian_integral() {
        // ∫|exp(E)|² = (2π/Mω) exp(Re(λ+λ')² + Im(λ-λ')²)
        let cfg = InfiniteConfig::new(1.3, 1.0, 0.9).unwrap();
        let k = cfg.mass_omega();
        let label = CoherentLabel::new(C64::new(0.3, -0.5), C64::new(-0.7, 0.2));
        let st = coherent_amplitude(&cfg, label);
        let (norm, peak) = st.normalization();
        let l = label.lambda;
        let lp = label.lambda_prime;
        let log_integral =
            (std::f64::consts::TAU / k).ln() + (l + lp).re.powi(2) + (l - lp).im.powi(2);
        let exact = (-0.5 * log_integral).exp();
        assert!((norm * (-peak).exp() - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn vacuum_density_moments() {
        // |ψ|² ∝ exp(-Mω r²/2): variance 1/Mω per direction
        let cfg = InfiniteConfig::new(1.0, 1.0, 1.7).unwrap();
        let k = cfg.mass_omega();
        let st = coherent_amplitude(
            &cfg,
            CoherentLabel::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        );
        let s = packet_grid(k, (0.0, 0.0), 10.0).sample(&st);
        let x2 = s.grid.sample(&|x: f64, _y: f64| C64::from(x * x));
        let y1 = s.grid.sample(&|_x: f64, y: f64| C64::from(y));
        let mut wx = s.clone();
        let mut wy = s.clone();
        for (k2, v) in wx.values.iter_mut().enumerate() {
            *v *= x2.values[k2];
        }
        for (k2, v) in wy.values.iter_mut().enumerate() {
            *v *= y1.values[k2];
        }
        assert!((s.inner(&wx).unwrap().re - 1.0 / k).abs() < 1e-10);
        assert!(s.inner(&wy).unwrap().norm() < 1e-12);
    }

    #[test]
    fn ladder_eigenvalues() {
        let cfg = InfiniteConfig::new(1.0, 1.0, 1.0).unwrap();
        let k = cfg.mass_omega();
        let label = CoherentLabel::new(C64::new(0.6, 0.3), C64::new(-0.4, 0.9));
        let st = coherent_amplitude(&cfg, label);
        let s = packet_grid(k, label.mean_position(k), 11.0).sample(&st);
        let p = FieldParams::of(&cfg);
        assert!(s.eigen_residual(Operator::A, p, label.lambda).unwrap() < 1e-6);
        assert!(
            s.eigen_residual(Operator::B, p, label.lambda_prime)
                .unwrap()
                < 1e-6
        );
    }
}
