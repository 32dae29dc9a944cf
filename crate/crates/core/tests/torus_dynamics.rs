use landau_core::config::MagneticSystem;
use landau_core::fd::Operator;
use landau_core::landau_inf::{evolve_coherent, CoherentLabel};
use landau_core::torus_states::{level_basis, torus_coherent, DegeneracyBasis, SampledState};
use landau_core::{TorusConfig, C64};
use std::f64::consts::PI;

const GRID: usize = 80;
const LEVELS: usize = 14;

fn cfg() -> TorusConfig {
    TorusConfig::new(1.0, 1.0, 1.0, 1.0, 2, 0.8, 2.2).unwrap()
}

/// Evolves `initial` by expanding it in the exact level bases `n < LEVELS`.
fn evolve_by_expansion(cfg: &TorusConfig, initial: &SampledState, t: f64) -> (SampledState, f64) {
    let mut out = initial.scaled(C64::new(0.0, 0.0));
    let mut weight = 0.0;
    for n in 0..LEVELS {
        let energy = cfg.omega() * (n as f64 + 0.5);
        let phase = C64::from_polar(1.0, -energy * t);
        for basis_state in
            level_basis(cfg, n, DegeneracyBasis::Ly, Default::default(), GRID, GRID).unwrap()
        {
            let c = basis_state.inner(initial).unwrap();
            weight += c.norm_sqr();
            out = out.add_scaled(c * phase, &basis_state).unwrap();
        }
    }
    (out, weight)
}

#[test]
fn coherent_label_flow_matches_eigen_expansion() {
    let cfg = cfg();
    let k = cfg.mass_omega();
    let label = CoherentLabel::centered_at(k, C64::new(0.45, -0.3), 0.35, 0.6);
    let initial = torus_coherent(&cfg, label, Default::default(), GRID, GRID).unwrap();
    let period = 2.0 * PI / cfg.omega();
    for frac in [0.13, 0.4, 0.77, 1.0] {
        let t = frac * period;
        let (expanded, weight) = evolve_by_expansion(&cfg, &initial, t);
        assert!(
            (weight - 1.0).abs() < 1e-8,
            "expansion misses weight {}",
            1.0 - weight
        );
        let flowed = torus_coherent(
            &cfg,
            evolve_coherent(label, cfg.omega(), t),
            Default::default(),
            GRID,
            GRID,
        )
        .unwrap();
        // the amplitudes are fixed by the generating-function exponent, which
        // differs from the normalized coherent state by a label-dependent
        // constant phase, so the comparison is between rays
        let overlap = flowed.inner(&expanded).unwrap();
        assert!(
            (overlap.norm() - 1.0).abs() < 1e-8,
            "t = {frac} T: overlap {overlap}"
        );
        let aligned = flowed.scaled(overlap / overlap.norm());
        let d = aligned.relative_sup_distance(&expanded).unwrap();
        assert!(d < 1e-5, "t = {frac} T: distance {d}");
    }
}

#[test]
fn coherent_energy_is_oscillator_energy() {
    let cfg = cfg();
    let k = cfg.mass_omega();
    for (lam, cx, cy) in [
        (C64::new(0.0, 0.0), 0.5, 0.5),
        (C64::new(0.6, 0.2), 0.1, 0.8),
        (C64::new(-0.3, 0.7), 0.9, 0.25),
    ] {
        let label = CoherentLabel::centered_at(k, lam, cx, cy);
        let s = torus_coherent(&cfg, label, Default::default(), 120, 120).unwrap();
        let e = s.expectation(Operator::H).unwrap();
        let want = cfg.omega() * (lam.norm_sqr() + 0.5);
        assert!(
            (e.re - want).abs() < 1e-5 * want && e.im.abs() < 1e-8,
            "lambda {lam}: {e} vs {want}"
        );
    }
}
