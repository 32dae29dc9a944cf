use landau_core::spectral::{build_hamiltonian, low_spectrum, low_spectrum_with_states};
use landau_core::torus_states::{level_basis, projector_distance, DegeneracyBasis, DensityMap};
use landau_core::TorusConfig;
use std::f64::consts::PI;

fn level_errors(cfg: &TorusConfig, n: usize) -> Vec<f64> {
    let nphi = cfg.nphi() as usize;
    let h = build_hamiltonian(cfg, n, n).unwrap();
    let r = low_spectrum(&h, 3 * nphi).unwrap();
    r.clusters
        .iter()
        .zip(&r.reference)
        .map(|(c, e)| (c.mean - e).abs())
        .collect()
}

#[test]
fn lattice_error_is_second_order() {
    let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 1, 0.4, 1.2).unwrap();
    let coarse = level_errors(&cfg, 64);
    let fine = level_errors(&cfg, 128);
    for (n, (c, f)) in coarse.iter().zip(&fine).enumerate() {
        let ratio = c / f;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "level {n}: error ratio {ratio}"
        );
    }
}

#[test]
fn lattice_eigenvectors_approach_continuum_levels() {
    let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 2, 0.7, 2.1).unwrap();
    let h = build_hamiltonian(&cfg, 128, 128).unwrap();
    let (report, states) = low_spectrum_with_states(&h, 4).unwrap();
    assert_eq!(
        report
            .clusters
            .iter()
            .map(|c| c.multiplicity)
            .collect::<Vec<_>>(),
        vec![2, 2]
    );
    for n in 0..2 {
        let exact =
            level_basis(&cfg, n, DegeneracyBasis::Ly, Default::default(), 128, 128).unwrap();
        let d = projector_distance(&states[2 * n..2 * n + 2], &exact).unwrap();
        assert!(d < 1e-2, "level {n}: projector distance {d}");
    }
}

#[test]
fn lattice_ground_state_peaks_at_the_centre() {
    let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 1, PI, PI).unwrap();
    let h = build_hamiltonian(&cfg, 64, 64).unwrap();
    let (_, states) = low_spectrum_with_states(&h, 1).unwrap();
    let map = DensityMap::from_sampled(&states[0]).unwrap();
    let (x, y) = map.argmax_position();
    assert!(
        (x - 0.5).abs() <= 1.0 / 64.0 && (y - 0.5).abs() <= 1.0 / 64.0,
        "maximum at ({x}, {y})"
    );
    assert_eq!(map.local_maxima().len(), 1);
}

#[test]
fn lattice_levels_do_not_depend_on_the_angles() {
    let base = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 2, 0.0, 0.0).unwrap();
    let reference = low_spectrum(&build_hamiltonian(&base, 48, 48).unwrap(), 6).unwrap();
    for (tx, ty) in [(0.5, 0.0), (1.3, 2.9), (PI, PI)] {
        let r = low_spectrum(
            &build_hamiltonian(&base.with_thetas(tx, ty), 48, 48).unwrap(),
            6,
        )
        .unwrap();
        for (a, b) in r.clusters.iter().zip(&reference.clusters) {
            assert!(
                (a.mean - b.mean).abs() < 1e-8 * b.mean,
                "({tx}, {ty}): {} vs {}",
                a.mean,
                b.mean
            );
        }
    }
}
