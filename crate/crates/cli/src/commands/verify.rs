use std::f64::consts::PI;

use clap::Args;
use landau_core::config::MagneticSystem;
use landau_core::landau_inf::{
    coherent_expectations, ladder_apply, measure_expectations, ClassicalOrbit, CoherentLabel,
    FockLabel, FockState, Ladder,
};
use landau_core::maggroup::{self, UnitaryRep};
use landau_core::spectral::{build_hamiltonian, low_spectrum, SOLVER_SEED};
use landau_core::torus_gauge::{boundary_consistency_defect, boundary_residual, TorusGeometry};
use landau_core::torus_states::{
    level_basis, projector_distance, translation_expectation, DegeneracyBasis, Direction,
};
use landau_core::{InfiniteConfig, TorusConfig, C64};
use serde::Serialize;

use super::{outputs, Outcome};
use crate::settings::{CliError, Settings};

/// Flux used when neither a flag nor the config file sets one.
const DEFAULT_NPHI: u32 = 2;

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Replace the flux entering the boundary-consistency checks by this
    /// (possibly non-integer) value
    #[arg(long = "flux-override")]
    pub flux_override: Option<f64>,
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    measured: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Report {
    nphi: u32,
    flux: f64,
    all_pass: bool,
    checks: Vec<Check>,
}

struct Suite(Vec<Check>);

impl Suite {
    /// Records `measured <= tolerance`; NaN fails.
    fn check(&mut self, name: &'static str, measured: f64, tolerance: f64) {
        self.0.push(Check {
            name,
            measured,
            tolerance,
            pass: measured <= tolerance,
        });
    }
}

/// Lattice with at least 48 points that the flux divides.
fn state_grid(nphi: u32) -> usize {
    let n = nphi as usize;
    n * 48usize.div_ceil(n)
}

fn torus_checks(suite: &mut Suite, cfg: &TorusConfig) -> Result<(), CliError> {
    let nphi = cfg.nphi();
    let grid = state_grid(nphi);
    let ty_step = C64::from_polar(1.0, 2.0 * PI / nphi as f64);
    let (mut bc, mut weyl, mut ty_eig, mut ladder, mut proj): (f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0);
    for n in 0..=3 {
        let ly = level_basis(cfg, n, DegeneracyBasis::Ly, Default::default(), grid, grid)?;
        let lx = level_basis(cfg, n, DegeneracyBasis::Lx, Default::default(), grid, grid)?;
        for s in ly.iter().chain(&lx) {
            bc = bc.max(boundary_residual(s)?);
            let lhs = s.apply_tx()?.apply_ty()?;
            let rhs = s.apply_ty()?.apply_tx()?.scaled(ty_step);
            weyl = weyl.max(lhs.relative_sup_distance(&rhs)?);
        }
        for (l, s) in ly.iter().enumerate() {
            let want = C64::from_polar(1.0, 2.0 * PI * l as f64 / nphi as f64);
            ty_eig = ty_eig.max((translation_expectation(s, Direction::Y, 1)? - want).norm());
            let next = &ly[(l + 1) % ly.len()];
            ladder = ladder.max((next.inner(&s.apply_tx()?)?.norm() - 1.0).abs());
        }
        if n <= 2 {
            proj = proj.max(projector_distance(&ly, &lx)?);
        }
    }
    suite.check("eigenstate_boundary_residual", bc, 1e-8);
    suite.check("grid_weyl_relation", weyl, 1e-10);
    suite.check("ty_eigenvalues", ty_eig, 1e-8);
    suite.check("tx_ladder_overlap", ladder, 1e-8);
    suite.check("degenerate_basis_projector_distance", proj, 1e-8);

    let lattice = 16 * nphi.max(2) as usize;
    let report = low_spectrum(
        &build_hamiltonian(cfg, lattice, lattice)?,
        2 * nphi as usize,
    )?;
    let bad_clusters = report
        .clusters
        .iter()
        .filter(|c| c.multiplicity != nphi as usize)
        .count();
    suite.check(
        "lattice_cluster_multiplicity_mismatches",
        bad_clusters as f64,
        0.0,
    );
    let spread = report
        .clusters
        .iter()
        .map(|c| c.relative_spread)
        .fold(0.0, f64::max);
    suite.check("lattice_cluster_relative_spread", spread, 1e-6);
    Ok(())
}

fn algebra_checks(suite: &mut Suite, nphi: u32) -> Result<(), CliError> {
    let rep = UnitaryRep::new(nphi)?;
    suite.check("matrix_weyl_relation", rep.weyl_deviation(), 1e-14);
    suite.check("representation_unitarity", rep.unitarity_deviation(), 1e-14);
    suite.check(
        "commutant_dimension_excess",
        rep.commutant_dimension() as f64 - 1.0,
        0.0,
    );
    if nphi <= 6 {
        let center_ok = maggroup::center(nphi) == maggroup::center_brute(nphi);
        suite.check(
            "center_closed_form_mismatch",
            if center_ok { 0.0 } else { 1.0 },
            0.0,
        );
        let quotient_ok = maggroup::quotient_by_center(nphi).is_some();
        suite.check(
            "quotient_not_z_n_squared",
            if quotient_ok { 0.0 } else { 1.0 },
            0.0,
        );
    }
    let mut fock: f64 = 0.0;
    for n in 0..5 {
        for np in 0..5 {
            let s = FockState::basis(FockLabel::new(n, np));
            let comm = |x: Ladder, y: Ladder| {
                &ladder_apply(x, &ladder_apply(y, &s)) - &ladder_apply(y, &ladder_apply(x, &s))
            };
            fock = fock.max((&comm(Ladder::A, Ladder::ADag) - &s).max_norm());
            fock = fock.max((&comm(Ladder::B, Ladder::BDag) - &s).max_norm());
            fock = fock.max(comm(Ladder::A, Ladder::B).max_norm());
            fock = fock.max(comm(Ladder::A, Ladder::BDag).max_norm());
        }
    }
    suite.check("fock_commutators", fock, 1e-12);
    Ok(())
}

fn plane_checks(suite: &mut Suite, cfg: &TorusConfig) -> Result<(), CliError> {
    let plane = InfiniteConfig::new(cfg.mass(), cfg.charge(), cfg.field())?;
    let label = CoherentLabel::new(C64::new(0.4, -0.3), C64::new(0.2, 0.5));
    let diff = coherent_expectations(&plane, label)
        .max_abs_difference(&measure_expectations(&plane, label)?);
    suite.check("coherent_expectations_quadrature", diff, 1e-6);
    let omega = plane.omega();
    let orbit = ClassicalOrbit::from_initial((0.3, 0.1), (0.2 * omega, -0.1 * omega), omega);
    let (a, b) = (orbit.position(0.0), orbit.position(orbit.period()));
    suite.check("orbit_closure", (a.0 - b.0).hypot(a.1 - b.1), 1e-9);
    Ok(())
}

pub fn verify(settings: &Settings, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let resolved = Settings {
        nphi: Some(settings.nphi.unwrap_or(DEFAULT_NPHI)),
        ..settings.clone()
    };
    let cfg = resolved.torus()?;
    let nphi = cfg.nphi();
    let geom: TorusGeometry = cfg.into();
    let flux = args.flux_override.unwrap_or(geom.flux);
    let probed = geom.with_flux(flux);
    let mut suite = Suite(Vec::new());
    suite.check("flux_integrality", (flux - flux.round()).abs(), 1e-12);
    suite.check(
        "boundary_consistency",
        boundary_consistency_defect(&probed),
        1e-12,
    );
    algebra_checks(&mut suite, nphi)?;
    torus_checks(&mut suite, &cfg)?;
    plane_checks(&mut suite, &cfg)?;
    let all_pass = suite.0.iter().all(|c| c.pass);
    let report = Report {
        nphi,
        flux,
        all_pass,
        checks: suite.0,
    };
    let mut out = outputs(&resolved)?;
    let text = out.write_json("verify.json", &report)?;
    out.finish("verify", &resolved, args, vec![SOLVER_SEED])?;
    Ok(Outcome {
        summary: text,
        success: all_pass,
    })
}
