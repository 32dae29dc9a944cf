use clap::{Args, ValueEnum};
use landau_core::config::MagneticSystem;
use landau_core::export::{density_csv, density_pgm};
use landau_core::landau_inf::CoherentLabel;
use landau_core::torus_gauge::TorusGeometry;
use landau_core::torus_states::{
    density_map, torus_coherent_analytic, torus_eigenstate_analytic, TorusLabel,
};
use landau_core::C64;
use serde::Serialize;

use super::{outputs, parse_complex, parse_point, Outcome};
use crate::settings::{CliError, Settings};

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    /// Landau-level eigenstate |n l>
    Eigen,
    /// Torus coherent state
    Coherent,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Ly,
    Lx,
}

#[derive(Args, Debug, Serialize)]
pub struct DensityArgs {
    /// Which kind of state to plot
    #[arg(long, value_enum, default_value_t = StateKind::Eigen)]
    pub state: StateKind,
    /// Landau level of an eigenstate
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Degeneracy label of an eigenstate
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub l: i64,
    /// Degeneracy basis of an eigenstate
    #[arg(long, value_enum, default_value_t = BasisKind::Ly)]
    pub basis: BasisKind,
    /// Cyclotron label of a coherent state, `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(skip)]
    pub lambda: Option<C64>,
    /// Orbit centre of a coherent state, `x,y` (required for coherent states)
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub center: Option<(f64, f64)>,
}

#[derive(Serialize)]
struct DensitySummary {
    nx: usize,
    ny: usize,
    argmax_index: (usize, usize),
    argmax_position: (f64, f64),
    max_density: f64,
    integral: f64,
    local_maxima: Vec<(usize, usize)>,
}

pub fn density(settings: &Settings, args: &DensityArgs) -> Result<Outcome, CliError> {
    let cfg = settings.torus()?;
    let geom: TorusGeometry = cfg.into();
    let res = settings.grid.unwrap_or(256);
    if res == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let map = match args.state {
        StateKind::Eigen => {
            let label = match args.basis {
                BasisKind::Ly => TorusLabel::ly(args.n, args.l),
                BasisKind::Lx => TorusLabel::lx(args.n, args.l),
            };
            let st = torus_eigenstate_analytic(&geom, label, Default::default())?;
            density_map(&geom, &st, res, res)?
        }
        StateKind::Coherent => {
            let lambda = args.lambda.unwrap_or(C64::new(0.0, 0.0));
            // no default: the image sum has nΦ zeros on the torus whose
            // positions move with the twist angles
            let (cx, cy) = args
                .center
                .ok_or_else(|| CliError::Usage("--state coherent needs --center x,y".into()))?;
            let label = CoherentLabel::centered_at(cfg.mass_omega(), lambda, cx, cy);
            let st = torus_coherent_analytic(&geom, label, Default::default())?;
            density_map(&geom, &st, res, res)?
        }
    };
    let summary = DensitySummary {
        nx: map.nx,
        ny: map.ny,
        argmax_index: map.argmax,
        argmax_position: map.argmax_position(),
        max_density: map.max(),
        integral: map.integral(),
        local_maxima: map.local_maxima(),
    };
    let mut out = outputs(settings)?;
    out.write("density.csv", &density_csv(&map))?;
    out.write("density.pgm", &density_pgm(&map))?;
    let text = out.write_json("density.json", &summary)?;
    let options = serde_json::json!({
        "state": args.state,
        "n": args.n,
        "l": args.l,
        "basis": args.basis,
        "lambda": args.lambda.map(|c| [c.re, c.im]),
        "center": args.center,
    });
    out.finish("density", settings, &options, vec![])?;
    Ok(Outcome {
        summary: text,
        success: true,
    })
}
