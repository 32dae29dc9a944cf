use std::fmt::Write as _;

use clap::Args;
use landau_core::config::MagneticSystem;
use landau_core::landau_inf::{
    coherent_expectations, evolve_coherent, wrap_into_torus, ClassicalOrbit, CoherentLabel,
};
use landau_core::C64;
use serde::Serialize;

use super::{outputs, parse_complex, parse_point, Outcome};
use crate::settings::{CliError, Settings};

/// Closure tolerance for the classical orbit after whole periods.
const CLOSURE_TOLERANCE: f64 = 1e-9;

#[derive(Args, Debug, Serialize)]
pub struct OrbitArgs {
    /// Orbit centre `x,y` (default: torus centre)
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub center: Option<(f64, f64)>,
    /// Orbit radius (default: a quarter of the shorter side)
    #[arg(long)]
    pub radius: Option<f64>,
    /// Number of cyclotron periods to trace
    #[arg(long, default_value_t = 1)]
    pub periods: u32,
    /// Samples per period
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Serialize)]
struct OrbitSummary {
    center: (f64, f64),
    radius: f64,
    omega: f64,
    period: f64,
    energy: f64,
    wraps: bool,
    closure_residual: f64,
    closes: bool,
}

pub fn orbit(settings: &Settings, args: &OrbitArgs) -> Result<Outcome, CliError> {
    let cfg = settings.torus()?;
    let (lx, ly) = (cfg.lx(), cfg.ly());
    let center = args.center.unwrap_or((lx / 2.0, ly / 2.0));
    let radius = args.radius.unwrap_or(0.25 * lx.min(ly));
    if !(radius.is_finite() && radius > 0.0) || args.samples == 0 || args.periods == 0 {
        return Err(CliError::Usage(
            "radius, periods and samples must be positive".into(),
        ));
    }
    let omega = cfg.omega();
    let orbit =
        ClassicalOrbit::from_initial((center.0 + radius, center.1), (0.0, omega * radius), omega);
    let period = orbit.period();
    let total = args.samples * args.periods as usize;
    let mut csv = String::from("t,x,y,x_wrapped,y_wrapped\n");
    let mut wraps = false;
    for s in 0..=total {
        let t = period * s as f64 / args.samples as f64;
        let p = orbit.position(t);
        let w = wrap_into_torus(p, lx, ly);
        wraps |= (w.0 - p.0).abs() > 0.0 || (w.1 - p.1).abs() > 0.0;
        let _ = writeln!(csv, "{t},{},{},{},{}", p.0, p.1, w.0, w.1);
    }
    let start = orbit.position(0.0);
    let end = orbit.position(period * args.periods as f64);
    let closure_residual = (end.0 - start.0).hypot(end.1 - start.1);
    let summary = OrbitSummary {
        center: orbit.center,
        radius: orbit.radius,
        omega,
        period,
        energy: orbit.energy(cfg.mass()),
        wraps,
        closure_residual,
        closes: closure_residual < CLOSURE_TOLERANCE,
    };
    let mut out = outputs(settings)?;
    out.write("orbit.csv", &csv)?;
    let text = out.write_json("orbit.json", &summary)?;
    out.finish("orbit", settings, args, vec![])?;
    Ok(Outcome {
        summary: text,
        success: true,
    })
}

#[derive(Args, Debug, Serialize)]
pub struct CoherentArgs {
    /// Cyclotron label `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(skip)]
    pub lambda: Option<C64>,
    /// Orbit centre `x,y` (default: torus centre)
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub center: Option<(f64, f64)>,
    /// End time (default: one cyclotron period)
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Number of time steps
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
}

#[derive(Serialize)]
struct CoherentSummary {
    lambda: [f64; 2],
    lambda_prime: [f64; 2],
    period: f64,
    t_max: f64,
    energy: f64,
    max_energy_drift: f64,
    /// distance of `(<x>, <y>)` after one period from the start
    return_error: f64,
}

pub fn coherent(settings: &Settings, args: &CoherentArgs) -> Result<Outcome, CliError> {
    let cfg = settings.torus()?;
    let k = cfg.mass_omega();
    let omega = cfg.omega();
    let lambda = args.lambda.unwrap_or(C64::new(0.0, 0.0));
    let (cx, cy) = args.center.unwrap_or((cfg.lx() / 2.0, cfg.ly() / 2.0));
    let label = CoherentLabel::centered_at(k, lambda, cx, cy);
    let period = std::f64::consts::TAU / omega;
    let t_max = args.t_max.unwrap_or(period);
    if args.steps == 0 || !(t_max.is_finite() && t_max >= 0.0) {
        return Err(CliError::Usage(
            "--steps must be positive and --t-max non-negative".into(),
        ));
    }
    let mut csv = String::from("t,x,y,dx,dy,energy,d_energy\n");
    let start = coherent_expectations(&cfg, label);
    let mut drift: f64 = 0.0;
    for s in 0..=args.steps {
        let t = t_max * s as f64 / args.steps as f64;
        let e = coherent_expectations(&cfg, evolve_coherent(label, omega, t));
        // the guiding centre and the relative coordinate are independent
        let dx = e.d_rx.hypot(e.d_rel_x);
        let dy = e.d_ry.hypot(e.d_rel_y);
        drift = drift.max((e.energy - start.energy).abs());
        let _ = writeln!(
            csv,
            "{t},{},{},{dx},{dy},{},{}",
            e.rx + e.rel_x,
            e.ry + e.rel_y,
            e.energy,
            e.d_energy
        );
    }
    let back = coherent_expectations(&cfg, evolve_coherent(label, omega, period));
    let return_error = (back.rx + back.rel_x - start.rx - start.rel_x)
        .hypot(back.ry + back.rel_y - start.ry - start.rel_y);
    let summary = CoherentSummary {
        lambda: [lambda.re, lambda.im],
        lambda_prime: [label.lambda_prime.re, label.lambda_prime.im],
        period,
        t_max,
        energy: start.energy,
        max_energy_drift: drift,
        return_error,
    };
    let mut out = outputs(settings)?;
    out.write("coherent.csv", &csv)?;
    let text = out.write_json("coherent.json", &summary)?;
    let options = serde_json::json!({
        "lambda": [lambda.re, lambda.im],
        "center": (cx, cy),
        "t_max": t_max,
        "steps": args.steps,
    });
    out.finish("coherent", settings, &options, vec![])?;
    Ok(Outcome {
        summary: text,
        success: true,
    })
}
