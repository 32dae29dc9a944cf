mod density;
mod dynamics;
mod group;
mod spectrum;
mod verify;

pub use density::{density, DensityArgs};
pub use dynamics::{coherent, orbit, CoherentArgs, OrbitArgs};
pub use group::{group, GroupArgs};
pub use spectrum::spectrum;
pub use verify::{verify, VerifyArgs};

use landau_core::C64;

use crate::output::Outputs;
use crate::settings::{CliError, Settings};

/// Printed summary and whether the command counts as a success.
pub struct Outcome {
    pub summary: String,
    pub success: bool,
}

impl From<landau_core::Error> for CliError {
    fn from(e: landau_core::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(format!("cannot write output: {e}"))
    }
}

/// Parses `re,im` (or a bare real number).
pub fn parse_complex(text: &str) -> Result<C64, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got `{text}`")),
    }
}

/// Parses `x,y`.
pub fn parse_point(text: &str) -> Result<(f64, f64), String> {
    let c = parse_complex(text)?;
    if text.contains(',') {
        Ok((c.re, c.im))
    } else {
        Err(format!("expected `x,y`, got `{text}`"))
    }
}

fn outputs(settings: &Settings) -> Result<Outputs, CliError> {
    Ok(Outputs::new(&settings.out_dir)?)
}
