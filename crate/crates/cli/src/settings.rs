//! Global flags, the optional key=value config file and their merge.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use landau_core::config::parse_key_values;
use landau_core::TorusConfig;
use serde::Serialize;

#[derive(Args, Debug, Clone, Default)]
pub struct CommonFlags {
    /// Particle mass M
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Particle charge e
    #[arg(long, global = true)]
    pub charge: Option<f64>,
    /// Torus length in x
    #[arg(long, global = true)]
    pub lx: Option<f64>,
    /// Torus length in y
    #[arg(long, global = true)]
    pub ly: Option<f64>,
    /// Number of flux quanta through the torus
    #[arg(long, global = true)]
    pub nphi: Option<u32>,
    /// Boundary twist angle in x
    #[arg(long = "theta-x", global = true, allow_negative_numbers = true)]
    pub theta_x: Option<f64>,
    /// Boundary twist angle in y
    #[arg(long = "theta-y", global = true, allow_negative_numbers = true)]
    pub theta_y: Option<f64>,
    /// Grid points per direction (lattice size or image resolution)
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Number of Landau levels
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// Directory for output files
    #[arg(long = "out-dir", global = true)]
    pub out_dir: Option<PathBuf>,
    /// Plain key=value config file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Everything a command needs after flags and file are merged.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub mass: f64,
    pub charge: f64,
    pub lx: f64,
    pub ly: f64,
    pub nphi: Option<u32>,
    pub theta_x: f64,
    pub theta_y: f64,
    pub grid: Option<usize>,
    pub levels: Option<usize>,
    pub out_dir: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing user input: reported as a usage error.
    Usage(String),
    /// Anything else: reported on stderr with exit status 1.
    Failed(String),
}

impl Settings {
    pub fn resolve(flags: &CommonFlags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Failed(format!("cannot read {}: {e}", path.display()))
                })?;
                parse_key_values(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => BTreeMap::new(),
        };
        fn pick<T: std::str::FromStr>(
            flag: Option<T>,
            file: &BTreeMap<String, String>,
            key: &str,
        ) -> Result<Option<T>, CliError> {
            if flag.is_some() {
                return Ok(flag);
            }
            file.get(key)
                .map(|v| {
                    v.parse::<T>().map_err(|_| {
                        CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))
                    })
                })
                .transpose()
        }
        let out_dir = match &flags.out_dir {
            Some(p) => p.clone(),
            None => file
                .get("out_dir")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("landau-out")),
        };
        Ok(Self {
            mass: pick(flags.mass, &file, "mass")?.unwrap_or(1.0),
            charge: pick(flags.charge, &file, "charge")?.unwrap_or(1.0),
            lx: pick(flags.lx, &file, "lx")?.unwrap_or(1.0),
            ly: pick(flags.ly, &file, "ly")?.unwrap_or(1.0),
            nphi: pick(flags.nphi, &file, "nphi")?,
            theta_x: pick(flags.theta_x, &file, "theta_x")?.unwrap_or(0.0),
            theta_y: pick(flags.theta_y, &file, "theta_y")?.unwrap_or(0.0),
            grid: pick(flags.grid, &file, "grid")?,
            levels: pick(flags.levels, &file, "levels")?,
            out_dir,
        })
    }

    /// Torus configuration; `nphi` must have been given somewhere.
    pub fn torus(&self) -> Result<TorusConfig, CliError> {
        let nphi = self.nphi.ok_or_else(|| {
            CliError::Usage(
                "the number of flux quanta is required (--nphi or `nphi=` in --config)".into(),
            )
        })?;
        TorusConfig::new(
            self.mass,
            self.charge,
            self.lx,
            self.ly,
            nphi,
            self.theta_x,
            self.theta_y,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }
}
