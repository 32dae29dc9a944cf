//! Physical parameters and the quantities derived from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::TAU;

/// Anything that fixes a mass, a charge and a (uniform) field strength.
pub trait MagneticSystem {
    fn mass(&self) -> f64;
    fn charge(&self) -> f64;
    fn field(&self) -> f64;

    /// Cyclotron frequency `eB/M`.
    fn omega(&self) -> f64 {
        self.charge() * self.field() / self.mass()
    }

    /// `Mω`, which equals `eB`. Sets the oscillator length `1/sqrt(Mω)`.
    fn mass_omega(&self) -> f64 {
        self.charge() * self.field()
    }

    fn magnetic_length(&self) -> f64 {
        1.0 / self.mass_omega().sqrt()
    }
}

/// Cyclotron frequency of any magnetic system.
pub fn cyclotron_frequency<S: MagneticSystem + ?Sized>(system: &S) -> f64 {
    system.omega()
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

/// Infinite plane with a constant field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfiniteConfig {
    mass: f64,
    charge: f64,
    field: f64,
}

impl InfiniteConfig {
    pub fn new(mass: f64, charge: f64, field: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("charge", charge)?;
        check_positive("field", field)?;
        let cfg = Self {
            mass,
            charge,
            field,
        };
        check_positive("omega", cfg.omega())?;
        Ok(cfg)
    }

    /// `M = e = B = 1`.
    pub fn unit() -> Self {
        Self {
            mass: 1.0,
            charge: 1.0,
            field: 1.0,
        }
    }
}

impl MagneticSystem for InfiniteConfig {
    fn mass(&self) -> f64 {
        self.mass
    }
    fn charge(&self) -> f64 {
        self.charge
    }
    fn field(&self) -> f64 {
        self.field
    }
}

/// Rectangular torus `[0,Lx) x [0,Ly)` threaded by `nphi` flux quanta, with
/// boundary twist angles `theta_x`, `theta_y`.
///
/// The field is not a free parameter: `B = 2π nΦ / (e Lx Ly)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusConfig {
    mass: f64,
    charge: f64,
    lx: f64,
    ly: f64,
    nphi: u32,
    theta_x: f64,
    theta_y: f64,
}

/// Reduce an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

impl TorusConfig {
    pub fn new(
        mass: f64,
        charge: f64,
        lx: f64,
        ly: f64,
        nphi: u32,
        theta_x: f64,
        theta_y: f64,
    ) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("charge", charge)?;
        check_positive("lx", lx)?;
        check_positive("ly", ly)?;
        if nphi == 0 {
            return Err(Error::InvalidParameter("nphi must be >= 1".into()));
        }
        if !theta_x.is_finite() || !theta_y.is_finite() {
            return Err(Error::InvalidParameter(
                "twist angles must be finite".into(),
            ));
        }
        Ok(Self {
            mass,
            charge,
            lx,
            ly,
            nphi,
            theta_x: normalize_angle(theta_x),
            theta_y: normalize_angle(theta_y),
        })
    }

    /// Unit square torus with `M = e = 1` and no twist.
    pub fn unit_square(nphi: u32) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, 1.0, nphi, 0.0, 0.0)
    }

    pub fn with_thetas(&self, theta_x: f64, theta_y: f64) -> Self {
        Self {
            theta_x: normalize_angle(theta_x),
            theta_y: normalize_angle(theta_y),
            ..*self
        }
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }
    pub fn ly(&self) -> f64 {
        self.ly
    }
    pub fn nphi(&self) -> u32 {
        self.nphi
    }
    pub fn theta_x(&self) -> f64 {
        self.theta_x
    }
    pub fn theta_y(&self) -> f64 {
        self.theta_y
    }

    /// Elementary magnetic translation steps `(a_x, a_y) = (Lx/nΦ, Ly/nΦ)`.
    pub fn elementary_steps(&self) -> (f64, f64) {
        let n = self.nphi as f64;
        (self.lx / n, self.ly / n)
    }

    /// Same steps computed as `2π/(eB Ly)` and `2π/(eB Lx)`.
    pub fn elementary_steps_from_field(&self) -> (f64, f64) {
        let eb = self.charge * self.field();
        (TAU / (eb * self.ly), TAU / (eb * self.lx))
    }

    /// Total flux in units of the flux quantum, `eB Lx Ly / 2π`.
    pub fn flux_quanta(&self) -> f64 {
        self.charge * self.field() * self.lx * self.ly / TAU
    }

    /// Build from `key=value` pairs (see [`parse_key_values`]). Missing
    /// optional keys take defaults `mass = charge = lx = ly = 1`, zero twist.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str, default: Option<f64>| -> Result<f64> {
            match map.get(k) {
                Some(v) => v
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{k}: {e}"))),
                None => default.ok_or_else(|| Error::Parse(format!("missing key `{k}`"))),
            }
        };
        let nphi = match map.get("nphi") {
            Some(v) => v
                .trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("nphi: {e}")))?,
            None => return Err(Error::Parse("missing key `nphi`".into())),
        };
        Self::new(
            get("mass", Some(1.0))?,
            get("charge", Some(1.0))?,
            get("lx", Some(1.0))?,
            get("ly", Some(1.0))?,
            nphi,
            get("theta_x", Some(0.0))?,
            get("theta_y", Some(0.0))?,
        )
    }
}

impl MagneticSystem for TorusConfig {
    fn mass(&self) -> f64 {
        self.mass
    }
    fn charge(&self) -> f64 {
        self.charge
    }
    fn field(&self) -> f64 {
        TAU * self.nphi as f64 / (self.charge * self.lx * self.ly)
    }
}

/// Parse plain `key=value` lines. Blank lines and `#` comments are skipped;
/// keys are lower-cased and `-` is folded to `_`.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
        let key = k.trim().to_ascii_lowercase().replace('-', "_");
        if key.is_empty() {
            return Err(Error::Parse(format!("line {}: empty key", lineno + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_inputs_give_unit_frequency() {
        assert_eq!(cyclotron_frequency(&InfiniteConfig::unit()), 1.0);
        let cfg = InfiniteConfig::new(2.0, 1.0, 6.0).unwrap();
        assert_eq!(cfg.omega(), 3.0);
    }

    #[test]
    fn torus_field_is_flux_quantized() {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 2, 0.0, 0.0).unwrap();
        assert!((cfg.field() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((cfg.omega() - 12.566370614359172).abs() < 1e-12);
        assert!((cfg.flux_quanta() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn elementary_steps_agree() {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 2, 0.0, 0.0).unwrap();
        assert_eq!(cfg.elementary_steps().0, 0.5);
        let cfg = TorusConfig::new(1.0, 1.0, 3.0, 1.0, 1, 0.0, 0.0).unwrap();
        assert_eq!(cfg.elementary_steps().0, 3.0);
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 2.0, 4, 0.0, 0.0).unwrap();
        let (ax, ay) = cfg.elementary_steps();
        let (bx, by) = cfg.elementary_steps_from_field();
        assert_eq!(ax, 0.25);
        assert!((ax - bx).abs() < 1e-15);
        assert!((ay - by).abs() < 1e-15);
    }

    #[test]
    fn thetas_are_normalized() {
        let cfg = TorusConfig::new(
            1.0,
            1.0,
            1.0,
            1.0,
            1,
            -std::f64::consts::PI,
            3.0 * TAU + 0.5,
        )
        .unwrap();
        assert!((cfg.theta_x() - std::f64::consts::PI).abs() < 1e-12);
        assert!((cfg.theta_y() - 0.5).abs() < 1e-12);
        assert_eq!(normalize_angle(-1e-300), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TorusConfig::new(1.0, 1.0, 1.0, 1.0, 0, 0.0, 0.0).is_err());
        assert!(TorusConfig::new(-1.0, 1.0, 1.0, 1.0, 1, 0.0, 0.0).is_err());
        assert!(InfiniteConfig::new(1.0, 0.0, 1.0).is_err());
        assert!(TorusConfig::new(1.0, 1.0, 1.0, 1.0, 1, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn key_value_round() {
        let text = "# torus\nnphi = 3\nlx=2\ntheta-x = 0.5\n\n";
        let map = parse_key_values(text).unwrap();
        let cfg = TorusConfig::from_map(&map).unwrap();
        assert_eq!(cfg.nphi(), 3);
        assert_eq!(cfg.lx(), 2.0);
        assert_eq!(cfg.theta_x(), 0.5);
        assert!(parse_key_values("nphi").is_err());
        assert!(TorusConfig::from_map(&BTreeMap::new()).is_err());
    }

    proptest::proptest! {
        #[test]
        fn flux_is_integer_and_steps_tile(
            mass in 0.1f64..10.0, charge in 0.1f64..5.0,
            lx in 0.2f64..8.0, ly in 0.2f64..8.0, nphi in 1u32..20,
        ) {
            let cfg = TorusConfig::new(mass, charge, lx, ly, nphi, 0.0, 0.0).unwrap();
            proptest::prop_assert!((cfg.flux_quanta() - nphi as f64).abs() < 1e-9 * nphi as f64);
            let (ax, ay) = cfg.elementary_steps();
            proptest::prop_assert!((ax * nphi as f64 - lx).abs() < 1e-12 * lx);
            proptest::prop_assert!((ay * nphi as f64 - ly).abs() < 1e-12 * ly);
        }
    }
}
