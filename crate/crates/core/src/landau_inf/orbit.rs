use serde::{Deserialize, Serialize};

/// Classical cyclotron orbit, traversed counter-clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalOrbit {
    pub center: (f64, f64),
    pub radius: f64,
    pub phase0: f64,
    pub omega: f64,
}

impl ClassicalOrbit {
    /// Orbit through `position` with `velocity`. The centre is the conserved
    /// `(x - v_y/ω, y + v_x/ω)`.
    pub fn from_initial(position: (f64, f64), velocity: (f64, f64), omega: f64) -> Self {
        let center = (
            position.0 - velocity.1 / omega,
            position.1 + velocity.0 / omega,
        );
        let rel = (position.0 - center.0, position.1 - center.1);
        Self {
            center,
            radius: rel.0.hypot(rel.1),
            phase0: rel.1.atan2(rel.0),
            omega,
        }
    }

    pub fn position(&self, t: f64) -> (f64, f64) {
        let phi = self.omega * t + self.phase0;
        (
            self.center.0 + self.radius * phi.cos(),
            self.center.1 + self.radius * phi.sin(),
        )
    }

    pub fn velocity(&self, t: f64) -> (f64, f64) {
        let phi = self.omega * t + self.phase0;
        let v = self.omega * self.radius;
        (-v * phi.sin(), v * phi.cos())
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    /// `M ω² r² / 2`.
    pub fn energy(&self, mass: f64) -> f64 {
        0.5 * mass * (self.omega * self.radius).powi(2)
    }

    pub fn trace(&self, times: &[f64]) -> Vec<(f64, f64)> {
        times.iter().map(|&t| self.position(t)).collect()
    }
}

/// Fold a point into `[0, Lx) x [0, Ly)`.
pub fn wrap_into_torus(p: (f64, f64), lx: f64, ly: f64) -> (f64, f64) {
    let fold = |v: f64, l: f64| {
        let w = v.rem_euclid(l);
        if w >= l {
            0.0
        } else {
            w
        }
    };
    (fold(p.0, lx), fold(p.1, ly))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_radius_stays_put() {
        let o = ClassicalOrbit {
            center: (0.3, -1.0),
            radius: 0.0,
            phase0: 1.0,
            omega: 2.0,
        };
        for p in o.trace(&[0.0, 0.5, 3.0]) {
            assert_eq!(p, (0.3, -1.0));
        }
    }

    #[test]
    fn closes_after_one_period() {
        let o = ClassicalOrbit {
            center: (0.1, 0.2),
            radius: 1.5,
            phase0: 0.3,
            omega: 1.7,
        };
        let a = o.position(0.0);
        let b = o.position(o.period());
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    }

    #[test]
    fn initial_conditions_round_trip() {
        let o = ClassicalOrbit::from_initial((1.0, 2.0), (0.5, -0.25), 2.0);
        let p = o.position(0.0);
        let v = o.velocity(0.0);
        assert!((p.0 - 1.0).abs() < 1e-14 && (p.1 - 2.0).abs() < 1e-14);
        assert!((v.0 - 0.5).abs() < 1e-14 && (v.1 + 0.25).abs() < 1e-14);
        assert!((o.radius - 0.5f64.hypot(0.25) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn wrapped_large_orbit_crosses_and_closes() {
        let (lx, ly) = (1.0, 1.0);
        let o = ClassicalOrbit {
            center: (0.5, 0.5),
            radius: 1.7,
            phase0: 0.0,
            omega: 1.0,
        };
        let times: Vec<f64> = (0..=400).map(|k| o.period() * k as f64 / 400.0).collect();
        let wrapped: Vec<_> = o
            .trace(&times)
            .into_iter()
            .map(|p| wrap_into_torus(p, lx, ly))
            .collect();
        assert!(wrapped
            .iter()
            .all(|p| (0.0..lx).contains(&p.0) && (0.0..ly).contains(&p.1)));
        let jumps = wrapped
            .windows(2)
            .filter(|w| (w[0].0 - w[1].0).abs() > 0.5 * lx)
            .count();
        assert!(jumps >= 2);
        let (a, b) = (wrapped[0], wrapped[400]);
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn energy_constant_on_circle(r in 0.0f64..5.0, w in 0.1f64..5.0, t in 0.0f64..20.0) {
            let o = ClassicalOrbit { center: (0.0, 0.0), radius: r, phase0: 0.2, omega: w };
            let v = o.velocity(t);
            let e_kin = 0.5 * (v.0 * v.0 + v.1 * v.1);
            proptest::prop_assert!((e_kin - o.energy(1.0)).abs() < 1e-10 * (1.0 + e_kin));
            let p = o.position(t);
            proptest::prop_assert!((p.0.hypot(p.1) - r).abs() < 1e-12 * (1.0 + r));
        }
    }
}
