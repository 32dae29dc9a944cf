use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::config::MagneticSystem;
use crate::C64;

/// `|n n'>`: Landau level `n`, degeneracy quantum number `n'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockLabel {
    pub n: u32,
    pub n_prime: u32,
}

impl FockLabel {
    pub fn new(n: u32, n_prime: u32) -> Self {
        Self { n, n_prime }
    }

    /// Angular momentum `m = n - n'`.
    pub fn angular_momentum(&self) -> i64 {
        self.n as i64 - self.n_prime as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    A,
    ADag,
    B,
    BDag,
}

/// Finitely supported superposition of `|n n'>` states. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockState(BTreeMap<FockLabel, C64>);

impl FockState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(label: FockLabel) -> Self {
        let mut s = Self::new();
        s.add_term(label, C64::new(1.0, 0.0));
        s
    }

    pub fn add_term(&mut self, label: FockLabel, c: C64) {
        let slot = self.0.entry(label).or_insert(C64::new(0.0, 0.0));
        *slot += c;
        if *slot == C64::new(0.0, 0.0) {
            self.0.remove(&label);
        }
    }

    pub fn coefficient(&self, label: FockLabel) -> C64 {
        self.0.get(&label).copied().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockLabel, &C64)> {
        self.0.iter()
    }

    /// Largest coefficient modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl FromIterator<(FockLabel, C64)> for FockState {
    fn from_iter<I: IntoIterator<Item = (FockLabel, C64)>>(iter: I) -> Self {
        let mut s = Self::new();
        for (l, c) in iter {
            s.add_term(l, c);
        }
        s
    }
}

impl Add for &FockState {
    type Output = FockState;
    fn add(self, rhs: &FockState) -> FockState {
        let mut out = self.clone();
        for (l, c) in rhs.iter() {
            out.add_term(*l, *c);
        }
        out
    }
}

impl Sub for &FockState {
    type Output = FockState;
    fn sub(self, rhs: &FockState) -> FockState {
        let mut out = self.clone();
        for (l, c) in rhs.iter() {
            out.add_term(*l, -*c);
        }
        out
    }
}

impl Mul<C64> for &FockState {
    type Output = FockState;
    fn mul(self, s: C64) -> FockState {
        self.iter().map(|(l, c)| (*l, c * s)).collect()
    }
}

/// Standard oscillator action of `a, a†` (on `n`) and `b, b†` (on `n'`).
pub fn ladder_apply(which: Ladder, state: &FockState) -> FockState {
    let mut out = FockState::new();
    for (&FockLabel { n, n_prime }, &c) in state.iter() {
        let image = match which {
            Ladder::A if n > 0 => Some((FockLabel::new(n - 1, n_prime), (n as f64).sqrt())),
            Ladder::ADag => Some((FockLabel::new(n + 1, n_prime), (n as f64 + 1.0).sqrt())),
            Ladder::B if n_prime > 0 => {
                Some((FockLabel::new(n, n_prime - 1), (n_prime as f64).sqrt()))
            }
            Ladder::BDag => Some((
                FockLabel::new(n, n_prime + 1),
                (n_prime as f64 + 1.0).sqrt(),
            )),
            _ => None,
        };
        if let Some((label, amp)) = image {
            out.add_term(label, c * amp);
        }
    }
    out
}

/// `(E, m) = (ω(n + 1/2), n - n')`.
pub fn fock_energy_and_angular_momentum<S: MagneticSystem + ?Sized>(
    cfg: &S,
    label: FockLabel,
) -> (f64, i64) {
    (
        cfg.omega() * (label.n as f64 + 0.5),
        label.angular_momentum(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InfiniteConfig;
    use proptest::prelude::*;

    fn commutator(x: Ladder, y: Ladder, s: &FockState) -> FockState {
        &ladder_apply(x, &ladder_apply(y, s)) - &ladder_apply(y, &ladder_apply(x, s))
    }

    fn vacuum() -> FockState {
        FockState::basis(FockLabel::new(0, 0))
    }

    #[test]
    fn vacuum_is_annihilated() {
        assert!(ladder_apply(Ladder::A, &vacuum()).is_empty());
        assert!(ladder_apply(Ladder::B, &vacuum()).is_empty());
        let up = ladder_apply(Ladder::ADag, &vacuum());
        assert_eq!(up, FockState::basis(FockLabel::new(1, 0)));
    }

    #[test]
    fn energy_and_angular_momentum() {
        let cfg = InfiniteConfig::unit();
        assert_eq!(
            fock_energy_and_angular_momentum(&cfg, FockLabel::new(0, 3)).1,
            -3
        );
        assert_eq!(
            fock_energy_and_angular_momentum(&cfg, FockLabel::new(2, 0)),
            (2.5, 2)
        );
    }

    fn arb_state() -> impl Strategy<Value = FockState> {
        prop::collection::vec((0u32..12, 0u32..12, -1.0f64..1.0, -1.0f64..1.0), 20).prop_map(
            |terms| {
                terms
                    .into_iter()
                    .map(|(n, np, re, im)| (FockLabel::new(n, np), C64::new(re, im)))
                    .collect()
            },
        )
    }

    proptest! {
        #[test]
        fn canonical_commutators(s in arb_state()) {
            let scale = s.max_norm().max(1.0);
            let one = commutator(Ladder::A, Ladder::ADag, &s);
            prop_assert!((&one - &s).max_norm() < 1e-12 * scale * 12.0);
            let one = commutator(Ladder::B, Ladder::BDag, &s);
            prop_assert!((&one - &s).max_norm() < 1e-12 * scale * 12.0);
            for (x, y) in [(Ladder::A, Ladder::B), (Ladder::A, Ladder::BDag), (Ladder::ADag, Ladder::B), (Ladder::ADag, Ladder::BDag)] {
                prop_assert!(commutator(x, y, &s).max_norm() < 1e-12 * scale * 12.0);
            }
        }

        #[test]
        fn ladder_moves_quantum_numbers(n in 0u32..30, np in 0u32..30, omega in 0.1f64..10.0) {
            let cfg = InfiniteConfig::new(1.0, 1.0, omega).unwrap();
            let label = FockLabel::new(n, np);
            let (e, m) = fock_energy_and_angular_momentum(&cfg, label);
            // H = H0 + ωL with H0 = ω(n' + 1/2)
            prop_assert!((omega * (np as f64 + 0.5) + omega * m as f64 - e).abs() < 1e-12 * (1.0 + e.abs()));
            let bd = ladder_apply(Ladder::BDag, &FockState::basis(label));
            let (l2, _) = bd.iter().next().unwrap();
            let (e2, m2) = fock_energy_and_angular_momentum(&cfg, *l2);
            prop_assert_eq!(m2, m - 1);
            prop_assert_eq!(e2, e);
            let ad = ladder_apply(Ladder::ADag, &FockState::basis(label));
            let (l3, _) = ad.iter().next().unwrap();
            prop_assert_eq!(l3.n, n + 1);
            prop_assert_eq!(l3.angular_momentum(), m + 1);
        }
    }
}
