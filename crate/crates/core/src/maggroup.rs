//! The discrete magnetic translation group and its clock-and-shift
//! representation.
//!
//! Elements are `g(nx, ny, m) = exp(2πi m/nΦ) Ty^ny Tx^nx` with all labels in
//! `Z(nΦ)`. The product is
//! `g(nx,ny,m) g(nx',ny',m') = g(nx+nx', ny+ny', m+m' - nx ny')`.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{C64, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    nx: u32,
    ny: u32,
    m: u32,
    nphi: u32,
}

fn reduce(v: i64, n: u32) -> u32 {
    v.rem_euclid(n as i64) as u32
}

impl GroupElement {
    /// Build `g(nx, ny, m)` with labels reduced into `[0, nphi)`.
    ///
    /// # Panics
    /// If `nphi == 0`.
    pub fn new(nx: i64, ny: i64, m: i64, nphi: u32) -> Self {
        assert!(nphi > 0, "modulus must be positive");
        Self {
            nx: reduce(nx, nphi),
            ny: reduce(ny, nphi),
            m: reduce(m, nphi),
            nphi,
        }
    }

    pub fn identity(nphi: u32) -> Self {
        Self::new(0, 0, 0, nphi)
    }

    pub fn tx(nphi: u32) -> Self {
        Self::new(1, 0, 0, nphi)
    }

    pub fn ty(nphi: u32) -> Self {
        Self::new(0, 1, 0, nphi)
    }

    pub fn nx(&self) -> u32 {
        self.nx
    }
    pub fn ny(&self) -> u32 {
        self.ny
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn nphi(&self) -> u32 {
        self.nphi
    }

    pub fn is_identity(&self) -> bool {
        self.nx == 0 && self.ny == 0 && self.m == 0
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.nphi != other.nphi {
            return Err(Error::ModulusMismatch(self.nphi, other.nphi));
        }
        let (a, b) = (self, other);
        Ok(Self::new(
            a.nx as i64 + b.nx as i64,
            a.ny as i64 + b.ny as i64,
            a.m as i64 + b.m as i64 - a.nx as i64 * b.ny as i64,
            a.nphi,
        ))
    }

    /// `g(-nx, -ny, -m - nx ny)`.
    pub fn inverse(&self) -> Self {
        let (nx, ny, m) = (self.nx as i64, self.ny as i64, self.m as i64);
        Self::new(-nx, -ny, -m - nx * ny, self.nphi)
    }

    /// Conjugacy class from the closed form
    /// `{g(nx, ny, m + nx ny' - nx' ny) : nx', ny'}`.
    pub fn conjugacy_class(&self) -> BTreeSet<Self> {
        let n = self.nphi as i64;
        let (nx, ny, m) = (self.nx as i64, self.ny as i64, self.m as i64);
        let mut out = BTreeSet::new();
        for px in 0..n {
            for py in 0..n {
                out.insert(Self::new(nx, ny, m + nx * py - px * ny, self.nphi));
            }
        }
        out
    }

    /// Conjugacy class by conjugating with every group element.
    pub fn conjugacy_class_brute(&self) -> BTreeSet<Self> {
        elements(self.nphi)
            .map(|h| {
                h.multiply(self)
                    .and_then(|hg| hg.multiply(&h.inverse()))
                    .expect("same modulus")
            })
            .collect()
    }

    fn index(&self) -> usize {
        let n = self.nphi as usize;
        (self.nx as usize * n + self.ny as usize) * n + self.m as usize
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "g({},{},{})", self.nx, self.ny, self.m)
    }
}

/// All `nΦ³` elements in lexicographic `(nx, ny, m)` order.
pub fn elements(nphi: u32) -> impl Iterator<Item = GroupElement> {
    let n = nphi as i64;
    (0..n).flat_map(move |nx| {
        (0..n).flat_map(move |ny| (0..n).map(move |m| GroupElement::new(nx, ny, m, nphi)))
    })
}

pub fn order(nphi: u32) -> usize {
    (nphi as usize).pow(3)
}

/// Centre from the closed form: `{g(0,0,m)}`.
pub fn center(nphi: u32) -> BTreeSet<GroupElement> {
    (0..nphi as i64)
        .map(|m| GroupElement::new(0, 0, m, nphi))
        .collect()
}

/// Centre by testing commutation against every element.
pub fn center_brute(nphi: u32) -> BTreeSet<GroupElement> {
    let all: Vec<_> = elements(nphi).collect();
    all.iter()
        .filter(|z| {
            all.iter()
                .all(|g| z.multiply(g).unwrap() == g.multiply(z).unwrap())
        })
        .copied()
        .collect()
}

/// Full multiplication table as element indices (row = left factor).
pub fn multiplication_table(nphi: u32) -> Vec<Vec<usize>> {
    let all: Vec<_> = elements(nphi).collect();
    all.iter()
        .map(|a| all.iter().map(|b| a.multiply(b).unwrap().index()).collect())
        .collect()
}

/// Partition of the group into conjugacy classes, ordered by smallest member.
pub fn conjugacy_classes(nphi: u32) -> Vec<BTreeSet<GroupElement>> {
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    for g in elements(nphi) {
        if seen.contains(&g) {
            continue;
        }
        let class = g.conjugacy_class();
        seen.extend(class.iter().copied());
        classes.push(class);
    }
    classes
}

/// Coset-enumeration check that `G / Z(nΦ)` is `Z(nΦ) x Z(nΦ)`.
///
/// Returns the quotient multiplication table over coset labels `(nx, ny)`
/// when every coset has `nΦ` elements, the coset product is well defined,
/// and it agrees with componentwise addition mod `nΦ`.
pub fn quotient_by_center(nphi: u32) -> Option<Vec<Vec<(u32, u32)>>> {
    let z = center(nphi);
    let coset = |g: &GroupElement| -> BTreeSet<GroupElement> {
        z.iter().map(|c| g.multiply(c).unwrap()).collect()
    };
    let mut cosets: Vec<BTreeSet<GroupElement>> = Vec::new();
    for g in elements(nphi) {
        if !cosets.iter().any(|c| c.contains(&g)) {
            cosets.push(coset(&g));
        }
    }
    if cosets.len() != (nphi * nphi) as usize || cosets.iter().any(|c| c.len() != nphi as usize) {
        return None;
    }
    let label = |c: &BTreeSet<GroupElement>| -> Option<(u32, u32)> {
        let first = c.iter().next()?;
        c.iter()
            .all(|g| g.nx == first.nx && g.ny == first.ny)
            .then_some((first.nx, first.ny))
    };
    let labels: Option<Vec<_>> = cosets.iter().map(label).collect();
    let labels = labels?;
    let mut table = vec![vec![(0, 0); cosets.len()]; cosets.len()];
    for (i, ci) in cosets.iter().enumerate() {
        for (j, cj) in cosets.iter().enumerate() {
            let products: BTreeSet<(u32, u32)> = ci
                .iter()
                .flat_map(|a| cj.iter().map(move |b| a.multiply(b).unwrap()))
                .map(|p| (p.nx, p.ny))
                .collect();
            if products.len() != 1 {
                return None;
            }
            let p = *products.iter().next().unwrap();
            let expect = (
                (labels[i].0 + labels[j].0) % nphi,
                (labels[i].1 + labels[j].1) % nphi,
            );
            if p != expect {
                return None;
            }
            table[i][j] = p;
        }
    }
    Some(table)
}

/// Whether the coset representatives `{g(nx, ny, 0)}` close under the
/// product. They do only for `nΦ = 1`, so `G` is not a semi-direct product
/// of the quotient with the centre.
pub fn representatives_form_subgroup(nphi: u32) -> bool {
    let n = nphi as i64;
    let reps: Vec<_> = (0..n)
        .flat_map(|x| (0..n).map(move |y| GroupElement::new(x, y, 0, nphi)))
        .collect();
    reps.iter()
        .all(|a| reps.iter().all(|b| a.multiply(b).unwrap().m == 0))
}

/// `nΦ`-dimensional clock-and-shift representation: `Tx` is the cyclic
/// shift `e_l -> e_{l+1}`, `Ty = diag(exp(2πi l/nΦ))`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryRep {
    pub nphi: u32,
    pub tx: DMatrix<C64>,
    pub ty: DMatrix<C64>,
}

impl UnitaryRep {
    pub fn new(nphi: u32) -> Result<Self> {
        if nphi == 0 {
            return Err(Error::InvalidParameter("nphi must be >= 1".into()));
        }
        let n = nphi as usize;
        let tx = DMatrix::from_fn(n, n, |r, c| {
            if r == (c + 1) % n {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let ty = DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                root_of_unity(r as i64, nphi)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Ok(Self { nphi, tx, ty })
    }

    /// `exp(2πi m/nΦ) Ty^ny Tx^nx`.
    pub fn represent(&self, g: &GroupElement) -> Result<DMatrix<C64>> {
        if g.nphi != self.nphi {
            return Err(Error::ModulusMismatch(self.nphi, g.nphi));
        }
        let ty = self.ty.pow(g.ny);
        let tx = self.tx.pow(g.nx);
        Ok((ty * tx) * root_of_unity(g.m as i64, self.nphi))
    }

    /// `max |Ty Tx - exp(2πi/nΦ) Tx Ty|`.
    pub fn weyl_deviation(&self) -> f64 {
        let lhs = &self.ty * &self.tx;
        let rhs = (&self.tx * &self.ty) * root_of_unity(1, self.nphi);
        max_abs(&(lhs - rhs))
    }

    /// `max(|Tx^n - 1|, |Ty^n - 1|, |Tx†Tx - 1|, |Ty†Ty - 1|)`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.nphi as usize;
        let id = DMatrix::<C64>::identity(n, n);
        [
            max_abs(&(self.tx.pow(self.nphi) - &id)),
            max_abs(&(self.ty.pow(self.nphi) - &id)),
            max_abs(&(self.tx.adjoint() * &self.tx - &id)),
            max_abs(&(self.ty.adjoint() * &self.ty - &id)),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Dimension of the space of matrices commuting with both generators
    /// (1 for an irreducible representation).
    pub fn commutant_dimension(&self) -> usize {
        let n = self.nphi as usize;
        let n2 = n * n;
        // column-major vec(X); rows: vec(X Tx - Tx X), then vec(X Ty - Ty X)
        let mut sys = DMatrix::<C64>::zeros(2 * n2, n2);
        for (block, t) in [&self.tx, &self.ty].into_iter().enumerate() {
            for col in 0..n2 {
                let mut x = DMatrix::<C64>::zeros(n, n);
                x[(col % n, col / n)] = C64::new(1.0, 0.0);
                let d = &x * t - t * &x;
                for (k, v) in d.iter().enumerate() {
                    sys[(block * n2 + k, col)] = *v;
                }
            }
        }
        let sv = sys.singular_values();
        let tol = 1e-10 * sv.max().max(1.0);
        n2 - sv.iter().filter(|s| **s > tol).count()
    }
}

/// `exp(2πi k/n)`.
pub fn root_of_unity(k: i64, n: u32) -> C64 {
    let r = k.rem_euclid(n as i64);
    // exact values on the axes avoid 1e-16 noise in the printed tables
    if (4 * r) % n as i64 == 0 {
        return match 4 * r / n as i64 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, TAU * r as f64 / n as f64)
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut impl Rng, n: u32) -> GroupElement {
        GroupElement::new(
            rng.gen_range(0..n) as i64,
            rng.gen_range(0..n) as i64,
            rng.gen_range(0..n) as i64,
            n,
        )
    }

    #[test]
    fn product_of_generators() {
        let g = GroupElement::tx(4).multiply(&GroupElement::ty(4)).unwrap();
        assert_eq!(g, GroupElement::new(1, 1, 3, 4));
        assert!(GroupElement::tx(4).multiply(&GroupElement::tx(3)).is_err());
    }

    #[test]
    fn identity_and_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..9);
            let g = random(&mut rng, n);
            assert_eq!(GroupElement::identity(n).multiply(&g).unwrap(), g);
            assert_eq!(g.multiply(&GroupElement::identity(n)).unwrap(), g);
        }
        for _ in 0..1000 {
            let n = rng.gen_range(1..9);
            let (a, b, c) = (
                random(&mut rng, n),
                random(&mut rng, n),
                random(&mut rng, n),
            );
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(
            GroupElement::new(1, 1, 0, 4).inverse(),
            GroupElement::new(3, 3, 3, 4)
        );
        assert_eq!(
            GroupElement::identity(5).inverse(),
            GroupElement::identity(5)
        );
        for n in 1..=5 {
            for g in elements(n) {
                assert_eq!(g.inverse().inverse(), g);
                assert!(g.multiply(&g.inverse()).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn classes_and_center() {
        for m in 0..4 {
            assert_eq!(GroupElement::new(0, 0, m, 4).conjugacy_class().len(), 1);
        }
        let class = GroupElement::tx(4).conjugacy_class();
        let expect: BTreeSet<_> = (0..4).map(|m| GroupElement::new(1, 0, m, 4)).collect();
        assert_eq!(class, expect);
        assert_eq!(GroupElement::tx(4).conjugacy_class_brute(), expect);
        assert_eq!(center(1).len(), 1);
        assert_eq!(center(1).len(), order(1));
        assert_eq!(center(4).len(), 4);
        for n in 1..=6 {
            assert_eq!(center(n), center_brute(n));
            let total: usize = conjugacy_classes(n).iter().map(|c| c.len()).sum();
            assert_eq!(total, order(n));
        }
    }

    #[test]
    fn generator_matrices_for_four_flux_quanta() {
        let rep = UnitaryRep::new(4).unwrap();
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        #[rustfmt::skip]
        let tx = DMatrix::from_row_slice(4, 4, &[
            o, o, o, l,
            l, o, o, o,
            o, l, o, o,
            o, o, l, o,
        ]);
        let ty = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![l, i, -l, -i]));
        assert_eq!(rep.tx, tx);
        assert_eq!(rep.ty, ty);
        assert!(rep.weyl_deviation() < 1e-14);
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2u32, 3, 4, 7] {
            let rep = UnitaryRep::new(n).unwrap();
            let mut worst: f64 = 0.0;
            for _ in 0..500 {
                let (a, b) = (random(&mut rng, n), random(&mut rng, n));
                let lhs = rep.represent(&a.multiply(&b).unwrap()).unwrap();
                let rhs = rep.represent(&a).unwrap() * rep.represent(&b).unwrap();
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
            assert!(worst < 1e-12, "n={n} worst={worst}");
        }
        assert!(UnitaryRep::new(3)
            .unwrap()
            .represent(&GroupElement::tx(4))
            .is_err());
    }

    #[test]
    fn quotient_and_irreducibility() {
        for n in 1..=6 {
            assert!(quotient_by_center(n).is_some());
            assert_eq!(representatives_form_subgroup(n), n == 1);
            let rep = UnitaryRep::new(n).unwrap();
            assert!(rep.unitarity_deviation() < 1e-14);
            assert_eq!(rep.commutant_dimension(), 1);
        }
    }
}
