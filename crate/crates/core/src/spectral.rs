//! Finite-difference magnetic Hamiltonian on the twisted torus and its low
//! spectrum.
//!
//! Site `(i, j)` sits at `(i hx, j hy)`. Kinetic hopping uses Peierls
//! phases for the Landau gauge `A = (0, Bx)`: a y-link at `x_i` carries
//! `exp(i eB x_i hy)`. The wraparound links implement the twisted boundary
//! conditions, `exp(iθx - 2πi nΦ y_j/Ly)` across `x = Lx` and `exp(iθy)`
//! across `y = Ly`. The magnetic translations by `Lx/nΦ` and `Ly/nΦ` are
//! exact symmetries of this lattice operator whenever the grid sizes are
//! multiples of `nΦ`, so the Landau-level degeneracy survives
//! discretization exactly; only the level energies carry an `O(h²)` error.

use serde::{Deserialize, Serialize};

use crate::config::{MagneticSystem, TorusConfig};
use crate::error::{Error, Result};
use crate::linalg::{lowest_eigenpairs, Eigenpairs, SolverOptions, SparseHermitian};
use crate::torus_gauge::TorusGeometry;
use crate::torus_states::SampledState;
use crate::{C64, TAU};

#[derive(Clone, Debug)]
pub struct DiscreteHamiltonian {
    geom: TorusGeometry,
    nx: usize,
    ny: usize,
    matrix: SparseHermitian,
}

impl DiscreteHamiltonian {
    fn assemble(geom: TorusGeometry, nx: usize, ny: usize) -> Result<Self> {
        let (hx, hy) = (geom.lx / nx as f64, geom.ly / ny as f64);
        let (tx, ty) = (
            1.0 / (2.0 * geom.mass * hx * hx),
            1.0 / (2.0 * geom.mass * hy * hy),
        );
        let eb = geom.charge * geom.field();
        let site = |i: usize, j: usize| j * nx + i;
        let mut entries = Vec::with_capacity(3 * nx * ny);
        // (a, b, v) means H[a, b] = v; stored in upper orientation
        let mut link = |a: usize, b: usize, v: C64| {
            if a <= b {
                entries.push((a, b, v));
            } else {
                entries.push((b, a, v.conj()));
            }
        };
        for j in 0..ny {
            let y = j as f64 * hy;
            for i in 0..nx {
                let x = i as f64 * hx;
                let s = site(i, j);
                link(s, s, C64::new(2.0 * tx + 2.0 * ty, 0.0));
                let right = if i + 1 < nx {
                    C64::new(-tx, 0.0)
                } else {
                    -tx * C64::from_polar(1.0, geom.theta_x - TAU * geom.flux * y / geom.ly)
                };
                link(s, site((i + 1) % nx, j), right);
                let mut up = -ty * C64::from_polar(1.0, eb * x * hy);
                if j + 1 == ny {
                    up *= C64::from_polar(1.0, geom.theta_y);
                }
                link(s, site(i, (j + 1) % ny), up);
            }
        }
        let matrix = SparseHermitian::from_upper(nx * ny, entries)?;
        Ok(Self {
            geom,
            nx,
            ny,
            matrix,
        })
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geom
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn dimension(&self) -> usize {
        self.nx * self.ny
    }

    pub fn matrix(&self) -> &SparseHermitian {
        &self.matrix
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.hermiticity_defect()
    }

    /// Rows ordered `0, Ny-1, 1, Ny-2, ...` so that both y-neighbours,
    /// including the wraparound one, stay within two rows. Half bandwidth
    /// is at most `2 Nx`.
    pub fn band_permutation(&self) -> Vec<usize> {
        let (nx, ny) = (self.nx, self.ny);
        let mut row_pos = vec![0; ny];
        for j in 0..ny.div_ceil(2) {
            row_pos[j] = 2 * j;
            if ny - 1 - j != j {
                row_pos[ny - 1 - j] = 2 * j + 1;
            }
        }
        (0..nx * ny)
            .map(|s| row_pos[s / nx] * nx + s % nx)
            .collect()
    }

    /// Natural scale of the low spectrum: `ω/2`, or the first free-particle
    /// level when the field is off.
    fn energy_scale(&self) -> f64 {
        let free = TAU * TAU / (2.0 * self.geom.mass * self.geom.lx.max(self.geom.ly).powi(2));
        (0.5 * self.geom.omega()).max(free)
    }

    /// `k` lowest eigenpairs.
    pub fn eigenpairs(&self, k: usize) -> Result<Eigenpairs> {
        if 4 * k > self.dimension() {
            return Err(Error::InvalidParameter(format!(
                "{k} eigenvalues of a {}-dimensional lattice",
                self.dimension()
            )));
        }
        let scale = self.energy_scale();
        let perm = self.band_permutation();
        let opts = SolverOptions {
            shift: -0.1 * scale,
            tolerance: 1e-10,
            scale,
            max_iterations: 400,
            seed: SOLVER_SEED,
        };
        lowest_eigenpairs(&self.matrix, k, Some(&perm), opts)
    }

    /// Eigenvector as a unit-normalized state on the periodic nodes.
    pub fn to_state(&self, vector: &[C64]) -> Result<SampledState> {
        let mut s = SampledState::from_periodic(&self.geom, self.nx, self.ny, vector.to_vec())?;
        s.normalize();
        Ok(s)
    }
}

/// Seed of the random start block used by [`DiscreteHamiltonian::eigenpairs`].
pub const SOLVER_SEED: u64 = 0x5eed;

fn check_grid(nphi: u32, nx: usize, ny: usize) -> Result<()> {
    let min = 8 * nphi.max(1) as usize;
    if nx < min || ny < min {
        return Err(Error::GridTooCoarse(format!(
            "{nx}x{ny} lattice, need at least {min} sites per direction"
        )));
    }
    if !nx.is_multiple_of(nphi as usize) || !ny.is_multiple_of(nphi as usize) {
        return Err(Error::Incommensurate { nx, ny, nphi });
    }
    Ok(())
}

/// Lattice Hamiltonian of the configured torus.
pub fn build_hamiltonian(cfg: &TorusConfig, nx: usize, ny: usize) -> Result<DiscreteHamiltonian> {
    check_grid(cfg.nphi(), nx, ny)?;
    DiscreteHamiltonian::assemble(cfg.into(), nx, ny)
}

/// Same lattice and twists with the magnetic field switched off.
pub fn build_free_hamiltonian(
    cfg: &TorusConfig,
    nx: usize,
    ny: usize,
) -> Result<DiscreteHamiltonian> {
    check_grid(1, nx, ny)?;
    let geom = TorusGeometry::from(cfg).with_flux(0.0);
    DiscreteHamiltonian::assemble(geom, nx, ny)
}

/// Exact spectrum of the field-free lattice operator:
/// `2tx(1 - cos((θx + 2πp)/Nx)) + 2ty(1 - cos((θy + 2πq)/Ny))`, ascending.
pub fn free_lattice_levels(cfg: &TorusConfig, nx: usize, ny: usize, count: usize) -> Vec<f64> {
    let (hx, hy) = (cfg.lx() / nx as f64, cfg.ly() / ny as f64);
    let (tx, ty) = (
        1.0 / (2.0 * cfg.mass() * hx * hx),
        1.0 / (2.0 * cfg.mass() * hy * hy),
    );
    let band = |t: f64, theta: f64, n: usize| -> Vec<f64> {
        (0..n)
            .map(|p| 2.0 * t * (1.0 - ((theta + TAU * p as f64) / n as f64).cos()))
            .collect()
    };
    let (bx, by) = (band(tx, cfg.theta_x(), nx), band(ty, cfg.theta_y(), ny));
    let mut all: Vec<f64> = bx
        .iter()
        .flat_map(|a| by.iter().map(move |b| a + b))
        .collect();
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    all
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// index of the first eigenvalue in the cluster
    pub first: usize,
    pub multiplicity: usize,
    pub mean: f64,
    /// `max - min`
    pub spread: f64,
    /// `spread / |mean|`
    pub relative_spread: f64,
}

/// Group sorted eigenvalues into clusters.
///
/// Merging the `m` smallest consecutive gaps gives a partition; it is
/// accepted when every remaining gap exceeds ten times the largest cluster
/// spread. The accepted partition with the largest `m` wins. When
/// every gap is merged there is no gap to compare with, and the single
/// cluster is accepted only if its relative spread is below `1e-6`.
pub fn cluster_eigenvalues(values: &[f64]) -> Vec<Cluster> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let gaps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let mut order: Vec<usize> = (0..gaps.len()).collect();
    order.sort_by(|&a, &b| gaps[a].total_cmp(&gaps[b]));
    let all: Vec<usize> = (0..gaps.len()).collect();
    let mut best = split(values, &all);
    for m in 1..=gaps.len() {
        let merged = &order[..m];
        let cuts: Vec<usize> = (0..gaps.len()).filter(|g| !merged.contains(g)).collect();
        let clusters = split(values, &cuts);
        let spread = clusters.iter().map(|c| c.spread).fold(0.0, f64::max);
        let ok = match cuts.iter().map(|&g| gaps[g]).reduce(f64::min) {
            Some(min_gap) => min_gap > 10.0 * spread,
            None => clusters[0].relative_spread < 1e-6,
        };
        if ok {
            best = clusters;
        }
    }
    best
}

/// Clusters separated at the listed gap indices (gap `g` lies between
/// eigenvalues `g` and `g+1`).
fn split(values: &[f64], cuts: &[usize]) -> Vec<Cluster> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut bounds: Vec<usize> = cuts.iter().map(|g| g + 1).collect();
    bounds.sort_unstable();
    bounds.push(values.len());
    for end in bounds {
        let part = &values[start..end];
        let mean = part.iter().sum::<f64>() / part.len() as f64;
        let spread = part[part.len() - 1] - part[0];
        out.push(Cluster {
            first: start,
            multiplicity: part.len(),
            mean,
            spread,
            relative_spread: if mean != 0.0 {
                spread / mean.abs()
            } else {
                spread
            },
        });
        start = end;
    }
    out
}

/// Low spectrum with clustering and comparison against `ω(n + 1/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub nx: usize,
    pub ny: usize,
    pub nphi: f64,
    pub omega: f64,
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// `ω(n + 1/2)` for cluster `n`
    pub reference: Vec<f64>,
    /// `(mean - reference) / reference` per cluster
    pub deviations: Vec<f64>,
    pub solver_iterations: usize,
    pub max_residual: f64,
}

pub fn low_spectrum(h: &DiscreteHamiltonian, k: usize) -> Result<SpectrumReport> {
    let pairs = h.eigenpairs(k)?;
    Ok(report(h, &pairs))
}

fn report(h: &DiscreteHamiltonian, pairs: &Eigenpairs) -> SpectrumReport {
    let omega = h.geom.omega();
    let clusters = cluster_eigenvalues(&pairs.values);
    let reference: Vec<f64> = (0..clusters.len())
        .map(|n| omega * (n as f64 + 0.5))
        .collect();
    let deviations = clusters
        .iter()
        .zip(&reference)
        .map(|(c, r)| if *r != 0.0 { (c.mean - r) / r } else { c.mean })
        .collect();
    SpectrumReport {
        nx: h.nx,
        ny: h.ny,
        nphi: h.geom.flux,
        omega,
        eigenvalues: pairs.values.clone(),
        clusters,
        reference,
        deviations,
        solver_iterations: pairs.iterations,
        max_residual: pairs.max_residual,
    }
}

/// Spectrum report together with the eigenvectors as sampled states.
pub fn low_spectrum_with_states(
    h: &DiscreteHamiltonian,
    k: usize,
) -> Result<(SpectrumReport, Vec<SampledState>)> {
    let pairs = h.eigenpairs(k)?;
    let states = pairs
        .vectors
        .iter()
        .map(|v| h.to_state(v))
        .collect::<Result<Vec<_>>>()?;
    Ok((report(h, &pairs), states))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assembly_is_hermitian_and_banded() {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.5, 2, 0.3, 2.0).unwrap();
        let h = build_hamiltonian(&cfg, 16, 24).unwrap();
        assert_eq!(h.hermiticity_defect(), 0.0);
        assert!(h.matrix().bandwidth(&h.band_permutation()) <= 2 * 16);
        let mut seen = h.band_permutation();
        seen.sort_unstable();
        assert_eq!(seen, (0..16 * 24).collect::<Vec<_>>());
    }

    #[test]
    fn preconditions() {
        let cfg = TorusConfig::unit_square(3).unwrap();
        assert!(matches!(
            build_hamiltonian(&cfg, 16, 24),
            Err(Error::GridTooCoarse(_))
        ));
        assert!(matches!(
            build_hamiltonian(&cfg, 25, 24),
            Err(Error::Incommensurate { .. })
        ));
        assert!(build_hamiltonian(&cfg, 24, 24).is_ok());
    }

    #[test]
    fn free_lattice_matches_closed_form() {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 1, 0.3, 0.2).unwrap();
        let h = build_free_hamiltonian(&cfg, 24, 24).unwrap();
        let got = h.eigenpairs(4).unwrap();
        let want = free_lattice_levels(&cfg, 24, 24, 4);
        for (g, w) in got.values.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9 * w.abs().max(1.0), "{g} vs {w}");
        }
        let continuum = 0.3f64.powi(2) / 2.0 + 0.2f64.powi(2) / 2.0;
        assert!((got.values[0] - continuum).abs() < 1e-3 * continuum);
    }

    #[test]
    fn small_lattice_is_exactly_degenerate() {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 2, 1.0, 2.5).unwrap();
        let h = build_hamiltonian(&cfg, 32, 32).unwrap();
        let r = low_spectrum(&h, 6).unwrap();
        let mult: Vec<usize> = r.clusters.iter().map(|c| c.multiplicity).collect();
        assert_eq!(mult, vec![2, 2, 2]);
        assert!(r.clusters.iter().all(|c| c.relative_spread < 1e-9));
        assert!(r.deviations.iter().all(|d| d.abs() < 0.2));
    }

    #[test]
    fn clustering_rule() {
        let c = cluster_eigenvalues(&[1.0, 1.0 + 1e-12, 3.0, 3.0 + 2e-12, 5.0]);
        assert_eq!(
            c.iter().map(|c| c.multiplicity).collect::<Vec<_>>(),
            vec![2, 2, 1]
        );
        let c = cluster_eigenvalues(&[1.0, 2.0, 3.1]);
        assert_eq!(c.len(), 3);
        let c = cluster_eigenvalues(&[2.0, 2.0 + 1e-12, 2.0 + 3e-12]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].multiplicity, 3);
    }
}
