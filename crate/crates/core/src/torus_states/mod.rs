//! Torus eigenstates and coherent states built as truncated lattice sums,
//! their sampled representation, grid-level magnetic translations, and the
//! overlap / projector / density machinery.

mod coherent;
mod density;
mod eigen;
mod projector;
mod sampled;

pub use coherent::{
    b_lattice_sum, center_candidates, recover_center, torus_coherent, torus_coherent_analytic,
    TorusCoherent,
};
pub use coherent::{translation_expectation, Direction};
pub use density::{density_map, DensityMap};
pub use eigen::{level_basis, torus_eigenstate, torus_eigenstate_analytic, TorusEigenstate};
pub use projector::{gram_matrix, projector_distance};
pub use sampled::SampledState;

use serde::{Deserialize, Serialize};

/// Which translation the degeneracy index diagonalizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DegeneracyBasis {
    /// eigenstates of `Ty`, eigenvalue `exp(2πi l/nΦ)`
    Ly,
    /// eigenstates of `Tx`, eigenvalue `exp(2πi l/nΦ)`
    Lx,
}

/// `|n l_y>` or `|n l_x>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusLabel {
    pub n: usize,
    /// Degeneracy index; any integer is accepted; the state depends on it
    /// modulo `nΦ` up to a constant phase.
    pub l: i64,
    pub basis: DegeneracyBasis,
}

impl TorusLabel {
    pub fn ly(n: usize, l: i64) -> Self {
        Self {
            n,
            l,
            basis: DegeneracyBasis::Ly,
        }
    }
    pub fn lx(n: usize, l: i64) -> Self {
        Self {
            n,
            l,
            basis: DegeneracyBasis::Lx,
        }
    }
}

/// Truncation of the lattice sums.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSumPolicy {
    /// Fixed `max |n_x|` (resp. `|n_y|`). `None` sums every term whose
    /// envelope exceeds `tolerance` at the evaluation point.
    pub cutoff: Option<u32>,
    /// Tail bound relative to the peak amplitude of a single term.
    pub tolerance: f64,
}

impl Default for LatticeSumPolicy {
    fn default() -> Self {
        Self {
            cutoff: None,
            tolerance: 1e-16,
        }
    }
}

impl LatticeSumPolicy {
    pub fn fixed(cutoff: u32, tolerance: f64) -> Self {
        Self {
            cutoff: Some(cutoff),
            tolerance,
        }
    }
}
