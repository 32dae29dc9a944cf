use nalgebra::DMatrix;

use super::SampledState;
use crate::error::{Error, Result};
use crate::C64;

/// Largest allowed `|<a_i|a_j> - δ_ij|` for sets handed to
/// [`projector_distance`].
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-6;

/// `G_ij = <s_i|s_j>`.
pub fn gram_matrix(states: &[SampledState]) -> Result<DMatrix<C64>> {
    let n = states.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = states[i].inner(&states[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

fn orthonormality_defect(states: &[SampledState]) -> Result<f64> {
    let g = gram_matrix(states)?;
    let id = DMatrix::<C64>::identity(states.len(), states.len());
    Ok((g - id).iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Largest singular value of `(1 - P_A) B` for orthonormal `B`.
fn residual_norm(a: &[SampledState], b: &[SampledState]) -> Result<f64> {
    let mut residuals = Vec::with_capacity(b.len());
    for bj in b {
        let mut r = bj.closed();
        for ai in a {
            let c = ai.inner(bj)?;
            r = r.add_scaled(-c, ai)?;
        }
        residuals.push(r);
    }
    let g = gram_matrix(&residuals)?;
    let top = g
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(0.0, f64::max);
    Ok(top.max(0.0).sqrt())
}

/// Operator norm of `P_A - P_B` for the projectors onto the spans of two
/// orthonormal sets, computed as
/// `max(‖(1 - P_A) P_B‖, ‖(1 - P_B) P_A‖)`. Working with residual vectors
/// instead of `1 - σ²` keeps the result accurate for nearly equal spans.
pub fn projector_distance(a: &[SampledState], b: &[SampledState]) -> Result<f64> {
    for set in [a, b] {
        let d = orthonormality_defect(set)?;
        if d > ORTHONORMALITY_TOLERANCE {
            return Err(Error::NotOrthonormal(d));
        }
    }
    if a.is_empty() && b.is_empty() {
        return Ok(0.0);
    }
    Ok(residual_norm(a, b)?.max(residual_norm(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::TorusConfig;
    use crate::torus_states::{level_basis, DegeneracyBasis};

    fn basis(n: usize, which: DegeneracyBasis) -> Vec<SampledState> {
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 1.0, 2, 0.3, 1.1).unwrap();
        level_basis(&cfg, n, which, Default::default(), 48, 48).unwrap()
    }

    #[test]
    fn identical_and_orthogonal_sets() {
        let a = basis(0, DegeneracyBasis::Ly);
        assert!(projector_distance(&a, &a).unwrap() < 1e-12);
        let b = basis(1, DegeneracyBasis::Ly);
        assert!((projector_distance(&a, &b).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let a = basis(0, DegeneracyBasis::Ly);
        let doubled = vec![a[0].scaled(C64::new(2.0, 0.0))];
        assert!(matches!(
            projector_distance(&doubled, &a),
            Err(Error::NotOrthonormal(_))
        ));
    }

    #[test]
    fn partial_overlap() {
        // span{e0} vs span{(e0 + e1)/√2}: distance sin(π/4)
        let a = basis(0, DegeneracyBasis::Ly);
        let mix = a[0]
            .add_scaled(C64::new(1.0, 0.0), &a[1])
            .unwrap()
            .scaled(C64::new(0.5f64.sqrt(), 0.0));
        let d = projector_distance(&a[..1], &[mix]).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-10);
    }
}
