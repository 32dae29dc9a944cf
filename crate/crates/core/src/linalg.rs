//! Sparse Hermitian matrices and a lowest-eigenpair solver.
//!
//! Small problems go through a dense Hermitian eigendecomposition. Larger
//! ones use shift-invert subspace iteration: the shifted matrix is
//! factored once with a banded Cholesky (after an optional bandwidth
//! reducing permutation), and each sweep is followed by a Rayleigh-Ritz
//! projection.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::C64;

/// Dimension up to which [`lowest_eigenpairs`] uses the dense solver.
pub const DENSE_LIMIT: usize = 576;

/// Hermitian matrix stored by rows, both triangles present.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitian {
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseHermitian {
    /// Assemble from upper-or-diagonal entries `(i, j, v)` with `i <= j`;
    /// each off-diagonal entry is mirrored as its conjugate. Repeated
    /// positions add up.
    pub fn from_upper(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, C64)>,
    ) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n];
        for (i, j, v) in entries {
            if i >= n || j >= n || i > j {
                return Err(Error::InvalidParameter(format!(
                    "entry ({i},{j}) outside the upper triangle of {n}"
                )));
            }
            if i == j {
                rows[i].push((i, C64::new(v.re, 0.0)));
            } else {
                rows[i].push((j, v));
                rows[j].push((i, v.conj()));
            }
        }
        for r in &mut rows {
            r.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(r.len());
            for &(c, v) in r.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            *r = merged;
        }
        Ok(Self { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rows[i]
            .iter()
            .find(|e| e.0 == j)
            .map_or(C64::new(0.0, 0.0), |e| e.1)
    }

    pub fn row(&self, i: usize) -> &[(usize, C64)] {
        &self.rows[i]
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        for (yi, row) in y.iter_mut().zip(&self.rows) {
            *yi = row.iter().map(|&(c, v)| v * x[c]).sum();
        }
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                worst = worst.max((v - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `max_i Σ_j |A_ij|`, an upper bound on the spectral radius.
    pub fn gershgorin_bound(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.1.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Half bandwidth after renumbering old index `k` to `perm[k]`.
    pub fn bandwidth(&self, perm: &[usize]) -> usize {
        let mut b = 0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, _) in row {
                b = b.max(perm[i].abs_diff(perm[j]));
            }
        }
        b
    }
}

/// Lower-triangular banded Cholesky factor `L` with `A = L L†`.
#[derive(Clone, Debug)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    /// row `i` holds `L[i, k]` for `k` in `i-bw..=i` at offset `k - i + bw`
    data: Vec<C64>,
}

impl BandedCholesky {
    /// Factor `A - shift` with `A` renumbered through `perm`.
    pub fn factor(a: &SparseHermitian, shift: f64, perm: &[usize]) -> Result<Self> {
        let n = a.dim();
        let bw = a.bandwidth(perm);
        let w = bw + 1;
        let mut data = vec![C64::new(0.0, 0.0); n * w];
        for (old, row) in a.rows.iter().enumerate() {
            let i = perm[old];
            for &(old_j, v) in row {
                let j = perm[old_j];
                if j <= i {
                    data[i * w + j + bw - i] += v;
                }
            }
            data[i * w + bw] -= shift;
        }
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                let lo = lo_i.max(j.saturating_sub(bw));
                let (ri, rj) = (i * w + bw - i, j * w + bw - j);
                let mut s = data[ri + j];
                for k in lo..j {
                    s -= data[ri + k] * data[rj + k].conj();
                }
                if j == i {
                    // also rejects NaN pivots
                    if s.re.is_nan() || s.re <= 0.0 {
                        return Err(Error::NotPositiveDefinite(i));
                    }
                    data[ri + i] = C64::new(s.re.sqrt(), 0.0);
                } else {
                    data[ri + j] = s / data[rj + j].re;
                }
            }
        }
        Ok(Self { n, bw, data })
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Solve `(L L†) z = x` in place (permuted numbering).
    #[allow(clippy::needless_range_loop)]
    pub fn solve_in_place(&self, x: &mut [C64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let r = i * w + bw - i;
            let mut s = x[i];
            for k in lo..i {
                s -= self.data[r + k] * x[k];
            }
            x[i] = s / self.data[r + i].re;
        }
        for i in (0..n).rev() {
            let r = i * w + bw - i;
            let zi = x[i] / self.data[r + i].re;
            x[i] = zi;
            for k in i.saturating_sub(bw)..i {
                x[k] -= self.data[r + k].conj() * zi;
            }
        }
    }
}

/// Lowest eigenpairs, ascending.
#[derive(Clone, Debug)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// unit-norm eigenvectors (Euclidean norm)
    pub vectors: Vec<Vec<C64>>,
    /// subspace sweeps performed; 0 for the dense path
    pub iterations: usize,
    /// `max ‖A v - λ v‖`
    pub max_residual: f64,
}

/// Options for the iterative path.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// shift below the lowest eigenvalue; the shifted matrix must be
    /// positive definite
    pub shift: f64,
    /// relative residual `‖Av - λv‖ / max(|λ|, scale)` demanded of every
    /// returned pair
    pub tolerance: f64,
    /// residual scale floor, typically the lowest nonzero eigenvalue scale
    pub scale: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

/// `k` lowest eigenpairs of `a`. `perm` renumbers the unknowns for the
/// banded factorization (identity if `None`).
pub fn lowest_eigenpairs(
    a: &SparseHermitian,
    k: usize,
    perm: Option<&[usize]>,
    opts: SolverOptions,
) -> Result<Eigenpairs> {
    let n = a.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "{k} eigenpairs of a {n}-dimensional matrix"
        )));
    }
    if n <= DENSE_LIMIT {
        return dense(a, k);
    }
    let identity: Vec<usize>;
    let perm = match perm {
        Some(p) => p,
        None => {
            identity = (0..n).collect();
            &identity
        }
    };
    subspace_iteration(a, k, perm, opts)
}

fn dense(a: &SparseHermitian, k: usize) -> Result<Eigenpairs> {
    let eig = a.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..a.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for &c in order.iter().take(k) {
        values.push(eig.eigenvalues[c]);
        vectors.push(
            eig.eigenvectors
                .column(c)
                .iter()
                .copied()
                .collect::<Vec<_>>(),
        );
    }
    let max_residual = max_residual(a, &values, &vectors);
    Ok(Eigenpairs {
        values,
        vectors,
        iterations: 0,
        max_residual,
    })
}

fn max_residual(a: &SparseHermitian, values: &[f64], vectors: &[Vec<C64>]) -> f64 {
    let mut y = vec![C64::new(0.0, 0.0); a.dim()];
    values
        .iter()
        .zip(vectors)
        .map(|(&l, v)| {
            a.apply(v, &mut y);
            y.iter()
                .zip(v)
                .map(|(yi, vi)| (yi - vi * l).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[allow(clippy::needless_range_loop)]
fn subspace_iteration(
    a: &SparseHermitian,
    k: usize,
    perm: &[usize],
    opts: SolverOptions,
) -> Result<Eigenpairs> {
    let n = a.dim();
    let chol = BandedCholesky::factor(a, opts.shift, perm)?;
    let p = (2 * k).max(k + 8).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut block = DMatrix::<C64>::from_fn(n, p, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let mut buf = vec![C64::new(0.0, 0.0); n];
    let mut values = Vec::new();
    let mut worst = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        // block <- (A - shift)^{-1} block, in the factor's numbering
        for mut col in block.column_iter_mut() {
            for (old, &new) in perm.iter().enumerate() {
                buf[new] = col[old];
            }
            chol.solve_in_place(&mut buf);
            for (old, &new) in perm.iter().enumerate() {
                col[old] = buf[new];
            }
        }
        let q = block.clone().qr().q();
        let mut aq = DMatrix::<C64>::zeros(n, p);
        for c in 0..p {
            let x: Vec<C64> = q.column(c).iter().copied().collect();
            a.apply(&x, &mut buf);
            aq.column_mut(c).copy_from_slice(&buf);
        }
        let mut t = q.adjoint() * &aq;
        // symmetrize away roundoff
        t = (&t + t.adjoint()) * C64::new(0.5, 0.0);
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let v = DMatrix::from_fn(p, p, |r, c| eig.eigenvectors[(r, order[c])]);
        values = order
            .iter()
            .map(|&i| eig.eigenvalues[i])
            .collect::<Vec<f64>>();
        block = &q * &v;
        let av = &aq * &v;
        worst = 0.0;
        for c in 0..k {
            let r = (av.column(c) - block.column(c) * C64::new(values[c], 0.0)).norm();
            worst = worst.max(r / values[c].abs().max(opts.scale));
        }
        if worst < opts.tolerance {
            let vectors = (0..k)
                .map(|c| block.column(c).iter().copied().collect())
                .collect::<Vec<Vec<C64>>>();
            values.truncate(k);
            let max_residual = max_residual(a, &values, &vectors);
            return Ok(Eigenpairs {
                values,
                vectors,
                iterations: it,
                max_residual,
            });
        }
    }
    Err(Error::NoConvergence(format!(
        "{} sweeps, relative residual {worst:.3e} (lowest value {:?})",
        opts.max_iterations,
        values.first()
    )))
}

/// Euclidean norm of a complex vector.
pub fn vector_norm(v: &[C64]) -> f64 {
    DVector::from_column_slice(v).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Periodic 1D Laplacian with a twist, eigenvalues 2 - 2cos((θ + 2πm)/n).
    fn twisted_ring(n: usize, theta: f64) -> SparseHermitian {
        let mut e = Vec::new();
        for i in 0..n {
            e.push((i, i, C64::new(2.0, 0.0)));
            if i + 1 < n {
                e.push((i, i + 1, C64::new(-1.0, 0.0)));
            }
        }
        e.push((0, n - 1, -C64::from_polar(1.0, -theta)));
        SparseHermitian::from_upper(n, e).unwrap()
    }

    fn ring_spectrum(n: usize, theta: f64) -> Vec<f64> {
        let mut v: Vec<f64> = (0..n as i64)
            .map(|m| 2.0 - 2.0 * ((theta + std::f64::consts::TAU * m as f64) / n as f64).cos())
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn banded_cholesky_solves() {
        let a = twisted_ring(50, 0.7);
        let perm: Vec<usize> = (0..50).collect();
        let chol = BandedCholesky::factor(&a, -0.5, &perm).unwrap();
        let x: Vec<C64> = (0..50)
            .map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let mut b = vec![C64::new(0.0, 0.0); 50];
        a.apply(&x, &mut b);
        for (bi, xi) in b.iter_mut().zip(&x) {
            *bi += xi * 0.5;
        }
        chol.solve_in_place(&mut b);
        for (bi, xi) in b.iter().zip(&x) {
            assert!((bi - xi).norm() < 1e-10);
        }
    }

    #[test]
    fn not_positive_definite_is_reported() {
        let a = twisted_ring(10, 0.0);
        let perm: Vec<usize> = (0..10).collect();
        assert!(matches!(
            BandedCholesky::factor(&a, 1.0, &perm),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn dense_and_iterative_agree_with_closed_form() {
        let n = 2000;
        let theta = 0.4;
        let a = twisted_ring(n, theta);
        // interleaved numbering keeps the wrap link inside the band
        let mut perm = vec![0; n];
        for j in 0..n / 2 {
            perm[j] = 2 * j;
            perm[n - 1 - j] = 2 * j + 1;
        }
        assert!(a.bandwidth(&perm) <= 2);
        let opts = SolverOptions {
            shift: -1e-4,
            tolerance: 1e-8,
            scale: 1e-4,
            max_iterations: 500,
            seed: 1,
        };
        let got = lowest_eigenpairs(&a, 5, Some(&perm), opts).unwrap();
        let want = ring_spectrum(n, theta);
        for (g, w) in got.values.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
        let small = twisted_ring(40, theta);
        let got = lowest_eigenpairs(&small, 6, None, opts).unwrap();
        for (g, w) in got.values.iter().zip(&ring_spectrum(40, theta)) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!(got.max_residual < 1e-12);
    }

    #[test]
    fn hermitian_assembly() {
        let a = twisted_ring(8, 1.0);
        assert_eq!(a.hermiticity_defect(), 0.0);
        assert!(a.get(7, 0) == a.get(0, 7).conj());
        assert!(a.gershgorin_bound() <= 4.0 + 1e-15);
    }
}
