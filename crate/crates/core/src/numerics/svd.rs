//! One-sided (Hestenes) Jacobi SVD for complex matrices.
//!
//! Columns of the working copy are orthogonalised pairwise by unitary plane
//! rotations applied from the right; the accumulated rotations form `V` and
//! the column norms are the singular values. The method is slower than
//! bidiagonalisation + QR but has high relative accuracy, which matters when
//! the projector has to annihilate a channel to ~1e-15.

use super::{canonical_phase, ComplexMatrix, Complex64, NumericsError};

const MAX_SWEEPS: usize = 60;

/// Full singular value decomposition `m = u · diag(σ) · v†`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// `rows × rows`, unitary.
    pub u: ComplexMatrix,
    /// `min(rows, cols)` values, non-negative and descending.
    pub singular_values: Vec<f64>,
    /// `cols × cols`, unitary.
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// `u · diag(σ) · v†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (rows, cols) = (self.u.rows(), self.v.rows());
        let mut out = ComplexMatrix::zeros(rows, cols);
        for (k, &s) in self.singular_values.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for i in 0..rows {
                let us = self.u[(i, k)] * s;
                for j in 0..cols {
                    out[(i, j)] += us * self.v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Computes the full SVD of `m`.
pub fn svd(m: &ComplexMatrix) -> Result<SvdResult, NumericsError> {
    if let Some(idx) = m
        .as_slice()
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(NumericsError::NonFinite {
            row: idx / m.cols(),
            col: idx % m.cols(),
        });
    }
    if m.rows() >= m.cols() {
        jacobi_tall(m)
    } else {
        // m† = U' Σ V'†  ⇒  m = V' Σ U'†
        let t = jacobi_tall(&m.adjoint()).map_err(|_| NumericsError::NoConvergence {
            rows: m.rows(),
            cols: m.cols(),
        })?;
        Ok(SvdResult {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        })
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn sqr_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies `[x y] ← [x y] · [[c, s·e], [−s·ē, c]]`.
fn rotate(x: &mut [Complex64], y: &mut [Complex64], c: f64, s: f64, phase: Complex64) {
    let se = phase * s;
    let se_conj = phase.conj() * s;
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let (xo, yo) = (*xi, *yi);
        *xi = xo * c - yo * se_conj;
        *yi = xo * se + yo * c;
    }
}

fn column_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize) -> (&mut [Complex64], &mut [Complex64]) {
    debug_assert!(p < q);
    let (lo, hi) = cols.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

fn jacobi_tall(m: &ComplexMatrix) -> Result<SvdResult, NumericsError> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); cols];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let tol = f64::EPSILON * (rows as f64).sqrt();
    let mut norms: Vec<f64> = a.iter().map(|c| sqr_norm(c)).collect();
    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols - 1 {
            for q in p + 1..cols {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (ap, aq) = column_pair(&mut a, p, q);
                rotate(ap, aq, c, s, phase);
                let (vp, vq) = column_pair(&mut v, p, q);
                rotate(vp, vq, c, s, phase);
                norms[p] = sqr_norm(&a[p]);
                norms[q] = sqr_norm(&a[q]);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(NumericsError::NoConvergence { rows, cols });
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let sigma: Vec<f64> = norms.iter().map(|n| n.sqrt()).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));
    let singular_values: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);

    // Columns whose norm is at rounding level carry no reliable direction;
    // they are replaced by an orthonormal completion.
    let keep = sigma_max * (rows as f64) * f64::EPSILON;
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(rows);
    for &j in &order {
        if sigma[j] > keep && sigma[j] > 0.0 {
            u_cols.push(a[j].iter().map(|z| z / sigma[j]).collect());
        } else {
            break;
        }
    }
    let u_cols = complete_orthonormal(u_cols, rows);
    let v_cols: Vec<Vec<Complex64>> = order.iter().map(|&j| v[j].clone()).collect();

    Ok(SvdResult {
        u: from_columns(&u_cols, rows),
        singular_values,
        v: from_columns(&v_cols, cols),
    })
}

fn from_columns(cols: &[Vec<Complex64>], dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, cols.len(), |i, j| cols[j][i])
}

/// Extends an orthonormal set to a basis of `C^dim`, greedily adding the
/// standard basis vector with the largest residual.
fn complete_orthonormal(mut basis: Vec<Vec<Complex64>>, dim: usize) -> Vec<Vec<Complex64>> {
    let mut covered = vec![0.0f64; dim];
    for q in &basis {
        for (c, z) in covered.iter_mut().zip(q) {
            *c += z.norm_sqr();
        }
    }
    while basis.len() < dim {
        let k = (0..dim)
            .min_by(|&i, &j| covered[i].total_cmp(&covered[j]).then(i.cmp(&j)))
            .expect("dim > 0");
        let mut r = vec![Complex64::new(0.0, 0.0); dim];
        r[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for q in &basis {
                let proj = dot(q, &r);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= qi * proj;
                }
            }
        }
        let n = sqr_norm(&r).sqrt();
        let r: Vec<Complex64> = r.iter().map(|z| z / n).collect();
        for (c, z) in covered.iter_mut().zip(&r) {
            *c += z.norm_sqr();
        }
        basis.push(r);
    }
    basis
}

/// Number of singular values strictly above `rel_tol · σ_max`.
pub fn numerical_rank(s: &SvdResult, rel_tol: f64) -> usize {
    let sigma_max = s.sigma_max();
    if sigma_max == 0.0 {
        return 0;
    }
    s.singular_values
        .iter()
        .filter(|&&x| x > rel_tol * sigma_max)
        .count()
}

/// Moore–Penrose pseudo-inverse with singular values under the rank
/// tolerance treated as zero.
pub fn pseudo_inverse(m: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix, NumericsError> {
    let s = svd(m)?;
    let rank = numerical_rank(&s, rel_tol);
    let (rows, cols) = (m.rows(), m.cols());
    let mut out = ComplexMatrix::zeros(cols, rows);
    for k in 0..rank {
        let inv = 1.0 / s.singular_values[k];
        for i in 0..cols {
            let vi = s.v[(i, k)] * inv;
            for j in 0..rows {
                out[(i, j)] += vi * s.u[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

/// Orthogonal projector onto the null space of `m`, `I − m⁺m`.
///
/// `m⁺m` equals `V_r V_r†` for the leading `r = numerical_rank` right
/// singular vectors; that form is used directly since it is exactly
/// Hermitian up to rounding.
pub fn null_space_projector(m: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix, NumericsError> {
    let s = svd(m)?;
    let rank = numerical_rank(&s, rel_tol);
    Ok(complement_of_leading(&s.v, rank))
}

/// Projector onto the orthogonal complement of the `occupied` strongest
/// right singular directions of `m`.
///
/// Used when the dimension of the occupied subspace is known but the matrix
/// is a noisy estimate and therefore numerically full rank.
pub fn subspace_complement_projector(
    m: &ComplexMatrix,
    occupied: usize,
) -> Result<ComplexMatrix, NumericsError> {
    let s = svd(m)?;
    let occupied = occupied.min(s.singular_values.len());
    Ok(complement_of_leading(&s.v, occupied))
}

fn complement_of_leading(v: &ComplexMatrix, count: usize) -> ComplexMatrix {
    let n = v.rows();
    let mut p = ComplexMatrix::identity(n);
    for k in 0..count {
        for i in 0..n {
            let vi = v[(i, k)];
            for j in 0..n {
                p[(i, j)] -= vi * v[(j, k)].conj();
            }
        }
    }
    p
}

/// Leading right singular vector (phase-normalised) and its singular value.
pub fn dominant_right_singular_vector(
    m: &ComplexMatrix,
) -> Result<(Vec<Complex64>, f64), NumericsError> {
    let s = svd(m)?;
    let mut v = s.v.column(0);
    canonical_phase(&mut v);
    Ok((v, s.sigma_max()))
}
