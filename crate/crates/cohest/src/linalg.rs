//! Small dense complex-matrix helpers shared by the state simulator, the
//! stabilizer algebra, and the channel-verification module. Matrices are
//! row-major `Vec<C64>` of a given square dimension; everything here stays
//! at 64×64 or below, so no external numeric backend is used.

use num_complex::Complex64 as C64;

pub(crate) fn identity(dim: usize) -> Vec<C64> {
    let mut m = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        m[i * dim + i] = C64::new(1.0, 0.0);
    }
    m
}

pub(crate) fn mat_mul(a: &[C64], b: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik.norm_sqr() < 1e-30 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

pub(crate) fn adjoint(a: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            out[j * dim + i] = a[i * dim + j].conj();
        }
    }
    out
}

pub(crate) fn kron(a: &[C64], da: usize, b: &[C64], db: usize) -> Vec<C64> {
    let dim = da * db;
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..da {
        for j in 0..da {
            let aij = a[i * da + j];
            if aij.norm_sqr() < 1e-30 {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * dim + (j * db + l)] = aij * b[k * db + l];
                }
            }
        }
    }
    out
}

pub(crate) fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn is_unitary(u: &[C64], dim: usize, tol: f64) -> bool {
    let uu = mat_mul(u, &adjoint(u, dim), dim);
    max_abs_diff(&uu, &identity(dim)) <= tol
}

fn off_diag_norm(a: &[C64], dim: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                s += a[i * dim + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues sorted descending and the matching
/// eigenvectors as columns (`v[i * dim + k]` is component `i` of
/// eigenvector `k`). Sweeps until the off-diagonal Frobenius norm drops
/// below `1e-12` relative to the matrix scale.
pub(crate) fn hermitian_eigen(a: &[C64], dim: usize) -> (Vec<f64>, Vec<C64>) {
    assert_eq!(a.len(), dim * dim);
    let mut m = a.to_vec();
    let mut v = identity(dim);
    let scale = 1.0 + m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-12 * scale;

    for _sweep in 0..100 {
        if off_diag_norm(&m, dim) <= tol {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = m[p * dim + q];
                let abs = apq.norm();
                if abs <= 1e-300 {
                    continue;
                }
                let app = m[p * dim + p].re;
                let aqq = m[q * dim + q].re;
                let phi = apq.arg();
                let tau = (aqq - app) / (2.0 * abs);
                // Smaller-magnitude root of t² − 2τt − 1 = 0.
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = C64::from_polar(t * c, -phi);
                let s_conj = s.conj();

                // Columns p, q of both M and V: M ← M·J, V ← V·J.
                for i in 0..dim {
                    let mp = m[i * dim + p];
                    let mq = m[i * dim + q];
                    m[i * dim + p] = mp * c + mq * s;
                    m[i * dim + q] = -mp * s_conj + mq * c;
                    let vp = v[i * dim + p];
                    let vq = v[i * dim + q];
                    v[i * dim + p] = vp * c + vq * s;
                    v[i * dim + q] = -vp * s_conj + vq * c;
                }
                // Rows p, q: M ← J†·M.
                for j in 0..dim {
                    let mp = m[p * dim + j];
                    let mq = m[q * dim + j];
                    m[p * dim + j] = mp * c + mq * s_conj;
                    m[q * dim + j] = -mp * s + mq * c;
                }
                // The (p,q) entry is zero by construction of the rotation.
                m[p * dim + q] = C64::new(0.0, 0.0);
                m[q * dim + p] = C64::new(0.0, 0.0);
            }
        }
    }
    debug_assert!(
        off_diag_norm(&m, dim) <= tol * 10.0,
        "jacobi failed to converge: off-diagonal {}",
        off_diag_norm(&m, dim)
    );

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        m[j * dim + j]
            .re
            .partial_cmp(&m[i * dim + i].re)
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[k * dim + k].re).collect();
    let mut vectors = vec![C64::new(0.0, 0.0); dim * dim];
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..dim {
            vectors[i * dim + new_k] = v[i * dim + old_k];
        }
    }
    (eigenvalues, vectors)
}
