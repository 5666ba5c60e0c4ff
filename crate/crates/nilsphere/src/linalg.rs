//! Small dense linear algebra kernels, generic over the scalar type.
//!
//! Everything here targets matrices of modest size (group dimension `p <= 8`,
//! quadrature tables up to a few hundred nodes), so the cyclic Jacobi
//! eigensolver and Householder QR are entirely adequate and keep the crate
//! generic over `f32`/`f64`.

use ndarray::{Array1, Array2};

use crate::scalar::{real, Real};

/// Frobenius norm.
pub(crate) fn frobenius<T: Real>(a: &Array2<T>) -> T {
    a.iter().map(|&v| v * v).sum::<T>().sqrt()
}

/// Euclidean norm of a vector.
pub(crate) fn norm2<T: Real>(v: &Array1<T>) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Largest absolute deviation of `kᵀk` from the identity.
pub(crate) fn orthogonality_defect<T: Real>(k: &Array2<T>) -> T {
    let n = k.nrows();
    let ktk = k.t().dot(k);
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((ktk[[i, j]] - target).abs());
        }
    }
    worst
}

/// Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi
/// rotations. Returns eigenvalues sorted in decreasing order; column `i` of
/// the returned matrix is the eigenvector for eigenvalue `i`.
pub(crate) fn jacobi_symmetric_eigen<T: Real>(m: &Array2<T>) -> (Array1<T>, Array2<T>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "jacobi_symmetric_eigen: square input required");
    let mut a = m.clone();
    let mut v = Array2::<T>::eye(n);
    if n <= 1 {
        return (a.diag().to_owned(), v);
    }

    let eps = T::epsilon();
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[[i, j]] * a[[i, j]];
            }
        }
        let scale = frobenius(&a).max(T::min_positive_value());
        if off.sqrt() <= eps * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq.abs() <= eps * scale * real(1e-3) {
                    continue;
                }
                let app = a[[p, p]];
                let aqq = a[[q, q]];
                let tau = (aqq - app) / (real::<T>(2.0) * apq);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                // A <- Jᵀ A J on rows/columns p and q.
                for i in 0..n {
                    let aip = a[[i, p]];
                    let aiq = a[[i, q]];
                    a[[i, p]] = c * aip - s * aiq;
                    a[[i, q]] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[[p, i]];
                    let aqi = a[[q, i]];
                    a[[p, i]] = c * api - s * aqi;
                    a[[q, i]] = s * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = c * vip - s * viq;
                    v[[i, q]] = s * vip + c * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[[i, i]]).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("non-NaN eigenvalues"));

    let mut evals = Array1::<T>::zeros(n);
    let mut evecs = Array2::<T>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        evals[dst] = diag[src];
        for r in 0..n {
            evecs[[r, dst]] = v[[r, src]];
        }
    }
    (evals, evecs)
}

/// Householder QR of a square matrix. Returns `(q, r)` with `q` orthogonal
/// and `r` upper triangular, `a = q·r`.
pub(crate) fn householder_qr<T: Real>(a: &Array2<T>) -> (Array2<T>, Array2<T>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "householder_qr: square input required");
    let mut r = a.clone();
    let mut q = Array2::<T>::eye(n);

    for k in 0..n.saturating_sub(1) {
        let mut x = Array1::<T>::zeros(n - k);
        for i in k..n {
            x[i - k] = r[[i, k]];
        }
        let alpha = -x[0].signum() * norm2(&x);
        if alpha.abs() <= T::min_positive_value() {
            continue;
        }
        let mut u = x;
        u[0] -= alpha;
        let unorm = norm2(&u);
        if unorm <= T::min_positive_value() {
            continue;
        }
        u.mapv_inplace(|t| t / unorm);

        // Apply H = I - 2uuᵀ to the trailing block of R and to Q.
        for j in k..n {
            let mut dot = T::zero();
            for i in k..n {
                dot += u[i - k] * r[[i, j]];
            }
            let two_dot = real::<T>(2.0) * dot;
            for i in k..n {
                r[[i, j]] = r[[i, j]] - two_dot * u[i - k];
            }
        }
        for j in 0..n {
            let mut dot = T::zero();
            for i in k..n {
                dot += u[i - k] * q[[j, i]];
            }
            let two_dot = real::<T>(2.0) * dot;
            for i in k..n {
                q[[j, i]] = q[[j, i]] - two_dot * u[i - k];
            }
        }
    }
    (q, r)
}

/// Determinant by LU with partial pivoting.
pub(crate) fn determinant<T: Real>(m: &Array2<T>) -> T {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant: square input required");
    let mut a = m.clone();
    let mut det = T::one();
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if a[[i, k]].abs() > a[[piv, k]].abs() {
                piv = i;
            }
        }
        if piv != k {
            for j in 0..n {
                let tmp = a[[k, j]];
                a[[k, j]] = a[[piv, j]];
                a[[piv, j]] = tmp;
            }
            det = -det;
        }
        let akk = a[[k, k]];
        if akk == T::zero() {
            return T::zero();
        }
        det *= akk;
        for i in k + 1..n {
            let factor = a[[i, k]] / akk;
            for j in k..n {
                a[[i, j]] = a[[i, j]] - factor * a[[k, j]];
            }
        }
    }
    det
}

/// Orthonormalize `v` against the rows of `basis[..rows]` in place
/// (modified Gram-Schmidt, two passes), then normalize. Returns `false`
/// when `v` is numerically in the span of the rows.
pub(crate) fn orthonormalize_against_rows<T: Real>(
    v: &mut Array1<T>,
    basis: &Array2<T>,
    rows: usize,
) -> bool {
    for _pass in 0..2 {
        for r in 0..rows {
            let row = basis.row(r);
            let mut dot = T::zero();
            for (a, b) in v.iter().zip(row.iter()) {
                dot += *a * *b;
            }
            for (a, b) in v.iter_mut().zip(row.iter()) {
                *a -= dot * *b;
            }
        }
    }
    let n = norm2(v);
    if n <= real(1e-8) {
        return false;
    }
    v.mapv_inplace(|t| t / n);
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let m = array![[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        let (evals, evecs) = jacobi_symmetric_eigen(&m);
        assert_abs_diff_eq!(evals[0], 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(evals[1], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(evals[2], 1.0, epsilon = 1e-12);
        // Residual ‖M v - λ v‖ per eigenpair.
        for i in 0..3 {
            let v = evecs.column(i).to_owned();
            let mv = m.dot(&v);
            for j in 0..3 {
                assert_abs_diff_eq!(mv[j], evals[i] * v[j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn qr_reconstructs_and_is_orthogonal() {
        let a = array![
            [1.0, 2.0, 3.0],
            [4.0, 5.0, 6.0],
            [7.0, 8.0, 10.0],
        ];
        let (q, r) = householder_qr(&a);
        assert!(orthogonality_defect(&q) < 1e-14);
        let qr = q.dot(&r);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(qr[[i, j]], a[[i, j]], epsilon = 1e-13);
                if i > j {
                    assert_abs_diff_eq!(r[[i, j]], 0.0, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = array![[3.0, 1.0], [2.0, 5.0]];
        assert_abs_diff_eq!(determinant(&a), 13.0, epsilon = 1e-14);
        let b = array![[0.0, 1.0], [1.0, 0.0]];
        assert_abs_diff_eq!(determinant(&b), -1.0, epsilon = 1e-14);
    }
}
