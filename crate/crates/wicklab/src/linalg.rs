//! Thin safe wrappers over the system LAPACK.
//!
//! Only four factorizations are needed crate-wide: symmetric/Hermitian
//! eigendecompositions (dsyev/zheev), singular values (dgesvd/zgesvd) and
//! the symmetric tridiagonal solver (dstev) behind the Golub-Welsch
//! quadrature rules. nalgebra's own iterative QR was observed to lose
//! accuracy on graded Jacobi matrices, so everything spectral routes
//! through LAPACK instead.
//!
//! nalgebra stores matrices column-major, which is exactly LAPACK's layout;
//! buffers are handed over without copying conversions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::os::raw::c_char;

#[allow(clippy::too_many_arguments)]
extern "C" {
    fn dsyev_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        info: *mut i32,
    );

    fn zheev_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut f64,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn dgesvd_(
        jobu: *const c_char,
        jobvt: *const c_char,
        m: *const i32,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        s: *mut f64,
        u: *mut f64,
        ldu: *const i32,
        vt: *mut f64,
        ldvt: *const i32,
        work: *mut f64,
        lwork: *const i32,
        info: *mut i32,
    );

    fn zgesvd_(
        jobu: *const c_char,
        jobvt: *const c_char,
        m: *const i32,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        s: *mut f64,
        u: *mut Complex64,
        ldu: *const i32,
        vt: *mut Complex64,
        ldvt: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn dstev_(
        jobz: *const c_char,
        n: *const i32,
        d: *mut f64,
        e: *mut f64,
        z: *mut f64,
        ldz: *const i32,
        work: *mut f64,
        info: *mut i32,
    );
}

const JOB_V: c_char = b'V' as c_char;
const JOB_N: c_char = b'N' as c_char;
const UPLO_L: c_char = b'L' as c_char;

fn check_info(routine: &str, info: i32) {
    assert_eq!(info, 0, "LAPACK {routine} failed with info = {info}");
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric
/// matrix.
pub fn symmetric_eigen(mat: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = mat.nrows();
    assert_eq!(n, mat.ncols(), "symmetric_eigen needs a square matrix");
    let mut a = mat.clone();
    let mut w = DVector::zeros(n);
    let ni = n as i32;
    let mut info = 0i32;
    unsafe {
        let mut query = [0.0f64];
        let m1 = -1i32;
        dsyev_(&JOB_V, &UPLO_L, &ni, a.as_mut_slice().as_mut_ptr(), &ni, w.as_mut_slice().as_mut_ptr(), query.as_mut_ptr(), &m1, &mut info);
        check_info("dsyev (query)", info);
        let lwork = query[0] as i32;
        let mut work = vec![0.0f64; lwork.max(1) as usize];
        dsyev_(&JOB_V, &UPLO_L, &ni, a.as_mut_slice().as_mut_ptr(), &ni, w.as_mut_slice().as_mut_ptr(), work.as_mut_ptr(), &lwork, &mut info);
        check_info("dsyev", info);
    }
    (w, a)
}

/// Eigenvalues (ascending, real) of a complex Hermitian matrix.
pub fn hermitian_eigenvalues(mat: &DMatrix<Complex64>) -> DVector<f64> {
    hermitian_eigen_impl(mat, false).0
}

/// Eigenvalues and eigenvectors of a complex Hermitian matrix.
pub fn hermitian_eigen(mat: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    hermitian_eigen_impl(mat, true)
}

fn hermitian_eigen_impl(
    mat: &DMatrix<Complex64>,
    vectors: bool,
) -> (DVector<f64>, DMatrix<Complex64>) {
    let n = mat.nrows();
    assert_eq!(n, mat.ncols(), "hermitian_eigen needs a square matrix");
    let mut a = mat.clone();
    let mut w = DVector::zeros(n);
    let ni = n as i32;
    let jobz = if vectors { JOB_V } else { JOB_N };
    let mut rwork = vec![0.0f64; (3 * n).max(1)];
    let mut info = 0i32;
    unsafe {
        let mut query = [Complex64::new(0.0, 0.0)];
        let m1 = -1i32;
        zheev_(&jobz, &UPLO_L, &ni, a.as_mut_slice().as_mut_ptr(), &ni, w.as_mut_slice().as_mut_ptr(), query.as_mut_ptr(), &m1, rwork.as_mut_ptr(), &mut info);
        check_info("zheev (query)", info);
        let lwork = query[0].re as i32;
        let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
        zheev_(&jobz, &UPLO_L, &ni, a.as_mut_slice().as_mut_ptr(), &ni, w.as_mut_slice().as_mut_ptr(), work.as_mut_ptr(), &lwork, rwork.as_mut_ptr(), &mut info);
        check_info("zheev", info);
    }
    (w, a)
}

/// Singular values (descending) of a real matrix.
pub fn singular_values(mat: &DMatrix<f64>) -> Vec<f64> {
    let (m, n) = (mat.nrows(), mat.ncols());
    let mut a = mat.clone();
    let k = m.min(n);
    let mut s = vec![0.0f64; k.max(1)];
    let (mi, ni) = (m as i32, n as i32);
    let mut info = 0i32;
    let ldu = 1i32;
    unsafe {
        let mut query = [0.0f64];
        let m1 = -1i32;
        dgesvd_(&JOB_N, &JOB_N, &mi, &ni, a.as_mut_slice().as_mut_ptr(), &mi, s.as_mut_ptr(), std::ptr::null_mut(), &ldu, std::ptr::null_mut(), &ldu, query.as_mut_ptr(), &m1, &mut info);
        check_info("dgesvd (query)", info);
        let lwork = query[0] as i32;
        let mut work = vec![0.0f64; lwork.max(1) as usize];
        dgesvd_(&JOB_N, &JOB_N, &mi, &ni, a.as_mut_slice().as_mut_ptr(), &mi, s.as_mut_ptr(), std::ptr::null_mut(), &ldu, std::ptr::null_mut(), &ldu, work.as_mut_ptr(), &lwork, &mut info);
        check_info("dgesvd", info);
    }
    s
}

/// Singular values (descending) of a complex matrix.
pub fn singular_values_complex(mat: &DMatrix<Complex64>) -> Vec<f64> {
    let (m, n) = (mat.nrows(), mat.ncols());
    let mut a = mat.clone();
    let k = m.min(n);
    let mut s = vec![0.0f64; k.max(1)];
    let mut rwork = vec![0.0f64; (5 * k).max(1)];
    let (mi, ni) = (m as i32, n as i32);
    let mut info = 0i32;
    let ldu = 1i32;
    unsafe {
        let mut query = [Complex64::new(0.0, 0.0)];
        let m1 = -1i32;
        zgesvd_(&JOB_N, &JOB_N, &mi, &ni, a.as_mut_slice().as_mut_ptr(), &mi, s.as_mut_ptr(), std::ptr::null_mut(), &ldu, std::ptr::null_mut(), &ldu, query.as_mut_ptr(), &m1, rwork.as_mut_ptr(), &mut info);
        check_info("zgesvd (query)", info);
        let lwork = query[0].re as i32;
        let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
        zgesvd_(&JOB_N, &JOB_N, &mi, &ni, a.as_mut_slice().as_mut_ptr(), &mi, s.as_mut_ptr(), std::ptr::null_mut(), &ldu, std::ptr::null_mut(), &ldu, work.as_mut_ptr(), &lwork, rwork.as_mut_ptr(), &mut info);
        check_info("zgesvd", info);
    }
    s
}

/// Largest singular value; 0 for an all-zero matrix.
pub fn operator_norm(mat: &DMatrix<Complex64>) -> f64 {
    singular_values_complex(mat).first().copied().unwrap_or(0.0)
}

/// Eigenvalues (ascending) and the first row of the eigenvector matrix of a
/// symmetric tridiagonal matrix; this is exactly what Golub-Welsch needs.
pub fn tridiagonal_eigen_first_components(diag: &[f64], offdiag: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    assert_eq!(offdiag.len() + 1, n, "offdiagonal must have n-1 entries");
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z = vec![0.0f64; n * n];
    let mut work = vec![0.0f64; (2 * n).max(1)];
    let ni = n as i32;
    let mut info = 0i32;
    unsafe {
        dstev_(&JOB_V, &ni, d.as_mut_ptr(), e.as_mut_ptr(), z.as_mut_ptr(), &ni, work.as_mut_ptr(), &mut info);
        check_info("dstev", info);
    }
    // column-major: first component of eigenvector j sits at z[j * n]
    let first: Vec<f64> = (0..n).map(|j| z[j * n]).collect();
    (d, first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn symmetric_eigen_reconstructs() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 1.0]);
        let (w, q) = symmetric_eigen(&m);
        let rec = &q * DMatrix::from_diagonal(&w) * q.transpose();
        assert!((rec - &m).amax() < 1e-12);
    }

    #[test]
    fn symmetric_eigen_handles_graded_jacobi_matrix() {
        // the Laguerre Jacobi matrix that defeats naive QR implementations
        let n = 64;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 2.0 * i as f64 + 1.0;
            if i + 1 < n {
                m[(i, i + 1)] = (i + 1) as f64;
                m[(i + 1, i)] = (i + 1) as f64;
            }
        }
        let (w, q) = symmetric_eigen(&m);
        let rec = &q * DMatrix::from_diagonal(&w) * q.transpose();
        assert!((rec - &m).amax() < 1e-10);
    }

    #[test]
    fn hermitian_eigen_matches_known_spectrum() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let m = DMatrix::from_row_slice(2, 2, &[one, i, -i, one]);
        let w = hermitian_eigenvalues(&m);
        assert_relative_eq!(w[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(w[1], 2.0, epsilon = 1e-14);

        let (w2, q) = hermitian_eigen(&m);
        let d = DMatrix::from_diagonal(&w2.map(|x| Complex64::new(x, 0.0)));
        let rec = &q * d * q.adjoint();
        let err = (&rec - &m).iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn singular_values_match_gram_spectrum() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 2.0, -1.0, 3.0, 0.5]);
        let s = singular_values(&m);
        let gram = &m * m.transpose();
        let (w, _) = symmetric_eigen(&gram);
        assert_relative_eq!(s[0] * s[0], w[1], max_relative = 1e-12);
        assert_relative_eq!(s[1] * s[1], w[0], max_relative = 1e-12);
    }

    #[test]
    fn complex_operator_norm_of_unitary_is_one() {
        let i = Complex64::new(0.0, 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(s, 0.0), i * s, i * s, Complex64::new(s, 0.0)],
        );
        assert_relative_eq!(operator_norm(&m), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tridiagonal_first_components_are_orthonormal_row() {
        let diag: Vec<f64> = (0..32).map(|j| 2.0 * j as f64 + 1.0).collect();
        let off: Vec<f64> = (1..32).map(|j| j as f64).collect();
        let (vals, first) = tridiagonal_eigen_first_components(&diag, &off);
        assert_eq!(vals.len(), 32);
        let sum_sq: f64 = first.iter().map(|v| v * v).sum();
        assert_relative_eq!(sum_sq, 1.0, epsilon = 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }
}
