//! Dense complex linear-algebra kernel.
//!
//! Everything in the crate is carried by [`ComplexMatrix`], a column-major
//! `nalgebra` matrix of `Complex64`. Zero-row and zero-column shapes are legal
//! and stand for maps into or out of the zero space; every routine here
//! accepts them. Spectral decompositions are delegated to `faer`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

fn faer_view(m: &ComplexMatrix) -> faer::MatRef<'_, Complex64> {
    faer::MatRef::from_column_major_slice(m.as_slice(), m.nrows(), m.ncols())
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of the Hermitian
/// part of a square matrix.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    assert_eq!(m.nrows(), m.ncols(), "hermitian_eigen needs a square matrix");
    if m.nrows() == 0 {
        return (Vec::new(), m.clone());
    }
    let h = hermitian_part(m);
    let evd = faer_view(&h)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("self-adjoint eigensolver converges on finite input");
    let values = (0..h.nrows()).map(|i| evd.S()[i].re).collect();
    (values, from_faer(evd.U()))
}

/// Full SVD `m = U diag(s) V*` with `s` descending.
fn svd(m: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let svd = faer_view(m).svd().expect("SVD converges on finite input");
    let s = (0..m.nrows().min(m.ncols())).map(|i| svd.S()[i].re).collect();
    (from_faer(svd.U()), s, from_faer(svd.V()))
}

/// Relative tolerance used to decide numerical rank.
///
/// Singular values `<= relative_cutoff * sigma_max` count as zero. A zero
/// matrix has rank 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTolerance {
    pub relative_cutoff: f64,
}

impl RankTolerance {
    pub const DEFAULT_CUTOFF: f64 = 1e-10;

    pub fn new(relative_cutoff: f64) -> Result<Self> {
        if !(relative_cutoff >= 0.0 && relative_cutoff.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rank cutoff must be a nonnegative finite number, got {relative_cutoff}"
            )));
        }
        Ok(Self { relative_cutoff })
    }

    /// Number of entries of a descending singular value list above the cutoff.
    pub fn rank_of(&self, singular_values: &[f64]) -> usize {
        match singular_values.first() {
            Some(&smax) if smax > 0.0 => {
                let cut = self.relative_cutoff * smax;
                singular_values.iter().filter(|&&s| s > cut).count()
            }
            _ => 0,
        }
    }
}

impl Default for RankTolerance {
    fn default() -> Self {
        Self {
            relative_cutoff: Self::DEFAULT_CUTOFF,
        }
    }
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
    ComplexMatrix::from_fn(rows, cols, |i, j| c64(entries[i * cols + j], 0.0))
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { c64(0.0, 0.0) })
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Matrix product through `matrixmultiply`'s complex gemm.
///
/// nalgebra's generic product is several times slower for `Complex64`, and
/// the Fock-space matrices here reach a few thousand rows.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(
        a.ncols(),
        b.nrows(),
        "matmul shape mismatch: {}x{} * {}x{}",
        a.nrows(),
        a.ncols(),
        b.nrows(),
        b.ncols()
    );
    let (m, k, n) = (a.nrows(), a.ncols(), b.ncols());
    let mut out = ComplexMatrix::zeros(m, n);
    if m == 0 || n == 0 || k == 0 {
        return out;
    }
    // SAFETY: Complex64 is #[repr(C)] { re, im }, so it has the layout of
    // [f64; 2]. All three buffers are contiguous column-major with the
    // strides given, and `out` does not alias the inputs.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            1,
            m as isize,
            b.as_ptr() as *const [f64; 2],
            1,
            k as isize,
            [0.0, 0.0],
            out.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    out
}

/// Product of a chain of matrices, left to right.
pub fn chain(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = factors.split_first().expect("chain needs at least one factor");
    rest.iter().fold((*first).clone(), |acc, f| matmul(&acc, f))
}

/// Singular values in descending order; empty for degenerate shapes.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    faer_view(m).singular_values().expect("SVD converges on finite input")
}

/// Largest singular value; 0 for degenerate shapes.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let small = m.nrows().min(m.ncols());
    if small == 0 {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c64(0.5, 0.0)
}

/// `max(||V*V - I||, ||V V* - I||)`; vacuous (0) for a 0x0 matrix.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let left = operator_norm(&(matmul(&u.adjoint(), u) - identity(n)));
    let right = operator_norm(&(matmul(u, &u.adjoint()) - identity(n)));
    left.max(right)
}

/// `||V*V - I||` for a matrix meant to have orthonormal columns.
pub fn isometry_residual(v: &ComplexMatrix) -> f64 {
    operator_norm(&(matmul(&v.adjoint(), v) - identity(v.ncols())))
}

fn check_square(m: &ComplexMatrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let asymmetry = max_abs(&(m - m.adjoint()));
    if asymmetry > 1e-10 * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian { asymmetry });
    }
    Ok(())
}

/// Unique Hermitian PSD square root.
///
/// Negative eigenvalues down to `-10 * eps * sigma_max` are treated as 0;
/// anything below that is an error.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square(m, "psd_sqrt")?;
    check_hermitian(m)?;
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let (values, vectors) = hermitian_eigen(m);
    let sigma_max = values.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    let band = 10.0 * f64::EPSILON * sigma_max;
    let roots = values
        .iter()
        .map(|&l| {
            if l < -band {
                Err(Error::NotPsd { eigenvalue: l })
            } else {
                Ok(l.max(0.0).sqrt())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(recompose(&vectors, &roots))
}

/// PSD square root that zeroes every eigenvalue in `[-below, above]`.
/// Defect operators `I - T*T` use it with bands on the scale of `I`.
pub fn psd_sqrt_clamped(m: &ComplexMatrix, below: f64, above: f64) -> Result<ComplexMatrix> {
    check_square(m, "psd_sqrt")?;
    check_hermitian(m)?;
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let (values, vectors) = hermitian_eigen(m);
    let roots = values
        .iter()
        .map(|&l| {
            if l < -below {
                Err(Error::NotPsd { eigenvalue: l })
            } else if l <= above {
                Ok(0.0)
            } else {
                Ok(l.sqrt())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(recompose(&vectors, &roots))
}

fn recompose(vectors: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    hermitian_part(&matmul(&scaled, &vectors.adjoint()))
}

pub fn numerical_rank(m: &ComplexMatrix, tol: RankTolerance) -> usize {
    tol.rank_of(&singular_values(m))
}

/// Orthonormal basis of the numerical column space of `m`.
///
/// The basis depends only on the subspace, not on the SVD that found it:
/// columns of the orthogonal projector are picked greedily (lowest index
/// whose residual is at least half the largest), the chosen indices are
/// sorted, and the corresponding projector columns are orthonormalized in
/// that order. Column `i` then has a real positive entry at its pivot row,
/// and a full-rank input yields the identity.
pub fn range_isometry(m: &ComplexMatrix, tol: RankTolerance) -> ComplexMatrix {
    let rows = m.nrows();
    if rows == 0 || m.ncols() == 0 {
        return ComplexMatrix::zeros(rows, 0);
    }
    let (u, s, _) = svd(m);
    let rank = tol.rank_of(&s);
    if rank == 0 {
        return ComplexMatrix::zeros(rows, 0);
    }
    if rank == rows {
        return identity(rows);
    }
    let basis = u.columns(0, rank).into_owned();
    let projector = matmul(&basis, &basis.adjoint());

    let mut chosen: Vec<usize> = Vec::with_capacity(rank);
    let mut selected = ComplexMatrix::zeros(rows, 0);
    for _ in 0..rank {
        let residuals: Vec<f64> = (0..rows)
            .map(|j| {
                if chosen.contains(&j) {
                    0.0
                } else {
                    orthogonal_residual(&selected, &projector.column(j).into_owned()).norm()
                }
            })
            .collect();
        let best = residuals.iter().copied().fold(0.0, f64::max);
        let pick = residuals
            .iter()
            .position(|&r| r >= 0.5 * best)
            .expect("a maximal residual exists");
        let r = orthogonal_residual(&selected, &projector.column(pick).into_owned());
        let r = &r / c64(r.norm(), 0.0);
        let at = selected.ncols();
        selected = selected.insert_column(at, c64(0.0, 0.0));
        let last = selected.ncols() - 1;
        selected.set_column(last, &r);
        chosen.push(pick);
    }
    chosen.sort_unstable();

    let mut out = ComplexMatrix::zeros(rows, rank);
    for (i, &p) in chosen.iter().enumerate() {
        let prev = out.columns(0, i).into_owned();
        let r = orthogonal_residual(&prev, &projector.column(p).into_owned());
        let r = &r / c64(r.norm(), 0.0);
        out.set_column(i, &r);
    }
    out
}

/// Residual of `v` after removing its component in the span of the
/// orthonormal columns of `q` (two passes of Gram-Schmidt).
fn orthogonal_residual(q: &ComplexMatrix, v: &nalgebra::DVector<Complex64>) -> nalgebra::DVector<Complex64> {
    let mut r = v.clone();
    if q.ncols() == 0 {
        return r;
    }
    for _ in 0..2 {
        let coeffs = q.adjoint() * &r;
        r -= q * coeffs;
    }
    r
}

/// Moore-Penrose pseudoinverse with singular values below the cutoff dropped.
pub fn pinv(m: &ComplexMatrix, tol: RankTolerance) -> ComplexMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return ComplexMatrix::zeros(cols, rows);
    }
    let (u, s, v) = svd(m);
    let rank = tol.rank_of(&s);
    if rank == 0 {
        return ComplexMatrix::zeros(cols, rows);
    }
    let mut v_scaled = v.columns(0, rank).into_owned();
    for (j, sj) in s.iter().take(rank).enumerate() {
        v_scaled.column_mut(j).scale_mut(1.0 / sj);
    }
    matmul(&v_scaled, &u.columns(0, rank).adjoint())
}

/// Inverse of a square matrix; the empty matrix is its own inverse.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square(m, "inverse")?;
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("matrix is singular".into()))
}

pub fn block_diag(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// `[[a, b], [c, d]]` from four blocks with compatible shapes.
pub fn block2x2(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, d: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.nrows(), b.nrows());
    assert_eq!(c.nrows(), d.nrows());
    assert_eq!(a.ncols(), c.ncols());
    assert_eq!(b.ncols(), d.ncols());
    let mut out = ComplexMatrix::zeros(a.nrows() + c.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out.view_mut((a.nrows(), 0), c.shape()).copy_from(c);
    out.view_mut((a.nrows(), a.ncols()), d.shape()).copy_from(d);
    out
}

pub fn hstack(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack needs equal row counts");
        out.view_mut((0, at), b.shape()).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.shape() == b.shape() && operator_norm(&(a - b)) <= tol
    }

    fn arb_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-1.0f64..1.0, 2 * r * c)
                .prop_map(move |v| ComplexMatrix::from_fn(r, c, |i, j| c64(v[2 * (i * c + j)], v[2 * (i * c + j) + 1])))
        })
    }

    #[test]
    fn psd_sqrt_examples() {
        assert!(close(&psd_sqrt(&identity(3)).unwrap(), &identity(3), 1e-14));
        let s = psd_sqrt(&real_diag(&[0.25, 1.0])).unwrap();
        assert!(close(&s, &real_diag(&[0.5, 1.0]), 1e-14));
        let p = real_matrix(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        assert!(close(&psd_sqrt(&p).unwrap(), &p, 1e-14));
    }

    #[test]
    fn psd_sqrt_errors() {
        let asym = real_matrix(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(psd_sqrt(&asym), Err(Error::NotHermitian { .. })));
        let neg = real_diag(&[1.0, -0.1]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPsd { .. })));
        // rounding-level negative eigenvalue is clamped
        let tiny = real_diag(&[1.0, -1e-17]);
        let s = psd_sqrt(&tiny).unwrap();
        assert_eq!(s[(1, 1)].re, 0.0);
        assert!(matches!(
            psd_sqrt(&ComplexMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn clamped_sqrt_zeroes_noise() {
        let m = real_diag(&[1e-17, 0.64]);
        let s = psd_sqrt_clamped(&m, 1e-15, 1e-15).unwrap();
        assert_eq!(s[(0, 0)].re, 0.0);
        assert!((s[(1, 1)].re - 0.8).abs() < 1e-15);
    }

    #[test]
    fn range_isometry_examples() {
        let z = range_isometry(&ComplexMatrix::zeros(2, 2), RankTolerance::default());
        assert_eq!(z.shape(), (2, 0));

        let p = real_matrix(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        let v = range_isometry(&p, RankTolerance::default());
        assert_eq!(v.shape(), (2, 1));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[(0, 0)] - c64(h, 0.0)).norm() < 1e-14);
        assert!((v[(1, 0)] - c64(-h, 0.0)).norm() < 1e-14);

        // full rank gives the standard basis
        let v = range_isometry(&real_diag(&[0.8, 1.0]), RankTolerance::default());
        assert_eq!(v, identity(2));
    }

    #[test]
    fn range_isometry_of_low_rank_psd() {
        // W is 4x2 with fixed entries; M = W W* has rank 2
        let w = ComplexMatrix::from_fn(4, 2, |i, j| c64((i + 2 * j) as f64 * 0.3 - 0.5, (i * j) as f64 * 0.2));
        let m = matmul(&w, &w.adjoint());
        let v = range_isometry(&m, RankTolerance::default());
        assert_eq!(v.ncols(), 2);
        assert!(isometry_residual(&v) < 1e-12);
        let recon = matmul(&matmul(&v, &v.adjoint()), &m);
        assert!(operator_norm(&(recon - &m)) <= 1e-10);
        // oracle: the projector onto the top eigenvectors agrees with V V*
        let (_, vectors) = hermitian_eigen(&m);
        let top = vectors.columns(2, 2).into_owned();
        let p_eig = matmul(&top, &top.adjoint());
        assert!(operator_norm(&(p_eig - matmul(&v, &v.adjoint()))) < 1e-10);
    }

    #[test]
    fn pinv_examples() {
        let p = pinv(&real_diag(&[2.0, 0.0]), RankTolerance::default());
        assert!(close(&p, &real_diag(&[0.5, 0.0]), 1e-15));
        assert!(close(
            &pinv(&identity(3), RankTolerance::default()),
            &identity(3),
            1e-14
        ));
        assert_eq!(
            pinv(&ComplexMatrix::zeros(0, 3), RankTolerance::default()).shape(),
            (3, 0)
        );
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
        assert_eq!(operator_norm(&ComplexMatrix::zeros(0, 3)), 0.0);
        assert_eq!(operator_norm(&real_matrix(2, 2, &[0.0, 2.0, 0.0, 0.0])), 2.0);
        let (s, c) = (0.6, 0.8);
        let u = ComplexMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => c64(c, 0.0),
            (0, 1) => c64(0.0, -s),
            (1, 0) => c64(0.0, -s),
            (1, 1) => c64(c, 0.0),
            (2, 2) => c64(0.0, 1.0),
            _ => c64(0.0, 0.0),
        });
        assert!((operator_norm(&u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_matches_gram_eigenvalue() {
        let m = ComplexMatrix::from_fn(90, 70, |i, j| {
            c64(
                ((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.4,
                ((i + j * 5) % 13) as f64 / 13.0 - 0.5,
            )
        });
        let (values, _) = hermitian_eigen(&matmul(&m.adjoint(), &m));
        let via_gram = values.last().unwrap().sqrt();
        assert!((operator_norm(&m) - via_gram).abs() <= 1e-12 * via_gram);
    }

    #[test]
    fn svd_reconstructs_clustered_spectra() {
        // PSD matrix with eigenvalues {1, 1, 0.7, 0} in a non-axis basis
        let w = ComplexMatrix::from_fn(4, 4, |i, j| {
            c64((i + 3 * j) as f64 * 0.17 - 0.6, ((i * j) % 3) as f64 * 0.4)
        });
        let q = w.qr().q();
        let m = chain(&[&q, &real_diag(&[1.0, 1.0, 0.7, 0.0]), &q.adjoint()]);
        let (u, s, v) = svd(&m);
        let mut us = u.clone();
        for (j, sj) in s.iter().enumerate() {
            us.column_mut(j).scale_mut(*sj);
        }
        assert!(max_abs(&(matmul(&us, &v.adjoint()) - &m)) < 1e-14);
        assert!((s[2] - 0.7).abs() < 1e-14);
    }

    #[test]
    fn matmul_agrees_with_nalgebra() {
        let a = ComplexMatrix::from_fn(5, 3, |i, j| c64(i as f64 - j as f64, (i * j) as f64 * 0.1));
        let b = ComplexMatrix::from_fn(3, 4, |i, j| c64(0.5 * j as f64, i as f64 - 1.0));
        assert!(max_abs(&(matmul(&a, &b) - &a * &b)) < 1e-13);
        assert_eq!(
            matmul(&ComplexMatrix::zeros(2, 0), &ComplexMatrix::zeros(0, 3)),
            ComplexMatrix::zeros(2, 3)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn psd_sqrt_recovers_root(s in arb_matrix(5)) {
            let sq = s.nrows().min(s.ncols());
            let s = s.view((0, 0), (sq, sq)).into_owned();
            let root = psd_sqrt(&matmul(&s, &s.adjoint())).unwrap();
            let m = matmul(&root, &root);
            let target = matmul(&s, &s.adjoint());
            prop_assert!(operator_norm(&(&m - &target)) <= 1e-12 * operator_norm(&target).max(1.0));
            // psd_sqrt(S S) = S for Hermitian PSD S
            let again = psd_sqrt(&matmul(&root, &root)).unwrap();
            prop_assert!(operator_norm(&(again - &root)) <= 1e-10);
        }

        #[test]
        fn range_isometry_spans_column_space(m in arb_matrix(6)) {
            let v = range_isometry(&m, RankTolerance::default());
            prop_assert!(isometry_residual(&v) <= 1e-10);
            let recon = matmul(&matmul(&v, &v.adjoint()), &m);
            prop_assert!(operator_norm(&(recon - &m)) <= 1e-10 * operator_norm(&m).max(1.0));
        }

        #[test]
        fn pinv_penrose_identities(m in arb_matrix(6)) {
            let p = pinv(&m, RankTolerance::default());
            let scale = operator_norm(&m).max(1.0);
            let mpm = chain(&[&m, &p, &m]);
            prop_assert!(operator_norm(&(mpm - &m)) <= 1e-10 * scale);
            let pmp = chain(&[&p, &m, &p]);
            prop_assert!(operator_norm(&(pmp - &p)) <= 1e-10 * operator_norm(&p).max(1.0));
            let mp = matmul(&m, &p);
            prop_assert!(operator_norm(&(&mp - mp.adjoint())) <= 1e-10);
            let pm = matmul(&p, &m);
            prop_assert!(operator_norm(&(&pm - pm.adjoint())) <= 1e-10);
        }
    }
}
