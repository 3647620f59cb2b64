//! Row operators and row contractions on finite-dimensional spaces.
//!
//! A [`RowOperator`] `T = (T_1, ..., T_n)` with blocks `dim_out x dim_in` is
//! also the single matrix `[T_1 ... T_n]` from `⊕ⁿ H_in` to `H_out`. The
//! domain `⊕ⁿ H_in` is indexed tuple-major: coordinate `i` of summand `j`
//! sits at `j * dim_in + i`.
//!
//! For a tuple on `H₁ ⊕ H₂` each `T_j` is one `(d₁ + d₂)`-square matrix.
//! The upper-triangular form `[[A, X], [0, B]]` of the row matrix instead
//! orders its domain as `(⊕ⁿ H₁) ⊕ (⊕ⁿ H₂)`; [`block_index`] is the one
//! permutation between the two orderings.

mod random;

pub use random::{
    complex_gaussian_matrix, random_commuting_tuple, random_contraction, random_pair, random_row_contraction,
    random_unitary, random_upper_triangular, seeded_rng,
};

use crate::error::{Error, Result};
use crate::matkit::{self, matmul, ComplexMatrix, RankTolerance};

/// Slack used when a row contraction is a precondition.
pub const CONTRACTION_SLACK: f64 = 1e-10;

/// Residual bound for `extract_l`'s factorization check.
pub const EXTRACT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RowOperator {
    blocks: Vec<ComplexMatrix>,
}

impl RowOperator {
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidArgument("a row operator needs at least one block".into()))?;
        let shape = first.shape();
        if let Some(bad) = blocks.iter().find(|b| b.shape() != shape) {
            return Err(Error::DimensionMismatch(format!(
                "blocks must share a shape: {:?} vs {:?}",
                shape,
                bad.shape()
            )));
        }
        Ok(Self { blocks })
    }

    pub fn single(block: ComplexMatrix) -> Self {
        Self { blocks: vec![block] }
    }

    /// Builds the tuple from its row matrix `[T_1 ... T_n]`.
    pub fn from_row_matrix(row: &ComplexMatrix, n: usize) -> Result<Self> {
        if n == 0 || !row.ncols().is_multiple_of(n) {
            return Err(Error::DimensionMismatch(format!(
                "row matrix with {} columns does not split into {n} blocks",
                row.ncols()
            )));
        }
        let w = row.ncols() / n;
        Self::new((0..n).map(|j| row.columns(j * w, w).into_owned()).collect())
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim_out(&self) -> usize {
        self.blocks[0].nrows()
    }

    pub fn dim_in(&self) -> usize {
        self.blocks[0].ncols()
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// Block `T_j` for `j` in `0..n`.
    pub fn block(&self, j: usize) -> &ComplexMatrix {
        &self.blocks[j]
    }

    pub fn row_matrix(&self) -> ComplexMatrix {
        matkit::hstack(&self.blocks)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b * matkit::c64(factor, 0.0)).collect(),
        }
    }

    /// Operator norm of the row matrix, `||Σ T_j T_j*||^{1/2}`.
    pub fn row_norm(&self) -> f64 {
        matkit::operator_norm(&self.row_matrix())
    }

    /// True iff the largest eigenvalue of `T T*` is at most `1 + slack`.
    pub fn is_row_contraction(&self, slack: f64) -> bool {
        let norm = self.row_norm();
        norm * norm <= 1.0 + slack
    }

    pub fn max_commutator_norm(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                let c = matmul(&self.blocks[i], &self.blocks[j]) - matmul(&self.blocks[j], &self.blocks[i]);
                worst = worst.max(matkit::operator_norm(&c));
            }
        }
        worst
    }

    /// True iff every pair `T_i T_j - T_j T_i` has norm at most `tol`.
    /// Only meaningful for tuples on a single space.
    pub fn is_commuting(&self, tol: f64) -> bool {
        self.dim_out() == self.dim_in() && self.max_commutator_norm() <= tol
    }
}

pub fn is_row_contraction(t: &RowOperator, slack: f64) -> bool {
    t.is_row_contraction(slack)
}

pub fn is_commuting(t: &RowOperator, tol: f64) -> bool {
    t.is_commuting(tol)
}

/// Defect operators of a row contraction and orthonormal bases of the
/// defect spaces.
///
/// `d_right = (I - T*T)^{1/2}` acts on `⊕ⁿ H_in`, `d_left = (I - TT*)^{1/2}`
/// on `H_out`. `v_right` / `v_left` have orthonormal columns spanning their
/// ranges; defect coordinates everywhere else in the crate are coordinates
/// in these bases.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectData {
    pub d_right: ComplexMatrix,
    pub d_left: ComplexMatrix,
    pub v_right: ComplexMatrix,
    pub v_left: ComplexMatrix,
}

impl DefectData {
    pub fn rank_right(&self) -> usize {
        self.v_right.ncols()
    }

    pub fn rank_left(&self) -> usize {
        self.v_left.ncols()
    }
}

/// Rounding band for eigenvalues of `I - T*T` on a space of dimension `dim`.
fn defect_band(dim: usize) -> f64 {
    10.0 * f64::EPSILON * (dim.max(1) as f64)
}

pub fn defects(t: &RowOperator, tol: RankTolerance) -> Result<DefectData> {
    let row = t.row_matrix();
    let norm = matkit::operator_norm(&row);
    if norm * norm > 1.0 + CONTRACTION_SLACK {
        return Err(Error::NotAContraction { norm });
    }
    let right_dim = row.ncols();
    let left_dim = row.nrows();
    let right_gram = matkit::identity(right_dim) - matmul(&row.adjoint(), &row);
    let left_gram = matkit::identity(left_dim) - matmul(&row, &row.adjoint());
    // the contraction slack admits eigenvalues slightly below zero
    let below = 2.0 * CONTRACTION_SLACK;
    let d_right = matkit::psd_sqrt_clamped(&right_gram, below, defect_band(right_dim))?;
    let d_left = matkit::psd_sqrt_clamped(&left_gram, below, defect_band(left_dim))?;
    let v_right = matkit::range_isometry(&d_right, tol);
    let v_left = matkit::range_isometry(&d_left, tol);
    Ok(DefectData {
        d_right,
        d_left,
        v_right,
        v_left,
    })
}

/// Position in the `(⊕ⁿ H₁) ⊕ (⊕ⁿ H₂)` ordering of tuple-major coordinate
/// `tm` of `⊕ⁿ (H₁ ⊕ H₂)`.
pub fn block_index(n: usize, d1: usize, d2: usize, tm: usize) -> usize {
    let d = d1 + d2;
    let (j, i) = (tm / d, tm % d);
    debug_assert!(j < n);
    if i < d1 {
        j * d1 + i
    } else {
        n * d1 + j * d2 + (i - d1)
    }
}

/// Reorders columns from tuple-major to `(⊕ⁿ H₁) ⊕ (⊕ⁿ H₂)` ordering.
pub fn to_block_columns(m: &ComplexMatrix, n: usize, d1: usize, d2: usize) -> ComplexMatrix {
    assert_eq!(m.ncols(), n * (d1 + d2));
    let mut out = ComplexMatrix::zeros(m.nrows(), m.ncols());
    for tm in 0..m.ncols() {
        out.set_column(block_index(n, d1, d2, tm), &m.column(tm));
    }
    out
}

/// Inverse of [`to_block_columns`].
pub fn from_block_columns(m: &ComplexMatrix, n: usize, d1: usize, d2: usize) -> ComplexMatrix {
    assert_eq!(m.ncols(), n * (d1 + d2));
    let mut out = ComplexMatrix::zeros(m.nrows(), m.ncols());
    for tm in 0..m.ncols() {
        out.set_column(tm, &m.column(block_index(n, d1, d2, tm)));
    }
    out
}

/// `A` on `H₁`, `B` on `H₂` and a contraction `L : 𝒟_B → 𝒟_{A*}` stored
/// in defect coordinates (`rank_left(A) x rank_right(B)`).
#[derive(Debug, Clone)]
pub struct UpperTriangularPair {
    a: RowOperator,
    b: RowOperator,
    l: ComplexMatrix,
    defects_a: DefectData,
    defects_b: DefectData,
    tol: RankTolerance,
}

impl UpperTriangularPair {
    pub fn new(a: RowOperator, b: RowOperator, l: ComplexMatrix, tol: RankTolerance) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::DimensionMismatch(format!(
                "A has n = {}, B has n = {}",
                a.n(),
                b.n()
            )));
        }
        if a.dim_in() != a.dim_out() || b.dim_in() != b.dim_out() {
            return Err(Error::DimensionMismatch("A and B must act on a single space".into()));
        }
        let defects_a = defects(&a, tol)?;
        let defects_b = defects(&b, tol)?;
        let expected = (defects_a.rank_left(), defects_b.rank_right());
        if l.shape() != expected {
            return Err(Error::DimensionMismatch(format!(
                "L must be dim 𝒟_A* x dim 𝒟_B = {:?}, got {:?}",
                expected,
                l.shape()
            )));
        }
        let norm = matkit::operator_norm(&l);
        if norm > 1.0 + CONTRACTION_SLACK {
            return Err(Error::NotContractive { norm });
        }
        Ok(Self {
            a,
            b,
            l,
            defects_a,
            defects_b,
            tol,
        })
    }

    pub fn a(&self) -> &RowOperator {
        &self.a
    }

    pub fn b(&self) -> &RowOperator {
        &self.b
    }

    pub fn l(&self) -> &ComplexMatrix {
        &self.l
    }

    pub fn defects_a(&self) -> &DefectData {
        &self.defects_a
    }

    pub fn defects_b(&self) -> &DefectData {
        &self.defects_b
    }

    pub fn tol(&self) -> RankTolerance {
        self.tol
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// Same `A`, `B` with a different coupling.
    pub fn with_l(&self, l: ComplexMatrix) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), l, self.tol)
    }

    /// `L` as a map `⊕ⁿ H₂ → H₁`: `v_left_A · L · v_right_B*`.
    pub fn l_ambient(&self) -> ComplexMatrix {
        matkit::chain(&[&self.defects_a.v_left, &self.l, &self.defects_b.v_right.adjoint()])
    }

    /// The off-diagonal row `X = D_{A*} L D_B : ⊕ⁿ H₂ → H₁`.
    pub fn coupling_row(&self) -> ComplexMatrix {
        matkit::chain(&[&self.defects_a.d_left, &self.l_ambient(), &self.defects_b.d_right])
    }

    pub fn assemble(&self) -> RowOperator {
        let (n, d1, d2) = (self.n(), self.a.dim_out(), self.b.dim_out());
        let x = self.coupling_row();
        let blocks = (0..n)
            .map(|j| {
                let xj = x.columns(j * d2, d2).into_owned();
                matkit::block2x2(self.a.block(j), &xj, &ComplexMatrix::zeros(d2, d1), self.b.block(j))
            })
            .collect();
        RowOperator { blocks }
    }
}

/// `T = [[A, D_{A*} L D_B], [0, B]]` as a tuple on `H₁ ⊕ H₂`.
pub fn assemble_t(pair: &UpperTriangularPair) -> RowOperator {
    pair.assemble()
}

/// Splits a tuple on `H₁ ⊕ H₂` (with `dim H₁ = d1`) into `A`, `B` and the
/// coupling `X`; the lower-left blocks must vanish to within `zero_tol`.
pub fn split_upper_triangular(
    t: &RowOperator,
    d1: usize,
    zero_tol: f64,
) -> Result<(RowOperator, RowOperator, RowOperator)> {
    let d = t.dim_out();
    if t.dim_in() != d || d1 > d {
        return Err(Error::DimensionMismatch(format!(
            "cannot split a {}x{} tuple at {d1}",
            t.dim_out(),
            t.dim_in()
        )));
    }
    let d2 = d - d1;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut x = Vec::new();
    for blk in t.blocks() {
        let lower = blk.view((d1, 0), (d2, d1)).into_owned();
        if matkit::max_abs(&lower) > zero_tol {
            return Err(Error::InvalidArgument("tuple is not upper triangular".into()));
        }
        a.push(blk.view((0, 0), (d1, d1)).into_owned());
        b.push(blk.view((d1, d1), (d2, d2)).into_owned());
        x.push(blk.view((0, d1), (d1, d2)).into_owned());
    }
    Ok((RowOperator::new(a)?, RowOperator::new(b)?, RowOperator::new(x)?))
}

/// Recovers the contraction `L` (in defect coordinates) with
/// `X = D_{A*} L D_B`.
///
/// Fails with `NotFactorable` when `X` does not factor through the defect
/// operators and with `NotContractive` when the recovered `L` has norm
/// above `1 + 1e-8`, i.e. when `[[A, X], [0, B]]` is not a row contraction.
pub fn extract_l(a: &RowOperator, b: &RowOperator, x: &RowOperator, tol: RankTolerance) -> Result<ComplexMatrix> {
    if x.n() != a.n() || x.n() != b.n() || x.dim_out() != a.dim_out() || x.dim_in() != b.dim_in() {
        return Err(Error::DimensionMismatch("X must be a row from ⊕ⁿ H₂ to H₁".into()));
    }
    let da = defects(a, tol)?;
    let db = defects(b, tol)?;
    let x_row = x.row_matrix();
    let l = matkit::chain(&[
        &da.v_left.adjoint(),
        &matkit::pinv(&da.d_left, tol),
        &x_row,
        &matkit::pinv(&db.d_right, tol),
        &db.v_right,
    ]);
    let rebuilt = matkit::chain(&[&da.d_left, &da.v_left, &l, &db.v_right.adjoint(), &db.d_right]);
    let residual = matkit::operator_norm(&(rebuilt - &x_row));
    if residual > EXTRACT_TOL {
        return Err(Error::NotFactorable { residual });
    }
    let norm = matkit::operator_norm(&l);
    if norm > 1.0 + EXTRACT_TOL {
        return Err(Error::NotContractive { norm });
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::{c64, real_matrix};

    fn scalars(values: &[f64]) -> RowOperator {
        RowOperator::new(values.iter().map(|&v| real_matrix(1, 1, &[v])).collect()).unwrap()
    }

    #[test]
    fn contraction_examples() {
        assert!(scalars(&[0.6, 0.8]).is_row_contraction(1e-12));
        assert!(!scalars(&[0.8, 0.8]).is_row_contraction(1e-12));
        let nil = RowOperator::single(real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(nil.is_row_contraction(1e-12));
    }

    #[test]
    fn defects_examples() {
        let tol = RankTolerance::default();
        let d = defects(&scalars(&[0.0]), tol).unwrap();
        assert_eq!(d.d_right, real_matrix(1, 1, &[1.0]));
        assert_eq!(d.d_left, real_matrix(1, 1, &[1.0]));
        assert_eq!((d.rank_right(), d.rank_left()), (1, 1));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d = defects(&scalars(&[h, h]), tol).unwrap();
        assert_eq!(d.rank_left(), 0);
        assert_eq!(d.rank_right(), 1);
        assert!(matkit::max_abs(&(d.d_right - real_matrix(2, 2, &[0.5, -0.5, -0.5, 0.5]))) < 1e-14);
        assert!(matkit::max_abs(&d.d_left) < 1e-7);

        let a = 0.3;
        let d = defects(&scalars(&[a]), tol).unwrap();
        let want = (1.0 - a * a).sqrt();
        assert!((d.d_right[(0, 0)].re - want).abs() < 1e-15);
        assert!((d.d_left[(0, 0)].re - want).abs() < 1e-15);

        assert!(matches!(
            defects(&scalars(&[0.8, 0.8]), tol),
            Err(Error::NotAContraction { .. })
        ));
    }

    #[test]
    fn isometric_column_has_no_right_defect() {
        // n = 1, T = isometry C -> C^2 (a column): T*T = I
        let t = RowOperator::single(real_matrix(2, 1, &[0.6, 0.8]));
        let d = defects(&t, RankTolerance::default()).unwrap();
        assert_eq!(d.rank_right(), 0);
        assert_eq!(d.rank_left(), 1);
    }

    #[test]
    fn assemble_scalar_example() {
        let lam = 0.7;
        let pair = UpperTriangularPair::new(
            scalars(&[0.0]),
            scalars(&[0.0]),
            real_matrix(1, 1, &[lam]),
            RankTolerance::default(),
        )
        .unwrap();
        let t = pair.assemble();
        assert_eq!(t.block(0), &real_matrix(2, 2, &[0.0, lam, 0.0, 0.0]));
    }

    #[test]
    fn zero_coupling_is_block_diagonal() {
        let a = random_row_contraction(3, 2, 2, 0.9);
        let b = random_row_contraction(4, 2, 1, 0.9);
        let pair = UpperTriangularPair::new(
            a.clone(),
            b.clone(),
            ComplexMatrix::zeros(2, 2),
            RankTolerance::default(),
        )
        .unwrap();
        let t = pair.assemble();
        for j in 0..2 {
            let want = matkit::block_diag(a.block(j), b.block(j));
            assert!(matkit::max_abs(&(t.block(j) - want)) == 0.0);
        }
    }

    #[test]
    fn extract_l_examples() {
        let tol = RankTolerance::default();
        let l = extract_l(&scalars(&[0.0]), &scalars(&[0.0]), &scalars(&[0.5]), tol).unwrap();
        assert!((l[(0, 0)] - c64(0.5, 0.0)).norm() < 1e-15);
        let err = extract_l(&scalars(&[0.0]), &scalars(&[0.0]), &scalars(&[1.5]), tol).unwrap_err();
        assert!(matches!(err, Error::NotContractive { .. }));
    }

    #[test]
    fn extract_l_rejects_coupling_outside_defect_range() {
        // A = (1/√2, 1/√2) is a coisometry: D_{A*} = 0, so any X ≠ 0 fails
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let err = extract_l(
            &scalars(&[h, h]),
            &scalars(&[0.0, 0.0]),
            &scalars(&[0.1, 0.0]),
            RankTolerance::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotFactorable { .. }));
    }

    #[test]
    fn block_permutation_round_trip() {
        let (n, d1, d2) = (3, 2, 1);
        let mut seen = vec![false; n * (d1 + d2)];
        for tm in 0..seen.len() {
            let p = block_index(n, d1, d2, tm);
            assert!(!seen[p]);
            seen[p] = true;
        }
        // basis vectors: summand j=1, H₂ coordinate 0 lives at n*d1 + 1*d2
        assert_eq!(block_index(n, d1, d2, (d1 + d2) + d1), n * d1 + d2);
        assert_eq!(block_index(n, d1, d2, 2 * (d1 + d2) + 1), 2 * d1 + 1);
        let m = ComplexMatrix::from_fn(2, 9, |i, j| c64(i as f64, j as f64));
        assert_eq!(from_block_columns(&to_block_columns(&m, n, d1, d2), n, d1, d2), m);
    }

    #[test]
    fn assembled_row_matrix_is_upper_block_form() {
        let a = random_row_contraction(11, 2, 2, 0.9);
        let b = random_row_contraction(12, 2, 1, 0.9);
        let l = random_contraction(13, 2, 2, 0.9);
        let pair = UpperTriangularPair::new(a.clone(), b.clone(), l, RankTolerance::default()).unwrap();
        let t = pair.assemble();
        let blocked = to_block_columns(&t.row_matrix(), 2, 2, 1);
        let want = matkit::block2x2(
            &a.row_matrix(),
            &pair.coupling_row(),
            &ComplexMatrix::zeros(1, 4),
            &b.row_matrix(),
        );
        assert!(matkit::max_abs(&(blocked - want)) == 0.0);
    }

    #[test]
    fn commuting_examples() {
        let single = random_row_contraction(1, 1, 3, 0.9);
        assert!(single.is_commuting(1e-12));
        let diag = RowOperator::new(vec![matkit::real_diag(&[0.1, 0.2]), matkit::real_diag(&[0.3, -0.4])]).unwrap();
        assert!(diag.is_commuting(1e-12));
        let pair = RowOperator::new(vec![
            real_matrix(2, 2, &[0.0, 0.5, 0.0, 0.0]),
            real_matrix(2, 2, &[0.0, 0.0, 0.5, 0.0]),
        ])
        .unwrap();
        assert!(!pair.is_commuting(1e-10));
    }
}
