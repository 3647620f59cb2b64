//! Truncated multi-analytic operators and characteristic functions.
//!
//! A multi-analytic operator `M = Σ R_α ⊗ θ_α` from `Γ ⊗ E` to `Γ ⊗ E_*`
//! maps `e_ν ⊗ x` to `Σ_α e_{νᾱ} ⊗ θ_α x`, so `θ_α` is the block at output
//! `ᾱ`, input `∅`. Such operators never lower the word length, hence their
//! compressions to `Γ_{≤k}` multiply like the operators themselves.
//!
//! The characteristic function of a row contraction `T` on `H` is
//!
//! ```text
//! Θ_T = -(I ⊗ T) + (I ⊗ D_{T*}) (I - R̃ T̃*)^{-1} R̃ (I ⊗ D_T)
//! ```
//!
//! where `R̃ (e_ν ⊗ (h_1, ..., h_n)) = Σ_j e_{νj} ⊗ h_j`. On `Γ_{≤k}` the
//! operator `R̃ T̃*` raises word length, so `(R̃ T̃*)^{k+1} = 0` and the
//! inverse is the finite sum `Σ_{m ≤ k} (R̃ T̃*)^m`, evaluated exactly.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::fock::{self, FockBasis, Word};
use crate::matkit::{self, c64, ComplexMatrix, RankTolerance};
use crate::rowcon::{defects, DefectData, RowOperator, CONTRACTION_SLACK};

/// A multi-analytic operator compressed to `Γ_{≤k} ⊗ E → Γ_{≤k} ⊗ E_*`.
///
/// Holds both the symbol coefficients (indexed like the Fock basis) and the
/// assembled matrix; when built from coefficients the matrix is assembled
/// on first use.
#[derive(Debug, Clone)]
pub struct TruncatedMultiAnalytic {
    basis: FockBasis,
    dom_dim: usize,
    cod_dim: usize,
    coeffs: Vec<ComplexMatrix>,
    assembled: OnceLock<ComplexMatrix>,
}

impl TruncatedMultiAnalytic {
    /// Builds the operator from its coefficients; `coeffs[i]` belongs to
    /// `basis.word(i)`.
    pub fn from_coeffs(basis: FockBasis, dom_dim: usize, cod_dim: usize, coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        if coeffs.len() != basis.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                basis.dim(),
                coeffs.len()
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.shape() != (cod_dim, dom_dim)) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient must be {cod_dim}x{dom_dim}, got {:?}",
                bad.shape()
            )));
        }
        Ok(Self {
            basis,
            dom_dim,
            cod_dim,
            coeffs,
            assembled: OnceLock::new(),
        })
    }

    /// Wraps an assembled matrix, reading the coefficients off its first
    /// block column. The matrix is kept as given.
    pub fn from_assembled(basis: FockBasis, dom_dim: usize, cod_dim: usize, assembled: ComplexMatrix) -> Result<Self> {
        let shape = (basis.dim() * cod_dim, basis.dim() * dom_dim);
        if assembled.shape() != shape {
            return Err(Error::DimensionMismatch(format!(
                "assembled matrix must be {shape:?}, got {:?}",
                assembled.shape()
            )));
        }
        let coeffs = (0..basis.dim())
            .map(|a| {
                let row = basis.reverse_index(a);
                assembled.view((row * cod_dim, 0), (cod_dim, dom_dim)).into_owned()
            })
            .collect();
        Ok(Self {
            basis,
            dom_dim,
            cod_dim,
            coeffs,
            assembled: OnceLock::from(assembled),
        })
    }

    /// `I_Γ ⊗ w`.
    pub fn constant(basis: FockBasis, w: &ComplexMatrix) -> Self {
        let mut coeffs = vec![ComplexMatrix::zeros(w.nrows(), w.ncols()); basis.dim()];
        coeffs[0] = w.clone();
        let (cod, dom) = w.shape();
        Self::from_coeffs(basis, dom, cod, coeffs).expect("shapes agree")
    }

    pub fn identity(basis: FockBasis, dim: usize) -> Self {
        Self::constant(basis, &matkit::identity(dim))
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn dom_dim(&self) -> usize {
        self.dom_dim
    }

    pub fn cod_dim(&self) -> usize {
        self.cod_dim
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &Word) -> Result<&ComplexMatrix> {
        Ok(&self.coeffs[self.basis.index_of(alpha)?])
    }

    pub fn assembled(&self) -> &ComplexMatrix {
        self.assembled
            .get_or_init(|| assemble_coeffs(&self.basis, self.dom_dim, self.cod_dim, &self.coeffs))
    }

    /// Max-entry distance between the stored matrix and the one rebuilt
    /// from the coefficients.
    pub fn round_trip_residual(&self) -> f64 {
        let rebuilt = assemble_coeffs(&self.basis, self.dom_dim, self.cod_dim, &self.coeffs);
        matkit::max_abs(&(rebuilt - self.assembled()))
    }

    /// `self ∘ inner`, by convolution of coefficients:
    /// `(ΦΨ)_α = Σ_{βγ = α} Φ_β Ψ_γ`.
    pub fn compose(&self, inner: &TruncatedMultiAnalytic) -> Result<Self> {
        if self.basis != inner.basis || self.dom_dim != inner.cod_dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.cod_dim, self.dom_dim, inner.cod_dim, inner.dom_dim
            )));
        }
        let basis = &self.basis;
        let mut coeffs = vec![ComplexMatrix::zeros(self.cod_dim, inner.dom_dim); basis.dim()];
        for b in 0..basis.dim() {
            for g in 0..basis.count_below(basis.k() - basis.degree(b) + 1) {
                let a = basis.concat_index(b, g).expect("lengths fit the truncation");
                coeffs[a] += matkit::matmul(&self.coeffs[b], &inner.coeffs[g]);
            }
        }
        Self::from_coeffs(basis.clone(), inner.dom_dim, self.cod_dim, coeffs)
    }

    /// `self ⊕ other` with the first summand's coordinates first.
    pub fn direct_sum(&self, other: &TruncatedMultiAnalytic) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch("direct sum needs a common Fock basis".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| matkit::block_diag(x, y))
            .collect();
        Self::from_coeffs(
            self.basis.clone(),
            self.dom_dim + other.dom_dim,
            self.cod_dim + other.cod_dim,
            coeffs,
        )
    }

    pub fn norm(&self) -> f64 {
        matkit::operator_norm(self.assembled())
    }
}

/// `Σ_α R_α ⊗ θ_α` on `Γ_{≤k}`, block `(νᾱ, ν)` holding `θ_α`.
fn assemble_coeffs(basis: &FockBasis, dom_dim: usize, cod_dim: usize, coeffs: &[ComplexMatrix]) -> ComplexMatrix {
    let dim = basis.dim();
    let mut out = ComplexMatrix::zeros(dim * cod_dim, dim * dom_dim);
    if dom_dim == 0 || cod_dim == 0 {
        return out;
    }
    for (a, theta) in coeffs.iter().enumerate() {
        let rev = basis.reverse_index(a);
        for nu in 0..basis.count_below(basis.k() - basis.degree(a) + 1) {
            let mu = basis.concat_index(nu, rev).expect("lengths fit the truncation");
            out.view_mut((mu * cod_dim, nu * dom_dim), (cod_dim, dom_dim))
                .copy_from(theta);
        }
    }
    out
}

/// A row contraction on one space with its defect data and a truncation.
#[derive(Debug, Clone)]
pub struct CharFunInput {
    pub t: RowOperator,
    pub defects: DefectData,
    pub k: usize,
}

impl CharFunInput {
    pub fn new(t: RowOperator, k: usize, tol: RankTolerance) -> Result<Self> {
        let defects = defects(&t, tol)?;
        Ok(Self { t, defects, k })
    }

    pub fn basis(&self) -> FockBasis {
        FockBasis::new(self.t.n(), self.k).expect("n >= 1")
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("truncation k must be at least 1".into()));
        }
        if self.t.dim_in() != self.t.dim_out() {
            return Err(Error::DimensionMismatch(
                "characteristic functions need a tuple on one space".into(),
            ));
        }
        let norm = self.t.row_norm();
        if norm * norm > 1.0 + CONTRACTION_SLACK {
            return Err(Error::NotAContraction { norm });
        }
        Ok(())
    }
}

/// `R̃' : Γ ⊗ (⊕ⁿH) → Γ ⊗ H`, `e_ν ⊗ (h_j) ↦ Σ_j e_{νj} ⊗ h_j`.
fn row_shift(basis: &FockBasis, h: usize) -> ComplexMatrix {
    let n = basis.n();
    let mut out = ComplexMatrix::zeros(basis.dim() * h, basis.dim() * n * h);
    for nu in 0..basis.dim() {
        for j in 1..=n {
            if let Some(mu) = basis.append(nu, j) {
                for i in 0..h {
                    out[(mu * h + i, nu * n * h + (j - 1) * h + i)] = c64(1.0, 0.0);
                }
            }
        }
    }
    out
}

/// `Σ_{m ≤ k} (R̃ T̃*)^m x`, by Horner's rule.
///
/// `R̃ T̃*` only reads the Fock blocks below the top degree, which lead
/// every column of `x`, and writes everything from row `h` on.
fn neumann_apply(basis: &FockBasis, t: &RowOperator, x: &ComplexMatrix) -> ComplexMatrix {
    let h = t.dim_out();
    let rows = x.nrows();
    let cols = x.ncols();
    let low = basis.count_below(basis.k()) * h;
    let row_adjoint = t.row_matrix().adjoint();
    let mut y = x.clone();
    if rows == 0 || cols == 0 || h == 0 {
        return y;
    }
    for _ in 0..basis.k() {
        let mut gathered = Vec::with_capacity(low * cols);
        for col in y.as_slice().chunks(rows) {
            gathered.extend_from_slice(&col[..low]);
        }
        let gathered = ComplexMatrix::from_vec(h, low / h * cols, gathered);
        let lifted = matkit::matmul(&row_adjoint, &gathered);
        let lifted_rows = rows - h;
        let mut next = x.clone();
        for (dst, src) in next
            .as_mut_slice()
            .chunks_mut(rows)
            .zip(lifted.as_slice().chunks(lifted_rows))
        {
            for (d, v) in dst[h..].iter_mut().zip(src) {
                *d += v;
            }
        }
        y = next;
    }
    y
}

/// `Θ_T` before compression to defect coordinates, as a map
/// `Γ_{≤k} ⊗ (⊕ⁿH) → Γ_{≤k} ⊗ H`.
pub fn ambient_char_fun(input: &CharFunInput) -> Result<ComplexMatrix> {
    input.validate()?;
    let basis = input.basis();
    let (t, d) = (&input.t, &input.defects);
    let (h, n) = (t.dim_out(), t.n());
    let dim = basis.dim();

    // R̃ (I ⊗ D_T): block (νj, ν) is the j-th block row of D_T
    let mut shifted = ComplexMatrix::zeros(dim * h, dim * n * h);
    for nu in 0..dim {
        for j in 1..=n {
            if let Some(mu) = basis.append(nu, j) {
                let rows = d.d_right.rows((j - 1) * h, h);
                shifted.view_mut((mu * h, nu * n * h), (h, n * h)).copy_from(&rows);
            }
        }
    }
    // input blocks of top degree are killed by R̃
    let live = basis.count_below(basis.k()) * n * h;
    let series = neumann_apply(&basis, t, &shifted.columns(0, live).into_owned());
    let mut theta = ComplexMatrix::zeros(dim * h, dim * n * h);
    theta
        .columns_mut(0, live)
        .copy_from(&fock::kron_identity_left(dim, &d.d_left, &series));
    theta -= fock::kron_identity(dim, &t.row_matrix());
    Ok(theta)
}

/// The characteristic function of `T` on `Γ_{≤k}` in defect coordinates.
pub fn char_fun(input: &CharFunInput) -> Result<TruncatedMultiAnalytic> {
    let theta = ambient_char_fun(input)?;
    let basis = input.basis();
    let d = &input.defects;
    let dim = basis.dim();
    let compressed = fock::kron_identity_left(dim, &d.v_left.adjoint(), &theta);
    let compressed = fock::kron_identity_right(dim, &compressed, &d.v_right);
    TruncatedMultiAnalytic::from_assembled(basis, d.rank_right(), d.rank_left(), compressed)
}

/// Reads `θ_α` from the assembled matrix: the block at output `ᾱ`,
/// input `∅`.
pub fn symbol_coefficient(m: &TruncatedMultiAnalytic, alpha: &Word) -> Result<ComplexMatrix> {
    let basis = m.basis();
    if alpha.len() > basis.k() {
        return Err(Error::WordTooLong {
            len: alpha.len(),
            k: basis.k(),
        });
    }
    let row = basis.index_of(&alpha.reversed())?;
    Ok(m.assembled()
        .view((row * m.cod_dim(), 0), (m.cod_dim(), m.dom_dim()))
        .into_owned())
}

/// `max_j ‖M (L_j ⊗ I) − (L_j ⊗ I) M‖` over inputs of word length below `k`.
pub fn multi_analytic_residual(m: &TruncatedMultiAnalytic) -> f64 {
    let basis = m.basis();
    let (dom, cod) = (m.dom_dim(), m.cod_dim());
    let low = basis.count_below(basis.k());
    let a = m.assembled();
    let mut worst = 0.0_f64;
    for j in 1..=basis.n() {
        let left = fock::left_shift_rows(basis, j, cod, a);
        let mut diff = left.columns(0, low * dom).into_owned();
        for nu in 0..low {
            let target = basis.prepend(j, nu).expect("below the top degree");
            let mut block = diff.columns_mut(nu * dom, dom);
            block -= a.columns(target * dom, dom);
        }
        worst = worst.max(matkit::operator_norm(&diff));
    }
    worst
}

/// `σ_max(θ_∅) < 1 − margin`.
pub fn is_purely_contractive(m: &TruncatedMultiAnalytic, margin: f64) -> bool {
    matkit::operator_norm(&m.coeffs()[0]) < 1.0 - margin
}

/// Residuals of the two defect identities
///
/// ```text
/// Θ (I ⊗ D_T)     = (I ⊗ D_{T*}) (I − R̃T̃*)^{-1} (R̃ − T̃)
/// I + Θ T̃*       = (I ⊗ D_{T*}) (I − R̃T̃*)^{-1} (I ⊗ D_{T*})
/// ```
///
/// with `Θ` the uncompressed characteristic function; both are exact on
/// the truncation.
pub fn verify_lemma_identities(input: &CharFunInput) -> Result<(f64, f64)> {
    let theta = ambient_char_fun(input)?;
    let basis = input.basis();
    let dim = basis.dim();
    let (t, d) = (&input.t, &input.defects);
    let h = t.dim_out();
    let t_tilde = fock::kron_identity(dim, &t.row_matrix());

    let lhs = fock::kron_identity_right(dim, &theta, &d.d_right);
    let inner = neumann_apply(&basis, t, &(row_shift(&basis, h) - &t_tilde));
    let rhs = fock::kron_identity_left(dim, &d.d_left, &inner);
    let first = matkit::operator_norm(&(lhs - rhs));

    let lhs = matkit::identity(dim * h) + fock::kron_identity_right(dim, &theta, &t.row_matrix().adjoint());
    let inner = neumann_apply(&basis, t, &fock::kron_identity(dim, &d.d_left));
    let rhs = fock::kron_identity_left(dim, &d.d_left, &inner);
    let second = matkit::operator_norm(&(lhs - rhs));
    Ok((first, second))
}
