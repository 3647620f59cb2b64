//! Julia-Halmos matrices, the defect unitaries of an upper-triangular row
//! contraction, and the factorization of its characteristic function.
//!
//! For `T = [[A, D_{A*} L D_B], [0, B]]` the characteristic function splits
//! as
//!
//! ```text
//! Θ_T = (I ⊗ σ_*^{-1}) [[Θ_B, 0], [0, I]] (I ⊗ J_L) [[Θ_A, 0], [0, I]] (I ⊗ σ)
//! ```
//!
//! with `σ : 𝒟_T → 𝒟_A ⊕ 𝒟_L` and `σ_* : 𝒟_{T*} → 𝒟_{B*} ⊕ 𝒟_{L*}`
//! unitary. All direct sums list the first summand's coordinates first.
//! [`verify_factorization`] computes the left side from the defining
//! formula of `Θ_T` and the right side by multiplying symbol coefficients,
//! and reports the distance between the two assembled matrices.

use crate::charfun::{char_fun, CharFunInput, TruncatedMultiAnalytic};
use crate::error::{Error, Result};
use crate::fock::{self, FockBasis};
use crate::matkit::{self, matmul, ComplexMatrix, RankTolerance};
use crate::rowcon::{defects, from_block_columns, DefectData, RowOperator, UpperTriangularPair, CONTRACTION_SLACK};

/// Bound on unitarity residuals of constructed unitaries.
pub const UNITARY_TOL: f64 = 1e-10;

/// Bound on the defining identities of `σ` and `σ_*`.
pub const IDENTITY_TOL: f64 = 1e-9;

/// `J_L : 𝒟_{A*} ⊕ 𝒟_L → 𝒟_B ⊕ 𝒟_{L*}` for `L : 𝒟_B → 𝒟_{A*}`.
///
/// `𝒟_L ⊂ 𝒟_B` and `𝒟_{L*} ⊂ 𝒟_{A*}` carry the coordinates of the range
/// isometries `v_l` and `v_l_star`.
#[derive(Debug, Clone)]
pub struct JuliaHalmos {
    pub l: ComplexMatrix,
    pub d_l: ComplexMatrix,
    pub d_l_star: ComplexMatrix,
    pub v_l: ComplexMatrix,
    pub v_l_star: ComplexMatrix,
    pub matrix: ComplexMatrix,
    pub unitarity_residual: f64,
}

impl JuliaHalmos {
    pub fn rank_l(&self) -> usize {
        self.v_l.ncols()
    }

    pub fn rank_l_star(&self) -> usize {
        self.v_l_star.ncols()
    }
}

pub fn julia_halmos(l: &ComplexMatrix, tol: RankTolerance) -> Result<JuliaHalmos> {
    let norm = matkit::operator_norm(l);
    if norm > 1.0 + CONTRACTION_SLACK {
        return Err(Error::NotContractive { norm });
    }
    let d = defects(&RowOperator::single(l.clone()), tol)?;
    let DefectData {
        d_right: d_l,
        d_left: d_l_star,
        v_right: v_l,
        v_left: v_l_star,
    } = d;
    let matrix = matkit::block2x2(
        &l.adjoint(),
        &matmul(&d_l, &v_l),
        &matmul(&v_l_star.adjoint(), &d_l_star),
        &-matkit::chain(&[&v_l_star.adjoint(), l, &v_l]),
    );
    let unitarity_residual = matkit::unitarity_residual(&matrix);
    Ok(JuliaHalmos {
        l: l.clone(),
        d_l,
        d_l_star,
        v_l,
        v_l_star,
        matrix,
        unitarity_residual,
    })
}

/// `σ`, `σ_*` and the data they were built from.
#[derive(Debug, Clone)]
pub struct DefectUnitaries {
    pub t: RowOperator,
    pub defects_t: DefectData,
    pub julia_halmos: JuliaHalmos,
    pub sigma: ComplexMatrix,
    pub sigma_star: ComplexMatrix,
    pub sigma_unitarity: f64,
    pub sigma_star_unitarity: f64,
    /// `‖σ D_T − M‖` in ambient coordinates.
    pub sigma_identity: f64,
    /// `‖σ_* D_{T*} − M_*‖` in ambient coordinates.
    pub sigma_star_identity: f64,
}

impl DefectUnitaries {
    /// True when both unitarity residuals are within [`UNITARY_TOL`] and both
    /// identities within [`IDENTITY_TOL`].
    pub fn certified(&self) -> bool {
        self.sigma_unitarity <= UNITARY_TOL
            && self.sigma_star_unitarity <= UNITARY_TOL
            && self.sigma_identity <= IDENTITY_TOL
            && self.sigma_star_identity <= IDENTITY_TOL
    }
}

/// Builds `σ` from `σ D_T = [[D_A, −A* L D_B], [0, D_L D_B]]` and `σ_*`
/// from `σ_* D_{T*} = [[−B L* D_{A*}, D_{B*}], [D_{L*} D_{A*}, 0]]`,
/// solving on the ranges of `D_T` and `D_{T*}` by pseudoinverse.
pub fn defect_unitaries(pair: &UpperTriangularPair) -> Result<DefectUnitaries> {
    let tol = pair.tol();
    let (n, d1, d2) = (pair.n(), pair.a().dim_out(), pair.b().dim_out());
    let (da, db) = (pair.defects_a(), pair.defects_b());
    let t = pair.assemble();
    let dt = defects(&t, tol)?;
    let jh = julia_halmos(pair.l(), tol)?;
    let l_amb = pair.l_ambient();

    let expected = da.rank_right() + jh.rank_l();
    if dt.rank_right() != expected {
        return Err(Error::RankDeficiency {
            expected,
            got: dt.rank_right(),
        });
    }
    let expected = db.rank_left() + jh.rank_l_star();
    if dt.rank_left() != expected {
        return Err(Error::RankDeficiency {
            expected,
            got: dt.rank_left(),
        });
    }

    // rows: ⊕ⁿH₁ then 𝒟_B coordinates; columns: (⊕ⁿH₁) ⊕ (⊕ⁿH₂)
    let m = matkit::block2x2(
        &da.d_right,
        &-matkit::chain(&[&pair.a().row_matrix().adjoint(), &l_amb, &db.d_right]),
        &ComplexMatrix::zeros(db.rank_right(), n * d1),
        &matkit::chain(&[&jh.d_l, &db.v_right.adjoint(), &db.d_right]),
    );
    let m = from_block_columns(&m, n, d1, d2);
    let frame = matkit::block_diag(&da.v_right, &jh.v_l);
    let sigma = matkit::chain(&[&frame.adjoint(), &m, &matkit::pinv(&dt.d_right, tol), &dt.v_right]);
    let rebuilt = matkit::chain(&[&frame, &sigma, &dt.v_right.adjoint(), &dt.d_right]);
    let sigma_identity = matkit::operator_norm(&(rebuilt - &m));

    // rows: H₂ then 𝒟_{A*} coordinates; columns: H₁ ⊕ H₂
    let m_star = matkit::block2x2(
        &-matkit::chain(&[&pair.b().row_matrix(), &l_amb.adjoint(), &da.d_left]),
        &db.d_left,
        &matkit::chain(&[&jh.d_l_star, &da.v_left.adjoint(), &da.d_left]),
        &ComplexMatrix::zeros(da.rank_left(), d2),
    );
    let frame_star = matkit::block_diag(&db.v_left, &jh.v_l_star);
    let sigma_star = matkit::chain(&[
        &frame_star.adjoint(),
        &m_star,
        &matkit::pinv(&dt.d_left, tol),
        &dt.v_left,
    ]);
    let rebuilt = matkit::chain(&[&frame_star, &sigma_star, &dt.v_left.adjoint(), &dt.d_left]);
    let sigma_star_identity = matkit::operator_norm(&(rebuilt - &m_star));

    Ok(DefectUnitaries {
        sigma_unitarity: matkit::unitarity_residual(&sigma),
        sigma_star_unitarity: matkit::unitarity_residual(&sigma_star),
        t,
        defects_t: dt,
        julia_halmos: jh,
        sigma,
        sigma_star,
        sigma_identity,
        sigma_star_identity,
    })
}

fn pad_with_identity(theta: &TruncatedMultiAnalytic, dim: usize) -> Result<TruncatedMultiAnalytic> {
    theta.direct_sum(&TruncatedMultiAnalytic::identity(theta.basis().clone(), dim))
}

fn rhs_from(pair: &UpperTriangularPair, du: &DefectUnitaries, k: usize) -> Result<TruncatedMultiAnalytic> {
    let theta_a = char_fun(&CharFunInput {
        t: pair.a().clone(),
        defects: pair.defects_a().clone(),
        k,
    })?;
    let theta_b = char_fun(&CharFunInput {
        t: pair.b().clone(),
        defects: pair.defects_b().clone(),
        k,
    })?;
    let basis = theta_a.basis().clone();
    let jh = &du.julia_halmos;
    let constant = |w: &ComplexMatrix| TruncatedMultiAnalytic::constant(basis.clone(), w);
    constant(&du.sigma_star.adjoint())
        .compose(&pad_with_identity(&theta_b, jh.rank_l_star())?)?
        .compose(&constant(&jh.matrix))?
        .compose(&pad_with_identity(&theta_a, jh.rank_l())?)?
        .compose(&constant(&du.sigma))
}

/// The five-factor product on `Γ_{≤k}`, assembled from its coefficients.
pub fn factorization_rhs(pair: &UpperTriangularPair, k: usize) -> Result<TruncatedMultiAnalytic> {
    if k == 0 {
        return Err(Error::InvalidArgument("truncation k must be at least 1".into()));
    }
    let du = defect_unitaries(pair)?;
    rhs_from(pair, &du, k)
}

#[derive(Debug, Clone)]
pub struct FactorizationCertificate {
    pub k: usize,
    pub tolerance: f64,
    pub lhs: TruncatedMultiAnalytic,
    pub rhs: TruncatedMultiAnalytic,
    /// `‖lhs − rhs‖` on the truncation.
    pub residual: f64,
    pub unitaries: DefectUnitaries,
    pub pass: bool,
}

impl FactorizationCertificate {
    pub fn j_unitarity(&self) -> f64 {
        self.unitaries.julia_halmos.unitarity_residual
    }
}

pub fn verify_factorization(pair: &UpperTriangularPair, k: usize, tol: f64) -> Result<FactorizationCertificate> {
    verify_factorization_against(pair, pair, k, tol)
}

/// Compares `Θ_T` for `T` assembled from `source` with the product built
/// from `model`'s `A`, `B` and `L`. With `source == model` this is
/// [`verify_factorization`]; with a different coupling in `model` it is a
/// negative control.
pub fn verify_factorization_against(
    source: &UpperTriangularPair,
    model: &UpperTriangularPair,
    k: usize,
    tol: f64,
) -> Result<FactorizationCertificate> {
    if k == 0 {
        return Err(Error::InvalidArgument("truncation k must be at least 1".into()));
    }
    let du = defect_unitaries(model)?;
    let lhs = if std::ptr::eq(source, model) {
        char_fun(&CharFunInput {
            t: du.t.clone(),
            defects: du.defects_t.clone(),
            k,
        })?
    } else {
        char_fun(&CharFunInput::new(source.assemble(), k, source.tol())?)?
    };
    let rhs = rhs_from(model, &du, k)?;
    if lhs.assembled().shape() != rhs.assembled().shape() {
        return Err(Error::DimensionMismatch(format!(
            "Θ_T is {:?} but the product is {:?}",
            lhs.assembled().shape(),
            rhs.assembled().shape()
        )));
    }
    let residual = matkit::operator_norm(&(lhs.assembled() - rhs.assembled()));
    Ok(FactorizationCertificate {
        k,
        tolerance: tol,
        lhs,
        rhs,
        residual,
        unitaries: du,
        pass: residual <= tol,
    })
}

/// The blocks of `w* = [[L, M], [N, K]]` for `w : 𝒟_{A*} ⊕ F → 𝒟_B ⊕ F_*`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryBlocks {
    pub l: ComplexMatrix,
    pub m: ComplexMatrix,
    pub n: ComplexMatrix,
    pub k: ComplexMatrix,
}

/// Splits `w*` with `dim 𝒟_{A*} = p` and `dim 𝒟_B = q`.
pub fn decompose_w(w: &ComplexMatrix, p: usize, q: usize) -> Result<UnitaryBlocks> {
    if p > w.ncols() || q > w.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "a {}x{} unitary cannot start with {q}x{p}",
            w.nrows(),
            w.ncols()
        )));
    }
    let residual = matkit::unitarity_residual(w);
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let ws = w.adjoint();
    let (f, f_star) = (w.ncols() - p, w.nrows() - q);
    Ok(UnitaryBlocks {
        l: ws.view((0, 0), (p, q)).into_owned(),
        m: ws.view((0, q), (p, f_star)).into_owned(),
        n: ws.view((p, 0), (f, q)).into_owned(),
        k: ws.view((p, q), (f, f_star)).into_owned(),
    })
}

/// Everything produced by [`converse_build`].
#[derive(Debug, Clone)]
pub struct ConverseCertificate {
    pub k: usize,
    pub blocks: UnitaryBlocks,
    pub pair: UpperTriangularPair,
    pub t_hat: RowOperator,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    pub u_unitarity: f64,
    pub v_unitarity: f64,
    /// `max(‖N*N − D_L²‖, ‖M M* − D_{L*}²‖)`.
    pub well_defined_residual: f64,
    /// `‖V K* U* + L|_{𝒟_L}‖`.
    pub k1_residual: f64,
    pub coincidence_residual: f64,
    pub vacuum_norm: f64,
    pub fprime_dim: usize,
    pub fstarprime_dim: usize,
    pub unitaries: DefectUnitaries,
}

/// Count of singular values above `cutoff * max(1, σ_max)`.
fn absolute_rank(m: &ComplexMatrix, tol: RankTolerance) -> usize {
    let sv = matkit::singular_values(m);
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
    sv.iter().filter(|&&s| s > tol.relative_cutoff * scale).count()
}

/// From row contractions `A`, `B` and a unitary
/// `w : 𝒟_{A*} ⊕ F → 𝒟_B ⊕ F_*` builds
/// `Θ = [[Θ_B, 0], [0, I]] (I ⊗ w) [[Θ_A, 0], [0, I]]`, reads `L` off `w*`,
/// and certifies that `Θ` coincides with `Θ_T̂` for
/// `T̂ = [[A, D_{A*} L D_B], [0, B]]`.
///
/// Fails with `NotPurelyContractive` when `Θ` has a unit vacuum singular
/// value or when `N` (resp. `M*`) does not reach all of `F` (resp. `F_*`).
pub fn converse_build(
    a: &RowOperator,
    b: &RowOperator,
    w: &ComplexMatrix,
    f_dim: usize,
    fstar_dim: usize,
    k: usize,
    tol: RankTolerance,
) -> Result<ConverseCertificate> {
    if k == 0 {
        return Err(Error::InvalidArgument("truncation k must be at least 1".into()));
    }
    let da = defects(a, tol)?;
    let db = defects(b, tol)?;
    let (p, q) = (da.rank_left(), db.rank_right());
    if w.shape() != (q + fstar_dim, p + f_dim) {
        return Err(Error::DimensionMismatch(format!(
            "w must be {}x{} (𝒟_B ⊕ F_* by 𝒟_A* ⊕ F), got {:?}",
            q + fstar_dim,
            p + f_dim,
            w.shape()
        )));
    }
    let blocks = decompose_w(w, p, q)?;

    let theta_a = char_fun(&CharFunInput {
        t: a.clone(),
        defects: da.clone(),
        k,
    })?;
    let theta_b = char_fun(&CharFunInput {
        t: b.clone(),
        defects: db.clone(),
        k,
    })?;
    let basis: FockBasis = theta_a.basis().clone();
    let theta = pad_with_identity(&theta_b, fstar_dim)?
        .compose(&TruncatedMultiAnalytic::constant(basis.clone(), w))?
        .compose(&pad_with_identity(&theta_a, f_dim)?)?;

    let vacuum_norm = matkit::operator_norm(&theta.coeffs()[0]);
    let fprime_dim = f_dim - absolute_rank(&blocks.n, tol);
    let fstarprime_dim = fstar_dim - absolute_rank(&blocks.m.adjoint(), tol);
    if fprime_dim > 0 || fstarprime_dim > 0 || vacuum_norm >= 1.0 - 1e-10 {
        return Err(Error::NotPurelyContractive {
            vacuum_norm,
            fprime_dim,
            fstarprime_dim,
        });
    }

    let pair = UpperTriangularPair::new(a.clone(), b.clone(), blocks.l.clone(), tol)?;
    let du = defect_unitaries(&pair)?;
    let jh = &du.julia_halmos;
    if jh.rank_l() != f_dim {
        return Err(Error::RankDeficiency {
            expected: f_dim,
            got: jh.rank_l(),
        });
    }
    if jh.rank_l_star() != fstar_dim {
        return Err(Error::RankDeficiency {
            expected: fstar_dim,
            got: jh.rank_l_star(),
        });
    }

    let u = matkit::chain(&[&jh.v_l.adjoint(), &jh.d_l, &matkit::pinv(&blocks.n, tol)]);
    let v = matkit::chain(&[
        &jh.v_l_star.adjoint(),
        &jh.d_l_star,
        &matkit::pinv(&blocks.m.adjoint(), tol),
    ]);
    let u_unitarity = matkit::unitarity_residual(&u);
    let v_unitarity = matkit::unitarity_residual(&v);
    let well_defined_residual =
        matkit::operator_norm(&(matmul(&blocks.n.adjoint(), &blocks.n) - matmul(&jh.d_l, &jh.d_l))).max(
            matkit::operator_norm(&(matmul(&blocks.m, &blocks.m.adjoint()) - matmul(&jh.d_l_star, &jh.d_l_star))),
        );
    let k1 = matkit::chain(&[&v, &blocks.k.adjoint(), &u.adjoint()]);
    let minus_l = -matkit::chain(&[&jh.v_l_star.adjoint(), &blocks.l, &jh.v_l]);
    let k1_residual = matkit::operator_norm(&(k1 - minus_l));

    let u_prime = matkit::block_diag(&matkit::identity(da.rank_right()), &u);
    let v_prime = matkit::block_diag(&matkit::identity(db.rank_left()), &v);
    let dim = basis.dim();
    let lhs = fock::kron_identity_left(dim, &v_prime, theta.assembled());
    let lhs = fock::kron_identity_right(dim, &lhs, &u_prime.adjoint());
    let theta_hat = char_fun(&CharFunInput {
        t: du.t.clone(),
        defects: du.defects_t.clone(),
        k,
    })?;
    let rhs = fock::kron_identity_left(dim, &du.sigma_star, theta_hat.assembled());
    let rhs = fock::kron_identity_right(dim, &rhs, &du.sigma.adjoint());
    let coincidence_residual = matkit::operator_norm(&(lhs - rhs));

    Ok(ConverseCertificate {
        k,
        t_hat: du.t.clone(),
        blocks,
        pair,
        u,
        v,
        u_unitarity,
        v_unitarity,
        well_defined_residual,
        k1_residual,
        coincidence_residual,
        vacuum_norm,
        fprime_dim,
        fstarprime_dim,
        unitaries: du,
    })
}

/// `‖(I ⊗ W_*) M − M′ (I ⊗ W)‖` for unitaries `W : E → E′`, `W_* : E_* → E′_*`.
pub fn verify_coincidence(
    m: &TruncatedMultiAnalytic,
    m_prime: &TruncatedMultiAnalytic,
    w: &ComplexMatrix,
    w_star: &ComplexMatrix,
    tol: f64,
) -> Result<f64> {
    for u in [w, w_star] {
        let residual = matkit::unitarity_residual(u);
        if residual > tol {
            return Err(Error::NotUnitary { residual });
        }
    }
    if m.basis() != m_prime.basis()
        || w.shape() != (m_prime.dom_dim(), m.dom_dim())
        || w_star.shape() != (m_prime.cod_dim(), m.cod_dim())
    {
        return Err(Error::DimensionMismatch(
            "operators and unitaries do not line up".into(),
        ));
    }
    let dim = m.basis().dim();
    let lhs = fock::kron_identity_left(dim, w_star, m.assembled());
    let rhs = fock::kron_identity_right(dim, m_prime.assembled(), w);
    Ok(matkit::operator_norm(&(lhs - rhs)))
}
