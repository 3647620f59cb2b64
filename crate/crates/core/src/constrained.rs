//! The commutative case: symmetric Fock space and functions on the ball.
//!
//! For a commuting row contraction the characteristic function compresses
//! to the symmetric Fock space `Γ_s`, spanned by the symmetrizations of the
//! `e_α`, and becomes the operator-valued function on the unit ball `𝔹ⁿ`
//!
//! ```text
//! θ_T(z) = -T + D_{T*} (I - Σ z_i T_i*)^{-1} Z D_T,   Z = (z_1 I, ..., z_n I)
//! ```
//!
//! whose Taylor coefficients are the symbol coefficients summed over words
//! of equal multidegree.

use num_complex::Complex64;

use crate::charfun::{char_fun, CharFunInput, TruncatedMultiAnalytic};
use crate::error::{Error, Result};
use crate::factorize::defect_unitaries;
use crate::fock::FockBasis;
use crate::matkit::{self, c64, matmul, ComplexMatrix, RankTolerance};
use crate::rowcon::{self, defects, DefectData, RowOperator, UpperTriangularPair, CONTRACTION_SLACK};

/// Commutator norm accepted as commuting.
pub const COMMUTING_TOL: f64 = 1e-10;

/// Orthonormal basis of `Γ_s ∩ Γ_{≤k}` inside `Γ_{≤k}`.
///
/// Column `c` is `count^{-1/2} Σ e_α` over the words `α` of multidegree
/// `multidegrees[c]`; columns follow the first occurrence of each
/// multidegree in the Fock ordering.
#[derive(Debug, Clone)]
pub struct SymmetricBasis {
    pub basis: FockBasis,
    pub multidegrees: Vec<Vec<usize>>,
    pub isometry: ComplexMatrix,
}

impl SymmetricBasis {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let basis = FockBasis::new(n, k)?;
        let mut multidegrees: Vec<Vec<usize>> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (i, w) in basis.words().iter().enumerate() {
            let md = w.multidegree(n);
            match multidegrees.iter().position(|m| *m == md) {
                Some(c) => members[c].push(i),
                None => {
                    multidegrees.push(md);
                    members.push(vec![i]);
                }
            }
        }
        let mut isometry = ComplexMatrix::zeros(basis.dim(), multidegrees.len());
        for (c, rows) in members.iter().enumerate() {
            let weight = c64(1.0 / (rows.len() as f64).sqrt(), 0.0);
            for &r in rows {
                isometry[(r, c)] = weight;
            }
        }
        Ok(Self {
            basis,
            multidegrees,
            isometry,
        })
    }

    pub fn dim(&self) -> usize {
        self.multidegrees.len()
    }

    /// `S ⊗ I_E`.
    pub fn tensor_isometry(&self, e_dim: usize) -> ComplexMatrix {
        matkit::kron(&self.isometry, &matkit::identity(e_dim))
    }

    /// `S S* ⊗ I_E`.
    pub fn tensor_projection(&self, e_dim: usize) -> ComplexMatrix {
        let s = self.tensor_isometry(e_dim);
        matmul(&s, &s.adjoint())
    }
}

/// A point of the open unit ball in `Cⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    z: Vec<Complex64>,
}

impl BallPoint {
    pub fn new(z: Vec<Complex64>) -> Result<Self> {
        let norm = euclidean(&z);
        if norm >= 1.0 {
            return Err(Error::OutsideBall { norm });
        }
        Ok(Self { z })
    }

    pub fn origin(n: usize) -> Self {
        Self {
            z: vec![c64(0.0, 0.0); n],
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.z
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn norm(&self) -> f64 {
        euclidean(&self.z)
    }

    pub fn l1_norm(&self) -> f64 {
        self.z.iter().map(|c| c.norm()).sum()
    }
}

fn euclidean(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn require_commuting(t: &RowOperator) -> Result<()> {
    if t.dim_in() != t.dim_out() {
        return Err(Error::DimensionMismatch("commuting tuples act on one space".into()));
    }
    let commutator_norm = t.max_commutator_norm();
    if commutator_norm > COMMUTING_TOL {
        return Err(Error::NotCommuting { commutator_norm });
    }
    Ok(())
}

/// Evaluates `θ_T` at points of the ball for a fixed commuting `T`.
#[derive(Debug, Clone)]
pub struct PointEvaluator {
    t: RowOperator,
    defects: DefectData,
}

impl PointEvaluator {
    pub fn new(t: RowOperator, tol: RankTolerance) -> Result<Self> {
        let defects = defects(&t, tol)?;
        Self::with_defects(t, defects)
    }

    /// Uses the given defect bases, so values are in the same coordinates
    /// as other objects built from them.
    pub fn with_defects(t: RowOperator, defects: DefectData) -> Result<Self> {
        require_commuting(&t)?;
        let norm = t.row_norm();
        if norm * norm > 1.0 + CONTRACTION_SLACK {
            return Err(Error::NotAContraction { norm });
        }
        Ok(Self { t, defects })
    }

    pub fn defects(&self) -> &DefectData {
        &self.defects
    }

    pub fn at(&self, z: &BallPoint) -> Result<ComplexMatrix> {
        let (n, h) = (self.t.n(), self.t.dim_out());
        if z.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, tuple has n = {n}",
                z.n()
            )));
        }
        let mut pencil = matkit::identity(h);
        let mut zrow = ComplexMatrix::zeros(h, n * h);
        for (j, (&zj, tj)) in z.coords().iter().zip(self.t.blocks()).enumerate() {
            pencil -= tj.adjoint() * zj;
            zrow.view_mut((0, j * h), (h, h)).copy_from(&(matkit::identity(h) * zj));
        }
        let d = &self.defects;
        let resolvent = matkit::inverse(&pencil)?;
        let value = matkit::chain(&[&d.d_left, &resolvent, &zrow, &d.d_right]) - self.t.row_matrix();
        Ok(matkit::chain(&[&d.v_left.adjoint(), &value, &d.v_right]))
    }
}

/// `θ_T(z)` in defect coordinates.
pub fn theta_point(t: &RowOperator, z: &BallPoint, tol: RankTolerance) -> Result<ComplexMatrix> {
    PointEvaluator::new(t.clone(), tol)?.at(z)
}

/// `Σ_{|α| ≤ k} z^α θ_α`.
pub fn series_value(theta: &TruncatedMultiAnalytic, z: &BallPoint) -> Result<ComplexMatrix> {
    let basis = theta.basis();
    if z.n() != basis.n() {
        return Err(Error::DimensionMismatch("point and symbol disagree on n".into()));
    }
    let mut sum = ComplexMatrix::zeros(theta.cod_dim(), theta.dom_dim());
    for (w, c) in basis.words().iter().zip(theta.coeffs()) {
        let monomial: Complex64 = w.letters().iter().map(|&l| z.coords()[l - 1]).product();
        sum += c * monomial;
    }
    Ok(sum)
}

/// `θ_T` both as a point evaluator and as its truncated symbol, in one
/// set of defect coordinates.
#[derive(Debug, Clone)]
pub struct SeriesComparison {
    eval: PointEvaluator,
    theta: TruncatedMultiAnalytic,
}

impl SeriesComparison {
    pub fn new(t: &RowOperator, k: usize, tol: RankTolerance) -> Result<Self> {
        let eval = PointEvaluator::new(t.clone(), tol)?;
        let theta = char_fun(&CharFunInput {
            t: t.clone(),
            defects: eval.defects().clone(),
            k,
        })?;
        Ok(Self { eval, theta })
    }

    pub fn theta(&self) -> &TruncatedMultiAnalytic {
        &self.theta
    }

    /// `‖θ_T(z) − Σ_{|α| ≤ k} z^α θ_α‖`, at most `2^{-k}` when `Σ|z_i| ≤ 1/2`.
    pub fn residual(&self, z: &BallPoint) -> Result<f64> {
        let l1_norm = z.l1_norm();
        if l1_norm > 0.5 {
            return Err(Error::SamplingRestriction { l1_norm });
        }
        let point = self.eval.at(z)?;
        Ok(matkit::operator_norm(&(point - series_value(&self.theta, z)?)))
    }
}

/// [`SeriesComparison::residual`] for a single point.
pub fn series_vs_point(t: &RowOperator, z: &BallPoint, k: usize, tol: RankTolerance) -> Result<f64> {
    let l1_norm = z.l1_norm();
    if l1_norm > 0.5 {
        return Err(Error::SamplingRestriction { l1_norm });
    }
    SeriesComparison::new(t, k, tol)?.residual(z)
}

/// `(S ⊗ I)* Θ_T (S ⊗ I)` on the symmetric truncation.
pub fn constrained_char_fun(t: &RowOperator, k: usize, tol: RankTolerance) -> Result<ComplexMatrix> {
    require_commuting(t)?;
    let theta = char_fun(&CharFunInput::new(t.clone(), k, tol)?)?;
    let sym = SymmetricBasis::new(t.n(), k)?;
    Ok(matkit::chain(&[
        &sym.tensor_isometry(theta.cod_dim()).adjoint(),
        theta.assembled(),
        &sym.tensor_isometry(theta.dom_dim()),
    ]))
}

/// `‖(I − SS* ⊗ I) Θ* (SS* ⊗ I)‖` for any truncated multi-analytic `Θ`.
///
/// The adjoints `R_j*` map symmetric tensors to symmetric tensors, so this
/// vanishes for every multi-analytic operator, commuting or not.
pub fn invariance_residual(theta: &TruncatedMultiAnalytic) -> Result<f64> {
    let sym = SymmetricBasis::new(theta.basis().n(), theta.basis().k())?;
    let s_dom = sym.tensor_isometry(theta.dom_dim());
    let s_cod = sym.tensor_isometry(theta.cod_dim());
    // ‖(I − S S*) X S*‖ = ‖X − S (S* X)‖ for an isometry S
    let image = matmul(&theta.assembled().adjoint(), &s_cod);
    let kept = matmul(&s_dom, &matmul(&s_dom.adjoint(), &image));
    Ok(matkit::operator_norm(&(image - kept)))
}

/// [`invariance_residual`] of `Θ_T` for a commuting `T`.
pub fn verify_invariance(t: &RowOperator, k: usize, tol: RankTolerance) -> Result<f64> {
    require_commuting(t)?;
    invariance_residual(&char_fun(&CharFunInput::new(t.clone(), k, tol)?)?)
}

#[derive(Debug, Clone)]
pub struct ConstrainedCertificate {
    pub points: Vec<BallPoint>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares `θ_T(z)` with
/// `σ_*^{-1} [[θ_B(z), 0], [0, I]] J_L [[θ_A(z), 0], [0, I]] σ` at each point.
pub fn verify_constrained_factorization(
    pair: &UpperTriangularPair,
    points: &[BallPoint],
    tol: f64,
) -> Result<ConstrainedCertificate> {
    let du = defect_unitaries(pair)?;
    let eval_t = PointEvaluator::with_defects(du.t.clone(), du.defects_t.clone())?;
    let eval_a = PointEvaluator::with_defects(pair.a().clone(), pair.defects_a().clone())?;
    let eval_b = PointEvaluator::with_defects(pair.b().clone(), pair.defects_b().clone())?;
    let jh = &du.julia_halmos;
    let pad_l = matkit::identity(jh.rank_l());
    let pad_l_star = matkit::identity(jh.rank_l_star());
    let sigma_star_inv = du.sigma_star.adjoint();
    let residuals = points
        .iter()
        .map(|z| {
            let lhs = eval_t.at(z)?;
            let rhs = matkit::chain(&[
                &sigma_star_inv,
                &matkit::block_diag(&eval_b.at(z)?, &pad_l_star),
                &jh.matrix,
                &matkit::block_diag(&eval_a.at(z)?, &pad_l),
                &du.sigma,
            ]);
            Ok(matkit::operator_norm(&(lhs - rhs)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(ConstrainedCertificate {
        points: points.to_vec(),
        residuals,
        max_residual,
        tolerance: tol,
        pass: max_residual <= tol,
    })
}

/// Basis (as columns of `vec(L)`, column-major) of the couplings
/// `L : 𝒟_B → 𝒟_{A*}` for which `[[A, D_{A*} L D_B], [0, B]]` commutes,
/// given commuting `A` and `B`.
pub fn commuting_couplings(a: &RowOperator, b: &RowOperator, tol: RankTolerance) -> Result<ComplexMatrix> {
    let (da, db) = (defects(a, tol)?, defects(b, tol)?);
    let (p, q) = (da.rank_left(), db.rank_right());
    let (n, d1, d2) = (a.n(), a.dim_out(), b.dim_out());
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let left = matmul(&da.d_left, &da.v_left);
    let right = matmul(&db.v_right.adjoint(), &db.d_right);
    let unknowns = p * q;
    let mut map = ComplexMatrix::zeros(pairs.len() * d1 * d2, unknowns);
    for col in 0..unknowns {
        let mut e = ComplexMatrix::zeros(p, q);
        e[(col % p, col / p)] = c64(1.0, 0.0);
        let x = matkit::chain(&[&left, &e, &right]);
        let block = |j: usize| x.columns(j * d2, d2).into_owned();
        for (slot, &(i, j)) in pairs.iter().enumerate() {
            let c = matmul(a.block(i), &block(j)) + matmul(&block(i), b.block(j))
                - matmul(a.block(j), &block(i))
                - matmul(&block(j), b.block(i));
            for (r, v) in c.iter().enumerate() {
                map[(slot * d1 * d2 + r, col)] = *v;
            }
        }
    }
    if unknowns == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    if map.nrows() == 0 {
        return Ok(matkit::identity(unknowns));
    }
    let (values, vectors) = matkit::hermitian_eigen(&matmul(&map.adjoint(), &map));
    let top = values.iter().copied().fold(0.0, f64::max);
    let cut = 1e-12 * top.max(f64::MIN_POSITIVE);
    let keep: Vec<usize> = (0..unknowns).filter(|&i| values[i] <= cut).collect();
    let mut basis = ComplexMatrix::zeros(unknowns, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        basis.set_column(c, &vectors.column(i));
    }
    Ok(basis)
}

/// A commuting upper-triangular pair: commuting `A` on `C^{d1}` and `B` on
/// `C^{d2}` and a random coupling of norm `strictness` from the commuting
/// couplings (zero when only `L = 0` commutes).
pub fn random_commuting_pair(
    seed: u64,
    n: usize,
    d1: usize,
    d2: usize,
    strictness: f64,
    tol: RankTolerance,
) -> Result<UpperTriangularPair> {
    let base = seed.wrapping_mul(4);
    let a = rowcon::random_commuting_tuple(base.wrapping_add(1), n, d1, strictness);
    let b = rowcon::random_commuting_tuple(base.wrapping_add(2), n, d2, strictness);
    let couplings = commuting_couplings(&a, &b, tol)?;
    let (p, q) = (defects(&a, tol)?.rank_left(), defects(&b, tol)?.rank_right());
    let mut l = ComplexMatrix::zeros(p, q);
    if couplings.ncols() > 0 {
        let mut rng = rowcon::seeded_rng(base.wrapping_add(3));
        let weights = rowcon::complex_gaussian_matrix(&mut rng, couplings.ncols(), 1);
        let v = matmul(&couplings, &weights);
        for (idx, value) in v.iter().enumerate() {
            l[(idx % p, idx / p)] = *value;
        }
        let norm = matkit::operator_norm(&l);
        if norm > 0.0 {
            l *= c64(strictness / norm, 0.0);
        }
    }
    UpperTriangularPair::new(a, b, l, tol)
}

/// How sample points are spread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spread {
    /// `Σ |z_i| ≤ radius`.
    L1,
    /// `‖z‖₂ ≤ radius`.
    Euclidean,
}

const PRIMES: [u64; 30] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

/// Deterministic Halton points: the origin, then `count − 1` points with
/// Halton moduli, angles and radial fraction, scaled into the ball of
/// `radius` for the chosen norm.
pub fn sample_points(n: usize, count: usize, radius: f64, spread: Spread) -> Result<Vec<BallPoint>> {
    if n == 0 || 2 * n + 1 > PRIMES.len() {
        return Err(Error::InvalidArgument(format!(
            "sample points support 1 <= n <= {}",
            (PRIMES.len() - 1) / 2
        )));
    }
    if !(0.0..1.0).contains(&radius) {
        return Err(Error::OutsideBall { norm: radius });
    }
    (0..count)
        .map(|i| {
            if i == 0 {
                return Ok(BallPoint::origin(n));
            }
            let h = i as u64;
            let mut moduli: Vec<f64> = (0..n).map(|j| radical_inverse(h, PRIMES[j]) + 0.05).collect();
            let size = match spread {
                Spread::L1 => moduli.iter().sum::<f64>(),
                Spread::Euclidean => moduli.iter().map(|m| m * m).sum::<f64>().sqrt(),
            };
            let scale = radius * radical_inverse(h, PRIMES[2 * n]).max(0.05) / size;
            moduli.iter_mut().for_each(|m| *m *= scale);
            let z = moduli
                .iter()
                .enumerate()
                .map(|(j, &m)| Complex64::from_polar(m, 2.0 * std::f64::consts::PI * radical_inverse(h, PRIMES[n + j])))
                .collect();
            BallPoint::new(z)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::real_matrix;

    fn scalar(v: f64) -> RowOperator {
        RowOperator::single(real_matrix(1, 1, &[v]))
    }

    fn point(z: &[f64]) -> BallPoint {
        BallPoint::new(z.iter().map(|&x| c64(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn symmetric_basis_shape() {
        let s = SymmetricBasis::new(2, 3).unwrap();
        assert_eq!(s.dim(), 10);
        assert!(matkit::isometry_residual(&s.isometry) < 1e-14);
        let s = SymmetricBasis::new(1, 4).unwrap();
        assert_eq!(s.isometry, matkit::identity(5));
        assert_eq!(SymmetricBasis::new(3, 2).unwrap().dim(), 10);
    }

    #[test]
    fn theta_point_examples() {
        let tol = RankTolerance::default();
        let a = 0.4;
        for zr in [0.0, 0.3, -0.7] {
            let got = theta_point(&scalar(a), &point(&[zr]), tol).unwrap()[(0, 0)];
            let want = (zr - a) / (1.0 - a * zr);
            assert!((got - c64(want, 0.0)).norm() < 1e-14);
        }
        let z = BallPoint::new(vec![c64(0.1, 0.5)]).unwrap();
        let got = theta_point(&scalar(a), &z, tol).unwrap()[(0, 0)];
        let want = (z.coords()[0] - a) / (1.0 - a * z.coords()[0]);
        assert!((got - want).norm() < 1e-14);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let t = RowOperator::new(vec![real_matrix(1, 1, &[h]), real_matrix(1, 1, &[h])]).unwrap();
        let v = theta_point(&t, &point(&[0.1, 0.2]), tol).unwrap();
        assert_eq!(v.shape(), (0, 1));
    }

    #[test]
    fn theta_point_errors() {
        let tol = RankTolerance::default();
        let nc = RowOperator::new(vec![
            real_matrix(2, 2, &[0.0, 0.5, 0.0, 0.0]),
            real_matrix(2, 2, &[0.0, 0.0, 0.5, 0.0]),
        ])
        .unwrap();
        assert!(matches!(
            theta_point(&nc, &point(&[0.1, 0.1]), tol),
            Err(Error::NotCommuting { .. })
        ));
        assert!(matches!(
            BallPoint::new(vec![c64(0.8, 0.0), c64(0.6, 0.0)]),
            Err(Error::OutsideBall { .. })
        ));
        assert!(matches!(
            series_vs_point(&scalar(0.5), &point(&[0.6]), 4, tol),
            Err(Error::SamplingRestriction { .. })
        ));
    }

    #[test]
    fn origin_gives_vacuum_coefficient() {
        let t = rowcon::random_commuting_tuple(3, 2, 2, 0.9);
        let tol = RankTolerance::default();
        let theta = char_fun(&CharFunInput::new(t.clone(), 2, tol).unwrap()).unwrap();
        let v = theta_point(&t, &BallPoint::origin(2), tol).unwrap();
        assert!(matkit::max_abs(&(v - &theta.coeffs()[0])) < 1e-14);
        assert_eq!(series_vs_point(&t, &BallPoint::origin(2), 3, tol).unwrap(), 0.0);
    }

    #[test]
    fn blaschke_series_tail() {
        let (a, z, k) = (0.5_f64, 0.3_f64, 8);
        let r = series_vs_point(&scalar(a), &point(&[z]), k, RankTolerance::default()).unwrap();
        // tail Σ_{m>k} (1 − a²) a^{m−1} z^m
        let tail: f64 = ((k + 1)..200)
            .map(|m| (1.0 - a * a) * a.powi(m as i32 - 1) * z.powi(m as i32))
            .sum();
        assert!((r - tail).abs() < 1e-14, "{r} vs {tail}");
        assert!(r <= 2f64.powi(-(k as i32)) + 1e-10);
    }

    #[test]
    fn commuting_pair_and_invariance() {
        let tol = RankTolerance::default();
        for seed in 0..4 {
            let pair = random_commuting_pair(seed, 2, 2, 1, 0.9, tol).unwrap();
            let t = pair.assemble();
            assert!(t.is_commuting(1e-10), "seed {seed}: {}", t.max_commutator_norm());
            assert!(matkit::operator_norm(pair.l()) > 0.5);
            assert!(verify_invariance(&t, 3, tol).unwrap() < 1e-10);
            let c = constrained_char_fun(&t, 3, tol).unwrap();
            assert!(matkit::operator_norm(&c) <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn invariance_holds_without_commutativity() {
        let t = RowOperator::new(vec![
            real_matrix(2, 2, &[0.0, 0.5, 0.0, 0.0]),
            real_matrix(2, 2, &[0.0, 0.0, 0.5, 0.0]),
        ])
        .unwrap();
        let tol = RankTolerance::default();
        assert!(matches!(verify_invariance(&t, 3, tol), Err(Error::NotCommuting { .. })));
        let theta = char_fun(&CharFunInput::new(t, 3, tol).unwrap()).unwrap();
        assert!(invariance_residual(&theta).unwrap() < 1e-12);
    }

    #[test]
    fn invariance_matches_projector_form() {
        let basis = FockBasis::new(2, 3).unwrap();
        let (dom, cod) = (2, 1);
        let mut rng = rowcon::seeded_rng(8);
        let m = rowcon::complex_gaussian_matrix(&mut rng, basis.dim() * cod, basis.dim() * dom);
        let theta = TruncatedMultiAnalytic::from_assembled(basis, dom, cod, m.clone()).unwrap();
        let sym = SymmetricBasis::new(2, 3).unwrap();
        let p_dom = sym.tensor_projection(dom);
        let off = matkit::identity(p_dom.nrows()) - p_dom;
        let direct = matkit::operator_norm(&matkit::chain(&[&off, &m.adjoint(), &sym.tensor_projection(cod)]));
        let r = invariance_residual(&theta).unwrap();
        assert!(direct > 1.0);
        assert!((r - direct).abs() <= 1e-12 * direct, "{r} vs {direct}");
    }

    #[test]
    fn scalar_constrained_factorization() {
        let pair = UpperTriangularPair::new(
            scalar(0.0),
            scalar(0.0),
            real_matrix(1, 1, &[0.7]),
            RankTolerance::default(),
        )
        .unwrap();
        let cert = verify_constrained_factorization(&pair, &[point(&[0.4]), BallPoint::origin(1)], 1e-12).unwrap();
        assert!(cert.pass, "{}", cert.max_residual);
    }

    #[test]
    fn sample_points_respect_radius() {
        let pts = sample_points(3, 20, 0.5, Spread::L1).unwrap();
        assert_eq!(pts.len(), 20);
        assert!(pts.iter().all(|p| p.l1_norm() <= 0.5 + 1e-15));
        let pts = sample_points(2, 20, 0.95, Spread::Euclidean).unwrap();
        assert!(pts.iter().all(|p| p.norm() <= 0.95 + 1e-15));
        assert!(pts.iter().skip(1).all(|p| p.norm() > 0.0));
        assert_eq!(pts, sample_points(2, 20, 0.95, Spread::Euclidean).unwrap());
    }

    #[test]
    fn symmetric_compression_for_one_letter_is_identity() {
        let tol = RankTolerance::default();
        let t = scalar(0.3);
        let c = constrained_char_fun(&t, 3, tol).unwrap();
        let full = char_fun(&CharFunInput::new(t, 3, tol).unwrap()).unwrap();
        assert_eq!(&c, full.assembled());
    }
}
