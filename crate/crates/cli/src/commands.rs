//! One function per subcommand. Each returns the certificate it produced
//! and a human-readable report.

use std::fmt::Write as _;

use charfact::charfun::{char_fun, verify_lemma_identities, CharFunInput};
use charfact::constrained::{
    invariance_residual, sample_points, verify_constrained_factorization, BallPoint, SeriesComparison, Spread,
    COMMUTING_TOL,
};
use charfact::factorize::{
    converse_build, verify_factorization, verify_factorization_against, FactorizationCertificate, IDENTITY_TOL,
    UNITARY_TOL,
};
use charfact::rowcon::{defects, extract_l, split_upper_triangular, CONTRACTION_SLACK, EXTRACT_TOL};
use charfact::{matkit, Error, RankTolerance, UpperTriangularPair};

use crate::certificate::{coefficient_map, Certificate};
use crate::instance::{InputError, Instance};
use crate::CliError;

pub const LEMMA_TOL: f64 = 1e-10;
pub const ROUND_TRIP_TOL: f64 = 1e-12;
pub const NORM_SLACK: f64 = 1e-10;
pub const K1_TOL: f64 = 1e-9;
pub const SERIES_SLACK: f64 = 1e-10;
pub const INVARIANCE_TOL: f64 = 1e-10;
/// Largest admissible vacuum singular value of a purely contractive symbol.
pub const VACUUM_BOUND: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub k: usize,
    pub tol: f64,
    pub rank_tol: RankTolerance,
    pub seed: Option<u64>,
}

pub type Outcome = Result<(Certificate, String), CliError>;

fn pair_of(inst: &Instance, tol: RankTolerance) -> Result<Option<UpperTriangularPair>, CliError> {
    match (&inst.a, &inst.b, &inst.l) {
        (Some(a), Some(b), Some(l)) => {
            // `[]` cannot carry a shape like 0 x m, so it means the zero map
            let l = if l.is_empty() {
                let rows = defects(a, tol)?.rank_left();
                let cols = defects(b, tol)?.rank_right();
                charfact::ComplexMatrix::zeros(rows, cols)
            } else {
                l.clone()
            };
            Ok(Some(UpperTriangularPair::new(a.clone(), b.clone(), l, tol)?))
        }
        _ => Ok(None),
    }
}

fn require_pair(inst: &Instance, tol: RankTolerance) -> Result<UpperTriangularPair, CliError> {
    pair_of(inst, tol)?.ok_or_else(|| InputError("instance needs \"A\", \"B\" and \"L\"".into()).into())
}

pub fn check(inst: &Instance, s: &Settings) -> Outcome {
    let pair = if inst.t.is_none() {
        pair_of(inst, s.rank_tol)?
    } else {
        None
    };
    let t = inst.tuple(pair.as_ref())?;
    let norm = t.row_norm();
    let commutator = t.max_commutator_norm();
    let mut cert = Certificate::new("2.1").with_seed(s.seed);
    cert.check("row_norm_excess", (norm * norm - 1.0).max(0.0), CONTRACTION_SLACK);
    cert.dim("n", t.n());
    cert.dim("h", t.dim_out());
    let mut text = String::new();
    writeln!(text, "n {} dim {}", t.n(), t.dim_out()).unwrap();
    writeln!(text, "row norm {norm:.15}").unwrap();
    writeln!(text, "max commutator norm {commutator:.3e}").unwrap();
    if cert.pass() {
        let d = defects(&t, s.rank_tol)?;
        cert.dim("defect", d.rank_right());
        cert.dim("defect_star", d.rank_left());
        writeln!(text, "row contraction: yes").unwrap();
        writeln!(text, "defect ranks: D_T {}, D_T* {}", d.rank_right(), d.rank_left()).unwrap();
        if let Some(p) = &pair {
            let (a, b, x) = split_upper_triangular(&t, p.a().dim_out(), 0.0)?;
            let l = extract_l(&a, &b, &x, s.rank_tol)?;
            cert.check("coupling_round_trip", matkit::operator_norm(&(l - p.l())), EXTRACT_TOL);
        }
    } else {
        writeln!(text, "row contraction: no").unwrap();
    }
    writeln!(
        text,
        "commuting: {}",
        if commutator <= COMMUTING_TOL { "yes" } else { "no" }
    )
    .unwrap();
    Ok((cert, text))
}

pub fn charfun(inst: &Instance, s: &Settings) -> Outcome {
    let pair = pair_of(inst, s.rank_tol)?;
    let t = inst.tuple(pair.as_ref())?;
    let input = CharFunInput::new(t, s.k, s.rank_tol)?;
    let theta = char_fun(&input)?;
    let (first, second) = verify_lemma_identities(&input)?;
    let vacuum = matkit::operator_norm(&theta.coeffs()[0]);
    let mut cert = Certificate::new("3.1").with_k(s.k).with_seed(s.seed);
    cert.check("lemma_first", first, LEMMA_TOL);
    cert.check("lemma_second", second, LEMMA_TOL);
    cert.check("coefficient_round_trip", theta.round_trip_residual(), ROUND_TRIP_TOL);
    cert.check("theta_norm_excess", (theta.norm() - 1.0).max(0.0), NORM_SLACK);
    cert.check("vacuum_norm", vacuum, VACUUM_BOUND);
    cert.dim("defect", theta.dom_dim());
    cert.dim("defect_star", theta.cod_dim());
    cert.dim("fock", theta.basis().dim());
    if theta.dom_dim() == 0 || theta.cod_dim() == 0 {
        cert.note("trivial defect");
        cert.coefficients = Some(Default::default());
    } else {
        cert.coefficients = Some(coefficient_map(&theta));
    }
    let mut text = format!(
        "characteristic function: {} -> {} on {} words (k = {})\n",
        theta.dom_dim(),
        theta.cod_dim(),
        theta.basis().dim(),
        s.k
    );
    if theta.dom_dim() > 0 && theta.cod_dim() > 0 {
        for (w, c) in theta.basis().words().iter().zip(theta.coeffs()).take(32) {
            let label = if w.is_empty() { "∅".to_owned() } else { w.to_string() };
            writeln!(text, "  theta[{label}] = {}", format_matrix(c)).unwrap();
        }
    }
    Ok((cert, text))
}

fn format_matrix(m: &charfact::ComplexMatrix) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let row: Vec<String> = (0..m.ncols())
                .map(|j| {
                    let z = m[(i, j)];
                    if z.im == 0.0 {
                        format!("{:.6}", z.re)
                    } else {
                        format!("{:.6}{:+.6}i", z.re, z.im)
                    }
                })
                .collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn factorization_certificate(fc: &FactorizationCertificate, tol: f64, seed: Option<u64>) -> Certificate {
    let du = &fc.unitaries;
    let mut cert = Certificate::new("3.2").with_k(fc.k).with_seed(seed);
    cert.check("factorization", fc.residual, tol);
    cert.check("julia_halmos_unitarity", fc.j_unitarity(), UNITARY_TOL);
    cert.check("sigma_unitarity", du.sigma_unitarity, UNITARY_TOL);
    cert.check("sigma_star_unitarity", du.sigma_star_unitarity, UNITARY_TOL);
    cert.check("sigma_identity", du.sigma_identity, IDENTITY_TOL);
    cert.check("sigma_star_identity", du.sigma_star_identity, IDENTITY_TOL);
    cert.check("theta_norm_excess", (fc.lhs.norm() - 1.0).max(0.0), NORM_SLACK);
    cert.check("vacuum_norm", matkit::operator_norm(&fc.lhs.coeffs()[0]), VACUUM_BOUND);
    let jh = &du.julia_halmos;
    let dims = [
        ("defect_t", du.defects_t.rank_right()),
        ("defect_t_star", du.defects_t.rank_left()),
        ("defect_l", jh.rank_l()),
        ("defect_l_star", jh.rank_l_star()),
    ];
    for (name, d) in dims {
        cert.dim(name, d);
        if d == 0 {
            cert.note(format!("{name} is zero-dimensional"));
        }
    }
    cert
}

pub fn factorize(inst: &Instance, s: &Settings) -> Outcome {
    let model = require_pair(inst, s.rank_tol)?;
    let fc = match &inst.t {
        None => verify_factorization(&model, s.k, s.tol)?,
        Some(t) => {
            let (a, b, x) = split_upper_triangular(t, model.a().dim_out(), 0.0)?;
            let l = extract_l(&a, &b, &x, s.rank_tol)?;
            let source = UpperTriangularPair::new(a, b, l, s.rank_tol)?;
            verify_factorization_against(&source, &model, s.k, s.tol)?
        }
    };
    let mut cert = factorization_certificate(&fc, s.tol, s.seed);
    for (name, d) in [
        ("defect_a", model.defects_a().rank_right()),
        ("defect_a_star", model.defects_a().rank_left()),
        ("defect_b", model.defects_b().rank_right()),
        ("defect_b_star", model.defects_b().rank_left()),
    ] {
        cert.dim(name, d);
        if d == 0 {
            cert.note(format!("{name} is zero-dimensional"));
        }
    }
    if inst.t.is_some() {
        cert.note("theta_T of the given T compared with the product built from the given L");
    }
    let text = format!(
        "factorization residual {:.3e} (tolerance {:.1e}), J unitarity {:.3e}, sigma {:.3e} / {:.3e}\n",
        fc.residual,
        s.tol,
        fc.j_unitarity(),
        fc.unitaries.sigma_unitarity,
        fc.unitaries.sigma_star_unitarity
    );
    Ok((cert, text))
}

pub fn converse(inst: &Instance, s: &Settings) -> Outcome {
    let (a, b) = inst.components()?;
    let w = inst
        .w
        .as_ref()
        .ok_or_else(|| InputError("instance needs \"w\"".into()))?;
    let p = defects(a, s.rank_tol)?.rank_left();
    let q = defects(b, s.rank_tol)?.rank_right();
    let (f, fstar) = match (inst.f_dim, inst.fstar_dim) {
        (Some(f), Some(fs)) => (f, fs),
        (None, None) if w.nrows() == p + q && w.ncols() == p + q => (q, p),
        _ => {
            return Err(InputError(
                "give both spaces.f and spaces.fstar, or a square w of size dim D_A* + dim D_B".into(),
            )
            .into())
        }
    };
    let mut cert = Certificate::new("3.3").with_k(s.k).with_seed(s.seed);
    cert.dim("f", f);
    cert.dim("fstar", fstar);
    match converse_build(a, b, w, f, fstar, s.k, s.rank_tol) {
        Ok(c) => {
            cert.check("coincidence", c.coincidence_residual, s.tol);
            cert.check("k1", c.k1_residual, K1_TOL);
            cert.check("well_defined", c.well_defined_residual, LEMMA_TOL);
            cert.check("u_unitarity", c.u_unitarity, UNITARY_TOL);
            cert.check("v_unitarity", c.v_unitarity, UNITARY_TOL);
            cert.check("vacuum_norm", c.vacuum_norm, VACUUM_BOUND);
            cert.dim("fprime", c.fprime_dim);
            cert.dim("fstarprime", c.fstarprime_dim);
            let text = format!(
                "coincidence residual {:.3e}, K1 residual {:.3e}, F' dim {}, F*' dim {}\n",
                c.coincidence_residual, c.k1_residual, c.fprime_dim, c.fstarprime_dim
            );
            Ok((cert, text))
        }
        Err(Error::NotPurelyContractive {
            vacuum_norm,
            fprime_dim,
            fstarprime_dim,
        }) => {
            cert.check("fprime_dim", fprime_dim as f64, 0.0);
            cert.check("fstarprime_dim", fstarprime_dim as f64, 0.0);
            cert.check("vacuum_norm", vacuum_norm, VACUUM_BOUND);
            cert.dim("fprime", fprime_dim);
            cert.dim("fstarprime", fstarprime_dim);
            cert.note("not purely contractive: construction aborted");
            let text = format!(
                "not purely contractive: F' dim {fprime_dim}, F*' dim {fstarprime_dim}, vacuum norm {vacuum_norm:.17}\n"
            );
            Ok((cert, text))
        }
        Err(e) => Err(e.into()),
    }
}

/// Where constrained sample points come from.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSource {
    Grid { count: usize, radius: f64 },
    Given(Vec<BallPoint>),
}

pub fn constrained(inst: &Instance, points: &PointSource, s: &Settings) -> Outcome {
    let pair = pair_of(inst, s.rank_tol)?;
    let t = inst.tuple(pair.as_ref())?;
    let commutator = t.max_commutator_norm();
    if commutator > COMMUTING_TOL {
        return Err(Error::NotCommuting {
            commutator_norm: commutator,
        }
        .into());
    }
    let n = t.n();
    let (factor_points, series_points) = match points {
        PointSource::Grid { count, radius } => (
            sample_points(n, *count, *radius, Spread::Euclidean)?,
            sample_points(n, *count, 0.5, Spread::L1)?,
        ),
        PointSource::Given(p) => {
            if let Some(bad) = p.iter().find(|z| z.n() != n) {
                return Err(InputError(format!("sample point has {} coordinates, n = {n}", bad.n())).into());
            }
            (p.clone(), p.iter().filter(|z| z.l1_norm() <= 0.5).cloned().collect())
        }
    };
    let mut cert = Certificate::new("4.x").with_k(s.k).with_seed(s.seed);
    let mut text = String::new();
    if let Some(pair) = &pair {
        let fc = verify_constrained_factorization(pair, &factor_points, s.tol)?;
        cert.check("pointwise_factorization", fc.max_residual, s.tol);
        let diagonal = pair.a().max_commutator_norm().max(pair.b().max_commutator_norm());
        cert.check("diagonal_commutator", diagonal, COMMUTING_TOL);
        writeln!(
            text,
            "pointwise factorization max residual {:.3e} over {} points",
            fc.max_residual,
            factor_points.len()
        )
        .unwrap();
    } else {
        cert.note("no A, B, L given: pointwise factorization skipped");
    }
    let comparison = SeriesComparison::new(&t, s.k, s.rank_tol)?;
    let mut series: f64 = 0.0;
    for z in &series_points {
        series = series.max(comparison.residual(z)?);
    }
    cert.check("series_vs_point", series, 0.5f64.powi(s.k as i32) + SERIES_SLACK);
    let invariance = invariance_residual(comparison.theta())?;
    cert.check("invariance", invariance, INVARIANCE_TOL);
    cert.dim("points", factor_points.len());
    cert.dim("series_points", series_points.len());
    if series_points.is_empty() {
        cert.note("no sample point satisfies sum |z_i| <= 1/2: series comparison skipped");
    }
    writeln!(
        text,
        "series vs point max residual {series:.3e} over {} points",
        series_points.len()
    )
    .unwrap();
    writeln!(text, "invariance residual {invariance:.3e}").unwrap();
    Ok((cert, text))
}
