//! Every theorem suite on a list of seeds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use charfact::charfun::{verify_lemma_identities, CharFunInput};
use charfact::constrained::BallPoint;
use charfact::factorize::verify_factorization;
use charfact::rowcon::{extract_l, split_upper_triangular, EXTRACT_TOL};
use charfact::{matkit, RankTolerance};

use crate::certificate::Certificate;
use crate::commands::{self, PointSource, Settings, LEMMA_TOL};
use crate::generate::{self, ShapeLimits};
use crate::CliError;

pub const SAMPLE_POINTS: usize = 20;
pub const SAMPLE_RADIUS: f64 = 0.9;

/// Certificates for one seed, in theorem order. Errors surface as a
/// failing certificate carrying the message.
pub fn run_seed(seed: u64, limits: ShapeLimits, k: usize, tol: f64, rank_tol: RankTolerance) -> Vec<Certificate> {
    let settings = Settings {
        k,
        tol,
        rank_tol,
        seed: Some(seed),
    };
    let mut out = Vec::new();
    let mut record = |theorem: &'static str, result: Result<Certificate, CliError>| {
        out.push(result.unwrap_or_else(|e| {
            let mut c = Certificate::new(theorem).with_k(k).with_seed(Some(seed));
            c.check("error", f64::INFINITY, 0.0);
            c.note(e.to_string());
            c
        }));
    };

    let pair = generate::pair_for(seed, limits, rank_tol);
    record(
        "2.1",
        pair.clone().map_err(CliError::from).and_then(|p| {
            let (a, b, x) = split_upper_triangular(&p.assemble(), p.a().dim_out(), 0.0)?;
            let l = extract_l(&a, &b, &x, rank_tol)?;
            let mut c = Certificate::new("2.1").with_seed(Some(seed));
            c.check("coupling_round_trip", matkit::operator_norm(&(l - p.l())), EXTRACT_TOL);
            Ok(c)
        }),
    );
    let factorization = pair
        .clone()
        .and_then(|p| verify_factorization(&p, k, tol))
        .map_err(CliError::from);
    record(
        "2.2",
        factorization.as_ref().map_err(Clone::clone).map(|fc| {
            let full = commands::factorization_certificate(fc, tol, Some(seed));
            let mut c = Certificate::new("2.2").with_seed(Some(seed));
            for name in [
                "sigma_unitarity",
                "sigma_star_unitarity",
                "sigma_identity",
                "sigma_star_identity",
            ] {
                c.check(name, full.residuals[name], full.tolerances[name]);
            }
            c
        }),
    );
    record(
        "3.1",
        pair.clone().map_err(CliError::from).and_then(|p| {
            let input = CharFunInput::new(p.assemble(), k, rank_tol)?;
            let (first, second) = verify_lemma_identities(&input)?;
            let mut c = Certificate::new("3.1").with_k(k).with_seed(Some(seed));
            c.check("lemma_first", first, LEMMA_TOL);
            c.check("lemma_second", second, LEMMA_TOL);
            Ok(c)
        }),
    );
    record(
        "3.2",
        factorization.map(|fc| commands::factorization_certificate(&fc, tol, Some(seed))),
    );
    record(
        "3.3",
        generate::converse_for(seed, limits, rank_tol)
            .map_err(CliError::from)
            .and_then(|inst| commands::converse(&inst, &settings).map(|(c, _)| c)),
    );
    record(
        "4.x",
        generate::commuting_for(seed, limits, rank_tol)
            .map_err(CliError::from)
            .and_then(|pair| {
                let inst = crate::instance::Instance::from_pair(&pair);
                let points = PointSource::Grid {
                    count: SAMPLE_POINTS,
                    radius: SAMPLE_RADIUS,
                };
                commands::constrained(&inst, &points, &settings).map(|(c, _)| c)
            }),
    );
    out
}

/// Per-theorem pass counts, worst residuals and decade histograms.
pub fn summarize(certs: &[Certificate]) -> String {
    let mut by_theorem: BTreeMap<&str, Vec<&Certificate>> = BTreeMap::new();
    for c in certs {
        by_theorem.entry(c.theorem).or_default().push(c);
    }
    let mut text = String::new();
    for (theorem, group) in &by_theorem {
        let passed = group.iter().filter(|c| c.pass()).count();
        writeln!(text, "theorem {theorem}: {passed}/{} pass", group.len()).unwrap();
        let mut names: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for c in group {
            for (name, r) in &c.residuals {
                names.entry(name.as_str()).or_default().push(*r);
            }
        }
        for (name, values) in names {
            let worst = values.iter().copied().fold(0.0, f64::max);
            writeln!(text, "  {name:<26} max {worst:.2e}  {}", histogram(&values)).unwrap();
        }
    }
    text
}

/// Counts per decade, e.g. `1e-15:3 1e-14:12`; exact zeros are `0:n`.
fn histogram(values: &[f64]) -> String {
    let mut bins: BTreeMap<i32, usize> = BTreeMap::new();
    let mut zeros = 0;
    let mut other = 0;
    for &v in values {
        if v == 0.0 {
            zeros += 1;
        } else if v.is_finite() && v > 0.0 {
            *bins.entry(v.log10().floor() as i32).or_default() += 1;
        } else {
            other += 1;
        }
    }
    let mut parts = Vec::new();
    if zeros > 0 {
        parts.push(format!("0:{zeros}"));
    }
    parts.extend(bins.iter().map(|(e, n)| format!("1e{e}:{n}")));
    if other > 0 {
        parts.push(format!("non-finite:{other}"));
    }
    parts.join(" ")
}

pub fn parse_seed_list(text: &str) -> Result<Vec<u64>, String> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split(|c: char| c.is_whitespace() || c == ','))
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| format!("bad seed {s:?}")))
        .collect()
}

/// Parses a JSON array of points, each an array of `[re, im]` pairs or reals.
pub fn parse_points(text: &str) -> Result<Vec<BallPoint>, String> {
    let doc: serde_json::Value = serde_json::from_str(text).map_err(|e| format!("malformed points file: {e}"))?;
    let rows = doc.as_array().ok_or("points file must hold an array of points")?;
    rows.iter()
        .map(|row| {
            let m = crate::instance::parse_matrix(&serde_json::Value::Array(vec![row.clone()]), "point")
                .map_err(|e| e.0)?;
            BallPoint::new(m.iter().copied().collect()).map_err(|e| e.to_string())
        })
        .collect()
}
