//! Seeded generation of test instances.
//!
//! Every generator takes a `u64` seed and is deterministic across runs and
//! platforms: ChaCha8 stream, complex Gaussian entries with real and
//! imaginary parts drawn independently from `N(0, 1/2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{defects, RowOperator, UpperTriangularPair};
use crate::error::Result;
use crate::matkit::{self, c64, matmul, ComplexMatrix, RankTolerance};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = ComplexMatrix::zeros(rows, cols);
    // fill row-major so the stream order matches the serialized layout
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            out[(i, j)] = c64(scale * re, scale * im);
        }
    }
    out
}

fn rescale(m: &ComplexMatrix, target: f64) -> ComplexMatrix {
    let norm = matkit::operator_norm(m);
    if norm == 0.0 {
        return m.clone();
    }
    m * c64(target / norm, 0.0)
}

/// Gaussian row contraction on `C^dim` with row norm equal to `strictness`.
pub fn random_row_contraction(seed: u64, n: usize, dim: usize, strictness: f64) -> RowOperator {
    let mut rng = seeded_rng(seed);
    let row = complex_gaussian_matrix(&mut rng, dim, n * dim);
    RowOperator::from_row_matrix(&rescale(&row, strictness), n).expect("n divides the column count")
}

/// Gaussian `rows x cols` matrix with operator norm `strictness`.
pub fn random_contraction(seed: u64, rows: usize, cols: usize, strictness: f64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    let m = complex_gaussian_matrix(&mut rng, rows, cols);
    rescale(&m, strictness)
}

/// Haar-distributed unitary (QR of a Gaussian matrix with the phases of
/// `R`'s diagonal moved into `Q`).
pub fn random_unitary(seed: u64, n: usize) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    unitary_from(&mut rng, n)
}

fn unitary_from<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let qr = complex_gaussian_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Row contraction on `C^{d1} ⊕ C^{d2}` with vanishing lower-left blocks.
///
/// A Gaussian row contraction of norm `strictness` has its lower-left
/// blocks zeroed; if that raised the norm above `strictness` the tuple is
/// rescaled back.
pub fn random_upper_triangular(seed: u64, n: usize, d1: usize, d2: usize, strictness: f64) -> RowOperator {
    let d = d1 + d2;
    let full = random_row_contraction(seed, n, d, strictness);
    let blocks: Vec<ComplexMatrix> = full
        .blocks()
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.view_mut((d1, 0), (d2, d1)).fill(c64(0.0, 0.0));
            b
        })
        .collect();
    let t = RowOperator::new(blocks).expect("shapes agree");
    let norm = t.row_norm();
    if norm > strictness {
        t.scaled(strictness / norm)
    } else {
        t
    }
}

/// Gaussian `A` on `C^{d1}`, `B` on `C^{d2}` and coupling `L`, each of norm
/// `strictness`, drawn from three streams derived from `seed`.
pub fn random_pair(
    seed: u64,
    n: usize,
    d1: usize,
    d2: usize,
    strictness: f64,
    tol: RankTolerance,
) -> Result<UpperTriangularPair> {
    let base = seed.wrapping_mul(3);
    let a = random_row_contraction(base, n, d1, strictness);
    let b = random_row_contraction(base.wrapping_add(1), n, d2, strictness);
    let p = defects(&a, tol)?.rank_left();
    let q = defects(&b, tol)?.rank_right();
    let l = random_contraction(base.wrapping_add(2), p, q, strictness);
    UpperTriangularPair::new(a, b, l, tol)
}

/// Commuting row contraction on `C^dim` with row norm `strictness`.
///
/// Each `T_i` is a random polynomial of degree below `dim` in one random
/// upper-triangular matrix `G`, conjugated by a common random unitary.
pub fn random_commuting_tuple(seed: u64, n: usize, dim: usize, strictness: f64) -> RowOperator {
    let mut rng = seeded_rng(seed);
    let mut g = complex_gaussian_matrix(&mut rng, dim, dim);
    for j in 0..dim {
        for i in (j + 1)..dim {
            g[(i, j)] = c64(0.0, 0.0);
        }
    }
    let g = rescale(&g, 1.0);
    let mut powers = vec![matkit::identity(dim)];
    for p in 1..dim {
        powers.push(matmul(&powers[p - 1], &g));
    }
    let u = unitary_from(&mut rng, dim);
    let blocks: Vec<ComplexMatrix> = (0..n)
        .map(|_| {
            let coeffs = complex_gaussian_matrix(&mut rng, 1, dim);
            let mut p = ComplexMatrix::zeros(dim, dim);
            for (c, power) in coeffs.iter().zip(&powers) {
                p += power * *c;
            }
            matkit::chain(&[&u, &p, &u.adjoint()])
        })
        .collect();
    let t = RowOperator::new(blocks).expect("shapes agree");
    let norm = t.row_norm();
    if norm == 0.0 {
        t
    } else {
        t.scaled(strictness / norm)
    }
}
