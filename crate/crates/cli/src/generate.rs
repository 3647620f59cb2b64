//! Seeded instances. The shape is a function of the seed alone, so a seed
//! printed by a failing run replays exactly.

use charfact::constrained::random_commuting_pair;
use charfact::rowcon::{random_pair, random_unitary};
use charfact::{RankTolerance, Result, UpperTriangularPair};

use crate::instance::Instance;

pub const STRICTNESS: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeLimits {
    pub max_n: usize,
    pub max_dim: usize,
}

impl Default for ShapeLimits {
    fn default() -> Self {
        Self { max_n: 3, max_dim: 3 }
    }
}

impl ShapeLimits {
    /// `(n, dim H₁, dim H₂)` for `seed`; consecutive seeds sweep every
    /// shape within the limits.
    pub fn shape(&self, seed: u64) -> (usize, usize, usize) {
        let (mn, md) = (self.max_n as u64, self.max_dim as u64);
        (
            1 + (seed % mn) as usize,
            1 + (seed / mn % md) as usize,
            1 + (seed / (mn * md) % md) as usize,
        )
    }
}

pub fn pair_for(seed: u64, limits: ShapeLimits, tol: RankTolerance) -> Result<UpperTriangularPair> {
    let (n, d1, d2) = limits.shape(seed);
    random_pair(seed, n, d1, d2, STRICTNESS, tol)
}

/// `A`, `B` from the seed's pair and a Haar unitary `w` on
/// `𝒟_{A*} ⊕ F` with `F ≅ 𝒟_B` and `F_* ≅ 𝒟_{A*}`.
pub fn converse_for(seed: u64, limits: ShapeLimits, tol: RankTolerance) -> Result<Instance> {
    let pair = pair_for(seed, limits, tol)?;
    let p = pair.defects_a().rank_left();
    let q = pair.defects_b().rank_right();
    Ok(Instance {
        n: pair.n(),
        a: Some(pair.a().clone()),
        b: Some(pair.b().clone()),
        w: Some(random_unitary(seed.wrapping_mul(7).wrapping_add(5), p + q)),
        f_dim: Some(q),
        fstar_dim: Some(p),
        ..Instance::default()
    })
}

pub fn commuting_for(seed: u64, limits: ShapeLimits, tol: RankTolerance) -> Result<UpperTriangularPair> {
    let (n, d1, d2) = limits.shape(seed);
    random_commuting_pair(seed, n, d1, d2, STRICTNESS, tol)
}
