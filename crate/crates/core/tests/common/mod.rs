#![allow(dead_code)]

use charfact::rowcon::random_pair;
use charfact::{RankTolerance, UpperTriangularPair};

/// `(n, d1, d2)` cycling through `{1,2,3}³`.
pub fn shape(s: u64) -> (usize, usize, usize) {
    (
        1 + (s % 3) as usize,
        1 + ((s / 3) % 3) as usize,
        1 + ((s / 9) % 3) as usize,
    )
}

pub fn standard_pair(s: u64, strictness: f64) -> UpperTriangularPair {
    let (n, d1, d2) = shape(s);
    random_pair(1000 + s, n, d1, d2, strictness, RankTolerance::default()).expect("generated pair is valid")
}
