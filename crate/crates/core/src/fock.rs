//! Words over `{1, ..., n}` and the Fock space truncated at word length `k`.
//!
//! Basis vectors `e_α` of `Γ_{≤k}` are ordered graded-lexicographically:
//! by length, then lexicographically, so `e_∅` has index 0 and the words of
//! length `m` occupy one contiguous block. A tensor product `Γ_{≤k} ⊗ E`
//! is indexed Fock-major: `index(α) * dim(E) + coordinate`.
//!
//! Truncated creation operators send words of length `k` to zero, so any
//! product of `k + 1` of them vanishes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matkit::{self, c64, matmul, ComplexMatrix};

/// A word in the free semigroup on `n` letters; letters are `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::InvalidArgument("letters start at 1".into()));
        }
        Ok(Self { letters })
    }

    pub fn letter(j: usize) -> Self {
        assert!(j >= 1, "letters start at 1");
        Self { letters: vec![j] }
    }

    /// The word `j j ... j` of length `m`.
    pub fn power(j: usize, m: usize) -> Self {
        assert!(j >= 1, "letters start at 1");
        Self { letters: vec![j; m] }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `ᾱ`: the letters in reverse order.
    pub fn reversed(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    /// Number of occurrences of each letter `1..=n`.
    pub fn multidegree(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for &l in &self.letters {
            counts[l - 1] += 1;
        }
        counts
    }
}

/// Digit string, `""` for the empty word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses a digit string over `1..=9`; `""` and `"∅"` are the empty word.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "∅" {
            return Ok(Self::empty());
        }
        let letters = s
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d >= 1 => Ok(d as usize),
                _ => Err(Error::InvalidArgument(format!("bad letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { letters })
    }
}

/// Basis of `Γ_{≤k}` for an alphabet of `n` letters.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    n: usize,
    k: usize,
    words: Vec<Word>,
    degree_start: Vec<usize>,
}

impl FockBasis {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("alphabet needs at least one letter".into()));
        }
        let mut degree_start = Vec::with_capacity(k + 2);
        let mut words = vec![Word::empty()];
        degree_start.push(0);
        let mut layer = vec![Word::empty()];
        for _ in 0..k {
            degree_start.push(words.len());
            layer = layer
                .iter()
                .flat_map(|w| (1..=n).map(move |j| w.concat(&Word::letter(j))))
                .collect();
            words.extend(layer.iter().cloned());
        }
        degree_start.push(words.len());
        Ok(Self {
            n,
            k,
            words,
            degree_start,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, index: usize) -> &Word {
        &self.words[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.words[index].len()
    }

    /// Index range of the words of length `m`.
    pub fn degree_range(&self, m: usize) -> std::ops::Range<usize> {
        self.degree_start[m]..self.degree_start[m + 1]
    }

    /// Number of basis words of length below `m` (`m <= k + 1`).
    pub fn count_below(&self, m: usize) -> usize {
        self.degree_start[m]
    }

    pub fn index_of(&self, w: &Word) -> Result<usize> {
        if w.len() > self.k {
            return Err(Error::WordTooLong {
                len: w.len(),
                k: self.k,
            });
        }
        let mut value = 0;
        for &l in w.letters() {
            if l > self.n {
                return Err(Error::InvalidArgument(format!("letter {l} exceeds n = {}", self.n)));
            }
            value = value * self.n + (l - 1);
        }
        Ok(self.degree_start[w.len()] + value)
    }

    fn value(&self, index: usize) -> usize {
        index - self.degree_start[self.degree(index)]
    }

    /// Index of `αβ` for `α`, `β` at the given indices, if within the truncation.
    pub fn concat_index(&self, alpha: usize, beta: usize) -> Option<usize> {
        let (la, lb) = (self.degree(alpha), self.degree(beta));
        if la + lb > self.k {
            return None;
        }
        let shift = self.n.pow(lb as u32);
        Some(self.degree_start[la + lb] + self.value(alpha) * shift + self.value(beta))
    }

    /// Index of `αj` (right creation); equals `n * index(α) + j`.
    pub fn append(&self, alpha: usize, j: usize) -> Option<usize> {
        let m = self.degree(alpha);
        (m < self.k).then(|| self.degree_start[m + 1] + self.value(alpha) * self.n + (j - 1))
    }

    /// Index of `jα` (left creation).
    pub fn prepend(&self, j: usize, alpha: usize) -> Option<usize> {
        let m = self.degree(alpha);
        (m < self.k).then(|| self.degree_start[m + 1] + (j - 1) * self.n.pow(m as u32) + self.value(alpha))
    }

    /// Index of `ᾱ`.
    pub fn reverse_index(&self, alpha: usize) -> usize {
        self.index_of(&self.words[alpha].reversed())
            .expect("reversal keeps the length")
    }
}

pub fn enumerate_words(n: usize, k: usize) -> Result<FockBasis> {
    FockBasis::new(n, k)
}

fn check_letter(basis: &FockBasis, j: usize) -> Result<()> {
    if j == 0 || j > basis.n() {
        return Err(Error::InvalidArgument(format!("letter {j} outside 1..={}", basis.n())));
    }
    Ok(())
}

fn permutation_like(dim: usize, target: impl Fn(usize) -> Option<usize>) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        if let Some(row) = target(col) {
            m[(row, col)] = c64(1.0, 0.0);
        }
    }
    m
}

/// Truncated `L_j`: `e_α ↦ e_{jα}`, zero on words of length `k`.
pub fn left_creation(basis: &FockBasis, j: usize) -> Result<ComplexMatrix> {
    check_letter(basis, j)?;
    Ok(permutation_like(basis.dim(), |a| basis.prepend(j, a)))
}

/// Truncated `R_j`: `e_α ↦ e_{αj}`, zero on words of length `k`.
pub fn right_creation(basis: &FockBasis, j: usize) -> Result<ComplexMatrix> {
    check_letter(basis, j)?;
    Ok(permutation_like(basis.dim(), |a| basis.append(a, j)))
}

/// The flipping operator `e_α ↦ e_ᾱ`.
pub fn flip(basis: &FockBasis) -> ComplexMatrix {
    permutation_like(basis.dim(), |a| Some(basis.reverse_index(a)))
}

/// `G_{α₁} ⋯ G_{α_m}` for generators indexed by letters `1..=n`.
pub fn word_operator(basis: &FockBasis, word: &Word, generators: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if generators.len() != basis.n() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} generators, got {}",
            basis.n(),
            generators.len()
        )));
    }
    let mut out = matkit::identity(basis.dim());
    for &l in word.letters() {
        check_letter(basis, l)?;
        out = matmul(&out, &generators[l - 1]);
    }
    Ok(out)
}

/// `(R_j ⊗ I_E) x` for `x` with rows indexed by `Γ_{≤k} ⊗ E`.
pub fn right_shift_rows(basis: &FockBasis, j: usize, e_dim: usize, x: &ComplexMatrix) -> ComplexMatrix {
    move_row_blocks(basis.dim(), e_dim, x, |a| basis.append(a, j))
}

/// `(L_j ⊗ I_E) x` for `x` with rows indexed by `Γ_{≤k} ⊗ E`.
pub fn left_shift_rows(basis: &FockBasis, j: usize, e_dim: usize, x: &ComplexMatrix) -> ComplexMatrix {
    move_row_blocks(basis.dim(), e_dim, x, |a| basis.prepend(j, a))
}

fn move_row_blocks(
    fock_dim: usize,
    e_dim: usize,
    x: &ComplexMatrix,
    target: impl Fn(usize) -> Option<usize>,
) -> ComplexMatrix {
    assert_eq!(x.nrows(), fock_dim * e_dim, "row count must be dim(Γ) * dim(E)");
    let rows = x.nrows();
    let mut out = ComplexMatrix::zeros(rows, x.ncols());
    let moves: Vec<(usize, usize)> = (0..fock_dim).filter_map(|a| target(a).map(|b| (a, b))).collect();
    for (src, dst) in x
        .as_slice()
        .chunks(rows.max(1))
        .zip(out.as_mut_slice().chunks_mut(rows.max(1)))
    {
        for &(a, b) in &moves {
            dst[b * e_dim..(b + 1) * e_dim].copy_from_slice(&src[a * e_dim..(a + 1) * e_dim]);
        }
    }
    out
}

/// `(I_Γ ⊗ m) x` with `x` Fock-major in its rows.
pub fn kron_identity_left(fock_dim: usize, m: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(x.nrows(), fock_dim * m.ncols(), "row count must be dim(Γ) * cols(m)");
    let (p, q) = m.shape();
    let cols = x.ncols();
    if p == 0 || q == 0 || cols == 0 {
        return ComplexMatrix::zeros(fock_dim * p, cols);
    }
    // column-major storage makes x a q x (dim(Γ) * cols) matrix of blocks
    let blocks = ComplexMatrix::from_column_slice(q, fock_dim * cols, x.as_slice());
    let moved = matmul(m, &blocks);
    ComplexMatrix::from_vec(fock_dim * p, cols, moved.data.into())
}

/// `x (I_Γ ⊗ m)` with `x` Fock-major in its columns.
pub fn kron_identity_right(fock_dim: usize, x: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(x.ncols(), fock_dim * m.nrows(), "column count must be dim(Γ) * rows(m)");
    let (p, q) = m.shape();
    let mut out = ComplexMatrix::zeros(x.nrows(), fock_dim * q);
    if p == 0 || q == 0 {
        return out;
    }
    for a in 0..fock_dim {
        let block = matmul(&x.columns(a * p, p).into_owned(), m);
        out.columns_mut(a * q, q).copy_from(&block);
    }
    out
}

/// `I_Γ ⊗ m` as a dense block-diagonal matrix.
pub fn kron_identity(fock_dim: usize, m: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = m.shape();
    let mut out = ComplexMatrix::zeros(fock_dim * p, fock_dim * q);
    for a in 0..fock_dim {
        out.view_mut((a * p, a * q), (p, q)).copy_from(m);
    }
    out
}
