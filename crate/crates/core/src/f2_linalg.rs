//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are packed into `u64` words with coordinate 0 in the least
//! significant bit of word 0. Elimination is plain word-parallel Gauss-Jordan
//! with a deterministic pivot rule (leftmost column, topmost available row), so
//! reduced systems are reproducible run to run.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("vector length {found} does not match expected length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("linear system is infeasible")]
    Infeasible,
    #[error("vector is not in the span of the basis")]
    NotInSpan,
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
}

/// A dense vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.clear_tail();
        v
    }

    /// The `i`-th standard basis vector of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        Self { len, words }
    }

    /// Low `len` bits of `value`, coordinate `k` = bit `k`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "from_u64 supports at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_tail();
        }
        v
    }

    /// Coordinates `0..min(len, 64)` packed into an integer, coordinate `k` = bit `k`.
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Reads coordinate `i`; coordinates at or beyond `len` read as 0.
    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// In-place XOR. Both vectors must have the same length.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "and of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "or of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Bitwise complement.
    pub fn complement(&self) -> BitVector {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.clear_tail();
        out
    }

    /// Inner product over GF(2): parity of the AND.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Indices of set coordinates, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones_iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Appends a coordinate at the end.
    pub fn push(&mut self, bit: bool) {
        if self.len % WORD_BITS == 0 {
            self.words.push(0);
        }
        self.len += 1;
        if bit {
            self.set(self.len - 1, true);
        }
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bits(self.iter().chain(other.iter()))
    }

    /// A copy with `bit` prepended as the new coordinate 0.
    pub fn prepend(&self, bit: bool) -> BitVector {
        BitVector::from_bits(std::iter::once(bit).chain(self.iter()))
    }

    /// Coordinates `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        BitVector::from_bits((start..start + len).map(|i| self.get(i)))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.random();
        }
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Bitstring rendering: character `k` is coordinate `k`.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(LinalgError::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitVector::from_bits)
    }
}

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    n_cols: usize,
    rows: Vec<BitVector>,
}

impl F2Matrix {
    /// An empty (0-row) matrix with `n_cols` columns.
    pub fn new(n_cols: usize) -> Self {
        Self {
            n_cols,
            rows: Vec::new(),
        }
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_cols,
            rows: vec![BitVector::zeros(n_cols); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(n_cols: usize, rows: Vec<BitVector>) -> Result<Self, LinalgError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(LinalgError::LengthMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        Ok(Self { n_cols, rows })
    }

    /// Parses rows written as bitstrings. All rows must share a length.
    pub fn from_strs(rows: &[&str]) -> Result<Self, LinalgError> {
        let parsed = rows
            .iter()
            .map(|r| r.parse::<BitVector>())
            .collect::<Result<Vec<_>, _>>()?;
        let n_cols = parsed.first().map_or(0, BitVector::len);
        Self::from_rows(n_cols, parsed)
    }

    pub fn random<R: Rng + ?Sized>(n_rows: usize, n_cols: usize, rng: &mut R) -> Self {
        Self {
            n_cols,
            rows: (0..n_rows).map(|_| BitVector::random(n_cols, rng)).collect(),
        }
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<(), LinalgError> {
        if row.len() != self.n_cols {
            return Err(LinalgError::LengthMismatch {
                expected: self.n_cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// Matrix-vector product `M x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector, LinalgError> {
        if x.len() != self.n_cols {
            return Err(LinalgError::LengthMismatch {
                expected: self.n_cols,
                found: x.len(),
            });
        }
        Ok(BitVector::from_bits(self.rows.iter().map(|r| r.dot(x))))
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.n_cols, self.n_rows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones_iter() {
                t.rows[c].set(r, true);
            }
        }
        t
    }
}

/// Result of reducing a matrix to reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rref {
    /// Same shape as the input; nonzero rows first, zero rows after.
    pub reduced: F2Matrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

/// Gauss-Jordan elimination with the leftmost-column, topmost-row pivot rule.
pub fn rref(m: &F2Matrix) -> Rref {
    let mut rows = m.rows.clone();
    let mut pivot_cols = Vec::new();
    let mut next = 0;
    for col in 0..m.n_cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        let (before, rest) = rows.split_at_mut(next);
        let (pivot, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row.get(col) {
                row.xor_assign(pivot);
            }
        }
        pivot_cols.push(col);
        next += 1;
    }
    Rref {
        reduced: F2Matrix {
            n_cols: m.n_cols,
            rows,
        },
        rank: pivot_cols.len(),
        pivot_cols,
    }
}

pub fn rank(m: &F2Matrix) -> usize {
    rref(m).rank
}

/// `matrix · x = rhs`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearSystem {
    matrix: F2Matrix,
    rhs: BitVector,
}

impl LinearSystem {
    pub fn new(matrix: F2Matrix, rhs: BitVector) -> Result<Self, LinalgError> {
        if rhs.len() != matrix.n_rows() {
            return Err(LinalgError::LengthMismatch {
                expected: matrix.n_rows(),
                found: rhs.len(),
            });
        }
        Ok(Self { matrix, rhs })
    }

    /// An empty system with `n_unknowns` unknowns, to be filled with [`push`](Self::push).
    pub fn with_unknowns(n_unknowns: usize) -> Self {
        Self {
            matrix: F2Matrix::new(n_unknowns),
            rhs: BitVector::zeros(0),
        }
    }

    pub fn push(&mut self, coeffs: BitVector, rhs: bool) -> Result<(), LinalgError> {
        self.matrix.push_row(coeffs)?;
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn matrix(&self) -> &F2Matrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &BitVector {
        &self.rhs
    }

    pub fn n_unknowns(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn is_satisfied_by(&self, x: &BitVector) -> bool {
        x.len() == self.n_unknowns()
            && self
                .matrix
                .rows()
                .iter()
                .enumerate()
                .all(|(i, row)| row.dot(x) == self.rhs.get(i))
    }
}

/// Affine solution set `particular + span(nullspace_basis)` of a feasible system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionSpace {
    pub particular: BitVector,
    pub nullspace_basis: Vec<BitVector>,
    pub pivot_cols: Vec<usize>,
    pub free_cols: Vec<usize>,
}

impl SolutionSpace {
    pub fn n_unknowns(&self) -> usize {
        self.particular.len()
    }

    /// Dimension of the solution set (number of free columns).
    pub fn dim(&self) -> usize {
        self.nullspace_basis.len()
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// `particular ⊕ Σ choice_k · basis_k`.
    pub fn member(&self, choice: &BitVector) -> BitVector {
        let mut x = self.particular.clone();
        for k in choice.ones_iter() {
            x.xor_assign(&self.nullspace_basis[k]);
        }
        x
    }

    /// All members in order of the free-coordinate assignment (as a binary counter).
    /// Only sensible for small dimensions.
    pub fn members(&self) -> impl Iterator<Item = BitVector> + '_ {
        assert!(self.dim() < WORD_BITS, "solution space too large to enumerate");
        (0..1u64 << self.dim()).map(move |c| self.member(&BitVector::from_u64(c, self.dim())))
    }
}

/// Solves `sys`; returns the full solution set or [`LinalgError::Infeasible`].
pub fn solve(sys: &LinearSystem) -> Result<SolutionSpace, LinalgError> {
    let n = sys.n_unknowns();
    let augmented_rows = sys
        .matrix
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut a = BitVector::zeros(n + 1);
            for c in row.ones_iter() {
                a.set(c, true);
            }
            a.set(n, sys.rhs.get(i));
            a
        })
        .collect();
    let augmented = F2Matrix {
        n_cols: n + 1,
        rows: augmented_rows,
    };
    let reduced = rref(&augmented);
    if reduced.pivot_cols.last() == Some(&n) {
        return Err(LinalgError::Infeasible);
    }

    let mut particular = BitVector::zeros(n);
    for (row, &p) in reduced.reduced.rows.iter().zip(&reduced.pivot_cols) {
        if row.get(n) {
            particular.set(p, true);
        }
    }
    let (nullspace_basis, free_cols) = kernel_from_rref(&reduced.reduced, &reduced.pivot_cols, n);
    Ok(SolutionSpace {
        particular,
        nullspace_basis,
        pivot_cols: reduced.pivot_cols,
        free_cols,
    })
}

fn kernel_from_rref(
    reduced: &F2Matrix,
    pivot_cols: &[usize],
    n: usize,
) -> (Vec<BitVector>, Vec<usize>) {
    let mut is_pivot = vec![false; n];
    for &p in pivot_cols {
        is_pivot[p] = true;
    }
    let free_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let basis = free_cols
        .iter()
        .map(|&f| {
            let mut v = BitVector::unit(n, f);
            for (row, &p) in reduced.rows.iter().zip(pivot_cols) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect();
    (basis, free_cols)
}

/// Basis of `{x : m·x = 0}`; its size is `n_cols − rank(m)`.
pub fn nullspace(m: &F2Matrix) -> Vec<BitVector> {
    let reduced = rref(m);
    kernel_from_rref(&reduced.reduced, &reduced.pivot_cols, m.n_cols).0
}

/// Uniform sample from the solution set: each free coordinate is a fair coin.
pub fn sample_solution<R: Rng + ?Sized>(space: &SolutionSpace, rng: &mut R) -> BitVector {
    let mut x = space.particular.clone();
    for b in &space.nullspace_basis {
        if rng.random::<bool>() {
            x.xor_assign(b);
        }
    }
    x
}

/// Coefficients `c` with `Σ c_k · basis_k = v`. The basis must be linearly independent.
pub fn express_in_basis(v: &BitVector, basis: &[BitVector]) -> Result<BitVector, LinalgError> {
    if let Some(bad) = basis.iter().find(|b| b.len() != v.len()) {
        return Err(LinalgError::LengthMismatch {
            expected: v.len(),
            found: bad.len(),
        });
    }
    // Column k of the system is basis_k.
    let columns = F2Matrix {
        n_cols: v.len(),
        rows: basis.to_vec(),
    };
    let sys = LinearSystem::new(columns.transpose(), v.clone())?;
    match solve(&sys) {
        Ok(space) => Ok(space.particular),
        Err(LinalgError::Infeasible) => Err(LinalgError::NotInSpan),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    /// Size of the row space by brute-force enumeration of all row combinations.
    fn row_space_size(m: &F2Matrix) -> usize {
        let mut seen = std::collections::HashSet::new();
        for mask in 0u64..1 << m.n_rows() {
            let mut acc = BitVector::zeros(m.n_cols());
            for r in 0..m.n_rows() {
                if mask >> r & 1 == 1 {
                    acc.xor_assign(m.row(r));
                }
            }
            seen.insert(acc);
        }
        seen.len()
    }

    fn brute_force_solutions(sys: &LinearSystem) -> Vec<BitVector> {
        let n = sys.n_unknowns();
        (0u64..1 << n)
            .map(|x| BitVector::from_u64(x, n))
            .filter(|x| sys.is_satisfied_by(x))
            .collect()
    }

    #[test]
    fn bitvector_basics() {
        let v = bv("1011");
        assert_eq!(v.len(), 4);
        assert!(v.get(0) && !v.get(1) && v.get(3));
        assert!(!v.get(100), "out-of-range reads are zero");
        assert_eq!(v.weight(), 3);
        assert_eq!(v.ones_iter().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(v.to_string(), "1011");
        assert!(bv("110").dot(&bv("011")));
        assert!(!bv("110").dot(&bv("111")));
        assert_eq!(bv("110").xor(&bv("011")), bv("101"));
        assert!("10x".parse::<BitVector>().is_err());
        assert_eq!(BitVector::ones(70).weight(), 70);
        let long = BitVector::unit(130, 129);
        assert_eq!(long.ones_iter().collect::<Vec<_>>(), vec![129]);
    }

    #[test]
    fn rref_identity() {
        let r = rref(&F2Matrix::identity(3));
        assert_eq!(r.reduced, F2Matrix::identity(3));
        assert_eq!(r.pivot_cols, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = F2Matrix::from_strs(&["110", "011", "101"]).unwrap();
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn rank_matches_row_space_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = F2Matrix::random(6, 6, &mut rng);
            assert_eq!(1usize << rank(&m), row_space_size(&m));
        }
    }

    #[test]
    fn degenerate_shapes() {
        let empty_rows = F2Matrix::new(4);
        assert_eq!(rank(&empty_rows), 0);
        assert_eq!(nullspace(&empty_rows).len(), 4);
        let no_cols = F2Matrix::zeros(3, 0);
        assert_eq!(rank(&no_cols), 0);
        assert!(nullspace(&no_cols).is_empty());
        let sys = LinearSystem::new(no_cols, bv("000")).unwrap();
        let space = solve(&sys).unwrap();
        assert_eq!(space.dim(), 0);
        let bad = LinearSystem::new(F2Matrix::zeros(1, 0), bv("1")).unwrap();
        assert_eq!(solve(&bad), Err(LinalgError::Infeasible));
    }

    #[test]
    fn solve_identity_zero_rhs() {
        let sys = LinearSystem::new(F2Matrix::identity(2), bv("00")).unwrap();
        let space = solve(&sys).unwrap();
        assert_eq!(space.particular, bv("00"));
        assert!(space.nullspace_basis.is_empty());
    }

    #[test]
    fn solve_small_system_matches_enumeration() {
        // x0 ⊕ x1 = 1, x1 = 1
        let m = F2Matrix::from_strs(&["11", "01"]).unwrap();
        let sys = LinearSystem::new(m, bv("11")).unwrap();
        let brute = brute_force_solutions(&sys);
        assert_eq!(brute, vec![bv("01")]);
        let space = solve(&sys).unwrap();
        assert_eq!(space.particular, bv("01"));
        assert!(space.nullspace_basis.is_empty());
    }

    #[test]
    fn solve_contradiction() {
        let m = F2Matrix::from_strs(&["11", "11"]).unwrap();
        let sys = LinearSystem::new(m, bv("10")).unwrap();
        assert_eq!(solve(&sys), Err(LinalgError::Infeasible));
    }

    #[test]
    fn rhs_length_checked() {
        assert!(LinearSystem::new(F2Matrix::identity(2), bv("1")).is_err());
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&F2Matrix::zeros(2, 3)).len(), 3);
        let even = nullspace(&F2Matrix::from_strs(&["111"]).unwrap());
        assert_eq!(even.len(), 2);
        assert!(even.iter().all(|b| b.weight() % 2 == 0));
        // The span is exactly the 4 even-weight vectors of length 3.
        let span: std::collections::HashSet<_> = (0..4u64)
            .map(|c| {
                let mut acc = BitVector::zeros(3);
                for k in 0..2 {
                    if c >> k & 1 == 1 {
                        acc.xor_assign(&even[k]);
                    }
                }
                acc
            })
            .collect();
        let expected: std::collections::HashSet<_> = (0..8u64)
            .map(|x| BitVector::from_u64(x, 3))
            .filter(|x| x.weight() % 2 == 0)
            .collect();
        assert_eq!(span, expected);
        assert!(nullspace(&F2Matrix::identity(3)).is_empty());
    }

    #[test]
    fn sample_solution_fixed_point_and_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let unique = solve(&LinearSystem::new(F2Matrix::identity(3), bv("101")).unwrap()).unwrap();
        for _ in 0..10 {
            assert_eq!(sample_solution(&unique, &mut rng), bv("101"));
        }

        // x0 ⊕ x1 = 1: solutions 10 and 01, each with probability 1/2.
        let sys = LinearSystem::new(F2Matrix::from_strs(&["11"]).unwrap(), bv("1")).unwrap();
        let space = solve(&sys).unwrap();
        assert_eq!(space.dim(), 1);
        let draws = 10_000;
        let hits = (0..draws)
            .filter(|_| sample_solution(&space, &mut rng) == bv("10"))
            .count();
        let sigma = (draws as f64 * 0.25).sqrt();
        assert!((hits as f64 - draws as f64 / 2.0).abs() <= 3.0 * sigma, "hits={hits}");
    }

    #[test]
    fn sample_solution_is_deterministic_per_seed() {
        let sys = LinearSystem::new(F2Matrix::from_strs(&["1100", "0011"]).unwrap(), bv("10")).unwrap();
        let space = solve(&sys).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20).map(|_| sample_solution(&space, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(run(99), run(99));
    }

    #[test]
    fn express_in_basis_examples() {
        let basis = vec![bv("1000"), bv("0110"), bv("0011")];
        assert_eq!(express_in_basis(&basis[0], &basis).unwrap(), bv("100"));
        let v = basis[0].xor(&basis[2]);
        assert_eq!(express_in_basis(&v, &basis).unwrap(), bv("101"));
        assert_eq!(express_in_basis(&bv("0100"), &basis), Err(LinalgError::NotInSpan));
    }

    #[test]
    fn express_in_basis_recovers_known_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut tested = 0;
        while tested < 50 {
            let basis: Vec<_> = (0..4).map(|_| BitVector::random(10, &mut rng)).collect();
            let m = F2Matrix::from_rows(10, basis.clone()).unwrap();
            if rank(&m) < 4 {
                continue;
            }
            let coeffs = BitVector::random(4, &mut rng);
            let mut v = BitVector::zeros(10);
            for k in coeffs.ones_iter() {
                v.xor_assign(&basis[k]);
            }
            assert_eq!(express_in_basis(&v, &basis).unwrap(), coeffs);
            tested += 1;
        }
    }

    fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = F2Matrix> {
        (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r)
                .prop_map(move |rows| {
                    F2Matrix::from_rows(c, rows.into_iter().map(BitVector::from_bits).collect())
                        .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix_strategy(10, 14)) {
            let ns = nullspace(&m);
            prop_assert_eq!(rank(&m) + ns.len(), m.n_cols());
            for b in &ns {
                prop_assert!(m.mul_vec(b).unwrap().is_zero());
            }
        }

        #[test]
        fn rref_idempotent(m in matrix_strategy(8, 12)) {
            let once = rref(&m);
            let twice = rref(&once.reduced);
            prop_assert_eq!(&twice.reduced, &once.reduced);
            prop_assert_eq!(twice.pivot_cols, once.pivot_cols);
        }

        #[test]
        fn rref_preserves_row_space(m in matrix_strategy(6, 8)) {
            let r = rref(&m);
            let mut stacked = m.clone();
            for row in r.reduced.rows() {
                stacked.push_row(row.clone()).unwrap();
            }
            prop_assert_eq!(rank(&stacked), r.rank);
        }

        #[test]
        fn solution_space_equals_brute_force(m in matrix_strategy(10, 10), rhs_seed in any::<u64>()) {
            let rhs = BitVector::from_u64(rhs_seed, m.n_rows());
            let sys = LinearSystem::new(m, rhs).unwrap();
            let mut brute = brute_force_solutions(&sys);
            match solve(&sys) {
                Ok(space) => {
                    prop_assert_eq!(space.pivot_cols.len() + space.free_cols.len(), sys.n_unknowns());
                    let mut members: Vec<_> = space.members().collect();
                    members.sort_by_key(|v| v.low_word());
                    brute.sort_by_key(|v| v.low_word());
                    prop_assert_eq!(members, brute);
                }
                Err(e) => {
                    prop_assert_eq!(e, LinalgError::Infeasible);
                    prop_assert!(brute.is_empty());
                }
            }
        }
    }
}
