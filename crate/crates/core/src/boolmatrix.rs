//! Square matrices over the Boolean semiring and the brute-force power
//! oracle for period and index of convergence.

use std::fmt;

use serde::Serialize;

use crate::arith::PeriodResult;
use crate::digraph::{is_strongly_connected, Digraph};
use crate::error::{Error, Result};

const WORD: usize = 64;

/// Square Boolean matrix stored as row bitsets: row `i` is the successor set
/// of vertex `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        BoolMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i, len: row.len(), expected: n });
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds for {}", self.n);
        self.bits[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds for {}", self.n);
        let word = &mut self.bits[i * self.words + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Boolean product: `(a·b)[i][j] = OR_k a[i][k] AND b[k][j]`.
    pub fn mul(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            let dst = i * self.words;
            for (w, &word) in self.row(i).iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let k = w * WORD + word.trailing_zeros() as usize;
                    word &= word - 1;
                    for (d, &s) in out.bits[dst..dst + self.words].iter_mut().zip(other.row(k)) {
                        *d |= s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> BoolMatrix {
        let mut acc = Self::identity(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        acc
    }

    pub fn or_assign(&mut self, other: &BoolMatrix) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (d, s) in self.bits.iter_mut().zip(&other.bits) {
            *d |= s;
        }
    }

    pub fn is_all_ones(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix({})", self.n)?;
        for i in 0..self.n {
            let row: String = (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Zero pattern of a nonnegative integer matrix.
pub fn chi(a: &[Vec<u64>]) -> Result<BoolMatrix> {
    let rows: Vec<Vec<bool>> = a.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
    BoolMatrix::from_rows(&rows)
}

pub fn bmm(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    a.mul(b)
}

pub fn adjacency(g: &Digraph) -> BoolMatrix {
    let mut m = BoolMatrix::zeros(g.n());
    for (u, v) in g.edges() {
        m.set(u, v, true);
    }
    m
}

/// Index of convergence and period of a Boolean power sequence, with
/// `A^0 = I` taking part in the sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSignature {
    pub index: u64,
    pub period: PeriodResult,
}

/// Brute-force signature from explicit Boolean powers.
///
/// The period is the least `p ≥ 1` with `A^(n²) = A^(n²+p)`; the index is the
/// least `m ≥ 0` with `A^m = A^(m+p)`. `A^(n²)` already lies in the periodic
/// part, so stepping from it returns to it after exactly `p` products.
pub fn oracle_signature(g: &Digraph) -> PowerSignature {
    let a = adjacency(g);
    let n = g.n();
    let horizon = n * n;
    let mut powers = Vec::with_capacity(horizon + 1);
    powers.push(BoolMatrix::identity(n));
    for i in 1..=horizon {
        let next = powers[i - 1].mul(&a).expect("same dimension");
        powers.push(next);
    }

    let anchor = &powers[horizon];
    let mut period: u64 = 1;
    let mut cur = anchor.mul(&a).expect("same dimension");
    while &cur != anchor {
        cur = cur.mul(&a).expect("same dimension");
        period += 1;
    }

    let shift = a.pow(period);
    let index = powers
        .iter()
        .position(|m| m.mul(&shift).expect("same dimension") == *m)
        .expect("A^(n^2) is periodic");

    PowerSignature { index: index as u64, period: PeriodResult::from_u64(period) }
}

/// gcd of the closed-walk lengths `k ∈ [1, n²]` through `v`, found from the
/// diagonal of explicit powers. `None` when no such walk exists.
pub fn oracle_cycle_gcd(g: &Digraph, v: usize) -> Result<Option<u64>> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    if !is_strongly_connected(g) {
        return Err(Error::NotStronglyConnected);
    }
    let a = adjacency(g);
    let n = g.n();
    let mut frontier = BoolMatrix::identity(n);
    let mut gcd = 0u64;
    for k in 1..=(n * n) as u64 {
        frontier = frontier.mul(&a).expect("same dimension");
        if frontier.get(v, v) {
            gcd = gcd_u64(gcd, k);
        }
    }
    Ok((gcd != 0).then_some(gcd))
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
