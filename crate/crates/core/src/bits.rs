//! Word-packed GF(2) vectors and square matrices.
//!
//! Bit `k` of a [`BitVec`] lives in bit `k % 64` of word `k / 64`. Bits past
//! `len` are always zero, so whole-word popcounts and comparisons are exact.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitParseError {
    #[error("invalid character {ch:?} at position {pos} in bitstring")]
    InvalidChar { ch: char, pos: usize },
}

/// Fixed-length binary vector with mod-2 arithmetic.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![!0; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// The unit vector `e_k`.
    pub fn unit(len: usize, k: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(k, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (k, &b) in bits.iter().enumerate() {
            if b {
                v.set(k, true);
            }
        }
        v
    }

    /// Ones on the half-open site range `[start, end)`.
    pub fn range(len: usize, start: usize, end: usize) -> Self {
        let mut v = Self::zeros(len);
        for k in start..end.min(len) {
            v.set(k, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, k: usize) -> bool {
        assert!(k < self.len, "bit index {k} out of range for length {}", self.len);
        (self.words[k / WORD] >> (k % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, k: usize, value: bool) {
        assert!(k < self.len, "bit index {k} out of range for length {}", self.len);
        let mask = 1u64 << (k % WORD);
        if value {
            self.words[k / WORD] |= mask;
        } else {
            self.words[k / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, k: usize) {
        assert!(k < self.len, "bit index {k} out of range for length {}", self.len);
        self.words[k / WORD] ^= 1u64 << (k % WORD);
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `|x|`, the number of ones.
    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `π(x) = |x| mod 2`.
    #[inline]
    pub fn parity(&self) -> bool {
        self.words.iter().fold(0u64, |acc, &w| acc ^ w).count_ones() & 1 == 1
    }

    /// `self · other` over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b))
            .count_ones()
            & 1
            == 1
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Inclusive prefix parity `x̄`, with `x̄_k = x_0 + … + x_k`.
    pub fn prefix_parity(&self) -> BitVec {
        let mut out = self.clone();
        let mut carry = 0u64;
        for w in out.words.iter_mut() {
            let mut v = *w;
            v ^= v << 1;
            v ^= v << 2;
            v ^= v << 4;
            v ^= v << 8;
            v ^= v << 16;
            v ^= v << 32;
            if carry != 0 {
                v = !v;
            }
            carry = v >> 63;
            *w = v;
        }
        out.clear_tail();
        out
    }

    /// `self · other̄` without materializing the prefix parity of `other`.
    pub fn dot_prefix(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut carry = 0u64;
        let mut acc = 0u64;
        for (&a, &b) in self.words.iter().zip(&other.words) {
            let mut v = b;
            v ^= v << 1;
            v ^= v << 2;
            v ^= v << 4;
            v ^= v << 8;
            v ^= v << 16;
            v ^= v << 32;
            if carry != 0 {
                v = !v;
            }
            carry = v >> 63;
            acc ^= a & v;
        }
        acc.count_ones() & 1 == 1
    }

    /// `out_k = self_{k−1}`, with `out_0 = 0`.
    pub fn shifted_up(&self) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        let mut carry = 0u64;
        for (o, &w) in out.words.iter_mut().zip(&self.words) {
            *o = (w << 1) | carry;
            carry = w >> 63;
        }
        out.clear_tail();
        out
    }

    /// `out_k = self_{k+1}`, with the last bit zero.
    pub fn shifted_down(&self) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        let nw = self.words.len();
        for i in 0..nw {
            let next = if i + 1 < nw { self.words[i + 1] << 63 } else { 0 };
            out.words[i] = (self.words[i] >> 1) | next;
        }
        out
    }

    /// Indices of the set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(i * WORD + tz)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVec {
    /// Leftmost character is bit 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len {
            f.write_str(if self.get(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = BitParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = BitVec::zeros(s.chars().count());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(pos, true),
                _ => return Err(BitParseError::InvalidChar { ch, pos }),
            }
        }
        Ok(v)
    }
}

/// Square binary matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            rows: (0..n).map(|k| BitVec::unit(n, k)).collect(),
        }
    }

    /// Builds a matrix from rows; every row must have length `rows.len()`.
    pub fn from_rows(rows: Vec<BitVec>) -> Option<Self> {
        let n = rows.len();
        rows.iter().all(|r| r.len() == n).then_some(BitMatrix { rows })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn transpose(&self) -> BitMatrix {
        let n = self.n();
        let mut out = BitMatrix::zeros(n);
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter_ones() {
                out.rows[j].set(i, true);
            }
        }
        out
    }

    /// `self · other` by row combination: row `i` of the product is the XOR
    /// of the rows of `other` selected by row `i` of `self`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        let n = self.n();
        assert_eq!(n, other.n(), "matrix dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(n);
                for k in row.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix { rows }
    }

    /// `self · otherᵀ`, entry `(i, j)` being `self_i · other_j`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> BitMatrix {
        let n = self.n();
        assert_eq!(n, other.n(), "matrix dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|a| {
                let mut out = BitVec::zeros(n);
                for (j, b) in other.rows.iter().enumerate() {
                    if a.dot(b) {
                        out.set(j, true);
                    }
                }
                out
            })
            .collect();
        BitMatrix { rows }
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        BitMatrix {
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.xor(b)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.count_ones() == 1 && r.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_parity_examples() {
        assert_eq!(bv("00").prefix_parity(), bv("00"));
        assert_eq!(bv("10").prefix_parity(), bv("11"));
        assert_eq!(bv("0110").prefix_parity(), bv("0100"));
    }

    #[test]
    fn parity_examples() {
        assert!(!bv("0000").parity());
        assert!(!bv("1010").parity());
        assert!(bv("1110").parity());
    }

    #[test]
    fn ones_clears_tail() {
        let v = BitVec::ones(70);
        assert_eq!(v.count_ones(), 70);
        assert_eq!(v.prefix_parity().count_ones(), 35);
    }

    #[test]
    fn display_round_trip() {
        let v = bv("0110100");
        assert_eq!(v.to_string(), "0110100");
        assert!("01x".parse::<BitVec>().is_err());
    }

    #[test]
    fn matrix_transpose_and_mul() {
        let a = BitMatrix::from_rows(vec![bv("110"), bv("011"), bv("001")]).unwrap();
        let at = a.transpose();
        assert_eq!(at.rows(), &[bv("100"), bv("110"), bv("011")]);
        assert_eq!(a.mul(&BitMatrix::identity(3)), a);
        assert_eq!(a.mul(&at.transpose()), a.mul(&a));
        assert_eq!(a.mul_transpose(&a), a.mul(&at));
    }

    fn arb_bits(max: usize) -> impl Strategy<Value = Vec<bool>> {
        (1..max).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n))
    }

    proptest! {
        #[test]
        fn prefix_parity_matches_running_sum(bits in arb_bits(200)) {
            let v = BitVec::from_bools(&bits);
            let pp = v.prefix_parity();
            let mut acc = false;
            for (k, &b) in bits.iter().enumerate() {
                acc ^= b;
                prop_assert_eq!(pp.get(k), acc);
            }
        }

        #[test]
        fn dot_prefix_matches_materialized(a in arb_bits(200), seed in any::<u64>()) {
            let v = BitVec::from_bools(&a);
            let w = BitVec::from_bools(&a.iter().enumerate().map(|(i, _)| (seed >> (i % 64)) & 1 == 1).collect::<Vec<_>>());
            prop_assert_eq!(v.dot_prefix(&w), v.dot(&w.prefix_parity()));
        }

        #[test]
        fn shifts_match_indexing(bits in arb_bits(200)) {
            let v = BitVec::from_bools(&bits);
            let up = v.shifted_up();
            let down = v.shifted_down();
            let n = bits.len();
            for k in 0..n {
                prop_assert_eq!(up.get(k), k > 0 && bits[k - 1]);
                prop_assert_eq!(down.get(k), k + 1 < n && bits[k + 1]);
            }
        }

        #[test]
        fn iter_ones_matches_get(bits in arb_bits(200)) {
            let v = BitVec::from_bools(&bits);
            let ones: Vec<usize> = v.iter_ones().collect();
            let expect: Vec<usize> = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
            prop_assert_eq!(ones, expect);
        }
    }
}
