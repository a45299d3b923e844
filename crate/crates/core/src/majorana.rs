//! Majorana strings in the canonical `(φ, z, x)` form
//! `Γ = i^φ ∏_k p_k^{z_k} c_k^{x_k}` (product ordered by increasing site),
//! where `p_k = i c̃_k c_k` is the site-parity operator.

use std::fmt;

use thiserror::Error;

use crate::bits::BitVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MajoranaError {
    #[error("length mismatch: {left} sites vs {right} sites")]
    LengthMismatch { left: usize, right: usize },
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
}

#[inline]
pub(crate) fn check_len(left: usize, right: usize) -> Result<(), MajoranaError> {
    if left == right {
        Ok(())
    } else {
        Err(MajoranaError::LengthMismatch { left, right })
    }
}

/// A Majorana operator `i^φ ∏_k p_k^{z_k} c_k^{x_k}`.
///
/// Equality is componentwise; the canonical form makes that operator equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MajoranaString {
    phase: u8,
    z: BitVec,
    x: BitVec,
}

impl MajoranaString {
    pub fn new(phase: u8, z: BitVec, x: BitVec) -> Result<Self, MajoranaError> {
        check_len(z.len(), x.len())?;
        Ok(MajoranaString { phase: phase & 3, z, x })
    }

    pub(crate) fn from_parts(phase: u8, z: BitVec, x: BitVec) -> Self {
        debug_assert_eq!(z.len(), x.len());
        MajoranaString { phase: phase & 3, z, x }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts(0, BitVec::zeros(n), BitVec::zeros(n))
    }

    /// `c_k = a_k + a_k†`.
    pub fn c(n: usize, k: usize) -> Self {
        Self::from_parts(0, BitVec::zeros(n), BitVec::unit(n, k))
    }

    /// `c̃_k = i(a_k† − a_k) = −i p_k c_k`.
    pub fn ctilde(n: usize, k: usize) -> Self {
        Self::from_parts(3, BitVec::unit(n, k), BitVec::unit(n, k))
    }

    /// `p_k = i c̃_k c_k`.
    pub fn p(n: usize, k: usize) -> Self {
        Self::from_parts(0, BitVec::unit(n, k), BitVec::zeros(n))
    }

    /// Product of `p_k` over the set bits of `z`.
    pub fn p_type(z: BitVec) -> Self {
        let n = z.len();
        Self::from_parts(0, z, BitVec::zeros(n))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// Exponent `φ` of `i`, in `0..4`.
    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    #[inline]
    pub fn z(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn x(&self) -> &BitVec {
        &self.x
    }

    /// Multiplies by `i^k`.
    pub fn with_phase_shift(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) & 3;
        self
    }

    /// Diagonal in the computational basis (`x = 0`).
    pub fn is_p_type(&self) -> bool {
        self.x.is_zero()
    }

    /// `π(x)`: true for odd parity.
    pub fn is_odd(&self) -> bool {
        self.x.parity()
    }

    /// `ΓΓ′` in canonical form.
    pub fn multiply(&self, rhs: &MajoranaString) -> Result<MajoranaString, MajoranaError> {
        check_len(self.n(), rhs.n())?;
        let mut out = self.clone();
        out.mul_assign_right(rhs);
        Ok(out)
    }

    /// `self ← self · rhs`.
    pub(crate) fn mul_assign_right(&mut self, rhs: &MajoranaString) {
        let sign = rhs.z.dot(&self.x) ^ rhs.x.dot_prefix(&self.x) ^ (rhs.x.parity() & self.x.parity());
        self.phase = (self.phase + rhs.phase + if sign { 2 } else { 0 }) & 3;
        self.z.xor_assign(&rhs.z);
        self.x.xor_assign(&rhs.x);
    }

    /// `self ← lhs · self`.
    pub(crate) fn mul_assign_left(&mut self, lhs: &MajoranaString) {
        let sign = self.z.dot(&lhs.x) ^ self.x.dot_prefix(&lhs.x) ^ (self.x.parity() & lhs.x.parity());
        self.phase = (self.phase + lhs.phase + if sign { 2 } else { 0 }) & 3;
        self.z.xor_assign(&lhs.z);
        self.x.xor_assign(&lhs.x);
    }

    /// True iff `ΓΓ′ = −Γ′Γ`.
    pub fn anticommutes(&self, other: &MajoranaString) -> Result<bool, MajoranaError> {
        check_len(self.n(), other.n())?;
        Ok(self.anticommutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &MajoranaString) -> bool {
        other.z.dot(&self.x)
            ^ other.x.dot(&self.z)
            ^ other.x.dot(&self.x)
            ^ (self.x.parity() & other.x.parity())
    }

    /// `Γ² = +I`. Every Majorana string squares to `±I`.
    pub fn is_hermitian(&self) -> bool {
        let sign = self.z.dot(&self.x) ^ self.x.dot_prefix(&self.x) ^ self.x.parity();
        (2 * self.phase + if sign { 2 } else { 0 }) & 3 == 0
    }

    /// `Γ|s⟩ = i^θ |t⟩`, returned as `(θ, t)`.
    pub fn apply_to_basis(&self, s: &BitVec) -> Result<(u8, BitVec), MajoranaError> {
        check_len(self.n(), s.len())?;
        Ok(self.apply_to_basis_unchecked(s))
    }

    pub(crate) fn apply_to_basis_unchecked(&self, s: &BitVec) -> (u8, BitVec) {
        let t = s.xor(&self.x);
        let sign = t.dot(&self.z) ^ s.dot_prefix(&self.x) ^ (self.x.parity() & s.parity());
        ((self.phase + if sign { 2 } else { 0 }) & 3, t)
    }

    pub fn to_interleaved(&self) -> InterleavedString {
        let n = self.n();
        let mut m = BitVec::zeros(2 * n);
        for k in 0..n {
            let odd = self.z.get(k);
            let even = self.x.get(k) ^ odd;
            m.set(2 * k, even);
            m.set(2 * k + 1, odd);
        }
        // invert φ = r − |m_o| + 2 m_e·m_o
        let m_o = &self.z;
        let overlap = self.x.xor(&self.z).dot(m_o);
        let r = self.phase as usize + m_o.count_ones() + if overlap { 2 } else { 0 };
        InterleavedString { r: (r & 3) as u8, m }
    }
}

impl fmt::Display for MajoranaString {
    /// Writes the operator-expression syntax, e.g. `i^1 p0 c1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if first {
                first = false;
                Ok(())
            } else {
                f.write_str(" ")
            }
        };
        if self.phase != 0 || (self.z.is_zero() && self.x.is_zero()) {
            sep(f)?;
            write!(f, "i^{}", self.phase)?;
        }
        for k in 0..self.n() {
            if self.z.get(k) {
                sep(f)?;
                write!(f, "p{k}")?;
            }
            if self.x.get(k) {
                sep(f)?;
                write!(f, "c{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MajoranaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MajoranaString({}; {}; {})", self.phase, self.z, self.x)
    }
}

impl std::ops::Mul for &MajoranaString {
    type Output = MajoranaString;

    fn mul(self, rhs: &MajoranaString) -> MajoranaString {
        self.multiply(rhs).expect("Majorana strings on different site counts")
    }
}

/// The alternative representation `i^r ∏_k c_k^{m_{2k}} c̃_k^{m_{2k+1}}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InterleavedString {
    pub r: u8,
    pub m: BitVec,
}

impl InterleavedString {
    /// Converts to canonical form.
    ///
    /// Per site, `c^a c̃^b = (−i)^b (−1)^{ab} p^b c^{a+b}`, so
    /// `φ = r − |m_o| + 2 m_e·m_o`, `z = m_o`, `x = m_e + m_o`.
    pub fn to_canonical(&self) -> Result<MajoranaString, MajoranaError> {
        if !self.m.len().is_multiple_of(2) {
            return Err(MajoranaError::LengthMismatch {
                left: self.m.len(),
                right: self.m.len() + 1,
            });
        }
        let n = self.m.len() / 2;
        let mut z = BitVec::zeros(n);
        let mut x = BitVec::zeros(n);
        let mut odd_count = 0usize;
        let mut overlap = false;
        for k in 0..n {
            let e = self.m.get(2 * k);
            let o = self.m.get(2 * k + 1);
            z.set(k, o);
            x.set(k, e ^ o);
            odd_count += o as usize;
            overlap ^= e & o;
        }
        let phase = self.r as usize + 3 * odd_count + if overlap { 2 } else { 0 };
        Ok(MajoranaString::from_parts((phase & 3) as u8, z, x))
    }
}

/// `from_interleaved(r, m)`.
pub fn from_interleaved(g: &InterleavedString) -> Result<MajoranaString, MajoranaError> {
    g.to_canonical()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpExprError {
    #[error("empty operator expression")]
    Empty,
    #[error("unrecognized token {token:?}")]
    BadToken { token: String, column: usize },
    #[error("phase token {token:?} must come first")]
    MisplacedPhase { token: String, column: usize },
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize, column: usize },
}

impl OpExprError {
    /// Zero-based character offset into the parsed text, when known.
    pub fn column(&self) -> Option<usize> {
        match self {
            OpExprError::Empty => None,
            OpExprError::BadToken { column, .. }
            | OpExprError::MisplacedPhase { column, .. }
            | OpExprError::SiteOutOfRange { column, .. } => Some(*column),
        }
    }
}

/// Parses `[i^<r>] tok tok …` with tokens `c<k>`, `ct<k>`, `p<k>`,
/// multiplied left to right.
pub fn parse_op_expr(text: &str, n: usize) -> Result<MajoranaString, OpExprError> {
    let mut acc = MajoranaString::identity(n);
    let mut seen_any = false;
    let mut offset = 0usize;
    for raw in text.split(char::is_whitespace) {
        let column = offset;
        offset += raw.chars().count() + 1;
        if raw.is_empty() {
            continue;
        }
        let bad = || OpExprError::BadToken {
            token: raw.to_string(),
            column,
        };
        if let Some(r) = raw.strip_prefix("i^") {
            if seen_any {
                return Err(OpExprError::MisplacedPhase {
                    token: raw.to_string(),
                    column,
                });
            }
            let r: u8 = r.parse().map_err(|_| bad())?;
            if r > 3 {
                return Err(bad());
            }
            acc = acc.with_phase_shift(r);
            seen_any = true;
            continue;
        }
        let (ctor, digits): (fn(usize, usize) -> MajoranaString, &str) =
            if let Some(d) = raw.strip_prefix("ct") {
                (MajoranaString::ctilde, d)
            } else if let Some(d) = raw.strip_prefix('c') {
                (MajoranaString::c, d)
            } else if let Some(d) = raw.strip_prefix('p') {
                (MajoranaString::p, d)
            } else {
                return Err(bad());
            };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let site: usize = digits.parse().map_err(|_| bad())?;
        if site >= n {
            return Err(OpExprError::SiteOutOfRange { site, n, column });
        }
        acc.mul_assign_right(&ctor(n, site));
        seen_any = true;
    }
    if !seen_any {
        return Err(OpExprError::Empty);
    }
    Ok(acc)
}
