//! Dense `2^n` statevector under the Jordan-Wigner convention.
//!
//! Basis index of `|s⟩` is `Σ_k s_k 2^{n−1−k}`, so site 0 is the most
//! significant bit. Operators are built from the single-site actions
//!
//! ```text
//! c_k |s⟩ = (−1)^{Σ_{j<k} s_j} |s + e_k⟩
//! c̃_k |s⟩ = i (−1)^{s_k} (−1)^{Σ_{j<k} s_j} |s + e_k⟩
//! p_k |s⟩ = (−1)^{s_k} |s⟩
//! ```
//!
//! and nothing else, which keeps this module an independent reference for
//! the tableau code.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use thiserror::Error;

use crate::bits::BitVec;
use crate::majorana::MajoranaString;
use crate::Sign;

/// Largest site count the oracle will allocate.
pub const MAX_ORACLE_SITES: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} sites exceeds the dense oracle limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("length mismatch: {left} vs {right} sites")]
    LengthMismatch { left: usize, right: usize },
    #[error("rotation generator is not Hermitian")]
    NotHermitian,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

impl DenseState {
    pub fn vacuum(n: usize) -> Result<Self, OracleError> {
        if n > MAX_ORACLE_SITES {
            return Err(OracleError::TooLarge {
                n,
                max: MAX_ORACLE_SITES,
            });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(DenseState { n, amps })
    }

    pub fn basis(s: &BitVec) -> Result<Self, OracleError> {
        let mut st = Self::vacuum(s.len())?;
        st.amps[0] = ZERO;
        st.amps[index_of(s)] = ONE;
        Ok(st)
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, OracleError> {
        if n > MAX_ORACLE_SITES {
            return Err(OracleError::TooLarge {
                n,
                max: MAX_ORACLE_SITES,
            });
        }
        if amps.len() != 1 << n {
            return Err(OracleError::LengthMismatch {
                left: amps.len(),
                right: 1 << n,
            });
        }
        Ok(DenseState { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn check_site(&self, k: usize) -> Result<(), OracleError> {
        if k < self.n {
            Ok(())
        } else {
            Err(OracleError::SiteOutOfRange { site: k, n: self.n })
        }
    }

    fn check_len(&self, m: usize) -> Result<(), OracleError> {
        if m == self.n {
            Ok(())
        } else {
            Err(OracleError::LengthMismatch {
                left: self.n,
                right: m,
            })
        }
    }

    #[inline]
    fn site_bit(&self, k: usize) -> usize {
        1 << (self.n - 1 - k)
    }

    /// `(−1)^{Σ_{j<k} s_j}` for basis index `idx`.
    #[inline]
    fn string_sign(&self, idx: usize, k: usize) -> f64 {
        let lower_sites = idx >> (self.n - k);
        if lower_sites.count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn apply_c(&mut self, k: usize) -> Result<(), OracleError> {
        self.check_site(k)?;
        let bit = self.site_bit(k);
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            out[idx ^ bit] = a * self.string_sign(idx, k);
        }
        self.amps = out;
        Ok(())
    }

    pub fn apply_ctilde(&mut self, k: usize) -> Result<(), OracleError> {
        self.check_site(k)?;
        let bit = self.site_bit(k);
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let occ = if idx & bit != 0 { -1.0 } else { 1.0 };
            out[idx ^ bit] = I * a * (occ * self.string_sign(idx, k));
        }
        self.amps = out;
        Ok(())
    }

    pub fn apply_p(&mut self, k: usize) -> Result<(), OracleError> {
        self.check_site(k)?;
        let bit = self.site_bit(k);
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if idx & bit != 0 {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// `i^φ (p_0^{z_0} c_0^{x_0}) ⋯ (p_{n−1}^{z_{n−1}} c_{n−1}^{x_{n−1}})`,
    /// rightmost factor first.
    pub fn apply_string(&mut self, g: &MajoranaString) -> Result<(), OracleError> {
        self.check_len(g.n())?;
        for k in (0..self.n).rev() {
            if g.x().get(k) {
                self.apply_c(k)?;
            }
            if g.z().get(k) {
                self.apply_p(k)?;
            }
        }
        let phase = I.powu(g.phase() as u32);
        for a in self.amps.iter_mut() {
            *a *= phase;
        }
        Ok(())
    }

    /// `e^{−i(π/4)Γ}` for [`Sign::Minus`], `e^{+i(π/4)Γ}` for [`Sign::Plus`].
    pub fn apply_rotation(&mut self, g: &MajoranaString, sign: Sign) -> Result<(), OracleError> {
        self.check_len(g.n())?;
        if !g.is_hermitian() {
            return Err(OracleError::NotHermitian);
        }
        let mut image = self.clone();
        image.apply_string(g)?;
        let coeff = match sign {
            Sign::Minus => -I,
            Sign::Plus => I,
        };
        for (a, b) in self.amps.iter_mut().zip(&image.amps) {
            *a = (*a + coeff * b) * FRAC_1_SQRT_2;
        }
        Ok(())
    }

    /// `η_{jk} = e^{(π/4) c_j c_k} = (1 + c_j c_k)/√2`.
    pub fn apply_braid(&mut self, j: usize, k: usize) -> Result<(), OracleError> {
        self.check_site(j)?;
        self.check_site(k)?;
        let mut image = self.clone();
        image.apply_c(k)?;
        image.apply_c(j)?;
        for (a, b) in self.amps.iter_mut().zip(&image.amps) {
            *a = (*a + b) * FRAC_1_SQRT_2;
        }
        Ok(())
    }

    /// `η_j^± = e^{∓i(π/4) p_j}`.
    pub fn apply_eta(&mut self, j: usize, sign: Sign) -> Result<(), OracleError> {
        self.check_site(j)?;
        let p = MajoranaString::p(self.n, j);
        self.apply_rotation(&p, sign.flip())
    }

    /// `W_{jk}^± = e^{∓i(π/4) p_j p_k}`.
    pub fn apply_w(&mut self, j: usize, k: usize, sign: Sign) -> Result<(), OracleError> {
        self.check_site(j)?;
        self.check_site(k)?;
        let mut z = BitVec::unit(self.n, j);
        z.flip(k);
        self.apply_rotation(&MajoranaString::p_type(z), sign.flip())
    }

    pub fn amplitude(&self, s: &BitVec) -> Result<Complex64, OracleError> {
        self.check_len(s.len())?;
        Ok(self.amps[index_of(s)])
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> Result<Complex64, OracleError> {
        self.check_len(other.n)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn expectation(&self, g: &MajoranaString) -> Result<Complex64, OracleError> {
        let mut image = self.clone();
        image.apply_string(g)?;
        self.inner(&image)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_deviation(&self, other: &[Complex64]) -> f64 {
        self.amps
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// One `index amplitude` line per nonzero entry.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm() > 1e-14 {
                let s = bits_of(self.n, idx);
                out.push_str(&format!("{s} {:+.12} {:+.12}i\n", a.re, a.im));
            }
        }
        out
    }
}

/// Dense index of the basis state `|s⟩`.
pub fn index_of(s: &BitVec) -> usize {
    let n = s.len();
    s.iter_ones().fold(0, |acc, k| acc | 1 << (n - 1 - k))
}

/// Inverse of [`index_of`].
pub fn bits_of(n: usize, idx: usize) -> BitVec {
    let mut s = BitVec::zeros(n);
    for k in 0..n {
        if idx >> (n - 1 - k) & 1 == 1 {
            s.set(k, true);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn primitive_examples() {
        let mut st = DenseState::vacuum(2).unwrap();
        st.apply_c(0).unwrap();
        assert!(close(st.amplitude(&bv("10")).unwrap(), ONE));

        let mut st = DenseState::vacuum(2).unwrap();
        st.apply_ctilde(1).unwrap();
        assert!(close(st.amplitude(&bv("01")).unwrap(), I));

        let mut st = DenseState::basis(&bv("10")).unwrap();
        st.apply_p(0).unwrap();
        assert!(close(st.amplitude(&bv("10")).unwrap(), -ONE));
        assert!(st.apply_p(2).is_err());
    }

    #[test]
    fn string_examples() {
        let mut st = DenseState::basis(&bv("01")).unwrap();
        let before = st.clone();
        st.apply_string(&MajoranaString::identity(2)).unwrap();
        assert_eq!(st, before);

        let mut st = DenseState::vacuum(2).unwrap();
        st.apply_string(&MajoranaString::new(0, bv("00"), bv("11")).unwrap()).unwrap();
        assert!(close(st.amplitude(&bv("11")).unwrap(), ONE));
    }

    #[test]
    fn p_equals_i_ctilde_c() {
        for n in 1..4 {
            for k in 0..n {
                for idx in 0..1 << n {
                    let s = bits_of(n, idx);
                    let mut a = DenseState::basis(&s).unwrap();
                    a.apply_c(k).unwrap();
                    a.apply_ctilde(k).unwrap();
                    let mut b = DenseState::basis(&s).unwrap();
                    b.apply_p(k).unwrap();
                    let a: Vec<_> = a.amplitudes().iter().map(|v| v * I).collect();
                    assert!(b.max_deviation(&a) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let mut st = DenseState::vacuum(1).unwrap();
        st.apply_rotation(&MajoranaString::p(1, 0), Sign::Minus).unwrap();
        let expect = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        assert!(close(st.amplitude(&bv("0")).unwrap(), expect));

        // Γ = −i c0 c̃1
        let gamma = (&MajoranaString::c(2, 0) * &MajoranaString::ctilde(2, 1)).with_phase_shift(3);
        let mut st = DenseState::vacuum(2).unwrap();
        st.apply_rotation(&gamma, Sign::Minus).unwrap();
        assert!(close(st.amplitude(&bv("00")).unwrap(), ONE * FRAC_1_SQRT_2));
        assert!(close(st.amplitude(&bv("11")).unwrap(), -I * FRAC_1_SQRT_2));

        assert_eq!(
            st.apply_rotation(&MajoranaString::new(1, bv("00"), bv("10")).unwrap(), Sign::Plus),
            Err(OracleError::NotHermitian)
        );
    }

    #[test]
    fn rotation_squared_is_string() {
        // e^{∓iπ/2 Γ} = ∓iΓ
        let gamma = MajoranaString::new(0, bv("010"), bv("110")).unwrap();
        assert!(gamma.is_hermitian());
        for (sign, phase) in [(Sign::Minus, 3u8), (Sign::Plus, 1u8)] {
            let mut seed = DenseState::vacuum(3).unwrap();
            seed.apply_braid(0, 2).unwrap();
            seed.apply_ctilde(1).unwrap();
            let mut a = seed.clone();
            a.apply_rotation(&gamma, sign).unwrap();
            a.apply_rotation(&gamma, sign).unwrap();
            let mut b = seed.clone();
            b.apply_string(&gamma.clone().with_phase_shift(phase)).unwrap();
            assert!(a.max_deviation(b.amplitudes()) < 1e-12);
        }
    }

    #[test]
    fn anticommutation_relations() {
        // {γ_j, γ′_k} = 2 δ_jk δ_γγ′
        for n in 1..=4 {
            let ops: Vec<(usize, bool)> = (0..n).flat_map(|k| [(k, false), (k, true)]).collect();
            for &(j, tj) in &ops {
                for &(k, tk) in &ops {
                    for idx in 0..1 << n {
                        let s = bits_of(n, idx);
                        let apply = |st: &mut DenseState, site, tilde| {
                            if tilde {
                                st.apply_ctilde(site).unwrap()
                            } else {
                                st.apply_c(site).unwrap()
                            }
                        };
                        let mut ab = DenseState::basis(&s).unwrap();
                        apply(&mut ab, k, tk);
                        apply(&mut ab, j, tj);
                        let mut ba = DenseState::basis(&s).unwrap();
                        apply(&mut ba, j, tj);
                        apply(&mut ba, k, tk);
                        let sum: Vec<Complex64> =
                            ab.amplitudes().iter().zip(ba.amplitudes()).map(|(a, b)| a + b).collect();
                        let mut expect = vec![ZERO; 1 << n];
                        if j == k && tj == tk {
                            expect[idx] = ONE * 2.0;
                        }
                        let dev = sum.iter().zip(&expect).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                        assert!(dev < 1e-14, "n={n} j={j} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn plumbing_examples() {
        let mut v = DenseState::vacuum(3).unwrap();
        v.apply_braid(0, 1).unwrap();
        assert!(close(v.inner(&v).unwrap(), ONE));
        let vac = DenseState::vacuum(3).unwrap();
        assert!(close(vac.amplitude(&bv("000")).unwrap(), ONE));
        for k in 0..3 {
            assert!(close(vac.expectation(&MajoranaString::p(3, k)).unwrap(), ONE));
        }
        assert!(matches!(DenseState::vacuum(15), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn index_convention() {
        assert_eq!(index_of(&bv("100")), 4);
        assert_eq!(index_of(&bv("001")), 1);
        assert_eq!(bits_of(3, 6), bv("110"));
    }
}
