//! Stabilizer tableau `(ω, E, F, G)` of a control-type Clifford `U_C`
//! (one with `U_C|0⟩ = |0⟩`):
//!
//! ```text
//! U_C† p_j U_C = ∏_k p_k^{E_jk}
//! U_C† c_j U_C = i^{ω_j} ∏_k p_k^{F_jk} c_k^{G_jk}
//! ```

use thiserror::Error;

use crate::bits::{BitMatrix, BitVec};
use crate::majorana::{check_len, MajoranaError, MajoranaString};

/// Exhaustive identity checks after updates only run below this size in
/// debug builds; they cost O(n³).
const DEBUG_CHECK_MAX_N: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error(transparent)]
    Majorana(#[from] MajoranaError),
    #[error("tableau must have at least one site")]
    Empty,
    #[error("tableau violates the GF(2) identities")]
    IdentityViolation,
    #[error("control gate precondition failed: {0}")]
    ControlPrecondition(ControlPrecondition),
    #[error("inverse tableau row {row} is not proportional to c_{row}")]
    NotProportional { row: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ControlPrecondition {
    #[error("control operator is not a phase-free p-type string")]
    ControlNotPType,
    #[error("target operator is not Hermitian")]
    TargetNotHermitian,
    #[error("target operator has odd parity")]
    TargetOddParity,
    #[error("control and target operators anticommute")]
    Anticommuting,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ControlTableau {
    omega: Vec<u8>,
    e: BitMatrix,
    f: BitMatrix,
    g: BitMatrix,
}

impl ControlTableau {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "a tableau needs at least one site");
        ControlTableau {
            omega: vec![0; n],
            e: BitMatrix::identity(n),
            f: BitMatrix::zeros(n),
            g: BitMatrix::identity(n),
        }
    }

    /// Assembles a tableau from raw parts, checking only shapes.
    pub fn from_parts(
        omega: Vec<u8>,
        e: BitMatrix,
        f: BitMatrix,
        g: BitMatrix,
    ) -> Result<Self, TableauError> {
        let n = omega.len();
        if n == 0 {
            return Err(TableauError::Empty);
        }
        for m in [&e, &f, &g] {
            check_len(n, m.n())?;
        }
        Ok(ControlTableau {
            omega: omega.into_iter().map(|w| w & 3).collect(),
            e,
            f,
            g,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[u8] {
        &self.omega
    }

    pub fn e(&self) -> &BitMatrix {
        &self.e
    }

    pub fn f(&self) -> &BitMatrix {
        &self.f
    }

    pub fn g(&self) -> &BitMatrix {
        &self.g
    }

    /// `U_C† p_j U_C`.
    pub fn p_image(&self, j: usize) -> MajoranaString {
        MajoranaString::p_type(self.e.row(j).clone())
    }

    /// `U_C† c_j U_C`.
    pub fn c_image(&self, j: usize) -> MajoranaString {
        MajoranaString::from_parts(self.omega[j], self.f.row(j).clone(), self.g.row(j).clone())
    }

    /// `U_C† Γ U_C`, assembled as `i^φ ∏_j Γ^{(j)}` in increasing `j` with
    /// `Γ^{(j)} = i^{ω_j x_j} ∏_k p_k^{E_jk z_j + F_jk x_j} c_k^{G_jk x_j}`.
    pub fn conjugate(&self, g: &MajoranaString) -> Result<MajoranaString, TableauError> {
        check_len(self.n(), g.n())?;
        Ok(self.conjugate_unchecked(g))
    }

    pub(crate) fn conjugate_unchecked(&self, g: &MajoranaString) -> MajoranaString {
        let n = self.n();
        let mut phase = g.phase() as u32;
        let mut z = BitVec::zeros(n);
        let mut x = BitVec::zeros(n);
        let support = g.z().words().iter().zip(g.x().words()).map(|(a, b)| a | b);
        for (wi, word) in support.enumerate() {
            let mut rest = word;
            while rest != 0 {
                let j = wi * 64 + rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let zj = g.z().get(j);
                let xj = g.x().get(j);
                // acc ← acc · Γ^{(j)}
                let mut sign = false;
                if zj {
                    sign ^= self.e.row(j).dot(&x);
                }
                if xj {
                    let gj = self.g.row(j);
                    sign ^= self.f.row(j).dot(&x) ^ gj.dot_prefix(&x) ^ (gj.parity() & x.parity());
                    phase += self.omega[j] as u32;
                }
                if sign {
                    phase += 2;
                }
                if zj {
                    z.xor_assign(self.e.row(j));
                }
                if xj {
                    z.xor_assign(self.f.row(j));
                    x.xor_assign(self.g.row(j));
                }
            }
        }
        MajoranaString::from_parts((phase & 3) as u8, z, x)
    }

    /// Checks `E·Gᵀ = I`, `Eᵀ·G = I`, `F·Gᵀ + G·Fᵀ = I + G·Gᵀ`, odd row
    /// weight of `G`, and Hermiticity of every `U_C† c_j U_C`.
    pub fn verify_identities(&self) -> bool {
        let n = self.n();
        let id = BitMatrix::identity(n);
        if !self.e.mul_transpose(&self.g).is_identity() {
            return false;
        }
        if !self.e.transpose().mul(&self.g).is_identity() {
            return false;
        }
        let lhs = self.f.mul_transpose(&self.g).add(&self.g.mul_transpose(&self.f));
        let rhs = id.add(&self.g.mul_transpose(&self.g));
        if lhs != rhs {
            return false;
        }
        (0..n).all(|j| self.g.row(j).parity() && self.c_image(j).is_hermitian())
    }

    #[inline]
    fn debug_check(&self) {
        if cfg!(debug_assertions) && self.n() <= DEBUG_CHECK_MAX_N {
            debug_assert!(self.verify_identities(), "tableau identities violated");
        }
    }

    /// `U_C ← U_C e^{−i(−1)^ϑ (π/4)(I − Γ_p)}` with `Γ_p = ∏_k p_k^{z_k}`.
    pub fn right_mult_phase_gate(&mut self, z: &BitVec, vartheta: bool) -> Result<(), TableauError> {
        check_len(self.n(), z.len())?;
        for j in 0..self.n() {
            if self.g.row(j).dot(z) {
                self.f.row_mut(j).xor_assign(z);
                let delta = if vartheta { 1 } else { 3 };
                self.omega[j] = (self.omega[j] + delta) & 3;
            }
        }
        self.debug_check();
        Ok(())
    }

    /// `U_C ← U_C C_{Γ1,Γ2}` where `C_{Γ1,Γ2} = e^{−i(π/4)(I−Γ1)(I−Γ2)}`.
    ///
    /// `Γ1` must be a phase-free p-type string and `Γ2` a Hermitian
    /// even-parity string commuting with it. Rows transform as
    /// `C†ΓC = (−1)^{α1 α2} Γ1^{α2} Γ2^{α1} Γ`, `α_i` flagging anticommutation
    /// with `Γ_i`.
    pub fn right_mult_control(
        &mut self,
        g1: &MajoranaString,
        g2: &MajoranaString,
    ) -> Result<(), TableauError> {
        check_len(self.n(), g1.n())?;
        check_len(self.n(), g2.n())?;
        let fail = |p| Err(TableauError::ControlPrecondition(p));
        if !g1.is_p_type() || g1.phase() != 0 {
            return fail(ControlPrecondition::ControlNotPType);
        }
        if !g2.is_hermitian() {
            return fail(ControlPrecondition::TargetNotHermitian);
        }
        if g2.is_odd() {
            return fail(ControlPrecondition::TargetOddParity);
        }
        if g1.anticommutes_unchecked(g2) {
            return fail(ControlPrecondition::Anticommuting);
        }
        self.right_mult_control_unchecked(g1.z(), g2);
        Ok(())
    }

    pub(crate) fn right_mult_control_unchecked(&mut self, z1: &BitVec, g2: &MajoranaString) {
        let (z2, x2) = (g2.z(), g2.x());
        if x2.is_zero() && z2.is_zero() {
            return;
        }
        let x2_odd = x2.parity();
        let x2_bar = x2.prefix_parity();
        let (z1w, z2w, x2w, xbw) = (z1.words(), z2.words(), x2.words(), x2_bar.words());
        let odd = |w: u64| w.count_ones() & 1 == 1;
        for j in 0..self.n() {
            // One pass over the row words for every dot product needed below.
            let (ew, fw, gw) = (self.e.row(j).words(), self.f.row(j).words(), self.g.row(j).words());
            let (mut de, mut a1, mut a2, mut sg, mut gp) = (0u64, 0u64, 0u64, 0u64, 0u64);
            for w in 0..ew.len() {
                let (f, g, x) = (fw[w], gw[w], x2w[w]);
                de ^= ew[w] & x;
                a1 ^= z1w[w] & g;
                a2 ^= (z2w[w] & g) ^ (x & (f ^ g));
                sg ^= (f & x) ^ (g & xbw[w]);
                gp ^= g;
            }
            let cross = odd(gp) & x2_odd;
            if odd(de) {
                self.e.row_mut(j).xor_assign(z1);
            }
            let alpha1 = odd(a1);
            let alpha2 = odd(a2) ^ cross;
            if !alpha1 && !alpha2 {
                continue;
            }
            let mut phase = self.omega[j] as u32;
            if alpha1 {
                // Γ ← Γ2 Γ
                let sign = odd(sg) ^ cross;
                phase += g2.phase() as u32 + if sign { 2 } else { 0 };
                self.f.row_mut(j).xor_assign(z2);
                self.g.row_mut(j).xor_assign(x2);
            }
            if alpha2 {
                // Γ ← Γ1 Γ, sign-free since Γ1 is p-type
                self.f.row_mut(j).xor_assign(z1);
            }
            if alpha1 && alpha2 {
                phase += 2;
            }
            self.omega[j] = (phase & 3) as u8;
        }
        self.debug_check();
    }

    /// Left-multiplies `U_C` by the control-type part of `e^{∓i(π/4)P}`,
    /// `P = ∏_{k∈sites} p_k` (upper sign for `plus`). Row `j ∈ sites` becomes
    /// `i^{±1} (U_C† P U_C)(U_C† c_j U_C)`; `E` is untouched.
    pub(crate) fn left_mult_parity_phase(&mut self, sites: &[usize], plus: bool) {
        let n = self.n();
        let mut image = BitVec::zeros(n);
        for &k in sites {
            image.xor_assign(self.e.row(k));
        }
        let delta = if plus { 1 } else { 3 };
        for &j in sites {
            self.f.row_mut(j).xor_assign(&image);
            self.omega[j] = (self.omega[j] + delta) & 3;
        }
        self.debug_check();
    }

    /// Tableau of `U_C†`: `E′ = Gᵀ`, `G′ = Eᵀ`, `F′ = Eᵀ F Gᵀ`, and `ω′_i`
    /// read off as the negated phase of `U_C† (p^{F′_i} c^{G′_i}) U_C ∝ c_i`.
    pub fn dagger(&self) -> Result<ControlTableau, TableauError> {
        let n = self.n();
        let et = self.e.transpose();
        let gt = self.g.transpose();
        let f_new = et.mul(&self.f).mul(&gt);
        let mut omega = vec![0u8; n];
        for (i, w) in omega.iter_mut().enumerate() {
            let probe = MajoranaString::from_parts(0, f_new.row(i).clone(), et.row(i).clone());
            let image = self.conjugate_unchecked(&probe);
            let is_ci = image.z().is_zero() && image.x().count_ones() == 1 && image.x().get(i);
            if !is_ci {
                return Err(TableauError::NotProportional { row: i });
            }
            *w = (4 - image.phase()) & 3;
        }
        let out = ControlTableau {
            omega,
            e: gt,
            f: f_new,
            g: et,
        };
        out.debug_check();
        Ok(out)
    }

    /// `U_C†|s⟩ = i^θ|t⟩` via `U_C†|s⟩ = Γ|0⟩` with `Γ = U_C† (∏ c_i^{s_i}) U_C`.
    pub fn dagger_apply_to_basis(&self, s: &BitVec) -> Result<(u8, BitVec), TableauError> {
        check_len(self.n(), s.len())?;
        let n = self.n();
        let word = MajoranaString::from_parts(0, BitVec::zeros(n), s.clone());
        let gamma = self.conjugate_unchecked(&word);
        Ok(gamma.apply_to_basis_unchecked(&BitVec::zeros(n)))
    }

    /// `U_C|s⟩ = i^θ|t⟩`. Costs a full inversion.
    pub fn apply_to_basis(&self, s: &BitVec) -> Result<(u8, BitVec), TableauError> {
        self.dagger()?.dagger_apply_to_basis(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn ms(phase: u8, z: &str, x: &str) -> MajoranaString {
        MajoranaString::new(phase, bv(z), bv(x)).unwrap()
    }

    #[test]
    fn identity_shapes() {
        let t = ControlTableau::identity(1);
        assert_eq!(t.omega(), &[0]);
        assert_eq!(t.e().rows(), &[bv("1")]);
        assert_eq!(t.f().rows(), &[bv("0")]);
        assert_eq!(t.g().rows(), &[bv("1")]);
        let t2 = ControlTableau::identity(2);
        assert!(t2.e().is_identity() && t2.g().is_identity());
        assert_eq!(t2.f(), &BitMatrix::zeros(2));
        assert!(ControlTableau::identity(5).verify_identities());
    }

    #[test]
    fn zeroed_g_row_fails_identities() {
        let t = ControlTableau::identity(3);
        let mut g = t.g().clone();
        *g.row_mut(1) = BitVec::zeros(3);
        let bad = ControlTableau::from_parts(t.omega().to_vec(), t.e().clone(), t.f().clone(), g).unwrap();
        assert!(!bad.verify_identities());
    }

    #[test]
    fn identity_conjugation_is_noop() {
        let t = ControlTableau::identity(3);
        let g = ms(1, "101", "011");
        assert_eq!(t.conjugate(&g).unwrap(), g);
        assert!(t.conjugate(&MajoranaString::c(2, 0)).is_err());
    }

    #[test]
    fn phase_gate_example() {
        let mut t = ControlTableau::identity(2);
        t.right_mult_phase_gate(&bv("10"), false).unwrap();
        assert_eq!(t.omega(), &[3, 0]);
        assert_eq!(t.f().rows(), &[bv("10"), bv("00")]);
        assert_eq!(t.e(), &BitMatrix::identity(2));

        let before = t.clone();
        t.right_mult_phase_gate(&bv("00"), false).unwrap();
        assert_eq!(t, before);
    }

    #[test]
    fn phase_gate_conjugation_and_basis_action() {
        // ϑ = 0: U_C = e^{−iπ/4(1−p0)}, so U_C† c0 U_C = −i p0 c0.
        let mut t = ControlTableau::identity(2);
        t.right_mult_phase_gate(&bv("10"), false).unwrap();
        assert_eq!(t.conjugate(&MajoranaString::c(2, 0)).unwrap(), ms(3, "10", "10"));
        assert_eq!(t.conjugate(&MajoranaString::p(2, 0)).unwrap(), MajoranaString::p(2, 0));
        assert_eq!(t.dagger_apply_to_basis(&bv("10")).unwrap(), (1, bv("10")));
        assert_eq!(t.apply_to_basis(&bv("10")).unwrap(), (3, bv("10")));

        // ϑ = 1: U_C = e^{+iπ/4(1−p0)}, the control part of η_0^+.
        let mut t = ControlTableau::identity(2);
        t.right_mult_phase_gate(&bv("10"), true).unwrap();
        assert_eq!(t.conjugate(&MajoranaString::c(2, 0)).unwrap(), ms(1, "10", "10"));
        assert_eq!(t.dagger_apply_to_basis(&bv("10")).unwrap(), (3, bv("10")));
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(ControlTableau::identity(4).dagger().unwrap(), ControlTableau::identity(4));
        let mut t = ControlTableau::identity(3);
        t.right_mult_phase_gate(&bv("100"), false).unwrap();
        let d = t.dagger().unwrap();
        assert_eq!(d.omega(), &[1, 0, 0]);
        assert_eq!(d.f().rows(), &[bv("100"), bv("000"), bv("000")]);
        let c0 = MajoranaString::c(3, 0);
        assert_eq!(d.conjugate(&t.conjugate(&c0).unwrap()).unwrap(), c0);
    }

    #[test]
    fn control_with_identity_target_is_noop() {
        let mut t = ControlTableau::identity(3);
        t.right_mult_phase_gate(&bv("110"), true).unwrap();
        let before = t.clone();
        t.right_mult_control(&MajoranaString::p(3, 0), &MajoranaString::identity(3))
            .unwrap();
        assert_eq!(t, before);
    }

    #[test]
    fn control_p0_p1_example() {
        let mut t = ControlTableau::identity(2);
        t.right_mult_control(&MajoranaString::p(2, 0), &MajoranaString::p(2, 1))
            .unwrap();
        assert_eq!(t.omega(), &[0, 0]);
        assert_eq!(t.e(), &BitMatrix::identity(2));
        assert_eq!(t.g(), &BitMatrix::identity(2));
        assert_eq!(t.f().rows(), &[bv("01"), bv("10")]);
    }

    #[test]
    fn control_preconditions() {
        let mut t = ControlTableau::identity(2);
        let err = |r: Result<(), TableauError>| match r {
            Err(TableauError::ControlPrecondition(p)) => p,
            other => panic!("expected precondition failure, got {other:?}"),
        };
        let c0c1 = ms(1, "00", "11");
        assert!(c0c1.is_hermitian());
        assert_eq!(
            err(t.right_mult_control(&MajoranaString::c(2, 0), &c0c1)),
            ControlPrecondition::ControlNotPType
        );
        assert_eq!(
            err(t.right_mult_control(&MajoranaString::p(2, 0), &ms(0, "00", "11"))),
            ControlPrecondition::TargetNotHermitian
        );
        assert_eq!(
            err(t.right_mult_control(&MajoranaString::p(2, 0), &MajoranaString::c(2, 1))),
            ControlPrecondition::TargetOddParity
        );
        assert_eq!(
            err(t.right_mult_control(&MajoranaString::p(2, 0), &c0c1)),
            ControlPrecondition::Anticommuting
        );
    }

    #[test]
    fn basis_action_fixes_vacuum() {
        let mut t = ControlTableau::identity(3);
        t.right_mult_phase_gate(&bv("011"), false).unwrap();
        t.right_mult_control(&MajoranaString::p(3, 0), &ms(1, "000", "011")).unwrap();
        assert_eq!(t.dagger_apply_to_basis(&bv("000")).unwrap(), (0, bv("000")));
        assert_eq!(
            ControlTableau::identity(3).dagger_apply_to_basis(&bv("101")).unwrap(),
            (0, bv("101"))
        );
    }
}
