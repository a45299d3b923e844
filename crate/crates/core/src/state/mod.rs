//! Majorana stabilizer states `e^{iπφ/4} U_C U_B |s⟩`.

mod branch;

use thiserror::Error;

use crate::bits::BitVec;
use crate::dense::MAX_ORACLE_SITES;
use crate::exact::ExactAmplitude;
use crate::majorana::{check_len, MajoranaError, MajoranaString};
use crate::tableau::{ControlTableau, TableauError};
use crate::Sign;

pub use branch::{Branch, Step2Case};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error(transparent)]
    Majorana(#[from] MajoranaError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("gate needs two distinct sites, got {0} twice")]
    SameSite(usize),
    #[error("rotation generator is not Hermitian")]
    NotHermitian,
    #[error("rotation generator has odd parity")]
    OddParity,
    #[error("braid layer must leave the last site free (b_(n-1) = 0)")]
    LastBraidSet,
    #[error("{n} sites is too many to enumerate amplitudes (max {max})")]
    TooLarge { n: usize, max: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),
}

impl StateError {
    /// True for corrupted-state conditions as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            StateError::Invariant(_)
                | StateError::Tableau(TableauError::NotProportional { .. })
                | StateError::Tableau(TableauError::IdentityViolation)
        )
    }
}

/// `e^{iπφ/4} U_C U_B |s⟩` with `U_B = ∏_k B_k^{b_k}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizerState {
    phase: u8,
    tableau: ControlTableau,
    b: BitVec,
    s: BitVec,
}

impl StabilizerState {
    /// The computational basis state `|s⟩`.
    pub fn basis_state(s: BitVec) -> Self {
        let n = s.len();
        StabilizerState {
            phase: 0,
            tableau: ControlTableau::identity(n),
            b: BitVec::zeros(n),
            s,
        }
    }

    pub fn vacuum(n: usize) -> Self {
        Self::basis_state(BitVec::zeros(n))
    }

    /// Assembles a state from stored fields, validating every invariant.
    pub fn from_parts(
        phase: u8,
        tableau: ControlTableau,
        b: BitVec,
        s: BitVec,
    ) -> Result<Self, StateError> {
        let n = tableau.n();
        check_len(n, b.len())?;
        check_len(n, s.len())?;
        if b.get(n - 1) {
            return Err(StateError::LastBraidSet);
        }
        if !tableau.verify_identities() {
            return Err(TableauError::IdentityViolation.into());
        }
        Ok(StabilizerState {
            phase: phase & 7,
            tableau,
            b,
            s,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `φ`, the global phase in units of `π/4`, in `0..8`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn tableau(&self) -> &ControlTableau {
        &self.tableau
    }

    pub fn b(&self) -> &BitVec {
        &self.b
    }

    pub fn s(&self) -> &BitVec {
        &self.s
    }

    #[inline]
    pub(crate) fn add_phase(&mut self, eighths: i32) {
        self.phase = (self.phase as i32 + eighths).rem_euclid(8) as u8;
    }

    fn check_site(&self, site: usize) -> Result<(), StateError> {
        if site < self.n() {
            Ok(())
        } else {
            Err(StateError::SiteOutOfRange { site, n: self.n() })
        }
    }

    fn check_pair(&self, j: usize, k: usize) -> Result<(), StateError> {
        self.check_site(j)?;
        self.check_site(k)?;
        if j == k {
            return Err(StateError::SameSite(j));
        }
        Ok(())
    }

    fn check_invariants(&self) -> Result<(), StateError> {
        if self.b.get(self.n() - 1) {
            return Err(StateError::Invariant("b_(n-1) became set"));
        }
        Ok(())
    }

    /// `U_B† U_C† Γ U_C U_B`.
    pub fn heisenberg(&self, g: &MajoranaString) -> Result<MajoranaString, StateError> {
        check_len(self.n(), g.n())?;
        Ok(conjugate_by_ub_unchecked(&self.b, &self.tableau.conjugate_unchecked(g), false))
    }

    /// `|ψ⟩ ← Γ|ψ⟩` for any Majorana string, odd parity included.
    pub fn apply_majorana(&mut self, g: &MajoranaString) -> Result<(), StateError> {
        let image = self.heisenberg(g)?;
        let (theta, t) = image.apply_to_basis_unchecked(&self.s);
        self.add_phase(2 * theta as i32);
        self.s = t;
        Ok(())
    }

    /// `|ψ⟩ ← e^{∓i(π/4) p_j}|ψ⟩` (`η_j^+` for [`Sign::Plus`]).
    pub fn apply_eta_p(&mut self, j: usize, sign: Sign) -> Result<(), StateError> {
        self.check_site(j)?;
        self.apply_diagonal(&[j], sign);
        Ok(())
    }

    /// `|ψ⟩ ← e^{∓i(π/4) p_j p_k}|ψ⟩` (`W_{jk}^+` for [`Sign::Plus`]).
    pub fn apply_w(&mut self, j: usize, k: usize, sign: Sign) -> Result<(), StateError> {
        self.check_pair(j, k)?;
        self.apply_diagonal(&[j, k], sign);
        Ok(())
    }

    // e^{∓i(π/4)P} = e^{∓i(π/4)} e^{±i(π/4)(1−P)}; the second factor fixes |0⟩.
    fn apply_diagonal(&mut self, sites: &[usize], sign: Sign) {
        let plus = sign == Sign::Plus;
        self.add_phase(if plus { -1 } else { 1 });
        self.tableau.left_mult_parity_phase(sites, plus);
    }

    /// `|ψ⟩ ← e^{(π/4) c_j c_k}|ψ⟩`.
    pub fn apply_braid_eta(&mut self, j: usize, k: usize) -> Result<Branch, StateError> {
        self.check_pair(j, k)?;
        let n = self.n();
        let cc = &MajoranaString::c(n, j) * &MajoranaString::c(n, k);
        let image = self.heisenberg(&cc)?;
        self.apply_superposition(image)
    }

    /// `|ψ⟩ ← e^{±i(π/4)Γ}|ψ⟩` for Hermitian even-parity `Γ`; [`Sign::Minus`]
    /// is `e^{−i(π/4)Γ}`.
    pub fn apply_rotation(&mut self, g: &MajoranaString, sign: Sign) -> Result<Branch, StateError> {
        check_len(self.n(), g.n())?;
        if !g.is_hermitian() {
            return Err(StateError::NotHermitian);
        }
        if g.is_odd() {
            return Err(StateError::OddParity);
        }
        let shift = match sign {
            Sign::Plus => 1,
            Sign::Minus => 3,
        };
        let image = self.heisenberg(g)?.with_phase_shift(shift);
        self.apply_superposition(image)
    }

    /// `⟨ψ|Γ|ψ⟩ = i^{φ′} (−1)^{z′·s} δ_{x′,0}` with `(φ′, z′, x′)` the
    /// Heisenberg image of `Γ`.
    pub fn expectation(&self, g: &MajoranaString) -> Result<ExactAmplitude, StateError> {
        let image = self.heisenberg(g)?;
        if !image.x().is_zero() {
            return Ok(ExactAmplitude::Zero);
        }
        let sign = if image.z().dot(&self.s) { 2 } else { 0 };
        Ok(ExactAmplitude::i_pow((image.phase() + sign) as i64))
    }

    /// `⟨x|ψ⟩`, via `⟨x| = ⟨0|Γ` with `Γ = (−1)^{⌊|x|/2⌋} ∏_k c_k^{x_k}`.
    pub fn amplitude(&self, x: &BitVec) -> Result<ExactAmplitude, StateError> {
        check_len(self.n(), x.len())?;
        let weight = x.count_ones();
        let phase = if (weight / 2) % 2 == 1 { 2 } else { 0 };
        let word = MajoranaString::from_parts(phase, BitVec::zeros(self.n()), x.clone());
        let image = self.heisenberg(&word)?;
        let (theta, t) = image.apply_to_basis_unchecked(&self.s);
        Ok(vacuum_overlap(self.phase as i64 + 2 * theta as i64, &self.b, &t))
    }

    /// All `2^n` amplitudes in dense-index order (site 0 most significant).
    pub fn amplitude_vector(&self) -> Result<Vec<ExactAmplitude>, StateError> {
        let n = self.n();
        if n > MAX_ORACLE_SITES {
            return Err(StateError::TooLarge {
                n,
                max: MAX_ORACLE_SITES,
            });
        }
        (0..1usize << n)
            .map(|idx| self.amplitude(&crate::dense::bits_of(n, idx)))
            .collect()
    }

    /// `⟨self|other⟩`.
    ///
    /// The bra's braid layer is undone by rotations applied to the ket, so
    /// the state with fewer braids is made the bra and the result conjugated
    /// if needed.
    pub fn inner_product(&self, other: &StabilizerState) -> Result<ExactAmplitude, StateError> {
        check_len(self.n(), other.n())?;
        if other.b.count_ones() < self.b.count_ones() {
            Ok(other.inner_product_directed(self)?.conj())
        } else {
            self.inner_product_directed(other)
        }
    }

    /// `⟨ψ′|ψ⟩ = e^{−iπφ′/4} (−i)^θ ⟨t| ∏_j e^{−i(π/4) b′_j Γ_j} |ψ⟩` with
    /// `Γ_j = U_C′ (i c_j c̃_{j+1}) U_C′†` and `U_C′|s′⟩ = i^θ|t⟩`.
    pub(crate) fn inner_product_directed(&self, ket: &StabilizerState) -> Result<ExactAmplitude, StateError> {
        let n = self.n();
        let inverse = self.tableau.dagger()?;
        let mut rotated = ket.clone();
        for j in self.b.iter_ones() {
            let link = (&MajoranaString::c(n, j) * &MajoranaString::ctilde(n, j + 1)).with_phase_shift(1);
            let gamma = inverse.conjugate_unchecked(&link);
            rotated.apply_rotation(&gamma, Sign::Minus)?;
        }
        let (theta, t) = inverse.dagger_apply_to_basis(&self.s)?;
        let amp = rotated.amplitude(&t)?;
        Ok(amp.rotate(-(self.phase as i64) - 2 * theta as i64))
    }
}

/// `⟨0| e^{iπφ/4} U_B |s⟩ = 2^{−|b|/2} e^{iπφ/4} i^{|s̄|+|s|} δ_{b s̄, s̄}`,
/// zero for odd `s`.
fn vacuum_overlap(phase: i64, b: &BitVec, s: &BitVec) -> ExactAmplitude {
    if s.parity() {
        return ExactAmplitude::Zero;
    }
    let sbar = s.prefix_parity();
    if sbar.and(b) != sbar {
        return ExactAmplitude::Zero;
    }
    let weight = (sbar.count_ones() + s.count_ones()) as i64;
    ExactAmplitude::new(phase + 2 * weight, b.count_ones() as u32)
}

/// `U_B† Γ U_B = Γ_B(β) Γ`, with `β_k = b_k (x_k + z_k + z_{k+1})` and
/// `Γ_B(β) = i^{−|β|} c_0^{β_0} ∏_{k≥1} p_k^{β_{k−1}} c_k^{β_{k−1}+β_k}`.
pub fn conjugate_by_ub(b: &BitVec, g: &MajoranaString) -> Result<MajoranaString, StateError> {
    check_len(b.len(), g.n())?;
    if b.get(b.len() - 1) {
        return Err(StateError::LastBraidSet);
    }
    Ok(conjugate_by_ub_unchecked(b, g, false))
}

/// `U_B† Γ U_B`, or `U_B Γ U_B†` when `inverse` (each flipped braid then
/// contributes `−c_k c̃_{k+1}` instead of `c_k c̃_{k+1}`).
pub(crate) fn conjugate_by_ub_unchecked(b: &BitVec, g: &MajoranaString, inverse: bool) -> MajoranaString {
    let mut beta = g.x().xor(g.z());
    beta.xor_assign(&g.z().shifted_down());
    let beta = beta.and(b);
    if beta.is_zero() {
        return g.clone();
    }
    let weight = beta.count_ones();
    let lifted = beta.shifted_up();
    let x = beta.xor(&lifted);
    let phase = if inverse { weight } else { 4 - (weight & 3) };
    let mut out = g.clone();
    out.mul_assign_left(&MajoranaString::from_parts((phase & 3) as u8, lifted, x));
    out
}
