//! Folding `e^{iπφ/4} U_C U_B (1 + Γ′)/√2 |s⟩` back into a single stabilizer
//! state.
//!
//! With `Γ′|s⟩ = i^θ|t⟩` the state is `U_C U_B (|s⟩ + i^θ|t⟩)/√2`. A control
//! gate merged into `U_C` first moves `t` next to `s` (`t = s + e_w + e_{w+1}`);
//! the neighbouring pair is then absorbed by toggling the braid `B_w`.

use crate::bits::BitVec;
use crate::majorana::MajoranaString;

use super::{conjugate_by_ub_unchecked, StabilizerState, StateError};

/// How the two branches were brought next to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step2Case {
    /// `Γ′` was diagonal on `|s⟩`; only the phase changed.
    Diagonal,
    /// Some braid-free segment held an odd number of differing sites.
    OddSegment,
    /// Every segment held an even number of differing sites.
    EvenSegments,
}

/// Trace of one superposition update, reported for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Branch {
    pub case: Step2Case,
    /// The site pair `(w, w+1)` absorbed into `B_w`, if any.
    pub w: Option<usize>,
    /// Relative phase exponent `θ` of the second branch before absorption.
    pub theta: u8,
}

impl StabilizerState {
    /// Replaces `|ψ⟩` by `e^{iπφ/4} U_C U_B (1 + Γ′)|s⟩/√2`, where `image` is
    /// `Γ′` already expressed in the `U_B U_C` frame.
    pub(super) fn apply_superposition(&mut self, image: MajoranaString) -> Result<Branch, StateError> {
        let (theta, t) = image.apply_to_basis_unchecked(&self.s);
        if t == self.s {
            // (1 + i^θ)/√2 with θ odd for an anti-Hermitian Γ′.
            match theta {
                1 => self.add_phase(1),
                3 => self.add_phase(-1),
                _ => return Err(StateError::Invariant("diagonal branch with even relative phase")),
            }
            return Ok(Branch {
                case: Step2Case::Diagonal,
                w: None,
                theta,
            });
        }
        let (case, w, theta) = self.align_branches(t, theta)?;
        self.absorb_pair(w, theta)?;
        self.check_invariants()?;
        Ok(Branch {
            case,
            w: Some(w),
            theta,
        })
    }

    /// Step 2: returns `(case, w, θ)` with the second branch now `s + e_w + e_{w+1}`.
    fn align_branches(&mut self, mut t: BitVec, mut theta: u8) -> Result<(Step2Case, usize, u8), StateError> {
        let n = self.n();
        let x = self.s.xor(&t);
        let case = match odd_segment(&self.b, &x) {
            Some((start, end)) => {
                let segment = BitVec::range(n, start, end + 1);
                if segment.dot(&self.s) {
                    std::mem::swap(&mut self.s, &mut t);
                    self.add_phase(2 * theta as i32);
                    theta = (4 - theta) & 3;
                }
                let w = if start > 0 { start - 1 } else { end };
                let mut x2 = x;
                x2.flip(w);
                if w + 1 < n {
                    x2.flip(w + 1);
                }
                if !x2.is_zero() {
                    let weight = x2.count_ones();
                    let g2 = MajoranaString::from_parts(((weight / 2) & 3) as u8, BitVec::zeros(n), x2);
                    let (dt, t2) = g2.apply_to_basis_unchecked(&t);
                    theta = (theta + dt) & 3;
                    t = t2;
                    let g2 = conjugate_by_ub_unchecked(&self.b, &g2, true);
                    self.tableau.right_mult_control_unchecked(&segment, &g2);
                }
                (Step2Case::OddSegment, w)
            }
            None => {
                let marks: Vec<usize> = x.iter_ones().collect();
                let w = marks[0];
                let g1 = lambda_chain(n, &marks);
                let (dt, t2) = g1.apply_to_basis_unchecked(&t);
                theta = (theta + dt) & 3;
                t = t2;
                let g1 = conjugate_by_ub_unchecked(&self.b, &g1, true);
                if !g1.is_p_type() || g1.phase() != 0 {
                    return Err(StateError::Invariant("ladder control is not diagonal under U_B"));
                }
                let g2 = MajoranaString::from_parts(
                    if self.s.get(w) { 2 } else { 0 },
                    BitVec::unit(n, w),
                    BitVec::zeros(n),
                );
                let g2 = conjugate_by_ub_unchecked(&self.b, &g2, true);
                self.tableau.right_mult_control_unchecked(g1.z(), &g2);
                (Step2Case::EvenSegments, w)
            }
        };
        let w = case.1;
        if w + 1 >= n {
            return Err(StateError::Invariant("branches differ at the last site only"));
        }
        let mut expected = self.s.clone();
        expected.flip(w);
        expected.flip(w + 1);
        if t != expected {
            return Err(StateError::Invariant("branches are not adjacent after alignment"));
        }
        Ok((case.0, w, theta))
    }

    /// Step 3: folds `(|s⟩ + i^θ|s + e_w + e_{w+1}⟩)/√2` into `B_w`.
    fn absorb_pair(&mut self, w: usize, mut theta: u8) -> Result<(), StateError> {
        let n = self.n();
        let sigma = self.s.get(w) as u8 + self.s.get(w + 1) as u8;
        if theta.is_multiple_of(2) {
            let k = theta / 2;
            if self.b.get(w) {
                // B_w acts on this pair as the phase e^{−i(π/4)(−1)^{σ+k}}.
                self.add_phase(if (sigma + k).is_multiple_of(2) { -1 } else { 1 });
                self.b.set(w, false);
            }
            let tail = BitVec::range(n, w + 1, n);
            let negative = tail.dot(&self.s);
            if negative {
                self.add_phase(-2);
            }
            self.tableau.right_mult_phase_gate(&tail, negative)?;
            theta = (theta + 1) & 3;
        }
        let k = theta / 2;
        let flip = (sigma + k + self.b.get(w) as u8).is_multiple_of(2);
        self.b.flip(w);
        if flip {
            self.add_phase(2 * theta as i32);
            self.s.flip(w);
            self.s.flip(w + 1);
        }
        Ok(())
    }
}

/// First braid-free segment `[start, end]` (ending where `b` is clear)
/// containing an odd number of ones of `x`.
fn odd_segment(b: &BitVec, x: &BitVec) -> Option<(usize, usize)> {
    let mut start = 0;
    let mut odd = false;
    for k in 0..b.len() {
        odd ^= x.get(k);
        if !b.get(k) {
            if odd {
                return Some((start, k));
            }
            start = k + 1;
        }
    }
    None
}

/// `Λ_{m0+1, m1} ∏_{k≥1} Λ_{m_{2k}, m_{2k+1}}`, where
/// `Λ_{a,b} = i^{b−a} c_a p_{a+2} p_{a+4} … c_b (∏_{j>b} p_j)^{(b−a) mod 2}`.
pub(crate) fn lambda_chain(n: usize, marks: &[usize]) -> MajoranaString {
    let mut phase = 0usize;
    let mut z = BitVec::zeros(n);
    let mut x = BitVec::zeros(n);
    let mut tail_marks = BitVec::zeros(n);
    for (k, pair) in marks.chunks_exact(2).enumerate() {
        let a = if k == 0 { pair[0] + 1 } else { pair[0] };
        let b = pair[1];
        let d = b - a;
        phase += d;
        x.flip(a);
        x.flip(b);
        let mut site = a + 2;
        while site <= b {
            z.flip(site);
            site += 2;
        }
        if d % 2 == 1 && b + 1 < n {
            tail_marks.flip(b + 1);
        }
    }
    z.xor_assign(&tail_marks.prefix_parity());
    MajoranaString::from_parts((phase & 3) as u8, z, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Y_j = i c_j c_{j+1} ∏_{k≥j+2} p_k`.
    fn y(n: usize, j: usize) -> MajoranaString {
        let mut out = (&MajoranaString::c(n, j) * &MajoranaString::c(n, j + 1)).with_phase_shift(1);
        for k in j + 2..n {
            out = &out * &MajoranaString::p(n, k);
        }
        out
    }

    fn lambda_product(n: usize, marks: &[usize]) -> MajoranaString {
        let mut out = MajoranaString::identity(n);
        for (k, pair) in marks.chunks_exact(2).enumerate() {
            let a = if k == 0 { pair[0] + 1 } else { pair[0] };
            for j in a..pair[1] {
                out = &out * &y(n, j);
            }
        }
        out
    }

    #[test]
    fn closed_form_matches_y_products() {
        let n = 9;
        let cases: &[&[usize]] = &[
            &[0, 1],
            &[0, 3],
            &[2, 7],
            &[0, 2, 3, 8],
            &[1, 4, 5, 6],
            &[0, 1, 2, 5, 6, 8],
            &[3, 4, 6, 7],
        ];
        for marks in cases {
            assert_eq!(lambda_chain(n, marks), lambda_product(n, marks), "marks {marks:?}");
        }
    }

    #[test]
    fn segments() {
        let b: BitVec = "1100100".parse().unwrap();
        assert_eq!(odd_segment(&b, &"0010000".parse().unwrap()), Some((0, 2)));
        assert_eq!(odd_segment(&b, &"0001100".parse().unwrap()), Some((3, 3)));
        assert_eq!(odd_segment(&b, &"0000110".parse().unwrap()), None);
        assert_eq!(odd_segment(&b, &"1010011".parse().unwrap()), Some((4, 5)));
    }
}
