//! Phase-sensitive simulation of Majorana stabilizer states.
//!
//! A state is stored as `e^{iπφ/4} U_C U_B |s⟩`: `U_C` is a control-type
//! Majorana Clifford kept as a GF(2) tableau, `U_B` a layer of commuting
//! braids `B_k = e^{−(π/4) c_k c̃_{k+1}}`, and `|s⟩` a basis state. Global
//! phases are tracked exactly, so amplitudes and overlaps come out as exact
//! values `e^{iπk/4} 2^{−m/2}`.
//!
//! Conventions used throughout:
//! * bit `k` of a bitstring is site `k`; textual bitstrings list site 0 first;
//! * in the dense oracle, site 0 is the most significant bit of the index;
//! * `η_j^± = e^{∓i(π/4) p_j}`, `W_{jk}^± = e^{∓i(π/4) p_j p_k}`,
//!   `η_{jk} = e^{(π/4) c_j c_k}`, and a rotation with [`Sign::Minus`] is
//!   `e^{−i(π/4)Γ}`.

pub mod bits;
pub mod circuit;
pub mod dense;
pub mod dump;
pub mod exact;
pub mod majorana;
pub mod scaling;
pub mod state;
pub mod tableau;
pub mod verify;

pub use bits::{BitMatrix, BitVec};
pub use circuit::{Circuit, GateSpec, GateWeights};
pub use dense::DenseState;
pub use exact::ExactAmplitude;
pub use majorana::{InterleavedString, MajoranaString};
pub use state::StabilizerState;
pub use tableau::ControlTableau;

/// Sign label of a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}
