//! Gate list, the `.mst` text format, and a seeded random-circuit generator.
//!
//! ```text
//! # comment
//! n 3
//! eta+ 0          e^{−i(π/4) p_0}
//! w- 0 2          e^{+i(π/4) p_0 p_2}
//! braid 1 2       e^{(π/4) c_1 c_2}
//! rot- i^3 c0 ct1 e^{−i(π/4)Γ}, here the braid B_0
//! op c2           apply c_2
//! ```

use std::fmt;
use std::str::FromStr;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::BitVec;
use crate::dense::{DenseState, OracleError};
use crate::majorana::{parse_op_expr, MajoranaString, OpExprError};
use crate::state::{StabilizerState, StateError};
use crate::Sign;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateSpec {
    /// `η_j^± = e^{∓i(π/4) p_j}`.
    EtaP { j: usize, sign: Sign },
    /// `W_{jk}^± = e^{∓i(π/4) p_j p_k}`.
    W { j: usize, k: usize, sign: Sign },
    /// `η_{jk} = e^{(π/4) c_j c_k}`.
    BraidEta { j: usize, k: usize },
    /// `e^{−i(π/4)Γ}` for [`Sign::Minus`], `e^{+i(π/4)Γ}` for [`Sign::Plus`].
    Rot { string: MajoranaString, sign: Sign },
    /// The bare operator `Γ`.
    Op { string: MajoranaString },
}

/// What is wrong with a single gate, independent of where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("gate needs two distinct sites, got {0} twice")]
    SameSite(usize),
    #[error("operator acts on {got} sites, circuit has {n}")]
    WrongLength { got: usize, n: usize },
    #[error("rotation generator is not Hermitian")]
    NotHermitian,
    #[error("rotation generator has odd parity")]
    OddParity,
}

impl GateSpec {
    pub fn validate(&self, n: usize) -> Result<(), GateError> {
        let site = |s: usize| {
            if s < n {
                Ok(())
            } else {
                Err(GateError::SiteOutOfRange { site: s, n })
            }
        };
        let pair = |j: usize, k: usize| {
            site(j)?;
            site(k)?;
            if j == k {
                Err(GateError::SameSite(j))
            } else {
                Ok(())
            }
        };
        let length = |g: &MajoranaString| {
            if g.n() == n {
                Ok(())
            } else {
                Err(GateError::WrongLength { got: g.n(), n })
            }
        };
        match self {
            GateSpec::EtaP { j, .. } => site(*j),
            GateSpec::W { j, k, .. } | GateSpec::BraidEta { j, k } => pair(*j, *k),
            GateSpec::Rot { string, .. } => {
                length(string)?;
                if !string.is_hermitian() {
                    Err(GateError::NotHermitian)
                } else if string.is_odd() {
                    Err(GateError::OddParity)
                } else {
                    Ok(())
                }
            }
            GateSpec::Op { string } => length(string),
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            GateSpec::EtaP { sign: Sign::Plus, .. } => "eta+",
            GateSpec::EtaP { sign: Sign::Minus, .. } => "eta-",
            GateSpec::W { sign: Sign::Plus, .. } => "w+",
            GateSpec::W { sign: Sign::Minus, .. } => "w-",
            GateSpec::BraidEta { .. } => "braid",
            GateSpec::Rot { sign: Sign::Plus, .. } => "rot+",
            GateSpec::Rot { sign: Sign::Minus, .. } => "rot-",
            GateSpec::Op { .. } => "op",
        }
    }

    pub fn apply(&self, st: &mut StabilizerState) -> Result<(), StateError> {
        match self {
            GateSpec::EtaP { j, sign } => st.apply_eta_p(*j, *sign),
            GateSpec::W { j, k, sign } => st.apply_w(*j, *k, *sign),
            GateSpec::BraidEta { j, k } => st.apply_braid_eta(*j, *k).map(|_| ()),
            GateSpec::Rot { string, sign } => st.apply_rotation(string, *sign).map(|_| ()),
            GateSpec::Op { string } => st.apply_majorana(string),
        }
    }

    pub fn apply_dense(&self, st: &mut DenseState) -> Result<(), OracleError> {
        match self {
            GateSpec::EtaP { j, sign } => st.apply_eta(*j, *sign),
            GateSpec::W { j, k, sign } => st.apply_w(*j, *k, *sign),
            GateSpec::BraidEta { j, k } => st.apply_braid(*j, *k),
            GateSpec::Rot { string, sign } => st.apply_rotation(string, *sign),
            GateSpec::Op { string } => st.apply_string(string),
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mnemonic();
        match self {
            GateSpec::EtaP { j, .. } => write!(f, "{m} {j}"),
            GateSpec::W { j, k, .. } | GateSpec::BraidEta { j, k } => write!(f, "{m} {j} {k}"),
            GateSpec::Rot { string, .. } | GateSpec::Op { string } => write!(f, "{m} {string}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<GateSpec>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<GateSpec>) -> Result<Self, CircuitError> {
        if n == 0 {
            return Err(CircuitError::NoSites);
        }
        for (index, gate) in gates.iter().enumerate() {
            gate.validate(n).map_err(|source| CircuitError::Gate { index, source })?;
        }
        Ok(Circuit { n, gates })
    }

    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "a circuit needs at least one site");
        Circuit { n, gates: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The first `len` gates.
    pub fn prefix(&self, len: usize) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates[..len].to_vec(),
        }
    }

    /// Applies the circuit to the vacuum.
    pub fn run(&self) -> Result<StabilizerState, StateError> {
        let mut st = StabilizerState::vacuum(self.n);
        for gate in &self.gates {
            gate.apply(&mut st)?;
        }
        Ok(st)
    }

    pub fn run_dense(&self) -> Result<DenseState, OracleError> {
        let mut st = DenseState::vacuum(self.n)?;
        for gate in &self.gates {
            gate.apply_dense(&mut st)?;
        }
        Ok(st)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::default().parse(text)
    }

    /// Canonical text form; parsing it gives back an equal circuit.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for gate in &self.gates {
            writeln!(f, "{gate}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Circuit::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit must have at least one site")]
    NoSites,
    #[error("gate {index}: {source}")]
    Gate { index: usize, source: GateError },
    #[error("invalid gate weights: {0}")]
    InvalidWeights(&'static str),
    #[error("random circuits need at least two sites")]
    TooFewSites,
}

/// A parse failure with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `n <sites>`")]
    MissingHeader,
    #[error("bad site count {0:?}")]
    BadSiteCount(String),
    #[error("unknown gate {0:?}")]
    UnknownMnemonic(String),
    #[error("expected {expected} site argument(s), found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("bad site index {0:?}")]
    BadIndex(String),
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("gate needs two distinct sites, got {0} twice")]
    SameSite(usize),
    #[error("malformed operator expression: {0}")]
    OpExpr(OpExprError),
    #[error("rotation generator is not Hermitian")]
    RotNotHermitian,
    #[error("rotation generator has odd parity")]
    RotOddParity,
}

#[derive(Default)]
struct Parser {
    n: Option<usize>,
    gates: Vec<GateSpec>,
}

impl Parser {
    fn parse(mut self, text: &str) -> Result<Circuit, ParseError> {
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            self.line(line, body)?;
        }
        let n = self.n.ok_or(ParseError {
            line: last_line.max(1),
            column: 1,
            kind: ParseErrorKind::MissingHeader,
        })?;
        Ok(Circuit { n, gates: self.gates })
    }

    fn line(&mut self, line: usize, body: &str) -> Result<(), ParseError> {
        let words = tokens(body);
        let (col0, head) = words[0];
        let err = |column: usize, kind| ParseError { line, column: column + 1, kind };
        let Some(n) = self.n else {
            if head != "n" || words.len() != 2 {
                return Err(err(col0, ParseErrorKind::MissingHeader));
            }
            let (col, text) = words[1];
            match text.parse::<usize>() {
                Ok(n) if n > 0 => self.n = Some(n),
                _ => return Err(err(col, ParseErrorKind::BadSiteCount(text.to_string()))),
            }
            return Ok(());
        };
        let sites = |expected: usize| -> Result<Vec<usize>, ParseError> {
            if words.len() - 1 != expected {
                let column = words.get(expected + 1).map_or(body.trim_end().len(), |w| w.0);
                return Err(err(
                    column,
                    ParseErrorKind::WrongArity {
                        expected,
                        found: words.len() - 1,
                    },
                ));
            }
            let mut out = Vec::with_capacity(expected);
            for &(col, text) in &words[1..] {
                let site = if text.bytes().all(|b| b.is_ascii_digit()) {
                    text.parse::<usize>().ok()
                } else {
                    None
                };
                let site = site.ok_or_else(|| err(col, ParseErrorKind::BadIndex(text.to_string())))?;
                if site >= n {
                    return Err(err(col, ParseErrorKind::SiteOutOfRange { site, n }));
                }
                out.push(site);
            }
            if expected == 2 && out[0] == out[1] {
                return Err(err(words[2].0, ParseErrorKind::SameSite(out[0])));
            }
            Ok(out)
        };
        let op_expr = || -> Result<MajoranaString, ParseError> {
            let start = col0 + head.len();
            let rest = &body[start..];
            parse_op_expr(rest, n).map_err(|e| {
                let column = match e.column() {
                    Some(c) => start + char_to_byte(rest, c),
                    None => start,
                };
                err(column, ParseErrorKind::OpExpr(e))
            })
        };
        let gate = match head {
            "eta+" | "eta-" => GateSpec::EtaP {
                j: sites(1)?[0],
                sign: sign_of(head),
            },
            "w+" | "w-" => {
                let s = sites(2)?;
                GateSpec::W {
                    j: s[0],
                    k: s[1],
                    sign: sign_of(head),
                }
            }
            "braid" => {
                let s = sites(2)?;
                GateSpec::BraidEta { j: s[0], k: s[1] }
            }
            "rot+" | "rot-" => {
                let string = op_expr()?;
                let at = words.get(1).map_or(col0, |w| w.0);
                if !string.is_hermitian() {
                    return Err(err(at, ParseErrorKind::RotNotHermitian));
                }
                if string.is_odd() {
                    return Err(err(at, ParseErrorKind::RotOddParity));
                }
                GateSpec::Rot {
                    string,
                    sign: sign_of(head),
                }
            }
            "op" => GateSpec::Op { string: op_expr()? },
            other => return Err(err(col0, ParseErrorKind::UnknownMnemonic(other.to_string()))),
        };
        self.gates.push(gate);
        Ok(())
    }
}

fn sign_of(mnemonic: &str) -> Sign {
    if mnemonic.ends_with('+') {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Whitespace-separated words with their byte offsets.
fn tokens(body: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &body[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out
}

fn char_to_byte(text: &str, chars: usize) -> usize {
    text.char_indices().nth(chars).map_or(text.len(), |(i, _)| i)
}

/// Relative frequencies of gate kinds in [`random_circuit`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateWeights {
    pub eta: f64,
    pub w: f64,
    pub braid: f64,
    pub rot: f64,
    pub op: f64,
}

impl Default for GateWeights {
    fn default() -> Self {
        GateWeights {
            eta: 1.0,
            w: 1.0,
            braid: 1.0,
            rot: 1.0,
            op: 1.0,
        }
    }
}

impl GateWeights {
    pub fn only_braid() -> Self {
        GateWeights {
            eta: 0.0,
            w: 0.0,
            braid: 1.0,
            rot: 0.0,
            op: 0.0,
        }
    }

    fn as_array(&self) -> [f64; 5] {
        [self.eta, self.w, self.braid, self.rot, self.op]
    }

    fn sampler(&self) -> Result<WeightedIndex<f64>, CircuitError> {
        let w = self.as_array();
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(CircuitError::InvalidWeights("weights must be finite and non-negative"));
        }
        WeightedIndex::new(w).map_err(|_| CircuitError::InvalidWeights("at least one weight must be positive"))
    }
}

/// A reproducible random circuit of `depth` gates on `n ≥ 2` sites.
pub fn random_circuit(n: usize, depth: usize, seed: u64, weights: &GateWeights) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::TooFewSites);
    }
    let kinds = weights.sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gates = (0..depth)
        .map(|_| {
            let kind = kinds.sample(&mut rng);
            random_gate(&mut rng, n, kind)
        })
        .collect();
    Ok(Circuit { n, gates })
}

fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn random_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let j = rng.gen_range(0..n);
    let mut k = rng.gen_range(0..n - 1);
    if k >= j {
        k += 1;
    }
    (j, k)
}

fn random_gate<R: Rng>(rng: &mut R, n: usize, kind: usize) -> GateSpec {
    match kind {
        0 => GateSpec::EtaP {
            j: rng.gen_range(0..n),
            sign: random_sign(rng),
        },
        1 => {
            let (j, k) = random_pair(rng, n);
            GateSpec::W {
                j,
                k,
                sign: random_sign(rng),
            }
        }
        2 => {
            let (j, k) = random_pair(rng, n);
            GateSpec::BraidEta { j, k }
        }
        3 => GateSpec::Rot {
            string: random_hermitian_even(rng, n),
            sign: random_sign(rng),
        },
        _ => GateSpec::Op {
            string: random_op(rng, n),
        },
    }
}

/// A uniformly drawn non-identity Hermitian string with even `|x|`.
pub fn random_hermitian_even<R: Rng>(rng: &mut R, n: usize) -> MajoranaString {
    loop {
        let z = BitVec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>());
        let mut x = BitVec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>());
        if x.parity() {
            x.flip(rng.gen_range(0..n));
        }
        if z.is_zero() && x.is_zero() {
            continue;
        }
        let probe = MajoranaString::new(0, z, x).expect("lengths match");
        let base = if probe.is_hermitian() { 0 } else { 1 };
        let phase = base + if rng.gen() { 2 } else { 0 };
        return probe.with_phase_shift(phase);
    }
}

/// `c_k`, `c̃_k`, or a product of two such factors.
fn random_op<R: Rng>(rng: &mut R, n: usize) -> MajoranaString {
    let factor = |rng: &mut R| {
        let k = rng.gen_range(0..n);
        if rng.gen() {
            MajoranaString::c(n, k)
        } else {
            MajoranaString::ctilde(n, k)
        }
    };
    let first = factor(rng);
    if rng.gen() {
        first
    } else {
        &first * &factor(rng)
    }
}
