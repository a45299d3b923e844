//! Differential testing of the stabilizer simulator against the dense oracle.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{random_circuit, random_hermitian_even, Circuit, CircuitError, GateSpec, GateWeights};
use crate::dense::{DenseState, OracleError};
use crate::exact::ExactAmplitude;
use crate::state::{StabilizerState, StateError};

/// Deliberate corruption of the fast path, for testing the harness itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Adds `e^{iπ/4}` to the global phase after every `braid` gate.
    BraidPhase,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: usize,
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub weights: GateWeights,
    /// Random Hermitian even strings whose expectation is compared per trial.
    pub expectations: usize,
    pub fault: Option<Fault>,
}

impl VerifyConfig {
    pub fn new(n: usize, depth: usize, trials: usize, seed: u64) -> Self {
        VerifyConfig {
            n,
            depth,
            trials,
            seed,
            tol: 1e-10,
            weights: GateWeights::default(),
            expectations: 8,
            fault: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("tolerance must be positive")]
    Tolerance,
    #[error("at least one trial is required")]
    NoTrials,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Failure {
    /// Amplitudes first diverge after gate `gate` (0-based).
    Amplitudes { gate: usize, deviation: f64 },
    Expectation { deviation: f64 },
    /// Overlap with the next trial's state.
    Overlap { deviation: f64 },
    /// The fast path rejected gate `gate`.
    Error { gate: usize, error: StateError },
    /// Tableau identities or `b_{n−1} = 0` broke after gate `gate`.
    Invariant { gate: usize },
}

impl Failure {
    pub fn is_internal(&self) -> bool {
        match self {
            Failure::Error { error, .. } => error.is_internal(),
            Failure::Invariant { .. } => true,
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrialReport {
    pub index: usize,
    pub seed: u64,
    pub amplitude_deviation: f64,
    pub expectation_deviation: f64,
    pub overlap_deviation: f64,
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub trials: Vec<TrialReport>,
    pub tol: f64,
}

impl VerifyReport {
    pub fn max_deviation(&self) -> f64 {
        self.trials
            .iter()
            .flat_map(|t| [t.amplitude_deviation, t.expectation_deviation, t.overlap_deviation])
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialReport> {
        self.trials.iter().filter(|t| t.failure.is_some())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Seed of trial `index`, independent of scheduling.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

struct Outcome {
    report: TrialReport,
    state: Option<(StabilizerState, DenseState)>,
}

pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(VerifyError::Tolerance);
    }
    if cfg.trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    // Fail fast on configuration errors before fanning out.
    random_circuit(cfg.n, 0, 0, &cfg.weights)?;
    DenseState::vacuum(cfg.n)?;

    let mut outcomes: Vec<Outcome> = (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).collect();

    let pairs: Vec<Option<f64>> = (0..outcomes.len())
        .into_par_iter()
        .map(|i| {
            let next = outcomes.get(i + 1)?;
            let ((a, da), (b, db)) = (outcomes[i].state.as_ref()?, next.state.as_ref()?);
            let exact = a.inner_product(b).ok()?.to_complex();
            Some((exact - da.inner(db).ok()?).norm())
        })
        .collect();
    for (outcome, dev) in outcomes.iter_mut().zip(pairs) {
        let report = &mut outcome.report;
        if let Some(dev) = dev {
            report.overlap_deviation = dev;
            if dev > cfg.tol && report.failure.is_none() {
                report.failure = Some(Failure::Overlap { deviation: dev });
            }
        }
    }
    Ok(VerifyReport {
        trials: outcomes.into_iter().map(|o| o.report).collect(),
        tol: cfg.tol,
    })
}

fn apply_gate(st: &mut StabilizerState, gate: &GateSpec, fault: Option<Fault>) -> Result<(), StateError> {
    gate.apply(st)?;
    if fault == Some(Fault::BraidPhase) && matches!(gate, GateSpec::BraidEta { .. }) {
        st.add_phase(1);
    }
    Ok(())
}

fn deviation(st: &StabilizerState, oracle: &DenseState) -> Result<f64, StateError> {
    let exact: Vec<Complex64> = st.amplitude_vector()?.into_iter().map(ExactAmplitude::to_complex).collect();
    Ok(oracle.max_deviation(&exact))
}

fn run_trial(cfg: &VerifyConfig, index: usize) -> Outcome {
    let seed = trial_seed(cfg.seed, index);
    let circuit = random_circuit(cfg.n, cfg.depth, seed, &cfg.weights).expect("config checked");
    let mut report = TrialReport {
        index,
        seed,
        amplitude_deviation: 0.0,
        expectation_deviation: 0.0,
        overlap_deviation: 0.0,
        failure: None,
    };
    let mut st = StabilizerState::vacuum(cfg.n);
    for (gate_index, gate) in circuit.gates().iter().enumerate() {
        if let Err(error) = apply_gate(&mut st, gate, cfg.fault) {
            report.failure = Some(Failure::Error { gate: gate_index, error });
            return Outcome { report, state: None };
        }
        if !st.tableau().verify_identities() || st.b().get(cfg.n - 1) {
            report.failure = Some(Failure::Invariant { gate: gate_index });
            return Outcome { report, state: None };
        }
    }
    let oracle = circuit.run_dense().expect("oracle size checked");

    match deviation(&st, &oracle) {
        Ok(dev) => report.amplitude_deviation = dev,
        Err(error) => {
            report.failure = Some(Failure::Error { gate: circuit.len(), error });
            return Outcome { report, state: None };
        }
    }
    if report.amplitude_deviation > cfg.tol {
        let (gate, deviation) = bisect(&circuit, cfg.fault, cfg.tol);
        report.failure = Some(Failure::Amplitudes { gate, deviation });
        return Outcome { report, state: None };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_e4e5);
    for _ in 0..cfg.expectations {
        let g = random_hermitian_even(&mut rng, cfg.n);
        let exact = st.expectation(&g).map(ExactAmplitude::to_complex);
        let dense = oracle.expectation(&g).expect("oracle size checked");
        let dev = exact.map_or(f64::INFINITY, |e| (e - dense).norm());
        report.expectation_deviation = report.expectation_deviation.max(dev);
    }
    if report.expectation_deviation > cfg.tol {
        report.failure = Some(Failure::Expectation {
            deviation: report.expectation_deviation,
        });
    }
    Outcome {
        report,
        state: Some((st, oracle)),
    }
}

/// Shortest failing prefix, found by bisection over prefix lengths; returns
/// the index of its last gate and the deviation it produces.
pub fn bisect(circuit: &Circuit, fault: Option<Fault>, tol: f64) -> (usize, f64) {
    let prefix_deviation = |len: usize| -> f64 {
        let mut st = StabilizerState::vacuum(circuit.n());
        for gate in &circuit.gates()[..len] {
            if apply_gate(&mut st, gate, fault).is_err() {
                return f64::INFINITY;
            }
        }
        let oracle = circuit.prefix(len).run_dense().expect("oracle size checked");
        deviation(&st, &oracle).unwrap_or(f64::INFINITY)
    };
    let (mut lo, mut hi) = (0, circuit.len());
    let mut worst = prefix_deviation(hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let dev = prefix_deviation(mid);
        if dev > tol {
            hi = mid;
            worst = dev;
        } else {
            lo = mid;
        }
    }
    (hi.saturating_sub(1), worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let cfg = VerifyConfig::new(4, 30, 6, 3);
        let report = run(&cfg).unwrap();
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert!(report.max_deviation() < 1e-10);
    }

    #[test]
    fn injected_fault_is_localized() {
        let mut cfg = VerifyConfig::new(3, 20, 4, 11);
        cfg.weights = GateWeights {
            braid: 1.0,
            ..GateWeights::default()
        };
        cfg.fault = Some(Fault::BraidPhase);
        let report = run(&cfg).unwrap();
        let failed: Vec<_> = report.failures().collect();
        assert!(!failed.is_empty());
        for t in failed {
            let circuit = random_circuit(3, 20, t.seed, &cfg.weights).unwrap();
            match &t.failure {
                Some(Failure::Amplitudes { gate, .. }) => {
                    assert!(matches!(circuit.gates()[*gate], GateSpec::BraidEta { .. }));
                    assert!(circuit.gates()[..*gate].iter().all(|g| !matches!(g, GateSpec::BraidEta { .. })));
                }
                other => panic!("unexpected failure {other:?}"),
            }
        }
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_eq!(trial_seed(1, 5), trial_seed(1, 5));
    }
}
