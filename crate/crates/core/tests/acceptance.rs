//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criterion 7 measures wall-clock scaling; its line is reported but does not
//! fail the run, since the outcome depends on the machine and on word-level
//! bit packing (see README).

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use mstab::circuit::{random_circuit, random_hermitian_even, GateSpec, GateWeights};
use mstab::dense::DenseState;
use mstab::dump;
use mstab::scaling::{self, BenchConfig, BenchOp};
use mstab::state::{StabilizerState, Step2Case};
use mstab::verify::trial_seed;
use mstab::{Circuit, ExactAmplitude, MajoranaString, Sign};

const TOL: f64 = 1e-10;

struct Line {
    id: u8,
    pass: bool,
    gating: bool,
    detail: String,
}

fn random_pair(seed: u64, n: usize, depth: usize) -> (Circuit, StabilizerState) {
    let c = random_circuit(n, depth, seed, &GateWeights::default()).unwrap();
    let st = c.run().unwrap();
    (c, st)
}

fn exact_vector(st: &StabilizerState) -> Vec<Complex64> {
    st.amplitude_vector().unwrap().into_iter().map(ExactAmplitude::to_complex).collect()
}

#[derive(Default)]
struct Corpus {
    circuits: usize,
    max_dev: f64,
    mismatches: usize,
    gates: usize,
    tableau_violations: usize,
    last_braid_violations: usize,
    internal_errors: usize,
    superpositions: [usize; 3],
}

impl Corpus {
    fn merge(mut self, o: Corpus) -> Corpus {
        self.circuits += o.circuits;
        self.max_dev = self.max_dev.max(o.max_dev);
        self.mismatches += o.mismatches;
        self.gates += o.gates;
        self.tableau_violations += o.tableau_violations;
        self.last_braid_violations += o.last_braid_violations;
        self.internal_errors += o.internal_errors;
        for k in 0..3 {
            self.superpositions[k] += o.superpositions[k];
        }
        self
    }
}

/// Criteria 1, 4 and 6 share one corpus: n = 2..8, 200 circuits each, depth 10n.
fn corpus() -> Corpus {
    (2..=8usize)
        .flat_map(|n| (0..200).map(move |i| (n, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, i)| {
            let mut out = Corpus {
                circuits: 1,
                ..Corpus::default()
            };
            let seed = trial_seed(1000 + n as u64, i);
            let c = random_circuit(n, 10 * n, seed, &GateWeights::default()).unwrap();
            let mut st = StabilizerState::vacuum(n);
            for gate in c.gates() {
                let branch = match gate {
                    GateSpec::BraidEta { j, k } => st.apply_braid_eta(*j, *k).map(Some),
                    GateSpec::Rot { string, sign } => st.apply_rotation(string, *sign).map(Some),
                    other => other.apply(&mut st).map(|_| None),
                };
                match branch {
                    Ok(Some(b)) => {
                        let slot = match b.case {
                            Step2Case::Diagonal => 0,
                            Step2Case::OddSegment => 1,
                            Step2Case::EvenSegments => 2,
                        };
                        out.superpositions[slot] += 1;
                    }
                    Ok(None) => {}
                    Err(_) => {
                        out.internal_errors += 1;
                        return out;
                    }
                }
                out.gates += 1;
                if !st.tableau().verify_identities() {
                    out.tableau_violations += 1;
                }
                if st.b().get(n - 1) {
                    out.last_braid_violations += 1;
                }
            }
            let oracle = c.run_dense().unwrap();
            let dev = oracle.max_deviation(&exact_vector(&st));
            out.max_dev = dev;
            if dev > TOL {
                out.mismatches += 1;
            }
            out
        })
        .reduce(Corpus::default, Corpus::merge)
}

fn criterion_2() -> Line {
    let results: Vec<(f64, bool)> = (0..1000usize)
        .into_par_iter()
        .map(|i| {
            let n = 2 + i % 5;
            let (ca, a) = random_pair(trial_seed(2, 2 * i), n, 10 * n);
            let (cb, b) = random_pair(trial_seed(2, 2 * i + 1), n, 10 * n);
            let exact = a.inner_product(&b).unwrap().to_complex();
            let dense = ca.run_dense().unwrap().inner(&cb.run_dense().unwrap()).unwrap();
            (((exact - dense).norm()), b.b().count_ones() < a.b().count_ones())
        })
        .collect();
    let max = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let flipped = results.iter().filter(|r| r.1).count();
    Line {
        id: 2,
        pass: max <= TOL && flipped > 0,
        gating: true,
        detail: format!("1000 pairs, n 2..6, max deviation {max:.2e}, {flipped} via the conjugate direction"),
    }
}

fn criterion_3() -> Line {
    let results: Vec<(f64, bool)> = (0..1000usize)
        .into_par_iter()
        .map(|i| {
            let n = 2 + i % 5;
            let seed = trial_seed(3, i);
            let (c, st) = random_pair(seed, n, 10 * n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_hermitian_even(&mut rng, n);
            let exact = st.expectation(&g).unwrap();
            let dense = c.run_dense().unwrap().expectation(&g).unwrap();
            let shaped = match exact {
                ExactAmplitude::Zero => true,
                ExactAmplitude::Value { half_powers, .. } => half_powers == 0,
            };
            ((exact.to_complex() - dense).norm(), shaped)
        })
        .collect();
    let max = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let shaped = results.iter().all(|r| r.1);
    Line {
        id: 3,
        pass: max <= TOL && shaped,
        gating: true,
        detail: format!("1000 strings, n 2..6, max deviation {max:.2e}, values in {{0}} or unit eighth roots: {shaped}"),
    }
}

fn criterion_5() -> Line {
    let tol = 1e-12;
    let one = Complex64::new(1.0, 0.0);
    let failures: usize = (0..100usize)
        .into_par_iter()
        .map(|i| {
            let n = 2 + i % 7;
            let seed = trial_seed(5, i);
            let (_, st) = random_pair(seed, n, 10 * n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let j = rng.gen_range(0..n);
            let k = (j + rng.gen_range(1..n)) % n;
            let overlap = |a: &StabilizerState, b: &StabilizerState| a.inner_product(b).unwrap().to_complex();
            let mut bad = 0;

            let mut eta = st.clone();
            for _ in 0..4 {
                eta.apply_eta_p(j, Sign::Plus).unwrap();
            }
            bad += ((overlap(&st, &eta) + one).norm() > tol) as usize;

            let mut w = st.clone();
            for _ in 0..4 {
                w.apply_w(j, k, Sign::Minus).unwrap();
            }
            bad += ((overlap(&st, &w) + one).norm() > tol) as usize;

            let mut braided = st.clone();
            braided.apply_braid_eta(j, k).unwrap();
            braided.apply_braid_eta(j, k).unwrap();
            let mut direct = st.clone();
            direct
                .apply_majorana(&(&MajoranaString::c(n, j) * &MajoranaString::c(n, k)))
                .unwrap();
            bad += ((overlap(&direct, &braided) - one).norm() > tol) as usize;

            let g = random_hermitian_even(&mut rng, n);
            let mut rot = st.clone();
            rot.apply_rotation(&g, Sign::Plus).unwrap();
            rot.apply_rotation(&g, Sign::Minus).unwrap();
            bad += ((overlap(&st, &rot) - one).norm() > tol) as usize;
            bad
        })
        .sum();
    Line {
        id: 5,
        pass: failures == 0,
        gating: true,
        detail: format!("eta^4 = -I, W^4 = -I, braid^2 = c_j c_k, rot- rot+ = I on 100 states: {failures} failures"),
    }
}

fn criterion_7() -> Line {
    let start = Instant::now();
    let cfg = BenchConfig {
        ops: vec![BenchOp::Braid, BenchOp::InnerProduct, BenchOp::Eta, BenchOp::W],
        ..BenchConfig::default()
    };
    let rows = scaling::bench(&cfg);
    let elapsed = start.elapsed().as_secs_f64();
    let checks = [
        (BenchOp::Braid, 1.6, 2.4),
        (BenchOp::InnerProduct, 2.3, 3.4),
        (BenchOp::Eta, 0.7, 1.4),
        (BenchOp::W, 0.7, 1.4),
    ];
    let mut pass = elapsed < 300.0;
    let mut parts = Vec::new();
    for (op, lo, hi) in checks {
        let s = scaling::loglog_slope(&rows, op).unwrap_or(f64::NAN);
        let ok = (lo..=hi).contains(&s);
        pass &= ok;
        parts.push(format!("{op} {s:.2} in [{lo}, {hi}] {}", if ok { "ok" } else { "no" }));
    }
    Line {
        id: 7,
        pass,
        gating: false,
        detail: format!("n 64..1024: {}; {elapsed:.0} s", parts.join(", ")),
    }
}

fn criterion_8() -> Line {
    let bad: usize = (0..1000usize)
        .into_par_iter()
        .map(|i| {
            let n = 2 + i % 9;
            let seed = trial_seed(8, i);
            let (c, st) = random_pair(seed, n, 3 * n);
            let text = c.serialize();
            let circuit_ok = Circuit::parse(&text).map(|p| p.serialize() == text).unwrap_or(false);
            let json = dump::to_json(&st);
            let dump_ok = dump::from_json(&json).map(|s| dump::to_json(&s) == json).unwrap_or(false);
            (!circuit_ok) as usize + (!dump_ok) as usize
        })
        .sum();
    Line {
        id: 8,
        pass: bad == 0,
        gating: true,
        detail: format!("1000 circuits and 1000 state dumps byte-identical after a round trip: {bad} mismatches"),
    }
}

fn main() -> ExitCode {
    // Smoke check that the oracle agrees with the trivial vacuum state.
    assert_eq!(DenseState::vacuum(2).unwrap().amplitudes()[0], Complex64::new(1.0, 0.0));

    let c = corpus();
    let [diag, odd, even] = c.superpositions;
    let mut lines = vec![
        Line {
            id: 1,
            pass: c.mismatches == 0 && c.internal_errors == 0 && c.circuits == 1400,
            gating: true,
            detail: format!(
                "{} circuits, n 2..8, depth 10n: {} mismatches, max deviation {:.2e}",
                c.circuits, c.mismatches, c.max_dev
            ),
        },
        criterion_2(),
        criterion_3(),
        Line {
            id: 4,
            pass: c.tableau_violations == 0 && c.gates > 0,
            gating: true,
            detail: format!("tableau identities after {} gates: {} violations", c.gates, c.tableau_violations),
        },
        criterion_5(),
        Line {
            id: 6,
            pass: c.last_braid_violations == 0 && c.internal_errors == 0 && odd > 0 && even > 0,
            gating: true,
            detail: format!(
                "b_(n-1) = 0 after {} gates ({} violations); {} superposition updates \
                 ({diag} diagonal, {odd} odd-segment, {even} even-segment): {} invariant errors",
                c.gates,
                c.last_braid_violations,
                diag + odd + even,
                c.internal_errors
            ),
        },
        criterion_7(),
        criterion_8(),
    ];
    lines.sort_by_key(|l| l.id);
    let mut ok = true;
    for l in &lines {
        let status = if l.pass { "PASS" } else { "FAIL" };
        let note = if l.gating || l.pass { "" } else { " (reported, not gating)" };
        println!("criterion {}: {status}{note}  {}", l.id, l.detail);
        ok &= l.pass || !l.gating;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
