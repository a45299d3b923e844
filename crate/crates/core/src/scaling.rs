//! Wall-clock scaling of gates and queries against `n`.
//!
//! Cheap operations are timed in batches sized so each batch lasts at least
//! [`BenchConfig::min_batch`]; the reported time is the median per-operation
//! time over `reps` batches. State preparation is excluded from timing.

use std::fmt;
use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVec;
use crate::circuit::{random_circuit, random_hermitian_even, GateSpec, GateWeights};
use crate::state::StabilizerState;
use crate::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchOp {
    Eta,
    W,
    Braid,
    Rotation,
    Amplitude,
    InnerProduct,
}

impl BenchOp {
    pub const ALL: [BenchOp; 6] = [
        BenchOp::Eta,
        BenchOp::W,
        BenchOp::Braid,
        BenchOp::Rotation,
        BenchOp::Amplitude,
        BenchOp::InnerProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchOp::Eta => "eta",
            BenchOp::W => "w",
            BenchOp::Braid => "braid",
            BenchOp::Rotation => "rot",
            BenchOp::Amplitude => "amp",
            BenchOp::InnerProduct => "inner",
        }
    }
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub min_batch: Duration,
    pub ops: Vec<BenchOp>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ns: vec![64, 128, 256, 512, 1024],
            reps: 7,
            seed: 1,
            min_batch: Duration::from_millis(20),
            ops: BenchOp::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub op: BenchOp,
    pub n: usize,
    /// Operations per timed batch.
    pub batch: usize,
    pub median_secs: f64,
}

/// A generic state on `n` sites: random η_j, W_{jk} and braid gates, `2n` deep.
pub fn random_state(n: usize, seed: u64) -> StabilizerState {
    let weights = GateWeights {
        rot: 0.0,
        op: 0.0,
        ..GateWeights::default()
    };
    random_circuit(n, 2 * n, seed, &weights)
        .expect("n >= 2")
        .run()
        .expect("generated gates are valid")
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

fn measure<S>(reps: usize, min_batch: Duration, setup: impl Fn() -> S, op: impl Fn(&mut S, usize)) -> (usize, f64) {
    let run = |batch: usize| {
        let mut s = setup();
        let start = Instant::now();
        for i in 0..batch {
            op(&mut s, i);
        }
        let elapsed = start.elapsed();
        black_box(&s);
        elapsed
    };
    let mut batch = 1;
    while batch < 1 << 24 && run(batch) < min_batch {
        batch *= 2;
    }
    let times = (0..reps.max(1)).map(|_| run(batch).as_secs_f64() / batch as f64).collect();
    (batch, median(times))
}

fn gate_pool(rng: &mut ChaCha8Rng, n: usize, op: BenchOp) -> Vec<GateSpec> {
    let pair = |rng: &mut ChaCha8Rng| {
        let j = rng.gen_range(0..n);
        let k = (j + rng.gen_range(1..n)) % n;
        (j, k)
    };
    let sign = |rng: &mut ChaCha8Rng| if rng.gen() { Sign::Plus } else { Sign::Minus };
    (0..256)
        .map(|_| match op {
            BenchOp::Eta => GateSpec::EtaP {
                j: rng.gen_range(0..n),
                sign: sign(rng),
            },
            BenchOp::W => {
                let (j, k) = pair(rng);
                GateSpec::W { j, k, sign: sign(rng) }
            }
            BenchOp::Braid => {
                let (j, k) = pair(rng);
                GateSpec::BraidEta { j, k }
            }
            _ => GateSpec::Rot {
                string: random_hermitian_even(rng, n),
                sign: sign(rng),
            },
        })
        .collect()
}

pub fn bench_one(op: BenchOp, n: usize, cfg: &BenchConfig) -> BenchRow {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (n as u64) << 16);
    let st = random_state(n, rng.gen());
    let (batch, median_secs) = match op {
        BenchOp::Amplitude => {
            let xs: Vec<BitVec> = (0..256)
                .map(|_| BitVec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>()))
                .collect();
            measure(cfg.reps, cfg.min_batch, || (), |_, i| {
                black_box(st.amplitude(&xs[i % xs.len()]).expect("lengths match"));
            })
        }
        BenchOp::InnerProduct => {
            let other = random_state(n, rng.gen());
            measure(cfg.reps, cfg.min_batch, || (), |_, _| {
                black_box(st.inner_product(&other).expect("lengths match"));
            })
        }
        gate_op => {
            let gates = gate_pool(&mut rng, n, gate_op);
            measure(
                cfg.reps,
                cfg.min_batch,
                || st.clone(),
                |s, i| {
                    gates[i % gates.len()].apply(s).expect("generated gates are valid");
                },
            )
        }
    };
    BenchRow {
        op,
        n,
        batch,
        median_secs,
    }
}

pub fn bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &n in &cfg.ns {
        for &op in &cfg.ops {
            rows.push(bench_one(op, n, cfg));
        }
    }
    rows
}

/// Least-squares slope of `ln t` against `ln n` over the rows for `op`.
pub fn loglog_slope(rows: &[BenchRow], op: BenchOp) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.op == op && r.median_secs > 0.0)
        .map(|r| ((r.n as f64).ln(), r.median_secs.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
