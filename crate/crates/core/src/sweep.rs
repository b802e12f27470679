//! Randomized sweeps probing the CZ bounds over many sampled states.
//!
//! Samples are independent; with the `parallel` feature they are evaluated
//! on the rayon pool, otherwise sequentially. Per-sample seeds derive from
//! `(seed, index)` and results are folded in index order, so the summary is
//! identical either way.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::state::random_state;
use crate::synth::{disentangle3, disentangle3_real, Mode, FIDELITY_TOL, REAL_GATE_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepFailure {
    pub index: usize,
    pub sample_seed: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub mode: &'static str,
    pub samples: usize,
    pub seed: u64,
    pub cz_histogram: BTreeMap<usize, usize>,
    /// Real mode only.
    pub delta_negative_fraction: Option<f64>,
    /// Real mode only: CZ histogram of the `Δ ≥ 0` samples.
    pub cz_histogram_delta_nonneg: Option<BTreeMap<usize, usize>>,
    /// Real mode only: CZ histogram of the `Δ < 0` samples.
    pub cz_histogram_delta_neg: Option<BTreeMap<usize, usize>>,
    pub min_fidelity: f64,
    /// Real mode only.
    pub max_gate_imag: Option<f64>,
    pub failures: Vec<SweepFailure>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Aligned human-readable report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let row = |out: &mut String, k: &str, v: String| {
            let _ = writeln!(out, "{k:<26} {v}");
        };
        row(&mut out, "mode", self.mode.to_string());
        row(&mut out, "samples", self.samples.to_string());
        row(&mut out, "seed", self.seed.to_string());
        row(&mut out, "min_fidelity", format!("{:.17}", self.min_fidelity));
        if let Some(f) = self.delta_negative_fraction {
            row(&mut out, "delta_negative_fraction", format!("{f:.6}"));
        }
        if let Some(m) = self.max_gate_imag {
            row(&mut out, "max_gate_imag", format!("{m:e}"));
        }
        let hist = |out: &mut String, name: &str, h: &BTreeMap<usize, usize>| {
            for (cz, count) in h {
                let _ = writeln!(out, "{:<26} {count}", format!("{name}[cz={cz}]"));
            }
        };
        hist(&mut out, "cz_histogram", &self.cz_histogram);
        if let Some(h) = &self.cz_histogram_delta_nonneg {
            hist(&mut out, "delta>=0", h);
        }
        if let Some(h) = &self.cz_histogram_delta_neg {
            hist(&mut out, "delta<0", h);
        }
        row(&mut out, "failures", self.failures.len().to_string());
        for f in &self.failures {
            let _ = writeln!(out, "  sample {} (seed {}): {}", f.index, f.sample_seed, f.reason);
        }
        row(&mut out, "status", if self.passed() { "PASS" } else { "FAIL" }.to_string());
        out
    }
}

/// Seed of sample `index` within a sweep seeded by `seed`.
pub fn sample_seed(seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

#[derive(Clone, Debug)]
struct Outcome {
    cz: Option<usize>,
    fidelity: f64,
    delta_negative: Option<bool>,
    gate_imag: f64,
    failure: Option<String>,
}

fn evaluate(seed: u64, index: usize, mode: Mode) -> Outcome {
    let s = random_state(sample_seed(seed, index), mode == Mode::Real);
    let (result, bound, delta_negative) = match mode {
        Mode::General => (disentangle3(&s), 3, None),
        Mode::Real => {
            let delta = s.delta().expect("real sample");
            (disentangle3_real(&s), delta.cz_bound(), Some(!delta.is_nonnegative()))
        }
    };
    match result {
        Err(e) => Outcome {
            cz: None,
            fidelity: 0.0,
            delta_negative,
            gate_imag: 0.0,
            failure: Some(e.to_string()),
        },
        Ok(r) => {
            let gate_imag = r.circuit.max_gate_imag();
            let mut problems = Vec::new();
            if r.cz_count > bound {
                problems.push(format!("cz_count {} exceeds bound {bound}", r.cz_count));
            }
            if !(r.fidelity >= 1.0 - FIDELITY_TOL) {
                problems.push(format!("fidelity {}", r.fidelity));
            }
            if mode == Mode::Real && gate_imag > REAL_GATE_TOL {
                problems.push(format!("gate imaginary part {gate_imag:e}"));
            }
            Outcome {
                cz: Some(r.cz_count),
                fidelity: r.fidelity,
                delta_negative,
                gate_imag,
                failure: (!problems.is_empty()).then(|| problems.join("; ")),
            }
        }
    }
}

fn summarize(cfg: &SweepConfig, outcomes: Vec<Outcome>) -> SweepSummary {
    let real = cfg.mode == Mode::Real;
    let mut cz_histogram = BTreeMap::new();
    let mut nonneg = BTreeMap::new();
    let mut neg = BTreeMap::new();
    let mut negatives = 0usize;
    let mut min_fidelity = f64::INFINITY;
    let mut max_gate_imag: f64 = 0.0;
    let mut failures = Vec::new();
    for (index, o) in outcomes.into_iter().enumerate() {
        if let Some(cz) = o.cz {
            *cz_histogram.entry(cz).or_insert(0) += 1;
            match o.delta_negative {
                Some(true) => *neg.entry(cz).or_insert(0) += 1,
                Some(false) => *nonneg.entry(cz).or_insert(0) += 1,
                None => {}
            }
        }
        negatives += usize::from(o.delta_negative == Some(true));
        min_fidelity = min_fidelity.min(o.fidelity);
        max_gate_imag = max_gate_imag.max(o.gate_imag);
        if let Some(reason) = o.failure {
            failures.push(SweepFailure { index, sample_seed: sample_seed(cfg.seed, index), reason });
        }
    }
    SweepSummary {
        mode: if real { "real" } else { "general" },
        samples: cfg.samples,
        seed: cfg.seed,
        cz_histogram,
        delta_negative_fraction: real.then(|| negatives as f64 / cfg.samples as f64),
        cz_histogram_delta_nonneg: real.then_some(nonneg),
        cz_histogram_delta_neg: real.then_some(neg),
        min_fidelity,
        max_gate_imag: real.then_some(max_gate_imag),
        failures,
    }
}

/// Single-threaded sweep.
pub fn run_sweep_sequential(cfg: &SweepConfig) -> SweepSummary {
    let outcomes = (0..cfg.samples).map(|i| evaluate(cfg.seed, i, cfg.mode)).collect();
    summarize(cfg, outcomes)
}

/// Sweep on the rayon pool.
#[cfg(feature = "parallel")]
pub fn run_sweep_parallel(cfg: &SweepConfig) -> SweepSummary {
    use rayon::prelude::*;
    let outcomes = (0..cfg.samples)
        .into_par_iter()
        .map(|i| evaluate(cfg.seed, i, cfg.mode))
        .collect();
    summarize(cfg, outcomes)
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
pub fn run_sweep(cfg: &SweepConfig) -> SweepSummary {
    #[cfg(feature = "parallel")]
    {
        run_sweep_parallel(cfg)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_sweep_sequential(cfg)
    }
}
