//! Shot-level Monte Carlo of the quasi-probability estimator.
//!
//! Each shot runs the broadcasting circuit once: the control outcome `i` is
//! drawn with probability `p_i`, then the two Pauli observables are measured on
//! the post-selected pair. The shot contributes `d * sign * a * b`, with sign
//! `+1` for outcome 0 and `-1` for outcome 1, which averages to
//! `Tr[(sigma_a (x) sigma_b) B(rho)]`.
//!
//! Randomness comes from ChaCha8 with a 64-bit seed and a stream index, so a
//! `(seed, stream)` pair pins down the exact shot sequence.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::circuit::run_broadcast_circuit;
use crate::error::{Error, Result};
use crate::maps::b_canonical;
use crate::matcore::{ComplexMatrix, DensityMatrix};
use crate::pauli::Pauli;

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub shots: u64,
    pub seed: u64,
    /// ChaCha stream index; worker `k` of a parallel run uses `stream + 1 + k`.
    pub stream: u64,
    pub observable_a: Pauli,
    pub observable_b: Pauli,
    pub input_state: DensityMatrix,
}

impl SamplerConfig {
    pub fn new(input_state: DensityMatrix, observable_a: Pauli, observable_b: Pauli, shots: u64, seed: u64) -> Self {
        Self { shots, seed, stream: 0, observable_a, observable_b, input_state }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotRecord {
    pub control: u8,
    pub outcome_a: i8,
    pub outcome_b: i8,
    pub sign: i8,
}

impl ShotRecord {
    /// `d * sign * a * b`.
    pub fn value(&self, d: usize) -> f64 {
        d as f64 * f64::from(self.sign * self.outcome_a * self.outcome_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub estimate: f64,
    /// Sample standard deviation over `sqrt(shots)`.
    pub std_error: f64,
    pub shots_used: u64,
    pub exact_value: f64,
}

/// Outcome distribution of one shot: `P(control)` and, per branch, the joint
/// `(a, b)` distribution ordered `(+,+), (+,-), (-,+), (-,-)`.
#[derive(Debug, Clone)]
struct ShotModel {
    p0: f64,
    joint: [[f64; 4]; 2],
}

const OUTCOMES: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

fn eigen_projector(p: Pauli, outcome: i8) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    match (p, outcome) {
        (Pauli::I, 1) => id,
        (Pauli::I, _) => ComplexMatrix::zeros(2),
        (_, 1) => (&id + &p.matrix()).scale_re(0.5),
        (_, _) => (&id - &p.matrix()).scale_re(0.5),
    }
}

fn joint_distribution(state: &DensityMatrix, a: Pauli, b: Pauli) -> [f64; 4] {
    let mut probs = OUTCOMES.map(|(sa, sb)| {
        let proj = eigen_projector(a, sa).kron(&eigen_projector(b, sb));
        (&proj * state.mat()).trace().re.max(0.0)
    });
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    probs
}

impl ShotModel {
    fn new(cfg: &SamplerConfig) -> Result<Self> {
        let d = cfg.input_state.dim();
        if d != 2 {
            return Err(Error::UnsupportedDimension { dim: d, reason: "shot sampling uses qubit Pauli observables" });
        }
        let run = run_broadcast_circuit(&cfg.input_state, FRAC_PI_2)?;
        Ok(Self {
            p0: run.p0,
            joint: [
                joint_distribution(&run.state0, cfg.observable_a, cfg.observable_b),
                joint_distribution(&run.state1, cfg.observable_a, cfg.observable_b),
            ],
        })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ShotRecord {
        let control = u8::from(rng.random::<f64>() >= self.p0);
        let u: f64 = rng.random();
        let dist = &self.joint[control as usize];
        let mut acc = 0.0;
        let mut pick = 3;
        for (k, p) in dist.iter().enumerate() {
            acc += p;
            if u < acc {
                pick = k;
                break;
            }
        }
        let (outcome_a, outcome_b) = OUTCOMES[pick];
        ShotRecord { control, outcome_a, outcome_b, sign: if control == 0 { 1 } else { -1 } }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn sample_shots(cfg: &SamplerConfig) -> Result<Vec<ShotRecord>> {
    let model = ShotModel::new(cfg)?;
    let mut rng = stream_rng(cfg.seed, cfg.stream);
    Ok((0..cfg.shots).map(|_| model.draw(&mut rng)).collect())
}

/// `Tr[(sigma_a (x) sigma_b) B(rho)]`.
pub fn exact_value(cfg: &SamplerConfig) -> Result<f64> {
    let b = b_canonical(&cfg.input_state)?;
    let obs = cfg.observable_a.matrix().kron(&cfg.observable_b.matrix());
    Ok((&obs * b.mat()).trace().re)
}

fn summarize(sum: f64, sum_sq: f64, n: u64, exact_value: f64) -> EstimateResult {
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    EstimateResult { estimate: mean, std_error: (var / nf).sqrt(), shots_used: n, exact_value }
}

pub fn estimate(cfg: &SamplerConfig, records: &[ShotRecord]) -> Result<EstimateResult> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("cannot estimate from zero shots".into()));
    }
    let d = cfg.input_state.dim();
    let (sum, sum_sq) = records.iter().fold((0.0, 0.0), |(s, q), r| {
        let v = r.value(d);
        (s + v, q + v * v)
    });
    Ok(summarize(sum, sum_sq, records.len() as u64, exact_value(cfg)?))
}

/// Samples and estimates in one pass.
pub fn run(cfg: &SamplerConfig) -> Result<EstimateResult> {
    estimate(cfg, &sample_shots(cfg)?)
}

/// Splits the shots over `workers` independent streams. Per-shot values are
/// `+/- d`, so the merged sums are exact integers and independent of order.
pub fn run_parallel(cfg: &SamplerConfig, workers: usize) -> Result<EstimateResult> {
    if cfg.shots == 0 {
        return Err(Error::InvalidArgument("cannot estimate from zero shots".into()));
    }
    let workers = workers.clamp(1, cfg.shots as usize) as u64;
    let model = ShotModel::new(cfg)?;
    let d = cfg.input_state.dim() as i64;
    let base = cfg.shots / workers;
    let extra = cfg.shots % workers;
    let signed: i64 = (0..workers)
        .into_par_iter()
        .map(|k| {
            let n = base + u64::from(k < extra);
            let mut rng = stream_rng(cfg.seed, cfg.stream + 1 + k);
            (0..n)
                .map(|_| {
                    let r = model.draw(&mut rng);
                    i64::from(r.sign * r.outcome_a * r.outcome_b)
                })
                .sum::<i64>()
        })
        .sum();
    let sum = (signed * d) as f64;
    let sum_sq = (d * d) as f64 * cfg.shots as f64;
    Ok(summarize(sum, sum_sq, cfg.shots, exact_value(cfg)?))
}

/// One-norm of the quasi-probability coefficients `(d+1)/2` and `(d-1)/2`
/// applied to the normalized branches, i.e. `d (p0 + p1) = d`. The estimator
/// variance is inflated by at most its square.
pub fn overhead(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { dim: d, reason: "dimension must be at least 2" });
    }
    let df = d as f64;
    Ok((df + 1.0) / 2.0 + (df - 1.0) / 2.0)
}
