//! Maximization of a real function of an orthonormal basis (the columns of a
//! unitary). Random Haar samples are scored in parallel; the best few are then
//! refined by a pattern search over rotations U ← exp(iθP)·U, P running over
//! all non-identity Pauli strings, with the step halved whenever a full sweep
//! brings no improvement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::PauliString;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, I};

pub const DEFAULT_SEED: u64 = 0xD15C0;
pub const DEFAULT_BUDGET: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Number of random bases scored before refinement.
    pub budget: usize,
    pub seed: u64,
    /// Number of best samples refined.
    pub restarts: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Cap on objective evaluations per refinement run.
    pub max_evaluations: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            restarts: 3,
            initial_step: 0.2,
            min_step: 1e-6,
            max_evaluations: 200_000,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: usize, seed: u64) -> Self {
        Self {
            budget,
            seed,
            ..Self::default()
        }
    }

    /// Random sampling only.
    pub fn without_refinement(mut self) -> Self {
        self.restarts = 0;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: f64,
    pub basis: CMatrix,
    /// Best value among the random samples, before refinement.
    pub sampled_value: f64,
    pub evaluations: usize,
}

/// The i-th sample comes from its own ChaCha8 stream, so results do not depend
/// on the thread count.
pub fn sample_unitary(dim: usize, seed: u64, index: usize) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    linalg::haar_unitary(dim, &mut rng)
}

pub fn maximize_over_bases<F>(dim: usize, config: &SearchConfig, objective: F) -> Result<SearchResult>
where
    F: Fn(&CMatrix) -> f64 + Sync,
{
    if config.budget == 0 {
        return Err(Error::EmptyBudget);
    }
    let scores: Vec<f64> = (0..config.budget)
        .into_par_iter()
        .map(|i| objective(&sample_unitary(dim, config.seed, i)))
        .collect();

    let mut ranked: Vec<usize> = (0..scores.len()).collect();
    ranked.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let sampled_value = scores[ranked[0]];

    let generators = rotation_generators(dim);
    let refined: Vec<(f64, CMatrix, usize)> = ranked
        .iter()
        .take(config.restarts.max(1))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|&i| {
            let start = sample_unitary(dim, config.seed, i);
            if config.restarts == 0 {
                (scores[i], start, 0)
            } else {
                refine(start, scores[i], &generators, config, &objective)
            }
        })
        .collect();

    let mut best = 0;
    for (k, r) in refined.iter().enumerate() {
        if r.0 > refined[best].0 {
            best = k;
        }
    }
    let evaluations = config.budget + refined.iter().map(|r| r.2).sum::<usize>();
    let (value, basis, _) = refined.into_iter().nth(best).expect("at least one start");
    Ok(SearchResult {
        value,
        basis,
        sampled_value,
        evaluations,
    })
}

fn rotation_generators(dim: usize) -> Vec<CMatrix> {
    let qubits = linalg::log2_exact(dim);
    (1..dim * dim).map(|r| PauliString::from_lex_rank(r, qubits).matrix() * I).collect()
}

/// exp(iθP) = cos θ·I + i sin θ·P for a Pauli string P.
fn rotate(u: &CMatrix, i_pauli: &CMatrix, theta: f64) -> CMatrix {
    let step = linalg::identity(u.nrows()) * c(theta.cos(), 0.0) + i_pauli * c(theta.sin(), 0.0);
    step * u
}

fn refine<F>(mut u: CMatrix, mut value: f64, generators: &[CMatrix], config: &SearchConfig, objective: &F) -> (f64, CMatrix, usize)
where
    F: Fn(&CMatrix) -> f64,
{
    let mut step = config.initial_step;
    let mut evaluations = 0;
    while step >= config.min_step && evaluations < config.max_evaluations {
        let mut improved = false;
        for g in generators {
            for theta in [step, -step] {
                let candidate = rotate(&u, g, theta);
                let v = objective(&candidate);
                evaluations += 1;
                if v > value {
                    value = v;
                    u = candidate;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (value, u, evaluations)
}
