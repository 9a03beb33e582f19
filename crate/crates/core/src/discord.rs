//! Mutual information, classical correlation and quantum discord of a
//! diagonal-T GBSS, measured on subsystem A.
//!
//! Every outcome of a projective measurement on A leaves B in a state
//! (1/M)(I + Σ vⱼγⱼ) whose spectrum is (1 ± r)/M, r = ‖v‖, each with
//! multiplicity M/2. The classical correlation is therefore a function of the
//! conditional Bloch length alone, increasing in r, and the optimal
//! measurement is the one that maximizes r. The maximum is r = max|tⱼ|.

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::GammaConvention;
use crate::entropy::{powq, tsallis_unit, EntropySpec};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measurement::{self, CoherenceVector, EffectFrame};
use crate::search::{self, SearchConfig};
use crate::state::{self, DensityMatrix, GbssSpec};

/// Rejects specs with local vectors and specs outside the physical polytope.
pub fn require_physical(spec: &GbssSpec) -> Result<()> {
    spec.validate()?;
    if spec.has_local_vectors() {
        return Err(Error::NonzeroLocalVectors);
    }
    let check = state::physical_check(spec)?;
    if !check.physical {
        let min_eigenvalue = check.margins.iter().copied().fold(f64::INFINITY, f64::min);
        return Err(Error::NotPhysical { min_eigenvalue });
    }
    Ok(())
}

fn uniform(dim: usize) -> Vec<f64> {
    vec![1.0 / dim as f64; dim]
}

/// S(A) + S(B) − S(AB) from the closed-form spectrum; both marginals are maximally mixed.
pub fn mutual_information(spec: &GbssSpec, entropy: EntropySpec) -> Result<f64> {
    require_physical(spec)?;
    let (n_dim, m_dim) = spec.dims();
    let joint = state::closed_form_spectrum(spec)?;
    Ok(entropy.of_spectrum(&uniform(n_dim)) + entropy.of_spectrum(&uniform(m_dim)) - entropy.of_spectrum(&joint))
}

/// S(A) + S(B) − S(AB) of an arbitrary dense state on C^N ⊗ C^M.
pub fn mutual_information_dense(rho: &DensityMatrix, dims: (usize, usize), entropy: EntropySpec) -> Result<f64> {
    let (n, m) = dims;
    if rho.dim != n * m {
        return Err(Error::DimensionMismatch { got: rho.dim, n, m });
    }
    let a = linalg::partial_trace_b(&rho.data, n, m);
    let b = linalg::partial_trace_a(&rho.data, n, m);
    Ok(entropy.of_matrix(&a) + entropy.of_matrix(&b) - entropy.of_matrix(&rho.data))
}

/// Classical correlation when every outcome leaves B with Bloch length `r`.
///
/// * von Neumann: ((1+r)/2)log(1+r) + ((1−r)/2)log(1−r)
/// * Rényi: −log(g)/(1−q)
/// * Tsallis: M^{1−q}(1−g)/(2^{1−q}−1)
///
/// with g = ((1+r)^q + (1−r)^q)/2.
pub fn classical_correlation_at(r: f64, m_dim: usize, entropy: EntropySpec) -> f64 {
    let g = |q: f64| 0.5 * (powq(1.0 + r, q) + powq(1.0 - r, q));
    match entropy {
        EntropySpec::VonNeumann => [1.0 + r, 1.0 - r]
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| 0.5 * v * v.log2())
            .sum(),
        EntropySpec::Renyi(q) => -g(q).log2() / (1.0 - q),
        EntropySpec::Tsallis(q) => (m_dim as f64).powf(1.0 - q) * (1.0 - g(q)) / tsallis_unit(q),
    }
}

pub fn classical_correlation_closed(spec: &GbssSpec, entropy: EntropySpec) -> Result<f64> {
    let entropy = entropy.validate()?;
    require_physical(spec)?;
    Ok(classical_correlation_at(spec.t_max(), spec.dims().1, entropy))
}

/// C(U) = S(ρ_B) − Σₖ pₖ S(ρ_B|k) for the projective measurement on A given by
/// the columns of `u`.
pub fn measured_correlation(rho: &CMatrix, dims: (usize, usize), u: &CMatrix, entropy: EntropySpec, marginal_entropy: f64) -> f64 {
    let (n, m) = dims;
    let mut value = marginal_entropy;
    for k in 0..n {
        let v: Vec<Complex64> = u.column(k).iter().copied().collect();
        if let Some((p, conditional)) = measurement::conditional_state(rho, &v, m) {
            value -= p * entropy.of_matrix(&conditional);
        }
    }
    value
}

/// Result of the numerical maximization over measurement bases on A.
#[derive(Clone, Debug, Serialize)]
pub struct OracleOutcome {
    pub classical_corr: f64,
    /// Probability-weighted mean of μ over the best basis' outcomes.
    pub mu_best: f64,
    pub evaluations: usize,
    #[serde(skip)]
    pub basis: CMatrix,
}

pub fn discord_oracle(spec: &GbssSpec, entropy: EntropySpec, config: &SearchConfig, convention: GammaConvention) -> Result<OracleOutcome> {
    let entropy = entropy.validate()?;
    require_physical(spec)?;
    if config.budget == 0 {
        return Err(Error::EmptyBudget);
    }
    let dims = spec.dims();
    let rho = state::realize(spec, convention)?;
    let marginal = entropy.of_matrix(&linalg::partial_trace_a(&rho.data, dims.0, dims.1));
    let result = search::maximize_over_bases(dims.0, config, |u| measured_correlation(&rho.data, dims, u, entropy, marginal))?;
    let frame = EffectFrame::new(dims.0, convention)?;
    let mu_best = mean_mu(spec, &rho.data, &result.basis, &frame);
    Ok(OracleOutcome {
        classical_corr: result.value,
        mu_best,
        evaluations: result.evaluations,
        basis: result.basis,
    })
}

fn mean_mu(spec: &GbssSpec, rho: &CMatrix, u: &CMatrix, frame: &EffectFrame) -> f64 {
    let (_, m) = spec.dims();
    (0..u.ncols())
        .map(|k| {
            let v: Vec<Complex64> = u.column(k).iter().copied().collect();
            let p = measurement::conditional_state(rho, &v, m).map_or(0.0, |(p, _)| p);
            let e = frame.coherence_vector(&(u.column(k) * u.column(k).adjoint()));
            p * measurement::mu(spec, &e, frame)
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscordReport {
    pub entropy: EntropySpec,
    pub mutual_info: f64,
    pub classical_corr_closed: f64,
    pub classical_corr_oracle: Option<f64>,
    pub discord_closed: f64,
    pub discord_oracle: Option<f64>,
    pub mu_max: f64,
    pub mu_best: Option<f64>,
    /// Index of the measured γ.
    pub argmax: usize,
    pub optimal_e: CoherenceVector,
    /// classical_corr_closed − classical_corr_oracle.
    pub gap: Option<f64>,
    pub oracle_evaluations: Option<usize>,
}

/// Closed-form discord D = I − C; oracle fields are left empty.
pub fn discord_closed(spec: &GbssSpec, entropy: EntropySpec, convention: GammaConvention) -> Result<DiscordReport> {
    let entropy = entropy.validate()?;
    let mutual_info = mutual_information(spec, entropy)?;
    let classical = classical_correlation_closed(spec, entropy)?;
    let optimal = measurement::optimal_povm(spec, convention)?;
    Ok(DiscordReport {
        entropy,
        mutual_info,
        classical_corr_closed: classical,
        classical_corr_oracle: None,
        discord_closed: mutual_info - classical,
        discord_oracle: None,
        mu_max: optimal.mu_max,
        mu_best: None,
        argmax: optimal.argmax,
        optimal_e: optimal.povm.effects[0].coherence.clone(),
        gap: None,
        oracle_evaluations: None,
    })
}

/// Closed form plus oracle.
pub fn analyze(spec: &GbssSpec, entropy: EntropySpec, config: &SearchConfig, convention: GammaConvention) -> Result<DiscordReport> {
    let mut report = discord_closed(spec, entropy, convention)?;
    let oracle = discord_oracle(spec, entropy, config, convention)?;
    report.classical_corr_oracle = Some(oracle.classical_corr);
    report.discord_oracle = Some(report.mutual_info - oracle.classical_corr);
    report.mu_best = Some(oracle.mu_best);
    report.gap = Some(report.classical_corr_closed - oracle.classical_corr);
    report.oracle_evaluations = Some(oracle.evaluations);
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceEntry {
    pub entropy: EntropySpec,
    pub mu_best: f64,
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub mu_max: f64,
    pub tolerance: f64,
    /// True when t = 0: every measurement is optimal and nothing is checked.
    pub skipped: bool,
    pub entries: Vec<IndependenceEntry>,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// Runs the oracle for each entropy and compares the maximizing measurement's μ with μ_max.
pub fn entropy_independence_check(
    spec: &GbssSpec,
    entropies: &[EntropySpec],
    config: &SearchConfig,
    convention: GammaConvention,
    tolerance: f64,
) -> Result<IndependenceReport> {
    require_physical(spec)?;
    let mu_max = (2.0 / spec.dims().0 as f64).sqrt() * spec.t_max();
    if spec.t.iter().all(|&v| v == 0.0) {
        return Ok(IndependenceReport {
            mu_max,
            tolerance,
            skipped: true,
            entries: Vec::new(),
        });
    }
    let entries = entropies
        .iter()
        .map(|&entropy| {
            let oracle = discord_oracle(spec, entropy, config, convention)?;
            let deviation = (oracle.mu_best - mu_max).abs();
            Ok(IndependenceEntry {
                entropy,
                mu_best: oracle.mu_best,
                deviation,
                passed: deviation <= tolerance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IndependenceReport {
        mu_max,
        tolerance,
        skipped: false,
        entries,
    })
}
