//! The acceptance suite: eight numbered criteria, each returning an
//! [`Outcome`] with the measured quantities and the bound they were held to.
//! Used by the `acceptance` test target and by `gbss verify`.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::clifford::{self, GammaConvention};
use crate::discord;
use crate::entropy::EntropySpec;
use crate::error::Result;
use crate::gmqd;
use crate::linalg::{self, c, CMatrix};
use crate::region;
use crate::search::{SearchConfig, DEFAULT_BUDGET, DEFAULT_SEED};
use crate::state::{self, GbssSpec, Side};

/// One measured quantity and its bound. `passed` is `measured <= bound`
/// unless the check says otherwise.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            passed: measured <= bound,
        }
    }

    fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            measured: if ok { 1.0 } else { 0.0 },
            bound: 1.0,
            passed: ok,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed_secs: f64,
    pub time_limit_secs: Option<f64>,
    pub passed: bool,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {}: {} ({:.2} s",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_secs
        )?;
        if let Some(limit) = self.time_limit_secs {
            write!(f, ", limit {limit} s")?;
        }
        write!(f, ")")?;
        for check in &self.checks {
            let mark = if check.passed { "ok" } else { "FAILED" };
            write!(f, "\n    {mark:>6}  {}: {:.3e} (bound {:.1e})", check.name, check.measured, check.bound)?;
        }
        Ok(())
    }
}

/// Suite-wide settings. The oracle budget applies to criteria 3, 4 and 5.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub seed: u64,
    pub budget: usize,
    pub convention: GammaConvention,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            budget: DEFAULT_BUDGET,
            convention: GammaConvention::Tower,
        }
    }
}

impl Options {
    fn rng(&self, id: u8) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(id));
        rng
    }

    fn search(&self) -> SearchConfig {
        SearchConfig::with_budget(self.budget, self.seed)
    }
}

fn finish(id: u8, title: &'static str, start: Instant, limit: Option<f64>, checks: Vec<Check>) -> Outcome {
    let elapsed_secs = start.elapsed().as_secs_f64();
    let in_time = limit.is_none_or(|l| elapsed_secs < l);
    Outcome {
        id,
        title,
        passed: in_time && checks.iter().all(|c| c.passed),
        checks,
        elapsed_secs,
        time_limit_secs: limit,
    }
}

pub const TITLES: [&str; 8] = [
    "algebra identities",
    "closed-form spectrum equals numerical spectrum",
    "classical correlation: closed form vs oracle",
    "optimal measurement is entropy independent",
    "geometric discord: closed form vs oracle",
    "region extrema",
    "partial transpose spectrum is the last-sign flip",
    "entropy limits and concavity",
];

pub fn algebra(options: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for d in [2, 4, 6, 8] {
        let err = clifford::build_gamma_tower(d)?.check_identities().max_error();
        checks.push(Check::at_most(format!("gamma identities, d = {d}"), err, 1e-12));
    }
    let weyl = clifford::max_anticommuting_set(4, GammaConvention::Weyl)?.check_identities().max_error();
    checks.push(Check::at_most("gamma identities, Weyl d = 4", weyl, 1e-12));
    for dim in [2, 4] {
        let err = clifford::SuBasis::for_convention(dim, options.convention)?.reconstruction_error();
        checks.push(Check::at_most(format!("SU({dim}) reconstruction"), err, 1e-12));
    }
    Ok(finish(1, TITLES[0], start, Some(5.0), checks))
}

pub fn spectrum_equivalence(options: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = options.rng(2);
    let mut checks = Vec::new();
    for (n, m) in [(1, 1), (1, 2), (2, 2)] {
        let mut worst = 0.0f64;
        for _ in 0..500 {
            let spec = GbssSpec::random_physical(n, m, &mut rng);
            let numeric = state::realize(&spec, options.convention)?.eigenvalues();
            worst = worst.max(linalg::multiset_deviation(&state::closed_form_spectrum(&spec)?, &numeric));
        }
        checks.push(Check::at_most(format!("max deviation over 500 states, (n, m) = ({n}, {m})"), worst, 1e-10));
    }
    Ok(finish(2, TITLES[1], start, Some(60.0), checks))
}

pub fn discord_oracle(options: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = options.rng(3);
    let config = options.search();
    let entropy = EntropySpec::VonNeumann;
    let mut checks = Vec::new();
    for (n, m, count) in [(1, 1, 100), (2, 2, 25)] {
        let mut worst_gap = 0.0f64;
        let mut worst_excess = f64::NEG_INFINITY;
        for _ in 0..count {
            let spec = GbssSpec::random_physical(n, m, &mut rng);
            let closed = discord::classical_correlation_closed(&spec, entropy)?;
            let oracle = discord::discord_oracle(&spec, entropy, &config, options.convention)?.classical_corr;
            worst_gap = worst_gap.max((closed - oracle).abs());
            worst_excess = worst_excess.max(oracle - closed);
        }
        checks.push(Check::at_most(format!("max |C_closed - C_oracle|, {count} states at ({n}, {m})"), worst_gap, 1e-4));
        checks.push(Check::at_most(format!("max (C_oracle - C_closed), {count} states at ({n}, {m})"), worst_excess, 1e-6));
    }
    let bell = GbssSpec::new(1, 1, vec![1.0, -1.0, 1.0])?;
    let report = discord::analyze(&bell, entropy, &config, options.convention)?;
    checks.push(Check::at_most("Bell |I - 2|", (report.mutual_info - 2.0).abs(), 1e-9));
    checks.push(Check::at_most("Bell |C_closed - 1|", (report.classical_corr_closed - 1.0).abs(), 1e-9));
    checks.push(Check::at_most("Bell |C_oracle - 1|", (report.classical_corr_oracle.unwrap_or(f64::NAN) - 1.0).abs(), 1e-9));
    checks.push(Check::at_most("Bell |D - 1|", (report.discord_closed - 1.0).abs(), 1e-9));
    Ok(finish(3, TITLES[2], start, Some(600.0), checks))
}

pub const INDEPENDENCE_ENTROPIES: [EntropySpec; 5] = [
    EntropySpec::VonNeumann,
    EntropySpec::Renyi(0.3),
    EntropySpec::Renyi(0.7),
    EntropySpec::Tsallis(0.5),
    EntropySpec::Tsallis(2.0),
];

pub fn entropy_independence(options: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = options.rng(4);
    let config = options.search();
    let mut worst = vec![0.0f64; INDEPENDENCE_ENTROPIES.len()];
    for k in 0..20 {
        let (n, m) = [(1, 1), (1, 2), (2, 2)][k % 3];
        let spec = GbssSpec::random_physical(n, m, &mut rng);
        let report = discord::entropy_independence_check(&spec, &INDEPENDENCE_ENTROPIES, &config, options.convention, 1e-4)?;
        for (w, entry) in worst.iter_mut().zip(&report.entries) {
            *w = w.max(entry.deviation);
        }
    }
    let checks = INDEPENDENCE_ENTROPIES
        .iter()
        .zip(worst)
        .map(|(e, w)| Check::at_most(format!("max |mu_best - mu_max| over 20 states, {e}"), w, 1e-4))
        .collect();
    Ok(finish(4, TITLES[3], start, None, checks))
}

pub fn gmqd_oracle(options: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = options.rng(5);
    let config = options.search();
    let mut checks = Vec::new();
    let mut parseval = 0.0f64;
    for (n, m, count, tol) in [(1, 1, 20, 1e-5), (1, 2, 10, 1e-4), (2, 2, 10, 1e-4)] {
        let mut worst = 0.0f64;
        for k in 0..count {
            let base = GbssSpec::random_physical(n, m, &mut rng);
            // Every fourth state also carries small local vectors.
            let spec = if k % 4 == 3 && n == 1 {
                let len = base.terms();
                let x = (0..len).map(|_| rng.random_range(-0.1..0.1)).collect();
                let y = (0..len).map(|_| rng.random_range(-0.1..0.1)).collect();
                GbssSpec::with_local_vectors(n, m, base.t.iter().map(|v| 0.5 * v).collect(), x, y)?
            } else {
                base
            };
            let rho = state::realize(&spec, options.convention)?;
            let oracle = gmqd::gmqd_oracle(&rho, spec.dims(), &config)?;
            worst = worst.max((oracle.value - gmqd::gmqd_closed(&spec)?).abs());
            let block = gmqd::correlation_block(&rho, spec.dims())?;
            parseval = parseval
                .max((block.tr_cct() - rho.purity()).abs())
                .max((gmqd::tr_cct_closed(&spec)? - rho.purity()).abs());
        }
        checks.push(Check::at_most(format!("max |D_closed - D_oracle|, {count} states at ({n}, {m})"), worst, tol));
    }
    let mut qubit_form = 0.0f64;
    for _ in 0..1000 {
        let t: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let spec = GbssSpec::new(1, 1, t)?;
        let expected = 0.25 * (spec.t_norm_sq() - spec.t_max().powi(2));
        qubit_form = qubit_form.max((gmqd::gmqd_closed(&spec)? - expected).abs());
    }
    checks.push(Check::at_most("max |D_closed - (|T|^2 - t_max^2)/4| at (1, 1), 1000 points", qubit_form, 1e-15));
    checks.push(Check::at_most("max |Tr CC^T - Tr rho^2|", parseval, 1e-12));
    Ok(finish(5, TITLES[4], start, None, checks))
}

pub fn region_extrema(options: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (n, m) in [(1, 1), (1, 2)] {
        let report = region::extremal_values(n, m, options.seed)?;
        let search = &report.separable_search;
        let found = search.gradient_max.max(search.vertex_max);
        checks.push(Check::at_most(
            format!("separable max at ({n}, {m}): |numerical {found:.6} - formula {:.6}|", report.separable_formula),
            (found - report.separable_formula).abs(),
            1e-6,
        ));
    }
    let vertices = region::physical_vertices(1, 1)?;
    checks.push(Check::at_most("physical max at (1, 1): |vertex max - 1/2|", (vertices.max_gmqd - 0.5).abs(), 1e-12));
    let bell_vertex = vertices.argmax.iter().all(|v| (v.abs() - 1.0).abs() < 1e-12)
        && state::is_physical(&GbssSpec::new(1, 1, vertices.argmax.clone())?)?;
    checks.push(Check::holds("maximizer is a physical Bell vertex", bell_vertex));
    let mut rng = options.rng(6);
    let mut scan = 0.0f64;
    for _ in 0..20_000 {
        scan = scan.max(gmqd::gmqd_closed(&GbssSpec::random_physical(1, 1, &mut rng))?);
    }
    checks.push(Check::at_most("random physical scan at (1, 1) minus 1/2", scan - 0.5, 1e-9));
    Ok(finish(6, TITLES[5], start, None, checks))
}

pub fn ppt_spectrum(options: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = options.rng(7);
    let mut checks = Vec::new();
    for (n, m) in [(1, 1), (1, 2)] {
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let spec = GbssSpec::random_physical(n, m, &mut rng);
            let rho = state::realize(&spec, options.convention)?;
            let transposed = state::partial_transpose(&rho, Side::B, spec.dims())?.eigenvalues();
            let flipped = GbssSpec::new(n, m, state::last_sign_flipped(&spec.t))?;
            worst = worst.max(linalg::multiset_deviation(&transposed, &state::closed_form_spectrum(&flipped)?));
        }
        checks.push(Check::at_most(format!("max deviation over 200 states, (n, m) = ({n}, {m})"), worst, 1e-10));
    }
    Ok(finish(7, TITLES[6], start, None, checks))
}

/// Spectrum of GG†/Tr(GG†) for a complex Gaussian G (Hilbert-Schmidt measure).
fn hilbert_schmidt_state(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let rho = &g * g.adjoint();
    let trace = linalg::trace(&rho).re;
    rho / c(trace, 0.0)
}

pub fn entropy_limits(options: &Options) -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = options.rng(8);
    let q = 0.999;
    let (mut renyi, mut tsallis) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let spectrum = linalg::hermitian_eigenvalues(&hilbert_schmidt_state(8, &mut rng));
        let s = EntropySpec::VonNeumann.of_spectrum(&spectrum);
        renyi = renyi.max((EntropySpec::Renyi(q).of_spectrum(&spectrum) - s).abs());
        tsallis = tsallis.max((EntropySpec::Tsallis(q).of_spectrum(&spectrum) - s).abs());
    }

    let mut concavity = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let a = hilbert_schmidt_state(8, &mut rng);
        let b = hilbert_schmidt_state(8, &mut rng);
        let w: f64 = rng.random();
        let mix = &a * c(w, 0.0) + &b * c(1.0 - w, 0.0);
        for kind in INDEPENDENCE_ENTROPIES {
            let shortfall = w * kind.of_matrix(&a) + (1.0 - w) * kind.of_matrix(&b) - kind.of_matrix(&mix);
            concavity = concavity.max(shortfall);
        }
    }
    let checks = vec![
        Check::at_most("max |S_R(0.999) - S| over 1000 random 8x8 spectra", renyi, 2e-3),
        Check::at_most("max |S_T(0.999) - S| over 1000 random 8x8 spectra", tsallis, 2e-3),
        Check::at_most("max concavity shortfall over 1000 pairs", concavity, 1e-12),
    ];
    Ok(finish(8, TITLES[7], start, None, checks))
}

pub type Criterion = fn(&Options) -> Result<Outcome>;

pub const CRITERIA: [Criterion; 8] = [
    algebra,
    spectrum_equivalence,
    discord_oracle,
    entropy_independence,
    gmqd_oracle,
    region_extrema,
    ppt_spectrum,
    entropy_limits,
];

/// Runs every criterion in order.
pub fn run_all(options: &Options) -> Result<Vec<Outcome>> {
    CRITERIA.iter().map(|criterion| criterion(options)).collect()
}
