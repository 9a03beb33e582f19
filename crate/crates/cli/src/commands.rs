use std::fs;
use std::io::{self, Write};
use std::path::Path;

use gbss_core::acceptance::{self, Options};
use gbss_core::clifford::{self, IdentityCheck, Parity, SignedPauli};
use gbss_core::{discord, gmqd, json, linalg, region, state};
use gbss_core::{CMatrix, GammaConvention, GbssSpec, SearchConfig};
use serde::Serialize;

use crate::args::{DiscordArgs, GammaArgs, GmqdArgs, LevelsArgs, OracleInput, RegionArgs, StateArgs, StateInput, VerifyArgs};
use crate::error::CliError;

type Outcome = Result<(), CliError>;

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn read_state(input: &StateInput) -> Result<GbssSpec, CliError> {
    if let Some(descriptor) = &input.state {
        let text = if descriptor.trim_start().starts_with('{') {
            descriptor.clone()
        } else {
            fs::read_to_string(descriptor).map_err(|e| CliError::Usage(format!("cannot read state file {descriptor}: {e}")))?
        };
        return Ok(json::parse_state(&text)?);
    }
    let (Some(n), Some(m), Some(t)) = (input.n, input.m, input.t.clone()) else {
        return Err(CliError::Usage("give either --state or all of --n, --m and --t".into()));
    };
    let spec = GbssSpec {
        n,
        m,
        t,
        x: input.x.clone().unwrap_or_default(),
        y: input.y.clone().unwrap_or_default(),
    };
    Ok(spec.normalized()?)
}

fn require_physical(spec: &GbssSpec) -> Outcome {
    let check = state::physical_check(spec)?;
    if check.physical {
        Ok(())
    } else {
        Err(CliError::NotPhysical { margins: check.margins })
    }
}

fn search_config(oracle: &OracleInput) -> Option<SearchConfig> {
    (oracle.oracle_budget > 0).then(|| SearchConfig::with_budget(oracle.oracle_budget, oracle.seed))
}

#[derive(Serialize)]
struct OracleSettings {
    budget: usize,
    seed: u64,
    convention: GammaConvention,
}

impl OracleSettings {
    fn new(oracle: &OracleInput, convention: GammaConvention) -> Self {
        Self {
            budget: oracle.oracle_budget,
            seed: oracle.seed,
            convention,
        }
    }
}

#[derive(Serialize)]
struct Matrices(#[serde(serialize_with = "json::serialize_matrices")] Vec<CMatrix>);

#[derive(Serialize)]
struct GammaOutput {
    d: usize,
    dim: usize,
    convention: GammaConvention,
    strings: Vec<SignedPauli>,
    parity: Vec<Parity>,
    identities: IdentityCheck,
    max_identity_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrices: Option<Matrices>,
}

pub fn gamma(args: &GammaArgs) -> Outcome {
    let convention = GammaConvention::from(args.common.convention);
    let dim = match (args.d, args.dim) {
        (Some(d), None) if d % 2 == 0 && (2..=clifford::MAX_GAMMA_D).contains(&d) => 1 << (d / 2),
        (Some(d), None) => return Err(gbss_core::Error::InvalidGammaDimension { d, max: clifford::MAX_GAMMA_D }.into()),
        (None, Some(dim)) => dim,
        _ => return Err(CliError::Usage("give one of --d or --dim".into())),
    };
    let set = clifford::max_anticommuting_set(dim, convention)?;
    let identities = set.check_identities();
    let out = GammaOutput {
        d: set.d,
        dim: set.dim,
        convention,
        strings: set.strings.clone(),
        parity: set.parity.clone(),
        max_identity_error: identities.max_error(),
        identities,
        matrices: args.matrices.then(|| Matrices(set.gammas.clone())),
    };
    emit(args.common.output.as_deref(), &json::versioned("gamma", &out))
}

#[derive(Serialize)]
struct StateOutput {
    state: GbssSpec,
    physical: bool,
    trace: f64,
    purity: f64,
    numerical_spectrum: Vec<f64>,
    closed_form_spectrum: Option<Vec<f64>>,
    max_spectrum_deviation: Option<f64>,
    /// Absent when local vectors are present.
    region: Option<gbss_core::RegionReport>,
}

pub fn state(args: &StateArgs) -> Outcome {
    let convention = GammaConvention::from(args.common.convention);
    let spec = read_state(&args.input)?;
    let rho = state::realize(&spec, convention)?;
    let mut numerical = rho.eigenvalues();
    numerical.sort_by(f64::total_cmp);
    let (closed, deviation, region) = if spec.has_local_vectors() {
        (None, None, None)
    } else {
        let closed = state::closed_form_spectrum(&spec)?;
        let deviation = linalg::multiset_deviation(&closed, &numerical);
        (Some(closed), Some(deviation), Some(region::classify(&spec, convention)?))
    };
    let out = StateOutput {
        physical: rho.physical,
        trace: rho.trace(),
        purity: rho.purity(),
        numerical_spectrum: numerical,
        closed_form_spectrum: closed,
        max_spectrum_deviation: deviation,
        region,
        state: spec,
    };
    emit(args.common.output.as_deref(), &json::versioned("state", &out))
}

#[derive(Serialize)]
struct WithState<'a, T: Serialize> {
    state: &'a GbssSpec,
    oracle_settings: OracleSettings,
    #[serde(flatten)]
    report: &'a T,
}

pub fn discord(args: &DiscordArgs) -> Outcome {
    let convention = GammaConvention::from(args.common.convention);
    let spec = read_state(&args.input)?;
    if spec.has_local_vectors() {
        return Err(gbss_core::Error::NonzeroLocalVectors.into());
    }
    require_physical(&spec)?;
    let report = match search_config(&args.oracle) {
        Some(config) => discord::analyze(&spec, args.entropy, &config, convention)?,
        None => discord::discord_closed(&spec, args.entropy, convention)?,
    };
    let out = WithState {
        state: &spec,
        oracle_settings: OracleSettings::new(&args.oracle, convention),
        report: &report,
    };
    emit(args.common.output.as_deref(), &json::versioned("discord", &out))
}

pub fn gmqd(args: &GmqdArgs) -> Outcome {
    let convention = GammaConvention::from(args.common.convention);
    let spec = read_state(&args.input)?;
    let config = search_config(&args.oracle);
    let report = gmqd::analyze(&spec, config.as_ref(), convention)?;
    let out = WithState {
        state: &spec,
        oracle_settings: OracleSettings::new(&args.oracle, convention),
        report: &report,
    };
    emit(args.common.output.as_deref(), &json::versioned("gmqd", &out))
}

pub fn region(args: &RegionArgs) -> Outcome {
    let report = region::extremal_values(args.n, args.m, args.seed)?;
    emit(args.common.output.as_deref(), &json::versioned("region", &report))
}

pub fn levels(args: &LevelsArgs) -> Outcome {
    let convention = GammaConvention::from(args.common.convention);
    let points = region::sample_level_surface(args.n, args.m, args.target, args.count, args.seed, convention)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=2 * args.n + 1).map(|j| format!("t{j}")).collect();
    header.extend(["D", "physical", "ppt", "separable"].map(String::from));
    writer.write_record(&header).map_err(|e| CliError::Io(e.to_string()))?;
    for p in &points {
        let mut row: Vec<String> = p.t.iter().map(f64::to_string).collect();
        row.push(p.gmqd.to_string());
        row.extend([p.region.physical, p.region.ppt, p.region.separable].map(|b| b.to_string()));
        writer.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    emit(args.common.output.as_deref(), &String::from_utf8(bytes).expect("CSV of numbers and booleans is UTF-8"))
}

#[derive(Serialize)]
struct VerifyOutput {
    seed: u64,
    budget: usize,
    passed: bool,
    criteria: Vec<acceptance::Outcome>,
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let options = Options {
        seed: args.oracle.seed,
        budget: args.oracle.oracle_budget,
        convention: GammaConvention::from(args.common.convention),
    };
    let selected: Vec<u8> = args.only.clone().unwrap_or_else(|| (1..=8).collect());
    let mut outcomes = Vec::new();
    for id in selected {
        let outcome = acceptance::CRITERIA[usize::from(id) - 1](&options)?;
        println!("{outcome}");
        outcomes.push(outcome);
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if let Some(path) = &args.common.output {
        let out = VerifyOutput {
            seed: options.seed,
            budget: options.budget,
            passed,
            criteria: outcomes,
        };
        emit(Some(path), &json::versioned("verify", &out))?;
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} acceptance criteria failed")))
    }
}
