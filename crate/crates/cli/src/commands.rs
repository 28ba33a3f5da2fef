use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use streamscope::canonical::ViolationRule;
use streamscope::estimators::{
    disc_theory_params, mis_estimate, mst_weight, num_cc, num_disc, theory_params, CcReport, DiscReport,
    EstimatorParams, ExactMisOracle, MisReport, MstReport,
};
use streamscope::stream::derive_seed;
use streamscope::verify::checks::{
    canonical_replay, closed_forms, disc_replay, mc_agreement, mst_identity_check, projection_equivalence,
    CheckReport,
};
use streamscope::verify::corpus::{
    cc_corpus, mst_path_corpus, random_connected_weighted, random_graph, random_small_components,
    small_graph_classes, triangles_and_paths,
};
use streamscope::verify::{
    exact_cc_histogram, exact_disc_freq, exact_mis, kruskal_mst, threshold_component_counts, MIS_HARD_CAP,
};
use streamscope::DiscType;

use crate::cli::{CheckName, GenArgs, GenKind, Mutation, ParamsArgs, RunArgs, VerifyArgs};
use crate::error::CliError;
use crate::input::{load_graph, resolve_n, with_stream, StreamOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    Cc,
    Mst,
    Disc,
    Mis,
}

/// Validated run settings. Everything is checked here, before the input is
/// opened for streaming.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub estimator: Estimator,
    pub input: PathBuf,
    pub n: usize,
    pub params: EstimatorParams,
    pub k: usize,
    pub d: usize,
    pub w: Option<u32>,
    pub order: StreamOrder,
    pub exact: bool,
    pub mis_samples: usize,
    pub mis_component_cap: usize,
    pub out: Option<PathBuf>,
}

fn require(v: Option<usize>, flag: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Config(format!("missing {flag}")))
}

impl RunConfig {
    pub fn from_args(estimator: Estimator, a: RunArgs) -> Result<Self, CliError> {
        let mut params = EstimatorParams::new(a.tau, a.samples, a.kmax, a.seed)?;
        params.epsilon = a.epsilon;
        params.rho = a.rho;
        params.delta = a.delta;
        params.validate()?;
        let (k, d) = match estimator {
            Estimator::Disc | Estimator::Mis => (require(a.k, "--k")?, require(a.d, "--d")?),
            _ => (0, 0),
        };
        if matches!(estimator, Estimator::Disc | Estimator::Mis) && d == 0 {
            return Err(CliError::Config("--d must be at least 1".into()));
        }
        if a.w == Some(0) {
            return Err(CliError::Config("--W must be at least 1".into()));
        }
        if estimator == Estimator::Mst && a.stream_order == StreamOrder::Given && a.w.is_none() && !a.exact {
            return Err(CliError::Config("missing --W: it cannot be inferred from a single pass".into()));
        }
        if a.mis_samples == 0 {
            return Err(CliError::Config("--mis-samples must be at least 1".into()));
        }
        if a.mis_component_cap == 0 || a.mis_component_cap > MIS_HARD_CAP {
            return Err(CliError::Config(format!("--mis-component-cap must be in 1..={MIS_HARD_CAP}")));
        }
        let n = resolve_n(&a.input, a.n)?;
        Ok(RunConfig {
            estimator,
            input: a.input,
            n,
            params,
            k,
            d,
            w: a.w,
            order: a.stream_order,
            exact: a.exact,
            mis_samples: a.mis_samples,
            mis_component_cap: a.mis_component_cap,
            out: a.out,
        })
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ExactCc {
    algorithm: &'static str,
    n: usize,
    m: usize,
    total: usize,
    per_k: BTreeMap<usize, usize>,
}

#[derive(Serialize)]
struct ExactMst {
    algorithm: &'static str,
    n: usize,
    m: usize,
    #[serde(rename = "W")]
    w: u32,
    total: u64,
    per_threshold: BTreeMap<u32, usize>,
}

#[derive(Serialize)]
struct ExactDisc {
    algorithm: &'static str,
    n: usize,
    m: usize,
    k: usize,
    d: usize,
    per_type: BTreeMap<DiscType, usize>,
}

#[derive(Serialize)]
struct ExactMis {
    algorithm: &'static str,
    n: usize,
    m: usize,
    total: usize,
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.exact {
        return run_exact(cfg);
    }
    let out = cfg.out.as_deref();
    let (n, p) = (cfg.n, &cfg.params);
    match cfg.estimator {
        Estimator::Cc => {
            let r: CcReport<f64> = with_stream(&cfg.input, n, None, cfg.order, p.seed, |s| num_cc(s, n, p))?;
            emit(&r, out)
        }
        Estimator::Mst => {
            let w = match cfg.w {
                Some(w) => w,
                None => load_graph(&cfg.input, n, None)?
                    .max_weight()
                    .ok_or_else(|| CliError::Input("run-mst needs a weighted edge list".into()))?,
            };
            // With W = 1 the threshold sum is empty and M = n − 1.
            let r: MstReport<f64> = if w == 1 {
                mst_weight(std::iter::empty(), n, 1, p)?
            } else {
                with_stream(&cfg.input, n, Some(w), cfg.order, p.seed, |s| mst_weight(s, n, w, p))?
            };
            emit(&r, out)
        }
        Estimator::Disc => {
            let r: DiscReport<f64> = with_stream(&cfg.input, n, None, cfg.order, p.seed, |s| num_disc(s, n, cfg.k, cfg.d, p))?;
            emit(&r, out)
        }
        Estimator::Mis => {
            let r: DiscReport<f64> =
                with_stream(&cfg.input, n, None, cfg.order, p.seed, |s| num_disc(s, n, cfg.k + 1, cfg.d, p))?;
            let oracle = ExactMisOracle {
                component_cap: cfg.mis_component_cap,
            };
            let seed = derive_seed(p.seed, "mis");
            let est: MisReport<f64> = mis_estimate(&r, n, cfg.d, cfg.k, cfg.mis_samples, &oracle, seed)?;
            emit(&est, out)
        }
    }
}

fn run_exact(cfg: &RunConfig) -> Result<(), CliError> {
    let out = cfg.out.as_deref();
    let g = load_graph(&cfg.input, cfg.n, cfg.w)?;
    let (n, m) = (g.n(), g.m());
    match cfg.estimator {
        Estimator::Cc => {
            let per_k = exact_cc_histogram(&g);
            let total = per_k.values().sum();
            emit(&ExactCc { algorithm: "exact_cc", n, m, total, per_k }, out)
        }
        Estimator::Mst => {
            let w = cfg
                .w
                .or(g.max_weight())
                .ok_or_else(|| CliError::Input("run-mst needs a weighted edge list".into()))?;
            let total = kruskal_mst(&g)?;
            let per_threshold = threshold_component_counts(&g, w);
            emit(&ExactMst { algorithm: "exact_mst", n, m, w, total, per_threshold }, out)
        }
        Estimator::Disc => {
            let per_type = exact_disc_freq(&g, cfg.k, cfg.d)?;
            emit(&ExactDisc { algorithm: "exact_disc", n, m, k: cfg.k, d: cfg.d, per_type }, out)
        }
        Estimator::Mis => {
            let total = exact_mis(&g, cfg.mis_component_cap)?.size;
            emit(&ExactMis { algorithm: "exact_mis", n, m, total }, out)
        }
    }
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let rule = match a.mutate {
        None => ViolationRule::Standard,
        Some(Mutation::DepthOffByOne) => ViolationRule::DepthOffByOne,
    };
    let selected: Vec<CheckName> = if a.only.is_empty() {
        CheckName::ALL.to_vec()
    } else {
        a.only.clone()
    };
    let mut failed = Vec::new();
    for check in selected {
        let seed = derive_seed(a.seed, check.label());
        let rep: CheckReport = match check {
            CheckName::ClosedForms => closed_forms(rule)?,
            CheckName::McAgreement => mc_agreement(
                &small_graph_classes(5, 6),
                &[1, 2, 3, 4, 5],
                &[(1, 10), (3, 10)],
                None,
                a.trials,
                seed,
                rule,
                0.005,
            )?,
            CheckName::CanonicalReplay => canonical_replay(500, 5, seed, rule)?,
            CheckName::DiscReplay => disc_replay(500, 3, 3, seed, rule)?,
            CheckName::Projection => projection_equivalence(200, 2, 3, seed)?,
            CheckName::MstIdentity => mst_identity_check(200, seed)?,
        };
        println!("{}", rep.summary());
        if !rep.passed() {
            for f in rep.failures.iter().take(10) {
                println!("  {f} (seed {seed})");
            }
            failed.push(rep.name.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(failed.join(", ")))
    }
}

#[derive(Serialize)]
struct DiscParamsOut {
    log10_tau: f64,
}

pub fn params(a: &ParamsArgs) -> Result<(), CliError> {
    let bad = |e: streamscope::estimators::EstimatorError| CliError::Config(e.to_string());
    match (a.delta, a.types, a.k, a.d) {
        (Some(delta), Some(types), Some(k), Some(d)) => {
            let log10_tau = disc_theory_params(a.rho, delta, types, k, d).map_err(bad)?;
            emit(&DiscParamsOut { log10_tau }, None)
        }
        (None, None, None, None) => {
            let epsilon = a
                .epsilon
                .ok_or_else(|| CliError::Config("missing --epsilon".into()))?;
            emit(&theory_params(epsilon, a.rho).map_err(bad)?, None)
        }
        _ => Err(CliError::Config("disc parameters need all of --delta, --types, --k, --d".into())),
    }
}

pub fn gen(a: &GenArgs) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let check_p = |p: f64| {
        if (0.0..=1.0).contains(&p) {
            Ok(p)
        } else {
            Err(CliError::Config(format!("--p = {p} not in [0, 1]")))
        }
    };
    let g = match a.kind {
        GenKind::Cc { triangles, edges, singletons } => cc_corpus(triangles, edges, singletons),
        GenKind::MstPath { n } => mst_path_corpus(n),
        GenKind::TrianglesPaths { triangles, paths } => triangles_and_paths(triangles, paths),
        GenKind::SmallComponents { n, max_size, p } => {
            if max_size == 0 {
                return Err(CliError::Config("--max-size must be at least 1".into()));
            }
            random_small_components(&mut rng, n, max_size, check_p(p)?)
        }
        GenKind::Random { n, m } => {
            if m > n * n.saturating_sub(1) / 2 {
                return Err(CliError::Config(format!("--m = {m} exceeds the pairs on {n} vertices")));
            }
            random_graph(&mut rng, n, m)
        }
        GenKind::ConnectedWeighted { n, p, w } => {
            if w == 0 || n == 0 {
                return Err(CliError::Config("--n and --w must be at least 1".into()));
            }
            random_connected_weighted(&mut rng, n, check_p(p)?, w)
        }
    };
    let text = g.to_edge_list();
    match &a.out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
