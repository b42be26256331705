//! The seven subcommands: validate the config, compute (or replay from
//! cache), then write CSV/JSON outputs plus a run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use pinlab::bounds::{self, CoarseGrainingCertificate};
use pinlab::critical::{critical_point, slope_scan, smoothing_check, ModelKind, SearchConfig};
use pinlab::disorder::DisorderLaw;
use pinlab::free_energy::{annealed_copolymer, annealed_pinning, quenched_free_energy};
use pinlab::partition::Model;
use pinlab::renewal::{renewal_mass, PhiKind, ReturnLaw};
use pinlab::verify::{run_suite, Suite};

use crate::cache::Cache;
use crate::config::{Config, ConfigError};
use crate::manifest::{config_hash, RunManifest, TaskSeed};

/// Exit-code classification: 1 config, 2 numerics, 3 verify.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerics(String),
    VerifyFailed(usize),
    Io(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<pinlab::Error> for CliError {
    fn from(e: pinlab::Error) -> Self {
        CliError::Numerics(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerics(_) => 2,
            CliError::VerifyFailed(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Config(m) => format!("config error: {m}"),
            CliError::Numerics(m) => format!("numerical precondition violation: {m}"),
            CliError::VerifyFailed(n) => format!("verify: {n} criteria failed"),
            CliError::Io(m) => format!("io error: {m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub struct Context {
    pub config: Config,
    pub out_dir: PathBuf,
    pub format: Format,
}

impl Context {
    fn hash_for(&self, command: &str) -> String {
        config_hash(&self.config, command)
    }

    fn output_path(&self, command: &str, hash: &str, ext: &str) -> PathBuf {
        self.out_dir.join(format!("{command}-{}.{ext}", &hash[..12]))
    }
}

// ---------------------------------------------------------------------------
// config -> domain objects
// ---------------------------------------------------------------------------

pub fn build_law(config: &Config) -> Result<ReturnLaw, CliError> {
    match config.get("law", "kind").unwrap_or("heavy-tailed") {
        "heavy-tailed" => {
            let alpha = config.f64("law", "alpha")?;
            let n_max = config.usize("law", "n_max")?;
            let phi_raw = config.get("law", "phi").unwrap_or("constant:1.0");
            let phi = parse_phi(phi_raw)?;
            Ok(ReturnLaw::heavy_tailed(alpha, phi, n_max)?)
        }
        "test" => {
            let mass = config.f64_list("law", "mass")?;
            Ok(ReturnLaw::test_law(&mass)?)
        }
        other => Err(CliError::Config(format!(
            "[law] kind: unknown `{other}` (expected heavy-tailed or test)"
        ))),
    }
}

fn parse_phi(raw: &str) -> Result<PhiKind, CliError> {
    let mut parts = raw.split(':');
    match parts.next() {
        Some("constant") => {
            let c = parts
                .next()
                .unwrap_or("1.0")
                .parse()
                .map_err(|_| CliError::Config(format!("[law] phi: bad constant in `{raw}`")))?;
            Ok(PhiKind::Constant(c))
        }
        Some("log-power") => {
            let c = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::Config(format!("[law] phi: bad c in `{raw}`")))?;
            let p = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::Config(format!("[law] phi: bad p in `{raw}`")))?;
            Ok(PhiKind::LogPower { c, p })
        }
        _ => Err(CliError::Config(format!(
            "[law] phi: `{raw}` (expected constant:C or log-power:C:P)"
        ))),
    }
}

pub fn build_disorder(config: &Config) -> Result<DisorderLaw, CliError> {
    let raw = config.get("disorder", "kind").unwrap_or("gaussian");
    parse_disorder(raw)
}

fn parse_disorder(raw: &str) -> Result<DisorderLaw, CliError> {
    match raw {
        "gaussian" => Ok(DisorderLaw::Gaussian),
        "rademacher" => Ok(DisorderLaw::Rademacher),
        other => {
            let mut parts = other.split(':');
            if parts.next() == Some("tilted") {
                let base = match parts.next() {
                    Some("gaussian") => DisorderLaw::Gaussian,
                    Some("rademacher") => DisorderLaw::Rademacher,
                    _ => {
                        return Err(CliError::Config(format!(
                            "[disorder] kind: bad base in `{other}`"
                        )))
                    }
                };
                let delta: f64 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| {
                    CliError::Config(format!("[disorder] kind: bad tilt in `{other}`"))
                })?;
                Ok(base.tilted(delta)?)
            } else {
                Err(CliError::Config(format!(
                    "[disorder] kind: unknown `{other}`"
                )))
            }
        }
    }
}

fn model_kind(config: &Config) -> Result<ModelKind, CliError> {
    match config.require("model", "kind")? {
        "pinning" => Ok(ModelKind::Pinning),
        "copolymer" => Ok(ModelKind::Copolymer),
        other => Err(CliError::Config(format!(
            "[model] kind: unknown `{other}` (expected pinning or copolymer)"
        ))),
    }
}

fn search_config(config: &Config, section: &str, coupling: f64, kind: ModelKind) -> Result<SearchConfig, CliError> {
    let tol_scale = config.f64_or(section, "tol_scale", 0.02)?;
    let tol = match kind {
        ModelKind::Pinning => tol_scale * coupling * coupling,
        ModelKind::Copolymer => tol_scale * coupling,
    };
    Ok(SearchConfig {
        sizes: config.usize_list(section, "sizes")?,
        replicas: config.usize_or(section, "replicas", 128)?,
        threshold: config.f64_or(section, "threshold", 1e-4)?,
        tol,
        max_iter: config.usize_or(section, "max_iter", 8)?,
        seed: config.u64_or(section, "seed", 0)?,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// free-energy
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreeEnergyRecord {
    pub model: String,
    pub coupling: f64,
    pub h: f64,
    pub n: usize,
    pub replicas: usize,
    pub seed: u64,
    pub value: f64,
    pub stderr: f64,
    pub rng_algorithm: String,
    pub config_hash: String,
}

fn free_energy_csv(records: &[FreeEnergyRecord]) -> String {
    let mut out = String::from(
        "model,coupling,h,n,replicas,seed,value,stderr,rng_algorithm,config_hash\n",
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.model,
            r.coupling,
            r.h,
            r.n,
            r.replicas,
            r.seed,
            r.value,
            r.stderr,
            r.rng_algorithm,
            r.config_hash
        );
    }
    out
}

pub fn cmd_free_energy(ctx: &Context) -> Result<(), CliError> {
    let start = Instant::now();
    let command = "free-energy";
    let hash = ctx.hash_for(command);

    // Validate everything before any compute or output.
    let law = build_law(&ctx.config)?;
    let dlaw = build_disorder(&ctx.config)?;
    let kind = model_kind(&ctx.config)?;
    let couplings = ctx.config.f64_list("grid", "couplings")?;
    let biases = ctx.config.f64_list("grid", "biases")?;
    let sizes = ctx.config.usize_list("grid", "sizes")?;
    let replicas = ctx.config.usize_or("grid", "replicas", 64)?;
    let seed = ctx.config.u64_or("grid", "seed", 0)?;

    let cache = Cache::new(&ctx.out_dir)?;
    let mut manifest = RunManifest::new(command, &hash);

    let records: Vec<FreeEnergyRecord> =
        if let Some(cached) = cache.load::<Vec<FreeEnergyRecord>>(command, &hash) {
            manifest.cache_hit = true;
            cached
        } else {
            let mut records = Vec::new();
            for &coupling in &couplings {
                for &h in &biases {
                    let model = match kind {
                        ModelKind::Pinning => Model::pinning(&dlaw, coupling, h)?,
                        ModelKind::Copolymer => Model::copolymer(&dlaw, coupling, h)?,
                    };
                    for &n in &sizes {
                        let est = quenched_free_energy(&law, &dlaw, &model, n, replicas, seed)?;
                        records.push(FreeEnergyRecord {
                            model: est.model,
                            coupling,
                            h,
                            n,
                            replicas,
                            seed,
                            value: est.value,
                            stderr: est.stderr,
                            rng_algorithm: est.rng_algorithm,
                            config_hash: hash.clone(),
                        });
                    }
                }
            }
            cache.store(command, &hash, &records)?;
            records
        };

    manifest.per_task_seeds = records
        .iter()
        .map(|r| TaskSeed {
            task: format!("{}:coupling={}:h={}:n={}", r.model, r.coupling, r.h, r.n),
            seed: r.seed,
        })
        .collect();

    match ctx.format {
        Format::Csv => {
            let path = ctx.output_path(command, &hash, "csv");
            write_text(&path, &free_energy_csv(&records))?;
            manifest.record_output(&path);
        }
        Format::Json => {
            let path = ctx.output_path(command, &hash, "json");
            write_text(&path, &serde_json::to_string_pretty(&records).unwrap())?;
            manifest.record_output(&path);
        }
    }

    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let mpath = manifest.write(&ctx.out_dir)?;
    println!(
        "free-energy: {} records, cache_hit = {}, manifest {}",
        records.len(),
        manifest.cache_hit,
        mpath.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// critical-scan
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ScanPayload {
    model: String,
    alpha: f64,
    mu: f64,
    predicted: f64,
    monotone_trend: bool,
    rows: Vec<ScanRowRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ScanRowRecord {
    coupling: f64,
    h_lo: f64,
    h_c: f64,
    h_hi: f64,
    ratio: f64,
    predicted: f64,
}

pub fn cmd_critical_scan(ctx: &Context) -> Result<(), CliError> {
    let start = Instant::now();
    let command = "critical-scan";
    let hash = ctx.hash_for(command);

    let law = build_law(&ctx.config)?;
    let dlaw = build_disorder(&ctx.config)?;
    let kind = model_kind(&ctx.config)?;
    let couplings = ctx.config.f64_list("scan", "couplings")?;
    let smallest = *couplings.last().ok_or_else(|| {
        CliError::Config("empty [scan] couplings".into())
    })?;
    let cfg = search_config(&ctx.config, "scan", smallest, kind)?;

    let cache = Cache::new(&ctx.out_dir)?;
    let mut manifest = RunManifest::new(command, &hash);

    let payload: ScanPayload = if let Some(cached) = cache.load::<ScanPayload>(command, &hash) {
        manifest.cache_hit = true;
        cached
    } else {
        let scan = slope_scan(&law, &dlaw, kind, &couplings, &cfg)?;
        let payload = ScanPayload {
            model: kind.as_str().to_string(),
            alpha: scan.alpha,
            mu: scan.mu,
            predicted: scan.predicted,
            monotone_trend: scan.monotone_trend,
            rows: scan
                .rows
                .iter()
                .map(|r| ScanRowRecord {
                    coupling: r.coupling,
                    h_lo: r.h_lo,
                    h_c: r.h_c,
                    h_hi: r.h_hi,
                    ratio: r.ratio,
                    predicted: r.predicted,
                })
                .collect(),
        };
        cache.store(command, &hash, &payload)?;
        payload
    };

    manifest.per_task_seeds = payload
        .rows
        .iter()
        .map(|r| TaskSeed {
            task: format!("{}:coupling={}", payload.model, r.coupling),
            seed: cfg.seed,
        })
        .collect();

    // Scan CSV.
    let mut csv = String::from("coupling,h_lo,h_c,h_hi,ratio,predicted,trend_flag\n");
    for r in &payload.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.coupling, r.h_lo, r.h_c, r.h_hi, r.ratio, r.predicted, payload.monotone_trend
        );
    }
    let csv_path = ctx.output_path(command, &hash, "csv");
    write_text(&csv_path, &csv)?;
    manifest.record_output(&csv_path);

    // Plot data: gnuplot-friendly whitespace columns.
    let mut plot = String::from("# coupling ratio predicted\n");
    for r in &payload.rows {
        let _ = writeln!(plot, "{} {} {}", r.coupling, r.ratio, r.predicted);
    }
    let plot_path = ctx.output_path(command, &hash, "dat");
    write_text(&plot_path, &plot)?;
    manifest.record_output(&plot_path);

    let json_path = ctx.output_path(command, &hash, "json");
    write_text(&json_path, &serde_json::to_string_pretty(&payload).unwrap())?;
    manifest.record_output(&json_path);

    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let mpath = manifest.write(&ctx.out_dir)?;
    println!(
        "critical-scan: {} rows, trend = {}, cache_hit = {}, manifest {}",
        payload.rows.len(),
        payload.monotone_trend,
        manifest.cache_hit,
        mpath.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// annealed
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
struct AnnealedRecord {
    model: String,
    coupling: f64,
    h: f64,
    f_a: f64,
    residual: f64,
    regime: String,
}

pub fn cmd_annealed(ctx: &Context) -> Result<(), CliError> {
    let start = Instant::now();
    let command = "annealed";
    let hash = ctx.hash_for(command);

    let law = build_law(&ctx.config)?;
    let kind = model_kind(&ctx.config)?;
    let biases = ctx.config.f64_list("annealed", "biases")?;

    let mut records = Vec::new();
    match kind {
        ModelKind::Pinning => {
            for &h in &biases {
                let sol = annealed_pinning(&law, h);
                records.push(AnnealedRecord {
                    model: "pinning".into(),
                    coupling: 0.0,
                    h,
                    f_a: sol.f_a,
                    residual: sol.residual,
                    regime: format!("{:?}", sol.regime),
                });
            }
        }
        ModelKind::Copolymer => {
            let dlaw = build_disorder(&ctx.config)?;
            let lambda = ctx.config.f64("annealed", "lambda")?;
            for &h in &biases {
                let sol = annealed_copolymer(&law, &dlaw, lambda, h)?;
                records.push(AnnealedRecord {
                    model: "copolymer".into(),
                    coupling: lambda,
                    h,
                    f_a: sol.f_a,
                    residual: sol.residual,
                    regime: format!("{:?}", sol.regime),
                });
            }
        }
    }

    let mut manifest = RunManifest::new(command, &hash);
    match ctx.format {
        Format::Csv => {
            let mut csv = String::from("model,coupling,h,f_a,residual,regime\n");
            for r in &records {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    r.model, r.coupling, r.h, r.f_a, r.residual, r.regime
                );
            }
            let path = ctx.output_path(command, &hash, "csv");
            write_text(&path, &csv)?;
            manifest.record_output(&path);
        }
        Format::Json => {
            let path = ctx.output_path(command, &hash, "json");
            write_text(&path, &serde_json::to_string_pretty(&records).unwrap())?;
            manifest.record_output(&path);
        }
    }
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let mpath = manifest.write(&ctx.out_dir)?;
    println!(
        "annealed: {} records, manifest {}",
        records.len(),
        mpath.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// certificate
// ---------------------------------------------------------------------------

pub struct CertificateArgs {
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub t: Option<f64>,
    pub mu: Option<f64>,
    pub c1: Option<f64>,
    pub from_law: bool,
}

pub fn cmd_certificate(ctx: &Context, args: &CertificateArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let command = "certificate";

    let section = "certificate";
    let alpha = match args.alpha {
        Some(a) => a,
        None => ctx.config.f64(section, "alpha")?,
    };
    let epsilon = match args.epsilon {
        Some(e) => e,
        None => ctx.config.f64(section, "epsilon")?,
    };
    let t = match args.t {
        Some(t) => Some(t),
        None => match ctx.config.get(section, "t") {
            Some(raw) => Some(raw.parse().map_err(|_| {
                CliError::Config(format!("[certificate] t: `{raw}` is not a number"))
            })?),
            None => None,
        },
    };

    // mu and C1: explicit, or pulled from the renewal diagnostics of [law].
    let (mu, c1) = if args.from_law || (args.mu.is_none() && ctx.config.get(section, "mu").is_none())
    {
        let law = build_law(&ctx.config)?;
        let probe = ctx.config.usize_or(section, "probe", 4096)?;
        let u = renewal_mass(&law, probe);
        (law.mu(), u.c1_diagnostic(1, probe))
    } else {
        let mu = match args.mu {
            Some(m) => m,
            None => ctx.config.f64(section, "mu")?,
        };
        let c1 = match args.c1 {
            Some(c) => c,
            None => ctx.config.f64_or(section, "c1", 2.0)?,
        };
        (mu, c1)
    };

    let cert: CoarseGrainingCertificate = match t {
        Some(t) => bounds::coarse_constants(alpha, mu, epsilon, t, c1)?,
        None => bounds::find_t_eps(alpha, mu, epsilon, c1)?,
    };

    let hash = ctx.hash_for(command);
    let mut manifest = RunManifest::new(command, &hash);
    let path = ctx.output_path(command, &hash, "json");
    write_text(&path, &serde_json::to_string_pretty(&cert).unwrap())?;
    manifest.record_output(&path);
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    manifest.write(&ctx.out_dir)?;

    println!(
        "certificate: alpha {alpha} epsilon {epsilon} mu {mu:.6} C1 {c1:.4} -> t_eps {:.3}, series_sum {:.6}, feasible {}",
        cert.t_eps, cert.series_sum, cert.feasible
    );
    println!("written to {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// fractional-moment
// ---------------------------------------------------------------------------

pub fn cmd_fractional_moment(ctx: &Context) -> Result<(), CliError> {
    let start = Instant::now();
    let command = "fractional-moment";
    let hash = ctx.hash_for(command);

    let law = build_law(&ctx.config)?;
    let dlaw = build_disorder(&ctx.config)?;
    let beta = ctx.config.f64("fm", "beta")?;
    let h = ctx.config.f64("fm", "h")?;
    let zeta = ctx.config.f64("fm", "zeta")?;
    let k = ctx.config.usize("fm", "k")?;
    let replicas = ctx.config.usize_or("fm", "replicas", 128)?;
    let seed = ctx.config.u64_or("fm", "seed", 0)?;

    let params = pinlab::partition::PinningParams::new(&dlaw, beta, h)?;
    let report = bounds::fractional_moment_mc(&law, &dlaw, &params, k, zeta, replicas, seed)?;

    let mut manifest = RunManifest::new(command, &hash);
    manifest.per_task_seeds.push(TaskSeed {
        task: format!("fm:beta={beta}:zeta={zeta}:k={k}"),
        seed,
    });
    match ctx.format {
        Format::Csv => {
            let mut csv = String::from(
                "beta,h,zeta,k,replicas,seed,estimate,stderr,holder_bound,delta,basic_estimate\n",
            );
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{}",
                report.beta,
                report.h,
                report.zeta,
                report.k,
                report.replicas,
                report.seed,
                report.estimate,
                report.stderr,
                report.holder_bound,
                report.delta,
                report
                    .basic_estimate
                    .map(|b| b.to_string())
                    .unwrap_or_default()
            );
            let path = ctx.output_path(command, &hash, "csv");
            write_text(&path, &csv)?;
            manifest.record_output(&path);
        }
        Format::Json => {
            let path = ctx.output_path(command, &hash, "json");
            write_text(&path, &serde_json::to_string_pretty(&report).unwrap())?;
            manifest.record_output(&path);
        }
    }
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let mpath = manifest.write(&ctx.out_dir)?;
    println!(
        "fractional-moment: estimate {:.6e} (± {:.2e}) vs bound {:.6e}, manifest {}",
        report.estimate,
        report.stderr,
        report.holder_bound,
        mpath.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// smoothing-check
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SmoothingPayload {
    model: String,
    coupling: f64,
    h_c: f64,
    h_lo: f64,
    h_hi: f64,
    slack: f64,
    violations: usize,
    points: Vec<SmoothingPointRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SmoothingPointRecord {
    t: f64,
    f: f64,
    err: f64,
    bound: f64,
    verdict: String,
}

pub fn cmd_smoothing_check(ctx: &Context) -> Result<(), CliError> {
    let start = Instant::now();
    let command = "smoothing-check";
    let hash = ctx.hash_for(command);

    let law = build_law(&ctx.config)?;
    let dlaw = build_disorder(&ctx.config)?;
    let kind = model_kind(&ctx.config)?;
    let coupling = ctx.config.f64("smoothing", "coupling")?;
    let t_scaled = ctx.config.f64_list("smoothing", "t_scaled")?;
    for &s in &t_scaled {
        if s.abs() > 0.2 {
            return Err(CliError::Config(format!(
                "[smoothing] t_scaled: |{s}| exceeds the theorem window 0.2"
            )));
        }
    }
    let cfg = search_config(&ctx.config, "smoothing", coupling, kind)?;
    let t_grid: Vec<f64> = t_scaled.iter().map(|s| s * coupling).collect();

    let cache = Cache::new(&ctx.out_dir)?;
    let mut manifest = RunManifest::new(command, &hash);

    let payload: SmoothingPayload =
        if let Some(cached) = cache.load::<SmoothingPayload>(command, &hash) {
            manifest.cache_hit = true;
            cached
        } else {
            let hc = critical_point(&law, &dlaw, kind, coupling, &cfg)?;
            let report = smoothing_check(&law, &dlaw, kind, coupling, &hc, &t_grid, &cfg)?;
            let payload = SmoothingPayload {
                model: kind.as_str().to_string(),
                coupling,
                h_c: report.h_c,
                h_lo: hc.h_lo,
                h_hi: hc.h_hi,
                slack: report.slack,
                violations: report.violations,
                points: report
                    .points
                    .iter()
                    .map(|p| SmoothingPointRecord {
                        t: p.t,
                        f: p.f,
                        err: p.err,
                        bound: p.bound,
                        verdict: format!("{:?}", p.verdict),
                    })
                    .collect(),
            };
            cache.store(command, &hash, &payload)?;
            payload
        };

    let mut csv = String::from("t,f,err,bound,verdict\n");
    for p in &payload.points {
        let _ = writeln!(csv, "{},{},{},{},{}", p.t, p.f, p.err, p.bound, p.verdict);
    }
    let csv_path = ctx.output_path(command, &hash, "csv");
    write_text(&csv_path, &csv)?;
    manifest.record_output(&csv_path);

    let json_path = ctx.output_path(command, &hash, "json");
    write_text(&json_path, &serde_json::to_string_pretty(&payload).unwrap())?;
    manifest.record_output(&json_path);

    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let mpath = manifest.write(&ctx.out_dir)?;
    println!(
        "smoothing-check: h_c {:.6}, {} points, {} violations, cache_hit = {}, manifest {}",
        payload.h_c,
        payload.points.len(),
        payload.violations,
        manifest.cache_hit,
        mpath.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn cmd_verify(ctx: &Context, suite: &str) -> Result<(), CliError> {
    let suite = Suite::parse(suite)
        .ok_or_else(|| CliError::Config(format!("unknown suite `{suite}` (fast or full)")))?;
    let results = run_suite(suite);
    for r in &results {
        println!("{}", r.line());
    }
    let failures = results.iter().filter(|r| !r.passed).count();
    let path = ctx.out_dir.join("verify-report.json");
    write_text(&path, &serde_json::to_string_pretty(&results).unwrap())?;
    println!(
        "verify: {}/{} criteria passed, report {}",
        results.len() - failures,
        results.len(),
        path.display()
    );
    if failures > 0 {
        return Err(CliError::VerifyFailed(failures));
    }
    Ok(())
}
