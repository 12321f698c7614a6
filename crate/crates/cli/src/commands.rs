//! The analysis subcommands.

use crate::grid::{parse_counts, parse_grid};
use crate::output::{decibel, sibling, write_csv, RunManifest};
use crate::CliError;
use emfcov::antenna::PatternKind;
use emfcov::metrics::{contour_sweep, Analysis, QuadratureSpec, SweepMetric};
use emfcov::montecarlo::{empirical_from_samples, joint_from_samples, simulate, EmpiricalResult, McMetric};
use emfcov::network::{db_to_lin, dbm_to_w, ConfigFile, NetworkConfig, UserKind};
use std::path::{Path, PathBuf};

/// Resolved configuration shared by every subcommand.
pub struct Context {
    pub config_path: Option<PathBuf>,
    pub file: ConfigFile,
    pub cfg: NetworkConfig,
    pub hash: String,
    pub quad: QuadratureSpec,
}

impl Context {
    /// Loads `path` (reference-scenario defaults when absent) and applies overrides.
    pub fn load(path: Option<&Path>, pattern: Option<&str>, refined: bool) -> Result<Self, CliError> {
        let mut file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                ConfigFile::from_toml(&text)?
            }
            None => ConfigFile::default(),
        };
        if let Some(name) = pattern {
            file.pattern = PatternKind::parse(name)?;
        }
        let cfg = file.build()?;
        let quad = if refined { QuadratureSpec::default().refined() } else { QuadratureSpec::default() };
        Ok(Self { config_path: path.map(Path::to_path_buf), hash: file.config_hash(), file, cfg, quad })
    }

    pub fn analysis(&self, cfg: &NetworkConfig) -> Result<Analysis, CliError> {
        Ok(Analysis::new(cfg, &self.quad)?.with_config_hash(self.hash.clone()))
    }

    pub fn manifest(&self, command: &str, seed: Option<u64>, outputs: &[PathBuf], started: std::time::Instant) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            config_path: self.config_path.as_ref().map(|p| p.display().to_string()),
            config_echo: self.file.to_toml(),
            config_hash: self.hash.clone(),
            quadrature: RunManifest::quadrature_text(&self.quad),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: started.elapsed().as_secs_f64(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }
}

/// Optional Monte Carlo companion run.
#[derive(Debug, Clone, Copy)]
pub struct McRequest {
    pub n: usize,
    pub seed: u64,
}

fn check_mc(mc: Option<McRequest>, min: usize) -> Result<Option<McRequest>, CliError> {
    match mc {
        Some(m) if m.n < min => Err(CliError::Config(format!("--mc {} is below the minimum of {min} realizations", m.n))),
        other => Ok(other),
    }
}

const CURVE_HEADER: [&str; 5] = ["threshold", "value", "method", "config_hash", "threshold_db"];
const MC_HEADER: [&str; 9] = ["threshold", "value", "method", "config_hash", "ci_lo", "ci_hi", "n", "seed", "threshold_db"];

fn curve_rows(ts: &[f64], values: &[f64], method: &str, hash: &str, unit: Unit) -> Vec<Vec<String>> {
    ts.iter()
        .zip(values)
        .map(|(t, v)| vec![format!("{t:e}"), v.to_string(), method.to_string(), hash.to_string(), decibel_of(*t, unit)])
        .collect()
}

fn mc_rows(res: &EmpiricalResult, hash: &str, unit: Unit) -> Vec<Vec<String>> {
    (0..res.thresholds.len())
        .map(|k| {
            let t = res.thresholds[k];
            vec![
                format!("{t:e}"),
                res.probabilities[k].to_string(),
                "monte_carlo".to_string(),
                hash.to_string(),
                res.ci_lo[k].to_string(),
                res.ci_hi[k].to_string(),
                res.n_realizations.to_string(),
                res.seed.to_string(),
                decibel_of(t, unit),
            ]
        })
        .collect()
}

/// Unit of the decibel column: dBm for powers in W, dB otherwise.
#[derive(Clone, Copy)]
enum Unit {
    Dbm,
    Db,
}

fn decibel_of(t: f64, unit: Unit) -> String {
    match unit {
        Unit::Dbm => decibel(t * 1e3),
        Unit::Db => decibel(t),
    }
}

pub fn emfe(
    ctx: &Context,
    user: &str,
    te_dbm: &str,
    out: &Path,
    mc: Option<McRequest>,
) -> Result<Vec<PathBuf>, CliError> {
    let user = UserKind::parse(user)?;
    let mc = check_mc(mc, 1000)?;
    if user == UserKind::Random {
        log::warn!("d_m = {} is ignored for the random user", ctx.file.d_m);
    }
    let ts: Vec<f64> = parse_grid("te-grid", te_dbm)?.into_iter().map(dbm_to_w).collect();
    let an = ctx.analysis(&ctx.cfg)?;
    let curve = an.emfe_curve(user, &ts)?;
    let mut header = CURVE_HEADER;
    header[4] = "threshold_dbm";
    write_csv(out, &header, &curve_rows(&ts, &curve.values, &curve.method, &ctx.hash, Unit::Dbm))?;
    let mut files = vec![out.to_path_buf()];
    if let Some(m) = mc {
        let samples = simulate(&ctx.cfg, m.n, m.seed);
        let res = empirical_from_samples(McMetric::EmfeCdf(user), &samples, &ts, m.seed);
        let path = sibling(out, "_mc");
        let mut header = MC_HEADER;
        header[8] = "threshold_dbm";
        write_csv(&path, &header, &mc_rows(&res, &ctx.hash, Unit::Dbm))?;
        files.push(path);
    }
    Ok(files)
}

pub fn coverage(
    ctx: &Context,
    tc_db: &str,
    include_snr: bool,
    out: &Path,
    mc: Option<McRequest>,
) -> Result<Vec<PathBuf>, CliError> {
    let mc = check_mc(mc, 1000)?;
    let tcs: Vec<f64> = parse_grid("tc-grid", tc_db)?.into_iter().map(db_to_lin).collect();
    let an = ctx.analysis(&ctx.cfg)?;
    let sinr = an.coverage_curve(&tcs, true)?;
    write_csv(out, &CURVE_HEADER, &curve_rows(&tcs, &sinr.values, &sinr.method, &ctx.hash, Unit::Db))?;
    let mut files = vec![out.to_path_buf()];
    if include_snr {
        let snr = an.coverage_curve(&tcs, false)?;
        let path = sibling(out, "_snr");
        write_csv(&path, &CURVE_HEADER, &curve_rows(&tcs, &snr.values, &snr.method, &ctx.hash, Unit::Db))?;
        files.push(path);
    }
    if let Some(m) = mc {
        let samples = simulate(&ctx.cfg, m.n, m.seed);
        let mut metrics = vec![(McMetric::SinrCcdf, "_mc")];
        if include_snr {
            metrics.push((McMetric::SnrCcdf, "_snr_mc"));
        }
        for (metric, suffix) in metrics {
            let res = empirical_from_samples(metric, &samples, &tcs, m.seed);
            let path = sibling(out, suffix);
            write_csv(&path, &MC_HEADER, &mc_rows(&res, &ctx.hash, Unit::Db))?;
            files.push(path);
        }
    }
    Ok(files)
}

pub struct ScaiuArgs<'a> {
    pub tc_db: f64,
    pub te_dbm: &'a str,
    pub d_grid: Option<&'a str>,
    pub bounds: bool,
    pub mc: Option<McRequest>,
}

pub fn scaiu(ctx: &Context, args: ScaiuArgs<'_>, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mc = check_mc(args.mc, 10_000)?;
    let tes: Vec<f64> = parse_grid("te-grid", args.te_dbm)?.into_iter().map(dbm_to_w).collect();
    let ds = match args.d_grid {
        Some(g) => parse_grid("d-grid", g)?,
        None => vec![ctx.file.d_m],
    };
    let t_c = db_to_lin(args.tc_db);
    let mut header = vec!["d_m", "threshold", "value", "conditional", "f_cov", "f_emfe"];
    if args.bounds {
        header.extend(["frechet_lb", "frechet_ub"]);
    }
    header.extend(["method", "config_hash", "t_c", "t_c_db", "threshold_dbm"]);
    if mc.is_some() {
        header.extend(["mc_value", "ci_lo", "ci_hi", "n", "seed"]);
    }
    let mut rows = Vec::new();
    for &d in &ds {
        let cfg = ConfigFile { d_m: d, ..ctx.file.clone() }.build()?;
        let an = ctx.analysis(&cfg)?;
        let grid = an.scaiu_grid(&[t_c], &tes)?;
        let empirical = mc.map(|m| {
            let pairs: Vec<(f64, f64)> = tes.iter().map(|&e| (t_c, e)).collect();
            joint_from_samples(&simulate(&cfg, m.n, m.seed), &pairs, m.seed)
        });
        for (k, p) in grid[0].iter().enumerate() {
            let mut row = vec![d.to_string(), format!("{:e}", p.t_e), p.scaiu.to_string(), p.conditional.to_string()];
            row.extend([p.f_cov.to_string(), p.f_emfe.to_string()]);
            if args.bounds {
                row.extend([p.frechet_lb.to_string(), p.frechet_ub.to_string()]);
            }
            row.extend([an.method().to_string(), ctx.hash.clone(), format!("{t_c:e}"), args.tc_db.to_string()]);
            row.push(decibel(p.t_e * 1e3));
            if let (Some(res), Some(m)) = (&empirical, mc) {
                row.extend([
                    res.probabilities[k].to_string(),
                    res.ci_lo[k].to_string(),
                    res.ci_hi[k].to_string(),
                    m.n.to_string(),
                    m.seed.to_string(),
                ]);
            }
            rows.push(row);
        }
    }
    write_csv(out, &header, &rows)?;
    Ok(vec![out.to_path_buf()])
}

pub struct ContourArgs<'a> {
    pub n_list: &'a str,
    pub d_list: &'a str,
    pub metric: &'a str,
    pub te_dbm: f64,
    pub tc_db: f64,
    pub levels: &'a str,
}

pub fn contour(ctx: &Context, args: ContourArgs<'_>, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let metric = SweepMetric::parse(args.metric, db_to_lin(args.tc_db), dbm_to_w(args.te_dbm))?;
    let n_list = parse_counts("n-list", args.n_list)?;
    let d_list = parse_grid("d-list", args.d_list)?;
    let levels = parse_grid("levels", args.levels)?;
    if levels.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(CliError::Config(format!("--levels `{}` must lie in [0, 1]", args.levels)));
    }
    let grid = contour_sweep(&ctx.file, &n_list, &d_list, metric, &ctx.quad)?;
    let method = ctx.analysis(&ctx.cfg)?.method();
    let mut rows = Vec::new();
    for (i, &n) in grid.n_list.iter().enumerate() {
        for (j, &d) in grid.d_list.iter().enumerate() {
            let value = grid.values[i][j].map_or(String::new(), |v| v.to_string());
            let error = grid.errors.iter().find(|e| e.0 == n && e.1 == d).map_or(String::new(), |e| e.2.clone());
            rows.push(vec![n.to_string(), d.to_string(), value, metric.name().to_string(), method.to_string(), ctx.hash.clone(), error]);
        }
    }
    write_csv(out, &["n_elements", "d_m", "value", "metric", "method", "config_hash", "error"], &rows)?;
    let mut files = vec![out.to_path_buf()];
    for level in levels {
        let path = sibling(out, &format!("_level_{level}"));
        let pts: Vec<Vec<String>> = grid
            .contour(level)
            .iter()
            .map(|p| vec![p.n_elements.to_string(), p.d_m.to_string(), level.to_string(), ctx.hash.clone()])
            .collect();
        write_csv(&path, &["n_elements", "d_m", "level", "config_hash"], &pts)?;
        files.push(path);
    }
    Ok(files)
}
