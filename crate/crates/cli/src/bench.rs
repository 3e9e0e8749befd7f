//! Corpus runner: every instance under every algorithm, four timing rows each.
//!
//! A corpus is a directory of `NAME.inst` files. Optional sidecars:
//! `NAME.truth` (planted solution) and `NAME.prov` (`key=value` lines; `K`
//! gives the baseline budget, otherwise the planted total weight is used).

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Duration;

use cliqdecomp_core::scalar::ParseWeight;
use cliqdecomp_core::{Decomposition, Scalar};

use crate::format::{parse_instance, parse_provenance, parse_solution, read_file, write_file, write_solution, FormatError};
use crate::pipeline::{solve_pipeline, Alg, Decision, PipelineConfig, Report};

pub const HEADER: [&str; 11] =
    ["instance", "n", "m", "k", "K", "alg", "phase", "time_ms", "result", "n_ker", "recovered_ground_truth"];
pub const PHASES: [&str; 4] = ["preprocess", "kernel", "decompose", "total"];

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algs: Vec<Alg>,
    pub timeout: Option<Duration>,
    pub parallel: usize,
    /// Where solution files of yes rows go (`NAME.ALG.sol`).
    pub solutions: Option<PathBuf>,
    pub eps: f64,
}

/// One CSV row; every field already rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row(pub [String; 11]);

impl Row {
    pub fn get(&self, column: &str) -> &str {
        let i = HEADER.iter().position(|h| *h == column).expect("known column");
        &self.0[i]
    }
}

/// `NAME.inst` files in `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, FormatError> {
    let rd = std::fs::read_dir(dir).map_err(|err| FormatError::Io { path: dir.display().to_string(), err })?;
    let mut files: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "inst"))
        .collect();
    files.sort();
    Ok(files)
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

struct Loaded<S> {
    file: crate::format::InstanceFile<S>,
    truth: Option<Decomposition<S>>,
    big_k: Option<usize>,
}

fn load<S: Scalar + ParseWeight>(inst: &Path, eps: f64) -> Result<Loaded<S>, FormatError> {
    let file = parse_instance::<S>(&read_file(inst)?, eps)?;
    let truth_path = inst.with_extension("truth");
    let truth = if truth_path.exists() { Some(parse_solution(&read_file(&truth_path)?, &file.graph)?) } else { None };
    let prov_path = inst.with_extension("prov");
    let prov = if prov_path.exists() { parse_provenance(&read_file(&prov_path)?)? } else { Vec::new() };
    let big_k = prov
        .iter()
        .find(|(k, _)| k == "K")
        .and_then(|(_, v)| v.parse().ok())
        .or_else(|| truth.as_ref().and_then(|t| t.total_weight().to_integer(eps)).and_then(|v| usize::try_from(v).ok()));
    Ok(Loaded { file, truth, big_k })
}

fn na() -> String {
    "na".to_string()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(na, |v| v.to_string())
}

fn ms(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

fn run_one<S: Scalar + ParseWeight>(path: &Path, alg: Alg, cfg: &BenchConfig) -> Vec<Row> {
    let name = stem(path);
    let error_rows = |n: String, m: String, k: String, big_k: String, msg: &str| {
        eprintln!("{name} [{}]: {msg}", alg.name());
        PHASES
            .iter()
            .map(|ph| {
                Row([
                    name.clone(),
                    n.clone(),
                    m.clone(),
                    k.clone(),
                    big_k.clone(),
                    alg.name().into(),
                    ph.to_string(),
                    na(),
                    "error".into(),
                    na(),
                    na(),
                ])
            })
            .collect::<Vec<_>>()
    };
    let loaded = match load::<S>(path, cfg.eps) {
        Ok(l) => l,
        Err(e) => return error_rows(na(), na(), na(), na(), &e.to_string()),
    };
    let g = &loaded.file.graph;
    let (n, m, k, big_k) =
        (g.n().to_string(), g.edges().len().to_string(), loaded.file.k.to_string(), opt(loaded.big_k));
    let budget = match alg {
        Alg::Wecp => match loaded.big_k {
            Some(b) => b,
            None => return error_rows(n, m, k, big_k, "no K for the baseline (missing .prov and .truth)"),
        },
        _ => loaded.file.k,
    };
    let pc = PipelineConfig::new(alg, budget).with_timeout(cfg.timeout);
    let report: Report<S> = match solve_pipeline(g, &pc) {
        Ok(r) => r,
        Err(e) => return error_rows(n, m, k, big_k, &e.to_string()),
    };
    let recovered = match (&loaded.truth, &report.decision) {
        (None, _) => na(),
        (Some(t), Decision::Yes(d)) => d.same_family(t, cfg.eps).to_string(),
        (Some(_), _) => "false".into(),
    };
    if let (Some(dir), Decision::Yes(d)) = (&cfg.solutions, &report.decision) {
        let out = dir.join(format!("{name}.{}.sol", alg.name()));
        if let Err(e) = write_file(&out, &write_solution(g, d)) {
            return error_rows(n, m, k, big_k, &e.to_string());
        }
    }
    let t = report.times;
    [t.preprocess, t.kernel, t.decompose, t.total]
        .iter()
        .zip(PHASES)
        .map(|(d, ph)| {
            Row([
                name.clone(),
                n.clone(),
                m.clone(),
                k.clone(),
                big_k.clone(),
                alg.name().into(),
                ph.into(),
                ms(*d),
                report.decision.label().into(),
                opt(report.n_ker),
                recovered.clone(),
            ])
        })
        .collect()
}

/// Runs the corpus. Rows come out ordered by instance name, then algorithm
/// in `cfg.algs` order, then phase, regardless of `cfg.parallel`.
pub fn run_bench<S>(dir: &Path, cfg: &BenchConfig) -> Result<Vec<Row>, FormatError>
where
    S: Scalar + ParseWeight + Send,
{
    let files = corpus_files(dir)?;
    if let Some(s) = &cfg.solutions {
        std::fs::create_dir_all(s).map_err(|err| FormatError::Io { path: s.display().to_string(), err })?;
    }
    let jobs: Vec<(usize, &Path, Alg)> = files
        .iter()
        .flat_map(|f| cfg.algs.iter().map(move |&a| (f.as_path(), a)))
        .enumerate()
        .map(|(i, (f, a))| (i, f, a))
        .collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|s| {
        for _ in 0..cfg.parallel.max(1) {
            let tx = tx.clone();
            let (jobs, next) = (&jobs, &next);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(idx, path, alg)) = jobs.get(i) else { break };
                let _ = tx.send((idx, run_one::<S>(path, alg, cfg)));
            });
        }
    });
    drop(tx);
    let mut results: Vec<(usize, Vec<Row>)> = rx.into_iter().collect();
    results.sort_by_key(|r| r.0);
    Ok(results.into_iter().flat_map(|r| r.1).collect())
}

pub fn write_csv<W: std::io::Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(&r.0)?;
    }
    w.flush()?;
    Ok(())
}
