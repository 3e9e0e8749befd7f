use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cliqdecomp::bench::{run_bench, write_csv, BenchConfig};
use cliqdecomp::format::{
    parse_instance, parse_membership, parse_solution, read_file, write_blocks, write_file, write_instance,
    write_provenance, write_solution, InstanceFile,
};
use cliqdecomp::pipeline::{solve_pipeline, Alg, Decision, PipelineConfig, Report};
use cliqdecomp_core::gen::{
    e3c_witness, exact_cover, gen_e3c, gen_lv, gen_random_planted, gen_tf, random_e3c, random_membership, rng,
    LvParams, MembershipTable, MimicParams, PlantedInstance, RandomParams, TfScale, WeightModel,
};
use cliqdecomp_core::ip::IpOptions;
use cliqdecomp_core::kernel::{kernelize, Kernelized};
use cliqdecomp_core::oracle::oracle_decide;
use cliqdecomp_core::preprocess::{preprocess, Preprocessed};
use cliqdecomp_core::scalar::ParseWeight;
use cliqdecomp_core::{
    decomposition_from, find_violation, graph_to_instance, instance_to_graph, Rational, Scalar, SearchOptions,
    Violation,
};

const EXIT_OK: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_TIMEOUT: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "cliqdecomp", version, about = "Exact weighted clique decomposition")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Exact rational arithmetic or floating point with tolerance `--eps`.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search timeout in seconds.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    /// Worker threads for `bench`.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Tf,
    Lv,
    Random,
    E3c,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Small,
    Medium,
    Large,
}

impl Scale {
    fn tf(self) -> TfScale {
        match self {
            Scale::Small => TfScale::Small,
            Scale::Medium => TfScale::Medium,
            Scale::Large => TfScale::Large,
        }
    }

    fn lv(self) -> i64 {
        match self {
            Scale::Small => 1,
            Scale::Medium => 2,
            Scale::Large => 4,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate planted instances into a directory (`NAME.inst`, `.truth`, `.prov`).
    Gen(GenArgs),
    /// Strip separable cliques; writes `PREFIX.inst` and `PREFIX.removed`.
    Preprocess {
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply the block reduction rules; writes `PREFIX.inst` and `PREFIX.blocks`.
    Kernelize {
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full pipeline.
    Solve(SolveArgs),
    /// Brute-force decision for tiny instances.
    Oracle {
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file against an instance.
    Verify { input: PathBuf, solution: PathBuf },
    /// Run every instance of a corpus directory and write a timing CSV.
    Bench {
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "lp,ip,wecp")]
        algs: Vec<Alg>,
        #[arg(long)]
        out: PathBuf,
        /// Directory for solution files of solved rows.
        #[arg(long)]
        solutions: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Clique count, or an inclusive range `lo..hi`.
    #[arg(long, default_value = "3")]
    k: String,
    #[arg(long, value_enum, default_value_t = Scale::Medium)]
    scale: Scale,
    /// Instances per `k`, with seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Membership TSV for tf/lv; a random mimic is used otherwise.
    #[arg(long)]
    membership: Option<PathBuf>,
    /// Vertex count for the random model (default 3k + 3).
    #[arg(long)]
    n: Option<usize>,
    /// Percent chance that a random clique overlaps earlier ones.
    #[arg(long, default_value_t = 60)]
    overlap: u32,
    /// E3C universe size is 3q.
    #[arg(long, default_value_t = 1)]
    q: usize,
    /// E3C set count.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Plant an exact cover in E3C instances.
    #[arg(long)]
    plant: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, default_value = "lp")]
    alg: Alg,
    /// Clique budget; defaults to the header value.
    #[arg(long)]
    k: Option<usize>,
    /// Baseline budget (sum of clique weights).
    #[arg(long = "K")]
    big_k: Option<usize>,
    /// Try budgets `lo..hi` in ascending order and stop at the first yes.
    #[arg(long)]
    sweep_k: Option<String>,
    /// Write the solution here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bound integer weights by the largest edge weight.
    #[arg(long)]
    cap_weights: bool,
    /// Skip basis rows that only permute interchangeable clique columns.
    #[arg(long)]
    symmetry_breaking: bool,
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().trim_start_matches('=').parse()?),
        None => {
            let v = s.trim().parse()?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty range {s}");
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.global.mode {
        Mode::Exact => run::<Rational>(&cli),
        Mode::Float => run::<f64>(&cli),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn timeout(g: &Global) -> Result<Option<Duration>> {
    g.timeout
        .map(|t| Duration::try_from_secs_f64(t).map_err(|_| anyhow!("bad timeout {t}")))
        .transpose()
}

fn load<S: Scalar + ParseWeight>(path: &Path, eps: f64) -> Result<InstanceFile<S>> {
    parse_instance(&read_file(path)?, eps).with_context(|| path.display().to_string())
}

fn out_path(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn run<S: Scalar + ParseWeight + Send>(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Gen(a) => gen(a, g),
        Cmd::Preprocess { input, k, out } => {
            let f = load::<S>(input, g.eps)?;
            let k = k.unwrap_or(f.k);
            match preprocess(&f.graph, k) {
                Preprocessed::No => {
                    println!("result: no (more than {k} separable cliques)");
                    Ok(EXIT_NO)
                }
                Preprocessed::Reduced(r) => {
                    write_file(&out_path(out, "inst"), &write_instance(&r.reduced, r.k_reduced))?;
                    write_file(&out_path(out, "removed"), &write_solution(&f.graph, &r.removed))?;
                    println!(
                        "removed {} cliques; n {} -> {}, k {} -> {}",
                        r.removed.len(),
                        f.graph.n(),
                        r.reduced.n(),
                        k,
                        r.k_reduced
                    );
                    Ok(EXIT_OK)
                }
            }
        }
        Cmd::Kernelize { input, k, out } => {
            let f = load::<S>(input, g.eps)?;
            let inst = graph_to_instance(&f.graph, k.unwrap_or(f.k))?;
            match kernelize(&inst) {
                Kernelized::No { blocks } => {
                    println!("result: no ({blocks} blocks exceed 2^{})", inst.k());
                    Ok(EXIT_NO)
                }
                Kernelized::Reduced(kr) => {
                    let labels = kr.kept.iter().map(|&v| f.graph.label(v).to_string()).collect();
                    let kg = instance_to_graph(&kr.reduced, labels)?;
                    write_file(&out_path(out, "inst"), &write_instance(&kg, inst.k()))?;
                    write_file(&out_path(out, "blocks"), &write_blocks(f.graph.labels(), &kr))?;
                    println!("blocks {}; n {} -> {}", kr.blocks.len(), inst.n(), kr.reduced.n());
                    Ok(EXIT_OK)
                }
            }
        }
        Cmd::Solve(a) => solve::<S>(a, g),
        Cmd::Oracle { input, k, out } => {
            let f = load::<S>(input, g.eps)?;
            let inst = graph_to_instance(&f.graph, k.unwrap_or(f.k))?;
            match oracle_decide(&inst)? {
                None => {
                    println!("result: no");
                    Ok(EXIT_NO)
                }
                Some((b, w)) => {
                    let d = decomposition_from(&b, &w, g.eps);
                    if let Some(v) = find_violation(&f.graph, &d) {
                        bail!("oracle witness fails verification: {v:?}");
                    }
                    println!("result: yes");
                    emit(&write_solution(&f.graph, &d), out.as_deref())?;
                    Ok(EXIT_OK)
                }
            }
        }
        Cmd::Verify { input, solution } => {
            let f = load::<S>(input, g.eps)?;
            let d = parse_solution(&read_file(solution)?, &f.graph).with_context(|| solution.display().to_string())?;
            match find_violation(&f.graph, &d) {
                None => {
                    println!("ok: {} cliques, budget {}", d.len(), f.k);
                    Ok(EXIT_OK)
                }
                Some(v) => {
                    println!("fail: {}", describe(&f, &v));
                    Ok(EXIT_NO)
                }
            }
        }
        Cmd::Bench { corpus, algs, out, solutions } => {
            let cfg = BenchConfig {
                algs: algs.clone(),
                timeout: timeout(g)?,
                parallel: g.parallel,
                solutions: solutions.clone(),
                eps: g.eps,
            };
            let rows = run_bench::<S>(corpus, &cfg)?;
            let file = fs::File::create(out).with_context(|| out.display().to_string())?;
            write_csv(&rows, file)?;
            println!("{} rows written to {}", rows.len(), out.display());
            Ok(EXIT_OK)
        }
    }
}

fn describe<S: Scalar + ParseWeight>(f: &InstanceFile<S>, v: &Violation<S>) -> String {
    let l = |i: usize| f.graph.labels().get(i).map_or_else(|| i.to_string(), Clone::clone);
    match v {
        Violation::VertexOutOfRange(u) => format!("vertex {u} out of range"),
        Violation::Edge { u, v, expected, actual } => format!(
            "edge {} {}: expected {}, cliques sum to {}",
            l(*u),
            l(*v),
            expected.format_weight(),
            actual.format_weight()
        ),
        Violation::Vertex { v, expected, actual } => format!(
            "vertex {}: expected {}, cliques sum to {}",
            l(*v),
            expected.format_weight(),
            actual.format_weight()
        ),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => Ok(write_file(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_report<S>(budget: usize, r: &Report<S>) {
    let t = r.times;
    println!(
        "budget {budget}: {} (preprocess {:.3} ms, kernel {:.3} ms, decompose {:.3} ms, total {:.3} ms, n_ker {})",
        r.decision.label(),
        t.preprocess.as_secs_f64() * 1e3,
        t.kernel.as_secs_f64() * 1e3,
        t.decompose.as_secs_f64() * 1e3,
        t.total.as_secs_f64() * 1e3,
        r.n_ker.map_or_else(|| "na".to_string(), |n| n.to_string()),
    );
}

fn solve<S: Scalar + ParseWeight>(a: &SolveArgs, g: &Global) -> Result<u8> {
    let f = load::<S>(&a.input, g.eps)?;
    let default = match a.alg {
        Alg::Wecp => a.big_k.ok_or_else(|| anyhow!("--alg wecp needs --K"))?,
        _ => a.k.unwrap_or(f.k),
    };
    let (lo, hi) = match &a.sweep_k {
        Some(s) => parse_range(s)?,
        None => (default, default),
    };
    let mut cfg = PipelineConfig::new(a.alg, lo).with_timeout(timeout(g)?);
    cfg.search = SearchOptions { symmetry_breaking: a.symmetry_breaking };
    cfg.ip = IpOptions { cap_weights: a.cap_weights };
    let mut last = EXIT_NO;
    for budget in lo..=hi {
        cfg.budget = budget;
        let r = solve_pipeline(&f.graph, &cfg)?;
        print_report(budget, &r);
        match &r.decision {
            Decision::Yes(d) => {
                emit(&write_solution(&f.graph, d), a.out.as_deref())?;
                return Ok(EXIT_OK);
            }
            Decision::No => last = EXIT_NO,
            Decision::Timeout => last = EXIT_TIMEOUT,
        }
    }
    Ok(last)
}

fn membership(a: &GenArgs, seed: u64) -> Result<MembershipTable> {
    match &a.membership {
        Some(p) => Ok(parse_membership(&read_file(p)?)?),
        None => Ok(random_membership(&MimicParams::default(), &mut rng(seed))?),
    }
}

fn write_planted(dir: &Path, name: &str, p: &PlantedInstance, budget: usize) -> Result<()> {
    write_file(&dir.join(format!("{name}.inst")), &write_instance(&p.graph, budget))?;
    write_file(&dir.join(format!("{name}.truth")), &write_solution(&p.graph, &p.truth))?;
    let mut prov = p.provenance.clone();
    prov.push(("K".into(), p.big_k().to_string()));
    write_file(&dir.join(format!("{name}.prov")), &write_provenance(&prov))?;
    Ok(())
}

fn gen(a: &GenArgs, g: &Global) -> Result<u8> {
    fs::create_dir_all(&a.out).with_context(|| a.out.display().to_string())?;
    let mut count = 0;
    if let Model::E3c = a.model {
        for s in 0..a.seeds {
            let seed = g.seed + s;
            let e = random_e3c(a.q, a.m, a.plant, &mut rng(seed))?;
            let (graph, budget) = gen_e3c(&e)?;
            let name = format!("e3c-q{}-m{}-s{seed}", a.q, a.m);
            let sets: Vec<String> = e.sets().iter().map(|s| format!("{}.{}.{}", s[0], s[1], s[2])).collect();
            let mut prov = vec![
                ("model".to_string(), "e3c".to_string()),
                ("q".into(), a.q.to_string()),
                ("m".into(), a.m.to_string()),
                ("seed".into(), seed.to_string()),
                ("sets".into(), sets.join(",")),
            ];
            write_file(&a.out.join(format!("{name}.inst")), &write_instance(&graph, budget))?;
            match exact_cover(&e) {
                Some(cover) => {
                    let truth = e3c_witness(&e, &cover);
                    prov.push(("cover".into(), "yes".into()));
                    prov.push(("K".into(), truth.len().to_string()));
                    write_file(&a.out.join(format!("{name}.truth")), &write_solution(&graph, &truth))?;
                }
                None => prov.push(("cover".into(), "no".into())),
            }
            write_file(&a.out.join(format!("{name}.prov")), &write_provenance(&prov))?;
            count += 1;
        }
        println!("{count} instances written to {}", a.out.display());
        return Ok(EXIT_OK);
    }
    let (klo, khi) = parse_range(&a.k)?;
    let table = match a.model {
        Model::Tf | Model::Lv => Some(membership(a, g.seed)?),
        _ => None,
    };
    let scale_name = match a.scale {
        Scale::Small => "small",
        Scale::Medium => "medium",
        Scale::Large => "large",
    };
    for k in klo..=khi {
        for s in 0..a.seeds {
            let seed = g.seed + s;
            let (model, p) = match a.model {
                Model::Tf => ("tf", gen_tf(k, a.scale.tf(), seed, table.as_ref().expect("loaded"))?),
                Model::Lv => ("lv", gen_lv(&LvParams::new(k, a.scale.lv(), seed), table.as_ref().expect("loaded"))?),
                Model::Random => {
                    let params = RandomParams {
                        k,
                        n: a.n.unwrap_or(3 * k + 3),
                        min_size: 3,
                        max_size: 5,
                        overlap_percent: a.overlap,
                        weights: WeightModel::HeavyTail(a.scale.tf().max_weight()),
                        seed,
                    };
                    ("random", gen_random_planted(&params)?)
                }
                Model::E3c => unreachable!("handled above"),
            };
            let name = format!("{model}-{scale_name}-k{k}-s{seed}");
            write_planted(&a.out, &name, &p, p.k)?;
            count += 1;
        }
    }
    println!("{count} instances written to {}", a.out.display());
    Ok(EXIT_OK)
}
