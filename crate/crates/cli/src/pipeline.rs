//! preprocess → kernelize → search → lift → reassemble → verify.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use cliqdecomp_core::ip::{clique_decomp_ip, IpOptions};
use cliqdecomp_core::kernel::{kernelize, lift, Kernelized};
use cliqdecomp_core::lp::clique_decomp_lp;
use cliqdecomp_core::preprocess::{preprocess, reassemble, Preprocessed};
use cliqdecomp_core::wecp::solve_wecp;
use cliqdecomp_core::{
    decomposition_from, find_violation, graph_to_instance, AnnotatedGraph, Clique, Decomposition, Interrupt, Outcome,
    Scalar, SearchOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alg {
    Lp,
    Ip,
    Wecp,
}

impl Alg {
    pub const ALL: [Alg; 3] = [Alg::Lp, Alg::Ip, Alg::Wecp];

    pub fn name(self) -> &'static str {
        match self {
            Alg::Lp => "lp",
            Alg::Ip => "ip",
            Alg::Wecp => "wecp",
        }
    }
}

impl std::str::FromStr for Alg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lp" => Ok(Alg::Lp),
            "ip" => Ok(Alg::Ip),
            "wecp" => Ok(Alg::Wecp),
            _ => Err(format!("unknown algorithm {s:?} (expected lp, ip or wecp)")),
        }
    }
}

/// Interrupt that fires once a wall-clock deadline has passed.
#[derive(Debug, Clone, Copy)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn after(timeout: Option<Duration>) -> Self {
        Deadline(timeout.map(|t| Instant::now() + t))
    }

    pub fn none() -> Self {
        Deadline(None)
    }
}

impl Interrupt for Deadline {
    fn interrupted(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub alg: Alg,
    /// `k` for lp/ip, `K` for wecp.
    pub budget: usize,
    /// Applies to the search stage.
    pub timeout: Option<Duration>,
    pub search: SearchOptions,
    pub ip: IpOptions,
}

impl PipelineConfig {
    pub fn new(alg: Alg, budget: usize) -> Self {
        PipelineConfig {
            alg,
            budget,
            timeout: None,
            search: SearchOptions::default(),
            ip: IpOptions::default(),
        }
    }

    pub fn with_timeout(mut self, t: Option<Duration>) -> Self {
        self.timeout = t;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision<S> {
    Yes(Decomposition<S>),
    No,
    Timeout,
}

impl<S> Decision<S> {
    pub fn label(&self) -> &'static str {
        match self {
            Decision::Yes(_) => "yes",
            Decision::No => "no",
            Decision::Timeout => "timeout",
        }
    }

    pub fn solution(&self) -> Option<&Decomposition<S>> {
        match self {
            Decision::Yes(d) => Some(d),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimes {
    pub preprocess: Duration,
    pub kernel: Duration,
    /// Search plus lift, reassembly and final verification.
    pub decompose: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report<S> {
    pub decision: Decision<S>,
    pub times: StageTimes,
    /// Vertices left after preprocessing.
    pub n_pre: usize,
    /// Rows of the kernel, when kernelization ran and succeeded.
    pub n_ker: Option<usize>,
    /// Budget left after preprocessing.
    pub budget_reduced: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
#[error("{stage}: {msg}")]
pub struct StageError {
    pub stage: &'static str,
    pub msg: String,
}

fn stage_err(stage: &'static str) -> impl Fn(cliqdecomp_core::Error) -> StageError {
    move |e| StageError { stage, msg: e.to_string() }
}

/// Collapses repeated vertex sets into one clique with the summed weight.
/// The unit-weight baseline emits a weight-`w` clique as `w` copies.
pub fn merge_duplicates<S: Scalar>(d: &Decomposition<S>) -> Decomposition<S> {
    let mut acc: BTreeMap<Vec<usize>, S> = BTreeMap::new();
    let mut order = Vec::new();
    for c in &d.cliques {
        match acc.get_mut(&c.vertices) {
            Some(w) => *w = w.clone() + c.weight.clone(),
            None => {
                order.push(c.vertices.clone());
                acc.insert(c.vertices.clone(), c.weight.clone());
            }
        }
    }
    Decomposition::new(order.into_iter().map(|v| {
        let w = acc[&v].clone();
        Clique::new(v, w)
    }).collect())
}

/// Runs every stage on `g`. A solution is only returned after it verified on
/// `g` itself.
pub fn solve_pipeline<S: Scalar>(g: &AnnotatedGraph<S>, cfg: &PipelineConfig) -> Result<Report<S>, StageError> {
    let start = Instant::now();
    let mut times = StageTimes::default();
    let eps = g.eps();
    let finish = |decision, mut times: StageTimes, n_pre, n_ker, budget_reduced| {
        times.total = start.elapsed();
        Ok(Report { decision, times, n_pre, n_ker, budget_reduced })
    };

    let t = Instant::now();
    let pre = match preprocess(g, cfg.budget) {
        Preprocessed::Reduced(r) => r,
        Preprocessed::No => {
            times.preprocess = t.elapsed();
            return finish(Decision::No, times, g.n(), None, None);
        }
    };
    let budget = match cfg.alg {
        Alg::Wecp => {
            let used = pre.removed.total_weight();
            let Some(used) = used.to_integer(eps).and_then(|u| usize::try_from(u).ok()) else {
                return Err(StageError { stage: "preprocess", msg: "removed clique weights are not integral".into() });
            };
            cfg.budget.checked_sub(used)
        }
        _ => Some(pre.k_reduced),
    };
    times.preprocess = t.elapsed();
    let n_pre = pre.reduced.n();
    let Some(budget) = budget else {
        return finish(Decision::No, times, n_pre, None, None);
    };

    let t = Instant::now();
    if budget == 0 {
        let empty = Decomposition::default();
        times.kernel = t.elapsed();
        if find_violation(&pre.reduced, &empty).is_some() {
            return finish(Decision::No, times, n_pre, Some(0), Some(0));
        }
        let td = Instant::now();
        let full = reassemble(&pre, &empty);
        let decision = checked(g, full)?;
        times.decompose = td.elapsed();
        return finish(decision, times, n_pre, Some(0), Some(0));
    }
    let inst = graph_to_instance(&pre.reduced, budget).map_err(stage_err("kernel"))?;
    let kr = match kernelize(&inst) {
        Kernelized::Reduced(kr) => kr,
        Kernelized::No { .. } => {
            times.kernel = t.elapsed();
            return finish(Decision::No, times, n_pre, None, Some(budget));
        }
    };
    times.kernel = t.elapsed();
    let n_ker = kr.reduced.n();

    let t = Instant::now();
    let stop = Deadline::after(cfg.timeout);
    let outcome = match cfg.alg {
        Alg::Lp => clique_decomp_lp(&kr.reduced, cfg.search, &stop),
        Alg::Ip => clique_decomp_ip(&kr.reduced, cfg.ip, cfg.search, &stop),
        Alg::Wecp => solve_wecp(&kr.reduced, budget, cfg.search, &stop),
    }
    .map_err(stage_err("decompose"))?;
    let decision = match outcome {
        Outcome::No => Decision::No,
        Outcome::Interrupted => Decision::Timeout,
        Outcome::Found(b, w) => {
            let (b, w) = lift(&kr, &b, &w).map_err(stage_err("lift"))?;
            let mut sub = decomposition_from(&b, &w, eps);
            if cfg.alg == Alg::Wecp {
                sub = merge_duplicates(&sub);
            }
            checked(g, reassemble(&pre, &sub))?
        }
    };
    times.decompose = t.elapsed();
    finish(decision, times, n_pre, Some(n_ker), Some(budget))
}

fn checked<S: Scalar>(g: &AnnotatedGraph<S>, d: Decomposition<S>) -> Result<Decision<S>, StageError> {
    match find_violation(g, &d) {
        None => Ok(Decision::Yes(d)),
        Some(v) => Err(StageError { stage: "verify", msg: format!("assembled solution fails on the input graph: {v:?}") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cliqdecomp_core::Rational;

    fn graph(n: usize, edges: &[(usize, usize, i64)]) -> AnnotatedGraph<Rational> {
        let e = edges.iter().map(|&(u, v, w)| (u, v, Rational::from_int(w))).collect();
        AnnotatedGraph::new(n, e, BTreeMap::new()).unwrap()
    }

    fn two_cliques() -> AnnotatedGraph<Rational> {
        graph(4, &[(0, 1, 1), (0, 2, 1), (1, 2, 3), (1, 3, 2), (2, 3, 2)])
    }

    #[test]
    fn disjoint_triangles_need_no_search() {
        let g = graph(6, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 2), (4, 5, 2), (3, 5, 2)]);
        for alg in [Alg::Lp, Alg::Ip] {
            let r = solve_pipeline(&g, &PipelineConfig::new(alg, 2)).unwrap();
            let d = r.decision.solution().expect("yes");
            assert_eq!(d.len(), 2);
            assert_eq!(r.n_pre, 0);
            assert_eq!(r.budget_reduced, Some(0));
            assert!(r.times.decompose < Duration::from_millis(50));
        }
        let r = solve_pipeline(&g, &PipelineConfig::new(Alg::Wecp, 3)).unwrap();
        assert!(r.decision.solution().is_some());
        assert_eq!(solve_pipeline(&g, &PipelineConfig::new(Alg::Lp, 1)).unwrap().decision, Decision::No);
        assert_eq!(solve_pipeline(&g, &PipelineConfig::new(Alg::Wecp, 2)).unwrap().decision, Decision::No);
    }

    #[test]
    fn overlapping_pair_all_algorithms() {
        let g = two_cliques();
        for alg in [Alg::Lp, Alg::Ip] {
            let r = solve_pipeline(&g, &PipelineConfig::new(alg, 2)).unwrap();
            let d = r.decision.solution().expect("yes");
            let truth = Decomposition::new(vec![
                Clique::new(vec![0, 1, 2], Rational::from_int(1)),
                Clique::new(vec![1, 2, 3], Rational::from_int(2)),
            ]);
            assert!(d.same_family(&truth, 0.0));
            assert_eq!(solve_pipeline(&g, &PipelineConfig::new(alg, 1)).unwrap().decision, Decision::No);
        }
        let r = solve_pipeline(&g, &PipelineConfig::new(Alg::Wecp, 3)).unwrap();
        assert_eq!(r.decision.solution().unwrap().len(), 2);
        assert_eq!(solve_pipeline(&g, &PipelineConfig::new(Alg::Wecp, 2)).unwrap().decision, Decision::No);
    }

    #[test]
    fn fractional_weights_reject_ip_only() {
        let g = graph(3, &[(0, 1, 2), (1, 2, 1), (0, 2, 1)]);
        let half = AnnotatedGraph::new(
            3,
            g.edges().iter().map(|&(u, v, w)| (u, v, w / Rational::from_int(2))).collect(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(solve_pipeline(&half, &PipelineConfig::new(Alg::Lp, 2)).unwrap().decision.solution().is_some());
        let e = solve_pipeline(&half, &PipelineConfig::new(Alg::Ip, 2)).unwrap_err();
        assert_eq!(e.stage, "decompose");
    }

    #[test]
    fn zero_timeout_reports_timeout() {
        let g = two_cliques();
        let cfg = PipelineConfig::new(Alg::Lp, 2).with_timeout(Some(Duration::ZERO));
        assert_eq!(solve_pipeline(&g, &cfg).unwrap().decision, Decision::Timeout);
    }

    #[test]
    fn merge_sums_repeats() {
        let d = Decomposition::new(vec![
            Clique::new(vec![0, 1], Rational::from_int(1)),
            Clique::new(vec![1, 2], Rational::from_int(1)),
            Clique::new(vec![0, 1], Rational::from_int(1)),
        ]);
        let m = merge_duplicates(&d);
        assert_eq!(m.cliques[0], Clique::new(vec![0, 1], Rational::from_int(2)));
        assert_eq!(m.len(), 2);
    }
}
