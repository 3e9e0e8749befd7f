//! Plain-text file formats.
//!
//! Instance files: a header `n m k`, then `m` edge lines `u v w`, then any
//! number of annotation lines `v u w` requiring the cliques through `u` to sum
//! to `w`. `#` starts a comment. Weights are decimals or `p/q`.
//!
//! Vertex tokens are labels. If every label is an integer below `n` the
//! labels are the vertex indices; otherwise vertices are numbered in order of
//! first appearance and any unused slots up to `n` get labels `_0`, `_1`, ...

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use cliqdecomp_core::gen::{MembershipTable, Module};
use cliqdecomp_core::kernel::KernelResult;
use cliqdecomp_core::scalar::{parse_rational, ParseWeight};
use cliqdecomp_core::{AnnotatedGraph, Clique, Decomposition, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
}

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|err| FormatError::Io { path: path.display().to_string(), err })
}

pub fn write_file(path: &Path, body: &str) -> Result<(), FormatError> {
    std::fs::write(path, body).map_err(|err| FormatError::Io { path: path.display().to_string(), err })
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile<S> {
    pub graph: AnnotatedGraph<S>,
    /// Budget from the header.
    pub k: usize,
}

impl<S> InstanceFile<S> {
    pub fn edge_count(&self) -> usize
    where
        S: Scalar,
    {
        self.graph.edges().len()
    }
}

fn parse_weight<S: ParseWeight + Scalar>(tok: &str, line: usize, eps: f64) -> Result<S, FormatError> {
    let w = S::parse_weight(tok).ok_or_else(|| perr(line, format!("bad weight {tok:?}")))?;
    if w.is_negative_tol(eps) {
        return Err(perr(line, format!("negative weight {tok}")));
    }
    Ok(w)
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| perr(line, format!("bad {what} {tok:?}")))
}

pub fn parse_instance<S: Scalar + ParseWeight>(text: &str, eps: f64) -> Result<InstanceFile<S>, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header \"n m k\""))?;
    if header.len() != 3 {
        return Err(perr(hl, "header must be \"n m k\""));
    }
    let n = parse_usize(header[0], hl, "vertex count")?;
    let m = parse_usize(header[1], hl, "edge count")?;
    let k = parse_usize(header[2], hl, "budget")?;

    let mut raw_edges: Vec<(usize, &str, &str, S)> = Vec::with_capacity(m);
    let mut raw_ann: Vec<(usize, &str, S)> = Vec::new();
    for (line, toks) in lines {
        if raw_edges.len() < m {
            if toks.len() != 3 {
                return Err(perr(line, "edge line must be \"u v w\""));
            }
            raw_edges.push((line, toks[0], toks[1], parse_weight(toks[2], line, eps)?));
        } else {
            if toks.len() != 3 || toks[0] != "v" {
                return Err(perr(line, format!("expected annotation \"v u w\" after {m} edges")));
            }
            raw_ann.push((line, toks[1], parse_weight(toks[2], line, eps)?));
        }
    }
    if raw_edges.len() < m {
        return Err(perr(text.lines().count().max(1), format!("expected {m} edges, found {}", raw_edges.len())));
    }

    let tokens = raw_edges.iter().flat_map(|e| [e.1, e.2]).chain(raw_ann.iter().map(|a| a.1));
    let numeric = tokens.clone().all(|t| t.parse::<usize>().is_ok_and(|v| v < n));
    let mut labels: Vec<String> = Vec::with_capacity(n);
    let mut index: HashMap<&str, usize> = HashMap::new();
    if numeric {
        labels.extend((0..n).map(|i| i.to_string()));
    } else {
        for t in tokens {
            if !index.contains_key(t) {
                index.insert(t, labels.len());
                labels.push(t.to_string());
            }
        }
        if labels.len() > n {
            return Err(FormatError::Invalid(format!("{} distinct vertex labels but n = {n}", labels.len())));
        }
        for i in labels.len()..n {
            labels.push(format!("_{i}"));
        }
    }
    let resolve = |t: &str| -> usize {
        if numeric {
            t.parse().expect("checked above")
        } else {
            index[t]
        }
    };

    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::with_capacity(m);
    for (line, a, b, w) in raw_edges {
        let (u, v) = (resolve(a), resolve(b));
        if u == v {
            return Err(perr(line, format!("self-loop at {a}")));
        }
        if let Some(prev) = seen.insert((u.min(v), u.max(v)), line) {
            return Err(perr(line, format!("duplicate edge {a} {b} (first on line {prev})")));
        }
        edges.push((u, v, w));
    }
    let mut annotated = BTreeMap::new();
    let mut ann_line = HashMap::new();
    for (line, a, w) in raw_ann {
        let u = resolve(a);
        if let Some(prev) = ann_line.insert(u, line) {
            return Err(perr(line, format!("vertex {a} annotated twice (first on line {prev})")));
        }
        annotated.insert(u, w);
    }
    let graph = AnnotatedGraph::with_labels(labels, edges, annotated, eps)
        .map_err(|e| FormatError::Invalid(e.to_string()))?;
    Ok(InstanceFile { graph, k })
}

pub fn write_instance<S: Scalar + ParseWeight>(g: &AnnotatedGraph<S>, k: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.n(), g.edges().len(), k);
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "{} {} {}", g.label(*u), g.label(*v), w.format_weight());
    }
    for (u, w) in g.annotated() {
        let _ = writeln!(out, "v {} {}", g.label(*u), w.format_weight());
    }
    out
}

/// One line per clique, `w: v1 v2 ...`, vertices ascending by index.
pub fn write_solution<S: Scalar + ParseWeight>(g: &AnnotatedGraph<S>, d: &Decomposition<S>) -> String {
    let mut out = String::new();
    for c in &d.cliques {
        let _ = write!(out, "{}:", c.weight.format_weight());
        for &v in &c.vertices {
            let _ = write!(out, " {}", g.label(v));
        }
        out.push('\n');
    }
    out
}

/// Parses a solution file against the labels of `g`.
pub fn parse_solution<S: Scalar + ParseWeight>(text: &str, g: &AnnotatedGraph<S>) -> Result<Decomposition<S>, FormatError> {
    let index: HashMap<&str, usize> = g.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut cliques = Vec::new();
    for (line, raw) in text.lines().enumerate() {
        let line = line + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (w, rest) = body.split_once(':').ok_or_else(|| perr(line, "expected \"w: v1 v2 ...\""))?;
        let w = parse_weight(w.trim(), line, g.eps())?;
        let mut vs = Vec::new();
        for t in rest.split_whitespace() {
            let v = *index.get(t).ok_or_else(|| perr(line, format!("unknown vertex {t:?}")))?;
            vs.push(v);
        }
        if vs.is_empty() {
            return Err(perr(line, "clique without vertices"));
        }
        cliques.push(Clique::new(vs, w));
    }
    Ok(Decomposition::new(cliques))
}

/// `key=value` lines.
pub fn write_provenance(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

pub fn parse_provenance(text: &str) -> Result<Vec<(String, String)>, FormatError> {
    let mut out = Vec::new();
    for (line, raw) in text.lines().enumerate() {
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| perr(line + 1, "expected key=value"))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Membership TSV: `module-id <TAB> gene <TAB> score <TAB> pathway-flag`.
/// Score may be empty or `-`; the flag is `1`/`0`/`true`/`false` and must be
/// consistent within a module. Modules keep their order of first appearance.
pub fn parse_membership(text: &str) -> Result<MembershipTable, FormatError> {
    let mut modules: Vec<Module> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (line, raw) in text.lines().enumerate() {
        let line = line + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
        if cols.len() < 2 || cols.len() > 4 {
            return Err(perr(line, "expected module, gene, score, pathway-flag"));
        }
        let score = match cols.get(2) {
            None | Some(&"") | Some(&"-") => None,
            Some(s) => Some(parse_rational(s).ok_or_else(|| perr(line, format!("bad score {s:?}")))?),
        };
        let flag = match cols.get(3) {
            None | Some(&"") | Some(&"0") | Some(&"false") => false,
            Some(&"1") | Some(&"true") => true,
            Some(s) => return Err(perr(line, format!("bad pathway flag {s:?}"))),
        };
        let id = cols[0];
        let m = match index.get(id) {
            Some(&i) => {
                if modules[i].pathway != flag {
                    return Err(perr(line, format!("inconsistent pathway flag for module {id}")));
                }
                i
            }
            None => {
                index.insert(id.to_string(), modules.len());
                modules.push(Module { id: id.to_string(), genes: Vec::new(), pathway: flag });
                modules.len() - 1
            }
        };
        modules[m].genes.push((cols[1].to_string(), score));
    }
    MembershipTable::new(modules).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_membership(t: &MembershipTable) -> String {
    let mut out = String::new();
    for m in &t.modules {
        for (g, s) in &m.genes {
            let s = s.as_ref().map(|s| s.format_weight()).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{}\t{}\t{}\t{}", m.id, g, s, u8::from(m.pathway));
        }
    }
    out
}

/// Block listing for a kernel: one line per block, `rep partner: members` for
/// collapsed blocks and `members` otherwise, all as labels.
pub fn write_blocks<S>(labels: &[String], kr: &KernelResult<S>) -> String {
    let mut out = String::new();
    for block in &kr.blocks {
        let members: Vec<&str> = block.iter().map(|&v| labels[v].as_str()).collect();
        match kr.collapsed.iter().find(|c| c.members == *block) {
            Some(c) => {
                let _ = writeln!(out, "{} {}: {}", labels[c.rep], labels[c.partner], members.join(" "));
            }
            None => {
                let _ = writeln!(out, "{}", members.join(" "));
            }
        }
    }
    out
}
