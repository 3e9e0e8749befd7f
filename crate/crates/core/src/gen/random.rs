//! Synthetic planted cliques without membership data.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{heavy_tail_weights, prov, rng, HeavyTailConfig, PlantedInstance};
use crate::error::{Error, Result};
use crate::model::Clique;
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightModel {
    Unit,
    /// Uniform integers in `[1, max]`.
    Uniform(i64),
    /// Heavy-tailed with the given maximum.
    HeavyTail(i64),
}

impl WeightModel {
    fn draw<R: Rng + ?Sized>(self, k: usize, rng: &mut R) -> Result<Vec<i64>> {
        match self {
            WeightModel::Unit => Ok(alloc::vec![1; k]),
            WeightModel::Uniform(max) if max >= 1 => Ok((0..k).map(|_| rng.gen_range(1..=max)).collect()),
            WeightModel::Uniform(_) => Err(Error::Generator("uniform weights need max >= 1".into())),
            WeightModel::HeavyTail(max) => heavy_tail_weights(&HeavyTailConfig::new(max), k, rng),
        }
    }

    fn name(self) -> String {
        match self {
            WeightModel::Unit => "unit".into(),
            WeightModel::Uniform(m) => format!("uniform:{m}"),
            WeightModel::HeavyTail(m) => format!("heavy:{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomParams {
    pub k: usize,
    pub n: usize,
    pub min_size: usize,
    pub max_size: usize,
    /// Percent chance that a clique after the first shares vertices with
    /// earlier ones.
    pub overlap_percent: u32,
    pub weights: WeightModel,
    pub seed: u64,
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// `k` cliques on `n` vertices. An overlapping clique takes between one and
/// `size - 1` vertices from those already used; the rest are fresh.
pub fn gen_random_planted(p: &RandomParams) -> Result<PlantedInstance> {
    if p.min_size < 2 || p.min_size > p.max_size {
        return Err(Error::Generator("clique sizes must satisfy 2 <= min <= max".into()));
    }
    let mut r = rng(p.seed);
    let mut fresh: Vec<usize> = (0..p.n).collect();
    fresh.shuffle(&mut r);
    let mut used: Vec<usize> = Vec::new();
    let mut cliques = Vec::with_capacity(p.k);
    let weights = p.weights.draw(p.k, &mut r)?;
    for (c, &w) in weights.iter().enumerate() {
        let size = r.gen_range(p.min_size..=p.max_size);
        let overlap = c > 0 && r.gen_range(0..100) < p.overlap_percent;
        let shared = if overlap { r.gen_range(1..size).min(used.len()) } else { 0 };
        if fresh.len() < size - shared {
            return Err(Error::Generator(format!("{} vertices cannot hold the requested cliques", p.n)));
        }
        let mut vs: Vec<usize> = sample(&mut r, used.len(), shared).into_iter().map(|i| used[i]).collect();
        for _ in shared..size {
            let v = fresh.pop().expect("checked above");
            used.push(v);
            vs.push(v);
        }
        cliques.push(Clique::new(vs, Rational::from_integer(w.into())));
    }
    PlantedInstance::from_cliques(
        labels(p.n),
        cliques,
        prov(&[
            ("model", "random".to_string()),
            ("k", p.k.to_string()),
            ("n", p.n.to_string()),
            ("overlap", p.overlap_percent.to_string()),
            ("weights", p.weights.name()),
            ("seed", p.seed.to_string()),
        ]),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableParams {
    /// Cliques that meet the rest only in single vertices (or not at all).
    pub separable: usize,
    /// Include a core of two cliques sharing an edge, which must survive.
    pub core: bool,
    pub min_size: usize,
    pub max_size: usize,
    pub weights: WeightModel,
    pub seed: u64,
}

/// Planted instance whose separable cliques form a forest of single-vertex
/// attachments, optionally around an edge-overlapping core. Returns the
/// instance and the indices (into `truth.cliques`) of the separable cliques.
pub fn gen_separable(p: &SeparableParams) -> Result<(PlantedInstance, Vec<usize>)> {
    if p.min_size < 2 || p.min_size > p.max_size {
        return Err(Error::Generator("clique sizes must satisfy 2 <= min <= max".into()));
    }
    let mut r = rng(p.seed);
    let mut n = 0usize;
    let mut cliques = Vec::new();
    if p.core {
        // {0,1,2} and {1,2,3}
        let core_weights = p.weights.draw(2, &mut r)?;
        cliques.push(Clique::new((0..3).collect(), Rational::from_integer(core_weights[0].into())));
        cliques.push(Clique::new((1..4).collect(), Rational::from_integer(core_weights[1].into())));
        n = 4;
    }
    let first_separable = cliques.len();
    let weights = p.weights.draw(p.separable, &mut r)?;
    for &w in &weights {
        let size = r.gen_range(p.min_size..=p.max_size);
        let mut vs = Vec::with_capacity(size);
        // attach to an existing vertex, or start a new component
        if n > 0 && r.gen_range(0..4) != 0 {
            vs.push(r.gen_range(0..n));
        }
        while vs.len() < size {
            vs.push(n);
            n += 1;
        }
        cliques.push(Clique::new(vs, Rational::from_integer(w.into())));
    }
    let idx = (first_separable..cliques.len()).collect();
    let inst = PlantedInstance::from_cliques(
        labels(n),
        cliques,
        prov(&[
            ("model", "separable".to_string()),
            ("separable", p.separable.to_string()),
            ("core", p.core.to_string()),
            ("weights", p.weights.name()),
            ("seed", p.seed.to_string()),
        ]),
    )?;
    Ok((inst, idx))
}
