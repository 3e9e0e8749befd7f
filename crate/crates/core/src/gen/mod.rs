//! Planted benchmark instances: every generator returns the graph together
//! with the decomposition it was built from.

mod e3c;
mod heavy_tail;
mod lv;
mod membership;
mod random;
mod tf;

pub use e3c::{e3c_witness, exact_cover, gen_e3c, random_e3c, E3CInstance};
pub use heavy_tail::{heavy_tail_weight, heavy_tail_weights, HeavyTailConfig, Interval};
pub use lv::{gen_lv, LvParams};
pub use membership::{random_membership, MembershipTable, MimicParams, Module};
pub use random::{gen_random_planted, gen_separable, RandomParams, SeparableParams, WeightModel};
pub use tf::{gen_tf, TfScale};

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{graph_to_instance, verify_decomposition, AnnotatedGraph, Clique, Decomposition, Instance};
use crate::scalar::Rational;
use num_traits::Zero;

/// The generator RNG for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generated graph with its ground-truth decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub graph: AnnotatedGraph<Rational>,
    /// Number of planted cliques.
    pub k: usize,
    pub truth: Decomposition<Rational>,
    /// `key=value` facts about how the instance was made (model, seed, ...).
    pub provenance: Vec<(String, String)>,
}

impl PlantedInstance {
    /// Builds the graph whose edge weights are the summed weights of the
    /// cliques through them. Vertex `i` gets `labels[i]`.
    pub fn from_cliques(
        labels: Vec<String>,
        cliques: Vec<Clique<Rational>>,
        provenance: Vec<(String, String)>,
    ) -> Result<Self> {
        let mut sums: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for c in &cliques {
            for (a, &u) in c.vertices.iter().enumerate() {
                for &v in &c.vertices[a + 1..] {
                    let e = sums.entry((u, v)).or_insert_with(Rational::zero);
                    *e += c.weight;
                }
            }
        }
        let edges = sums.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let graph = AnnotatedGraph::with_labels(labels, edges, BTreeMap::new(), crate::DEFAULT_EPS)?;
        let truth = Decomposition::new(cliques);
        if !verify_decomposition(&graph, &truth) {
            return Err(Error::Internal("planted decomposition does not verify".into()));
        }
        Ok(PlantedInstance { graph, k: truth.len(), truth, provenance })
    }

    /// Total planted weight, the budget of the unit-weight baseline.
    pub fn big_k(&self) -> usize {
        let total = self.truth.total_weight();
        total.ceil().to_integer() as usize
    }

    pub fn instance(&self) -> Result<Instance<Rational>> {
        graph_to_instance(&self.graph, self.k)
    }

    pub fn provenance_value(&self, key: &str) -> Option<&str> {
        self.provenance.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub(crate) fn prov(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Assigns dense indices to gene labels in order of first appearance.
pub(crate) struct LabelIndex {
    pub labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl LabelIndex {
    pub fn new() -> Self {
        LabelIndex { labels: Vec::new(), index: BTreeMap::new() }
    }

    pub fn get(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }
}
