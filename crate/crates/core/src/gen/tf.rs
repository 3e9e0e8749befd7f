//! Modules with no inherent strength: pick `k` of them and give each a
//! heavy-tailed weight.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use rand::seq::index::sample;

use super::{heavy_tail_weights, prov, rng, HeavyTailConfig, LabelIndex, MembershipTable, PlantedInstance};
use crate::error::{Error, Result};
use crate::model::Clique;
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfScale {
    Small,
    Medium,
    Large,
}

impl TfScale {
    /// Maximum clique weight.
    pub fn max_weight(self) -> i64 {
        match self {
            TfScale::Small => 1,
            TfScale::Medium => 4,
            TfScale::Large => 16,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TfScale::Small => "small",
            TfScale::Medium => "medium",
            TfScale::Large => "large",
        }
    }
}

pub fn gen_tf(k: usize, scale: TfScale, seed: u64, table: &MembershipTable) -> Result<PlantedInstance> {
    if table.len() < k {
        return Err(Error::Generator(format!("need {k} modules, table has {}", table.len())));
    }
    let mut r = rng(seed);
    let chosen = sample(&mut r, table.len(), k).into_vec();
    let weights = heavy_tail_weights(&HeavyTailConfig::new(scale.max_weight()), k, &mut r)?;
    let mut labels = LabelIndex::new();
    let mut cliques = Vec::with_capacity(k);
    for (&m, &w) in chosen.iter().zip(&weights) {
        let vs = table.modules[m].genes.iter().map(|(g, _)| labels.get(g)).collect();
        cliques.push(Clique::new(vs, Rational::from_integer(w.into())));
    }
    let ids: Vec<&str> = chosen.iter().map(|&m| table.modules[m].id.as_str()).collect();
    PlantedInstance::from_cliques(
        labels.labels,
        cliques,
        prov(&[
            ("model", "tf".to_string()),
            ("k", k.to_string()),
            ("scale", scale.name().to_string()),
            ("seed", seed.to_string()),
            ("modules", ids.join(",")),
        ]),
    )
}
