//! Modules with scored genes: keep genes scoring above a threshold and weight
//! each module by the scaled mean score of its kept genes, rounded up.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::{prov, rng, LabelIndex, MembershipTable, PlantedInstance};
use crate::error::{Error, Result};
use crate::model::Clique;
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LvParams {
    pub k: usize,
    /// Multiplier on the mean score: 1, 2 or 4 in the standard corpus.
    pub scale: i64,
    pub seed: u64,
    /// Percent of the `k` modules drawn from pathway-aligned ones.
    pub pathway_percent: u32,
    pub threshold: Rational,
}

impl LvParams {
    pub fn new(k: usize, scale: i64, seed: u64) -> Self {
        LvParams { k, scale, seed, pathway_percent: 80, threshold: Rational::new(3, 5) }
    }
}

/// Kept genes and module weight, or `None` when fewer than two genes clear
/// the threshold (a single gene spans no edge).
fn thresholded(table: &MembershipTable, m: usize, p: &LvParams) -> Result<Option<(Vec<usize>, Rational)>> {
    let module = &table.modules[m];
    let mut kept = Vec::new();
    let mut total = Rational::from_integer(0);
    for (i, (g, s)) in module.genes.iter().enumerate() {
        let s = s.ok_or_else(|| Error::Generator(format!("gene {g} of module {} has no score", module.id)))?;
        if s > p.threshold {
            kept.push(i);
            total += s;
        }
    }
    if kept.len() < 2 {
        return Ok(None);
    }
    let mean = total / Rational::from_integer(kept.len() as i128);
    Ok(Some((kept, (mean * Rational::from_integer(p.scale.into())).ceil())))
}

const RETRIES: usize = 1000;

pub fn gen_lv(p: &LvParams, table: &MembershipTable) -> Result<PlantedInstance> {
    let mut r = rng(p.seed);
    let flagged_target = (p.k * p.pathway_percent as usize + 50) / 100;
    let mut flagged: Vec<usize> = (0..table.len()).filter(|&m| table.modules[m].pathway).collect();
    let mut all: Vec<usize> = (0..table.len()).collect();
    flagged.shuffle(&mut r);
    all.shuffle(&mut r);

    let mut chosen: Vec<(usize, Vec<usize>, Rational)> = Vec::with_capacity(p.k);
    let mut tries = 0;
    for (pool, want) in [(&flagged, flagged_target), (&all, p.k)] {
        for &m in pool.iter() {
            if chosen.len() == want {
                break;
            }
            if chosen.iter().any(|c| c.0 == m) {
                continue;
            }
            tries += 1;
            if tries > RETRIES {
                break;
            }
            // an unusable module is skipped, which
            // resamples it from the same pool
            if let Some((kept, w)) = thresholded(table, m, p)? {
                chosen.push((m, kept, w));
            }
        }
        if chosen.len() < want {
            return Err(Error::Generator(format!(
                "could not select {want} usable modules ({} pathway-aligned available)",
                flagged.len()
            )));
        }
    }

    let mut labels = LabelIndex::new();
    let mut cliques = Vec::with_capacity(p.k);
    for (m, kept, w) in &chosen {
        let genes = &table.modules[*m].genes;
        let vs = kept.iter().map(|&i| labels.get(&genes[i].0)).collect();
        cliques.push(Clique::new(vs, *w));
    }
    let ids: Vec<&str> = chosen.iter().map(|c| table.modules[c.0].id.as_str()).collect();
    PlantedInstance::from_cliques(
        labels.labels,
        cliques,
        prov(&[
            ("model", "lv".to_string()),
            ("k", p.k.to_string()),
            ("scale", p.scale.to_string()),
            ("seed", p.seed.to_string()),
            ("modules", ids.join(",")),
        ]),
    )
}
