//! Gene-module membership tables, imported from files or randomly mimicked.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct Module {
    pub id: String,
    /// Gene label and optional association score in `[0, 1]`.
    pub genes: Vec<(String, Option<Rational>)>,
    /// Aligned with a known pathway.
    pub pathway: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MembershipTable {
    pub modules: Vec<Module>,
}

impl MembershipTable {
    pub fn new(modules: Vec<Module>) -> Result<Self> {
        for m in &modules {
            for (g, s) in &m.genes {
                if let Some(s) = s {
                    if *s < Rational::from_integer(0) || *s > Rational::from_integer(1) {
                        return Err(Error::Generator(format!("score of gene {g} in module {} outside [0, 1]", m.id)));
                    }
                }
            }
        }
        Ok(MembershipTable { modules })
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }
}

/// Parameters of the random membership mimic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MimicParams {
    pub modules: usize,
    /// Size of the gene universe; smaller values give more overlap.
    pub genes: usize,
    pub min_size: usize,
    pub max_size: usize,
    /// Percent of modules flagged as pathway-aligned.
    pub pathway_percent: u32,
}

impl Default for MimicParams {
    fn default() -> Self {
        MimicParams { modules: 40, genes: 60, min_size: 3, max_size: 7, pathway_percent: 50 }
    }
}

/// Random table: each module picks a uniform size and that many distinct
/// genes; scores are multiples of 1/1000 in `[0.3, 1]`, and at least one gene
/// per module scores above 0.6.
pub fn random_membership<R: Rng + ?Sized>(p: &MimicParams, rng: &mut R) -> Result<MembershipTable> {
    if p.min_size < 2 || p.min_size > p.max_size || p.max_size > p.genes {
        return Err(Error::Generator("module sizes must satisfy 2 <= min <= max <= genes".into()));
    }
    let mut modules = Vec::with_capacity(p.modules);
    for m in 0..p.modules {
        let size = rng.gen_range(p.min_size..=p.max_size);
        let mut picked = sample(rng, p.genes, size).into_vec();
        picked.sort_unstable();
        let strong = rng.gen_range(0..size);
        let genes = picked
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let lo = if i == strong { 601 } else { 300 };
                let score = Rational::new(rng.gen_range(lo..=1000), 1000);
                (format!("g{g}"), Some(score))
            })
            .collect();
        let pathway = rng.gen_range(0..100) < p.pathway_percent;
        modules.push(Module { id: format!("m{m}"), genes, pathway });
    }
    MembershipTable::new(modules)
}
