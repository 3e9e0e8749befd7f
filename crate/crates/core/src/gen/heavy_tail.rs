//! Heavy-tailed integer clique weights in `[1, max]`.
//!
//! Three intervals `L = [1, l*max]`, `M = [ml*max, mr*max]`, `H = [h*max, max]`
//! are chosen with probabilities `pl, pm, ph`, then a weight is drawn
//! uniformly from the integers of the chosen interval. Endpoints are rounded
//! inward (ceiling for lower, floor for upper bounds).

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Interval {
    Low,
    Mid,
    High,
}

/// Fractions are in hundredths, probabilities in percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeavyTailConfig {
    pub max: i64,
    pub low_hi: i64,
    pub mid_lo: i64,
    pub mid_hi: i64,
    pub high_lo: i64,
    pub p_low: u32,
    pub p_mid: u32,
    pub p_high: u32,
}

impl HeavyTailConfig {
    pub fn new(max: i64) -> Self {
        HeavyTailConfig { max, low_hi: 14, mid_lo: 20, mid_hi: 28, high_lo: 90, p_low: 75, p_mid: 15, p_high: 10 }
    }

    fn check(&self) -> Result<()> {
        if self.max < 1 {
            return Err(Error::Generator("maximum weight must be at least 1".into()));
        }
        if self.p_low + self.p_mid + self.p_high != 100 {
            return Err(Error::Generator("interval probabilities must sum to 100%".into()));
        }
        Ok(())
    }

    /// Integer bounds of an interval. An empty interval collapses to its lower
    /// bound, clamped into `[1, max]`.
    pub fn bounds(&self, which: Interval) -> (i64, i64) {
        let d = self.max;
        let ceil = |f: i64| (f * d + 99).div_euclid(100);
        let floor = |f: i64| (f * d).div_euclid(100);
        let (lo, hi) = match which {
            Interval::Low => (1, floor(self.low_hi)),
            Interval::Mid => (ceil(self.mid_lo), floor(self.mid_hi)),
            Interval::High => (ceil(self.high_lo), d),
        };
        if hi < lo {
            let x = lo.clamp(1, d);
            (x, x)
        } else {
            (lo, hi)
        }
    }

    /// Draws an interval, then a weight inside it.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (Interval, i64) {
        let u = rng.gen_range(0..100u32);
        let which = if u < self.p_low {
            Interval::Low
        } else if u < self.p_low + self.p_mid {
            Interval::Mid
        } else {
            Interval::High
        };
        let (lo, hi) = self.bounds(which);
        (which, rng.gen_range(lo..=hi))
    }
}

pub fn heavy_tail_weight<R: Rng + ?Sized>(cfg: &HeavyTailConfig, rng: &mut R) -> Result<i64> {
    cfg.check()?;
    Ok(cfg.draw(rng).1)
}

/// `k` independent weights; if none of them hit `max`, a uniformly chosen one
/// is raised to `max`.
pub fn heavy_tail_weights<R: Rng + ?Sized>(cfg: &HeavyTailConfig, k: usize, rng: &mut R) -> Result<Vec<i64>> {
    cfg.check()?;
    let mut w: Vec<i64> = (0..k).map(|_| cfg.draw(rng).1).collect();
    if k > 0 && !w.contains(&cfg.max) {
        let i = rng.gen_range(0..k);
        w[i] = cfg.max;
    }
    Ok(w)
}
