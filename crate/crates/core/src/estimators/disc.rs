use std::collections::BTreeMap;

use serde::Serialize;

use crate::canonical::DiscType;
use crate::detectors::{DiscDetector, Outcome};
use crate::scalar::Real;
use crate::stream::{derive_seed, Instrumented, PhaseCoin, TimedEdge};

use super::grid::{sample_roots, Grid};
use super::{gamma_disc, EstimatorError, EstimatorParams, SampleMode};

/// Output of [`num_disc`]. Disc types serialize as hex codes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscReport<R> {
    pub algorithm: &'static str,
    pub n: usize,
    #[serde(rename = "m")]
    pub m_observed: u64,
    pub k: usize,
    pub d: usize,
    pub params: EstimatorParams,
    pub sample_mode: SampleMode,
    pub sample_size: usize,
    pub lambda: u64,
    /// `C_Γ` for every type observed at least once.
    pub per_type: BTreeMap<DiscType, R>,
    pub indicator_counts: BTreeMap<DiscType, u64>,
    pub peak_slots: usize,
    pub slot_bound: usize,
}

impl<R: Real> DiscReport<R> {
    /// `C_Γ`, zero for types never observed.
    pub fn get(&self, t: &DiscType) -> R {
        self.per_type.get(t).copied().unwrap_or_else(R::zero)
    }
}

/// `(Σ X / |A|) · n / γ_Γ`.
pub(crate) fn disc_formula<R: Real>(hits: u64, sample: usize, n: usize, t_edges: usize, tau: f64) -> R {
    let frac = R::lit(hits as f64) / R::count(sample);
    frac * R::count(n) / gamma_disc(t_edges, R::lit(tau))
}

/// Most vertices a radius-`k` disc can hold when each vertex pays for at
/// most `d + 1` edges.
fn disc_capacity(k: usize, d: usize) -> usize {
    let mut level = 1usize;
    let mut total = 1usize;
    for _ in 0..k {
        level = level.saturating_mul(d + 1);
        total = total.saturating_add(level);
    }
    total
}

/// Estimates how many vertices have each extended `(d+1)`-bounded `k`-disc
/// type. One detector runs per sampled root and its final code decides which
/// type's indicator it sets. `params.k_max` is not used.
pub fn num_disc<R, I>(
    stream: I,
    n: usize,
    k: usize,
    d: usize,
    params: &EstimatorParams,
) -> Result<DiscReport<R>, EstimatorError>
where
    R: Real,
    I: IntoIterator<Item = TimedEdge>,
{
    params.validate()?;
    if n == 0 {
        return Err(EstimatorError::EmptyVertexSet);
    }
    if d == 0 {
        return Err(EstimatorError::InvalidParams("d must be at least 1".into()));
    }
    let (roots, mode) = sample_roots(n, params.samples, derive_seed(params.seed, "sample"));
    let dets = roots
        .iter()
        .map(|&r| DiscDetector::new(r, k, d))
        .collect::<Result<Vec<_>, _>>()?;
    let mut grid = Grid::new(dets, params.samples.saturating_mul(disc_capacity(k, d)));
    let mut coin = PhaseCoin::new(params.tau, derive_seed(params.seed, "coins"))?;
    let mut items = Instrumented::new(stream.into_iter());
    let mut time = 0;
    for item in items.by_ref() {
        time += 1;
        coin.flip();
        grid.feed(&item.edge, time)?;
    }
    if let Some(v) = items.violation() {
        return Err(EstimatorError::Pass(v.clone()));
    }
    let lambda = coin.threshold().lambda;
    let mut counts: BTreeMap<DiscType, u64> = BTreeMap::new();
    for det in &grid.dets {
        if let Outcome::Disc(t) = det.finalize(lambda)? {
            *counts.entry(t).or_insert(0) += 1;
        }
    }
    let per_type = counts
        .iter()
        .map(|(t, &x)| (t.clone(), disc_formula::<R>(x, roots.len(), n, t.num_edges() as usize, params.tau)))
        .collect();
    Ok(DiscReport {
        algorithm: "num_disc",
        n,
        m_observed: items.reads(),
        k,
        d,
        params: params.clone(),
        sample_mode: mode,
        sample_size: roots.len(),
        lambda,
        per_type,
        indicator_counts: counts,
        peak_slots: grid.peak(),
        slot_bound: grid.bound(),
    })
}
