use std::collections::BTreeMap;

use serde::Serialize;

use crate::detectors::TreeDetector;
use crate::graph::Edge;
use crate::scalar::Real;
use crate::stream::{derive_seed, Instrumented, PhaseCoin, TimedEdge};

use super::grid::{sample_roots, Grid};
use super::{gamma_k, EstimatorError, EstimatorParams, SampleMode};

/// Output of [`num_cc`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CcReport<R> {
    pub algorithm: &'static str,
    pub n: usize,
    /// Stream items read.
    #[serde(rename = "m")]
    pub m_observed: u64,
    pub params: EstimatorParams,
    pub sample_mode: SampleMode,
    pub sample_size: usize,
    pub lambda: u64,
    /// `C_k` for `k = 1..=k_max`.
    pub per_k: BTreeMap<usize, R>,
    pub total: R,
    /// `Σ X_v` over the sample for each `k`.
    pub indicator_counts: BTreeMap<usize, u64>,
    pub peak_slots: usize,
    pub slot_bound: usize,
}

/// One component-count instance: sampled roots × `1..=k_max` tree detectors
/// and its own phase coin. Time steps are local to the instance.
struct CcInstance {
    grid: Grid<TreeDetector>,
    coin: PhaseCoin,
    time: u64,
    roots: usize,
    mode: SampleMode,
    k_max: usize,
}

impl CcInstance {
    fn new(n: usize, params: &EstimatorParams, sample_seed: u64, coin_seed: u64) -> Result<Self, EstimatorError> {
        let (roots, mode) = sample_roots(n, params.samples, sample_seed);
        let mut dets = Vec::with_capacity(roots.len() * params.k_max);
        for &r in &roots {
            for k in 1..=params.k_max {
                dets.push(TreeDetector::new(r, k)?);
            }
        }
        let bound = params.samples * params.k_max * (params.k_max + 1);
        Ok(CcInstance {
            grid: Grid::new(dets, bound),
            coin: PhaseCoin::new(params.tau, coin_seed)?,
            time: 0,
            roots: roots.len(),
            mode,
            k_max: params.k_max,
        })
    }

    fn feed(&mut self, e: &Edge) -> Result<(), EstimatorError> {
        self.time += 1;
        self.coin.flip();
        self.grid.feed(e, self.time)
    }

    /// `(lambda, per_k, indicator_counts)`.
    fn finish<R: Real>(&self, n: usize, tau: f64) -> (u64, BTreeMap<usize, R>, BTreeMap<usize, u64>) {
        let lambda = self.coin.threshold().lambda;
        let mut counts: BTreeMap<usize, u64> = (1..=self.k_max).map(|k| (k, 0)).collect();
        for det in &self.grid.dets {
            if det.finalize(lambda).is_good() {
                *counts.get_mut(&det.k()).expect("k within range") += 1;
            }
        }
        let per_k = counts
            .iter()
            .map(|(&k, &x)| (k, cc_formula::<R>(x, self.roots, n, k, tau)))
            .collect();
        (lambda, per_k, counts)
    }
}

/// `(Σ X / |A|) · (n / k) / γ_k`.
pub(crate) fn cc_formula<R: Real>(hits: u64, sample: usize, n: usize, k: usize, tau: f64) -> R {
    let frac = R::lit(hits as f64) / R::count(sample);
    frac * (R::count(n) / R::count(k)) / gamma_k(k, R::lit(tau))
}

/// Estimates the number of connected components with at most `k_max`
/// vertices from one pass over a random-order stream.
pub fn num_cc<R, I>(stream: I, n: usize, params: &EstimatorParams) -> Result<CcReport<R>, EstimatorError>
where
    R: Real,
    I: IntoIterator<Item = TimedEdge>,
{
    params.validate()?;
    if n == 0 {
        return Err(EstimatorError::EmptyVertexSet);
    }
    let mut inst = CcInstance::new(
        n,
        params,
        derive_seed(params.seed, "sample"),
        derive_seed(params.seed, "coins"),
    )?;
    let mut items = Instrumented::new(stream.into_iter());
    for item in items.by_ref() {
        inst.feed(&item.edge)?;
    }
    if let Some(v) = items.violation() {
        return Err(EstimatorError::Pass(v.clone()));
    }
    let (lambda, per_k, indicator_counts) = inst.finish::<R>(n, params.tau);
    let total = per_k.values().fold(R::zero(), |a, &c| a + c);
    Ok(CcReport {
        algorithm: "num_cc",
        n,
        m_observed: items.reads(),
        params: params.clone(),
        sample_mode: inst.mode,
        sample_size: inst.roots,
        lambda,
        per_k,
        total,
        indicator_counts,
        peak_slots: inst.grid.peak(),
        slot_bound: inst.grid.bound(),
    })
}

/// Per-threshold part of an [`MstReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdSummary<R> {
    /// Estimated number of components of the threshold graph.
    pub c_hat: R,
    /// Edges of weight at most `t` seen by this instance.
    pub m: u64,
    pub lambda: u64,
    pub per_k: BTreeMap<usize, R>,
    pub indicator_counts: BTreeMap<usize, u64>,
    pub peak_slots: usize,
}

/// Output of [`mst_weight`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MstReport<R> {
    pub algorithm: &'static str,
    pub n: usize,
    #[serde(rename = "m")]
    pub m_observed: u64,
    #[serde(rename = "W")]
    pub w: u32,
    pub params: EstimatorParams,
    pub sample_mode: SampleMode,
    /// `ĉ(t)` and its ingredients for `t = 1..W`.
    pub per_threshold: BTreeMap<u32, ThresholdSummary<R>>,
    /// `n − W + Σ ĉ(t)`.
    pub total: R,
    pub peak_slots: usize,
}

/// Estimates the minimum spanning tree weight of a connected graph with
/// integer weights in `1..=w` as `n − W + Σ_{t<W} ĉ(t)`, where `ĉ(t)`
/// estimates the component count of the subgraph of edges of weight `≤ t`.
///
/// All `W − 1` instances share one pass; an edge of weight `x` is delivered
/// to instances `t ≥ x`, each with its own sample and phase coin.
pub fn mst_weight<R, I>(stream: I, n: usize, w: u32, params: &EstimatorParams) -> Result<MstReport<R>, EstimatorError>
where
    R: Real,
    I: IntoIterator<Item = TimedEdge>,
{
    params.validate()?;
    if w == 0 {
        return Err(EstimatorError::BadW);
    }
    if n == 0 {
        return Err(EstimatorError::EmptyVertexSet);
    }
    let mut instances = (1..w)
        .map(|t| {
            CcInstance::new(
                n,
                params,
                derive_seed(params.seed, &format!("sample/{t}")),
                derive_seed(params.seed, &format!("coins/{t}")),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut items = Instrumented::new(stream.into_iter());
    for item in items.by_ref() {
        let x = item.edge.weight.ok_or(EstimatorError::UnweightedStream)?;
        if x == 0 || x > w {
            return Err(EstimatorError::BadWeight { weight: x, max: w });
        }
        // Instance t sits at position t − 1.
        for inst in instances.iter_mut().skip(x as usize - 1) {
            inst.feed(&item.edge)?;
        }
    }
    if let Some(v) = items.violation() {
        return Err(EstimatorError::Pass(v.clone()));
    }
    let mut per_threshold = BTreeMap::new();
    let mut total = R::count(n) - R::lit(w as f64);
    let mut peak = 0;
    for (t, inst) in (1..w).zip(&instances) {
        let (lambda, per_k, indicator_counts) = inst.finish::<R>(n, params.tau);
        let c_hat = per_k.values().fold(R::zero(), |a, &c| a + c);
        total = total + c_hat;
        peak += inst.grid.peak();
        per_threshold.insert(
            t,
            ThresholdSummary {
                c_hat,
                m: inst.time,
                lambda,
                per_k,
                indicator_counts,
                peak_slots: inst.grid.peak(),
            },
        );
    }
    Ok(MstReport {
        algorithm: "mst_weight",
        n,
        m_observed: items.reads(),
        w,
        params: params.clone(),
        sample_mode: SampleMode::for_sizes(params.samples, n),
        per_threshold,
        total,
        peak_slots: peak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::stream::{shuffle_stream, EdgeStream};

    #[test]
    fn isolated_vertices_count_exactly() {
        let p = EstimatorParams::new(0.3, 3, 4, 9).unwrap();
        let r: CcReport<f64> = num_cc(EdgeStream::default().iter(), 3, &p).unwrap();
        assert_eq!(r.total, 3.0);
        assert_eq!(r.indicator_counts[&1], 3);
        assert_eq!(r.m_observed, 0);
    }

    #[test]
    fn empty_vertex_set() {
        let p = EstimatorParams::new(0.3, 3, 4, 9).unwrap();
        assert!(matches!(
            num_cc::<f64, _>(EdgeStream::default().iter(), 0, &p),
            Err(EstimatorError::EmptyVertexSet)
        ));
    }

    #[test]
    fn formula_with_hand_counts() {
        // 7 hits out of 20 roots, n = 50, k = 3, τ = 0.5: (7/20)·(50/3)/(0.125).
        let c: f64 = cc_formula(7, 20, 50, 3, 0.5);
        assert_eq!(c, 7.0 / 20.0 * (50.0 / 3.0) / 0.125);
    }

    #[test]
    fn reads_each_item_once() {
        let pairs: Vec<(u32, u32)> = (1..40).map(|i| (i, i + 1)).collect();
        let g = Graph::from_pairs(40, &pairs).unwrap();
        let s = shuffle_stream(&g, 4);
        let p = EstimatorParams::new(0.2, 10, 3, 2).unwrap();
        let r: CcReport<f64> = num_cc(s.iter(), 40, &p).unwrap();
        assert_eq!(r.m_observed, 39);
        assert!(r.peak_slots <= r.slot_bound);
    }

    #[test]
    fn out_of_order_stream_is_rejected() {
        let items = vec![
            TimedEdge { edge: Edge::new(1, 2), time: 1 },
            TimedEdge { edge: Edge::new(2, 3), time: 1 },
        ];
        let p = EstimatorParams::new(0.2, 3, 2, 2).unwrap();
        assert!(matches!(num_cc::<f64, _>(items, 3, &p), Err(EstimatorError::Pass(_))));
    }

    #[test]
    fn mst_single_edge_weight_one() {
        let g = Graph::from_weighted(2, &[(1, 2, 1)]).unwrap();
        let p = EstimatorParams::new(0.2, 4, 3, 1).unwrap();
        let r: MstReport<f64> = mst_weight(EdgeStream::given_order(&g).iter(), 2, 1, &p).unwrap();
        assert_eq!(r.total, 1.0);
        assert!(r.per_threshold.is_empty());
    }

    #[test]
    fn mst_rejects_bad_input() {
        let p = EstimatorParams::new(0.2, 4, 3, 1).unwrap();
        let g = Graph::from_weighted(2, &[(1, 2, 3)]).unwrap();
        let s = EdgeStream::given_order(&g);
        assert!(matches!(
            mst_weight::<f64, _>(s.iter(), 2, 2, &p),
            Err(EstimatorError::BadWeight { weight: 3, max: 2 })
        ));
        assert!(matches!(mst_weight::<f64, _>(s.iter(), 2, 0, &p), Err(EstimatorError::BadW)));
        let u = Graph::from_pairs(2, &[(1, 2)]).unwrap();
        assert!(matches!(
            mst_weight::<f64, _>(EdgeStream::given_order(&u).iter(), 2, 2, &p),
            Err(EstimatorError::UnweightedStream)
        ));
    }
}
