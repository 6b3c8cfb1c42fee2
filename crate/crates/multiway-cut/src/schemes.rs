//! Executable rounding schemes: given a fractional embedding and a
//! [`RandomSource`], produce a labeling.
//!
//! Substream layout (see [`crate::rng::tags`]): the shared single
//! threshold has its own stream; per-terminal draws (clocks, per-terminal
//! thresholds, sweep-order keys) split a parent stream by terminal index.
//! The `_mapped` variants let a caller re-route terminal `i` to the
//! substream of terminal `map[i]`, which is what makes permutation
//! equivariance directly testable.
//!
//! Ties (equal argmin ratios, equal thresholds, equal order keys) break
//! toward the lowest terminal index; all are probability-zero events kept
//! deterministic for reproducibility. Terminals are pre-assigned their own
//! label, which is what any threshold in (0, 1] would do anyway.

use crate::density::{self, PiecewiseDensity};
use crate::error::Error;
use crate::geometry::{FractionalEmbedding, Labeling};
use crate::rng::{tags, RandomSource};
use crate::Result;

/// One of the four rounding schemes, carrying its threshold density.
#[derive(Debug, Clone)]
pub enum Scheme {
    ExponentialClocks,
    SingleThreshold(PiecewiseDensity),
    DescendingThresholds(PiecewiseDensity),
    IndependentThresholds(PiecewiseDensity),
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::ExponentialClocks => "exponential-clocks",
            Scheme::SingleThreshold(_) => "single-threshold",
            Scheme::DescendingThresholds(_) => "descending-thresholds",
            Scheme::IndependentThresholds(_) => "independent-thresholds",
        }
    }

    pub fn round(&self, emb: &FractionalEmbedding, rs: &RandomSource) -> Labeling {
        match self {
            Scheme::ExponentialClocks => exponential_clocks(emb, rs),
            Scheme::SingleThreshold(phi) => single_threshold(emb, phi, rs),
            Scheme::DescendingThresholds(psi) => descending_thresholds(emb, psi, rs),
            Scheme::IndependentThresholds(xi) => independent_thresholds(emb, xi, rs),
        }
    }
}

fn identity_map(k: usize) -> Vec<usize> {
    (0..k).collect()
}

fn seed_labels(emb: &FractionalEmbedding) -> Vec<Option<usize>> {
    let mut labels = vec![None; emb.n()];
    for (s, &t) in emb.terminals().iter().enumerate() {
        labels[t] = Some(s);
    }
    labels
}

fn finish(labels: Vec<Option<usize>>) -> Labeling {
    Labeling::new(labels.into_iter().map(|l| l.expect("all assigned")).collect())
}

/// Assign each vertex to argmin_i Z_i / x_{v,i} with Z_i i.i.d. Exp(1);
/// zero coordinates contribute ratio +inf.
pub fn exponential_clocks(emb: &FractionalEmbedding, rs: &RandomSource) -> Labeling {
    exponential_clocks_mapped(emb, rs, &identity_map(emb.k()))
}

pub fn exponential_clocks_mapped(
    emb: &FractionalEmbedding,
    rs: &RandomSource,
    map: &[usize],
) -> Labeling {
    let k = emb.k();
    assert_eq!(map.len(), k);
    let clocks_src = rs.split(tags::PER_TERMINAL);
    let clocks: Vec<f64> = (0..k)
        .map(|i| clocks_src.split(map[i] as u64).exponential())
        .collect();
    let mut labels = seed_labels(emb);
    for v in 0..emb.n() {
        if labels[v].is_some() {
            continue;
        }
        let x = emb.point(v).coords();
        let mut best = 0usize;
        let mut best_ratio = f64::INFINITY;
        for i in 0..k {
            let ratio = if x[i] > 0.0 {
                clocks[i] / x[i]
            } else {
                f64::INFINITY
            };
            if ratio < best_ratio {
                best_ratio = ratio;
                best = i;
            }
        }
        labels[v] = Some(best);
    }
    finish(labels)
}

/// Sweep the first k-1 terminals of `order`, assigning every unassigned
/// vertex whose coordinate reaches that terminal's threshold; the last
/// terminal takes the remainder.
fn threshold_sweep(
    emb: &FractionalEmbedding,
    order: &[usize],
    thresholds: &[f64],
) -> Labeling {
    let k = emb.k();
    let mut labels = seed_labels(emb);
    for &term in &order[..k - 1] {
        let theta = thresholds[term];
        for v in 0..emb.n() {
            if labels[v].is_none() && emb.point(v).coord(term) >= theta {
                labels[v] = Some(term);
            }
        }
    }
    let last = order[k - 1];
    for l in labels.iter_mut() {
        if l.is_none() {
            *l = Some(last);
        }
    }
    finish(labels)
}

/// Uniform random order from independent per-terminal keys: sorting the
/// keys makes the order co-vary with a substream remapping.
fn random_order(k: usize, src: &RandomSource, map: &[usize]) -> Vec<usize> {
    let keys: Vec<f64> = (0..k).map(|i| src.split(map[i] as u64).uniform()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| keys[a].partial_cmp(&keys[b]).unwrap().then(a.cmp(&b)));
    order
}

/// One shared threshold drawn from `phi` plus a uniform sweep order.
pub fn single_threshold(
    emb: &FractionalEmbedding,
    phi: &PiecewiseDensity,
    rs: &RandomSource,
) -> Labeling {
    single_threshold_mapped(emb, phi, rs, &identity_map(emb.k()))
}

pub fn single_threshold_mapped(
    emb: &FractionalEmbedding,
    phi: &PiecewiseDensity,
    rs: &RandomSource,
    map: &[usize],
) -> Labeling {
    let k = emb.k();
    assert_eq!(map.len(), k);
    let theta = phi.sample(rs.split(tags::SHARED_THRESHOLD).uniform());
    let order = random_order(k, &rs.split(tags::SWEEP_ORDER), map);
    threshold_sweep(emb, &order, &vec![theta; k])
}

/// Deterministic single-threshold sweep with explicit threshold and order.
pub fn single_threshold_fixed(
    emb: &FractionalEmbedding,
    theta: f64,
    order: &[usize],
) -> Labeling {
    threshold_sweep(emb, order, &vec![theta; emb.k()])
}

/// Per-terminal i.i.d. thresholds processed in decreasing-threshold order.
pub fn descending_thresholds(
    emb: &FractionalEmbedding,
    psi: &PiecewiseDensity,
    rs: &RandomSource,
) -> Labeling {
    descending_thresholds_mapped(emb, psi, rs, &identity_map(emb.k()))
}

pub fn descending_thresholds_mapped(
    emb: &FractionalEmbedding,
    psi: &PiecewiseDensity,
    rs: &RandomSource,
    map: &[usize],
) -> Labeling {
    let k = emb.k();
    assert_eq!(map.len(), k);
    let src = rs.split(tags::PER_TERMINAL);
    let thresholds: Vec<f64> = (0..k)
        .map(|i| psi.sample(src.split(map[i] as u64).uniform()))
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        thresholds[b]
            .partial_cmp(&thresholds[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    threshold_sweep(emb, &order, &thresholds)
}

/// Per-terminal i.i.d. thresholds with an independent uniform sweep order.
pub fn independent_thresholds(
    emb: &FractionalEmbedding,
    xi: &PiecewiseDensity,
    rs: &RandomSource,
) -> Labeling {
    independent_thresholds_mapped(emb, xi, rs, &identity_map(emb.k()))
}

pub fn independent_thresholds_mapped(
    emb: &FractionalEmbedding,
    xi: &PiecewiseDensity,
    rs: &RandomSource,
    map: &[usize],
) -> Labeling {
    let k = emb.k();
    assert_eq!(map.len(), k);
    let src = rs.split(tags::PER_TERMINAL);
    let thresholds: Vec<f64> = (0..k)
        .map(|i| xi.sample(src.split(map[i] as u64).uniform()))
        .collect();
    let order = random_order(k, &rs.split(tags::SWEEP_ORDER), map);
    threshold_sweep(emb, &order, &thresholds)
}

/// A convex combination of rounding schemes.
#[derive(Debug, Clone)]
pub struct SchemeMixture {
    entries: Vec<(f64, Scheme)>,
}

impl SchemeMixture {
    pub fn new(entries: Vec<(f64, Scheme)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidMixture("no entries".into()));
        }
        let mut sum = 0.0;
        for (w, _) in &entries {
            if *w < 0.0 {
                return Err(Error::InvalidMixture(format!("negative weight {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidMixture(format!("weights sum to {sum}, not 1")));
        }
        Ok(SchemeMixture { entries })
    }

    pub fn entries(&self) -> &[(f64, Scheme)] {
        &self.entries
    }

    pub fn name(&self) -> String {
        self.entries
            .iter()
            .map(|(w, s)| format!("{:.6}*{}", w, s.name()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Select one entry by weight with a single uniform draw, then delegate
/// to that scheme on the `MIXTURE_RUN` substream.
pub fn run_mixture(
    mixture: &SchemeMixture,
    emb: &FractionalEmbedding,
    rs: &RandomSource,
) -> Labeling {
    let u = rs.split(tags::MIXTURE_PICK).uniform();
    let mut acc = 0.0;
    let mut chosen = &mixture.entries[mixture.entries.len() - 1].1;
    for (w, scheme) in &mixture.entries {
        acc += w;
        if u < acc {
            chosen = scheme;
            break;
        }
    }
    chosen.round(emb, &rs.split(tags::MIXTURE_RUN))
}

/// Clocks + single threshold with the golden-ratio parameters
/// (factor (3 + sqrt(5))/4).
pub fn mixture_1309() -> SchemeMixture {
    let (_, _, p) = density::params_1309();
    SchemeMixture::new(vec![
        (p, Scheme::ExponentialClocks),
        (1.0 - p, Scheme::SingleThreshold(density::phi_1309())),
    ])
    .expect("published weights are a distribution")
}

/// Clocks + single threshold + descending thresholds
/// (factor (10 + 4*sqrt(3))/13). Uses the p3 value consistent with
/// p1 + p2 + p3 = 1; see `density::params_1302`.
pub fn mixture_1302() -> SchemeMixture {
    let p = density::params_1302();
    SchemeMixture::new(vec![
        (p.p1, Scheme::ExponentialClocks),
        (p.p2, Scheme::SingleThreshold(density::phi_1302())),
        (
            p.p3,
            Scheme::DescendingThresholds(
                density::uniform_density(p.b).expect("b in (0,1]"),
            ),
        ),
    ])
    .expect("published weights are a distribution")
}

/// All four schemes with the published 1.2965 parameters. The single
/// threshold samples from the folded sub-density re-normalized by its own
/// integral (sampling needs total mass 1; certification never
/// re-normalizes).
pub fn mixture_1296() -> SchemeMixture {
    let p = density::params_1296();
    let uniform_b = density::uniform_density(p.b).expect("b in (0,1]");
    SchemeMixture::new(vec![
        (p.p1, Scheme::ExponentialClocks),
        (p.p2, Scheme::SingleThreshold(density::phi_tilde_1296())),
        (p.p3, Scheme::DescendingThresholds(uniform_b.clone())),
        (p.p4, Scheme::IndependentThresholds(uniform_b)),
    ])
    .expect("published weights are a distribution")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SimplexPoint;

    fn embedding_with(points: Vec<Vec<f64>>, k: usize) -> FractionalEmbedding {
        let mut pts: Vec<SimplexPoint> = (0..k).map(|s| SimplexPoint::basis(k, s)).collect();
        for p in points {
            pts.push(SimplexPoint::new(p).unwrap());
        }
        FractionalEmbedding::new(pts, (0..k).collect()).unwrap()
    }

    fn all_schemes(k_b: f64) -> Vec<Scheme> {
        vec![
            Scheme::ExponentialClocks,
            Scheme::SingleThreshold(density::phi_1309()),
            Scheme::DescendingThresholds(density::uniform_density(k_b).unwrap()),
            Scheme::IndependentThresholds(density::uniform_density(k_b).unwrap()),
        ]
    }

    #[test]
    fn terminals_keep_their_labels() {
        let emb = embedding_with(vec![vec![0.2, 0.3, 0.5], vec![0.9, 0.1, 0.0]], 3);
        for scheme in all_schemes(0.5) {
            for seed in 0..50 {
                let l = scheme.round(&emb, &RandomSource::new(seed));
                assert!(l.separates_terminals(&emb), "{}", scheme.name());
            }
        }
    }

    #[test]
    fn vertex_at_corner_gets_that_terminal() {
        // A non-terminal vertex sitting exactly on a simplex corner is
        // labeled with that corner under every scheme and seed.
        let emb = embedding_with(vec![vec![0.0, 1.0, 0.0]], 3);
        for scheme in all_schemes(0.7) {
            for seed in 0..100 {
                let l = scheme.round(&emb, &RandomSource::new(seed));
                assert_eq!(l.label(3), 1, "{} seed {seed}", scheme.name());
            }
        }
    }

    #[test]
    fn clocks_symmetric_at_midpoint() {
        let emb = embedding_with(vec![vec![0.5, 0.5]], 2);
        let n = 200_000;
        let rs = RandomSource::new(77);
        let mut ones = 0u32;
        for t in 0..n {
            let l = exponential_clocks(&emb, &rs.split(t as u64));
            if l.label(2) == 0 {
                ones += 1;
            }
        }
        let freq = ones as f64 / n as f64;
        let se = (0.25f64 / n as f64).sqrt();
        assert!((freq - 0.5).abs() <= 4.0 * se, "freq {freq}");
    }

    #[test]
    fn single_threshold_fixed_sweep() {
        let emb = embedding_with(vec![vec![0.6, 0.4, 0.0]], 3);
        let l = single_threshold_fixed(&emb, 0.5, &[0, 1, 2]);
        assert_eq!(l.label(3), 0);
        // With threshold above every coordinate the remainder rule fires.
        let l = single_threshold_fixed(&emb, 0.7, &[0, 1, 2]);
        assert_eq!(l.label(3), 2);
        // Reordered sweep: terminal 1 never reaches 0.5, so 0 still wins.
        let l = single_threshold_fixed(&emb, 0.5, &[1, 0, 2]);
        assert_eq!(l.label(3), 0);
    }

    #[test]
    fn independent_uniform_order_symmetric() {
        let emb = embedding_with(vec![vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]], 3);
        let xi = density::uniform_density(1.0).unwrap();
        let n = 120_000;
        let rs = RandomSource::new(5);
        let mut counts = [0u32; 3];
        for t in 0..n {
            let l = independent_thresholds(&emb, &xi, &rs.split(t as u64));
            counts[l.label(3)] += 1;
        }
        let se = (0.5 / n as f64 * (1.0 - 1.0 / 3.0)).sqrt();
        for c in counts {
            let freq = c as f64 / n as f64;
            assert!((freq - 1.0 / 3.0).abs() <= 4.0 * se + 1e-3, "freq {freq}");
        }
    }

    #[test]
    fn determinism_same_seed_same_labeling() {
        let emb = embedding_with(vec![vec![0.2, 0.3, 0.5], vec![0.1, 0.8, 0.1]], 3);
        for scheme in all_schemes(0.5) {
            let rs = RandomSource::new(123);
            let a = scheme.round(&emb, &rs);
            let b = scheme.round(&emb, &rs);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn permutation_equivariance_with_stream_remap() {
        // Relabel coordinates by pi and reroute terminal substreams the
        // same way; labels must come out permuted by pi.
        let k = 4;
        let raw = [
            vec![0.1, 0.2, 0.3, 0.4],
            vec![0.25, 0.25, 0.25, 0.25],
            vec![0.7, 0.1, 0.1, 0.1],
        ];
        let pi = [2usize, 0, 3, 1]; // label i becomes pi[i]
        let emb = embedding_with(raw.to_vec(), k);

        // Permuted embedding: coordinate pi[i] of the new points equals
        // coordinate i of the old; terminal for index pi[i] is old terminal i.
        let mut new_terminals = vec![0usize; k];
        for i in 0..k {
            new_terminals[pi[i]] = i;
        }
        let permute =
            |p: &[f64]| -> Vec<f64> {
                let mut q = vec![0.0; k];
                for i in 0..k {
                    q[pi[i]] = p[i];
                }
                q
            };
        let mut pts: Vec<SimplexPoint> = (0..k)
            .map(|t| SimplexPoint::new(permute(SimplexPoint::basis(k, t).coords())).unwrap())
            .collect();
        for p in &raw {
            pts.push(SimplexPoint::new(permute(p)).unwrap());
        }
        let emb_pi = FractionalEmbedding::new(pts, new_terminals).unwrap();

        // Substream map: the scheme draws for new index j from old index
        // pi^-1(j)'s stream.
        let mut inv = vec![0usize; k];
        for i in 0..k {
            inv[pi[i]] = i;
        }
        let ident = identity_map(k);
        let rs = RandomSource::new(99);
        let phi = density::phi_1309();
        let psi = density::uniform_density(0.6).unwrap();

        for seed in 0..40u64 {
            let rs = rs.split(seed);
            let pairs: Vec<(Labeling, Labeling)> = vec![
                (
                    exponential_clocks_mapped(&emb, &rs, &ident),
                    exponential_clocks_mapped(&emb_pi, &rs, &inv),
                ),
                (
                    single_threshold_mapped(&emb, &phi, &rs, &ident),
                    single_threshold_mapped(&emb_pi, &phi, &rs, &inv),
                ),
                (
                    descending_thresholds_mapped(&emb, &psi, &rs, &ident),
                    descending_thresholds_mapped(&emb_pi, &psi, &rs, &inv),
                ),
                (
                    independent_thresholds_mapped(&emb, &psi, &rs, &ident),
                    independent_thresholds_mapped(&emb_pi, &psi, &rs, &inv),
                ),
            ];
            for (base, permuted) in pairs {
                for v in 0..emb.n() {
                    assert_eq!(permuted.label(v), pi[base.label(v)]);
                }
            }
        }
    }

    #[test]
    fn mixture_single_entry_delegates() {
        let emb = embedding_with(vec![vec![0.2, 0.3, 0.5]], 3);
        let m = SchemeMixture::new(vec![(1.0, Scheme::ExponentialClocks)]).unwrap();
        for seed in 0..20 {
            let rs = RandomSource::new(seed);
            let via_mixture = run_mixture(&m, &emb, &rs);
            let direct = exponential_clocks(&emb, &rs.split(tags::MIXTURE_RUN));
            assert_eq!(via_mixture, direct);
        }
    }

    #[test]
    fn published_mixture_weights() {
        let m = mixture_1309();
        let p = (5.0 + 3.0 * 5f64.sqrt()) / 20.0;
        assert!((m.entries()[0].0 - p).abs() < 1e-15);
        assert!((p - 0.58541).abs() < 1e-5);
        assert!(matches!(m.entries()[0].1, Scheme::ExponentialClocks));
        assert!(matches!(m.entries()[1].1, Scheme::SingleThreshold(_)));

        let m = mixture_1302();
        let w: f64 = m.entries().iter().map(|e| e.0).sum();
        assert!((w - 1.0).abs() < 1e-12);

        let m = mixture_1296();
        assert_eq!(m.entries().len(), 4);
        let expect = [0.31052, 0.305782, 0.015338, 0.36836];
        for (e, x) in m.entries().iter().zip(expect) {
            assert!((e.0 - x).abs() < 1e-12);
        }
    }

    #[test]
    fn feasibility_over_random_embeddings() {
        // Every labeling separates the terminals, across schemes, seeds
        // and random embeddings.
        use rand::Rng;
        let root = RandomSource::new(2024);
        let mut rng = root.rng();
        for trial in 0..10_000u64 {
            let k = 2 + (rng.random::<u64>() % 4) as usize;
            let mut pts = Vec::new();
            for _ in 0..2 {
                let raw: Vec<f64> = (0..k).map(|_| -(1.0f64 - rng.random::<f64>()).ln()).collect();
                let s: f64 = raw.iter().sum();
                pts.push(raw.into_iter().map(|x| x / s).collect::<Vec<_>>());
            }
            let emb = embedding_with(pts, k);
            let schemes = all_schemes(0.3 + 0.7 * rng.random::<f64>());
            let scheme = &schemes[(trial % 4) as usize];
            let l = scheme.round(&emb, &root.split(trial));
            assert!(l.separates_terminals(&emb));
            assert!(l.labels().iter().all(|&x| x < k));
        }
    }
}
