//! Empirical cut-density oracle, independent of the analytic formulas.
//!
//! A synthetic two-vertex instance is rounded repeatedly; both endpoints
//! of the infinitesimal edge are labeled inside the same trial so every
//! random draw (thresholds, sweep order, clocks) is shared between them.
//! Without that coupling the estimator would measure the wrong event:
//! identical endpoints must produce exactly zero cuts.

use crate::error::Error;
use crate::geometry::{worst_case_location, EdgeSpec, FractionalEmbedding, SimplexPoint};
use crate::rng::{tags, RandomSource};
use crate::schemes::Scheme;
use crate::Result;
use rayon::prelude::*;
use serde::Serialize;

/// Where to place the measured edge of type (1, 2).
#[derive(Debug, Clone)]
pub enum EdgeLocation {
    /// Canonical placement: remaining mass spread evenly (needs k >= 3).
    WorstCase { u1: f64, u2: f64, k: usize },
    /// Explicit simplex point; the edge moves mass from coordinate 0 to 1.
    Explicit(SimplexPoint),
}

/// A Monte Carlo cut-density estimate: cut frequency divided by the edge
/// length, with the binomial standard error scaled the same way.
#[derive(Debug, Clone, Serialize)]
pub struct DensityEstimate {
    pub scheme: String,
    pub u1: f64,
    pub u2: f64,
    pub k: usize,
    pub epsilon: f64,
    pub n: u64,
    pub cut_frequency: f64,
    pub mean: f64,
    pub stderr: f64,
    /// Set when the requested u2 was below epsilon and had to be shifted.
    pub shifted_u2: Option<f64>,
}

/// Estimate the cut density of `scheme` for an edge of type (1, 2) at the
/// given location, rounding both endpoints under common random numbers.
pub fn estimate_density(
    scheme: &Scheme,
    location: EdgeLocation,
    epsilon: f64,
    n: u64,
    seed: u64,
) -> Result<DensityEstimate> {
    if !(epsilon > 0.0 && epsilon <= 1e-2) {
        return Err(Error::Domain(format!(
            "epsilon must be in (0, 1e-2], got {epsilon}"
        )));
    }
    if n < 10_000 {
        return Err(Error::Domain(format!("need n >= 10^4 trials, got {n}")));
    }
    let (point, mut shifted) = match location {
        EdgeLocation::WorstCase { u1, u2, k } => {
            if u2 < epsilon {
                // The second endpoint would leave the simplex; shift and record.
                (worst_case_location(u1, epsilon, k)?, Some(epsilon))
            } else {
                (worst_case_location(u1, u2, k)?, None)
            }
        }
        EdgeLocation::Explicit(p) => (p, None),
    };
    if point.coord(1) < epsilon {
        let mut coords = point.coords().to_vec();
        let deficit = epsilon - coords[1];
        coords[1] = epsilon;
        // Take the mass from the largest other coordinate.
        let donor = (0..coords.len())
            .filter(|&i| i != 1)
            .max_by(|&a, &b| coords[a].partial_cmp(&coords[b]).unwrap())
            .unwrap();
        coords[donor] -= deficit;
        shifted = Some(epsilon);
        return estimate_at(scheme, SimplexPoint::new(coords)?, epsilon, n, seed, shifted);
    }
    estimate_at(scheme, point, epsilon, n, seed, shifted)
}

fn estimate_at(
    scheme: &Scheme,
    point: SimplexPoint,
    epsilon: f64,
    n: u64,
    seed: u64,
    shifted_u2: Option<f64>,
) -> Result<DensityEstimate> {
    let k = point.k();
    let edge = EdgeSpec::new(point.clone(), 0, 1, epsilon)?;
    let other = edge.second_endpoint();
    let mut points: Vec<SimplexPoint> = (0..k).map(|s| SimplexPoint::basis(k, s)).collect();
    points.push(point.clone());
    points.push(other);
    let emb = FractionalEmbedding::new(points, (0..k).collect())?;
    let (va, vb) = (k, k + 1);

    let root = RandomSource::new(seed).split(tags::TRIAL);
    const CHUNK: u64 = 4096;
    let chunks = n.div_ceil(CHUNK);
    let cuts: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut local = 0u64;
            for t in lo..hi {
                let l = scheme.round(&emb, &root.split(t));
                if l.label(va) != l.label(vb) {
                    local += 1;
                }
            }
            local
        })
        .sum();

    let p_hat = cuts as f64 / n as f64;
    Ok(DensityEstimate {
        scheme: scheme.name().to_string(),
        u1: point.coord(0),
        u2: point.coord(1),
        k,
        epsilon,
        n,
        cut_frequency: p_hat,
        mean: p_hat / epsilon,
        stderr: (p_hat * (1.0 - p_hat) / n as f64).sqrt() / epsilon,
    })
    .map(|mut e| {
        e.shifted_u2 = shifted_u2;
        e
    })
}
