//! Seeded instance generators. Every graph has a planted perfect matching.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Color, EmInstance, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    /// Edges added on top of the planted perfect matching.
    pub extra_edges: usize,
    pub red_prob: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, extra_edges: usize, red_prob: f64, seed: u64) -> Self {
        GenSpec {
            n,
            extra_edges,
            red_prob,
            seed,
        }
    }

    fn check(&self, capacity: usize) -> Result<()> {
        if self.n < 2 || self.n % 2 == 1 {
            return Err(Error::InvalidArgument(format!("n must be even and >= 2, got {}", self.n)));
        }
        if self.extra_edges > capacity {
            return Err(Error::InvalidArgument(format!(
                "{} extra edges requested, only {capacity} non-edges available",
                self.extra_edges
            )));
        }
        if !(0.0..=1.0).contains(&self.red_prob) {
            return Err(Error::InvalidArgument(format!("red_prob {} outside [0, 1]", self.red_prob)));
        }
        Ok(())
    }
}

/// Most extra edges a general instance on `n` vertices can take.
pub fn max_extra_edges(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).saturating_sub(n / 2)
}

/// Most extra edges a bipartite instance on `n` vertices can take.
pub fn max_extra_edges_bipartite(n: usize) -> usize {
    let h = n / 2;
    h * h - h
}

fn finish(n: usize, mut pairs: Vec<(usize, usize)>, spec: &GenSpec, rng: &mut ChaCha8Rng) -> EmInstance {
    for p in &mut pairs {
        *p = (p.0.min(p.1), p.0.max(p.1));
    }
    pairs.sort_unstable();
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| {
            let c = if rng.gen_bool(spec.red_prob) { Color::Red } else { Color::Blue };
            (u, v, c)
        })
        .collect();
    let k = rng.gen_range(0..=n / 2);
    EmInstance::new(Graph::new(n, edges), k)
}

/// Random instance: planted perfect matching, `extra_edges` more distinct edges,
/// each edge red with probability `red_prob`, `k` uniform in `0..=n/2`.
/// Edges come out sorted by endpoint pair.
pub fn gen_instance(spec: &GenSpec) -> Result<EmInstance> {
    let n = spec.n;
    spec.check(max_extra_edges(n))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut planted = vec![usize::MAX; n];
    let mut pairs = Vec::with_capacity(n / 2 + spec.extra_edges);
    for ch in perm.chunks(2) {
        planted[ch[0]] = ch[1];
        planted[ch[1]] = ch[0];
        pairs.push((ch[0], ch[1]));
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| planted[u] != v)
        .collect();
    let (chosen, _) = rest.partial_shuffle(&mut rng, spec.extra_edges);
    pairs.extend_from_slice(chosen);
    Ok(finish(n, pairs, spec, &mut rng))
}

/// Like [`gen_instance`], but every edge crosses a random balanced bipartition.
pub fn gen_bipartite_instance(spec: &GenSpec) -> Result<EmInstance> {
    let n = spec.n;
    spec.check(max_extra_edges_bipartite(n))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let (left, right) = perm.split_at(n / 2);
    let mut pairs: Vec<(usize, usize)> = left.iter().copied().zip(right.iter().copied()).collect();
    let mut rest: Vec<(usize, usize)> = (0..left.len())
        .flat_map(|i| (0..right.len()).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (left[i], right[j]))
        .collect();
    let (chosen, _) = rest.partial_shuffle(&mut rng, spec.extra_edges);
    pairs.extend_from_slice(chosen);
    Ok(finish(n, pairs, spec, &mut rng))
}
