//! Seeded synthetic graph generators and the noise / relabeling used to
//! build alignment benchmarks.

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::types::Graph;

/// Source/target graph pair with the true correspondence
/// `ground_truth[source_node] = target_node`.
#[derive(Debug, Clone)]
pub struct AlignmentInstance {
    pub source: Graph,
    pub target: Graph,
    pub ground_truth: Vec<usize>,
}

impl AlignmentInstance {
    pub fn new(source: Graph, target: Graph, ground_truth: Vec<usize>) -> Result<Self> {
        if ground_truth.len() != source.num_nodes() {
            return Err(Error::mismatch(
                "ground truth length vs source nodes",
                ground_truth.len(),
                source.num_nodes(),
            ));
        }
        let mut seen = HashSet::new();
        for &t in &ground_truth {
            if t >= target.num_nodes() || !seen.insert(t) {
                return Err(Error::InvalidInput(format!(
                    "ground truth is not an injection into the target nodes (offending node {t})"
                )));
            }
        }
        Ok(Self {
            source,
            target,
            ground_truth,
        })
    }

    /// Target = randomly relabeled copy of the source with `q_percent` noise
    /// added before relabeling.
    pub fn noisy_copy(source: Graph, q_percent: f64, seed: u64) -> Result<Self> {
        let noisy = add_noise(&source, q_percent, seed.wrapping_mul(2).wrapping_add(1))?;
        let (target, perm) = permute_graph(&noisy, seed.wrapping_mul(2));
        let gt = perm[..source.num_nodes()].to_vec();
        Self::new(source, target, gt)
    }
}

#[derive(Debug, Clone)]
pub struct PartitionInstance {
    pub graph: Graph,
    pub k: usize,
    pub ground_truth_labels: Vec<usize>,
}

/// Preferential attachment: a clique on `m_attach + 1` nodes, then every new
/// node links to `m_attach` distinct earlier nodes drawn proportionally to
/// degree.
pub fn gen_barabasi_albert(n: usize, m_attach: usize, seed: u64) -> Result<Graph> {
    if m_attach < 1 || m_attach >= n {
        return Err(Error::InvalidInput(format!(
            "Barabasi-Albert needs 1 <= m_attach < n, got m_attach={m_attach}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seed_size = m_attach + 1;
    let mut edges = Vec::with_capacity(m_attach * n);
    let mut degree = vec![0usize; n];
    for u in 0..seed_size {
        for v in (u + 1)..seed_size {
            edges.push((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    for new in seed_size..n {
        let chosen = index::sample_weighted(&mut rng, new, |i| degree[i] as f64, m_attach)
            .map_err(|e| Error::InvalidInput(format!("degree weights: {e}")))?;
        let mut targets = chosen.into_vec();
        targets.sort_unstable();
        for t in targets {
            edges.push((t, new));
            degree[t] += 1;
            degree[new] += 1;
        }
    }
    Graph::new(n, edges)
}

/// Cluster sizes ~ N(n/k, (n/(4k))^2), clipped at 1 and rescaled to sum to
/// `n` by largest remainder.
fn gaussian_sizes(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mean = n as f64 / k as f64;
    let normal = Normal::new(mean, mean / 4.0).expect("finite positive std");
    let raw: Vec<f64> = (0..k).map(|_| normal.sample(rng).max(1.0)).collect();
    let total: f64 = raw.iter().sum();
    // Reserve one node per cluster, share the rest proportionally.
    let spare = (n - k) as f64;
    let shares: Vec<f64> = raw.iter().map(|r| spare * r / total).collect();
    let mut sizes: Vec<usize> = shares.iter().map(|s| 1 + s.floor() as usize).collect();
    let mut left = n - sizes.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let fa = shares[a] - shares[a].floor();
        let fb = shares[b] - shares[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        sizes[i] += 1;
        left -= 1;
    }
    sizes
}

/// Gaussian random partition graph: consecutive node blocks form the
/// clusters; pairs inside a block connect with `p_in`, across blocks with
/// `p_out`.
pub fn gen_gaussian_partition(n: usize, k: usize, p_in: f64, p_out: f64, seed: u64) -> Result<PartitionInstance> {
    if !(0.0 <= p_out && p_out < p_in && p_in <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "need 0 <= p_out < p_in <= 1, got p_in={p_in}, p_out={p_out}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = gaussian_sizes(n, k, &mut rng);
    let labels: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if labels[u] == labels[v] { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(PartitionInstance {
        graph: Graph::new(n, edges)?,
        k,
        ground_truth_labels: labels,
    })
}

/// Adds `floor(q% |V|)` isolated nodes, then `floor(q% |E|)` edges drawn
/// uniformly from the pairs not yet connected in the enlarged graph.
pub fn add_noise(g: &Graph, q_percent: f64, seed: u64) -> Result<Graph> {
    if !(q_percent.is_finite() && q_percent >= 0.0) {
        return Err(Error::InvalidInput(format!("noise level must be >= 0, got {q_percent}")));
    }
    let extra_nodes = (q_percent * g.num_nodes() as f64 / 100.0).floor() as usize;
    let extra_edges = (q_percent * g.num_edges() as f64 / 100.0).floor() as usize;
    let n = g.num_nodes() + extra_nodes;
    let absent: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    if extra_edges > absent.len() {
        log::warn!(
            "only {} absent pairs available for {} noisy edges",
            absent.len(),
            extra_edges
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = index::sample(&mut rng, absent.len(), extra_edges.min(absent.len()));
    let edges = g.edges().iter().copied().chain(picks.iter().map(|i| absent[i]));
    Graph::new(n, edges)
}

/// Uniformly random relabeling; returns the relabeled graph and `perm` with
/// `perm[old] = new`.
pub fn permute_graph(g: &Graph, seed: u64) -> (Graph, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..g.num_nodes()).collect();
    perm.shuffle(&mut rng);
    let edges = g.edges().iter().map(|&(u, v)| (perm[u], perm[v]));
    let relabeled = Graph::new(g.num_nodes(), edges).expect("a permutation preserves validity");
    (relabeled, perm)
}
