//! Transportation simplex for `min <C, pi>` over the transport polytope.
//!
//! Northwest-corner start, MODI potentials, Bland's rule for both the
//! entering and the leaving cell.

use std::collections::VecDeque;

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::types::{Coupling, ProbabilityVector};

/// `<cost, pi>`.
pub fn transport_cost(cost: ArrayView2<'_, f64>, pi: &Coupling) -> f64 {
    cost.iter().zip(pi.as_array().iter()).map(|(c, p)| c * p).sum()
}

/// Exact optimal vertex of the transport LP.
pub fn exact_ot(
    cost: ArrayView2<'_, f64>,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
) -> Result<Coupling> {
    let (n, m) = cost.dim();
    if n != mu.len() {
        return Err(Error::mismatch("cost rows vs mu length", n, mu.len()));
    }
    if m != nu.len() {
        return Err(Error::mismatch("cost columns vs nu length", m, nu.len()));
    }
    if cost.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("cost must be finite".into()));
    }
    let mut tableau = Tableau::northwest_corner(mu.as_slice(), nu.as_slice());
    let scale = cost.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let threshold = -1e-12 * (1.0 + scale);
    let cap = 50 * (n * m + n + m) + 1000;
    for _ in 0..cap {
        let (u, v) = tableau.potentials(cost);
        let entering = (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .find(|&(i, j)| !tableau.basic[[i, j]] && cost[[i, j]] - u[i] - v[j] < threshold);
        match entering {
            None => {
                let flows = tableau.flow.mapv(|x| x.max(0.0));
                return Ok(Coupling::from_array_unchecked(flows));
            }
            Some(cell) => tableau.pivot(cell),
        }
    }
    Err(Error::NotConverged {
        context: "transportation simplex".into(),
        iterations: cap,
        violation: f64::NAN,
    })
}

struct Tableau {
    n: usize,
    m: usize,
    flow: Array2<f64>,
    basic: Array2<bool>,
    basis: Vec<(usize, usize)>,
}

impl Tableau {
    fn northwest_corner(supply: &[f64], demand: &[f64]) -> Self {
        let (n, m) = (supply.len(), demand.len());
        let mut s = supply.to_vec();
        let mut d = demand.to_vec();
        let mut flow = Array2::zeros((n, m));
        let mut basic = Array2::from_elem((n, m), false);
        let mut basis = Vec::with_capacity(n + m - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let q = s[i].min(d[j]).max(0.0);
            flow[[i, j]] = q;
            basic[[i, j]] = true;
            basis.push((i, j));
            s[i] -= q;
            d[j] -= q;
            if i == n - 1 && j == m - 1 {
                break;
            }
            if i == n - 1 {
                j += 1;
            } else if j == m - 1 || s[i] <= d[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Floating leftovers from an imperfectly balanced problem land in the corner.
        flow[[n - 1, m - 1]] += s[n - 1].max(0.0);
        Self {
            n,
            m,
            flow,
            basic,
            basis,
        }
    }

    /// Tree adjacency over nodes `0..n` (rows) and `n..n+m` (columns); each
    /// neighbor entry carries the basis cell index.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n + self.m];
        for (k, &(i, j)) in self.basis.iter().enumerate() {
            adj[i].push((self.n + j, k));
            adj[self.n + j].push((i, k));
        }
        adj
    }

    /// Dual potentials with `u_i + v_j = c_ij` on the basis, `u_0 = 0`.
    fn potentials(&self, cost: ArrayView2<'_, f64>) -> (Vec<f64>, Vec<f64>) {
        let adj = self.adjacency();
        let mut u = vec![f64::NAN; self.n];
        let mut v = vec![f64::NAN; self.m];
        let mut seen = vec![false; self.n + self.m];
        let mut queue = VecDeque::from([0usize]);
        u[0] = 0.0;
        seen[0] = true;
        while let Some(node) = queue.pop_front() {
            for &(next, k) in &adj[node] {
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                let (i, j) = self.basis[k];
                if next >= self.n {
                    v[j] = cost[[i, j]] - u[i];
                } else {
                    u[i] = cost[[i, j]] - v[j];
                }
                queue.push_back(next);
            }
        }
        (u, v)
    }

    /// Basis cells on the tree path from column node `j` to row node `i`.
    fn tree_path(&self, i: usize, j: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let start = self.n + j;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.n + self.m];
        let mut seen = vec![false; self.n + self.m];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(node) = queue.pop_front() {
            if node == i {
                break;
            }
            for &(next, k) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, k));
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = i;
        while node != start {
            let (prev, k) = parent[node].expect("basis is a spanning tree");
            path.push(k);
            node = prev;
        }
        path.reverse();
        path
    }

    fn pivot(&mut self, (i, j): (usize, usize)) {
        // Path starts at column j, so odd positions (0, 2, ...) lose flow.
        let path = self.tree_path(i, j);
        let minus: Vec<usize> = path.iter().step_by(2).copied().collect();
        let plus: Vec<usize> = path.iter().skip(1).step_by(2).copied().collect();
        let theta = minus
            .iter()
            .map(|&k| self.flow[self.basis[k]])
            .fold(f64::INFINITY, f64::min);
        let leaving = minus
            .iter()
            .copied()
            .filter(|&k| self.flow[self.basis[k]] == theta)
            .min_by_key(|&k| {
                let (a, b) = self.basis[k];
                a * self.m + b
            })
            .expect("cycle has a decreasing cell");
        for &k in &plus {
            self.flow[self.basis[k]] += theta;
        }
        for &k in &minus {
            self.flow[self.basis[k]] -= theta;
        }
        self.flow[[i, j]] = theta;
        let out = self.basis[leaving];
        self.flow[out] = 0.0;
        self.basic[out] = false;
        self.basic[[i, j]] = true;
        self.basis[leaving] = (i, j);
    }
}
