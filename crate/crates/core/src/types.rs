//! Validated domain types shared by the projections, solvers and task drivers.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis as NdAxis};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a [`ProbabilityVector`].
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;
/// Tolerance on the total mass of a [`Coupling`].
pub const COUPLING_MASS_TOL: f64 = 1e-9;
/// Tolerance on the own-constraint of each half of a [`SplitIterate`].
pub const SPLIT_CONSTRAINT_TOL: f64 = 1e-10;

/// Symmetric, nonnegative, finite square matrix of intra-space distances
/// (or similarities, e.g. an adjacency matrix).
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    entries: Array2<f64>,
}

impl DistanceMatrix {
    /// Builds a distance matrix, symmetrizing the input as `(A + A^T) / 2`.
    ///
    /// Already-symmetric input is left bit-for-bit unchanged.
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::mismatch("distance matrix must be square", r, c));
        }
        if r == 0 {
            return Err(Error::InvalidInput("distance matrix must be non-empty".into()));
        }
        if let Some(((i, j), v)) = entries
            .indexed_iter()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "distance entry ({i}, {j}) = {v} is negative or not finite"
            )));
        }
        let sym = (&entries + &entries.t()) / 2.0;
        Ok(Self { entries: sym })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows_to_array(rows)?)
    }

    pub fn zeros(size: usize) -> Self {
        Self {
            entries: Array2::zeros((size, size)),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.entries.view()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.entries
    }
}

/// Strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    weights: Array1<f64>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("probability vector must be non-empty".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w <= 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "weight {i} = {w} must be strictly positive and finite"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self {
            weights: Array1::from(weights),
        })
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidInput("probability vector must be non-empty".into()));
        }
        Ok(Self {
            weights: Array1::from_elem(len, 1.0 / len as f64),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn view(&self) -> ArrayView1<'_, f64> {
        self.weights.view()
    }

    pub fn as_array(&self) -> &Array1<f64> {
        &self.weights
    }

    pub fn as_slice(&self) -> &[f64] {
        self.weights.as_slice().expect("contiguous")
    }
}

/// Nonnegative `n x m` transport plan with unit total mass.
///
/// Marginal feasibility is not part of the invariant: BAPG halves and the
/// averaged BAPG output are deliberately infeasible.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    entries: Array2<f64>,
}

impl Coupling {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("coupling must be non-empty".into()));
        }
        if let Some(((i, j), v)) = entries
            .indexed_iter()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "coupling entry ({i}, {j}) = {v} is negative or not finite"
            )));
        }
        let mass = entries.sum();
        if (mass - 1.0).abs() > COUPLING_MASS_TOL {
            return Err(Error::InvalidInput(format!(
                "coupling mass is {mass}, expected 1"
            )));
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows_to_array(rows)?)
    }

    /// Wraps a matrix produced by an operation that preserves the invariants
    /// by construction (exact projections, convex combinations).
    pub(crate) fn from_array_unchecked(entries: Array2<f64>) -> Self {
        debug_assert!(entries.iter().all(|v| v.is_finite() && *v >= 0.0));
        Self { entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.entries.dim()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.entries.view()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn into_array(self) -> Array2<f64> {
        self.entries
    }

    pub fn row_sums(&self) -> Array1<f64> {
        self.entries.sum_axis(NdAxis(1))
    }

    pub fn col_sums(&self) -> Array1<f64> {
        self.entries.sum_axis(NdAxis(0))
    }

    /// `(a + b) / 2`, the reported BAPG solution.
    pub fn midpoint(a: &Coupling, b: &Coupling) -> Result<Coupling> {
        if a.shape() != b.shape() {
            return Err(Error::mismatch("coupling shapes", a.rows(), b.rows()));
        }
        Ok(Self::from_array_unchecked((&a.entries + &b.entries) / 2.0))
    }
}

/// The BAPG pair `(pi, w)`: `pi` lies in the row polytope, `w` in the column polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitIterate {
    pub(crate) pi: Coupling,
    pub(crate) w: Coupling,
}

impl SplitIterate {
    pub fn new(
        pi: Coupling,
        w: Coupling,
        mu: &ProbabilityVector,
        nu: &ProbabilityVector,
    ) -> Result<Self> {
        if pi.shape() != w.shape() {
            return Err(Error::mismatch("split halves rows", pi.rows(), w.rows()));
        }
        if pi.rows() != mu.len() {
            return Err(Error::mismatch("pi rows vs mu", pi.rows(), mu.len()));
        }
        if w.cols() != nu.len() {
            return Err(Error::mismatch("w columns vs nu", w.cols(), nu.len()));
        }
        let row_err = max_abs_diff(&pi.row_sums(), mu.as_array());
        if row_err > SPLIT_CONSTRAINT_TOL {
            return Err(Error::InvalidInput(format!(
                "pi violates its row constraint by {row_err:e}"
            )));
        }
        let col_err = max_abs_diff(&w.col_sums(), nu.as_array());
        if col_err > SPLIT_CONSTRAINT_TOL {
            return Err(Error::InvalidInput(format!(
                "w violates its column constraint by {col_err:e}"
            )));
        }
        Ok(Self { pi, w })
    }

    pub(crate) fn new_unchecked(pi: Coupling, w: Coupling) -> Self {
        Self { pi, w }
    }

    pub fn pi(&self) -> &Coupling {
        &self.pi
    }

    pub fn w(&self) -> &Coupling {
        &self.w
    }

    pub fn averaged(&self) -> Coupling {
        Coupling::from_array_unchecked((&self.pi.entries + &self.w.entries) / 2.0)
    }
}

/// Simple undirected graph with canonical `(min, max)` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Canonicalizes, sorts and deduplicates the edge list. Self-loops and
    /// out-of-range endpoints are rejected.
    pub fn new(num_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::InvalidInput("graph must have at least one node".into()));
        }
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= num_nodes || v >= num_nodes {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range for {num_nodes} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at node {u}")));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self {
            num_nodes,
            edges: canon,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_nodes];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }
}

/// Checks that both distance matrices agree with their marginals.
pub fn validate_inputs(
    dx: &DistanceMatrix,
    dy: &DistanceMatrix,
    mu: &ProbabilityVector,
    nu: &ProbabilityVector,
) -> Result<()> {
    if dx.size() != mu.len() {
        return Err(Error::mismatch("D_X size vs mu length", dx.size(), mu.len()));
    }
    if dy.size() != nu.len() {
        return Err(Error::mismatch("D_Y size vs nu length", dy.size(), nu.len()));
    }
    Ok(())
}

/// The independent coupling `mu nu^T`, feasible for both marginals.
pub fn product_coupling(mu: &ProbabilityVector, nu: &ProbabilityVector) -> Coupling {
    let (n, m) = (mu.len(), nu.len());
    let mut out = Array2::zeros((n, m));
    for (i, &a) in mu.as_array().iter().enumerate() {
        for (j, &b) in nu.as_array().iter().enumerate() {
            out[[i, j]] = a * b;
        }
    }
    Coupling::from_array_unchecked(out)
}

pub(crate) fn max_abs_diff(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn rows_to_array(rows: &[Vec<f64>]) -> Result<Array2<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(Error::mismatch("ragged matrix rows", m, bad.len()));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Array2::from_shape_vec((n, m), flat).map_err(|e| Error::InvalidInput(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn validate_inputs_dims() {
        let d3 = DistanceMatrix::zeros(3);
        let d4 = DistanceMatrix::zeros(4);
        let u3 = ProbabilityVector::uniform(3).unwrap();
        let u4 = ProbabilityVector::uniform(4).unwrap();
        assert!(validate_inputs(&d3, &d4, &u3, &u4).is_ok());
        let err = validate_inputs(&d3, &d4, &u4, &u3).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        assert!(err.to_string().contains("D_X"));

        let d1 = DistanceMatrix::zeros(1);
        let one = ProbabilityVector::new(vec![1.0]).unwrap();
        assert!(validate_inputs(&d1, &d1, &one, &one).is_ok());
    }

    #[test]
    fn product_coupling_examples() {
        let one = ProbabilityVector::new(vec![1.0]).unwrap();
        assert_eq!(product_coupling(&one, &one).as_array(), &array![[1.0]]);

        let u2 = ProbabilityVector::uniform(2).unwrap();
        assert!(product_coupling(&u2, &u2).as_array().iter().all(|&v| v == 0.25));

        let mu = ProbabilityVector::new(vec![0.3, 0.7]).unwrap();
        let p = product_coupling(&mu, &u2);
        let expected = array![[0.15, 0.15], [0.35, 0.35]];
        for (a, b) in p.as_array().iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn product_coupling_is_feasible() {
        let mu = ProbabilityVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let nu = ProbabilityVector::new(vec![0.25, 0.05, 0.7]).unwrap();
        let p = product_coupling(&mu, &nu);
        assert!(max_abs_diff(&p.row_sums(), mu.as_array()) <= 1e-15);
        assert!(max_abs_diff(&p.col_sums(), nu.as_array()) <= 1e-15);
    }

    #[test]
    fn distance_matrix_symmetrizes() {
        let d = DistanceMatrix::new(array![[0.0, 2.0], [4.0, 0.0]]).unwrap();
        assert_eq!(d.as_array(), &array![[0.0, 3.0], [3.0, 0.0]]);
        assert!(DistanceMatrix::new(array![[0.0, -1.0], [-1.0, 0.0]]).is_err());
        assert!(DistanceMatrix::new(array![[0.0, f64::NAN], [1.0, 0.0]]).is_err());
        assert!(DistanceMatrix::new(Array2::zeros((2, 3))).is_err());
    }

    #[test]
    fn probability_vector_rejects_bad_weights() {
        assert!(ProbabilityVector::new(vec![0.0, 1.0]).is_err());
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![0.25; 4]).is_ok());
    }

    #[test]
    fn coupling_checks_mass() {
        assert!(Coupling::new(array![[0.5, 0.5]]).is_ok());
        assert!(Coupling::new(array![[0.5, 0.4]]).is_err());
        assert!(Coupling::new(array![[1.5, -0.5]]).is_err());
    }

    #[test]
    fn split_iterate_checks_own_constraints() {
        let mu = ProbabilityVector::uniform(2).unwrap();
        let nu = ProbabilityVector::uniform(2).unwrap();
        let pi = Coupling::new(array![[0.4, 0.1], [0.4, 0.1]]).unwrap();
        let w = Coupling::new(array![[0.1, 0.1], [0.4, 0.4]]).unwrap();
        assert!(SplitIterate::new(pi.clone(), w.clone(), &mu, &nu).is_ok());
        assert!(SplitIterate::new(w, pi, &mu, &nu).is_err());
    }

    #[test]
    fn graph_canonicalizes() {
        let g = Graph::new(3, [(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn symmetrization_is_idempotent(vals in proptest::collection::vec(0.0f64..10.0, 16)) {
            let a = Array2::from_shape_vec((4, 4), vals).unwrap();
            let once = DistanceMatrix::new(a).unwrap();
            let twice = DistanceMatrix::new(once.as_array().clone()).unwrap();
            proptest::prop_assert_eq!(once, twice);
        }
    }
}
