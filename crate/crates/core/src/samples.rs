//! Small metric spaces used by the suites and tests.

use rand::Rng;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, PointMetric};

/// `n` points `0, h, 2h, …` on the line.
pub fn line_grid(n: usize, spacing: f64) -> Result<FiniteMetricSpace> {
    let coords: Vec<f64> = (0..n).map(|i| i as f64 * spacing).collect();
    FiniteMetricSpace::from_line(&coords)
}

/// `{0} ∪ {1/k : k = 1..n}` ⊂ ℝ.
pub fn harmonic(n: usize) -> Result<FiniteMetricSpace> {
    let mut coords = vec![0.0];
    coords.extend((1..=n).map(|k| 1.0 / k as f64));
    FiniteMetricSpace::from_line(&coords)
}

/// `{0} ∪ {2^-k : k = 0..n-1}` ⊂ ℝ.
pub fn dyadic(n: usize) -> Result<FiniteMetricSpace> {
    let mut coords = vec![0.0];
    coords.extend((0..n).map(|k| (-(k as f64)).exp2()));
    FiniteMetricSpace::from_line(&coords)
}

/// `n` uniform points in `[0, 1]^dim`.
pub fn random_cloud<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    dim: usize,
    metric: PointMetric,
) -> Result<FiniteMetricSpace> {
    let points: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
    FiniteMetricSpace::from_points(&points, metric)
}

/// Shortest-path metric of a connected weighted graph on `n` vertices.
pub fn graph_metric(n: usize, edges: &[(usize, usize, f64)]) -> Result<FiniteMetricSpace> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b, w) in edges {
        if a >= n || b >= n || w.is_nan() || w <= 0.0 {
            return Err(Error::invalid(format!("bad edge ({a}, {b}, {w})")));
        }
        d[a][b] = d[a][b].min(w);
        d[b][a] = d[b][a].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    if d.iter().flatten().any(|v| v.is_infinite()) {
        return Err(Error::invalid("graph is not connected"));
    }
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    FiniteMetricSpace::from_matrix(labels, d)
}

/// Unit-weight cycle `C_n`.
pub fn cycle(n: usize) -> Result<FiniteMetricSpace> {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    graph_metric(n, &edges)
}

/// Unit-weight `w × h` grid graph.
pub fn grid_graph(w: usize, h: usize) -> Result<FiniteMetricSpace> {
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y), 1.0));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1), 1.0));
            }
        }
    }
    graph_metric(w * h, &edges)
}

/// Star with `leaves` spokes of geometrically shrinking length.
pub fn shrinking_star(leaves: usize) -> Result<FiniteMetricSpace> {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i, (-(i as f64)).exp2())).collect();
    graph_metric(leaves + 1, &edges)
}
