//! Sampled parameter spaces: vertices with adjacency and a topological dimension.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite sample of a parameter space `X`.
///
/// `dim` is the topological dimension of the sampled space (circle 1, sphere 2);
/// it enters the rank condition `n ≤ 2r − 2` for the constructive sphere steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledComplex {
    pub kind: String,
    pub dim: usize,
    /// Coordinates of each vertex: an angle for circles, a unit 3-vector for spheres.
    pub points: Vec<Vec<f64>>,
    /// Undirected edges `(a, b)` with `a < b`.
    pub edges: Vec<(usize, usize)>,
}

impl SampledComplex {
    pub fn point() -> Self {
        SampledComplex {
            kind: "point".into(),
            dim: 0,
            points: vec![vec![]],
            edges: vec![],
        }
    }

    /// `n` equally spaced angles `2πk/n`, joined cyclically.
    pub fn circle(n: usize) -> Self {
        let points = (0..n).map(|k| vec![std::f64::consts::TAU * k as f64 / n as f64]).collect();
        let mut edges = BTreeSet::new();
        if n >= 2 {
            for k in 0..n {
                let (a, b) = (k, (k + 1) % n);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        SampledComplex {
            kind: "circle".into(),
            dim: 1,
            points,
            edges: edges.into_iter().collect(),
        }
    }

    /// Octahedron with each face cut into `level²` triangles, pushed onto the unit sphere.
    ///
    /// Vertex 0 is the north pole `(0, 0, 1)`; the south pole is always a vertex.
    pub fn sphere(level: usize) -> Self {
        let level = level.max(1);
        let axes: [[f64; 3]; 6] = [
            [0., 0., 1.],
            [1., 0., 0.],
            [0., 1., 0.],
            [-1., 0., 0.],
            [0., -1., 0.],
            [0., 0., -1.],
        ];
        let faces = [
            (0, 1, 2),
            (0, 2, 3),
            (0, 3, 4),
            (0, 4, 1),
            (5, 2, 1),
            (5, 3, 2),
            (5, 4, 3),
            (5, 1, 4),
        ];
        let mut index: BTreeMap<[i64; 3], usize> = BTreeMap::new();
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut edges = BTreeSet::new();
        let mut vertex = |p: [f64; 3], points: &mut Vec<Vec<f64>>| -> usize {
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let q = [p[0] / n, p[1] / n, p[2] / n];
            let key = q.map(|x| (x * 1e9).round() as i64);
            *index.entry(key).or_insert_with(|| {
                points.push(q.to_vec());
                points.len() - 1
            })
        };
        for &(a, b, c) in &faces {
            let (a, b, c) = (axes[a], axes[b], axes[c]);
            let at = |i: usize, j: usize| -> [f64; 3] {
                let (s, t) = (i as f64 / level as f64, j as f64 / level as f64);
                [0, 1, 2].map(|k| a[k] + (b[k] - a[k]) * s + (c[k] - a[k]) * t)
            };
            let mut ids = vec![vec![0usize; level + 1]; level + 1];
            for (i, row) in ids.iter_mut().enumerate() {
                for (j, id) in row.iter_mut().take(level + 1 - i).enumerate() {
                    *id = vertex(at(i, j), &mut points);
                }
            }
            for i in 0..level {
                for j in 0..level - i {
                    let tri = [ids[i][j], ids[i + 1][j], ids[i][j + 1]];
                    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                        edges.insert((tri[x].min(tri[y]), tri[x].max(tri[y])));
                    }
                }
            }
        }
        SampledComplex {
            kind: "sphere".into(),
            dim: 2,
            points,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Range("parameter complex has no vertices".into()));
        }
        for &(a, b) in &self.edges {
            if a >= b || b >= self.points.len() {
                return Err(Error::Range(format!("bad edge ({a}, {b})")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_a_cycle() {
        let c = SampledComplex::circle(17);
        assert_eq!(c.len(), 17);
        assert_eq!(c.edges.len(), 17);
        assert!((0..17).all(|v| c.neighbors(v).len() == 2));
    }

    #[test]
    fn sphere_euler_characteristic() {
        for level in 1..5 {
            let s = SampledComplex::sphere(level);
            let faces = 8 * level * level;
            let chi = s.len() as i64 - s.edges.len() as i64 + faces as i64;
            assert_eq!(chi, 2, "level {level}");
            assert!(s.points.iter().any(|p| (p[2] + 1.0).abs() < 1e-12));
            assert_eq!(s.points[0], vec![0.0, 0.0, 1.0]);
        }
    }
}
