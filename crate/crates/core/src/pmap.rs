//! Rooted pointed bipartite maps in half-edge (rotation system)
//! representation, and their graph observables.
//!
//! Half-edge h pairs with alpha(h) = h ^ 1; sigma gives the next half-edge
//! counterclockwise around its tail vertex; faces are the orbits of
//! sigma∘alpha. Planarity is certified by Euler's formula on orbit counts.

use thiserror::Error;

use crate::rmq::RangeMinI64;
use crate::rng::Rng64;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarMap {
    sigma: Vec<u32>,
    vert: Vec<u32>,
    root_half_edge: Option<u32>,
    v_star: u32,
    n_vertices: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("sigma is not a permutation")]
    BadSigma,
    #[error("graph is not connected")]
    Disconnected,
    #[error("map is not bipartite")]
    NotBipartite,
    #[error("root edge has negative orientation")]
    NegativeOrientation,
    #[error("Euler characteristic {0} != 2")]
    NotPlanar(i64),
    #[error("malformed input: {0}")]
    Malformed(&'static str),
}

#[derive(Debug, Clone)]
pub struct Faces {
    /// face id per half-edge
    pub face_of: Vec<u32>,
    /// face degree (number of edge sides) per face id
    pub degrees: Vec<u32>,
    /// one representative half-edge per face, the orbit entry point
    pub representative: Vec<u32>,
}

impl PlanarMap {
    /// The vertex map †: one vertex (v*), no edges, one face of degree 0.
    pub fn vertex_map() -> PlanarMap {
        PlanarMap {
            sigma: Vec::new(),
            vert: Vec::new(),
            root_half_edge: None,
            v_star: 0,
            n_vertices: 1,
        }
    }

    /// Builds a map from per-vertex rotations (counterclockwise half-edge
    /// lists). `vert` is implied by the rotation ownership.
    pub fn from_rotations(
        rotations: &[Vec<u32>],
        root_half_edge: Option<u32>,
        v_star: u32,
    ) -> Result<PlanarMap, MapError> {
        let n_half: usize = rotations.iter().map(|r| r.len()).sum();
        if n_half % 2 != 0 {
            return Err(MapError::Malformed("odd number of half-edges"));
        }
        let mut sigma = vec![u32::MAX; n_half];
        let mut vert = vec![u32::MAX; n_half];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                if (h as usize) >= n_half || vert[h as usize] != u32::MAX {
                    return Err(MapError::Malformed("duplicate or out-of-range half-edge"));
                }
                vert[h as usize] = v as u32;
                sigma[h as usize] = rot[(i + 1) % rot.len()];
            }
        }
        if sigma.iter().any(|&s| s == u32::MAX) {
            return Err(MapError::BadSigma);
        }
        Ok(PlanarMap {
            sigma,
            vert,
            root_half_edge,
            v_star,
            n_vertices: rotations.len() as u32,
        })
    }

    #[inline]
    pub fn alpha(&self, h: u32) -> u32 {
        h ^ 1
    }

    #[inline]
    pub fn sigma(&self, h: u32) -> u32 {
        self.sigma[h as usize]
    }

    #[inline]
    pub fn tail(&self, h: u32) -> u32 {
        self.vert[h as usize]
    }

    #[inline]
    pub fn head(&self, h: u32) -> u32 {
        self.vert[(h ^ 1) as usize]
    }

    pub fn n_half_edges(&self) -> usize {
        self.sigma.len()
    }

    pub fn n_edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices as usize
    }

    pub fn v_star(&self) -> u32 {
        self.v_star
    }

    pub fn root_half_edge(&self) -> Option<u32> {
        self.root_half_edge
    }

    /// Origin of the root edge (e−).
    pub fn root_origin(&self) -> Option<u32> {
        self.root_half_edge.map(|h| self.tail(h))
    }

    /// Target of the root edge (e+).
    pub fn root_target(&self) -> Option<u32> {
        self.root_half_edge.map(|h| self.head(h))
    }

    pub fn sigma_slice(&self) -> &[u32] {
        &self.sigma
    }

    pub fn vert_slice(&self) -> &[u32] {
        &self.vert
    }

    /// Faces as orbits of sigma∘alpha.
    pub fn faces(&self) -> Faces {
        let n = self.sigma.len();
        let mut face_of = vec![u32::MAX; n];
        let mut degrees = Vec::new();
        let mut representative = Vec::new();
        for h0 in 0..n as u32 {
            if face_of[h0 as usize] != u32::MAX {
                continue;
            }
            let id = degrees.len() as u32;
            let mut h = h0;
            let mut deg = 0u32;
            loop {
                face_of[h as usize] = id;
                deg += 1;
                h = self.sigma(self.alpha(h));
                if h == h0 {
                    break;
                }
            }
            degrees.push(deg);
            representative.push(h0);
        }
        Faces {
            face_of,
            degrees,
            representative,
        }
    }

    pub fn face_count(&self) -> usize {
        if self.sigma.is_empty() {
            1 // the vertex map bounds a single degree-0 face
        } else {
            self.faces().degrees.len()
        }
    }

    /// Walks the face orbit starting at h: h, σα(h), σα(σα(h)), ...
    pub fn face_cycle(&self, h: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut cur = h;
        loop {
            out.push(cur);
            cur = self.sigma(self.alpha(cur));
            if cur == h {
                break;
            }
        }
        out
    }

    /// BFS distances from v; every vertex must be reachable.
    pub fn bfs_from(&self, v: u32) -> Vec<u32> {
        let n = self.n_vertices();
        let mut dist = vec![u32::MAX; n];
        dist[v as usize] = 0;
        if self.sigma.is_empty() {
            return dist;
        }
        // first half-edge per vertex
        let mut first = vec![u32::MAX; n];
        for h in 0..self.sigma.len() as u32 {
            let t = self.tail(h) as usize;
            if first[t] == u32::MAX {
                first[t] = h;
            }
        }
        let mut queue = std::collections::VecDeque::with_capacity(n);
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize];
            let h0 = first[u as usize];
            if h0 == u32::MAX {
                continue;
            }
            let mut h = h0;
            loop {
                let w = self.head(h);
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
                h = self.sigma(h);
                if h == h0 {
                    break;
                }
            }
        }
        dist
    }

    /// Structural validation: permutation sigma, connectivity, bipartiteness
    /// (via 2-coloring), Euler characteristic 2.
    pub fn check_structure(&self) -> Result<(), MapError> {
        let n = self.sigma.len();
        if n == 0 {
            return if self.n_vertices == 1 {
                Ok(())
            } else {
                Err(MapError::Malformed("edgeless map must be the vertex map"))
            };
        }
        let mut seen = vec![false; n];
        for h in 0..n as u32 {
            let s = self.sigma(h);
            if s as usize >= n || seen[s as usize] {
                return Err(MapError::BadSigma);
            }
            seen[s as usize] = true;
            if self.tail(s) != self.tail(h) {
                return Err(MapError::BadSigma);
            }
        }
        let dist = self.bfs_from(self.v_star);
        if dist.iter().any(|&d| d == u32::MAX) {
            return Err(MapError::Disconnected);
        }
        // bipartite: every edge must change 2-coloring class
        for h in (0..n as u32).step_by(2) {
            if dist[self.tail(h) as usize] % 2 == dist[self.head(h) as usize] % 2 {
                return Err(MapError::NotBipartite);
            }
        }
        let f = self.face_count() as i64;
        let chi = self.n_vertices() as i64 - self.n_edges() as i64 + f;
        if chi != 2 {
            return Err(MapError::NotPlanar(chi));
        }
        Ok(())
    }

    /// d(e+, v*) = d(e−, v*) + 1.
    pub fn is_positive(&self) -> bool {
        match self.root_half_edge {
            None => true,
            Some(h) => {
                let dist = self.bfs_from(self.v_star);
                dist[self.head(h) as usize] == dist[self.tail(h) as usize] + 1
            }
        }
    }

    pub fn profile(&self) -> DistanceProfile {
        let dist = self.bfs_from(self.v_star);
        let radius = *dist.iter().max().unwrap();
        let mut counts = vec![0u64; radius as usize + 1];
        for &d in &dist {
            counts[d as usize] += 1;
        }
        let delta = match self.root_half_edge {
            None => 0,
            Some(h) => dist[self.tail(h) as usize],
        };
        DistanceProfile {
            counts,
            n: self.n_vertices(),
            radius,
            delta,
        }
    }
}

/// ρ(k) = #{v : d(v*, v) = k}, with the radius and Δ = d(e−, v*).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    pub counts: Vec<u64>,
    pub n: usize,
    pub radius: u32,
    pub delta: u32,
}

impl DistanceProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// White contour retained from the BDG construction: corner → (vertex id in
/// the map, label). Length #T (includes the closing root entry).
#[derive(Debug, Clone)]
pub struct MapContour {
    pub corner_vertex: Vec<u32>,
    pub corner_label: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairDistance {
    pub i: usize,
    pub j: usize,
    /// exact BFS distance d_n(i, j)
    pub d: u32,
    /// label bound d⁰_n(i, j) = Λ_i + Λ_j − 2 min_{[i∧j, i∨j]} Λ + 2
    pub d0: i64,
}

/// Exact graph distance and label upper bound for contour index pairs.
/// Pairs are grouped by source vertex so one BFS serves many targets.
pub fn pair_distances(
    map: &PlanarMap,
    contour: &MapContour,
    pairs: &[(usize, usize)],
) -> Vec<PairDistance> {
    let rmq = RangeMinI64::build(&contour.corner_label);
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by_key(|&k| contour.corner_vertex[pairs[k].0]);
    let mut out = vec![
        PairDistance {
            i: 0,
            j: 0,
            d: 0,
            d0: 0
        };
        pairs.len()
    ];
    let mut cached_src = u32::MAX;
    let mut dist: Vec<u32> = Vec::new();
    for k in order {
        let (i, j) = pairs[k];
        let vi = contour.corner_vertex[i];
        let vj = contour.corner_vertex[j];
        if vi != cached_src {
            dist = map.bfs_from(vi);
            cached_src = vi;
        }
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let min_between = rmq.query(lo, hi);
        let d0 = contour.corner_label[i] + contour.corner_label[j] - 2 * min_between + 2;
        out[k] = PairDistance {
            i,
            j,
            d: dist[vj as usize],
            d0,
        };
    }
    out
}

/// Stratified contour index pairs: half uniform, half near-diagonal, so the
/// d ≤ d⁰ bound is exercised in both regimes.
pub fn stratified_pairs(len: usize, count: usize, rng: &mut Rng64) -> Vec<(usize, usize)> {
    assert!(len >= 2);
    let mut pairs = Vec::with_capacity(count);
    for t in 0..count {
        if t % 2 == 0 {
            pairs.push((rng.random_range(0..len), rng.random_range(0..len)));
        } else {
            let i = rng.random_range(0..len);
            let off = rng.random_range(1..=32.min(len - 1));
            pairs.push((i, (i + off) % len));
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two vertices joined by one edge, rooted from v* toward the other
    /// vertex (the BDG image of the two-vertex mobile).
    fn two_vertex_map() -> PlanarMap {
        // vertex 0 = root white, vertex 1 = v*; half-edge 0 at tail 0,
        // half-edge 1 at tail 1; root half-edge = 1 (e− = v*, e+ = 0)
        PlanarMap::from_rotations(&[vec![0], vec![1]], Some(1), 1).unwrap()
    }

    #[test]
    fn vertex_map_observables() {
        let dagger = PlanarMap::vertex_map();
        assert_eq!(dagger.bfs_from(0), vec![0]);
        let p = dagger.profile();
        assert_eq!(p.counts, vec![1]);
        assert_eq!(p.radius, 0);
        assert_eq!(p.delta, 0);
        assert_eq!(dagger.face_count(), 1);
        dagger.check_structure().unwrap();
    }

    #[test]
    fn two_vertex_map_observables() {
        let m = two_vertex_map();
        m.check_structure().unwrap();
        assert_eq!(m.bfs_from(1), vec![1, 0]);
        let p = m.profile();
        assert_eq!(p.counts, vec![1, 1]);
        assert_eq!(p.radius, 1);
        assert_eq!(p.delta, 0); // root origin is v* itself
        assert!(m.is_positive());
        // one face of degree 2
        let faces = m.faces();
        assert_eq!(faces.degrees, vec![2]);
    }

    #[test]
    fn structure_checks_reject_bad_maps() {
        // two-vertex map with both root directions: one is negative
        let neg = PlanarMap::from_rotations(&[vec![0], vec![1]], Some(0), 1).unwrap();
        assert!(!neg.is_positive());

        // a triangle is not bipartite: vertices 0,1,2 with edges 01, 12, 20
        let tri = PlanarMap::from_rotations(
            &[vec![0, 5], vec![1, 2], vec![3, 4]],
            Some(0),
            0,
        )
        .unwrap();
        assert_eq!(tri.check_structure(), Err(MapError::NotBipartite));
    }

    #[test]
    fn pair_distance_trivial_cases() {
        let m = two_vertex_map();
        let contour = MapContour {
            corner_vertex: vec![0, 0],
            corner_label: vec![0, 0],
        };
        let got = pair_distances(&m, &contour, &[(0, 0), (0, 1)]);
        // i = j: d = 0, d0 = Λ+Λ−2Λ+2 = 2
        assert_eq!(got[0].d, 0);
        assert_eq!(got[0].d0, 2);
        assert!(got[1].d as i64 <= got[1].d0);
    }
}
