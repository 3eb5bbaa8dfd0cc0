//! The Bouttier-Di Francesco-Guitter bijection: labeled mobile ↔ rooted
//! pointed bipartite map.
//!
//! Forward: one arc per white-contour corner i toward the successor corner
//! φ(i) = inf{j > i : ℓ(v°_j) = ℓ(v°_i) − 1} (contour extended periodically,
//! ∞ ↦ v*). Arcs form a non-crossing chord diagram of the contour circle, so
//! rotations come from sorting arc ends by cyclic target position within each
//! corner; planarity is certified by Euler's formula, not geometry.
//!
//! The within-corner order, the corner order around a vertex, and the
//! rotation around v* are chirality conventions. They are fixed here to the
//! set validated exhaustively in the test suite (any globally consistent
//! mirror choice codes the same bijection on the reflected sphere).

use thiserror::Error;

use crate::mobile::{
    coding_paths, validate_mobile, CodingPaths, Mobile, MobileViolation, Tree, NO_PARENT,
};
use crate::pmap::{MapContour, MapError, PlanarMap};

#[derive(Debug, Error)]
pub enum BdgError {
    #[error("invalid mobile: {0}")]
    MalformedMobile(#[from] MobileViolation),
    #[error("input map is not bipartite")]
    NotBipartite,
    #[error("input map has negative root orientation")]
    NegativeOrientation,
    #[error("input map is not rooted")]
    NotRooted,
    #[error("map structure: {0}")]
    Structure(MapError),
}

/// φ per corner: successor corner index, or None for v*.
/// O(n) two-pass bucket draining over label values; the naive quadratic scan
/// lives in the tests as the cross-check.
pub fn successors(labels: &[i64]) -> Vec<Option<u32>> {
    let m = labels.len();
    let min = *labels.iter().min().unwrap();
    let max = *labels.iter().max().unwrap();
    let mut open: Vec<Vec<u32>> = vec![Vec::new(); (max - min + 1) as usize];
    let mut phi: Vec<Option<u32>> = vec![None; m];
    let bucket = |l: i64| (l - min) as usize;
    for (i, &l) in labels.iter().enumerate() {
        if l < max {
            for j in open[bucket(l + 1)].drain(..) {
                phi[j as usize] = Some(i as u32);
            }
        }
        open[bucket(l)].push(i as u32);
    }
    // wrap-around pass: remaining corners match in the periodic extension
    for (i, &l) in labels.iter().enumerate() {
        if l < max {
            for j in open[bucket(l + 1)].drain(..) {
                phi[j as usize] = Some(i as u32);
            }
        }
    }
    // only minimal-label corners stay open; they connect to v*
    debug_assert!(open
        .iter()
        .enumerate()
        .all(|(b, v)| b == 0 || v.is_empty()));
    phi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ForwardConv {
    corners_ascending: bool,
    within_ascending: bool,
    vstar_key_high: bool,
    vstar_ascending: bool,
}

/// Convention set validated by the exhaustive tests.
const FORWARD_CONV: ForwardConv = ForwardConv {
    corners_ascending: true,
    within_ascending: true,
    vstar_key_high: true,
    vstar_ascending: false,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct InverseConv {
    rotation_forward: bool,
    face_forward: bool,
}

const INVERSE_CONV: InverseConv = InverseConv {
    rotation_forward: true,
    face_forward: true,
};

pub fn mobile_to_map(mobile: &Mobile) -> Result<(PlanarMap, MapContour), BdgError> {
    let paths = coding_paths(mobile);
    mobile_to_map_from_paths(mobile, &paths)
}

pub fn mobile_to_map_from_paths(
    mobile: &Mobile,
    paths: &CodingPaths,
) -> Result<(PlanarMap, MapContour), BdgError> {
    validate_mobile(mobile)?;
    mobile_to_map_impl(mobile, paths, FORWARD_CONV)
}

fn mobile_to_map_impl(
    mobile: &Mobile,
    paths: &CodingPaths,
    conv: ForwardConv,
) -> Result<(PlanarMap, MapContour), BdgError> {
    let tree = &mobile.tree;
    let n_white = tree.n_white;

    // white vertex id -> map vertex id (white rank); v* gets id n_white
    let mut white_rank = vec![u32::MAX; tree.len()];
    let mut rank = 0u32;
    for v in 0..tree.len() as u32 {
        if tree.is_white(v) {
            white_rank[v as usize] = rank;
            rank += 1;
        }
    }
    let v_star = n_white as u32;

    if tree.len() == 1 {
        // the single-vertex mobile maps to the vertex map
        return Ok((
            PlanarMap::vertex_map(),
            MapContour {
                corner_vertex: vec![0],
                corner_label: vec![0],
            },
        ));
    }

    // corners are the white contour entries without the closing duplicate
    let m = paths.contour_vertex.len() - 1;
    let corner_vertex: Vec<u32> = paths.contour_vertex[..m]
        .iter()
        .map(|&v| white_rank[v as usize])
        .collect();
    let corner_label = &paths.contour_label[..m];
    let phi = successors(corner_label);

    // arc i: half 2i at corner i, half 2i+1 at corner φ(i) (or at v*)
    // collect ends per corner with a cyclic sort key toward the other end
    let mut ends_at: Vec<Vec<(u64, u32)>> = vec![Vec::new(); m];
    let mut vstar_ends: Vec<u32> = Vec::new();
    let key = |from: usize, to: usize| -> u64 { ((to + m - from) % m) as u64 };
    let vstar_key = if conv.vstar_key_high { m as u64 } else { 0 };
    for i in 0..m {
        match phi[i] {
            Some(t) => {
                ends_at[i].push((key(i, t as usize), 2 * i as u32));
                ends_at[t as usize].push((key(t as usize, i), 2 * i as u32 + 1));
            }
            None => {
                ends_at[i].push((vstar_key, 2 * i as u32));
                vstar_ends.push(2 * i as u32 + 1);
            }
        }
    }

    // rotations: per white vertex, concatenate its corners' sorted end lists
    let mut corners_of: Vec<Vec<u32>> = vec![Vec::new(); n_white];
    for (i, &cv) in corner_vertex.iter().enumerate() {
        corners_of[cv as usize].push(i as u32);
    }
    let mut rotations: Vec<Vec<u32>> = Vec::with_capacity(n_white + 1);
    for corners in corners_of.iter_mut() {
        if !conv.corners_ascending {
            corners.reverse();
        }
        let mut rot = Vec::new();
        for &c in corners.iter() {
            let ends = &mut ends_at[c as usize];
            ends.sort_unstable();
            if conv.within_ascending {
                rot.extend(ends.iter().map(|&(_, h)| h));
            } else {
                rot.extend(ends.iter().rev().map(|&(_, h)| h));
            }
        }
        rotations.push(rot);
    }
    if !conv.vstar_ascending {
        vstar_ends.reverse();
    }
    rotations.push(vstar_ends);

    // root edge: corner 0's arc, oriented from v°_{φ(0)} toward the root
    let map = PlanarMap::from_rotations(&rotations, Some(1), v_star)
        .map_err(BdgError::Structure)?;

    let mut contour_vertex: Vec<u32> = corner_vertex.clone();
    contour_vertex.push(corner_vertex[0]);
    let mut contour_label: Vec<i64> = corner_label.to_vec();
    contour_label.push(corner_label[0]);
    Ok((
        map,
        MapContour {
            corner_vertex,
            corner_label,
        },
    ))
}

pub fn map_to_mobile(map: &PlanarMap) -> Result<Mobile, BdgError> {
    map_to_mobile_impl(map, INVERSE_CONV)
}

fn map_to_mobile_impl(map: &PlanarMap, conv: InverseConv) -> Result<Mobile, BdgError> {
    if map.n_edges() == 0 {
        return Ok(Mobile::single_vertex());
    }
    match map.check_structure() {
        Ok(()) => {}
        Err(MapError::NotBipartite) => return Err(BdgError::NotBipartite),
        Err(e) => return Err(BdgError::Structure(e)),
    }
    if !map.is_positive() {
        return Err(BdgError::NegativeOrientation);
    }
    let root_h = map.root_half_edge().ok_or(BdgError::NotRooted)?;

    let dist = map.bfs_from(map.v_star());
    let e_plus = map.head(root_h);
    let base = dist[e_plus as usize] as i64;
    let label = |v: u32| dist[v as usize] as i64 - base;

    let n_half = map.n_half_edges();
    // sigma inverse for the mirrored rotation direction
    let mut sigma_inv = vec![0u32; n_half];
    for h in 0..n_half as u32 {
        sigma_inv[map.sigma(h) as usize] = h;
    }
    let next_rot = |h: u32| -> u32 {
        if conv.rotation_forward {
            map.sigma(h)
        } else {
            sigma_inv[h as usize]
        }
    };
    // face orbit steps: forward σ∘α, backward α∘σ... inverted
    let next_face = |h: u32| -> u32 {
        if conv.face_forward {
            map.sigma(map.alpha(h))
        } else {
            sigma_inv[map.alpha(h) as usize]
        }
    };
    let descending = |h: u32| -> bool { label(map.tail(h)) == label(map.head(h)) + 1 };

    // preorder assembly with an explicit stack
    let mut parent: Vec<u32> = Vec::new();
    let mut depth: Vec<u32> = Vec::new();
    let mut num_children: Vec<u32> = Vec::new();
    let mut labels: Vec<i64> = Vec::new();

    enum Job {
        White { vertex: u32, entry: u32, parent_id: u32, dep: u32, is_root: bool },
        Black { entry: u32, parent_id: u32, dep: u32 },
    }

    let mut stack: Vec<Job> = vec![Job::White {
        vertex: e_plus,
        entry: map.alpha(root_h),
        parent_id: NO_PARENT,
        dep: 0,
        is_root: true,
    }];
    while let Some(job) = stack.pop() {
        match job {
            Job::White { vertex, entry, parent_id, dep, is_root } => {
                let id = parent.len() as u32;
                parent.push(parent_id);
                depth.push(dep);
                num_children.push(0);
                labels.push(label(vertex));
                if parent_id != NO_PARENT {
                    num_children[parent_id as usize] += 1;
                }
                // child blacks: descending halves around the vertex in
                // rotation order; the root includes its entry arc, a
                // non-root vertex's entry arc is its parent edge
                let mut child_halves: Vec<u32> = Vec::new();
                if is_root && descending(entry) {
                    child_halves.push(entry);
                }
                let mut h = next_rot(entry);
                while h != entry {
                    if descending(h) {
                        child_halves.push(h);
                    }
                    h = next_rot(h);
                }
                // push in reverse so the stack pops them in order
                for &ch in child_halves.iter().rev() {
                    stack.push(Job::Black {
                        entry: ch,
                        parent_id: id,
                        dep: dep + 1,
                    });
                }
            }
            Job::Black { entry, parent_id, dep } => {
                let id = parent.len() as u32;
                parent.push(parent_id);
                depth.push(dep);
                num_children.push(0);
                labels.push(0);
                num_children[parent_id as usize] += 1;
                // white children: the other descending halves on this face,
                // in face order from the entry
                let mut child_halves: Vec<u32> = Vec::new();
                let mut h = next_face(entry);
                while h != entry {
                    if descending(h) {
                        child_halves.push(h);
                    }
                    h = next_face(h);
                }
                for &ch in child_halves.iter().rev() {
                    stack.push(Job::White {
                        vertex: map.tail(ch),
                        entry: ch,
                        parent_id: id,
                        dep: dep + 1,
                        is_root: false,
                    });
                }
            }
        }
    }

    let tree = Tree::from_preorder_parts(parent, depth, num_children);
    let mobile = Mobile { tree, labels };
    validate_mobile(&mobile)?;
    Ok(mobile)
}

/// Structured outcome of the Prop.-3.1-style checks on a (mobile, map) pair
/// produced by the forward construction.
#[derive(Debug, Clone)]
pub struct BijectionReport {
    pub violations: Vec<String>,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_faces: usize,
}

impl BijectionReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_bijection_invariants(
    mobile: &Mobile,
    map: &PlanarMap,
    _contour: &MapContour,
) -> BijectionReport {
    let mut violations = Vec::new();
    let n_white = mobile.n_white();
    let n_black = mobile.n_black();
    let tree_size = mobile.tree.len();

    let n_vertices = map.n_vertices();
    let n_edges = map.n_edges();
    let n_faces = map.face_count();

    if tree_size == 1 {
        if n_vertices != 1 || n_edges != 0 || n_faces != 1 {
            violations.push("single-vertex mobile must map to the vertex map".into());
        }
        return BijectionReport {
            violations,
            n_vertices,
            n_edges,
            n_faces,
        };
    }

    // counts: V = n_white + 1, E = Σ_black (k_v + 1) = #T − 1, F = n_black
    if n_vertices != n_white + 1 {
        violations.push(format!("vertex count {} != n_white+1 {}", n_vertices, n_white + 1));
    }
    if n_edges != tree_size - 1 {
        violations.push(format!("edge count {} != #T−1 {}", n_edges, tree_size - 1));
    }
    if n_faces != n_black {
        violations.push(format!("face count {} != n_black {}", n_faces, n_black));
    }
    let chi = n_vertices as i64 - n_edges as i64 + n_faces as i64;
    if chi != 2 {
        violations.push(format!("Euler characteristic {chi} != 2"));
    }

    // face degrees must match {2(k_v+1)} over black vertices as multisets
    let mut face_degrees: Vec<u32> = map.faces().degrees;
    face_degrees.sort_unstable();
    let mut black_degrees: Vec<u32> = (0..tree_size as u32)
        .filter(|&v| !mobile.tree.is_white(v))
        .map(|v| 2 * (mobile.tree.num_children[v as usize] + 1))
        .collect();
    black_degrees.sort_unstable();
    if face_degrees != black_degrees {
        violations.push("face degree multiset != 2(k_v+1) multiset".into());
    }

    // distance identity: d(v*, v) = ℓ(v) − min ℓ + 1 for every white vertex
    let dist = map.bfs_from(map.v_star());
    let min_label = mobile.min_label();
    let mut rank = 0u32;
    for v in 0..tree_size as u32 {
        if !mobile.tree.is_white(v) {
            continue;
        }
        let expect = mobile.labels[v as usize] - min_label + 1;
        if dist[rank as usize] as i64 != expect {
            violations.push(format!(
                "distance identity fails at white vertex {v}: d = {}, ℓ−min+1 = {expect}",
                dist[rank as usize]
            ));
            break;
        }
        rank += 1;
    }

    // positivity of the root orientation
    if !map.is_positive() {
        violations.push("root orientation is not positive".into());
    }

    // Δ = d(e−, v*) equals −min ℓ (the v* = e− case gives 0 = −min ℓ)
    if let Some(h) = map.root_half_edge() {
        let delta = dist[map.tail(h) as usize] as i64;
        if delta != -min_label {
            violations.push(format!("Δ = {delta} != −min ℓ = {}", -min_label));
        }
    }

    BijectionReport {
        violations,
        n_vertices,
        n_edges,
        n_faces,
    }
}
