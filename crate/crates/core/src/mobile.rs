//! Mobiles: alternating two-type Galton-Watson trees (white offspring μ0,
//! black offspring μ1) with discrete-bridge labels on white vertices, their
//! five coding processes, and size conditioning.
//!
//! Trees use a flat preorder layout (no per-node allocation); vertex ids are
//! preorder, so white vertices in id order are exactly the lexicographic
//! white order used by the height/label processes.

use thiserror::Error;

use crate::bridge::BridgeSampler;
use crate::rng::Rng64;
use crate::weights::WeightModel;

pub const DEFAULT_VERTEX_BUDGET: usize = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("vertex budget exceeded at {vertices} vertices")]
    BudgetExceeded { vertices: usize },
    #[error("white-vertex cap exceeded at {whites} white vertices")]
    WhiteCapExceeded { whites: usize },
    #[error("retry limit exceeded after {attempts} attempts")]
    RetryLimitExceeded { attempts: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct TreeBudget {
    pub max_vertices: usize,
    /// Early-abort cap on white vertices (used by size conditioning).
    pub max_white: Option<usize>,
}

impl Default for TreeBudget {
    fn default() -> Self {
        TreeBudget {
            max_vertices: DEFAULT_VERTEX_BUDGET,
            max_white: None,
        }
    }
}

impl TreeBudget {
    pub fn with_max_vertices(max_vertices: usize) -> Self {
        TreeBudget {
            max_vertices,
            max_white: None,
        }
    }
}

/// Plane tree in preorder layout. White vertices sit at even depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    pub parent: Vec<u32>, // u32::MAX at the root
    pub depth: Vec<u32>,
    pub num_children: Vec<u32>,
    child_start: Vec<u32>,
    children: Vec<u32>,
    pub n_white: usize,
    pub n_black: usize,
}

pub const NO_PARENT: u32 = u32::MAX;

impl Tree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn is_white(&self, v: u32) -> bool {
        self.depth[v as usize] % 2 == 0
    }

    #[inline]
    pub fn children_of(&self, v: u32) -> &[u32] {
        let s = self.child_start[v as usize] as usize;
        let k = self.num_children[v as usize] as usize;
        &self.children[s..s + k]
    }

    pub fn single_vertex() -> Tree {
        Tree {
            parent: vec![NO_PARENT],
            depth: vec![0],
            num_children: vec![0],
            child_start: vec![0],
            children: Vec::new(),
            n_white: 1,
            n_black: 0,
        }
    }

    /// Builds a tree from preorder parent/depth/child-count arrays.
    pub fn from_preorder_parts(parent: Vec<u32>, depth: Vec<u32>, num_children: Vec<u32>) -> Tree {
        let n = parent.len();
        let mut child_start = vec![0u32; n];
        let mut acc = 0u32;
        for v in 0..n {
            child_start[v] = acc;
            acc += num_children[v];
        }
        let mut fill = child_start.clone();
        let mut children = vec![0u32; acc as usize];
        for v in 1..n {
            let p = parent[v] as usize;
            children[fill[p] as usize] = v as u32;
            fill[p] += 1;
        }
        let n_white = depth.iter().filter(|&&d| d % 2 == 0).count();
        Tree {
            n_white,
            n_black: n - n_white,
            parent,
            depth,
            num_children,
            child_start,
            children,
        }
    }
}

/// Iterative two-type Galton-Watson sampling: white vertices draw child
/// counts from μ0, black from μ1. Aborts with a budget signal when the
/// realized tree exceeds the caps (expected frequently at criticality).
pub fn sample_tree(
    model: &WeightModel,
    rng: &mut Rng64,
    budget: TreeBudget,
) -> Result<Tree, SampleError> {
    assert!(budget.max_vertices >= 1 && budget.max_vertices < u32::MAX as usize);
    let mut parent: Vec<u32> = Vec::new();
    let mut depth: Vec<u32> = Vec::new();
    let mut num_children: Vec<u32> = Vec::new();
    let mut whites = 0usize;
    // stack of (parent id, depth); pop order is plane order
    let mut stack: Vec<(u32, u32)> = vec![(NO_PARENT, 0)];
    while let Some((par, dep)) = stack.pop() {
        let id = parent.len();
        if id >= budget.max_vertices {
            return Err(SampleError::BudgetExceeded { vertices: id + 1 });
        }
        if dep % 2 == 0 {
            whites += 1;
            if let Some(cap) = budget.max_white {
                if whites > cap {
                    return Err(SampleError::WhiteCapExceeded { whites });
                }
            }
        }
        let k = if dep % 2 == 0 {
            model.sample_mu0(rng)
        } else {
            model.sample_mu1(rng)
        } as usize;
        if id + stack.len() + k >= budget.max_vertices + 1 {
            return Err(SampleError::BudgetExceeded {
                vertices: id + stack.len() + k,
            });
        }
        parent.push(par);
        depth.push(dep);
        num_children.push(k as u32);
        for _ in 0..k {
            stack.push((id as u32, dep + 1));
        }
    }
    Ok(Tree::from_preorder_parts(parent, depth, num_children))
}

/// A labeled mobile: integer labels on white vertices, root label 0, and the
/// cyclic constraint ℓ(v_(j)) ≥ ℓ(v_(j−1)) − 1 around every black vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobile {
    pub tree: Tree,
    /// Indexed by vertex id; meaningful only for white vertices.
    pub labels: Vec<i64>,
}

impl Mobile {
    pub fn n_white(&self) -> usize {
        self.tree.n_white
    }

    pub fn n_black(&self) -> usize {
        self.tree.n_black
    }

    pub fn label(&self, v: u32) -> i64 {
        debug_assert!(self.tree.is_white(v));
        self.labels[v as usize]
    }

    pub fn single_vertex() -> Mobile {
        Mobile {
            tree: Tree::single_vertex(),
            labels: vec![0],
        }
    }

    pub fn min_label(&self) -> i64 {
        (0..self.tree.len() as u32)
            .filter(|&v| self.tree.is_white(v))
            .map(|v| self.labels[v as usize])
            .min()
            .unwrap()
    }

    pub fn max_label(&self) -> i64 {
        (0..self.tree.len() as u32)
            .filter(|&v| self.tree.is_white(v))
            .map(|v| self.labels[v as usize])
            .max()
            .unwrap()
    }
}

/// Labels each black vertex's children by an independent bridge of length
/// k+1 added to the parent label. Root label 0.
pub fn assign_labels(tree: Tree, sampler: &dyn BridgeSampler, rng: &mut Rng64) -> Mobile {
    let n = tree.len();
    let mut labels = vec![0i64; n];
    for v in 0..n as u32 {
        if tree.is_white(v) {
            continue;
        }
        let base = labels[tree.parent[v as usize] as usize];
        let kids = tree.children_of(v);
        let bridge = sampler.sample(kids.len() + 1, rng);
        for (j, &ch) in kids.iter().enumerate() {
            labels[ch as usize] = base + bridge.values[j + 1];
        }
    }
    Mobile { tree, labels }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MobileViolation {
    #[error("root label {0} != 0")]
    RootLabel(i64),
    #[error("cyclic label constraint violated at black vertex {black}")]
    CyclicConstraint { black: u32 },
    #[error("contour malformed: {0}")]
    BadContour(&'static str),
}

/// Checks the mobile conditions (a) root label 0 and (b) the cyclic −1
/// constraint around every black vertex.
pub fn validate_mobile(m: &Mobile) -> Result<(), MobileViolation> {
    if m.labels[0] != 0 {
        return Err(MobileViolation::RootLabel(m.labels[0]));
    }
    for v in 0..m.tree.len() as u32 {
        if m.tree.is_white(v) {
            continue;
        }
        let parent_label = m.labels[m.tree.parent[v as usize] as usize];
        let mut prev = parent_label;
        for &ch in m.tree.children_of(v) {
            let cur = m.labels[ch as usize];
            if cur < prev - 1 {
                return Err(MobileViolation::CyclicConstraint { black: v });
            }
            prev = cur;
        }
        if parent_label < prev - 1 {
            return Err(MobileViolation::CyclicConstraint { black: v });
        }
    }
    Ok(())
}

/// Full (two-color) contour: 2#T − 1 entries of vertex ids; consecutive
/// depths differ by exactly 1. This is the record that determines the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullContour {
    pub vertices: Vec<u32>,
    pub depths: Vec<u32>,
}

pub fn full_contour(tree: &Tree) -> FullContour {
    let n = tree.len();
    let total = 2 * n - 1;
    let mut vertices = Vec::with_capacity(total);
    let mut depths = Vec::with_capacity(total);
    let mut next_child = vec![0u32; n];
    let mut cur = 0u32;
    vertices.push(cur);
    depths.push(0);
    loop {
        let c = cur as usize;
        if next_child[c] < tree.num_children[c] {
            let ch = tree.children_of(cur)[next_child[c] as usize];
            next_child[c] += 1;
            cur = ch;
        } else if cur == 0 {
            break;
        } else {
            cur = tree.parent[c];
        }
        vertices.push(cur);
        depths.push(tree.depth[cur as usize]);
    }
    debug_assert_eq!(vertices.len(), total);
    FullContour { vertices, depths }
}

/// The five coding sequences of a mobile.
///
/// S is the Lukasiewicz path of the white tree (S_{i+1} − S_i + 1 = number of
/// white grandchildren of the i-th white vertex in lexicographic order),
/// H and L the height/label processes over the same order, and (C, Λ) the
/// white-contour half-generations and labels, of length #T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingPaths {
    pub lukasiewicz: Vec<i64>,
    pub height: Vec<u32>,
    pub label: Vec<i64>,
    pub contour_height: Vec<u32>,
    pub contour_label: Vec<i64>,
    /// White vertex id per contour entry (needed by the BDG construction).
    pub contour_vertex: Vec<u32>,
}

/// H_n = #{k < n : S_k = min_{k ≤ j ≤ n} S_j}, computed with the standard
/// monotone stack in O(n).
pub fn height_from_lukasiewicz(s: &[i64]) -> Vec<u32> {
    let n = s.len() - 1; // S has n+1 entries for n white vertices
    let mut heights = Vec::with_capacity(n);
    let mut stack: Vec<i64> = Vec::new();
    for i in 0..n {
        heights.push(stack.len() as u32);
        // candidates for the next index: current stack plus i itself,
        // filtered by value ≤ S_{i+1}
        let next = s[i + 1];
        stack.push(s[i]);
        while stack.last().is_some_and(|&v| v > next) {
            stack.pop();
        }
    }
    heights
}

pub fn coding_paths(m: &Mobile) -> CodingPaths {
    let tree = &m.tree;
    let n = tree.len();
    let n_white = tree.n_white;

    let mut lukasiewicz = Vec::with_capacity(n_white + 1);
    let mut height = Vec::with_capacity(n_white);
    let mut label = Vec::with_capacity(n_white);
    lukasiewicz.push(0i64);
    let mut s = 0i64;
    for v in 0..n as u32 {
        if !tree.is_white(v) {
            continue;
        }
        let grandchildren: u32 = tree
            .children_of(v)
            .iter()
            .map(|&b| tree.num_children[b as usize])
            .sum();
        s += grandchildren as i64 - 1;
        lukasiewicz.push(s);
        height.push(tree.depth[v as usize] / 2);
        label.push(m.labels[v as usize]);
    }
    debug_assert_eq!(*lukasiewicz.last().unwrap(), -1);

    // the direct heights and the Lukasiewicz formula must agree
    let from_s = height_from_lukasiewicz(&lukasiewicz);
    assert_eq!(from_s, height, "height process disagrees with (heightLuka)");

    let fc = full_contour(tree);
    let m_len = n; // white contour entries: #T
    let mut contour_height = Vec::with_capacity(m_len);
    let mut contour_label = Vec::with_capacity(m_len);
    let mut contour_vertex = Vec::with_capacity(m_len);
    for (i, &v) in fc.vertices.iter().enumerate() {
        if i % 2 == 0 {
            contour_height.push(fc.depths[i] / 2);
            contour_label.push(m.labels[v as usize]);
            contour_vertex.push(v);
        }
    }
    debug_assert_eq!(contour_height.len(), m_len);

    CodingPaths {
        lukasiewicz,
        height,
        label,
        contour_height,
        contour_label,
        contour_vertex,
    }
}

/// Rebuilds the mobile from the full contour record (vertex depths, which
/// form a ±1 path, plus labels at white entries). Vertex numbering comes out
/// in preorder, so a round trip reproduces the mobile exactly.
pub fn mobile_from_full_contour(
    depths: &[u32],
    labels_at: &[i64],
) -> Result<Mobile, MobileViolation> {
    if depths.is_empty() || depths.len() % 2 == 0 {
        return Err(MobileViolation::BadContour("length must be odd"));
    }
    if depths[0] != 0 || *depths.last().unwrap() != 0 {
        return Err(MobileViolation::BadContour("must start and end at the root"));
    }
    if depths.len() != labels_at.len() {
        return Err(MobileViolation::BadContour("label record length mismatch"));
    }
    let mut parent = vec![NO_PARENT];
    let mut depth = vec![0u32];
    let mut num_children = vec![0u32];
    let mut labels = vec![labels_at[0]];
    let mut path: Vec<u32> = vec![0];
    for i in 1..depths.len() {
        let d = depths[i];
        let prev = depths[i - 1];
        if d == prev + 1 {
            let cur = *path.last().unwrap();
            let id = parent.len() as u32;
            parent.push(cur);
            depth.push(d);
            num_children.push(0);
            num_children[cur as usize] += 1;
            labels.push(if d % 2 == 0 { labels_at[i] } else { 0 });
            path.push(id);
        } else if d + 1 == prev {
            path.pop();
            let cur = *path.last().ok_or(MobileViolation::BadContour(
                "descended below the root",
            ))?;
            if d % 2 == 0 && labels[cur as usize] != labels_at[i] {
                return Err(MobileViolation::BadContour("inconsistent labels on revisit"));
            }
        } else {
            return Err(MobileViolation::BadContour("depth steps must be ±1"));
        }
    }
    if path.len() != 1 {
        return Err(MobileViolation::BadContour("contour does not close"));
    }
    let tree = Tree::from_preorder_parts(parent, depth, num_children);
    Ok(Mobile { tree, labels })
}

/// Size conditioning modes for the number of white vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeCondition {
    /// First mobile in an i.i.d. forest with at least n white vertices.
    AtLeast(usize),
    /// Rejection until #T° = n exactly.
    Exactly(usize),
    /// Rejection until #T° ∈ [n, (1+δ)n]. Experiment pipelines default to
    /// δ = the spec's window; reports must carry the approximation note.
    Window { n: usize, delta: f64 },
}

impl SizeCondition {
    pub fn target(&self) -> usize {
        match self {
            SizeCondition::AtLeast(n) | SizeCondition::Exactly(n) => *n,
            SizeCondition::Window { n, .. } => *n,
        }
    }

    fn white_cap(&self) -> Option<usize> {
        match self {
            SizeCondition::AtLeast(_) => None,
            SizeCondition::Exactly(n) => Some(*n),
            SizeCondition::Window { n, delta } => {
                Some(((*n as f64) * (1.0 + delta)).floor() as usize)
            }
        }
    }

    fn accepts(&self, whites: usize) -> bool {
        match self {
            SizeCondition::AtLeast(n) => whites >= *n,
            SizeCondition::Exactly(n) => whites == *n,
            SizeCondition::Window { n, delta } => {
                whites >= *n && whites as f64 <= (*n as f64) * (1.0 + delta)
            }
        }
    }
}

#[derive(Debug)]
pub struct ConditionedMobile {
    pub mobile: Mobile,
    pub attempts: u64,
}

/// Samples a mobile conditioned on its white-vertex count. Labels are only
/// assigned after the tree size is accepted.
pub fn condition_size(
    model: &WeightModel,
    sampler: &dyn BridgeSampler,
    rng: &mut Rng64,
    cond: SizeCondition,
    budget: TreeBudget,
    max_attempts: u64,
) -> Result<ConditionedMobile, SampleError> {
    let mut attempts = 0u64;
    loop {
        attempts += 1;
        if attempts > max_attempts {
            return Err(SampleError::RetryLimitExceeded { attempts });
        }
        let tree_budget = TreeBudget {
            max_vertices: budget.max_vertices,
            max_white: cond.white_cap(),
        };
        match sample_tree(model, rng, tree_budget) {
            Ok(tree) => {
                if cond.accepts(tree.n_white) {
                    let mobile = assign_labels(tree, sampler, rng);
                    return Ok(ConditionedMobile { mobile, attempts });
                }
            }
            Err(SampleError::WhiteCapExceeded { .. }) => {}
            Err(e @ SampleError::BudgetExceeded { .. }) => match cond {
                // at-least mode needs completed trees; a hard budget abort
                // cannot be treated as a rejection
                SizeCondition::AtLeast(_) => return Err(e),
                _ => {}
            },
            Err(e) => return Err(e),
        }
    }
}
