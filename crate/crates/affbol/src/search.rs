//! Exact branch-and-bound computation of the maximal cross-intersecting
//! family size m(n, q), and its projective analogue, for small parameters.
//!
//! The ground set consists of all admissible ordered pairs (A, B) with
//! A ∩ B = ∅ ("nodes"), with a directed edge P -> Q exactly when
//! A_P ∩ B_Q ≠ ∅. A valid family is a node sequence p_1, .., p_k such that
//! p_i -> p_j for every i < j, so *appending* a node only requires edges
//! from all current elements to the new one — never the reverse.
//!
//! The reachable future of a partial sequence depends only on its
//! candidate set (the running intersection of out-neighbor bitsets), which
//! turns the depth-first search into a value recursion over candidate
//! sets: f(C) = max over x in C of 1 + f(C ∩ out(x)), memoized per set.
//! Sequences that permute interchangeable nodes collapse onto one state,
//! which is what makes dense instances tractable.
//!
//! Two upper bounds stop a state's child scan as soon as its exact value
//! is reached: |C| itself, and the number of classes in a greedy partition
//! of C into sets that are pairwise non-adjacent in the symmetrized graph.
//! Any two members of a valid sequence are joined by at least one directed
//! edge, so each class contributes at most one member.
//!
//! At the root, one representative per orbit of the affine (resp.
//! projective linear) group suffices: the group preserves disjointness and
//! the edge relation, so every optimal sequence maps to one whose first
//! node is a representative.

use crate::families::{CrossPair, Mode, PairFamily};
use crate::geometry::{
    affine_subspaces, projective_subspaces, AffineSubspace, GeometryError, LinearSubspace,
    ProjectiveSubspace, SpaceDesc,
};
use crate::linalg::MatFq;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Debug)]
pub enum SearchError {
    Geometry(GeometryError),
    /// Orbit computation would exceed its work budget.
    SeedBudgetExceeded,
    /// A checkpoint file is unreadable or belongs to different parameters.
    Checkpoint(String),
    Io(std::io::Error),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Geometry(e) => write!(f, "{e}"),
            SearchError::SeedBudgetExceeded => write!(f, "orbit computation exceeds budget"),
            SearchError::Checkpoint(msg) => write!(f, "checkpoint: {msg}"),
            SearchError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl std::error::Error for SearchError {}

impl From<GeometryError> for SearchError {
    fn from(e: GeometryError) -> Self {
        SearchError::Geometry(e)
    }
}

impl From<std::io::Error> for SearchError {
    fn from(e: std::io::Error) -> Self {
        SearchError::Io(e)
    }
}

// ---- Bitset ----

/// Fixed-length bitset used for out-neighbor and candidate sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Bitset {
        Bitset {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Bitset) -> Bitset {
        debug_assert_eq!(self.len, other.len);
        Bitset {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn or_assign(&mut self, other: &Bitset) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// |self ∩ other| without allocating.
    pub fn and_count(&self, other: &Bitset) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersects(&self, other: &Bitset) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

// ---- Ground set ----

/// The search universe: admissible pairs as nodes plus precomputed edge
/// bitsets. `out[p]` holds q with A_p ∩ B_q ≠ ∅; `sym` is the
/// symmetrization (used only for bounding).
pub struct GroundSet<T: CrossPair> {
    objects_a: Vec<T>,
    objects_b: Vec<T>,
    nodes: Vec<(usize, usize)>,
    out: Vec<Bitset>,
    sym: Vec<Bitset>,
}

impl<T: CrossPair> GroundSet<T> {
    /// Builds the ground set from candidate object lists: nodes are the
    /// pairs with A ∩ B = ∅; the pairwise meet matrix over the object
    /// lists is computed once and shared by all node pairs.
    pub fn build(objects_a: Vec<T>, objects_b: Vec<T>) -> GroundSet<T> {
        let na = objects_a.len();
        let nb = objects_b.len();
        let mut meets = vec![false; na * nb];
        for (ia, a) in objects_a.iter().enumerate() {
            for (ib, b) in objects_b.iter().enumerate() {
                meets[ia * nb + ib] = T::meet_witness(a, b).is_some();
            }
        }
        let mut nodes = Vec::new();
        for ia in 0..na {
            for ib in 0..nb {
                if !meets[ia * nb + ib] {
                    nodes.push((ia, ib));
                }
            }
        }
        let m = nodes.len();
        let mut out = vec![Bitset::new(m); m];
        for (p, &(pa, _)) in nodes.iter().enumerate() {
            for (r, &(_, rb)) in nodes.iter().enumerate() {
                if meets[pa * nb + rb] {
                    out[p].set(r);
                }
            }
        }
        let mut sym = out.clone();
        for p in 0..m {
            for r in 0..m {
                if out[p].contains(r) {
                    sym[r].set(p);
                }
            }
        }
        GroundSet {
            objects_a,
            objects_b,
            nodes,
            out,
            sym,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: usize) -> (&T, &T) {
        let (ia, ib) = self.nodes[id];
        (&self.objects_a[ia], &self.objects_b[ib])
    }

    pub fn out(&self, id: usize) -> &Bitset {
        &self.out[id]
    }

    pub fn sym(&self, id: usize) -> &Bitset {
        &self.sym[id]
    }

    /// The family formed by a node-id sequence.
    pub fn witness_family(&self, ids: &[usize]) -> PairFamily<T> {
        let pairs: Vec<(T, T)> = ids
            .iter()
            .map(|&id| {
                let (a, b) = self.node(id);
                (a.clone(), b.clone())
            })
            .collect();
        PairFamily::new(pairs, Mode::Skew).expect("nodes share one context")
    }

    /// True when appending each node to the previous ones is edge-valid,
    /// i.e. the sequence is a valid family per the out-relation.
    pub fn sequence_is_valid(&self, ids: &[usize]) -> bool {
        for (j, &qj) in ids.iter().enumerate() {
            for &qi in &ids[..j] {
                if !self.out[qi].contains(qj) {
                    return false;
                }
            }
        }
        true
    }
}

impl<T: CrossPair + Eq> GroundSet<T> {
    /// Node id of the pair (a, b), when admissible.
    pub fn find_node(&self, a: &T, b: &T) -> Option<usize> {
        self.nodes
            .iter()
            .position(|&(ia, ib)| &self.objects_a[ia] == a && &self.objects_b[ib] == b)
    }
}

/// Ground set over affine subspace pairs with the given dimension filters.
pub fn affine_ground_set(
    space: &SpaceDesc,
    dims_a: &[usize],
    dims_b: &[usize],
) -> Result<GroundSet<AffineSubspace>, GeometryError> {
    let a = affine_subspaces(space, dims_a)?;
    let b = affine_subspaces(space, dims_b)?;
    Ok(GroundSet::build(a, b))
}

/// Ground set over projective subspace pairs of PG(n, q); the space is the
/// homogeneous coordinate space F_q^(n+1) and dims are projective.
pub fn projective_ground_set(
    homogeneous: &SpaceDesc,
    dims_a: &[usize],
    dims_b: &[usize],
) -> Result<GroundSet<ProjectiveSubspace>, GeometryError> {
    let a = projective_subspaces(homogeneous, dims_a)?;
    let b = projective_subspaces(homogeneous, dims_b)?;
    Ok(GroundSet::build(a, b))
}

// ---- Bounds ----

/// Greedy partition of the candidate set into classes that are pairwise
/// non-adjacent in the symmetrized graph. Each class contributes at most
/// one node to any valid extension, so the class count bounds it.
fn greedy_cover_classes<T: CrossPair>(gs: &GroundSet<T>, cands: &Bitset) -> usize {
    let mut classes: Vec<Bitset> = Vec::new();
    for x in cands.iter() {
        let adj = &gs.sym[x];
        match classes.iter_mut().find(|class| !class.intersects(adj)) {
            Some(class) => class.set(x),
            None => {
                let mut class = Bitset::new(cands.len());
                class.set(x);
                classes.push(class);
            }
        }
    }
    classes.len()
}

/// Upper bound on the best reachable family length from a state with
/// `current_k` chosen nodes and the given candidate set:
/// `current_k + min(|candidates|, greedy cover classes)`. Never smaller
/// than the true best extension.
pub fn prune_bound<T: CrossPair>(gs: &GroundSet<T>, current_k: usize, cands: &Bitset) -> usize {
    current_k + cands.count().min(greedy_cover_classes(gs, cands))
}

// ---- Canonical seeds ----

/// Work cap for orbit computation (group size x node count).
const SEED_WORK_BUDGET: u64 = 1 << 26;
/// Cap on the matrix odometer used to enumerate GL(n, q).
const GL_ENUMERATION_BUDGET: u64 = 1 << 22;

/// All invertible n x n matrices over the space's field.
fn enumerate_gl(space: &SpaceDesc, n: usize) -> Result<Vec<MatFq>, SearchError> {
    let q = space.q() as u64;
    let total = q.checked_pow((n * n) as u32);
    match total {
        Some(t) if t <= GL_ENUMERATION_BUDGET => {}
        _ => return Err(SearchError::SeedBudgetExceeded),
    }
    let field = space.field();
    let mut out = Vec::new();
    let total = total.unwrap();
    for mut idx in 0..total {
        let mut m = MatFq::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (idx % q) as u32;
                idx /= q;
            }
        }
        if crate::linalg::rref(field, &m).rank == n {
            out.push(m);
        }
    }
    Ok(out)
}

fn apply_linear(space: &SpaceDesc, m: &MatFq, v: &[u32]) -> Vec<u32> {
    let field = space.field();
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut acc = 0u32;
            for (j, &x) in v.iter().enumerate() {
                acc = field.add(acc, field.mul(m[(i, j)], x));
            }
            acc
        })
        .collect()
}

fn map_affine(space: &SpaceDesc, m: &MatFq, shift: &[u32], s: &AffineSubspace) -> AffineSubspace {
    let field = space.field();
    let rows: Vec<Vec<u32>> = (0..s.dim())
        .map(|i| apply_linear(space, m, s.direction().basis().row(i)))
        .collect();
    let mut base = apply_linear(space, m, s.base());
    for (slot, &c) in base.iter_mut().zip(shift) {
        *slot = field.add(*slot, c);
    }
    AffineSubspace::canonicalize(space, &MatFq::from_rows(&rows, space.n()), &base)
        .expect("group maps stay inside the space")
}

fn map_projective(space: &SpaceDesc, m: &MatFq, s: &ProjectiveSubspace) -> ProjectiveSubspace {
    let rows: Vec<Vec<u32>> = (0..s.carrier().dim())
        .map(|i| apply_linear(space, m, s.carrier().basis().row(i)))
        .collect();
    let carrier = LinearSubspace::from_spanning(space, &MatFq::from_rows(&rows, space.n()))
        .expect("group maps stay inside the space");
    ProjectiveSubspace::new(carrier).expect("invertible maps preserve the carrier dimension")
}

fn orbit_representatives<T, F>(gs: &GroundSet<T>, group_size: u64, apply: F) -> Vec<usize>
where
    T: CrossPair + Eq + Hash,
    F: Fn(u64, &T) -> T,
{
    let mut index_a: HashMap<&T, usize> = HashMap::new();
    for (i, a) in gs.objects_a.iter().enumerate() {
        index_a.insert(a, i);
    }
    let mut index_b: HashMap<&T, usize> = HashMap::new();
    for (i, b) in gs.objects_b.iter().enumerate() {
        index_b.insert(b, i);
    }
    let mut node_id: HashMap<(usize, usize), usize> = HashMap::new();
    for (id, &key) in gs.nodes.iter().enumerate() {
        node_id.insert(key, id);
    }

    let m = gs.node_count();
    let mut seed = vec![true; m];
    for id in 0..m {
        if !seed[id] {
            continue;
        }
        let (a, b) = gs.node(id);
        for g in 0..group_size {
            let ga = apply(g, a);
            let gb = apply(g, b);
            let (Some(&ia), Some(&ib)) = (index_a.get(&ga), index_b.get(&gb)) else {
                // Filters made the object lists asymmetric under the group;
                // skip this image (correctness is unaffected, the orbit is
                // just split less aggressively).
                continue;
            };
            if let Some(&other) = node_id.get(&(ia, ib)) {
                if other > id {
                    seed[other] = false;
                }
            }
        }
    }
    (0..m).filter(|&i| seed[i]).collect()
}

/// One node per orbit of the affine group x -> Mx + c acting on pairs.
/// Searching only these as first elements preserves the optimum because
/// the group preserves both the disjointness and the edge relation.
pub fn affine_canonical_seeds(
    space: &SpaceDesc,
    gs: &GroundSet<AffineSubspace>,
) -> Result<Vec<usize>, SearchError> {
    let gl = enumerate_gl(space, space.n())?;
    let translations: Vec<Vec<u32>> = space.points().collect();
    let group_size = (gl.len() as u64) * translations.len() as u64;
    if group_size.saturating_mul(gs.node_count() as u64) > SEED_WORK_BUDGET {
        return Err(SearchError::SeedBudgetExceeded);
    }
    Ok(orbit_representatives(gs, group_size, |g, s| {
        let m = &gl[(g / translations.len() as u64) as usize];
        let c = &translations[(g % translations.len() as u64) as usize];
        map_affine(space, m, c, s)
    }))
}

/// One node per orbit of GL(n+1, q) acting on carriers.
pub fn projective_canonical_seeds(
    homogeneous: &SpaceDesc,
    gs: &GroundSet<ProjectiveSubspace>,
) -> Result<Vec<usize>, SearchError> {
    let gl = enumerate_gl(homogeneous, homogeneous.n())?;
    let group_size = gl.len() as u64;
    if group_size.saturating_mul(gs.node_count() as u64) > SEED_WORK_BUDGET {
        return Err(SearchError::SeedBudgetExceeded);
    }
    Ok(orbit_representatives(gs, group_size, |g, s| {
        map_projective(homogeneous, &gl[g as usize], s)
    }))
}

// ---- Engine ----

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Node-expansion budget; None = unbounded.
    pub max_expansions: Option<u64>,
    /// Worker threads for the root seed loop.
    pub workers: usize,
    /// Restrict root branching to group-orbit representatives when the
    /// orbit computation fits its budget.
    pub seed_reduction: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_expansions: None,
            workers: 1,
            seed_reduction: true,
        }
    }
}

/// Candidate sets below this size use the plain |candidates| bound; the
/// cover bound only pays off on larger sets.
const COVER_BOUND_THRESHOLD: usize = 32;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: u64,
    pub prunes_naive: u64,
    pub prunes_cover: u64,
    pub seeds_total: usize,
    pub seeds_exhausted: usize,
    pub used_seed_reduction: bool,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best_m: usize,
    pub witness_ids: Vec<usize>,
    /// True when every seed subtree was exhausted (no budget cutoff).
    pub optimal: bool,
    pub stats: SearchStats,
}

/// Snapshot passed to the progress hook after each exhausted seed.
#[derive(Debug, Clone)]
pub struct ProgressSnapshot {
    pub exhausted_seeds: Vec<usize>,
    pub best_m: usize,
    pub witness_ids: Vec<usize>,
}

/// Entries beyond this are computed without being stored; lookups still
/// hit existing entries.
const MEMO_CAP_ENTRIES: usize = 1 << 22;

struct Shared<'a, T: CrossPair> {
    gs: &'a GroundSet<T>,
    best: AtomicUsize,
    witness: Mutex<Vec<usize>>,
    expansions: AtomicU64,
    aborted: AtomicBool,
    max_expansions: Option<u64>,
    progress: Mutex<ProgressSnapshot>,
    hook: Option<&'a (dyn Fn(&ProgressSnapshot) + Sync)>,
}

struct Worker<'a, 'b, T: CrossPair> {
    shared: &'b Shared<'a, T>,
    stats: SearchStats,
    /// Best extension length per candidate set. The reachable future of a
    /// partial sequence depends only on its candidate set (appending x
    /// needs edges from every current element to x, i.e. membership in
    /// the running intersection), so sequences that permute interchangeable
    /// nodes collapse onto one state.
    memo: HashMap<Vec<u64>, u32>,
    /// When set, skip budget accounting (used for witness reconstruction
    /// after the subtree value is already known).
    unmetered: bool,
}

impl<T: CrossPair> Worker<'_, '_, T> {
    /// Exact best extension length from the candidate set, or None when
    /// the expansion budget ran out mid-computation.
    fn extension_value(&mut self, cands: &Bitset) -> Option<u32> {
        let count = cands.count();
        if count == 0 {
            return Some(0);
        }
        if let Some(&v) = self.memo.get(&cands.words) {
            return Some(v);
        }
        let shared = self.shared;
        if !self.unmetered {
            if shared.aborted.load(Ordering::Relaxed) {
                return None;
            }
            if let Some(cap) = shared.max_expansions {
                if shared.expansions.fetch_add(1, Ordering::SeqCst) >= cap {
                    shared.aborted.store(true, Ordering::SeqCst);
                    return None;
                }
            } else {
                shared.expansions.fetch_add(1, Ordering::Relaxed);
            }
            self.stats.expanded += 1;
        }

        // The extension is a clique of the symmetrized graph, so it never
        // beats min(|cands|, cover classes); reaching that bound lets the
        // child scan stop early with the exact value in hand.
        let mut upper = count as u32;
        let mut cover_is_binding = false;
        if count > COVER_BOUND_THRESHOLD {
            let classes = greedy_cover_classes(shared.gs, cands) as u32;
            if classes < upper {
                upper = classes;
                cover_is_binding = true;
            }
        }

        // Most-constraining first: descending out-degree inside the
        // candidate set, ties broken by node id.
        let mut order: Vec<(usize, usize)> = cands
            .iter()
            .map(|x| (shared.gs.out[x].and_count(cands), x))
            .collect();
        order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        let mut best_here = 0u32;
        for &(_, x) in &order {
            let next = cands.and(&shared.gs.out[x]);
            let below = self.extension_value(&next)?;
            best_here = best_here.max(1 + below);
            if best_here == upper {
                if cover_is_binding {
                    self.stats.prunes_cover += 1;
                } else {
                    self.stats.prunes_naive += 1;
                }
                break;
            }
        }
        if self.memo.len() < MEMO_CAP_ENTRIES {
            self.memo.insert(cands.words.clone(), best_here);
        }
        Some(best_here)
    }

    /// Rebuilds one optimal sequence starting at `seed` by walking the
    /// value function greedily. Missing memo entries (evicted by the cap)
    /// are recomputed without budget accounting.
    fn reconstruct(&mut self, seed: usize) -> Vec<usize> {
        let was_unmetered = std::mem::replace(&mut self.unmetered, true);
        let mut seq = vec![seed];
        let mut cands = self.shared.gs.out[seed].clone();
        loop {
            let target = self
                .extension_value(&cands)
                .expect("unmetered evaluation cannot abort");
            if target == 0 {
                break;
            }
            let mut order: Vec<(usize, usize)> = cands
                .iter()
                .map(|x| (self.shared.gs.out[x].and_count(&cands), x))
                .collect();
            order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut advanced = false;
            for &(_, x) in &order {
                let next = cands.and(&self.shared.gs.out[x]);
                let below = self
                    .extension_value(&next)
                    .expect("unmetered evaluation cannot abort");
                if 1 + below == target {
                    seq.push(x);
                    cands = next;
                    advanced = true;
                    break;
                }
            }
            assert!(advanced, "value function must be achievable");
        }
        self.unmetered = was_unmetered;
        seq
    }

    /// Evaluates one root seed to completion: computes the exact best
    /// sequence length starting at `seed` and publishes an improved global
    /// witness. Returns false when the budget aborted the evaluation.
    fn run_seed(&mut self, seed: usize) -> bool {
        let Some(below) = self.extension_value(&self.shared.gs.out[seed].clone()) else {
            return false;
        };
        let len = 1 + below as usize;
        let shared = self.shared;
        let mut cur = shared.best.load(Ordering::SeqCst);
        while len > cur {
            match shared
                .best
                .compare_exchange(cur, len, Ordering::SeqCst, Ordering::SeqCst)
            {
                Ok(_) => {
                    let seq = self.reconstruct(seed);
                    debug_assert_eq!(seq.len(), len);
                    // Another worker may have won a longer length between
                    // the exchange and this lock; keep the longest.
                    let mut witness = shared.witness.lock().unwrap();
                    if seq.len() > witness.len() {
                        *witness = seq;
                    }
                    break;
                }
                Err(actual) => cur = actual,
            }
        }
        true
    }
}

/// Exact search over node sequences starting from the given seed nodes.
/// `initial` supplies a known-valid sequence that stands as the answer
/// floor and fallback witness (e.g. when the budget aborts the run);
/// `already_exhausted` seeds (from a checkpoint) are skipped but still
/// counted as done. Deterministic for `workers == 1`.
pub fn search_max<T: CrossPair + Sync>(
    gs: &GroundSet<T>,
    seeds: &[usize],
    initial: Option<&[usize]>,
    already_exhausted: &HashSet<usize>,
    cfg: &SearchConfig,
    hook: Option<&(dyn Fn(&ProgressSnapshot) + Sync)>,
) -> SearchOutcome {
    let shared = Shared {
        gs,
        best: AtomicUsize::new(0),
        witness: Mutex::new(Vec::new()),
        expansions: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        max_expansions: cfg.max_expansions,
        progress: Mutex::new(ProgressSnapshot {
            exhausted_seeds: already_exhausted.iter().copied().collect(),
            best_m: 0,
            witness_ids: Vec::new(),
        }),
        hook,
    };
    shared.progress.lock().unwrap().exhausted_seeds.sort_unstable();

    if let Some(seq) = initial {
        debug_assert!(gs.sequence_is_valid(seq), "initial sequence must be valid");
        shared.best.store(seq.len(), Ordering::SeqCst);
        *shared.witness.lock().unwrap() = seq.to_vec();
    }

    let todo: Vec<usize> = seeds
        .iter()
        .copied()
        .filter(|s| !already_exhausted.contains(s))
        .collect();
    let workers = cfg.workers.max(1);
    let mut per_worker_stats: Vec<SearchStats> = Vec::new();

    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let my_seeds: Vec<usize> = todo
                .iter()
                .enumerate()
                .filter(|(i, _)| i % workers == w)
                .map(|(_, &s)| s)
                .collect();
            let shared = &shared;
            handles.push(scope.spawn(move || {
                let mut worker = Worker {
                    shared,
                    stats: SearchStats::default(),
                    memo: HashMap::new(),
                    unmetered: false,
                };
                for seed in my_seeds {
                    if shared.aborted.load(Ordering::Relaxed) {
                        break;
                    }
                    if !worker.run_seed(seed) {
                        break;
                    }
                    worker.stats.seeds_exhausted += 1;
                    let mut progress = shared.progress.lock().unwrap();
                    progress.exhausted_seeds.push(seed);
                    progress.exhausted_seeds.sort_unstable();
                    progress.best_m = shared.best.load(Ordering::SeqCst);
                    progress.witness_ids = shared.witness.lock().unwrap().clone();
                    if let Some(hook) = shared.hook {
                        hook(&progress);
                    }
                }
                worker.stats
            }));
        }
        for h in handles {
            per_worker_stats.push(h.join().expect("worker panicked"));
        }
    });

    let mut stats = SearchStats {
        seeds_total: seeds.len(),
        seeds_exhausted: seeds
            .iter()
            .filter(|s| already_exhausted.contains(s))
            .count(),
        ..SearchStats::default()
    };
    for ws in per_worker_stats {
        stats.expanded += ws.expanded;
        stats.prunes_naive += ws.prunes_naive;
        stats.prunes_cover += ws.prunes_cover;
        stats.seeds_exhausted += ws.seeds_exhausted;
    }

    let best_m = shared.best.load(Ordering::SeqCst);
    let witness_ids = shared.witness.lock().unwrap().clone();
    let optimal = !shared.aborted.load(Ordering::SeqCst) && stats.seeds_exhausted == seeds.len();
    SearchOutcome {
        best_m,
        witness_ids,
        optimal,
        stats,
    }
}

// ---- Checkpointing ----

/// Versioned resume state: which seeds are fully exhausted plus the best
/// witness so far. Resuming skips exhausted seeds, so re-running a
/// completed or partial search is idempotent.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format_version: u32,
    pub geometry: String,
    pub q: u32,
    pub n: usize,
    pub dims_a: Vec<usize>,
    pub dims_b: Vec<usize>,
    pub exhausted_seeds: Vec<usize>,
    pub best_m: usize,
    pub best_witness_ids: Vec<usize>,
}

pub const CHECKPOINT_VERSION: u32 = 1;

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint, SearchError> {
        let text = std::fs::read_to_string(path)?;
        let cp: Checkpoint =
            serde_json::from_str(&text).map_err(|e| SearchError::Checkpoint(e.to_string()))?;
        if cp.format_version != CHECKPOINT_VERSION {
            return Err(SearchError::Checkpoint(format!(
                "unsupported checkpoint version {}",
                cp.format_version
            )));
        }
        Ok(cp)
    }

    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let value = serde_json::to_value(self).expect("checkpoint serializes");
        std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&value).unwrap()))?;
        Ok(())
    }

    pub fn matches(&self, geometry: &str, q: u32, n: usize, dims_a: &[usize], dims_b: &[usize]) -> bool {
        self.geometry == geometry
            && self.q == q
            && self.n == n
            && self.dims_a == dims_a
            && self.dims_b == dims_b
    }
}

// ---- High-level runs ----

/// A finished search with its verified context: everything a report needs
/// is produced here by library calls.
#[derive(Debug)]
pub struct AffineSearchRun {
    pub outcome: SearchOutcome,
    pub witness: PairFamily<AffineSubspace>,
    pub node_count: usize,
    /// (q^n - 1)/(q - 1), attached when the filters admit hyperplane pairs.
    pub lower_bound: Option<u64>,
    /// q^n + 1 for q >= 3, None for q = 2.
    pub upper_bound: Option<u64>,
    pub seeded_from_construction: bool,
    pub resumed_from_checkpoint: bool,
}

fn full_dims(n: usize) -> Vec<usize> {
    (0..=n).collect()
}

fn load_matching_checkpoint(
    path: Option<&Path>,
    geometry: &str,
    q: u32,
    n: usize,
    dims_a: &[usize],
    dims_b: &[usize],
) -> Result<Option<Checkpoint>, SearchError> {
    let Some(path) = path else { return Ok(None) };
    if !path.exists() {
        return Ok(None);
    }
    let cp = Checkpoint::load(path)?;
    if !cp.matches(geometry, q, n, dims_a, dims_b) {
        return Err(SearchError::Checkpoint(
            "checkpoint parameters do not match this search".into(),
        ));
    }
    Ok(Some(cp))
}

/// Exact search for m(n, q) restricted to the dimension filters (empty
/// filter = all dimensions). Handles orbit seeding, the construction lower
/// bound, checkpoint resume, and the bound sandwich assertion.
pub fn run_affine_search(
    space: &SpaceDesc,
    dims_a: &[usize],
    dims_b: &[usize],
    cfg: &SearchConfig,
    checkpoint_path: Option<&Path>,
) -> Result<AffineSearchRun, SearchError> {
    let n = space.n();
    let dims_a = if dims_a.is_empty() { full_dims(n) } else { dims_a.to_vec() };
    let dims_b = if dims_b.is_empty() { full_dims(n) } else { dims_b.to_vec() };
    let unfiltered = dims_a == full_dims(n) && dims_b == full_dims(n);

    let gs = affine_ground_set(space, &dims_a, &dims_b)?;

    let mut seeds: Vec<usize> = (0..gs.node_count()).collect();
    let mut used_seed_reduction = false;
    if cfg.seed_reduction {
        match affine_canonical_seeds(space, &gs) {
            Ok(reps) => {
                seeds = reps;
                used_seed_reduction = true;
            }
            Err(SearchError::SeedBudgetExceeded) => {}
            Err(e) => return Err(e),
        }
    }

    // Lower-bound witness from the hyperplane construction, when its pairs
    // are inside the filters.
    let mut initial: Option<Vec<usize>> = None;
    let mut seeded_from_construction = false;
    if dims_a.contains(&(n - 1)) && dims_b.contains(&(n - 1)) {
        let built = crate::construction::build_construction(space)?;
        let ids: Option<Vec<usize>> = built
            .family
            .pairs()
            .iter()
            .map(|(a, b)| gs.find_node(a, b))
            .collect();
        if let Some(ids) = ids {
            debug_assert!(gs.sequence_is_valid(&ids));
            seeded_from_construction = true;
            initial = Some(ids);
        }
    }

    let cp = load_matching_checkpoint(
        checkpoint_path,
        "affine",
        space.q(),
        n,
        &dims_a,
        &dims_b,
    )?;
    let mut exhausted: HashSet<usize> = HashSet::new();
    if let Some(cp) = &cp {
        exhausted = cp.exhausted_seeds.iter().copied().collect();
        let better = cp.best_m
            > initial
                .as_ref()
                .map(|seq| seq.len())
                .unwrap_or(0);
        if better && gs.sequence_is_valid(&cp.best_witness_ids) {
            initial = Some(cp.best_witness_ids.clone());
        }
    }

    let writer = checkpoint_path.map(|path| {
        let path = path.to_path_buf();
        let (q, n) = (space.q(), n);
        let (da, db) = (dims_a.clone(), dims_b.clone());
        move |snap: &ProgressSnapshot| {
            let cp = Checkpoint {
                format_version: CHECKPOINT_VERSION,
                geometry: "affine".into(),
                q,
                n,
                dims_a: da.clone(),
                dims_b: db.clone(),
                exhausted_seeds: snap.exhausted_seeds.clone(),
                best_m: snap.best_m,
                best_witness_ids: snap.witness_ids.clone(),
            };
            let _ = cp.save(&path);
        }
    });
    let hook: Option<&(dyn Fn(&ProgressSnapshot) + Sync)> = match &writer {
        Some(w) => Some(w),
        None => None,
    };

    let mut outcome = search_max(&gs, &seeds, initial.as_deref(), &exhausted, cfg, hook);
    outcome.stats.used_seed_reduction = used_seed_reduction;

    // Soundness gate: a reported witness always passes the ordinary
    // verifier, in release builds too.
    let witness = gs.witness_family(&outcome.witness_ids);
    assert!(witness.verify().is_ok(), "search witness failed re-verification");

    let q = space.q() as u64;
    let lower_bound = if dims_a.contains(&(n - 1)) && dims_b.contains(&(n - 1)) {
        Some((space.point_count() - 1) / (q - 1))
    } else {
        None
    };
    let upper_bound = if space.q() >= 3 {
        Some(space.point_count() + 1)
    } else {
        None
    };
    if outcome.optimal && unfiltered && space.q() >= 3 {
        let lo = (space.point_count() - 1) / (q - 1);
        let hi = space.point_count() + 1;
        assert!(
            lo <= outcome.best_m as u64 && outcome.best_m as u64 <= hi,
            "best_m = {} violates the proved sandwich [{lo}, {hi}]: implementation bug",
            outcome.best_m
        );
    }

    Ok(AffineSearchRun {
        outcome,
        witness,
        node_count: gs.node_count(),
        lower_bound,
        upper_bound,
        seeded_from_construction,
        resumed_from_checkpoint: cp.is_some(),
    })
}

/// A finished projective search compared against the conjectured bound.
#[derive(Debug)]
pub struct ProjectiveSearchRun {
    pub outcome: SearchOutcome,
    pub witness: PairFamily<ProjectiveSubspace>,
    pub node_count: usize,
    /// 2^(n+1) - 2, recorded for comparison only.
    pub conjecture_bound: u64,
    /// best_m > conjecture_bound: a counterexample candidate to re-verify.
    pub exceeds_conjecture: bool,
    pub resumed_from_checkpoint: bool,
}

/// Exact search over PG(n, q), where `homogeneous` is F_q^(n+1) and dims
/// are projective dimensions (empty = all).
pub fn run_projective_search(
    homogeneous: &SpaceDesc,
    dims_a: &[usize],
    dims_b: &[usize],
    cfg: &SearchConfig,
    checkpoint_path: Option<&Path>,
) -> Result<ProjectiveSearchRun, SearchError> {
    let proj_n = homogeneous.n() - 1;
    let all: Vec<usize> = (0..=proj_n).collect();
    let dims_a = if dims_a.is_empty() { all.clone() } else { dims_a.to_vec() };
    let dims_b = if dims_b.is_empty() { all.clone() } else { dims_b.to_vec() };

    let gs = projective_ground_set(homogeneous, &dims_a, &dims_b)?;

    let mut seeds: Vec<usize> = (0..gs.node_count()).collect();
    let mut used_seed_reduction = false;
    if cfg.seed_reduction {
        match projective_canonical_seeds(homogeneous, &gs) {
            Ok(reps) => {
                seeds = reps;
                used_seed_reduction = true;
            }
            Err(SearchError::SeedBudgetExceeded) => {}
            Err(e) => return Err(e),
        }
    }

    let cp = load_matching_checkpoint(
        checkpoint_path,
        "projective",
        homogeneous.q(),
        proj_n,
        &dims_a,
        &dims_b,
    )?;
    let mut exhausted: HashSet<usize> = HashSet::new();
    let mut initial: Option<Vec<usize>> = None;
    if let Some(cp) = &cp {
        exhausted = cp.exhausted_seeds.iter().copied().collect();
        if gs.sequence_is_valid(&cp.best_witness_ids) {
            initial = Some(cp.best_witness_ids.clone());
        }
    }

    let writer = checkpoint_path.map(|path| {
        let path = path.to_path_buf();
        let (q, n) = (homogeneous.q(), proj_n);
        let (da, db) = (dims_a.clone(), dims_b.clone());
        move |snap: &ProgressSnapshot| {
            let cp = Checkpoint {
                format_version: CHECKPOINT_VERSION,
                geometry: "projective".into(),
                q,
                n,
                dims_a: da.clone(),
                dims_b: db.clone(),
                exhausted_seeds: snap.exhausted_seeds.clone(),
                best_m: snap.best_m,
                best_witness_ids: snap.witness_ids.clone(),
            };
            let _ = cp.save(&path);
        }
    });
    let hook: Option<&(dyn Fn(&ProgressSnapshot) + Sync)> = match &writer {
        Some(w) => Some(w),
        None => None,
    };

    let mut outcome = search_max(&gs, &seeds, initial.as_deref(), &exhausted, cfg, hook);
    outcome.stats.used_seed_reduction = used_seed_reduction;

    // Soundness gate: a reported witness always passes the ordinary
    // verifier, in release builds too.
    let witness = gs.witness_family(&outcome.witness_ids);
    assert!(witness.verify().is_ok(), "search witness failed re-verification");

    let conjecture_bound = 2u64.pow((proj_n + 1) as u32) - 2;
    let exceeds_conjecture = outcome.best_m as u64 > conjecture_bound;

    Ok(ProjectiveSearchRun {
        outcome,
        witness,
        node_count: gs.node_count(),
        conjecture_bound,
        exceeds_conjecture,
        resumed_from_checkpoint: cp.is_some(),
    })
}
