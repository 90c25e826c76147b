//! Structural algorithms over one wordnet layer.
//!
//! Everything here works on the *oriented* view of a relation subset: edges
//! whose type points general-to-specific (hyponym, meronym) are flipped, so
//! that every arc points from the specific concept to the general one. The
//! supremacy of a synset is then the size of its in-component: the number of
//! synsets that can reach it.

use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{RelationFilter, SupremacyConfig, WordnetGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown synset {0:?}")]
    UnknownSynset(String),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

/// Filtered digraph over the node indices of a [`WordnetGraph`], in
/// compressed sparse row form. Self-loops and parallel arcs are removed.
#[derive(Debug, Clone)]
pub(crate) struct Digraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Digraph {
    fn from_arcs(node_count: usize, mut arcs: Vec<(u32, u32)>) -> Self {
        arcs.retain(|(s, t)| s != t);
        arcs.sort_unstable();
        arcs.dedup();
        let mut offsets = vec![0u32; node_count + 1];
        for &(s, _) in &arcs {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.into_iter().map(|(_, t)| t).collect();
        Digraph { offsets, targets }
    }

    /// Arcs of the selected relation types, oriented specific-to-general.
    pub(crate) fn oriented(graph: &WordnetGraph, filter: &RelationFilter) -> Self {
        let kinds = graph.relation_kinds();
        let selected: Vec<bool> = kinds.iter().map(|k| filter.matches(k)).collect();
        let flipped: Vec<bool> = kinds
            .iter()
            .map(|k| k.points_general_to_specific())
            .collect();
        let arcs = graph
            .resolved_edges()
            .filter(|&(_, _, k)| selected[k as usize])
            .map(|(s, t, k)| if flipped[k as usize] { (t, s) } else { (s, t) })
            .collect();
        Digraph::from_arcs(graph.node_count(), arcs)
    }

    pub(crate) fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn successors(&self, node: u32) -> &[u32] {
        let node = node as usize;
        &self.targets[self.offsets[node] as usize..self.offsets[node + 1] as usize]
    }

    pub(crate) fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.node_count() as u32)
            .flat_map(move |s| self.successors(s).iter().map(move |&t| (s, t)))
    }

    pub(crate) fn reversed(&self) -> Self {
        Digraph::from_arcs(
            self.node_count(),
            self.arcs().map(|(s, t)| (t, s)).collect(),
        )
    }
}

struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    /// Component id of each synset, in the graph's synset order. Components
    /// are numbered by their smallest synset id.
    pub component_of: Vec<u32>,
    /// Size of each component, indexed by component id.
    pub component_sizes: Vec<usize>,
}

impl ComponentReport {
    pub fn count(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn node_count(&self) -> usize {
        self.component_of.len()
    }

    pub fn sizes_descending(&self) -> Vec<usize> {
        let mut sizes = self.component_sizes.clone();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub fn largest(&self) -> usize {
        self.component_sizes.iter().copied().max().unwrap_or(0)
    }

    /// Fraction of all synsets in the largest component; 0 for an empty graph.
    pub fn largest_share(&self) -> f64 {
        if self.component_of.is_empty() {
            0.0
        } else {
            self.largest() as f64 / self.component_of.len() as f64
        }
    }
}

/// Connected components of the undirected view of the selected relations.
/// Synsets without selected edges are size-1 components.
pub fn weak_components(graph: &WordnetGraph, filter: &RelationFilter) -> ComponentReport {
    let digraph = Digraph::oriented(graph, filter);
    components_of(&digraph)
}

fn components_of(digraph: &Digraph) -> ComponentReport {
    let n = digraph.node_count();
    let mut sets = DisjointSet::new(n);
    for (s, t) in digraph.arcs() {
        sets.union(s, t);
    }
    let mut id_of_root = vec![u32::MAX; n];
    let mut component_of = Vec::with_capacity(n);
    let mut component_sizes = Vec::new();
    for v in 0..n as u32 {
        let root = sets.find(v) as usize;
        if id_of_root[root] == u32::MAX {
            id_of_root[root] = component_sizes.len() as u32;
            component_sizes.push(0);
        }
        let id = id_of_root[root];
        component_sizes[id as usize] += 1;
        component_of.push(id);
    }
    ComponentReport {
        component_of,
        component_sizes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub acyclic: bool,
    /// A directed cycle `[v0, v1, ..., vk]`: each consecutive pair is an arc
    /// and `vk -> v0` closes it.
    pub witness: Option<Vec<String>>,
}

pub fn check_acyclicity(graph: &WordnetGraph, filter: &RelationFilter) -> AcyclicityReport {
    let digraph = Digraph::oriented(graph, filter);
    match find_cycle(&digraph) {
        None => AcyclicityReport {
            acyclic: true,
            witness: None,
        },
        Some(cycle) => AcyclicityReport {
            acyclic: false,
            witness: Some(
                cycle
                    .into_iter()
                    .map(|v| graph.synsets()[v as usize].id.clone())
                    .collect(),
            ),
        },
    }
}

fn find_cycle(digraph: &Digraph) -> Option<Vec<u32>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = digraph.node_count();
    let mut color = vec![WHITE; n];
    let mut stack: Vec<(u32, usize)> = Vec::new();
    for start in 0..n as u32 {
        if color[start as usize] != WHITE {
            continue;
        }
        color[start as usize] = GRAY;
        stack.push((start, 0));
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let succ = digraph.successors(v);
            if *next < succ.len() {
                let w = succ[*next];
                *next += 1;
                match color[w as usize] {
                    WHITE => {
                        color[w as usize] = GRAY;
                        stack.push((w, 0));
                    }
                    GRAY => {
                        let from = stack.iter().position(|&(u, _)| u == w).unwrap();
                        return Some(stack[from..].iter().map(|&(u, _)| u).collect());
                    }
                    _ => {}
                }
            } else {
                color[v as usize] = BLACK;
                stack.pop();
            }
        }
    }
    None
}

/// Dimension of the cycle space of the undirected simple view: `E - V + C`,
/// with directions collapsed and parallel edges merged.
pub fn undirected_cycle_rank(graph: &WordnetGraph, filter: &RelationFilter) -> usize {
    let digraph = Digraph::oriented(graph, filter);
    let mut pairs: Vec<(u32, u32)> = digraph.arcs().map(|(s, t)| (s.min(t), s.max(t))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let components = components_of(&digraph).count();
    pairs.len() + components - digraph.node_count()
}

/// Strongly connected component condensation of the oriented view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedGraph {
    /// SCC id of each synset. SCCs are numbered by their smallest synset id.
    pub scc_of: Vec<u32>,
    pub member_counts: Vec<u32>,
    /// Deduplicated, sorted arcs between SCCs.
    pub edges: Vec<(u32, u32)>,
}

impl CondensedGraph {
    pub fn scc_count(&self) -> usize {
        self.member_counts.len()
    }

    /// Synset indices of each SCC, ascending.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut members = vec![Vec::new(); self.scc_count()];
        for (v, &c) in self.scc_of.iter().enumerate() {
            members[c as usize].push(v as u32);
        }
        members
    }

    /// Kahn order of the SCCs; `None` only if the condensation had a cycle,
    /// which would be a bug.
    pub fn topological_order(&self) -> Option<Vec<u32>> {
        let c = self.scc_count();
        let dag = Digraph::from_arcs(c, self.edges.clone());
        let mut indegree = vec![0u32; c];
        for &(_, t) in &self.edges {
            indegree[t as usize] += 1;
        }
        let mut queue: VecDeque<u32> = (0..c as u32)
            .filter(|&v| indegree[v as usize] == 0)
            .collect();
        let mut order = Vec::with_capacity(c);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in dag.successors(v) {
                indegree[w as usize] -= 1;
                if indegree[w as usize] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == c).then_some(order)
    }
}

pub fn condense_sccs(graph: &WordnetGraph, filter: &RelationFilter) -> CondensedGraph {
    condense(&Digraph::oriented(graph, filter))
}

fn condense(digraph: &Digraph) -> CondensedGraph {
    let raw = tarjan(digraph);
    let n = digraph.node_count();
    // renumber by smallest member (node indices follow id order)
    let raw_count = raw.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut renumber = vec![u32::MAX; raw_count];
    let mut next = 0u32;
    let mut scc_of = Vec::with_capacity(n);
    let mut member_counts = Vec::new();
    for &r in &raw {
        if renumber[r as usize] == u32::MAX {
            renumber[r as usize] = next;
            member_counts.push(0);
            next += 1;
        }
        let id = renumber[r as usize];
        member_counts[id as usize] += 1;
        scc_of.push(id);
    }
    let mut edges: Vec<(u32, u32)> = digraph
        .arcs()
        .map(|(s, t)| (scc_of[s as usize], scc_of[t as usize]))
        .filter(|(a, b)| a != b)
        .collect();
    edges.sort_unstable();
    edges.dedup();
    CondensedGraph {
        scc_of,
        member_counts,
        edges,
    }
}

/// Iterative Tarjan; returns an arbitrary SCC label per node.
fn tarjan(digraph: &Digraph) -> Vec<u32> {
    const UNVISITED: u32 = u32::MAX;
    let n = digraph.node_count();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNVISITED; n];
    let mut scc_stack: Vec<u32> = Vec::new();
    let mut call_stack: Vec<(u32, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut next_component = 0u32;

    for root in 0..n as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        call_stack.push((root, 0));
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        scc_stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut next)) = call_stack.last_mut() {
            let succ = digraph.successors(v);
            if *next < succ.len() {
                let w = succ[*next];
                *next += 1;
                if index[w as usize] == UNVISITED {
                    index[w as usize] = next_index;
                    lowlink[w as usize] = next_index;
                    next_index += 1;
                    scc_stack.push(w);
                    on_stack[w as usize] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w as usize] {
                    lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                }
                continue;
            }
            call_stack.pop();
            if let Some(&(parent, _)) = call_stack.last() {
                lowlink[parent as usize] = lowlink[parent as usize].min(lowlink[v as usize]);
            }
            if lowlink[v as usize] == index[v as usize] {
                loop {
                    let w = scc_stack.pop().unwrap();
                    on_stack[w as usize] = false;
                    component[w as usize] = next_component;
                    if w == v {
                        break;
                    }
                }
                next_component += 1;
            }
        }
    }
    component
}

/// Supremacy `s` of every synset, aligned with the graph's synset order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupremacyTable {
    pub ids: Vec<String>,
    pub values: Vec<u64>,
    pub config: SupremacyConfig,
}

impl SupremacyTable {
    pub fn get(&self, id: &str) -> Option<u64> {
        let i = self
            .ids
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .ok()?;
        Some(self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.ids
            .iter()
            .map(String::as_str)
            .zip(self.values.iter().copied())
    }
}

/// Supremacy of every synset, using all available cores.
pub fn supremacy_all(graph: &WordnetGraph, config: &SupremacyConfig) -> SupremacyTable {
    supremacy_all_with_threads(graph, config, 0).expect("default thread pool")
}

/// Supremacy of every synset on `threads` workers (0 = rayon's default).
/// The result does not depend on the worker count.
///
/// Works on the SCC condensation in topological order. Condensed nodes are
/// taken in groups of 64; for each group one forward sweep pushes a 64-bit
/// "which group members reach me" mask along the arcs, and every node adds
/// the member counts of the set bits to its total. Time is O(C * (C + E) / 64)
/// in the worst case, extra memory O(C) per worker.
pub fn supremacy_all_with_threads(
    graph: &WordnetGraph,
    config: &SupremacyConfig,
    threads: usize,
) -> Result<SupremacyTable, GraphError> {
    let digraph = Digraph::oriented(graph, &config.relation_types);
    let condensed = condense(&digraph);
    let order = condensed
        .topological_order()
        .expect("condensation is acyclic");
    let c = order.len();

    let mut position = vec![0u32; c];
    for (p, &scc) in order.iter().enumerate() {
        position[scc as usize] = p as u32;
    }
    let weights: Vec<u64> = order
        .iter()
        .map(|&scc| condensed.member_counts[scc as usize] as u64)
        .collect();
    let forward = Digraph::from_arcs(
        c,
        condensed
            .edges
            .iter()
            .map(|&(a, b)| (position[a as usize], position[b as usize]))
            .collect(),
    );

    let blocks = c.div_ceil(64);
    let sweep = || {
        (0..blocks)
            .into_par_iter()
            .fold(
                || (vec![0u64; c], Vec::<u64>::new()),
                |(mut totals, mut bits), block| {
                    sweep_block(&forward, &weights, block * 64, &mut totals, &mut bits);
                    (totals, bits)
                },
            )
            .map(|(totals, _)| totals)
            .reduce(
                || vec![0u64; c],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    let totals = with_threads(threads, sweep)?;

    let values = condensed
        .scc_of
        .iter()
        .map(|&scc| {
            let with_self = totals[position[scc as usize] as usize];
            if config.include_self {
                with_self
            } else {
                with_self - 1
            }
        })
        .collect();
    Ok(SupremacyTable {
        ids: graph.synsets().iter().map(|s| s.id.clone()).collect(),
        values,
        config: config.clone(),
    })
}

/// Runs `work` on a pool of `threads` workers; 0 uses the global pool.
pub(crate) fn with_threads<T: Send>(
    threads: usize,
    work: impl FnOnce() -> T + Send,
) -> Result<T, GraphError> {
    if threads == 0 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| GraphError::ThreadPool(e.to_string()))?;
    Ok(pool.install(work))
}

/// One 64-source pass. `bits[i]` holds the mask of position `lo + i`.
fn sweep_block(
    forward: &Digraph,
    weights: &[u64],
    lo: usize,
    totals: &mut [u64],
    bits: &mut Vec<u64>,
) {
    let c = weights.len();
    let hi = (lo + 64).min(c);
    bits.clear();
    bits.resize(c - lo, 0);
    let mut unit_mask = 0u64;
    for i in 0..hi - lo {
        bits[i] = 1 << i;
        if weights[lo + i] == 1 {
            unit_mask |= 1 << i;
        }
    }
    for p in lo..c {
        let mask = bits[p - lo];
        if mask == 0 {
            continue;
        }
        let mut heavy = mask & !unit_mask;
        let mut sum = (mask & unit_mask).count_ones() as u64;
        while heavy != 0 {
            let bit = heavy.trailing_zeros() as usize;
            sum += weights[lo + bit];
            heavy &= heavy - 1;
        }
        totals[p] += sum;
        for &q in forward.successors(p as u32) {
            bits[q as usize - lo] |= mask;
        }
    }
}

/// The in-component of a synset as a standalone graph: every synset counted
/// by its supremacy, plus the selected edges among them.
pub fn in_component(
    graph: &WordnetGraph,
    synset_id: &str,
    config: &SupremacyConfig,
) -> Result<WordnetGraph, GraphError> {
    let start = graph
        .node_index(synset_id)
        .ok_or_else(|| GraphError::UnknownSynset(synset_id.to_string()))?;
    let reverse = Digraph::oriented(graph, &config.relation_types).reversed();
    let mut member = vec![false; graph.node_count()];
    member[start as usize] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &u in reverse.successors(v) {
            if !member[u as usize] {
                member[u as usize] = true;
                queue.push_back(u);
            }
        }
    }
    if !config.include_self {
        member[start as usize] = false;
    }

    let synsets = graph
        .synsets()
        .iter()
        .zip(&member)
        .filter(|(_, &m)| m)
        .map(|(s, _)| s.clone())
        .collect();
    let edges = graph
        .resolved_edge_records()
        .filter(|(s, t, e)| {
            member[*s as usize]
                && member[*t as usize]
                && config.relation_types.matches(&e.relation_type)
        })
        .map(|(_, _, e)| e.clone())
        .collect();
    Ok(WordnetGraph::new(graph.language_tag(), synsets, edges))
}
