//! Exact maximum independent set by branch and bound.
//!
//! Each node partitions its candidates greedily into cliques (an independent set
//! meets each clique at most once) and branches on the candidates in reverse
//! order of that partition, so every branch comes with its own bound. Vertices
//! are renumbered by increasing degree before the search.
//!
//! Once the independence number is known, the returned set is canonicalized to the
//! lexicographically least maximum independent set, so the answer does not depend
//! on the search order or on the number of workers.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

/// Fixed-capacity bit set over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset { words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Self::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn intersection_count(&self, other: &Bitset) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

/// Simple undirected graph stored as adjacency bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Bitset>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Bitset::new(n); n] }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bitset::count).sum::<usize>() / 2
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }
}

#[derive(Clone, Debug, Default)]
pub struct MisOptions {
    /// Wall-clock limit; `None` runs to completion.
    pub budget: Option<Duration>,
    /// Worker threads for the first search phase; `0` or `1` runs sequentially.
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisResult {
    /// Vertex indices in increasing order.
    pub vertices: Vec<usize>,
    /// True when the size is proven maximum.
    pub optimal: bool,
}

/// The graph with vertices renumbered so that bit order is the colouring order.
struct Relabeled {
    adj: Vec<Bitset>,
    to_orig: Vec<usize>,
    from_orig: Vec<usize>,
}

impl Relabeled {
    /// Vertices of low degree come first (lowest index on ties).
    fn new(graph: &Graph) -> Self {
        let n = graph.len();
        let mut to_orig: Vec<usize> = (0..n).collect();
        to_orig.sort_by_key(|&v| (graph.adj[v].count(), v));
        let mut from_orig = vec![0; n];
        for (new, &old) in to_orig.iter().enumerate() {
            from_orig[old] = new;
        }
        let adj = to_orig
            .iter()
            .map(|&old| {
                let mut row = Bitset::new(n);
                for w in graph.adj[old].iter() {
                    row.insert(from_orig[w]);
                }
                row
            })
            .collect();
        Relabeled { adj, to_orig, from_orig }
    }

    fn relabel(&self, set: &Bitset) -> Bitset {
        let mut out = Bitset::new(self.adj.len());
        for v in set.iter() {
            out.insert(self.from_orig[v]);
        }
        out
    }
}

struct Shared<'a> {
    graph: &'a Relabeled,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
    best_len: AtomicUsize,
    best: Mutex<Vec<usize>>,
    /// Stop as soon as a set of this size is found.
    stop_at: Option<usize>,
}

impl Shared<'_> {
    fn offer(&self, set: &[usize]) {
        let mut best = self.best.lock().unwrap();
        if set.len() > best.len() && set.len() > self.best_len.load(Ordering::SeqCst) {
            *best = set.to_vec();
            self.best_len.store(set.len(), Ordering::SeqCst);
        }
    }

    fn done(&self) -> bool {
        self.timed_out.load(Ordering::Relaxed)
            || self.stop_at.is_some_and(|t| self.best_len.load(Ordering::Relaxed) >= t)
    }

    fn best_len(&self) -> usize {
        self.best_len.load(Ordering::Relaxed)
    }
}

struct Worker<'s, 'g> {
    shared: &'s Shared<'g>,
    nodes: u64,
}

impl Worker<'_, '_> {
    fn out_of_time(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(deadline) = self.shared.deadline {
                if Instant::now() >= deadline {
                    self.shared.timed_out.store(true, Ordering::Relaxed);
                }
            }
        }
        self.shared.done()
    }

    /// Greedy partition of `cand` into cliques, in bit order. Returns the vertices
    /// of cliques numbered `min_colour` or higher with their clique numbers, so that
    /// the vertices before position `i` are covered by `colours[i]` cliques.
    fn colour(&self, cand: &Bitset, min_colour: usize) -> (Vec<usize>, Vec<usize>) {
        let adj = &self.shared.graph.adj;
        let mut uncovered = cand.clone();
        let mut order = Vec::new();
        let mut colours = Vec::new();
        let mut k = 0;
        while !uncovered.is_empty() {
            k += 1;
            let mut open = uncovered.clone();
            while let Some(v) = open.first() {
                uncovered.remove(v);
                open.remove(v);
                open.intersect_with(&adj[v]);
                if k >= min_colour {
                    order.push(v);
                    colours.push(k);
                }
            }
        }
        (order, colours)
    }

    fn expand(&mut self, mut cand: Bitset, cur: &mut Vec<usize>) {
        if self.out_of_time() {
            return;
        }
        let min_colour = (self.shared.best_len() + 1).saturating_sub(cur.len()).max(1);
        let (order, colours) = self.colour(&cand, min_colour);
        for i in (0..order.len()).rev() {
            if cur.len() + colours[i] <= self.shared.best_len() || self.shared.done() {
                return;
            }
            let v = order[i];
            let mut next = cand.clone();
            next.difference_with(&self.shared.graph.adj[v]);
            next.remove(v);
            cur.push(v);
            if next.is_empty() {
                if cur.len() > self.shared.best_len() {
                    self.shared.offer(cur);
                }
            } else {
                self.expand(next, cur);
            }
            cur.pop();
            cand.remove(v);
        }
    }
}

/// Largest independent set inside `cand` (original labels) that beats `floor`,
/// or the first one reaching `stop_at`. Returns the set found, in original labels,
/// and whether the search finished.
fn run(
    graph: &Relabeled,
    cand: &Bitset,
    floor: usize,
    stop_at: Option<usize>,
    deadline: Option<Instant>,
    workers: usize,
) -> (Vec<usize>, bool) {
    let shared = Shared {
        graph,
        deadline,
        timed_out: AtomicBool::new(false),
        best_len: AtomicUsize::new(floor),
        best: Mutex::new(Vec::new()),
        stop_at,
    };
    let cand = graph.relabel(cand);
    if workers > 1 && !cand.is_empty() {
        let root = Worker { shared: &shared, nodes: 0 };
        let (order, colours) = root.colour(&cand, 1);
        let mut tasks = Vec::with_capacity(order.len());
        let mut remaining = cand.clone();
        for i in (0..order.len()).rev() {
            let v = order[i];
            let mut next = remaining.clone();
            next.difference_with(&graph.adj[v]);
            next.remove(v);
            tasks.push((v, colours[i], next));
            remaining.remove(v);
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
        pool.install(|| {
            tasks.into_par_iter().for_each(|(v, colour, next)| {
                if 1 + colour > shared.best_len() && !shared.done() {
                    let mut cur = vec![v];
                    if next.is_empty() {
                        shared.offer(&cur);
                    } else {
                        Worker { shared: &shared, nodes: 0 }.expand(next, &mut cur);
                    }
                }
            })
        });
    } else if !cand.is_empty() {
        Worker { shared: &shared, nodes: 0 }.expand(cand, &mut Vec::new());
    }
    let finished = !shared.timed_out.load(Ordering::SeqCst);
    let mut best: Vec<usize> = shared.best.into_inner().unwrap().into_iter().map(|v| graph.to_orig[v]).collect();
    best.sort_unstable();
    (best, finished)
}

/// Maximum independent set of `graph`.
///
/// With an exhausted budget the best set found so far is returned with
/// `optimal = false`.
pub fn max_independent_set(graph: &Graph, opts: &MisOptions) -> MisResult {
    let n = graph.len();
    let deadline = opts.budget.map(|b| Instant::now() + b);
    let relabeled = Relabeled::new(graph);
    let (found, finished) = run(&relabeled, &Bitset::full(n), 0, None, deadline, opts.workers);
    if !finished {
        return MisResult { vertices: found, optimal: false };
    }
    let alpha = found.len();

    // Greedy lexicographic canonicalization: take vertex v iff some maximum
    // independent set extends the current choice with v.
    let mut witness = found.clone();
    let mut chosen: Vec<usize> = Vec::with_capacity(alpha);
    let mut open = Bitset::full(n);
    for v in 0..n {
        if chosen.len() == alpha {
            break;
        }
        if !open.contains(v) {
            continue;
        }
        open.remove(v);
        let mut rest = open.clone();
        rest.difference_with(graph.neighbors(v));
        if witness.binary_search(&v).is_ok() {
            chosen.push(v);
            open = rest;
            continue;
        }
        let need = alpha - chosen.len() - 1;
        let extension = if need == 0 {
            Some(Vec::new())
        } else {
            let (ext, done) = run(&relabeled, &rest, need - 1, Some(need), deadline, 1);
            if ext.len() >= need {
                Some(ext)
            } else if done {
                None
            } else {
                // budget ran out while canonicalizing; the size is still proven
                return MisResult { vertices: found, optimal: true };
            }
        };
        if let Some(ext) = extension {
            chosen.push(v);
            witness = chosen.iter().copied().chain(ext).collect();
            witness.sort_unstable();
            open = rest;
        }
    }
    debug_assert_eq!(chosen.len(), alpha);
    MisResult { vertices: chosen, optimal: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    #[test]
    fn small_graphs() {
        let r = max_independent_set(&cycle(5), &MisOptions::default());
        assert_eq!(r, MisResult { vertices: vec![0, 2], optimal: true });
        let r = max_independent_set(&cycle(6), &MisOptions::default());
        assert_eq!(r.vertices, vec![0, 2, 4]);
        let mut k4 = Graph::new(4);
        for i in 0..4 {
            for j in 0..i {
                k4.add_edge(i, j);
            }
        }
        assert_eq!(max_independent_set(&k4, &MisOptions::default()).vertices, vec![0]);
        assert_eq!(max_independent_set(&Graph::new(0), &MisOptions::default()).vertices, Vec::<usize>::new());
        assert_eq!(max_independent_set(&Graph::new(3), &MisOptions::default()).vertices, vec![0, 1, 2]);
    }

    #[test]
    fn lex_least_is_chosen() {
        // path 0-1-2-3: maximum sets {0,2}, {0,3}, {1,3}; lex-least is {0,2}
        let mut g = Graph::new(4);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 3);
        assert_eq!(max_independent_set(&g, &MisOptions::default()).vertices, vec![0, 2]);
    }

    #[test]
    fn bitset_ops() {
        let mut b = Bitset::new(130);
        b.insert(0);
        b.insert(64);
        b.insert(129);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(b.count(), 3);
        b.remove(0);
        assert_eq!(b.first(), Some(64));
        assert!(Bitset::new(10).is_empty());
    }
}
