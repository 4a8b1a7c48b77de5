//! Polygraphs `(I, J, S)` with `S ⊂ I^(2) × J`, graphs, weight degenerations,
//! level splitting, colorings, forest checks and the tree-to-edge reduction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("edge {{{a}, {b}}} has no unique maximal level weight")]
    TiedMaximum { a: String, b: String },
    #[error("weight has {got} entries for {expected} vertices")]
    WeightLength { expected: usize, got: usize },
    #[error("graph is not a tree")]
    NotATree,
    #[error("root {0} has maximal degree")]
    InvalidRoot(String),
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
}

/// A triple `({a, b}, out)` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple {
    pub a: u32,
    pub b: u32,
    pub out: u32,
}

impl Triple {
    pub fn new(x: u32, y: u32, out: u32) -> Self {
        assert_ne!(x, y, "a polygraph pair needs two distinct vertices");
        Triple {
            a: x.min(y),
            b: x.max(y),
            out,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygraph {
    pub vertices: Vec<String>,
    pub outputs: Vec<String>,
    pub triples: BTreeSet<Triple>,
}

impl Polygraph {
    pub fn new(vertices: Vec<String>, outputs: Vec<String>) -> Self {
        Polygraph {
            vertices,
            outputs,
            triples: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, x: u32, y: u32, out: u32) {
        self.triples.insert(Triple::new(x, y, out));
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn with_triples(&self, triples: BTreeSet<Triple>) -> Self {
        Polygraph {
            vertices: self.vertices.clone(),
            outputs: self.outputs.clone(),
            triples,
        }
    }

    pub fn describe(&self, t: &Triple) -> String {
        format!(
            "({{{}, {}}}, {})",
            self.vertices[t.a as usize], self.vertices[t.b as usize], self.outputs[t.out as usize]
        )
    }

    /// Triples grouped by output.
    pub fn by_output(&self) -> BTreeMap<u32, Vec<Triple>> {
        let mut map: BTreeMap<u32, Vec<Triple>> = BTreeMap::new();
        for t in &self.triples {
            map.entry(t.out).or_default().push(*t);
        }
        map
    }

    /// The graph this polygraph is attached to, if every output carries exactly one
    /// triple and no pair repeats.
    pub fn as_attached_graph(&self) -> Result<Graph, String> {
        let groups = self.by_output();
        let mut edges = BTreeSet::new();
        for out in 0..self.outputs.len() as u32 {
            match groups.get(&out).map(Vec::as_slice) {
                Some([t]) => {
                    if !edges.insert((t.a, t.b)) {
                        return Err(format!("pair of {} repeats", self.describe(t)));
                    }
                }
                Some(ts) => {
                    return Err(format!(
                        "output {} carries {} triples",
                        self.outputs[out as usize],
                        ts.len()
                    ))
                }
                None => {
                    return Err(format!(
                        "output {} carries no triple",
                        self.outputs[out as usize]
                    ))
                }
            }
        }
        Ok(Graph {
            vertices: self.vertices.clone(),
            edges,
        })
    }
}

/// An integer weight per vertex.
pub type ScalarWeight = Vec<i128>;

/// A weight vector in `Z^M` per vertex.
pub type MultiWeight = Vec<Vec<i128>>;

/// Keeps, for every output, the triples of maximal pair weight `w(a) + w(b)` (ties kept).
pub fn gr_w(g: &Polygraph, w: &[i128]) -> Result<Polygraph, PolyError> {
    if w.len() != g.vertices.len() {
        return Err(PolyError::WeightLength {
            expected: g.vertices.len(),
            got: w.len(),
        });
    }
    let pair_weight = |t: &Triple| w[t.a as usize] + w[t.b as usize];
    let mut best: BTreeMap<u32, i128> = BTreeMap::new();
    for t in &g.triples {
        let e = best.entry(t.out).or_insert(i128::MIN);
        *e = (*e).max(pair_weight(t));
    }
    let kept = g
        .triples
        .iter()
        .filter(|t| pair_weight(t) == best[&t.out])
        .copied()
        .collect();
    Ok(g.with_triples(kept))
}

/// `(I × M, J, S × M)`; vertex `(v, m)` gets index `v * levels + m`.
pub fn level_split(g: &Polygraph, levels: usize) -> Polygraph {
    let vertices = g
        .vertices
        .iter()
        .flat_map(|v| (0..levels).map(move |m| format!("{v}@{m}")))
        .collect();
    let mut out = Polygraph::new(vertices, g.outputs.clone());
    let m_count = levels as u32;
    for t in &g.triples {
        for m in 0..m_count {
            out.insert(t.a * m_count + m, t.b * m_count + m, t.out);
        }
    }
    out
}

/// Flattens a per-vertex level weight to a scalar weight on the split vertex set.
pub fn flatten_levels(w: &MultiWeight) -> ScalarWeight {
    w.iter().flat_map(|row| row.iter().copied()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub vertices: Vec<String>,
    /// Edges `(a, b)` with `a < b`.
    pub edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn new(vertices: Vec<String>) -> Self {
        Graph {
            vertices,
            edges: BTreeSet::new(),
        }
    }

    /// Unlabelled graph on `n` vertices named `0..n`.
    pub fn with_size(n: usize) -> Self {
        Graph::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn add_edge(&mut self, x: u32, y: u32) {
        assert_ne!(x, y, "graphs have no self-loops");
        self.edges.insert((x.min(y), x.max(y)));
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj
    }

    pub fn with_edges(&self, edges: BTreeSet<(u32, u32)>) -> Graph {
        Graph {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    /// Vertex sets of the connected components that contain at least one edge.
    pub fn edge_components(&self) -> Vec<Vec<u32>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut comps = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] || adj[start].is_empty() {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start as u32];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &adj[v as usize] {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

/// `P(Γ) = (V, E, ΔE)`; output `k` is the `k`-th edge in sorted order.
pub fn attach(g: &Graph) -> Polygraph {
    let outputs = g
        .edges
        .iter()
        .map(|&(a, b)| format!("{}-{}", g.vertices[a as usize], g.vertices[b as usize]))
        .collect();
    let mut p = Polygraph::new(g.vertices.clone(), outputs);
    for (k, &(a, b)) in g.edges.iter().enumerate() {
        p.insert(a, b, k as u32);
    }
    p
}

/// Splits the edges by the level at which `w(a) + w(b)` is maximal.
pub fn color_split(g: &Graph, w: &MultiWeight) -> Result<Vec<Graph>, PolyError> {
    if w.len() != g.vertices.len() {
        return Err(PolyError::WeightLength {
            expected: g.vertices.len(),
            got: w.len(),
        });
    }
    let levels = w.iter().map(Vec::len).max().unwrap_or(0);
    let mut parts = vec![BTreeSet::new(); levels];
    for &(a, b) in &g.edges {
        let m = edge_color(w, a, b).ok_or_else(|| PolyError::TiedMaximum {
            a: g.vertices[a as usize].clone(),
            b: g.vertices[b as usize].clone(),
        })?;
        parts[m].insert((a, b));
    }
    Ok(parts.into_iter().map(|e| g.with_edges(e)).collect())
}

/// Index of the unique maximal coordinate of `w(a) + w(b)`, if there is one.
pub fn edge_color(w: &MultiWeight, a: u32, b: u32) -> Option<usize> {
    let (wa, wb) = (&w[a as usize], &w[b as usize]);
    let sums: Vec<i128> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
    let max = *sums.iter().max()?;
    let mut winners = sums.iter().enumerate().filter(|(_, &s)| s == max);
    let first = winners.next()?.0;
    winners.next().is_none().then_some(first)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ForestCheck {
    pub is_forest: bool,
    pub max_degree: usize,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when `x` and `y` were already joined.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
        true
    }
}

pub fn forest_check(g: &Graph) -> ForestCheck {
    let mut uf = UnionFind::new(g.vertices.len());
    let is_forest = g
        .edges
        .iter()
        .all(|&(a, b)| uf.union(a as usize, b as usize));
    ForestCheck {
        is_forest,
        max_degree: g.degrees().into_iter().max().unwrap_or(0),
    }
}

fn is_tree(g: &Graph) -> bool {
    g.vertex_count() >= 1 && g.edge_count() + 1 == g.vertex_count() && forest_check(g).is_forest
}

/// A star `T_v`: a vertex and its children, all edges of one parity color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Star {
    pub center: u32,
    pub children: Vec<u32>,
    pub color: usize,
    /// `w'(center) = 0`, `w'(child_i) = e_i`, indexed like `[center, children..]`.
    pub split_weight: MultiWeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCertificate {
    pub tree: Graph,
    pub root: u32,
    pub depth: Vec<u32>,
    pub max_degree: usize,
    /// `w(v)(m) = (1 + (-1)^(δ(v) + m)) δ(v)` for `m ∈ Z/2`.
    pub parity_weight: MultiWeight,
    pub color_classes: Vec<Vec<(u32, u32)>>,
    pub stars: Vec<Star>,
    /// Every final component is a single edge.
    pub final_edges: Vec<(u32, u32)>,
    pub dim_budget: usize,
}

/// Reduces a tree to isolated edges by a parity coloring followed by star splitting.
pub fn tree_edge_reduction(t: &Graph, root: u32) -> Result<ReductionCertificate, PolyError> {
    if root as usize >= t.vertex_count() {
        return Err(PolyError::BadVertex(root as usize));
    }
    if !is_tree(t) {
        return Err(PolyError::NotATree);
    }
    let degrees = t.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    if t.edge_count() >= 2 && degrees[root as usize] == max_degree {
        return Err(PolyError::InvalidRoot(t.vertices[root as usize].clone()));
    }
    let adj = t.adjacency();
    let mut depth = vec![u32::MAX; t.vertex_count()];
    depth[root as usize] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v as usize] {
            if depth[u as usize] == u32::MAX {
                depth[u as usize] = depth[v as usize] + 1;
                queue.push_back(u);
            }
        }
    }
    let parity_weight: MultiWeight = depth
        .iter()
        .map(|&dv| {
            (0..2u32)
                .map(|m| if (dv + m) % 2 == 0 { 2 * dv as i128 } else { 0 })
                .collect()
        })
        .collect();
    let classes = color_split(t, &parity_weight)?;

    let mut stars = Vec::new();
    for (color, class) in classes.iter().enumerate() {
        let mut by_center: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &(a, b) in &class.edges {
            let (parent, child) = if depth[a as usize] < depth[b as usize] {
                (a, b)
            } else {
                (b, a)
            };
            by_center.entry(parent).or_default().push(child);
        }
        for (center, children) in by_center {
            let m = children.len();
            let mut split_weight = vec![vec![0i128; m]];
            split_weight.extend((0..m).map(|i| (0..m).map(|j| (i == j) as i128).collect()));
            stars.push(Star {
                center,
                children,
                color,
                split_weight,
            });
        }
    }
    let mut final_edges = Vec::new();
    for star in &stars {
        final_edges.extend(split_star(t, star)?);
    }
    final_edges.sort_unstable();
    let dim_budget = (0..2)
        .map(|color| {
            2 * stars
                .iter()
                .filter(|s| s.color == color)
                .map(|s| s.children.len())
                .max()
                .unwrap_or(0)
        })
        .sum();
    Ok(ReductionCertificate {
        tree: t.clone(),
        root,
        depth,
        max_degree,
        parity_weight,
        color_classes: classes
            .into_iter()
            .map(|g| g.edges.into_iter().collect())
            .collect(),
        stars,
        final_edges,
        dim_budget,
    })
}

/// Colors a star by its unit-vector weight; every color class must be one edge.
fn split_star(t: &Graph, star: &Star) -> Result<Vec<(u32, u32)>, PolyError> {
    let mut local = Graph::new(
        std::iter::once(star.center)
            .chain(star.children.iter().copied())
            .map(|v| t.vertices[v as usize].clone())
            .collect(),
    );
    for i in 0..star.children.len() {
        local.add_edge(0, i as u32 + 1);
    }
    let parts = color_split(&local, &star.split_weight)?;
    let global = |x: u32| {
        if x == 0 {
            star.center
        } else {
            star.children[x as usize - 1]
        }
    };
    let mut out = Vec::new();
    for part in parts {
        for (a, b) in part.edges {
            let (x, y) = (global(a), global(b));
            out.push((x.min(y), x.max(y)));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayOutcome {
    pub replayed: bool,
    pub components_are_edges: bool,
    pub budget_within_bound: bool,
}

impl ReplayOutcome {
    pub fn ok(&self) -> bool {
        self.replayed && self.components_are_edges && self.budget_within_bound
    }
}

/// Re-derives every recorded stage from the stored weights.
pub fn replay_certificate(c: &ReductionCertificate) -> ReplayOutcome {
    let t = &c.tree;
    let mut replayed = match color_split(t, &c.parity_weight) {
        Ok(classes) => classes
            .iter()
            .map(|g| g.edges.iter().copied().collect::<Vec<_>>())
            .eq(c.color_classes.iter().cloned()),
        Err(_) => false,
    };
    let mut edges = Vec::new();
    for star in &c.stars {
        // each star must be the center plus all its children in the recorded class
        let class = &c.color_classes[star.color];
        let star_ok = star.children.iter().all(|&ch| {
            let e = (star.center.min(ch), star.center.max(ch));
            class.contains(&e) && c.depth[ch as usize] == c.depth[star.center as usize] + 1
        });
        replayed &= star_ok;
        match split_star(t, star) {
            Ok(mut e) => edges.append(&mut e),
            Err(_) => replayed = false,
        }
    }
    edges.sort_unstable();
    replayed &= edges == c.final_edges;
    let all_tree_edges: Vec<(u32, u32)> = t.edges.iter().copied().collect();
    let components_are_edges = edges == all_tree_edges && {
        // each final piece is its own component: the split graph has no shared vertex within a color
        let parts = c.stars.iter().map(|s| s.children.len()).sum::<usize>();
        parts == edges.len()
    };
    let bound = if t.edge_count() <= 1 {
        2
    } else {
        4 * (c.max_degree - 1)
    };
    let budget_within_bound = if t.edge_count() == 1 {
        c.dim_budget == 2
    } else {
        c.dim_budget <= bound
    };
    ReplayOutcome {
        replayed,
        components_are_edges,
        budget_within_bound,
    }
}

const PALETTE: [&str; 8] = [
    "red",
    "blue",
    "darkgreen",
    "orange",
    "purple",
    "brown",
    "cyan",
    "magenta",
];

/// DOT text with vertices in index order; `coloring[k]` colors the `k`-th edge in sorted order.
pub fn dot_export(g: &Graph, name: &str, coloring: Option<&[usize]>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph \"{name}\" {{");
    let used: BTreeSet<u32> = g.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    for v in &used {
        let _ = writeln!(s, "  n{v} [label=\"{}\"];", g.vertices[*v as usize]);
    }
    for (k, &(a, b)) in g.edges.iter().enumerate() {
        match coloring.and_then(|c| c.get(k)) {
            Some(&c) => {
                let _ = writeln!(
                    s,
                    "  n{a} -- n{b} [color={}, colorindex={c}];",
                    PALETTE[c % PALETTE.len()]
                );
            }
            None => {
                let _ = writeln!(s, "  n{a} -- n{b};");
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Edge colors of `g` under `w`, in sorted edge order.
pub fn edge_colors(g: &Graph, w: &MultiWeight) -> Option<Vec<usize>> {
    g.edges.iter().map(|&(a, b)| edge_color(w, a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    fn path(n: usize) -> Graph {
        let mut g = Graph::with_size(n);
        for i in 1..n as u32 {
            g.add_edge(i - 1, i);
        }
        g
    }

    #[test]
    fn attach_examples() {
        let mut edge = Graph::new(vec!["a".into(), "b".into()]);
        edge.add_edge(0, 1);
        let p = attach(&edge);
        assert_eq!(
            p.triples.iter().copied().collect::<Vec<_>>(),
            vec![Triple::new(0, 1, 0)]
        );
        assert!(attach(&Graph::with_size(3)).is_empty());
        let mut tri = Graph::with_size(3);
        tri.add_edge(0, 1);
        tri.add_edge(1, 2);
        tri.add_edge(0, 2);
        let p = attach(&tri);
        assert_eq!(p.len(), 3);
        assert_eq!(p.as_attached_graph().unwrap(), tri);
    }

    #[test]
    fn gr_w_examples() {
        let mut p = Polygraph::new(labels(3), vec!["j".into()]);
        p.insert(0, 1, 0);
        p.insert(1, 2, 0);
        let q = gr_w(&p, &[0, 0, 1]).unwrap();
        assert_eq!(
            q.triples.iter().copied().collect::<Vec<_>>(),
            vec![Triple::new(1, 2, 0)]
        );
        assert_eq!(gr_w(&p, &[0, 0, 0]).unwrap(), p);
        // ties are kept
        assert_eq!(gr_w(&p, &[0, 5, 0]).unwrap(), p);
        assert!(gr_w(&p, &[0]).is_err());
    }

    #[test]
    fn level_split_examples() {
        let mut p = Polygraph::new(labels(2), vec!["j".into()]);
        p.insert(0, 1, 0);
        let one = level_split(&p, 1);
        assert_eq!(one.triples, p.triples);
        let two = level_split(&p, 2);
        assert_eq!(two.len(), 2);
        assert_eq!(two.vertices.len(), 4);
        assert!(two.triples.iter().all(|t| t.out == 0));
        assert!(two.triples.contains(&Triple::new(0, 2, 0)));
        assert!(two.triples.contains(&Triple::new(1, 3, 0)));
    }

    #[test]
    fn color_split_examples() {
        let g = path(3);
        let w = vec![vec![1, 0], vec![0, 0], vec![0, 1]];
        let parts = color_split(&g, &w).unwrap();
        assert_eq!(
            parts[0].edges.iter().copied().collect::<Vec<_>>(),
            vec![(0, 1)]
        );
        assert_eq!(
            parts[1].edges.iter().copied().collect::<Vec<_>>(),
            vec![(1, 2)]
        );
        let all_zero = vec![vec![1, 0]; 3];
        assert_eq!(color_split(&g, &all_zero).unwrap()[0].edges, g.edges);
        let tied = vec![vec![0, 0]; 3];
        assert!(matches!(
            color_split(&g, &tied),
            Err(PolyError::TiedMaximum { .. })
        ));
    }

    #[test]
    fn forest_examples() {
        assert_eq!(
            forest_check(&path(3)),
            ForestCheck {
                is_forest: true,
                max_degree: 2
            }
        );
        let mut tri = path(3);
        tri.add_edge(0, 2);
        assert!(!forest_check(&tri).is_forest);
    }

    fn dfs_has_cycle(g: &Graph) -> bool {
        let adj = g.adjacency();
        let mut seen = vec![false; g.vertex_count()];
        for s in 0..g.vertex_count() {
            if seen[s] {
                continue;
            }
            let mut stack = vec![(s as u32, u32::MAX)];
            seen[s] = true;
            while let Some((v, parent)) = stack.pop() {
                for &u in &adj[v as usize] {
                    if u == parent {
                        continue;
                    }
                    if seen[u as usize] {
                        return true;
                    }
                    seen[u as usize] = true;
                    stack.push((u, v));
                }
            }
        }
        false
    }

    #[test]
    fn forest_check_matches_dfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=50);
            let mut g = Graph::with_size(n);
            let m = rng.gen_range(0..=n + 2);
            for _ in 0..m {
                let (a, b) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
                if a != b {
                    g.add_edge(a, b);
                }
            }
            assert_eq!(forest_check(&g).is_forest, !dfs_has_cycle(&g));
        }
    }

    #[test]
    fn reduction_examples() {
        let mut edge = Graph::with_size(2);
        edge.add_edge(0, 1);
        let c = tree_edge_reduction(&edge, 0).unwrap();
        assert_eq!(c.dim_budget, 2);
        assert!(replay_certificate(&c).ok());

        let p = path(3);
        let c = tree_edge_reduction(&p, 0).unwrap();
        assert_eq!(c.dim_budget, 4);
        // T_a = {a, b} has color 1 and T_b = {b, c} color 0
        assert_eq!(c.color_classes[1], vec![(0, 1)]);
        assert_eq!(c.color_classes[0], vec![(1, 2)]);
        assert!(replay_certificate(&c).ok());
        assert!(matches!(
            tree_edge_reduction(&p, 1),
            Err(PolyError::InvalidRoot(_))
        ));

        let mut star = Graph::with_size(4);
        for leaf in 1..4 {
            star.add_edge(0, leaf);
        }
        let c = tree_edge_reduction(&star, 1).unwrap();
        assert!(c.dim_budget <= 8);
        assert!(replay_certificate(&c).ok());
        assert!(matches!(
            tree_edge_reduction(&path(3).with_edges([(0, 1), (1, 2), (0, 2)].into()), 0),
            Err(PolyError::NotATree)
        ));
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let c = tree_edge_reduction(&path(5), 0).unwrap();
        let mut bad = c.clone();
        bad.final_edges.pop();
        assert!(!replay_certificate(&bad).ok());
        let mut bad = c;
        bad.dim_budget = 100;
        assert!(!replay_certificate(&bad).ok());
    }

    #[test]
    fn dot_examples() {
        assert_eq!(
            dot_export(&Graph::with_size(0), "g", None),
            "graph \"g\" {\n}\n"
        );
        let mut e = Graph::with_size(2);
        e.add_edge(0, 1);
        let dot = dot_export(&e, "g", Some(&[1]));
        assert_eq!(dot.matches("--").count(), 1);
        assert!(dot.contains("color=blue"));
    }

    fn random_polygraph() -> impl Strategy<Value = (Polygraph, Vec<i128>)> {
        (2usize..8, 1usize..4).prop_flat_map(|(n, j)| {
            let triples = proptest::collection::vec((0..n as u32, 0..n as u32, 0..j as u32), 0..20);
            let w = proptest::collection::vec(-5i128..5, n);
            (Just(n), Just(j), triples, w).prop_map(|(n, j, ts, w)| {
                let mut p = Polygraph::new(labels(n), labels(j));
                for (a, b, o) in ts {
                    if a != b {
                        p.insert(a, b, o);
                    }
                }
                (p, w)
            })
        })
    }

    proptest! {
        #[test]
        fn gr_w_idempotent((p, w) in random_polygraph()) {
            let once = gr_w(&p, &w).unwrap();
            prop_assert_eq!(gr_w(&once, &w).unwrap(), once.clone());
            prop_assert!(once.triples.is_subset(&p.triples));
            // every output present before is still present
            prop_assert_eq!(once.by_output().len(), p.by_output().len());
            prop_assert_eq!(gr_w(&p, &vec![0; p.vertices.len()]).unwrap(), p);
        }

        #[test]
        fn color_split_partitions(edges in proptest::collection::vec((0u32..10, 0u32..10), 0..30), seed in 0u64..1000) {
            let mut g = Graph::with_size(10);
            for (a, b) in edges {
                if a != b {
                    g.add_edge(a, b);
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // distinct powers of two make every level sum unique per edge
            let w: MultiWeight = (0..10)
                .map(|_| (0..3).map(|_| 1i128 << rng.gen_range(0..60)).collect())
                .collect();
            if let Ok(parts) = color_split(&g, &w) {
                let mut union = BTreeSet::new();
                let mut total = 0;
                for part in &parts {
                    total += part.edge_count();
                    union.extend(part.edges.iter().copied());
                }
                prop_assert_eq!(total, g.edge_count());
                prop_assert_eq!(union, g.edges.clone());
            }
        }
    }
}
