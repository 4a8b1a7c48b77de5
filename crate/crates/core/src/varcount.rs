//! Point counts of symplectic graph varieties
//! `{(w_v) : ω(w_u, w_v) = 0 for every edge uv}` over finite local rings, and
//! small tables of `ζ_{SL_2(F_q)}(2n - 2)` for the Lang–Weil trend.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num::{BigInt, BigRational, One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charzeta::{zeta_even, GroupTables};
use crate::exact::{Integer, Rational};
use crate::localring::{is_prime, LocalRing, LocalRingSpec, RingElem, RingError};
use crate::modgroup::{build_sl, GroupError};
use crate::polygraph::Graph;
use crate::wordmap::zeta_from_fibers;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Naive enumeration refuses instances with more raw assignments than this.
pub const NAIVE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum CountError {
    #[error("count needs more than the budget of {budget} candidate vectors")]
    BudgetExceeded { budget: u64 },
    #[error("dimension {0} is not an even number >= 2")]
    OddDimension(u32),
    #[error("edge {a}-{b} joins spaces of different dimension")]
    DimensionMismatch { a: u32, b: u32 },
    #[error("expected {expected} vertex dimensions, got {got}")]
    DimensionCount { expected: usize, got: usize },
    #[error("vertex order is not a permutation of 0..{0}")]
    BadOrder(usize),
    #[error("cannot parse graph '{0}'")]
    GraphParse(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("zeta evaluation failed: {0}")]
    Zeta(String),
}

/// A graph with a symplectic space `R^{dim}` at each vertex.
#[derive(Clone, Debug)]
pub struct GraphVarietyInstance {
    pub graph: Graph,
    pub dims: Vec<u32>,
    pub ring: LocalRingSpec,
}

impl GraphVarietyInstance {
    pub fn new(graph: Graph, dims: Vec<u32>, ring: LocalRingSpec) -> Result<Self, CountError> {
        if dims.len() != graph.vertex_count() {
            return Err(CountError::DimensionCount {
                expected: graph.vertex_count(),
                got: dims.len(),
            });
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2 || d % 2 == 1) {
            return Err(CountError::OddDimension(d));
        }
        for &(a, b) in &graph.edges {
            if dims[a as usize] != dims[b as usize] {
                return Err(CountError::DimensionMismatch { a, b });
            }
        }
        Ok(GraphVarietyInstance { graph, dims, ring })
    }

    /// Every vertex carries `R^dim`.
    pub fn uniform(graph: Graph, dim: u32, ring: LocalRingSpec) -> Result<Self, CountError> {
        let n = graph.vertex_count();
        Self::new(graph, vec![dim; n], ring)
    }

    pub fn total_dim(&self) -> u64 {
        self.dims.iter().map(|&d| d as u64).sum()
    }

    pub fn expected_dimension(&self) -> i64 {
        self.total_dim() as i64 - self.graph.edge_count() as i64
    }

    /// `|R|^{Σ dim}`, saturating.
    pub fn raw_candidates(&self) -> u128 {
        let card = self.ring.cardinality() as u128;
        let mut acc: u128 = 1;
        for _ in 0..self.total_dim() {
            acc = acc.saturating_mul(card);
        }
        acc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub ring: String,
    pub vertices: usize,
    pub edges: usize,
    pub total_dim: u64,
    pub count: Integer,
    pub expected_dimension: i64,
    pub normalized: Rational,
}

fn normalize(count: &BigInt, ring: &LocalRingSpec, expdim: i64) -> BigRational {
    let scale = BigInt::from(ring.cardinality()).pow(expdim.unsigned_abs() as u32);
    let c = BigRational::from_integer(count.clone());
    if expdim >= 0 {
        c / BigRational::from_integer(scale)
    } else {
        c * BigRational::from_integer(scale)
    }
}

fn report(inst: &GraphVarietyInstance, count: BigInt) -> CountReport {
    let expdim = inst.expected_dimension();
    CountReport {
        ring: inst.ring.to_string(),
        vertices: inst.graph.vertex_count(),
        edges: inst.graph.edge_count(),
        total_dim: inst.total_dim(),
        normalized: normalize(&count, &inst.ring, expdim).into(),
        count: Integer(count),
        expected_dimension: expdim,
    }
}

/// The functional `y -> ω(x, y)` for the standard block form
/// `ω(x, y) = Σ_k x_{2k} y_{2k+1} - x_{2k+1} y_{2k}`.
fn pairing_row(ring: &LocalRing, x: &[u32]) -> Vec<u32> {
    let mut row = vec![0u32; x.len()];
    for k in 0..x.len() / 2 {
        row[2 * k] = ring.neg_codes(x[2 * k + 1]);
        row[2 * k + 1] = x[2 * k];
    }
    row
}

fn dot(ring: &LocalRing, a: &[u32], b: &[u32]) -> u32 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| ring.add_codes(acc, ring.mul_codes(x, y)))
}

/// `log_q` of the number of solutions of `M y = 0` in `R^n`, where `q` is the
/// residue field size. Diagonalizes `M` by pivoting on an entry of least
/// valuation; a pivot of valuation `e` contributes `min(e, r)` and each free
/// column contributes `r`.
pub fn kernel_log_size(ring: &LocalRing, rows: &[Vec<u32>], n: usize) -> u64 {
    let r = ring.level() as u64;
    let mut m: Vec<Vec<u32>> = rows
        .iter()
        .filter(|row| row.iter().any(|&c| c != 0))
        .cloned()
        .collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut log = 0u64;
    while !cols.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate() {
            for (ci, &j) in cols.iter().enumerate() {
                if let Some(v) = ring.valuation(RingElem(row[j])) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, ci));
                    }
                }
            }
        }
        let Some((e, pi, pci)) = best else { break };
        let pj = cols[pci];
        let pivot_row = m.swap_remove(pi);
        let unit = ring.div_uniformizer_pow(RingElem(pivot_row[pj]), e);
        let unit_inv = ring.inverse(unit).expect("pivot cofactor is a unit");
        for row in m.iter_mut() {
            if row[pj] == 0 {
                continue;
            }
            let f = ring.mul(ring.div_uniformizer_pow(RingElem(row[pj]), e), unit_inv);
            for &j in &cols {
                let sub = ring.mul_codes(f.0, pivot_row[j]);
                row[j] = ring.add_codes(row[j], ring.neg_codes(sub));
            }
        }
        // column operations would now clear the rest of the pivot row without
        // touching the other rows, whose pivot-column entries are zero
        cols.swap_remove(pci);
        log += (e as u64).min(r);
        m.retain(|row| cols.iter().any(|&j| row[j] != 0));
    }
    log + r * cols.len() as u64
}

struct Dfs<'a> {
    ring: LocalRing,
    inst: &'a GraphVarietyInstance,
    order: Vec<usize>,
    /// For each position, the earlier positions adjacent to it.
    earlier: Vec<Vec<usize>>,
    /// Whether some later vertex is adjacent, which forces enumeration.
    enumerate: Vec<bool>,
    budget: u64,
    work: AtomicU64,
}

impl<'a> Dfs<'a> {
    fn new(inst: &'a GraphVarietyInstance, order: Vec<usize>, budget: u64) -> Self {
        let n = order.len();
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut earlier = vec![Vec::new(); n];
        let mut enumerate = vec![false; n];
        for &(a, b) in &inst.graph.edges {
            let (pa, pb) = (pos[a as usize], pos[b as usize]);
            let (lo, hi) = (pa.min(pb), pa.max(pb));
            earlier[hi].push(lo);
            enumerate[lo] = true;
        }
        Dfs {
            ring: LocalRing::new(inst.ring),
            inst,
            order,
            earlier,
            enumerate,
            budget,
            work: AtomicU64::new(0),
        }
    }

    fn constraints(&self, i: usize, assigned: &[Vec<u32>]) -> Vec<Vec<u32>> {
        self.earlier[i]
            .iter()
            .map(|&j| pairing_row(&self.ring, &assigned[j]))
            .collect()
    }

    fn charge(&self, amount: u64) -> Result<(), CountError> {
        let done = self
            .work
            .fetch_add(amount, Ordering::Relaxed)
            .saturating_add(amount);
        if done > self.budget {
            Err(CountError::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn candidates(&self, i: usize, assigned: &[Vec<u32>]) -> Result<Vec<Vec<u32>>, CountError> {
        let dim = self.inst.dims[self.order[i]] as usize;
        let card = self.ring.cardinality();
        let total = (card as u64).saturating_pow(dim as u32);
        self.charge(total)?;
        let rows = self.constraints(i, assigned);
        let mut out = Vec::new();
        let mut x = vec![0u32; dim];
        for _ in 0..total {
            if rows.iter().all(|row| dot(&self.ring, row, &x) == 0) {
                out.push(x.clone());
            }
            for c in x.iter_mut() {
                *c += 1;
                if *c < card {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }

    fn count_from(&self, i: usize, assigned: &mut Vec<Vec<u32>>) -> Result<BigInt, CountError> {
        if i == self.order.len() {
            return Ok(BigInt::one());
        }
        if !self.enumerate[i] {
            let dim = self.inst.dims[self.order[i]] as usize;
            let log = kernel_log_size(&self.ring, &self.constraints(i, assigned), dim);
            let here = BigInt::from(self.inst.ring.residue_size()).pow(log as u32);
            assigned.push(Vec::new());
            let rest = self.count_from(i + 1, assigned);
            assigned.pop();
            return Ok(here * rest?);
        }
        let mut total = BigInt::zero();
        for x in self.candidates(i, assigned)? {
            assigned.push(x);
            total += self.count_from(i + 1, assigned)?;
            assigned.pop();
        }
        Ok(total)
    }

    /// Splits the first enumerated level over the worker pool.
    fn run(&self) -> Result<BigInt, CountError> {
        let mut prefix = Vec::new();
        let mut factor = BigInt::one();
        let mut i = 0;
        while i < self.order.len() && !self.enumerate[i] {
            let dim = self.inst.dims[self.order[i]];
            factor *= BigInt::from(self.inst.ring.cardinality()).pow(dim);
            prefix.push(Vec::new());
            i += 1;
        }
        if i == self.order.len() {
            return Ok(factor);
        }
        let first = self.candidates(i, &prefix)?;
        let parts: Result<Vec<BigInt>, CountError> = first
            .into_par_iter()
            .map(|x| {
                let mut assigned = prefix.clone();
                assigned.push(x);
                self.count_from(i + 1, &mut assigned)
            })
            .collect();
        Ok(factor * parts?.into_iter().sum::<BigInt>())
    }
}

/// Exact count, processing vertices in index order.
pub fn count_graph_variety(
    inst: &GraphVarietyInstance,
    budget: u64,
) -> Result<CountReport, CountError> {
    count_with_order(
        inst,
        &(0..inst.graph.vertex_count()).collect::<Vec<_>>(),
        budget,
    )
}

/// Exact count with an explicit vertex processing order.
pub fn count_with_order(
    inst: &GraphVarietyInstance,
    order: &[usize],
    budget: u64,
) -> Result<CountReport, CountError> {
    let n = inst.graph.vertex_count();
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(CountError::BadOrder(n));
        }
    }
    if order.len() != n {
        return Err(CountError::BadOrder(n));
    }
    let count = Dfs::new(inst, order.to_vec(), budget).run()?;
    Ok(report(inst, count))
}

/// Full enumeration of `R^{Σ dim}` with every edge checked.
pub fn count_naive(inst: &GraphVarietyInstance) -> Result<BigInt, CountError> {
    let raw = inst.raw_candidates();
    if raw > NAIVE_LIMIT as u128 {
        return Err(CountError::BudgetExceeded {
            budget: NAIVE_LIMIT,
        });
    }
    let ring = LocalRing::new(inst.ring);
    let card = ring.cardinality();
    let offsets: Vec<usize> = inst
        .dims
        .iter()
        .scan(0usize, |acc, &d| {
            let o = *acc;
            *acc += d as usize;
            Some(o)
        })
        .collect();
    let total_dim = inst.total_dim() as usize;
    let mut x = vec![0u32; total_dim];
    let mut count = 0u64;
    for _ in 0..raw as u64 {
        let ok = inst.graph.edges.iter().all(|&(a, b)| {
            let (a, b) = (a as usize, b as usize);
            let wa = &x[offsets[a]..offsets[a] + inst.dims[a] as usize];
            let wb = &x[offsets[b]..offsets[b] + inst.dims[b] as usize];
            dot(&ring, &pairing_row(&ring, wa), wb) == 0
        });
        count += ok as u64;
        for c in x.iter_mut() {
            *c += 1;
            if *c < card {
                break;
            }
            *c = 0;
        }
    }
    Ok(BigInt::from(count))
}

/// `q^3 + q^2 - q`, the single-edge count for `dim = 2` over `F_q`.
pub fn single_edge_closed_form(q: u64) -> u64 {
    q * q * q + q * q - q
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceRow {
    pub r: u32,
    pub count: Integer,
    pub normalized: Rational,
    pub difference: Option<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizedSequence {
    pub p: u32,
    pub rows: Vec<SequenceRow>,
    /// Set when a level ran out of budget; rows then stop early.
    pub truncated: bool,
}

/// Normalized counts over `Z/p^r` for `r = 1..=r_max`.
pub fn normalized_sequence(
    graph: &Graph,
    dim: u32,
    p: u32,
    r_max: u32,
    budget: u64,
) -> Result<NormalizedSequence, CountError> {
    let mut rows: Vec<SequenceRow> = Vec::new();
    let mut truncated = false;
    for r in 1..=r_max {
        let ring = match LocalRingSpec::zmod(p, r) {
            Ok(ring) => ring,
            Err(RingError::TooLarge(_)) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e.into()),
        };
        let inst = GraphVarietyInstance::uniform(graph.clone(), dim, ring)?;
        let rep = match count_graph_variety(&inst, budget) {
            Ok(rep) => rep,
            Err(CountError::BudgetExceeded { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let difference = rows
            .last()
            .map(|prev| Rational(&rep.normalized.0 - &prev.normalized.0));
        rows.push(SequenceRow {
            r,
            count: rep.count,
            normalized: rep.normalized,
            difference,
        });
    }
    Ok(NormalizedSequence { p, rows, truncated })
}

/// `q = p^f` split into `(p, f)`.
pub fn prime_power(q: u64) -> Result<(u32, u32), CountError> {
    if q < 2 {
        return Err(CountError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    if rest != 1 || !is_prime(p) {
        return Err(CountError::NotPrimePower(q));
    }
    Ok((p as u32, f))
}

/// `F_q` as a ring spec: `Z/p` for primes, the Galois field otherwise.
pub fn finite_field(q: u64) -> Result<LocalRingSpec, CountError> {
    let (p, f) = prime_power(q)?;
    Ok(if f == 1 {
        LocalRingSpec::zmod(p, 1)?
    } else {
        LocalRingSpec::galois_field(p, f)?
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LangWeilEntry {
    pub q: u64,
    pub order: Option<u64>,
    pub zeta: Option<Rational>,
    pub deviation: Option<Rational>,
    /// The character-degree value and the fiber-count value coincide.
    pub paths_agree: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LangWeilReport {
    pub n: u32,
    pub s: u32,
    pub entries: Vec<LangWeilEntry>,
}

impl LangWeilReport {
    pub fn value(&self, q: u64) -> Option<&Rational> {
        self.entries
            .iter()
            .find(|e| e.q == q)
            .and_then(|e| e.zeta.as_ref())
    }

    /// Every computed value lies strictly between 1 and 2.
    pub fn all_in_unit_band(&self) -> bool {
        let (one, two) = (BigRational::one(), BigRational::from_integer(2.into()));
        self.entries
            .iter()
            .all(|e| e.zeta.as_ref().is_some_and(|z| z.0 > one && z.0 < two))
    }
}

impl fmt::Display for LangWeilReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q\torder\tzeta({})\tzeta-1", self.s)?;
        for e in &self.entries {
            match (&e.zeta, &e.deviation, &e.error) {
                (Some(z), Some(d), _) => {
                    writeln!(f, "{}\t{}\t{}\t{}", e.q, e.order.unwrap_or(0), z, d)?
                }
                (_, _, Some(err)) => writeln!(f, "{}\t-\t-\t-\t{}", e.q, err)?,
                _ => writeln!(f, "{}\t-\t-\t-", e.q)?,
            }
        }
        Ok(())
    }
}

fn langweil_entry(q: u64, n: u32, budget: u64, seed: u64) -> Result<LangWeilEntry, CountError> {
    let ring = finite_field(q)?;
    let t = GroupTables::new(build_sl(2, ring, budget)?);
    let s = 2 * n - 2;
    let zeta = zeta_even(&t, s, seed).map_err(|e| CountError::Zeta(e.to_string()))?;
    let from_fibers = zeta_from_fibers(&t, n).map_err(|e| CountError::Zeta(e.to_string()))?;
    Ok(LangWeilEntry {
        q,
        order: Some(t.order()),
        deviation: Some(Rational(&zeta - BigRational::one())),
        paths_agree: Some(zeta == from_fibers),
        zeta: Some(zeta.into()),
        error: None,
    })
}

/// `ζ_{SL_2(F_q)}(2n - 2)` for each `q`; failures are recorded per entry.
pub fn langweil_report(q_list: &[u64], n: u32, budget: u64, seed: u64) -> LangWeilReport {
    let n = n.max(2);
    let entries = q_list
        .par_iter()
        .map(|&q| {
            langweil_entry(q, n, budget, seed).unwrap_or_else(|e| LangWeilEntry {
                q,
                order: None,
                zeta: None,
                deviation: None,
                paths_agree: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    LangWeilReport {
        n,
        s: 2 * n - 2,
        entries,
    }
}

/// Graph shapes accepted on the command line: `edge`, `path:n`, `cycle:n`,
/// `star:n` (n leaves), `complete:n`, `empty:n`, or an edge list `0-1,1-2`.
#[derive(Clone, Debug)]
pub struct GraphShape(pub Graph);

impl FromStr for GraphShape {
    type Err = CountError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CountError::GraphParse(s.to_string());
        let size = |arg: &str| arg.parse::<usize>().map_err(|_| bad());
        let g = match s.split_once(':') {
            None if s == "edge" => edges_graph(2, &[(0, 1)]),
            None => {
                let mut edges = Vec::new();
                let mut n = 0;
                for part in s.split(',') {
                    let (a, b) = part.split_once('-').ok_or_else(bad)?;
                    let (a, b): (u32, u32) = (
                        a.trim().parse().map_err(|_| bad())?,
                        b.trim().parse().map_err(|_| bad())?,
                    );
                    if a == b {
                        return Err(bad());
                    }
                    n = n.max(a.max(b) as usize + 1);
                    edges.push((a, b));
                }
                edges_graph(n, &edges)
            }
            Some(("path", k)) => {
                let k = size(k)?;
                edges_graph(k, &(1..k as u32).map(|i| (i - 1, i)).collect::<Vec<_>>())
            }
            Some(("cycle", k)) => {
                let k = size(k)?;
                if k < 3 {
                    return Err(bad());
                }
                edges_graph(
                    k,
                    &(0..k as u32)
                        .map(|i| (i, (i + 1) % k as u32))
                        .collect::<Vec<_>>(),
                )
            }
            Some(("star", k)) => {
                let k = size(k)?;
                edges_graph(k + 1, &(1..=k as u32).map(|i| (0, i)).collect::<Vec<_>>())
            }
            Some(("complete", k)) => {
                let k = size(k)? as u32;
                let edges: Vec<_> = (0..k)
                    .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
                    .collect();
                edges_graph(k as usize, &edges)
            }
            Some(("empty", k)) => Graph::with_size(size(k)?),
            _ => return Err(bad()),
        };
        Ok(GraphShape(g))
    }
}

fn edges_graph(n: usize, edges: &[(u32, u32)]) -> Graph {
    let mut g = Graph::with_size(n);
    for &(a, b) in edges {
        g.add_edge(a, b);
    }
    g
}

/// A small random instance with `dim = 2`, for order and oracle comparisons.
pub fn random_instance<R: Rng>(rng: &mut R) -> GraphVarietyInstance {
    let rings = ["zmod:2^1", "zmod:3^1", "zmod:2^2", "tpoly:2^2", "gf:2^2"];
    let ring: LocalRingSpec = rings.choose(rng).unwrap().parse().unwrap();
    let n = rng.gen_range(1..=4);
    let mut g = Graph::with_size(n);
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.gen_bool(0.5) {
                g.add_edge(a, b);
            }
        }
    }
    GraphVarietyInstance::uniform(g, 2, ring).expect("dimension 2 is valid")
}
