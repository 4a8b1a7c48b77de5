//! Structure polygraphs of `sl_d`, `so_d` and `sp_2d` in fixed bases, the weight
//! pipelines that degenerate them to forests, and the bound constants `B(g)`.
//!
//! Every published closed form is an independent predicate. The pipelines compute
//! each stage from the commutators and record any mismatch as a discrepancy.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::polygraph::{
    dot_export, edge_color, flatten_levels, forest_check, gr_w, level_split, Graph, MultiWeight,
    Polygraph, ScalarWeight, Triple,
};

type Q = Ratio<i64>;

const EXAMPLE_LIMIT: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("{ty} needs d >= {min}, got {d}")]
    BadRank { ty: LieType, d: u32, min: u32 },
    #[error("unknown simple type '{0}'")]
    UnknownType(String),
    #[error("no simple factors given")]
    EmptyFactors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LieType {
    Sl,
    So,
    Sp,
}

impl LieType {
    pub fn min_rank(self) -> u32 {
        match self {
            LieType::Sl => 2,
            LieType::So => 3,
            LieType::Sp => 1,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LieType::Sl => "sl",
            LieType::So => "so",
            LieType::Sp => "sp",
        })
    }
}

impl FromStr for LieType {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, LieError> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(LieType::Sl),
            "so" => Ok(LieType::So),
            "sp" => Ok(LieType::Sp),
            _ => Err(LieError::UnknownType(s.to_string())),
        }
    }
}

/// Basis and coordinate labels, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BasisLabel {
    /// `(i, j)`: matrix units in `sl`, the `A`-block in `sp` (with `(d, d)` the identity block).
    Ordered(u32, u32),
    /// `{i, j}` with `i < j`.
    Subset(u32, u32),
    /// `([i, j], ±1)` with `i <= j`; `-1` is the upper right block.
    Multiset(u32, u32, i8),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasisLabel::Ordered(i, j) => write!(f, "({i},{j})"),
            BasisLabel::Subset(i, j) => write!(f, "{{{i},{j}}}"),
            BasisLabel::Multiset(i, j, s) => {
                write!(f, "[{i},{j}]{}", if s < 0 { '-' } else { '+' })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub row: u32,
    pub col: u32,
    pub val: Q,
}

fn entry(row: u32, col: u32, val: Q) -> Entry {
    Entry { row, col, val }
}

/// Sparse basis matrices and coordinate functionals; `I = J` share one label list.
#[derive(Clone, Debug)]
pub struct LieBasisSpec {
    pub ty: LieType,
    pub d: u32,
    pub matrix_size: u32,
    pub labels: Vec<BasisLabel>,
    pub basis: Vec<Vec<Entry>>,
    /// `coords[l]` evaluates `Σ val · X[row][col]`.
    pub coords: Vec<Vec<Entry>>,
    index: HashMap<BasisLabel, u32>,
}

impl LieBasisSpec {
    pub fn new(ty: LieType, d: u32) -> Result<Self, LieError> {
        if d < ty.min_rank() {
            return Err(LieError::BadRank {
                ty,
                d,
                min: ty.min_rank(),
            });
        }
        let (labels, basis, coords, size) = match ty {
            LieType::Sl => sl_basis(d),
            LieType::So => so_basis(d),
            LieType::Sp => sp_basis(d),
        };
        let index = labels
            .iter()
            .enumerate()
            .map(|(k, l)| (*l, k as u32))
            .collect();
        Ok(LieBasisSpec {
            ty,
            d,
            matrix_size: size,
            labels,
            basis,
            coords,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, label: &BasisLabel) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn label_names(&self) -> Vec<String> {
        self.labels.iter().map(ToString::to_string).collect()
    }
}

type BasisParts = (Vec<BasisLabel>, Vec<Vec<Entry>>, Vec<Vec<Entry>>, u32);

/// `e'_{ij} - tr(e'_{ij})/d · Id` as `d × d` entries offset by `(r0, c0)` and scaled.
fn traceless_unit(d: u32, i: u32, j: u32, scale: Q, transpose: bool, off: u32) -> Vec<Entry> {
    let (i, j) = if transpose { (j, i) } else { (i, j) };
    if i != j {
        return vec![entry(off + i, off + j, scale)];
    }
    let corr = Q::new(1, d as i64);
    (0..d)
        .map(|k| {
            let v = if k == i { Q::one() - corr } else { -corr };
            entry(off + k, off + k, v * scale)
        })
        .filter(|e| !e.val.is_zero())
        .collect()
}

fn sl_basis(d: u32) -> BasisParts {
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    let mut coords = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if (i, j) == (d - 1, d - 1) {
                continue;
            }
            labels.push(BasisLabel::Ordered(i + 1, j + 1));
            basis.push(traceless_unit(d, i, j, Q::one(), false, 0));
            coords.push(vec![entry(i, j, Q::one())]);
        }
    }
    (labels, basis, coords, d)
}

fn so_basis(d: u32) -> BasisParts {
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    let mut coords = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            labels.push(BasisLabel::Subset(i + 1, j + 1));
            basis.push(vec![entry(j, i, Q::one()), entry(i, j, -Q::one())]);
            coords.push(vec![entry(j, i, Q::one())]);
        }
    }
    (labels, basis, coords, d)
}

fn sp_basis(d: u32) -> BasisParts {
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    let mut coords = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if (i, j) == (d - 1, d - 1) {
                continue;
            }
            labels.push(BasisLabel::Ordered(i + 1, j + 1));
            let mut e = traceless_unit(d, i, j, Q::one(), false, 0);
            e.extend(traceless_unit(d, i, j, -Q::one(), true, d));
            basis.push(e);
            coords.push(vec![entry(i, j, Q::one())]);
        }
    }
    labels.push(BasisLabel::Ordered(d, d));
    basis.push(
        (0..d)
            .flat_map(|k| [entry(k, k, Q::one()), entry(d + k, d + k, -Q::one())])
            .collect(),
    );
    coords.push((0..d).map(|k| entry(k, k, Q::one())).collect());
    for sign in [-1i8, 1] {
        for i in 0..d {
            for j in i..d {
                labels.push(BasisLabel::Multiset(i + 1, j + 1, sign));
                // upper block for -1, its transpose for +1
                let place = |r: u32, c: u32| if sign < 0 { (r, d + c) } else { (d + r, c) };
                let (r, c) = place(i, j);
                if i == j {
                    basis.push(vec![entry(r, c, Q::from_integer(2))]);
                    coords.push(vec![entry(r, c, Q::new(1, 2))]);
                } else {
                    let (r2, c2) = place(j, i);
                    basis.push(vec![entry(r, c, Q::one()), entry(r2, c2, Q::one())]);
                    coords.push(vec![entry(r, c, Q::one())]);
                }
            }
        }
    }
    (labels, basis, coords, 2 * d)
}

/// `a_{abl} = α_l([e_a, e_b])`, nonzero values only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureConstant {
    pub a: u32,
    pub b: u32,
    pub l: u32,
    pub value: Q,
}

type SparseMatrix = Vec<(u32, u32, Q)>;

/// All nonzero brackets `[e_a, e_b]` for `a != b`, as sparse matrices, grouped by `a`.
fn all_brackets(spec: &LieBasisSpec) -> Vec<Vec<(u32, SparseMatrix)>> {
    let size = spec.matrix_size as usize;
    let mut row_index: Vec<Vec<(u32, u32, Q)>> = vec![Vec::new(); size];
    let mut col_index: Vec<Vec<(u32, u32, Q)>> = vec![Vec::new(); size];
    for (b, ents) in spec.basis.iter().enumerate() {
        for e in ents {
            row_index[e.row as usize].push((b as u32, e.col, e.val));
            col_index[e.col as usize].push((b as u32, e.row, e.val));
        }
    }
    (0..spec.dim())
        .into_par_iter()
        .map(|a| {
            let mut prods: Vec<(u32, u32, u32, Q)> = Vec::new();
            for e in &spec.basis[a] {
                // A(r, k) B(k, c) with k = e.col
                for &(b, c, w) in &row_index[e.col as usize] {
                    prods.push((b, e.row, c, e.val * w));
                }
                // B(r, k) A(k, c) with k = e.row
                for &(b, r, w) in &col_index[e.row as usize] {
                    prods.push((b, r, e.col, -(w * e.val)));
                }
            }
            prods.sort_unstable_by_key(|&(b, r, c, _)| (b, r, c));
            let mut out: Vec<(u32, SparseMatrix)> = Vec::new();
            let mut k = 0;
            while k < prods.len() {
                let (b, r, c, _) = prods[k];
                let mut sum = Q::zero();
                while k < prods.len() && (prods[k].0, prods[k].1, prods[k].2) == (b, r, c) {
                    sum += prods[k].3;
                    k += 1;
                }
                if b as usize == a || sum.is_zero() {
                    continue;
                }
                match out.last_mut() {
                    Some((lb, m)) if *lb == b => m.push((r, c, sum)),
                    _ => out.push((b, vec![(r, c, sum)])),
                }
            }
            out
        })
        .collect()
}

pub fn structure_constants(spec: &LieBasisSpec) -> Vec<StructureConstant> {
    let mut coord_at: HashMap<(u32, u32), Vec<(u32, Q)>> = HashMap::new();
    for (l, f) in spec.coords.iter().enumerate() {
        for e in f {
            coord_at
                .entry((e.row, e.col))
                .or_default()
                .push((l as u32, e.val));
        }
    }
    let brackets = all_brackets(spec);
    let mut out = Vec::new();
    for (a, row) in brackets.iter().enumerate() {
        for (b, m) in row {
            let mut acc: BTreeMap<u32, Q> = BTreeMap::new();
            for &(r, c, v) in m {
                if let Some(fs) = coord_at.get(&(r, c)) {
                    for &(l, coef) in fs {
                        *acc.entry(l).or_insert_with(Q::zero) += coef * v;
                    }
                }
            }
            out.extend(
                acc.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(l, value)| StructureConstant {
                        a: a as u32,
                        b: *b,
                        l,
                        value,
                    }),
            );
        }
    }
    out
}

/// `a_{abl} = -a_{bal}` with both orders computed independently.
pub fn antisymmetry_holds(consts: &[StructureConstant]) -> bool {
    let map: HashMap<(u32, u32, u32), Q> =
        consts.iter().map(|c| ((c.a, c.b, c.l), c.value)).collect();
    consts
        .iter()
        .all(|c| map.get(&(c.b, c.a, c.l)) == Some(&-c.value))
}

pub fn structure_polygraph(spec: &LieBasisSpec) -> Polygraph {
    let names = spec.label_names();
    let mut p = Polygraph::new(names.clone(), names);
    for c in structure_constants(spec) {
        p.insert(c.a, c.b, c.l);
    }
    p
}

/// Expands `[e_a, e_b]` in the basis itself and checks closure and the Jacobi identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub closed_under_bracket: bool,
    pub jacobi: bool,
    pub triples_checked: usize,
}

pub fn jacobi_check(spec: &LieBasisSpec) -> JacobiReport {
    let n = spec.dim();
    let size = spec.matrix_size as usize;
    let flat = |r: u32, c: u32| r as usize * size + c as usize;
    // rows of the transposed basis matrix, reduced to find pivot entries
    let mut rows: Vec<Vec<Q>> = spec
        .basis
        .iter()
        .map(|ents| {
            let mut v = vec![Q::zero(); size * size];
            for e in ents {
                v[flat(e.row, e.col)] += e.val;
            }
            v
        })
        .collect();
    let dense = rows.clone();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..size * size {
        let Some(p) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        let pivot_row = rows[rank].iter().map(|x| *x * inv).collect::<Vec<_>>();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * *y;
                }
            }
        }
        rows[rank] = pivot_row;
        pivots.push(col);
        rank += 1;
        if rank == n {
            break;
        }
    }
    assert_eq!(rank, n, "basis matrices are linearly dependent");
    // S[r][a] = basis_a at pivot r; invert by Gauss-Jordan
    let mut aug: Vec<Vec<Q>> = (0..n)
        .map(|r| {
            let mut row: Vec<Q> = (0..n).map(|a| dense[a][pivots[r]]).collect();
            row.extend((0..n).map(|k| if k == r { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .expect("pivot submatrix is invertible");
        aug.swap(col, p);
        let inv = aug[col][col].recip();
        let pivot_row: Vec<Q> = aug[col].iter().map(|x| *x * inv).collect();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * *y;
                }
            }
        }
        aug[col] = pivot_row;
    }
    let inverse: Vec<Vec<Q>> = aug.into_iter().map(|row| row[n..].to_vec()).collect();

    let brackets = all_brackets(spec);
    let mut closed = true;
    let mut table: Vec<HashMap<u32, Vec<(u32, Q)>>> = vec![HashMap::new(); n];
    for (a, row) in brackets.iter().enumerate() {
        for (b, m) in row {
            let mut x = vec![Q::zero(); size * size];
            for &(r, c, v) in m {
                x[flat(r, c)] = v;
            }
            let coeffs: Vec<(u32, Q)> = (0..n)
                .filter_map(|e| {
                    let v: Q = (0..n).map(|r| inverse[e][r] * x[pivots[r]]).sum();
                    (!v.is_zero()).then_some((e as u32, v))
                })
                .collect();
            let mut back = vec![Q::zero(); size * size];
            for &(e, v) in &coeffs {
                for ent in &spec.basis[e as usize] {
                    back[flat(ent.row, ent.col)] += v * ent.val;
                }
            }
            closed &= back == x;
            table[a].insert(*b, coeffs);
        }
    }
    let bracket = |x: u32, y: u32| table[x as usize].get(&y).map(Vec::as_slice).unwrap_or(&[]);
    let mut jacobi = true;
    let mut checked = 0;
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            for c in b + 1..n as u32 {
                let mut acc: BTreeMap<u32, Q> = BTreeMap::new();
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    for &(e, v) in bracket(x, y) {
                        for &(f, u) in bracket(e, z) {
                            *acc.entry(f).or_insert_with(Q::zero) += v * u;
                        }
                    }
                }
                jacobi &= acc.values().all(Zero::is_zero);
                checked += 1;
            }
        }
    }
    JacobiReport {
        closed_under_bracket: closed,
        jacobi,
        triples_checked: checked,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub size: usize,
    /// `None` when the stage has no published closed form to compare against.
    pub closed_form_match: Option<bool>,
    pub missing: usize,
    pub extra: usize,
    pub missing_examples: Vec<String>,
    pub extra_examples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestRecord {
    pub name: String,
    pub edges: usize,
    pub is_forest: bool,
    pub max_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub lie_type: LieType,
    pub d: u32,
    pub stages: Vec<StageRecord>,
    pub forests: Vec<ForestRecord>,
    pub discrepancies: Vec<String>,
    pub notes: Vec<String>,
    /// The later stages replayed from the published closed forms instead of computed data.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published_chain: Option<Box<PipelineReport>>,
}

impl PipelineReport {
    fn new(lie_type: LieType, d: u32) -> Self {
        PipelineReport {
            lie_type,
            d,
            stages: Vec::new(),
            forests: Vec::new(),
            discrepancies: Vec::new(),
            notes: Vec::new(),
            published_chain: None,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn forests_ok(&self, max_degree: usize) -> bool {
        !self.forests.is_empty()
            && self
                .forests
                .iter()
                .all(|f| f.is_forest && f.max_degree <= max_degree)
    }

    fn compare<T: Ord + Copy>(
        &mut self,
        name: &str,
        computed: &BTreeSet<T>,
        expected: &BTreeSet<T>,
        describe: impl Fn(&T) -> String,
    ) -> bool {
        let missing: Vec<&T> = expected.difference(computed).collect();
        let extra: Vec<&T> = computed.difference(expected).collect();
        let ok = missing.is_empty() && extra.is_empty();
        if !ok {
            self.discrepancies.push(format!(
                "{name}: {} closed-form elements missing, {} unexpected",
                missing.len(),
                extra.len()
            ));
        }
        self.stages.push(StageRecord {
            name: name.to_string(),
            size: computed.len(),
            closed_form_match: Some(ok),
            missing: missing.len(),
            extra: extra.len(),
            missing_examples: missing
                .iter()
                .take(EXAMPLE_LIMIT)
                .map(|t| describe(t))
                .collect(),
            extra_examples: extra
                .iter()
                .take(EXAMPLE_LIMIT)
                .map(|t| describe(t))
                .collect(),
        });
        ok
    }

    fn record(&mut self, name: &str, size: usize) {
        self.stages.push(StageRecord {
            name: name.to_string(),
            size,
            closed_form_match: None,
            missing: 0,
            extra: 0,
            missing_examples: Vec::new(),
            extra_examples: Vec::new(),
        });
    }

    fn forest(&mut self, name: &str, g: &Graph, max_degree: usize) {
        let f = forest_check(g);
        if !f.is_forest {
            self.discrepancies.push(format!("{name}: not a forest"));
        }
        if f.max_degree > max_degree {
            self.discrepancies.push(format!(
                "{name}: maximal degree {} exceeds {max_degree}",
                f.max_degree
            ));
        }
        self.forests.push(ForestRecord {
            name: name.to_string(),
            edges: g.edge_count(),
            is_forest: f.is_forest,
            max_degree: f.max_degree,
        });
    }
}

/// One recorded transformation between stored stages.
#[derive(Clone, Debug)]
pub enum StepOp {
    Grade(ScalarWeight),
    LevelSplit(usize),
}

#[derive(Clone, Debug)]
pub struct Step {
    pub input: String,
    pub output: String,
    pub op: StepOp,
}

/// A pipeline run: the report, every stored stage and the steps linking them.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub report: PipelineReport,
    pub stages: BTreeMap<String, Polygraph>,
    pub steps: Vec<Step>,
    /// Named DOT documents of the final graphs.
    pub dot: Vec<(String, String)>,
}

impl PipelineRun {
    fn new(ty: LieType, d: u32) -> Self {
        PipelineRun {
            report: PipelineReport::new(ty, d),
            stages: BTreeMap::new(),
            steps: Vec::new(),
            dot: Vec::new(),
        }
    }

    fn grade(&mut self, input: &str, output: &str, w: ScalarWeight) -> Polygraph {
        let g = gr_w(&self.stages[input], &w).expect("weight covers every vertex");
        self.stages.insert(output.to_string(), g.clone());
        self.steps.push(Step {
            input: input.into(),
            output: output.into(),
            op: StepOp::Grade(w),
        });
        g
    }

    /// Re-derives every stored stage output from its stored input.
    pub fn replay(&self) -> bool {
        self.steps.iter().all(|s| {
            let input = &self.stages[&s.input];
            let derived = match &s.op {
                StepOp::Grade(w) => gr_w(input, w).ok(),
                StepOp::LevelSplit(m) => Some(level_split(input, *m)),
            };
            derived.as_ref() == self.stages.get(&s.output)
        })
    }
}

fn pairs_graph(p: &Polygraph) -> Graph {
    let mut g = Graph::new(p.vertices.clone());
    for t in &p.triples {
        g.add_edge(t.a, t.b);
    }
    g
}

/// The attached graph, or the graph of all pairs with a discrepancy if attachment fails.
fn attached_or_pairs(report: &mut PipelineReport, name: &str, p: &Polygraph) -> Graph {
    match p.as_attached_graph() {
        Ok(g) => g,
        Err(msg) => {
            report
                .discrepancies
                .push(format!("{name}: not attached to a graph ({msg})"));
            pairs_graph(p)
        }
    }
}

/// Colors every edge with a unique maximal level; ties become discrepancies.
fn color_edges(
    report: &mut PipelineReport,
    name: &str,
    g: &Graph,
    w: &MultiWeight,
) -> (Vec<Graph>, Vec<usize>) {
    let levels = w.iter().map(Vec::len).max().unwrap_or(0);
    let mut parts = vec![BTreeSet::new(); levels];
    let mut colors = Vec::with_capacity(g.edge_count());
    let mut ties = Vec::new();
    for &(a, b) in &g.edges {
        match edge_color(w, a, b) {
            Some(m) => {
                parts[m].insert((a, b));
                colors.push(m);
            }
            None => {
                ties.push(format!(
                    "{{{}, {}}}",
                    g.vertices[a as usize], g.vertices[b as usize]
                ));
                colors.push(levels);
            }
        }
    }
    if !ties.is_empty() {
        report.discrepancies.push(format!(
            "{name}: {} edges without a unique maximal level, e.g. {}",
            ties.len(),
            ties.iter()
                .take(EXAMPLE_LIMIT)
                .cloned()
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    (parts.into_iter().map(|e| g.with_edges(e)).collect(), colors)
}

fn pow_i128(base: i128, e: u32) -> i128 {
    base.pow(e)
}

fn edge_set_of(triples: &BTreeSet<Triple>) -> BTreeSet<(u32, u32)> {
    triples.iter().map(|t| (t.a, t.b)).collect()
}

/// `sl_d`: `w_0 = -3^{|i-j|}`, `w_1 = i`, then the `Z/3` coloring and forest checks.
pub fn pipeline_sl(d: u32) -> Result<PipelineRun, LieError> {
    let spec = LieBasisSpec::new(LieType::Sl, d)?;
    let mut run = PipelineRun::new(LieType::Sl, d);
    let g0 = structure_polygraph(&spec);
    let ix = |i: u32, j: u32| spec.index(&BasisLabel::Ordered(i, j));
    let describe = |t: &Triple| g0.describe(t);

    // closed forms as (i, j, l, triple)
    let mut s0 = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            for l in 1..=d {
                if let (Some(a), Some(b), Some(o)) = (ix(i, j), ix(j, l), ix(i, l)) {
                    if a != b {
                        s0.push((i as i64, j as i64, l as i64, Triple::new(a, b, o)));
                    }
                }
            }
        }
    }
    let closed = |pred: &dyn Fn(i64, i64, i64) -> bool| -> BTreeSet<Triple> {
        s0.iter()
            .filter(|(i, j, l, _)| pred(*i, *j, *l))
            .map(|x| x.3)
            .collect()
    };
    let delta = |a: i64, b: i64| (a == b) as i64;
    let cf0 = closed(&|_, _, _| true);
    let cf1 = closed(&|i, j, l| (2 * j - i - l).abs() < 2 + 2 * delta(i, l));
    let cf2 = closed(&|i, j, l| j == (i + l + 1).div_euclid(2) + delta(i, l));

    let report = &mut run.report;
    report.compare("S_0", &g0.triples, &cf0, describe);
    run.stages.insert("gamma0".into(), g0.clone());

    let w0: ScalarWeight = spec
        .labels
        .iter()
        .map(|l| match *l {
            BasisLabel::Ordered(i, j) => -pow_i128(3, i.abs_diff(j)),
            _ => unreachable!(),
        })
        .collect();
    let w1: ScalarWeight = spec
        .labels
        .iter()
        .map(|l| match *l {
            BasisLabel::Ordered(i, _) => i as i128,
            _ => unreachable!(),
        })
        .collect();
    let g1 = run.grade("gamma0", "gamma1", w0);
    run.report.compare("S_1", &g1.triples, &cf1, describe);
    let g2 = run.grade("gamma1", "gamma2", w1);
    run.report.compare("S_2", &g2.triples, &cf2, describe);

    let g3 = attached_or_pairs(&mut run.report, "gamma2", &g2);
    let graph_describe = |e: &(u32, u32)| {
        format!(
            "{{{}, {}}}",
            g0.vertices[e.0 as usize], g0.vertices[e.1 as usize]
        )
    };
    run.report
        .compare("E(gamma3)", &g3.edges, &edge_set_of(&cf2), graph_describe);

    let colors = sl_coloring(&mut run.report, &spec, &g3, "");
    run.report
        .notes
        .push("w_3 is scaled by 5 so every level value is an integer".into());
    let name = format!("sl{d}_gamma3");
    run.dot
        .push((name.clone(), dot_export(&g3, &name, Some(&colors))));

    let mut chain = PipelineReport::new(LieType::Sl, d);
    let published = g3.with_edges(edge_set_of(&cf2));
    let colors = sl_coloring(&mut chain, &spec, &published, "published ");
    run.dot.push((
        format!("{name}_published"),
        dot_export(&published, &name, Some(&colors)),
    ));
    run.report.published_chain = Some(Box::new(chain));
    Ok(run)
}

/// The `Z/3` coloring by `w_3` (scaled by 5), its forests and the diagonal pieces.
fn sl_coloring(
    report: &mut PipelineReport,
    spec: &LieBasisSpec,
    g3: &Graph,
    prefix: &str,
) -> Vec<usize> {
    let w3: MultiWeight = spec
        .labels
        .iter()
        .map(|l| {
            let BasisLabel::Ordered(i, j) = *l else {
                unreachable!()
            };
            let delta = i as i64 - j as i64;
            let a = i.abs_diff(j);
            let s = if delta >= 0 { 1 } else { -1 };
            let mut v = vec![0i128; 3];
            v[delta.rem_euclid(3) as usize] = pow_i128(5, a + 1);
            v[(delta - s).rem_euclid(3) as usize] = 3 * pow_i128(5, a);
            v
        })
        .collect();
    let (parts, colors) = color_edges(report, &format!("{prefix}gamma3"), g3, &w3);
    for (m, part) in parts.iter().enumerate() {
        report.forest(&format!("{prefix}gamma4^{m}"), part, 3);
    }
    check_diagonal_decomposition(report, spec, g3, &colors, prefix);
    colors
}

/// Each edge lies in exactly one `Δ_l`, gets color `l mod 3`, and every `Δ_l` is a forest of degree at most 3.
fn check_diagonal_decomposition(
    report: &mut PipelineReport,
    spec: &LieBasisSpec,
    g: &Graph,
    colors: &[usize],
    prefix: &str,
) {
    let diag = |v: u32| match spec.labels[v as usize] {
        BasisLabel::Ordered(i, j) => i as i64 - j as i64,
        _ => unreachable!(),
    };
    let mut pieces: BTreeMap<i64, BTreeSet<(u32, u32)>> = BTreeMap::new();
    let mut unassigned = 0;
    let mut miscolored = 0;
    for (k, &(a, b)) in g.edges.iter().enumerate() {
        let (p, q) = (diag(a), diag(b));
        let (lo, hi) = (p.min(q), p.max(q));
        let l = if (lo == hi && lo != 0) || (hi - lo == 1 && lo < 0) {
            Some(lo)
        } else if hi - lo == 1 && hi > 0 {
            Some(hi)
        } else if (lo, hi) == (-1, 1) {
            Some(0)
        } else {
            None
        };
        match l {
            Some(l) => {
                if colors[k] != l.rem_euclid(3) as usize {
                    miscolored += 1;
                }
                pieces.entry(l).or_default().insert((a, b));
            }
            None => unassigned += 1,
        }
    }
    if unassigned > 0 {
        report.discrepancies.push(format!(
            "{prefix}diagonal pieces: {unassigned} edges lie in no Δ_l"
        ));
    }
    if miscolored > 0 {
        report.discrepancies.push(format!(
            "{prefix}diagonal pieces: {miscolored} edges colored differently from l mod 3"
        ));
    }
    let bad = pieces
        .values()
        .filter(|e| {
            let f = forest_check(&g.with_edges((*e).clone()));
            !f.is_forest || f.max_degree > 3
        })
        .count();
    if bad > 0 {
        report.discrepancies.push(format!(
            "{prefix}diagonal pieces: {bad} of the Δ_l are not forests of degree <= 3"
        ));
    }
    report.record(&format!("{prefix}diagonal pieces Δ_l"), pieces.len());
}

/// `so_d`: `w_0 = -3^{|i-j|}`, `w_1 = max`, then the three-level coloring and forest checks.
pub fn pipeline_so(d: u32) -> Result<PipelineRun, LieError> {
    let spec = LieBasisSpec::new(LieType::So, d)?;
    let mut run = PipelineRun::new(LieType::So, d);
    if d < 4 {
        run.report.notes.push(format!(
            "so_{d} is degenerate: several weight cases are empty"
        ));
    }
    let g0 = structure_polygraph(&spec);
    let ix = |i: u32, j: u32| spec.index(&BasisLabel::Subset(i.min(j), i.max(j)));
    let describe = |t: &Triple| g0.describe(t);

    let mut s0 = Vec::new();
    for i in 1..=d {
        for j in 1..=d {
            for l in 1..=d {
                if i != j && j != l && i != l && i < l {
                    let t = Triple::new(ix(i, j).unwrap(), ix(j, l).unwrap(), ix(i, l).unwrap());
                    s0.push((i as i64, j as i64, l as i64, t));
                }
            }
        }
    }
    let closed = |pred: &dyn Fn(i64, i64, i64) -> bool| -> BTreeSet<Triple> {
        s0.iter()
            .filter(|(i, j, l, _)| pred(*i, *j, *l))
            .map(|x| x.3)
            .collect()
    };
    let dd = d as i64;
    let cf0 = closed(&|_, _, _| true);
    let cf1 = closed(&|i, j, l| (2 * j - i - l).abs() < 2 + 2 * ((l - i).abs() == 1) as i64);
    // i < l throughout
    let edge_rule = |i: i64, j: i64, l: i64| {
        if (i, l) == (dd - 1, dd) {
            j == dd - 2
        } else if l - i == 1 {
            j == l + 1
        } else {
            j == (i + l + 1).div_euclid(2)
        }
    };
    let cf_e = edge_set_of(&closed(&edge_rule));

    run.report.compare("S_0", &g0.triples, &cf0, describe);
    run.stages.insert("gamma0".into(), g0.clone());
    let (w0, w1, w3) = so_weights(&spec);
    let g1 = run.grade("gamma0", "gamma1", w0);
    run.report.compare("S_1", &g1.triples, &cf1, describe);
    let g2 = run.grade("gamma1", "gamma2", w1);
    run.report.record("S_2", g2.len());
    let g3 = attached_or_pairs(&mut run.report, "gamma2", &g2);
    let graph_describe = |e: &(u32, u32)| {
        format!(
            "{{{}, {}}}",
            g0.vertices[e.0 as usize], g0.vertices[e.1 as usize]
        )
    };
    run.report
        .compare("E(gamma3)", &g3.edges, &cf_e, graph_describe);

    let (parts, colors) = color_edges(&mut run.report, "gamma3", &g3, &w3);
    for (m, part) in parts.iter().enumerate() {
        run.report.forest(&format!("gamma4^{}", m + 1), part, 3);
    }
    run.dot.push((
        format!("so{d}_gamma3"),
        dot_export(&g3, &format!("so{d}_gamma3"), Some(&colors)),
    ));
    Ok(run)
}

fn so_weights(spec: &LieBasisSpec) -> (ScalarWeight, ScalarWeight, MultiWeight) {
    let d = spec.d;
    let sub = |l: &BasisLabel| match *l {
        BasisLabel::Subset(i, j) => (i, j),
        _ => unreachable!(),
    };
    let w0 = spec
        .labels
        .iter()
        .map(&sub)
        .map(|(i, j)| -pow_i128(3, j - i))
        .collect();
    let w1 = spec.labels.iter().map(|l| sub(l).1 as i128).collect();
    let top = pow_i128(3, d);
    let corner = |i: u32| {
        if i + 2 == d {
            2 * pow_i128(3, d - 1)
        } else {
            0
        }
    };
    let w3 = spec
        .labels
        .iter()
        .map(|l| {
            let (i, j) = sub(l);
            let jj = j as i128;
            if i + 1 == j {
                vec![0, top + 2 * jj, corner(i)]
            } else if i + 2 == j {
                vec![top + 2 * jj - 1, 0, corner(i)]
            } else if (j - i) % 2 == 1 {
                vec![0, 0, pow_i128(3, d - (j - i))]
            } else {
                vec![pow_i128(3, d - (j - i)), 0, 0]
            }
        })
        .collect();
    (w0, w1, w3)
}

/// `sp_2d`: indicator weight, four-level split, then the reduction of the `I_0 ∪ I_2` part to a forest.
pub fn pipeline_sp(d: u32) -> Result<PipelineRun, LieError> {
    if d < 2 {
        return Err(LieError::BadRank {
            ty: LieType::Sp,
            d,
            min: 2,
        });
    }
    let spec = LieBasisSpec::new(LieType::Sp, d)?;
    let mut run = PipelineRun::new(LieType::Sp, d);
    run.report
        .notes
        .push("the final edge rule's δ_{i,n}δ_{l,n} is read as δ_{i,d}δ_{l,d}".into());
    let g0 = structure_polygraph(&spec);
    let describe = |t: &Triple| g0.describe(t);
    let ord = |i: u32, j: u32| spec.index(&BasisLabel::Ordered(i, j));
    let multi = |i: u32, j: u32, s: i8| {
        spec.index(&BasisLabel::Multiset(i.min(j), i.max(j), s))
            .unwrap()
    };
    let dd = ord(d, d).unwrap();
    let in_i0 = |v: u32| v < dd;

    let components = sp_components(&spec);
    let mut published = BTreeSet::new();
    for (k, comp) in components.iter().enumerate() {
        let present: BTreeSet<Triple> = comp.intersection(&g0.triples).copied().collect();
        run.report
            .compare(&format!("S_0^{}", k + 1), &present, comp, describe);
        published.extend(comp.iter().copied());
    }
    let residual: BTreeSet<Triple> = g0.triples.difference(&published).copied().collect();
    let outside: BTreeSet<Triple> = residual
        .iter()
        .filter(|t| in_i0(t.a) || t.a == dd || !in_i0(t.out))
        .copied()
        .collect();
    run.report.compare(
        "S_0^6 residual outside (I_{2,3})^(2) × I_0",
        &outside,
        &BTreeSet::new(),
        describe,
    );
    run.report
        .record("S_0^6 residual", residual.len() - outside.len());
    if d == 2 {
        run.report
            .notes
            .push("at d = 2 the trace correction cancels [e_(1,1), e_([1,2],∓1)]".into());
    }

    run.stages.insert("gamma0".into(), g0.clone());
    let w0: ScalarWeight = (0..spec.dim() as u32).map(|v| in_i0(v) as i128).collect();
    let g1 = run.grade("gamma0", "gamma1", w0);
    let union14: BTreeSet<Triple> = components[..4].iter().flatten().copied().collect();
    run.report.compare("S_1", &g1.triples, &union14, describe);

    // level split with M = {0, 1, 2, 3}
    let split = level_split(&g1, 4);
    run.stages.insert("gamma2".into(), split);
    run.steps.push(Step {
        input: "gamma1".into(),
        output: "gamma2".into(),
        op: StepOp::LevelSplit(4),
    });
    let w2: MultiWeight = spec
        .labels
        .iter()
        .map(|l| match *l {
            BasisLabel::Ordered(..) => vec![1, 0, 0, 0],
            BasisLabel::Multiset(_, _, s) if s < 0 => vec![0, 3, 0, 2],
            BasisLabel::Multiset(..) => vec![0, 0, 3, 2],
            BasisLabel::Subset(..) => unreachable!(),
        })
        .collect();
    let g3 = run.grade("gamma2", "gamma3", flatten_levels(&w2));
    let at_level = |m: u32| -> BTreeSet<Triple> {
        g3.triples
            .iter()
            .filter(|t| t.a % 4 == m)
            .map(|t| Triple::new(t.a / 4, t.b / 4, t.out))
            .collect()
    };
    // level m carries component k: 0 ↔ 1, 3 ↔ 2, 1 ↔ 3, 2 ↔ 4
    let g4: Vec<BTreeSet<Triple>> = [0, 3, 1, 2].iter().map(|&m| at_level(m)).collect();
    for (k, comp) in g4.iter().enumerate() {
        run.report
            .compare(&format!("gamma4^{}", k + 1), comp, &components[k], describe);
    }
    let mixed = g3.triples.iter().filter(|t| t.a % 4 != t.b % 4).count();
    if mixed > 0 {
        run.report
            .discrepancies
            .push(format!("gamma3: {mixed} triples mix levels"));
    }
    // transpose symmetry between the two block components
    let transpose = |v: u32| match spec.labels[v as usize] {
        BasisLabel::Ordered(i, j) => ord(j, i).unwrap(),
        BasisLabel::Multiset(i, j, s) => multi(i, j, -s),
        BasisLabel::Subset(..) => unreachable!(),
    };
    let mapped: BTreeSet<Triple> = g4[2]
        .iter()
        .map(|t| Triple::new(transpose(t.a), transpose(t.b), transpose(t.out)))
        .collect();
    if mapped != g4[3] {
        run.report
            .discrepancies
            .push("gamma4^3 and gamma4^4 are not exchanged by transposition".into());
    }

    // Γ_5 on I_0 ∪ I_2 with outputs I_2
    let red = SpReduced::new(&spec);
    let s5: BTreeSet<Triple> = g4[2].iter().filter_map(|t| red.map_triple(t)).collect();
    if s5.len() != g4[2].len() {
        run.report
            .discrepancies
            .push("gamma4^3 has triples outside I_0 ∪ I_2".into());
    }
    let g5 = red.polygraph(s5);
    run_reduction(&mut run, &red, g5, "");

    let mut chain = PipelineRun::new(LieType::Sp, d);
    let published5: BTreeSet<Triple> = components[2]
        .iter()
        .filter_map(|t| red.map_triple(t))
        .collect();
    run_reduction(&mut chain, &red, red.polygraph(published5), "published ");
    run.report.published_chain = Some(Box::new(chain.report));
    run.dot.extend(
        chain
            .dot
            .into_iter()
            .map(|(n, s)| (format!("{n}_published"), s)),
    );
    Ok(run)
}

/// The published components `S_0^1 ..= S_0^5` as index triples.
fn sp_components(spec: &LieBasisSpec) -> Vec<BTreeSet<Triple>> {
    let d = spec.d;
    let ord = |i: u32, j: u32| {
        spec.index(&BasisLabel::Ordered(i, j))
            .filter(|_| (i, j) != (d, d))
    };
    let multi = |i: u32, j: u32, s: i8| {
        spec.index(&BasisLabel::Multiset(i.min(j), i.max(j), s))
            .unwrap()
    };
    let dd = spec.index(&BasisLabel::Ordered(d, d)).unwrap();
    let mut c = vec![BTreeSet::new(); 5];
    for i in 1..=d {
        for j in 1..=d {
            for l in 1..=d {
                if let (Some(a), Some(b), Some(o)) = (ord(i, j), ord(j, l), ord(i, l)) {
                    if a != b {
                        c[0].insert(Triple::new(a, b, o));
                    }
                }
                if let Some(a) = ord(i, j) {
                    c[2].insert(Triple::new(a, multi(j, l, -1), multi(i, l, -1)));
                    c[3].insert(Triple::new(a, multi(i, l, 1), multi(j, l, 1)));
                }
            }
        }
    }
    for i in 1..=d {
        for j in i..=d {
            c[1].insert(Triple::new(multi(i, j, 1), multi(i, j, -1), dd));
            for s in [-1, 1] {
                let v = multi(i, j, s);
                c[4].insert(Triple::new(dd, v, v));
            }
        }
    }
    c
}

/// Index maps between the full basis and `I_{0,2} = I_0 ∪ I_2`.
struct SpReduced {
    d: u32,
    vertices: Vec<String>,
    outputs: Vec<String>,
    /// `(i, j)` for `I_0` vertices, `(i, j)` with `i <= j` for multisets.
    coords: Vec<(u32, u32, bool)>,
    from_full: HashMap<u32, u32>,
    out_from_full: HashMap<u32, u32>,
    index: HashMap<(u32, u32, bool), u32>,
}

impl SpReduced {
    fn new(spec: &LieBasisSpec) -> Self {
        let d = spec.d;
        let mut r = SpReduced {
            d,
            vertices: Vec::new(),
            outputs: Vec::new(),
            coords: Vec::new(),
            from_full: HashMap::new(),
            out_from_full: HashMap::new(),
            index: HashMap::new(),
        };
        for (full, l) in spec.labels.iter().enumerate() {
            let key = match *l {
                BasisLabel::Ordered(i, j) if (i, j) != (d, d) => (i, j, false),
                BasisLabel::Multiset(i, j, -1) => (i, j, true),
                _ => continue,
            };
            let v = r.vertices.len() as u32;
            r.vertices.push(if key.2 {
                format!("[{},{}]", key.0, key.1)
            } else {
                format!("({},{})", key.0, key.1)
            });
            r.coords.push(key);
            r.from_full.insert(full as u32, v);
            r.index.insert(key, v);
            if key.2 {
                r.out_from_full.insert(full as u32, r.outputs.len() as u32);
                r.outputs.push(format!("[{},{}]", key.0, key.1));
            }
        }
        r
    }

    fn map_triple(&self, t: &Triple) -> Option<Triple> {
        Some(Triple::new(
            *self.from_full.get(&t.a)?,
            *self.from_full.get(&t.b)?,
            *self.out_from_full.get(&t.out)?,
        ))
    }

    fn polygraph(&self, triples: BTreeSet<Triple>) -> Polygraph {
        Polygraph {
            vertices: self.vertices.clone(),
            outputs: self.outputs.clone(),
            triples,
        }
    }

    fn ordered(&self, i: u32, j: u32) -> Option<u32> {
        self.index.get(&(i, j, false)).copied()
    }

    fn multiset(&self, i: u32, j: u32) -> u32 {
        self.index[&(i.min(j), i.max(j), true)]
    }

    fn output(&self, i: u32, j: u32) -> u32 {
        self.multiset(i, j) - (self.vertices.len() - self.outputs.len()) as u32
    }
}

/// `w_5`, `w_6` and the final forest on `I_{0,2}`.
fn run_reduction(run: &mut PipelineRun, red: &SpReduced, g5: Polygraph, prefix: &str) {
    let d = red.d;
    let name5 = format!("{prefix}gamma5");
    run.stages.insert(name5.clone(), g5.clone());
    run.report.record(&format!("{prefix}S_5"), g5.len());
    let describe = |t: &Triple| g5.describe(t);
    let mut s6 = BTreeSet::new();
    let mut e8 = BTreeSet::new();
    for i in 1..=d {
        for j in 1..=d {
            for l in 1..=d {
                let Some(a) = red.ordered(i, j) else { continue };
                let t = Triple::new(a, red.multiset(j, l), red.output(i, l));
                let corner = (i == d && l == d) as i64;
                let (i, j, l) = (i as i64, j as i64, l as i64);
                if (2 * j - i - l).abs() < 2 + 2 * corner {
                    s6.insert(t);
                }
                if i <= l && j == (i + l).div_euclid(2) - corner {
                    e8.insert((t.a, t.b));
                }
            }
        }
    }
    let w5: ScalarWeight = red
        .coords
        .iter()
        .map(|&(i, j, _)| -pow_i128(3, i.abs_diff(j)))
        .collect();
    let w6: ScalarWeight = red
        .coords
        .iter()
        .map(|&(i, j, m)| if m { 0 } else { -((i + j) as i128) })
        .collect();
    let name6 = format!("{prefix}gamma6");
    let name7 = format!("{prefix}gamma7");
    let g6 = run.grade(&name5, &name6, w5);
    run.report
        .compare(&format!("{prefix}S_6"), &g6.triples, &s6, describe);
    let g7 = run.grade(&name6, &name7, w6);
    let g8 = attached_or_pairs(&mut run.report, &name7, &g7);
    let edge_describe = |e: &(u32, u32)| {
        format!(
            "{{{}, {}}}",
            g5.vertices[e.0 as usize], g5.vertices[e.1 as usize]
        )
    };
    run.report
        .compare(&format!("{prefix}E(gamma8)"), &g8.edges, &e8, edge_describe);
    run.report.forest(&format!("{prefix}gamma8"), &g8, 3);
    let name = format!("sp{d}_gamma8");
    run.dot.push((name.clone(), dot_export(&g8, &name, None)));
}

pub fn run_pipeline(ty: LieType, d: u32) -> Result<PipelineRun, LieError> {
    match ty {
        LieType::Sl => pipeline_sl(d),
        LieType::So => pipeline_so(d),
        LieType::Sp => pipeline_sp(d),
    }
}

/// Reports for every rank in `range`, computed in parallel, in rank order.
pub fn batch(
    ty: LieType,
    range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<PipelineReport>, LieError> {
    range
        .into_par_iter()
        .map(|d| run_pipeline(ty, d).map(|r| r.report))
        .collect()
}

/// A simple factor of a semisimple Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SimpleFactor {
    Sl(u32),
    So(u32),
    Sp(u32),
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl SimpleFactor {
    /// Dimension of the exceptional algebras.
    pub fn exceptional_dim(self) -> Option<u64> {
        match self {
            SimpleFactor::G2 => Some(14),
            SimpleFactor::F4 => Some(52),
            SimpleFactor::E6 => Some(78),
            SimpleFactor::E7 => Some(133),
            SimpleFactor::E8 => Some(248),
            _ => None,
        }
    }
}

impl FromStr for SimpleFactor {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, LieError> {
        let t = s.trim().to_ascii_lowercase();
        let (name, rank) = match t.split_once(':') {
            Some((n, r)) => (
                n.to_string(),
                Some(
                    r.parse::<u32>()
                        .map_err(|_| LieError::UnknownType(s.into()))?,
                ),
            ),
            None => {
                let split = t.find(|c: char| c.is_ascii_digit()).unwrap_or(t.len());
                let (n, r) = t.split_at(split);
                if matches!(n, "g" | "f" | "e") {
                    (t.clone(), None)
                } else {
                    (
                        n.to_string(),
                        if r.is_empty() { None } else { r.parse().ok() },
                    )
                }
            }
        };
        let rank = rank.unwrap_or(0);
        match name.as_str() {
            "sl" => Ok(SimpleFactor::Sl(rank)),
            "so" => Ok(SimpleFactor::So(rank)),
            "sp" => Ok(SimpleFactor::Sp(rank)),
            "g2" => Ok(SimpleFactor::G2),
            "f4" => Ok(SimpleFactor::F4),
            "e6" => Ok(SimpleFactor::E6),
            "e7" => Ok(SimpleFactor::E7),
            "e8" => Ok(SimpleFactor::E8),
            _ => Err(LieError::UnknownType(s.into())),
        }
    }
}

/// `B(g)`: 22 for `sl` and `so`, 40 for `sp`, `3 dim(g) + 1` for exceptional types.
pub fn bound_root(factor: SimpleFactor) -> u64 {
    match factor {
        SimpleFactor::Sl(_) | SimpleFactor::So(_) => 22,
        SimpleFactor::Sp(_) => 40,
        ex => 3 * ex.exceptional_dim().expect("exceptional") + 1,
    }
}

pub fn bound_root_group(factors: &[SimpleFactor]) -> Result<u64, LieError> {
    factors
        .iter()
        .map(|f| bound_root(*f))
        .max()
        .ok_or(LieError::EmptyFactors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenusBound {
    pub bound: u64,
    /// `⌈B/2⌉ + 1`.
    pub headline: u64,
    /// Smallest integer `n` with `n >= B/2 + 1`.
    pub strict: u64,
    pub odd_bound: bool,
    pub diverges: bool,
}

pub fn min_genus(bound: u64) -> GenusBound {
    let headline = bound.div_ceil(2) + 1;
    // n >= B/2 + 1  ⇔  2n >= B + 2
    let strict = (bound + 2).div_ceil(2);
    GenusBound {
        bound,
        headline,
        strict,
        odd_bound: bound % 2 == 1,
        diverges: headline != strict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense rational matrices: an oracle independent of the sparse bracket code.
    fn dense(spec: &LieBasisSpec, a: usize) -> Vec<Vec<Q>> {
        let n = spec.matrix_size as usize;
        let mut m = vec![vec![Q::zero(); n]; n];
        for e in &spec.basis[a] {
            m[e.row as usize][e.col as usize] += e.val;
        }
        m
    }

    fn matmul(x: &[Vec<Q>], y: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let n = x.len();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| (0..n).map(|k| x[r][k] * y[k][c]).sum())
                    .collect()
            })
            .collect()
    }

    fn dense_polygraph(spec: &LieBasisSpec) -> BTreeSet<Triple> {
        let mut out = BTreeSet::new();
        for a in 0..spec.dim() {
            for b in a + 1..spec.dim() {
                let (x, y) = (dense(spec, a), dense(spec, b));
                let (xy, yx) = (matmul(&x, &y), matmul(&y, &x));
                for (l, f) in spec.coords.iter().enumerate() {
                    let v: Q = f
                        .iter()
                        .map(|e| {
                            e.val
                                * (xy[e.row as usize][e.col as usize]
                                    - yx[e.row as usize][e.col as usize])
                        })
                        .sum();
                    if !v.is_zero() {
                        out.insert(Triple::new(a as u32, b as u32, l as u32));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn sparse_brackets_match_dense_oracle() {
        for (ty, ds) in [
            (LieType::Sl, 2..=5),
            (LieType::So, 3..=6),
            (LieType::Sp, 1..=4),
        ] {
            for d in ds {
                let spec = LieBasisSpec::new(ty, d).unwrap();
                assert_eq!(
                    structure_polygraph(&spec).triples,
                    dense_polygraph(&spec),
                    "{ty} {d}"
                );
            }
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(LieBasisSpec::new(LieType::Sl, 8).unwrap().dim(), 63);
        assert_eq!(LieBasisSpec::new(LieType::So, 5).unwrap().dim(), 10);
        assert_eq!(LieBasisSpec::new(LieType::Sp, 3).unwrap().dim(), 21);
        assert!(LieBasisSpec::new(LieType::So, 2).is_err());
    }

    #[test]
    fn antisymmetry_and_jacobi() {
        for ty in [LieType::Sl, LieType::So, LieType::Sp] {
            for d in ty.min_rank().max(2)..=6 {
                if ty == LieType::Sp && d > 4 {
                    continue; // covered by the integration suite
                }
                let spec = LieBasisSpec::new(ty, d).unwrap();
                assert!(antisymmetry_holds(&structure_constants(&spec)), "{ty} {d}");
                let j = jacobi_check(&spec);
                assert!(j.closed_under_bracket && j.jacobi, "{ty} {d}: {j:?}");
            }
        }
    }

    #[test]
    fn so3_closed_form() {
        let run = pipeline_so(3).unwrap();
        assert_eq!(run.report.stages[0].closed_form_match, Some(true));
    }

    #[test]
    fn sl_stage_one_matches() {
        let run = pipeline_sl(3).unwrap();
        let s1 = run.report.stages.iter().find(|s| s.name == "S_1").unwrap();
        assert_eq!(s1.closed_form_match, Some(true));
        assert!(run.replay());
    }

    #[test]
    fn bounds_and_genus() {
        assert_eq!(bound_root("sl:5".parse().unwrap()), 22);
        assert_eq!(bound_root("sp".parse().unwrap()), 40);
        assert_eq!(bound_root("e8".parse().unwrap()), 745);
        assert_eq!(
            bound_root_group(&["sl:5".parse().unwrap(), "e8".parse().unwrap()]).unwrap(),
            745
        );
        assert!("h9".parse::<SimpleFactor>().is_err());
        assert!(bound_root_group(&[]).is_err());
        let g = min_genus(22);
        assert_eq!((g.headline, g.strict), (12, 12));
        let g = min_genus(745);
        assert_eq!(g.headline, 374);
        assert!(g.odd_bound);
    }
}
