//! Fully enumerated finite groups: `SL_d` over finite local rings plus a few
//! small permutation and matrix groups used as oracles.
//!
//! Elements are indexed `0..order` in breadth-first order from the generators,
//! with each BFS layer sorted by canonical encoding. Index 0 is the identity.

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localring::{LocalRing, LocalRingSpec, RingError};

pub mod cache;

/// Default cap on the number of enumerated elements.
pub const DEFAULT_ELEMENT_BUDGET: u64 = 2_000_000;

/// Largest supported matrix size.
pub const MAX_DIM: usize = 4;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group of order {projected} exceeds the element budget {budget}")]
    SizeLimit { projected: u64, budget: u64 },
    #[error("unknown group '{0}'")]
    UnknownName(String),
    #[error("unsupported matrix size {0} (expected 2..={MAX_DIM})")]
    InvalidDimension(usize),
    #[error("matrix encoding of {d}x{d} matrices over a ring of size {card} overflows 64 bits")]
    EncodingOverflow { d: usize, card: u64 },
    #[error("operation needs a matrix group over a local ring")]
    NotMatrixGroup,
    #[error("level {level} out of range 0..={max}")]
    LevelOutOfRange { level: u32, max: u32 },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("group cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// splitmix64 finalizer; element codes are dense integers so SipHash is wasted work.
#[derive(Default, Clone, Copy)]
pub struct CodeHasher(u64);

impl Hasher for CodeHasher {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(self.0 ^ b as u64);
        }
    }

    fn write_u64(&mut self, i: u64) {
        let mut z = i.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        self.0 = z ^ (z >> 31);
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

pub type CodeMap<V> = HashMap<u64, V, BuildHasherDefault<CodeHasher>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedGroup {
    Trivial,
    Symmetric(u32),
    Dihedral(u32),
    Cyclic(u32),
    Quaternion8,
}

impl fmt::Display for NamedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGroup::Trivial => write!(f, "trivial"),
            NamedGroup::Symmetric(n) => write!(f, "symmetric_{n}"),
            NamedGroup::Dihedral(n) => write!(f, "dihedral_{n}"),
            NamedGroup::Cyclic(n) => write!(f, "cyclic_{n}"),
            NamedGroup::Quaternion8 => write!(f, "quaternion8"),
        }
    }
}

impl FromStr for NamedGroup {
    type Err = GroupError;

    /// Accepts `trivial`, `quaternion8`/`q8`, `symmetric_n`/`sn`, `dihedral_n`/`dn`
    /// (order `2n`) and `cyclic_n`/`cn`, optionally prefixed by `named:`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = s.trim().trim_start_matches("named:").to_ascii_lowercase();
        let unknown = || GroupError::UnknownName(s.to_string());
        let numbered = |prefix_long: &str, prefix_short: char| -> Option<u32> {
            if let Some(n) = name.strip_prefix(prefix_long) {
                return n.parse().ok();
            }
            let rest = name.strip_prefix(prefix_short)?;
            rest.parse().ok()
        };
        let named = match name.as_str() {
            "trivial" | "1" => NamedGroup::Trivial,
            "quaternion8" | "q8" => NamedGroup::Quaternion8,
            _ => {
                if let Some(n) = numbered("symmetric_", 's') {
                    NamedGroup::Symmetric(n)
                } else if let Some(n) = numbered("dihedral_", 'd') {
                    NamedGroup::Dihedral(n)
                } else if let Some(n) = numbered("cyclic_", 'c') {
                    NamedGroup::Cyclic(n)
                } else {
                    return Err(unknown());
                }
            }
        };
        match named {
            NamedGroup::Symmetric(n) if !(1..=8).contains(&n) => Err(unknown()),
            NamedGroup::Dihedral(n) if !(3..=64).contains(&n) => Err(unknown()),
            NamedGroup::Cyclic(n) if !(1..=4096).contains(&n) => Err(unknown()),
            g => Ok(g),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupDesc {
    Sl { d: usize, ring: LocalRingSpec },
    Named { name: NamedGroup },
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::Sl { d, ring } => write!(f, "SL_{d}({ring})"),
            GroupDesc::Named { name } => write!(f, "{name}"),
        }
    }
}

/// Square matrices over a local ring, encoded base `|R|` in row-major order.
#[derive(Clone, Debug)]
pub struct MatrixLaw {
    ring: LocalRing,
    d: usize,
    card: u64,
}

pub type Entries = [u32; MAX_DIM * MAX_DIM];

impl MatrixLaw {
    pub fn new(ring: LocalRing, d: usize) -> Result<Self, GroupError> {
        if !(1..=MAX_DIM).contains(&d) {
            return Err(GroupError::InvalidDimension(d));
        }
        let card = ring.cardinality() as u64;
        let fits = (card as u128)
            .checked_pow((d * d) as u32)
            .is_some_and(|n| n <= u64::MAX as u128);
        if !fits {
            return Err(GroupError::EncodingOverflow { d, card });
        }
        Ok(MatrixLaw { ring, d, card })
    }

    pub fn ring(&self) -> &LocalRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn decode(&self, mut code: u64) -> Entries {
        let mut out = [0u32; MAX_DIM * MAX_DIM];
        for e in out.iter_mut().take(self.d * self.d) {
            *e = (code % self.card) as u32;
            code /= self.card;
        }
        out
    }

    #[inline]
    pub fn encode(&self, m: &Entries) -> u64 {
        m[..self.d * self.d]
            .iter()
            .rev()
            .fold(0u64, |acc, &e| acc * self.card + e as u64)
    }

    pub fn identity(&self) -> u64 {
        let mut m = [0u32; MAX_DIM * MAX_DIM];
        let one = self.ring.one().0;
        for i in 0..self.d {
            m[i * self.d + i] = one;
        }
        self.encode(&m)
    }

    #[inline]
    pub fn mul_entries(&self, a: &Entries, b: &Entries) -> Entries {
        let d = self.d;
        let mut out = [0u32; MAX_DIM * MAX_DIM];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u32;
                for k in 0..d {
                    let t = self.ring.mul_codes(a[i * d + k], b[k * d + j]);
                    acc = self.ring.add_codes(acc, t);
                }
                out[i * d + j] = acc;
            }
        }
        out
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.encode(&self.mul_entries(&self.decode(a), &self.decode(b)))
    }

    /// Gauss-Jordan inverse with unit pivots; `None` for singular matrices.
    pub fn inverse(&self, a: u64) -> Option<u64> {
        if self.card == 1 {
            return Some(a);
        }
        let d = self.d;
        let r = &self.ring;
        let m = self.decode(a);
        let mut left: Vec<Vec<u32>> = (0..d).map(|i| m[i * d..(i + 1) * d].to_vec()).collect();
        let mut right: Vec<Vec<u32>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { r.one().0 } else { 0 }).collect())
            .collect();
        for col in 0..d {
            let pivot =
                (col..d).find(|&row| r.is_unit(crate::localring::RingElem(left[row][col])))?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            let inv = r
                .inverse(crate::localring::RingElem(left[col][col]))
                .ok()?
                .0;
            for j in 0..d {
                left[col][j] = r.mul_codes(left[col][j], inv);
                right[col][j] = r.mul_codes(right[col][j], inv);
            }
            for row in 0..d {
                if row == col || left[row][col] == 0 {
                    continue;
                }
                let factor = r.neg_codes(left[row][col]);
                for j in 0..d {
                    let l = r.mul_codes(factor, left[col][j]);
                    left[row][j] = r.add_codes(left[row][j], l);
                    let rr = r.mul_codes(factor, right[col][j]);
                    right[row][j] = r.add_codes(right[row][j], rr);
                }
            }
        }
        let mut out = [0u32; MAX_DIM * MAX_DIM];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = right[i][j];
            }
        }
        Some(self.encode(&out))
    }

    /// Leibniz determinant.
    pub fn determinant(&self, m: &Entries) -> u32 {
        let d = self.d;
        let r = &self.ring;
        let mut total = 0u32;
        let mut perm: Vec<usize> = (0..d).collect();
        permutations(&mut perm, 0, &mut |p| {
            let mut term = r.one().0;
            for (i, &j) in p.iter().enumerate() {
                term = r.mul_codes(term, m[i * d + j]);
            }
            if permutation_sign(p) < 0 {
                term = r.neg_codes(term);
            }
            total = r.add_codes(total, term);
        });
        total
    }

    /// Elementary matrix `I + a e_ij`.
    pub fn elementary(&self, i: usize, j: usize, a: u32) -> u64 {
        let mut m = self.decode(self.identity());
        m[i * self.d + j] = self.ring.add_codes(m[i * self.d + j], a);
        self.encode(&m)
    }

    /// Entrywise reduction to level `level` of the ring; returns the reduced entries.
    pub fn reduce(&self, code: u64, level: u32) -> Entries {
        let mut m = self.decode(code);
        for e in m.iter_mut().take(self.d * self.d) {
            *e = self.ring.residue_code(*e, level);
        }
        m
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Permutations of `0..n`, encoded as base-`n` image lists. `(a*b)(x) = a(b(x))`.
#[derive(Clone, Debug)]
pub struct PermLaw {
    n: usize,
}

impl PermLaw {
    fn decode(&self, mut code: u64) -> Vec<usize> {
        (0..self.n)
            .map(|_| {
                let v = (code % self.n as u64) as usize;
                code /= self.n as u64;
                v
            })
            .collect()
    }

    fn encode(&self, img: &[usize]) -> u64 {
        img.iter()
            .rev()
            .fold(0u64, |acc, &v| acc * self.n as u64 + v as u64)
    }

    fn identity(&self) -> u64 {
        self.encode(&(0..self.n).collect::<Vec<_>>())
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let (a, b) = (self.decode(a), self.decode(b));
        let img: Vec<usize> = b.iter().map(|&x| a[x]).collect();
        self.encode(&img)
    }

    fn inverse(&self, a: u64) -> u64 {
        let a = self.decode(a);
        let mut inv = vec![0; self.n];
        for (i, &x) in a.iter().enumerate() {
            inv[x] = i;
        }
        self.encode(&inv)
    }
}

/// Maps `x -> ±x + k` on `Z/n`, encoded as `flip * n + k`. Dihedral and cyclic groups.
#[derive(Clone, Debug)]
pub struct AffineLaw {
    n: u64,
}

impl AffineLaw {
    fn encode(&self, k: u64, flip: bool) -> u64 {
        flip as u64 * self.n + k
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let (k1, f1) = (a % self.n, a >= self.n);
        let (k2, f2) = (b % self.n, b >= self.n);
        let k2 = if f1 { (self.n - k2) % self.n } else { k2 };
        self.encode((k1 + k2) % self.n, f1 ^ f2)
    }

    fn inverse(&self, a: u64) -> u64 {
        let (k, f) = (a % self.n, a >= self.n);
        if f {
            a
        } else {
            self.encode((self.n - k) % self.n, false)
        }
    }
}

#[derive(Clone, Debug)]
pub enum Law {
    Matrix(MatrixLaw),
    Perm(PermLaw),
    Affine(AffineLaw),
}

impl Law {
    fn identity(&self) -> u64 {
        match self {
            Law::Matrix(m) => m.identity(),
            Law::Perm(p) => p.identity(),
            Law::Affine(_) => 0,
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        match self {
            Law::Matrix(m) => m.mul(a, b),
            Law::Perm(p) => p.mul(a, b),
            Law::Affine(l) => l.mul(a, b),
        }
    }

    fn inverse(&self, a: u64) -> Option<u64> {
        match self {
            Law::Matrix(m) => m.inverse(a),
            Law::Perm(p) => Some(p.inverse(a)),
            Law::Affine(l) => Some(l.inverse(a)),
        }
    }
}

/// A finite group with every element enumerated.
#[derive(Clone)]
pub struct Group {
    desc: GroupDesc,
    law: Law,
    codes: Vec<u64>,
    index: CodeMap<u32>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.desc, self.order())
    }
}

impl Group {
    /// Breadth-first closure of `generators` (given as codes). Each layer is sorted
    /// by code, so the element order does not depend on the generator order.
    pub fn generate(
        desc: GroupDesc,
        law: Law,
        generators: &[u64],
        budget: u64,
    ) -> Result<Group, GroupError> {
        let identity = law.identity();
        let mut gens: Vec<u64> = generators
            .iter()
            .copied()
            .filter(|&g| g != identity)
            .collect();
        gens.sort_unstable();
        gens.dedup();

        let mut codes = vec![identity];
        let mut index: CodeMap<u32> = CodeMap::default();
        index.insert(identity, 0);
        let mut frontier = vec![identity];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for &s in &gens {
                    let y = law.mul(x, s);
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                        e.insert(u32::MAX);
                        next.push(y);
                    }
                }
            }
            if codes.len() as u64 + next.len() as u64 > budget {
                return Err(GroupError::SizeLimit {
                    projected: codes.len() as u64 + next.len() as u64,
                    budget,
                });
            }
            next.sort_unstable();
            for &y in &next {
                index.insert(y, codes.len() as u32);
                codes.push(y);
            }
            frontier = next;
        }
        Self::from_codes(desc, law, codes, &gens)
    }

    /// Builds the group tables from an already ordered, closed element list.
    pub(crate) fn from_codes(
        desc: GroupDesc,
        law: Law,
        codes: Vec<u64>,
        generators: &[u64],
    ) -> Result<Group, GroupError> {
        let mut index: CodeMap<u32> = CodeMap::default();
        index.reserve(codes.len());
        for (i, &c) in codes.iter().enumerate() {
            index.insert(c, i as u32);
        }
        let mut inverse = vec![0u32; codes.len()];
        for (i, &c) in codes.iter().enumerate() {
            let inv = law
                .inverse(c)
                .and_then(|ic| index.get(&ic).copied())
                .ok_or_else(|| {
                    GroupError::Cache("element list is not closed under inverses".into())
                })?;
            inverse[i] = inv;
        }
        let generators = generators
            .iter()
            .filter_map(|g| index.get(g).copied())
            .collect();
        Ok(Group {
            desc,
            law,
            codes,
            index,
            inverse,
            generators,
        })
    }

    pub fn desc(&self) -> &GroupDesc {
        &self.desc
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    pub fn order(&self) -> u64 {
        self.codes.len() as u64
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn code(&self, g: u32) -> u64 {
        self.codes[g as usize]
    }

    pub fn index_of(&self, code: u64) -> Option<u32> {
        self.index.get(&code).copied()
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let c = self.law.mul(self.codes[a as usize], self.codes[b as usize]);
        self.index[&c]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `x y x^-1 y^-1`
    pub fn commutator(&self, x: u32, y: u32) -> u32 {
        let xy = self.mul(x, y);
        let xinv_yinv = self.mul(self.inv(x), self.inv(y));
        self.mul(xy, xinv_yinv)
    }

    pub fn conjugate(&self, h: u32, g: u32) -> u32 {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn element_order(&self, g: u32) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn matrix_law(&self) -> Option<&MatrixLaw> {
        match &self.law {
            Law::Matrix(m) => Some(m),
            _ => None,
        }
    }

    /// Dense Cayley table; only sensible for small groups.
    pub fn cayley_table(&self) -> Vec<u32> {
        let n = self.len();
        let mut t = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = self.mul(a as u32, b as u32);
            }
        }
        t
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `|SL_d(R)|` for a local ring with residue field of size `q` and level `r`.
pub fn sl_order(d: usize, ring: &LocalRingSpec) -> u64 {
    if ring.r == 0 {
        return 1;
    }
    let q = ring.residue_size() as u128;
    let d = d as u32;
    let mut order: u128 = q.pow(d * (d - 1) / 2);
    for i in 2..=d {
        order *= q.pow(i) - 1;
    }
    order *= q.pow((d * d - 1) * (ring.r - 1));
    order.min(u64::MAX as u128) as u64
}

/// `SL_d(R)` by closure from elementary matrices `I + a e_ij` with `a` an additive generator.
pub fn build_sl(d: usize, ring: LocalRingSpec, budget: u64) -> Result<Group, GroupError> {
    if !(2..=MAX_DIM).contains(&d) {
        return Err(GroupError::InvalidDimension(d));
    }
    let projected = sl_order(d, &ring);
    if projected > budget {
        return Err(GroupError::SizeLimit { projected, budget });
    }
    let law = MatrixLaw::new(LocalRing::new(ring), d)?;
    let gens = elementary_generators(&law);
    Group::generate(GroupDesc::Sl { d, ring }, Law::Matrix(law), &gens, budget)
}

fn elementary_generators(law: &MatrixLaw) -> Vec<u64> {
    let d = law.dim();
    let adds = law.ring().additive_generators();
    let mut gens = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                for a in &adds {
                    gens.push(law.elementary(i, j, a.0));
                }
            }
        }
    }
    gens
}

/// Small-case oracle: every `d x d` matrix of determinant 1, as sorted codes.
pub fn sl_by_determinant_scan(d: usize, ring: LocalRingSpec) -> Result<Vec<u64>, GroupError> {
    let law = MatrixLaw::new(LocalRing::new(ring), d)?;
    let total = (law.card as u128).pow((d * d) as u32);
    if total > 50_000_000 {
        return Err(GroupError::SizeLimit {
            projected: total.min(u64::MAX as u128) as u64,
            budget: 50_000_000,
        });
    }
    let one = law.ring().one().0;
    let mut out = Vec::new();
    for code in 0..total as u64 {
        if law.determinant(&law.decode(code)) == one {
            out.push(code);
        }
    }
    Ok(out)
}

pub fn build_named(name: NamedGroup) -> Result<Group, GroupError> {
    let desc = GroupDesc::Named { name };
    match name {
        NamedGroup::Trivial => {
            let law = PermLaw { n: 1 };
            Group::generate(desc, Law::Perm(law), &[], 1)
        }
        NamedGroup::Symmetric(n) => {
            let n = n as usize;
            let law = PermLaw { n };
            let mut gens = Vec::new();
            if n >= 2 {
                let mut t: Vec<usize> = (0..n).collect();
                t.swap(0, 1);
                gens.push(law.encode(&t));
                let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                gens.push(law.encode(&cycle));
            }
            Group::generate(desc, Law::Perm(law), &gens, DEFAULT_ELEMENT_BUDGET)
        }
        NamedGroup::Dihedral(n) => {
            let law = AffineLaw { n: n as u64 };
            let gens = [law.encode(1, false), law.encode(0, true)];
            Group::generate(desc, Law::Affine(law), &gens, DEFAULT_ELEMENT_BUDGET)
        }
        NamedGroup::Cyclic(n) => {
            let law = AffineLaw { n: n as u64 };
            let gens = [law.encode(1 % law.n, false)];
            Group::generate(desc, Law::Affine(law), &gens, DEFAULT_ELEMENT_BUDGET)
        }
        NamedGroup::Quaternion8 => {
            // i = [[0,-1],[1,0]], j = [[1,1],[1,-1]] in SL_2(F_3)
            let law = MatrixLaw::new(LocalRing::new(LocalRingSpec::zmod(3, 1)?), 2)?;
            let mut i = [0u32; 16];
            i[..4].copy_from_slice(&[0, 2, 1, 0]);
            let mut j = [0u32; 16];
            j[..4].copy_from_slice(&[1, 1, 1, 2]);
            let gens = [law.encode(&i), law.encode(&j)];
            Group::generate(desc, Law::Matrix(law), &gens, DEFAULT_ELEMENT_BUDGET)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClass {
    /// Smallest element index in the class.
    pub rep: u32,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyData {
    /// Sorted by `(size, rep)`, so class 0 is the identity.
    pub classes: Vec<ConjClass>,
    pub class_of: Vec<u32>,
    pub centralizer_orders: Vec<u64>,
    pub inverse_class: Vec<u32>,
    pub exponent: u64,
}

impl ConjugacyData {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.size).collect()
    }

    pub fn reps(&self) -> Vec<u32> {
        self.classes.iter().map(|c| c.rep).collect()
    }
}

/// Conjugacy classes by orbit search under conjugation by the generators.
pub fn conjugacy(g: &Group) -> ConjugacyData {
    let n = g.len();
    let gens = g.generators().to_vec();
    let gen_inv: Vec<u32> = gens.iter().map(|&s| g.inv(s)).collect();
    let mut raw_class = vec![u32::MAX; n];
    let mut orbits: Vec<(u32, u64)> = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n as u32 {
        if raw_class[start as usize] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        raw_class[start as usize] = id;
        stack.push(start);
        let mut size = 0u64;
        while let Some(x) = stack.pop() {
            size += 1;
            for (s, si) in gens.iter().zip(&gen_inv) {
                let y = g.mul(g.mul(*s, x), *si);
                if raw_class[y as usize] == u32::MAX {
                    raw_class[y as usize] = id;
                    stack.push(y);
                }
            }
        }
        orbits.push((start, size));
    }

    let mut order: Vec<usize> = (0..orbits.len()).collect();
    order.sort_by_key(|&i| (orbits[i].1, orbits[i].0));
    let mut remap = vec![0u32; orbits.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new as u32;
    }
    let classes: Vec<ConjClass> = order
        .iter()
        .map(|&i| ConjClass {
            rep: orbits[i].0,
            size: orbits[i].1,
        })
        .collect();
    let class_of: Vec<u32> = raw_class.iter().map(|&c| remap[c as usize]).collect();
    let centralizer_orders = classes.iter().map(|c| g.order() / c.size).collect();
    let inverse_class = classes
        .iter()
        .map(|c| class_of[g.inv(c.rep) as usize])
        .collect();
    let exponent = classes.iter().map(|c| g.element_order(c.rep)).fold(1, lcm);
    ConjugacyData {
        classes,
        class_of,
        centralizer_orders,
        inverse_class,
        exponent,
    }
}

/// Kernels `K_i` of reduction modulo `m^i`, `i = 0..=r`, as sorted element indices.
#[derive(Clone, Debug)]
pub struct CongruenceFiltration {
    pub kernels: Vec<Vec<u32>>,
}

impl CongruenceFiltration {
    pub fn depth(&self) -> u32 {
        self.kernels.len() as u32 - 1
    }

    pub fn contains(&self, level: u32, g: u32) -> bool {
        self.kernels[level as usize].binary_search(&g).is_ok()
    }
}

pub fn congruence_filtration(g: &Group) -> Result<CongruenceFiltration, GroupError> {
    let law = g.matrix_law().ok_or(GroupError::NotMatrixGroup)?;
    let r = law.ring().level();
    let id = law.identity();
    let kernels = (0..=r)
        .map(|level| {
            let id_red = law.reduce(id, level);
            (0..g.len() as u32)
                .filter(|&x| law.reduce(g.code(x), level) == id_red)
                .collect()
        })
        .collect();
    Ok(CongruenceFiltration { kernels })
}

/// `G / K_i`, realized as a matrix group over the level-`i` ring.
pub struct Quotient {
    pub group: Group,
    /// Image in `group` of each element of the parent.
    pub projection: Vec<u32>,
}

pub fn quotient_group(g: &Group, level: u32) -> Result<Quotient, GroupError> {
    let law = g.matrix_law().ok_or(GroupError::NotMatrixGroup)?;
    let r = law.ring().level();
    if level > r {
        return Err(GroupError::LevelOutOfRange { level, max: r });
    }
    let spec = law.ring().spec().at_level(level)?;
    let qlaw = MatrixLaw::new(LocalRing::new(spec), law.dim())?;
    let image = |x: u32| qlaw.encode(&law.reduce(g.code(x), level));
    let gens: Vec<u64> = g.generators().iter().map(|&s| image(s)).collect();
    let desc = match g.desc() {
        GroupDesc::Sl { d, .. } => GroupDesc::Sl { d: *d, ring: spec },
        other => other.clone(),
    };
    let group = Group::generate(desc, Law::Matrix(qlaw.clone()), &gens, g.order().max(1))?;
    let projection = (0..g.len() as u32)
        .map(|x| {
            group
                .index_of(image(x))
                .expect("reduction is a homomorphism onto the quotient")
        })
        .collect();
    Ok(Quotient { group, projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(s: &str) -> LocalRingSpec {
        s.parse().unwrap()
    }

    #[test]
    fn sl2_orders_match_determinant_scan() {
        for (s, order) in [("zmod:2^1", 6), ("zmod:3^1", 24), ("zmod:2^2", 48)] {
            let g = build_sl(2, spec(s), DEFAULT_ELEMENT_BUDGET).unwrap();
            assert_eq!(g.order(), order, "{s}");
            let scan = sl_by_determinant_scan(2, spec(s)).unwrap();
            assert_eq!(scan.len() as u64, order);
        }
    }

    #[test]
    fn closure_equals_scan_up_to_25_elements_rings() {
        for s in [
            "zmod:2^1",
            "zmod:3^1",
            "zmod:5^1",
            "zmod:2^2",
            "zmod:3^2",
            "zmod:5^2",
            "tpoly:2^2",
            "tpoly:3^2",
            "tpoly:5^2",
            "zmod:2^3",
            "zmod:2^4",
            "gf:2^2",
            "gf:3^2",
        ] {
            let g = build_sl(2, spec(s), DEFAULT_ELEMENT_BUDGET).unwrap();
            let mut closure: Vec<u64> = g.codes().to_vec();
            closure.sort_unstable();
            assert_eq!(closure, sl_by_determinant_scan(2, spec(s)).unwrap(), "{s}");
            assert_eq!(g.order(), sl_order(2, &spec(s)), "{s}");
        }
    }

    #[test]
    fn sl2_order_formula() {
        for (p, r) in [(2u32, 3u32), (3, 2), (5, 2), (2, 5)] {
            let s = LocalRingSpec::zmod(p, r).unwrap();
            let pf = p as f64;
            let expected = pf.powi(3 * r as i32) * (1.0 - pf.powi(-2));
            assert_eq!(sl_order(2, &s), expected.round() as u64);
        }
        let g = build_sl(2, spec("zmod:2^3"), DEFAULT_ELEMENT_BUDGET).unwrap();
        assert_eq!(g.order(), 384);
    }

    #[test]
    fn sl3_small() {
        let g = build_sl(3, spec("zmod:2^1"), DEFAULT_ELEMENT_BUDGET).unwrap();
        assert_eq!(g.order(), 168);
        let c = conjugacy(&g);
        assert_eq!(c.class_count(), 6);
    }

    #[test]
    fn budget_is_enforced() {
        let err = build_sl(2, spec("zmod:7^2"), 1000).unwrap_err();
        assert!(matches!(
            err,
            GroupError::SizeLimit {
                projected: 115248,
                budget: 1000
            }
        ));
    }

    #[test]
    fn named_groups() {
        let cases = [
            (NamedGroup::Trivial, 1, 1),
            (NamedGroup::Symmetric(3), 6, 3),
            (NamedGroup::Symmetric(4), 24, 5),
            (NamedGroup::Dihedral(4), 8, 5),
            (NamedGroup::Quaternion8, 8, 5),
            (NamedGroup::Cyclic(5), 5, 5),
        ];
        for (name, order, classes) in cases {
            let g = build_named(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(conjugacy(&g).class_count(), classes, "{name}");
        }
        assert!("symmetric_9".parse::<NamedGroup>().is_err());
        assert!("monster".parse::<NamedGroup>().is_err());
        assert_eq!("q8".parse::<NamedGroup>().unwrap(), NamedGroup::Quaternion8);
        assert_eq!(
            "named:s3".parse::<NamedGroup>().unwrap(),
            NamedGroup::Symmetric(3)
        );
        assert_eq!("d4".parse::<NamedGroup>().unwrap(), NamedGroup::Dihedral(4));
    }

    #[test]
    fn s3_classes_by_brute_orbits() {
        let g = build_named(NamedGroup::Symmetric(3)).unwrap();
        let c = conjugacy(&g);
        // orbit enumeration over all conjugators
        let mut brute: Vec<u64> = Vec::new();
        let mut seen = [false; 6];
        for x in 0..6u32 {
            if seen[x as usize] {
                continue;
            }
            let mut orbit: Vec<u32> = (0..6u32).map(|h| g.conjugate(h, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y as usize] = true;
            }
            brute.push(orbit.len() as u64);
        }
        brute.sort_unstable();
        assert_eq!(c.sizes(), brute);
        assert_eq!(c.sizes(), vec![1, 2, 3]);
    }

    fn check_conjugacy_invariants(g: &Group, c: &ConjugacyData) {
        assert_eq!(c.sizes().iter().sum::<u64>(), g.order());
        for (i, cl) in c.classes.iter().enumerate() {
            assert_eq!(cl.size * c.centralizer_orders[i], g.order());
            assert_eq!(c.inverse_class[c.inverse_class[i] as usize] as usize, i);
            assert_eq!(c.class_of[cl.rep as usize] as usize, i);
        }
        assert_eq!(c.classes[0], ConjClass { rep: 0, size: 1 });
        for w in c.classes.windows(2) {
            assert!((w[0].size, w[0].rep) < (w[1].size, w[1].rep));
        }
    }

    #[test]
    fn conjugacy_invariants_and_sl2f3() {
        let g = build_sl(2, spec("zmod:3^1"), DEFAULT_ELEMENT_BUDGET).unwrap();
        let c = conjugacy(&g);
        assert_eq!(c.class_count(), 7);
        assert_eq!(c.exponent, 12);
        check_conjugacy_invariants(&g, &c);
        let g = build_sl(2, spec("tpoly:3^2"), DEFAULT_ELEMENT_BUDGET).unwrap();
        check_conjugacy_invariants(&g, &conjugacy(&g));
    }

    #[test]
    fn class_count_independent_of_generator_order() {
        let s = spec("zmod:3^2");
        let g = build_sl(2, s, DEFAULT_ELEMENT_BUDGET).unwrap();
        let law = g.matrix_law().unwrap().clone();
        let mut gens = elementary_generators(&law);
        gens.reverse();
        let h = Group::generate(
            g.desc().clone(),
            Law::Matrix(law),
            &gens,
            DEFAULT_ELEMENT_BUDGET,
        )
        .unwrap();
        assert_eq!(g.codes(), h.codes());
        assert_eq!(conjugacy(&g).sizes(), conjugacy(&h).sizes());
    }

    #[test]
    fn closure_spot_checks() {
        let g = build_sl(2, spec("zmod:2^4"), DEFAULT_ELEMENT_BUDGET).unwrap();
        let law = g.matrix_law().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let a = rng.gen_range(0..g.len() as u32);
            let b = rng.gen_range(0..g.len() as u32);
            let ab = law.mul(g.code(a), g.code(b));
            assert!(g.index_of(ab).is_some());
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            assert_eq!(law.determinant(&law.decode(g.code(a))), 1);
        }
    }

    #[test]
    fn filtration_and_quotients() {
        let g = build_sl(2, spec("zmod:2^2"), DEFAULT_ELEMENT_BUDGET).unwrap();
        let f = congruence_filtration(&g).unwrap();
        assert_eq!(f.kernels[0].len(), 48);
        assert_eq!(f.kernels[1].len(), 8);
        assert_eq!(f.kernels[2], vec![0]);

        let g = build_sl(2, spec("zmod:3^2"), DEFAULT_ELEMENT_BUDGET).unwrap();
        let f = congruence_filtration(&g).unwrap();
        for level in 0..=2u32 {
            let q = quotient_group(&g, level).unwrap();
            assert_eq!(
                f.kernels[level as usize].len() as u64 * q.group.order(),
                g.order()
            );
            // kernel of the projection is K_i
            let ker: Vec<u32> = (0..g.len() as u32)
                .filter(|&x| q.projection[x as usize] == 0)
                .collect();
            assert_eq!(ker, f.kernels[level as usize]);
        }
        let q1 = quotient_group(&g, 1).unwrap();
        assert_eq!(q1.group.order(), 24);
        let direct = build_sl(2, spec("zmod:3^1"), DEFAULT_ELEMENT_BUDGET).unwrap();
        assert_eq!(q1.group.codes(), direct.codes());
        assert_eq!(quotient_group(&g, 0).unwrap().group.order(), 1);
        assert_eq!(quotient_group(&g, 2).unwrap().group.order(), g.order());
        assert!(quotient_group(&g, 3).is_err());
    }

    #[test]
    fn kernels_are_normal() {
        let g = build_sl(2, spec("tpoly:2^3"), DEFAULT_ELEMENT_BUDGET).unwrap();
        let f = congruence_filtration(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for level in 0..=f.depth() {
            let k = &f.kernels[level as usize];
            for _ in 0..200 {
                let x = k[rng.gen_range(0..k.len())];
                let h = rng.gen_range(0..g.len() as u32);
                assert!(f.contains(level, g.conjugate(h, x)));
            }
        }
    }

    #[test]
    fn filtration_rejects_permutation_groups() {
        let g = build_named(NamedGroup::Symmetric(3)).unwrap();
        assert!(matches!(
            congruence_filtration(&g),
            Err(GroupError::NotMatrixGroup)
        ));
    }
}
