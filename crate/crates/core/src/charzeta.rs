//! Class-algebra constants, character degrees by the Dixon–Schneider method
//! over a prime field, and exact representation zeta values `Σ χ(1)^{-s}`.

use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::localring::is_prime;
use crate::modgroup::{conjugacy, ConjugacyData, Group};

/// Default seed for eigenspace splitting.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Random combinations tried on a subspace before giving up.
const SPLIT_ATTEMPTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("eigenspace splitting mod {ell} made no progress after {attempts} attempts")]
    DegenerateSplitting { ell: u64, attempts: usize },
    #[error("character table mod {ell} is inconsistent: {reason}")]
    Inconsistent { ell: u64, reason: String },
    #[error("{ell} is not a usable prime for a group of order {order} and exponent {exponent}")]
    BadPrime { ell: u64, order: u64, exponent: u64 },
    #[error("zeta argument must be a positive even integer, got {0}")]
    BadArgument(u32),
}

/// `a[i][j][l] = #{(u, v) ∈ C_i × C_j : uv = z_l}` for fixed representatives `z_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassConstants {
    k: usize,
    data: Vec<u32>,
}

impl ClassConstants {
    pub fn class_count(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize) -> u32 {
        self.data[(i * self.k + j) * self.k + l]
    }

    fn from_columns(k: usize, columns: Vec<Vec<u32>>) -> Self {
        let mut data = vec![0u32; k * k * k];
        for (l, col) in columns.into_iter().enumerate() {
            for ij in 0..k * k {
                data[ij * k + l] = col[ij];
            }
        }
        ClassConstants { k, data }
    }
}

/// O(|G| k): for each representative `z_l` and each `u`, set `v = u^-1 z_l`.
pub fn class_constants(g: &Group, conj: &ConjugacyData) -> ClassConstants {
    let k = conj.class_count();
    let columns = (0..k)
        .into_par_iter()
        .map(|l| {
            let z = conj.classes[l].rep;
            let mut col = vec![0u32; k * k];
            for u in 0..g.len() as u32 {
                let v = g.mul(g.inv(u), z);
                let (ci, cj) = (
                    conj.class_of[u as usize] as usize,
                    conj.class_of[v as usize] as usize,
                );
                col[ci * k + cj] += 1;
            }
            col
        })
        .collect();
    ClassConstants::from_columns(k, columns)
}

/// Same tensor, iterating over the right factor: `u = z_l v^-1`.
pub fn class_constants_vloop(g: &Group, conj: &ConjugacyData) -> ClassConstants {
    let k = conj.class_count();
    let columns = (0..k)
        .into_par_iter()
        .map(|l| {
            let z = conj.classes[l].rep;
            let mut col = vec![0u32; k * k];
            for v in 0..g.len() as u32 {
                let u = g.mul(z, g.inv(v));
                let (ci, cj) = (
                    conj.class_of[u as usize] as usize,
                    conj.class_of[v as usize] as usize,
                );
                col[ci * k + cj] += 1;
            }
            col
        })
        .collect();
    ClassConstants::from_columns(k, columns)
}

/// A group together with its conjugacy data and class constants.
pub struct GroupTables {
    pub group: Group,
    pub conj: ConjugacyData,
    pub constants: ClassConstants,
}

impl GroupTables {
    pub fn new(group: Group) -> Self {
        let conj = conjugacy(&group);
        Self::with_conjugacy(group, conj)
    }

    pub fn with_conjugacy(group: Group, conj: ConjugacyData) -> Self {
        let constants = class_constants(&group, &conj);
        GroupTables {
            group,
            conj,
            constants,
        }
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn class_count(&self) -> usize {
        self.conj.class_count()
    }
}

/// Irreducible characters reduced modulo a prime `ell`.
#[derive(Clone, Debug, Serialize)]
pub struct ModCharTable {
    pub ell: u64,
    pub seed: u64,
    /// Character degrees, sorted ascending; index `s` matches `omega[s]` and `chi[s]`.
    pub degrees: Vec<u64>,
    /// Central character values `ω_s(K_i)` mod `ell`.
    pub omega: Vec<Vec<u64>>,
    /// Character values `χ_s(C_i)` mod `ell`.
    pub chi: Vec<Vec<u64>>,
}

impl ModCharTable {
    pub fn degree_multiset(&self) -> Vec<u64> {
        self.degrees.clone()
    }
}

/// Moduli stay below 2^32, so products fit in a `u64`.
#[inline]
fn mulm(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

#[inline]
fn addm(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

fn powm(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, m);
        }
        a = mulm(a, a, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn invm(a: u64, m: u64) -> u64 {
    powm(a, m - 2, m)
}

/// The `count` smallest primes `ell ≡ 1 (mod exponent)` with `ell > 2 order`.
pub fn choose_primes(exponent: u64, order: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let floor = 2 * order;
    let mut c = floor / exponent * exponent + 1;
    while out.len() < count {
        if c > floor && is_prime(c) {
            out.push(c);
        }
        c += exponent;
    }
    out
}

/// Dense polynomials over `F_ell`, lowest coefficient first, no trailing zeros.
mod poly {
    use super::{addm, invm, mulm, subm};

    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &Poly) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn sub(a: &Poly, b: &Poly, m: u64) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| subm(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), m))
            .collect();
        trim(out)
    }

    pub fn mul(a: &Poly, b: &Poly, m: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(x, y, m), m);
            }
        }
        trim(out)
    }

    /// Quotient and remainder; `b` nonzero.
    pub fn divrem(a: &Poly, b: &Poly, m: u64) -> (Poly, Poly) {
        let db = b.len() - 1;
        let lead_inv = invm(b[db], m);
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), trim(r));
        }
        let mut q = vec![0u64; r.len() - db];
        for i in (0..q.len()).rev() {
            let c = mulm(r[i + db], lead_inv, m);
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = subm(r[i + j], mulm(c, bj, m), m);
            }
        }
        (trim(q), trim(r))
    }

    pub fn rem(a: &Poly, b: &Poly, m: u64) -> Poly {
        divrem(a, b, m).1
    }

    pub fn gcd(a: &Poly, b: &Poly, m: u64) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, m);
            a = b;
            b = r;
        }
        monic(a, m)
    }

    pub fn monic(a: Poly, m: u64) -> Poly {
        match a.last() {
            None => a,
            Some(&lead) => {
                let inv = invm(lead, m);
                a.into_iter().map(|c| mulm(c, inv, m)).collect()
            }
        }
    }

    pub fn powmod(base: &Poly, mut e: u64, f: &Poly, m: u64) -> Poly {
        let mut acc: Poly = trim(vec![1 % m]);
        let mut b = rem(base, f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, m), f, m);
            }
            b = rem(&mul(&b, &b, m), f, m);
            e >>= 1;
        }
        acc
    }
}

/// Upper Hessenberg form `H = T X T^-1`, returned with `U = T^-1`.
fn hessenberg(mut h: Vec<Vec<u64>>, m: u64) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let n = h.len();
    let mut u: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as u64).collect())
        .collect();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut().chain(u.iter_mut()) {
                row.swap(piv, j + 1);
            }
        }
        let inv = invm(h[j + 1][j], m);
        for i in j + 2..n {
            if h[i][j] == 0 {
                continue;
            }
            let f = mulm(h[i][j], inv, m);
            // row_i -= f row_{j+1}, then col_{j+1} += f col_i
            for c in 0..n {
                let t = mulm(f, h[j + 1][c], m);
                h[i][c] = subm(h[i][c], t, m);
            }
            for row in h.iter_mut().chain(u.iter_mut()) {
                let t = mulm(f, row[i], m);
                row[j + 1] = addm(row[j + 1], t, m);
            }
        }
    }
    (h, u)
}

/// Eigenvector of an unreduced Hessenberg matrix by back-substitution, or `None`
/// when a zero subdiagonal entry (or a non-eigenvalue) stops the recursion.
fn hessenberg_eigenvector(h: &[Vec<u64>], lambda: u64, m: u64) -> Option<Vec<u64>> {
    let n = h.len();
    let mut y = vec![0u64; n];
    y[n - 1] = 1;
    for i in (1..n).rev() {
        let sub = h[i][i - 1];
        if sub == 0 {
            return None;
        }
        let mut acc = mulm(subm(h[i][i], lambda, m), y[i], m);
        for c in i + 1..n {
            acc = addm(acc, mulm(h[i][c], y[c], m), m);
        }
        y[i - 1] = mulm(subm(0, acc, m), invm(sub, m), m);
    }
    let mut row0 = mulm(subm(h[0][0], lambda, m), y[0], m);
    for c in 1..n {
        row0 = addm(row0, mulm(h[0][c], y[c], m), m);
    }
    (row0 == 0).then_some(y)
}

/// Characteristic polynomial of an upper Hessenberg matrix.
fn charpoly_hessenberg(h: &[Vec<u64>], m: u64) -> poly::Poly {
    let n = h.len();
    // p_k = (x - h_{k-1,k-1}) p_{k-1} - Σ_{i<k-1} h_{i,k-1} Π_{t=i+1}^{k-1} h_{t,t-1} p_i
    let mut ps: Vec<poly::Poly> = vec![vec![1 % m]];
    for k in 1..=n {
        let mut next = poly::mul(
            &ps[k - 1],
            &poly::trim(vec![subm(0, h[k - 1][k - 1], m), 1]),
            m,
        );
        let mut prod = 1u64;
        for i in (0..k - 1).rev() {
            prod = mulm(prod, h[i + 1][i], m);
            let c = mulm(prod, h[i][k - 1], m);
            if c != 0 {
                let term: poly::Poly = ps[i].iter().map(|&x| mulm(x, c, m)).collect();
                next = poly::sub(&next, &term, m);
            }
        }
        ps.push(next);
    }
    ps.pop().unwrap()
}

#[cfg(test)]
fn charpoly(x: Vec<Vec<u64>>, m: u64) -> poly::Poly {
    charpoly_hessenberg(&hessenberg(x, m).0, m)
}

/// Distinct roots in `F_m` of `f`, sorted.
fn distinct_roots(f: &poly::Poly, m: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let f = poly::monic(f.clone(), m);
    if poly::degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let x: poly::Poly = vec![0, 1];
    let xq = poly::powmod(&x, m, &f, m);
    let g = poly::gcd(&poly::sub(&xq, &x, m), &f, m);
    let mut roots = Vec::new();
    let mut stack = vec![g];
    while let Some(g) = stack.pop() {
        match poly::degree(&g) {
            None | Some(0) => {}
            Some(1) => roots.push(subm(0, mulm(g[0], invm(g[1], m), m), m)),
            Some(_) => loop {
                let a = rng.gen_range(0..m);
                let shifted = vec![a, 1];
                let p = poly::powmod(&shifted, (m - 1) / 2, &g, m);
                let h = poly::gcd(&poly::sub(&p, &vec![1], m), &g, m);
                let dh = poly::degree(&h).unwrap_or(0);
                if dh > 0 && dh < g.len() - 1 {
                    let (q, _) = poly::divrem(&g, &h, m);
                    stack.push(h);
                    stack.push(poly::monic(q, m));
                    break;
                }
            },
        }
    }
    roots.sort_unstable();
    roots
}

/// Row-reduced basis of a subspace of `F_m^k`; row `r` is 1 at `pivots[r]` and 0 at other pivots.
#[derive(Clone, Debug)]
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn rref(mut rows: Vec<Vec<u64>>, m: u64) -> Subspace {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = invm(rows[r][c], m);
        for x in rows[r].iter_mut() {
            *x = mulm(*x, inv, m);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let t = mulm(f, rows[r][j], m);
                    rows[i][j] = subm(rows[i][j], t, m);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Subspace { rows, pivots }
}

/// Null space of a square matrix, as a list of vectors.
fn kernel(a: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let n = a.first().map_or(0, |r| r.len());
    let red = rref(a.to_vec(), m);
    let free: Vec<usize> = (0..n).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (row, &pc) in red.rows.iter().zip(&red.pivots) {
                v[pc] = subm(0, row[fc], m);
            }
            v
        })
        .collect()
}

/// Common eigenvectors of the class matrices `(M_j)_{k,l} = a[j][k][l]`, normalized
/// so the identity-class coordinate is 1. These are the central characters.
fn central_characters(
    t: &GroupTables,
    m: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<u64>>, CharError> {
    let k = t.class_count();
    let c = &t.constants;
    let full = Subspace {
        rows: (0..k)
            .map(|i| (0..k).map(|j| (i == j) as u64).collect())
            .collect(),
        pivots: (0..k).collect(),
    };
    let mut pending = vec![full];
    let mut done = Vec::new();
    while let Some(space) = pending.pop() {
        let dim = space.rows.len();
        if dim == 1 {
            done.push(space.rows[0].clone());
            continue;
        }
        let mut split = None;
        for _ in 0..SPLIT_ATTEMPTS {
            let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..m)).collect();
            // combined operator Σ_j c_j M_j, then the image of each basis vector
            let combined: Vec<Vec<u64>> = (0..k)
                .into_par_iter()
                .map(|row| {
                    let mut out = vec![0u64; k];
                    for (j, &cj) in coeffs.iter().enumerate() {
                        if cj == 0 {
                            continue;
                        }
                        for (l, o) in out.iter_mut().enumerate() {
                            let a = c.get(j, row, l) as u64;
                            if a != 0 {
                                *o = addm(*o, mulm(cj, a % m, m), m);
                            }
                        }
                    }
                    out
                })
                .collect();
            let images: Vec<Vec<u64>> = space
                .rows
                .par_iter()
                .map(|b| {
                    combined
                        .iter()
                        .map(|row| {
                            row.iter()
                                .zip(b)
                                .fold(0u64, |acc, (&x, &y)| addm(acc, mulm(x, y, m), m))
                        })
                        .collect()
                })
                .collect();
            // restricted operator X[r][col] = (M b_col)[pivot_r]
            let x: Vec<Vec<u64>> = (0..dim)
                .map(|r| (0..dim).map(|col| images[col][space.pivots[r]]).collect())
                .collect();
            let (hess, u) = hessenberg(x.clone(), m);
            let roots = distinct_roots(&charpoly_hessenberg(&hess, m), m, rng);
            if roots.len() < 2 {
                continue;
            }
            let lift = |y: &[u64]| -> Vec<u64> {
                let mut v = vec![0u64; k];
                for (coef, b) in y.iter().zip(&space.rows) {
                    if *coef != 0 {
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi = addm(*vi, mulm(*coef, *bi, m), m);
                        }
                    }
                }
                v
            };
            let mut parts = Vec::new();
            let mut total = 0;
            for &lambda in &roots {
                let fast = if roots.len() == dim {
                    hessenberg_eigenvector(&hess, lambda, m)
                } else {
                    None
                };
                let ys = match fast {
                    // back to the coordinates of X
                    Some(y) => vec![(0..dim)
                        .map(|r| {
                            u[r].iter()
                                .zip(&y)
                                .fold(0u64, |acc, (&a, &b)| addm(acc, mulm(a, b, m), m))
                        })
                        .collect::<Vec<u64>>()],
                    None => {
                        let shifted: Vec<Vec<u64>> = (0..dim)
                            .map(|r| {
                                (0..dim)
                                    .map(|col| {
                                        if r == col {
                                            subm(x[r][col], lambda, m)
                                        } else {
                                            x[r][col]
                                        }
                                    })
                                    .collect()
                            })
                            .collect();
                        kernel(&shifted, m)
                    }
                };
                total += ys.len();
                let vecs: Vec<Vec<u64>> = ys.iter().map(|y| lift(y)).collect();
                parts.push(rref(vecs, m));
            }
            if total != dim {
                return Err(CharError::Inconsistent {
                    ell: m,
                    reason: format!(
                        "class operator not diagonalizable on a {dim}-dimensional subspace"
                    ),
                });
            }
            split = Some(parts);
            break;
        }
        match split {
            Some(parts) => pending.extend(parts),
            None => {
                return Err(CharError::DegenerateSplitting {
                    ell: m,
                    attempts: SPLIT_ATTEMPTS,
                })
            }
        }
    }
    done.into_iter()
        .map(|v| {
            if v[0] == 0 {
                return Err(CharError::Inconsistent {
                    ell: m,
                    reason: "eigenvector vanishes on the identity class".into(),
                });
            }
            let inv = invm(v[0], m);
            Ok(v.into_iter().map(|x| mulm(x, inv, m)).collect())
        })
        .collect()
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Character degrees and values mod `ell` by simultaneous diagonalization of the class matrices.
pub fn dixon_mod_table(t: &GroupTables, ell: u64, seed: u64) -> Result<ModCharTable, CharError> {
    let order = t.order();
    let exponent = t.conj.exponent;
    if !is_prime(ell) || ell <= 2 * order || !(ell - 1).is_multiple_of(exponent) || ell >= 1 << 32 {
        return Err(CharError::BadPrime {
            ell,
            order,
            exponent,
        });
    }
    let m = ell;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omegas = central_characters(t, m, &mut rng)?;
    let k = t.class_count();
    if omegas.len() != k {
        return Err(CharError::Inconsistent {
            ell,
            reason: format!("{} eigenvectors for {k} classes", omegas.len()),
        });
    }
    let sizes = t.conj.sizes();
    let inv_sizes: Vec<u64> = sizes.iter().map(|&s| invm(s % m, m)).collect();
    let mut rows = Vec::with_capacity(k);
    for omega in omegas {
        let mut s = 0u64;
        for i in 0..k {
            let term = mulm(
                mulm(omega[i], omega[t.conj.inverse_class[i] as usize], m),
                inv_sizes[i],
                m,
            );
            s = addm(s, term, m);
        }
        if s == 0 {
            return Err(CharError::Inconsistent {
                ell,
                reason: "vanishing degree denominator".into(),
            });
        }
        let d2 = mulm(order % m, invm(s, m), m);
        if d2 == 0 || d2 > order {
            return Err(CharError::Inconsistent {
                ell,
                reason: format!("lifted squared degree {d2} outside [1, {order}]"),
            });
        }
        let d = isqrt(d2);
        if d * d != d2 {
            return Err(CharError::Inconsistent {
                ell,
                reason: format!("squared degree {d2} is not a square"),
            });
        }
        let chi: Vec<u64> = (0..k)
            .map(|i| mulm(mulm(d % m, omega[i], m), inv_sizes[i], m))
            .collect();
        rows.push((d, omega, chi));
    }
    rows.sort_by(|a, b| (a.0, &a.2).cmp(&(b.0, &b.2)));

    let table = ModCharTable {
        ell,
        seed,
        degrees: rows.iter().map(|r| r.0).collect(),
        omega: rows.iter().map(|r| r.1.clone()).collect(),
        chi: rows.into_iter().map(|r| r.2).collect(),
    };
    check_table(t, &table)?;
    Ok(table)
}

fn check_table(t: &GroupTables, table: &ModCharTable) -> Result<(), CharError> {
    let m = table.ell;
    let order = t.order();
    let inconsistent = |reason: String| CharError::Inconsistent { ell: m, reason };
    if table.degrees.iter().map(|d| d * d).sum::<u64>() != order {
        return Err(inconsistent(
            "sum of squared degrees differs from the group order".into(),
        ));
    }
    if let Some(d) = table.degrees.iter().find(|&&d| !order.is_multiple_of(d)) {
        return Err(inconsistent(format!("degree {d} does not divide {order}")));
    }
    let sizes = t.conj.sizes();
    let k = t.class_count();
    let bad = (0..k).into_par_iter().find_any(|&s| {
        (0..k).any(|u| {
            let mut acc = 0u64;
            for i in 0..k {
                let term = mulm(
                    mulm(sizes[i] % m, table.chi[s][i], m),
                    table.chi[u][t.conj.inverse_class[i] as usize],
                    m,
                );
                acc = addm(acc, term, m);
            }
            acc != if s == u { order % m } else { 0 }
        })
    });
    match bad {
        Some(s) => Err(inconsistent(format!(
            "first orthogonality fails for character {s}"
        ))),
        None => Ok(()),
    }
}

/// Dixon table at the smallest admissible prime.
pub fn default_mod_table(t: &GroupTables, seed: u64) -> Result<ModCharTable, CharError> {
    let ell = choose_primes(t.conj.exponent, t.order(), 1)[0];
    dixon_mod_table(t, ell, seed)
}

/// `Σ_s d_s^{-s}` for a multiset of degrees.
pub fn zeta_from_degrees(degrees: &[u64], s: u32) -> BigRational {
    degrees.iter().fold(BigRational::zero(), |acc, &d| {
        acc + BigRational::new(BigInt::one(), BigInt::from(d).pow(s))
    })
}

pub fn zeta_even(t: &GroupTables, s: u32, seed: u64) -> Result<BigRational, CharError> {
    if s == 0 || s % 2 == 1 {
        return Err(CharError::BadArgument(s));
    }
    Ok(zeta_from_degrees(&default_mod_table(t, seed)?.degrees, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgroup::{build_named, build_sl, NamedGroup, DEFAULT_ELEMENT_BUDGET};

    fn named(n: NamedGroup) -> GroupTables {
        GroupTables::new(build_named(n).unwrap())
    }

    fn sl2(ring: &str) -> GroupTables {
        GroupTables::new(build_sl(2, ring.parse().unwrap(), DEFAULT_ELEMENT_BUDGET).unwrap())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trivial_group() {
        let t = named(NamedGroup::Trivial);
        assert_eq!(t.constants.get(0, 0, 0), 1);
        let table = default_mod_table(&t, DEFAULT_SEED).unwrap();
        assert_eq!(table.degrees, vec![1]);
        assert_eq!(zeta_even(&t, 4, 1).unwrap(), q(1, 1));
    }

    #[test]
    fn s3_constants_against_pair_enumeration() {
        let t = named(NamedGroup::Symmetric(3));
        let (g, c) = (&t.group, &t.conj);
        let k = c.class_count();
        let mut brute = vec![0u32; k * k * k];
        for u in 0..6u32 {
            for v in 0..6u32 {
                let w = g.mul(u, v);
                for l in 0..k {
                    if w == c.classes[l].rep {
                        let (i, j) = (
                            c.class_of[u as usize] as usize,
                            c.class_of[v as usize] as usize,
                        );
                        brute[(i * k + j) * k + l] += 1;
                    }
                }
            }
        }
        assert_eq!(t.constants.data, brute);
        assert_eq!(class_constants_vloop(g, c), t.constants);
        // transpositions are the class of size 3
        let tr = c.classes.iter().position(|cl| cl.size == 3).unwrap();
        let total: u64 = (0..k)
            .map(|l| t.constants.get(tr, tr, l) as u64 * c.classes[l].size)
            .sum();
        assert_eq!(total, 9);
    }

    #[test]
    fn constants_row_sums() {
        let t = sl2("zmod:3^1");
        let sizes = t.conj.sizes();
        let k = t.class_count();
        for i in 0..k {
            for j in 0..k {
                let s: u64 = (0..k)
                    .map(|l| t.constants.get(i, j, l) as u64 * sizes[l])
                    .sum();
                assert_eq!(s, sizes[i] * sizes[j]);
            }
        }
        assert_eq!(class_constants_vloop(&t.group, &t.conj), t.constants);
    }

    #[test]
    fn small_degree_sets() {
        let cases: [(NamedGroup, &[u64]); 5] = [
            (NamedGroup::Symmetric(3), &[1, 1, 2]),
            (NamedGroup::Quaternion8, &[1, 1, 1, 1, 2]),
            (NamedGroup::Dihedral(4), &[1, 1, 1, 1, 2]),
            (NamedGroup::Symmetric(4), &[1, 1, 2, 3, 3]),
            (NamedGroup::Cyclic(7), &[1; 7]),
        ];
        for (n, degrees) in cases {
            let t = named(n);
            assert_eq!(
                default_mod_table(&t, DEFAULT_SEED).unwrap().degrees,
                degrees,
                "{n}"
            );
        }
        assert_eq!(
            zeta_even(&named(NamedGroup::Symmetric(3)), 2, 7).unwrap(),
            q(9, 4)
        );
    }

    #[test]
    fn sl2f3_degrees_and_zeta() {
        let t = sl2("zmod:3^1");
        let table = default_mod_table(&t, DEFAULT_SEED).unwrap();
        assert_eq!(table.degrees, vec![1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(zeta_from_degrees(&table.degrees, 2), q(139, 36));
    }

    #[test]
    fn degrees_stable_across_primes_and_seeds() {
        for t in [sl2("zmod:5^1"), sl2("zmod:2^3"), sl2("tpoly:3^2")] {
            let primes = choose_primes(t.conj.exponent, t.order(), 3);
            assert_eq!(primes.len(), 3);
            let runs: Vec<Vec<u64>> = primes
                .iter()
                .enumerate()
                .map(|(i, &ell)| dixon_mod_table(&t, ell, i as u64).unwrap().degrees)
                .collect();
            assert_eq!(runs[0], runs[1]);
            assert_eq!(runs[1], runs[2]);
        }
    }

    #[test]
    fn prime_choice() {
        // S_3: exponent 6, order 6, need ell > 12 and ell = 1 mod 6
        assert_eq!(choose_primes(6, 6, 3), vec![13, 19, 31]);
        assert_eq!(choose_primes(1, 1, 1), vec![3]);
        let t = named(NamedGroup::Symmetric(3));
        assert!(matches!(
            dixon_mod_table(&t, 7, 0),
            Err(CharError::BadPrime { .. })
        ));
    }

    #[test]
    fn zeta_decreasing_in_s() {
        let t = sl2("zmod:2^2");
        let degrees = default_mod_table(&t, DEFAULT_SEED).unwrap().degrees;
        let mut prev = zeta_from_degrees(&degrees, 2);
        for s in (4..=12).step_by(2) {
            let z = zeta_from_degrees(&degrees, s);
            assert!(z < prev);
            prev = z;
        }
        assert!(matches!(
            zeta_even(&t, 3, 0),
            Err(CharError::BadArgument(3))
        ));
    }

    #[test]
    fn polynomial_roots() {
        let m = 13;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x-2)(x-5)^2(x-0)
        let f = poly::mul(
            &poly::mul(&vec![11, 1], &poly::mul(&vec![8, 1], &vec![8, 1], m), m),
            &vec![0, 1],
            m,
        );
        assert_eq!(distinct_roots(&f, m, &mut rng), vec![0, 2, 5]);
        // x^2 + 1 has no roots mod 7... but 13 = 1 mod 4, roots 5 and 8
        assert_eq!(distinct_roots(&vec![1, 0, 1], m, &mut rng), vec![5, 8]);
        assert!(distinct_roots(&vec![1, 0, 1], 7, &mut rng).is_empty());
    }

    #[test]
    fn charpoly_matches_trace_and_det() {
        let m = 101;
        let a = vec![vec![2, 3, 5], vec![7, 11, 13], vec![17, 19, 23]];
        let p = charpoly(a, m);
        assert_eq!(p.len(), 4);
        assert_eq!(p[3], 1);
        // -trace
        assert_eq!(p[2], subm(0, 36, m));
        // det = -78, constant term = -det for odd size
        assert_eq!(p[0], 78 % m);
    }
}
