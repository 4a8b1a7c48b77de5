//! The commutator word map `(x_1, y_1, ..., x_n, y_n) -> [x_1, y_1] ... [x_n, y_n]`:
//! fiber counts as class functions, zeta values recovered from fibers, the
//! character-sum congruence, congruence density profiles and level series.

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charzeta::{zeta_even, CharError, GroupTables, ModCharTable};
use crate::exact::{Integer, Rational};
use crate::localring::{LocalRingSpec, RingKind};
use crate::modgroup::{build_sl, congruence_filtration, quotient_group, Group, GroupError};

#[derive(Debug, Error)]
pub enum WordMapError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error("word length must be at least {min}, got {n}")]
    BadLength { n: u32, min: u32 },
    #[error("brute-force enumeration limited to |G| <= {max_order} and n <= 2")]
    OracleTooLarge { max_order: u64 },
}

/// One exact value per conjugacy class, in class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction(pub Vec<BigInt>);

impl ClassFunction {
    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    /// `Σ |C_i| f(C_i)`
    pub fn mass(&self, sizes: &[u64]) -> BigInt {
        self.0
            .iter()
            .zip(sizes)
            .map(|(v, &s)| v * BigInt::from(s))
            .sum()
    }

    /// Identity-class value.
    pub fn at_identity(&self) -> &BigInt {
        &self.0[0]
    }
}

/// `(f * h)(z_l) = Σ_{i,j} a[i][j][l] f(C_i) h(C_j)`.
pub fn convolve(t: &GroupTables, f: &ClassFunction, h: &ClassFunction) -> ClassFunction {
    let k = t.class_count();
    let sizes = t.conj.sizes();
    let nonneg = f.0.iter().chain(&h.0).all(|v| !v.is_negative());
    // every partial sum is bounded by mass(f) mass(h) when nothing is negative
    let bound = f.mass(&sizes) * h.mass(&sizes);
    if nonneg && bound < BigInt::from(u128::MAX >> 1) {
        let fv: Vec<u128> = f.0.iter().map(|v| v.to_u128().unwrap()).collect();
        let hv: Vec<u128> = h.0.iter().map(|v| v.to_u128().unwrap()).collect();
        let out = (0..k)
            .into_par_iter()
            .map(|l| {
                let mut acc = 0u128;
                for (i, &fi) in fv.iter().enumerate() {
                    if fi == 0 {
                        continue;
                    }
                    let mut inner = 0u128;
                    for (j, &hj) in hv.iter().enumerate() {
                        inner += t.constants.get(i, j, l) as u128 * hj;
                    }
                    acc += fi * inner;
                }
                BigInt::from(acc)
            })
            .collect();
        return ClassFunction(out);
    }
    let out = (0..k)
        .into_par_iter()
        .map(|l| {
            let mut acc = BigInt::zero();
            for i in 0..k {
                let mut inner = BigInt::zero();
                for j in 0..k {
                    let a = t.constants.get(i, j, l);
                    if a != 0 {
                        inner += &h.0[j] * a;
                    }
                }
                acc += &f.0[i] * inner;
            }
            acc
        })
        .collect();
    ClassFunction(out)
}

/// `c(g) = #{(x, y) : [x, y] = g}` via `c(g) = Σ_x |C_G(x)| [x^-1 g ~ x^-1]`.
pub fn commutator_distribution(t: &GroupTables) -> ClassFunction {
    let (g, conj) = (&t.group, &t.conj);
    let values = conj
        .classes
        .par_iter()
        .map(|cl| {
            let mut acc = 0u128;
            for x in 0..g.len() as u32 {
                let xi = g.inv(x);
                let cx = conj.class_of[x as usize] as usize;
                if conj.class_of[g.mul(xi, cl.rep) as usize] == conj.inverse_class[cx] {
                    acc += conj.centralizer_orders[cx] as u128;
                }
            }
            BigInt::from(acc)
        })
        .collect();
    ClassFunction(values)
}

/// Element-level commutator counts by direct enumeration of all pairs.
pub fn commutator_counts_brute(g: &Group) -> Vec<u64> {
    let mut counts = vec![0u64; g.len()];
    for x in 0..g.len() as u32 {
        for y in 0..g.len() as u32 {
            counts[g.commutator(x, y) as usize] += 1;
        }
    }
    counts
}

/// `N_n` as a class function: the `n`-fold convolution power of the commutator distribution.
pub fn fiber_distribution(t: &GroupTables, n: u32) -> Result<ClassFunction, WordMapError> {
    if n == 0 {
        return Err(WordMapError::BadLength { n, min: 1 });
    }
    let c = commutator_distribution(t);
    let mut acc = c.clone();
    for _ in 1..n {
        acc = convolve(t, &acc, &c);
    }
    Ok(acc)
}

/// `#{(x_1, ..., y_n) : Π [x_i, y_i] = g}`.
pub fn fiber_count(t: &GroupTables, n: u32, g: u32) -> Result<BigInt, WordMapError> {
    let f = fiber_distribution(t, n)?;
    Ok(f.0[t.conj.class_of[g as usize] as usize].clone())
}

pub const BRUTE_FORCE_MAX_ORDER: u64 = 50;

/// Element-level fiber counts by enumerating all of `G^{2n}`; `|G| <= 50`, `n <= 2`.
pub fn fiber_counts_brute(g: &Group, n: u32) -> Result<Vec<u64>, WordMapError> {
    if g.order() > BRUTE_FORCE_MAX_ORDER || n > 2 {
        return Err(WordMapError::OracleTooLarge {
            max_order: BRUTE_FORCE_MAX_ORDER,
        });
    }
    if n == 0 {
        return Err(WordMapError::BadLength { n, min: 1 });
    }
    let size = g.len();
    let table = g.cayley_table();
    let inv: Vec<u32> = (0..size as u32).map(|x| g.inv(x)).collect();
    let m = |a: u32, b: u32| table[a as usize * size + b as usize];
    let comm = |x: u32, y: u32| m(m(x, y), m(inv[x as usize], inv[y as usize]));
    let mut counts = vec![0u64; size];
    let all = 0..size as u32;
    match n {
        1 => {
            for x in all.clone() {
                for y in all.clone() {
                    counts[comm(x, y) as usize] += 1;
                }
            }
        }
        _ => {
            for x1 in all.clone() {
                for y1 in all.clone() {
                    let c1 = comm(x1, y1);
                    for x2 in all.clone() {
                        for y2 in all.clone() {
                            counts[m(c1, comm(x2, y2)) as usize] += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(counts)
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceViolation {
    pub ell: u64,
    pub class: usize,
    pub fiber_mod_ell: u64,
    pub character_sum_mod_ell: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusReport {
    pub n: u32,
    pub primes: Vec<u64>,
    pub classes: usize,
    pub congruences_checked: usize,
    pub violations: Vec<CongruenceViolation>,
}

impl FrobeniusReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * a as u128 % m as u128) as u64;
        }
        a = (a as u128 * a as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// `|G|^{2n-1} Σ_s χ_s(g) d_s^{1-2n}` mod `ell`, one value per class.
pub fn character_sum_mod(t: &GroupTables, n: u32, table: &ModCharTable) -> Vec<u64> {
    let m = table.ell;
    let lead = pow_mod(t.order(), 2 * n as u64 - 1, m);
    let weights: Vec<u64> = table
        .degrees
        .iter()
        .map(|&d| pow_mod(pow_mod(d, 2 * n as u64 - 1, m), m - 2, m))
        .collect();
    (0..t.class_count())
        .map(|i| {
            let s = table
                .chi
                .iter()
                .zip(&weights)
                .fold(0u128, |acc, (chi, &w)| {
                    (acc + chi[i] as u128 * w as u128) % m as u128
                });
            (s * lead as u128 % m as u128) as u64
        })
        .collect()
}

/// Compares supplied fiber counts with the character sums for each table.
pub fn frobenius_check_values(
    t: &GroupTables,
    n: u32,
    fibers: &ClassFunction,
    tables: &[ModCharTable],
) -> FrobeniusReport {
    let mut violations = Vec::new();
    for table in tables {
        let rhs = character_sum_mod(t, n, table);
        let ell = BigInt::from(table.ell);
        for (class, (lhs, &r)) in fibers.0.iter().zip(&rhs).enumerate() {
            let l = ((lhs % &ell + &ell) % &ell).to_u64().unwrap();
            if l != r {
                violations.push(CongruenceViolation {
                    ell: table.ell,
                    class,
                    fiber_mod_ell: l,
                    character_sum_mod_ell: r,
                });
            }
        }
    }
    FrobeniusReport {
        n,
        primes: tables.iter().map(|t| t.ell).collect(),
        classes: t.class_count(),
        congruences_checked: tables.len() * t.class_count(),
        violations,
    }
}

pub fn frobenius_identity_check(
    t: &GroupTables,
    n: u32,
    tables: &[ModCharTable],
) -> Result<FrobeniusReport, WordMapError> {
    let fibers = fiber_distribution(t, n)?;
    Ok(frobenius_check_values(t, n, &fibers, tables))
}

/// `N_n(1) / |G|^{2n-1}`, which equals `ζ_G(2n - 2)`.
pub fn zeta_from_fibers(t: &GroupTables, n: u32) -> Result<BigRational, WordMapError> {
    if n < 2 {
        return Err(WordMapError::BadLength { n, min: 2 });
    }
    let f = fiber_distribution(t, n)?;
    Ok(zeta_from_distribution(t.order(), n, &f))
}

fn zeta_from_distribution(order: u64, n: u32, f: &ClassFunction) -> BigRational {
    BigRational::new(f.at_identity().clone(), BigInt::from(order).pow(2 * n - 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityLevel {
    pub level: u32,
    pub kernel_order: u64,
    pub density: Rational,
    pub quotient_zeta: Rational,
    pub matches_quotient_zeta: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityProfile {
    pub group: String,
    pub n: u32,
    pub levels: Vec<DensityLevel>,
    pub nondecreasing: bool,
    pub starts_at_one: bool,
}

impl DensityProfile {
    pub fn holds(&self) -> bool {
        self.nondecreasing
            && self.starts_at_one
            && self.levels.iter().all(|l| l.matches_quotient_zeta)
    }
}

/// `D_i = #Φ_n^{-1}(K_i) [Γ : K_i] / |Γ|^{2n}` for every level, each compared with
/// the zeta value of `Γ / K_i` at `2n - 2` computed from character degrees.
pub fn congruence_density_profile(
    d: usize,
    ring: LocalRingSpec,
    n: u32,
    budget: u64,
    seed: u64,
) -> Result<DensityProfile, WordMapError> {
    if n < 2 {
        return Err(WordMapError::BadLength { n, min: 2 });
    }
    let g = build_sl(d, ring, budget)?;
    let filtration = congruence_filtration(&g)?;
    let t = GroupTables::new(g);
    let fibers = fiber_distribution(&t, n)?;
    let total = BigInt::from(t.order()).pow(2 * n);
    let mut levels = Vec::new();
    for level in 0..=filtration.depth() {
        let kernel = &filtration.kernels[level as usize];
        let index = t.order() / kernel.len() as u64;
        let mut hits = BigInt::zero();
        for (cl, value) in t.conj.classes.iter().zip(&fibers.0) {
            if filtration.contains(level, cl.rep) {
                hits += value * BigInt::from(cl.size);
            }
        }
        let density = BigRational::new(hits * BigInt::from(index), total.clone());
        let quotient = GroupTables::new(quotient_group(&t.group, level)?.group);
        let qz = zeta_even(&quotient, 2 * n - 2, seed)?;
        levels.push(DensityLevel {
            level,
            kernel_order: kernel.len() as u64,
            matches_quotient_zeta: density == qz,
            density: density.into(),
            quotient_zeta: qz.into(),
        });
    }
    let nondecreasing = levels.windows(2).all(|w| w[0].density <= w[1].density);
    let starts_at_one = levels[0].density == Rational::one();
    Ok(DensityProfile {
        group: t.group.desc().to_string(),
        n,
        levels,
        nondecreasing,
        starts_at_one,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationRow {
    pub level: u32,
    pub order: u64,
    pub classes: usize,
    pub zeta: Rational,
    /// `ζ_i - ζ_{i-1}`; absent at the first level.
    pub increment: Option<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationSeries {
    pub kind: RingKind,
    pub d: usize,
    pub p: u32,
    pub n: u32,
    pub rows: Vec<StabilizationRow>,
    /// Set when a level exceeded the budget; `rows` holds the levels below it.
    pub truncated: bool,
}

impl StabilizationSeries {
    pub fn increments(&self) -> Vec<&Rational> {
        self.rows
            .iter()
            .filter_map(|r| r.increment.as_ref())
            .collect()
    }
}

/// `ζ_{SL_d(R_i)}(2n - 2)` for `R_i` the level-`i` ring of the given kind, `i = 1..=r_max`.
pub fn stabilization_series(
    kind: RingKind,
    d: usize,
    p: u32,
    r_max: u32,
    n: u32,
    budget: u64,
) -> Result<StabilizationSeries, WordMapError> {
    if n < 2 {
        return Err(WordMapError::BadLength { n, min: 2 });
    }
    let mut rows: Vec<StabilizationRow> = Vec::new();
    let mut truncated = false;
    for level in 1..=r_max {
        let ring = LocalRingSpec::new(kind, p, level).map_err(GroupError::from)?;
        let g = match build_sl(d, ring, budget) {
            Ok(g) => g,
            Err(GroupError::SizeLimit { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e.into()),
        };
        let t = GroupTables::new(g);
        let zeta = zeta_from_fibers(&t, n)?;
        let increment = rows.last().map(|prev| Rational(&zeta - &prev.zeta.0));
        rows.push(StabilizationRow {
            level,
            order: t.order(),
            classes: t.class_count(),
            zeta: zeta.into(),
            increment,
        });
    }
    Ok(StabilizationSeries {
        kind,
        d,
        p,
        n,
        rows,
        truncated,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCharReport {
    pub p: u32,
    pub r: u32,
    pub n: u32,
    pub s: u32,
    pub order: u64,
    pub zeta_zmod: Rational,
    pub zeta_tpoly: Rational,
    pub equal: bool,
}

/// `ζ(2n - 2)` of `SL_2(Z/p^r)` and `SL_2(F_p[t]/t^r)`, built and evaluated independently.
pub fn cross_char_compare(
    p: u32,
    r: u32,
    n: u32,
    budget: u64,
) -> Result<CrossCharReport, WordMapError> {
    if n < 2 {
        return Err(WordMapError::BadLength { n, min: 2 });
    }
    let zeta = |ring: LocalRingSpec| -> Result<(u64, BigRational), WordMapError> {
        let t = GroupTables::new(build_sl(2, ring, budget)?);
        Ok((t.order(), zeta_from_fibers(&t, n)?))
    };
    let (order, a) = zeta(LocalRingSpec::zmod(p, r).map_err(GroupError::from)?)?;
    let (_, b) = zeta(LocalRingSpec::tpoly(p, r).map_err(GroupError::from)?)?;
    Ok(CrossCharReport {
        p,
        r,
        n,
        s: 2 * n - 2,
        order,
        equal: a == b,
        zeta_zmod: a.into(),
        zeta_tpoly: b.into(),
    })
}

/// Serializable fiber summary for reports.
#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub n: u32,
    pub order: u64,
    pub class_sizes: Vec<u64>,
    pub fiber_counts: Vec<Integer>,
    pub zeta_from_fibers: Option<Rational>,
}

pub fn fiber_report(t: &GroupTables, n: u32) -> Result<FiberReport, WordMapError> {
    let f = fiber_distribution(t, n)?;
    let zeta = (n >= 2).then(|| zeta_from_distribution(t.order(), n, &f).into());
    Ok(FiberReport {
        n,
        order: t.order(),
        class_sizes: t.conj.sizes(),
        fiber_counts: f.0.into_iter().map(Integer).collect(),
        zeta_from_fibers: zeta,
    })
}

/// `Σ_g N_n(g) = |G|^{2n}`.
pub fn total_mass_holds(t: &GroupTables, f: &ClassFunction, n: u32) -> bool {
    f.mass(&t.conj.sizes()) == BigInt::from(t.order()).pow(2 * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charzeta::{
        choose_primes, default_mod_table, dixon_mod_table, zeta_from_degrees, DEFAULT_SEED,
    };
    use crate::modgroup::{build_named, NamedGroup, DEFAULT_ELEMENT_BUDGET};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn named(n: NamedGroup) -> GroupTables {
        GroupTables::new(build_named(n).unwrap())
    }

    fn sl2(ring: &str) -> GroupTables {
        GroupTables::new(build_sl(2, ring.parse().unwrap(), DEFAULT_ELEMENT_BUDGET).unwrap())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn small_groups() -> Vec<GroupTables> {
        vec![
            named(NamedGroup::Trivial),
            named(NamedGroup::Symmetric(3)),
            named(NamedGroup::Dihedral(4)),
            named(NamedGroup::Quaternion8),
            named(NamedGroup::Cyclic(6)),
            sl2("zmod:3^1"),
        ]
    }

    #[test]
    fn s3_worked_values() {
        let t = named(NamedGroup::Symmetric(3));
        let c = commutator_distribution(&t);
        assert_eq!(c.at_identity(), &BigInt::from(18));
        let three_cycle = t.conj.classes.iter().position(|cl| cl.size == 2).unwrap();
        assert_eq!(c.0[three_cycle], BigInt::from(9));
        assert_eq!(fiber_count(&t, 2, 0).unwrap(), BigInt::from(486));
        assert_eq!(zeta_from_fibers(&t, 2).unwrap(), q(9, 4));
    }

    #[test]
    fn abelian_commutators_are_trivial() {
        let t = named(NamedGroup::Cyclic(5));
        let c = commutator_distribution(&t);
        assert_eq!(c.at_identity(), &BigInt::from(25));
        assert!(c.0[1..].iter().all(|v| v.is_zero()));
    }

    #[test]
    fn centralizer_trick_matches_pair_enumeration() {
        let mut groups = small_groups();
        groups.push(named(NamedGroup::Symmetric(4)));
        groups.push(sl2("zmod:2^2"));
        groups.push(sl2("zmod:5^1"));
        for t in &groups {
            assert!(t.order() <= 200);
            let brute = commutator_counts_brute(&t.group);
            let c = commutator_distribution(t);
            for (x, &count) in brute.iter().enumerate() {
                assert_eq!(c.0[t.conj.class_of[x] as usize], BigInt::from(count));
            }
            assert_eq!(c.mass(&t.conj.sizes()), BigInt::from(t.order() * t.order()));
        }
    }

    #[test]
    fn convolution_matches_tuple_enumeration() {
        for t in small_groups() {
            for n in 1..=2 {
                let f = fiber_distribution(&t, n).unwrap();
                let brute = fiber_counts_brute(&t.group, n).unwrap();
                for (x, &count) in brute.iter().enumerate() {
                    assert_eq!(f.0[t.conj.class_of[x] as usize], BigInt::from(count));
                }
            }
        }
    }

    #[test]
    fn brute_force_counts_are_class_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in small_groups() {
            let g = &t.group;
            let brute = fiber_counts_brute(g, 2).unwrap();
            for _ in 0..100 {
                let x = rng.gen_range(0..g.len() as u32);
                let h = rng.gen_range(0..g.len() as u32);
                assert_eq!(brute[x as usize], brute[g.conjugate(h, x) as usize]);
            }
        }
    }

    #[test]
    fn mass_is_preserved() {
        for t in small_groups() {
            let c = commutator_distribution(&t);
            for n in 1..=3 {
                let f = fiber_distribution(&t, n).unwrap();
                assert!(total_mass_holds(&t, &f, n));
                let sizes = t.conj.sizes();
                if n == 2 {
                    assert_eq!(f.mass(&sizes), c.mass(&sizes) * c.mass(&sizes));
                }
            }
        }
    }

    #[test]
    fn big_integer_path_agrees() {
        let t = sl2("zmod:3^1");
        let c = commutator_distribution(&t);
        // a negative entry forces the arbitrary-precision branch
        let mut shifted = c.clone();
        shifted.0[1] -= 1;
        let fast = convolve(&t, &c, &c);
        let slow = convolve(&t, &shifted, &c);
        let sizes = t.conj.sizes();
        let diff: Vec<BigInt> = fast.0.iter().zip(&slow.0).map(|(a, b)| a - b).collect();
        // (c - e_1) * c differs from c * c by e_1 * c, whose mass is |C_1| mass(c)
        let expected_mass = BigInt::from(sizes[1]) * c.mass(&sizes);
        assert_eq!(ClassFunction(diff).mass(&sizes), expected_mass);
    }

    #[test]
    fn frobenius_congruences() {
        for t in small_groups() {
            let primes = choose_primes(t.conj.exponent, t.order(), 3);
            let tables: Vec<_> = primes
                .iter()
                .map(|&ell| dixon_mod_table(&t, ell, DEFAULT_SEED).unwrap())
                .collect();
            for n in 1..=3 {
                let report = frobenius_identity_check(&t, n, &tables).unwrap();
                assert!(
                    report.holds(),
                    "{:?} n={n}: {:?}",
                    t.group,
                    report.violations
                );
                assert_eq!(report.congruences_checked, 3 * t.class_count());
            }
        }
    }

    #[test]
    fn off_by_one_is_caught() {
        let t = named(NamedGroup::Quaternion8);
        let tables = vec![default_mod_table(&t, DEFAULT_SEED).unwrap()];
        let mut f = fiber_distribution(&t, 2).unwrap();
        f.0[0] += 1;
        let report = frobenius_check_values(&t, 2, &f, &tables);
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn fiber_zeta_equals_degree_zeta() {
        for t in small_groups() {
            let degrees = default_mod_table(&t, DEFAULT_SEED).unwrap().degrees;
            for n in 2..=3 {
                assert_eq!(
                    zeta_from_fibers(&t, n).unwrap(),
                    zeta_from_degrees(&degrees, 2 * n - 2)
                );
            }
        }
        assert_eq!(zeta_from_fibers(&sl2("zmod:3^1"), 2).unwrap(), q(139, 36));
        assert!(zeta_from_fibers(&sl2("zmod:3^1"), 1).is_err());
    }

    #[test]
    fn density_profile_small() {
        let prof = congruence_density_profile(
            2,
            "zmod:2^3".parse().unwrap(),
            2,
            DEFAULT_ELEMENT_BUDGET,
            1,
        )
        .unwrap();
        assert!(prof.holds());
        assert_eq!(prof.levels.len(), 4);
        assert_eq!(prof.levels[0].density, Rational::one());
        assert_eq!(prof.levels[1].density, Rational::new(9, 4));
    }

    #[test]
    fn stabilization_and_truncation() {
        let s = stabilization_series(
            RingKind::IntegerQuotient,
            2,
            2,
            3,
            2,
            DEFAULT_ELEMENT_BUDGET,
        )
        .unwrap();
        assert!(!s.truncated);
        assert_eq!(s.rows[0].zeta, Rational::new(9, 4));
        assert!(s.increments().iter().all(|i| i.is_positive()));
        let s = stabilization_series(RingKind::IntegerQuotient, 2, 2, 4, 2, 500).unwrap();
        assert!(s.truncated);
        assert_eq!(s.rows.len(), 3);
    }

    #[test]
    fn cross_char_level_one() {
        let r = cross_char_compare(5, 1, 2, DEFAULT_ELEMENT_BUDGET).unwrap();
        assert!(r.equal);
        assert_eq!(r.order, 120);
    }
}
