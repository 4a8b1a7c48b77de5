//! Pushforwards of monomial measures `x^B λ^n` under monomial maps `x^A: O^n → O`.
//!
//! The mass of the annulus `A_r = {|x| = q^{-r}}` is
//! `c^n Σ_{Σ a_i r_i = r} q^{-Σ (b_i + 1) r_i}` with `c = (q - 1)/q`.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PushError {
    #[error("exponent vectors have lengths {a} and {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("the map exponent A is identically zero")]
    ZeroMap,
    #[error("residue field size {0} is not a prime power >= 2")]
    BadResidueField(u64),
    #[error("neither continuity hypothesis holds for {0}")]
    CriterionNotMet(String),
    #[error("cannot parse exponent list '{0}'")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialMapSpec {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub q: u64,
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q)
        .find(|p| q.is_multiple_of(*p))
        .expect("q >= 2 has a prime factor");
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

impl MonomialMapSpec {
    pub fn new(a: Vec<u32>, b: Vec<u32>, q: u64) -> Result<Self, PushError> {
        if a.len() != b.len() {
            return Err(PushError::LengthMismatch {
                a: a.len(),
                b: b.len(),
            });
        }
        if a.iter().all(|&x| x == 0) {
            return Err(PushError::ZeroMap);
        }
        if !is_prime_power(q) {
            return Err(PushError::BadResidueField(q));
        }
        Ok(MonomialMapSpec { a, b, q })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `c = (q - 1)/q`, the Haar mass of the units.
    pub fn c(&self) -> BigRational {
        BigRational::new(BigInt::from(self.q - 1), BigInt::from(self.q))
    }

    fn q_pow_neg(&self, e: u64) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.q).pow(e as u32))
    }

    /// `1 / (1 - q^{-e})`, the sum `Σ_{k >= 0} q^{-e k}`.
    fn geometric(&self, e: u64) -> BigRational {
        BigRational::one() / (BigRational::one() - self.q_pow_neg(e))
    }

    /// `Π_i c / (1 - q^{-(b_i + 1)})`, the total mass of `x^B λ^n`.
    pub fn total_mass(&self) -> BigRational {
        self.b
            .iter()
            .map(|&b| self.c() * self.geometric(b as u64 + 1))
            .product()
    }
}

impl fmt::Display for MonomialMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "A=({}) B=({}) q={}",
            join(&self.a),
            join(&self.b),
            self.q
        )
    }
}

/// Parses `1,2,3` into an exponent list.
pub fn parse_exponents(s: &str) -> Result<Vec<u32>, PushError> {
    s.split(',')
        .map(|x| u32::from_str(x.trim()).map_err(|_| PushError::Parse(s.to_string())))
        .collect()
}

/// Annulus masses for `r = 0..=r_max` by dynamic programming over `r`.
pub fn annulus_masses(spec: &MonomialMapSpec, r_max: u32) -> Vec<BigRational> {
    let len = r_max as usize + 1;
    let mut poly = vec![BigRational::zero(); len];
    poly[0] = BigRational::one();
    let mut factor = BigRational::one();
    for (&a, &b) in spec.a.iter().zip(&spec.b) {
        factor *= spec.c();
        if a == 0 {
            // the coordinate integrates away over every valuation
            factor *= spec.geometric(b as u64 + 1);
            continue;
        }
        let step = spec.q_pow_neg(b as u64 + 1);
        let a = a as usize;
        // P'(r) = P(r) + q^{-(b+1)} P'(r - a)
        for r in a..len {
            let prev = poly[r - a].clone();
            poly[r] += &step * prev;
        }
    }
    poly.into_iter().map(|p| p * &factor).collect()
}

pub fn annulus_mass(spec: &MonomialMapSpec, r: u32) -> BigRational {
    annulus_masses(spec, r).pop().expect("nonempty")
}

/// Direct sum over valuation vectors; applies when every `a_i > 0`.
pub fn annulus_mass_enumerated(spec: &MonomialMapSpec, r: u32) -> Option<BigRational> {
    if spec.a.contains(&0) {
        return None;
    }
    fn walk(spec: &MonomialMapSpec, i: usize, left: u32, exp: u64, acc: &mut BigRational) {
        if i == spec.n() {
            if left == 0 {
                *acc += spec.q_pow_neg(exp);
            }
            return;
        }
        let a = spec.a[i];
        let mut ri = 0;
        while ri * a <= left {
            walk(
                spec,
                i + 1,
                left - ri * a,
                exp + (spec.b[i] as u64 + 1) * ri as u64,
                acc,
            );
            ri += 1;
        }
    }
    let mut acc = BigRational::zero();
    walk(spec, 0, r, 0, &mut acc);
    Some(acc * num::pow(spec.c(), spec.n()))
}

/// Whether `r` lies in the numerical semigroup generated by the nonzero `a_i`.
pub fn attained(spec: &MonomialMapSpec, r_max: u32) -> Vec<bool> {
    let mut hit = vec![false; r_max as usize + 1];
    hit[0] = true;
    for &a in spec.a.iter().filter(|&&a| a > 0) {
        for r in a as usize..hit.len() {
            hit[r] |= hit[r - a as usize];
        }
    }
    hit
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuityCase {
    /// `a_k = 1` and `a_i <= b_i` for `i != k`.
    Case1 { unit_index: usize },
    /// `a_i <= b_i` for every `i`.
    Case2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Continuity {
    pub guaranteed: bool,
    pub case: Option<ContinuityCase>,
}

fn case1_indices(spec: &MonomialMapSpec) -> impl Iterator<Item = usize> + '_ {
    (0..spec.n())
        .filter(|&k| spec.a[k] == 1 && (0..spec.n()).all(|i| i == k || spec.a[i] <= spec.b[i]))
}

/// Case 1 is preferred, with a unit index carrying `b_k = 0` first.
pub fn continuity_guaranteed(spec: &MonomialMapSpec) -> Continuity {
    let ks: Vec<usize> = case1_indices(spec).collect();
    if let Some(&k) = ks.iter().find(|&&k| spec.b[k] == 0).or(ks.first()) {
        return Continuity {
            guaranteed: true,
            case: Some(ContinuityCase::Case1 { unit_index: k }),
        };
    }
    if spec.a.iter().zip(&spec.b).all(|(a, b)| a <= b) {
        return Continuity {
            guaranteed: true,
            case: Some(ContinuityCase::Case2),
        };
    }
    Continuity {
        guaranteed: false,
        case: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitDensity {
    pub case: ContinuityCase,
    pub value: Rational,
    /// `closed-form` for a unit exponent with `b_k = 0`, `vanishing` otherwise.
    pub derivation: &'static str,
}

/// The limit of the average annulus density as `r → ∞`.
///
/// With a unit exponent at `k` and `b_k = 0` the density on `A_r` is a partial sum
/// of `c^{n-1} Π_{i != k} 1/(1 - q^{-(b_i + 1 - a_i)})`; otherwise it tends to zero.
pub fn limit_average_density(spec: &MonomialMapSpec) -> Result<LimitDensity, PushError> {
    let cont = continuity_guaranteed(spec);
    let case = cont
        .case
        .ok_or_else(|| PushError::CriterionNotMet(spec.to_string()))?;
    if let Some(k) = case1_indices(spec).find(|&k| spec.b[k] == 0) {
        let mut v = num::pow(spec.c(), spec.n() - 1);
        for i in (0..spec.n()).filter(|&i| i != k) {
            v *= spec.geometric((spec.b[i] + 1 - spec.a[i]) as u64);
        }
        return Ok(LimitDensity {
            case: ContinuityCase::Case1 { unit_index: k },
            value: v.into(),
            derivation: "closed-form",
        });
    }
    Ok(LimitDensity {
        case,
        value: Rational::integer(0),
        derivation: "vanishing",
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnulusProfile {
    pub r: u32,
    pub mass: Rational,
    /// Mass divided by the Haar mass `c q^{-r}` of the annulus.
    pub average_density: Rational,
    pub attained: bool,
}

pub fn density_series(spec: &MonomialMapSpec, r_max: u32) -> Vec<AnnulusProfile> {
    let masses = annulus_masses(spec, r_max);
    let hit = attained(spec, r_max);
    masses
        .into_iter()
        .zip(hit)
        .enumerate()
        .map(|(r, (mass, attained))| {
            let haar = spec.c() * spec.q_pow_neg(r as u64);
            AnnulusProfile {
                r: r as u32,
                average_density: (&mass / haar).into(),
                mass: mass.into(),
                attained,
            }
        })
        .collect()
}

/// A union bound on `Σ_{r > R} mass(r)`: some coordinate with `a_i > 0` has `r_i > R/(n a_i)`.
pub fn tail_bound(spec: &MonomialMapSpec, big_r: u32) -> BigRational {
    let n = spec.n() as u32;
    let full: Vec<BigRational> = spec
        .b
        .iter()
        .map(|&b| spec.c() * spec.geometric(b as u64 + 1))
        .collect();
    (0..spec.n())
        .filter(|&i| spec.a[i] > 0)
        .map(|i| {
            let start = (big_r / (n * spec.a[i]) + 1) as u64;
            let e = spec.b[i] as u64 + 1;
            let own = spec.c() * spec.q_pow_neg(e * start) * spec.geometric(e);
            full.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(own, |acc, (_, f)| acc * f)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Behavior {
    Convergent,
    Oscillating,
    Divergent,
}

fn window_stats(series: &[AnnulusProfile], lo: usize, hi: usize) -> (BigRational, BigRational) {
    let vals = series[lo..=hi].iter().map(|p| &p.average_density.0);
    let max = vals.clone().max().expect("nonempty window").clone();
    let min = vals.min().expect("nonempty window").clone();
    (max, min)
}

/// Classifies the densities on the windows `[20, 40]` and `[40, 60]`: a variation that at least
/// halves is convergence; otherwise a growing maximum is divergence and anything else oscillates.
pub fn observe_behavior(series: &[AnnulusProfile]) -> Behavior {
    assert!(series.len() > 60, "needs densities up to r = 60");
    let (max1, min1) = window_stats(series, 20, 40);
    let (max2, min2) = window_stats(series, 40, 60);
    let grew = max2 > max1;
    let (v1, v2) = (max1 - min1, max2 - min2);
    if v2.is_zero() || v2 * BigInt::from(2) <= v1 {
        Behavior::Convergent
    } else if grew {
        Behavior::Divergent
    } else {
        Behavior::Oscillating
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushforwardReport {
    pub spec: MonomialMapSpec,
    pub continuity: Continuity,
    pub limit: Option<LimitDensity>,
    pub behavior: Behavior,
    pub agrees: bool,
    pub dp_matches_enumeration: bool,
    pub total_mass_within_tail_bound: bool,
    /// `max - min` of the densities over `r ∈ [40, 60]`.
    pub tail_variation: Rational,
    /// Whether that variation is below `10^{-9}` of a nonzero limit; `None` when the limit is 0.
    pub tail_below_1e9: Option<bool>,
    pub series: Vec<AnnulusProfile>,
}

pub const SERIES_HORIZON: u32 = 60;
pub const ENUMERATION_BOUND: u32 = 12;

pub fn analyze(spec: &MonomialMapSpec, r_max: u32) -> PushforwardReport {
    let horizon = r_max.max(SERIES_HORIZON);
    let series = density_series(spec, horizon);
    let continuity = continuity_guaranteed(spec);
    let limit = limit_average_density(spec).ok();
    let behavior = observe_behavior(&series);
    let agrees = continuity.guaranteed == (behavior == Behavior::Convergent);

    let min_a = spec.a.iter().copied().filter(|&a| a > 0).min().unwrap_or(1);
    let dp_matches_enumeration =
        (0..=ENUMERATION_BOUND * min_a).all(|r| match annulus_mass_enumerated(spec, r) {
            Some(e) => e == series[r as usize].mass.0,
            None => true,
        });
    let partial: BigRational = series.iter().map(|p| p.mass.0.clone()).sum();
    let gap = spec.total_mass() - partial;
    let total_mass_within_tail_bound = !gap.is_negative() && gap <= tail_bound(spec, horizon);

    let (max, min) = window_stats(&series, 40, 60);
    let variation = max - min;
    let tail_below_1e9 = limit
        .as_ref()
        .filter(|l| l.value.is_positive())
        .map(|l| variation.clone() * BigInt::from(1_000_000_000u64) < l.value.0);
    let mut series = series;
    series.truncate(r_max as usize + 1);
    PushforwardReport {
        spec: spec.clone(),
        continuity,
        limit,
        behavior,
        agrees,
        dp_matches_enumeration,
        total_mass_within_tail_bound,
        tail_variation: variation.into(),
        tail_below_1e9,
        series,
    }
}

/// Thirty specs covering both hypotheses, their failures and the three canonical examples.
pub fn standard_suite() -> Vec<MonomialMapSpec> {
    let raw: [(&[u32], &[u32], u64); 30] = [
        (&[1], &[0], 2),
        (&[1], &[0], 3),
        (&[2], &[1], 3),
        (&[1, 1], &[0, 1], 3),
        (&[1, 1], &[0, 0], 3),
        (&[2], &[2], 2),
        (&[2], &[0], 2),
        (&[3], &[1], 2),
        (&[3], &[3], 2),
        (&[1], &[4], 5),
        (&[1, 2], &[0, 2], 2),
        (&[1, 2], &[0, 3], 3),
        (&[1, 2], &[0, 1], 2),
        (&[2, 1], &[3, 0], 5),
        (&[1, 0], &[0, 0], 3),
        (&[0, 1], &[2, 0], 2),
        (&[1, 1, 1], &[0, 1, 1], 2),
        (&[1, 1, 1], &[0, 2, 3], 3),
        (&[1, 1, 1], &[0, 0, 1], 2),
        (&[2, 2], &[2, 2], 3),
        (&[2, 3], &[2, 3], 2),
        (&[2, 3], &[1, 2], 2),
        (&[1, 3], &[0, 3], 7),
        (&[1, 3], &[0, 2], 2),
        (&[1, 1], &[1, 1], 3),
        (&[2, 2], &[1, 1], 2),
        (&[1, 2, 2], &[0, 2, 2], 4),
        (&[4], &[4], 2),
        (&[1, 1], &[2, 0], 9),
        (&[2, 4], &[3, 1], 3),
    ];
    raw.iter()
        .map(|(a, b, q)| {
            MonomialMapSpec::new(a.to_vec(), b.to_vec(), *q).expect("suite specs are valid")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: &[u32], b: &[u32], q: u64) -> MonomialMapSpec {
        MonomialMapSpec::new(a.to_vec(), b.to_vec(), q).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn mass_examples() {
        let id = spec(&[1], &[0], 5);
        for k in 0..6u32 {
            assert_eq!(annulus_mass(&id, k), r(4, 5) * r(1, 5i64.pow(k)));
        }
        let sq = spec(&[2], &[1], 3);
        assert!(annulus_mass(&sq, 5).is_zero());
        let two = spec(&[1, 1], &[0, 1], 3);
        let c = r(2, 3);
        assert_eq!(
            annulus_mass(&two, 2),
            &c * &c * (r(1, 9) + r(1, 27) + r(1, 81))
        );
        assert_eq!(
            annulus_mass_enumerated(&two, 2).unwrap(),
            annulus_mass(&two, 2)
        );
    }

    #[test]
    fn continuity_examples() {
        assert_eq!(
            continuity_guaranteed(&spec(&[1], &[0], 3)).case,
            Some(ContinuityCase::Case1 { unit_index: 0 })
        );
        assert!(!continuity_guaranteed(&spec(&[2], &[1], 3)).guaranteed);
        assert!(continuity_guaranteed(&spec(&[1, 1], &[0, 1], 3)).guaranteed);
        assert!(!continuity_guaranteed(&spec(&[1, 1], &[0, 0], 3)).guaranteed);
        assert!(matches!(
            limit_average_density(&spec(&[1, 1], &[0, 0], 3)),
            Err(PushError::CriterionNotMet(_))
        ));
    }

    #[test]
    fn limits() {
        assert_eq!(
            limit_average_density(&spec(&[1], &[0], 3)).unwrap().value,
            Rational::integer(1)
        );
        assert_eq!(
            limit_average_density(&spec(&[1, 1], &[0, 1], 3))
                .unwrap()
                .value,
            Rational::integer(1)
        );
        // a unit exponent with b_k > 0 still falls under the vanishing branch
        let l = limit_average_density(&spec(&[1, 1], &[1, 1], 3)).unwrap();
        assert!(l.value.is_zero());
    }

    #[test]
    fn series_examples() {
        let id = density_series(&spec(&[1], &[0], 2), 20);
        assert!(id.iter().all(|p| p.average_density == Rational::integer(1)));
        let sq = density_series(&spec(&[2], &[1], 3), 10);
        for p in &sq {
            assert_eq!(p.average_density.is_positive(), p.r % 2 == 0);
            assert_eq!(p.attained, p.r % 2 == 0);
        }
        let s = density_series(&spec(&[1, 1], &[0, 1], 3), 30);
        let dist: Vec<BigRational> = s
            .iter()
            .map(|p| (&p.average_density.0 - BigRational::one()).abs())
            .collect();
        assert!(dist[1..].windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn behaviors() {
        let b = |a: &[u32], bb: &[u32], q| observe_behavior(&density_series(&spec(a, bb, q), 60));
        assert_eq!(b(&[1], &[0], 2), Behavior::Convergent);
        assert_eq!(b(&[2], &[1], 3), Behavior::Oscillating);
        assert_eq!(b(&[1, 1], &[0, 0], 3), Behavior::Divergent);
        assert_eq!(b(&[3], &[3], 2), Behavior::Convergent);
    }

    #[test]
    fn attained_matches_semigroup() {
        let s = spec(&[3, 5], &[3, 5], 2);
        let hit = attained(&s, 20);
        for (k, &h) in hit.iter().enumerate() {
            let brute = (0..=k / 3).any(|x| (k - 3 * x) % 5 == 0);
            assert_eq!(h, brute, "{k}");
        }
        let series = density_series(&s, 20);
        assert!(series.iter().all(|p| p.attained || p.mass.is_zero()));
    }

    #[test]
    fn total_mass_and_tail() {
        for s in standard_suite() {
            let rep = analyze(&s, 60);
            assert!(rep.total_mass_within_tail_bound, "{s}");
            assert!(rep.dp_matches_enumeration, "{s}");
        }
    }
}
