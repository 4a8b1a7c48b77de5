//! Finite local rings `Z/p^r`, `F_p[t]/t^r` and the residue fields `F_{p^f}`.
//!
//! Every element is stored as a canonical `u32` code. For `Z/p^r` the code is
//! the integer representative in `[0, p^r)`. For `F_p[t]/t^r` and `F_{p^f}` the
//! code packs the coefficient vector as base-`p` digits, lowest degree first.
//! In both local kinds the valuation of an element is the number of trailing
//! zero base-`p` digits of its code, and reduction to level `i` is `code mod p^i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Rings with more elements than this are rejected at construction.
pub const MAX_RING_SIZE: u64 = 1 << 20;

/// Add/mul tables are precomputed up to this cardinality.
const TABLE_LIMIT: u64 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ring level must be at least 1")]
    ZeroLevel,
    #[error("residue degree must be at least 1")]
    ZeroDegree,
    #[error("ring has {0} elements, more than the supported {MAX_RING_SIZE}")]
    TooLarge(u64),
    #[error("element is not a unit (valuation {})", fmt_valuation(*.valuation))]
    NonUnit { valuation: Option<u32> },
    #[error("level {level} out of range 0..={max}")]
    LevelOutOfRange { level: u32, max: u32 },
    #[error("cannot parse ring '{0}': expected zmod:p^r, tpoly:p^r or gf:p^f")]
    Parse(String),
    #[error("element code {0} out of range")]
    BadElement(u32),
}

fn fmt_valuation(v: Option<u32>) -> String {
    match v {
        Some(v) => v.to_string(),
        None => "infinite".to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingKind {
    /// `Z/p^r`
    IntegerQuotient,
    /// `F_p[t]/t^r`
    TruncatedPolynomial,
    /// The field with `p^f` elements (level is always 1).
    GaloisField,
}

impl RingKind {
    pub fn tag(self) -> &'static str {
        match self {
            RingKind::IntegerQuotient => "zmod",
            RingKind::TruncatedPolynomial => "tpoly",
            RingKind::GaloisField => "gf",
        }
    }
}

/// Names a ring: kind, characteristic `p`, level `r` and residue degree `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalRingSpec {
    pub kind: RingKind,
    pub p: u32,
    pub r: u32,
    /// Degree of the residue field over `F_p`; 1 except for [`RingKind::GaloisField`].
    pub f: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl LocalRingSpec {
    pub fn new(kind: RingKind, p: u32, r: u32) -> Result<Self, RingError> {
        if kind == RingKind::GaloisField {
            return Self::galois_field(p, r);
        }
        if !is_prime(p as u64) {
            return Err(RingError::NotPrime(p as u64));
        }
        if r == 0 {
            return Err(RingError::ZeroLevel);
        }
        let spec = LocalRingSpec { kind, p, r, f: 1 };
        spec.check_size()?;
        Ok(spec)
    }

    pub fn zmod(p: u32, r: u32) -> Result<Self, RingError> {
        Self::new(RingKind::IntegerQuotient, p, r)
    }

    pub fn tpoly(p: u32, r: u32) -> Result<Self, RingError> {
        Self::new(RingKind::TruncatedPolynomial, p, r)
    }

    /// The field with `p^f` elements.
    pub fn galois_field(p: u32, f: u32) -> Result<Self, RingError> {
        if !is_prime(p as u64) {
            return Err(RingError::NotPrime(p as u64));
        }
        if f == 0 {
            return Err(RingError::ZeroDegree);
        }
        let spec = LocalRingSpec {
            kind: RingKind::GaloisField,
            p,
            r: 1,
            f,
        };
        spec.check_size()?;
        Ok(spec)
    }

    fn check_size(&self) -> Result<(), RingError> {
        let mut size: u64 = 1;
        for _ in 0..self.r * self.f {
            size = size.saturating_mul(self.p as u64);
            if size > MAX_RING_SIZE {
                return Err(RingError::TooLarge(size));
            }
        }
        Ok(())
    }

    /// Size of the residue field.
    pub fn residue_size(&self) -> u64 {
        (self.p as u64).pow(self.f)
    }

    /// Number of elements, `q^r`.
    pub fn cardinality(&self) -> u64 {
        self.residue_size().pow(self.r)
    }

    /// The same kind of ring truncated at level `i`; `i = 0` gives the zero ring.
    pub fn at_level(&self, i: u32) -> Result<Self, RingError> {
        if i > self.r {
            return Err(RingError::LevelOutOfRange {
                level: i,
                max: self.r,
            });
        }
        Ok(LocalRingSpec { r: i, ..*self })
    }
}

impl fmt::Display for LocalRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::GaloisField if self.r == 1 => write!(f, "gf:{}^{}", self.p, self.f),
            RingKind::GaloisField => write!(f, "gf:{}^{}@{}", self.p, self.f, self.r),
            kind => write!(f, "{}:{}^{}", kind.tag(), self.p, self.r),
        }
    }
}

impl FromStr for LocalRingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RingError::Parse(s.to_string());
        let (kind, rest) = s.trim().split_once(':').ok_or_else(err)?;
        let (p, e) = match rest.split_once('^') {
            Some((p, e)) => (p, e),
            None => (rest, "1"),
        };
        let p: u32 = p.trim().parse().map_err(|_| err())?;
        let e: u32 = e.trim().parse().map_err(|_| err())?;
        match kind.trim() {
            "zmod" | "z" => LocalRingSpec::zmod(p, e),
            "tpoly" | "t" => LocalRingSpec::tpoly(p, e),
            "gf" | "f" => LocalRingSpec::galois_field(p, e),
            _ => Err(err()),
        }
    }
}

/// A canonical ring element code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem(pub u32);

/// The arithmetic every ring kind provides on canonical codes.
pub trait RingArith: Send + Sync {
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
}

#[derive(Clone, Debug)]
struct IntegerQuotient {
    modulus: u64,
}

impl RingArith for IntegerQuotient {
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.modulus) as u32
    }
    fn neg(&self, a: u32) -> u32 {
        ((self.modulus - a as u64 % self.modulus) % self.modulus) as u32
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.modulus) as u32
    }
}

/// Coefficient-vector arithmetic over `F_p`, packed as base-`p` digits.
#[derive(Clone, Debug)]
struct DigitRing {
    p: u32,
    len: usize,
    /// Reduction rule for `x^len`: `None` truncates (`t^len = 0`); `Some(c)` means
    /// `x^len = -(c_0 + c_1 x + ...)` for a monic irreducible modulus.
    modulus: Option<Vec<u32>>,
}

impl DigitRing {
    fn unpack(&self, mut code: u32) -> Vec<u32> {
        let mut out = vec![0; self.len];
        for d in out.iter_mut() {
            *d = code % self.p;
            code /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }
}

impl RingArith for DigitRing {
    fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.unpack(a), self.unpack(b));
        let sum: Vec<u32> = x.iter().zip(&y).map(|(s, t)| (s + t) % self.p).collect();
        self.pack(&sum)
    }

    fn neg(&self, a: u32) -> u32 {
        let x = self.unpack(a);
        let n: Vec<u32> = x.iter().map(|&s| (self.p - s) % self.p).collect();
        self.pack(&n)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.unpack(a), self.unpack(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.len];
        for (i, &s) in x.iter().enumerate() {
            if s == 0 {
                continue;
            }
            for (j, &t) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + s as u64 * t as u64) % p;
            }
        }
        if let Some(modulus) = &self.modulus {
            for k in (self.len..2 * self.len).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for (i, &m) in modulus.iter().enumerate() {
                    let idx = k - self.len + i;
                    prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
                }
            }
        }
        let digits: Vec<u32> = prod[..self.len].iter().map(|&v| v as u32).collect();
        self.pack(&digits)
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `f` over `F_p`,
/// returned as its non-leading coefficients.
fn irreducible_modulus(p: u32, f: u32) -> Vec<u32> {
    let f = f as usize;
    let count = (p as u64).pow(f as u32);
    'candidates: for code in 0..count {
        let mut coeffs = vec![0u32; f];
        let mut c = code;
        for d in coeffs.iter_mut() {
            *d = (c % p as u64) as u32;
            c /= p as u64;
        }
        if f > 1 && coeffs[0] == 0 {
            continue;
        }
        // no factor of degree <= f/2: test every monic polynomial of that degree
        for deg in 1..=f / 2 {
            for fc in 0..(p as u64).pow(deg as u32) {
                let mut g = vec![0u32; deg + 1];
                let mut c = fc;
                for d in g.iter_mut().take(deg) {
                    *d = (c % p as u64) as u32;
                    c /= p as u64;
                }
                g[deg] = 1;
                let mut full = coeffs.clone();
                full.push(1);
                if poly_rem_is_zero(&full, &g, p) {
                    continue 'candidates;
                }
            }
        }
        return coeffs;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_rem_is_zero(num: &[u32], den: &[u32], p: u32) -> bool {
    let p = p as u64;
    let mut rem: Vec<u64> = num.iter().map(|&x| x as u64).collect();
    let dd = den.len() - 1;
    for k in (dd..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        for (i, &g) in den.iter().enumerate() {
            let idx = k - dd + i;
            rem[idx] = (rem[idx] + (p - c) * g as u64 % p) % p;
        }
    }
    rem.iter().all(|&x| x == 0)
}

enum Backend {
    Int(IntegerQuotient),
    Digits(DigitRing),
}

impl Backend {
    fn arith(&self) -> &dyn RingArith {
        match self {
            Backend::Int(b) => b,
            Backend::Digits(b) => b,
        }
    }
}

/// A constructed ring: spec plus precomputed arithmetic.
pub struct LocalRing {
    spec: LocalRingSpec,
    card: u32,
    backend: Backend,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
}

impl Clone for LocalRing {
    fn clone(&self) -> Self {
        LocalRing::new(self.spec)
    }
}

impl fmt::Debug for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalRing({})", self.spec)
    }
}

impl LocalRing {
    pub fn new(spec: LocalRingSpec) -> Self {
        let card = spec.cardinality() as u32;
        let backend = match spec.kind {
            RingKind::IntegerQuotient => Backend::Int(IntegerQuotient {
                modulus: card as u64,
            }),
            RingKind::TruncatedPolynomial => Backend::Digits(DigitRing {
                p: spec.p,
                len: spec.r as usize,
                modulus: None,
            }),
            RingKind::GaloisField => {
                if spec.r == 0 {
                    Backend::Int(IntegerQuotient { modulus: 1 })
                } else {
                    Backend::Digits(DigitRing {
                        p: spec.p,
                        len: spec.f as usize,
                        modulus: Some(irreducible_modulus(spec.p, spec.f)),
                    })
                }
            }
        };
        let mut ring = LocalRing {
            spec,
            card,
            backend,
            add_table: None,
            mul_table: None,
        };
        if (card as u64) <= TABLE_LIMIT {
            let n = card as usize;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            let arith = ring.backend.arith();
            for a in 0..card {
                for b in 0..card {
                    add[a as usize * n + b as usize] = arith.add(a, b);
                    mul[a as usize * n + b as usize] = arith.mul(a, b);
                }
            }
            ring.add_table = Some(add);
            ring.mul_table = Some(mul);
        }
        ring
    }

    pub fn spec(&self) -> LocalRingSpec {
        self.spec
    }

    pub fn cardinality(&self) -> u32 {
        self.card
    }

    pub fn level(&self) -> u32 {
        self.spec.r
    }

    pub fn zero(&self) -> RingElem {
        RingElem(0)
    }

    pub fn one(&self) -> RingElem {
        RingElem(if self.card == 1 { 0 } else { 1 })
    }

    /// Image of an integer under `Z -> R`.
    pub fn from_int(&self, n: i64) -> RingElem {
        let p = self.spec.p as i64;
        match self.spec.kind {
            RingKind::IntegerQuotient => RingElem(n.rem_euclid(self.card as i64) as u32),
            _ => RingElem(if self.card == 1 {
                0
            } else {
                n.rem_euclid(p) as u32
            }),
        }
    }

    pub fn elem(&self, code: u32) -> Result<RingElem, RingError> {
        if code < self.card {
            Ok(RingElem(code))
        } else {
            Err(RingError::BadElement(code))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.card).map(RingElem)
    }

    /// Additive generators: `1` for `Z/p^r`, the monomials otherwise.
    pub fn additive_generators(&self) -> Vec<RingElem> {
        if self.card == 1 {
            return Vec::new();
        }
        match self.spec.kind {
            RingKind::IntegerQuotient => vec![RingElem(1)],
            RingKind::TruncatedPolynomial => (0..self.spec.r)
                .map(|k| RingElem(self.spec.p.pow(k)))
                .collect(),
            RingKind::GaloisField => (0..self.spec.f)
                .map(|k| RingElem(self.spec.p.pow(k)))
                .collect(),
        }
    }

    #[inline]
    pub fn add_codes(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[a as usize * self.card as usize + b as usize],
            None => self.backend.arith().add(a, b),
        }
    }

    #[inline]
    pub fn mul_codes(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[a as usize * self.card as usize + b as usize],
            None => self.backend.arith().mul(a, b),
        }
    }

    #[inline]
    pub fn neg_codes(&self, a: u32) -> u32 {
        self.backend.arith().neg(a)
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem(self.add_codes(a.0, b.0))
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem(self.add_codes(a.0, self.neg_codes(b.0)))
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        RingElem(self.neg_codes(a.0))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem(self.mul_codes(a.0, b.0))
    }

    pub fn pow(&self, a: RingElem, mut e: u64) -> RingElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `None` for zero, otherwise the largest `v` with `x` in `m^v`.
    pub fn valuation(&self, x: RingElem) -> Option<u32> {
        if x.0 == 0 {
            return None;
        }
        if self.spec.kind == RingKind::GaloisField {
            return Some(0);
        }
        let mut v = 0;
        let mut c = x.0;
        while c.is_multiple_of(self.spec.p) {
            c /= self.spec.p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        self.valuation(x) == Some(0)
    }

    pub fn inverse(&self, x: RingElem) -> Result<RingElem, RingError> {
        match self.valuation(x) {
            Some(0) => {
                // the unit group has order q^(r-1) (q-1)
                let q = self.spec.residue_size();
                let order = q.pow(self.spec.r.saturating_sub(1)) * (q - 1);
                Ok(self.pow(x, order - 1))
            }
            valuation => Err(RingError::NonUnit { valuation }),
        }
    }

    /// Reduction modulo `m^i`, landing in the level-`i` ring.
    pub fn residue(&self, x: RingElem, i: u32) -> Result<RingElem, RingError> {
        if i > self.spec.r {
            return Err(RingError::LevelOutOfRange {
                level: i,
                max: self.spec.r,
            });
        }
        Ok(RingElem(self.residue_code(x.0, i)))
    }

    #[inline]
    pub fn residue_code(&self, code: u32, i: u32) -> u32 {
        let q = self.spec.residue_size() as u32;
        code % q.pow(i)
    }

    /// `x / pi^e` for a uniformizer `pi` (`p` or `t`), defined when `valuation(x) >= e`.
    /// The quotient is one fixed lift; `pi^e * result == x` holds exactly.
    pub fn div_uniformizer_pow(&self, x: RingElem, e: u32) -> RingElem {
        if e == 0 {
            return x;
        }
        debug_assert!(self.valuation(x).is_none_or(|v| v >= e));
        RingElem(x.0 / self.spec.p.pow(e))
    }

    /// `pi^e` for the uniformizer.
    pub fn uniformizer_pow(&self, e: u32) -> RingElem {
        if e >= self.spec.r || self.spec.kind == RingKind::GaloisField && e > 0 {
            return self.zero();
        }
        RingElem(self.spec.p.pow(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(s: &str) -> LocalRing {
        LocalRing::new(s.parse().unwrap())
    }

    #[test]
    fn worked_examples() {
        let z9 = ring("zmod:3^2");
        assert_eq!(z9.add(RingElem(5), RingElem(7)), RingElem(3));
        assert_eq!(
            z9.inverse(RingElem(3)),
            Err(RingError::NonUnit { valuation: Some(1) })
        );

        // (1 + t)(1 - t) = 1 in F_3[t]/t^2; 1 + t has digits (1,1) = 4, 1 - t = (1,2) = 7
        let t3 = ring("tpoly:3^2");
        assert_eq!(t3.mul(RingElem(4), RingElem(7)), RingElem(1));

        assert_eq!(z9.residue(RingElem(7), 1), Ok(RingElem(1)));
        // 1 + 2t -> 1
        assert_eq!(t3.residue(RingElem(7), 1), Ok(RingElem(1)));
        assert_eq!(z9.residue(RingElem(7), 2), Ok(RingElem(7)));
        assert_eq!(z9.residue(RingElem(7), 0), Ok(RingElem(0)));
        assert_eq!(
            z9.residue(RingElem(7), 3),
            Err(RingError::LevelOutOfRange { level: 3, max: 2 })
        );
    }

    #[test]
    fn parsing_and_validation() {
        assert_eq!(
            "zmod:3^2".parse::<LocalRingSpec>().unwrap().cardinality(),
            9
        );
        assert_eq!(
            "tpoly:5^2".parse::<LocalRingSpec>().unwrap().cardinality(),
            25
        );
        assert_eq!("gf:3^2".parse::<LocalRingSpec>().unwrap().cardinality(), 9);
        assert_eq!(
            "zmod:4^1".parse::<LocalRingSpec>(),
            Err(RingError::NotPrime(4))
        );
        assert_eq!(
            "zmod:3^0".parse::<LocalRingSpec>(),
            Err(RingError::ZeroLevel)
        );
        assert!(matches!(
            "poly:3".parse::<LocalRingSpec>(),
            Err(RingError::Parse(_))
        ));
        let spec: LocalRingSpec = "tpoly:7^2".parse().unwrap();
        assert_eq!(spec.to_string(), "tpoly:7^2");
        assert_eq!(spec.to_string().parse::<LocalRingSpec>().unwrap(), spec);
    }

    #[test]
    fn galois_field_is_a_field() {
        for s in ["gf:2^3", "gf:3^2", "gf:5^2"] {
            let f = ring(s);
            for x in f.elements().skip(1) {
                let inv = f.inverse(x).unwrap();
                assert_eq!(f.mul(x, inv), f.one(), "{s}: {x:?}");
            }
        }
    }

    fn check_ring_laws(r: &LocalRing, rng: &mut ChaCha8Rng) {
        let card = r.cardinality();
        let level = r.level();
        for _ in 0..1000 {
            let x = RingElem(rng.gen_range(0..card));
            let y = RingElem(rng.gen_range(0..card));
            if r.is_unit(x) {
                assert_eq!(r.mul(x, r.inverse(x).unwrap()), r.one());
            } else {
                assert!(r.inverse(x).is_err());
            }
            let xy = r.mul(x, y);
            if let (Some(vx), Some(vy)) = (r.valuation(x), r.valuation(y)) {
                match r.valuation(xy) {
                    None => assert!(vx + vy >= level),
                    Some(v) => {
                        assert!(v >= vx + vy);
                        if vx + vy < level {
                            assert_eq!(v, vx + vy);
                        }
                    }
                }
            } else {
                assert_eq!(xy, r.zero());
            }
            for i in 0..=level {
                let red = LocalRing::new(r.spec().at_level(i).unwrap());
                let rx = r.residue(x, i).unwrap();
                let ry = r.residue(y, i).unwrap();
                assert_eq!(r.residue(xy, i).unwrap(), red.mul(rx, ry));
                assert_eq!(r.residue(r.add(x, y), i).unwrap(), red.add(rx, ry));
            }
            assert_eq!(r.add(x, r.neg(x)), r.zero());
        }
    }

    #[test]
    fn ring_laws_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in [
            "zmod:2^5",
            "zmod:3^3",
            "tpoly:3^3",
            "tpoly:5^2",
            "zmod:7^2",
            "tpoly:2^4",
        ] {
            check_ring_laws(&ring(s), &mut rng);
        }
    }

    #[test]
    fn large_ring_without_tables() {
        let r = ring("tpoly:7^4");
        assert!(r.mul_table.is_none());
        let x = RingElem(1 + 7); // 1 + t
        let inv = r.inverse(x).unwrap();
        assert_eq!(r.mul(x, inv), r.one());
        assert_eq!(r.valuation(RingElem(49)), Some(2));
    }

    #[test]
    fn uniformizer_division() {
        let r = ring("zmod:3^3");
        let x = RingElem(18);
        let q = r.div_uniformizer_pow(x, 2);
        assert_eq!(r.mul(r.uniformizer_pow(2), q), x);
        let t = ring("tpoly:3^3");
        let x = RingElem(2 * 9 + 3); // t + 2t^2
        let q = t.div_uniformizer_pow(x, 1);
        assert_eq!(t.mul(t.uniformizer_pow(1), q), x);
    }
}
