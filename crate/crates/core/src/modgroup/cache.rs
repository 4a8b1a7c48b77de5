//! Binary cache for enumerated groups and their conjugacy data.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic "RGGC" | version u32
//! family u8 (0 = SL, 1 = named)
//!   SL:    d u32 | kind u8 | p u32 | r u32 | f u32
//!   named: tag u8 | n u32
//! order u64 | codes [u64; order]
//! classes u32 | (rep u32, size u64) per class
//! class_of [u32; order] | inverse_class [u32; classes] | exponent u64
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::{
    build_named, ConjClass, ConjugacyData, Group, GroupDesc, GroupError, Law, MatrixLaw, NamedGroup,
};
use crate::localring::{LocalRing, LocalRingSpec, RingKind};

const MAGIC: &[u8; 4] = b"RGGC";
const VERSION: u32 = 1;

/// File name used for `desc` inside a cache directory.
pub fn cache_file_name(desc: &GroupDesc) -> String {
    let raw = match desc {
        GroupDesc::Sl { d, ring } => format!("sl{d}-{ring}"),
        GroupDesc::Named { name } => format!("named-{name}"),
    };
    let safe: String = raw
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{safe}.rggc")
}

pub fn cache_path(dir: &Path, desc: &GroupDesc) -> PathBuf {
    dir.join(cache_file_name(desc))
}

fn kind_tag(kind: RingKind) -> u8 {
    match kind {
        RingKind::IntegerQuotient => 0,
        RingKind::TruncatedPolynomial => 1,
        RingKind::GaloisField => 2,
    }
}

fn named_tag(name: NamedGroup) -> (u8, u32) {
    match name {
        NamedGroup::Trivial => (0, 0),
        NamedGroup::Symmetric(n) => (1, n),
        NamedGroup::Dihedral(n) => (2, n),
        NamedGroup::Cyclic(n) => (3, n),
        NamedGroup::Quaternion8 => (4, 0),
    }
}

pub fn write_cache<W: Write>(mut w: W, g: &Group, c: &ConjugacyData) -> Result<(), GroupError> {
    w.write_all(MAGIC)?;
    w.write_u32::<LE>(VERSION)?;
    match g.desc() {
        GroupDesc::Sl { d, ring } => {
            w.write_u8(0)?;
            w.write_u32::<LE>(*d as u32)?;
            w.write_u8(kind_tag(ring.kind))?;
            w.write_u32::<LE>(ring.p)?;
            w.write_u32::<LE>(ring.r)?;
            w.write_u32::<LE>(ring.f)?;
        }
        GroupDesc::Named { name } => {
            let (tag, n) = named_tag(*name);
            w.write_u8(1)?;
            w.write_u8(tag)?;
            w.write_u32::<LE>(n)?;
        }
    }
    w.write_u64::<LE>(g.order())?;
    for &code in g.codes() {
        w.write_u64::<LE>(code)?;
    }
    w.write_u32::<LE>(c.classes.len() as u32)?;
    for cl in &c.classes {
        w.write_u32::<LE>(cl.rep)?;
        w.write_u64::<LE>(cl.size)?;
    }
    for &k in &c.class_of {
        w.write_u32::<LE>(k)?;
    }
    for &k in &c.inverse_class {
        w.write_u32::<LE>(k)?;
    }
    w.write_u64::<LE>(c.exponent)?;
    Ok(())
}

pub fn read_cache<R: Read>(mut r: R) -> Result<(Group, ConjugacyData), GroupError> {
    let bad = |m: &str| GroupError::Cache(m.to_string());
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("bad magic"));
    }
    if r.read_u32::<LE>()? != VERSION {
        return Err(bad("unsupported version"));
    }
    let (desc, law, generators) = match r.read_u8()? {
        0 => {
            let d = r.read_u32::<LE>()? as usize;
            let kind = match r.read_u8()? {
                0 => RingKind::IntegerQuotient,
                1 => RingKind::TruncatedPolynomial,
                2 => RingKind::GaloisField,
                _ => return Err(bad("unknown ring kind")),
            };
            let p = r.read_u32::<LE>()?;
            let lvl = r.read_u32::<LE>()?;
            let f = r.read_u32::<LE>()?;
            let ring = match kind {
                RingKind::GaloisField => LocalRingSpec::galois_field(p, f)?,
                k => LocalRingSpec::new(k, p, lvl)?,
            };
            let law = MatrixLaw::new(LocalRing::new(ring), d)?;
            let gens = super::elementary_generators(&law);
            (GroupDesc::Sl { d, ring }, Law::Matrix(law), gens)
        }
        1 => {
            let tag = r.read_u8()?;
            let n = r.read_u32::<LE>()?;
            let name = match tag {
                0 => NamedGroup::Trivial,
                1 => NamedGroup::Symmetric(n),
                2 => NamedGroup::Dihedral(n),
                3 => NamedGroup::Cyclic(n),
                4 => NamedGroup::Quaternion8,
                _ => return Err(bad("unknown named group")),
            };
            // cheap to rebuild; the stored codes are still checked below
            let g = build_named(name)?;
            let gens: Vec<u64> = g.generators().iter().map(|&s| g.code(s)).collect();
            (g.desc().clone(), g.law().clone(), gens)
        }
        _ => return Err(bad("unknown family")),
    };
    let order = r.read_u64::<LE>()? as usize;
    let mut codes = vec![0u64; order];
    r.read_u64_into::<LE>(&mut codes)?;
    let group = Group::from_codes(desc, law, codes, &generators)?;
    let k = r.read_u32::<LE>()? as usize;
    let mut classes = Vec::with_capacity(k);
    for _ in 0..k {
        let rep = r.read_u32::<LE>()?;
        let size = r.read_u64::<LE>()?;
        classes.push(ConjClass { rep, size });
    }
    let mut class_of = vec![0u32; order];
    r.read_u32_into::<LE>(&mut class_of)?;
    let mut inverse_class = vec![0u32; k];
    r.read_u32_into::<LE>(&mut inverse_class)?;
    let exponent = r.read_u64::<LE>()?;
    if classes.iter().map(|c| c.size).sum::<u64>() != order as u64
        || class_of.iter().any(|&c| c as usize >= k)
    {
        return Err(bad("inconsistent class data"));
    }
    let centralizer_orders = classes.iter().map(|c| order as u64 / c.size).collect();
    let conj = ConjugacyData {
        classes,
        class_of,
        centralizer_orders,
        inverse_class,
        exponent,
    };
    Ok((group, conj))
}

pub fn save(path: &Path, g: &Group, c: &ConjugacyData) -> Result<(), GroupError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_cache(&mut w, g, c)?;
    w.flush()?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(Group, ConjugacyData), GroupError> {
    read_cache(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgroup::{build_sl, conjugacy, DEFAULT_ELEMENT_BUDGET};

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        for g in [
            build_sl(2, "zmod:3^2".parse().unwrap(), DEFAULT_ELEMENT_BUDGET).unwrap(),
            build_named(NamedGroup::Dihedral(5)).unwrap(),
        ] {
            let c = conjugacy(&g);
            let path = cache_path(dir.path(), g.desc());
            save(&path, &g, &c).unwrap();
            let (h, d) = load(&path).unwrap();
            assert_eq!(g.codes(), h.codes());
            assert_eq!(g.desc(), h.desc());
            assert_eq!(c, d);
            assert_eq!(g.generators(), h.generators());
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_cache(&b"NOPE\x01\x00\x00\x00"[..]).is_err());
        assert!(read_cache(&b"RG"[..]).is_err());
    }
}
