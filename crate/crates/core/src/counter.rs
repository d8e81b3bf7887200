//! A common interface over every counting structure, and name-based selection.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ilcp::{IlcpIndex, IlcpMode};
use crate::pdl::PdlCountIndex;
use crate::sada::{SadaIndex, SadaVariant};
use crate::suffix::{LocusRange, TextIndex};

pub trait DocumentCounter {
    fn name(&self) -> String;
    /// docc for the locus range of a pattern of length `pattern_len`.
    fn count(&self, r: LocusRange, pattern_len: usize) -> Result<usize>;
    fn size_in_bits(&self) -> usize;
}

impl DocumentCounter for SadaIndex {
    fn name(&self) -> String {
        self.variant().name()
    }
    fn count(&self, r: LocusRange, _pattern_len: usize) -> Result<usize> {
        SadaIndex::count(self, r)
    }
    fn size_in_bits(&self) -> usize {
        SadaIndex::size_in_bits(self)
    }
}

impl DocumentCounter for IlcpIndex {
    fn name(&self) -> String {
        self.mode().name().to_string()
    }
    fn count(&self, r: LocusRange, pattern_len: usize) -> Result<usize> {
        IlcpIndex::count(self, r, pattern_len)
    }
    fn size_in_bits(&self) -> usize {
        IlcpIndex::size_in_bits(self)
    }
}

impl DocumentCounter for PdlCountIndex {
    fn name(&self) -> String {
        "pdl-count".into()
    }
    fn count(&self, r: LocusRange, _pattern_len: usize) -> Result<usize> {
        PdlCountIndex::count(self, r)
    }
    fn size_in_bits(&self) -> usize {
        PdlCountIndex::size_in_bits(self)
    }
}

/// A structure selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Sada(SadaVariant),
    Ilcp(IlcpMode),
    PdlCount,
}

impl StructureKind {
    pub fn all() -> Vec<StructureKind> {
        SadaVariant::presets()
            .map(|(_, v)| StructureKind::Sada(v))
            .chain([
                StructureKind::Ilcp(IlcpMode::Plain),
                StructureKind::Ilcp(IlcpMode::RunLength),
                StructureKind::PdlCount,
            ])
            .collect()
    }

    pub fn names() -> Vec<String> {
        Self::all().iter().map(|k| k.to_string()).collect()
    }

    /// `block_threshold` applies to `pdl-count` only.
    pub fn build(self, idx: &TextIndex, block_threshold: Option<usize>) -> Result<Structure> {
        Ok(match self {
            StructureKind::Sada(v) => Structure::Sada(SadaIndex::build(idx, v)?),
            StructureKind::Ilcp(m) => Structure::Ilcp(IlcpIndex::build(idx, m)),
            StructureKind::PdlCount => Structure::Pdl(PdlCountIndex::build(idx, block_threshold)?),
        })
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureKind::Sada(v) => write!(f, "{v}"),
            StructureKind::Ilcp(m) => write!(f, "{m}"),
            StructureKind::PdlCount => f.write_str("pdl-count"),
        }
    }
}

impl FromStr for StructureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if let Some(v) = SadaVariant::preset(&lower) {
            return Ok(StructureKind::Sada(v));
        }
        if let Ok(m) = lower.parse::<IlcpMode>() {
            return Ok(StructureKind::Ilcp(m));
        }
        if lower == "pdl-count" {
            return Ok(StructureKind::PdlCount);
        }
        Err(Error::UnknownVariant {
            name: s.to_string(),
            valid: Self::names().join(", "),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Sada(SadaIndex),
    Ilcp(IlcpIndex),
    Pdl(PdlCountIndex),
}

impl Structure {
    pub fn kind(&self) -> StructureKind {
        match self {
            Structure::Sada(s) => StructureKind::Sada(s.variant()),
            Structure::Ilcp(i) => StructureKind::Ilcp(i.mode()),
            Structure::Pdl(_) => StructureKind::PdlCount,
        }
    }

    /// Family label used in reports.
    pub fn family(&self) -> &'static str {
        match self {
            Structure::Sada(_) => "sada",
            Structure::Ilcp(_) => "ilcp",
            Structure::Pdl(_) => "pdl",
        }
    }

    fn inner(&self) -> &dyn DocumentCounter {
        match self {
            Structure::Sada(s) => s,
            Structure::Ilcp(i) => i,
            Structure::Pdl(p) => p,
        }
    }
}

impl DocumentCounter for Structure {
    fn name(&self) -> String {
        self.inner().name()
    }
    fn count(&self, r: LocusRange, pattern_len: usize) -> Result<usize> {
        self.inner().count(r, pattern_len)
    }
    fn size_in_bits(&self) -> usize {
        self.inner().size_in_bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let all = StructureKind::all();
        assert_eq!(all.len(), 15);
        for k in all {
            assert_eq!(k.to_string().parse::<StructureKind>().unwrap(), k);
        }
        assert_eq!("SADA-RR".parse::<StructureKind>().unwrap().to_string(), "sada-rr");
        match "nope".parse::<StructureKind>() {
            Err(Error::UnknownVariant { valid, .. }) => assert!(valid.contains("pdl-count") && valid.contains("ilcp-rl")),
            other => panic!("{other:?}"),
        }
    }
}
