//! The index file: one collection, its suffix array, and any number of
//! counting structures.
//!
//! Layout (little-endian): magic `DCNT`, `u16` version, `u32` section count,
//! then sections of `u8` tag, `u64` payload length, payload. Unknown or
//! unwanted sections can be skipped by length.

use crate::bits::{ByteReader, ByteWriter};
use crate::corpus::{Collection, IngestOptions, SENTINEL};
use crate::counter::{Structure, StructureKind};
use crate::error::{Error, Result};
use crate::ilcp::IlcpIndex;
use crate::pdl::PdlCountIndex;
use crate::sada::SadaIndex;
use crate::suffix::TextIndex;

pub const MAGIC: &[u8; 4] = b"DCNT";
pub const VERSION: u16 = 1;

const TAG_TEXT: u8 = 1;
const TAG_SA: u8 = 2;
const TAG_SADA: u8 = 3;
const TAG_ILCP: u8 = 4;
const TAG_PDL: u8 = 5;

pub struct IndexFile {
    pub index: TextIndex,
    pub structures: Vec<Structure>,
}

fn section(out: &mut ByteWriter, tag: u8, body: impl FnOnce(&mut ByteWriter)) {
    let mut inner = ByteWriter::new();
    body(&mut inner);
    out.put_u8(tag);
    out.put_bytes(&inner.buf);
}

pub fn to_bytes(idx: &TextIndex, structures: &[Structure]) -> Vec<u8> {
    let mut w = ByteWriter::new();
    w.buf.extend_from_slice(MAGIC);
    w.put_u16(VERSION);
    w.put_u32(2 + structures.len() as u32);
    section(&mut w, TAG_TEXT, |w| {
        w.put_u64(idx.num_docs() as u64);
        w.put_bytes(idx.text());
    });
    section(&mut w, TAG_SA, |w| w.put_u32s(idx.sa()));
    for s in structures {
        match s {
            Structure::Sada(x) => section(&mut w, TAG_SADA, |w| x.write_to(w)),
            Structure::Ilcp(x) => section(&mut w, TAG_ILCP, |w| x.write_to(w)),
            Structure::Pdl(x) => section(&mut w, TAG_PDL, |w| x.write_to(w)),
        }
    }
    w.buf
}

/// Loads everything, or only the structures listed in `only`.
pub fn from_bytes(data: &[u8], only: Option<&[StructureKind]>) -> Result<IndexFile> {
    let mut r = ByteReader::new(data);
    if r.take(4)? != MAGIC {
        return Err(Error::Format("not an index file (bad magic)".into()));
    }
    let version = r.get_u16()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported index version {version}")));
    }
    let sections = r.get_u32()?;
    let mut collection = None;
    let mut sa = None;
    let mut structures = Vec::new();
    for _ in 0..sections {
        let tag = r.get_u8()?;
        let body = r.get_bytes()?;
        let mut s = ByteReader::new(body);
        match tag {
            TAG_TEXT => {
                let docs = s.get_u64()? as usize;
                let text = s.get_bytes()?;
                if text.last() != Some(&SENTINEL) {
                    return Err(Error::Format("collection text must end with the sentinel".into()));
                }
                let c = Collection::ingest_concat(text, SENTINEL, IngestOptions { allow_empty: true })?;
                if c.num_docs() != docs {
                    return Err(Error::Format("document count mismatch".into()));
                }
                collection = Some(c);
            }
            TAG_SA => sa = Some(s.get_u32s()?),
            TAG_SADA | TAG_ILCP | TAG_PDL => {
                let st = match tag {
                    TAG_SADA => Structure::Sada(SadaIndex::read_from(&mut s)?),
                    TAG_ILCP => Structure::Ilcp(IlcpIndex::read_from(&mut s)?),
                    _ => Structure::Pdl(PdlCountIndex::read_from(&mut s)?),
                };
                if only.is_none_or(|k| k.contains(&st.kind())) {
                    structures.push(st);
                }
            }
            // sections from newer writers are skipped
            _ => {}
        }
    }
    let collection = collection.ok_or_else(|| Error::Format("missing collection section".into()))?;
    let sa = sa.ok_or_else(|| Error::Format("missing suffix array section".into()))?;
    let index = TextIndex::from_suffix_array(collection, sa)?;
    Ok(IndexFile { index, structures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::DocumentCounter;
    use crate::suffix::LocusRange;

    #[test]
    fn round_trip_all_structures() {
        let idx = TextIndex::build(Collection::from_documents([&b"abracadabra"[..], b"cabrac", b"abab"]).unwrap());
        let structures: Vec<Structure> = StructureKind::all().into_iter().map(|k| k.build(&idx, Some(4)).unwrap()).collect();
        let bytes = to_bytes(&idx, &structures);
        assert_eq!(&bytes[..4], b"DCNT");
        let back = from_bytes(&bytes, None).unwrap();
        assert_eq!(back.structures, structures);
        assert_eq!(back.index.sa(), idx.sa());
        let r: LocusRange = back.index.find(b"abra").unwrap();
        for s in &back.structures {
            assert_eq!(s.count(r, 4).unwrap(), 2, "{}", s.name());
        }
        let only = from_bytes(&bytes, Some(&["ilcp-rl".parse().unwrap()])).unwrap();
        assert_eq!(only.structures.len(), 1);
    }

    #[test]
    fn rejects_corruption() {
        let idx = TextIndex::build(Collection::from_documents([b"ab", b"ba"]).unwrap());
        let bytes = to_bytes(&idx, &[]);
        assert!(from_bytes(b"NOPE", None).is_err());
        assert!(from_bytes(&bytes[..bytes.len() - 3], None).is_err());
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(from_bytes(&bad, None).is_err());
        // swap two suffix array entries
        let mut swapped = bytes.clone();
        let tail = swapped.len();
        swapped.swap(tail - 4, tail - 8);
        assert!(from_bytes(&swapped, None).is_err());
    }
}
