mod common;

use common::{loci_with_lengths, StampOracle};
use doccount::bitvec::{EncodedBitvector, Encoding};
use doccount::container;
use doccount::corpus::Collection;
use doccount::counter::{DocumentCounter, Structure, StructureKind};
use doccount::ilcp::IlcpArray;
use doccount::pdl::BlockCover;
use doccount::sada::{HArray, Placement, SadaIndex, SadaVariant};
use doccount::suffix::{LocusRange, TextIndex};
use proptest::prelude::*;

fn collection() -> impl Strategy<Value = Vec<Vec<u8>>> {
    // small alphabets and a shared seed document make repeats likely
    (
        prop::collection::vec(prop::sample::select(b"abc".to_vec()), 1..12),
        prop::collection::vec(
            (prop::collection::vec(prop::sample::select(b"abcd".to_vec()), 1..14), any::<bool>()),
            1..7,
        ),
    )
        .prop_map(|(seed, docs)| {
            docs.into_iter()
                .map(|(mut body, copy)| {
                    if copy {
                        body.extend_from_slice(&seed);
                    }
                    body
                })
                .collect()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_structure_matches_the_oracle(docs in collection()) {
        let idx = TextIndex::build(Collection::from_documents(&docs).unwrap());
        let mut oracle = StampOracle::new(idx.num_docs());
        let structures: Vec<Structure> = StructureKind::all()
            .into_iter()
            .map(|k| k.build(&idx, Some(3)).unwrap())
            .collect();
        for (r, len) in loci_with_lengths(&idx) {
            let want = oracle.docc(&idx, r);
            for s in &structures {
                prop_assert_eq!(s.count(r, len).unwrap(), want, "{} on {:?}", s.name(), r);
            }
        }
        let root = LocusRange::new(1, idx.len());
        let all = oracle.docc(&idx, root);
        for s in structures.iter().filter(|s| !matches!(s, Structure::Ilcp(_))) {
            prop_assert_eq!(s.count(root, 0).unwrap(), all);
        }
    }

    #[test]
    fn h_sums_and_placements(docs in collection()) {
        let idx = TextIndex::build(Collection::from_documents(&docs).unwrap());
        let n = idx.len();
        let d = idx.num_docs();
        let per_pair = HArray::build(&idx, Placement::PerPair);
        let agg = HArray::build(&idx, Placement::Aggregated);
        prop_assert_eq!(per_pair.sum() as usize, n - d);
        prop_assert_eq!(agg.sum() as usize, n - d);
        for (r, _) in loci_with_lengths(&idx) {
            prop_assert_eq!(per_pair.direct_count(r), agg.direct_count(r));
        }
        // aggregated cells sit on the leftmost child boundary of their node
        let mut leaders = vec![false; n - 1];
        idx.for_each_internal_node(|node| leaders[node.boundaries[0] as usize - 1] = true);
        for (k, &h) in agg.values().iter().enumerate() {
            prop_assert!(h == 0 || leaders[k]);
        }
        let plain = SadaIndex::from_h(&idx, &agg, SadaVariant::preset("sada").unwrap()).unwrap();
        prop_assert_eq!(plain.hprime().len(), (n - 1) + (n - d));
    }

    #[test]
    fn runs_match_a_naive_scan(docs in collection()) {
        let idx = TextIndex::build(Collection::from_documents(&docs).unwrap());
        for (name, v) in SadaVariant::presets() {
            let s = SadaIndex::build(&idx, v).unwrap();
            let bits = s.hprime().to_bitbuf();
            let mut runs = 0;
            let mut prev = false;
            for b in bits.iter() {
                if b && !prev {
                    runs += 1;
                }
                prev = b;
            }
            prop_assert_eq!(s.count_runs_of_ones(), runs, "{}", name);
        }
    }

    #[test]
    fn ilcp_marks_first_occurrences(docs in collection()) {
        let idx = TextIndex::build(Collection::from_documents(&docs).unwrap());
        let ilcp = IlcpArray::build(&idx);
        let da = idx.da();
        for (r, len) in loci_with_lengths(&idx) {
            for i in r.sp..=r.ep {
                let first = !da[r.sp - 1..i - 1].contains(&da[i - 1]);
                prop_assert_eq!((ilcp.values()[i - 1] as usize) < len, first);
            }
        }
    }

    #[test]
    fn block_cover_is_a_partition(docs in collection(), t in 1usize..6) {
        let idx = TextIndex::build(Collection::from_documents(&docs).unwrap());
        let h = HArray::build(&idx, Placement::Aggregated);
        let cover = BlockCover::select(&idx, &h, Some(t)).unwrap();
        prop_assert!(cover.covers(idx.len()));
        let mut oracle = StampOracle::new(idx.num_docs());
        for b in cover.blocks() {
            // below every block, docc equals occ
            for (r, _) in loci_with_lengths(&idx) {
                if r.sp >= b.sp && r.ep <= b.ep && (r.sp, r.ep) != (b.sp, b.ep) {
                    prop_assert_eq!(oracle.docc(&idx, r), r.len());
                }
            }
        }
    }

    #[test]
    fn container_round_trip(docs in collection()) {
        let idx = TextIndex::build(Collection::from_documents(&docs).unwrap());
        let structures: Vec<Structure> = StructureKind::all()
            .into_iter()
            .map(|k| k.build(&idx, None).unwrap())
            .collect();
        let back = container::from_bytes(&container::to_bytes(&idx, &structures), None).unwrap();
        prop_assert_eq!(back.structures, structures);
    }

    #[test]
    fn bitvector_round_trip(bits in prop::collection::vec(any::<bool>(), 0..600)) {
        let buf = doccount::bits::BitBuf::from_bits(bits.iter().copied());
        for enc in Encoding::ALL {
            let bv = EncodedBitvector::new(&buf, enc);
            let back = EncodedBitvector::from_bytes(&bv.to_bytes()).unwrap();
            prop_assert_eq!(&back, &bv);
            prop_assert_eq!(back.to_bitbuf(), buf.clone());
        }
    }
}
