//! Property tests: invariants that must hold for every ring in the small
//! enumerated pool under arbitrary relabelings.

use std::sync::OnceLock;

use proptest::prelude::*;

use fusion_rings::precision::{cmp, Ctx};
use fusion_rings::{
    canonical_code, canonical_form, direct_product, enumerate_rings, equivalent, fp_dimensions,
    read_catalog, write_catalog, EnumOptions, FusionRing, RingRecord,
};

/// Every ring with rank <= 4 and multiplicity <= 2, plus the group rings of
/// the order <= 8 groups (ranks 5..8 with duals of both kinds).
fn pool() -> &'static [FusionRing] {
    static POOL: OnceLock<Vec<FusionRing>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut rings = Vec::new();
        for rank in 1..=4 {
            let run = enumerate_rings(rank, 2, &EnumOptions::default()).expect("enumeration");
            rings.extend(run.rings.into_iter().map(|er| er.ring));
        }
        for (_, group) in fusion_rings::song::small_groups() {
            if group.order() > 1 {
                rings.push(fusion_rings::group_ring(&group));
            }
        }
        rings
    })
}

/// A pool ring together with a relabeling that fixes the unit.
fn ring_and_perm() -> impl Strategy<Value = (FusionRing, Vec<usize>)> {
    (0..pool().len())
        .prop_flat_map(|i| {
            let ring = pool()[i].clone();
            let tail: Vec<usize> = (2..=ring.rank()).collect();
            (Just(ring), Just(tail).prop_shuffle())
        })
        .prop_map(|(ring, tail)| {
            let mut perm = vec![1];
            perm.extend(tail);
            (ring, perm)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_code_is_relabel_invariant((ring, perm) in ring_and_perm()) {
        let relabeled = ring.permute(&perm).unwrap();
        prop_assert!(relabeled.validate().is_valid());
        prop_assert_eq!(
            canonical_code(&ring).unwrap(),
            canonical_code(&relabeled).unwrap()
        );
    }

    #[test]
    fn equivalent_recovers_a_relabeling((ring, perm) in ring_and_perm()) {
        let relabeled = ring.permute(&perm).unwrap();
        let found = equivalent(&ring, &relabeled).unwrap()
            .expect("relabeled ring must be equivalent");
        prop_assert_eq!(ring.permute(&found).unwrap(), relabeled);
    }

    #[test]
    fn canonical_form_is_idempotent((ring, _) in ring_and_perm()) {
        let canon = canonical_form(&ring).unwrap();
        let again = canonical_form(&canon.ring).unwrap();
        prop_assert_eq!(&again.code, &canon.code);
        prop_assert_eq!(&again.ring, &canon.ring);
    }

    #[test]
    fn catalog_round_trip_is_exact((ring, _) in ring_and_perm()) {
        let record = RingRecord::from_ring(&ring, None);
        let mut buf = Vec::new();
        write_catalog(&mut buf, &[record]).unwrap();
        let parsed = read_catalog(buf.as_slice()).unwrap();
        prop_assert_eq!(parsed.len(), 1);
        prop_assert_eq!(parsed[0].to_ring().unwrap(), ring);
    }

    #[test]
    fn fp_dimensions_are_at_least_one((ring, _) in ring_and_perm()) {
        let ctx = Ctx::from_digits(40);
        let tol = ctx.ten_pow(-30);
        let fp = fp_dimensions(&ring, ctx, &tol).unwrap();
        let floor = ctx.sub(&ctx.one(), &tol);
        for d in &fp.dims {
            prop_assert_ne!(cmp(d, &floor), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn direct_product_code_ignores_factor_labels(
        (a, perm) in ring_and_perm(),
        j in 0..24usize,
    ) {
        let b = &pool()[j % pool().len()];
        if a.rank() * b.rank() > 12 {
            return Ok(()); // keep canonicalization cheap
        }
        let plain = direct_product(&a, b);
        prop_assert!(plain.validate().is_valid());
        let twisted = direct_product(&a.permute(&perm).unwrap(), b);
        prop_assert_eq!(
            canonical_code(&plain).unwrap(),
            canonical_code(&twisted).unwrap()
        );
    }
}
