use std::collections::BTreeMap;

use causal_core::causal::{lemma3_slice, lemma3_triangulation, prism_slice, validate_slice};
use causal_core::fixtures;
use causal_core::midsection::{midsection, reassemble_4d, subdivide_4d};
use causal_core::reconstruct::{reconstruct, roundtrip_certify};
use causal_core::{ColouredComplex, VertexId};
use proptest::prelude::*;

fn stellar_choices() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..7)
}

fn shuffled(k: &ColouredComplex, seed: &[usize]) -> BTreeMap<VertexId, VertexId> {
    let mut ids: Vec<VertexId> = k.vertices().collect();
    for (i, &s) in seed.iter().enumerate() {
        let n = ids.len();
        ids.swap(i % n, s % n);
    }
    k.vertices().zip(ids).map(|(v, w)| (v, w + 1000)).collect()
}

fn base_surface() -> impl Strategy<Value = ColouredComplex> {
    prop_oneof![
        stellar_choices().prop_map(|c| fixtures::stellar_sphere(&c)),
        Just(fixtures::octahedron()),
        Just(fixtures::torus7()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonical_forms_ignore_labels(base in base_surface(), seed in prop::collection::vec(0usize..100, 0..20)) {
        let slice = prism_slice(&base, None).unwrap();
        let k = slice.complex();
        let map = shuffled(k, &seed);
        let moved = k.relabel(|v| map[&v]);
        prop_assert_eq!(moved.canonical_form(), k.canonical_form());

        let moved_slice = validate_slice(&moved, false).unwrap();
        prop_assert_eq!(midsection(&moved_slice).canonical_form(), midsection(&slice).canonical_form());
    }

    #[test]
    fn lemma3_adds_ten(choices in stellar_choices()) {
        let sigma = fixtures::stellar_sphere(&choices);
        let slice = lemma3_slice(&sigma).unwrap();
        prop_assert_eq!(slice.volume(), sigma.facets().len() + 10);
        prop_assert_eq!(slice.blue_boundary().f_vector(), vec![4, 6, 4]);
        prop_assert!(roundtrip_certify(&slice).unwrap().equal());
    }

    #[test]
    fn two_lemma3_slices_add_twenty(a in stellar_choices(), b in stellar_choices()) {
        let (sa, sb) = (fixtures::stellar_sphere(&a), fixtures::stellar_sphere(&b));
        let t = lemma3_triangulation(&sa, &sb).unwrap();
        prop_assert_eq!(t.volume(), sa.facets().len() + sb.facets().len() + 20);
        prop_assert_eq!(t.sigma_in().uncoloured_canonical_form(), sa.uncoloured_canonical_form());
        prop_assert_eq!(t.sigma_out().uncoloured_canonical_form(), sb.uncoloured_canonical_form());
    }

    #[test]
    fn prisms_round_trip(base in base_surface(), seed in prop::collection::vec(0usize..100, 0..20)) {
        let order: Vec<VertexId> = shuffled(&base, &seed).values().map(|w| w - 1000).collect();
        let slice = prism_slice(&base, Some(&order)).unwrap();
        let back = reconstruct(&midsection(&slice)).unwrap();
        prop_assert_eq!(back.complex().canonical_form(), slice.complex().canonical_form());
        prop_assert_eq!(back.genus(), slice.genus());
    }

    #[test]
    fn subdivision_is_undone(order in Just((0..5u32).collect::<Vec<_>>()).prop_shuffle()) {
        let slice = prism_slice(&fixtures::boundary_4simplex(), Some(&order)).unwrap();
        let s = midsection(&slice);
        let sub = subdivide_4d(&s).unwrap();
        let prisms = s.cells().iter().filter(|c| c.corners().len() == 6).count();
        prop_assert_eq!(sub.tets().len(), s.cells().len() + 2 * prisms);
        prop_assert_eq!(reassemble_4d(&sub).unwrap().canonical_form(), s.canonical_form());
    }
}
