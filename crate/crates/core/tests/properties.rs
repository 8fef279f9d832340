use pathcoalg::coalgebra::LinearMap;
use pathcoalg::field::{Field, FieldElement};
use pathcoalg::graph::{automorphisms, is_invariant, Digraph};
use pathcoalg::graph_coalgebra::{GraphCoalgebra, StructuredAut};
use pathcoalg::group::Perm;
use pathcoalg::realization::{action_system, arrow_replace, phi, PermRep};
use proptest::prelude::*;

const FIELDS: [(u64, u64); 5] = [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)];

fn small_digraph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..5).prop_flat_map(|n| {
        let edges = proptest::collection::btree_set((0..n, 0..n), 0..6)
            .prop_map(|s| s.into_iter().filter(|(u, w)| u != w).collect::<Vec<_>>());
        (Just(n), edges)
    })
}

fn structured(gc: &GraphCoalgebra, auts: &[Perm], picks: &[u32]) -> StructuredAut {
    let f = gc.field();
    let q = f.order();
    let m = gc.edge_count();
    StructuredAut {
        sigma: auts[picks[0] as usize % auts.len()].clone(),
        lambda: (0..m)
            .map(|e| f.element(picks[1 + e] % q).unwrap())
            .collect(),
        mu: (0..m)
            .map(|e| f.element(1 + picks[1 + m + e] % (q - 1)).unwrap())
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn structured_matrix_form_is_functorial(
        (n, edges) in small_digraph(),
        field in 0usize..FIELDS.len(),
        picks in proptest::collection::vec(any::<u32>(), 32),
    ) {
        let (p, k) = FIELDS[field];
        let f = Field::new(p, k).unwrap();
        let gc = GraphCoalgebra::build(Digraph::from_edges(n, &edges).unwrap(), &f).unwrap();
        let auts = gc.graph_automorphisms(100_000).unwrap();
        let f1 = structured(&gc, &auts, &picks[..16]);
        let f2 = structured(&gc, &auts, &picks[16..]);
        let m1 = gc.structured_to_matrix(&f1).unwrap();
        let m2 = gc.structured_to_matrix(&f2).unwrap();
        prop_assert_eq!(gc.structured_to_matrix(&gc.compose(&f2, &f1).unwrap()).unwrap(), m2.compose(&f, &m1).unwrap());
        // round trip through the matrix form
        prop_assert_eq!(gc.decompose(&m1).unwrap(), f1.clone());
        // the inverse triple gives the inverse matrix
        let inv = gc.structured_to_matrix(&gc.invert(&f1).unwrap()).unwrap();
        prop_assert_eq!(Some(inv), m1.inverse(&f));
        prop_assert!(gc.coalgebra().is_morphism(gc.coalgebra(), &m1).unwrap());
    }

    #[test]
    fn brute_automorphisms_form_a_group_permuting_grouplikes(
        (n, edges) in small_digraph(),
    ) {
        let f = Field::new(2, 1).unwrap();
        let gc = GraphCoalgebra::build(Digraph::from_edges(n, &edges).unwrap(), &f).unwrap();
        prop_assume!(gc.coalgebra().dim() <= 4);
        let brute = gc.coalgebra().automorphisms_brute(1 << 24).unwrap();
        let contains = |m: &LinearMap| brute.binary_search(m).is_ok();
        let mut sorted = brute.clone();
        sorted.sort();
        prop_assert_eq!(&sorted, &brute);
        prop_assert!(contains(&LinearMap::identity(gc.coalgebra().dim())));
        let grouplikes = gc.coalgebra().grouplikes(1 << 20).unwrap();
        let graph_auts = gc.graph_automorphisms(100_000).unwrap();
        for a in &brute {
            prop_assert!(contains(&a.inverse(&f).unwrap()));
            for b in &brute {
                prop_assert!(contains(&a.compose(&f, b).unwrap()));
            }
            let mut images: Vec<Vec<FieldElement>> = grouplikes
                .iter()
                .map(|x| {
                    let sparse: Vec<(usize, FieldElement)> =
                        x.iter().copied().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                    let mut dense = vec![FieldElement::ZERO; x.len()];
                    for (i, c) in a.apply(&f, &sparse) {
                        dense[i] = c;
                    }
                    dense
                })
                .collect();
            images.sort();
            let mut expected = grouplikes.clone();
            expected.sort();
            prop_assert_eq!(images, expected);
            let sigma = gc.decompose(a).unwrap().sigma;
            prop_assert!(graph_auts.contains(&sigma));
        }
    }
}

/// Representations of subgroups of S4 on their natural 4 points or, through
/// the sign, on 2 points.
fn small_rep() -> impl Strategy<Value = PermRep> {
    let perm = Just((0..4usize).collect::<Vec<_>>()).prop_shuffle();
    (proptest::collection::vec(perm, 1..3), any::<bool>()).prop_filter_map(
        "identity generator",
        |(gens, sign)| {
            let gens: Vec<Perm> = gens
                .into_iter()
                .map(|g| Perm::from_images(g).unwrap())
                .collect();
            if gens.iter().any(Perm::is_identity) {
                return None;
            }
            let images = if sign {
                let parity =
                    |p: &Perm| p.cycle_lengths().iter().filter(|&&l| l % 2 == 0).count() % 2;
                gens.iter()
                    .map(|g| {
                        if parity(g) == 1 {
                            Perm::from_images(vec![1, 0]).unwrap()
                        } else {
                            Perm::identity(2)
                        }
                    })
                    .collect()
            } else {
                gens.clone()
            };
            let v = if sign { 2 } else { 4 };
            Some(PermRep::from_generators(4, gens, v, images, 100).unwrap())
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn action_system_realizes_the_representation(rep in small_rep()) {
        let group = rep.group();
        let n = group.order();
        let k = rep.v_size();
        let sys = action_system(&rep).unwrap();
        let mut phis: Vec<Perm> = (0..n).map(|g| phi(&rep, g).unwrap()).collect();
        phis.sort();
        let auts = automorphisms(&sys, 2_000_000).unwrap();
        prop_assert_eq!(&auts, &phis);
        let v_subset: Vec<usize> = (n..n + k).collect();
        prop_assert!(is_invariant(&v_subset, &auts));
        for g in 0..n {
            let p = phi(&rep, g).unwrap();
            let restricted: Vec<usize> = v_subset.iter().map(|&v| p.apply(v) - n).collect();
            prop_assert_eq!(restricted.as_slice(), rep.rho(g).unwrap().images());
        }
        let s = group.generators().len();
        for (x, d) in sys.all_degrees().iter().enumerate() {
            prop_assert_eq!(d.degree, if x < n { 2 * s + k } else { n });
        }
        if n <= 8 {
            let (simple, prov) = arrow_replace(&sys).unwrap();
            let simple_auts = automorphisms(simple.system(), 2_000_000).unwrap();
            prop_assert!(is_invariant(&v_subset, &simple_auts));
            let mut restricted: Vec<Perm> = simple_auts.iter().map(|p| prov.restrict(p).unwrap()).collect();
            restricted.sort();
            prop_assert_eq!(restricted, auts);
        }
    }
}
