use oddkh::diagram::CircleMap;
use oddkh::*;
use proptest::prelude::*;

/// Braid closures with at most seven crossings on two to four strands.
fn braid() -> impl Strategy<Value = PlanarDiagram> {
    (2usize..=4)
        .prop_flat_map(|s| {
            let letter = (1..s as i32, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g });
            (Just(s), proptest::collection::vec(letter, 1..=7))
        })
        .prop_map(|(s, word)| gen_braid_closure(&word, s).unwrap())
}

fn knot() -> impl Strategy<Value = PlanarDiagram> {
    braid().prop_filter("knots only", |d| d.component_count() == 1)
}

fn opts() -> BuildOptions {
    BuildOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circle_counts_change_by_one(d in braid()) {
        let segments = d.edge_count() + d.free_loops();
        for v in 0..1u32 << d.crossing_count() {
            let c = CircleMap::compute(&d, v).count();
            prop_assert!(c >= 1 && c <= segments.max(1));
            for k in 0..d.crossing_count() {
                if v >> k & 1 == 1 {
                    let w = CircleMap::compute(&d, v & !(1 << k)).count();
                    prop_assert_eq!((c as i64 - w as i64).abs(), 1);
                }
            }
        }
    }

    #[test]
    fn gradings_are_integral_and_step_by_one(d in braid()) {
        let n = d.crossing_count();
        prop_assert_eq!((d.writhe() - n as i32).rem_euclid(2), 0);
        for v in 0..1u32 << n {
            let s = State::new(v, n);
            prop_assert_eq!((s.sigma() - n as i32).rem_euclid(2), 0);
            let g = gradings(&d, &s);
            prop_assert_eq!(g.j - g.i, d.writhe());
            for k in 0..n {
                if v >> k & 1 == 1 {
                    let h = gradings(&d, &State::new(v & !(1 << k), n));
                    prop_assert_eq!((h.i, h.j), (g.i + 1, g.j + 1));
                }
            }
        }
    }

    #[test]
    fn mirror_is_an_involution(d in braid()) {
        let m = d.mirror();
        let back = m.mirror();
        prop_assert_eq!(back.crossings(), d.crossings());
        let signs: Vec<i32> = d.crossing_signs().iter().map(|s| -s.value()).collect();
        let mirrored: Vec<i32> = m.crossing_signs().iter().map(|s| s.value()).collect();
        prop_assert_eq!(signs, mirrored);
    }

    #[test]
    fn complexes_square_to_zero(d in braid(), seed in any::<u64>()) {
        for flavor in [Flavor::Odd, Flavor::Even, Flavor::ReducedEven] {
            let o = BuildOptions { seed: Some(seed), ..opts() };
            prop_assert!(build_complex_with(&d, flavor, &o).unwrap().check_d_squared().is_ok());
        }
    }

    #[test]
    fn odd_faces_anticommute(d in braid(), seed in any::<u64>()) {
        let cube = ResolutionCube::build(&d, ArrowChoice::seeded(d.crossing_count(), seed), 20).unwrap();
        let signs = cube.solve_edge_assignment().unwrap();
        for v in 0..cube.vertex_count() as u32 {
            for j in 0..d.crossing_count() {
                for k in j + 1..d.crossing_count() {
                    if v >> j & 1 == 1 && v >> k & 1 == 1 {
                        let rel = cube.face_relation(Theory::Odd, v, j, k).unwrap();
                        let flips = signs.sign(v, j) * signs.sign(v & !(1 << j), k)
                            * signs.sign(v, k) * signs.sign(v & !(1 << k), j);
                        let anti = match rel {
                            FaceRelation::Commute => flips < 0,
                            FaceRelation::Anticommute => flips > 0,
                            FaceRelation::Free => true,
                        };
                        prop_assert!(anti, "face at {} ({}, {})", v, j, k);
                    }
                }
            }
        }
    }

    #[test]
    fn odd_and_even_chains_agree_in_size_and_euler_characteristic(d in braid()) {
        let odd = build_complex(&d, Flavor::Odd, None).unwrap();
        let even = build_complex(&d, Flavor::Even, None).unwrap();
        let dims = |c: &ChainComplex| c.gradings().map(|(i, j)| ((i, j), c.rank(i, j))).collect::<Vec<_>>();
        prop_assert_eq!(dims(&odd), dims(&even));
        let jones = jones_skein_oracle(&d).unwrap();
        prop_assert_eq!(odd.euler_characteristic(), jones.clone());
        let h = compute_homology(&d, Flavor::Odd, Ring::Z, &opts()).unwrap();
        prop_assert_eq!(jones_from_table(&h), jones);
    }

    #[test]
    fn mod_two_reductions_agree(d in braid()) {
        let odd = build_complex(&d, Flavor::Odd, None).unwrap().mod2();
        let even = build_complex(&d, Flavor::Even, None).unwrap().mod2();
        prop_assert!(homology(&odd, Ring::Z2).same_groups(&homology(&even, Ring::Z2)));
    }

    #[test]
    fn field_ranks_match_integral_ranks(d in braid()) {
        for flavor in [Flavor::Odd, Flavor::Even] {
            let z = compute_homology(&d, flavor, Ring::Z, &opts()).unwrap();
            let q = compute_homology(&d, flavor, Ring::Q, &opts()).unwrap();
            prop_assert!(z.free_part().same_groups(&q));
            let z2 = compute_homology(&d, flavor, Ring::Z2, &opts()).unwrap();
            for (i, j) in z.entries().map(|(k, _)| k).chain(z2.entries().map(|(k, _)| k)) {
                let want = z.get(i, j).rank + z.get(i, j).even_torsion() as u64
                    + z.get(i + 1, j).even_torsion() as u64;
                prop_assert_eq!(z2.get(i, j).rank, want, "at ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn reduced_even_mod_two_is_basepoint_free(d in braid()) {
        prop_assume!(d.edge_count() > 1);
        let labels = d.edge_labels();
        let at = |b: u32| compute_homology(
            &d, Flavor::ReducedEven, Ring::Z2, &BuildOptions { basepoint: Some(b), ..opts() }).unwrap();
        let first = at(labels[0]);
        prop_assert!(at(labels[labels.len() - 1]).same_groups(&first));
        let even = compute_homology(&d, Flavor::Even, Ring::Z2, &opts()).unwrap();
        prop_assert!(unreduce(&first).same_groups(&even));
    }

    #[test]
    fn odd_homology_splits(d in braid()) {
        let odd = compute_homology(&d, Flavor::Odd, Ring::Z, &opts()).unwrap();
        let reduced = reduce_by_splitting(&odd).unwrap();
        prop_assert!(unreduce(&reduced).same_groups(&odd));
        let w = homological_width(&odd).unwrap().width;
        prop_assert_eq!(homological_width(&reduced).unwrap().width + 1, w);
        prop_assert_eq!(is_zero_omitting(&odd), is_zero_omitting(&reduced));
    }

    #[test]
    fn rational_reduced_width_drops_by_one(d in knot()) {
        let q = compute_homology(&d, Flavor::Even, Ring::Q, &opts()).unwrap();
        let rq = compute_homology(&d, Flavor::ReducedEven, Ring::Q, &opts()).unwrap();
        prop_assert_eq!(homological_width(&rq).unwrap().width + 1, homological_width(&q).unwrap().width);
    }

    #[test]
    fn mirror_reflects_rational_support(d in braid()) {
        let h = compute_homology(&d, Flavor::Even, Ring::Q, &opts()).unwrap();
        let m = compute_homology(&d.mirror(), Flavor::Even, Ring::Q, &opts()).unwrap();
        let min = m.entries().map(|((i, j), _)| j - i).min();
        let max = h.entries().map(|((i, j), _)| j - i).max();
        prop_assert_eq!(min, max.map(|x| -x));
        for ((i, j), g) in h.entries() {
            prop_assert_eq!(&m.get(-i, -j), g);
        }
    }

    #[test]
    fn seeds_do_not_change_homology(d in braid(), seed in any::<u64>()) {
        for flavor in [Flavor::Odd, Flavor::ReducedEven] {
            let a = compute_homology(&d, flavor, Ring::Z, &opts()).unwrap();
            let b = compute_homology(&d, flavor, Ring::Z, &BuildOptions { seed: Some(seed), ..opts() }).unwrap();
            prop_assert!(a.same_groups(&b));
        }
    }

    #[test]
    fn output_is_deterministic(d in braid(), seed in any::<u64>()) {
        let o = BuildOptions { seed: Some(seed), ..opts() };
        let a = build_complex_with(&d, Flavor::Odd, &o).unwrap().to_json();
        let b = build_complex_with(&d, Flavor::Odd, &o).unwrap().to_json();
        prop_assert_eq!(a, b);
        let t = compute_homology(&d, Flavor::Odd, Ring::Z, &o).unwrap();
        prop_assert_eq!(render::table_from_json(&render::table_to_json(&t)).unwrap(), t);
    }
}

#[test]
fn pretzel_knots_have_one_component() {
    for p in [[3, 3, -3], [3, 4, -3], [3, 5, 7], [-1, -1, -1]] {
        assert_eq!(gen_pretzel(&p).unwrap().component_count(), 1, "{p:?}");
    }
}

#[test]
fn alternating_knots_have_one_reduced_diagonal() {
    for e in bundled_corpus() {
        if ![
            "trefoil_right",
            "trefoil_left",
            "figure_eight",
            "hopf",
            "5_2",
            "6_1",
        ]
        .contains(&e.name.as_str())
        {
            continue;
        }
        let odd = compute_homology(&e.diagram, Flavor::ReducedOdd, Ring::Z, &opts()).unwrap();
        let even = compute_homology(&e.diagram, Flavor::ReducedEven, Ring::Z, &opts()).unwrap();
        for t in [odd, even] {
            assert_eq!(homological_width(&t).unwrap().width, 1, "{}", e.name);
        }
    }
}
