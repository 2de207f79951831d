mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{box_roots, finite_type, form};
use mukai_core::arith::rat;
use mukai_core::roots::{
    classify_affine, classify_finite, delete_node, positive_roots, reduce_to_fundamental, simple_reflection,
    standard_affine_cartan, standard_finite_cartan, standard_marks, weyl_orbit, CartanMatrix, Family, FiniteDiagram,
    DEFAULT_ORBIT_CAP,
};

fn permuted(c: &CartanMatrix, perm: &[usize]) -> CartanMatrix {
    let n = perm.len();
    CartanMatrix::new((0..n).map(|i| (0..n).map(|j| c.get(perm[i], perm[j])).collect()).collect()).unwrap()
}

fn affine_types() -> Vec<(Family, usize)> {
    let mut t: Vec<(Family, usize)> = (1..=7).map(|n| (Family::A, n)).collect();
    t.extend((4..=8).map(|n| (Family::D, n)));
    t.extend((6..=8).map(|n| (Family::E, n)));
    t
}

fn permuted_affine() -> impl Strategy<Value = ((Family, usize), Vec<usize>)> {
    prop::sample::select(affine_types()).prop_flat_map(|(f, n)| (Just((f, n)), Just((0..=n).collect::<Vec<usize>>()).prop_shuffle()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 600, ..ProptestConfig::default() })]

    #[test]
    fn affine_recognition_ignores_labelling(((f, n), perm) in permuted_affine()) {
        let m = permuted(&standard_affine_cartan(f, n), &perm);
        let d = classify_affine(&m).unwrap();
        prop_assert_eq!((d.family, d.rank), (f, n));
        let std_marks = standard_marks(f, n);
        let expect: Vec<i64> = perm.iter().map(|&p| std_marks[p]).collect();
        prop_assert_eq!(&d.marks, &expect);
        for node in d.mark_one_nodes() {
            let fin = delete_node(&d, node).unwrap();
            prop_assert_eq!((fin.family, fin.rank), (f, n));
        }
    }

    #[test]
    fn finite_recognition_ignores_labelling(((f, n), perm) in permuted_affine()) {
        // reuse the affine sizes: the finite diagram has n nodes
        let perm: Vec<usize> = perm.into_iter().filter(|&p| p < n).collect();
        let m = permuted(&standard_finite_cartan(f, n), &perm);
        let d = classify_finite(&m).unwrap();
        prop_assert_eq!((d.family, d.rank), (f, n));
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| m.get(i, j) == -1)
            .collect();
        prop_assert_eq!(finite_type(n, &edges), Some((f.to_string().chars().next().unwrap(), n)));
    }

    #[test]
    fn chamber_reduction_lands_in_closed_chamber(
        (f, n, vals) in prop::sample::select(vec![(Family::A, 3), (Family::D, 4), (Family::D, 5), (Family::E, 6)])
            .prop_flat_map(|(f, n)| (Just(f), Just(n), prop::collection::vec(-7i64..=7, n)))
    ) {
        let fd = FiniteDiagram::standard(f, n);
        let input: Vec<_> = vals.iter().map(|&x| rat(x)).collect();
        let red = reduce_to_fundamental(&fd, &input).unwrap();
        prop_assert!(red.values.iter().all(|x| *x >= rat(0)));
        prop_assert_eq!(red.word.apply_values(&fd, &input).unwrap(), red.values.clone());
        prop_assert_eq!(red.word.inverse().apply_values(&fd, &red.values).unwrap(), input);
        prop_assert_eq!(red.on_wall, red.values.iter().any(|x| *x == rat(0)));
    }

    #[test]
    fn simple_reflections_are_isometric_involutions(
        (f, n, x, i) in prop::sample::select(vec![(Family::A, 4), (Family::D, 5), (Family::E, 7)])
            .prop_flat_map(|(f, n)| (Just(f), Just(n), prop::collection::vec(-5i64..=5, n), 1..=n))
    ) {
        let fd = FiniteDiagram::standard(f, n);
        let c = fd.cartan.entries().to_vec();
        let y = simple_reflection(&fd, i, &x).unwrap();
        prop_assert_eq!(form(&c, &y, &y), form(&c, &x, &x));
        prop_assert_eq!(simple_reflection(&fd, i, &y).unwrap(), x);
    }
}

#[test]
fn root_sets_match_box_search() {
    for (f, n) in [(Family::A, 3), (Family::A, 5), (Family::D, 4), (Family::D, 5), (Family::D, 6), (Family::E, 6)] {
        let fd = FiniteDiagram::standard(f, n);
        let all = box_roots(fd.cartan.entries(), -3, 3);
        let pos: BTreeSet<Vec<i64>> = positive_roots(&fd).into_iter().collect();
        let boxed_pos: BTreeSet<Vec<i64>> = all.iter().filter(|x| x.iter().all(|&c| c >= 0)).cloned().collect();
        assert_eq!(pos, boxed_pos, "{f}{n}");
        assert_eq!(all.len(), 2 * pos.len(), "{f}{n}");
        // simply laced: the roots form one Weyl orbit
        let mut e1 = vec![0; n];
        e1[0] = 1;
        let orbit: BTreeSet<Vec<i64>> = weyl_orbit(&fd, &e1, DEFAULT_ORBIT_CAP).unwrap().into_iter().collect();
        assert_eq!(orbit, all, "{f}{n}");
    }
}

#[test]
fn e8_marks_and_deletion() {
    let d = classify_affine(&standard_affine_cartan(Family::E, 8)).unwrap();
    let ones = d.mark_one_nodes();
    assert_eq!(ones.len(), 1);
    let fin = delete_node(&d, ones[0]).unwrap();
    assert_eq!(fin.type_name(), "E8");
    let mut marks = d.marks.clone();
    marks.sort();
    assert_eq!(marks, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
}

#[test]
fn non_mark_one_deletion_is_refused() {
    let d = classify_affine(&standard_affine_cartan(Family::D, 4)).unwrap();
    let centre = d.marks.iter().position(|&m| m == 2).unwrap();
    assert!(delete_node(&d, centre).is_err());
}
