use skewgentle::algebra::Opposite;
use skewgentle::corpus::{corpus, GenConfig};
use skewgentle::engine::{realize, DEFAULT_DEGREE_CAP};
use skewgentle::gentle::{check_skew_gentle, SkewGentleTriple};
use skewgentle::homology::{gorenstein_check, selfinjective_check, stratifying_check};
use skewgentle::module::Module;
use skewgentle::morita::peirce;
use skewgentle::resolution::{ext_dims, projective_dimension, resolve, verify_resolution, ProjDim};
use skewgentle::split::{split_triple, split_triple_swapped};
use skewgentle::{dsl, Field, PrimeField, Rationals};

const EXAMPLE: &str = "vertices 1 2 3 4; arrow a: 1->2; arrow b: 2->3; arrow c: 3->4; rel a*b; special 1 2;";

fn triple(text: &str) -> SkewGentleTriple {
    check_skew_gentle(&dsl::parse(text).unwrap()).unwrap().triple().unwrap()
}

fn small_corpus(count: usize) -> Vec<SkewGentleTriple> {
    corpus(&GenConfig { seed: 1234, count, ..GenConfig::default() }).unwrap()
}

/// `(-1)^k` times the normal form of `q`, compared with that of `p`.
fn twin_sign<F: Field>(field: &F, k: usize) -> bool {
    let t = triple(EXAMPLE);
    let sq = split_triple(&t);
    let alg = realize(&sq.spec, field, DEFAULT_DEGREE_CAP).unwrap();
    let arrow = |n: &str| sq.spec.arrow_index(n).unwrap();
    let p = alg.normal_form(&[arrow("a__p_m"), arrow("b__m_o")]);
    let q = alg.normal_form(&[arrow("a__p_p"), arrow("b__p_o")]);
    assert!(!p.is_empty() && !q.is_empty());
    let sign = if k % 2 == 0 { field.one() } else { field.neg(&field.one()) };
    let q: Vec<_> = q.into_iter().map(|(i, c)| (i, field.mul(&sign, &c))).collect();
    p == q
}

#[test]
fn sign_law_counts_interior_vertices() {
    // One interior vertex and two arrows.
    assert!(twin_sign(&Rationals, 1));
    assert!(!twin_sign(&Rationals, 2));
    assert!(twin_sign(&PrimeField::new(3).unwrap(), 1));
    assert!(!twin_sign(&PrimeField::new(3).unwrap(), 2));
    // Signs are invisible in characteristic 2.
    assert!(twin_sign(&PrimeField::new(2).unwrap(), 1));
    assert!(twin_sign(&PrimeField::new(2).unwrap(), 2));
}

#[test]
fn swapping_the_copies_changes_nothing_measurable() {
    for t in small_corpus(60).iter().filter(|t| !t.special_vertices.is_empty()) {
        let a = split_triple(t);
        let b = split_triple_swapped(t);
        let alg_a = realize(&a.spec, &Rationals, DEFAULT_DEGREE_CAP).unwrap();
        let alg_b = realize(&b.spec, &Rationals, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(alg_a.dimension(), alg_b.dimension());
        assert_eq!(alg_a.graded_dimensions(), alg_b.graded_dimensions());
        let pa = peirce(&alg_a, &a).unwrap();
        let pb = peirce(&alg_b, &b).unwrap();
        assert_eq!(pa.dims(), pb.dims());
        assert_eq!(stratifying_check(&pa, 3).unwrap().stratifying, stratifying_check(&pb, 3).unwrap().stratifying);
        let ga = gorenstein_check(&alg_a, 20).unwrap();
        let gb = gorenstein_check(&alg_b, 20).unwrap();
        assert_eq!((ga.dims.id_left, ga.dims.id_right), (gb.dims.id_left, gb.dims.id_right));
    }
}

#[test]
fn ext_does_not_depend_on_the_resolution() {
    for t in small_corpus(40) {
        let sq = split_triple(&t);
        let alg = realize(&sq.spec, &PrimeField::new(3).unwrap(), DEFAULT_DEGREE_CAP).unwrap();
        if alg.dimension() > 16 {
            continue;
        }
        let regular = Module::regular(&alg);
        for v in 0..alg.vertex_count() {
            let s = Module::simple(&alg, v);
            let minimal = resolve(&alg, &s, 4, true);
            let free = resolve(&alg, &s, 4, false);
            verify_resolution(&alg, &s, &minimal).unwrap();
            verify_resolution(&alg, &s, &free).unwrap();
            assert_eq!(ext_dims(&alg, &minimal, &regular, 2).unwrap(), ext_dims(&alg, &free, &regular, 2).unwrap());
            assert_eq!(ext_dims(&alg, &minimal, &s, 2).unwrap(), ext_dims(&alg, &free, &s, 2).unwrap());
        }
    }
}

#[test]
fn example_invariants() {
    let t = triple(EXAMPLE);
    let sq = split_triple(&t);
    let alg = realize(&sq.spec, &Rationals, DEFAULT_DEGREE_CAP).unwrap();
    assert_eq!(alg.dimension(), 19);
    let g = gorenstein_check(&alg, 20).unwrap();
    assert_eq!((g.dims.id_left, g.dims.id_right), (ProjDim::Finite(2), ProjDim::Finite(2)));
    assert!(g.dims.duality_agrees);
    assert!(!selfinjective_check(&alg, Some(&t)).direct);
    let d = peirce(&alg, &sq).unwrap().dims();
    assert_eq!((d.b, d.m, d.n, d.c), (10, 1, 5, 3));
}

#[test]
fn radical_square_zero_cycles() {
    for n in 2..=6 {
        let mut text = String::from("vertices");
        for i in 1..=n {
            text += &format!(" {i}");
        }
        text += ";";
        for i in 1..=n {
            text += &format!(" arrow x{i}: {i}->{};", i % n + 1);
        }
        for i in 1..=n {
            text += &format!(" rel x{i}*x{};", i % n + 1);
        }
        let spec = dsl::parse(&text).unwrap();
        let alg = realize(&spec, &Rationals, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(alg.dimension(), 2 * n);
        let g = gorenstein_check(&alg, 20).unwrap();
        assert_eq!((g.dims.id_left, g.dims.id_right), (ProjDim::Finite(0), ProjDim::Finite(0)));
        for v in 0..n {
            let s = Module::simple(&alg, v);
            assert_eq!(projective_dimension(&alg, &s, 6), ProjDim::AtLeast(7));
            assert_eq!(projective_dimension(&Opposite(&alg), &Module::simple(&Opposite(&alg), v), 6), ProjDim::AtLeast(7));
        }
    }
}
