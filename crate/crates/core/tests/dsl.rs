use proptest::prelude::*;
use skewgentle::corpus::{corpus_instance, GenConfig};
use skewgentle::dsl::{parse, serialize};

fn config(seed: u64, vertices: usize, arrows: usize) -> GenConfig {
    GenConfig { seed, n_vertices: 1..=vertices, n_arrows: 0..=arrows, count: 1, ..GenConfig::default() }
}

proptest! {
    #[test]
    fn generated_triples_round_trip(seed in any::<u64>(), index in 0usize..50, vertices in 1usize..7, arrows in 0usize..9) {
        let triple = corpus_instance(&config(seed, vertices, arrows), index).unwrap();
        let text = serialize(&triple.base);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &triple.base);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn parse_never_panics(text in "[a-z0-9 ;:>*+/#\\-\\n]{0,80}") {
        let _ = parse(&text);
    }
}

#[test]
fn comments_fractions_and_binomials() {
    let spec = parse(
        "# square\nvertices 1 2 3 4;\narrow a: 1->2; arrow b: 2->4;\narrow c: 1->3; arrow d: 3->4;\nrel a*b - 1/2*c*d; # commutes up to a scalar\n",
    )
    .unwrap();
    assert_eq!(spec.relations.len(), 1);
    assert_eq!(spec.relations[0].terms.len(), 2);
    assert_eq!(parse(&serialize(&spec)).unwrap(), spec);
}

#[test]
fn errors_point_at_the_problem() {
    for bad in [
        "vertices 1; arrow a: 1->2;",
        "vertices 1 1;",
        "vertices 1 2; arrow a: 1->2; arrow a: 1->2;",
        "vertices 1 2; arrow a: 1->2; rel a*a;",
        "vertices 1; special 2;",
        "vertices 1 2; arrow 7: 1->2;",
        "vertices 1 2; arrow a: 1->",
    ] {
        assert!(parse(bad).is_err(), "accepted {bad:?}");
    }
}
