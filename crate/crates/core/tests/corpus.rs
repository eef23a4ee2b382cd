use paritylab::corpus::{gen_automaton, gen_game, gen_guided_pair, gen_lasso, gen_tree, GenSpec, Parity};
use paritylab::format::write_game;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn same_seed_same_bytes(seed in any::<u64>(), size in 1usize..12) {
        let spec = GenSpec::new(seed, size);
        prop_assert_eq!(write_game(&gen_game(&spec).unwrap()), write_game(&gen_game(&spec).unwrap()));
        prop_assert_eq!(
            write_game(&gen_lasso(&spec, Parity::Even).unwrap()),
            write_game(&gen_lasso(&spec, Parity::Even).unwrap())
        );
        prop_assert_eq!(gen_automaton(&spec).unwrap().to_json(), gen_automaton(&spec).unwrap().to_json());
        prop_assert_eq!(gen_tree(&spec).unwrap().to_json(), gen_tree(&spec).unwrap().to_json());
    }

    #[test]
    fn pairs_are_reproducible_and_total(seed in any::<u64>()) {
        let spec = GenSpec::new(seed, 2);
        let (x, y) = (gen_guided_pair(&spec).unwrap(), gen_guided_pair(&spec).unwrap());
        prop_assert_eq!(x.a.to_json(), y.a.to_json());
        prop_assert_eq!(x.b.to_json(), y.b.to_json());
        prop_assert_eq!(x.g.to_json(&x.a, &x.b), y.g.to_json(&y.a, &y.b));
        prop_assert!(x.g.missing(&x.a, &x.b).is_empty());
        prop_assert!(x.a.states().len() * x.b.states().len() <= 6);
    }
}
