use gamecheck::global::check_global;
use gamecheck::local::check_local;
use gamecheck::oracle::{holds_initially, random_formula_with_root, random_game, SHAPES};
use gamecheck::strategy::Strategy;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn engines_agree_with_the_oracle_on_random_games() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..40 {
        let g = random_game(&mut rng, 6, 2, 3, 2);
        for shape in SHAPES {
            let phi = random_formula_with_root(&mut rng, shape, 3, 2, 2);
            let truth = holds_initially(&g, &phi).unwrap();
            assert_eq!(check_global(&g, &phi).unwrap().verdict, truth, "global {phi:?}");
            for s in Strategy::ALL {
                for w in [1, 4] {
                    let out = check_local(&g, &phi, s, w).unwrap();
                    assert_eq!(out.verdict, truth, "local {s} W={w} {phi:?}");
                    assert_eq!(out.stats.downward_transitions, 0);
                }
            }
        }
    }
}
