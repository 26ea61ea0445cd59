use std::time::Instant;

use mergetree::locally_correct::{build_locally_correct, check_locally_correct, CheckMode};
use mergetree::random::{random_pair, rng};
use mergetree::solver::interleaving_distance;

#[test]
fn pipeline_on_random_instances() {
    let start = Instant::now();
    let mut checked = 0;
    for seed in 0..200 {
        let mut r = rng(seed);
        let pair = random_pair(&mut r, 5);
        let (w, trace) = build_locally_correct(&pair).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let (d, _) = interleaving_distance(&pair).unwrap();
        assert_eq!(w.shift(), d, "seed {seed}");
        if w.len() <= 10 {
            checked += 1;
            assert_eq!(check_locally_correct(&pair, &w, &CheckMode::Exhaustive).unwrap(), None, "seed {seed}");
        }
        let _ = trace;
    }
    eprintln!("checked {checked} in {:?}", start.elapsed());
}
