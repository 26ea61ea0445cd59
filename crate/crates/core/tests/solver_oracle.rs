use std::time::Instant;

use mergetree::critical::residual_critical_values;
use mergetree::oracle::oracle_decide;
use mergetree::random::{random_pair, random_partial_interleaving, rng};
use mergetree::solver::{decide, residual_distance};

#[test]
fn decide_matches_oracle_on_random_instances() {
    let start = Instant::now();
    let mut calls = 0;
    for seed in 0..200 {
        let mut r = rng(seed);
        let pair = random_pair(&mut r, 5);
        let p = random_partial_interleaving(&mut r, &pair, 3);
        let values = residual_critical_values(&pair, &p);
        let mut first_feasible = None;
        for delta in &values {
            let fast = decide(&pair, &p, delta).unwrap();
            let slow = oracle_decide(&pair, &p, delta).unwrap();
            calls += 1;
            assert_eq!(fast.is_some(), slow, "seed {seed} delta {delta}");
            if let Some(w) = &fast {
                assert!(w.verify_complete(&pair).is_ok());
                assert!(w.extends(&pair, &p));
                assert!(w.residual_shift(&pair, &p) <= *delta);
                if first_feasible.is_none() {
                    first_feasible = Some(delta.clone());
                }
            } else {
                assert!(first_feasible.is_none(), "seed {seed}: feasibility is not monotone");
            }
        }
        let (d, _) = residual_distance(&pair, &p).unwrap();
        assert_eq!(Some(d), first_feasible);
    }
    eprintln!("{calls} decide/oracle calls in {:?}", start.elapsed());
}
