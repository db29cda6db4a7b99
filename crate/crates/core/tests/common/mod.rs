//! Shared fixtures and randomized instance generators for integration tests.
#![allow(dead_code)] // each test target uses its own subset

use cheaptalk::info::InformationStructure;
use cheaptalk::model::{compose_posterior, Action, Game, Odds};
use cheaptalk::oracle::binary_with_weight;
use cheaptalk::rational::{rat, Rat};
use rand::prelude::*;

pub fn example1() -> Game {
    Game::new(
        vec![rat(0, 1), rat(2, 5), rat(3, 5), rat(1, 1)],
        vec![
            Action::new("P0", rat(3, 1)),
            Action::new("Pnone", rat(1, 1)),
            Action::new("P1", rat(4, 1)),
        ],
        rat(1, 2),
    )
    .unwrap()
}

pub fn example2() -> Game {
    Game::new(
        vec![rat(0, 1), rat(1, 5), rat(2, 5), rat(3, 5), rat(1, 1)],
        vec![
            Action::new("R0", rat(0, 1)),
            Action::new("P0", rat(3, 1)),
            Action::new("Pnone", rat(1, 1)),
            Action::new("P1", rat(4, 1)),
        ],
        rat(1, 2),
    )
    .unwrap()
}

pub fn example3(x: Rat) -> Game {
    Game::new(
        vec![
            rat(0, 1),
            rat(1, 5),
            rat(2, 5),
            rat(3, 5),
            rat(4, 5),
            rat(1, 1),
        ],
        vec![
            Action::new("R0", rat(0, 1)),
            Action::new("P0", rat(3, 1)),
            Action::new("Pnone", rat(1, 1)),
            Action::new("P1", rat(4, 1)),
            Action::new("R1", x),
        ],
        rat(1, 2),
    )
    .unwrap()
}

/// Random game with up to `max_actions` actions, cutoff denominators
/// dividing 40, distinct integer sender utilities, and an interior prior.
pub fn random_game(rng: &mut StdRng, max_actions: usize) -> Game {
    let l = rng.gen_range(1..=max_actions);
    let mut ks: Vec<i64> = (1..=39).collect();
    ks.shuffle(rng);
    let mut chosen: Vec<i64> = ks[..l - 1].to_vec();
    chosen.sort_unstable();
    let mut cutoffs = vec![rat(0, 1)];
    cutoffs.extend(chosen.iter().map(|&k| rat(k, 40)));
    cutoffs.push(rat(1, 1));
    let mut utils: Vec<i64> = (0..=20).collect();
    utils.shuffle(rng);
    let actions: Vec<Action> = (0..l)
        .map(|i| Action::new(format!("a{}", i + 1), rat(utils[i], 1)))
        .collect();
    let j = rng.gen_range(1..=l);
    let fracs = [rat(1, 3), rat(1, 2), rat(2, 3)];
    let frac = fracs[rng.gen_range(0..3)].clone();
    let prior = &cutoffs[j - 1] + (&cutoffs[j] - &cutoffs[j - 1]) * frac;
    Game::new(cutoffs, actions, prior).expect("generator respects the invariants")
}

/// True when the structure is narrow enough that (i) its odds span is
/// strictly below every interior interval length, (ii) the prior's own
/// composed posteriors stay strictly inside the prior's interval, and
/// (iii) no interval-pair expectation coincides exactly with an endpoint
/// utility (which would create equilibrium families outside the three
/// constructive classes).
pub fn is_test_feasible(game: &Game, f: &InformationStructure) -> bool {
    if Odds::Finite(f.odds_span()) >= game.min_interior_odds_len() {
        return false;
    }
    let j = game.prior_interval();
    let low = compose_posterior(game.prior(), &f.signal(0));
    let high = compose_posterior(game.prior(), &f.signal(f.len() - 1));
    if low.value() <= game.cutoff(j - 1) || high.value() >= game.cutoff(j) {
        return false;
    }
    let f0 = f.conditional(0);
    let f1 = f.conditional(1);
    let l = game.n_actions();
    for c in 1..l {
        let combo0 = &f0[0] * game.utility(c) + &f0[1] * game.utility(c + 1);
        let combo1 = &f1[0] * game.utility(c) + &f1[1] * game.utility(c + 1);
        if combo0 == *game.utility(1) || combo1 == *game.utility(l) {
            return false;
        }
    }
    true
}

/// A binary structure passing [`is_test_feasible`], found by shrinking the
/// support width.
pub fn feasible_binary(game: &Game, rng: &mut StdRng) -> InformationStructure {
    let betas = [rat(1, 2), rat(1, 3), rat(2, 3), rat(1, 4), rat(3, 4)];
    let beta = betas[rng.gen_range(0..betas.len())].clone();
    let mut denom: i64 = 8 << rng.gen_range(0..3);
    for _ in 0..50 {
        let f = binary_with_weight(&beta, &rat(1, denom));
        if is_test_feasible(game, &f) {
            return f;
        }
        denom *= 2;
    }
    panic!("no feasible binary structure found");
}

/// Random valid structure built as a mixture of straddling binaries and an
/// optional uninformative atom; the martingale condition holds by
/// construction of each component.
pub fn random_structure(rng: &mut StdRng) -> InformationStructure {
    let components = rng.gen_range(1..=3);
    let mut atoms: Vec<(Rat, Rat)> = Vec::new();
    let mut comp_weights: Vec<Rat> = Vec::new();
    let denom: i64 = 100;
    for _ in 0..components {
        let da = rng.gen_range(1..=49);
        let db = rng.gen_range(1..=49);
        let a = rat(1, 2) + rat(da, denom);
        let b = rat(1, 2) - rat(db, denom);
        let f = InformationStructure::binary(a, b).unwrap();
        let w = rat(rng.gen_range(1..=5), 1);
        for (s, sw) in f.support().iter().zip(f.weights()) {
            atoms.push((s.clone(), sw * &w));
        }
        comp_weights.push(w);
    }
    if rng.gen_bool(0.3) {
        let w = rat(rng.gen_range(1..=5), 1);
        atoms.push((rat(1, 2), w.clone()));
        comp_weights.push(w);
    }
    let total: Rat = comp_weights.iter().sum();
    atoms.sort_by(|x, y| x.0.cmp(&y.0));
    let mut support: Vec<Rat> = Vec::new();
    let mut weights: Vec<Rat> = Vec::new();
    for (s, w) in atoms {
        if support.last() == Some(&s) {
            let last = weights.last_mut().unwrap();
            *last += &w / &total;
        } else {
            support.push(s);
            weights.push(w / &total);
        }
    }
    InformationStructure::new(support, weights).expect("mixture is valid")
}
