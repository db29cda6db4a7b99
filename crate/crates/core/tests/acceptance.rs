//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use cheaptalk::envelopes::{concave_value, quasiconcave_value};
use cheaptalk::equilibrium::{
    construct_endpoint, construct_interior, construct_interior_general, construct_trivial, verify,
    verify_with_tolerance, ActionPlay, Profile,
};
use cheaptalk::info::InformationStructure;
use cheaptalk::model::{compose_posterior, Belief};
use cheaptalk::oracle::{best_equilibrium_binary, beta_sweep, delta_sweep};
use cheaptalk::rational::{rat, Rat};
use cheaptalk::robustness::{
    analyze, binary_robust_value, enumerate_q, enumerate_t, general_robust_bounds,
    is_optimum_robust, pure_minmax_b, value_b, QuadKind, TripleKind, Verdict,
};
use common::{example1, example2, example3, feasible_binary, random_game, random_structure};
use num_traits::Signed;
use rand::prelude::*;

fn criterion<F: FnOnce() + std::panic::UnwindSafe>(n: usize, desc: &str, body: F) {
    match std::panic::catch_unwind(body) {
        Ok(()) => println!("criterion {n}: PASS - {desc}"),
        Err(e) => {
            println!("criterion {n}: FAIL - {desc}");
            std::panic::resume_unwind(e);
        }
    }
}

fn tol_1e9() -> Rat {
    rat(1, 1_000_000_000)
}

#[test]
fn criterion_1_example1_envelope_values() {
    criterion(1, "example 1 envelope values", || {
        let g = example1();
        assert_eq!(quasiconcave_value(&g), rat(3, 1));
        assert_eq!(concave_value(&g), rat(23, 6));
        let babbling = construct_trivial(&g, &InformationStructure::uninformative());
        assert!(verify(&babbling).is_equilibrium());
        assert_eq!(babbling.ex_ante_value(), rat(1, 1));
    });
}

#[test]
fn criterion_2_example1_robustness_and_endpoint() {
    criterion(
        2,
        "example 1 robustness, endpoint construction, delta sweep",
        || {
            let g = example1();
            assert_eq!(is_optimum_robust(&g), Verdict::EndpointOptimal(1));
            assert_eq!(binary_robust_value(&g), rat(3, 1));
            assert_eq!(binary_robust_value(&g), quasiconcave_value(&g));

            let f = InformationStructure::symmetric_binary(rat(3, 5)).unwrap();
            let t = enumerate_t(&g);
            let p = construct_endpoint(&g, &f, &t[0]).unwrap();
            assert_eq!(p.sender().messages[1], Belief::new(rat(9, 13)).unwrap());
            assert_eq!(p.state_message_value(0, 1), rat(3, 1));
            // Receiver's mixed utility at the pinned cutoff.
            assert_eq!(p.value_at(1, 0), rat(7, 3));
            assert_eq!(p.ex_ante_value(), rat(19, 6));
            assert!(verify(&p).is_equilibrium());

            let deltas = [rat(1, 20), rat(1, 40), rat(1, 80)];
            let sweep = delta_sweep(&g, &rat(1, 2), &deltas);
            assert_eq!(sweep.predicted_limit, rat(3, 1));
            for row in &sweep.rows {
                let v = row.value.clone().expect("feasible delta");
                assert!((v - rat(3, 1)).abs() < rat(20, 1) * &row.delta);
            }
        },
    );
}

#[test]
fn criterion_3_example2_interior_and_oracle() {
    criterion(
        3,
        "example 2 Q/B/Val, interior construction, oracle, beta sweep",
        || {
            let g = example2();
            let q = enumerate_q(&g);
            assert_eq!(q.len(), 1);
            assert_eq!((q[0].kind, q[0].i, q[0].k), (QuadKind::Type1, 1, 3));
            let report = analyze(&g);
            assert_eq!(report.b.rows, vec![(rat(1, 1), rat(3, 1))]);
            assert_eq!(report.val_b.clone().unwrap().0, rat(1, 1));
            assert_eq!(report.v_hat_b, rat(1, 1));
            assert_eq!(report.verdict, Verdict::NotRobust);

            let f = InformationStructure::symmetric_binary(rat(11, 20)).unwrap();
            let p = construct_interior(&g, &f, &q[0]).unwrap();
            assert!(verify(&p).is_equilibrium());
            assert_eq!(p.ex_ante_value(), rat(2, 1));

            let oracle = best_equilibrium_binary(&g, &f).unwrap();
            assert_eq!(oracle.v_star, rat(2, 1));

            let betas: Vec<Rat> = (1..100).map(|k| rat(k, 100)).collect();
            let sweep = beta_sweep(&g, &rat(1, 40), &betas);
            let min = sweep.min_value.unwrap();
            assert!(min >= rat(1, 1));
            assert!(min <= rat(1, 1) + rat(20, 1) * rat(1, 40));
        },
    );
}

#[test]
fn criterion_4_example3_matrix_game() {
    criterion(
        4,
        "example 3 (x=2) quadruples, Val(B), V(B), bounds",
        || {
            let g = example3(rat(2, 1));
            let quads = enumerate_q(&g);
            assert_eq!(quads.len(), 2);
            assert_eq!(
                (quads[0].kind, quads[0].i, quads[0].k),
                (QuadKind::Type1, 1, 3)
            );
            assert_eq!(
                (quads[1].kind, quads[1].i, quads[1].k),
                (QuadKind::Type4, 2, 4)
            );
            let report = analyze(&g);
            assert_eq!(
                report.b.rows,
                vec![(rat(1, 1), rat(3, 1)), (rat(3, 1), rat(2, 1))]
            );
            assert_eq!(value_b(&report.b).unwrap().0, rat(7, 3));
            assert_eq!(pure_minmax_b(&report.b).unwrap(), rat(2, 1));
            // v*_5 = 2 through the corrected type-2 triple.
            let t = enumerate_t(&g);
            assert_eq!(t.len(), 1);
            assert_eq!(t[0].kind, TripleKind::Type2);
            assert_eq!(report.v_star_1, None);
            assert_eq!(report.v_star_l, Some(rat(2, 1)));
            assert_eq!(general_robust_bounds(&g), (rat(2, 1), rat(7, 3)));
        },
    );
}

#[test]
fn criterion_5_oracle_completeness_on_random_games() {
    criterion(
        5,
        "oracle max equals best constructive value on 200 games",
        || {
            let mut rng = StdRng::seed_from_u64(987);
            for trial in 0..200 {
                let g = random_game(&mut rng, 6);
                let f = feasible_binary(&g, &mut rng);
                let oracle = best_equilibrium_binary(&g, &f)
                    .unwrap_or_else(|e| panic!("trial {trial}: oracle infeasible: {e}"));
                let mut best = construct_trivial(&g, &f).ex_ante_value();
                for t in enumerate_t(&g) {
                    let p = construct_endpoint(&g, &f, &t)
                        .unwrap_or_else(|e| panic!("trial {trial}: endpoint failed: {e}"));
                    assert!(
                        verify(&p).is_equilibrium(),
                        "trial {trial}: endpoint not verified"
                    );
                    best = best.max(p.ex_ante_value());
                }
                for q in enumerate_q(&g) {
                    let p = construct_interior(&g, &f, &q)
                        .unwrap_or_else(|e| panic!("trial {trial}: interior failed: {e}"));
                    assert!(
                        verify(&p).is_equilibrium(),
                        "trial {trial}: interior not verified"
                    );
                    best = best.max(p.ex_ante_value());
                }
                assert_eq!(
                    oracle.v_star, best,
                    "trial {trial}: oracle {} vs constructions {} (game {:?}, structure {:?})",
                    oracle.v_star, best, g, f
                );
            }
        },
    );
}

#[test]
fn criterion_6_verdict_consistency_on_random_games() {
    criterion(
        6,
        "robust verdict iff binary robust value reaches v*_0, 200 games",
        || {
            let mut rng = StdRng::seed_from_u64(987);
            for _ in 0..200 {
                let g = random_game(&mut rng, 6);
                let robust = is_optimum_robust(&g) != Verdict::NotRobust;
                let reaches = binary_robust_value(&g) == quasiconcave_value(&g);
                assert_eq!(robust, reaches, "game {g:?}");
            }
        },
    );
}

#[test]
fn criterion_7_verifier_soundness() {
    criterion(
        7,
        "constructions verify; perturbed tie-breaks fail with a witness",
        || {
            let mut profiles: Vec<Profile> = Vec::new();
            let g1 = example1();
            let f1 = InformationStructure::symmetric_binary(rat(3, 5)).unwrap();
            profiles.push(construct_trivial(&g1, &f1));
            profiles.push(construct_endpoint(&g1, &f1, &enumerate_t(&g1)[0]).unwrap());
            let g2 = example2();
            let f2 = InformationStructure::symmetric_binary(rat(11, 20)).unwrap();
            profiles.push(construct_interior(&g2, &f2, &enumerate_q(&g2)[0]).unwrap());
            let g3 = example3(rat(2, 1));
            let f3 = InformationStructure::symmetric_binary(rat(51, 100)).unwrap();
            for t in enumerate_t(&g3) {
                profiles.push(construct_endpoint(&g3, &f3, &t).unwrap());
            }
            for q in enumerate_q(&g3) {
                profiles.push(construct_interior(&g3, &f3, &q).unwrap());
            }
            let mut rng = StdRng::seed_from_u64(5);
            for _ in 0..40 {
                let g = random_game(&mut rng, 6);
                let f = feasible_binary(&g, &mut rng);
                profiles.push(construct_trivial(&g, &f));
                for t in enumerate_t(&g) {
                    profiles.push(construct_endpoint(&g, &f, &t).unwrap());
                }
                for q in enumerate_q(&g) {
                    profiles.push(construct_interior(&g, &f, &q).unwrap());
                }
            }
            // General-structure solver verifies within tolerance.
            let f3pt = InformationStructure::new(
                vec![rat(9, 20), rat(1, 2), rat(11, 20)],
                vec![rat(1, 4), rat(1, 2), rat(1, 4)],
            )
            .unwrap();
            let sol = construct_interior_general(&g2, &f3pt, &enumerate_q(&g2)[0], &tol_1e9(), 200)
                .unwrap();
            assert!(sol.utility_residual < tol_1e9());
            assert!(verify_with_tolerance(&sol.profile, &tol_1e9()).is_equilibrium());
            profiles.push(sol.profile.clone());

            let mut perturbed_count = 0;
            for p in &profiles {
                if p == &sol.profile {
                    assert!(verify_with_tolerance(p, &tol_1e9()).is_equilibrium());
                } else {
                    assert!(verify(p).is_equilibrium(), "exact verification failed");
                }
                // Perturb each tie-break by 1/100 and expect a witnessed failure.
                for (m, row) in p.plays().iter().enumerate() {
                    for (s, play) in row.iter().enumerate() {
                        let ActionPlay::Mix { cutoff, hi_prob } = play else {
                            continue;
                        };
                        if p.n_messages() < 2 {
                            continue;
                        }
                        let bumped = if *hi_prob <= rat(99, 100) {
                            hi_prob + rat(1, 100)
                        } else {
                            hi_prob - rat(1, 100)
                        };
                        let mut plays = p.plays().to_vec();
                        plays[m][s] = ActionPlay::Mix {
                            cutoff: *cutoff,
                            hi_prob: bumped,
                        };
                        let alt = Profile::new(
                            p.game().clone(),
                            p.structure().clone(),
                            p.sender().clone(),
                            plays,
                        )
                        .unwrap();
                        let report = verify(&alt);
                        assert!(!report.sender_ic_ok, "perturbation must break indifference");
                        assert!(report.worst_sender_ic.is_some(), "witness required");
                        perturbed_count += 1;
                    }
                }
            }
            assert!(perturbed_count > 0, "expected tie-breaks to perturb");
        },
    );
}

#[test]
fn criterion_8_structural_identities() {
    criterion(
        8,
        "Val >= V, value chain, FOSD, composition identities",
        || {
            let mut rng = StdRng::seed_from_u64(64);
            let mut games = vec![example1(), example2(), example3(rat(2, 1))];
            for _ in 0..100 {
                games.push(random_game(&mut rng, 6));
            }
            for g in &games {
                let report = analyze(g);
                if let (Some((val, _)), Some(pure)) = (&report.val_b, &report.pure_v_b) {
                    assert!(pure <= val);
                }
                let vj = g.utility(g.prior_interval());
                assert!(*vj <= report.v_hat_b && report.v_hat_b <= report.v_star_0);
            }
            for _ in 0..1000 {
                let f = random_structure(&mut rng);
                assert!(f.fosd_check());
            }
            // Composition identity and monotonicity on a rational sample.
            let half = Belief::new(rat(1, 2)).unwrap();
            let sample: Vec<Belief> = (1..40).map(|k| Belief::new(rat(k, 40)).unwrap()).collect();
            for m in &sample {
                assert_eq!(compose_posterior(m, &half), m.clone());
                assert_eq!(compose_posterior(&half, m), m.clone());
                for s in &sample {
                    for t in &sample {
                        if t > s {
                            assert!(compose_posterior(m, t) > compose_posterior(m, s));
                            assert!(compose_posterior(t, m) > compose_posterior(s, m));
                        }
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_9_general_solver() {
    criterion(
        9,
        "general-structure solver residuals and binary agreement",
        || {
            let g = example2();
            let quad = enumerate_q(&g)[0];
            let tol = tol_1e9();
            let f3pt = InformationStructure::new(
                vec![rat(9, 20), rat(1, 2), rat(11, 20)],
                vec![rat(1, 4), rat(1, 2), rat(1, 4)],
            )
            .unwrap();
            let sol = construct_interior_general(&g, &f3pt, &quad, &tol, 200).unwrap();
            assert!(sol.iterations <= 200);
            assert!(sol.d_residual < tol);
            assert!(sol.utility_residual < tol);
            // Per-state indifference: state 0 exact, state 1 within tolerance.
            let p = &sol.profile;
            assert_eq!(p.state_message_value(0, 0), p.state_message_value(0, 1));
            let gap1 = (p.state_message_value(1, 0) - p.state_message_value(1, 1)).abs();
            assert!(gap1 < tol);

            // On binary input the solver agrees with the exact construction.
            let fb = InformationStructure::symmetric_binary(rat(11, 20)).unwrap();
            let exact = construct_interior(&g, &fb, &quad).unwrap();
            let general = construct_interior_general(&g, &fb, &quad, &tol, 200).unwrap();
            for m in 0..2 {
                let gap = (general.profile.sender().messages[m].value()
                    - exact.sender().messages[m].value())
                .abs();
                assert!(gap < tol);
            }
            assert!((general.profile.ex_ante_value() - exact.ex_ante_value()).abs() < tol);
        },
    );
}
