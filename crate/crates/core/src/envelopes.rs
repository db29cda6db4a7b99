//! Indirect utility and its quasiconcave / concave envelopes.
//!
//! The quasiconcave value at the prior is the sender-optimal cheap-talk value
//! with an uninformed receiver; the concave value is the commitment
//! (persuasion) benchmark. Both are exact rationals.

use crate::model::{Belief, Game, Location};
use crate::rational::Rat;

/// Sender utilities available at a belief: a singleton at interior beliefs,
/// a pair at interior cutoffs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilitySet {
    values: Vec<Rat>,
}

impl UtilitySet {
    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn min(&self) -> &Rat {
        self.values.iter().min().expect("nonempty")
    }

    pub fn max(&self) -> &Rat {
        self.values.iter().max().expect("nonempty")
    }
}

/// The set `v(b)` of sender utilities when the receiver best-responds to `b`.
pub fn indirect_utility(game: &Game, belief: &Belief) -> UtilitySet {
    let values = match game.locate(belief) {
        Location::Interior(i) => vec![game.utility(i).clone()],
        Location::Cutoff(i) => vec![game.utility(i).clone(), game.utility(i + 1).clone()],
        Location::Endpoint(0) => vec![game.utility(1).clone()],
        Location::Endpoint(_) => vec![game.utility(game.n_actions()).clone()],
    };
    UtilitySet { values }
}

fn one_sided_max(game: &Game, lo: usize, hi: usize) -> Rat {
    (lo..=hi)
        .map(|i| game.utility(i).clone())
        .max()
        .expect("nonempty range")
}

/// Quasiconcave envelope evaluated with the given interval playing the role
/// of the prior's interval: `min(max_{i<=t} u_i, max_{i>=t} u_i)`.
fn quasiconcave_for_interval(game: &Game, t: usize) -> Rat {
    let l = game.n_actions();
    let left = one_sided_max(game, 1, t);
    let right = one_sided_max(game, t, l);
    left.min(right)
}

/// `v*_0` at the prior: `min(max_{b <= prior} v, max_{b >= prior} v)`.
pub fn quasiconcave_value(game: &Game) -> Rat {
    quasiconcave_for_interval(game, game.prior_interval())
}

/// Quasiconcave envelope at an arbitrary belief. At an interior cutoff the
/// larger of the two one-sided values is reported.
pub fn quasiconcave_at(game: &Game, belief: &Belief) -> Rat {
    match game.locate(belief) {
        Location::Interior(i) => quasiconcave_for_interval(game, i),
        Location::Cutoff(i) => {
            quasiconcave_for_interval(game, i).max(quasiconcave_for_interval(game, i + 1))
        }
        Location::Endpoint(0) => quasiconcave_for_interval(game, 1),
        Location::Endpoint(_) => quasiconcave_for_interval(game, game.n_actions()),
    }
}

/// True iff the no-communication equilibrium already attains `v*_0`.
pub fn is_trivially_supported(game: &Game) -> bool {
    quasiconcave_value(game) == *game.utility(game.prior_interval())
}

/// Graph points of the indirect utility: both interval endpoints carry each
/// action's utility.
fn graph_points(game: &Game) -> Vec<(Rat, Rat)> {
    let mut pts = Vec::with_capacity(2 * game.n_actions());
    for i in 1..=game.n_actions() {
        pts.push((game.cutoff(i - 1).clone(), game.utility(i).clone()));
        pts.push((game.cutoff(i).clone(), game.utility(i).clone()));
    }
    pts
}

/// Upper convex hull of a point set, as hull vertices sorted by x.
fn upper_hull(points: &[(Rat, Rat)]) -> Vec<(Rat, Rat)> {
    let mut pts: Vec<(Rat, Rat)> = points.to_vec();
    pts.sort();
    // For equal x keep only the highest point.
    pts.dedup_by(|b, a| {
        if a.0 == b.0 {
            if b.1 > a.1 {
                a.1 = b.1.clone();
            }
            true
        } else {
            false
        }
    });
    let mut hull: Vec<(Rat, Rat)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // Pop b unless it turns strictly downward (clockwise) at b.
            let cross = (&b.0 - &a.0) * (&p.1 - &a.1) - (&b.1 - &a.1) * (&p.0 - &a.0);
            if cross < Rat::from_integer(0.into()) {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn eval_hull(hull: &[(Rat, Rat)], x: &Rat) -> Rat {
    if hull.len() == 1 {
        return hull[0].1.clone();
    }
    for w in hull.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if *x >= a.0 && *x <= b.0 {
            return &a.1 + (&b.1 - &a.1) * (x - &a.0) / (&b.0 - &a.0);
        }
    }
    unreachable!("x within hull span")
}

/// Least concave majorant of the indirect utility, at `belief`.
pub fn concave_at(game: &Game, belief: &Belief) -> Rat {
    let hull = upper_hull(&graph_points(game));
    eval_hull(&hull, belief.value())
}

/// The Bayesian-persuasion benchmark: concave envelope at the prior.
pub fn concave_value(game: &Game) -> Rat {
    concave_at(game, game.prior())
}

/// One sampled row of the envelope curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRow {
    pub lambda: Rat,
    pub v_min: Rat,
    pub v_max: Rat,
    pub qcav: Rat,
    pub cav: Rat,
}

/// Samples indirect utility and both envelopes on a uniform grid of
/// `grid_size` points joined with all cutoffs.
pub fn envelope_curves(game: &Game, grid_size: usize) -> Vec<CurveRow> {
    assert!(grid_size >= 2, "grid_size must be at least 2");
    let denom = Rat::from_integer((grid_size as i64 - 1).into());
    let mut xs: Vec<Rat> = (0..grid_size)
        .map(|t| Rat::from_integer((t as i64).into()) / &denom)
        .collect();
    xs.extend(game.cutoffs().iter().cloned());
    xs.sort();
    xs.dedup();
    let hull = upper_hull(&graph_points(game));
    xs.into_iter()
        .map(|x| {
            let b = Belief::new(x.clone()).expect("grid point in [0,1]");
            let v = indirect_utility(game, &b);
            CurveRow {
                qcav: quasiconcave_at(game, &b),
                cav: eval_hull(&hull, &x),
                v_min: v.min().clone(),
                v_max: v.max().clone(),
                lambda: x,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Action;
    use crate::rational::rat;

    fn example1() -> Game {
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

    fn example2() -> Game {
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

    fn single_action() -> Game {
        Game::new(
            vec![rat(0, 1), rat(1, 1)],
            vec![Action::new("a", rat(5, 1))],
            rat(1, 3),
        )
        .unwrap()
    }

    #[test]
    fn indirect_utility_examples() {
        let g = example1();
        let b = |n, d| Belief::new(rat(n, d)).unwrap();
        assert_eq!(indirect_utility(&g, &b(1, 2)).values(), &[rat(1, 1)]);
        assert_eq!(
            indirect_utility(&g, &b(2, 5)).values(),
            &[rat(3, 1), rat(1, 1)]
        );
        assert_eq!(indirect_utility(&g, &b(0, 1)).values(), &[rat(3, 1)]);
    }

    #[test]
    fn quasiconcave_values() {
        assert_eq!(quasiconcave_value(&example1()), rat(3, 1));
        assert_eq!(quasiconcave_value(&example2()), rat(3, 1));
        assert_eq!(quasiconcave_value(&single_action()), rat(5, 1));
    }

    #[test]
    fn trivial_support() {
        assert!(!is_trivially_supported(&example1()));
        assert!(is_trivially_supported(&single_action()));
        // Sender utility maximal at the prior's action.
        let g = Game::new(
            vec![rat(0, 1), rat(2, 5), rat(3, 5), rat(1, 1)],
            vec![
                Action::new("a", rat(1, 1)),
                Action::new("b", rat(9, 1)),
                Action::new("c", rat(4, 1)),
            ],
            rat(1, 2),
        )
        .unwrap();
        assert!(is_trivially_supported(&g));
    }

    /// Independent concavification oracle: best split of the prior into two
    /// posteriors chosen among the graph points.
    fn two_posterior_oracle(game: &Game) -> Rat {
        let pts = graph_points(game);
        let prior = game.prior().value().clone();
        let mut best = indirect_utility(game, game.prior()).max().clone();
        for (x1, u1) in &pts {
            for (x2, u2) in &pts {
                if x1 <= &prior && &prior <= x2 && x1 < x2 {
                    let w = (&prior - x1) / (x2 - x1);
                    let val = u1 * (Rat::from_integer(1.into()) - &w) + u2 * &w;
                    if val > best {
                        best = val;
                    }
                }
            }
        }
        best
    }

    #[test]
    fn concave_values_match_oracle() {
        assert_eq!(concave_value(&example1()), rat(23, 6));
        assert_eq!(two_posterior_oracle(&example1()), rat(23, 6));
        assert_eq!(concave_value(&example2()), rat(15, 4));
        assert_eq!(two_posterior_oracle(&example2()), rat(15, 4));
        assert_eq!(concave_value(&single_action()), rat(5, 1));
    }

    #[test]
    fn curves_rows() {
        let rows = envelope_curves(&example1(), 3);
        let at_half = rows.iter().find(|r| r.lambda == rat(1, 2)).unwrap();
        assert_eq!(at_half.qcav, rat(3, 1));
        assert_eq!(at_half.cav, rat(23, 6));
        let at_zero = &rows[0];
        assert_eq!(at_zero.lambda, rat(0, 1));
        for v in [&at_zero.v_min, &at_zero.v_max, &at_zero.qcav, &at_zero.cav] {
            assert_eq!(*v, rat(3, 1));
        }
        // Cutoffs always included.
        assert!(rows.iter().any(|r| r.lambda == rat(2, 5)));

        let rows2 = envelope_curves(&example2(), 11);
        let at_tenth = rows2.iter().find(|r| r.lambda == rat(1, 10)).unwrap();
        assert_eq!(at_tenth.qcav, rat(0, 1));
    }

    #[test]
    fn envelope_domination_chain() {
        for g in [example1(), example2(), single_action()] {
            let vj = g.utility(g.prior_interval()).clone();
            let q = quasiconcave_value(&g);
            let c = concave_value(&g);
            assert!(vj <= q && q <= c);
        }
    }

    #[test]
    fn qcav_is_ordinal() {
        // Applying a strictly increasing map to all utilities maps v*_0 the
        // same way: here u -> u^3 + u.
        let g = example2();
        let mapped = Game::new(
            g.cutoffs().to_vec(),
            g.actions()
                .iter()
                .map(|a| {
                    let u = &a.sender_utility;
                    Action::new(a.label.clone(), u * u * u + u)
                })
                .collect(),
            g.prior().value().clone(),
        )
        .unwrap();
        let q = quasiconcave_value(&g);
        assert_eq!(quasiconcave_value(&mapped), &q * &q * &q + &q);
    }
}
