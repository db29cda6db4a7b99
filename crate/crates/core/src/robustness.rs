//! Robustness analysis: the triple set `T`, quadruple set `Q`, the zero-sum
//! matrix `B` with its mixed value `Val(B)` and pure min-max value `V(B)`,
//! the binary robust value, bounds for general information structures, and
//! the robustness verdict for the sender-optimal equilibrium.

use crate::envelopes::{is_trivially_supported, quasiconcave_value};
use crate::model::Game;
use crate::rational::{fmt_rat, Rat};
use num_traits::{One, Zero};
use std::fmt;

/// Action triples supporting an equilibrium in which one message fully
/// reveals a state.
///
/// `Type1` is `(a_1, a_i, a_{i+1})` with `j <= i < l` and
/// `u(a_i) < u(a_1) < u(a_{i+1})`; `Type2` is the mirror
/// `(a_{i-1}, a_i, a_l)` with `1 < i <= j` and `u(a_i) < u(a_l) < u(a_{i-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TripleKind {
    Type1,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndpointTriple {
    pub kind: TripleKind,
    /// The pivot index `i` in the definitions above.
    pub i: usize,
}

impl EndpointTriple {
    /// The three action indices, ordered by index.
    pub fn action_indices(&self, game: &Game) -> (usize, usize, usize) {
        match self.kind {
            TripleKind::Type1 => (1, self.i, self.i + 1),
            TripleKind::Type2 => (self.i - 1, self.i, game.n_actions()),
        }
    }
}

impl fmt::Display for EndpointTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} i={}", self.kind, self.i)
    }
}

/// Sender-utility orderings that let a quadruple `(a_i, a_{i+1}, a_k, a_{k+1})`
/// support an equilibrium with both messages interior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuadKind {
    Type1,
    Type2,
    Type3,
    Type4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteriorQuadruple {
    pub kind: QuadKind,
    pub i: usize,
    pub k: usize,
}

impl InteriorQuadruple {
    pub fn action_indices(&self) -> (usize, usize, usize, usize) {
        (self.i, self.i + 1, self.k, self.k + 1)
    }
}

impl fmt::Display for InteriorQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} ({},{},{},{})",
            self.kind,
            self.i,
            self.i + 1,
            self.k,
            self.k + 1
        )
    }
}

fn quad_kind(game: &Game, i: usize, k: usize) -> Option<QuadKind> {
    let (ui, ui1, uk, uk1) = (
        game.utility(i),
        game.utility(i + 1),
        game.utility(k),
        game.utility(k + 1),
    );
    if ui < uk && uk < ui1 && ui1 < uk1 {
        Some(QuadKind::Type1)
    } else if uk1 < ui1 && ui1 < uk && uk < ui {
        Some(QuadKind::Type2)
    } else if uk < ui && ui < uk1 && uk1 < ui1 {
        Some(QuadKind::Type3)
    } else if ui1 < uk1 && uk1 < ui && ui < uk {
        Some(QuadKind::Type4)
    } else {
        None
    }
}

/// All endpoint triples, ordered by `(kind, i)`.
pub fn enumerate_t(game: &Game) -> Vec<EndpointTriple> {
    let l = game.n_actions();
    let j = game.prior_interval();
    let mut out = Vec::new();
    for i in j..l {
        if game.utility(i) < game.utility(1) && game.utility(1) < game.utility(i + 1) {
            out.push(EndpointTriple {
                kind: TripleKind::Type1,
                i,
            });
        }
    }
    for i in 2..=j {
        if game.utility(i) < game.utility(l) && game.utility(l) < game.utility(i - 1) {
            out.push(EndpointTriple {
                kind: TripleKind::Type2,
                i,
            });
        }
    }
    out
}

/// All interior quadruples, ordered by `(i, k)`.
pub fn enumerate_q(game: &Game) -> Vec<InteriorQuadruple> {
    let l = game.n_actions();
    let j = game.prior_interval();
    let mut out = Vec::new();
    for i in 1..j {
        for k in j.max(i + 2)..l {
            if let Some(kind) = quad_kind(game, i, k) {
                out.push(InteriorQuadruple { kind, i, k });
            }
        }
    }
    out
}

/// Per-quadruple payoff pairs for the zero-sum game.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BMatrix {
    pub rows: Vec<(Rat, Rat)>,
}

impl BMatrix {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Row for types 1/2: `(u(a_k), u(a_{i+1}))`; for types 3/4:
/// `(u(a_i), u(a_{k+1}))`.
pub fn build_b(game: &Game, quads: &[InteriorQuadruple]) -> BMatrix {
    let rows = quads
        .iter()
        .map(|q| match q.kind {
            QuadKind::Type1 | QuadKind::Type2 => {
                (game.utility(q.k).clone(), game.utility(q.i + 1).clone())
            }
            QuadKind::Type3 | QuadKind::Type4 => {
                (game.utility(q.i).clone(), game.utility(q.k + 1).clone())
            }
        })
        .collect();
    BMatrix { rows }
}

/// Mixed value of the zero-sum game plus a minimizing column mix `beta*`.
///
/// Row `l` as a function of the column weight `beta` on the first column is
/// the line `beta * B_{l,1} + (1-beta) * B_{l,2}`; the value is the minimum
/// over `beta in [0,1]` of the upper envelope, attained at `beta = 0`,
/// `beta = 1`, or a pairwise line intersection.
pub fn value_b(b: &BMatrix) -> Option<(Rat, Rat)> {
    if b.rows.is_empty() {
        return None;
    }
    let eval_max = |beta: &Rat| -> Rat {
        b.rows
            .iter()
            .map(|(c1, c2)| c1 * beta + c2 * (Rat::one() - beta))
            .max()
            .expect("nonempty")
    };
    let mut candidates = vec![Rat::zero(), Rat::one()];
    for (idx, (a1, a2)) in b.rows.iter().enumerate() {
        for (b1, b2) in &b.rows[idx + 1..] {
            let denom = (a1 - a2) - (b1 - b2);
            if denom.is_zero() {
                continue;
            }
            let beta = (b2 - a2) / denom;
            if beta > Rat::zero() && beta < Rat::one() {
                candidates.push(beta);
            }
        }
    }
    candidates
        .into_iter()
        .map(|beta| (eval_max(&beta), beta))
        .min()
}

/// Pure min-max value `V(B) = max_l min(B_{l,1}, B_{l,2})`.
pub fn pure_minmax_b(b: &BMatrix) -> Option<Rat> {
    b.rows.iter().map(|(c1, c2)| c1.min(c2).clone()).max()
}

/// Endpoint utilities `(v*_1, v*_l)`: achievable iff `T` contains a triple of
/// the corresponding type. `None` encodes "not achievable" (the -infinity of
/// the max-fold).
pub fn achievable_endpoints(game: &Game, triples: &[EndpointTriple]) -> (Option<Rat>, Option<Rat>) {
    let v1 = triples
        .iter()
        .any(|t| t.kind == TripleKind::Type1)
        .then(|| game.utility(1).clone());
    let vl = triples
        .iter()
        .any(|t| t.kind == TripleKind::Type2)
        .then(|| game.utility(game.n_actions()).clone());
    (v1, vl)
}

fn max_fold(base: Rat, optional: &[Option<&Rat>]) -> Rat {
    optional
        .iter()
        .flatten()
        .fold(base, |acc, v| if **v > acc { (*v).clone() } else { acc })
}

/// `v^_b`: the sender's maximal robust utility under binary infinitesimal
/// information. Maximum of `v*_1`, `v*_l`, `Val(B)`, and `u(a_j)`.
pub fn binary_robust_value(game: &Game) -> Rat {
    let triples = enumerate_t(game);
    let (v1, vl) = achievable_endpoints(game, &triples);
    let b = build_b(game, &enumerate_q(game));
    let val = value_b(&b).map(|(v, _)| v);
    max_fold(
        game.utility(game.prior_interval()).clone(),
        &[v1.as_ref(), vl.as_ref(), val.as_ref()],
    )
}

/// Bounds for `v^` under general information structures:
/// `max{v*_1, v*_l, V(B), u(a_j)} <= v^ <= v^_b`.
pub fn general_robust_bounds(game: &Game) -> (Rat, Rat) {
    let triples = enumerate_t(game);
    let (v1, vl) = achievable_endpoints(game, &triples);
    let b = build_b(game, &enumerate_q(game));
    let pure = pure_minmax_b(&b);
    let lower = max_fold(
        game.utility(game.prior_interval()).clone(),
        &[v1.as_ref(), vl.as_ref(), pure.as_ref()],
    );
    (lower, binary_robust_value(game))
}

/// Outcome of the robustness dichotomy for the sender-optimal equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    TriviallySupported,
    /// `v*_0` equals the utility of this endpoint action (1 or `l`).
    EndpointOptimal(usize),
    NotRobust,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::TriviallySupported => write!(f, "TriviallySupported"),
            Verdict::EndpointOptimal(i) => write!(f, "EndpointOptimal({i})"),
            Verdict::NotRobust => write!(f, "NotRobust"),
        }
    }
}

/// The sender-optimal equilibrium value survives infinitesimal receiver
/// information iff it is trivially supported or equals an endpoint utility.
pub fn is_optimum_robust(game: &Game) -> Verdict {
    if is_trivially_supported(game) {
        return Verdict::TriviallySupported;
    }
    let q = quasiconcave_value(game);
    if q == *game.utility(1) {
        Verdict::EndpointOptimal(1)
    } else if q == *game.utility(game.n_actions()) {
        Verdict::EndpointOptimal(game.n_actions())
    } else {
        Verdict::NotRobust
    }
}

/// Everything the analysis produces for one game.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub v_prior: Rat,
    pub v_star_0: Rat,
    pub concave: Rat,
    pub trivially_supported: bool,
    pub triples: Vec<EndpointTriple>,
    pub quads: Vec<InteriorQuadruple>,
    pub b: BMatrix,
    /// `(Val(B), beta*)`, absent when `Q` is empty.
    pub val_b: Option<(Rat, Rat)>,
    pub pure_v_b: Option<Rat>,
    pub v_star_1: Option<Rat>,
    pub v_star_l: Option<Rat>,
    pub v_hat_b: Rat,
    pub v_hat_lower: Rat,
    pub v_hat_upper: Rat,
    pub verdict: Verdict,
}

/// Runs the full analysis. Deterministic.
pub fn analyze(game: &Game) -> RobustnessReport {
    let triples = enumerate_t(game);
    let quads = enumerate_q(game);
    let b = build_b(game, &quads);
    let val_b = value_b(&b);
    let pure_v_b = pure_minmax_b(&b);
    let (v_star_1, v_star_l) = achievable_endpoints(game, &triples);
    let v_hat_b = binary_robust_value(game);
    let (v_hat_lower, v_hat_upper) = general_robust_bounds(game);
    RobustnessReport {
        v_prior: game.utility(game.prior_interval()).clone(),
        v_star_0: quasiconcave_value(game),
        concave: crate::envelopes::concave_value(game),
        trivially_supported: is_trivially_supported(game),
        triples,
        quads,
        b,
        val_b,
        pure_v_b,
        v_star_1,
        v_star_l,
        v_hat_b,
        v_hat_lower,
        v_hat_upper,
        verdict: is_optimum_robust(game),
    }
}

impl RobustnessReport {
    /// Plain-text rendering used by the CLI.
    pub fn render_text(&self, game: &Game) -> String {
        let mut s = String::new();
        let fmt_opt = |v: &Option<Rat>| match v {
            Some(r) => fmt_rat(r),
            None => "not achievable".to_string(),
        };
        s.push_str(&format!(
            "game: {} actions, prior {} in I_{}\n",
            game.n_actions(),
            game.prior(),
            game.prior_interval()
        ));
        s.push_str(&format!(
            "cutoffs: [{}]\n",
            game.cutoffs()
                .iter()
                .map(fmt_rat)
                .collect::<Vec<_>>()
                .join(", ")
        ));
        s.push_str(&format!(
            "actions: {}\n",
            game.actions()
                .iter()
                .enumerate()
                .map(|(t, a)| format!("a{}={} (u={})", t + 1, a.label, fmt_rat(&a.sender_utility)))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        s.push_str(&format!("v(pi) = {}\n", fmt_rat(&self.v_prior)));
        s.push_str(&format!(
            "v*_0 = {} (trivially supported: {})\n",
            fmt_rat(&self.v_star_0),
            if self.trivially_supported {
                "yes"
            } else {
                "no"
            }
        ));
        s.push_str(&format!("concave value = {}\n", fmt_rat(&self.concave)));
        s.push_str(&format!(
            "T = [{}]\n",
            self.triples
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        ));
        s.push_str(&format!(
            "Q = [{}]\n",
            self.quads
                .iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        ));
        s.push_str(&format!(
            "B = [{}]\n",
            self.b
                .rows
                .iter()
                .map(|(c1, c2)| format!("({}, {})", fmt_rat(c1), fmt_rat(c2)))
                .collect::<Vec<_>>()
                .join("; ")
        ));
        match &self.val_b {
            Some((v, beta)) => s.push_str(&format!(
                "Val(B) = {} at beta* = {}\n",
                fmt_rat(v),
                fmt_rat(beta)
            )),
            None => s.push_str("Val(B) = not defined (Q empty)\n"),
        }
        match &self.pure_v_b {
            Some(v) => s.push_str(&format!("V(B) = {}\n", fmt_rat(v))),
            None => s.push_str("V(B) = not defined (Q empty)\n"),
        }
        s.push_str(&format!("v*_1 = {}\n", fmt_opt(&self.v_star_1)));
        s.push_str(&format!("v*_l = {}\n", fmt_opt(&self.v_star_l)));
        s.push_str(&format!("v^_b = {}\n", fmt_rat(&self.v_hat_b)));
        s.push_str(&format!(
            "v^ bounds = [{}, {}]\n",
            fmt_rat(&self.v_hat_lower),
            fmt_rat(&self.v_hat_upper)
        ));
        s.push_str(&format!("verdict: {}\n", self.verdict));
        s
    }
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

    fn example3(x: Rat) -> Game {
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

    #[test]
    fn t_sets() {
        let t1 = enumerate_t(&example1());
        assert_eq!(
            t1,
            vec![EndpointTriple {
                kind: TripleKind::Type1,
                i: 2
            }]
        );
        assert_eq!(t1[0].action_indices(&example1()), (1, 2, 3));
        assert!(enumerate_t(&example2()).is_empty());
        let t3 = enumerate_t(&example3(rat(2, 1)));
        assert_eq!(
            t3,
            vec![EndpointTriple {
                kind: TripleKind::Type2,
                i: 3
            }]
        );
        assert_eq!(t3[0].action_indices(&example3(rat(2, 1))), (2, 3, 5));
    }

    #[test]
    fn q_sets() {
        assert!(enumerate_q(&example1()).is_empty());
        let q2 = enumerate_q(&example2());
        assert_eq!(
            q2,
            vec![InteriorQuadruple {
                kind: QuadKind::Type1,
                i: 1,
                k: 3
            }]
        );
        let q3 = enumerate_q(&example3(rat(2, 1)));
        assert_eq!(
            q3,
            vec![
                InteriorQuadruple {
                    kind: QuadKind::Type1,
                    i: 1,
                    k: 3
                },
                InteriorQuadruple {
                    kind: QuadKind::Type4,
                    i: 2,
                    k: 4
                },
            ]
        );
    }

    #[test]
    fn b_matrices() {
        let g2 = example2();
        let b2 = build_b(&g2, &enumerate_q(&g2));
        assert_eq!(b2.rows, vec![(rat(1, 1), rat(3, 1))]);
        let g3 = example3(rat(2, 1));
        let b3 = build_b(&g3, &enumerate_q(&g3));
        assert_eq!(
            b3.rows,
            vec![(rat(1, 1), rat(3, 1)), (rat(3, 1), rat(2, 1))]
        );
        assert!(build_b(&g2, &[]).is_empty());
    }

    #[test]
    fn value_b_examples() {
        let single = BMatrix {
            rows: vec![(rat(1, 1), rat(3, 1))],
        };
        assert_eq!(value_b(&single).unwrap().0, rat(1, 1));
        // Val = (9-x)/(5-x) at beta* = (3-x)/(5-x); x = 2 gives 7/3 at 1/3.
        let two = BMatrix {
            rows: vec![(rat(1, 1), rat(3, 1)), (rat(3, 1), rat(2, 1))],
        };
        let (v, beta) = value_b(&two).unwrap();
        assert_eq!(v, rat(7, 3));
        assert_eq!(beta, rat(1, 3));
        let constant = BMatrix {
            rows: vec![(rat(5, 2), rat(5, 2))],
        };
        assert_eq!(value_b(&constant).unwrap().0, rat(5, 2));
        assert_eq!(value_b(&BMatrix::default()), None);
    }

    #[test]
    fn pure_minmax_examples() {
        let two = BMatrix {
            rows: vec![(rat(1, 1), rat(3, 1)), (rat(3, 1), rat(2, 1))],
        };
        assert_eq!(pure_minmax_b(&two).unwrap(), rat(2, 1));
        let single = BMatrix {
            rows: vec![(rat(1, 1), rat(3, 1))],
        };
        assert_eq!(pure_minmax_b(&single).unwrap(), rat(1, 1));
        assert_eq!(pure_minmax_b(&BMatrix::default()), None);
    }

    #[test]
    fn endpoint_achievability() {
        let g1 = example1();
        let (v1, vl) = achievable_endpoints(&g1, &enumerate_t(&g1));
        assert_eq!(v1, Some(rat(3, 1)));
        assert_eq!(vl, None);
        let g2 = example2();
        assert_eq!(achievable_endpoints(&g2, &enumerate_t(&g2)), (None, None));
        let g3 = example3(rat(2, 1));
        let (v1, vl) = achievable_endpoints(&g3, &enumerate_t(&g3));
        assert_eq!(v1, None);
        assert_eq!(vl, Some(rat(2, 1)));
    }

    #[test]
    fn robust_values_and_bounds() {
        assert_eq!(binary_robust_value(&example1()), rat(3, 1));
        assert_eq!(binary_robust_value(&example2()), rat(1, 1));
        assert_eq!(binary_robust_value(&example3(rat(2, 1))), rat(7, 3));
        assert_eq!(general_robust_bounds(&example1()), (rat(3, 1), rat(3, 1)));
        assert_eq!(general_robust_bounds(&example2()), (rat(1, 1), rat(1, 1)));
        assert_eq!(
            general_robust_bounds(&example3(rat(2, 1))),
            (rat(2, 1), rat(7, 3))
        );
        // Symbolic bounds (x, (9-x)/(5-x)) spot-checked on a few x values.
        for x in [rat(3, 2), rat(5, 2), rat(11, 5)] {
            let g = example3(x.clone());
            let nine_minus = rat(9, 1) - &x;
            let five_minus = rat(5, 1) - &x;
            assert_eq!(general_robust_bounds(&g), (x, nine_minus / five_minus));
        }
    }

    #[test]
    fn verdicts() {
        assert_eq!(is_optimum_robust(&example1()), Verdict::EndpointOptimal(1));
        assert_eq!(is_optimum_robust(&example2()), Verdict::NotRobust);
        let single = Game::new(
            vec![rat(0, 1), rat(1, 1)],
            vec![Action::new("a", rat(5, 1))],
            rat(1, 3),
        )
        .unwrap();
        assert_eq!(is_optimum_robust(&single), Verdict::TriviallySupported);
    }

    #[test]
    fn analyze_example2() {
        let r = analyze(&example2());
        assert_eq!(r.quads.len(), 1);
        assert_eq!(r.b.rows, vec![(rat(1, 1), rat(3, 1))]);
        assert_eq!(r.v_hat_b, rat(1, 1));
        assert_eq!(r.verdict, Verdict::NotRobust);
        let text = r.render_text(&example2());
        assert!(text.contains("v^_b = 1"));
        assert!(text.contains("verdict: NotRobust"));
    }
}
