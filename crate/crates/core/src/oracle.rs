//! Ground-truth enumeration of binary-structure equilibria, plus delta- and
//! beta-sweep experiments probing the vanishing-information limits.
//!
//! For a binary structure, a two-message equilibrium is pinned down by the
//! two message positions and the receiver's tie-breaks at cutoff posteriors.
//! Sweeping a message position, its pair of composed posteriors crosses
//! cutoffs only at finitely many critical positions, so every equilibrium
//! lives in one of finitely many placement cases: each message either sits
//! at a critical position (some posterior exactly on a cutoff) or floats in
//! an open range where both posteriors are interior. Per case, the
//! equilibrium conditions are affine in the tie-breaks and are solved
//! exactly; solution families are maximized over their vertices.

use crate::equilibrium::{
    bayes_mixing, construct_trivial, verify, ActionPlay, Profile, SenderStrategy,
};
use crate::info::InformationStructure;
use crate::model::{Belief, Game, Location, Odds};
use crate::rational::{fmt_rat, rat, Rat};
use crate::robustness::{
    achievable_endpoints, binary_robust_value, build_b, enumerate_q, enumerate_t,
};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle requires a binary information structure")]
    NotBinary,
    #[error(
        "infeasible: odds span {span} exceeds the smallest interior interval length {min_len}"
    )]
    Infeasible { span: String, min_len: String },
}

/// Structural class of a verified equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EquilibriumClass {
    Trivial,
    Endpoint,
    Interior,
    Other,
}

impl std::fmt::Display for EquilibriumClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EquilibriumClass::Trivial => "trivial",
            EquilibriumClass::Endpoint => "endpoint",
            EquilibriumClass::Interior => "interior",
            EquilibriumClass::Other => "other",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub profile: Profile,
    pub value: Rat,
    pub class: EquilibriumClass,
    /// Some tie-break sits at 0 or 1: the supremum is attained only through
    /// a boundary mixing weight.
    pub boundary_tie_break: bool,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// All verified equilibria found, best value first (stable within ties).
    pub census: Vec<CensusEntry>,
    /// `v*_F`: the sender's maximal equilibrium value.
    pub v_star: Rat,
}

/// Affine form `c + coefs . r` over the tie-break unknowns.
#[derive(Debug, Clone)]
struct Affine {
    c: Rat,
    coefs: Vec<Rat>,
}

impl Affine {
    fn constant(c: Rat, n: usize) -> Self {
        Affine {
            c,
            coefs: vec![Rat::zero(); n],
        }
    }

    fn eval(&self, r: &[Rat]) -> Rat {
        let mut v = self.c.clone();
        for (coef, x) in self.coefs.iter().zip(r) {
            v += coef * x;
        }
        v
    }

    fn sub(&self, other: &Affine) -> Affine {
        Affine {
            c: &self.c - &other.c,
            coefs: self
                .coefs
                .iter()
                .zip(&other.coefs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn scale_add(mut self, w: &Rat, other: &Affine) -> Affine {
        self.c += w * &other.c;
        for (a, b) in self.coefs.iter_mut().zip(&other.coefs) {
            *a += w * b;
        }
        self
    }
}

/// Maximizes an affine objective over `{r in [0,1]^n : eq(r) = 0 for all eqs}`
/// by exact vertex enumeration. Returns the maximum and an attaining point.
fn maximize_affine(n: usize, eqs: &[Affine], objective: &Affine) -> Option<(Rat, Vec<Rat>)> {
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    let mut consider = |point: Vec<Rat>| {
        if point.iter().any(|x| x.is_negative() || *x > Rat::one()) {
            return;
        }
        if eqs.iter().any(|e| !e.eval(&point).is_zero()) {
            return;
        }
        let v = objective.eval(&point);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, point));
        }
    };
    // Patterns: each unknown fixed to 0, fixed to 1, or free; vertices of
    // the feasible polytope have at most eqs.len() free unknowns.
    let mut pattern = vec![0u8; n]; // 0 -> fix 0, 1 -> fix 1, 2 -> free
    loop {
        let free: Vec<usize> = (0..n).filter(|&i| pattern[i] == 2).collect();
        if free.len() <= eqs.len().min(2) {
            let mut base: Vec<Rat> = pattern
                .iter()
                .map(|&p| if p == 1 { Rat::one() } else { Rat::zero() })
                .collect();
            match free.len() {
                0 => consider(base),
                1 => {
                    let i = free[0];
                    // First equation with a nonzero coefficient pins r_i.
                    if let Some(eq) = eqs.iter().find(|e| !e.coefs[i].is_zero()) {
                        let mut at_zero = base.clone();
                        at_zero[i] = Rat::zero();
                        let residual = eq.eval(&at_zero);
                        base[i] = -residual / &eq.coefs[i];
                        consider(base);
                    }
                }
                2 if eqs.len() == 2 => {
                    let (i, j) = (free[0], free[1]);
                    let mut at_zero = base.clone();
                    at_zero[i] = Rat::zero();
                    at_zero[j] = Rat::zero();
                    let (a11, a12, c1) =
                        (&eqs[0].coefs[i], &eqs[0].coefs[j], eqs[0].eval(&at_zero));
                    let (a21, a22, c2) =
                        (&eqs[1].coefs[i], &eqs[1].coefs[j], eqs[1].eval(&at_zero));
                    let det = a11 * a22 - a12 * a21;
                    if !det.is_zero() {
                        base[i] = (a12 * &c2 - a22 * &c1) / &det;
                        base[j] = (a21 * &c1 - a11 * &c2) / &det;
                        consider(base);
                    }
                }
                _ => {}
            }
        }
        // Next pattern in base 3.
        let mut idx = 0;
        loop {
            if idx == n {
                return best;
            }
            if pattern[idx] < 2 {
                pattern[idx] += 1;
                break;
            }
            pattern[idx] = 0;
            idx += 1;
        }
    }
}

/// Where a per-signal composed posterior sits for one message placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SignalLoc {
    /// Interior of interval `i`: the receiver's action is forced.
    Int(usize),
    /// Exactly at cutoff `c`: tie-break is the given local unknown.
    Cut(usize, usize),
}

#[derive(Debug, Clone)]
enum MsgPosition {
    AtZero,
    AtOne,
    Fixed(Belief),
    /// Open belief range on which the interior placements are constant.
    Range {
        lo: Belief,
        hi: Belief,
    },
}

/// One placement case for a single message.
#[derive(Debug, Clone)]
struct MsgCase {
    position: MsgPosition,
    /// Per signal, where the composed posterior lands. Empty for
    /// fully-revealing messages.
    locs: Vec<SignalLoc>,
    n_unknowns: usize,
}

impl MsgCase {
    /// Per-signal sender value as an affine form over this message's
    /// unknowns, shifted by `offset` into the global unknown vector.
    fn signal_values(
        &self,
        game: &Game,
        n_signals: usize,
        offset: usize,
        total: usize,
    ) -> Vec<Affine> {
        match self.position {
            MsgPosition::AtZero => {
                vec![Affine::constant(game.utility(1).clone(), total); n_signals]
            }
            MsgPosition::AtOne => {
                vec![Affine::constant(game.utility(game.n_actions()).clone(), total); n_signals]
            }
            _ => self
                .locs
                .iter()
                .map(|loc| match loc {
                    SignalLoc::Int(i) => Affine::constant(game.utility(*i).clone(), total),
                    SignalLoc::Cut(c, var) => {
                        let mut a = Affine::constant(game.utility(*c).clone(), total);
                        a.coefs[offset + var] = game.utility(c + 1) - game.utility(*c);
                        a
                    }
                })
                .collect(),
        }
    }

    /// Receiver plays for a concrete tie-break assignment.
    fn plays(&self, game: &Game, n_signals: usize, offset: usize, r: &[Rat]) -> Vec<ActionPlay> {
        match self.position {
            MsgPosition::AtZero => vec![ActionPlay::Pure(1); n_signals],
            MsgPosition::AtOne => vec![ActionPlay::Pure(game.n_actions()); n_signals],
            _ => self
                .locs
                .iter()
                .map(|loc| match loc {
                    SignalLoc::Int(i) => ActionPlay::Pure(*i),
                    SignalLoc::Cut(c, var) => ActionPlay::Mix {
                        cutoff: *c,
                        hi_prob: r[offset + var].clone(),
                    },
                })
                .collect(),
        }
    }

    /// Concrete message posterior for the given role (`low` = below prior),
    /// or `None` when the placement cannot take that role.
    fn representative(&self, prior: &Rat, low_role: bool) -> Option<Belief> {
        match &self.position {
            MsgPosition::AtZero => low_role.then(|| Belief::new(Rat::zero()).unwrap()),
            MsgPosition::AtOne => (!low_role).then(|| Belief::new(Rat::one()).unwrap()),
            MsgPosition::Fixed(b) => {
                let ok = if low_role {
                    b.value() < prior
                } else {
                    b.value() > prior
                };
                ok.then(|| b.clone())
            }
            MsgPosition::Range { lo, hi } => {
                let (lo, hi) = (lo.value(), hi.value());
                let (a, b) = if low_role {
                    (lo.clone(), hi.min(prior).clone())
                } else {
                    (lo.max(prior).clone(), hi.clone())
                };
                if a >= b {
                    return None;
                }
                Some(Belief::new((a + b) / rat(2, 1)).unwrap())
            }
        }
    }
}

/// All placement cases for one message of a binary structure.
fn message_cases(game: &Game, structure: &InformationStructure) -> Vec<MsgCase> {
    let n_signals = structure.len();
    let mut criticals: Vec<Rat> = Vec::new();
    for t in 1..game.n_actions() {
        let cut_odds = Belief::new(game.cutoff(t).clone())
            .unwrap()
            .odds()
            .finite()
            .unwrap()
            .clone();
        for s in 0..n_signals {
            let sig_odds = structure.signal(s).odds().finite().unwrap().clone();
            criticals.push(&cut_odds / &sig_odds);
        }
    }
    criticals.sort();
    criticals.dedup();
    let critical_beliefs: Vec<Belief> = criticals
        .iter()
        .map(|m| Odds::Finite(m.clone()).to_belief())
        .collect();

    let case_at = |position: MsgPosition, probe: &Belief| -> MsgCase {
        let mut n_unknowns = 0;
        let locs = (0..n_signals)
            .map(|s| {
                let composed = crate::model::compose_posterior(probe, &structure.signal(s));
                match game.locate(&composed) {
                    Location::Interior(i) => SignalLoc::Int(i),
                    Location::Cutoff(c) => {
                        let var = n_unknowns;
                        n_unknowns += 1;
                        SignalLoc::Cut(c, var)
                    }
                    Location::Endpoint(_) => unreachable!("interior message, interior signal"),
                }
            })
            .collect();
        MsgCase {
            position,
            locs,
            n_unknowns,
        }
    };

    let mut cases = Vec::new();
    // Open ranges between consecutive critical positions.
    let one_belief = Belief::new(Rat::one()).unwrap();
    let mut lo = Belief::new(Rat::zero()).unwrap();
    for b in critical_beliefs.iter().chain(std::iter::once(&one_belief)) {
        if lo.value() < b.value() {
            let mid = Belief::new((lo.value() + b.value()) / rat(2, 1)).unwrap();
            cases.push(case_at(
                MsgPosition::Range {
                    lo: lo.clone(),
                    hi: b.clone(),
                },
                &mid,
            ));
        }
        lo = b.clone();
    }
    // Pinned positions.
    for b in &critical_beliefs {
        cases.push(case_at(MsgPosition::Fixed(b.clone()), b));
    }
    cases
}

/// Exhaustive two-message (plus babbling) equilibrium search for a binary
/// structure. Requires the structure's odds span to be at most the smallest
/// interior interval length; at exact equality the coincidence placements
/// (both posteriors of one message on cutoffs) are included.
pub fn best_equilibrium_binary(
    game: &Game,
    structure: &InformationStructure,
) -> Result<OracleResult, OracleError> {
    if !structure.is_binary() {
        return Err(OracleError::NotBinary);
    }
    let span = structure.odds_span();
    let min_len = game.min_interior_odds_len();
    if Odds::Finite(span.clone()) > min_len {
        return Err(OracleError::Infeasible {
            span: fmt_rat(&span),
            min_len: match &min_len {
                Odds::Finite(r) => fmt_rat(r),
                Odds::Infinity => "inf".into(),
            },
        });
    }

    let n_signals = structure.len();
    let prior = game.prior().value();
    let f0 = structure.conditional(0);
    let f1 = structure.conditional(1);
    let p_signal = structure.signal_probability(prior);
    let quads = enumerate_q(game);

    let mut census: Vec<CensusEntry> = Vec::new();
    let mut push_entry = |profile: Profile, class: EquilibriumClass| {
        if !verify(&profile).is_equilibrium() {
            return;
        }
        if census.iter().any(|e| e.profile == profile) {
            return;
        }
        census.push(CensusEntry {
            value: profile.ex_ante_value(),
            boundary_tie_break: profile.has_boundary_tie_break(),
            profile,
            class,
        });
    };

    // Babbling, with sender-best tie-breaks.
    push_entry(
        construct_trivial(game, structure),
        EquilibriumClass::Trivial,
    );

    let mut cases = message_cases(game, structure);
    cases.insert(
        0,
        MsgCase {
            position: MsgPosition::AtZero,
            locs: Vec::new(),
            n_unknowns: 0,
        },
    );
    cases.push(MsgCase {
        position: MsgPosition::AtOne,
        locs: Vec::new(),
        n_unknowns: 0,
    });

    for low in &cases {
        if matches!(low.position, MsgPosition::AtOne) {
            continue;
        }
        for high in &cases {
            if matches!(high.position, MsgPosition::AtZero) {
                continue;
            }
            let total = low.n_unknowns + high.n_unknowns;
            let (Some(m_l), Some(m_h)) = (
                low.representative(prior, true),
                high.representative(prior, false),
            ) else {
                continue;
            };
            let vals_l = low.signal_values(game, n_signals, 0, total);
            let vals_h = high.signal_values(game, n_signals, low.n_unknowns, total);

            let low_revealing = matches!(low.position, MsgPosition::AtZero);
            let high_revealing = matches!(high.position, MsgPosition::AtOne);
            let mut eqs: Vec<Affine> = Vec::new();
            let objective = match (low_revealing, high_revealing) {
                (false, false) => {
                    // Both interior: the sender mixes in both states, so the
                    // conditional value must depend only on the realized
                    // signal (per-signal indifference).
                    for s in 0..n_signals {
                        eqs.push(vals_l[s].sub(&vals_h[s]));
                    }
                    let mut obj = Affine::constant(Rat::zero(), total);
                    for s in 0..n_signals {
                        obj = obj.scale_add(&p_signal[s], &vals_l[s]);
                    }
                    obj
                }
                (true, false) => {
                    // Low message reveals state 0: state-0 indifference
                    // against the revealed value u(a_1).
                    let mut e = Affine::constant(-game.utility(1).clone(), total);
                    for s in 0..n_signals {
                        e = e.scale_add(&f0[s], &vals_h[s]);
                    }
                    eqs.push(e);
                    let obj = Affine::constant((Rat::one() - prior) * game.utility(1), total);
                    let mut e1 = Affine::constant(Rat::zero(), total);
                    for s in 0..n_signals {
                        e1 = e1.scale_add(&f1[s], &vals_h[s]);
                    }
                    obj.scale_add(prior, &e1)
                }
                (false, true) => {
                    let l = game.n_actions();
                    let mut e = Affine::constant(-game.utility(l).clone(), total);
                    for s in 0..n_signals {
                        e = e.scale_add(&f1[s], &vals_l[s]);
                    }
                    eqs.push(e);
                    let obj = Affine::constant(prior * game.utility(l), total);
                    let mut e0 = Affine::constant(Rat::zero(), total);
                    for s in 0..n_signals {
                        e0 = e0.scale_add(&f0[s], &vals_l[s]);
                    }
                    obj.scale_add(&(Rat::one() - prior), &e0)
                }
                (true, true) => {
                    // Both fully revealing is never an equilibrium under
                    // genericity; skip.
                    continue;
                }
            };

            let Some((_, r)) = maximize_affine(total, &eqs, &objective) else {
                continue;
            };
            let low_plays = low.plays(game, n_signals, 0, &r);
            let high_plays = high.plays(game, n_signals, low.n_unknowns, &r);
            let mix = bayes_mixing(prior, m_l.value(), m_h.value());
            let sender = SenderStrategy {
                messages: vec![m_l, m_h],
                mix,
            };
            let Ok(profile) = Profile::new(
                game.clone(),
                structure.clone(),
                sender,
                vec![low_plays, high_plays],
            ) else {
                continue;
            };
            let class = if low_revealing || high_revealing {
                EquilibriumClass::Endpoint
            } else {
                let mut actions: Vec<usize> = profile
                    .plays()
                    .iter()
                    .flatten()
                    .flat_map(|p| p.support())
                    .collect();
                actions.sort();
                actions.dedup();
                let matches_quad = quads.iter().any(|q| {
                    let (a, b, c, d) = q.action_indices();
                    actions == vec![a, b, c, d]
                });
                if matches_quad {
                    EquilibriumClass::Interior
                } else {
                    EquilibriumClass::Other
                }
            };
            push_entry(profile, class);
        }
    }

    census.sort_by(|a, b| b.value.cmp(&a.value));
    let v_star = census[0].value.clone();
    Ok(OracleResult { census, v_star })
}

/// Binary structure with weight `beta` on the high posterior and support
/// width pinned so that `max |s - 1/2| = delta`.
pub fn binary_with_weight(beta: &Rat, delta: &Rat) -> InformationStructure {
    assert!(
        *beta > Rat::zero() && *beta < Rat::one(),
        "beta must be interior"
    );
    assert!(
        *delta > Rat::zero() && *delta < rat(1, 2),
        "delta must lie in (0, 1/2)"
    );
    let one = Rat::one();
    let (delta_a, delta_b) = if *beta <= rat(1, 2) {
        (delta.clone(), delta * beta / (&one - beta))
    } else {
        (delta * (&one - beta) / beta, delta.clone())
    };
    let a = rat(1, 2) + delta_a;
    let b = rat(1, 2) - delta_b;
    InformationStructure::binary(a, b).expect("straddles 1/2 by construction")
}

/// One sweep observation.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub delta: Rat,
    pub beta: Rat,
    /// `v*_F` for the row's structure; `None` when the oracle is infeasible
    /// at this span.
    pub value: Option<Rat>,
    pub class: Option<EquilibriumClass>,
    pub boundary_tie_break: bool,
}

fn sweep_row(game: &Game, beta: &Rat, delta: &Rat) -> SweepRow {
    let f = binary_with_weight(beta, delta);
    match best_equilibrium_binary(game, &f) {
        Ok(res) => SweepRow {
            delta: delta.clone(),
            beta: beta.clone(),
            value: Some(res.v_star.clone()),
            class: Some(res.census[0].class),
            boundary_tie_break: res.census[0].boundary_tie_break,
        },
        Err(_) => SweepRow {
            delta: delta.clone(),
            beta: beta.clone(),
            value: None,
            class: None,
            boundary_tie_break: false,
        },
    }
}

#[derive(Debug, Clone)]
pub struct DeltaSweep {
    pub rows: Vec<SweepRow>,
    /// Predicted vanishing-information limit for this beta.
    pub predicted_limit: Rat,
}

/// Predicted limit of `v*_F` along a fixed-beta, shrinking-delta family:
/// `max(u(a_j), v*_1, v*_l, max_l (1-beta) B_{l,1} + beta B_{l,2})`,
/// oriented so the high signal carries probability `beta` in the limit.
pub fn predicted_limit(game: &Game, beta: &Rat) -> Rat {
    let triples = enumerate_t(game);
    let (v1, vl) = achievable_endpoints(game, &triples);
    let b = build_b(game, &enumerate_q(game));
    let line = b
        .rows
        .iter()
        .map(|(c1, c2)| c1 * (Rat::one() - beta) + c2 * beta)
        .max();
    let mut best = game.utility(game.prior_interval()).clone();
    for v in [v1, vl, line].into_iter().flatten() {
        if v > best {
            best = v;
        }
    }
    best
}

/// Runs the oracle along a list of deltas at fixed beta.
pub fn delta_sweep(game: &Game, beta: &Rat, deltas: &[Rat]) -> DeltaSweep {
    DeltaSweep {
        rows: deltas.iter().map(|d| sweep_row(game, beta, d)).collect(),
        predicted_limit: predicted_limit(game, beta),
    }
}

#[derive(Debug, Clone)]
pub struct BetaSweep {
    pub rows: Vec<SweepRow>,
    /// Minimum observed `v*_F` across feasible rows.
    pub min_value: Option<Rat>,
    /// The closed-form `v^_b` this minimum estimates as delta shrinks.
    pub predicted: Rat,
}

/// Runs the oracle along a grid of betas at fixed delta; the row minimum
/// estimates the binary robust value.
pub fn beta_sweep(game: &Game, delta: &Rat, betas: &[Rat]) -> BetaSweep {
    let rows: Vec<SweepRow> = betas.iter().map(|b| sweep_row(game, b, delta)).collect();
    let min_value = rows.iter().filter_map(|r| r.value.clone()).min();
    BetaSweep {
        rows,
        min_value,
        predicted: binary_robust_value(game),
    }
}
