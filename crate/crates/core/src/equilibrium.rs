//! Equilibrium profiles, the exact verifier, and the constructive
//! procedures: babbling, endpoint-supported, interior-supported (binary
//! structures, exact), and interior-supported for general finite structures
//! (bisection on the two-equalities continuity argument).
//!
//! Tie-break convention: at a cutoff `x_c` the receiver plays the
//! higher-indexed action `a_{c+1}` with probability `r` and `a_c` with
//! probability `1 - r`. All equations are normalized to this convention.

use crate::info::InformationStructure;
use crate::model::{compose_posterior, Belief, Game, Location, Odds};
use crate::rational::{fmt_rat, Rat};
use crate::robustness::{EndpointTriple, InteriorQuadruple, QuadKind, TripleKind};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("profile needs 1 or 2 messages, sorted and distinct")]
    BadMessages,
    #[error("mixing is not a probability distribution over messages")]
    MixingNotDistribution,
    #[error("receiver table shape does not match messages x signals")]
    ShapeMismatch,
    #[error("receiver play references action or cutoff out of range")]
    PlayOutOfRange,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("construction infeasible: {0}")]
    Infeasible(String),
    #[error(
        "bisection did not converge within {iterations} iterations (best residual {residual})"
    )]
    NotConverged { residual: String, iterations: usize },
    #[error("construction requires a binary information structure")]
    RequiresBinary,
}

/// Receiver behavior at one (message, signal) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionPlay {
    /// Pure action, 1-based index.
    Pure(usize),
    /// At cutoff `x_cutoff`: probability `hi_prob` on `a_{cutoff+1}`.
    Mix { cutoff: usize, hi_prob: Rat },
}

impl ActionPlay {
    /// Actions played with positive probability.
    pub fn support(&self) -> Vec<usize> {
        match self {
            ActionPlay::Pure(k) => vec![*k],
            ActionPlay::Mix { cutoff, hi_prob } => {
                if hi_prob.is_zero() {
                    vec![*cutoff]
                } else if hi_prob.is_one() {
                    vec![*cutoff + 1]
                } else {
                    vec![*cutoff, *cutoff + 1]
                }
            }
        }
    }

    /// Expected sender utility of this play.
    pub fn utility(&self, game: &Game) -> Rat {
        match self {
            ActionPlay::Pure(k) => game.utility(*k).clone(),
            ActionPlay::Mix { cutoff, hi_prob } => {
                game.utility(*cutoff) * (Rat::one() - hi_prob) + game.utility(*cutoff + 1) * hi_prob
            }
        }
    }
}

/// Message posteriors plus the per-state mixing over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenderStrategy {
    pub messages: Vec<Belief>,
    /// `mix[state][msg]` = probability of sending message `msg` in `state`.
    pub mix: [Vec<Rat>; 2],
}

/// A complete strategy profile for one game and information structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    game: Game,
    structure: InformationStructure,
    sender: SenderStrategy,
    /// `plays[msg][signal]`.
    plays: Vec<Vec<ActionPlay>>,
}

impl Profile {
    pub fn new(
        game: Game,
        structure: InformationStructure,
        sender: SenderStrategy,
        plays: Vec<Vec<ActionPlay>>,
    ) -> Result<Self, ProfileError> {
        let n_msg = sender.messages.len();
        if n_msg == 0 || n_msg > 2 {
            return Err(ProfileError::BadMessages);
        }
        if sender
            .messages
            .windows(2)
            .any(|w| w[0].value() >= w[1].value())
        {
            return Err(ProfileError::BadMessages);
        }
        for state in 0..2 {
            let row = &sender.mix[state];
            if row.len() != n_msg {
                return Err(ProfileError::ShapeMismatch);
            }
            let total: Rat = row.iter().sum();
            if row.iter().any(|p| p.is_negative()) || !total.is_one() {
                return Err(ProfileError::MixingNotDistribution);
            }
        }
        if plays.len() != n_msg || plays.iter().any(|row| row.len() != structure.len()) {
            return Err(ProfileError::ShapeMismatch);
        }
        let l = game.n_actions();
        for play in plays.iter().flatten() {
            let ok = match play {
                ActionPlay::Pure(k) => (1..=l).contains(k),
                ActionPlay::Mix { cutoff, hi_prob } => {
                    (1..l).contains(cutoff) && !hi_prob.is_negative() && *hi_prob <= Rat::one()
                }
            };
            if !ok {
                return Err(ProfileError::PlayOutOfRange);
            }
        }
        Ok(Profile {
            game,
            structure,
            sender,
            plays,
        })
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn structure(&self) -> &InformationStructure {
        &self.structure
    }

    pub fn sender(&self) -> &SenderStrategy {
        &self.sender
    }

    pub fn plays(&self) -> &[Vec<ActionPlay>] {
        &self.plays
    }

    pub fn n_messages(&self) -> usize {
        self.sender.messages.len()
    }

    /// Sender utility conditional on (message, signal).
    pub fn value_at(&self, msg: usize, signal: usize) -> Rat {
        self.plays[msg][signal].utility(&self.game)
    }

    /// Sender utility conditional on (state, message):
    /// expectation of `value_at` under `F_state`.
    pub fn state_message_value(&self, state: u8, msg: usize) -> Rat {
        self.structure
            .conditional(state)
            .iter()
            .enumerate()
            .map(|(s, w)| w * self.value_at(msg, s))
            .sum()
    }

    /// Total probability that the message is sent.
    pub fn message_prob(&self, msg: usize) -> Rat {
        let pi = self.game.prior().value();
        pi * &self.sender.mix[1][msg] + (Rat::one() - pi) * &self.sender.mix[0][msg]
    }

    /// Ex-ante sender value of the profile.
    pub fn ex_ante_value(&self) -> Rat {
        let pi = self.game.prior().value();
        let mut total = Rat::zero();
        for state in 0..2u8 {
            let p_state = if state == 1 {
                pi.clone()
            } else {
                Rat::one() - pi
            };
            for msg in 0..self.n_messages() {
                let w = &self.sender.mix[state as usize][msg];
                if !w.is_zero() {
                    total += p_state.clone() * w * self.state_message_value(state, msg);
                }
            }
        }
        total
    }

    /// True when some cutoff mix sits at the boundary of `[0,1]`.
    pub fn has_boundary_tie_break(&self) -> bool {
        self.plays.iter().flatten().any(|p| match p {
            ActionPlay::Mix { hi_prob, .. } => hi_prob.is_zero() || hi_prob.is_one(),
            ActionPlay::Pure(_) => false,
        })
    }
}

/// Ex-ante sender value; alias for [`Profile::ex_ante_value`].
pub fn sender_value(profile: &Profile) -> Rat {
    profile.ex_ante_value()
}

/// One recorded violation, with the two compared values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Bayes {
        message: usize,
        posterior: Rat,
        stated: Rat,
    },
    Receiver {
        message: usize,
        signal: usize,
        action: usize,
        composed: Rat,
    },
    SenderIc {
        state: u8,
        sent: usize,
        better: usize,
        sent_value: Rat,
        better_value: Rat,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub bayes_ok: bool,
    pub receiver_ok: bool,
    pub sender_ic_ok: bool,
    pub worst_bayes: Option<Violation>,
    pub worst_receiver: Option<Violation>,
    pub worst_sender_ic: Option<Violation>,
}

impl VerificationReport {
    pub fn is_equilibrium(&self) -> bool {
        self.bayes_ok && self.receiver_ok && self.sender_ic_ok
    }
}

/// Exact verification of the equilibrium conditions.
pub fn verify(profile: &Profile) -> VerificationReport {
    verify_with_tolerance(profile, &Rat::zero())
}

/// Verification accepting Bayes/indifference residuals up to `tol`.
/// Receiver optimality is always checked exactly (constructions place
/// posteriors on cutoffs exactly even in the numeric solver).
pub fn verify_with_tolerance(profile: &Profile, tol: &Rat) -> VerificationReport {
    let game = &profile.game;
    let pi = game.prior().value();
    let n_msg = profile.n_messages();

    let mut bayes_ok = true;
    let mut worst_bayes: Option<(Rat, Violation)> = None;
    for m in 0..n_msg {
        let p_m = profile.message_prob(m);
        if p_m.is_zero() {
            continue;
        }
        let lhs = pi * &profile.sender.mix[1][m];
        let rhs = profile.sender.messages[m].value() * &p_m;
        let gap = (lhs - rhs).abs();
        if gap > *tol {
            bayes_ok = false;
            let v = Violation::Bayes {
                message: m,
                posterior: (pi * &profile.sender.mix[1][m]) / &p_m,
                stated: profile.sender.messages[m].value().clone(),
            };
            if worst_bayes.as_ref().is_none_or(|(g, _)| gap > *g) {
                worst_bayes = Some((gap, v));
            }
        }
    }

    let mut receiver_ok = true;
    let mut worst_receiver: Option<Violation> = None;
    for m in 0..n_msg {
        if profile.message_prob(m).is_zero() {
            continue;
        }
        for s in 0..profile.structure.len() {
            let composed =
                compose_posterior(&profile.sender.messages[m], &profile.structure.signal(s));
            let optimal: Vec<usize> = match game.locate(&composed) {
                Location::Interior(i) => vec![i],
                Location::Cutoff(c) => vec![c, c + 1],
                Location::Endpoint(0) => vec![1],
                Location::Endpoint(_) => vec![game.n_actions()],
            };
            for action in profile.plays[m][s].support() {
                if !optimal.contains(&action) {
                    receiver_ok = false;
                    if worst_receiver.is_none() {
                        worst_receiver = Some(Violation::Receiver {
                            message: m,
                            signal: s,
                            action,
                            composed: composed.value().clone(),
                        });
                    }
                }
            }
        }
    }

    let mut sender_ic_ok = true;
    let mut worst_sender: Option<(Rat, Violation)> = None;
    for state in 0..2u8 {
        for m in 0..n_msg {
            if profile.sender.mix[state as usize][m].is_zero() {
                continue;
            }
            let v_sent = profile.state_message_value(state, m);
            for other in 0..n_msg {
                if other == m || profile.message_prob(other).is_zero() {
                    continue;
                }
                let v_other = profile.state_message_value(state, other);
                if &v_other - &v_sent > *tol {
                    sender_ic_ok = false;
                    let gap = &v_other - &v_sent;
                    let v = Violation::SenderIc {
                        state,
                        sent: m,
                        better: other,
                        sent_value: v_sent.clone(),
                        better_value: v_other.clone(),
                    };
                    if worst_sender.as_ref().is_none_or(|(g, _)| gap > *g) {
                        worst_sender = Some((gap, v));
                    }
                }
            }
        }
    }

    VerificationReport {
        bayes_ok,
        receiver_ok,
        sender_ic_ok,
        worst_bayes: worst_bayes.map(|(_, v)| v),
        worst_receiver,
        worst_sender_ic: worst_sender.map(|(_, v)| v),
    }
}

/// Per-state mixing over `[m_l, m_h]` consistent with Bayes rule.
/// Requires `m_l < prior < m_h` (degenerate messages 0 and 1 come out with
/// the right zeros).
pub(crate) fn bayes_mixing(prior: &Rat, m_l: &Rat, m_h: &Rat) -> [Vec<Rat>; 2] {
    let t = (prior - m_l) / (m_h - m_l);
    let sig_h1 = &t * m_h / prior;
    let sig_h0 = &t * (Rat::one() - m_h) / (Rat::one() - prior);
    [
        vec![Rat::one() - &sig_h0, sig_h0],
        vec![Rat::one() - &sig_h1, sig_h1],
    ]
}

/// The babbling profile: a single message at the prior. The receiver plays
/// the sender-best action among the optimal set at each composed posterior,
/// so its value coincides with the best trivial equilibrium.
pub fn construct_trivial(game: &Game, structure: &InformationStructure) -> Profile {
    let prior = game.prior().clone();
    let plays: Vec<ActionPlay> = (0..structure.len())
        .map(|s| {
            let composed = compose_posterior(&prior, &structure.signal(s));
            match game.locate(&composed) {
                Location::Interior(i) => ActionPlay::Pure(i),
                Location::Cutoff(c) => {
                    if game.utility(c + 1) > game.utility(c) {
                        ActionPlay::Pure(c + 1)
                    } else {
                        ActionPlay::Pure(c)
                    }
                }
                Location::Endpoint(0) => ActionPlay::Pure(1),
                Location::Endpoint(_) => ActionPlay::Pure(game.n_actions()),
            }
        })
        .collect();
    let sender = SenderStrategy {
        messages: vec![prior],
        mix: [vec![Rat::one()], vec![Rat::one()]],
    };
    Profile::new(game.clone(), structure.clone(), sender, vec![plays])
        .expect("babbling profile is structurally valid")
}

/// A message position pinned so that one signal's composed posterior sits
/// exactly on cutoff `x_t`, with tie-break `hi_prob` there.
#[derive(Debug, Clone)]
pub(crate) struct CutoffConfig {
    pub message_odds: Rat,
    pub pinned_signal: usize,
    pub hi_prob: Rat,
    pub cutoff: usize,
}

impl CutoffConfig {
    /// Receiver plays per signal for a message at this position.
    pub fn plays(&self, game: &Game, structure: &InformationStructure) -> Vec<ActionPlay> {
        let message = Odds::Finite(self.message_odds.clone()).to_belief();
        (0..structure.len())
            .map(|s| {
                if s == self.pinned_signal {
                    ActionPlay::Mix {
                        cutoff: self.cutoff,
                        hi_prob: self.hi_prob.clone(),
                    }
                } else {
                    let composed = compose_posterior(&message, &structure.signal(s));
                    if composed.value() < game.cutoff(self.cutoff) {
                        ActionPlay::Pure(self.cutoff)
                    } else {
                        ActionPlay::Pure(self.cutoff + 1)
                    }
                }
            })
            .collect()
    }

    /// Expected sender utility under the given signal weights.
    pub fn value(&self, game: &Game, structure: &InformationStructure, weights: &[Rat]) -> Rat {
        self.plays(game, structure)
            .iter()
            .zip(weights)
            .map(|(p, w)| p.utility(game) * w)
            .sum()
    }
}

/// Exact solve: place a message near cutoff `x_t` so that the expected
/// sender utility under `weights` equals `target`, where the receiver plays
/// `a_t` below the cutoff and `a_{t+1}` above.
///
/// Enumerates the finitely many positions where some signal lands exactly on
/// `x_t` (ascending), keeps those whose composed posteriors all stay within
/// `[x_{t-1}, x_{t+1}]`, and solves the tie-break linearly in the first
/// position whose value range brackets the target. Step values chain across
/// consecutive candidates, so the scan finds a solution whenever one exists.
pub(crate) fn solve_at_cutoff(
    game: &Game,
    t: usize,
    structure: &InformationStructure,
    weights: &[Rat],
    target: &Rat,
) -> Option<CutoffConfig> {
    let u_lo = game.utility(t);
    let u_hi = game.utility(t + 1);
    let cutoff_odds = Belief::new(game.cutoff(t).clone())
        .expect("cutoff in range")
        .odds()
        .finite()
        .expect("interior cutoff")
        .clone();
    let lo_bound = game.cutoff(t - 1);
    let hi_bound = game.cutoff(t + 1);
    let n = structure.len();
    // Descending signal index = ascending message position.
    for pinned in (0..n).rev() {
        let pin_odds = structure
            .signal(pinned)
            .odds()
            .finite()
            .expect("signal odds finite")
            .clone();
        let message_odds = &cutoff_odds / &pin_odds;
        let message = Odds::Finite(message_odds.clone()).to_belief();
        let mut base = Rat::zero();
        let mut contained = true;
        for (s, weight) in weights.iter().enumerate() {
            if s == pinned {
                continue;
            }
            let composed = compose_posterior(&message, &structure.signal(s));
            if composed.value() < lo_bound || composed.value() > hi_bound {
                contained = false;
                break;
            }
            base += if composed.value() < game.cutoff(t) {
                weight * u_lo
            } else {
                weight * u_hi
            };
        }
        if !contained {
            continue;
        }
        let v0 = &base + &weights[pinned] * u_lo;
        let v1 = &base + &weights[pinned] * u_hi;
        let (lo_v, hi_v) = if v0 <= v1 { (&v0, &v1) } else { (&v1, &v0) };
        if target < lo_v || target > hi_v {
            continue;
        }
        let hi_prob = (target - &v0) / (&v1 - &v0);
        return Some(CutoffConfig {
            message_odds,
            pinned_signal: pinned,
            hi_prob,
            cutoff: t,
        });
    }
    None
}

fn endpoint_span_gate(
    game: &Game,
    structure: &InformationStructure,
) -> Result<(), ConstructionError> {
    let factor = structure.max_signal_odds_factor();
    let min_len = game.min_interior_odds_len();
    if Odds::Finite(factor.clone()) >= min_len {
        return Err(ConstructionError::Infeasible(format!(
            "signal odds factor {} is not below the smallest interior interval odds length",
            fmt_rat(&factor)
        )));
    }
    Ok(())
}

/// Equilibrium in which one message fully reveals a state (a triple in `T`).
///
/// For a type-1 triple `(a_1, a_i, a_{i+1})` the low message reveals state 0
/// and the high message is placed so that the state-0 expected utility equals
/// `u(a_1)` exactly; state-1 incentive compatibility then follows from
/// first-order stochastic dominance. Type-2 triples are the mirror image.
pub fn construct_endpoint(
    game: &Game,
    structure: &InformationStructure,
    triple: &EndpointTriple,
) -> Result<Profile, ConstructionError> {
    endpoint_span_gate(game, structure)?;
    let prior = game.prior().value();
    let l = game.n_actions();
    match triple.kind {
        TripleKind::Type1 => {
            let weights = structure.conditional(0);
            let target = game.utility(1).clone();
            let config =
                solve_at_cutoff(game, triple.i, structure, &weights, &target).ok_or_else(|| {
                    ConstructionError::Infeasible(
                        "state-0 target not bracketed within the two-interval window".into(),
                    )
                })?;
            let m_h = Odds::Finite(config.message_odds.clone()).to_belief();
            if m_h.value() <= prior {
                return Err(ConstructionError::Infeasible(format!(
                    "high message {} does not exceed the prior {}",
                    m_h,
                    fmt_rat(prior)
                )));
            }
            let mix = bayes_mixing(prior, &Rat::zero(), m_h.value());
            let low_plays = vec![ActionPlay::Pure(1); structure.len()];
            let high_plays = config.plays(game, structure);
            let sender = SenderStrategy {
                messages: vec![Belief::new(Rat::zero()).unwrap(), m_h],
                mix,
            };
            Ok(Profile::new(
                game.clone(),
                structure.clone(),
                sender,
                vec![low_plays, high_plays],
            )
            .expect("endpoint profile structurally valid"))
        }
        TripleKind::Type2 => {
            let weights = structure.conditional(1);
            let target = game.utility(l).clone();
            let config = solve_at_cutoff(game, triple.i - 1, structure, &weights, &target)
                .ok_or_else(|| {
                    ConstructionError::Infeasible(
                        "state-1 target not bracketed within the two-interval window".into(),
                    )
                })?;
            let m_l = Odds::Finite(config.message_odds.clone()).to_belief();
            if m_l.value() >= prior {
                return Err(ConstructionError::Infeasible(format!(
                    "low message {} is not below the prior {}",
                    m_l,
                    fmt_rat(prior)
                )));
            }
            let mix = bayes_mixing(prior, m_l.value(), &Rat::one());
            let low_plays = config.plays(game, structure);
            let high_plays = vec![ActionPlay::Pure(l); structure.len()];
            let sender = SenderStrategy {
                messages: vec![m_l, Belief::new(Rat::one()).unwrap()],
                mix,
            };
            Ok(Profile::new(
                game.clone(),
                structure.clone(),
                sender,
                vec![low_plays, high_plays],
            )
            .expect("endpoint profile structurally valid"))
        }
    }
}

/// Exact interior equilibrium for binary structures (a quadruple in `Q`).
///
/// Types 1/2 pin the low signal of the low message on `x_i` and the high
/// signal of the high message on `x_k`; the tie-breaks make the mixed
/// utilities equal `u(a_k)` and `u(a_{i+1})`, so the sender's conditional
/// utility depends only on the realized signal. Types 3/4 mirror the
/// placement and target `u(a_{k+1})` and `u(a_i)`.
pub fn construct_interior(
    game: &Game,
    structure: &InformationStructure,
    quad: &InteriorQuadruple,
) -> Result<Profile, ConstructionError> {
    if !structure.is_binary() {
        return Err(ConstructionError::RequiresBinary);
    }
    let spread = structure.odds_span();
    let (i, k) = (quad.i, quad.k);
    let (range_lo, range_hi) = match quad.kind {
        QuadKind::Type1 | QuadKind::Type2 => (i + 1, k),
        QuadKind::Type3 | QuadKind::Type4 => (i, k + 1),
    };
    for t in range_lo..=range_hi {
        if Odds::Finite(spread.clone()) >= game.interval_odds_len(t) {
            return Err(ConstructionError::Infeasible(format!(
                "odds spread {} is not below the odds length of interval {}",
                fmt_rat(&spread),
                t
            )));
        }
    }
    let odds_b = structure.signal(0).odds().finite().unwrap().clone();
    let odds_a = structure.signal(1).odds().finite().unwrap().clone();
    let x_i_odds = Belief::new(game.cutoff(i).clone())
        .unwrap()
        .odds()
        .finite()
        .unwrap()
        .clone();
    let x_k_odds = Belief::new(game.cutoff(k).clone())
        .unwrap()
        .odds()
        .finite()
        .unwrap()
        .clone();

    let (u_i, u_i1, u_k, u_k1) = (
        game.utility(i),
        game.utility(i + 1),
        game.utility(k),
        game.utility(k + 1),
    );
    let (m_l_odds, m_h_odds, r_l, r_h, low_plays, high_plays) = match quad.kind {
        QuadKind::Type1 | QuadKind::Type2 => {
            let m_l_odds = &x_i_odds / &odds_b;
            let m_h_odds = &x_k_odds / &odds_a;
            let r_l = (u_k - u_i) / (u_i1 - u_i);
            let r_h = (u_i1 - u_k) / (u_k1 - u_k);
            let low = vec![
                ActionPlay::Mix {
                    cutoff: i,
                    hi_prob: r_l.clone(),
                },
                ActionPlay::Pure(i + 1),
            ];
            let high = vec![
                ActionPlay::Pure(k),
                ActionPlay::Mix {
                    cutoff: k,
                    hi_prob: r_h.clone(),
                },
            ];
            (m_l_odds, m_h_odds, r_l, r_h, low, high)
        }
        QuadKind::Type3 | QuadKind::Type4 => {
            let m_l_odds = &x_i_odds / &odds_a;
            let m_h_odds = &x_k_odds / &odds_b;
            let r_l = (u_k1 - u_i) / (u_i1 - u_i);
            let r_h = (u_i - u_k) / (u_k1 - u_k);
            let low = vec![
                ActionPlay::Pure(i),
                ActionPlay::Mix {
                    cutoff: i,
                    hi_prob: r_l.clone(),
                },
            ];
            let high = vec![
                ActionPlay::Mix {
                    cutoff: k,
                    hi_prob: r_h.clone(),
                },
                ActionPlay::Pure(k + 1),
            ];
            (m_l_odds, m_h_odds, r_l, r_h, low, high)
        }
    };
    debug_assert!(!r_l.is_negative() && r_l <= Rat::one());
    debug_assert!(!r_h.is_negative() && r_h <= Rat::one());
    let m_l = Odds::Finite(m_l_odds).to_belief();
    let m_h = Odds::Finite(m_h_odds).to_belief();
    let prior = game.prior().value();
    if !(m_l.value() < prior && prior < m_h.value()) {
        return Err(ConstructionError::Infeasible(format!(
            "message positions must straddle the prior: m_l = {}, prior = {}, m_h = {}",
            m_l,
            fmt_rat(prior),
            m_h
        )));
    }
    let mix = bayes_mixing(prior, m_l.value(), m_h.value());
    let sender = SenderStrategy {
        messages: vec![m_l, m_h],
        mix,
    };
    Ok(Profile::new(
        game.clone(),
        structure.clone(),
        sender,
        vec![low_plays, high_plays],
    )
    .expect("interior profile structurally valid"))
}

/// Output of the general-structure interior solver.
#[derive(Debug, Clone)]
pub struct GeneralSolution {
    pub profile: Profile,
    pub iterations: usize,
    /// Final `|d(p)|` of the bisected function (dimensionless).
    pub d_residual: Rat,
    /// Final state-1 indifference residual in utility units (state-0
    /// indifference is exact by construction).
    pub utility_residual: Rat,
}

struct Window {
    cutoff: usize,
    alpha: Rat,
    beta: Rat,
}

/// Interior equilibrium for a general finite-support structure, following
/// the two-equalities continuity argument: parameterize the first window's
/// state-0 value by `p`, map it through both windows' state-0/state-1 value
/// functions, and bisect the mismatch `d(p) = H_1(p) - H_0(p)` on `[0, c]`.
///
/// Types 2 and 4 are handled by swapping the state labels (mirroring game,
/// structure, and quadruple through belief 1/2) and mapping the resulting
/// profile back.
pub fn construct_interior_general(
    game: &Game,
    structure: &InformationStructure,
    quad: &InteriorQuadruple,
    tolerance: &Rat,
    max_iterations: usize,
) -> Result<GeneralSolution, ConstructionError> {
    match quad.kind {
        QuadKind::Type2 | QuadKind::Type4 => {
            let flipped_game = game.flip();
            let flipped_structure = structure.flip();
            let l = game.n_actions();
            let flipped_quad = InteriorQuadruple {
                kind: if quad.kind == QuadKind::Type2 {
                    QuadKind::Type1
                } else {
                    QuadKind::Type3
                },
                i: l - quad.k,
                k: l - quad.i,
            };
            let solved = construct_interior_general(
                &flipped_game,
                &flipped_structure,
                &flipped_quad,
                tolerance,
                max_iterations,
            )?;
            let profile = flip_profile(&solved.profile, game, structure);
            return Ok(GeneralSolution { profile, ..solved });
        }
        QuadKind::Type1 | QuadKind::Type3 => {}
    }

    // Global span gate from the construction's window argument.
    let span = structure.odds_span();
    for t in 2..game.n_actions() {
        if Odds::Finite(span.clone()) >= game.interval_odds_len(t) {
            return Err(ConstructionError::Infeasible(format!(
                "odds span {} is not below the odds length of interior interval {}",
                fmt_rat(&span),
                t
            )));
        }
    }

    let (i, k) = (quad.i, quad.k);
    // Window 1 carries (alpha, beta), window 2 (gamma, delta), with
    // gamma < alpha < delta < beta by the type ordering.
    let (w1, w2) = match quad.kind {
        QuadKind::Type1 => (
            Window {
                cutoff: k,
                alpha: game.utility(k).clone(),
                beta: game.utility(k + 1).clone(),
            },
            Window {
                cutoff: i,
                alpha: game.utility(i).clone(),
                beta: game.utility(i + 1).clone(),
            },
        ),
        QuadKind::Type3 => (
            Window {
                cutoff: i,
                alpha: game.utility(i).clone(),
                beta: game.utility(i + 1).clone(),
            },
            Window {
                cutoff: k,
                alpha: game.utility(k).clone(),
                beta: game.utility(k + 1).clone(),
            },
        ),
        _ => unreachable!(),
    };
    let (gamma, delta) = (&w2.alpha, &w2.beta);

    let f0_weights = structure.conditional(0);
    let f1_weights = structure.conditional(1);
    let f0 = |p: &Rat| -> Rat { &w1.alpha * (Rat::one() - p) + &w1.beta * p };

    let solve1 = |target: &Rat| -> Result<CutoffConfig, ConstructionError> {
        solve_at_cutoff(game, w1.cutoff, structure, &f0_weights, target).ok_or_else(|| {
            ConstructionError::Infeasible("window-1 state-0 solve not bracketed".into())
        })
    };

    // d(p) along with the data needed to build the profile at p.
    struct Eval {
        d: Rat,
        cfg1: CutoffConfig,
        cfg2: CutoffConfig,
        utility_residual: Rat,
    }
    let evaluate = |p: &Rat| -> Result<Eval, ConstructionError> {
        let target0 = f0(p);
        let cfg1 = solve1(&target0)?;
        let f1p = cfg1.value(game, structure, &f1_weights);
        let h0_inv = (&target0 - gamma) / (delta - gamma);
        let cfg2_by_state1 = solve_at_cutoff(game, w2.cutoff, structure, &f1_weights, &f1p)
            .ok_or_else(|| {
                ConstructionError::Infeasible("window-2 state-1 solve not bracketed".into())
            })?;
        let h1_inv =
            (&cfg2_by_state1.value(game, structure, &f0_weights) - gamma) / (delta - gamma);
        // Profile candidate: solve window 2 by state 0, making the state-0
        // indifference exact; the state-1 gap is the reported residual.
        let cfg2 = solve_at_cutoff(game, w2.cutoff, structure, &f0_weights, &target0).ok_or_else(
            || ConstructionError::Infeasible("window-2 state-0 solve not bracketed".into()),
        )?;
        let utility_residual = (&f1p - cfg2.value(game, structure, &f1_weights)).abs();
        Ok(Eval {
            d: h1_inv - h0_inv,
            cfg1,
            cfg2,
            utility_residual,
        })
    };

    // Upper end of the bisection interval: c with f1(c) = delta, found by
    // solving window 1 against the state-1 measure.
    let cfg_c = solve_at_cutoff(game, w1.cutoff, structure, &f1_weights, delta)
        .ok_or_else(|| ConstructionError::Infeasible("no position with f_1 = delta".into()))?;
    let c = (&cfg_c.value(game, structure, &f0_weights) - &w1.alpha) / (&w1.beta - &w1.alpha);

    let mut lo = Rat::zero();
    let mut hi = c;
    let eval_lo = evaluate(&lo)?;
    let eval_hi = evaluate(&hi)?;
    if eval_lo.d > Rat::zero() || eval_hi.d < Rat::zero() {
        return Err(ConstructionError::Infeasible(format!(
            "no sign change: d(0) = {}, d(c) = {}",
            fmt_rat(&eval_lo.d),
            fmt_rat(&eval_hi.d)
        )));
    }
    let mut best = if eval_lo.d.abs() <= eval_hi.d.abs() {
        eval_lo
    } else {
        eval_hi
    };
    let mut iterations = 0;
    while best.d.abs() > *tolerance || best.utility_residual > *tolerance {
        if iterations >= max_iterations {
            return Err(ConstructionError::NotConverged {
                residual: fmt_rat(&best.utility_residual),
                iterations,
            });
        }
        iterations += 1;
        let two = Rat::one() + Rat::one();
        let mid = (&lo + &hi) / two;
        let eval_mid = evaluate(&mid)?;
        if eval_mid.d <= Rat::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if eval_mid.d.abs().max(eval_mid.utility_residual.clone())
            < best.d.abs().max(best.utility_residual.clone())
        {
            best = eval_mid;
        }
    }

    // Window 1 is the high-message window for type 1, low for type 3.
    let (low_cfg, high_cfg) = match quad.kind {
        QuadKind::Type1 => (&best.cfg2, &best.cfg1),
        QuadKind::Type3 => (&best.cfg1, &best.cfg2),
        _ => unreachable!(),
    };
    let m_l = Odds::Finite(low_cfg.message_odds.clone()).to_belief();
    let m_h = Odds::Finite(high_cfg.message_odds.clone()).to_belief();
    let prior = game.prior().value();
    if !(m_l.value() < prior && prior < m_h.value()) {
        return Err(ConstructionError::Infeasible(format!(
            "message positions must straddle the prior: m_l = {}, prior = {}, m_h = {}",
            m_l,
            fmt_rat(prior),
            m_h
        )));
    }
    let mix = bayes_mixing(prior, m_l.value(), m_h.value());
    let low_plays = low_cfg.plays(game, structure);
    let high_plays = high_cfg.plays(game, structure);
    let sender = SenderStrategy {
        messages: vec![m_l, m_h],
        mix,
    };
    let profile = Profile::new(
        game.clone(),
        structure.clone(),
        sender,
        vec![low_plays, high_plays],
    )
    .expect("general interior profile structurally valid");
    Ok(GeneralSolution {
        profile,
        iterations,
        d_residual: best.d.abs(),
        utility_residual: best.utility_residual.clone(),
    })
}

/// Maps a profile on the mirrored game/structure back to the original.
pub fn flip_profile(
    profile: &Profile,
    original_game: &Game,
    original_structure: &InformationStructure,
) -> Profile {
    let l = original_game.n_actions();
    let n_msg = profile.n_messages();
    let n_sig = profile.structure().len();
    let flip_msg = |m: usize| n_msg - 1 - m;
    let flip_sig = |s: usize| n_sig - 1 - s;
    let messages: Vec<Belief> = (0..n_msg)
        .map(|m| {
            Belief::new(Rat::one() - profile.sender().messages[flip_msg(m)].value())
                .expect("belief stays in range")
        })
        .collect();
    let mix = [
        (0..n_msg)
            .map(|m| profile.sender().mix[1][flip_msg(m)].clone())
            .collect(),
        (0..n_msg)
            .map(|m| profile.sender().mix[0][flip_msg(m)].clone())
            .collect(),
    ];
    let plays: Vec<Vec<ActionPlay>> = (0..n_msg)
        .map(|m| {
            (0..n_sig)
                .map(|s| match &profile.plays()[flip_msg(m)][flip_sig(s)] {
                    ActionPlay::Pure(a) => ActionPlay::Pure(l + 1 - a),
                    ActionPlay::Mix { cutoff, hi_prob } => ActionPlay::Mix {
                        cutoff: l - cutoff,
                        hi_prob: Rat::one() - hi_prob,
                    },
                })
                .collect()
        })
        .collect();
    Profile::new(
        original_game.clone(),
        original_structure.clone(),
        SenderStrategy { messages, mix },
        plays,
    )
    .expect("flipped profile structurally valid")
}
