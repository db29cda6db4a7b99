//! Core game representation: receiver optimality intervals, generic sender
//! utilities, and exact belief/odds arithmetic.
//!
//! A game is a partition `0 = x_0 < x_1 < ... < x_l = 1` of the belief space
//! (belief = probability of state 1) into intervals `I_i = [x_{i-1}, x_i]`,
//! one per receiver action `a_i`, together with a state-independent sender
//! utility per action and a prior strictly inside one interval.

use crate::rational::{fmt_rat, Rat};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("game needs at least one action")]
    NoActions,
    #[error("cutoffs must satisfy 0 = x_0 < x_1 < ... < x_l = 1")]
    BadCutoffs,
    #[error("number of actions must be one less than number of cutoffs")]
    ActionCountMismatch,
    #[error("prior at cutoff")]
    PriorAtCutoff,
    #[error("prior must lie strictly inside (0,1)")]
    PriorOutOfRange,
    #[error("genericity violated: sender utilities `{0}` duplicated")]
    GenericityViolated(String),
    #[error("belief out of [0,1]: {0}")]
    BeliefOutOfRange(String),
    #[error("degenerate receiver utilities: actions `{0}` and `{1}` tie on an interval")]
    TiedReceiverUtilities(String, String),
}

/// Posterior probability that the state is 1. Always in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Belief(Rat);

impl Belief {
    pub fn new(value: Rat) -> Result<Self, GameError> {
        if value < Rat::zero() || value > Rat::one() {
            return Err(GameError::BeliefOutOfRange(fmt_rat(&value)));
        }
        Ok(Belief(value))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn into_value(self) -> Rat {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Odds ratio `v / (1 - v)`; infinite at belief 1.
    pub fn odds(&self) -> Odds {
        if self.is_one() {
            Odds::Infinity
        } else {
            Odds::Finite(&self.0 / (Rat::one() - &self.0))
        }
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rat(&self.0))
    }
}

/// Odds ratio of a belief. `lr` addition from the model becomes
/// multiplication here; logarithms are display-only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Odds {
    Finite(Rat),
    Infinity,
}

impl Odds {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Odds::Finite(r) => Some(r),
            Odds::Infinity => None,
        }
    }

    pub fn to_belief(&self) -> Belief {
        match self {
            Odds::Infinity => Belief(Rat::one()),
            Odds::Finite(r) => Belief(r / (Rat::one() + r)),
        }
    }

    pub fn mul(&self, other: &Odds) -> Odds {
        match (self, other) {
            (Odds::Finite(a), Odds::Finite(b)) => Odds::Finite(a * b),
            _ => Odds::Infinity,
        }
    }

    /// `self / other`; caller must not divide by zero odds.
    pub fn div(&self, other: &Odds) -> Odds {
        match (self, other) {
            (Odds::Finite(a), Odds::Finite(b)) => {
                assert!(!b.is_zero(), "division by zero odds");
                Odds::Finite(a / b)
            }
            (Odds::Infinity, Odds::Finite(_)) => Odds::Infinity,
            (Odds::Finite(_), Odds::Infinity) => Odds::Finite(Rat::zero()),
            (Odds::Infinity, Odds::Infinity) => panic!("inf/inf odds"),
        }
    }
}

impl PartialOrd for Odds {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(match (self, other) {
            (Odds::Finite(a), Odds::Finite(b)) => a.cmp(b),
            (Odds::Finite(_), Odds::Infinity) => Ordering::Less,
            (Odds::Infinity, Odds::Finite(_)) => Ordering::Greater,
            (Odds::Infinity, Odds::Infinity) => Ordering::Equal,
        })
    }
}

/// A receiver action with the sender's (state-independent) utility for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub label: String,
    pub sender_utility: Rat,
}

impl Action {
    pub fn new(label: impl Into<String>, sender_utility: Rat) -> Self {
        Action {
            label: label.into(),
            sender_utility,
        }
    }
}

/// Where a belief sits relative to the game's interval partition.
///
/// Indices are 1-based: `Interior(i)` means strictly inside `I_i`,
/// `Cutoff(i)` means exactly at `x_i` for `0 < i < l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior(usize),
    Cutoff(usize),
    Endpoint(u8),
}

/// The cheap-talk stage game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    cutoffs: Vec<Rat>,
    actions: Vec<Action>,
    prior: Belief,
    prior_interval: usize,
}

impl Game {
    /// Builds a game from explicit cutoffs. Validates interval structure,
    /// genericity, and that the prior is interior to some interval.
    pub fn new(cutoffs: Vec<Rat>, actions: Vec<Action>, prior: Rat) -> Result<Self, GameError> {
        if actions.is_empty() {
            return Err(GameError::NoActions);
        }
        if cutoffs.len() != actions.len() + 1 {
            return Err(GameError::ActionCountMismatch);
        }
        if cutoffs[0] != Rat::zero() || cutoffs[cutoffs.len() - 1] != Rat::one() {
            return Err(GameError::BadCutoffs);
        }
        if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GameError::BadCutoffs);
        }
        for (a, b) in actions
            .iter()
            .enumerate()
            .flat_map(|(i, a)| actions[i + 1..].iter().map(move |b| (a, b)))
        {
            if a.sender_utility == b.sender_utility {
                return Err(GameError::GenericityViolated(fmt_rat(&a.sender_utility)));
            }
        }
        if prior <= Rat::zero() || prior >= Rat::one() {
            return Err(GameError::PriorOutOfRange);
        }
        if cutoffs.contains(&prior) {
            return Err(GameError::PriorAtCutoff);
        }
        let prior_interval = cutoffs.iter().position(|x| *x > prior).expect("prior < 1");
        let prior = Belief::new(prior)?;
        Ok(Game {
            cutoffs,
            actions,
            prior,
            prior_interval,
        })
    }

    /// Derives the interval structure from receiver utilities.
    ///
    /// `receiver_utilities[i] = (u_R(a_i, w=0), u_R(a_i, w=1))`. At belief `b`
    /// the receiver's expected utility from `a_i` is the line
    /// `(1-b) * u0 + b * u1`; the surviving actions are those whose line is
    /// the unique upper envelope on a subinterval of positive length, and the
    /// cutoffs are the exact indifference points.
    pub fn from_receiver_utilities(
        actions: Vec<Action>,
        receiver_utilities: Vec<(Rat, Rat)>,
        prior: Rat,
    ) -> Result<Self, GameError> {
        if actions.is_empty() {
            return Err(GameError::NoActions);
        }
        if actions.len() != receiver_utilities.len() {
            return Err(GameError::ActionCountMismatch);
        }
        // Line for action i: value(b) = intercept + slope * b.
        let lines: Vec<(Rat, Rat, usize)> = receiver_utilities
            .iter()
            .enumerate()
            .map(|(idx, (u0, u1))| (u0.clone(), u1 - u0, idx))
            .collect();
        let envelope = upper_envelope_on_unit(&lines);
        // Detect exact ties: two distinct actions sharing a segment.
        for seg in &envelope {
            for other in &lines {
                if other.2 != seg.owner
                    && other.0 == lines[seg.owner].0
                    && other.1 == lines[seg.owner].1
                {
                    return Err(GameError::TiedReceiverUtilities(
                        actions[seg.owner].label.clone(),
                        actions[other.2].label.clone(),
                    ));
                }
            }
        }
        let mut cutoffs = vec![Rat::zero()];
        let mut surviving = Vec::new();
        for seg in &envelope {
            cutoffs.push(seg.hi.clone());
            surviving.push(actions[seg.owner].clone());
        }
        Game::new(cutoffs, surviving, prior)
    }

    /// Number of actions `l`.
    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    /// Cutoff `x_i`, `0 <= i <= l`.
    pub fn cutoff(&self, i: usize) -> &Rat {
        &self.cutoffs[i]
    }

    pub fn cutoffs(&self) -> &[Rat] {
        &self.cutoffs
    }

    /// Action `a_i`, 1-based.
    pub fn action(&self, i: usize) -> &Action {
        &self.actions[i - 1]
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Sender utility `u_S(a_i)`, 1-based.
    pub fn utility(&self, i: usize) -> &Rat {
        &self.actions[i - 1].sender_utility
    }

    pub fn prior(&self) -> &Belief {
        &self.prior
    }

    /// Index `j` with `prior` strictly inside `I_j`.
    pub fn prior_interval(&self) -> usize {
        self.prior_interval
    }

    /// Locates a belief in the interval partition.
    pub fn locate(&self, belief: &Belief) -> Location {
        if belief.is_zero() {
            return Location::Endpoint(0);
        }
        if belief.is_one() {
            return Location::Endpoint(1);
        }
        let l = self.n_actions();
        for i in 1..l {
            match belief.value().cmp(&self.cutoffs[i]) {
                Ordering::Equal => return Location::Cutoff(i),
                Ordering::Less => return Location::Interior(i),
                Ordering::Greater => {}
            }
        }
        Location::Interior(l)
    }

    /// Multiplicative odds length of `J_i = [lr(x_{i-1}), lr(x_i)]`.
    /// Infinite for the first and last interval.
    pub fn interval_odds_len(&self, i: usize) -> Odds {
        let lo = Belief(self.cutoffs[i - 1].clone()).odds();
        let hi = Belief(self.cutoffs[i].clone()).odds();
        match (hi, lo) {
            (Odds::Infinity, _) => Odds::Infinity,
            (Odds::Finite(_), Odds::Finite(l)) if l.is_zero() => Odds::Infinity,
            (Odds::Finite(h), Odds::Finite(l)) => Odds::Finite(h / l),
            (Odds::Finite(_), Odds::Infinity) => unreachable!("cutoffs increase"),
        }
    }

    /// Smallest odds length among interior intervals `J_2 ... J_{l-1}`,
    /// or `Infinity` when every interval is unbounded (`l <= 2`).
    pub fn min_interior_odds_len(&self) -> Odds {
        let mut best = Odds::Infinity;
        for i in 2..self.n_actions() {
            let len = self.interval_odds_len(i);
            if len < best {
                best = len;
            }
        }
        best
    }

    /// Mirrors the game through belief 1/2: states swap, intervals reverse.
    pub fn flip(&self) -> Game {
        let l = self.n_actions();
        let cutoffs = (0..=l).map(|i| Rat::one() - &self.cutoffs[l - i]).collect();
        let actions = self.actions.iter().rev().cloned().collect();
        let prior = Rat::one() - self.prior.value();
        Game::new(cutoffs, actions, prior).expect("flip preserves validity")
    }
}

/// Combines a message posterior with a prior-1/2 signal posterior:
/// `odds(out) = odds(message) * odds(signal)`.
///
/// Degenerate messages 0 and 1 absorb any signal.
pub fn compose_posterior(message: &Belief, signal: &Belief) -> Belief {
    if message.is_zero() || message.is_one() {
        return message.clone();
    }
    message.odds().mul(&signal.odds()).to_belief()
}

struct EnvelopeSegment {
    hi: Rat,
    owner: usize,
}

/// Upper envelope of lines `(intercept, slope, id)` over `[0, 1]`, returned
/// as segments with exclusive upper endpoints (last one ends at 1).
fn upper_envelope_on_unit(lines: &[(Rat, Rat, usize)]) -> Vec<EnvelopeSegment> {
    let eval = |line: &(Rat, Rat, usize), x: &Rat| -> Rat { &line.0 + &line.1 * x };
    // Walk from x = 0, repeatedly taking the best line and its exit point.
    let mut segments = Vec::new();
    let mut x = Rat::zero();
    let one = Rat::one();
    loop {
        // Best line at x (break value ties by larger slope so the pick
        // stays optimal just to the right of x).
        let mut best = &lines[0];
        for line in &lines[1..] {
            let (bv, lv) = (eval(best, &x), eval(line, &x));
            if lv > bv || (lv == bv && line.1 > best.1) {
                best = line;
            }
        }
        // Earliest crossing where another line overtakes `best` after x.
        let mut exit = one.clone();
        for line in lines {
            if line.1 <= best.1 {
                continue;
            }
            let cross = (&best.0 - &line.0) / (&line.1 - &best.1);
            if cross > x && cross < exit {
                exit = cross;
            }
        }
        segments.push(EnvelopeSegment {
            hi: exit.clone(),
            owner: best.2,
        });
        if exit >= one {
            return segments;
        }
        x = exit;
    }
}
