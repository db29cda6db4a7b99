//! Finite-support receiver information structures.
//!
//! Signals are identified with the posterior they induce from a prior of 1/2,
//! so a structure is a distribution over points of `(0,1)` whose mean is
//! exactly 1/2. The state-conditional laws follow by Bayes rule:
//! `F_1(s) = 2 s mu(s)` and `F_0(s) = 2 (1-s) mu(s)`.

use crate::model::{Belief, Odds};
use crate::rational::{fmt_rat, rat, Rat};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("support must be nonempty")]
    EmptySupport,
    #[error("support and weights must have equal length")]
    LengthMismatch,
    #[error("support points must be distinct, sorted, and strictly inside (0,1)")]
    BadSupport,
    #[error("weights must be positive and sum to 1 (sum = {0})")]
    BadWeights(String),
    #[error("mean posterior must be 1/2 (got {0})")]
    MartingaleViolated(String),
    #[error("binary structure not straddling the prior 1/2: a={0}, b={1}")]
    NotStraddling(String, String),
}

/// A finite-support information structure for the receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformationStructure {
    support: Vec<Rat>,
    weights: Vec<Rat>,
}

impl InformationStructure {
    pub fn new(support: Vec<Rat>, weights: Vec<Rat>) -> Result<Self, StructureError> {
        if support.is_empty() {
            return Err(StructureError::EmptySupport);
        }
        if support.len() != weights.len() {
            return Err(StructureError::LengthMismatch);
        }
        let zero = Rat::zero();
        let one = Rat::one();
        if support.iter().any(|s| *s <= zero || *s >= one)
            || support.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(StructureError::BadSupport);
        }
        let total: Rat = weights.iter().sum();
        if weights.iter().any(|w| *w <= zero) || !total.is_one() {
            return Err(StructureError::BadWeights(fmt_rat(&total)));
        }
        let mean: Rat = support.iter().zip(&weights).map(|(s, w)| s * w).sum();
        if mean != rat(1, 2) {
            return Err(StructureError::MartingaleViolated(fmt_rat(&mean)));
        }
        Ok(InformationStructure { support, weights })
    }

    /// The uninformative structure: a single atom at 1/2.
    pub fn uninformative() -> Self {
        InformationStructure {
            support: vec![rat(1, 2)],
            weights: vec![Rat::one()],
        }
    }

    /// Binary structure on posteriors `b < 1/2 < a`, with the weight on `a`
    /// pinned by the martingale condition: `beta = (1/2 - b) / (a - b)`.
    pub fn binary(a: Rat, b: Rat) -> Result<Self, StructureError> {
        let half = rat(1, 2);
        if a <= half || b >= half || b <= Rat::zero() || a >= Rat::one() {
            return Err(StructureError::NotStraddling(fmt_rat(&a), fmt_rat(&b)));
        }
        let beta = (&half - &b) / (&a - &b);
        InformationStructure::new(vec![b, a], vec![Rat::one() - &beta, beta])
    }

    /// Symmetric binary structure: signal matches the state with
    /// probability `q in (1/2, 1)`.
    pub fn symmetric_binary(q: Rat) -> Result<Self, StructureError> {
        let b = Rat::one() - &q;
        InformationStructure::binary(q, b)
    }

    pub fn support(&self) -> &[Rat] {
        &self.support
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_binary(&self) -> bool {
        self.support.len() == 2
    }

    pub fn signal(&self, idx: usize) -> Belief {
        Belief::new(self.support[idx].clone()).expect("support inside (0,1)")
    }

    /// `F_omega`: probability of each signal conditional on the state.
    pub fn conditional(&self, state: u8) -> Vec<Rat> {
        let two = rat(2, 1);
        self.support
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| {
                if state == 1 {
                    &two * s * w
                } else {
                    &two * (Rat::one() - s) * w
                }
            })
            .collect()
    }

    /// Unconditional signal probabilities under the given prior:
    /// `P(s) = prior * F_1(s) + (1 - prior) * F_0(s)`.
    pub fn signal_probability(&self, prior: &Rat) -> Vec<Rat> {
        let f1 = self.conditional(1);
        let f0 = self.conditional(0);
        f1.iter()
            .zip(&f0)
            .map(|(p1, p0)| prior * p1 + (Rat::one() - prior) * p0)
            .collect()
    }

    /// First-order stochastic dominance of `F_1` over `F_0`. Holds for every
    /// valid structure (the likelihood ratio is increasing in the signal);
    /// exposed as a test oracle.
    pub fn fosd_check(&self) -> bool {
        let f1 = self.conditional(1);
        let f0 = self.conditional(0);
        let mut c1 = Rat::zero();
        let mut c0 = Rat::zero();
        for (p1, p0) in f1.iter().zip(&f0) {
            c1 += p1;
            c0 += p0;
            if c1 > c0 {
                return false;
            }
        }
        true
    }

    /// Smallest `d` with support inside `[1/2 - d, 1/2 + d]`.
    pub fn delta(&self) -> Rat {
        let half = rat(1, 2);
        self.support
            .iter()
            .map(|s| if *s >= half { s - &half } else { &half - s })
            .max()
            .expect("nonempty support")
    }

    /// Full multiplicative odds span `odds(s_max) / odds(s_min)`.
    pub fn odds_span(&self) -> Rat {
        let lo = self.signal(0).odds();
        let hi = self.signal(self.len() - 1).odds();
        match (hi, lo) {
            (Odds::Finite(h), Odds::Finite(l)) => h / l,
            _ => unreachable!("support inside (0,1)"),
        }
    }

    /// Largest single-signal odds factor `max(odds(s_max), 1/odds(s_min))`.
    pub fn max_signal_odds_factor(&self) -> Rat {
        let lo = self
            .signal(0)
            .odds()
            .finite()
            .cloned()
            .expect("finite odds");
        let hi = self
            .signal(self.len() - 1)
            .odds()
            .finite()
            .cloned()
            .expect("finite odds");
        let inv_lo = Rat::one() / lo;
        if hi > inv_lo {
            hi
        } else {
            inv_lo
        }
    }

    /// Mirrors the structure through 1/2 (state swap).
    pub fn flip(&self) -> InformationStructure {
        let support: Vec<Rat> = self.support.iter().rev().map(|s| Rat::one() - s).collect();
        let weights: Vec<Rat> = self.weights.iter().rev().cloned().collect();
        InformationStructure::new(support, weights).expect("flip preserves validity")
    }
}

/// The class `F_delta` (optionally restricted to binary support, `B_delta`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaClass {
    pub delta: Rat,
    pub binary_only: bool,
}

impl DeltaClass {
    pub fn new(delta: Rat, binary_only: bool) -> Self {
        assert!(
            delta > Rat::zero() && delta < rat(1, 2),
            "delta must lie in (0, 1/2)"
        );
        DeltaClass { delta, binary_only }
    }

    /// Membership: support inside the closed interval `[1/2-d, 1/2+d]`,
    /// plus binary support when required.
    pub fn contains(&self, f: &InformationStructure) -> bool {
        f.delta() <= self.delta && (!self.binary_only || f.is_binary())
    }
}
