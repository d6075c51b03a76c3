//! Matching mechanisms and the oracles used to verify them.
//!
//! - [`run_deferred_acceptance`]: driver-proposing Gale-Shapley over truncated lists
//! - [`run_boston`]: immediate acceptance, no switching once matched
//! - [`run_closest`]: minimum total pickup distance via [`hungarian_solve`]
//! - [`run_random`]: shuffle both sides and pair in order
//!
//! Random and closest ignore preference order, but any pair they produce that
//! is not admissible in the profile is cancelled.

mod blocking;
mod boston;
mod closest;
mod deferred_acceptance;
mod hungarian;
pub mod oracle;
mod profile;
mod random;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{DriverId, PassengerId};

pub use blocking::find_blocking_pairs;
pub use boston::run_boston;
pub use closest::{closest_assignment, distance_matrix, run_closest};
pub use deferred_acceptance::run_deferred_acceptance;
pub use hungarian::{hungarian_solve, Assignment};
pub use profile::PreferenceProfile;
pub use random::run_random;

/// Mechanism tag. Declaration order is the canonical reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    Da,
    Boston,
    Closest,
    Random,
}

impl Mechanism {
    pub const ALL: [Mechanism; 4] = [Mechanism::Da, Mechanism::Boston, Mechanism::Closest, Mechanism::Random];

    pub fn tag(self) -> &'static str {
        match self {
            Mechanism::Da => "da",
            Mechanism::Boston => "boston",
            Mechanism::Closest => "closest",
            Mechanism::Random => "random",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mechanism::ALL.into_iter().find(|m| m.tag() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown mechanism `{s}` (expected da, boston, closest or random)"
            ))
        })
    }
}

/// One round's pairing. `mechanism` is `None` for matchings that did not come
/// from a mechanism (oracle enumerations, hand-built fixtures).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingOutcome {
    pub mechanism: Option<Mechanism>,
    /// Sorted by driver id.
    pub pairs: Vec<(DriverId, PassengerId)>,
    pub unmatched_drivers: Vec<DriverId>,
    pub unmatched_passengers: Vec<PassengerId>,
}

impl MatchingOutcome {
    /// Builds an outcome from each driver's partner.
    ///
    /// Panics if two drivers share a passenger or a passenger index is out of range.
    pub fn from_driver_partners(
        mechanism: Option<Mechanism>,
        partners: &[Option<PassengerId>],
        n_passengers: usize,
    ) -> Self {
        let mut taken = vec![false; n_passengers];
        let mut pairs = Vec::new();
        let mut unmatched_drivers = Vec::new();
        for (d, partner) in partners.iter().enumerate() {
            match *partner {
                Some(p) => {
                    assert!(!taken[p.0], "passenger {p} matched twice");
                    taken[p.0] = true;
                    pairs.push((DriverId(d), p));
                }
                None => unmatched_drivers.push(DriverId(d)),
            }
        }
        let unmatched_passengers = (0..n_passengers).filter(|&p| !taken[p]).map(PassengerId).collect();
        Self {
            mechanism,
            pairs,
            unmatched_drivers,
            unmatched_passengers,
        }
    }

    pub fn n_drivers(&self) -> usize {
        self.pairs.len() + self.unmatched_drivers.len()
    }

    pub fn n_passengers(&self) -> usize {
        self.pairs.len() + self.unmatched_passengers.len()
    }

    pub fn driver_partners(&self) -> Vec<Option<PassengerId>> {
        let mut out = vec![None; self.n_drivers()];
        for &(d, p) in &self.pairs {
            out[d.0] = Some(p);
        }
        out
    }

    pub fn passenger_partners(&self) -> Vec<Option<DriverId>> {
        let mut out = vec![None; self.n_passengers()];
        for &(d, p) in &self.pairs {
            out[p.0] = Some(d);
        }
        out
    }

    pub fn partner_of_driver(&self, d: DriverId) -> Option<PassengerId> {
        self.pairs.iter().find(|&&(x, _)| x == d).map(|&(_, p)| p)
    }

    /// Checks the partial-bijection and partition invariants.
    pub fn validate(&self, n_drivers: usize, n_passengers: usize) -> Result<()> {
        let mut seen_d = vec![false; n_drivers];
        let mut seen_p = vec![false; n_passengers];
        let bad = |msg: String| Err(Error::Profile(msg));
        for &(d, p) in &self.pairs {
            if d.0 >= n_drivers || p.0 >= n_passengers {
                return bad(format!("pair ({d}, {p}) out of range"));
            }
            if std::mem::replace(&mut seen_d[d.0], true) || std::mem::replace(&mut seen_p[p.0], true) {
                return bad(format!("pair ({d}, {p}) reuses an agent"));
            }
        }
        for &d in &self.unmatched_drivers {
            if d.0 >= n_drivers || std::mem::replace(&mut seen_d[d.0], true) {
                return bad(format!("driver {d} listed twice"));
            }
        }
        for &p in &self.unmatched_passengers {
            if p.0 >= n_passengers || std::mem::replace(&mut seen_p[p.0], true) {
                return bad(format!("passenger {p} listed twice"));
            }
        }
        if seen_d.iter().chain(&seen_p).any(|s| !s) {
            return bad("some agent is neither matched nor unmatched".into());
        }
        Ok(())
    }
}
