use rand::seq::SliceRandom;
use rand::Rng;

use super::{MatchingOutcome, Mechanism, PreferenceProfile};
use crate::ids::{DriverId, PassengerId};
use crate::scalar::Scalar;

/// Shuffles both sides independently and pairs them by position. A pair that
/// is not admissible in `profile` is cancelled, leaving both agents unmatched.
pub fn run_random<F: Scalar, R: Rng + ?Sized>(profile: &PreferenceProfile<F>, rng: &mut R) -> MatchingOutcome {
    let mut drivers: Vec<DriverId> = (0..profile.n_drivers()).map(DriverId).collect();
    let mut passengers: Vec<PassengerId> = (0..profile.n_passengers()).map(PassengerId).collect();
    drivers.shuffle(rng);
    passengers.shuffle(rng);

    let mut partners = vec![None; profile.n_drivers()];
    for (&d, &p) in drivers.iter().zip(&passengers) {
        if profile.is_admissible(d, p) {
            partners[d.0] = Some(p);
        }
    }
    MatchingOutcome::from_driver_partners(Some(Mechanism::Random), &partners, profile.n_passengers())
}
