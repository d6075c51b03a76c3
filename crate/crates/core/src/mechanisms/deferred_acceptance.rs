use std::collections::VecDeque;

use super::{MatchingOutcome, Mechanism, PreferenceProfile};
use crate::ids::{DriverId, PassengerId};
use crate::scalar::Scalar;

/// Driver-proposing deferred acceptance.
///
/// Free drivers propose down their lists; each passenger holds the best
/// proposal seen so far and releases the previous holder. The result is the
/// driver-optimal stable matching for the stated lists, independent of the
/// order in which free drivers are processed.
pub fn run_deferred_acceptance<F: Scalar>(profile: &PreferenceProfile<F>) -> MatchingOutcome {
    let nd = profile.n_drivers();
    let np = profile.n_passengers();
    let mut next = vec![0usize; nd];
    let mut held: Vec<Option<DriverId>> = vec![None; np];
    let mut free: VecDeque<DriverId> = (0..nd).map(DriverId).collect();

    while let Some(d) = free.pop_front() {
        let list = profile.driver_list(d);
        let Some(&(p, _)) = list.get(next[d.0]) else {
            continue;
        };
        next[d.0] += 1;
        match held[p.0] {
            None => held[p.0] = Some(d),
            Some(current) if profile.passenger_prefers(p, Some(d), Some(current)) => {
                held[p.0] = Some(d);
                free.push_back(current);
            }
            Some(_) => free.push_back(d),
        }
    }

    let mut partners = vec![None; nd];
    for (p, d) in held.iter().enumerate() {
        if let Some(d) = d {
            partners[d.0] = Some(PassengerId(p));
        }
    }
    MatchingOutcome::from_driver_partners(Some(Mechanism::Da), &partners, np)
}
