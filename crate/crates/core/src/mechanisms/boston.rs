use super::{MatchingOutcome, Mechanism, PreferenceProfile};
use crate::ids::{DriverId, PassengerId};
use crate::scalar::Scalar;

/// Immediate acceptance (the Boston mechanism).
///
/// In step `k` every still-unmatched driver proposes to the `k`-th entry of its
/// list. Each passenger that is still free accepts its best proposer of the
/// step for good; proposals to already-matched passengers are rejected.
pub fn run_boston<F: Scalar>(profile: &PreferenceProfile<F>) -> MatchingOutcome {
    let nd = profile.n_drivers();
    let np = profile.n_passengers();
    let mut driver_partner: Vec<Option<PassengerId>> = vec![None; nd];
    let mut passenger_taken = vec![false; np];
    let longest = profile.driver_lists().iter().map(Vec::len).max().unwrap_or(0);

    for k in 0..longest {
        let mut best: Vec<Option<DriverId>> = vec![None; np];
        for d in (0..nd).map(DriverId) {
            if driver_partner[d.0].is_some() {
                continue;
            }
            let Some(&(p, _)) = profile.driver_list(d).get(k) else {
                continue;
            };
            if passenger_taken[p.0] {
                continue;
            }
            if best[p.0].is_none() || profile.passenger_prefers(p, Some(d), best[p.0]) {
                best[p.0] = Some(d);
            }
        }
        for (p, winner) in best.into_iter().enumerate() {
            if let Some(d) = winner {
                passenger_taken[p] = true;
                driver_partner[d.0] = Some(PassengerId(p));
            }
        }
    }

    MatchingOutcome::from_driver_partners(Some(Mechanism::Boston), &driver_partner, np)
}
