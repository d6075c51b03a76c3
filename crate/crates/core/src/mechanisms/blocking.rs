use super::{MatchingOutcome, PreferenceProfile};
use crate::ids::{DriverId, PassengerId};
use crate::scalar::Scalar;

/// Every mutually acceptable pair not matched together whose members both
/// strictly prefer each other to their current assignment (being unmatched
/// counts as worst). Sorted by driver, then passenger.
pub fn find_blocking_pairs<F: Scalar>(
    outcome: &MatchingOutcome,
    profile: &PreferenceProfile<F>,
) -> Vec<(DriverId, PassengerId)> {
    let mut driver_partner = vec![None; profile.n_drivers()];
    let mut passenger_partner = vec![None; profile.n_passengers()];
    for &(d, p) in &outcome.pairs {
        driver_partner[d.0] = Some(p);
        passenger_partner[p.0] = Some(d);
    }

    let mut blocking = Vec::new();
    for d in (0..profile.n_drivers()).map(DriverId) {
        for &(p, _) in profile.driver_list(d) {
            if driver_partner[d.0] == Some(p) {
                continue;
            }
            if profile.driver_prefers(d, Some(p), driver_partner[d.0])
                && profile.passenger_prefers(p, Some(d), passenger_partner[p.0])
            {
                blocking.push((d, p));
            }
        }
    }
    blocking.sort();
    blocking
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_choices_with_mutual_firsts() {
        // D0 and P0 rank each other first, as do D1 and P1.
        let prof = PreferenceProfile::<f64>::from_orders(&[vec![0, 1], vec![1, 0]], &[vec![0, 1], vec![1, 0]]).unwrap();
        let o = MatchingOutcome::from_driver_partners(None, &[Some(PassengerId(1)), Some(PassengerId(0))], 2);
        // Both (D0,P0) and (D1,P1) block.
        assert_eq!(
            find_blocking_pairs(&o, &prof),
            vec![(DriverId(0), PassengerId(0)), (DriverId(1), PassengerId(1))]
        );
    }

    #[test]
    fn single_blocking_pair_two_by_two() {
        // D0: P0 > P1, D1: P0 > P1; P0: D0 > D1, P1: D0 > D1.
        // Matching D0-P1, D1-P0 puts D0 and P0 both on their last choice.
        let prof = PreferenceProfile::<f64>::from_orders(&[vec![0, 1], vec![0, 1]], &[vec![0, 1], vec![0, 1]]).unwrap();
        let o = MatchingOutcome::from_driver_partners(None, &[Some(PassengerId(1)), Some(PassengerId(0))], 2);
        assert_eq!(find_blocking_pairs(&o, &prof), vec![(DriverId(0), PassengerId(0))]);
    }

    #[test]
    fn empty_matching_blocks_on_admissible_pair() {
        let prof = PreferenceProfile::<f64>::from_orders(&[vec![0]], &[vec![0]]).unwrap();
        let o = MatchingOutcome::from_driver_partners(None, &[None], 1);
        assert_eq!(find_blocking_pairs(&o, &prof), vec![(DriverId(0), PassengerId(0))]);
    }

    #[test]
    fn inadmissible_pairs_never_block() {
        let prof = PreferenceProfile::<f64>::from_orders(&[vec![]], &[vec![]]).unwrap();
        let o = MatchingOutcome::from_driver_partners(None, &[None], 1);
        assert!(find_blocking_pairs(&o, &prof).is_empty());
    }
}
