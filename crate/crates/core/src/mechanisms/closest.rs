use super::{hungarian_solve, Assignment, MatchingOutcome, Mechanism, PreferenceProfile};
use crate::error::Result;
use crate::geometry::{euclidean, GridPoint};
use crate::ids::PassengerId;
use crate::scalar::Scalar;

/// Euclidean distances from each driver to each pickup.
pub fn distance_matrix<F: Scalar>(drivers: &[GridPoint<F>], pickups: &[GridPoint<F>]) -> Vec<Vec<F>> {
    drivers
        .iter()
        .map(|&d| pickups.iter().map(|&p| euclidean(d, p)).collect())
        .collect()
}

/// Minimum total driver-to-pickup distance assignment, before any
/// admissibility filtering.
pub fn closest_assignment<F: Scalar>(drivers: &[GridPoint<F>], pickups: &[GridPoint<F>]) -> Result<Assignment> {
    hungarian_solve(&distance_matrix(drivers, pickups))
}

/// Central allocation by proximity. Assigned pairs that are not admissible in
/// `profile` are cancelled and both agents go unmatched.
pub fn run_closest<F: Scalar>(
    drivers: &[GridPoint<F>],
    pickups: &[GridPoint<F>],
    profile: &PreferenceProfile<F>,
) -> Result<MatchingOutcome> {
    let assignment = closest_assignment(drivers, pickups)?;
    let partners: Vec<Option<PassengerId>> = (0..drivers.len())
        .map(|d| {
            let p = PassengerId(assignment.row_to_col.get(d).copied().flatten()?);
            profile.is_admissible(crate::ids::DriverId(d), p).then_some(p)
        })
        .collect();
    Ok(MatchingOutcome::from_driver_partners(
        Some(Mechanism::Closest),
        &partners,
        pickups.len(),
    ))
}
