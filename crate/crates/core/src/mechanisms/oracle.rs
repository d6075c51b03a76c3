//! Exhaustive reference solvers for small instances.
//!
//! These share no code with the mechanisms they check beyond the profile and
//! blocking-pair definitions.

use rand::seq::SliceRandom;
use rand::Rng;

use super::hungarian::{transpose, validate_matrix};
use super::{
    find_blocking_pairs, hungarian_solve, run_deferred_acceptance, Assignment, MatchingOutcome, PreferenceProfile,
};
use crate::error::{Error, Result};
use crate::ids::{DriverId, PassengerId};
use crate::scalar::Scalar;

/// Largest side accepted by the exhaustive searches.
pub const MAX_EXHAUSTIVE: usize = 7;

/// Minimum-cost assignment by trying every injection of the smaller side into
/// the larger one.
pub fn brute_force_assignment<F: Scalar>(cost: &[Vec<F>]) -> Result<Assignment> {
    let (rows, cols) = validate_matrix(cost)?;
    let small = rows.min(cols);
    if small > MAX_EXHAUSTIVE {
        return Err(Error::Oversize {
            size: small,
            cap: MAX_EXHAUSTIVE,
        });
    }
    if small == 0 {
        return Ok(Assignment {
            row_to_col: vec![None; rows],
        });
    }
    let transposed = rows > cols;
    let m = if transposed {
        transpose(cost, cols)
    } else {
        cost.to_vec()
    };
    let n_big = rows.max(cols);

    let mut best: Option<(F, Vec<usize>)> = None;
    let mut current = Vec::with_capacity(small);
    let mut used = vec![false; n_big];
    search(&m, 0, F::zero(), &mut current, &mut used, &mut best);
    let (_, choice) = best.expect("at least one injection exists");

    let mut row_to_col = vec![None; rows];
    for (i, &j) in choice.iter().enumerate() {
        if transposed {
            row_to_col[j] = Some(i);
        } else {
            row_to_col[i] = Some(j);
        }
    }
    Ok(Assignment { row_to_col })
}

fn search<F: Scalar>(
    m: &[Vec<F>],
    row: usize,
    acc: F,
    current: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut Option<(F, Vec<usize>)>,
) {
    if row == m.len() {
        if best.as_ref().is_none_or(|(b, _)| acc < *b) {
            *best = Some((acc, current.clone()));
        }
        return;
    }
    for j in 0..used.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        current.push(j);
        search(m, row + 1, acc + m[row][j], current, used, best);
        current.pop();
        used[j] = false;
    }
}

/// All stable matchings of `profile`, in lexicographic order of the drivers'
/// partner vectors (unmatched first).
pub fn enumerate_stable_matchings<F: Scalar>(profile: &PreferenceProfile<F>) -> Result<Vec<MatchingOutcome>> {
    let (nd, np) = (profile.n_drivers(), profile.n_passengers());
    let size = nd.max(np);
    if size > MAX_EXHAUSTIVE {
        return Err(Error::Oversize {
            size,
            cap: MAX_EXHAUSTIVE,
        });
    }
    let mut stable = Vec::new();
    let mut partners = vec![None; nd];
    let mut taken = vec![false; np];
    enumerate(profile, 0, &mut partners, &mut taken, &mut |partners| {
        let outcome = MatchingOutcome::from_driver_partners(None, partners, np);
        if find_blocking_pairs(&outcome, profile).is_empty() {
            stable.push(outcome);
        }
    });
    Ok(stable)
}

fn enumerate<F: Scalar>(
    profile: &PreferenceProfile<F>,
    d: usize,
    partners: &mut Vec<Option<PassengerId>>,
    taken: &mut [bool],
    visit: &mut impl FnMut(&[Option<PassengerId>]),
) {
    if d == partners.len() {
        visit(partners);
        return;
    }
    partners[d] = None;
    enumerate(profile, d + 1, partners, taken, visit);
    let mut options: Vec<PassengerId> = profile.driver_list(DriverId(d)).iter().map(|&(p, _)| p).collect();
    options.sort();
    for p in options {
        if taken[p.0] {
            continue;
        }
        taken[p.0] = true;
        partners[d] = Some(p);
        enumerate(profile, d + 1, partners, taken, visit);
        partners[d] = None;
        taken[p.0] = false;
    }
}

/// Random profile with each pair mutually acceptable with probability
/// `density`; both sides rank their acceptable partners uniformly at random.
pub fn random_profile<R: Rng + ?Sized>(
    rng: &mut R,
    n_drivers: usize,
    n_passengers: usize,
    density: f64,
) -> PreferenceProfile<f64> {
    let mut driver_orders: Vec<Vec<usize>> = vec![Vec::new(); n_drivers];
    let mut passenger_orders: Vec<Vec<usize>> = vec![Vec::new(); n_passengers];
    for (d, order) in driver_orders.iter_mut().enumerate() {
        for (p, porder) in passenger_orders.iter_mut().enumerate() {
            if rng.random_bool(density) {
                order.push(p);
                porder.push(d);
            }
        }
    }
    for o in driver_orders.iter_mut().chain(passenger_orders.iter_mut()) {
        o.shuffle(rng);
    }
    PreferenceProfile::from_orders(&driver_orders, &passenger_orders).expect("mutual by construction")
}

/// Drivers whose partner in `candidate` is strictly worse (by their own list)
/// than in some member of `stable_set`.
pub fn driver_optimality_violations<F: Scalar>(
    profile: &PreferenceProfile<F>,
    candidate: &MatchingOutcome,
    stable_set: &[MatchingOutcome],
) -> Vec<DriverId> {
    let mine = candidate.driver_partners();
    let mut worse = Vec::new();
    for d in (0..profile.n_drivers()).map(DriverId) {
        if stable_set
            .iter()
            .any(|m| profile.driver_prefers(d, m.driver_partners()[d.0], mine[d.0]))
        {
            worse.push(d);
        }
    }
    worse
}

/// A report by one driver that earned a partner it truly prefers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manipulation {
    pub driver: DriverId,
    pub report: Vec<PassengerId>,
    pub truthful: Option<PassengerId>,
    pub obtained: Option<PassengerId>,
}

/// Tries every ordered subset of the passengers that accept `driver` as that
/// driver's reported list, keeping everyone else truthful. Returns the first
/// report that improves the driver's true outcome under deferred acceptance.
pub fn find_profitable_report<F: Scalar>(
    profile: &PreferenceProfile<F>,
    driver: DriverId,
) -> Result<Option<Manipulation>> {
    let reachable: Vec<PassengerId> = (0..profile.n_passengers())
        .map(PassengerId)
        .filter(|&p| profile.passenger_rank(p, driver).is_some())
        .collect();
    if reachable.len() > MAX_EXHAUSTIVE {
        return Err(Error::Oversize {
            size: reachable.len(),
            cap: MAX_EXHAUSTIVE,
        });
    }
    let truthful = run_deferred_acceptance(profile).partner_of_driver(driver);

    let mut found = None;
    let mut report = Vec::new();
    let mut used = vec![false; reachable.len()];
    try_reports(
        profile,
        driver,
        truthful,
        &reachable,
        &mut report,
        &mut used,
        &mut found,
    )?;
    Ok(found)
}

fn try_reports<F: Scalar>(
    profile: &PreferenceProfile<F>,
    driver: DriverId,
    truthful: Option<PassengerId>,
    reachable: &[PassengerId],
    report: &mut Vec<PassengerId>,
    used: &mut [bool],
    found: &mut Option<Manipulation>,
) -> Result<()> {
    if found.is_some() {
        return Ok(());
    }
    let manipulated = profile.with_driver_report(driver, report)?;
    let obtained = run_deferred_acceptance(&manipulated).partner_of_driver(driver);
    if profile.driver_prefers(driver, obtained, truthful) {
        *found = Some(Manipulation {
            driver,
            report: report.clone(),
            truthful,
            obtained,
        });
        return Ok(());
    }
    for i in 0..reachable.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        report.push(reachable[i]);
        try_reports(profile, driver, truthful, reachable, report, used, found)?;
        report.pop();
        used[i] = false;
    }
    Ok(())
}

/// Counts from a batch of cross-oracle comparisons.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub stability_checked: usize,
    pub stability_failures: Vec<u64>,
    pub assignment_checked: usize,
    pub assignment_failures: Vec<u64>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.stability_failures.is_empty() && self.assignment_failures.is_empty()
    }
}

/// Deliberate defects used to confirm the oracle suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Replace the deferred-acceptance result with the driver-pessimal stable matching.
    PessimalDa,
    /// Replace the Hungarian result with the identity assignment.
    IdentityAssignment,
}

/// Runs `instances` seeded instances of each cross-check: deferred acceptance
/// against the enumerated stable set, and the Hungarian solver against brute
/// force. Instance `i` uses seed `base_seed + i`.
pub fn run_oracle_suite(instances: usize, max_side: usize, base_seed: u64, fault: Fault) -> Result<OracleReport> {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    if max_side == 0 || max_side > MAX_EXHAUSTIVE {
        return Err(Error::Oversize {
            size: max_side,
            cap: MAX_EXHAUSTIVE,
        });
    }
    let mut report = OracleReport::default();
    for i in 0..instances as u64 {
        let seed = base_seed.wrapping_add(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let nd = rng.random_range(1..=max_side);
        let np = rng.random_range(1..=max_side);
        let density = rng.random_range(0.3..=1.0);
        let profile = random_profile(&mut rng, nd, np, density);
        let stable = enumerate_stable_matchings(&profile)?;
        let mut da = run_deferred_acceptance(&profile);
        if fault == Fault::PessimalDa {
            da = pessimal(&profile, &stable).unwrap_or(da);
        }
        let in_set = stable.iter().any(|m| m.pairs == da.pairs);
        let optimal = driver_optimality_violations(&profile, &da, &stable).is_empty();
        report.stability_checked += 1;
        if !(in_set && optimal) {
            report.stability_failures.push(seed);
        }

        let rows = rng.random_range(1..=max_side);
        let cols = rng.random_range(1..=max_side);
        let m: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(0.0..100.0)).collect())
            .collect();
        let mut h = hungarian_solve(&m)?;
        if fault == Fault::IdentityAssignment {
            h = Assignment {
                row_to_col: (0..rows).map(|r| (r < cols).then_some(r)).collect(),
            };
        }
        let b = brute_force_assignment(&m)?;
        report.assignment_checked += 1;
        if h.total(&m) != b.total(&m) {
            report.assignment_failures.push(seed);
        }
    }
    Ok(report)
}

/// Stable matching that is worst for drivers, when one differs from the optimum.
fn pessimal<F: Scalar>(profile: &PreferenceProfile<F>, stable: &[MatchingOutcome]) -> Option<MatchingOutcome> {
    stable
        .iter()
        .find(|m| {
            stable.iter().all(|o| {
                (0..profile.n_drivers())
                    .map(DriverId)
                    .all(|d| !profile.driver_prefers(d, m.driver_partners()[d.0], o.driver_partners()[d.0]))
            })
        })
        .cloned()
        .filter(|m| m.pairs != run_deferred_acceptance(profile).pairs)
}
