//! Fares, trip costs and both sides' preference scores.
//!
//! Lower preference scores are better on both sides. A driver-passenger pair
//! is admissible when the driver's utility (fare minus cost) is strictly
//! positive and the pickup wait is within the threshold.

use serde::{Deserialize, Serialize};

use crate::agents::{DriverState, PassengerRequest};
use crate::error::{Error, Result};
use crate::geometry::{manhattan, GridPoint};
use crate::ids::{DriverId, PassengerId};
use crate::mechanisms::PreferenceProfile;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "F: Scalar"))]
pub struct EconWeights<F> {
    /// Passenger weight on wait time.
    pub w_t: F,
    /// Passenger weight on the driver's aggregate income.
    pub w_i: F,
    /// Driver weight on pickup proximity.
    pub w_prox: F,
    /// Driver weight on dropoff distance from the centre.
    pub w_center: F,
    pub center_quad_coeff: F,
}

impl<F: Scalar> Default for EconWeights<F> {
    fn default() -> Self {
        Self {
            w_t: F::one(),
            w_i: F::zero(),
            w_prox: F::one(),
            w_center: F::one(),
            center_quad_coeff: F::lit(0.1),
        }
    }
}

impl<F: Scalar> EconWeights<F> {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("w_t", self.w_t),
            ("w_i", self.w_i),
            ("w_prox", self.w_prox),
            ("w_center", self.w_center),
        ];
        for (name, v) in fields {
            if !(v >= F::zero()) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite and non-negative")));
            }
        }
        if !self.center_quad_coeff.is_finite() {
            return Err(Error::Config("center_quad_coeff must be finite".into()));
        }
        Ok(())
    }
}

/// How passengers score drivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassengerScoring {
    /// Wait time plus `w_i` times normalised driver income.
    #[default]
    IncomeAware,
    /// Wait time only; `w_i` is ignored.
    WaitOnly,
}

/// Fare offered for a ride: `alpha * (ride + centre) / 3`, where `ride` is the
/// Manhattan pickup-to-dropoff length and `centre` the mean Euclidean distance
/// of pickup and dropoff from the origin.
pub fn compute_wtp<F: Scalar>(pickup: GridPoint<F>, dropoff: GridPoint<F>, alpha: F) -> F {
    let ride = manhattan(pickup, dropoff);
    let center = (pickup.center_dist() + dropoff.center_dist()) / F::lit(2.0);
    alpha * (ride + center) / F::lit(3.0)
}

/// Driver's cost: `gamma * (approach + ride + dropoff centre distance)`.
pub fn compute_cost<F: Scalar>(driver_loc: GridPoint<F>, pickup: GridPoint<F>, dropoff: GridPoint<F>, gamma: F) -> F {
    gamma * (manhattan(driver_loc, pickup) + manhattan(pickup, dropoff) + dropoff.center_dist())
}

pub fn driver_utility<F: Scalar>(wtp: F, cost: F) -> F {
    wtp - cost
}

pub fn is_profitable<F: Scalar>(driver: &DriverState<F>, p: &PassengerRequest<F>) -> bool {
    let cost = compute_cost(driver.location, p.pickup, p.dropoff, driver.gamma);
    driver_utility(p.wtp, cost) > F::zero()
}

pub fn wait_distance<F: Scalar>(driver: &DriverState<F>, p: &PassengerRequest<F>) -> F {
    manhattan(driver.location, p.pickup)
}

/// Observed range of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorRange<F> {
    pub min: F,
    pub max: F,
}

impl<F: Scalar> FactorRange<F> {
    pub fn of(values: impl IntoIterator<Item = F>) -> Self {
        let mut it = values.into_iter();
        let first = it.next().unwrap_or_else(F::zero);
        it.fold(Self { min: first, max: first }, |r, v| Self {
            min: r.min.min(v),
            max: r.max.max(v),
        })
    }

    /// Min-max scaling to `[0, 1]`; a degenerate range maps everything to 0.
    pub fn normalize(&self, v: F) -> F {
        if self.max == self.min {
            F::zero()
        } else {
            (v - self.min) / (self.max - self.min)
        }
    }
}

/// Per-round ranges for the normalised preference factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationContext<F> {
    /// Driver-to-pickup Manhattan distance over all pairs.
    pub wait: FactorRange<F>,
    /// Driver aggregate income.
    pub income: FactorRange<F>,
    /// Dropoff distance from the centre.
    pub center: FactorRange<F>,
}

impl<F: Scalar> NormalizationContext<F> {
    pub fn build(drivers: &[DriverState<F>], passengers: &[PassengerRequest<F>]) -> Self {
        Self {
            wait: FactorRange::of(
                drivers
                    .iter()
                    .flat_map(|d| passengers.iter().map(move |p| wait_distance(d, p))),
            ),
            income: FactorRange::of(drivers.iter().map(|d| d.total_income)),
            center: FactorRange::of(passengers.iter().map(|p| p.dropoff.center_dist())),
        }
    }
}

/// Driver score from its ingredients:
/// `-wtp + w_p * (w_prox * gamma * pickup + w_center * c * norm_center²)`.
pub fn driver_score_terms<F: Scalar>(wtp: F, gamma: F, w_p: F, pickup: F, norm_center: F, w: &EconWeights<F>) -> F {
    let cost = w.w_prox * gamma * pickup + w.w_center * w.center_quad_coeff * norm_center * norm_center;
    -wtp + w_p * cost
}

/// Driver `driver`'s score for passenger `p`. Only defined for pairs with
/// positive driver utility.
pub fn driver_pref_score<F: Scalar>(
    driver: &DriverState<F>,
    p: &PassengerRequest<F>,
    w: &EconWeights<F>,
    norm: &NormalizationContext<F>,
) -> Result<F> {
    if !is_profitable(driver, p) {
        return Err(Error::Inadmissible {
            driver: driver.id.0,
            passenger: p.id.0,
        });
    }
    let center = norm.center.normalize(p.dropoff.center_dist());
    Ok(driver_score_terms(
        p.wtp,
        driver.gamma,
        driver.w_p,
        wait_distance(driver, p),
        center,
        w,
    ))
}

/// Passenger `p`'s score for `driver`: `w_t * norm_wait + w_i * norm_income`.
pub fn passenger_pref_score<F: Scalar>(
    p: &PassengerRequest<F>,
    driver: &DriverState<F>,
    w: &EconWeights<F>,
    norm: &NormalizationContext<F>,
) -> F {
    w.w_t * norm.wait.normalize(wait_distance(driver, p)) + w.w_i * norm.income.normalize(driver.total_income)
}

/// Income-blind passenger score: `w_t * norm_wait`.
pub fn passenger_wait_score<F: Scalar>(
    p: &PassengerRequest<F>,
    driver: &DriverState<F>,
    w: &EconWeights<F>,
    norm: &NormalizationContext<F>,
) -> F {
    w.w_t * norm.wait.normalize(wait_distance(driver, p))
}

fn sort_ranked<I: Ord + Copy, F: Scalar>(list: &mut [(I, F)]) {
    list.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("scores are not NaN").then(a.0.cmp(&b.0)));
}

/// Builds both sides' truncated lists for one round.
///
/// A pair is listed iff the driver's utility is positive and the wait is at
/// most `wait_threshold`.
pub fn build_preferences<F: Scalar>(
    drivers: &[DriverState<F>],
    passengers: &[PassengerRequest<F>],
    w: &EconWeights<F>,
    wait_threshold: F,
    scoring: PassengerScoring,
) -> PreferenceProfile<F> {
    let norm = NormalizationContext::build(drivers, passengers);
    let mut driver_lists: Vec<Vec<(PassengerId, F)>> = vec![Vec::new(); drivers.len()];
    let mut passenger_lists: Vec<Vec<(DriverId, F)>> = vec![Vec::new(); passengers.len()];

    for (di, d) in drivers.iter().enumerate() {
        for (pi, p) in passengers.iter().enumerate() {
            if !(is_profitable(d, p) && wait_distance(d, p) <= wait_threshold) {
                continue;
            }
            let ds = driver_pref_score(d, p, w, &norm).expect("profitable pair");
            let ps = match scoring {
                PassengerScoring::IncomeAware => passenger_pref_score(p, d, w, &norm),
                PassengerScoring::WaitOnly => passenger_wait_score(p, d, w, &norm),
            };
            driver_lists[di].push((PassengerId(pi), ds));
            passenger_lists[pi].push((DriverId(di), ps));
        }
    }
    driver_lists.iter_mut().for_each(|l| sort_ranked(l));
    passenger_lists.iter_mut().for_each(|l| sort_ranked(l));
    PreferenceProfile::new(driver_lists, passenger_lists).expect("lists built mutually and sorted")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::DriverId;

    fn pt(x: f64, y: f64) -> GridPoint<f64> {
        GridPoint::new(x, y)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn wtp_examples() {
        let v = compute_wtp(pt(0.0, 0.0), pt(3.0, 4.0), 1.0);
        assert!(close(v, 9.5 / 3.0));
        assert!(close(compute_wtp(pt(0.0, 0.0), pt(3.0, 4.0), 0.9), 0.9 * 9.5 / 3.0));
        assert!((compute_wtp(pt(0.0, 0.0), pt(3.0, 4.0), 0.9) - 2.85).abs() < 1e-9);
        assert!(close(compute_wtp(pt(10.0, 0.0), pt(0.0, 10.0), 1.0), 10.0));
    }

    #[test]
    fn cost_examples() {
        assert_eq!(compute_cost(pt(1.0, 1.0), pt(0.0, 0.0), pt(3.0, 4.0), 0.5), 7.0);
        assert_eq!(compute_cost(pt(9.0, -3.0), pt(0.0, 0.0), pt(3.0, 4.0), 0.0), 0.0);
        assert_eq!(compute_cost(pt(0.0, 0.0), pt(0.0, 0.0), pt(6.0, 8.0), 1.0), 24.0);
    }

    #[test]
    fn utility_examples() {
        assert_eq!(driver_utility(5.0, 3.0), 2.0);
        assert_eq!(driver_utility(3.0, 3.0), 0.0);
        assert_eq!(driver_utility(1.0, 7.0), -6.0);
    }

    #[test]
    fn degenerate_range_normalizes_to_zero() {
        let r = FactorRange::of([4.0, 4.0]);
        assert_eq!(r.normalize(4.0), 0.0);
        let r = FactorRange::of([2.0, 6.0, 4.0]);
        assert_eq!((r.min, r.max), (2.0, 6.0));
        assert_eq!(r.normalize(4.0), 0.5);
    }

    fn driver_at_origin() -> DriverState<f64> {
        DriverState::new(DriverId(0), pt(0.0, 0.0), 0.5, 1.0)
    }

    fn passenger(id: usize, pickup: GridPoint<f64>, dropoff: GridPoint<f64>, wtp: f64) -> PassengerRequest<f64> {
        let mut p = PassengerRequest::new(PassengerId(id), pickup, dropoff, 1.0);
        p.wtp = wtp;
        p
    }

    fn norm_center(lo: f64, hi: f64) -> NormalizationContext<f64> {
        NormalizationContext {
            wait: FactorRange { min: 0.0, max: 1.0 },
            income: FactorRange { min: 0.0, max: 0.0 },
            center: FactorRange { min: lo, max: hi },
        }
    }

    #[test]
    fn driver_score_hand_example() {
        let w = EconWeights::default();
        // gamma 0.5, w_p 1; P1: wtp 4, pickup 2, centre 1; P2: wtp 4.5, pickup 6, centre 0.
        let s1 = driver_score_terms(4.0, 0.5, 1.0, 2.0, 1.0, &w);
        let s2 = driver_score_terms(4.5, 0.5, 1.0, 6.0, 0.0, &w);
        assert!(close(s1, -2.9), "{s1}");
        assert!(close(s2, -1.5), "{s2}");
        assert!(s1 < s2);
    }

    #[test]
    fn driver_score_rejects_unprofitable_pair() {
        let d = driver_at_origin();
        let p = passenger(0, pt(2.0, 0.0), pt(0.0, 2.0), 4.0);
        // cost = 0.5 * (2 + 4 + 2) = 4, utility 0
        let err = driver_pref_score(&d, &p, &EconWeights::default(), &norm_center(0.0, 1.0));
        assert!(matches!(
            err,
            Err(Error::Inadmissible {
                driver: 0,
                passenger: 0
            })
        ));
        let p = PassengerRequest { wtp: 4.0001, ..p };
        assert!(driver_pref_score(&d, &p, &EconWeights::default(), &norm_center(0.0, 1.0)).is_ok());
    }

    #[test]
    fn driver_score_linear_in_wtp() {
        let d = DriverState {
            gamma: 0.01,
            ..driver_at_origin()
        };
        let w = EconWeights::default();
        let norm = norm_center(0.0, 10.0);
        let a = passenger(0, pt(3.0, 0.0), pt(3.0, 3.0), 5.0);
        let b = PassengerRequest { wtp: 3.0, ..a.clone() };
        let sa = driver_pref_score(&d, &a, &w, &norm).unwrap();
        let sb = driver_pref_score(&d, &b, &w, &norm).unwrap();
        assert!(close(sb - sa, 2.0));
    }

    #[test]
    fn no_center_weight_ranks_by_wtp_and_pickup() {
        let d = DriverState {
            gamma: 0.1,
            ..driver_at_origin()
        };
        let w = EconWeights {
            w_center: 0.0,
            ..Default::default()
        };
        let ps = [
            passenger(0, pt(10.0, 0.0), pt(40.0, 0.0), 20.0), // -20 + 1.0 = -19
            passenger(1, pt(2.0, 0.0), pt(-30.0, 0.0), 18.5), // -18.5 + 0.2 = -18.3
            passenger(2, pt(0.0, 30.0), pt(0.0, 45.0), 22.0), // -22 + 3.0 = -19
        ];
        let norm = NormalizationContext::build(std::slice::from_ref(&d), &ps);
        let mut scored: Vec<(usize, f64)> = ps
            .iter()
            .map(|p| (p.id.0, driver_pref_score(&d, p, &w, &norm).unwrap()))
            .collect();
        scored.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
        let order: Vec<usize> = scored.iter().map(|s| s.0).collect();
        assert_eq!(order, vec![0, 2, 1]);
    }

    #[test]
    fn passenger_score_cases() {
        let mut d0 = DriverState::new(DriverId(0), pt(0.0, 0.0), 0.1, 1.0);
        let mut d1 = DriverState::new(DriverId(1), pt(20.0, 0.0), 0.1, 1.0);
        let p = passenger(0, pt(5.0, 0.0), pt(5.0, 5.0), 10.0);
        let ps = [p.clone()];

        // Round one: incomes all zero, so the income term vanishes.
        let norm = NormalizationContext::build(&[d0.clone(), d1.clone()], &ps);
        let fair = EconWeights {
            w_i: 1.0,
            ..Default::default()
        };
        let plain = EconWeights::default();
        for d in [&d0, &d1] {
            assert_eq!(
                passenger_pref_score(&p, d, &fair, &norm),
                passenger_pref_score(&p, d, &plain, &norm)
            );
        }

        // Income only: lowest earner first.
        d0.total_income = 50.0;
        d1.total_income = 10.0;
        let norm = NormalizationContext::build(&[d0.clone(), d1.clone()], &ps);
        let income_only = EconWeights {
            w_t: 0.0,
            w_i: 1.0,
            ..Default::default()
        };
        assert!(
            passenger_pref_score(&p, &d1, &income_only, &norm) < passenger_pref_score(&p, &d0, &income_only, &norm)
        );
        // Wait only: nearest first.
        assert!(passenger_pref_score(&p, &d0, &plain, &norm) < passenger_pref_score(&p, &d1, &plain, &norm));
        assert_eq!(
            passenger_pref_score(&p, &d0, &plain, &norm),
            passenger_wait_score(&p, &d0, &plain, &norm)
        );
    }

    #[test]
    fn unprofitable_passenger_is_unlisted() {
        let d = DriverState::new(DriverId(0), pt(0.0, 0.0), 1.0, 1.0);
        let ps = vec![passenger(0, pt(1.0, 0.0), pt(2.0, 0.0), 0.5)];
        let prof = build_preferences(&[d], &ps, &EconWeights::default(), 40.0, PassengerScoring::IncomeAware);
        assert!(prof.driver_list(DriverId(0)).is_empty());
        assert!(prof.passenger_list(PassengerId(0)).is_empty());
    }

    #[test]
    fn distant_drivers_filtered() {
        let drivers = vec![
            DriverState::new(DriverId(0), pt(-40.0, -40.0), 0.0, 1.0),
            DriverState::new(DriverId(1), pt(40.0, 40.0), 0.0, 1.0),
        ];
        let ps = vec![passenger(0, pt(0.0, 0.0), pt(1.0, 1.0), 5.0)];
        let prof = build_preferences(
            &drivers,
            &ps,
            &EconWeights::default(),
            40.0,
            PassengerScoring::IncomeAware,
        );
        assert!(prof.passenger_list(PassengerId(0)).is_empty());
        let prof = build_preferences(
            &drivers,
            &ps,
            &EconWeights::default(),
            80.0,
            PassengerScoring::IncomeAware,
        );
        assert_eq!(prof.passenger_list(PassengerId(0)).len(), 2);
    }

    #[test]
    fn three_by_three_matches_brute_force_sort() {
        let drivers = vec![
            DriverState::new(DriverId(0), pt(0.0, 0.0), 0.1, 1.0),
            DriverState::new(DriverId(1), pt(10.0, -5.0), 0.2, 0.8),
            DriverState::new(DriverId(2), pt(-8.0, 12.0), 0.05, 1.3),
        ];
        let ps = vec![
            PassengerRequest::new(PassengerId(0), pt(3.0, 4.0), pt(20.0, 10.0), 1.0),
            PassengerRequest::new(PassengerId(1), pt(-5.0, 9.0), pt(-25.0, -10.0), 1.1),
            PassengerRequest::new(PassengerId(2), pt(12.0, -2.0), pt(0.0, 1.0), 0.9),
        ];
        let w = EconWeights::default();
        let prof = build_preferences(&drivers, &ps, &w, 40.0, PassengerScoring::IncomeAware);

        // Independent recomputation straight from the formulas.
        let center: Vec<f64> = ps
            .iter()
            .map(|p| (p.dropoff.x.powi(2) + p.dropoff.y.powi(2)).sqrt())
            .collect();
        let (cmin, cmax) = (
            center.iter().cloned().fold(f64::MAX, f64::min),
            center.iter().cloned().fold(f64::MIN, f64::max),
        );
        let man = |a: GridPoint<f64>, b: GridPoint<f64>| (a.x - b.x).abs() + (a.y - b.y).abs();
        let mut waits = vec![];
        for d in &drivers {
            for p in &ps {
                waits.push(man(d.location, p.pickup));
            }
        }
        let (wmin, wmax) = (
            waits.iter().cloned().fold(f64::MAX, f64::min),
            waits.iter().cloned().fold(f64::MIN, f64::max),
        );
        for (di, d) in drivers.iter().enumerate() {
            let mut expect: Vec<(f64, usize)> = vec![];
            for (pi, p) in ps.iter().enumerate() {
                let cost = d.gamma * (man(d.location, p.pickup) + man(p.pickup, p.dropoff) + center[pi]);
                if p.wtp - cost <= 0.0 || man(d.location, p.pickup) > 40.0 {
                    continue;
                }
                let nc = (center[pi] - cmin) / (cmax - cmin);
                expect.push((
                    -p.wtp + d.w_p * (d.gamma * man(d.location, p.pickup) + 0.1 * nc * nc),
                    pi,
                ));
            }
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let got: Vec<usize> = prof.driver_list(DriverId(di)).iter().map(|e| e.0 .0).collect();
            let want: Vec<usize> = expect.iter().map(|e| e.1).collect();
            assert_eq!(got, want, "driver {di}");
            for (g, e) in prof.driver_list(DriverId(di)).iter().zip(&expect) {
                assert!((g.1 - e.0).abs() < 1e-12);
            }
        }
        for (pi, p) in ps.iter().enumerate() {
            let mut expect: Vec<(f64, usize)> = vec![];
            for (di, d) in drivers.iter().enumerate() {
                if prof.is_admissible(DriverId(di), PassengerId(pi)) {
                    expect.push(((man(d.location, p.pickup) - wmin) / (wmax - wmin), di));
                }
            }
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let got: Vec<usize> = prof.passenger_list(PassengerId(pi)).iter().map(|e| e.0 .0).collect();
            assert_eq!(got, expect.iter().map(|e| e.1).collect::<Vec<_>>(), "passenger {pi}");
        }
        assert!(prof.admissible_pairs() > 3, "fixture should be non-trivial");
    }
}
