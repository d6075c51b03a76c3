use std::collections::BTreeMap;
use std::fs;

use ridematch::reporting::{compare_table, read_csv, summarize, sweep_rows, write_csv, MetricsRow, NO_AXIS};
use ridematch::{run_sweep, Config, Mechanism, SweepAxis};

type Key = (Mechanism, u64);

/// Mean of every float column per (mechanism, axis value bits).
fn aggregate(rows: &[MetricsRow]) -> BTreeMap<Key, [f64; 5]> {
    let mut acc: BTreeMap<Key, ([f64; 5], usize)> = BTreeMap::new();
    for r in rows {
        let e = acc.entry((r.mechanism, r.axis_value.to_bits())).or_default();
        let vals = [r.total_revenue, r.revenue_per_ride, r.mean_income, r.income_sd, r.gini];
        for (s, v) in e.0.iter_mut().zip(vals) {
            *s += v;
        }
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(k, (sums, n))| (k, sums.map(|s| s / n as f64)))
        .collect()
}

#[test]
fn sweep_file_reaggregates_to_in_memory_means() {
    let cells = run_sweep(
        &Config::default(),
        SweepAxis::WI,
        &[0.0, 1.0],
        &(1..=9).collect::<Vec<_>>(),
        &Mechanism::ALL,
    )
    .unwrap();
    let rows = sweep_rows(&cells);
    assert_eq!(rows.len(), 72);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    write_csv(&rows, &path).unwrap();
    let back = read_csv(&path).unwrap();
    let rounded: Vec<_> = rows.iter().map(MetricsRow::rounded).collect();
    assert_eq!(back, rounded);

    let from_file = aggregate(&back);
    let from_rounded = aggregate(&rounded);
    let exact = aggregate(&rows);
    for (k, file_means) in &from_file {
        for i in 0..5 {
            let (f, r, e) = (file_means[i], from_rounded[k][i], exact[k][i]);
            assert!((f - r).abs() <= 1e-6 * r.abs(), "{k:?} column {i}: {f} vs {r}");
            // Six significant digits bound each value's relative error by 5e-6.
            assert!((f - e).abs() <= 5e-6 * e.abs(), "{k:?} column {i}: {f} vs {e}");
        }
    }

    let second = dir.path().join("again.csv");
    write_csv(&back, &second).unwrap();
    assert_eq!(fs::read(&path).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn comparison_argmax_matches_raw_summaries() {
    let seeds: Vec<u64> = (1..=9).collect();
    let cells = run_sweep(
        &Config {
            n_rounds: 20,
            ..Default::default()
        },
        SweepAxis::WI,
        &[0.0],
        &seeds,
        &Mechanism::ALL,
    )
    .unwrap();
    let rows: Vec<_> = cells.iter().map(|c| summarize(&c.summary, NO_AXIS, 0.0)).collect();
    let table = compare_table(&rows).unwrap();
    assert_eq!(table.len(), 9);
    for row in &table {
        let raw: Vec<(Mechanism, f64)> = cells
            .iter()
            .filter(|c| c.seed == row.seed)
            .map(|c| (c.mechanism, c.summary.total_revenue))
            .collect();
        let best = raw.iter().fold(raw[0], |b, &x| if x.1 > b.1 { x } else { b });
        assert_eq!(row.best, best.0, "seed {}", row.seed);
        for (m, total) in raw {
            assert_eq!(row.total(m), total);
        }
    }
}
