//! Test-only oracles, independent of the estimator code paths.
#![allow(dead_code)]

use cox_trend::model::ObservationSeries;

/// Maximizes the Poisson log-likelihood by brute force: a `coarse x coarse`
/// grid over `(ln lambda0, beta)` followed by repeated local zooming.
/// The log-likelihood is concave in `(ln lambda0, beta)`, so zooming on the
/// best grid cell converges to the global maximum.
pub fn grid_mle(series: &ObservationSeries, coarse: usize) -> (f64, f64) {
    let recs: Vec<(f64, f64, f64)> = series
        .intervals()
        .iter()
        .map(|r| (r.center, r.length, r.count))
        .collect();
    let total: f64 = recs.iter().map(|r| r.2).sum();
    let kt: f64 = recs.iter().map(|r| r.2 * r.0).sum();
    // Log-likelihood up to the constant sum k (ln T - ln k!):
    // total * theta - beta * kt - e^theta * sum T e^{-beta t}.
    let search = |theta_lo: f64, theta_hi: f64, beta_lo: f64, beta_hi: f64, m: usize| {
        let dth = (theta_hi - theta_lo) / (m - 1) as f64;
        let db = (beta_hi - beta_lo) / (m - 1) as f64;
        let e_theta: Vec<f64> = (0..m).map(|j| (theta_lo + j as f64 * dth).exp()).collect();
        let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
        for i in 0..m {
            let beta = beta_lo + i as f64 * db;
            let exposure: f64 = recs.iter().map(|&(t, len, _)| len * (-beta * t).exp()).sum();
            for (j, &et) in e_theta.iter().enumerate() {
                let theta = theta_lo + j as f64 * dth;
                let v = total * theta - beta * kt - et * exposure;
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        (
            theta_lo + best.2 as f64 * dth,
            beta_lo + best.1 as f64 * db,
            dth,
            db,
            best.1,
            best.2,
        )
    };

    let (mut theta, mut beta, mut dth, mut db, bi, bj) = search(-8.0, 6.0, -8.0, 8.0, coarse);
    assert!(
        bi > 0 && bi < coarse - 1 && bj > 0 && bj < coarse - 1,
        "grid argmax on the boundary: widen the oracle grid"
    );
    while db > 1e-11 || dth > 1e-11 {
        let (t, b, nt, nb, _, _) = search(theta - 2.0 * dth, theta + 2.0 * dth, beta - 2.0 * db, beta + 2.0 * db, 21);
        theta = t;
        beta = b;
        dth = nt;
        db = nb;
    }
    (theta.exp(), beta)
}

/// True when every event sits in the single earliest or single latest interval.
pub fn is_boundary(counts: &[f64]) -> bool {
    let n = counts.len();
    counts[1..].iter().all(|&k| k == 0.0) || counts[..n - 1].iter().all(|&k| k == 0.0)
}

/// Unit-length intervals centered on the window midpoint.
pub fn unit_series(counts: &[f64]) -> ObservationSeries {
    let s = ObservationSeries::contiguous(0.0, 1.0, counts);
    cox_trend::model::Origin::Midpoint.apply(&s)
}

/// All count vectors of length `n` with entries in `0..=max`.
pub fn enumerate_counts(n: usize, max: u32) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=max).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k as f64);
                    v
                })
            })
            .collect();
    }
    out
}

/// Back-to-back intervals of the given lengths starting at 0, centered on the
/// window midpoint.
pub fn mixed_series(lengths: &[f64], counts: &[f64]) -> ObservationSeries {
    let mut start = 0.0;
    let recs = lengths
        .iter()
        .zip(counts)
        .map(|(&len, &k)| {
            let r = cox_trend::model::IntervalRecord::from_bounds(start, start + len, k);
            start += len;
            r
        })
        .collect();
    cox_trend::model::Origin::Midpoint.apply(&ObservationSeries::new(recs, "year"))
}
