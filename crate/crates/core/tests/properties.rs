use proptest::prelude::*;

use wardowski::comparison::{derive_phi, ComparisonFunction};
use wardowski::metric_space::{
    cauchy_verdict, semi_cauchy_verdict, FiniteMetricSpace, RealLine, SequenceTrace,
};
use wardowski::numerics::{monotone_sup_below, ExtReal, Tolerance};
use wardowski::solver::{hyers_ulam_bound, picard_iterate, PicardConfig, RunStatus, SelfMap};
use wardowski::verifier::{
    check_af_contractive, check_strict_and_nonexpansive, extract_witness, finite_self_map, CheckMode,
};
use wardowski::wardowski::{
    classify_regularity, default_zero_sequence, make_log, make_log_poly, make_neg_power, make_step_log,
    RegularityStatus, WardowskiFunction,
};

fn builtin() -> impl Strategy<Value = WardowskiFunction> {
    prop_oneof![
        (0.1..3.0, 0.1..3.0, 0.0..3.0).prop_map(|(a, b, g): (f64, f64, f64)| make_log_poly(a, b, g.max(1e-3)).unwrap()),
        (0.1..3.0).prop_map(|d: f64| make_neg_power(d).unwrap()),
        Just(make_log()),
        (0.1..2.0, 0.05..5.0).prop_map(|(j, c): (f64, f64)| make_step_log(j, c).unwrap()),
    ]
}

/// Independent metric-axiom oracle over a full matrix.
fn is_metric(rows: &[Vec<f64>]) -> bool {
    let n = rows.len();
    (0..n).all(|i| {
        rows[i][i] == 0.0
            && (0..n).all(|j| {
                let d = rows[i][j];
                d.is_finite()
                    && d >= 0.0
                    && d == rows[j][i]
                    && (i == j || d > 0.0)
                    && (0..n).all(|k| rows[i][k] <= d + rows[j][k])
            })
    })
}

fn symmetric_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..7).prop_flat_map(|n| {
        prop::collection::vec(1u32..10, n * (n - 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0.0; n]; n];
            let mut it = upper.into_iter();
            #[allow(clippy::needless_range_loop)]
            for i in 0..n {
                for j in i + 1..n {
                    let d = f64::from(it.next().unwrap());
                    rows[i][j] = d;
                    rows[j][i] = d;
                }
            }
            rows
        })
    })
}

fn planar_space() -> impl Strategy<Value = (FiniteMetricSpace, Vec<usize>)> {
    (2usize..9)
        .prop_flat_map(|n| (prop::collection::vec((0.0..1.0, 0.0..1.0), n), prop::collection::vec(0..n, n)))
        .prop_filter_map("rounded distances break the triangle inequality", |(pts, table)| {
            let rows = pts
                .iter()
                .map(|p: &(f64, f64)| pts.iter().map(|q| (p.0 - q.0).hypot(p.1 - q.1)).collect())
                .collect();
            FiniteMetricSpace::new(rows).ok().map(|space| (space, table))
        })
}

proptest! {
    #[test]
    fn sup_is_monotone_in_threshold(t1 in -20.0..5.0f64, gap in 0.0..5.0f64) {
        let tol = Tolerance::default();
        let g = |s: f64| if s == 0.0 { ExtReal::NegInf } else { ExtReal::Finite(s.ln()) };
        let low = monotone_sup_below(g, ExtReal::Finite(t1), 0.0, 10.0, &tol).unwrap();
        let high = monotone_sup_below(g, ExtReal::Finite(t1 + gap), 0.0, 10.0, &tol).unwrap();
        prop_assert!(low.value <= high.upper);
        prop_assert!(g(low.value) <= ExtReal::Finite(t1));
    }

    #[test]
    fn derived_phi_is_monotone(f in builtin(), a in 0.05..2.0f64, da in 0.0..2.0f64, t in 0.0..5.0f64, dt in 0.0..5.0f64) {
        let tol = Tolerance::default();
        let base = derive_phi(&f, a, t, &tol).unwrap();
        let wider = derive_phi(&f, a, t + dt, &tol).unwrap();
        let stronger = derive_phi(&f, a + da, t, &tol).unwrap();
        prop_assert!(base.phi <= wider.phi + wider.bracket_width);
        prop_assert!(stronger.phi <= base.phi + base.bracket_width);
        prop_assert!(base.phi <= t);
    }

    #[test]
    fn matrix_accepted_iff_metric(rows in symmetric_matrix()) {
        prop_assert_eq!(FiniteMetricSpace::new(rows.clone()).is_ok(), is_metric(&rows));
    }

    #[test]
    fn order_reflecting_contrapositive(f in builtin(), t in 1e-6..20.0f64, s in 1e-6..20.0f64) {
        if f.eval(t) < f.eval(s) {
            prop_assert!(t < s);
        }
    }

    #[test]
    fn cauchy_implies_semi_cauchy(steps in prop::collection::vec(-1.0..1.0f64, 2..80), eps in 0.01..2.0f64) {
        let mut x = 0.0;
        let mut pts = vec![x];
        for s in steps {
            x += s;
            pts.push(x);
        }
        let trace = SequenceTrace::from_points(&RealLine, pts);
        if cauchy_verdict(&RealLine, &trace, eps).is_cauchy() {
            prop_assert!(semi_cauchy_verdict(&trace, eps).holds);
        }
    }

    #[test]
    fn summable_steps_give_cauchy(r in 0.05..0.9f64, len in 16usize..200, signs in prop::collection::vec(any::<bool>(), 200)) {
        let mut x = 0.0;
        let mut pts = vec![x];
        for (n, &up) in signs.iter().take(len - 1).enumerate() {
            x += if up { 1.0 } else { -1.0 } * r.powi(n as i32);
            pts.push(x);
        }
        let trace = SequenceTrace::from_points(&RealLine, pts);
        let tail: f64 = trace.rho()[len / 8..].iter().sum();
        let report = cauchy_verdict(&RealLine, &trace, tail * (1.0 + 1e-9) + f64::MIN_POSITIVE);
        prop_assert!(report.is_cauchy(), "{report:?}");
    }

    #[test]
    fn af_implies_strict_implies_nonexpansive((space, table) in planar_space(), a in 0.01..0.5f64) {
        let map = finite_self_map(&space, table, "table").unwrap();
        let af = check_af_contractive(&map, &make_log(), a, &space, CheckMode::Exhaustive).unwrap();
        let (strict, nonexp) = check_strict_and_nonexpansive(&map, &space, CheckMode::Exhaustive).unwrap();
        if af.holds() {
            prop_assert!(strict.holds());
        }
        if strict.holds() {
            prop_assert!(nonexp.holds());
        }
    }

    #[test]
    fn witness_ranks_are_monotone(steps in prop::collection::vec(0.01..1.0f64, 20..300), eta in 0.3..3.0f64) {
        let mut x = 0.0;
        let mut pts = vec![x];
        for s in steps {
            x += s;
            pts.push(x);
        }
        let trace = SequenceTrace::from_points(&RealLine, pts);
        if let Ok(w) = extract_witness(&RealLine, &trace, eta, &[], None) {
            prop_assert!(w.checks.monotone_ranks);
            prop_assert!(w.checks.overshoot);
            if w.j_eta.is_some() {
                prop_assert!(w.checks.minimality);
            }
        }
    }

    #[test]
    fn neg_power_regular_iff_delta_below_one(delta in 0.05..3.0f64, k_frac in 0.0..1.0f64) {
        let zs = default_zero_sequence();
        let f = make_neg_power(delta).unwrap();
        if delta < 0.85 {
            let k = delta + 0.1 + k_frac * (0.99 - delta - 0.1);
            prop_assert_eq!(classify_regularity(&f, k, &zs).status, RegularityStatus::Regular);
        } else if delta >= 1.0 {
            let k = 0.05 + k_frac * 0.94;
            prop_assert_eq!(classify_regularity(&f, k, &zs).status, RegularityStatus::NotRegular);
        }
    }

    #[test]
    fn hyers_ulam_bounds_every_iterate(alpha in 0.05..0.95f64, x0 in -10.0..10.0f64) {
        let map = SelfMap::new("alpha x", RealLine, move |x: &f64| alpha * x);
        let eps = 1e-9;
        let run = picard_iterate(&map, x0, &PicardConfig::new(eps, 5000));
        let settled = matches!(run.status, RunStatus::Converged { .. } | RunStatus::FixedPointHit { .. });
        prop_assert!(settled, "{:?}", run.status);
        let phi = ComparisonFunction::linear(alpha).unwrap();
        let tol = Tolerance::default();
        for (x, &r) in run.trace.points().iter().zip(run.trace.rho()) {
            let bound = hyers_ulam_bound(&phi, r, &tol, 1000).unwrap();
            prop_assert!(x.abs() <= bound + eps);
        }
    }
}
