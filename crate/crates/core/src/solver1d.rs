//! One-dimensional Ameso(C) sweep.
//!
//! Starting from `l0`, the sweep walks right one point at a time, tracking the
//! best point `l*`, until some value exceeds `f(l*)` by at least `C` or the
//! interval ends. It then looks at the points already visited left of `l*`;
//! if one of them is `C` above `f(l*)` the search is finished. Otherwise it
//! walks left from `l0 - 1` under the same stopping rule.
//!
//! For an Ameso(C) pair both stopping rules certify that the global minimum
//! lies inside the visited range, so the sweep returns the exact minimum
//! while usually evaluating only part of the interval.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{IntPoint, IntervalDomain};
use crate::objective::Objective;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solve1DConfig {
    pub c: f64,
    /// Start point; the interval midpoint when `None`.
    pub start: Option<i64>,
    /// Slack for the `f(z) - f(l*) >= C` tests; the objective's default when `None`.
    pub tolerance: Option<f64>,
}

impl Solve1DConfig {
    pub fn new(c: f64) -> Self {
        Solve1DConfig {
            c,
            start: None,
            tolerance: None,
        }
    }

    pub fn start(mut self, l0: i64) -> Self {
        self.start = Some(l0);
        self
    }

    pub fn tolerance(mut self, eps: f64) -> Self {
        self.tolerance = Some(eps);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RightStop {
    Threshold,
    Exhausted,
    /// The start point is the right end of the interval.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeftPhase {
    /// A visited point left of `l*` already certified the left side.
    SkippedByStep4,
    Threshold,
    Exhausted,
    /// The start point is the left end of the interval.
    NotEntered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Start,
    Right,
    Step4,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Start,
    /// Value within `[f(l*), f(l*) + C)`; keep sweeping.
    Accept,
    /// New best point.
    Improve,
    StopThreshold,
    Exhausted,
    /// Step 4 found a certifying point left of `l*`.
    Step4Stop,
    Step4Continue,
}

impl Action {
    pub fn as_str(&self) -> &'static str {
        match self {
            Action::Start => "start",
            Action::Accept => "accept",
            Action::Improve => "improve",
            Action::StopThreshold => "stop_threshold",
            Action::Exhausted => "exhausted",
            Action::Step4Stop => "step4_stop",
            Action::Step4Continue => "step4_continue",
        }
    }
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Start => "start",
            Side::Right => "right",
            Side::Step4 => "step4",
            Side::Left => "left",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub side: Side,
    pub point: Option<i64>,
    pub value: Option<f64>,
    pub l_star: i64,
    pub action: Action,
}

/// Whether the `C` used for a solve is known to be admissible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificateStatus {
    Unchecked,
    Verified {
        #[serde(rename = "minimal_C")]
        minimal_c: f64,
    },
    /// `C` is below the minimal admissible constant; no optimality guarantee.
    CertificateUnverified {
        #[serde(rename = "minimal_C")]
        minimal_c: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub argmin: IntPoint,
    pub min_value: f64,
    pub start: i64,
    #[serde(rename = "C")]
    pub c: f64,
    /// Every evaluated point, ascending; always a contiguous range holding `start`.
    pub visited: Vec<i64>,
    pub evaluations: u64,
    pub stop_right: RightStop,
    pub left_phase: LeftPhase,
    pub trace: Vec<TraceRow>,
    pub certificate: CertificateStatus,
}

impl SolveReport {
    /// Records whether `self.c` covers the oracle's minimal constant.
    pub fn attach_certificate(&mut self, minimal_c: f64, tol: f64) {
        self.certificate = if self.c + tol >= minimal_c {
            CertificateStatus::Verified { minimal_c }
        } else {
            CertificateStatus::CertificateUnverified { minimal_c }
        };
    }

    pub fn certificate_unverified(&self) -> bool {
        matches!(self.certificate, CertificateStatus::CertificateUnverified { .. })
    }

    /// Trace as RFC 4180 CSV with header `step,side,point,value,l_star,action`.
    pub fn trace_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["step", "side", "point", "value", "l_star", "action"])
            .map_err(io)?;
        for r in &self.trace {
            w.write_record([
                r.step.to_string(),
                r.side.as_str().to_string(),
                r.point.map(|p| p.to_string()).unwrap_or_default(),
                r.value.map(|v| v.to_string()).unwrap_or_default(),
                r.l_star.to_string(),
                r.action.as_str().to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub(crate) fn check_c(c: f64, tol: f64) -> Result<()> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::arg(format!("C must be finite and non-negative, got {c}")));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::arg(format!(
            "tolerance must be finite and non-negative, got {tol}"
        )));
    }
    Ok(())
}

/// Sweep over `[lo, hi]` from `start` using `eval` for values.
///
/// With `reread` set, step 4 re-requests the values of visited points
/// instead of reading them back from the sweep's own record.
pub(crate) fn sweep<E>(
    axis: IntervalDomain,
    start: i64,
    c: f64,
    tol: f64,
    reread: bool,
    mut eval: E,
) -> Result<SolveReport>
where
    E: FnMut(i64) -> Result<f64>,
{
    check_c(c, tol)?;
    if !axis.contains_value(start) {
        return Err(Error::OutOfDomain(IntPoint::scalar(start)));
    }
    let (lo, hi) = (axis.lo(), axis.hi());
    let mut values = BTreeMap::new();
    let mut trace = Vec::new();
    let mut evaluations = 0u64;
    let mut call = |x: i64| -> Result<f64> {
        evaluations += 1;
        eval(x)
    };
    let row = |trace: &mut Vec<TraceRow>, side, point, value, l_star, action| {
        let step = trace.len();
        trace.push(TraceRow {
            step,
            side,
            point,
            value,
            l_star,
            action,
        });
    };

    let f0 = call(start)?;
    values.insert(start, f0);
    let (mut best, mut best_val) = (start, f0);
    row(
        &mut trace,
        Side::Start,
        Some(start),
        Some(f0),
        best,
        Action::Start,
    );

    // Steps 2-3: rightward sweep.
    let mut stop_right = RightStop::None;
    let mut x = start;
    while x < hi {
        x += 1;
        let v = call(x)?;
        values.insert(x, v);
        let gap = v - best_val;
        if gap < 0.0 {
            best = x;
            best_val = v;
            row(&mut trace, Side::Right, Some(x), Some(v), best, Action::Improve);
        } else if gap >= c - tol {
            stop_right = RightStop::Threshold;
            row(
                &mut trace,
                Side::Right,
                Some(x),
                Some(v),
                best,
                Action::StopThreshold,
            );
            break;
        } else {
            row(&mut trace, Side::Right, Some(x), Some(v), best, Action::Accept);
        }
    }
    if stop_right == RightStop::None && start < hi {
        stop_right = RightStop::Exhausted;
        row(&mut trace, Side::Right, None, None, best, Action::Exhausted);
    }

    // Step 4: a visited point left of l* that is already C above f(l*).
    // An empty candidate set counts as failing the test.
    let mut peak: Option<(i64, f64)> = None;
    for (&p, &stored) in values.range(..best) {
        let v = if reread { call(p)? } else { stored };
        if peak.is_none_or(|(_, m)| v >= m) {
            peak = Some((p, v));
        }
    }
    let step4_stop = peak.is_some_and(|(_, m)| m - best_val >= c - tol);
    row(
        &mut trace,
        Side::Step4,
        peak.map(|(p, _)| p),
        peak.map(|(_, v)| v),
        best,
        if step4_stop {
            Action::Step4Stop
        } else {
            Action::Step4Continue
        },
    );

    // Steps 5-6: leftward sweep.
    let left_phase = if step4_stop {
        LeftPhase::SkippedByStep4
    } else if start == lo {
        LeftPhase::NotEntered
    } else {
        let mut phase = LeftPhase::Exhausted;
        let mut x = start;
        while x > lo {
            x -= 1;
            let v = call(x)?;
            values.insert(x, v);
            let gap = v - best_val;
            if gap < 0.0 {
                best = x;
                best_val = v;
                row(&mut trace, Side::Left, Some(x), Some(v), best, Action::Improve);
            } else if gap >= c - tol {
                phase = LeftPhase::Threshold;
                row(
                    &mut trace,
                    Side::Left,
                    Some(x),
                    Some(v),
                    best,
                    Action::StopThreshold,
                );
                break;
            } else {
                row(&mut trace, Side::Left, Some(x), Some(v), best, Action::Accept);
            }
        }
        if phase == LeftPhase::Exhausted {
            row(&mut trace, Side::Left, None, None, best, Action::Exhausted);
        }
        phase
    };

    Ok(SolveReport {
        argmin: IntPoint::scalar(best),
        min_value: best_val,
        start,
        c,
        visited: values.into_keys().collect(),
        evaluations,
        stop_right,
        left_phase,
        trace,
        certificate: CertificateStatus::Unchecked,
    })
}

/// Minimizes `f` over `d` with the Ameso(C) sweep.
///
/// The result is the global minimum whenever `(d, f)` is an Ameso(`cfg.c`)
/// pair. For smaller `C` the report is still well formed but only locally
/// meaningful.
pub fn solve_1d(d: &IntervalDomain, f: &Objective, cfg: &Solve1DConfig) -> Result<SolveReport> {
    let start = cfg.start.unwrap_or_else(|| d.midpoint());
    let tol = cfg.tolerance.unwrap_or_else(|| f.default_tolerance());
    sweep(*d, start, cfg.c, tol, false, |x| f.eval_coords(&[x]))
}

fn gap(f: &Objective, from: i64, to: i64) -> Result<f64> {
    Ok(f.eval_coords(&[to])? - f.eval_coords(&[from])?)
}

/// Right stopping rule: `f(z) - f(x') >= C - tol` for `z > x'`. When it holds
/// the minimum over `[x_s, z]` is the global minimum.
pub fn check_stop_right(x_prime: i64, z: i64, f: &Objective, c: f64, tol: f64) -> Result<bool> {
    if z <= x_prime {
        return Err(Error::arg(format!("need z > x', got z = {z}, x' = {x_prime}")));
    }
    Ok(gap(f, x_prime, z)? >= c - tol)
}

/// Mirror of [`check_stop_right`] for `z < x'`; certifies `[z, x_t]`.
pub fn check_stop_left(x_prime: i64, z: i64, f: &Objective, c: f64, tol: f64) -> Result<bool> {
    if z >= x_prime {
        return Err(Error::arg(format!("need z < x', got z = {z}, x' = {x_prime}")));
    }
    Ok(gap(f, x_prime, z)? >= c - tol)
}

/// Both gaps at least `C - tol`; certifies `[z_s, z_t]`.
pub fn check_stop_two_sided(
    x_prime: i64,
    z_s: i64,
    z_t: i64,
    f: &Objective,
    c: f64,
    tol: f64,
) -> Result<bool> {
    if !(z_s < x_prime && x_prime < z_t) {
        return Err(Error::arg(format!(
            "need z_s < x' < z_t, got {z_s}, {x_prime}, {z_t}"
        )));
    }
    Ok(gap(f, x_prime, z_s)? >= c - tol && gap(f, x_prime, z_t)? >= c - tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Domain;
    use crate::models;
    use crate::oracle;
    use proptest::prelude::*;

    fn ex5() -> (IntervalDomain, Objective) {
        let t = models::example5_table();
        (t.domain().as_interval().unwrap(), t.to_objective())
    }

    #[test]
    fn example5_stops_at_27() {
        let (d, f) = ex5();
        let r = solve_1d(&d, &f, &Solve1DConfig::new(7.0).start(13)).unwrap();
        assert_eq!(r.argmin, IntPoint::scalar(17));
        assert_eq!(r.min_value, 4.0);
        assert_eq!(r.visited, (1..=27).collect::<Vec<_>>());
        assert_eq!(r.evaluations, 27);
        assert_eq!(f.eval_count(), 27);
        assert_eq!(r.stop_right, RightStop::Threshold);
        assert_eq!(r.left_phase, LeftPhase::Exhausted);
        // step 4 looked at f(14) = 8 among {13..16}
        let s4 = r.trace.iter().find(|t| t.side == Side::Step4).unwrap();
        assert_eq!((s4.point, s4.value), (Some(14), Some(8.0)));
        assert_eq!(s4.action, Action::Step4Continue);
    }

    #[test]
    fn example5_with_c8_scans_everything() {
        let (d, f) = ex5();
        let r = solve_1d(&d, &f, &Solve1DConfig::new(8.0).start(13)).unwrap();
        assert_eq!(r.visited, (1..=31).collect::<Vec<_>>());
        assert_eq!(r.evaluations, 31);
        assert_eq!(r.argmin, IntPoint::scalar(17));
        assert_eq!(r.stop_right, RightStop::Exhausted);
    }

    #[test]
    fn constant_function_with_zero_c() {
        let d = IntervalDomain::new(0, 10).unwrap();
        let f = Objective::new(|_| 2.5).integer_valued(false);
        let r = solve_1d(&d, &f, &Solve1DConfig::new(0.0).start(5)).unwrap();
        assert_eq!(r.min_value, 2.5);
        // ties keep the earlier point
        assert_eq!(r.argmin, IntPoint::scalar(5));
        // a zero gap already meets C = 0
        assert_eq!(r.stop_right, RightStop::Threshold);
        assert_eq!(r.left_phase, LeftPhase::Threshold);
        assert_eq!(r.visited, vec![4, 5, 6]);
    }

    #[test]
    fn quartic_from_every_start() {
        let d = models::quartic_domain();
        let f = models::quartic_objective();
        for l0 in -20..=20 {
            let r = solve_1d(&d, &f, &Solve1DConfig::new(4.0).start(l0)).unwrap();
            assert_eq!(r.argmin, IntPoint::scalar(3), "start {l0}");
            assert_eq!(r.min_value, -3.75);
        }
    }

    #[test]
    fn default_start_is_midpoint() {
        let (d, f) = ex5();
        let r = solve_1d(&d, &f, &Solve1DConfig::new(7.0)).unwrap();
        assert_eq!(r.start, 16);
        let d = IntervalDomain::new(0, 3).unwrap();
        assert_eq!(d.midpoint(), 2);
    }

    #[test]
    fn endpoints_as_start() {
        let (d, f) = ex5();
        let r = solve_1d(&d, &f, &Solve1DConfig::new(7.0).start(31)).unwrap();
        assert_eq!(r.stop_right, RightStop::None);
        assert_eq!(r.min_value, 4.0);
        let r = solve_1d(&d, &f, &Solve1DConfig::new(7.0).start(1)).unwrap();
        assert_eq!(r.min_value, 4.0);
        assert!(matches!(
            r.left_phase,
            LeftPhase::NotEntered | LeftPhase::SkippedByStep4
        ));
    }

    #[test]
    fn rejects_bad_arguments() {
        let (d, f) = ex5();
        assert!(matches!(
            solve_1d(&d, &f, &Solve1DConfig::new(7.0).start(0)),
            Err(Error::OutOfDomain(_))
        ));
        assert!(solve_1d(&d, &f, &Solve1DConfig::new(-1.0)).is_err());
        assert!(solve_1d(&d, &f, &Solve1DConfig::new(f64::NAN)).is_err());
        let bad = Objective::new(|p| if p[0] == 5 { f64::INFINITY } else { 0.0 });
        assert!(matches!(
            solve_1d(
                &IntervalDomain::new(0, 9).unwrap(),
                &bad,
                &Solve1DConfig::new(1.0).start(4)
            ),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn stopping_rule_examples() {
        let (_, f) = ex5();
        assert!(check_stop_right(17, 27, &f, 7.0, 0.0).unwrap());
        assert!(!check_stop_left(17, 14, &f, 7.0, 0.0).unwrap());
        assert!(check_stop_right(17, 14, &f, 7.0, 0.0).is_err());
        assert!(check_stop_right(17, 18, &f, 0.0, 0.0).unwrap());
        assert!(!check_stop_two_sided(17, 14, 27, &f, 7.0, 0.0).unwrap());

        let q = models::quartic_objective();
        assert!(check_stop_two_sided(3, 1, 4, &q, 4.0, 0.0).unwrap());
        let zero = Objective::new(|_| 0.0);
        assert!(check_stop_two_sided(0, -1, 1, &zero, 0.0, 0.0).unwrap());
        assert!(check_stop_two_sided(0, 1, 2, &zero, 0.0, 0.0).is_err());
    }

    #[test]
    fn stopping_rules_certify_against_brute_force() {
        let (d, f) = ex5();
        let global = oracle::brute_force_min(&d.into(), &f).unwrap().min_value;
        for xp in 1..=31 {
            for z in xp + 1..=31 {
                if check_stop_right(xp, z, &f, 7.0, 0.0).unwrap() {
                    let local = (1..=z)
                        .map(|x| f.eval_coords(&[x]).unwrap())
                        .fold(f64::MAX, f64::min);
                    assert_eq!(local, global, "x'={xp} z={z}");
                }
            }
            for z in 1..xp {
                if check_stop_left(xp, z, &f, 7.0, 0.0).unwrap() {
                    let local = (z..=31)
                        .map(|x| f.eval_coords(&[x]).unwrap())
                        .fold(f64::MAX, f64::min);
                    assert_eq!(local, global, "x'={xp} z={z}");
                }
            }
        }
    }

    #[test]
    fn trace_csv_layout() {
        let (d, f) = ex5();
        let r = solve_1d(&d, &f, &Solve1DConfig::new(7.0).start(13)).unwrap();
        let csv = r.trace_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("step,side,point,value,l_star,action"));
        assert_eq!(lines.next(), Some("0,start,13,7,13,start"));
        assert!(csv.contains("27,11,17,stop_threshold"));
        assert_eq!(csv.lines().count(), r.trace.len() + 1);
    }

    #[test]
    fn certificate_attachment() {
        let (d, f) = ex5();
        let mut r = solve_1d(&d, &f, &Solve1DConfig::new(5.0).start(13)).unwrap();
        assert_eq!(r.certificate, CertificateStatus::Unchecked);
        r.attach_certificate(7.0, 0.0);
        assert!(r.certificate_unverified());
        r.c = 7.0;
        r.attach_certificate(7.0, 0.0);
        assert!(!r.certificate_unverified());
    }

    fn window_min(f: &Objective, lo: i64, hi: i64) -> f64 {
        (lo..=hi)
            .map(|x| f.eval_coords(&[x]).unwrap())
            .fold(f64::INFINITY, f64::min)
    }

    fn window_max(f: &Objective, lo: i64, hi: i64) -> f64 {
        (lo..=hi)
            .map(|x| f.eval_coords(&[x]).unwrap())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn table_1d(vals: &[i64]) -> (IntervalDomain, Objective) {
        let d = IntervalDomain::new(0, vals.len() as i64 - 1).unwrap();
        let t =
            models::TabulatedObjective::new(Domain::Interval(d), vals.iter().map(|&v| v as f64).collect())
                .unwrap();
        (d, t.to_objective())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn sweep_matches_brute_force(vals in prop::collection::vec(0i64..=20, 2..40), extra in 0u8..3) {
            let (d, f) = table_1d(&vals);
            let dom = Domain::Interval(d);
            let c = oracle::minimal_c(&dom, &f).unwrap().minimal_c + f64::from(extra);
            let truth = oracle::brute_force_min(&dom, &f).unwrap();
            for l0 in d.lo()..=d.hi() {
                f.reset_count();
                let r = solve_1d(&d, &f, &Solve1DConfig::new(c).start(l0)).unwrap();
                prop_assert_eq!(r.min_value, truth.min_value);
                prop_assert!(truth.argmin_set.contains(&r.argmin));
                prop_assert_eq!(r.evaluations, r.visited.len() as u64);
                prop_assert_eq!(f.eval_count(), r.evaluations);
                prop_assert!(r.visited.contains(&l0));
                prop_assert!(r.visited.windows(2).all(|w| w[1] == w[0] + 1));
                prop_assert!(r.visited.len() as u64 <= d.len());
            }
        }

        /// Narrowing lemmas: under the two window conditions the largest
        /// maximizer sits in the right half of the window and x0 is the
        /// minimum of everything to its right; mirrored on the left.
        #[test]
        fn narrowing_lemmas(vals in prop::collection::vec(0i64..=12, 3..24)) {
            let (d, f) = table_1d(&vals);
            let c = oracle::minimal_c(&Domain::Interval(d), &f).unwrap().minimal_c;
            let hi = d.hi();
            for x0 in 0..=hi {
                for b in 1..=(hi - x0) {
                    let fx0 = f.eval_coords(&[x0]).unwrap();
                    let top = window_max(&f, x0, x0 + b);
                    if window_min(&f, x0, x0 + b) == fx0 && fx0 + c <= top {
                        let z = (x0..=x0 + b).rev().find(|&y| f.eval_coords(&[y]).unwrap() == top).unwrap();
                        prop_assert!(2 * z > 2 * x0 + b, "x0={} b={} z={}", x0, b, z);
                        prop_assert_eq!(window_min(&f, x0, hi), fx0);
                    }
                }
                for b in 1..=x0 {
                    let fx0 = f.eval_coords(&[x0]).unwrap();
                    let top = window_max(&f, x0 - b, x0);
                    if window_min(&f, x0 - b, x0) == fx0 && fx0 + c <= top {
                        let z = (x0 - b..=x0).find(|&y| f.eval_coords(&[y]).unwrap() == top).unwrap();
                        prop_assert!(2 * z < 2 * x0 - b, "x0={} b={} z={}", x0, b, z);
                        prop_assert_eq!(window_min(&f, 0, x0), fx0);
                    }
                }
            }
        }
    }
}
