//! Recursive minimization over product boxes.
//!
//! The outermost axis is swept with the one-dimensional Ameso(C) rule. Each
//! value `l` it visits is scored by the conditional minimum of `f` with that
//! axis fixed at `l`, which is itself computed by sweeping the next axis, and
//! so on down to raw evaluations of `f`. Conditional pairs of an Ameso(C)
//! pair are Ameso(C) pairs, so the same `C` is used at every level.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{BoxDomain, Domain, IntPoint};
use crate::models::TabulatedObjective;
use crate::objective::Objective;
use crate::oracle;
use crate::solver1d::{check_c, sweep, Side, SolveReport};

#[derive(Debug, Clone, PartialEq)]
pub struct ArpConfig {
    pub c: f64,
    /// Axes from innermost to outermost; the last entry is swept at the top
    /// level. Defaults to `0..n`.
    pub axis_order: Option<Vec<usize>>,
    /// Per-axis start points; axes without an entry start at their midpoint.
    pub starts: BTreeMap<usize, i64>,
    /// Reuse recorded conditional values in step 4 instead of re-solving.
    pub memoize: bool,
    pub tolerance: Option<f64>,
}

impl ArpConfig {
    pub fn new(c: f64) -> Self {
        ArpConfig {
            c,
            axis_order: None,
            starts: BTreeMap::new(),
            memoize: true,
            tolerance: None,
        }
    }

    pub fn start(mut self, axis: usize, value: i64) -> Self {
        self.starts.insert(axis, value);
        self
    }

    pub fn axis_order(mut self, order: Vec<usize>) -> Self {
        self.axis_order = Some(order);
        self
    }

    pub fn memoize(mut self, yes: bool) -> Self {
        self.memoize = yes;
        self
    }

    pub fn tolerance(mut self, eps: f64) -> Self {
        self.tolerance = Some(eps);
        self
    }

    fn resolved_order(&self, dim: usize) -> Result<Vec<usize>> {
        let order = self.axis_order.clone().unwrap_or_else(|| (0..dim).collect());
        let mut seen = vec![false; dim];
        if order.len() != dim {
            return Err(Error::arg(format!(
                "axis order {order:?} is not a permutation of 0..{dim}"
            )));
        }
        for &a in &order {
            if a >= dim || std::mem::replace(&mut seen[a], true) {
                return Err(Error::arg(format!(
                    "axis order {order:?} is not a permutation of 0..{dim}"
                )));
            }
        }
        Ok(order)
    }
}

/// One sweep in the recursion tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArpNode {
    /// Axis swept by this node.
    pub axis: usize,
    /// Value of the parent's axis this subproblem was solved for; `None` at the root.
    pub fixed_value: Option<i64>,
    pub report: SolveReport,
    pub children: Vec<ArpNode>,
}

impl ArpNode {
    /// Raw objective calls made by the innermost sweeps under this node.
    pub fn leaf_evaluations(&self) -> u64 {
        if self.children.is_empty() {
            self.report.evaluations
        } else {
            self.children.iter().map(ArpNode::leaf_evaluations).sum()
        }
    }

    fn collect_visited(&self, depth: usize, prefix: &mut Vec<i64>, out: &mut Vec<BTreeSet<IntPoint>>) {
        if out.len() <= depth {
            out.push(BTreeSet::new());
        }
        for &x in &self.report.visited {
            prefix.push(x);
            out[depth].insert(IntPoint::from_slice(prefix));
            prefix.pop();
        }
        for child in &self.children {
            prefix.push(child.fixed_value.expect("children carry a fixed value"));
            child.collect_visited(depth + 1, prefix, out);
            prefix.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArpReport {
    pub argmin: IntPoint,
    pub min_value: f64,
    /// Raw objective calls.
    pub total_evaluations: u64,
    pub axis_order: Vec<usize>,
    /// Entry `k` holds the points visited by sweeps at depth `k` (0 = top),
    /// written as the swept values from the top axis down to that depth.
    pub per_level_visited: Vec<Vec<IntPoint>>,
    pub tree: ArpNode,
}

impl ArpReport {
    /// Top-level conditional values as CSV `axis,point,conditional_min`,
    /// ascending by point.
    pub fn conditional_csv(&self) -> Result<String> {
        let mut rows = BTreeMap::new();
        for r in &self.tree.report.trace {
            if let (Some(p), Some(v), false) = (r.point, r.value, r.side == Side::Step4) {
                rows.insert(p, v);
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["axis", "point", "conditional_min"]).map_err(io)?;
        let axis = self.tree.axis.to_string();
        for (p, v) in rows {
            w.write_record([axis.clone(), p.to_string(), v.to_string()])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// `f` restricted to the points of `base` whose `fixed` axes take the given values.
#[derive(Debug, Clone)]
pub struct ConditionalProblem<'a> {
    base: &'a BoxDomain,
    fixed: BTreeMap<usize, i64>,
    objective: &'a Objective,
}

impl<'a> ConditionalProblem<'a> {
    pub fn new(base: &'a BoxDomain, fixed: BTreeMap<usize, i64>, objective: &'a Objective) -> Result<Self> {
        for (&axis, &v) in &fixed {
            if axis >= base.dim() {
                return Err(Error::arg(format!(
                    "axis {axis} out of range for a {}-D box",
                    base.dim()
                )));
            }
            if !base.axis(axis).contains_value(v) {
                return Err(Error::arg(format!(
                    "fixed value {v} outside axis {axis} range {}",
                    base.axis(axis)
                )));
            }
        }
        Ok(ConditionalProblem {
            base,
            fixed,
            objective,
        })
    }

    pub fn fixed(&self) -> &BTreeMap<usize, i64> {
        &self.fixed
    }

    /// Axes left free, ascending.
    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.base.dim())
            .filter(|a| !self.fixed.contains_key(a))
            .collect()
    }

    /// The free axes as a box, or `None` when every axis is fixed.
    pub fn free_domain(&self) -> Option<BoxDomain> {
        let axes: Vec<_> = self.free_axes().into_iter().map(|a| self.base.axis(a)).collect();
        BoxDomain::new(axes).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalSolution {
    pub value: f64,
    /// Full-dimensional minimizer inside the conditional domain.
    pub argmin: IntPoint,
    /// Sweep tree; `None` when every axis was fixed.
    pub tree: Option<ArpNode>,
}

struct Recursion<'a> {
    base: &'a BoxDomain,
    f: &'a Objective,
    /// Free axes, innermost first.
    order: Vec<usize>,
    starts: &'a BTreeMap<usize, i64>,
    c: f64,
    tol: f64,
    reread: bool,
}

impl Recursion<'_> {
    fn solve(
        &self,
        point: &mut Vec<i64>,
        level: usize,
        fixed_value: Option<i64>,
    ) -> Result<(ArpNode, f64, Vec<i64>)> {
        let axis = self.order[level];
        let range = self.base.axis(axis);
        let start = self
            .starts
            .get(&axis)
            .copied()
            .unwrap_or_else(|| range.midpoint());
        let mut children = Vec::new();
        let mut argmins: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        let report = sweep(range, start, self.c, self.tol, self.reread, |l| {
            point[axis] = l;
            if level == 0 {
                self.f.eval_coords(point)
            } else {
                let (child, v, am) = self.solve(point, level - 1, Some(l))?;
                children.push(child);
                argmins.insert(l, am);
                Ok(v)
            }
        })?;
        let best = report.argmin.coords()[0];
        let argmin = if level == 0 {
            let mut p = point.clone();
            p[axis] = best;
            p
        } else {
            argmins.remove(&best).expect("best value was evaluated")
        };
        let value = report.min_value;
        Ok((
            ArpNode {
                axis,
                fixed_value,
                report,
                children,
            },
            value,
            argmin,
        ))
    }
}

fn validate_starts(base: &BoxDomain, starts: &BTreeMap<usize, i64>) -> Result<()> {
    for (&axis, &s) in starts {
        if axis >= base.dim() {
            return Err(Error::arg(format!(
                "start given for axis {axis} of a {}-D box",
                base.dim()
            )));
        }
        if !base.axis(axis).contains_value(s) {
            return Err(Error::OutOfDomain(IntPoint::scalar(s)));
        }
    }
    Ok(())
}

/// Minimum of `f` over the conditional domain of `p`.
///
/// With every axis fixed this is a single evaluation. Otherwise the free
/// axes are solved recursively, in `cfg.axis_order` order restricted to the
/// free axes.
pub fn conditional_value(p: &ConditionalProblem<'_>, cfg: &ArpConfig) -> Result<ConditionalSolution> {
    let dim = p.base.dim();
    let tol = cfg.tolerance.unwrap_or_else(|| p.objective.default_tolerance());
    check_c(cfg.c, tol)?;
    validate_starts(p.base, &cfg.starts)?;
    let mut point: Vec<i64> = (0..dim).map(|a| p.base.axis(a).lo()).collect();
    for (&a, &v) in &p.fixed {
        point[a] = v;
    }
    let order: Vec<usize> = cfg
        .resolved_order(dim)?
        .into_iter()
        .filter(|a| !p.fixed.contains_key(a))
        .collect();
    if order.is_empty() {
        let value = p.objective.eval_coords(&point)?;
        return Ok(ConditionalSolution {
            value,
            argmin: IntPoint::new(point)?,
            tree: None,
        });
    }
    let rec = Recursion {
        base: p.base,
        f: p.objective,
        order,
        starts: &cfg.starts,
        c: cfg.c,
        tol,
        reread: !cfg.memoize,
    };
    let (tree, value, argmin) = rec.solve(&mut point, rec.order.len() - 1, None)?;
    Ok(ConditionalSolution {
        value,
        argmin: IntPoint::new(argmin)?,
        tree: Some(tree),
    })
}

/// Minimizes `f` over the box `d`.
///
/// Exact whenever `(d, f)` is an Ameso(`cfg.c`) pair.
pub fn solve_arp(d: &BoxDomain, f: &Objective, cfg: &ArpConfig) -> Result<ArpReport> {
    let problem = ConditionalProblem::new(d, BTreeMap::new(), f)?;
    let sol = conditional_value(&problem, cfg)?;
    let tree = sol.tree.expect("a box has at least one free axis");
    let mut levels = Vec::new();
    tree.collect_visited(0, &mut Vec::new(), &mut levels);
    Ok(ArpReport {
        argmin: sol.argmin,
        min_value: sol.value,
        total_evaluations: tree.leaf_evaluations(),
        axis_order: cfg.resolved_order(d.dim())?,
        per_level_visited: levels.into_iter().map(|s| s.into_iter().collect()).collect(),
        tree,
    })
}

/// Minimal constants of the conditional pair over `kept_axes` and of the
/// full pair, both by exhaustion.
pub fn property5_constants(d: &BoxDomain, f: &Objective, kept_axes: &[usize]) -> Result<(f64, f64)> {
    let mut kept = kept_axes.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.iter().any(|&a| a >= d.dim()) {
        return Err(Error::arg(format!(
            "invalid axis subset {kept_axes:?} for a {}-D box",
            d.dim()
        )));
    }
    let full = Domain::Box(d.clone());
    let sub = Domain::Box(BoxDomain::new(kept.iter().map(|&a| d.axis(a)).collect())?);
    let mut mins = vec![f64::INFINITY; sub.len() as usize];
    let mut proj = vec![0; kept.len()];
    for p in full.iter() {
        let v = f.eval(&p)?;
        for (k, &a) in kept.iter().enumerate() {
            proj[k] = p.coords()[a];
        }
        let i = sub.index_of(&proj).expect("projection lies in the sub-box");
        mins[i] = mins[i].min(v);
    }
    let conditional = TabulatedObjective::new(sub.clone(), mins)?.to_objective();
    let c_sub = oracle::minimal_c(&sub, &conditional)?.minimal_c;
    let c_full = oracle::minimal_c(&full, f)?.minimal_c;
    Ok((c_sub, c_full))
}

/// True iff the conditional pair over `kept_axes` needs no larger constant
/// than the full pair.
pub fn verify_property5(d: &BoxDomain, f: &Objective, kept_axes: &[usize]) -> Result<bool> {
    let (c_sub, c_full) = property5_constants(d, f, kept_axes)?;
    Ok(c_sub <= c_full + crate::objective::REAL_TOLERANCE)
}
