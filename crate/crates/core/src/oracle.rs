//! Brute-force ground truth.
//!
//! Everything here is quadratic in the domain size and guarded by
//! [`OracleLimits`]. The solvers never call into this module; tests and the
//! CLI use it to certify instances and to check solver output.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{midpoints_into, Domain, IntPoint};
use crate::objective::Objective;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleLimits {
    /// Largest explicit set `is_ameso_set` will examine.
    pub max_points: u64,
    /// Largest number of unordered pairs (diagonal included) any pair scan may visit.
    pub max_pairs: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_points: 10_000,
            max_pairs: 100_000_000,
        }
    }
}

/// Result of a minimal-C computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmesoCertificate {
    pub is_ameso_set: bool,
    /// Smallest `C >= 0` for which every pair satisfies the Ameso inequality.
    #[serde(rename = "minimal_C")]
    pub minimal_c: f64,
    /// Largest deficiency over pairs of distinct points; may be negative.
    pub raw_max_deficiency: f64,
    /// Pair attaining `raw_max_deficiency`.
    pub witness: [IntPoint; 2],
    pub pairs_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub argmin_set: Vec<IntPoint>,
    pub min_value: f64,
    pub evaluations: u64,
}

fn pair_count(n: u64) -> u64 {
    n.saturating_mul(n.saturating_add(1)) / 2
}

fn check_pairs(n: u64, limits: &OracleLimits) -> Result<()> {
    let needed = pair_count(n);
    if needed > limits.max_pairs {
        return Err(Error::CapExceeded {
            what: "pair count",
            cap: limits.max_pairs,
            needed,
        });
    }
    Ok(())
}

/// Points of a domain with O(1) membership lookup by coordinates.
struct Indexed<'a> {
    domain: &'a Domain,
    points: Vec<IntPoint>,
    hashed: Option<HashMap<IntPoint, usize>>,
}

impl<'a> Indexed<'a> {
    fn new(domain: &'a Domain) -> Self {
        let points: Vec<IntPoint> = domain.iter().collect();
        let hashed = matches!(domain, Domain::Set(_))
            .then(|| points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect());
        Indexed {
            domain,
            points,
            hashed,
        }
    }

    fn index_of(&self, p: &[i64]) -> Option<usize> {
        match &self.hashed {
            Some(map) => map.get(p).copied(),
            None => self.domain.index_of(p),
        }
    }
}

/// A pair whose floor or ceil midpoint falls outside `d`, if any.
pub fn find_midpoint_violation(d: &Domain, limits: &OracleLimits) -> Result<Option<(IntPoint, IntPoint)>> {
    let Domain::Set(s) = d else {
        // intervals and boxes are closed under midpoints
        return Ok(None);
    };
    let n = s.len() as u64;
    if n > limits.max_points {
        return Err(Error::CapExceeded {
            what: "domain size",
            cap: limits.max_points,
            needed: n,
        });
    }
    check_pairs(n, limits)?;
    let idx = Indexed::new(d);
    let dim = d.dim();
    let (mut lo, mut hi) = (vec![0; dim], vec![0; dim]);
    for (i, x) in idx.points.iter().enumerate() {
        for y in &idx.points[i + 1..] {
            midpoints_into(x.coords(), y.coords(), &mut lo, &mut hi);
            if idx.index_of(&lo).is_none() || idx.index_of(&hi).is_none() {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
    }
    Ok(None)
}

/// True iff `d` is closed under floor and ceil midpoints.
pub fn is_ameso_set(d: &Domain) -> Result<bool> {
    is_ameso_set_with(d, &OracleLimits::default())
}

pub fn is_ameso_set_with(d: &Domain, limits: &OracleLimits) -> Result<bool> {
    Ok(find_midpoint_violation(d, limits)?.is_none())
}

/// `f(ceil mid) + f(floor mid) - f(x) - f(y)`.
pub fn deficiency(f: &Objective, x: &IntPoint, y: &IntPoint) -> Result<f64> {
    let lo = crate::lattice::midpoint_floor(x, y)?;
    let hi = crate::lattice::midpoint_ceil(x, y)?;
    Ok(f.eval(&hi)? + f.eval(&lo)? - f.eval(x)? - f.eval(y)?)
}

/// Evaluates `f` once per point and walks every unordered pair, handing the
/// visitor the pair's indices and its deficiency.
fn scan_pairs(
    d: &Domain,
    f: &Objective,
    limits: &OracleLimits,
    mut visit: impl FnMut(usize, usize, f64),
) -> Result<(Vec<IntPoint>, u64)> {
    if let Some((x, y)) = find_midpoint_violation(d, limits)? {
        return Err(Error::NotAmesoSet { x, y });
    }
    check_pairs(d.len(), limits)?;
    let idx = Indexed::new(d);
    let values = idx
        .points
        .iter()
        .map(|p| f.eval(p))
        .collect::<Result<Vec<f64>>>()?;
    let dim = d.dim();
    let (mut lo, mut hi) = (vec![0; dim], vec![0; dim]);
    let mut pairs = 0u64;
    for i in 0..idx.points.len() {
        pairs += 1; // (x, x) has zero deficiency
        for j in i + 1..idx.points.len() {
            midpoints_into(idx.points[i].coords(), idx.points[j].coords(), &mut lo, &mut hi);
            let a = idx.index_of(&lo).expect("closed under midpoints");
            let b = idx.index_of(&hi).expect("closed under midpoints");
            visit(i, j, values[a] + values[b] - values[i] - values[j]);
            pairs += 1;
        }
    }
    Ok((idx.points, pairs))
}

/// Minimal admissible `C` for `(d, f)` by exhaustion over all pairs.
pub fn minimal_c(d: &Domain, f: &Objective) -> Result<AmesoCertificate> {
    minimal_c_with(d, f, &OracleLimits::default())
}

pub fn minimal_c_with(d: &Domain, f: &Objective, limits: &OracleLimits) -> Result<AmesoCertificate> {
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    let (points, pairs) = scan_pairs(d, f, limits, |i, j, def| {
        if def > best.0 {
            best = (def, i, j);
        }
    })?;
    if points.len() == 1 {
        best = (0.0, 0, 0);
    }
    let (raw, i, j) = best;
    Ok(AmesoCertificate {
        is_ameso_set: true,
        minimal_c: raw.max(0.0),
        raw_max_deficiency: raw,
        witness: [points[i].clone(), points[j].clone()],
        pairs_checked: pairs,
    })
}

/// True iff every pair satisfies `f(x) + f(y) + c >= f(ceil) + f(floor)` up to `tol`.
pub fn satisfies_ameso(d: &Domain, f: &Objective, c: f64, tol: f64) -> Result<bool> {
    let mut ok = true;
    scan_pairs(d, f, &OracleLimits::default(), |_, _, def| ok &= def <= c + tol)?;
    Ok(ok)
}

/// Discrete midpoint convexity: the `C = 0` case.
pub fn is_midpoint_convex(d: &Domain, f: &Objective, tol: f64) -> Result<bool> {
    satisfies_ameso(d, f, 0.0, tol)
}

/// Exhaustive minimum; evaluates each point exactly once.
pub fn brute_force_min(d: &Domain, f: &Objective) -> Result<BruteForceResult> {
    let mut argmin_set = Vec::new();
    let mut min_value = f64::INFINITY;
    let mut evaluations = 0;
    for p in d.iter() {
        let v = f.eval(&p)?;
        evaluations += 1;
        if v < min_value {
            min_value = v;
            argmin_set.clear();
            argmin_set.push(p);
        } else if v == min_value {
            argmin_set.push(p);
        }
    }
    Ok(BruteForceResult {
        argmin_set,
        min_value,
        evaluations,
    })
}

/// Checks `f(x+a) + f(x-a) + c >= 2 f(x)` for every `x`, `a` with all three
/// points in `d`.
pub fn plus_minus_check(d: &Domain, f: &Objective, c: f64, tol: f64) -> Result<bool> {
    let n = d.len();
    check_pairs(n, &OracleLimits::default())?;
    let idx = Indexed::new(d);
    let values = idx
        .points
        .iter()
        .map(|p| f.eval(p))
        .collect::<Result<Vec<f64>>>()?;
    let mut mid = vec![0; d.dim()];
    for i in 0..idx.points.len() {
        'pairs: for j in i + 1..idx.points.len() {
            // x+a and x-a are the pair; x is their exact midpoint when it is integral.
            let (p, q) = (idx.points[i].coords(), idx.points[j].coords());
            for k in 0..p.len() {
                let s = i128::from(p[k]) + i128::from(q[k]);
                if s.rem_euclid(2) != 0 {
                    continue 'pairs;
                }
                mid[k] = (s / 2) as i64;
            }
            if let Some(m) = idx.index_of(&mid) {
                if values[i] + values[j] + c < 2.0 * values[m] - tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
