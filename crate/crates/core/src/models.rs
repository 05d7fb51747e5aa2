//! Built-in objectives: the worked examples and the three-option shipping
//! knapsack.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ceil_half_sum, floor_half_sum, BoxDomain, Domain, IntPoint, IntervalDomain};
use crate::objective::Objective;

/// A function given by one value per domain point, stored in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedObjective {
    domain: Domain,
    values: Vec<f64>,
}

impl TabulatedObjective {
    pub fn new(domain: Domain, values: Vec<f64>) -> Result<Self> {
        if values.len() as u64 != domain.len() {
            return Err(Error::arg(format!(
                "domain has {} points but {} values were given",
                domain.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::arg(format!("table values must be finite, got {v}")));
        }
        Ok(TabulatedObjective { domain, values })
    }

    /// Builds a table from `(point, value)` pairs. The domain is the set of
    /// listed points, normalized to an interval or box when it fills one.
    pub fn from_entries(entries: Vec<(IntPoint, f64)>) -> Result<Self> {
        let mut map = HashMap::with_capacity(entries.len());
        for (p, v) in &entries {
            if map.insert(p.clone(), *v).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        let set = crate::lattice::ExplicitSet::new(entries.into_iter().map(|(p, _)| p))?;
        let domain = Domain::Set(set).normalize();
        let values = domain.iter().map(|p| map[&p]).collect();
        TabulatedObjective::new(domain, values)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, p: &[i64]) -> Option<f64> {
        self.domain.index_of(p).map(|i| self.values[i])
    }

    pub fn entries(&self) -> impl Iterator<Item = (IntPoint, f64)> + '_ {
        self.domain.iter().zip(self.values.iter().copied())
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.fract() == 0.0)
    }

    /// Objective view of the table. Points outside the domain evaluate to NaN,
    /// which [`Objective::eval`] reports as an error.
    pub fn to_objective(&self) -> Objective {
        let values: Arc<[f64]> = self.values.clone().into();
        let integer = self.is_integer_valued();
        let obj = match &self.domain {
            Domain::Set(_) => {
                let map: HashMap<IntPoint, f64> = self.entries().collect();
                Objective::new(move |p| map.get(p).copied().unwrap_or(f64::NAN))
            }
            d => {
                let d = d.clone();
                Objective::new(move |p| d.index_of(p).map_or(f64::NAN, |i| values[i]))
            }
        };
        obj.integer_valued(integer)
    }
}

/// `x^4/4 - x^3 + x`, exact for |x| up to about 9000.
pub fn quartic(x: i64) -> f64 {
    let x = i128::from(x);
    (x * x * x * x - 4 * x * x * x + 4 * x) as f64 / 4.0
}

pub fn quartic_objective() -> Objective {
    Objective::new(|p| quartic(p[0]))
}

pub fn quartic_domain() -> IntervalDomain {
    IntervalDomain::new(-20, 20).expect("valid interval")
}

const EXAMPLE5: [i64; 31] = [
    7, 9, 7, 8, 7, 8, 9, 8, 7, 8, 9, 8, 7, 8, 6, 7, 4, 5, 6, 7, 7, 6, 7, 8, 9, 10, 11, 9, 8, 7, 8,
];

/// The 31-point table on `[1, 31]`.
pub fn example5_table() -> TabulatedObjective {
    let domain = IntervalDomain::new(1, 31).expect("valid interval").into();
    TabulatedObjective::new(domain, EXAMPLE5.iter().map(|&v| v as f64).collect())
        .expect("31 values for 31 points")
}

/// `88 e^(1/x1) + 99 e^(2/x2) + |sin(x1 x2)| / 2` for positive arguments.
pub fn example6_surface(x1: i64, x2: i64) -> Result<f64> {
    if x1 <= 0 || x2 <= 0 {
        return Err(Error::arg(format!(
            "surface is defined for positive coordinates, got ({x1},{x2})"
        )));
    }
    Ok(surface(x1, x2))
}

fn surface(x1: i64, x2: i64) -> f64 {
    let (a, b) = (x1 as f64, x2 as f64);
    88.0 * (1.0 / a).exp() + 99.0 * (2.0 / b).exp() + (a * b).sin().abs() / 2.0
}

pub fn example6_objective() -> Objective {
    Objective::new(|p| {
        if p[0] > 0 && p[1] > 0 {
            surface(p[0], p[1])
        } else {
            f64::NAN
        }
    })
}

pub fn example6_domain() -> BoxDomain {
    BoxDomain::new(vec![IntervalDomain::new(1, 100).expect("valid interval"); 2]).expect("two axes")
}

/// Shipping `units` items with three package options of capacity `w[i]` and
/// cost `c[i]`. Options 1 and 2 are chosen freely up to half the load each;
/// the rest goes into option-3 packages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawKnapsackSerde", into = "RawKnapsackSerde")]
pub struct KnapsackInstance {
    units: i64,
    w: [i64; 3],
    c: [i64; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKnapsackSerde {
    #[serde(rename = "W")]
    units: i64,
    w: [i64; 3],
    c: [i64; 3],
}

impl TryFrom<RawKnapsackSerde> for KnapsackInstance {
    type Error = Error;

    fn try_from(r: RawKnapsackSerde) -> Result<Self> {
        KnapsackInstance::new(r.units, r.w, r.c)
    }
}

impl From<KnapsackInstance> for RawKnapsackSerde {
    fn from(k: KnapsackInstance) -> Self {
        RawKnapsackSerde {
            units: k.units,
            w: k.w,
            c: k.c,
        }
    }
}

impl KnapsackInstance {
    /// Upper bound on `W`, capacities and costs; keeps every cost inside `i64`.
    pub const MAX_PARAM: i64 = 1_000_000_000;

    pub fn new(units: i64, w: [i64; 3], c: [i64; 3]) -> Result<Self> {
        if units <= 0 || w.iter().chain(&c).any(|&v| v <= 0) {
            return Err(Error::arg("W, capacities and costs must be positive"));
        }
        if std::iter::once(&units)
            .chain(&w)
            .chain(&c)
            .any(|&v| v > Self::MAX_PARAM)
        {
            return Err(Error::arg(format!(
                "parameters are limited to {}",
                Self::MAX_PARAM
            )));
        }
        if !(w[0] < w[1] && w[1] < w[2]) {
            return Err(Error::arg(format!(
                "capacities must increase strictly, got {w:?}"
            )));
        }
        if !(c[0] < c[1] && c[1] < c[2]) {
            return Err(Error::arg(format!("costs must increase strictly, got {c:?}")));
        }
        // c1/w1 > c2/w2 > c3/w3 by cross-multiplication
        let (w, c) = (w.map(i128::from), c.map(i128::from));
        if !(c[0] * w[1] > c[1] * w[0] && c[1] * w[2] > c[2] * w[1]) {
            return Err(Error::arg("unit costs c_i/w_i must decrease strictly"));
        }
        if i128::from(units) < 2 * w[1] {
            return Err(Error::arg(format!(
                "W = {units} < 2*w2 = {} leaves option 2 a single feasible count",
                2 * w[1]
            )));
        }
        Ok(KnapsackInstance {
            units,
            w: w.map(|v| v as i64),
            c: c.map(|v| v as i64),
        })
    }

    pub fn units(&self) -> i64 {
        self.units
    }

    pub fn capacities(&self) -> [i64; 3] {
        self.w
    }

    pub fn costs(&self) -> [i64; 3] {
        self.c
    }

    /// Largest feasible package count for option `i` (0 or 1): `floor(W / (2 w_i))`.
    pub fn max_packages(&self, i: usize) -> i64 {
        self.units / (2 * self.w[i])
    }

    /// `[0, floor(W/(2 w1))] x [0, floor(W/(2 w2))]`.
    pub fn domain(&self) -> BoxDomain {
        let axes = (0..2)
            .map(|i| IntervalDomain::new(0, self.max_packages(i)).expect("validated in new"))
            .collect();
        BoxDomain::new(axes).expect("two axes")
    }

    pub fn is_feasible(&self, z1: i64, z2: i64) -> bool {
        (0..=self.max_packages(0)).contains(&z1) && (0..=self.max_packages(1)).contains(&z2)
    }

    /// Units left for option 3.
    pub fn residual(&self, z1: i64, z2: i64) -> i64 {
        self.units - self.w[0] * z1 - self.w[1] * z2
    }

    /// `c1 z1 + c2 z2 + c3 ceil((W - w1 z1 - w2 z2) / w3)`.
    pub fn cost(&self, z1: i64, z2: i64) -> Result<i64> {
        if !self.is_feasible(z1, z2) {
            return Err(Error::OutOfDomain(IntPoint::new(vec![z1, z2])?));
        }
        Ok(self.cost_unchecked(z1, z2))
    }

    fn cost_unchecked(&self, z1: i64, z2: i64) -> i64 {
        let r = self.residual(z1, z2);
        debug_assert!(r >= 0);
        self.c[0] * z1 + self.c[1] * z2 + self.c[2] * ((r + self.w[2] - 1) / self.w[2])
    }

    pub fn objective(&self) -> Objective {
        let inst = *self;
        Objective::new(move |p| {
            if inst.is_feasible(p[0], p[1]) {
                inst.cost_unchecked(p[0], p[1]) as f64
            } else {
                f64::NAN
            }
        })
        .integer_valued(true)
    }
}

pub fn knapsack_cost(inst: &KnapsackInstance, z1: i64, z2: i64) -> Result<i64> {
    inst.cost(z1, z2)
}

pub fn knapsack_domain(inst: &KnapsackInstance) -> BoxDomain {
    inst.domain()
}

/// `a + b` as an unevaluated pair `(s, e)` with `s + e` exact.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Exact floor and ceil of `s + e` where `|e|` is below half an ulp of `s`.
fn floor_ceil_exact(s: f64, e: f64) -> (f64, f64) {
    if s.fract() == 0.0 {
        match e.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => (s, s + 1.0),
            Some(std::cmp::Ordering::Less) => (s - 1.0, s),
            _ => (s, s),
        }
    } else {
        (s.floor(), s.ceil())
    }
}

/// Evaluates both floor/ceil chains for a real pair with exact rounding of
/// the sums:
///
/// `ceil(x1) + ceil(x2) <= ceil(x1 + x2) + 1` and
/// `floor(x1) + floor(x2) <= floor((x1+x2)/2) + ceil((x1+x2)/2) <= ceil(x1) + ceil(x2)`.
///
/// Integral inputs must also split exactly into floor and ceil halves.
pub fn lemma5_checks(x1: f64, x2: f64) -> bool {
    let (s, e) = two_sum(x1, x2);
    let (_, ceil_sum) = floor_ceil_exact(s, e);
    let (half_floor, half_ceil) = floor_ceil_exact(s / 2.0, e / 2.0);
    let ceils = x1.ceil() + x2.ceil();
    let floors = x1.floor() + x2.floor();
    let halves = half_floor + half_ceil;
    let mut ok = ceils <= ceil_sum + 1.0 && floors <= halves && halves <= ceils;
    if x1.fract() == 0.0 && x2.fract() == 0.0 && x1.abs() < 1e15 && x2.abs() < 1e15 {
        ok &= lemma5_integer(x1 as i64, x2 as i64);
    }
    ok
}

/// `n1 + n2 = floor((n1+n2)/2) + ceil((n1+n2)/2)`.
pub fn lemma5_integer(n1: i64, n2: i64) -> bool {
    i128::from(floor_half_sum(n1, n2)) + i128::from(ceil_half_sum(n1, n2)) == i128::from(n1) + i128::from(n2)
}
