//! Integer lattice points, floor/ceil midpoints and the finite domains the
//! solvers work on.
//!
//! Three domain shapes exist. An [`IntervalDomain`] is a contiguous integer
//! range with at least two members, a [`BoxDomain`] is a product of such
//! ranges and an [`ExplicitSet`] is an arbitrary finite point set. The first
//! two are always closed under midpoints; explicit sets are classified by
//! [`crate::oracle::is_ameso_set`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the integer lattice `Z^n`, `n >= 1`.
///
/// Points order lexicographically, which is also the enumeration order of
/// every domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPoint(Vec<i64>);

impl IntPoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        Ok(IntPoint(coords))
    }

    pub fn scalar(x: i64) -> Self {
        IntPoint(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub(crate) fn from_slice(coords: &[i64]) -> Self {
        debug_assert!(!coords.is_empty());
        IntPoint(coords.to_vec())
    }

    fn check_dim(&self, other: &IntPoint) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl std::borrow::Borrow<[i64]> for IntPoint {
    fn borrow(&self) -> &[i64] {
        &self.0
    }
}

impl TryFrom<Vec<i64>> for IntPoint {
    type Error = Error;

    fn try_from(coords: Vec<i64>) -> Result<Self> {
        IntPoint::new(coords)
    }
}

impl From<IntPoint> for Vec<i64> {
    fn from(p: IntPoint) -> Self {
        p.0
    }
}

impl fmt::Display for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `floor((a + b) / 2)` as a mathematical floor, never truncation.
#[inline]
pub fn floor_half_sum(a: i64, b: i64) -> i64 {
    // The true midpoint lies between a and b, so the narrowing cast is lossless.
    (i128::from(a) + i128::from(b)).div_euclid(2) as i64
}

/// `ceil((a + b) / 2)` as a mathematical ceiling.
#[inline]
pub fn ceil_half_sum(a: i64, b: i64) -> i64 {
    let s = i128::from(a) + i128::from(b);
    (s.div_euclid(2) + s.rem_euclid(2)) as i64
}

/// Componentwise `ceil((x + y) / 2)`.
pub fn midpoint_ceil(x: &IntPoint, y: &IntPoint) -> Result<IntPoint> {
    x.check_dim(y)?;
    Ok(IntPoint(
        x.0.iter().zip(&y.0).map(|(&a, &b)| ceil_half_sum(a, b)).collect(),
    ))
}

/// Componentwise `floor((x + y) / 2)`.
pub fn midpoint_floor(x: &IntPoint, y: &IntPoint) -> Result<IntPoint> {
    x.check_dim(y)?;
    Ok(IntPoint(
        x.0.iter()
            .zip(&y.0)
            .map(|(&a, &b)| floor_half_sum(a, b))
            .collect(),
    ))
}

pub(crate) fn midpoints_into(x: &[i64], y: &[i64], floor: &mut [i64], ceil: &mut [i64]) {
    for i in 0..x.len() {
        floor[i] = floor_half_sum(x[i], y[i]);
        ceil[i] = ceil_half_sum(x[i], y[i]);
    }
}

/// The integer range `{lo, lo+1, ..., hi}` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalDomain {
    lo: i64,
    hi: i64,
}

impl IntervalDomain {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(IntervalDomain { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        (i128::from(self.hi) - i128::from(self.lo) + 1).min(u64::MAX as i128) as u64
    }

    /// Never true; kept for the `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_value(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `ceil((lo + hi) / 2)`.
    pub fn midpoint(&self) -> i64 {
        ceil_half_sum(self.lo, self.hi)
    }
}

impl fmt::Display for IntervalDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "interval({},{})", self.lo, self.hi)
    }
}

/// Product of intervals, one per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxDomain {
    axes: Vec<IntervalDomain>,
}

impl BoxDomain {
    pub fn new(axes: Vec<IntervalDomain>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::EmptyBox);
        }
        Ok(BoxDomain { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[IntervalDomain] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> IntervalDomain {
        self.axes[i]
    }

    pub fn len(&self) -> u64 {
        self.axes.iter().fold(1u64, |acc, a| acc.saturating_mul(a.len()))
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_coords(&self, p: &[i64]) -> bool {
        p.len() == self.axes.len() && self.axes.iter().zip(p).all(|(a, &x)| a.contains_value(x))
    }

    fn index_of(&self, p: &[i64]) -> Option<usize> {
        if !self.contains_coords(p) {
            return None;
        }
        let mut idx = 0usize;
        for (a, &x) in self.axes.iter().zip(p) {
            idx = idx * a.len() as usize + (x - a.lo) as usize;
        }
        Some(idx)
    }
}

impl fmt::Display for BoxDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("box(")?;
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "[{},{}]", a.lo, a.hi)?;
        }
        f.write_str(")")
    }
}

/// A finite, non-empty set of equal-dimension points. It need not be closed
/// under midpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExplicitSet {
    points: BTreeSet<IntPoint>,
    dim: usize,
}

impl ExplicitSet {
    pub fn new(points: impl IntoIterator<Item = IntPoint>) -> Result<Self> {
        let mut set = BTreeSet::new();
        let mut dim = None;
        for p in points {
            match dim {
                None => dim = Some(p.dim()),
                Some(d) if d != p.dim() => {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: p.dim(),
                    })
                }
                Some(_) => {}
            }
            if set.contains(&p) {
                return Err(Error::DuplicatePoint(p));
            }
            set.insert(p);
        }
        let dim = dim.ok_or(Error::EmptySet)?;
        Ok(ExplicitSet { points: set, dim })
    }

    pub fn from_values(values: impl IntoIterator<Item = i64>) -> Result<Self> {
        ExplicitSet::new(values.into_iter().map(IntPoint::scalar))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_point(&self, p: &IntPoint) -> bool {
        self.points.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &IntPoint> {
        self.points.iter()
    }
}

impl fmt::Display for ExplicitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("set{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// True iff the 1-D set is a contiguous integer range.
pub fn is_interval(s: &ExplicitSet) -> Result<bool> {
    if s.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: s.dim(),
        });
    }
    let first = s.points.first().expect("non-empty").coords()[0];
    let last = s.points.last().expect("non-empty").coords()[0];
    Ok(i128::from(last) - i128::from(first) + 1 == s.len() as i128)
}

/// Any finite domain understood by the library.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Domain {
    Interval(IntervalDomain),
    Box(BoxDomain),
    Set(ExplicitSet),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval(_) => 1,
            Domain::Box(b) => b.dim(),
            Domain::Set(s) => s.dim(),
        }
    }

    /// Number of points, saturating at `u64::MAX`.
    pub fn len(&self) -> u64 {
        match self {
            Domain::Interval(i) => i.len(),
            Domain::Box(b) => b.len(),
            Domain::Set(s) => s.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &IntPoint) -> Result<bool> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        Ok(match self {
            Domain::Interval(i) => i.contains_value(p.coords()[0]),
            Domain::Box(b) => b.contains_coords(p.coords()),
            Domain::Set(s) => s.contains_point(p),
        })
    }

    /// Members in lexicographic order, each exactly once.
    pub fn iter(&self) -> DomainIter<'_> {
        match self {
            Domain::Interval(i) => DomainIter::Range {
                next: Some(i.lo),
                hi: i.hi,
            },
            Domain::Box(b) => DomainIter::Box {
                domain: b,
                next: Some(b.axes.iter().map(|a| a.lo).collect()),
            },
            Domain::Set(s) => DomainIter::Set(s.points.iter()),
        }
    }

    /// Product-box view of the domain, if it has one.
    pub fn as_box(&self) -> Option<BoxDomain> {
        match self {
            Domain::Interval(i) => Some(BoxDomain { axes: vec![*i] }),
            Domain::Box(b) => Some(b.clone()),
            Domain::Set(_) => None,
        }
    }

    pub fn as_interval(&self) -> Option<IntervalDomain> {
        match self {
            Domain::Interval(i) => Some(*i),
            Domain::Box(b) if b.dim() == 1 => Some(b.axes[0]),
            _ => None,
        }
    }

    /// Rewrites an explicit set that happens to fill an interval or a box
    /// into that structured form. Other domains are returned unchanged.
    pub fn normalize(self) -> Domain {
        let Domain::Set(s) = &self else { return self };
        if s.len() < 2 {
            return self;
        }
        let dim = s.dim();
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        for p in s.iter() {
            for (k, &c) in p.coords().iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let axes: Option<Vec<_>> = lo
            .iter()
            .zip(&hi)
            .map(|(&l, &h)| IntervalDomain::new(l, h).ok())
            .collect();
        let Some(axes) = axes else { return self };
        let b = BoxDomain { axes };
        if b.len() != s.len() as u64 {
            return self;
        }
        if dim == 1 {
            Domain::Interval(b.axes[0])
        } else {
            Domain::Box(b)
        }
    }

    /// Position of `p` in [`Domain::iter`] order.
    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        match self {
            Domain::Interval(i) => (p.len() == 1 && i.contains_value(p[0])).then(|| (p[0] - i.lo) as usize),
            Domain::Box(b) => b.index_of(p),
            Domain::Set(s) => {
                if p.len() != s.dim {
                    return None;
                }
                let key = IntPoint::from_slice(p);
                s.points
                    .contains(&key)
                    .then(|| s.points.range::<IntPoint, _>(..&key).count())
            }
        }
    }
}

impl From<IntervalDomain> for Domain {
    fn from(d: IntervalDomain) -> Self {
        Domain::Interval(d)
    }
}

impl From<BoxDomain> for Domain {
    fn from(d: BoxDomain) -> Self {
        Domain::Box(d)
    }
}

impl From<ExplicitSet> for Domain {
    fn from(d: ExplicitSet) -> Self {
        Domain::Set(d)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval(i) => i.fmt(f),
            Domain::Box(b) => b.fmt(f),
            Domain::Set(s) => s.fmt(f),
        }
    }
}

pub enum DomainIter<'a> {
    Range {
        next: Option<i64>,
        hi: i64,
    },
    Box {
        domain: &'a BoxDomain,
        next: Option<Vec<i64>>,
    },
    Set(std::collections::btree_set::Iter<'a, IntPoint>),
}

impl Iterator for DomainIter<'_> {
    type Item = IntPoint;

    fn next(&mut self) -> Option<IntPoint> {
        match self {
            DomainIter::Range { next, hi } => {
                let x = (*next)?;
                *next = if x < *hi { Some(x + 1) } else { None };
                Some(IntPoint::scalar(x))
            }
            DomainIter::Box { domain, next } => {
                let cur = next.take()?;
                let mut succ = cur.clone();
                // odometer: last coordinate varies fastest
                for k in (0..succ.len()).rev() {
                    if succ[k] < domain.axes[k].hi {
                        succ[k] += 1;
                        *next = Some(succ);
                        break;
                    }
                    succ[k] = domain.axes[k].lo;
                }
                Some(IntPoint(cur))
            }
            DomainIter::Set(it) => it.next().cloned(),
        }
    }
}
