use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::IntPoint;

/// Comparison tolerance used for real-valued objectives.
pub const REAL_TOLERANCE: f64 = 1e-9;

type EvalFn = dyn Fn(&[i64]) -> f64 + Send + Sync;

/// A deterministic objective `Z^n -> R` with an evaluation counter.
///
/// Cloning shares the underlying function but starts a fresh counter.
pub struct Objective {
    func: Arc<EvalFn>,
    lower_bound_declared: bool,
    integer_valued: bool,
    evals: AtomicU64,
}

impl Objective {
    pub fn new<F>(func: F) -> Self
    where
        F: Fn(&[i64]) -> f64 + Send + Sync + 'static,
    {
        Objective {
            func: Arc::new(func),
            lower_bound_declared: true,
            integer_valued: false,
            evals: AtomicU64::new(0),
        }
    }

    /// Marks the objective as taking only integer values, which switches the
    /// default comparison tolerance to exact.
    pub fn integer_valued(mut self, yes: bool) -> Self {
        self.integer_valued = yes;
        self
    }

    pub fn with_lower_bound_declared(mut self, yes: bool) -> Self {
        self.lower_bound_declared = yes;
        self
    }

    pub fn is_integer_valued(&self) -> bool {
        self.integer_valued
    }

    pub fn lower_bound_declared(&self) -> bool {
        self.lower_bound_declared
    }

    /// 0 for integer-valued objectives, [`REAL_TOLERANCE`] otherwise.
    pub fn default_tolerance(&self) -> f64 {
        if self.integer_valued {
            0.0
        } else {
            REAL_TOLERANCE
        }
    }

    pub fn eval(&self, p: &IntPoint) -> Result<f64> {
        self.eval_coords(p.coords())
    }

    pub fn eval_coords(&self, p: &[i64]) -> Result<f64> {
        self.evals.fetch_add(1, Ordering::Relaxed);
        let v = (self.func)(p);
        if !v.is_finite() {
            return Err(Error::NonFinite(IntPoint::from_slice(p)));
        }
        Ok(v)
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn reset_count(&self) {
        self.evals.store(0, Ordering::Relaxed);
    }

    /// `a*self + b*other`, evaluated without touching either counter.
    pub fn combine(&self, a: f64, other: &Objective, b: f64) -> Result<Objective> {
        check_weight(a)?;
        check_weight(b)?;
        let (f, g) = (self.func.clone(), other.func.clone());
        Ok(Objective::new(move |p| a * f(p) + b * g(p))
            .integer_valued(
                self.integer_valued && other.integer_valued && a.fract() == 0.0 && b.fract() == 0.0,
            )
            .with_lower_bound_declared(self.lower_bound_declared && other.lower_bound_declared))
    }
}

impl Clone for Objective {
    fn clone(&self) -> Self {
        Objective {
            func: self.func.clone(),
            lower_bound_declared: self.lower_bound_declared,
            integer_valued: self.integer_valued,
            evals: AtomicU64::new(0),
        }
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("integer_valued", &self.integer_valued)
            .field("eval_count", &self.eval_count())
            .finish_non_exhaustive()
    }
}

fn check_weight(a: f64) -> Result<()> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::arg(format!(
            "weights must be finite and non-negative, got {a}"
        )));
    }
    Ok(())
}

/// `g(y) = sum_i a_i * f_i(y_i)` for one-dimensional `f_i`.
pub fn separable_sum(fs: &[Objective], weights: &[f64]) -> Result<Objective> {
    if fs.is_empty() || fs.len() != weights.len() {
        return Err(Error::arg(format!(
            "need one weight per component, got {} components and {} weights",
            fs.len(),
            weights.len()
        )));
    }
    for &a in weights {
        check_weight(a)?;
    }
    let funcs: Vec<Arc<EvalFn>> = fs.iter().map(|f| f.func.clone()).collect();
    let ws = weights.to_vec();
    let n = funcs.len();
    let integer = fs.iter().all(|f| f.integer_valued) && ws.iter().all(|w| w.fract() == 0.0);
    Ok(Objective::new(move |p: &[i64]| {
        debug_assert_eq!(p.len(), n);
        funcs.iter().zip(&ws).zip(p).map(|((f, a), &y)| a * f(&[y])).sum()
    })
    .integer_valued(integer))
}
