//! Young functions: construction, validation, conjugation, the class-P
//! family with its scaling inequalities, and sector equivalence estimates.
//!
//! A Young function is a strictly increasing continuous convex map
//! `phi: [0, inf) -> [0, inf)` with `phi(0) = 0`, `phi(t)/t -> 0` at `0`
//! and `phi(t)/t -> inf` at `inf`. The complementary function is
//! `conj(s) = sup_{t >= 0} (s t - phi(t))`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric;

/// Relative tolerance used when inverting forward maps by bisection.
pub const INVERT_TOL: f64 = 1e-12;
/// Relative tolerance of the golden-section stage of numerical conjugation.
pub const CONJUGATE_TOL: f64 = 1e-10;

/// Tri-state Delta-2 metadata attached to a constructed function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Delta2 {
    DeclaredTrue,
    DeclaredFalse,
    Untested,
}

/// Concave generator `rho` for class-P inverses.
#[derive(Clone, Debug)]
pub enum Rho {
    /// rho(t) = 1
    One,
    /// rho(t) = t
    Id,
    /// rho(t) = t^r with r in [0, 1]
    Power(f64),
    /// rho(t) = min(1, t)
    Min1,
    /// rho(t) = log(1 + t)
    Log1p,
    /// rho(t) = a*lhs(t) + b*rhs(t), a, b > 0
    Affine {
        a: f64,
        b: f64,
        lhs: Box<Rho>,
        rhs: Box<Rho>,
    },
    /// rho(t) = outer(inner(t))
    Compose { outer: Box<Rho>, inner: Box<Rho> },
}

impl Rho {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Rho::One => 1.0,
            Rho::Id => t,
            Rho::Power(r) => t.powf(*r),
            Rho::Min1 => t.min(1.0),
            Rho::Log1p => t.ln_1p(),
            Rho::Affine { a, b, lhs, rhs } => a * lhs.eval(t) + b * rhs.eval(t),
            Rho::Compose { outer, inner } => outer.eval(inner.eval(t)),
        }
    }

    /// Principal-branch complex extension where one exists.
    pub fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        match self {
            Rho::One => Some(Complex64::new(1.0, 0.0)),
            Rho::Id => Some(z),
            Rho::Power(r) => Some(z.powf(*r)),
            Rho::Min1 => None,
            Rho::Log1p => Some((z + 1.0).ln()),
            Rho::Affine { a, b, lhs, rhs } => {
                Some(lhs.eval_complex(z)? * *a + rhs.eval_complex(z)? * *b)
            }
            Rho::Compose { outer, inner } => outer.eval_complex(inner.eval_complex(z)?),
        }
    }

    /// Affine combinations and compositions need a sector check before the
    /// function may drive a diagonal-system analysis.
    pub fn is_combination(&self) -> bool {
        matches!(self, Rho::Affine { .. } | Rho::Compose { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            Rho::One => "one".into(),
            Rho::Id => "id".into(),
            Rho::Power(r) => format!("pow({r})"),
            Rho::Min1 => "min1".into(),
            Rho::Log1p => "log1p".into(),
            Rho::Affine { a, b, lhs, rhs } => {
                format!("affine({a},{b},{},{})", lhs.describe(), rhs.describe())
            }
            Rho::Compose { outer, inner } => {
                format!("compose({},{})", outer.describe(), inner.describe())
            }
        }
    }
}

/// Sector parameters: opening half-angle and the two-sided equivalence
/// constants for the inverse on that sector.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SectorParams {
    pub delta: f64,
    pub m0: f64,
    pub m1: f64,
}

/// The `(p, q, rho)` triple generating the inverse
/// `t^{1/p} rho(t^{1/q - 1/p})`, plus optional sector metadata.
#[derive(Clone, Debug)]
pub struct ClassPSpec {
    pub p: f64,
    pub q: f64,
    pub rho: Rho,
    pub sector: Option<SectorParams>,
    p_conj: f64,
    q_conj: f64,
}

impl ClassPSpec {
    pub fn new(p: f64, q: f64, rho: Rho) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && 1.0 < p && p < q) {
            return Err(Error::ClassP(format!("need 1 < p < q < inf, got p={p}, q={q}")));
        }
        let spec = ClassPSpec {
            p,
            q,
            rho,
            sector: None,
            p_conj: p / (p - 1.0),
            q_conj: q / (q - 1.0),
        };
        spec.validate_rho()?;
        Ok(spec)
    }

    pub fn with_sector(mut self, params: SectorParams) -> Self {
        self.sector = Some(params);
        self
    }

    /// Hoelder conjugate of `p`, stored at construction.
    pub fn p_conj(&self) -> f64 {
        self.p_conj
    }

    /// Hoelder conjugate of `q`, stored at construction.
    pub fn q_conj(&self) -> f64 {
        self.q_conj
    }

    /// The generated inverse `t^{1/p} rho(t^{1/q - 1/p})`.
    pub fn inverse_value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let exponent = 1.0 / self.q - 1.0 / self.p;
        t.powf(1.0 / self.p) * self.rho.eval(t.powf(exponent))
    }

    /// Principal-branch complex extension of the inverse.
    pub fn inverse_complex(&self, z: Complex64) -> Option<Complex64> {
        let exponent = 1.0 / self.q - 1.0 / self.p;
        Some(z.powf(1.0 / self.p) * self.rho.eval_complex(z.powf(exponent))?)
    }

    /// Sampled scaling and midpoint-concavity checks for `rho`.
    /// Reports the first violating pair.
    fn validate_rho(&self) -> Result<()> {
        let grid = numeric::log_grid(1e-6, 1e6, 41);
        for &s in &grid {
            for &t in &grid {
                let lhs = self.rho.eval(s * t);
                let rhs = s.max(1.0) * self.rho.eval(t);
                if lhs > rhs * (1.0 + 1e-9) {
                    return Err(Error::ClassP(format!(
                        "rho(st) <= max(1,s) rho(t) fails at s={s:.6e}, t={t:.6e}: {lhs:.6e} > {rhs:.6e}"
                    )));
                }
            }
        }
        for &a in &grid {
            for &b in &grid {
                let mid = self.rho.eval(0.5 * (a + b));
                let chord = 0.5 * (self.rho.eval(a) + self.rho.eval(b));
                if mid < chord * (1.0 - 1e-9) {
                    return Err(Error::ClassP(format!(
                        "rho not midpoint concave at ({a:.6e}, {b:.6e})"
                    )));
                }
            }
        }
        // Positivity on the sampled grid.
        for &t in &grid {
            if !(self.rho.eval(t) > 0.0) {
                return Err(Error::ClassP(format!("rho({t:.6e}) not positive")));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        format!("classp:{},{},{}", self.p, self.q, self.rho.describe())
    }
}

/// How a function was obtained.
#[derive(Clone, Debug)]
pub enum Provenance {
    Power(f64),
    ClassP(String),
    NumericConjugateOf(String),
    UserDefined(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Power(p) => write!(f, "power({p})"),
            Provenance::ClassP(s) => write!(f, "class-p({s})"),
            Provenance::NumericConjugateOf(s) => write!(f, "numeric-conjugate-of({s})"),
            Provenance::UserDefined(s) => write!(f, "user-defined({s})"),
        }
    }
}

/// Monotone C1 interpolant (Fritsch-Butland tangents) of a positive
/// increasing map in log-log coordinates. Smoothness matters: adaptive
/// quadrature over the interpolant converges quickly only without kinks.
struct LogLogInterp {
    ln_x: Vec<f64>,
    ln_y: Vec<f64>,
    slope: Vec<f64>,
}

impl LogLogInterp {
    fn build(points: &[(f64, f64)]) -> Option<Self> {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .copied()
            .filter(|&(x, y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let ln_x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
        let ln_y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
        let n = ln_x.len();
        let mut secant = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let dx = ln_x[i + 1] - ln_x[i];
            if !(dx > 0.0) {
                return None;
            }
            secant.push((ln_y[i + 1] - ln_y[i]) / dx);
        }
        let mut slope = vec![0.0; n];
        slope[0] = secant[0];
        slope[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            let (a, b) = (secant[i - 1], secant[i]);
            slope[i] = if a * b > 0.0 { 2.0 * a * b / (a + b) } else { 0.0 };
        }
        Some(LogLogInterp { ln_x, ln_y, slope })
    }

    fn eval(&self, x: f64) -> Option<f64> {
        if x <= 0.0 {
            return None;
        }
        let u = x.ln();
        if u < self.ln_x[0] || u > *self.ln_x.last().unwrap() {
            return None;
        }
        let idx = self.ln_x.partition_point(|&v| v <= u).clamp(1, self.ln_x.len() - 1) - 1;
        let h = self.ln_x[idx + 1] - self.ln_x[idx];
        let s = (u - self.ln_x[idx]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let w = (2.0 * s3 - 3.0 * s2 + 1.0) * self.ln_y[idx]
            + (s3 - 2.0 * s2 + s) * h * self.slope[idx]
            + (-2.0 * s3 + 3.0 * s2) * self.ln_y[idx + 1]
            + (s3 - s2) * h * self.slope[idx + 1];
        Some(w.exp())
    }
}

enum Kind {
    /// t^p
    Power { p: f64 },
    /// c * t^p (closed-form conjugates of powers)
    ScaledPower { c: f64, p: f64 },
    /// forward realized by bisection on the closed-form inverse; the
    /// interpolant is tabulated from the inverse at construction
    ClassP { spec: ClassPSpec, interp: LogLogInterp },
    /// e^t - t - 1, the stock non-Delta2 example
    ExpM1,
    /// forward(s) = sup_t (s t - base(t)), maximized per query
    NumericConjugate {
        base: YoungFunction,
        cache: Vec<(f64, f64)>,
        interp: Option<LogLogInterp>,
    },
}

struct Inner {
    kind: Kind,
    delta2: Delta2,
    provenance: Provenance,
}

/// An evaluable Young function. Immutable and cheap to clone; safe to share
/// across concurrent grid sweeps.
#[derive(Clone)]
pub struct YoungFunction {
    inner: Arc<Inner>,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YoungFunction({})", self.describe())
    }
}

impl YoungFunction {
    fn from_kind(kind: Kind, delta2: Delta2, provenance: Provenance) -> Self {
        YoungFunction {
            inner: Arc::new(Inner { kind, delta2, provenance }),
        }
    }

    pub fn forward(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.inner.kind {
            Kind::Power { p } => t.powf(*p),
            Kind::ScaledPower { c, p } => c * t.powf(*p),
            Kind::ClassP { spec, .. } => {
                let hint = t.powf(spec.p).max(f64::MIN_POSITIVE);
                numeric::invert_increasing(|x| spec.inverse_value(x), t, hint, INVERT_TOL)
            }
            Kind::ExpM1 => expm1t_value(t),
            Kind::NumericConjugate { base, .. } => conjugate_value(base, t),
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        match &self.inner.kind {
            Kind::Power { p } => y.powf(1.0 / p),
            Kind::ScaledPower { c, p } => (y / c).powf(1.0 / p),
            Kind::ClassP { spec, .. } => spec.inverse_value(y),
            Kind::ExpM1 => {
                let hint = (y + 1.0).ln().max(y.sqrt());
                numeric::invert_increasing(expm1t_value, y, hint, INVERT_TOL)
            }
            Kind::NumericConjugate { base, .. } => {
                // variational form of the conjugate inverse:
                // conj^-1(y) = inf_{t > 0} (y + base(t)) / t
                let (_, neg) = numeric::log_scan_max(
                    |t: f64| -(y + base.forward(t)) / t,
                    1e-14,
                    1e14,
                    72,
                    1e-11,
                );
                -neg
            }
        }
    }

    /// Complementary Young function: closed form for the power family,
    /// numerical otherwise (on a dense default grid so the interpolating
    /// fast path stays accurate).
    pub fn conjugate(&self) -> YoungFunction {
        match &self.inner.kind {
            Kind::Power { p } => scaled_power_conjugate(1.0, *p),
            Kind::ScaledPower { c, p } => scaled_power_conjugate(*c, *p),
            // Biconjugation of a convex Young function is the identity.
            Kind::NumericConjugate { base, .. } => base.clone(),
            _ => conjugate_numeric(self, &numeric::log_grid(1e-9, 1e9, 433))
                .expect("built-in Young functions have bounded conjugates"),
        }
    }

    pub fn delta2_global(&self) -> Delta2 {
        self.inner.delta2
    }

    pub fn provenance(&self) -> &Provenance {
        &self.inner.provenance
    }

    pub fn class_p_spec(&self) -> Option<&ClassPSpec> {
        match &self.inner.kind {
            Kind::ClassP { spec, .. } => Some(spec),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.inner.kind {
            Kind::Power { p } => format!("power:{p}"),
            Kind::ScaledPower { c, p } => format!("scaled-power:{c},{p}"),
            Kind::ClassP { spec, .. } => spec.describe(),
            Kind::ExpM1 => "expm1t".into(),
            Kind::NumericConjugate { base, .. } => format!("conjugate-of:{}", base.describe()),
        }
    }

    /// Fast-path evaluation by monotone C1 interpolation of cached samples
    /// in log-log coordinates (exact for pure powers). `None` outside the
    /// cached range or for kinds without a cache; exact evaluation is always
    /// available via [`YoungFunction::forward`].
    pub fn forward_interpolated(&self, s: f64) -> Option<f64> {
        match &self.inner.kind {
            Kind::NumericConjugate { interp: Some(interp), .. } => interp.eval(s),
            Kind::ClassP { interp, .. } => interp.eval(s),
            _ => None,
        }
    }

    /// Forward evaluation preferring the interpolation cache. Search loops
    /// use this and re-evaluate final answers exactly.
    pub fn forward_fast(&self, t: f64) -> f64 {
        self.forward_interpolated(t).unwrap_or_else(|| self.forward(t))
    }

    /// The cached conjugate samples, when this function was built by
    /// numerical conjugation. Callers may integrate the log-log
    /// interpolant in closed form (each cell is a pure power law).
    pub fn conjugate_cells(&self) -> Option<&[(f64, f64)]> {
        match &self.inner.kind {
            Kind::NumericConjugate { cache, .. } if cache.len() >= 2 => Some(cache),
            _ => None,
        }
    }

    /// `(c, p)` when this function is exactly `c t^p`.
    pub fn power_form(&self) -> Option<(f64, f64)> {
        match &self.inner.kind {
            Kind::Power { p } => Some((1.0, *p)),
            Kind::ScaledPower { c, p } => Some((*c, *p)),
            _ => None,
        }
    }

    /// Whether [`YoungFunction::forward_fast`] actually interpolates. The
    /// interpolant is C1, so quadrature tolerances below its fidelity only
    /// chase its second-derivative jumps.
    pub fn uses_interpolation(&self) -> bool {
        matches!(
            &self.inner.kind,
            Kind::ClassP { .. } | Kind::NumericConjugate { interp: Some(_), .. }
        )
    }

    /// Inverse evaluation preferring the interpolation cache.
    pub fn inverse_fast(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if let Kind::NumericConjugate { cache, .. } = &self.inner.kind {
            if cache.len() >= 2 && y >= cache[0].1 && y <= cache[cache.len() - 1].1 {
                let idx = cache.partition_point(|&(_, v)| v <= y).clamp(1, cache.len() - 1);
                let (x0, y0) = cache[idx - 1];
                let (x1, y1) = cache[idx];
                if y0 > 0.0 && x0 > 0.0 {
                    let w = (y.ln() - y0.ln()) / (y1.ln() - y0.ln());
                    return (x0.ln() + w * (x1.ln() - x0.ln())).exp();
                }
            }
        }
        self.inverse(y)
    }

    /// Invariant checks on dyadic grids up to `2^(+/- depth)`: zero at zero,
    /// strict increase, midpoint convexity, the two `phi(t)/t` limits, and
    /// forward-inverse consistency. Grid evidence, not proof.
    pub fn validate(&self, depth: u32) -> Result<()> {
        validate_young_map(&|t| self.forward(t), depth)?;
        for k in [-20i32, -10, -4, 0, 4, 10, 20] {
            let t = (k as f64 * std::f64::consts::LN_2).exp();
            let round = self.forward(self.inverse(t));
            if (round - t).abs() > 1e-9 * t {
                return Err(Error::NotYoung(format!(
                    "forward(inverse({t:.3e})) = {round:.12e} drifts beyond 1e-9"
                )));
            }
        }
        Ok(())
    }
}

/// Young-function invariant checks for a raw map (used both by
/// [`YoungFunction::validate`] and for transformed maps like
/// `t -> phi(t^{1/r})` whose validity gates Minkowski-type bounds).
pub fn validate_young_map(f: &dyn Fn(f64) -> f64, depth: u32) -> Result<()> {
    validate_convex_increasing(f, depth)?;
    let grid = numeric::dyadic_grid(depth);
    let ratios: Vec<f64> = grid.iter().map(|&t| f(t) / t).collect();
    let mid_ratio = ratios[grid.len() / 2];
    if !(ratios[0] <= 0.1 * mid_ratio) {
        return Err(Error::NotYoung(format!(
            "phi(t)/t does not vanish towards 0 (ratio {:.3e} at t = {:.3e})",
            ratios[0], grid[0]
        )));
    }
    if !(ratios[grid.len() - 1] >= 10.0 * mid_ratio) {
        return Err(Error::NotYoung(format!(
            "phi(t)/t does not blow up towards inf (ratio {:.3e} at t = {:.3e})",
            ratios[grid.len() - 1],
            grid[grid.len() - 1]
        )));
    }
    Ok(())
}

/// Like [`validate_young_map`] but without the endpoint-limit requirements,
/// so the linear boundary case `t -> t` passes. This weaker gate is what
/// Minkowski-type bounds for the transform `t -> phi(t^{1/r})` need: the
/// transform of `t^p` with `r = p` is exactly linear.
pub fn validate_young_map_weak(f: &dyn Fn(f64) -> f64, depth: u32) -> Result<()> {
    validate_convex_increasing(f, depth)
}

/// Zero at zero, strict increase, midpoint convexity, and a nondecreasing
/// `f(t)/t` on dyadic grids. Comparisons are skipped where the map has
/// overflowed to infinity.
fn validate_convex_increasing(f: &dyn Fn(f64) -> f64, depth: u32) -> Result<()> {
    if f(0.0) != 0.0 {
        return Err(Error::NotYoung(format!("f(0) = {} instead of 0", f(0.0))));
    }
    let grid = numeric::dyadic_grid(depth);
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    for (i, w) in vals.windows(2).enumerate() {
        if w[0].is_finite() && w[1].is_finite() && !(w[1] > w[0]) {
            return Err(Error::NotYoung(format!(
                "not strictly increasing near t = {:.3e}",
                grid[i]
            )));
        }
    }
    // Midpoint convexity on a thinned set of pairs.
    let step = (grid.len() / 20).max(1);
    for i in (0..grid.len()).step_by(step) {
        for j in (i + 1..grid.len()).step_by(step) {
            let (a, b) = (grid[i], grid[j]);
            let mid = f(0.5 * (a + b));
            let chord = 0.5 * (f(a) + f(b));
            if mid.is_finite() && chord.is_finite() && mid > chord * (1.0 + 1e-9) {
                return Err(Error::NotYoung(format!(
                    "midpoint convexity fails at ({a:.3e}, {b:.3e})"
                )));
            }
        }
    }
    let ratios: Vec<f64> = grid.iter().zip(&vals).map(|(&t, &v)| v / t).collect();
    for (i, w) in ratios.windows(2).enumerate() {
        if w[0].is_finite() && w[1].is_finite() && w[1] < w[0] * (1.0 - 1e-9) {
            return Err(Error::NotYoung(format!(
                "phi(t)/t decreases near t = {:.3e}",
                grid[i]
            )));
        }
    }
    Ok(())
}

/// `phi(t) = t^p`, `p > 1`, with the exact conjugate attached.
pub fn make_power(p: f64) -> Result<YoungFunction> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::NotYoung(format!(
            "t^p needs p > 1 (phi(t)/t must vanish at 0), got p = {p}"
        )));
    }
    Ok(YoungFunction::from_kind(
        Kind::Power { p },
        Delta2::DeclaredTrue,
        Provenance::Power(p),
    ))
}

/// Exact conjugate of `c t^p`: `(p-1) p^{-p'} c^{1-p'} s^{p'}`.
fn scaled_power_conjugate(c: f64, p: f64) -> YoungFunction {
    let p_conj = p / (p - 1.0);
    let coeff = (p - 1.0) * p.powf(-p_conj) * c.powf(1.0 - p_conj);
    YoungFunction::from_kind(
        Kind::ScaledPower { c: coeff, p: p_conj },
        Delta2::DeclaredTrue,
        Provenance::NumericConjugateOf(format!("scaled-power:{c},{p}")),
    )
}

/// Build the class-P Young function whose inverse is
/// `t^{1/p} rho(t^{1/q - 1/p})`. The forward map is realized by monotone
/// bisection on the inverse; a fast-path interpolant is tabulated from the
/// closed-form inverse at construction.
pub fn make_class_p(spec: ClassPSpec) -> Result<YoungFunction> {
    // The induced inverse must be strictly increasing on a sampled grid.
    let grid = numeric::log_grid(1e-9, 1e9, 121);
    let mut prev = 0.0;
    for &t in &grid {
        let v = spec.inverse_value(t);
        if !(v > prev) {
            return Err(Error::ClassP(format!(
                "induced inverse not strictly increasing at t = {t:.6e}"
            )));
        }
        prev = v;
    }
    // tabulate (t, phi(t)) by sweeping outputs through the closed inverse
    let points: Vec<(f64, f64)> = numeric::log_grid(1e-18, 1e18, 1009)
        .into_iter()
        .map(|y| (spec.inverse_value(y), y))
        .collect();
    let interp = LogLogInterp::build(&points)
        .ok_or_else(|| Error::ClassP("degenerate forward tabulation".into()))?;
    let desc = spec.describe();
    Ok(YoungFunction::from_kind(
        Kind::ClassP { spec, interp },
        // Class-P scaling bounds imply a global Delta-2 constant.
        Delta2::DeclaredTrue,
        Provenance::ClassP(desc),
    ))
}

/// `e^t - t - 1` without the catastrophic cancellation of
/// `exp_m1(t) - t` for small arguments.
fn expm1t_value(t: f64) -> f64 {
    if t < 1e-4 {
        t * t * (0.5 + t / 6.0 + t * t / 24.0)
    } else {
        t.exp_m1() - t
    }
}

/// `phi(t) = e^t - t - 1`: a Young function violating Delta-2 near infinity.
pub fn make_expm1t() -> YoungFunction {
    YoungFunction::from_kind(
        Kind::ExpM1,
        Delta2::DeclaredFalse,
        Provenance::UserDefined("expm1t".into()),
    )
}

/// One evaluation of the conjugate supremum `sup_t (s t - phi(t))`:
/// bracket the concave objective by doubling, then golden-section.
fn conjugate_value(base: &YoungFunction, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let g = |t: f64| s * t - base.forward(t);
    let mut hi = 1.0_f64;
    let mut g_hi = g(hi);
    let mut iters = 0usize;
    loop {
        let g_next = g(2.0 * hi);
        if g_next <= g_hi {
            break;
        }
        hi *= 2.0;
        g_hi = g_next;
        iters += 1;
        if iters > 600 {
            return f64::INFINITY;
        }
    }
    let (_, v) = numeric::golden_max(g, 0.0, 2.0 * hi, CONJUGATE_TOL);
    v.max(0.0)
}

/// Numerical complementary function on a log-spaced grid. Values on the grid
/// are cached and interpolation is offered as a fast path; every evaluation
/// through [`YoungFunction::forward`] performs the exact maximization.
pub fn conjugate_numeric(phi: &YoungFunction, grid: &[f64]) -> Result<YoungFunction> {
    if grid.is_empty() {
        return Err(Error::Precondition("conjugation grid must be nonempty".into()));
    }
    let mut cache = Vec::with_capacity(grid.len());
    for &s in grid {
        let v = conjugate_value(phi, s);
        if !v.is_finite() {
            return Err(Error::UnboundedConjugate(s));
        }
        cache.push((s, v));
    }
    cache.sort_by(|a, b| a.0.total_cmp(&b.0));
    let delta2 = if matches!(phi.inner.kind, Kind::ClassP { .. }) {
        // Conjugates of class-P functions inherit a global Delta-2 bound
        // from the transformed scaling inequality.
        Delta2::DeclaredTrue
    } else {
        Delta2::Untested
    };
    let provenance = Provenance::NumericConjugateOf(phi.describe());
    let interp = LogLogInterp::build(&cache);
    Ok(YoungFunction::from_kind(
        Kind::NumericConjugate { base: phi.clone(), cache, interp },
        delta2,
        provenance,
    ))
}

/// Which range of arguments a Delta-2 sweep covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Delta2Mode {
    Global,
    NearInfinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Delta2Verdict {
    HoldsOnGrid,
    RatioUnboundedOnGrid,
}

/// Grid evidence for the doubling condition `phi(2t) <= K phi(t)`. A pass is
/// evidence, not proof; the sampled grid is recorded alongside the verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Delta2Report {
    pub mode: Delta2Mode,
    pub k_estimate: f64,
    pub verdict: Delta2Verdict,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_len: usize,
    /// Ratio growth over the top octave; > 4.5 is treated as divergence.
    pub top_growth: f64,
}

pub fn check_delta2(phi: &YoungFunction, mode: Delta2Mode, grid: &[f64]) -> Delta2Report {
    let filtered: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && (mode == Delta2Mode::Global || t >= 1.0))
        .collect();
    let ratio = |t: f64| phi.forward(2.0 * t) / phi.forward(t);
    let k_estimate = filtered.iter().copied().map(ratio).fold(0.0, f64::max);
    let hi = filtered.last().copied().unwrap_or(1.0);
    let top_growth = ratio(hi) / ratio(0.5 * hi).max(f64::MIN_POSITIVE);
    let verdict = if top_growth > 4.5 {
        Delta2Verdict::RatioUnboundedOnGrid
    } else {
        Delta2Verdict::HoldsOnGrid
    };
    Delta2Report {
        mode,
        k_estimate,
        verdict,
        grid_lo: filtered.first().copied().unwrap_or(f64::NAN),
        grid_hi: hi,
        grid_len: filtered.len(),
        top_growth,
    }
}

/// Signed relative slacks for the sandwich `t <= phi^-1(t) conj^-1(t) <= 2t`
/// and, when a class-P spec is supplied, the five scaling inequalities it
/// generates. Violations are data: `min_slack < 0` quantifies the worst one.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub sandwich_lower_min_slack: f64,
    pub sandwich_upper_min_slack: f64,
    pub scaling_min_slacks: Option<[f64; 5]>,
    pub worst_point: (f64, f64),
    pub min_slack: f64,
}

impl InequalityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.min_slack >= -tol
    }
}

/// Evaluate the complementary-pair inequalities over `grid` (sandwich), and
/// over `grid x grid` (class-P scaling) when `spec` is present.
pub fn inequality_report(
    phi: &YoungFunction,
    phitilde: &YoungFunction,
    spec: Option<&ClassPSpec>,
    grid: &[f64],
) -> InequalityReport {
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    let mut worst = (f64::NAN, f64::NAN);
    let mut min_slack = f64::INFINITY;
    let mut note = |slack: f64, pt: (f64, f64)| {
        if slack < min_slack {
            min_slack = slack;
            worst = pt;
        }
    };
    for &t in grid {
        if t <= 0.0 {
            continue;
        }
        let prod = phi.inverse(t) * phitilde.inverse(t);
        let lo_slack = (prod - t) / t;
        let up_slack = (2.0 * t - prod) / t;
        lower = lower.min(lo_slack);
        upper = upper.min(up_slack);
        note(lo_slack, (t, t));
        note(up_slack, (t, t));
    }

    let scaling = spec.map(|sp| {
        let (p, q) = (sp.p, sp.q);
        let (pc, qc) = (sp.p_conj(), sp.q_conj());
        // Cache the expensive single-argument evaluations on the grid.
        let inv_phi: Vec<f64> = grid.iter().map(|&t| phi.inverse(t)).collect();
        let fwd_phi: Vec<f64> = grid.iter().map(|&t| phi.forward(t)).collect();
        let fwd_til: Vec<f64> = grid.iter().map(|&t| phitilde.forward(t)).collect();
        let inv_til: Vec<f64> = grid.iter().map(|&t| phitilde.inverse(t)).collect();
        let mut slacks = [f64::INFINITY; 5];
        for &s in grid.iter() {
            for (j, &t) in grid.iter().enumerate() {
                let st = s * t;
                // phi^-1(st) <= max(s^{1/p}, s^{1/q}) phi^-1(t)
                let rhs = s.powf(1.0 / p).max(s.powf(1.0 / q)) * inv_phi[j];
                let sl = (rhs - phi.inverse(st)) / rhs;
                if sl < slacks[0] {
                    slacks[0] = sl;
                    note(sl, (s, t));
                }
                // phi(st) <= max(s^q, s^p) phi(t)
                let rhs = s.powf(q).max(s.powf(p)) * fwd_phi[j];
                let sl = (rhs - phi.forward(st)) / rhs;
                if sl < slacks[1] {
                    slacks[1] = sl;
                    note(sl, (s, t));
                }
                // conj(st) <= max(s^{p'}, s^{q'}) conj(t)
                let rhs = s.powf(pc).max(s.powf(qc)) * fwd_til[j];
                let sl = (rhs - phitilde.forward(st)) / rhs;
                if sl < slacks[2] {
                    slacks[2] = sl;
                    note(sl, (s, t));
                }
                // min(u^{1/p}, u^{1/q}) phi^-1(v) <= phi^-1(uv)
                let (u, v) = (s, t);
                let lhs = u.powf(1.0 / p).min(u.powf(1.0 / q)) * inv_phi[j];
                let big = phi.inverse(u * v);
                let sl = (big - lhs) / big.max(f64::MIN_POSITIVE);
                if sl < slacks[3] {
                    slacks[3] = sl;
                    note(sl, (u, v));
                }
                // min(u^{1/q'}, u^{1/p'}) conj^-1(v) <= conj^-1(uv)
                let lhs = u.powf(1.0 / qc).min(u.powf(1.0 / pc)) * inv_til[j];
                let big = phitilde.inverse(u * v);
                let sl = (big - lhs) / big.max(f64::MIN_POSITIVE);
                if sl < slacks[4] {
                    slacks[4] = sl;
                    note(sl, (u, v));
                }
            }
        }
        slacks
    });

    InequalityReport {
        sandwich_lower_min_slack: lower,
        sandwich_upper_min_slack: upper,
        scaling_min_slacks: scaling,
        worst_point: worst,
        min_slack,
    }
}

/// Sampled two-sided equivalence of the class-P inverse on the sector of
/// half-angle `delta`, together with the same ratios at the level of `rho`.
#[derive(Clone, Debug, Serialize)]
pub struct SectorReport {
    pub delta: f64,
    pub m0: f64,
    pub m1: f64,
    pub rho_ratio_min: f64,
    pub rho_ratio_max: f64,
    pub verdict: bool,
    pub worst_low: (f64, f64),
}

/// Sample `z = r e^{i theta}` over log-spaced radii and angles filling
/// `(-delta, delta)`; returns min/max of `|phi^-1(z)| / phi^-1(|z|)` and of
/// `|rho(z)| / rho(|z|)`.
pub fn check_sector_equivalence(
    spec: &ClassPSpec,
    delta: f64,
    samples: usize,
) -> Result<SectorReport> {
    if !(delta > 0.0 && delta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Precondition(format!(
            "sector half-angle must lie in (0, pi/2), got {delta}"
        )));
    }
    if spec.rho.eval_complex(Complex64::new(1.0, 0.0)).is_none() {
        return Err(Error::NonHolomorphicRho(spec.rho.describe()));
    }
    let radii = numeric::log_grid(1e-6, 1e6, samples.max(8));
    let n_theta = samples.clamp(9, 65);
    let mut m0 = f64::INFINITY;
    let mut m1 = 0.0_f64;
    let mut rho_min = f64::INFINITY;
    let mut rho_max = 0.0_f64;
    let mut worst_low = (f64::NAN, f64::NAN);
    for &r in &radii {
        for k in 0..n_theta {
            let theta = delta * (1.0 - 1e-9) * (2.0 * k as f64 / (n_theta - 1) as f64 - 1.0);
            let z = Complex64::from_polar(r, theta);
            let ratio = spec
                .inverse_complex(z)
                .expect("complex evaluation checked above")
                .norm()
                / spec.inverse_value(r);
            if ratio < m0 {
                m0 = ratio;
                worst_low = (r, theta);
            }
            m1 = m1.max(ratio);
            let rr = spec
                .rho
                .eval_complex(z)
                .expect("complex evaluation checked above")
                .norm()
                / spec.rho.eval(r);
            rho_min = rho_min.min(rr);
            rho_max = rho_max.max(rr);
        }
    }
    let verdict = m0.is_finite() && m0 > 0.0 && m1.is_finite();
    Ok(SectorReport {
        delta,
        m0,
        m1,
        rho_ratio_min: rho_min,
        rho_ratio_max: rho_max,
        verdict,
        worst_low,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(p: f64) -> YoungFunction {
        make_power(p).unwrap()
    }

    #[test]
    fn power_evaluations() {
        assert!((power(2.0).forward(3.0) - 9.0).abs() < 1e-12);
        assert!((power(3.0).inverse(8.0) - 2.0).abs() < 1e-12);
        // conj of t^2 is s^2/4
        assert!((power(2.0).conjugate().forward(2.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_rejects_sublinear() {
        assert!(make_power(1.0).is_err());
        assert!(make_power(0.5).is_err());
    }

    #[test]
    fn scaled_power_conjugate_round_trips() {
        let phi = power(2.0);
        let tilde = phi.conjugate();
        let back = tilde.conjugate();
        for &t in &[0.25, 1.0, 3.0, 17.0] {
            assert!((back.forward(t) - phi.forward(t)).abs() < 1e-10 * phi.forward(t));
        }
    }

    #[test]
    fn class_p_trivial_rho_gives_powers() {
        // rho = 1: inverse t^{1/2}, so phi = t^2
        let spec = ClassPSpec::new(2.0, 3.0, Rho::One).unwrap();
        let phi = make_class_p(spec).unwrap();
        for &t in &[0.3, 1.0, 5.0] {
            assert!((phi.forward(t) - t * t).abs() < 1e-9 * (t * t));
        }
        // rho = id: inverse t^{1/3}, so phi = t^3
        let spec = ClassPSpec::new(2.0, 3.0, Rho::Id).unwrap();
        let phi = make_class_p(spec).unwrap();
        for &t in &[0.3, 1.0, 5.0] {
            assert!((phi.forward(t) - t * t * t).abs() < 1e-9 * (t * t * t));
        }
    }

    #[test]
    fn class_p_min1_round_trip() {
        let spec = ClassPSpec::new(2.0, 4.0, Rho::Min1).unwrap();
        let phi = make_class_p(spec).unwrap();
        let v = phi.forward(phi.inverse(5.0));
        assert!((v - 5.0).abs() < 1e-9 * 5.0);
    }

    #[test]
    fn class_p_rejects_bad_exponents() {
        assert!(ClassPSpec::new(3.0, 2.0, Rho::One).is_err());
        assert!(ClassPSpec::new(1.0, 2.0, Rho::One).is_err());
    }

    #[test]
    fn conjugate_numeric_matches_power_closed_form() {
        let phi = power(3.0);
        let tilde = conjugate_numeric(&phi, &numeric::log_grid(1e-2, 1e2, 17)).unwrap();
        // closed form (3-1) 3^{-3/2} s^{3/2}
        let c = 2.0 * 3.0_f64.powf(-1.5);
        for &s in &[0.5f64, 1.0, 10.0] {
            let expect = c * s.powf(1.5);
            assert!(
                (tilde.forward(s) - expect).abs() < 1e-8 * expect,
                "s={s}: {} vs {expect}",
                tilde.forward(s)
            );
        }
    }

    #[test]
    fn conjugate_numeric_of_expm1t_matches_entropy_form() {
        // conj of e^t - t - 1 is (1+s) ln(1+s) - s (stationarity t = ln(1+s)).
        let tilde = conjugate_numeric(&make_expm1t(), &numeric::log_grid(1e-2, 1e2, 9)).unwrap();
        for &s in &[0.1f64, 1.0, 7.5] {
            let expect = (1.0 + s) * (1.0 + s).ln() - s;
            assert!(
                (tilde.forward(s) - expect).abs() < 1e-8 * expect.max(1e-3),
                "s={s}"
            );
        }
    }

    #[test]
    fn numeric_conjugate_inverse_variational_form() {
        // conj of t^2 is s^2/4, so conj^-1(y) = 2 sqrt(y)
        let tilde = conjugate_numeric(&power(2.0), &numeric::log_grid(1e-3, 1e3, 25)).unwrap();
        for &y in &[1e-6f64, 0.3, 1.0, 47.0, 1e6] {
            let expect = 2.0 * y.sqrt();
            let got = tilde.inverse(y);
            assert!((got - expect).abs() < 1e-9 * expect, "y={y}: {got} vs {expect}");
        }
    }

    #[test]
    fn double_numeric_conjugation_recovers_square() {
        let phi = power(2.0);
        let grid = numeric::log_grid(1e-3, 1e3, 25);
        let once = conjugate_numeric(&phi, &grid).unwrap();
        let twice = conjugate_numeric(&once, &grid).unwrap();
        for &t in &[0.05, 0.7, 1.0, 13.0] {
            let expect = t * t;
            assert!(
                (twice.forward(t) - expect).abs() < 1e-6 * expect,
                "t={t}: {}",
                twice.forward(t)
            );
        }
    }

    #[test]
    fn delta2_power_constant() {
        let report = check_delta2(&power(2.5), Delta2Mode::Global, &numeric::log_grid(1e-6, 1e6, 60));
        assert_eq!(report.verdict, Delta2Verdict::HoldsOnGrid);
        assert!((report.k_estimate - 2f64.powf(2.5)).abs() < 1e-9 * 2f64.powf(2.5));
    }

    #[test]
    fn delta2_expm1t_unbounded() {
        let grid = numeric::log_grid(1e-2, 50.0, 60);
        let report = check_delta2(&make_expm1t(), Delta2Mode::NearInfinity, &grid);
        assert_eq!(report.verdict, Delta2Verdict::RatioUnboundedOnGrid);
        assert!(report.k_estimate > 1e10);
    }

    #[test]
    fn delta2_class_p_bounded_by_2_pow_q() {
        let spec = ClassPSpec::new(2.0, 4.0, Rho::Min1).unwrap();
        let phi = make_class_p(spec).unwrap();
        let report = check_delta2(&phi, Delta2Mode::Global, &numeric::log_grid(1e-5, 1e5, 60));
        assert_eq!(report.verdict, Delta2Verdict::HoldsOnGrid);
        assert!(report.k_estimate <= 16.0 * (1.0 + 1e-6));
    }

    #[test]
    fn sandwich_square_has_zero_upper_slack_at_one() {
        let phi = power(2.0);
        let tilde = phi.conjugate();
        // phi^-1(1) * conj^-1(1) = 1 * 2 = 2
        let prod = phi.inverse(1.0) * tilde.inverse(1.0);
        assert!((prod - 2.0).abs() < 1e-10);
        let report = inequality_report(&phi, &tilde, None, &numeric::log_grid(1e-6, 1e6, 100));
        assert!(report.passes(1e-8), "min slack {}", report.min_slack);
    }

    #[test]
    fn scaling_slack_tight_for_square() {
        // s = 4, t = 1, spec (2, 3, one): phi^-1(4) = 2 = max(4^{1/2}, 4^{1/3}) * 1.
        let spec = ClassPSpec::new(2.0, 3.0, Rho::One).unwrap();
        let phi = make_class_p(spec.clone()).unwrap();
        let lhs = phi.inverse(4.0);
        let rhs = 4f64.powf(0.5).max(4f64.powf(1.0 / 3.0)) * phi.inverse(1.0);
        assert!((lhs - 2.0).abs() < 1e-9 && (rhs - 2.0).abs() < 1e-9);
    }

    #[test]
    fn validate_accepts_builtins_and_rejects_concave() {
        power(1.5).validate(40).unwrap();
        make_expm1t().validate(40).unwrap();
        let spec = ClassPSpec::new(2.0, 4.0, Rho::Min1).unwrap();
        make_class_p(spec).unwrap().validate(40).unwrap();
        // t^{3/4} is concave: not a Young function.
        assert!(validate_young_map(&|t: f64| t.powf(0.75), 20).is_err());
    }

    #[test]
    fn sector_log1p_ratio_at_pi_over_3() {
        // |log(1 + e^{i pi/3})| / log 2 = 1.09483...
        let z = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let val = (z + 1.0).ln().norm() / 2f64.ln();
        assert!((val - 1.094828).abs() < 1e-5, "got {val}");
    }

    #[test]
    fn sector_report_log1p() {
        let spec = ClassPSpec::new(2.0, 4.0, Rho::Log1p).unwrap();
        let report = check_sector_equivalence(&spec, std::f64::consts::FRAC_PI_3, 48).unwrap();
        assert!(report.verdict);
        assert!(report.rho_ratio_min >= 0.25 - 1e-9, "rho min {}", report.rho_ratio_min);
        assert!(report.m1.is_finite() && report.m0 > 0.0);
    }

    #[test]
    fn sector_rejects_min1() {
        let spec = ClassPSpec::new(2.0, 4.0, Rho::Min1).unwrap();
        assert!(matches!(
            check_sector_equivalence(&spec, 0.5, 16),
            Err(Error::NonHolomorphicRho(_))
        ));
    }

    #[test]
    fn theta_zero_ray_ratio_is_one() {
        let spec = ClassPSpec::new(2.0, 4.0, Rho::Log1p).unwrap();
        for &r in &[1e-3, 1.0, 1e3] {
            let z = Complex64::new(r, 0.0);
            let ratio = spec.inverse_complex(z).unwrap().norm() / spec.inverse_value(r);
            assert!((ratio - 1.0).abs() < 1e-12);
        }
    }
}
