//! Function representations the norm machinery operates on: exact step
//! functions, closed-form exponential/power families, sequence-valued
//! exponential bundles, and piecewise-logarithmic closed forms.

use serde::Serialize;

use crate::error::{Error, Result};

/// A step function: `values[i]` on `(breaks[i], breaks[i+1])`, zero outside
/// `[breaks[0], breaks[last]]`. Breakpoints are strictly increasing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::Precondition(format!(
                "step function needs n+1 breakpoints for n values, got {} / {}",
                breaks.len(),
                values.len()
            )));
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Precondition(
                "step breakpoints must be strictly increasing".into(),
            ));
        }
        if breaks.iter().any(|b| !b.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("step data must be finite".into()));
        }
        Ok(StepFunction { breaks, values })
    }

    pub fn constant(c: f64, a: f64, b: f64) -> Self {
        StepFunction::new(vec![a, b], vec![c]).expect("constant piece")
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pieces as `(left, right, value)` triples.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breaks
            .windows(2)
            .zip(self.values.iter())
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// Pointwise value with the convention `f = values[i]` on
    /// `(breaks[i], breaks[i+1]]` and `0` outside.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.breaks[0] || t > *self.breaks.last().unwrap() {
            return 0.0;
        }
        let idx = self.breaks.partition_point(|&b| b < t);
        self.values[idx - 1]
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Lebesgue measure of `{ |f| > s }`.
    pub fn measure_above(&self, s: f64) -> f64 {
        self.pieces()
            .filter(|&(_, _, v)| v.abs() > s)
            .map(|(a, b, _)| b - a)
            .sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        StepFunction {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// Exact sum of `g(value) * piece_length` over the pieces; the workhorse
    /// behind exact modulars of step functions.
    pub fn sum_pieces(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.pieces().map(|(a, b, v)| g(v) * (b - a)).sum()
    }

    /// Pointwise combination on the merged breakpoint grid; exact for any
    /// binary operation (`|f - g|`, `f + g`, products, ...). Both inputs are
    /// zero-extended outside their supports.
    pub fn combine(&self, other: &StepFunction, mut op: impl FnMut(f64, f64) -> f64) -> Self {
        let mut grid: Vec<f64> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .copied()
            .collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut values = Vec::with_capacity(grid.len() - 1);
        for w in grid.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            values.push(op(self.eval(mid), other.eval(mid)));
        }
        StepFunction { breaks: grid, values }
    }

    /// Exact integral of the pointwise product.
    pub fn integral_product(&self, other: &StepFunction) -> f64 {
        self.combine(other, |a, b| a * b)
            .pieces()
            .map(|(a, b, v)| v * (b - a))
            .sum()
    }

    /// Restriction to `[a, b]` (pieces clipped exactly).
    pub fn restrict(&self, a: f64, b: f64) -> Option<Self> {
        let mut breaks = vec![];
        let mut values = vec![];
        for (x0, x1, v) in self.pieces() {
            let lo = x0.max(a);
            let hi = x1.min(b);
            if hi > lo {
                if breaks.is_empty() {
                    breaks.push(lo);
                } else if *breaks.last().unwrap() < lo {
                    // gap inside the restriction: fill with an explicit zero piece
                    values.push(0.0);
                    breaks.push(lo);
                }
                breaks.push(hi);
                values.push(v);
            }
        }
        if values.is_empty() {
            None
        } else {
            Some(StepFunction { breaks, values })
        }
    }
}

/// One coordinate of a sequence-valued trajectory: `amplitude * e^{-rate t}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Mode {
    pub amplitude: f64,
    pub rate: f64,
}

/// Scalar- or sequence-valued function on an interval.
#[derive(Clone, Debug)]
pub enum SampledFunction {
    /// Exact step function.
    Step(StepFunction),
    /// `amplitude * e^{-sigma t}` on `(a, b)`; `sigma > 0` required when `b`
    /// is infinite.
    Exp { amplitude: f64, sigma: f64, a: f64, b: f64 },
    /// `amplitude * t^exponent` on `(a, b)`.
    Power { amplitude: f64, exponent: f64, a: f64, b: f64 },
    /// Coordinatewise exponentials measured in the l^r norm on `(a, b)`.
    SeqExp { modes: Vec<Mode>, r: f64, a: f64, b: f64 },
    /// Piecewise `c - m ln t` on `(0, tau)`; the closed form of the
    /// tail-averaging integral operator applied to a step function.
    PiecewiseLog(PiecewiseLogFn),
}

impl SampledFunction {
    pub fn step(f: StepFunction) -> Self {
        SampledFunction::Step(f)
    }

    pub fn exp_decay(amplitude: f64, sigma: f64, a: f64, b: f64) -> Result<Self> {
        if b == f64::INFINITY && sigma <= 0.0 && amplitude != 0.0 {
            return Err(Error::Precondition(
                "exponential kind on an infinite domain needs sigma > 0".into(),
            ));
        }
        if !(b > a) {
            return Err(Error::Precondition("domain must satisfy a < b".into()));
        }
        Ok(SampledFunction::Exp { amplitude, sigma, a, b })
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            SampledFunction::Step(f) => f.domain(),
            SampledFunction::Exp { a, b, .. } => (*a, *b),
            SampledFunction::Power { a, b, .. } => (*a, *b),
            SampledFunction::SeqExp { a, b, .. } => (*a, *b),
            SampledFunction::PiecewiseLog(f) => (0.0, f.tau),
        }
    }

    /// The scalar `|f(t)|` (or `l^r` norm of the coordinates) at `t` inside
    /// the domain; zero outside.
    pub fn value_norm_at(&self, t: f64) -> f64 {
        let (a, b) = self.domain();
        if t < a || t > b {
            return 0.0;
        }
        match self {
            SampledFunction::Step(f) => f.eval(t).abs(),
            SampledFunction::Exp { amplitude, sigma, .. } => {
                (amplitude * (-sigma * t).exp()).abs()
            }
            SampledFunction::Power { amplitude, exponent, .. } => {
                (amplitude * t.powf(*exponent)).abs()
            }
            SampledFunction::SeqExp { modes, r, .. } => {
                // the l^1 and l^2 exponents dominate the workloads; avoid powf
                if *r == 2.0 {
                    let mut sum = 0.0;
                    for m in modes {
                        let e = m.rate * t;
                        if m.amplitude != 0.0 && e < 700.0 {
                            let v = m.amplitude * (-e).exp();
                            sum += v * v;
                        }
                    }
                    sum.sqrt()
                } else if *r == 1.0 {
                    modes
                        .iter()
                        .filter(|m| m.amplitude != 0.0 && m.rate * t < 700.0)
                        .map(|m| (m.amplitude * (-m.rate * t).exp()).abs())
                        .sum()
                } else {
                    let sum: f64 = modes
                        .iter()
                        .filter(|m| m.amplitude != 0.0 && m.rate * t < 700.0)
                        .map(|m| (m.amplitude.abs() * (-m.rate * t).exp()).powf(*r))
                        .sum();
                    sum.powf(1.0 / r)
                }
            }
            SampledFunction::PiecewiseLog(f) => f.eval(t).abs(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SampledFunction::Step(f) => f.is_zero(),
            SampledFunction::Exp { amplitude, .. } => *amplitude == 0.0,
            SampledFunction::Power { amplitude, .. } => *amplitude == 0.0,
            SampledFunction::SeqExp { modes, .. } => modes.iter().all(|m| m.amplitude == 0.0),
            SampledFunction::PiecewiseLog(f) => f.values_zero(),
        }
    }

    /// Essential supremum of `|f|` on the domain; `inf` when the closed form
    /// is unbounded there. Used only to seed norm bisections.
    pub fn ess_sup(&self) -> f64 {
        let (a, b) = self.domain();
        match self {
            SampledFunction::Step(f) => f.sup_abs(),
            SampledFunction::Exp { amplitude, sigma, .. } => {
                let at = |t: f64| amplitude.abs() * (-sigma * t).exp();
                if *sigma >= 0.0 {
                    at(a)
                } else {
                    at(b)
                }
            }
            SampledFunction::Power { amplitude, exponent, .. } => {
                if *amplitude == 0.0 {
                    0.0
                } else if *exponent >= 0.0 {
                    amplitude.abs() * b.powf(*exponent)
                } else if a > 0.0 {
                    amplitude.abs() * a.powf(*exponent)
                } else {
                    f64::INFINITY
                }
            }
            SampledFunction::SeqExp { .. } => self.value_norm_at(a),
            SampledFunction::PiecewiseLog(f) => f.sup_abs(),
        }
    }

    /// Whether `|f|` is nonincreasing on its domain, so that the decreasing
    /// rearrangement is the function itself (translated to the origin).
    pub fn is_nonincreasing_abs(&self) -> bool {
        match self {
            SampledFunction::Step(f) => {
                f.values.windows(2).all(|w| w[0].abs() >= w[1].abs())
            }
            SampledFunction::Exp { amplitude, sigma, .. } => *amplitude == 0.0 || *sigma >= 0.0,
            SampledFunction::Power { amplitude, exponent, .. } => {
                *amplitude == 0.0 || *exponent <= 0.0
            }
            SampledFunction::SeqExp { .. } => true,
            SampledFunction::PiecewiseLog(f) => f.is_nonincreasing(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SampledFunction::Step(_) => "step",
            SampledFunction::Exp { .. } => "closed-form-exp",
            SampledFunction::Power { .. } => "closed-form-power",
            SampledFunction::SeqExp { .. } => "sequence-valued",
            SampledFunction::PiecewiseLog(_) => "piecewise-log",
        }
    }
}

/// `consts[i] - logcoefs[i] * ln(t)` on `(breaks[i], breaks[i+1])`,
/// covering `(0, tau)`.
#[derive(Clone, Debug, Serialize)]
pub struct PiecewiseLogFn {
    pub tau: f64,
    breaks: Vec<f64>,
    consts: Vec<f64>,
    logcoefs: Vec<f64>,
}

impl PiecewiseLogFn {
    pub fn new(breaks: Vec<f64>, consts: Vec<f64>, logcoefs: Vec<f64>) -> Result<Self> {
        if breaks.len() != consts.len() + 1 || consts.len() != logcoefs.len() {
            return Err(Error::Precondition("piecewise-log shape mismatch".into()));
        }
        let tau = *breaks.last().unwrap();
        Ok(PiecewiseLogFn { tau, breaks, consts, logcoefs })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t >= self.tau {
            return 0.0;
        }
        if t <= 0.0 {
            // Finite only when the first piece carries no log term.
            return if self.logcoefs[0] == 0.0 {
                self.consts[0]
            } else if self.logcoefs[0] > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        let idx = self.breaks.partition_point(|&b| b < t).max(1) - 1;
        let idx = idx.min(self.consts.len() - 1);
        self.consts[idx] - self.logcoefs[idx] * t.ln()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.breaks
            .windows(2)
            .zip(self.consts.iter().zip(self.logcoefs.iter()))
            .map(|(w, (&c, &m))| (w[0], w[1], c, m))
    }

    fn values_zero(&self) -> bool {
        self.consts.iter().all(|&c| c == 0.0) && self.logcoefs.iter().all(|&m| m == 0.0)
    }

    fn sup_abs(&self) -> f64 {
        if self.breaks[0] == 0.0 && self.logcoefs[0] != 0.0 {
            return f64::INFINITY;
        }
        let mut m: f64 = 0.0;
        for (a, b, c, coef) in self.pieces() {
            let left = if a == 0.0 { self.eval(f64::MIN_POSITIVE) } else { self.eval(a * (1.0 + 1e-15)) };
            m = m.max(left.abs()).max((c - coef * b.ln()).abs());
        }
        m
    }

    fn is_nonincreasing(&self) -> bool {
        // each piece is nonincreasing iff logcoef >= 0; continuity across
        // breakpoints holds by construction for outputs of the integral
        // operator, so piecewise monotonicity suffices here.
        self.logcoefs.iter().all(|&m| m >= 0.0)
    }
}

/// Nonnegative step function of two variables on a rectangle grid:
/// `values[i][j]` on the cell `(x_i, x_{i+1}) x (y_j, y_{j+1})`.
#[derive(Clone, Debug)]
pub struct StepFunction2 {
    pub x_breaks: Vec<f64>,
    pub y_breaks: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl StepFunction2 {
    pub fn new(x_breaks: Vec<f64>, y_breaks: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if x_breaks.len() != values.len() + 1
            || values.is_empty()
            || values.iter().any(|row| row.len() + 1 != y_breaks.len())
        {
            return Err(Error::Precondition("grid shape mismatch".into()));
        }
        if x_breaks.windows(2).any(|w| !(w[1] > w[0]))
            || y_breaks.windows(2).any(|w| !(w[1] > w[0]))
        {
            return Err(Error::Precondition("grid breakpoints must increase".into()));
        }
        Ok(StepFunction2 { x_breaks, y_breaks, values })
    }

    pub fn y_lengths(&self) -> Vec<f64> {
        self.y_breaks.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// The x-section at the j-th y-cell.
    pub fn x_section(&self, j: usize) -> StepFunction {
        StepFunction::new(
            self.x_breaks.clone(),
            self.values.iter().map(|row| row[j]).collect(),
        )
        .expect("grid rows validated at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_eval_and_zero_extension() {
        let f = StepFunction::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(f.eval(0.5), 2.0);
        assert_eq!(f.eval(1.5), 1.0);
        assert_eq!(f.eval(2.5), 0.0);
        assert_eq!(f.eval(-0.5), 0.0);
    }

    #[test]
    fn step_rejects_bad_breaks() {
        assert!(StepFunction::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn combine_is_exact_on_merged_grid() {
        let f = StepFunction::new(vec![0.0, 2.0], vec![3.0]).unwrap();
        let g = StepFunction::new(vec![1.0, 3.0], vec![5.0]).unwrap();
        let d = f.combine(&g, |a, b| (a - b).abs());
        // pieces: (0,1): 3, (1,2): 2, (2,3): 5
        let total: f64 = d.pieces().map(|(a, b, v)| v * (b - a)).sum();
        assert!((total - (3.0 + 2.0 + 5.0)).abs() < 1e-14);
    }

    #[test]
    fn product_integral() {
        let f = StepFunction::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0]).unwrap();
        let g = StepFunction::constant(3.0, 0.0, 2.0);
        assert!((f.integral_product(&g) - 9.0).abs() < 1e-14);
    }

    #[test]
    fn seq_exp_norm_at() {
        let f = SampledFunction::SeqExp {
            modes: vec![
                Mode { amplitude: 3.0, rate: 0.0 },
                Mode { amplitude: 4.0, rate: 0.0 },
            ],
            r: 2.0,
            a: 0.0,
            b: 1.0,
        };
        assert!((f.value_norm_at(0.5) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn piecewise_log_eval() {
        // ln(2/t) on (0, 2): consts = ln 2, logcoef = 1
        let f = PiecewiseLogFn::new(vec![0.0, 2.0], vec![2f64.ln()], vec![1.0]).unwrap();
        assert!((f.eval(1.0) - 2f64.ln()).abs() < 1e-15);
        assert!((f.eval(2.0) - 0.0).abs() < 1e-15);
        assert!(f.eval(0.0).is_infinite());
    }

    #[test]
    fn restriction_clips_and_fills_gaps() {
        let f = StepFunction::new(vec![0.0, 1.0, 3.0, 4.0], vec![1.0, 0.0, 2.0]).unwrap();
        let r = f.restrict(0.5, 3.5).unwrap();
        assert_eq!(r.eval(0.75), 1.0);
        assert_eq!(r.eval(2.0), 0.0);
        assert_eq!(r.eval(3.25), 2.0);
        assert_eq!(r.domain(), (0.5, 3.5));
    }
}
