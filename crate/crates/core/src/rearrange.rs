//! Distribution functions, decreasing rearrangements, and the weak Orlicz
//! norm `sup_t f*(t) / phi^-1(1/t)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{SampledFunction, StepFunction};
use crate::norms::{Diagnostics, NormResult};
use crate::numeric;
use crate::young::YoungFunction;

/// A function together with its decreasing rearrangement.
#[derive(Clone, Debug)]
pub struct Rearrangement {
    pub source: SampledFunction,
    pub fstar: SampledFunction,
}

impl Rearrangement {
    /// Distribution function of the source: Lebesgue measure of
    /// `{ |f| > s }`. Exact for step kinds.
    pub fn distribution(&self, s: f64) -> f64 {
        measure_above(&self.source, s)
    }

    /// Distribution function of the rearrangement; equimeasurability means
    /// this coincides with [`Rearrangement::distribution`] for every level.
    pub fn distribution_star(&self, s: f64) -> f64 {
        measure_above(&self.fstar, s)
    }
}

fn measure_above(f: &SampledFunction, s: f64) -> f64 {
    match f {
        SampledFunction::Step(sf) => sf.measure_above(s),
        _ if f.is_nonincreasing_abs() => {
            // nonincreasing closed forms: locate the level crossing
            let (a, b) = f.domain();
            let hi = if b.is_finite() { b } else { 1e12 };
            if f.value_norm_at(hi) > s {
                return hi - a;
            }
            if f.value_norm_at(a + 1e-300) <= s {
                return 0.0;
            }
            let mut lo = a;
            let mut hi2 = hi;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi2);
                if f.value_norm_at(mid) > s {
                    lo = mid;
                } else {
                    hi2 = mid;
                }
            }
            0.5 * (lo + hi2) - a
        }
        _ => f64::NAN,
    }
}

/// Decreasing rearrangement. Step inputs are sorted descending by absolute
/// value with tie lengths merged; closed forms with monotone `|f|` reduce to
/// an identity or reflected copy.
pub fn decreasing_rearrangement(f: &SampledFunction) -> Result<Rearrangement> {
    let fstar = match f {
        SampledFunction::Step(sf) => {
            let mut pieces: Vec<(f64, f64)> = sf
                .pieces()
                .filter(|&(_, _, v)| v != 0.0)
                .map(|(x0, x1, v)| (v.abs(), x1 - x0))
                .collect();
            if pieces.is_empty() {
                SampledFunction::Step(StepFunction::constant(0.0, 0.0, 1.0))
            } else {
                pieces.sort_by(|p, q| q.0.total_cmp(&p.0));
                let mut breaks = vec![0.0];
                let mut values = vec![];
                for (v, len) in pieces {
                    if Some(&v) == values.last() {
                        // merge ties
                        let last = breaks.last_mut().unwrap();
                        *last += len;
                    } else {
                        values.push(v);
                        let t = breaks.last().unwrap() + len;
                        breaks.push(t);
                    }
                }
                SampledFunction::Step(StepFunction::new(breaks, values)?)
            }
        }
        SampledFunction::Exp { amplitude, sigma, a, b } => {
            if *sigma >= 0.0 {
                // decreasing: translate the domain to the origin
                SampledFunction::Exp {
                    amplitude: amplitude.abs() * (-sigma * a).exp(),
                    sigma: *sigma,
                    a: 0.0,
                    b: b - a,
                }
            } else if b.is_finite() {
                // increasing: reflect around the right endpoint
                SampledFunction::Exp {
                    amplitude: amplitude.abs() * (-sigma * b).exp(),
                    sigma: -sigma,
                    a: 0.0,
                    b: b - a,
                }
            } else {
                return Err(Error::UnsupportedKind(
                    "growing exponential on an infinite domain".into(),
                ));
            }
        }
        SampledFunction::Power { amplitude, exponent, a, b } => {
            if *exponent <= 0.0 && *a == 0.0 {
                SampledFunction::Power {
                    amplitude: amplitude.abs(),
                    exponent: *exponent,
                    a: *a,
                    b: *b,
                }
            } else {
                return Err(Error::UnsupportedKind(format!(
                    "power kind with exponent {exponent} on ({a}, {b}) is not monotone-decreasing from 0",
                )));
            }
        }
        SampledFunction::SeqExp { modes, r, a, b } => SampledFunction::SeqExp {
            modes: modes
                .iter()
                .map(|m| crate::func::Mode {
                    amplitude: m.amplitude.abs() * (-m.rate * a).exp(),
                    rate: m.rate,
                })
                .collect(),
            r: *r,
            a: 0.0,
            b: b - a,
        },
        SampledFunction::PiecewiseLog(p) => {
            if f.is_nonincreasing_abs() {
                SampledFunction::PiecewiseLog(p.clone())
            } else {
                return Err(Error::UnsupportedKind(
                    "piecewise-log input is not nonincreasing".into(),
                ));
            }
        }
    };
    Ok(Rearrangement { source: f.clone(), fstar })
}

/// Where the weak-norm supremum was found.
#[derive(Clone, Debug, Serialize)]
pub struct WeakNormWitness {
    pub t: f64,
    pub ratio: f64,
}

/// Weak Orlicz norm `sup_{t > 0} f*(t) / phi^-1(1/t)`. For step
/// rearrangements the weight `1/phi^-1(1/t)` increases in `t`, so each piece
/// attains its supremum at the right endpoint and the value is exact.
/// Unbounded growth on the refinement grid is reported as `+inf`.
pub fn weak_orlicz_norm(f: &SampledFunction, phi: &YoungFunction) -> Result<NormResult> {
    if f.is_zero() {
        return Ok(NormResult::zero());
    }
    let rearr = decreasing_rearrangement(f)?;
    let value = match &rearr.fstar {
        SampledFunction::Step(sf) => {
            let mut best = 0.0_f64;
            for (_, x1, v) in sf.pieces() {
                best = best.max(v.abs() / phi.inverse(1.0 / x1));
            }
            best
        }
        g => {
            let ratio = |t: f64| g.value_norm_at(t) / phi.inverse(1.0 / t);
            let (_, b) = g.domain();
            let hi = if b.is_finite() { b } else { 1e9 };
            let lo = (hi * 1e-15).max(1e-12);
            let (t_star, v) = numeric::log_scan_max(ratio, lo, hi, 96, 1e-10);
            // divergence towards the right end of an unbounded domain
            if !b.is_finite() && t_star > 0.5 * hi && ratio(hi) > ratio(0.5 * hi) * (1.0 + 1e-9) {
                return Ok(NormResult::infinite());
            }
            v
        }
    };
    Ok(NormResult {
        value,
        lo: value,
        hi: value,
        rel_tol: 0.0,
        diagnostics: Diagnostics::default(),
    })
}
