//! Shift semigroups on Orlicz spaces: exact right shifts of step functions,
//! the strong-continuity counterexample for a non-doubling Young function,
//! the lower-triangular block cocycle identity, and the tail-averaging
//! integral operator with its norm estimates.

use rand::Rng;
use serde::Serialize;

use crate::diagsys::DiagonalSystem;
use crate::error::{Error, Result};
use crate::func::{PiecewiseLogFn, SampledFunction, StepFunction};
use crate::norms::{self, NormResult};
use crate::young::{self, YoungFunction};

/// `(S(t) f)(r) = f(r - t)` for `r > a + t`, zero otherwise, with exact
/// breakpoint arithmetic on the interval `(a, b)`.
pub fn right_shift(f: &StepFunction, t: f64, interval: (f64, f64)) -> Result<StepFunction> {
    let (a, b) = interval;
    if !(t >= 0.0) {
        return Err(Error::Precondition("shift amount must be nonnegative".into()));
    }
    if !(b > a) {
        return Err(Error::Precondition("empty interval".into()));
    }
    let (fa, fb) = f.domain();
    if fa < a - 1e-12 || fb > b + 1e-12 {
        return Err(Error::Precondition(format!(
            "step support ({fa}, {fb}) escapes the interval ({a}, {b})"
        )));
    }
    let mut breaks = vec![a, b];
    for &x in f.breaks() {
        let shifted = x + t;
        if shifted > a && shifted < b {
            breaks.push(shifted);
        }
    }
    if t > 0.0 && a + t < b {
        breaks.push(a + t);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let values = breaks
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            if mid > a + t {
                f.eval(mid - t)
            } else {
                0.0
            }
        })
        .collect();
    StepFunction::new(breaks, values)
}

/// `|| S(t) f - f ||` in the Luxemburg norm.
pub fn shift_continuity_modulus(
    f: &StepFunction,
    phi: &YoungFunction,
    t: f64,
    interval: (f64, f64),
) -> Result<NormResult> {
    let shifted = right_shift(f, t, interval)?;
    let diff = shifted.combine(f, |x, y| x - y);
    Ok(norms::luxemburg_norm(&SampledFunction::Step(diff), phi))
}

/// The ingredients of the strong-continuity counterexample: levels `t_k`
/// with doubling defect `phi(2 t_k) >= k phi(t_k)`, disjoint intervals
/// `I_k` of length `1 / (phi(t_k) (n0 + k - 1)^2)` packed against 1, and the
/// step functions `u` (modular certified below one) and `v = 4u`.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleBuild {
    pub n0: usize,
    pub tks: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub u: StepFunction,
    pub v: StepFunction,
    /// partial modular of `u` over the built pieces (stays below one)
    pub modular_u_partial: f64,
    /// partial modular of `2u` (grows without bound in the piece count)
    pub modular_2u_partial: f64,
}

/// `sum_{n >= m} 1/n^2` via a direct sum plus an Euler-Maclaurin tail.
fn zeta2_tail(m: usize) -> f64 {
    let cut = m + 60;
    let mut s = 0.0;
    for n in m..cut {
        s += 1.0 / (n as f64 * n as f64);
    }
    let x = cut as f64;
    s + 1.0 / x + 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x * x * x) - 1.0 / (30.0 * x.powi(5))
}

/// Construct the counterexample data for a non-doubling `phi`, truncated to
/// `k_pieces` intervals. The gate is the grid verdict of the doubling sweep;
/// a function that looks doubling on the scanned range is rejected.
pub fn build_delta2_counterexample(
    phi: &YoungFunction,
    k_pieces: usize,
) -> Result<CounterexampleBuild> {
    let gate = young::check_delta2(
        phi,
        young::Delta2Mode::NearInfinity,
        &crate::numeric::log_grid(1e-2, 50.0, 60),
    );
    if gate.verdict != young::Delta2Verdict::RatioUnboundedOnGrid {
        return Err(Error::Precondition(format!(
            "doubling sweep reports a bounded ratio (K ~ {:.3e}); the construction needs an \
             unbounded one",
            gate.k_estimate
        )));
    }
    if k_pieces == 0 {
        return Err(Error::Precondition("need at least one piece".into()));
    }
    let n0 = 2usize; // sum_{n >= 2} 1/n^2 < 1
    let mut tks = Vec::with_capacity(k_pieces);
    let mut prev = 0.0_f64;
    for k in 1..=k_pieces {
        let mut t = (k as f64).max(prev);
        let mut steps = 0u64;
        loop {
            let ft = phi.forward(t);
            let f2t = phi.forward(2.0 * t);
            if ft > 1.0 && ft.is_finite() && f2t >= (k as f64) * ft {
                break;
            }
            t += 1e-3;
            steps += 1;
            if steps > 2_000_000 || !phi.forward(2.0 * t).is_finite() {
                return Err(Error::ConstructionStalled(format!(
                    "no level with phi(2t) >= {k} phi(t) found scanning up to t = {t:.3}"
                )));
            }
        }
        prev = t;
        tks.push(t);
    }

    let mut breaks = vec![0.0];
    let mut values = vec![];
    let mut intervals = Vec::with_capacity(k_pieces);
    let mut modular_u_partial = 0.0;
    let mut modular_2u_partial = 0.0;
    for (i, &tk) in tks.iter().enumerate() {
        let k = i + 1;
        let len = 1.0 / (phi.forward(tk) * ((n0 + k - 1) as f64).powi(2));
        let right = 1.0 - zeta2_tail(n0 + k);
        let left = right - len;
        let last = *breaks.last().unwrap();
        if left <= last {
            return Err(Error::ConstructionStalled(format!(
                "interval {k} degenerates at f64 resolution (length {len:.3e}); reduce the \
                 truncation"
            )));
        }
        intervals.push((left, right));
        // zero gap, then the piece
        breaks.push(left);
        values.push(0.0);
        breaks.push(right);
        values.push(tk);
        modular_u_partial += phi.forward(tk) * len;
        modular_2u_partial += phi.forward(2.0 * tk) * len;
    }
    let last = *breaks.last().unwrap();
    if last < 1.0 {
        breaks.push(1.0);
        values.push(0.0);
    }
    let u = StepFunction::new(breaks, values)?;
    if !(modular_u_partial < 1.0) {
        return Err(Error::ConstructionStalled(format!(
            "partial modular of u is {modular_u_partial}, expected < 1"
        )));
    }
    let v = u.scaled(4.0);
    Ok(CounterexampleBuild {
        n0,
        tks,
        intervals,
        u,
        v,
        modular_u_partial,
        modular_2u_partial,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscontinuityReport {
    pub t: f64,
    pub pieces_used: usize,
    /// modular of `|S(t) v - v|` restricted to the built intervals
    pub partial_modular: f64,
    /// first interval index at which the running modular exceeds one
    pub crossing_k: Option<usize>,
    /// a partial modular above one certifies `|| S(t) v - v || >= 1`
    pub discontinuous: bool,
}

/// Evaluate the shifted-difference modular of `v` restricted to the first
/// `k_pieces` intervals. Everything is exact step arithmetic; exceeding one
/// certifies a unit lower bound for the norm of the difference.
pub fn counterexample_discontinuity(
    build: &CounterexampleBuild,
    phi: &YoungFunction,
    t: f64,
    k_pieces: usize,
) -> Result<DiscontinuityReport> {
    let k_pieces = k_pieces.min(build.intervals.len());
    if t == 0.0 {
        return Ok(DiscontinuityReport {
            t,
            pieces_used: k_pieces,
            partial_modular: 0.0,
            crossing_k: None,
            discontinuous: false,
        });
    }
    let first_left = build.intervals[0].0;
    if !(t > 0.0 && t < first_left) {
        return Err(Error::UnsupportedKind(format!(
            "shift {t} moves the interval structure past its left margin {first_left:.4}"
        )));
    }
    let shifted = right_shift(&build.v, t, (0.0, 1.0))?;
    let diff = shifted.combine(&build.v, |a, b| a - b);
    let mut running = 0.0;
    let mut crossing = None;
    for (k, &(left, right)) in build.intervals.iter().take(k_pieces).enumerate() {
        if let Some(part) = diff.restrict(left, right) {
            running += part.sum_pieces(|val| phi.forward(val.abs()));
        }
        if crossing.is_none() && running > 1.0 {
            crossing = Some(k + 1);
        }
    }
    Ok(DiscontinuityReport {
        t,
        pieces_used: k_pieces,
        partial_modular: running,
        crossing_k: crossing,
        discontinuous: running > 1.0,
    })
}

/// The `(2,1)` block of the lower-triangular semigroup at time `t`, applied
/// to `x` and evaluated at `r`: coordinatewise `-c_n e^{lambda_n (t - r)}
/// x_n` for `r <= t`, zero beyond.
pub fn engel_r_value(sys: &DiagonalSystem, x: &[f64], t: f64, r: f64) -> Vec<f64> {
    let n = sys.len();
    let mut out = vec![0.0; n];
    if r > t {
        return out;
    }
    for i in 0..n {
        let xn = x.get(i).copied().unwrap_or(0.0);
        // association chosen so the cocycle identity is bit-exact at the
        // t = 0 and s = 0 boundaries
        out[i] = -(sys.weights()[i] * ((sys.lambdas()[i] * (t - r)).exp() * xn));
    }
    out
}

/// Evaluate the block output on a grid of `r` values.
pub fn engel_r_apply(
    sys: &DiagonalSystem,
    x: &[f64],
    t: f64,
    grid: &[f64],
) -> Vec<(f64, Vec<f64>)> {
    grid.iter().map(|&r| (r, engel_r_value(sys, x, t, r))).collect()
}

/// Maximum defect over the grid of the block cocycle identity
/// `R(t+s) = R(t) T(s) + S(t) R(s)`, measured coordinatewise in `l^r`.
pub fn engel_cocycle_defect(
    sys: &DiagonalSystem,
    x: &[f64],
    t: f64,
    s: f64,
    grid: &[f64],
) -> f64 {
    let tsx: Vec<f64> = sys
        .lambdas()
        .iter()
        .zip(x.iter().chain(std::iter::repeat(&0.0)))
        .map(|(&l, &xn)| (l * s).exp() * xn)
        .collect();
    let mut worst = 0.0_f64;
    for &r in grid {
        let lhs = engel_r_value(sys, x, t + s, r);
        let term1 = engel_r_value(sys, &tsx, t, r);
        // right shift acts on the r-variable: strict cutoff below t
        let term2 = if r > t {
            engel_r_value(sys, x, s, r - t)
        } else {
            vec![0.0; sys.len()]
        };
        let defect: f64 = lhs
            .iter()
            .zip(term1.iter().zip(term2.iter()))
            .map(|(&a, (&b, &c))| (a - b - c).abs().powf(sys.r()))
            .sum::<f64>()
            .powf(1.0 / sys.r());
        worst = worst.max(defect);
    }
    worst
}

/// `(L f)(t) = int_t^tau f(s)/s ds` for a step `f`, kept in exact
/// piecewise-logarithmic closed form (each piece contributes
/// `value * (ln b - ln a)`).
pub fn integral_operator_l(f: &StepFunction, tau: f64) -> Result<PiecewiseLogFn> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Precondition("tau must be positive and finite".into()));
    }
    let mut cuts = vec![0.0, tau];
    for &x in f.breaks() {
        if x > 0.0 && x < tau {
            cuts.push(x);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let n = cuts.len() - 1;
    let mut consts = vec![0.0; n];
    let mut logcoefs = vec![0.0; n];
    // accumulate from the right: tail = integral over (cuts[i+1], tau)
    let mut tail = 0.0;
    for i in (0..n).rev() {
        let (a, b) = (cuts[i], cuts[i + 1]);
        let v = f.eval(0.5 * (a + b));
        logcoefs[i] = v;
        consts[i] = v * b.ln() + tail;
        tail += if a > 0.0 { v * (b.ln() - a.ln()) } else { f64::INFINITY * v.signum() };
        if v == 0.0 && a == 0.0 {
            // zero piece down to the origin keeps the tail finite
            tail = consts[i];
        }
    }
    PiecewiseLogFn::new(cuts, consts, logcoefs)
}

/// One ratio `||L f|| / ||f||` in the Luxemburg norm on `(0, tau)`.
pub fn l_norm_ratio(phi: &YoungFunction, f: &StepFunction, tau: f64) -> Result<f64> {
    let lf = integral_operator_l(f, tau)?;
    let num = norms::luxemburg_norm(&SampledFunction::PiecewiseLog(lf), phi).value;
    let den = norms::luxemburg_norm(&SampledFunction::Step(f.clone()), phi).value;
    Ok(num / den)
}

#[derive(Clone, Debug, Serialize)]
pub struct LNormEstimate {
    pub max_ratio: f64,
    pub ratios: Vec<f64>,
}

/// Random nonnegative step function on `(0, tau)` with a handful of pieces.
pub fn random_step(rng: &mut impl Rng, tau: f64) -> StepFunction {
    let pieces = rng.gen_range(2..8usize);
    let mut breaks: Vec<f64> = (0..=pieces)
        .map(|_| rng.gen_range(0.0..tau))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * tau);
    if breaks.len() < 2 {
        breaks = vec![0.25 * tau, 0.75 * tau];
    }
    let values = (0..breaks.len() - 1)
        .map(|_| rng.gen_range(0.0..1.0))
        .collect();
    StepFunction::new(breaks, values).expect("sorted distinct breakpoints")
}

/// Lower estimate of the operator norm of `L` on the Orlicz space over
/// `(0, tau)` from random step trials.
pub fn estimate_l_norm(
    phi: &YoungFunction,
    tau: f64,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<LNormEstimate> {
    let mut ratios = Vec::with_capacity(trials);
    for _ in 0..trials.max(1) {
        let f = random_step(rng, tau);
        if f.is_zero() {
            continue;
        }
        ratios.push(l_norm_ratio(phi, &f, tau)?);
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(LNormEstimate { max_ratio, ratios })
}

/// Deterministic near-extremal inputs for the operator-norm estimate:
/// log-spaced staircases tracking `s^-a` plus indicators. Anything
/// supported on `(0, delta)` reproduces the `delta`-horizon problem inside
/// a longer one, so the candidates live at fixed absolute scales shared by
/// every horizon; sup estimates across horizons then stay comparable.
pub fn extremal_candidates(tau: f64) -> Vec<StepFunction> {
    let mut out = vec![StepFunction::constant(1.0, 0.0, tau)];
    let mut scales: Vec<f64> = [1e-5, 1e-3, 0.1, 1.0, tau]
        .iter()
        .copied()
        .filter(|&s| s <= tau)
        .collect();
    scales.dedup_by(|a, b| (*a / *b - 1.0).abs() < 1e-12);
    for &scale in &scales {
        for a in [0.2, 0.35, 0.45, 0.6] {
            let breaks: Vec<f64> = crate::numeric::log_grid(scale * 1e-6, scale, 49);
            let values: Vec<f64> = breaks
                .windows(2)
                .map(|w| (0.5 * (w[0] + w[1]) / scale).powf(-a))
                .collect();
            if let Ok(f) = StepFunction::new(breaks, values) {
                out.push(f);
            }
        }
        out.push(StepFunction::constant(1.0, 0.0, scale));
    }
    out
}

/// Max `||L f|| / ||f||` over the deterministic candidates plus `trials`
/// random steps.
pub fn estimate_l_norm_rich(
    phi: &YoungFunction,
    tau: f64,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<LNormEstimate> {
    let mut ratios = Vec::new();
    for f in extremal_candidates(tau) {
        ratios.push(l_norm_ratio(phi, &f, tau)?);
    }
    for _ in 0..trials {
        let f = random_step(rng, tau);
        if f.is_zero() {
            continue;
        }
        ratios.push(l_norm_ratio(phi, &f, tau)?);
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(LNormEstimate { max_ratio, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagsys::{SpectrumRule, WeightSpec};
    use crate::young::{make_expm1t, make_power};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shift_by_zero_is_identity() {
        let f = StepFunction::new(vec![0.0, 1.0, 2.0], vec![1.0, 3.0]).unwrap();
        let s = right_shift(&f, 0.0, (0.0, 2.0)).unwrap();
        for &t in &[0.5, 1.5] {
            assert_eq!(s.eval(t), f.eval(t));
        }
    }

    #[test]
    fn shift_indicator() {
        let f = StepFunction::constant(1.0, 0.0, 1.0);
        let s = right_shift(&f, 1.0, (0.0, 2.0)).unwrap();
        assert_eq!(s.eval(0.5), 0.0);
        assert_eq!(s.eval(1.5), 1.0);
    }

    #[test]
    fn shift_semigroup_law_on_breakpoints() {
        let f = StepFunction::new(vec![0.0, 0.5, 1.25, 2.0], vec![2.0, -1.0, 0.5]).unwrap();
        let iv = (0.0, 5.0);
        let a = right_shift(&right_shift(&f, 0.75, iv).unwrap(), 0.5, iv).unwrap();
        let b = right_shift(&f, 1.25, iv).unwrap();
        for &t in &[0.1, 0.6, 1.3, 1.8, 2.6, 3.3, 4.9] {
            assert_eq!(a.eval(t), b.eval(t), "at {t}");
        }
    }

    #[test]
    fn continuity_modulus_square_indicator() {
        // || S(t) 1_(0,1) - 1_(0,1) ||_2 = sqrt(2 t) for t < 1
        let phi = make_power(2.0).unwrap();
        let f = StepFunction::constant(1.0, 0.0, 1.0);
        for &t in &[0.04, 0.25] {
            let m = shift_continuity_modulus(&f, &phi, t, (0.0, 2.0)).unwrap();
            assert!((m.value - (2.0 * t).sqrt()).abs() < 1e-8, "t={t}: {}", m.value);
        }
        let m = shift_continuity_modulus(&f, &phi, 0.0, (0.0, 2.0)).unwrap();
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn isometry_for_interior_support() {
        let phi = make_power(2.0).unwrap();
        let f = StepFunction::new(vec![2.0, 2.5, 3.0], vec![1.0, 4.0]).unwrap();
        let t = 0.5;
        let shifted = right_shift(&f, t, (0.0, 10.0)).unwrap();
        // translation invariance is exact at the modular level
        for &k in &[0.5, 1.0, 3.0] {
            let m0 = norms::modular(&SampledFunction::Step(f.clone()), &phi, k);
            let m1 = norms::modular(&SampledFunction::Step(shifted.clone()), &phi, k);
            assert_eq!(m0, m1, "k={k}");
        }
        let n0 = norms::luxemburg_norm(&SampledFunction::Step(f), &phi).value;
        let n1 = norms::luxemburg_norm(&SampledFunction::Step(shifted), &phi).value;
        assert!((n0 - n1).abs() <= 1e-9 * n0);
    }

    #[test]
    fn counterexample_build_shape() {
        let phi = make_expm1t();
        let b = build_delta2_counterexample(&phi, 20).unwrap();
        // first level: first t >= 1 with phi(t) > 1 at millistep resolution
        assert!((b.tks[0] - 1.147).abs() < 5e-3, "t1 = {}", b.tks[0]);
        assert!(phi.forward(b.tks[0]) > 1.0);
        assert!(phi.forward(2.0 * b.tks[0]) >= phi.forward(b.tks[0]));
        // intervals are disjoint inside (0,1), packed towards 1
        for w in b.intervals.windows(2) {
            assert!(w[0].1 < w[1].0);
        }
        assert!(b.intervals[0].0 > 0.0 && b.intervals.last().unwrap().1 < 1.0);
        // the doubling-defect condition per level
        for (i, &tk) in b.tks.iter().enumerate() {
            assert!(phi.forward(2.0 * tk) >= (i + 1) as f64 * phi.forward(tk));
        }
        // the modular identity: sum 1/(n0+k-1)^2 < 1
        assert!(b.modular_u_partial < 1.0);
        let oracle: f64 = (0..20).map(|k| 1.0 / ((2 + k) as f64).powi(2)).sum();
        assert!((b.modular_u_partial - oracle).abs() < 1e-9);
        // and the unbounded one: sum k/(n0+k-1)^2 diverges; check partial
        let oracle2: f64 = (0..20).map(|k| (k + 1) as f64 / ((2 + k) as f64).powi(2)).sum();
        assert!(b.modular_2u_partial >= oracle2 - 1e-9);
    }

    #[test]
    fn counterexample_rejects_doubling_phi() {
        let phi = make_power(2.0).unwrap();
        assert!(build_delta2_counterexample(&phi, 5).is_err());
    }

    #[test]
    fn discontinuity_certified_for_small_shifts() {
        let phi = make_expm1t();
        let b = build_delta2_counterexample(&phi, 20).unwrap();
        for &t in &[1e-3, 1e-6, 1e-9] {
            let rep = counterexample_discontinuity(&b, &phi, t, 20).unwrap();
            assert!(rep.discontinuous, "t={t}: modular {}", rep.partial_modular);
            assert!(rep.crossing_k.is_some());
        }
    }

    #[test]
    fn discontinuity_zero_shift_trivial() {
        let phi = make_expm1t();
        let b = build_delta2_counterexample(&phi, 8).unwrap();
        let rep = counterexample_discontinuity(&b, &phi, 0.0, 8).unwrap();
        assert_eq!(rep.partial_modular, 0.0);
        assert!(!rep.discontinuous);
    }

    fn canonical(n: usize) -> DiagonalSystem {
        let phi = make_power(2.0).unwrap();
        DiagonalSystem::new(SpectrumRule::NegPower { gamma: 1.0 }, n, 2.0, WeightSpec::Default, &phi)
            .unwrap()
    }

    #[test]
    fn engel_r_vanishes_beyond_t() {
        let sys = canonical(3);
        let v = engel_r_value(&sys, &[1.0, 0.5, -0.25], 1.0, 1.5);
        assert!(v.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn engel_r_at_r_equals_t_is_minus_cx() {
        let sys = canonical(3);
        let x = [1.0, 0.5, -0.25];
        let v = engel_r_value(&sys, &x, 1.0, 1.0);
        for i in 0..3 {
            assert!((v[i] + sys.weights()[i] * x[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn engel_single_mode_closed_form() {
        let phi = make_power(2.0).unwrap();
        let sys = DiagonalSystem::from_lambdas(
            vec![-1.0],
            2.0,
            WeightSpec::Explicit(vec![1.0]),
            &phi,
        )
        .unwrap();
        let v = engel_r_value(&sys, &[1.0], 1.0, 0.5);
        assert!((v[0] + (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn cocycle_defect_zero_at_boundaries() {
        let sys = canonical(6);
        let x = [0.4, -0.3, 1.0, 0.0, 0.2, 0.0];
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.05).collect();
        assert_eq!(engel_cocycle_defect(&sys, &x, 0.7, 0.0, &grid), 0.0);
        assert_eq!(engel_cocycle_defect(&sys, &x, 0.0, 0.7, &grid), 0.0);
    }

    #[test]
    fn cocycle_defect_random_pairs() {
        let sys = canonical(10);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let grid: Vec<f64> = (0..80).map(|i| i as f64 * 0.025).collect();
        for _ in 0..50 {
            let x: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let t = rng.gen_range(0.0..1.0);
            let s = rng.gen_range(0.0..1.0);
            let d = engel_cocycle_defect(&sys, &x, t, s, &grid);
            assert!(d <= 1e-10, "defect {d}");
        }
    }

    #[test]
    fn operator_l_constant_function() {
        // f = 1 on (0, tau): (Lf)(t) = ln(tau/t)
        let tau = 2.0;
        let f = StepFunction::constant(1.0, 0.0, tau);
        let lf = integral_operator_l(&f, tau).unwrap();
        for &t in &[0.1, 0.5, 1.0, 1.9] {
            assert!((lf.eval(t) - (tau / t).ln()).abs() < 1e-14, "t={t}");
        }
    }

    #[test]
    fn operator_l_half_support() {
        // f = 1_(tau/2, tau): ln 2 below tau/2, then ln(tau/t)
        let tau = 4.0;
        let f = StepFunction::constant(1.0, tau / 2.0, tau);
        let lf = integral_operator_l(&f, tau).unwrap();
        assert!((lf.eval(1.0) - 2f64.ln()).abs() < 1e-14);
        assert!((lf.eval(3.0) - (tau / 3.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn operator_l_zero() {
        let f = StepFunction::constant(0.0, 0.0, 1.0);
        let lf = integral_operator_l(&f, 1.0).unwrap();
        assert_eq!(lf.eval(0.3), 0.0);
    }

    #[test]
    fn operator_l_positive_on_nonnegative_input() {
        let f = StepFunction::new(vec![0.1, 0.5, 0.8, 1.0], vec![1.0, 0.0, 2.5]).unwrap();
        let lf = integral_operator_l(&f, 1.0).unwrap();
        for &t in &[0.05, 0.2, 0.6, 0.9, 0.99] {
            assert!(lf.eval(t) >= 0.0, "t={t}: {}", lf.eval(t));
        }
    }

    #[test]
    fn l_ratio_constant_is_sqrt_two() {
        // ||ln(tau/.)||_2 = sqrt(2 tau), ||1||_2 = sqrt(tau)
        let phi = make_power(2.0).unwrap();
        let f = StepFunction::constant(1.0, 0.0, 1.0);
        let ratio = l_norm_ratio(&phi, &f, 1.0).unwrap();
        assert!((ratio - 2f64.sqrt()).abs() < 1e-9, "{ratio}");
    }

    #[test]
    fn l_ratios_bounded_by_p() {
        let phi = make_power(2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let est = estimate_l_norm(&phi, 1.0, 40, &mut rng).unwrap();
        assert!(est.max_ratio <= 2.0 + 1e-6, "{}", est.max_ratio);
    }
}
