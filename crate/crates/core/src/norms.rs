//! Modulars, Luxemburg norms, Orlicz-norm brackets, exponential-function
//! norms, and the Hoelder / Minkowski inequality checks.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{SampledFunction, StepFunction, StepFunction2};
use crate::numeric;
use crate::young::{self, YoungFunction};

/// Default relative tolerance of norm bisections.
pub const NORM_REL_TOL: f64 = 1e-9;
/// Relative tolerance of quadrature refinement inside modulars.
pub const QUAD_REL_TOL: f64 = 1e-12;
/// Absolute threshold below which a certified truncation tail is ignored.
const TAIL_EPS: f64 = 1e-14;

/// A computed norm with its certified bracketing interval.
#[derive(Clone, Debug, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub rel_tol: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub panels: usize,
    pub truncation: Option<f64>,
    pub bisect_iters: usize,
}

impl NormResult {
    pub fn zero() -> Self {
        NormResult {
            value: 0.0,
            lo: 0.0,
            hi: 0.0,
            rel_tol: 0.0,
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn infinite() -> Self {
        NormResult {
            value: f64::INFINITY,
            lo: f64::INFINITY,
            hi: f64::INFINITY,
            rel_tol: 0.0,
            diagnostics: Diagnostics::default(),
        }
    }
}

/// The modular `int phi(|f(t)| / k) dt` over the domain of `f`. Divergence is
/// reported as `+inf`, which is a legal value for the norm bisection.
///
/// Step kinds are summed exactly with exact `phi` evaluations; quadrature
/// kinds evaluate `phi` through its interpolation fast path where one exists
/// (closed-form families have none and stay exact).
pub fn modular(f: &SampledFunction, phi: &YoungFunction, k: f64) -> f64 {
    modular_with_diag(f, phi, k).0
}

fn modular_with_diag(f: &SampledFunction, phi: &YoungFunction, k: f64) -> (f64, Diagnostics) {
    assert!(k > 0.0, "modular needs k > 0");
    // quadrature refinement below the fast path's fidelity only chases
    // interpolation noise
    let quad_tol = if phi.uses_interpolation() { 1e-9 } else { QUAD_REL_TOL };
    let mut diag = Diagnostics::default();
    let value = match f {
        SampledFunction::Step(sf) => sf.sum_pieces(|v| phi.forward(v.abs() / k)),
        SampledFunction::Exp { amplitude, sigma, a, b } => {
            if *amplitude == 0.0 {
                0.0
            } else if b.is_finite() {
                let (v, panels) = numeric::integrate_adaptive(
                    &|t| phi.forward_fast(f.value_norm_at(t) / k),
                    *a,
                    *b,
                    quad_tol,
                );
                diag.panels = panels;
                v
            } else {
                integrate_with_exponential_tail(
                    f,
                    phi,
                    k,
                    *a,
                    *sigma,
                    f64::INFINITY,
                    quad_tol,
                    &mut diag,
                )
            }
        }
        SampledFunction::SeqExp { modes, a, b, .. } => {
            let active: Vec<_> = modes.iter().filter(|m| m.amplitude != 0.0).collect();
            if active.is_empty() {
                0.0
            } else {
                let sigma_max = active.iter().map(|m| m.rate).fold(0.0, f64::max);
                let finest = if sigma_max > 0.0 { 0.5 / sigma_max } else { f64::INFINITY };
                if b.is_finite() {
                    let (v, panels) = numeric::integrate_multiscale(
                        &|t| phi.forward_fast(f.value_norm_at(t) / k),
                        *a,
                        *b,
                        finest,
                        quad_tol,
                    );
                    diag.panels = panels;
                    v
                } else {
                    let sigma_min =
                        active.iter().map(|m| m.rate).fold(f64::INFINITY, f64::min);
                    if sigma_min <= 0.0 {
                        // a non-decaying coordinate makes the modular diverge
                        // on an infinite horizon
                        f64::INFINITY
                    } else {
                        integrate_with_exponential_tail(
                            f, phi, k, *a, sigma_min, finest, quad_tol, &mut diag,
                        )
                    }
                }
            }
        }
        SampledFunction::Power { amplitude, exponent, a, b } => {
            if *amplitude == 0.0 {
                0.0
            } else {
                modular_power_kind(f, phi, k, *a, *b, *exponent, quad_tol, &mut diag)
            }
        }
        SampledFunction::PiecewiseLog(plog) => {
            let mut total = 0.0;
            for (x0, x1, _c, coef) in plog.pieces() {
                let g = |t: f64| phi.forward_fast(f.value_norm_at(t) / k);
                if x0 == 0.0 && coef != 0.0 {
                    // logarithmically unbounded at the origin: refine
                    // geometrically and detect divergence
                    total += numeric::integrate_to_zero(&g, x1, quad_tol, 1e12);
                } else {
                    let (v, panels) = numeric::integrate_adaptive(&g, x0, x1, quad_tol);
                    diag.panels += panels;
                    total += v;
                }
                if !total.is_finite() {
                    return (f64::INFINITY, diag);
                }
            }
            total
        }
    };
    (value, diag)
}

/// Certified truncation for exponentially decaying `|f|` on `(a, inf)`:
/// beyond `T` we have `|f(t)| <= |f(T)| e^{-sigma (t-T)}`, and with
/// `phi(u) <= (u/u0) phi(u0)` for `u <= u0` the tail modular is bounded by
/// `phi(|f(T)|/k) / sigma`.
#[allow(clippy::too_many_arguments)]
fn integrate_with_exponential_tail(
    f: &SampledFunction,
    phi: &YoungFunction,
    k: f64,
    a: f64,
    sigma: f64,
    finest: f64,
    quad_tol: f64,
    diag: &mut Diagnostics,
) -> f64 {
    let base = a.max(0.0);
    let mut span = 1.0 / sigma;
    let mut tail = phi.forward_fast(f.value_norm_at(base + span) / k) / sigma;
    let mut doublings = 0;
    while tail >= TAIL_EPS && doublings < 80 {
        span *= 2.0;
        tail = phi.forward_fast(f.value_norm_at(base + span) / k) / sigma;
        doublings += 1;
    }
    let t_cut = base + span;
    let (v, panels) = numeric::integrate_multiscale(
        &|t| phi.forward_fast(f.value_norm_at(t) / k),
        a,
        t_cut,
        finest,
        quad_tol,
    );
    diag.panels = panels;
    diag.truncation = Some(t_cut);
    v + tail
}

/// Power-kind modulars: finite domains directly, singular endpoints by
/// geometric refinement, infinite domains by a window probe that either
/// converges or reports divergence.
fn modular_power_kind(
    f: &SampledFunction,
    phi: &YoungFunction,
    k: f64,
    a: f64,
    b: f64,
    exponent: f64,
    quad_tol: f64,
    diag: &mut Diagnostics,
) -> f64 {
    let g = |t: f64| phi.forward_fast(f.value_norm_at(t) / k);
    let mut total = 0.0;
    let inner_hi = if b.is_finite() { b } else { a.max(1.0) * 2.0 };
    if a == 0.0 && exponent < 0.0 {
        total += numeric::integrate_to_zero(&g, inner_hi, quad_tol, 1e12);
    } else {
        let (v, panels) = numeric::integrate_adaptive(&g, a, inner_hi, quad_tol);
        diag.panels += panels;
        total += v;
    }
    if !total.is_finite() {
        return f64::INFINITY;
    }
    if b.is_finite() {
        return total;
    }
    // window probe towards infinity
    let mut lo = inner_hi;
    let mut last = f64::INFINITY;
    let mut growing = 0u32;
    for _ in 0..200 {
        let hi = lo * 2.0;
        let (piece, _) = numeric::integrate_adaptive(&g, lo, hi, quad_tol);
        total += piece;
        if piece >= last {
            growing += 1;
        } else {
            growing = 0;
        }
        if growing >= 4 || total > 1e12 {
            return f64::INFINITY;
        }
        if piece <= 1e-16 * total.max(1e-300) {
            diag.truncation = Some(hi);
            return total;
        }
        last = piece;
        lo = hi;
    }
    f64::INFINITY
}

/// Luxemburg norm: the infimum of `k > 0` with modular at most one, found by
/// bisection on the nonincreasing map `k -> modular(f, phi, k)`.
pub fn luxemburg_norm(f: &SampledFunction, phi: &YoungFunction) -> NormResult {
    luxemburg_norm_with(f, phi, NORM_REL_TOL)
}

pub fn luxemburg_norm_with(f: &SampledFunction, phi: &YoungFunction, rel_tol: f64) -> NormResult {
    if f.is_zero() {
        return NormResult::zero();
    }
    // Coordinates that never decay force an infinite norm on an infinite
    // horizon; detect analytically instead of bisecting forever.
    if let SampledFunction::SeqExp { modes, b, .. } = f {
        if *b == f64::INFINITY && modes.iter().any(|m| m.amplitude != 0.0 && m.rate <= 0.0) {
            return NormResult::infinite();
        }
    }
    let (a, b) = f.domain();
    let measure = b - a;
    let sup = f.ess_sup();
    let k0 = if measure.is_finite() && sup.is_finite() && sup > 0.0 {
        sup / phi.inverse(1.0 / measure)
    } else {
        1.0
    };
    let k0 = if k0.is_finite() && k0 > 0.0 { k0 } else { 1.0 };

    let mut diag = Diagnostics::default();
    let mut eval = |k: f64| {
        let (v, d) = modular_with_diag(f, phi, k);
        diag.panels = d.panels;
        diag.truncation = d.truncation;
        v
    };

    let (mut lo, mut hi);
    let (mut g_lo, mut g_hi);
    let g0 = eval(k0) - 1.0;
    if g0 <= 0.0 {
        hi = k0;
        g_hi = g0;
        lo = k0;
        loop {
            lo *= 0.5;
            if lo < 1e-280 {
                // modular stays <= 1 for arbitrarily small k: the function is
                // null up to quadrature resolution
                return NormResult::zero();
            }
            g_lo = eval(lo) - 1.0;
            if g_lo > 0.0 {
                break;
            }
            hi = lo;
            g_hi = g_lo;
        }
    } else {
        lo = k0;
        g_lo = g0;
        hi = k0;
        loop {
            hi *= 2.0;
            if hi > 1e280 {
                return NormResult::infinite();
            }
            g_hi = eval(hi) - 1.0;
            if g_hi <= 0.0 {
                break;
            }
            lo = hi;
            g_lo = g_hi;
        }
    }
    // Illinois false position on modular(k) - 1, keeping the sign-bracket
    // invariant modular(lo) > 1 >= modular(hi). A bisection step is forced
    // whenever the bracket stalls (steep modulars park the secant at an
    // endpoint).
    let mut iters = 0usize;
    let mut side = 0i8;
    let mut force_bisect = false;
    let mut stalled = 0u8;
    while hi - lo > rel_tol * hi && iters < 200 {
        let width_before = hi - lo;
        let mid = if !force_bisect && g_lo.is_finite() && g_lo > g_hi {
            let m = hi - g_hi * (hi - lo) / (g_hi - g_lo);
            if m > lo && m < hi {
                m
            } else {
                0.5 * (lo + hi)
            }
        } else {
            0.5 * (lo + hi)
        };
        let g_mid = eval(mid) - 1.0;
        if g_mid <= 0.0 {
            hi = mid;
            g_hi = g_mid;
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = mid;
            g_lo = g_mid;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        }
        if hi - lo > 0.75 * width_before {
            stalled += 1;
        } else {
            stalled = 0;
        }
        force_bisect = stalled >= 2;
        iters += 1;
    }
    diag.bisect_iters = iters;
    NormResult {
        value: 0.5 * (lo + hi),
        lo,
        hi,
        rel_tol,
        diagnostics: diag,
    }
}

/// Certified bracket for the Orlicz (dual) norm: the upper end is twice the
/// Luxemburg norm; the lower end is the best pairing against step witnesses
/// renormalized to unit Luxemburg norm for the complementary function.
#[derive(Clone, Debug, Serialize)]
pub struct OrliczBounds {
    pub lo: f64,
    pub hi: f64,
    pub luxemburg: f64,
    /// `1 - lo / luxemburg`; nonpositive when the witness search has
    /// certified the classical lower bound.
    pub slack: f64,
}

pub fn orlicz_norm_bounds(
    f: &SampledFunction,
    phi: &YoungFunction,
    witnesses: usize,
    rng: &mut impl Rng,
) -> OrliczBounds {
    if f.is_zero() {
        return OrliczBounds { lo: 0.0, hi: 0.0, luxemburg: 0.0, slack: 0.0 };
    }
    let tilde = phi.conjugate();
    let lux = luxemburg_norm(f, phi);
    let hi = 2.0 * lux.hi;
    let (a, b) = f.domain();
    let b_eff = if b.is_finite() {
        b
    } else {
        lux.diagnostics.truncation.unwrap_or(a + 40.0)
    };

    // Breakpoints of f (or a uniform grid for closed forms) plus random
    // refinements.
    let mut grid: Vec<f64> = match f {
        SampledFunction::Step(sf) => sf.breaks().to_vec(),
        _ => numeric::lin_grid(a, b_eff, 17),
    };
    for _ in 0..8 {
        grid.push(rng.gen_range(a..b_eff));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let cell_value = |t0: f64, t1: f64| -> f64 {
        // mean of |f| over the cell, exact for step kinds
        match f {
            SampledFunction::Step(_) => f.value_norm_at(0.5 * (t0 + t1)),
            _ => {
                let (v, _) = numeric::integrate_adaptive(&|t| f.value_norm_at(t), t0, t1, 1e-10);
                v / (t1 - t0)
            }
        }
    };

    let pair_against = |g: &StepFunction| -> f64 {
        let g_norm = luxemburg_norm(&SampledFunction::Step(g.clone()), &tilde);
        if !(g_norm.hi > 0.0) {
            return 0.0;
        }
        let mut integral = 0.0;
        for (t0, t1, gv) in g.pieces() {
            if gv == 0.0 {
                continue;
            }
            let mass = match f {
                SampledFunction::Step(_) => cell_value(t0, t1) * (t1 - t0),
                _ => numeric::integrate_adaptive(&|t| f.value_norm_at(t), t0, t1, 1e-10).0,
            };
            integral += mass * gv.abs();
        }
        // dividing by the certified upper end keeps g/||g|| inside the unit ball
        integral / g_norm.hi
    };

    let mut lo: f64 = 0.0;

    // Witness 1: indicator of the cell where |f| is largest.
    let mut best_cell = (a, b_eff, 0.0);
    for w in grid.windows(2) {
        let v = cell_value(w[0], w[1]);
        if v > best_cell.2 {
            best_cell = (w[0], w[1], v);
        }
    }
    if best_cell.2 > 0.0 {
        let g = StepFunction::constant(1.0, best_cell.0, best_cell.1);
        lo = lo.max(pair_against(&g));
    }

    // Witness 2: the Young-equality shape phi'(|f|/L) on the grid.
    let scale = lux.hi.max(1e-300);
    let dphi = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            let h = 1e-6 * x.max(1e-3);
            (phi.forward(x + h) - phi.forward((x - h).max(0.0))) / (2.0 * h)
        }
    };
    let mut vals = Vec::with_capacity(grid.len() - 1);
    for w in grid.windows(2) {
        vals.push(dphi(cell_value(w[0], w[1]) / scale));
    }
    if let Ok(g) = StepFunction::new(grid.clone(), vals) {
        if !g.is_zero() {
            lo = lo.max(pair_against(&g));
        }
    }

    // Random step witnesses.
    for _ in 0..witnesses.max(1) {
        let vals: Vec<f64> = (0..grid.len() - 1).map(|_| rng.gen_range(0.0..1.0)).collect();
        if let Ok(g) = StepFunction::new(grid.clone(), vals) {
            if !g.is_zero() {
                lo = lo.max(pair_against(&g));
            }
        }
    }

    OrliczBounds {
        lo,
        hi,
        luxemburg: lux.value,
        slack: 1.0 - lo / lux.value.max(1e-300),
    }
}

/// Luxemburg norm of `t -> e^{-st}` on `(0, inf)` in `L_phi`, computed via
/// the substitution `u = e^{-st}`, which turns the modular into
/// `(1/s) int_0^1 phi(u/k) / u du = H(1/k) / s` with
/// `H(w) = int_0^w phi(v)/v dv`. The integrand vanishes at the origin
/// because `phi(v)/v` does.
///
/// For functions carrying a conjugate sample cache, `H` is evaluated in
/// closed form on the log-log interpolant (every cell is a power law), so
/// the norm inverts analytically; otherwise the modular is integrated
/// exactly and the norm found by bisection.
pub fn exp_norm(s: f64, phi: &YoungFunction) -> NormResult {
    assert!(s > 0.0, "exp_norm needs s > 0");
    // pure powers close the modular equation: c / (s k^p p) = 1
    if let Some((c, p)) = phi.power_form() {
        let value = (c / (s * p)).powf(1.0 / p);
        return NormResult {
            value,
            lo: value,
            hi: value,
            rel_tol: 0.0,
            diagnostics: Diagnostics::default(),
        };
    }
    if let Some(cells) = phi.conjugate_cells() {
        return exp_norm_from_cells(s, cells);
    }
    let modular_of = |k: f64| -> f64 {
        numeric::integrate_to_zero(&|u: f64| phi.forward(u / k) / u, 1.0, QUAD_REL_TOL, 1e12) / s
    };
    // Convexity gives modular(1/phi^-1(s)) <= 1: a certified upper start.
    let k0 = 1.0 / phi.inverse(s);
    let mut hi = k0;
    let mut guard = 0;
    while modular_of(hi) > 1.0 {
        hi *= 2.0;
        guard += 1;
        assert!(guard < 10, "upper bound of the exponential norm failed to bracket");
    }
    let mut lo = hi;
    loop {
        lo *= 0.5;
        if modular_of(lo) > 1.0 {
            break;
        }
        hi = lo;
        if lo < 1e-280 {
            return NormResult::zero();
        }
    }
    let mut iters = 0;
    while hi - lo > NORM_REL_TOL * hi && iters < 200 {
        let mid = 0.5 * (lo + hi);
        if modular_of(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iters += 1;
    }
    NormResult {
        value: 0.5 * (lo + hi),
        lo,
        hi,
        rel_tol: NORM_REL_TOL,
        diagnostics: Diagnostics { panels: 0, truncation: None, bisect_iters: iters },
    }
}

/// Analytic inversion of `H(w) = int_0^w phi(v)/v dv = s` on the log-log
/// interpolant: each cell is a power law `c v^b`, contributing
/// `(v_{i+1} - v_i) / b_i` to the prefix integrals, and the remainder
/// inverts in closed form. The norm is `1 / w`.
fn exp_norm_from_cells(s: f64, cells: &[(f64, f64)]) -> NormResult {
    let n = cells.len();
    let mut exponents = Vec::with_capacity(n - 1);
    for w in cells.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        exponents.push(((y1 / y0).ln() / (x1 / x0).ln()).max(1e-12));
    }
    // prefix[i] = H(cells[i].0), with the leading power law extended to 0
    let mut prefix = Vec::with_capacity(n);
    prefix.push(cells[0].1 / exponents[0]);
    for i in 0..n - 1 {
        let add = (cells[i + 1].1 - cells[i].1) / exponents[i];
        prefix.push(prefix[i] + add);
    }
    let w_star = if s <= prefix[0] {
        cells[0].0 * (s * exponents[0] / cells[0].1).powf(1.0 / exponents[0])
    } else if s >= prefix[n - 1] {
        let b = exponents[n - 2];
        let rem = s - prefix[n - 1];
        cells[n - 1].0 * (1.0 + rem * b / cells[n - 1].1).powf(1.0 / b)
    } else {
        let idx = prefix.partition_point(|&p| p <= s).clamp(1, n - 1) - 1;
        let b = exponents[idx];
        let rem = s - prefix[idx];
        cells[idx].0 * (1.0 + rem * b / cells[idx].1).powf(1.0 / b)
    };
    NormResult {
        value: 1.0 / w_star,
        lo: 1.0 / w_star,
        hi: 1.0 / w_star,
        rel_tol: 0.0,
        diagnostics: Diagnostics::default(),
    }
}

/// Hoelder check: `int |f| |g| <= 2 ||f||_phi ||g||_conj`. The returned ratio
/// must not exceed `1 + 1e-8`.
#[derive(Clone, Debug, Serialize)]
pub struct HoelderReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

pub fn check_hoelder(
    f: &SampledFunction,
    g: &SampledFunction,
    phi: &YoungFunction,
) -> HoelderReport {
    let tilde = phi.conjugate();
    let lhs = integral_of_product(f, g);
    let rhs = 2.0 * luxemburg_norm(f, phi).value * luxemburg_norm(g, &tilde).value;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    HoelderReport { lhs, rhs, ratio }
}

fn integral_of_product(f: &SampledFunction, g: &SampledFunction) -> f64 {
    if let (SampledFunction::Step(sf), SampledFunction::Step(sg)) = (f, g) {
        return sf
            .combine(sg, |a, b| a.abs() * b.abs())
            .pieces()
            .map(|(a, b, v)| v * (b - a))
            .sum();
    }
    let (fa, fb) = f.domain();
    let (ga, gb) = g.domain();
    let a = fa.max(ga);
    let mut b = fb.min(gb);
    if !b.is_finite() {
        // push the cutoff out until the product is negligible
        let mut t = a.max(1.0);
        while f.value_norm_at(t) * g.value_norm_at(t) > 1e-18 && t < 1e9 {
            t *= 2.0;
        }
        b = t;
    }
    if b <= a {
        return 0.0;
    }
    numeric::integrate_adaptive(&|t| f.value_norm_at(t) * g.value_norm_at(t), a, b, 1e-12).0
}

/// Two-variable Minkowski check in the Luxemburg form with the `2^{1/r}`
/// factor. Requires `t -> phi(t^{1/r})` to be a Young function.
#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

pub fn check_minkowski(
    f2d: &StepFunction2,
    phi: &YoungFunction,
    r: f64,
) -> Result<MinkowskiReport> {
    if r < 1.0 {
        return Err(Error::Precondition("exponent r must be >= 1".into()));
    }
    young::validate_young_map_weak(&|t: f64| phi.forward(t.powf(1.0 / r)), 20).map_err(|e| {
        Error::UnsupportedPair(format!("t -> phi(t^(1/{r})) fails Young validation: {e}"))
    })?;

    let y_len = f2d.y_lengths();
    // LHS: || (int f(., y)^r dy)^{1/r} ||
    let mixed: Vec<f64> = f2d
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&y_len)
                .map(|(&v, &l)| v.abs().powf(r) * l)
                .sum::<f64>()
                .powf(1.0 / r)
        })
        .collect();
    let lhs_fn = StepFunction::new(f2d.x_breaks.clone(), mixed)?;
    let lhs = luxemburg_norm(&SampledFunction::Step(lhs_fn), phi).value;

    // RHS: 2^{1/r} (int ||f(., y)||^r dy)^{1/r}
    let mut acc = 0.0;
    for (j, &l) in y_len.iter().enumerate() {
        let section = f2d.x_section(j);
        let n = luxemburg_norm(&SampledFunction::Step(section), phi).value;
        acc += n.powf(r) * l;
    }
    let rhs = 2f64.powf(1.0 / r) * acc.powf(1.0 / r);
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(MinkowskiReport { lhs, rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::make_power;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sq() -> YoungFunction {
        make_power(2.0).unwrap()
    }

    #[test]
    fn modular_constant_piece() {
        // f = 1 on (0,4), phi = t^2, k = 2: 4 * (1/2)^2 = 1
        let f = SampledFunction::Step(StepFunction::constant(1.0, 0.0, 4.0));
        assert!((modular(&f, &sq(), 2.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn modular_exponential_half() {
        // int e^{-2t} dt = 1/2
        let f = SampledFunction::exp_decay(1.0, 1.0, 0.0, f64::INFINITY).unwrap();
        assert!((modular(&f, &sq(), 1.0) - 0.5).abs() < 1e-11);
    }

    #[test]
    fn modular_zero_function() {
        let f = SampledFunction::Step(StepFunction::constant(0.0, 0.0, 1.0));
        assert_eq!(modular(&f, &sq(), 0.3), 0.0);
    }

    #[test]
    fn luxemburg_constant_matches_inverse() {
        // ||c 1_(0,1)|| = c / phi^-1(1)
        let phi = make_power(3.0).unwrap();
        let f = SampledFunction::Step(StepFunction::constant(5.0, 0.0, 1.0));
        let n = luxemburg_norm(&f, &phi);
        assert!((n.value - 5.0).abs() < 1e-8);
    }

    #[test]
    fn luxemburg_matches_l2_on_two_steps() {
        // f = 2 on (0,1), 1 on (1,2): l2 norm sqrt(5)
        let f = SampledFunction::Step(
            StepFunction::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0]).unwrap(),
        );
        let n = luxemburg_norm(&f, &sq());
        assert!((n.value - 5f64.sqrt()).abs() < 1e-8, "{}", n.value);
    }

    #[test]
    fn luxemburg_exp_decay_infinite_horizon() {
        let f = SampledFunction::exp_decay(1.0, 1.0, 0.0, f64::INFINITY).unwrap();
        let n = luxemburg_norm(&f, &sq());
        assert!((n.value - 0.5f64.sqrt()).abs() < 1e-9, "{}", n.value);
    }

    #[test]
    fn luxemburg_zero() {
        let f = SampledFunction::Step(StepFunction::constant(0.0, 0.0, 3.0));
        assert_eq!(luxemburg_norm(&f, &sq()).value, 0.0);
    }

    #[test]
    fn seq_exp_nondecaying_coordinate_is_infinite() {
        let f = SampledFunction::SeqExp {
            modes: vec![crate::func::Mode { amplitude: 1.0, rate: 0.0 }],
            r: 2.0,
            a: 0.0,
            b: f64::INFINITY,
        };
        assert!(luxemburg_norm(&f, &sq()).value.is_infinite());
    }

    #[test]
    fn orlicz_bracket_collapses_for_constant() {
        // f = 1 on (0,1), phi = t^2: witness g = 2 has unit conjugate norm,
        // so lo = 2 = hi.
        let f = SampledFunction::Step(StepFunction::constant(1.0, 0.0, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = orlicz_norm_bounds(&f, &sq(), 8, &mut rng);
        assert!((b.hi - 2.0).abs() < 1e-7, "hi {}", b.hi);
        assert!(b.lo > 2.0 - 1e-5, "lo {}", b.lo);
        assert!(b.lo <= b.hi * (1.0 + 1e-12));
    }

    #[test]
    fn orlicz_zero() {
        let f = SampledFunction::Step(StepFunction::constant(0.0, 0.0, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = orlicz_norm_bounds(&f, &sq(), 4, &mut rng);
        assert_eq!((b.lo, b.hi), (0.0, 0.0));
    }

    #[test]
    fn exp_norm_square_closed_form() {
        let n = exp_norm(1.0, &sq());
        assert!((n.value - 0.5f64.sqrt()).abs() < 1e-9, "{}", n.value);
    }

    #[test]
    fn exp_norm_power_scaling() {
        // value(s) = s^{-1/p} value(1) for phi = t^p
        let phi = make_power(3.0).unwrap();
        let v1 = exp_norm(1.0, &phi).value;
        for &s in &[0.1, 1.0, 10.0] {
            let vs = exp_norm(s, &phi).value;
            assert!((vs - s.powf(-1.0 / 3.0) * v1).abs() < 1e-8 * vs);
        }
    }

    #[test]
    fn exp_norm_upper_bound_via_inverse() {
        for &s in &[0.1, 1.0, 10.0] {
            let v = exp_norm(s, &sq()).value;
            assert!(v <= 1.0 / sq().inverse(s) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn hoelder_equality_case() {
        let f = SampledFunction::Step(StepFunction::constant(1.0, 0.0, 1.0));
        let g = SampledFunction::Step(StepFunction::constant(1.0, 0.0, 1.0));
        let rep = check_hoelder(&f, &g, &sq());
        assert!((rep.ratio - 1.0).abs() < 1e-7, "ratio {}", rep.ratio);
    }

    #[test]
    fn hoelder_zero_function() {
        let f = SampledFunction::Step(StepFunction::constant(0.0, 0.0, 1.0));
        let g = SampledFunction::Step(StepFunction::constant(1.0, 0.0, 1.0));
        assert_eq!(check_hoelder(&f, &g, &sq()).ratio, 0.0);
    }

    #[test]
    fn minkowski_separable_ratio_half_for_r1() {
        // f(x,y) = a(x) b(y) with r = 1: both sides factor, ratio = 1/2.
        let f2d = StepFunction2::new(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 0.5, 1.0],
            vec![vec![2.0, 6.0], vec![1.0, 3.0]],
        )
        .unwrap();
        let rep = check_minkowski(&f2d, &sq(), 1.0).unwrap();
        assert!((rep.ratio - 0.5).abs() < 1e-7, "ratio {}", rep.ratio);
    }

    #[test]
    fn minkowski_single_atom_ratio() {
        // one y-cell: ratio reduces to 2^{-1/r}
        let f2d = StepFunction2::new(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 0.7],
            vec![vec![2.0], vec![1.0]],
        )
        .unwrap();
        let rep = check_minkowski(&f2d, &sq(), 2.0).unwrap();
        assert!((rep.ratio - 2f64.powf(-0.5)).abs() < 1e-7, "ratio {}", rep.ratio);
    }

    #[test]
    fn minkowski_rejects_concave_transform() {
        // phi = t^{1.5}, r = 2 makes t^{0.75}: not a Young function
        let phi = make_power(1.5).unwrap();
        let f2d =
            StepFunction2::new(vec![0.0, 1.0], vec![0.0, 1.0], vec![vec![1.0]]).unwrap();
        assert!(check_minkowski(&f2d, &phi, 2.0).is_err());
    }

    #[test]
    fn modular_monotone_in_one_over_k() {
        let f = SampledFunction::Step(
            StepFunction::new(vec![0.0, 0.5, 2.0, 3.0], vec![1.0, 4.0, 0.5]).unwrap(),
        );
        let phi = make_power(1.5).unwrap();
        let ks = numeric::log_grid(0.05, 50.0, 25);
        let mods: Vec<f64> = ks.iter().map(|&k| modular(&f, &phi, k)).collect();
        for w in mods.windows(2) {
            assert!(w[0] >= w[1] - 1e-12);
        }
    }
}
