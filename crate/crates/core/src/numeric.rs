//! Shared numerical kernels: golden-section maximization, monotone
//! bisection, and composite Gauss–Legendre quadrature.

use std::sync::OnceLock;

/// Inverse golden ratio, (sqrt(5) - 1) / 2.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Geometrically spaced grid with `n` points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "log_grid needs 0 < lo < hi, n >= 2");
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Linearly spaced grid with `n` points from `lo` to `hi` inclusive.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Dyadic points 2^-depth, ..., 1/2, 1, 2, ..., 2^depth.
pub fn dyadic_grid(depth: u32) -> Vec<f64> {
    let mut g = Vec::with_capacity(2 * depth as usize + 1);
    for k in -(depth as i32)..=(depth as i32) {
        g.push((k as f64 * std::f64::consts::LN_2).exp());
    }
    g
}

/// Maximize a unimodal `f` on `[a, b]` by golden-section search.
/// Returns `(argmax, max)`. `tol` is relative on the abscissa.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    debug_assert!(a <= b);
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - (hi - lo) * INV_PHI;
    let mut x2 = lo + (hi - lo) * INV_PHI;
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= tol * (lo.abs() + hi.abs()).max(1e-300) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + (hi - lo) * INV_PHI;
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - (hi - lo) * INV_PHI;
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (lo + hi);
    let fm = f(xm);
    if fm >= f1 && fm >= f2 {
        (xm, fm)
    } else if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximize `f` over positive arguments by a coarse log-spaced scan followed
/// by golden-section refinement around the best scan cell. Suitable for the
/// piecewise-monotone objectives that arise from weighted resolvent and
/// semigroup envelopes.
pub fn log_scan_max<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    scan_points: usize,
    tol: f64,
) -> (f64, f64) {
    let grid = log_grid(lo, hi, scan_points.max(4));
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let a = grid[best_i.saturating_sub(1)];
    let b = grid[(best_i + 1).min(grid.len() - 1)];
    // Refine in log coordinates so wide brackets converge uniformly.
    let (lx, lv) = golden_max(|u: f64| f(u.exp()), a.ln(), b.ln(), tol);
    if lv >= best_v {
        (lx.exp(), lv)
    } else {
        (grid[best_i], best_v)
    }
}

/// Find `x` in `(0, inf)` with `f(x) = target` for a nondecreasing `f`,
/// by outward doubling from `hint` followed by bisection. Returns the
/// midpoint of the final bracket; `rel_tol` bounds the bracket width.
pub fn invert_increasing<F: Fn(f64) -> f64>(f: F, target: f64, hint: f64, rel_tol: f64) -> f64 {
    let hint = if hint.is_finite() && hint > 0.0 { hint } else { 1.0 };
    let mut lo = hint;
    let mut hi = hint;
    let mut iter = 0;
    while f(lo) > target {
        lo *= 0.5;
        iter += 1;
        if iter > 2100 {
            return 0.0;
        }
    }
    iter = 0;
    while f(hi) < target {
        hi *= 2.0;
        iter += 1;
        if iter > 2100 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// 16-point Gauss–Legendre rule on [-1, 1], computed once by Newton iteration
// on the Legendre polynomial.
fn gauss_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 16usize;
        let mut xs = vec![0.0; n];
        let mut ws = vec![0.0; n];
        for i in 0..n {
            // Chebyshev initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                // Legendre recurrence for P_n(x) and P_n'(x).
                let (mut p0, mut p1) = (1.0_f64, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0_f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            xs[i] = x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

/// Fixed 16-point Gauss–Legendre estimate of the integral of `f` on `[a, b]`.
pub fn gauss_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (xs, ws) = gauss_nodes();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (&x, &w) in xs.iter().zip(ws.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Composite Gauss–Legendre quadrature on `[a, b]`, doubling the panel count
/// until two successive estimates agree to `rel_tol` (with an absolute floor).
/// Returns `(value, panels_used)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> (f64, usize) {
    if b <= a {
        return (0.0, 0);
    }
    let mut panels = 4usize;
    let mut prev = composite(f, a, b, panels);
    if !prev.is_finite() {
        return (prev, panels);
    }
    loop {
        panels *= 2;
        let cur = composite(f, a, b, panels);
        if !cur.is_finite() {
            return (cur, panels);
        }
        let scale = cur.abs().max(prev.abs()).max(1e-300);
        if (cur - prev).abs() <= rel_tol * scale || panels >= 1 << 16 {
            return (cur, panels);
        }
        prev = cur;
    }
}

fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let x0 = a + h * i as f64;
        acc += gauss_panel(f, x0, x0 + h);
    }
    acc
}

/// Integrate a multi-scale integrand on `[a, b]` by halving the span
/// dyadically down to `finest` and running the adaptive rule per segment.
/// Uniform composites waste panels when decay rates span decades.
pub fn integrate_multiscale<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    finest: f64,
    rel_tol: f64,
) -> (f64, usize) {
    if b <= a {
        return (0.0, 0);
    }
    let mut total = 0.0;
    let mut panels = 0;
    let mut hi = b;
    for _ in 0..64 {
        if hi - a <= finest.max(1e-300) {
            break;
        }
        let lo = a + (hi - a) * 0.5;
        let (v, p) = integrate_adaptive(f, lo, hi, rel_tol);
        total += v;
        panels += p;
        if !total.is_finite() {
            return (total, panels);
        }
        hi = lo;
    }
    let (v, p) = integrate_adaptive(f, a, hi, rel_tol);
    (total + v, panels + p)
}

/// Map a function over items on the available cores with deterministic
/// output order. Falls back to a sequential loop on single-core hosts.
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(items.len().max(1));
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let mut out: Vec<Option<U>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(threads);
    let f = &f;
    std::thread::scope(|scope| {
        for (slot_chunk, item_chunk) in out.chunks_mut(chunk).zip(items.chunks(chunk)) {
            scope.spawn(move || {
                for (slot, item) in slot_chunk.iter_mut().zip(item_chunk) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    out.into_iter().map(|v| v.expect("filled by worker")).collect()
}

/// Integrate `f` on `(0, b]` when `f` may be singular (or merely steep) at 0:
/// dyadic panels `[b/2^{j+1}, b/2^j]` are accumulated until the running tail
/// contribution is negligible. Divergence at the endpoint is reported as
/// `f64::INFINITY` once panel contributions stop decaying and the partial sum
/// exceeds `diverge_cap`.
pub fn integrate_to_zero<F: Fn(f64) -> f64>(f: &F, b: f64, rel_tol: f64, diverge_cap: f64) -> f64 {
    assert!(b > 0.0);
    let mut total = 0.0;
    let mut hi = b;
    let mut growing = 0u32;
    let mut last = f64::INFINITY;
    for _ in 0..4096 {
        let lo = 0.5 * hi;
        let (piece, _) = integrate_adaptive(f, lo, hi, rel_tol);
        total += piece;
        if piece >= last {
            growing += 1;
        } else {
            growing = 0;
        }
        if total > diverge_cap && growing >= 4 {
            return f64::INFINITY;
        }
        if piece.abs() <= rel_tol * total.abs().max(1e-300) && piece.abs() < 1e-280 {
            break;
        }
        if piece.abs() <= 1e-16 * total.abs().max(1e-300) {
            break;
        }
        last = piece;
        hi = lo;
    }
    total
}
