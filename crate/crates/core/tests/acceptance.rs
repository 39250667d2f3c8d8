//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the computed values. Expected constants are frozen from independent
//! closed-form derivations noted inline. Criteria run serially (a shared
//! gate) so the stated runtime budgets are measured without contention.

use std::sync::Mutex;
use std::time::Instant;

use orlicz_core::diagsys::{
    self, DiagonalSystem, SpectrumRule, Strategy, WeightSpec, WeissWeight,
};
use orlicz_core::func::{SampledFunction, StepFunction};
use orlicz_core::harness::{self, HarnessConfig};
use orlicz_core::young::{self, ClassPSpec, Rho, YoungFunction};
use orlicz_core::{norms, numeric, shift};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static GATE: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(id: u32, name: &str, pass: bool, detail: &str, started: Instant, budget_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion {id:>2} [{name}]: {} ({detail}; {elapsed:.2}s / budget {budget_s}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
    assert!(
        elapsed < budget_s,
        "criterion {id} exceeded its runtime budget: {elapsed:.2}s >= {budget_s}s"
    );
}

fn canonical_system() -> (YoungFunction, DiagonalSystem) {
    let phi = young::make_power(2.0).unwrap();
    let sys = DiagonalSystem::new(
        SpectrumRule::NegPower { gamma: 1.0 },
        200,
        2.0,
        WeightSpec::Default,
        &phi,
    )
    .unwrap();
    (phi, sys)
}

#[test]
fn criterion_01_power_conjugation() {
    let _g = serial();
    let t0 = Instant::now();
    let grid = numeric::log_grid(1e-4, 1e4, 60);
    let mut worst = 0.0_f64;
    for &p in &[1.5, 2.0, 3.0] {
        let phi = young::make_power(p).unwrap();
        let tilde = young::conjugate_numeric(&phi, &grid).unwrap();
        // closed form: (p-1) p^{-p/(p-1)} s^{p/(p-1)}
        let pc = p / (p - 1.0);
        let coeff = (p - 1.0) * p.powf(-pc);
        for &s in &grid {
            let expect = coeff * s.powf(pc);
            worst = worst.max((tilde.forward(s) - expect).abs() / expect);
        }
    }
    let mut worst_bi = 0.0_f64;
    for &p in &[1.5, 2.0, 3.0] {
        let phi = young::make_power(p).unwrap();
        let once = young::conjugate_numeric(&phi, &numeric::log_grid(1e-4, 1e4, 33)).unwrap();
        let twice = young::conjugate_numeric(&once, &numeric::log_grid(1e-4, 1e4, 33)).unwrap();
        for &t in &numeric::log_grid(1e-2, 1e2, 15) {
            let expect = phi.forward(t);
            worst_bi = worst_bi.max((twice.forward(t) - expect).abs() / expect);
        }
    }
    report(
        1,
        "conjugation",
        worst <= 1e-8 && worst_bi <= 1e-6,
        &format!("conjugate err {worst:.2e} <= 1e-8, biconjugation err {worst_bi:.2e} <= 1e-6"),
        t0,
        5.0,
    );
}

#[test]
fn criterion_02_sandwich_inequality() {
    let _g = serial();
    let t0 = Instant::now();
    let grid = numeric::log_grid(1e-6, 1e6, 200);
    let mut min_slack = f64::INFINITY;
    for (name, phi) in harness::builtin_phis() {
        let tilde = phi.conjugate();
        let rep = young::inequality_report(&phi, &tilde, None, &grid);
        min_slack = min_slack.min(rep.min_slack);
        assert!(
            rep.min_slack >= -1e-8,
            "pair {name}: slack {} at {:?}",
            rep.min_slack,
            rep.worst_point
        );
    }
    report(
        2,
        "sandwich",
        min_slack >= -1e-8,
        &format!("worst relative slack {min_slack:.2e} >= -1e-8 over all built-in pairs"),
        t0,
        5.0,
    );
}

#[test]
fn criterion_03_luxemburg_lp_consistency() {
    let _g = serial();
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for &p in &[1.5, 2.0, 3.0] {
        let phi = young::make_power(p).unwrap();
        for _ in 0..500 {
            let f = shift::random_step(&mut rng, 2.0);
            if f.is_zero() {
                continue;
            }
            // direct p-norm oracle
            let oracle = f
                .pieces()
                .map(|(a, b, v)| v.abs().powf(p) * (b - a))
                .sum::<f64>()
                .powf(1.0 / p);
            let lux = norms::luxemburg_norm(&SampledFunction::Step(f), &phi).value;
            worst = worst.max((lux - oracle).abs() / oracle);
        }
    }
    report(
        3,
        "lp-consistency",
        worst <= 1e-8,
        &format!("worst relative deviation {worst:.2e} <= 1e-8 over 500 random steps x 3 exponents"),
        t0,
        10.0,
    );
}

#[test]
fn criterion_04_exponential_norm_lemma() {
    let _g = serial();
    let t0 = Instant::now();
    let s_grid = numeric::log_grid(1e-3, 1e3, 41);
    let mut worst_upper = 0.0_f64;
    let mut floors = vec![];
    for (name, phi) in harness::builtin_phis() {
        let tilde = phi.conjugate();
        let mut min_product = f64::INFINITY;
        for &s in &s_grid {
            let product = tilde.inverse(s) * norms::exp_norm(s, &tilde).value;
            worst_upper = worst_upper.max(product);
            min_product = min_product.min(product);
        }
        if let Some(spec) = phi.class_p_spec() {
            // doubling constant of the conjugate from the scaling bound:
            // K = e^max(p', q'), floor = min(1, 1/(K ln K))
            let m = spec.p_conj().max(spec.q_conj());
            let floor = (1.0 / (m.exp() * m)).min(1.0);
            assert!(
                min_product >= floor - 1e-9,
                "{name}: product {min_product} below floor {floor}"
            );
            floors.push((name, min_product, floor));
        }
    }
    let detail = floors
        .iter()
        .map(|(n, v, f)| format!("{n}: min {v:.4} >= {f:.4}"))
        .collect::<Vec<_>>()
        .join("; ");
    report(
        4,
        "exp-norm",
        worst_upper <= 1.0 + 1e-8,
        &format!("max product {worst_upper:.10} <= 1+1e-8; {detail}"),
        t0,
        10.0,
    );
}

#[test]
fn criterion_05_calculus_constant() {
    let _g = serial();
    let t0 = Instant::now();
    let mut phis: Vec<YoungFunction> = [1.5, 2.0, 3.0]
        .iter()
        .map(|&p| young::make_power(p).unwrap())
        .collect();
    phis.push(young::make_class_p(ClassPSpec::new(2.0, 4.0, Rho::Min1).unwrap()).unwrap());
    phis.push(young::make_class_p(ClassPSpec::new(2.0, 4.0, Rho::Log1p).unwrap()).unwrap());
    let mut in_interval = true;
    let mut worst_low = f64::INFINITY;
    for phi in &phis {
        for &t in &numeric::log_grid(1e-3, 1e3, 25) {
            let c = diagsys::calculus_constant(phi, t);
            worst_low = worst_low.min(c);
            in_interval &= ((-1.0f64).exp() - 1e-9..=1.0 + 1e-9).contains(&c);
        }
    }
    // stationarity of sqrt(s) e^{-st} at s = 1/(2t) gives e^{-1/2}/sqrt(2)
    let expect = 0.4288819424803534;
    let square = young::make_power(2.0).unwrap();
    let mut worst_sq = 0.0_f64;
    for &t in &numeric::log_grid(1e-3, 1e3, 25) {
        worst_sq = worst_sq.max((diagsys::calculus_constant(&square, t) - expect).abs());
    }
    report(
        5,
        "calculus-constant",
        in_interval && worst_sq <= 1e-6,
        &format!("all c(t) in [1/e, 1] (min {worst_low:.6}); square deviation {worst_sq:.2e} <= 1e-6"),
        t0,
        10.0,
    );
}

#[test]
fn criterion_06_admissibility_constant_on_l2() {
    let _g = serial();
    let t0 = Instant::now();
    let (phi, sys) = canonical_system();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let vectors: Vec<Vec<f64>> = (0..100)
        .map(|_| {
            let x: Vec<f64> = (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = sys.state_norm(&x);
            x.into_iter().map(|v| v / n).collect()
        })
        .collect();
    // closed form: modular sums to ||x||^2 / (2 k^2), so the constant is
    // 1/sqrt(2) for every unit vector
    let expect = 0.7071067811865475;
    let ratios = numeric::par_map(&vectors, |x| {
        diagsys::trajectory_output_norm(&sys, x, &phi, f64::INFINITY).value
    });
    let worst = ratios
        .iter()
        .map(|v| (v - expect).abs())
        .fold(0.0, f64::max);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let bracket =
        diagsys::admissibility_constant(&sys, &phi, f64::INFINITY, Strategy::Basis, &mut rng);
    let upper = bracket.constant_upper.unwrap_or(f64::NAN);
    report(
        6,
        "admissibility-l2",
        worst <= 1e-6 && max_ratio <= 1.4142135623730951 && (upper - 1.4142135623730951).abs() < 1e-12,
        &format!(
            "100 unit vectors: max deviation from 1/sqrt(2) = {worst:.2e} <= 1e-6; \
             constants <= 2^(1/2) (upper bound {upper:.12})"
        ),
        t0,
        20.0,
    );
}

#[test]
fn criterion_07_weiss_supremum() {
    let _g = serial();
    let t0 = Instant::now();
    let (phi, sys) = canonical_system();
    let conj = diagsys::weiss_supremum(&sys, &phi, 0.0, WeissWeight::ConjugateInverse);
    // per-mode sup of 2 sqrt(z n)/(z + n) is 1, attained at z = n
    let mut worst_mode = 0.0_f64;
    for pm in &conj.per_mode {
        worst_mode = worst_mode.max((pm.z_star / pm.mode as f64 - 1.0).abs());
    }
    let exp = diagsys::weiss_supremum(&sys, &phi, 0.0, WeissWeight::ExpNormReciprocal);
    // sqrt(8n) sqrt(n)/(2n) = sqrt(2)
    let pass = (conj.sup - 1.0).abs() <= 1e-3
        && worst_mode <= 1e-3
        && (exp.sup - 1.4142135623730951).abs() <= 1e-3;
    report(
        7,
        "weiss-supremum",
        pass,
        &format!(
            "conjugate-inverse sup {:.6} ~ 1; per-mode argmax deviation {worst_mode:.2e} <= 1e-3; \
             exp-norm sup {:.6} ~ sqrt(2)",
            conj.sup, exp.sup
        ),
        t0,
        20.0,
    );
}

#[test]
fn criterion_08_semigroup_chain() {
    let _g = serial();
    let t0 = Instant::now();
    let (phi, sys) = canonical_system();
    let semi = diagsys::semigroup_weiss_sup(&sys, &phi);
    // sup of sqrt(u) e^{-u} at u = 1/2, scaled: e^{-1/2}/sqrt(2)
    let expect = 0.4288819424803534;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let vectors: Vec<Vec<f64>> = (0..100)
        .map(|_| (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let slacks = numeric::par_map(&vectors, |x| {
        diagsys::weak_admissibility_check(&sys, &phi, x).unwrap().slack
    });
    let worst_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    report(
        8,
        "semigroup-chain",
        (semi.sup - expect).abs() <= 1e-6 && worst_slack >= -1e-8,
        &format!(
            "semigroup sup {:.8} ~ {expect:.8}; weak admissibility slack >= {worst_slack:.2e}",
            semi.sup
        ),
        t0,
        20.0,
    );
}

#[test]
fn criterion_09_block_cocycle() {
    let _g = serial();
    let t0 = Instant::now();
    let (_, sys) = canonical_system();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let grid: Vec<f64> = numeric::lin_grid(0.0, 2.0, 81);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let x: Vec<f64> = (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let t = rng.gen_range(0.0..1.0);
        let s = rng.gen_range(0.0..1.0);
        worst = worst.max(shift::engel_cocycle_defect(&sys, &x, t, s, &grid));
    }
    report(
        9,
        "block-cocycle",
        worst <= 1e-10,
        &format!("max defect {worst:.2e} <= 1e-10 over 100 random (t, s, x)"),
        t0,
        5.0,
    );
}

#[test]
fn criterion_10_integral_operator() {
    let _g = serial();
    let t0 = Instant::now();
    let square = young::make_power(2.0).unwrap();
    // int_0^tau ln^2(tau/t) dt = 2 tau, so the ratio is sqrt(2)
    let f = StepFunction::constant(1.0, 0.0, 1.0);
    let const_ratio = shift::l_norm_ratio(&square, &f, 1.0).unwrap();
    let const_ok = (const_ratio - 1.4142135623730951).abs() <= 1e-9;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bound_ok = true;
    let mut details = vec![format!("const ratio {const_ratio:.10} ~ sqrt(2)")];
    for &(p, trials) in &[(1.5, 80usize), (2.0, 200), (3.0, 80)] {
        let phi = young::make_power(p).unwrap();
        let est = shift::estimate_l_norm(&phi, 1.0, trials, &mut rng).unwrap();
        bound_ok &= est.max_ratio <= p + 1e-6;
        details.push(format!("p={p}: max ratio {:.4} <= {p}", est.max_ratio));
    }

    let classp = young::make_class_p(ClassPSpec::new(2.0, 4.0, Rho::Min1).unwrap()).unwrap();
    let mut maxima = vec![];
    for &tau in &[1.0, 10.0, 100.0] {
        let est = shift::estimate_l_norm_rich(&classp, tau, 20, &mut rng).unwrap();
        maxima.push(est.max_ratio);
    }
    let spread = maxima.iter().copied().fold(0.0, f64::max)
        / maxima.iter().copied().fold(f64::INFINITY, f64::min);
    details.push(format!("class-P maxima {maxima:?}, spread {spread:.4} <= 1.1"));
    report(
        10,
        "integral-operator",
        const_ok && bound_ok && spread <= 1.1,
        &details.join("; "),
        t0,
        30.0,
    );
}

#[test]
fn criterion_11_doubling_counterexample() {
    let _g = serial();
    let t0 = Instant::now();
    let phi = young::make_expm1t();
    let build = shift::build_delta2_counterexample(&phi, 20).unwrap();
    let mut detail = vec![format!(
        "partial modular of u = {:.6} < 1",
        build.modular_u_partial
    )];
    let mut pass = build.modular_u_partial < 1.0;
    for &t in &[1e-3, 1e-6] {
        let rep = shift::counterexample_discontinuity(&build, &phi, t, 20).unwrap();
        pass &= rep.discontinuous && rep.crossing_k.is_some();
        detail.push(format!(
            "t={t:.0e}: modular {:.3e} crosses 1 at K={:?}",
            rep.partial_modular, rep.crossing_k
        ));
    }
    report(11, "doubling-counterexample", pass, &detail.join("; "), t0, 10.0);
}

#[test]
fn criterion_12_sector_equivalence() {
    let _g = serial();
    let t0 = Instant::now();
    let spec = ClassPSpec::new(2.0, 4.0, Rho::Log1p).unwrap();
    let rep = young::check_sector_equivalence(&spec, std::f64::consts::FRAC_PI_3, 60).unwrap();
    let pass = rep.rho_ratio_min >= 0.25 - 1e-9 && rep.m1.is_finite() && rep.m0 > 0.0;
    report(
        12,
        "sector-equivalence",
        pass,
        &format!(
            "rho ratio min {:.6} >= 1/4; inverse-level m0 {:.4}, m1 {:.4} finite",
            rep.rho_ratio_min, rep.m0, rep.m1
        ),
        t0,
        10.0,
    );
}

#[test]
fn criterion_13_determinism() {
    let _g = serial();
    let t0 = Instant::now();
    let cfg = HarnessConfig { seed: 123, phi: None, system: None };
    let first_reports = harness::run_all(&cfg);
    let all_pass = first_reports.iter().all(|r| r.passed());
    let first: Vec<String> = first_reports.iter().map(|r| r.canonical_json()).collect();
    let second: Vec<String> = harness::run_all(&cfg)
        .iter()
        .map(|r| r.canonical_json())
        .collect();
    let identical = first == second;
    report(
        13,
        "determinism",
        identical && all_pass,
        &format!(
            "two seeded runs byte-identical modulo runtime: {identical}; all suites pass: {all_pass}"
        ),
        t0,
        240.0,
    );
}
