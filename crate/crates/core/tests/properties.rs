//! Property-based invariants: randomized step functions and parameters
//! against the structural inequalities the norms must satisfy.

use proptest::prelude::*;

use orlicz_core::diagsys::{DiagonalSystem, SpectrumRule, WeightSpec};
use orlicz_core::func::{SampledFunction, StepFunction, StepFunction2};
use orlicz_core::young::{self, ClassPSpec, Rho};
use orlicz_core::{norms, rearrange, shift};

/// Strategy for a step function on (0, 2) with a handful of pieces.
fn step_fn() -> impl Strategy<Value = StepFunction> {
    (2usize..7)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(0.0f64..2.0, n + 1),
                proptest::collection::vec(0.01f64..3.0, n),
            )
        })
        .prop_filter_map("degenerate breakpoints", |(mut breaks, values)| {
            breaks.sort_by(f64::total_cmp);
            breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            if breaks.len() < 2 {
                return None;
            }
            let values = values[..breaks.len() - 1].to_vec();
            StepFunction::new(breaks, values).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modular_nonincreasing_in_k(f in step_fn(), k1 in 0.05f64..10.0, factor in 1.0f64..10.0) {
        let phi = young::make_power(2.0).unwrap();
        let g = SampledFunction::Step(f);
        let m1 = norms::modular(&g, &phi, k1);
        let m2 = norms::modular(&g, &phi, k1 * factor);
        prop_assert!(m2 <= m1 + 1e-12);
    }

    #[test]
    fn norm_homogeneity(f in step_fn(), c in 0.1f64..10.0) {
        let phi = young::make_power(1.5).unwrap();
        let nf = norms::luxemburg_norm(&SampledFunction::Step(f.clone()), &phi).value;
        let ncf = norms::luxemburg_norm(&SampledFunction::Step(f.scaled(c)), &phi).value;
        prop_assert!((ncf - c * nf).abs() <= 1e-9 * (c * nf).max(1e-12));
    }

    #[test]
    fn norm_triangle_inequality(f in step_fn(), g in step_fn()) {
        let phi = young::make_power(2.0).unwrap();
        let nf = norms::luxemburg_norm(&SampledFunction::Step(f.clone()), &phi).value;
        let ng = norms::luxemburg_norm(&SampledFunction::Step(g.clone()), &phi).value;
        let sum = f.combine(&g, |a, b| a + b);
        let nsum = norms::luxemburg_norm(&SampledFunction::Step(sum), &phi).value;
        prop_assert!(nsum <= nf + ng + 1e-8 * (nf + ng));
    }

    #[test]
    fn luxemburg_matches_p_norm(f in step_fn(), p in 1.2f64..4.0) {
        let phi = young::make_power(p).unwrap();
        let oracle = f
            .pieces()
            .map(|(a, b, v)| v.abs().powf(p) * (b - a))
            .sum::<f64>()
            .powf(1.0 / p);
        let lux = norms::luxemburg_norm(&SampledFunction::Step(f), &phi).value;
        prop_assert!((lux - oracle).abs() <= 1e-8 * oracle);
    }

    #[test]
    fn hoelder_ratio_bounded(f in step_fn(), g in step_fn(), p in 1.2f64..4.0) {
        let phi = young::make_power(p).unwrap();
        let rep = norms::check_hoelder(
            &SampledFunction::Step(f),
            &SampledFunction::Step(g),
            &phi,
        );
        prop_assert!(rep.ratio <= 1.0 + 1e-8, "ratio {}", rep.ratio);
    }

    #[test]
    fn minkowski_ratio_bounded(
        xv in proptest::collection::vec(0.01f64..2.0, 2..5),
        yv in proptest::collection::vec(0.01f64..2.0, 2..5),
        seed in 0u64..1000,
    ) {
        // grid spacings then values seeded from the index sum
        let nx = xv.len();
        let ny = yv.len();
        let mut xb = vec![0.0];
        for dx in &xv { xb.push(xb.last().unwrap() + dx); }
        let mut yb = vec![0.0];
        for dy in &yv { yb.push(yb.last().unwrap() + dy); }
        let values: Vec<Vec<f64>> = (0..nx)
            .map(|i| (0..ny).map(|j| ((seed + (i * ny + j) as u64 * 37) % 97) as f64 / 10.0 + 0.1).collect())
            .collect();
        let f2d = StepFunction2::new(xb, yb, values).unwrap();
        let phi = young::make_power(2.0).unwrap();
        let rep = norms::check_minkowski(&f2d, &phi, 2.0).unwrap();
        prop_assert!(rep.ratio <= 1.0 + 1e-8, "ratio {}", rep.ratio);
    }

    #[test]
    fn hardy_littlewood(f in step_fn(), g in step_fn()) {
        let direct = f.integral_product(&g);
        let fs = rearrange::decreasing_rearrangement(&SampledFunction::Step(f)).unwrap();
        let gs = rearrange::decreasing_rearrangement(&SampledFunction::Step(g)).unwrap();
        let (SampledFunction::Step(fs), SampledFunction::Step(gs)) = (&fs.fstar, &gs.fstar)
            else { unreachable!() };
        prop_assert!(fs.integral_product(gs) >= direct - 1e-10);
    }

    #[test]
    fn rearrangement_equimeasurable(f in step_fn(), level in 0.0f64..3.5) {
        let r = rearrange::decreasing_rearrangement(&SampledFunction::Step(f)).unwrap();
        prop_assert!((r.distribution(level) - r.distribution_star(level)).abs() < 1e-10);
    }

    #[test]
    fn weak_norm_finite_on_steps(f in step_fn()) {
        let phi = young::make_power(2.0).unwrap();
        let n = rearrange::weak_orlicz_norm(&SampledFunction::Step(f), &phi).unwrap();
        prop_assert!(n.value.is_finite());
    }

    #[test]
    fn sandwich_at_random_points(p in 1.2f64..4.0, t in 1e-5f64..1e5) {
        let phi = young::make_power(p).unwrap();
        let tilde = phi.conjugate();
        let prod = phi.inverse(t) * tilde.inverse(t);
        prop_assert!(prod >= t * (1.0 - 1e-10) && prod <= 2.0 * t * (1.0 + 1e-10));
    }

    #[test]
    fn class_p_scaling_at_random_points(s in 1e-4f64..1e4, t in 1e-4f64..1e4) {
        let spec = ClassPSpec::new(2.0, 4.0, Rho::Min1).unwrap();
        let phi = young::make_class_p(spec).unwrap();
        let lhs = phi.inverse(s * t);
        let rhs = s.powf(0.5).max(s.powf(0.25)) * phi.inverse(t);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn shift_semigroup_law(f in step_fn(), t in 0.0f64..1.0, s in 0.0f64..1.0) {
        let iv = (0.0, 6.0);
        let a = shift::right_shift(&shift::right_shift(&f, t, iv).unwrap(), s, iv).unwrap();
        let b = shift::right_shift(&f, t + s, iv).unwrap();
        for probe in [0.3, 1.1, 2.7, 4.9] {
            // away from breakpoints up to the shift rounding
            prop_assert!((a.eval(probe) - b.eval(probe)).abs() < 1e-9 || {
                // tolerate disagreement only within a rounding sliver of a
                // breakpoint of either representation
                let near = |bp: &f64| (bp - probe).abs() < 1e-9;
                a.breaks().iter().any(near) || b.breaks().iter().any(near)
            });
        }
    }

    #[test]
    fn cocycle_defect_small(
        t in 0.0f64..1.5,
        s in 0.0f64..1.5,
        seed in 0u64..100,
    ) {
        let phi = young::make_power(2.0).unwrap();
        let sys = DiagonalSystem::new(
            SpectrumRule::NegPower { gamma: 1.0 },
            10,
            2.0,
            WeightSpec::Default,
            &phi,
        ).unwrap();
        let x: Vec<f64> = (0..10).map(|i| ((seed + i as u64 * 13) % 19) as f64 / 9.0 - 1.0).collect();
        let grid: Vec<f64> = (0..60).map(|i| i as f64 * 0.05).collect();
        prop_assert!(shift::engel_cocycle_defect(&sys, &x, t, s, &grid) <= 1e-10);
    }

    #[test]
    fn operator_l_nonnegative(f in step_fn()) {
        let lf = shift::integral_operator_l(&f, 2.0).unwrap();
        for probe in [0.01, 0.3, 0.9, 1.5, 1.99] {
            prop_assert!(lf.eval(probe) >= -1e-12);
        }
    }

    #[test]
    fn step_csv_round_trip(f in step_fn()) {
        let text = orlicz_core::config::step_to_csv(&f);
        let back = orlicz_core::config::parse_step_csv(&text).unwrap();
        prop_assert_eq!(f, back);
    }
}
