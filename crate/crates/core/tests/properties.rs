use proptest::prelude::*;
use smoothek::dd::Dd;
use smoothek::model::{exact_distribution, BernoulliEnsemble, ProbabilityMode};
use smoothek::sieve::{
    count_sieve, omega, omega_t, primes_up_to, scan_populations, tree_populations, PsiCounter, SieveConfig,
};
use smoothek::stats::{ks_against_normal, MomentAccumulator};
use smoothek::SmoothContext;

fn small_cfg(segment_len: usize) -> SieveConfig {
    SieveConfig {
        segment_len,
        ..SieveConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_are_monotone_and_ordered(x in 2u64..60_000, y in 2u64..400, dx in 0u64..5_000, dy in 0u64..50) {
        let y = y.min(x);
        let mut psi = PsiCounter::new();
        let base = psi.psi(x, y);
        prop_assert!(psi.psi(x + dx, y) >= base);
        prop_assert!(psi.psi(x + dx, (y + dy).min(x + dx)) >= base);
        let c = count_sieve(&SmoothContext::new(x, y).unwrap(), &small_cfg(4096)).unwrap();
        prop_assert_eq!(c.smooth, base);
        prop_assert!(c.ultra <= c.smooth);
    }

    #[test]
    fn engines_agree_and_h_is_nonnegative(x in 2u64..150_000, y in 2u64..2_000, theta in 0.3f64..=1.0) {
        let y = y.min(x);
        let ctx = SmoothContext::with_trunc_exponent(x, y, Some(theta)).unwrap();
        let scan = scan_populations(&ctx, &small_cfg(1 << 12)).unwrap();
        let tree = tree_populations(&ctx);
        prop_assert_eq!(&scan, &tree);
        for (w, wy, count) in tree.smooth.cells().chain(tree.ultra.cells()) {
            prop_assert!(count == 0 || w >= wy);
        }
        prop_assert!(tree.smooth.h_marginal().iter().all(|&(h, c)| c == 0 || h >= 0));
        prop_assert!(tree.ultra.total() <= tree.smooth.total());
    }

    #[test]
    fn omega_t_is_capped_by_omega(n in 1u64..10_000_000, t in 2u64..1_000) {
        prop_assert!(omega_t(n, t) <= omega(n));
        prop_assert!(omega_t(n, t) <= omega_t(n, t + 1));
    }

    #[test]
    fn ks_grid_is_a_valid_cdf(
        atoms in prop::collection::vec((-20i32..20, 1u32..1000), 1..30),
        center in -3.0f64..3.0,
        scale in 0.2f64..5.0,
    ) {
        let total: f64 = atoms.iter().map(|&(_, w)| w as f64).sum();
        let atoms: Vec<(f64, f64)> = atoms.iter().map(|&(v, w)| (v as f64, w as f64 / total)).collect();
        let k = ks_against_normal(&atoms, center, scale);
        prop_assert_eq!(k.grid.len(), 161);
        prop_assert!(k.grid.windows(2).all(|w| w[0].f_emp <= w[1].f_emp + 1e-15));
        prop_assert!(k.grid.iter().all(|p| (0.0..=1.0 + 1e-12).contains(&p.f_emp)));
        prop_assert!(k.ks_distance <= k.ks_sup + 1e-12);
        prop_assert!(k.ks_sup <= 1.0);
    }

    #[test]
    fn model_law_is_a_distribution(probs in prop::collection::vec(0.0f64..=1.0, 1..80)) {
        let primes = primes_up_to(1000)[..probs.len()].to_vec();
        let e = BernoulliEnsemble::new(primes, probs.clone(), ProbabilityMode::Custom).unwrap();
        let d = exact_distribution(&e, 4).unwrap();
        prop_assert!((d.pmf_total() - 1.0).abs() < 1e-12);
        prop_assert!(d.pmf.iter().all(|&m| m >= -1e-15));
        let mean: f64 = probs.iter().sum();
        prop_assert!((d.raw_moments[1] - mean).abs() <= 1e-10 * mean.max(1.0));
        prop_assert!(d.variance >= 0.0);
    }

    #[test]
    fn accumulator_merge_matches_single_pass(values in prop::collection::vec((0u8..12, 1u32..500), 2..40), split in 0usize..40) {
        let split = split.min(values.len());
        let mut whole = MomentAccumulator::new(6);
        let mut left = MomentAccumulator::new(6);
        let mut right = MomentAccumulator::new(6);
        for (i, &(v, c)) in values.iter().enumerate() {
            whole.add_count(v as f64, c as u128);
            if i < split { left.add_count(v as f64, c as u128) } else { right.add_count(v as f64, c as u128) }
        }
        let merged = left.merge(&right);
        let a = whole.moments_about(Dd::new(3.0));
        let b = merged.moments_about(Dd::new(3.0));
        for (x, y) in a.iter().zip(&b) {
            let (x, y) = (x.to_f64(), y.to_f64());
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{} vs {}", x, y);
        }
    }
}
