mod common;

use common::{c, random_tensor, random_vector, rng};
use mlcalc::appell::{appell_coeffs, AppellSystem, ChaosVector, Role};
use mlcalc::special::{mittag_leffler, rgamma_real};
use mlcalc::tensor::multiindex::{binomial, factorial};
use mlcalc::MLParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn random_chaos(seed: u64, p: MLParams, dim: usize, trunc: usize, role: Role) -> ChaosVector {
    let mut r = rng(seed);
    let kernels = (0..=trunc).map(|n| random_tensor(&mut r, dim, n, 1.0)).collect();
    ChaosVector::new(p, dim, role, kernels).unwrap()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cauchy_product_with_series_is_unit(beta in 0.1f64..=1.0, n in 1usize..=20) {
        let b = appell_coeffs(&MLParams::new(beta).unwrap(), n).unwrap();
        let conv: f64 = (0..=n).map(|k| b.b[n - k] * rgamma_real(beta * k as f64 + 1.0)).sum();
        let scale: f64 = (0..=n).map(|k| (b.b[n - k] * rgamma_real(beta * k as f64 + 1.0)).abs()).sum();
        prop_assert!(conv.abs() <= 1e-13 * scale.max(1.0), "n={n}: {conv}");
    }

    #[test]
    fn basis_round_trip(seed: u64, beta in 0.2f64..=1.0, dim in 1usize..=3, trunc in 0usize..=6) {
        let p = MLParams::new(beta).unwrap();
        let v = random_chaos(seed, p, dim, trunc, Role::Test);
        let sys = AppellSystem::shared(p, dim, trunc).unwrap();
        let back = sys.monomial_to_p(&sys.p_to_monomial(&v).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&v).unwrap() <= 1e-10 * v.max_abs().max(1.0));
    }

    #[test]
    fn shift_identity(seed: u64, beta in 0.2f64..=1.0, dim in 1usize..=3, n in 0usize..=6) {
        let p = MLParams::new(beta).unwrap();
        let sys = AppellSystem::shared(p, dim, n).unwrap();
        let mut r = rng(seed);
        let (x, y, theta) = (random_vector(&mut r, dim, 1.0), random_vector(&mut r, dim, 1.0), random_vector(&mut r, dim, 1.0));
        let xy: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = sys.kernel(&xy, n).unwrap().pair_power(&theta);
        let yt = dot(&y, &theta);
        let rhs: Complex64 = (0..=n)
            .map(|k| sys.kernel(&x, k).unwrap().pair_power(&theta) * yt.powu((n - k) as u32) * binomial(n, k))
            .sum();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn generating_function(seed: u64, beta in 0.3f64..=1.0, dim in 1usize..=3) {
        let p = MLParams::new(beta).unwrap();
        let trunc = 24;
        let sys = AppellSystem::shared(p, dim, trunc).unwrap();
        let mut r = rng(seed);
        let omega = random_vector(&mut r, dim, 0.5);
        let theta = random_vector(&mut r, dim, 0.1);
        let series: Complex64 = (0..=trunc).map(|n| sys.kernel(&omega, n).unwrap().pair_power(&theta) / factorial(n)).sum();
        let want = dot(&omega, &theta).exp() / mittag_leffler(&p, dot(&theta, &theta) * 0.5).unwrap();
        prop_assert!((series - want).norm() <= 1e-12 * want.norm(), "{series} vs {want}");
    }

    #[test]
    fn embedding_represents_l2_pairing(seed: u64, beta in 0.3f64..=1.0, dim in 1usize..=2, trunc in 0usize..=4) {
        let p = MLParams::new(beta).unwrap();
        let f = random_chaos(seed, p, dim, trunc, Role::Test);
        let g = random_chaos(seed ^ 0x5a5a, p, dim, trunc, Role::Test);
        let sys = AppellSystem::shared(p, dim, trunc).unwrap();
        let via = mlcalc::appell::dual_pair(&sys.embed(&f).unwrap(), &g).unwrap();
        let direct = sys.l2_bilinear(&f, &g).unwrap();
        prop_assert!((via - direct).norm() <= 1e-9 * direct.norm().max(1.0), "{via} vs {direct}");
    }
}

#[test]
fn gaussian_coefficients() {
    let b = appell_coeffs(&MLParams::new(1.0).unwrap(), 12).unwrap();
    for (n, v) in b.b.iter().enumerate() {
        let want = if n % 2 == 0 { 1.0 } else { -1.0 } / factorial(n);
        assert!((v - want).abs() <= 1e-15 * want.abs(), "b_{n}");
    }
}

#[test]
fn constant_has_unit_mean() {
    let p = MLParams::new(0.5).unwrap();
    let one = ChaosVector::constant(p, 2, Role::Test, c(1.0, 0.0));
    let sys = AppellSystem::shared(p, 2, 0).unwrap();
    assert!((sys.l2_bilinear(&one, &one).unwrap() - 1.0).norm() < 1e-15);
}
