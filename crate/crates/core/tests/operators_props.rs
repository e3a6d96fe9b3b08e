mod common;

use common::{c, random_tensor, random_vector, rng};
use mlcalc::appell::{dual_pair, AppellSystem, ChaosVector, Role};
use mlcalc::operators::{creation_along, exp_gateaux, gateaux, symbol, translate, OperatorKind, OperatorRep};
use mlcalc::MLParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn random_chaos(seed: u64, p: MLParams, dim: usize, trunc: usize) -> ChaosVector {
    let mut r = rng(seed);
    let kernels = (0..=trunc).map(|n| random_tensor(&mut r, dim, n, 1.0)).collect();
    ChaosVector::new(p, dim, Role::Test, kernels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn translation_is_exponential_of_gateaux(seed: u64, dim in 1usize..=3, trunc in 0usize..=6) {
        let p = MLParams::new(0.5).unwrap();
        let phi = random_chaos(seed, p, dim, trunc);
        let y = random_vector(&mut rng(!seed), dim, 1.0);
        let a = translate(&y, &phi).unwrap();
        let b = exp_gateaux(&y, &phi, trunc).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-10 * a.max_abs().max(1.0));
    }

    #[test]
    fn translation_group(seed: u64, dim in 1usize..=3, trunc in 0usize..=5) {
        let p = MLParams::new(0.75).unwrap();
        let phi = random_chaos(seed, p, dim, trunc);
        let mut r = rng(!seed);
        let (y, z) = (random_vector(&mut r, dim, 1.0), random_vector(&mut r, dim, 1.0));
        let yz: Vec<Complex64> = y.iter().zip(&z).map(|(a, b)| a + b).collect();
        let twice = translate(&y, &translate(&z, &phi).unwrap()).unwrap();
        let once = translate(&yz, &phi).unwrap();
        prop_assert!(twice.max_abs_diff(&once).unwrap() <= 1e-10 * once.max_abs().max(1.0));
    }

    #[test]
    fn gateaux_is_linear_in_direction(seed: u64, dim in 1usize..=3, trunc in 0usize..=5) {
        let p = MLParams::new(0.5).unwrap();
        let phi = random_chaos(seed, p, dim, trunc);
        let mut r = rng(!seed);
        let (y, z) = (random_vector(&mut r, dim, 1.0), random_vector(&mut r, dim, 1.0));
        let w = c(0.3, -1.2);
        let mix: Vec<Complex64> = y.iter().zip(&z).map(|(a, b)| a + w * b).collect();
        let lhs = gateaux(&mix, &phi).unwrap();
        let rhs = gateaux(&y, &phi).unwrap().axpy(w, &gateaux(&z, &phi).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn creation_is_dual_to_gateaux(seed: u64, dim in 1usize..=2, trunc in 0usize..=4) {
        let p = MLParams::new(0.5).unwrap();
        let phi = random_chaos(seed, p, dim, trunc);
        let psi = random_chaos(seed ^ 77, p, dim, trunc + 1);
        let y = random_vector(&mut rng(!seed), dim, 1.0);
        let lhs = dual_pair(&creation_along(&y, &phi).unwrap(), &psi).unwrap();
        let sys = AppellSystem::shared(p, dim, trunc + 1).unwrap();
        let rhs = dual_pair(&sys.embed(&phi).unwrap(), &gateaux(&y, &psi).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }
}

#[test]
fn gateaux_symbol_matches_closed_form() {
    let p = MLParams::new(0.5).unwrap();
    let psi = vec![c(0.7, 0.1), c(-0.4, 0.0)];
    let op = OperatorRep::new(OperatorKind::Gateaux(psi), p, 2).unwrap();
    let mut r = rng(3);
    for _ in 0..10 {
        let xi = random_vector(&mut r, 2, 0.15);
        let eta = random_vector(&mut r, 2, 0.15);
        let s = symbol(&op, &xi, &eta, 14).unwrap();
        let want = s.closed_form.unwrap();
        assert!((s.path_a - want).norm() < 1e-8, "{} vs {want}", s.path_a);
        assert!((s.path_b - want).norm() < 1e-8, "{} vs {want}", s.path_b);
    }
}

#[test]
fn operator_rejects_wrong_dimension() {
    let p = MLParams::new(0.5).unwrap();
    assert!(OperatorRep::new(OperatorKind::Gateaux(vec![c(1.0, 0.0)]), p, 2).is_err());
}
