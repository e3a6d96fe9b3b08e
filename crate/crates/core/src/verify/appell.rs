use std::f64::consts::PI;

use num_complex::Complex64;

use super::{guarded, guarded_many, random_tensor, random_vector, real, rng, Check, VerifyConfig};
use crate::appell::{appell_coeffs, moment_kernel, AppellSystem, ChaosVector, Role};
use crate::error::Result;
use crate::special::{rgamma_real, MLParams};
use crate::tensor::multiindex::{binomial, factorial};
use crate::tensor::{sym_product, weighted_norm, SymTensor, WeightProfile};
use crate::transforms::{exp_pairing, exp_vector};

pub(super) fn checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let mut betas = vec![cfg.beta];
    for b in [0.25, 0.5, 0.75, 1.0] {
        if !betas.contains(&b) {
            betas.push(b);
        }
    }
    let r = "b_0 = 1, b_n = -Σ_{k=1}^n b_{n-k} / Γ(βk+1)";
    for beta in betas {
        let name = format!("b_recursion_b{beta}");
        out.push(guarded(&name, r, || {
            let c = appell_coeffs(&MLParams::new(beta)?, 20)?;
            let worst = (1..=20).map(|n| c.recursion_residual(n)).fold(0.0, f64::max);
            Ok(Check::small(name.clone(), r, worst, 1e-12))
        }));
    }
    let r = "β = 1: b_n = (-1)^n / n!";
    out.push(guarded("b_gaussian", r, || {
        let c = appell_coeffs(&MLParams::new(1.0)?, 20)?;
        let worst = (0..=20)
            .map(|n| {
                let want = if n % 2 == 0 { 1.0 } else { -1.0 } / factorial(n);
                (c.b[n] - want).abs() / want.abs()
            })
            .fold(0.0, f64::max);
        Ok(Check::small("b_gaussian", r, worst, 1e-13))
    }));
    out.extend(hermite());
    out.extend(moments(cfg));
    out.extend(shift_identity(cfg));
    out.extend(round_trip(cfg));
    out.push(mean_zero(cfg));
    out.extend(biorthogonality(cfg));
    out.push(growth_diagnostic(cfg));
    out
}

fn hermite_values(n_max: usize, x: f64) -> Vec<f64> {
    let mut h = vec![1.0, x];
    for n in 1..n_max {
        h.push(x * h[n] - n as f64 * h[n - 1]);
    }
    h.truncate(n_max + 1);
    h
}

fn hermite() -> Vec<Check> {
    let r = "β = 1, d = 1: ⟨P_n(x), 1⟩ = He_n(x)";
    let mut out = vec![guarded("hermite_kernels", r, || {
        let sys = AppellSystem::shared(MLParams::new(1.0)?, 1, 8)?;
        let mut worst: f64 = 0.0;
        for x in [-2.0, 0.0, 2.0] {
            let he = hermite_values(8, x);
            for (n, want) in he.iter().enumerate() {
                let got = sys.kernel(&[real(x)], n)?.pair_power(&[real(1.0)]);
                worst = worst.max((got - want).norm() / want.abs().max(1.0));
            }
        }
        Ok(Check::small("hermite_kernels", r, worst, 1e-12))
    })];
    let r = "β = 1, d = 1: x⁴ = He_4 + 6 He_2 + 3";
    out.push(guarded("hermite_expansion", r, || {
        let p = MLParams::new(1.0)?;
        let mono = ChaosVector::single(p, Role::Monomial, SymTensor::from_fn(1, 4, |_| real(1.0)));
        let got = AppellSystem::shared(p, 1, 4)?.monomial_to_p(&mono)?;
        let want = [3.0, 0.0, 6.0, 0.0, 1.0];
        let worst = (0..=4).map(|n| (got.kernel(n).get(&vec![0; n]) - want[n]).norm()).fold(0.0, f64::max);
        Ok(Check::small("hermite_expansion", r, worst, 1e-12))
    }));
    out
}

fn moments(cfg: &VerifyConfig) -> Vec<Check> {
    let r = "∫⟨ω,φ⟩^{2m} dμ_β = (2m)! / (2^m Γ(βm+1)) ⟨φ,φ⟩^m, odd moments vanish";
    guarded_many("moment_kernels", r, || {
        let p = cfg.params()?;
        let phi = random_vector(&mut rng(cfg, 1), cfg.dim, 1.0, false);
        let q: Complex64 = phi.iter().map(|x| x * x).sum();
        let mut out = Vec::new();
        for n in 1..=6 {
            let got = moment_kernel(&p, n, cfg.dim)?.pair_power(&phi);
            let want = if n % 2 == 1 {
                Complex64::default()
            } else {
                let m = n / 2;
                q.powu(m as u32) * factorial(n) / 2f64.powi(m as i32) * rgamma_real(cfg.beta * m as f64 + 1.0)
            };
            out.push(Check::close(format!("moment_{n}"), r, got, want, 1e-12 * want.norm().max(1.0)));
        }
        Ok(out)
    })
}

fn shift_identity(cfg: &VerifyConfig) -> Vec<Check> {
    let r = "P_n(x+y) = Σ_k C(n,k) P_k(x) ⊗̂ y^{⊗(n-k)}";
    (1..=3)
        .map(|d| {
            let name = format!("shift_identity_d{d}");
            guarded(&name, r, || {
                let sys = AppellSystem::shared(cfg.params()?, d, 6)?;
                let mut g = rng(cfg, 10 + d as u64);
                let mut worst: f64 = 0.0;
                for _ in 0..50 {
                    let x = random_vector(&mut g, d, 1.0, false);
                    let y = random_vector(&mut g, d, 1.0, false);
                    let xy: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                    for n in 0..=6 {
                        let mut rhs = SymTensor::zeros(d, n);
                        for k in 0..=n {
                            let t = sym_product(&sys.kernel(&x, k)?, &SymTensor::power(&y, n - k))?;
                            rhs.axpy(real(binomial(n, k)), &t)?;
                        }
                        worst = worst.max(sys.kernel(&xy, n)?.max_abs_diff(&rhs)?);
                    }
                }
                Ok(Check::small(name.clone(), r, worst, 1e-9))
            })
        })
        .collect()
}

fn round_trip(cfg: &VerifyConfig) -> Vec<Check> {
    let r = "p_to_monomial and monomial_to_p are mutually inverse";
    (1..=3)
        .map(|d| {
            let name = format!("basis_round_trip_d{d}");
            guarded(&name, r, || {
                let p = cfg.params()?;
                let sys = AppellSystem::shared(p, d, 8)?;
                let mut g = rng(cfg, 20 + d as u64);
                let mut worst: f64 = 0.0;
                for _ in 0..5 {
                    let kernels: Vec<SymTensor> = (0..=8).map(|n| random_tensor(&mut g, d, n, 1.0)).collect();
                    let v = ChaosVector::new(p, d, Role::Test, kernels.clone())?;
                    worst = worst.max(sys.monomial_to_p(&sys.p_to_monomial(&v)?)?.max_abs_diff(&v)?);
                    let m = ChaosVector::new(p, d, Role::Monomial, kernels)?;
                    worst = worst.max(sys.p_to_monomial(&sys.monomial_to_p(&m)?)?.max_abs_diff(&m)?);
                }
                Ok(Check::small(name.clone(), r, worst, 1e-10))
            })
        })
        .collect()
}

fn mean_zero(cfg: &VerifyConfig) -> Check {
    let r = "E⟨P_m(·), φ^{(m)}⟩ = 0 for m ≥ 1";
    guarded("appell_mean_zero", r, || {
        let p = cfg.params()?;
        let sys = AppellSystem::shared(p, cfg.dim, 6)?;
        let one = ChaosVector::constant(p, cfg.dim, Role::Test, real(1.0));
        let mut g = rng(cfg, 30);
        let mut worst: f64 = 0.0;
        for m in 1..=6 {
            let f = ChaosVector::single(p, Role::Test, random_tensor(&mut g, cfg.dim, m, 1.0));
            worst = worst.max(sys.l2_pairing(&f, &one)?.norm());
        }
        Ok(Check::small("appell_mean_zero", r, worst, 1e-10))
    })
}

/// Taylor coefficient `[λ^m] f(λ)` from samples on the unit circle.
fn taylor_coefficient(m: usize, f: impl Fn(Complex64) -> Result<Complex64>) -> Result<Complex64> {
    const NODES: usize = 32;
    let mut s = Complex64::default();
    for j in 0..NODES {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / NODES as f64);
        s += f(z)? * z.powu(m as u32).conj();
    }
    Ok(s / NODES as f64)
}

/// `⟨⟨Q_n(Φ), ⟨P_m, θ⟩⟩⟩ = δ_{nm} n! ⟨Φ, θ⟩`, checked twice: directly on
/// the dual pairing, and through the L² pairing against exponentials, whose
/// Q-expansion is read off the closed-form S-transform `Î(ξ, ·)`.
fn biorthogonality(cfg: &VerifyConfig) -> Vec<Check> {
    let d = cfg.dim.min(3);
    let r = "⟨⟨Q_n(Φ), ⟨P_m, θ⟩⟩⟩ = δ_{nm} n! ⟨Φ, θ⟩";
    let mut out = vec![guarded("biorthogonality_dual", r, || {
        let p = cfg.params()?;
        let mut g = rng(cfg, 40);
        let mut worst: f64 = 0.0;
        for n in 0..=5 {
            let big = random_tensor(&mut g, d, n, 1.0);
            let q_n = ChaosVector::single(p, Role::Distribution, big.clone());
            for m in 0..=5 {
                let theta = random_tensor(&mut g, d, m, 1.0);
                let got = crate::appell::dual_pair(&q_n, &ChaosVector::single(p, Role::Test, theta.clone()))?;
                let want = if n == m { big.pairing(&theta)? * factorial(n) } else { Complex64::default() };
                worst = worst.max((got - want).norm() / want.norm().max(1.0));
            }
        }
        Ok(Check::small("biorthogonality_dual", r, worst, 1e-8))
    })];
    let r = "E[e_{μβ}(·;ξ) ⟨P_m, η^{⊗m}⟩] = m! [λ^m] Î(ξ, λη)";
    out.push(guarded("biorthogonality_l2", r, || {
        const N: usize = 16;
        let p = cfg.params()?;
        let sys = AppellSystem::shared(p, d, N)?;
        let mut g = rng(cfg, 41);
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let xi = random_vector(&mut g, d, 0.4 / (d as f64).sqrt(), false);
            let eta = random_vector(&mut g, d, 0.4 / (d as f64).sqrt(), false);
            let e = exp_vector(&p, &xi, N)?;
            for m in 0..=5 {
                let pm = ChaosVector::single(p, Role::Test, SymTensor::power(&eta, m));
                let lhs = sys.l2_bilinear(&e.body, &pm)?;
                let coef = taylor_coefficient(m, |lam| {
                    let v: Vec<Complex64> = eta.iter().map(|x| x * lam).collect();
                    exp_pairing(&p, &xi, &v)
                })?;
                let rhs = coef * factorial(m);
                worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
            }
        }
        Ok(Check::small("biorthogonality_l2", r, worst, 1e-8))
    }));
    out
}

/// Smallest `C` with `|P_n(ω)|_{-1} ≤ C n! ε^{-n} e^{ε|ω|_{-1}}` over random ω.
fn growth_diagnostic(cfg: &VerifyConfig) -> Check {
    let r = "|P_n(ω)|_{-p} ≤ C n! ε^{-n} e^{ε|ω|_{-p}}";
    guarded("appell_growth_constant", r, || {
        let eps: f64 = 0.5;
        let w = WeightProfile::new(-1);
        let sys = AppellSystem::shared(cfg.params()?, cfg.dim, cfg.trunc)?;
        let mut g = rng(cfg, 50);
        let mut c: f64 = 0.0;
        for _ in 0..20 {
            let omega = random_vector(&mut g, cfg.dim, 3.0, false);
            let wn = weighted_norm(&SymTensor::from_vector(&omega), w);
            for n in 0..=cfg.trunc {
                let pn = weighted_norm(&sys.kernel(&omega, n)?, w);
                c = c.max(pn * eps.powi(n as i32) / factorial(n) / (eps * wn).exp());
            }
        }
        Ok(Check::reported("appell_growth_constant", r, c, eps)
            .with_note("fitted constant C (lhs) at ε (rhs), p = 1"))
    })
}
