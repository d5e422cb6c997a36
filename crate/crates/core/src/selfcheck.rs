//! Exact-identity suite: closed-form Dirichlet kernels, the Kaczmarz
//! reindexing, orthonormality, the transform against direct inner products,
//! and the summation-by-parts identities.
//!
//! Every item reports rather than panics, so callers can print the whole
//! suite and decide on an exit status.

use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::{DyadicInterval, DyadicPoint, GridFunction, Resolution};
use crate::error::Result;
use crate::scalar::close;
use crate::signal::random_grid;
use crate::summability::{
    abel_kernel, abel_normalizer, dirichlet_kernel, k_plus_one, make_weights,
    weighted_dirichlet_sum, FamilyKind, MeanFamily, WeightSequence,
};
use crate::systems::{fourier_coeffs, kaczmarz, kaczmarz_index_map, sample, walsh, SystemKind};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckItem {
    fn new(name: impl Into<String>, outcome: Result<Option<String>>) -> Self {
        let name = name.into();
        match outcome {
            Ok(None) => CheckItem {
                name,
                passed: true,
                detail: "ok".into(),
            },
            Ok(Some(detail)) => CheckItem {
                name,
                passed: false,
                detail,
            },
            Err(e) => CheckItem {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

/// `D_{2^n} = 2^n 1_{I_n}` with zero tolerance, `n <= N`.
pub fn dirichlet_closed_form(n_bits: u32) -> Result<Option<String>> {
    let r = Resolution::new(n_bits)?;
    for system in SystemKind::ALL {
        for n in 0..=n_bits {
            let d = dirichlet_kernel::<f64>(1 << n, system, r)?;
            let expected =
                GridFunction::<f64>::indicator(r, DyadicInterval::at_origin(n))?.scale((1u64 << n) as f64);
            if let Some(x) = (0..r.size()).find(|&x| d.values()[x] != expected.values()[x]) {
                return Ok(Some(format!(
                    "{system}: D_{} differs at cell {x}: {} vs {}",
                    1 << n,
                    d.values()[x],
                    expected.values()[x]
                )));
            }
        }
    }
    Ok(None)
}

/// `ρ(ρ(n)) = n` and `ρ` preserves each block `[2^s, 2^{s+1})`.
pub fn rho_involution(bound: usize) -> Result<Option<String>> {
    let bad = (0..bound).into_par_iter().find_first(|&n| {
        let m = kaczmarz_index_map(n);
        let same_block = n == 0 || m.ilog2() == n.ilog2();
        kaczmarz_index_map(m) != n || !same_block
    });
    Ok(bad.map(|n| format!("rho fails at n = {n}")))
}

/// `κ_n(x) = w_{ρ(n)}(x)` from the literal Rademacher products.
pub fn kaczmarz_equivalence(n_bits: u32) -> Result<Option<String>> {
    let r = Resolution::new(n_bits)?;
    for n in 0..r.size() {
        for cell in 0..r.size() {
            let x = DyadicPoint::new(r, cell)?;
            if kaczmarz(n, x)? != walsh(kaczmarz_index_map(n), x)? {
                return Ok(Some(format!("kappa_{n} differs at cell {cell}")));
            }
        }
    }
    Ok(None)
}

/// `∫ ψ_m ψ_n = δ_{mn}` for both systems.
pub fn orthonormality(n_bits: u32) -> Result<Option<String>> {
    let r = Resolution::new(n_bits)?;
    for system in SystemKind::ALL {
        let funcs = (0..r.size())
            .map(|n| sample::<f64>(system, n, r))
            .collect::<Result<Vec<_>>>()?;
        for m in 0..r.size() {
            for n in 0..r.size() {
                let ip = funcs[m].zip_with(&funcs[n], |a, b| a * b)?.integrate();
                let expected = if m == n { 1.0 } else { 0.0 };
                if ip != expected {
                    return Ok(Some(format!("{system}: <psi_{m}, psi_{n}> = {ip}")));
                }
            }
        }
    }
    Ok(None)
}

/// Transform against `∫ f ψ_n` at `N = oracle_bits`, then Parseval on
/// `trials` seeded random inputs at `N = parseval_bits`.
pub fn transform(oracle_bits: u32, parseval_bits: u32, trials: u64) -> Result<Option<String>> {
    let r = Resolution::new(oracle_bits)?;
    let f = random_grid::<f64>(2024, oracle_bits, r)?;
    for system in SystemKind::ALL {
        let fast = fourier_coeffs(&f, system);
        for n in 0..r.size() {
            let direct = f.zip_with(&sample(system, n, r)?, |a, b| a * b)?.integrate();
            if !close(fast.coeff(n), direct, 1e-12) {
                return Ok(Some(format!(
                    "{system}: coefficient {n} is {} vs direct {direct}",
                    fast.coeff(n)
                )));
            }
        }
    }
    let r = Resolution::new(parseval_bits)?;
    let bad = (0..trials)
        .into_par_iter()
        .map(|seed| -> Result<Option<String>> {
            let f = random_grid::<f64>(seed, parseval_bits, r)?;
            let energy = f.map(|v| v * v).integrate();
            for system in SystemKind::ALL {
                let e = fourier_coeffs(&f, system).energy();
                if !close(e, energy, 1e-10) {
                    return Ok(Some(format!("{system}: Parseval fails for seed {seed}")));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(bad.into_iter().flatten().next())
}

/// Weight sequences the identity checks run over.
pub fn identity_families(horizon: usize) -> Result<Vec<WeightSequence<f64>>> {
    let named = [
        MeanFamily::fejer(),
        MeanFamily::riesz(),
        MeanFamily::new(FamilyKind::Cesaro(0.5))?,
        MeanFamily::new(FamilyKind::PowerV(0.7))?,
        MeanFamily::new(FamilyKind::LogB { alpha: 1.0, beta: 1 })?,
    ];
    let mut out = named
        .iter()
        .map(|f| make_weights(f, horizon))
        .collect::<Result<Vec<_>>>()?;
    out.push(k_plus_one(horizon));
    Ok(out)
}

/// `Q_n = Σ_{j=0}^{n-2} (q_j - q_{j+1}) j + q_{n-1} (n-1)` for `n <= n_max`.
pub fn abel_normalizer_identity(w: &WeightSequence<f64>, n_max: usize) -> Result<Option<String>> {
    for n in 1..=n_max {
        let lhs = w.prefix_sum(n)?;
        let rhs = abel_normalizer(w, n)?;
        if !close(lhs, rhs, 1e-12) {
            return Ok(Some(format!("n = {n}: Q_n = {lhs}, Abel sum = {rhs}")));
        }
    }
    Ok(None)
}

/// `Q_n F_n = Σ_j (q_j - q_{j+1}) j K_j + q_{n-1} (n-1) K_{n-1}` pointwise.
pub fn abel_kernel_identity(
    w: &WeightSequence<f64>,
    n_max: usize,
    n_bits: u32,
) -> Result<Option<String>> {
    let r = Resolution::new(n_bits)?;
    for system in SystemKind::ALL {
        for n in 1..=n_max {
            let lhs = weighted_dirichlet_sum(w, n, system, r)?;
            let rhs = abel_kernel(w, n, system, r)?;
            for x in 0..r.size() {
                if !close(lhs.values()[x], rhs.values()[x], 1e-10) {
                    return Ok(Some(format!(
                        "{system}, n = {n}, cell {x}: {} vs {}",
                        lhs.values()[x],
                        rhs.values()[x]
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// The full suite at its standard sizes.
pub fn run_suite() -> Vec<CheckItem> {
    type Job = Box<dyn Fn() -> Vec<CheckItem> + Send + Sync>;
    let jobs: Vec<Job> = vec![
        Box::new(|| vec![CheckItem::new("dirichlet closed form (N=10)", dirichlet_closed_form(10))]),
        Box::new(|| vec![CheckItem::new("rho involution (n < 2^16)", rho_involution(1 << 16))]),
        Box::new(|| vec![CheckItem::new("kaczmarz = walsh o rho (N=8)", kaczmarz_equivalence(8))]),
        Box::new(|| vec![CheckItem::new("orthonormality (N=6)", orthonormality(6))]),
        Box::new(|| vec![CheckItem::new("transform oracle (N=6) and parseval (N=10)", transform(6, 10, 100))]),
        Box::new(|| abel_items(128, 7)),
    ];
    jobs.par_iter().flat_map(|job| job()).collect()
}

fn abel_items(n_max: usize, n_bits: u32) -> Vec<CheckItem> {
    let families = match identity_families(n_max + 2) {
        Ok(f) => f,
        Err(e) => return vec![CheckItem::new("abel identities", Err(e))],
    };
    families
        .par_iter()
        .flat_map_iter(|w| {
            [
                CheckItem::new(
                    format!("abel normalizer [{}] (n <= {n_max})", w.label()),
                    abel_normalizer_identity(w, n_max),
                ),
                CheckItem::new(
                    format!("abel kernel [{}] (n <= {n_max}, N={n_bits})", w.label()),
                    abel_kernel_identity(w, n_max, n_bits),
                ),
            ]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instances_pass() {
        assert_eq!(dirichlet_closed_form(5).unwrap(), None);
        assert_eq!(rho_involution(1 << 10).unwrap(), None);
        assert_eq!(kaczmarz_equivalence(5).unwrap(), None);
        assert_eq!(orthonormality(4).unwrap(), None);
        assert_eq!(transform(4, 6, 5).unwrap(), None);
    }

    #[test]
    fn abel_normalizer_needs_zero_first_weight() {
        let fams = identity_families(34).unwrap();
        let riesz = fams.iter().find(|w| w.label() == "riesz").unwrap();
        assert_eq!(abel_normalizer_identity(riesz, 32).unwrap(), None);
        let fejer = fams.iter().find(|w| w.label() == "fejer").unwrap();
        let failure = abel_normalizer_identity(fejer, 32).unwrap().unwrap();
        assert!(failure.starts_with("n = 1"), "{failure}");
        for w in &fams {
            assert_eq!(abel_kernel_identity(w, 32, 5).unwrap(), None, "{}", w.label());
        }
    }

    #[test]
    fn items_report_errors() {
        let item = CheckItem::new("x", dirichlet_closed_form(0));
        assert!(!item.passed);
        assert!(item.detail.starts_with("error:"));
    }
}
