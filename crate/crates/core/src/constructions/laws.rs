use std::sync::Arc;

use num_complex::Complex64;

use crate::cumulants::moments_from_cumulants;
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Relation, Word};
use crate::grassmann::Dual;
use crate::state::{CumulantSpec, MomentSource, State};

use super::free_product::FreeProduct;

fn single(name: &str, relation: Relation) -> Arc<Alphabet> {
    Arc::new(Alphabet::with_relation(&[name], relation).expect("one generator"))
}

/// Infinitesimal semicircular law in one generator `x`:
/// `κ̃₁ = ε·α′₁`, `κ̃₂ = 1 + ε·α′₂`, all higher cumulants zero.
pub fn semicircular_spec(a1p: f64, a2p: f64, degree: usize) -> Result<CumulantSpec> {
    let entries = (1..=degree).map(|n| {
        let v = match n {
            1 => Dual::real(0.0, a1p),
            2 => Dual::real(1.0, a2p),
            _ => Dual::ZERO,
        };
        (vec![0; n], v)
    });
    CumulantSpec::new(single("x", Relation::Free), degree, entries)
}

pub fn semicircular_state(a1p: f64, a2p: f64, degree: usize) -> Result<State> {
    moments_from_cumulants(&semicircular_spec(a1p, a2p, degree)?)
}

fn catalan(k: usize) -> f64 {
    (0..k).fold(1.0, |c, i| c * 2.0 * (2 * i + 1) as f64 / (i + 2) as f64)
}

/// `φ̃(xᵐ)` of the infinitesimal semicircular law: `C_k + ε·α′₂·k·C_k` for
/// `m = 2k`, and `ε·α′₁·(2k+1)·C_k` for `m = 2k+1`.
pub fn semicircular_moments(m: usize, a1p: f64, a2p: f64) -> Dual {
    let k = m / 2;
    let c = catalan(k);
    if m % 2 == 0 {
        Dual::real(c, a2p * k as f64 * c)
    } else {
        Dual::real(0.0, a1p * m as f64 * c)
    }
}

/// Infinitesimal free Poisson law: `κ̃ₙ = λ + ε(β′ + nγ′)`.
pub fn free_poisson_spec(lambda: f64, beta_p: f64, gamma_p: f64, degree: usize) -> Result<CumulantSpec> {
    let entries = (1..=degree).map(|n| (vec![0; n], Dual::real(lambda, beta_p + n as f64 * gamma_p)));
    CumulantSpec::new(single("x", Relation::Free), degree, entries)
}

/// `k` order-two unitaries, the free product of the states with
/// `φ̃(uᵢ) = ε·α′ᵢ`.
pub fn z2_state(k: usize, alpha_primes: &[f64], degree: usize) -> Result<State> {
    if alpha_primes.len() != k {
        return Err(Error::DimensionMismatch(format!("{} parameters for {k} generators", alpha_primes.len())));
    }
    let inputs = alpha_primes
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let alphabet = single(&format!("u{}", i + 1), Relation::Involution);
            let s = State::new(alphabet, 1, [(Word::from_normal(vec![0]), Dual::pure_soul(Complex64::new(a, 0.0)))])?;
            Ok(Arc::new(s) as Arc<dyn MomentSource>)
        })
        .collect::<Result<Vec<_>>>()?;
    State::tabulate(&FreeProduct::new(inputs, degree)?, degree)
}
