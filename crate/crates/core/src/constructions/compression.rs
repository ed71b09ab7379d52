use std::sync::Arc;

use num_complex::Complex64;

use crate::cumulants::kappa_letters;
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Generator, Poly, Relation, Word};
use crate::freeness::{check_inf_freeness, Groups};
use crate::grassmann::Dual;
use crate::state::{CumulantSpec, MomentSource, State};
use crate::DEFAULT_TOL;

use super::free_product::FreeProduct;

/// `φ(p)` and `φ′(p)` of the compressing idempotent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompressionParams {
    pub alpha: Complex64,
    pub alpha_prime: Complex64,
}

impl CompressionParams {
    pub fn real(alpha: f64, alpha_prime: f64) -> Self {
        CompressionParams { alpha: Complex64::new(alpha, 0.0), alpha_prime: Complex64::new(alpha_prime, 0.0) }
    }

    pub fn dual(&self) -> Dual {
        Dual::new(self.alpha, self.alpha_prime)
    }
}

fn compressed_alphabet(a: &Alphabet) -> Result<Arc<Alphabet>> {
    Ok(Arc::new(Alphabet::new(
        a.generators().iter().map(|g| Generator::new(g.name.clone(), Relation::Free)).collect(),
    )?))
}

/// Cumulants of `p xᵢ p` in the compressed space: `κ̃ₙ · α̃ⁿ⁻¹`, with
/// generator `i` of the result standing for `p xᵢ p`.
pub fn compress_cumulants(spec: &CumulantSpec, params: CompressionParams) -> Result<CumulantSpec> {
    let a = params.dual();
    a.inv()?;
    spec.map(|t, v| v * a.powi(t.len() - 1)).with_alphabet(compressed_alphabet(spec.alphabet())?)
}

/// Builds the compressed state directly: adjoins an idempotent `p` with
/// `φ̃(p) = α̃`, free from the input, and tabulates
/// `ψ̃(y_{i₁}⋯y_{iₘ}) = φ̃(p x_{i₁} p ⋯ p x_{iₘ} p) / α̃`.
pub fn compress_state_model(x_state: &State, params: CompressionParams, degree: usize) -> Result<State> {
    let a = params.dual();
    let a_inv = a.inv()?;
    let xa = x_state.alphabet();
    let p_name = (0..)
        .map(|i| if i == 0 { "p".to_string() } else { format!("p{i}") })
        .find(|n| xa.index_of(n).is_err())
        .expect("a fresh name exists");
    let p_alphabet = Arc::new(Alphabet::new(vec![Generator::new(p_name, Relation::Idempotent)])?);
    let p_state = State::new(p_alphabet, 1, [(Word::from_normal(vec![0]), a)])?;
    let joint = FreeProduct::new(
        vec![Arc::new(x_state.clone()) as Arc<dyn MomentSource>, Arc::new(p_state)],
        2 * degree + 1,
    )?;
    let p = joint.letter(1, 0);
    let ya = compressed_alphabet(xa)?;
    let mut entries = Vec::new();
    for w in ya.words_up_to(degree) {
        if w.is_empty() {
            continue;
        }
        let mut letters = vec![p];
        for &l in w.letters() {
            letters.push(joint.letter(0, l));
            letters.push(p);
        }
        let m = joint.word_moment(&joint.alphabet().normalize(&letters))?;
        entries.push((w, m * a_inv));
    }
    State::new(ya, degree, entries)
}

fn mentions(p: &Poly, letter: usize) -> bool {
    p.terms().any(|(w, _)| w.letters().contains(&letter))
}

/// `κ̃ₙ(x a₁ x, …, x aₙ x) = κ̃₂(x,x)ⁿ · φ̃(a₁⋯aₙ)` for a standard
/// infinitesimally semicircular `x` infinitesimally free from the `aᵢ`.
pub fn xax_cumulants(joint: &dyn MomentSource, x: usize, tuple: &[Poly]) -> Result<Dual> {
    let alphabet = joint.alphabet();
    if x >= alphabet.len() {
        return Err(Error::UnknownGenerator(format!("index {x}")));
    }
    if tuple.iter().any(|a| mentions(a, x)) {
        return Err(Error::PreconditionViolated("arguments must not involve x".into()));
    }
    let k1 = kappa_letters(joint, &[x])?;
    let k2 = kappa_letters(joint, &[x, x])?;
    if k1.body.norm() > DEFAULT_TOL || (k2.body - 1.0).norm() > DEFAULT_TOL {
        return Err(Error::PreconditionViolated("x is not standard semicircular".into()));
    }
    let max_n = joint.degree().min(4);
    for n in 3..=max_n {
        if kappa_letters(joint, &vec![x; n])?.norm() > DEFAULT_TOL {
            return Err(Error::PreconditionViolated(format!("κ̃_{n}(x,…,x) is not zero")));
        }
    }
    let labels: Vec<usize> = (0..alphabet.len()).map(|l| usize::from(l != x)).collect();
    if alphabet.len() > 1 {
        let report = check_inf_freeness(joint, &Groups::new(labels)?, max_n, DEFAULT_TOL)?;
        if !report.pass {
            return Err(Error::PreconditionViolated("x is not infinitesimally free from the arguments".into()));
        }
    }
    let prod = Poly::product(alphabet, tuple.iter())?;
    Ok(k2.powi(tuple.len()) * joint.moment(&prod)?)
}
