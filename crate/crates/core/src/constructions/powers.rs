use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grassmann::Dual;
use crate::nc;
use crate::state::{CumulantSpec, State};

/// The `⊞`-power `μ^{⊞(1+t)}`: every cumulant scaled by `t + 1`.
pub fn convolution_power(spec: &CumulantSpec, t: f64) -> Result<CumulantSpec> {
    if t <= -1.0 {
        return Err(Error::InvalidParameter(format!("t = {t} must exceed -1")));
    }
    Ok(spec.map(|_, v| v * (t + 1.0)))
}

/// Body `Σ_π κ_π` and soul `Σ_π |π|·κ_π`, the derivative at `t = 0` of the
/// moments of the powers. Only the bodies of the spec are used.
pub fn inf_limit_of_powers(spec: &CumulantSpec) -> Result<State> {
    let alphabet = spec.alphabet().clone();
    let mut entries = Vec::new();
    for w in alphabet.words_up_to(spec.degree()) {
        if w.is_empty() {
            continue;
        }
        let letters = w.letters();
        let mut body = Complex64::new(0.0, 0.0);
        let mut soul = Complex64::new(0.0, 0.0);
        for p in nc::enumerate_nc(letters.len())? {
            let mut term = Complex64::new(1.0, 0.0);
            for b in p.blocks() {
                let sub: Vec<usize> = b.iter().map(|&i| letters[i - 1]).collect();
                term *= spec.get(&sub)?.body;
            }
            body += term;
            soul += term * p.num_blocks() as f64;
        }
        entries.push((w, Dual::new(body, soul)));
    }
    State::new(alphabet, spec.degree(), entries)
}
