use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::cumulants::{kappa_letters, recompose};
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Word};
use crate::grassmann::Dual;
use crate::state::{MomentSource, State};

/// The free product of several states, evaluated on demand: a word's moment
/// is the sum over NC of products of component cumulants, with every mixed
/// cumulant set to zero.
pub struct FreeProduct {
    alphabet: Arc<Alphabet>,
    degree: usize,
    inputs: Vec<Arc<dyn MomentSource>>,
    owner: Vec<(usize, usize)>,
    cumulants: Mutex<HashMap<Vec<usize>, Dual>>,
    moments: Mutex<HashMap<Word, Dual>>,
}

impl FreeProduct {
    pub fn new(inputs: Vec<Arc<dyn MomentSource>>, degree: usize) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::IncompleteInput("free product of no states".into()));
        }
        let mut gens = Vec::new();
        let mut owner = Vec::new();
        for (i, s) in inputs.iter().enumerate() {
            for (j, g) in s.alphabet().generators().iter().enumerate() {
                gens.push(g.clone());
                owner.push((i, j));
            }
        }
        let alphabet = Arc::new(Alphabet::new(gens)?);
        Ok(FreeProduct {
            alphabet,
            degree,
            inputs,
            owner,
            cumulants: Mutex::new(HashMap::new()),
            moments: Mutex::new(HashMap::new()),
        })
    }

    /// Index of the input that owns each generator.
    pub fn group_labels(&self) -> Vec<usize> {
        self.owner.iter().map(|&(i, _)| i).collect()
    }

    /// Letter of the joint alphabet for generator `local` of input `input`.
    pub fn letter(&self, input: usize, local: usize) -> usize {
        self.owner.iter().position(|&o| o == (input, local)).expect("generator exists")
    }

    fn group_cumulant(&self, letters: &[usize]) -> Result<Dual> {
        let g = self.owner[letters[0]].0;
        if letters.iter().any(|&l| self.owner[l].0 != g) {
            return Ok(Dual::ZERO);
        }
        if let Some(v) = self.cumulants.lock().expect("memo poisoned").get(letters) {
            return Ok(*v);
        }
        let local: Vec<usize> = letters.iter().map(|&l| self.owner[l].1).collect();
        let v = kappa_letters(self.inputs[g].as_ref(), &local)?;
        self.cumulants.lock().expect("memo poisoned").insert(letters.to_vec(), v);
        Ok(v)
    }
}

impl MomentSource for FreeProduct {
    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn degree(&self) -> usize {
        self.degree
    }

    fn word_moment(&self, w: &Word) -> Result<Dual> {
        if w.len() > self.degree {
            return Err(Error::DegreeOverflow { len: w.len(), degree: self.degree });
        }
        if w.is_empty() {
            return Ok(Dual::ONE);
        }
        if let Some(v) = self.moments.lock().expect("memo poisoned").get(w) {
            return Ok(*v);
        }
        let v = recompose(w.letters(), |t| self.group_cumulant(t))?;
        self.moments.lock().expect("memo poisoned").insert(w.clone(), v);
        Ok(v)
    }
}

/// Tabulated free product up to the smallest input degree.
pub fn free_product(states: &[State]) -> Result<State> {
    let degree = states.iter().map(MomentSource::degree).min().unwrap_or(0);
    let inputs: Vec<Arc<dyn MomentSource>> =
        states.iter().map(|s| Arc::new(s.clone()) as Arc<dyn MomentSource>).collect();
    let model = FreeProduct::new(inputs, degree)?;
    State::tabulate(&model, degree)
}
