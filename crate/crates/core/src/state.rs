//! Truncated Grassmann-valued states and cumulant specifications.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::freealg::{same_alphabet, Alphabet, Poly, Word};
use crate::grassmann::Dual;

/// Anything that can evaluate `φ̃` on normalized words.
pub trait MomentSource: Send + Sync {
    fn alphabet(&self) -> &Arc<Alphabet>;
    /// Longest word length the source can evaluate.
    fn degree(&self) -> usize;
    fn word_moment(&self, w: &Word) -> Result<Dual>;

    /// Linear extension of [`Self::word_moment`].
    fn moment(&self, p: &Poly) -> Result<Dual> {
        if !same_alphabet(p.alphabet(), self.alphabet()) {
            return Err(Error::AlphabetMismatch);
        }
        let mut acc = Dual::ZERO;
        for (w, c) in p.terms() {
            acc += self.word_moment(w)? * *c;
        }
        Ok(acc)
    }
}

/// `φ̃` tabulated on every normalized word up to the truncation degree.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    alphabet: Arc<Alphabet>,
    degree: usize,
    table: BTreeMap<Word, Dual>,
}

impl State {
    /// Builds a state; the unit word is forced to `1 + ε0` and must not be
    /// given any other value.
    pub fn new(alphabet: Arc<Alphabet>, degree: usize, entries: impl IntoIterator<Item = (Word, Dual)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (w, v) in entries {
            let n = alphabet.normalize(w.letters());
            if n != w {
                return Err(Error::InvalidParameter(format!(
                    "word {} is not normalized",
                    alphabet.format_word(&w)
                )));
            }
            if w.len() > degree {
                return Err(Error::DegreeOverflow { len: w.len(), degree });
            }
            if w.is_empty() && v != Dual::ONE {
                return Err(Error::InvalidParameter("the unit word must have value 1".into()));
            }
            table.insert(w, v);
        }
        table.insert(Word::empty(), Dual::ONE);
        Ok(State { alphabet, degree, table })
    }

    /// Tabulates any moment source on all words up to `degree`.
    pub fn tabulate(src: &dyn MomentSource, degree: usize) -> Result<Self> {
        let entries = src
            .alphabet()
            .words_up_to(degree)
            .into_iter()
            .map(|w| src.word_moment(&w).map(|v| (w, v)))
            .collect::<Result<Vec<_>>>()?;
        State::new(src.alphabet().clone(), degree, entries)
    }

    /// Uniform values in the complex unit disc for body and soul of every
    /// nonempty word.
    pub fn random(alphabet: Arc<Alphabet>, degree: usize, rng: &mut impl Rng) -> Self {
        let entries: Vec<(Word, Dual)> = alphabet
            .words_up_to(degree)
            .into_iter()
            .filter(|w| !w.is_empty())
            .map(|w| (w, Dual::new(unit_disc(rng), unit_disc(rng))))
            .collect();
        State::new(alphabet, degree, entries).expect("generated words are normalized")
    }

    /// Random body with zero soul.
    pub fn random_body(alphabet: Arc<Alphabet>, degree: usize, rng: &mut impl Rng) -> Self {
        let entries: Vec<(Word, Dual)> = alphabet
            .words_up_to(degree)
            .into_iter()
            .filter(|w| !w.is_empty())
            .map(|w| (w, Dual::from_body(unit_disc(rng))))
            .collect();
        State::new(alphabet, degree, entries).expect("generated words are normalized")
    }

    pub fn table(&self) -> &BTreeMap<Word, Dual> {
        &self.table
    }

    /// Replaces the value on one word.
    pub fn with_value(&self, w: &Word, v: Dual) -> Result<State> {
        let mut entries = self.table.clone();
        entries.insert(w.clone(), v);
        State::new(self.alphabet.clone(), self.degree, entries)
    }

    /// Keeps the body and replaces every soul.
    pub fn with_souls(&self, soul: impl Fn(&Word) -> Result<Complex64>) -> Result<State> {
        let entries = self
            .table
            .iter()
            .map(|(w, v)| {
                let s = if w.is_empty() { Complex64::new(0.0, 0.0) } else { soul(w)? };
                Ok((w.clone(), Dual::new(v.body, s)))
            })
            .collect::<Result<Vec<_>>>()?;
        State::new(self.alphabet.clone(), self.degree, entries)
    }

    /// True when every word of length at most `degree` has a value.
    pub fn is_complete(&self) -> bool {
        self.alphabet.words_up_to(self.degree).iter().all(|w| self.table.contains_key(w))
    }
}

pub(crate) fn unit_disc(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() < 1.0 {
            return z;
        }
    }
}

impl MomentSource for State {
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
        self.table
            .get(w)
            .copied()
            .ok_or_else(|| Error::MissingMoment(self.alphabet.format_word(w)))
    }
}

/// The scalar state `φ + t·φ′` of a source, with zero soul.
pub struct ScalarPath<'a> {
    inner: &'a dyn MomentSource,
    t: f64,
}

impl<'a> ScalarPath<'a> {
    pub fn new(inner: &'a dyn MomentSource, t: f64) -> Self {
        ScalarPath { inner, t }
    }
}

impl MomentSource for ScalarPath<'_> {
    fn alphabet(&self) -> &Arc<Alphabet> {
        self.inner.alphabet()
    }

    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn word_moment(&self, w: &Word) -> Result<Dual> {
        let v = self.inner.word_moment(w)?;
        Ok(Dual::from_body(v.body + v.soul * self.t))
    }
}

/// `κ̃ₙ` on generator tuples up to a degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulantSpec {
    alphabet: Arc<Alphabet>,
    degree: usize,
    entries: BTreeMap<Vec<usize>, Dual>,
}

impl CumulantSpec {
    pub fn new(
        alphabet: Arc<Alphabet>,
        degree: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Dual)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (t, v) in entries {
            if t.is_empty() || t.len() > degree {
                return Err(Error::DegreeOverflow { len: t.len(), degree });
            }
            if let Some(&l) = t.iter().find(|&&l| l >= alphabet.len()) {
                return Err(Error::UnknownGenerator(format!("index {l}")));
            }
            map.insert(t, v);
        }
        Ok(CumulantSpec { alphabet, degree, entries: map })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Dual> {
        &self.entries
    }

    pub fn get(&self, tuple: &[usize]) -> Result<Dual> {
        self.entries
            .get(tuple)
            .copied()
            .ok_or_else(|| Error::IncompleteSpec(self.alphabet.names(tuple).join(",")))
    }

    /// Applies `f` to every entry, keeping the tuple.
    pub fn map(&self, f: impl Fn(&[usize], Dual) -> Dual) -> CumulantSpec {
        CumulantSpec {
            alphabet: self.alphabet.clone(),
            degree: self.degree,
            entries: self.entries.iter().map(|(t, v)| (t.clone(), f(t, *v))).collect(),
        }
    }

    pub fn with_alphabet(mut self, alphabet: Arc<Alphabet>) -> Result<CumulantSpec> {
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::DimensionMismatch("alphabet sizes differ".into()));
        }
        self.alphabet = alphabet;
        Ok(self)
    }
}

/// All letter sequences of length `1..=degree`.
pub fn tuples_up_to(k: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..degree {
        let mut next = Vec::with_capacity(layer.len() * k);
        for t in &layer {
            for l in 0..k {
                let mut v = t.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
