//! Words and noncommutative polynomials over a finite generator alphabet,
//! with optional per-generator rewrite rules, and derivations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::PRUNE_TOL;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum Relation {
    #[default]
    Free,
    /// `g² = g`
    Idempotent,
    /// `g² = 1`
    Involution,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Generator {
    pub name: String,
    pub relation: Relation,
}

impl Generator {
    pub fn new(name: impl Into<String>, relation: Relation) -> Self {
        Generator { name: name.into(), relation }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Alphabet {
    gens: Vec<Generator>,
}

impl Alphabet {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.name.is_empty() || g.name.contains([',', ' ']) {
                return Err(Error::Parse(format!("invalid generator name {:?}", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::AlphabetCollision(g.name.clone()));
            }
        }
        Ok(Alphabet { gens })
    }

    /// Generators without relations.
    pub fn free<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(names.iter().map(|n| Generator::new(n.as_ref(), Relation::Free)).collect())
    }

    pub fn with_relation<S: AsRef<str>>(names: &[S], relation: Relation) -> Result<Self> {
        Self::new(names.iter().map(|n| Generator::new(n.as_ref(), relation)).collect())
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Applies `g² = g` and `g² = 1` until no rule fires.
    pub fn normalize(&self, letters: &[usize]) -> Word {
        let mut out: Vec<usize> = Vec::with_capacity(letters.len());
        for &l in letters {
            match (out.last(), self.gens[l].relation) {
                (Some(&t), Relation::Idempotent) if t == l => {}
                (Some(&t), Relation::Involution) if t == l => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// Parses a comma-separated list of generator names; `1` or an empty
    /// string is the unit word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let letters = s.split(',').map(|t| self.index_of(t.trim())).collect::<Result<Vec<_>>>()?;
        Ok(self.normalize(&letters))
    }

    /// Letters of a comma-separated name list, without normalization.
    pub fn parse_letters(&self, s: &str) -> Result<Vec<usize>> {
        s.split(',').map(|t| self.index_of(t.trim())).collect()
    }

    pub fn names(&self, letters: &[usize]) -> Vec<String> {
        letters.iter().map(|&l| self.gens[l].name.clone()).collect()
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            "1".to_string()
        } else {
            self.names(w.letters()).join("·")
        }
    }

    /// Every normalized word of length at most `degree`, in shortlex order.
    pub fn words_up_to(&self, degree: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..degree {
            let mut next = Vec::new();
            for w in &layer {
                for l in 0..self.len() {
                    let reducible = w.0.last() == Some(&l) && self.gens[l].relation != Relation::Free;
                    if !reducible {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// A sequence of generator indices; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Wraps letters that are already normalized.
    pub fn from_normal(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of normalized words.
#[derive(Clone, Debug)]
pub struct Poly {
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<Word, Complex64>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_alphabet(&self.alphabet, &other.alphabet) && self.terms == other.terms
    }
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Poly {
    pub fn zero(alphabet: &Arc<Alphabet>) -> Self {
        Poly { alphabet: alphabet.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(alphabet: &Arc<Alphabet>, c: Complex64) -> Self {
        Self::zero(alphabet).plus_term(Word::empty(), c)
    }

    pub fn one(alphabet: &Arc<Alphabet>) -> Self {
        Self::constant(alphabet, Complex64::new(1.0, 0.0))
    }

    /// The monomial of a letter sequence, normalized.
    pub fn monomial(alphabet: &Arc<Alphabet>, letters: &[usize]) -> Self {
        let w = alphabet.normalize(letters);
        Self::zero(alphabet).plus_term(w, Complex64::new(1.0, 0.0))
    }

    pub fn generator(alphabet: &Arc<Alphabet>, i: usize) -> Self {
        Self::monomial(alphabet, &[i])
    }

    pub fn from_terms(alphabet: &Arc<Alphabet>, terms: impl IntoIterator<Item = (Vec<usize>, Complex64)>) -> Self {
        let mut p = Self::zero(alphabet);
        for (letters, c) in terms {
            let w = alphabet.normalize(&letters);
            p = p.plus_term(w, c);
        }
        p.pruned()
    }

    fn plus_term(mut self, w: Word, c: Complex64) -> Self {
        *self.terms.entry(w).or_insert(Complex64::new(0.0, 0.0)) += c;
        self
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOL);
        self
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest word with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if same_alphabet(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut p = self.clone();
        for (w, c) in &other.terms {
            p = p.plus_term(w.clone(), *c);
        }
        Ok(p.pruned())
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
        .pruned()
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut p = Poly::zero(&self.alphabet);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let letters: Vec<usize> = u.0.iter().chain(v.0.iter()).copied().collect();
                p = p.plus_term(self.alphabet.normalize(&letters), a * b);
            }
        }
        Ok(p.pruned())
    }

    /// Product of a sequence; the empty product is `1`.
    pub fn product<'a>(alphabet: &Arc<Alphabet>, factors: impl IntoIterator<Item = &'a Poly>) -> Result<Poly> {
        factors.into_iter().try_fold(Poly::one(alphabet), |acc, f| acc.mul(f))
    }

    /// Conjugate-linear anti-automorphism fixing every generator.
    pub fn star(&self) -> Poly {
        let mut p = Poly::zero(&self.alphabet);
        for (w, c) in &self.terms {
            let mut rev = w.0.clone();
            rev.reverse();
            p = p.plus_term(Word(rev), c.conj());
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(w, c)| format!("({c})·{}", self.alphabet.format_word(w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A derivation determined by the images of the generators.
#[derive(Clone, Debug)]
pub struct Derivation {
    alphabet: Arc<Alphabet>,
    images: Vec<Poly>,
}

impl Derivation {
    /// Checks that each image is compatible with its generator's relation.
    pub fn new(alphabet: &Arc<Alphabet>, images: Vec<Poly>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                alphabet.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if !same_alphabet(img.alphabet(), alphabet) {
                return Err(Error::AlphabetMismatch);
            }
            let g = Poly::generator(alphabet, i);
            let leibniz = img.mul(&g)?.add(&g.mul(img)?)?;
            let defect = match alphabet.generator(i).relation {
                Relation::Free => Poly::zero(alphabet),
                Relation::Idempotent => leibniz.sub(img)?,
                Relation::Involution => leibniz,
            };
            if !defect.is_zero() {
                return Err(Error::RelationViolation(alphabet.generator(i).name.clone()));
            }
        }
        Ok(Derivation { alphabet: alphabet.clone(), images })
    }

    /// `D(Xᵢ) = 1`.
    pub fn removal(alphabet: &Arc<Alphabet>) -> Result<Self> {
        Self::new(alphabet, (0..alphabet.len()).map(|_| Poly::one(alphabet)).collect())
    }

    /// `D(Xᵢ) = Xᵢ`.
    pub fn number(alphabet: &Arc<Alphabet>) -> Result<Self> {
        Self::new(alphabet, (0..alphabet.len()).map(|i| Poly::generator(alphabet, i)).collect())
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn image(&self, i: usize) -> &Poly {
        &self.images[i]
    }

    /// Leibniz expansion `Σᵢ w₁⋯wᵢ₋₁ D(wᵢ) wᵢ₊₁⋯`.
    pub fn apply_word(&self, w: &Word) -> Result<Poly> {
        let mut out = Poly::zero(&self.alphabet);
        for (i, &l) in w.0.iter().enumerate() {
            let left = Poly::monomial(&self.alphabet, &w.0[..i]);
            let right = Poly::monomial(&self.alphabet, &w.0[i + 1..]);
            out = out.add(&left.mul(&self.images[l])?.mul(&right)?)?;
        }
        Ok(out)
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        if !same_alphabet(p.alphabet(), &self.alphabet) {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = Poly::zero(&self.alphabet);
        for (w, c) in p.terms() {
            out = out.add(&self.apply_word(w)?.scale(*c))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mixed() -> Arc<Alphabet> {
        Arc::new(
            Alphabet::new(vec![
                Generator::new("x", Relation::Free),
                Generator::new("p", Relation::Idempotent),
                Generator::new("u", Relation::Involution),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn normalization_rules() {
        let a = mixed();
        assert_eq!(a.normalize(&[1, 1, 1]).letters(), &[1]);
        assert_eq!(a.normalize(&[2, 2]).letters(), &[] as &[usize]);
        assert_eq!(a.normalize(&[2, 0, 2, 2, 0, 2]).letters(), &[2, 0, 0, 2]);
        assert_eq!(a.normalize(&[0, 2, 1, 1, 2, 0]).letters(), &[0, 2, 1, 2, 0]);
        assert_eq!(a.normalize(&[0, 0]).letters(), &[0, 0]);
    }

    #[test]
    fn duplicate_names_collide() {
        assert_eq!(Alphabet::free(&["a", "a"]), Err(Error::AlphabetCollision("a".into())));
    }

    #[test]
    fn word_counts() {
        let z2 = Alphabet::with_relation(&["u1", "u2", "u3"], Relation::Involution).unwrap();
        // 1 + 3 + 3·2 + 3·4
        assert_eq!(z2.words_up_to(3).len(), 22);
        let free = Alphabet::free(&["a", "b"]).unwrap();
        assert_eq!(free.words_up_to(3).len(), 15);
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let a = Arc::new(Alphabet::free(&["a"]).unwrap());
        let b = Arc::new(Alphabet::free(&["b"]).unwrap());
        assert_eq!(Poly::one(&a).mul(&Poly::one(&b)), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn derivation_relations() {
        let a = mixed();
        assert!(matches!(Derivation::removal(&a), Err(Error::RelationViolation(_))));
        assert!(matches!(Derivation::number(&a), Err(Error::RelationViolation(_))));
        // D(p) = xp − px
        let x = Poly::generator(&a, 0);
        let p = Poly::generator(&a, 1);
        let dp = x.mul(&p).unwrap().sub(&p.mul(&x).unwrap()).unwrap();
        let d = Derivation::new(&a, vec![Poly::one(&a), dp, Poly::zero(&a)]).unwrap();
        let w = Poly::monomial(&a, &[0, 1, 0]);
        assert_eq!(d.apply(&w).unwrap().degree(), 4);
    }

    #[test]
    fn number_operator_counts_letters() {
        let a = Arc::new(Alphabet::free(&["a", "b"]).unwrap());
        let d = Derivation::number(&a).unwrap();
        for w in a.words_up_to(4) {
            let m = Poly::monomial(&a, w.letters());
            assert_eq!(d.apply(&m).unwrap(), m.scale(c(w.len() as f64)));
        }
    }

    fn arb_poly(a: Arc<Alphabet>) -> impl Strategy<Value = Poly> {
        let k = a.len();
        proptest::collection::vec((proptest::collection::vec(0..k, 0..4), -2.0..2.0f64, -2.0..2.0f64), 0..4)
            .prop_map(move |ts| Poly::from_terms(&a, ts.into_iter().map(|(l, re, im)| (l, Complex64::new(re, im)))))
    }

    fn close(p: &Poly, q: &Poly) -> bool {
        p.sub(q).unwrap().terms().all(|(_, c)| c.norm() < 1e-9)
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(mixed()), q in arb_poly(mixed()), r in arb_poly(mixed())) {
            let lhs = p.mul(&q).unwrap().mul(&r).unwrap();
            let rhs = p.mul(&q.mul(&r).unwrap()).unwrap();
            prop_assert!(close(&lhs, &rhs));
            let dist = p.mul(&q.add(&r).unwrap()).unwrap();
            prop_assert!(close(&dist, &p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap()));
        }

        #[test]
        fn star_is_an_involutive_antihomomorphism(p in arb_poly(mixed()), q in arb_poly(mixed())) {
            prop_assert!(close(&p.star().star(), &p));
            let lhs = p.mul(&q).unwrap().star();
            prop_assert!(close(&lhs, &q.star().mul(&p.star()).unwrap()));
        }

        #[test]
        fn leibniz_rule(p in arb_poly(mixed()), q in arb_poly(mixed())) {
            let a = mixed();
            let x = Poly::generator(&a, 0);
            let pp = Poly::generator(&a, 1);
            let dp = x.mul(&pp).unwrap().sub(&pp.mul(&x).unwrap()).unwrap();
            let d = Derivation::new(&a, vec![Poly::generator(&a, 2), dp, Poly::zero(&a)]).unwrap();
            let lhs = d.apply(&p.mul(&q).unwrap()).unwrap();
            let rhs = d.apply(&p).unwrap().mul(&q).unwrap().add(&p.mul(&d.apply(&q).unwrap()).unwrap()).unwrap();
            prop_assert!(close(&lhs, &rhs));
        }
    }
}
