#![allow(dead_code)]

use std::sync::Arc;

use incps::freealg::{Alphabet, Poly, Relation, Word};
use incps::state::{MomentSource, State};
use incps::{Complex64, Dual};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn disc(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() < 1.0 {
            return z;
        }
    }
}

pub fn free_alphabet(names: &[&str]) -> Arc<Alphabet> {
    Arc::new(Alphabet::free(names).unwrap())
}

pub fn random_state(names: &[&str], degree: usize, seed: u64) -> State {
    State::random(free_alphabet(names), degree, &mut rng(seed))
}

/// Random polynomial `c₀ + Σ cⱼ·gⱼ` over the given letters.
pub fn random_linear(alphabet: &Arc<Alphabet>, letters: &[usize], rng: &mut impl Rng) -> Poly {
    let mut terms = vec![(Vec::new(), disc(rng))];
    terms.extend(letters.iter().map(|&l| (vec![l], disc(rng))));
    Poly::from_terms(alphabet, terms)
}

/// Random polynomial with words of length at most `max_len` in the letters.
pub fn random_poly(alphabet: &Arc<Alphabet>, letters: &[usize], max_len: usize, rng: &mut impl Rng) -> Poly {
    let terms: Vec<(Vec<usize>, Complex64)> = (0..3)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            ((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect(), disc(rng))
        })
        .collect();
    Poly::from_terms(alphabet, terms)
}

pub fn catalan(k: usize) -> f64 {
    // Counts non-crossing pairings of 2k points by recursion on the partner of 1.
    let mut c = vec![1.0f64; k + 1];
    for n in 1..=k {
        c[n] = (0..n).map(|i| c[i] * c[n - 1 - i]).sum();
    }
    c[k]
}

/// Moments of the free product computed straight from the defining
/// centering rule, with no partitions involved. `factors` lists elements
/// of the inputs as (input index, polynomial over that input's alphabet).
pub fn centered_product_moment(inputs: &[State], factors: Vec<(usize, Poly)>) -> Dual {
    let mut merged: Vec<(usize, Poly)> = Vec::new();
    for (g, p) in factors {
        match merged.last_mut() {
            Some((h, q)) if *h == g => *q = q.mul(&p).unwrap(),
            _ => merged.push((g, p)),
        }
    }
    match merged.len() {
        0 => return Dual::ONE,
        1 => return inputs[merged[0].0].moment(&merged[0].1).unwrap(),
        _ => {}
    }
    let r = merged.len();
    let lambdas: Vec<Complex64> =
        merged.iter().map(|(g, p)| inputs[*g].moment(p).unwrap().body).collect();
    let centered: Vec<(usize, Poly)> = merged
        .iter()
        .zip(&lambdas)
        .map(|((g, p), l)| (*g, p.sub(&Poly::constant(p.alphabet(), *l)).unwrap()))
        .collect();

    // Value on the alternating centered product.
    let palindromic = r % 2 == 1 && (0..r / 2).all(|j| centered[j].0 == centered[r - 1 - j].0);
    let mut total = Dual::ZERO;
    if palindromic {
        let mid = &centered[r / 2];
        let mut soul = inputs[mid.0].moment(&mid.1).unwrap().soul;
        for j in 0..r / 2 {
            let (g, a) = &centered[j];
            let b = &centered[r - 1 - j].1;
            soul *= inputs[*g].moment(&a.mul(b).unwrap()).unwrap().body;
        }
        total += Dual::pure_soul(soul);
    }
    // Every proper subset of the factors keeps its centered part; the rest
    // contribute their scalar part.
    for subset in 0u32..(1 << r) - 1 {
        let mut scalar = c(1.0);
        let mut kept = Vec::new();
        for i in 0..r {
            if subset >> i & 1 == 1 {
                kept.push(centered[i].clone());
            } else {
                scalar *= lambdas[i];
            }
        }
        total += centered_product_moment(inputs, kept) * scalar;
    }
    total
}

/// The same oracle on a word of the joint alphabet, whose generators are
/// those of the inputs concatenated in order.
pub fn centered_word_moment(inputs: &[State], w: &Word) -> Dual {
    let mut owner = Vec::new();
    for (i, s) in inputs.iter().enumerate() {
        for j in 0..s.alphabet().len() {
            owner.push((i, j));
        }
    }
    let factors = w
        .letters()
        .iter()
        .map(|&l| {
            let (g, j) = owner[l];
            (g, Poly::generator(inputs[g].alphabet(), j))
        })
        .collect();
    centered_product_moment(inputs, factors)
}

/// Palindromic table of the free product of order-two unitaries.
pub fn z2_expected(letters: &[usize], alpha_primes: &[f64]) -> Dual {
    let n = letters.len();
    if n == 0 {
        return Dual::ONE;
    }
    if n % 2 == 1 && (0..n / 2).all(|j| letters[j] == letters[n - 1 - j]) {
        Dual::real(0.0, alpha_primes[letters[n / 2]])
    } else {
        Dual::ZERO
    }
}

pub fn involutions(names: &[&str]) -> Arc<Alphabet> {
    Arc::new(Alphabet::with_relation(names, Relation::Involution).unwrap())
}

/// A one-generator state given by its moment sequence `φ̃(xᵐ)`, m ≥ 1.
pub fn power_state(name: &str, moments: &[Dual]) -> State {
    let a = free_alphabet(&[name]);
    let entries = moments.iter().enumerate().map(|(i, v)| (a.normalize(&vec![0; i + 1]), *v));
    State::new(a.clone(), moments.len(), entries).unwrap()
}

/// Random integer-valued moment sequence, so sums and products stay exact.
pub fn integer_moments(len: usize, rng: &mut impl Rng) -> Vec<Dual> {
    (0..len).map(|_| Dual::real(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64)).collect()
}
