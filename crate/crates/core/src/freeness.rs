//! Checkers for freeness, infinitesimal freeness and traciality of a
//! truncated state.

use num_complex::Complex64;

use crate::cumulants::kappa_letters;
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Poly, Word};
use crate::grassmann::Dual;
use crate::state::{tuples_up_to, MomentSource, State};

/// Outcome of a scan: the largest violation seen and, on failure, the
/// arguments where it was first attained.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub check: String,
    pub pass: bool,
    pub max_violation: f64,
    pub witness: Option<Vec<String>>,
    pub tolerance: f64,
}

struct Scan {
    max: f64,
    worst: Option<Vec<String>>,
}

impl Scan {
    fn new() -> Self {
        Scan { max: 0.0, worst: None }
    }

    fn record(&mut self, violation: f64, witness: impl FnOnce() -> Vec<String>) {
        if violation > self.max || (violation.is_nan() && !self.max.is_nan()) {
            self.max = violation;
            self.worst = Some(witness());
        }
    }

    fn finish(self, check: &str, tol: f64) -> Report {
        let pass = self.max <= tol;
        Report {
            check: check.to_string(),
            pass,
            max_violation: self.max,
            witness: if pass { None } else { self.worst },
            tolerance: tol,
        }
    }
}

/// Assignment of each generator to one subalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groups {
    of: Vec<usize>,
    count: usize,
}

impl Groups {
    pub fn new(of: Vec<usize>) -> Result<Self> {
        let count = of.iter().max().map_or(0, |m| m + 1);
        if (0..count).any(|g| !of.contains(&g)) {
            return Err(Error::IncompleteInput("group labels must be 0..k without gaps".into()));
        }
        Ok(Groups { of, count })
    }

    /// Parses `"1,2;3"`: groups separated by `;`, generators by `,`, each
    /// given by name or by 1-based index.
    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<Self> {
        let mut of = vec![usize::MAX; alphabet.len()];
        for (g, part) in s.split(';').enumerate() {
            for tok in part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let i = match alphabet.index_of(tok) {
                    Ok(i) => i,
                    Err(e) => match tok.parse::<usize>() {
                        Ok(k) if (1..=alphabet.len()).contains(&k) => k - 1,
                        _ => return Err(e),
                    },
                };
                if of[i] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("generator {tok} is listed twice")));
                }
                of[i] = g;
            }
        }
        if let Some(i) = of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::IncompleteInput(format!(
                "generator {} is in no group",
                alphabet.generator(i).name
            )));
        }
        Groups::new(of)
    }

    /// Every generator in its own group.
    pub fn singletons(k: usize) -> Self {
        Groups { of: (0..k).collect(), count: k }
    }

    pub fn group_of(&self, letter: usize) -> usize {
        self.of[letter]
    }

    pub fn count(&self) -> usize {
        self.count
    }

    fn is_mixed(&self, letters: &[usize]) -> bool {
        letters.first().is_some_and(|&f| letters.iter().any(|&l| self.of[l] != self.of[f]))
    }

    fn check(&self, alphabet: &Alphabet) -> Result<()> {
        if self.of.len() != alphabet.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} group labels for {} generators",
                self.of.len(),
                alphabet.len()
            )));
        }
        Ok(())
    }
}

fn mixed_cumulant_scan(
    src: &dyn MomentSource,
    groups: &Groups,
    max_n: usize,
    violation: impl Fn(Dual) -> f64,
) -> Result<Scan> {
    groups.check(src.alphabet())?;
    let mut scan = Scan::new();
    for t in tuples_up_to(src.alphabet().len(), max_n) {
        if t.len() < 2 || !groups.is_mixed(&t) {
            continue;
        }
        let k = kappa_letters(src, &t)?;
        scan.record(violation(k), || src.alphabet().names(&t));
    }
    Ok(scan)
}

/// Vanishing of the bodies of all mixed cumulants of generators up to order `max_n`.
pub fn check_freeness(src: &dyn MomentSource, groups: &Groups, max_n: usize, tol: f64) -> Result<Report> {
    Ok(mixed_cumulant_scan(src, groups, max_n, |k| k.body.norm())?.finish("freeness", tol))
}

/// Vanishing of all mixed `κ̃ₙ`, body and soul.
pub fn check_inf_freeness(src: &dyn MomentSource, groups: &Groups, max_n: usize, tol: f64) -> Result<Report> {
    Ok(mixed_cumulant_scan(src, groups, max_n, Dual::norm)?.finish("infinitesimal freeness (cumulants)", tol))
}

/// Nonempty words of each group, up to `max_len`.
fn group_words(alphabet: &Alphabet, groups: &Groups, max_len: usize) -> Vec<Vec<Word>> {
    let mut out = vec![Vec::new(); groups.count()];
    for w in alphabet.words_up_to(max_len) {
        if let Some(&f) = w.letters().first() {
            let g = groups.group_of(f);
            if w.letters().iter().all(|&l| groups.group_of(l) == g) {
                out[g].push(w);
            }
        }
    }
    out
}

/// All sequences of group-words with consecutive groups distinct, at least
/// two factors, and total length at most `max_n`.
fn alternating_sequences(words: &[Vec<Word>], max_n: usize) -> Vec<Vec<(usize, Word)>> {
    fn go(
        words: &[Vec<Word>],
        budget: usize,
        cur: &mut Vec<(usize, Word)>,
        out: &mut Vec<Vec<(usize, Word)>>,
    ) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        for (g, ws) in words.iter().enumerate() {
            if cur.last().is_some_and(|(h, _)| *h == g) {
                continue;
            }
            for w in ws.iter().filter(|w| w.len() <= budget) {
                cur.push((g, w.clone()));
                go(words, budget - w.len(), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(words, max_n, &mut Vec::new(), &mut out);
    out
}

/// The defining moment condition: for alternating centered `a₁,…,aₙ`,
/// `φ(a₁⋯aₙ) = 0` and `φ′(a₁⋯aₙ)` equals
/// `φ(a₁aₙ)φ(a₂aₙ₋₁)⋯φ′(a₍ₙ₊₁₎/₂)` for odd `n` with palindromic groups and
/// 0 otherwise. Centered elements are spanned by `w − φ(w)` over group words.
pub fn check_inf_freeness_definition(
    src: &dyn MomentSource,
    groups: &Groups,
    max_n: usize,
    tol: f64,
) -> Result<Report> {
    let alphabet = src.alphabet();
    groups.check(alphabet)?;
    let words = group_words(alphabet, groups, max_n);
    let mut scan = Scan::new();
    for seq in alternating_sequences(&words, max_n) {
        let centered = seq
            .iter()
            .map(|(_, w)| {
                let m = src.word_moment(w)?;
                Poly::monomial(alphabet, w.letters()).sub(&Poly::constant(alphabet, m.body))
            })
            .collect::<Result<Vec<_>>>()?;
        let value = src.moment(&Poly::product(alphabet, centered.iter())?)?;
        let r = seq.len();
        let palindromic = r % 2 == 1 && (0..r / 2).all(|j| seq[j].0 == seq[r - 1 - j].0);
        let expected = if palindromic {
            let mut e = src.moment(&centered[r / 2])?.soul;
            for j in 0..r / 2 {
                e *= src.moment(&centered[j].mul(&centered[r - 1 - j])?)?.body;
            }
            e
        } else {
            Complex64::new(0.0, 0.0)
        };
        let v = value.body.norm().max((value.soul - expected).norm());
        scan.record(v, || seq.iter().map(|(_, w)| alphabet.format_word(w)).collect());
    }
    Ok(scan.finish("infinitesimal freeness (definition)", tol))
}

/// Basis of the kernel of the complex-linear map `c ↦ Σ cⱼ vⱼ` into `ℂ²`,
/// where each `vⱼ` is a Grassmann value.
fn kernel_basis(values: &[Dual]) -> Vec<Vec<Complex64>> {
    let m = values.len();
    let mut rows: Vec<Vec<Complex64>> =
        vec![values.iter().map(|v| v.body).collect(), values.iter().map(|v| v.soul).collect()];
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..m {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).max_by(|&a, &b| rows[a][c].norm().total_cmp(&rows[b][c].norm())) else {
            break;
        };
        if rows[p][c].norm() < 1e-12 {
            continue;
        }
        rows.swap(r, p);
        let pivot = rows[r][c];
        for x in rows[r].iter_mut() {
            *x /= pivot;
        }
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][c];
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pr) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..m)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Complex64::new(0.0, 0.0); m];
            v[free] = Complex64::new(1.0, 0.0);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][free];
            }
            v
        })
        .collect()
}

/// The naive Grassmann-valued analogue of freeness: `φ̃(a₁⋯aₙ) = 0` for
/// alternating `aⱼ` with `φ̃(aⱼ) = 0`. The kernel of `φ̃` on each group's
/// span can be trivial, in which case the condition holds vacuously.
pub fn check_naive_centered_condition(
    src: &dyn MomentSource,
    groups: &Groups,
    max_n: usize,
    tol: f64,
) -> Result<Report> {
    let alphabet = src.alphabet();
    groups.check(alphabet)?;
    let words = group_words(alphabet, groups, max_n);
    let mut kernels: Vec<Vec<Poly>> = Vec::new();
    for ws in &words {
        let basis: Vec<Word> = std::iter::once(Word::empty()).chain(ws.iter().cloned()).collect();
        let values = basis.iter().map(|w| src.word_moment(w)).collect::<Result<Vec<_>>>()?;
        kernels.push(
            kernel_basis(&values)
                .into_iter()
                .map(|coeffs| {
                    Poly::from_terms(alphabet, basis.iter().zip(coeffs).map(|(w, c)| (w.letters().to_vec(), c)))
                })
                .collect(),
        );
    }
    let mut scan = Scan::new();
    let mut seqs: Vec<Vec<(usize, usize)>> = Vec::new();
    fn go(
        kernels: &[Vec<Poly>],
        budget: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        for (g, ks) in kernels.iter().enumerate() {
            if cur.last().is_some_and(|(h, _)| *h == g) {
                continue;
            }
            for (i, k) in ks.iter().enumerate() {
                let d = k.degree().max(1);
                if d <= budget {
                    cur.push((g, i));
                    go(kernels, budget - d, cur, out);
                    cur.pop();
                }
            }
        }
    }
    go(&kernels, max_n, &mut Vec::new(), &mut seqs);
    for seq in seqs {
        let prod = Poly::product(alphabet, seq.iter().map(|&(g, i)| &kernels[g][i]))?;
        let v = src.moment(&prod)?;
        scan.record(v.norm(), || seq.iter().map(|&(g, i)| kernels[g][i].to_string()).collect());
    }
    Ok(scan.finish("naive centered moment condition", tol))
}

/// `φ̃(w) = φ̃(rotated w)` for every stored word, rotating the last letter
/// to the front.
pub fn check_traciality(s: &State, tol: f64) -> Result<Report> {
    let alphabet = s.alphabet();
    let mut scan = Scan::new();
    for (w, v) in s.table() {
        if w.len() < 2 {
            continue;
        }
        let l = w.letters();
        let rotated: Vec<usize> = std::iter::once(l[l.len() - 1]).chain(l[..l.len() - 1].iter().copied()).collect();
        let r = alphabet.normalize(&rotated);
        let rv = s.word_moment(&r)?;
        scan.record(v.dist(rv), || vec![alphabet.format_word(w), alphabet.format_word(&r)]);
    }
    Ok(scan.finish("traciality", tol))
}

/// Cumulant-level companion of traciality:
/// `κ̃ₙ(b₁,…,bₙ) = κ̃ₙ(b₂,…,bₙ,b₁)` on generator tuples up to `max_n`.
pub fn check_cumulant_rotation(src: &dyn MomentSource, max_n: usize, tol: f64) -> Result<Report> {
    let alphabet = src.alphabet();
    let mut scan = Scan::new();
    for t in tuples_up_to(alphabet.len(), max_n) {
        if t.len() < 2 {
            continue;
        }
        let rotated: Vec<usize> = t[1..].iter().copied().chain(std::iter::once(t[0])).collect();
        let d = kappa_letters(src, &t)?.dist(kappa_letters(src, &rotated)?);
        scan.record(d, || alphabet.names(&t));
    }
    Ok(scan.finish("cumulant rotation invariance", tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Relation;
    use rand::{rngs::StdRng, SeedableRng};
    use std::sync::Arc;

    #[test]
    fn kernel_of_independent_values_is_trivial() {
        assert!(kernel_basis(&[Dual::ONE, Dual::EPS]).is_empty());
        let k = kernel_basis(&[Dual::ONE, Dual::real(2.0, 0.0), Dual::EPS]);
        assert_eq!(k.len(), 1);
        assert!((k[0][0] + k[0][1] * 2.0).norm() < 1e-14);
    }

    #[test]
    fn group_parsing() {
        let a = Alphabet::free(&["X1", "X2", "X3"]).unwrap();
        let g = Groups::parse(&a, "1,X2;3").unwrap();
        assert_eq!(g.count(), 2);
        assert_eq!(g.group_of(1), 0);
        assert!(matches!(Groups::parse(&a, "1;2"), Err(Error::IncompleteInput(_))));
    }

    #[test]
    fn random_state_is_not_free() {
        let a = Arc::new(Alphabet::with_relation(&["u", "v"], Relation::Involution).unwrap());
        let s = State::random(a, 3, &mut StdRng::seed_from_u64(9));
        let g = Groups::singletons(2);
        let r = check_inf_freeness(&s, &g, 3, 1e-9).unwrap();
        assert!(!r.pass && r.witness.is_some());
        let d = check_inf_freeness_definition(&s, &g, 3, 1e-9).unwrap();
        assert!(!d.pass && d.witness.is_some());
    }
}
