use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cumulants::{kappa_n, TupleEval};
use crate::error::{Error, Result};
use crate::freealg::{same_alphabet, Derivation, Poly};
use crate::freeness::Report;
use crate::grassmann::Dual;
use crate::nc::{enumerate_nc, Partition};
use crate::ncb::{zero_block_lift, BPartition};
use crate::state::{unit_disc, MomentSource, State};

/// The state with the same body and soul `φ′ = φ ∘ D`. When `D` raises
/// degrees, the result is truncated to the words whose image the body can
/// still evaluate.
pub fn soul_companion(body: &State, d: &Derivation) -> Result<State> {
    if !same_alphabet(body.alphabet(), d.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    let growth = (0..d.alphabet().len()).map(|i| d.image(i).degree()).max().unwrap_or(0).saturating_sub(1);
    let degree = body.degree().saturating_sub(growth);
    let entries = body
        .table()
        .iter()
        .filter(|(w, _)| w.len() <= degree)
        .map(|(w, v)| {
            let soul = if w.is_empty() { v.soul } else { body.moment(&d.apply_word(w)?)?.body };
            Ok((w.clone(), Dual::new(v.body, soul)))
        })
        .collect::<Result<Vec<_>>>()?;
    State::new(body.alphabet().clone(), degree, entries)
}

type Eval = dyn Fn(&[Poly]) -> Result<Complex64> + Send + Sync;

/// An `n`-linear functional on the algebra, evaluated on polynomials.
#[derive(Clone)]
pub struct Functional {
    arity: usize,
    eval: Arc<Eval>,
}

impl Functional {
    pub fn new(arity: usize, eval: impl Fn(&[Poly]) -> Result<Complex64> + Send + Sync + 'static) -> Self {
        Functional { arity, eval: Arc::new(eval) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[Poly]) -> Result<Complex64> {
        if args.len() != self.arity {
            return Err(Error::DimensionMismatch(format!("{} arguments for arity {}", args.len(), self.arity)));
        }
        (self.eval)(args)
    }

    /// `φₙ = φ ∘ Multₙ`.
    pub fn moment(src: Arc<dyn MomentSource>, n: usize) -> Self {
        Functional::new(n, move |a| Ok(src.moment(&Poly::product(src.alphabet(), a.iter())?)?.body))
    }

    /// `φ′ₙ = φ′ ∘ Multₙ`.
    pub fn moment_soul(src: Arc<dyn MomentSource>, n: usize) -> Self {
        Functional::new(n, move |a| Ok(src.moment(&Poly::product(src.alphabet(), a.iter())?)?.soul))
    }

    /// `κₙ`.
    pub fn cumulant(src: Arc<dyn MomentSource>, n: usize) -> Self {
        Functional::new(n, move |a| Ok(kappa_n(src.as_ref(), a)?.body))
    }

    /// `κ′ₙ`.
    pub fn cumulant_soul(src: Arc<dyn MomentSource>, n: usize) -> Self {
        Functional::new(n, move |a| Ok(kappa_n(src.as_ref(), a)?.soul))
    }

    /// `Σ c_π φ^A_π` over body moments.
    pub fn phi_a_combination(src: Arc<dyn MomentSource>, coeffs: &[(Partition, Complex64)]) -> Result<Self> {
        let n = common_n(coeffs.iter().map(|(p, _)| p.n()))?;
        let coeffs = coeffs.to_vec();
        Ok(Functional::new(n, move |a| {
            let mut ev = TupleEval::new(src.as_ref(), a)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, c) in &coeffs {
                let mut term = *c;
                for m in p.masks() {
                    term *= ev.moment(m)?.body;
                }
                acc += term;
            }
            Ok(acc)
        }))
    }

    /// `J_π(f₁,…,f_p)(a) = Π_j f_j(a|V_j)` over the blocks of `π` in order.
    pub fn block_product(p: &Partition, fs: Vec<Functional>) -> Result<Self> {
        if fs.len() != p.num_blocks() || fs.iter().zip(p.blocks()).any(|(f, b)| f.arity != b.len()) {
            return Err(Error::DimensionMismatch("functional arities do not match the blocks".into()));
        }
        let blocks = p.blocks().to_vec();
        Ok(Functional::new(p.n(), move |a| {
            let mut acc = Complex64::new(1.0, 0.0);
            for (f, b) in fs.iter().zip(&blocks) {
                let sub: Vec<Poly> = b.iter().map(|&i| a[i - 1].clone()).collect();
                acc *= f.eval(&sub)?;
            }
            Ok(acc)
        }))
    }

    /// `f ∘ Multₙ` for a linear `f`.
    pub fn compose_mult(&self, n: usize) -> Result<Self> {
        if self.arity != 1 {
            return Err(Error::DimensionMismatch("only a linear functional can be composed".into()));
        }
        let f = self.clone();
        Ok(Functional::new(n, move |a| {
            let alphabet = a.first().map(|p| p.alphabet().clone()).ok_or_else(|| {
                Error::DimensionMismatch("cannot infer the algebra of an empty product".into())
            })?;
            f.eval(&[Poly::product(&alphabet, a.iter())?])
        }))
    }

    /// `(f × g)(a₁,…,a_{n+m}) = f(a₁,…,aₙ) g(aₙ₊₁,…,a_{n+m})`.
    pub fn concat(&self, g: &Functional) -> Self {
        let (f, g) = (self.clone(), g.clone());
        Functional::new(f.arity + g.arity, move |a| Ok(f.eval(&a[..f.arity])? * g.eval(&a[f.arity..])?))
    }
}

fn common_n(mut ns: impl Iterator<Item = usize>) -> Result<usize> {
    let n = ns.next().ok_or_else(|| Error::IncompleteInput("empty coefficient list".into()))?;
    if ns.any(|m| m != n) {
        return Err(Error::DimensionMismatch("partitions of different sizes".into()));
    }
    Ok(n)
}

/// A family of maps on multilinear functionals obeying the block-product
/// and multiplication rules.
#[derive(Clone)]
pub enum DualDerivationSystem {
    /// `(dₙf)(a₁,…,aₙ) = Σₘ f(a₁,…,D(aₘ),…,aₙ)`.
    Induced(Derivation),
    /// Defined on the span of `{φ^A_π}` by sending `φ^A_π` to the sum of
    /// `φ^B_τ` over the zero-block lifts of `π`, evaluated in the given state.
    /// Linear independence of the `φ^A_π` is assumed, not verified.
    Canonical(Arc<dyn MomentSource>),
}

impl DualDerivationSystem {
    pub fn from_derivation(d: Derivation) -> Self {
        DualDerivationSystem::Induced(d)
    }

    pub fn apply(&self, f: &Functional) -> Result<Functional> {
        let DualDerivationSystem::Induced(d) = self else {
            return Err(Error::PreconditionViolated("the canonical system acts on coefficient vectors".into()));
        };
        let (d, f) = (d.clone(), f.clone());
        Ok(Functional::new(f.arity, move |a| {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..a.len() {
                let mut args = a.to_vec();
                args[m] = d.apply(&a[m])?;
                acc += f.eval(&args)?;
            }
            Ok(acc)
        }))
    }

    /// `dₙ(Σ c_π φ^A_π)`.
    pub fn apply_basis(&self, coeffs: &[(Partition, Complex64)]) -> Result<Functional> {
        match self {
            DualDerivationSystem::Induced(_) => {
                Err(Error::PreconditionViolated("the induced system acts on functionals".into()))
            }
            DualDerivationSystem::Canonical(src) => {
                let n = common_n(coeffs.iter().map(|(p, _)| p.n()))?;
                let lifts = dds_canonical(coeffs)?;
                let src = src.clone();
                Ok(Functional::new(n, move |a| {
                    let mut ev = TupleEval::new(src.as_ref(), a)?;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (t, c) in &lifts {
                        acc += ev.phi_b(t)? * c;
                    }
                    Ok(acc)
                }))
            }
        }
    }
}

/// Coefficients over the zero-block type-B basis: each `φ^A_π` goes to
/// `Σ_{V∈π} φ^B_{τ(π,V)}`.
pub fn dds_canonical(coeffs: &[(Partition, Complex64)]) -> Result<Vec<(BPartition, Complex64)>> {
    common_n(coeffs.iter().map(|(p, _)| p.n()))?;
    let mut out: Vec<(BPartition, Complex64)> = Vec::new();
    for (p, c) in coeffs {
        for b in p.blocks() {
            let t = zero_block_lift(p, b)?;
            match out.iter_mut().find(|(u, _)| *u == t) {
                Some((_, e)) => *e += c,
                None => out.push((t, *c)),
            }
        }
    }
    Ok(out)
}

fn random_arg(src: &dyn MomentSource, rng: &mut impl Rng) -> Poly {
    let alphabet = src.alphabet();
    let terms = std::iter::once((Vec::new(), unit_disc(rng)))
        .chain((0..alphabet.len()).map(|i| (vec![i], unit_disc(rng))))
        .collect::<Vec<_>>();
    Poly::from_terms(alphabet, terms)
}

fn random_functional(pool: &[Arc<dyn MomentSource>], arity: usize, rng: &mut impl Rng) -> Functional {
    let src = pool.choose(rng).expect("pool is not empty").clone();
    match rng.gen_range(0..4) {
        0 => Functional::moment(src, arity),
        1 => Functional::moment_soul(src, arity),
        2 => Functional::cumulant(src, arity),
        _ => Functional::cumulant_soul(src, arity),
    }
}

struct Tally {
    name: &'static str,
    max: f64,
    witness: Option<Vec<String>>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, max: 0.0, witness: None }
    }

    fn record(&mut self, lhs: Complex64, rhs: Complex64, witness: impl FnOnce() -> Vec<String>) {
        let v = (lhs - rhs).norm();
        if v > self.max || v.is_nan() {
            self.max = v;
            self.witness = Some(witness());
        }
    }

    fn report(self, tol: f64) -> Report {
        let pass = self.max <= tol;
        Report {
            check: self.name.to_string(),
            pass,
            max_violation: self.max,
            witness: if pass { None } else { self.witness },
            tolerance: tol,
        }
    }
}

/// Samples functionals from the states in `pool` and checks the axioms of
/// the system induced by `d`: the block-product rule with two blocks and
/// with arbitrary `π`, the multiplication rule, and the concatenation rule.
pub fn dds_check(
    d: &Derivation,
    pool: &[Arc<dyn MomentSource>],
    samples: usize,
    rng: &mut impl Rng,
    tol: f64,
) -> Result<Vec<Report>> {
    if pool.is_empty() {
        return Err(Error::IncompleteInput("no states to sample functionals from".into()));
    }
    if pool.iter().any(|s| !same_alphabet(s.alphabet(), d.alphabet())) {
        return Err(Error::AlphabetMismatch);
    }
    let sys = DualDerivationSystem::Induced(d.clone());
    let mut two = Tally::new("block-product rule, two blocks");
    let mut general = Tally::new("block-product rule");
    let mut mult = Tally::new("multiplication rule");
    let mut concat = Tally::new("concatenation rule");
    let src0 = pool[0].clone();
    for _ in 0..samples {
        for (tally, want_two) in [(&mut two, true), (&mut general, false)] {
            let n = rng.gen_range(2..=4);
            let candidates: Vec<&Partition> = enumerate_nc(n)?
                .iter()
                .filter(|p| !want_two || p.num_blocks() == 2)
                .collect();
            let p = (*candidates.choose(rng).expect("NC(n) has two-block elements")).clone();
            let fs: Vec<Functional> = p.blocks().iter().map(|b| random_functional(pool, b.len(), rng)).collect();
            let args: Vec<Poly> = (0..n).map(|_| random_arg(src0.as_ref(), rng)).collect();
            let lhs = sys.apply(&Functional::block_product(&p, fs.clone())?)?.eval(&args)?;
            let mut rhs = Complex64::new(0.0, 0.0);
            for j in 0..fs.len() {
                let mut gs = fs.clone();
                gs[j] = sys.apply(&fs[j])?;
                rhs += Functional::block_product(&p, gs)?.eval(&args)?;
            }
            tally.record(lhs, rhs, || vec![p.to_string()]);
        }

        let n = rng.gen_range(1..=4);
        let f = random_functional(pool, 1, rng);
        let args: Vec<Poly> = (0..n).map(|_| random_arg(src0.as_ref(), rng)).collect();
        let lhs = sys.apply(&f.compose_mult(n)?)?.eval(&args)?;
        let rhs = sys.apply(&f)?.compose_mult(n)?.eval(&args)?;
        mult.record(lhs, rhs, || vec![format!("n = {n}")]);

        let (k, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let f = random_functional(pool, k, rng);
        let g = random_functional(pool, m, rng);
        let args: Vec<Poly> = (0..k + m).map(|_| random_arg(src0.as_ref(), rng)).collect();
        let lhs = sys.apply(&f.concat(&g))?.eval(&args)?;
        let rhs = sys.apply(&f)?.concat(&g).eval(&args)? + f.concat(&sys.apply(&g)?).eval(&args)?;
        concat.record(lhs, rhs, || vec![format!("arities {k} and {m}")]);
    }
    Ok(vec![two.report(tol), general.report(tol), mult.report(tol), concat.report(tol)])
}
