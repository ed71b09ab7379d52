//! Moment functionals `φ̃_π`, Grassmann-valued free cumulants `κ̃_π`, the
//! routes to infinitesimal cumulants, and their type-B analogues.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freealg::{same_alphabet, Alphabet, Poly};
use crate::grassmann::{soul_of_product, Dual};
use crate::nc::{self, Partition};
use crate::ncb::{self, BPartition};
use crate::state::{tuples_up_to, CumulantSpec, MomentSource, ScalarPath, State};

/// Largest tuple length for cumulant transforms.
pub const MAX_CUMULANT_N: usize = nc::MAX_MOBIUS_N;
/// Default step of the central difference in [`inf_cumulant_numeric`].
pub const DEFAULT_STEP: f64 = 1e-4;

/// Maps a mask over `0..positions.len()` onto the given positions.
fn spread(rel: u32, positions: &[usize]) -> u32 {
    positions.iter().enumerate().filter(|(j, _)| rel >> j & 1 == 1).fold(0, |m, (_, &p)| m | 1 << p)
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn block_mask(block: &[usize]) -> u32 {
    block.iter().fold(0, |m, &x| m | 1 << (x - 1))
}

/// Moments and cumulants of sub-tuples of a fixed tuple, memoized by the
/// subset of positions.
pub struct TupleEval<'a> {
    src: &'a dyn MomentSource,
    tuple: Vec<Poly>,
    moments: HashMap<u32, Dual>,
    cumulants: HashMap<u32, Dual>,
}

impl<'a> TupleEval<'a> {
    pub fn new(src: &'a dyn MomentSource, tuple: &[Poly]) -> Result<Self> {
        if tuple.len() > 31 {
            return Err(Error::SizeLimit { what: "tuple", n: tuple.len(), max: 31 });
        }
        if tuple.iter().any(|p| !same_alphabet(p.alphabet(), src.alphabet())) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(TupleEval { src, tuple: tuple.to_vec(), moments: HashMap::new(), cumulants: HashMap::new() })
    }

    pub fn len(&self) -> usize {
        self.tuple.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuple.is_empty()
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.tuple.len()) - 1
    }

    /// `φ̃` of the ordered product of the arguments in `mask`.
    pub fn moment(&mut self, mask: u32) -> Result<Dual> {
        if let Some(v) = self.moments.get(&mask) {
            return Ok(*v);
        }
        let prod = Poly::product(self.src.alphabet(), bits(mask).iter().map(|&i| &self.tuple[i]))?;
        let v = self.src.moment(&prod)?;
        self.moments.insert(mask, v);
        Ok(v)
    }

    /// `κ̃_m` of the arguments in `mask`, in increasing order.
    pub fn cumulant(&mut self, mask: u32) -> Result<Dual> {
        if let Some(v) = self.cumulants.get(&mask) {
            return Ok(*v);
        }
        let pos = bits(mask);
        let lat = nc::lattice(pos.len())?;
        let mu = lat.mobius_to_top()?;
        let mut acc = Dual::ZERO;
        for (i, &m) in mu.iter().enumerate() {
            let mut term = Dual::from_body(Complex64::new(m as f64, 0.0));
            for &rel in lat.masks(i) {
                term *= self.moment(spread(rel, &pos))?;
            }
            acc += term;
        }
        self.cumulants.insert(mask, acc);
        Ok(acc)
    }

    pub fn phi_blocks(&mut self, masks: &[u32]) -> Result<Dual> {
        masks.iter().try_fold(Dual::ONE, |acc, &m| Ok(acc * self.moment(m)?))
    }

    pub fn kappa_blocks(&mut self, masks: &[u32]) -> Result<Dual> {
        masks.iter().try_fold(Dual::ONE, |acc, &m| Ok(acc * self.cumulant(m)?))
    }

    /// Type-B moment functional: the soul of `φ̃` on the zero-block times
    /// bodies on the block pairs, or only bodies without a zero-block.
    pub fn phi_b(&mut self, t: &BPartition) -> Result<Complex64> {
        let mut acc = match t.zero_block_abs() {
            Some(z) => self.moment(block_mask(&z))?.soul,
            None => Complex64::new(1.0, 0.0),
        };
        for v in t.pair_blocks_abs() {
            acc *= self.moment(block_mask(&v))?.body;
        }
        Ok(acc)
    }

    /// Type-B cumulant functional, same recipe as [`Self::phi_b`].
    pub fn kappa_b(&mut self, t: &BPartition) -> Result<Complex64> {
        let mut acc = match t.zero_block_abs() {
            Some(z) => self.cumulant(block_mask(&z))?.soul,
            None => Complex64::new(1.0, 0.0),
        };
        for v in t.pair_blocks_abs() {
            acc *= self.cumulant(block_mask(&v))?.body;
        }
        Ok(acc)
    }
}

fn check_len(p: &Partition, t: &[Poly]) -> Result<()> {
    if p.n() != t.len() {
        return Err(Error::DimensionMismatch(format!("partition of {} for {} arguments", p.n(), t.len())));
    }
    Ok(())
}

fn check_b_len(tau: &BPartition, t: &[Poly]) -> Result<()> {
    if tau.n() != t.len() {
        return Err(Error::DimensionMismatch(format!("partition of ±{} for {} arguments", tau.n(), t.len())));
    }
    Ok(())
}

fn check_cumulant_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionMismatch("empty tuple".into()));
    }
    if n > MAX_CUMULANT_N {
        return Err(Error::SizeLimit { what: "cumulant order", n, max: MAX_CUMULANT_N });
    }
    Ok(())
}

/// `φ̃_π(a₁,…,aₙ) = Π_{V∈π} φ̃(Π_{i∈V} aᵢ)`.
pub fn phi_pi(src: &dyn MomentSource, p: &Partition, t: &[Poly]) -> Result<Dual> {
    check_len(p, t)?;
    TupleEval::new(src, t)?.phi_blocks(&p.masks())
}

/// `κ̃ₙ(a₁,…,aₙ) = Σ_π μ(π, 1ₙ) φ̃_π(a₁,…,aₙ)`.
pub fn kappa_n(src: &dyn MomentSource, t: &[Poly]) -> Result<Dual> {
    check_cumulant_len(t.len())?;
    let mut ev = TupleEval::new(src, t)?;
    let full = ev.full();
    ev.cumulant(full)
}

pub fn kappa_pi(src: &dyn MomentSource, p: &Partition, t: &[Poly]) -> Result<Dual> {
    check_len(p, t)?;
    TupleEval::new(src, t)?.kappa_blocks(&p.masks())
}

/// Monomials of the given generator indices.
pub fn generator_tuple(alphabet: &Arc<Alphabet>, letters: &[usize]) -> Vec<Poly> {
    letters.iter().map(|&l| Poly::generator(alphabet, l)).collect()
}

/// `κ̃ₙ` on a tuple of generators.
pub fn kappa_letters(src: &dyn MomentSource, letters: &[usize]) -> Result<Dual> {
    kappa_n(src, &generator_tuple(src.alphabet(), letters))
}

/// `κ′ₙ` as the formal derivative
/// `Σ_π μ(π,1ₙ) Σ_{V∈π} φ′(V) Π_{W≠V} φ(W)`.
pub fn inf_cumulant_formal(src: &dyn MomentSource, t: &[Poly]) -> Result<Complex64> {
    check_cumulant_len(t.len())?;
    let lat = nc::lattice(t.len())?;
    let mu = lat.mobius_to_top()?;
    let mut ev = TupleEval::new(src, t)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &m) in mu.iter().enumerate() {
        let factors = lat.masks(i).iter().map(|&b| ev.moment(b)).collect::<Result<Vec<_>>>()?;
        acc += soul_of_product(&factors) * m as f64;
    }
    Ok(acc)
}

/// `κ′ₙ = Σ_{τ ∈ NCZ^B(n)} μ_B(τ, 1_{±n}) φ^B_τ`.
pub fn inf_cumulant_typeb(src: &dyn MomentSource, t: &[Poly]) -> Result<Complex64> {
    check_cumulant_len(t.len())?;
    let n = t.len();
    let top = BPartition::one(n);
    let mut ev = TupleEval::new(src, t)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for tau in ncb::enumerate_ncz(n)? {
        let mu = ncb::mobius_b_zero(&tau, &top)?;
        if mu != 0 {
            acc += ev.phi_b(&tau)? * mu as f64;
        }
    }
    Ok(acc)
}

/// `κ′ₙ` as the central difference of body cumulants of `φ + tφ′` at 0.
pub fn inf_cumulant_numeric(src: &dyn MomentSource, t: &[Poly], h: f64) -> Result<Complex64> {
    if h <= 0.0 {
        return Err(Error::InvalidParameter(format!("step {h} must be positive")));
    }
    let plus = kappa_n(&ScalarPath::new(src, h), t)?.body;
    let minus = kappa_n(&ScalarPath::new(src, -h), t)?.body;
    Ok((plus - minus) / (2.0 * h))
}

pub fn phi_b(src: &dyn MomentSource, tau: &BPartition, t: &[Poly]) -> Result<Complex64> {
    check_b_len(tau, t)?;
    TupleEval::new(src, t)?.phi_b(tau)
}

pub fn kappa_b(src: &dyn MomentSource, tau: &BPartition, t: &[Poly]) -> Result<Complex64> {
    check_b_len(tau, t)?;
    TupleEval::new(src, t)?.kappa_b(tau)
}

/// Both sides of `φ′(a₁⋯aₙ) = Σ_{σ ∈ NCZ^B(n)} κ^B_σ(a₁,…,aₙ)`.
pub fn phi_prime_typeb(src: &dyn MomentSource, t: &[Poly]) -> Result<(Complex64, Complex64)> {
    check_cumulant_len(t.len())?;
    let mut ev = TupleEval::new(src, t)?;
    let lhs = ev.moment(ev.full())?.soul;
    let mut rhs = Complex64::new(0.0, 0.0);
    for s in ncb::enumerate_ncz(t.len())? {
        rhs += ev.kappa_b(&s)?;
    }
    Ok((lhs, rhs))
}

/// Grassmann moment-cumulant formula `φ̃(a₁⋯aₙ) = Σ_π κ̃_π(a₁,…,aₙ)`,
/// returned as (left side, right side).
pub fn moment_cumulant_sides(src: &dyn MomentSource, t: &[Poly]) -> Result<(Dual, Dual)> {
    check_cumulant_len(t.len())?;
    let lat = nc::lattice(t.len())?;
    let mut ev = TupleEval::new(src, t)?;
    let lhs = ev.moment(ev.full())?;
    let mut rhs = Dual::ZERO;
    for i in 0..lat.partitions().len() {
        rhs += ev.kappa_blocks(lat.masks(i))?;
    }
    Ok((lhs, rhs))
}

/// Cumulants with products as arguments: `κ̃ₘ` of consecutive products of
/// `x` grouped by `sizes`, and `Σ_{π ∨ θ = 1ₛ} κ̃_π(x)` for the interval
/// partition `θ` with those block sizes.
pub fn product_cumulant_sides(src: &dyn MomentSource, x: &[Poly], sizes: &[usize]) -> Result<(Dual, Dual)> {
    let theta = Partition::interval(sizes)?;
    check_len(&theta, x)?;
    let grouped = theta
        .blocks()
        .iter()
        .map(|b| Poly::product(src.alphabet(), b.iter().map(|&i| &x[i - 1])))
        .collect::<Result<Vec<_>>>()?;
    let lhs = kappa_n(src, &grouped)?;
    let s = x.len();
    let one = Partition::one(s);
    let mut ev = TupleEval::new(src, x)?;
    let mut rhs = Dual::ZERO;
    for p in nc::enumerate_nc(s)? {
        if p.join(&theta)? == one {
            rhs += ev.kappa_blocks(&p.masks())?;
        }
    }
    Ok((lhs, rhs))
}

pub fn product_cumulant_check(src: &dyn MomentSource, x: &[Poly], sizes: &[usize], tol: f64) -> Result<bool> {
    let (l, r) = product_cumulant_sides(src, x, sizes)?;
    Ok(l.approx_eq(r, tol))
}

fn interleave(src: &dyn MomentSource, a: &[Poly], b: &[Poly]) -> Result<Vec<Poly>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} arguments", a.len(), b.len())));
    }
    a.iter().zip(b).map(|(x, y)| x.mul(y)).collect::<Result<Vec<_>>>().and_then(|v| {
        if v.iter().any(|p| !same_alphabet(p.alphabet(), src.alphabet())) {
            Err(Error::AlphabetMismatch)
        } else {
            Ok(v)
        }
    })
}

/// Both sides of `φ̃(a₁b₁⋯aₙbₙ) = Σ_π κ̃_π(a) φ̃_{Kr π}(b)`.
pub fn alternating_moment_g(src: &dyn MomentSource, a: &[Poly], b: &[Poly]) -> Result<(Dual, Dual)> {
    let ab = interleave(src, a, b)?;
    check_cumulant_len(a.len())?;
    let lhs = src.moment(&Poly::product(src.alphabet(), ab.iter())?)?;
    let mut ea = TupleEval::new(src, a)?;
    let mut eb = TupleEval::new(src, b)?;
    let mut rhs = Dual::ZERO;
    for p in nc::enumerate_nc(a.len())? {
        rhs += ea.kappa_blocks(&p.masks())? * eb.phi_blocks(&p.kreweras().masks())?;
    }
    Ok((lhs, rhs))
}

/// Both sides of `κ̃ₙ(a₁b₁,…,aₙbₙ) = Σ_π κ̃_π(a) κ̃_{Kr π}(b)`.
pub fn alternating_cumulant_g(src: &dyn MomentSource, a: &[Poly], b: &[Poly]) -> Result<(Dual, Dual)> {
    let ab = interleave(src, a, b)?;
    check_cumulant_len(a.len())?;
    let lhs = kappa_n(src, &ab)?;
    let mut ea = TupleEval::new(src, a)?;
    let mut eb = TupleEval::new(src, b)?;
    let mut rhs = Dual::ZERO;
    for p in nc::enumerate_nc(a.len())? {
        rhs += ea.kappa_blocks(&p.masks())? * eb.kappa_blocks(&p.kreweras().masks())?;
    }
    Ok((lhs, rhs))
}

/// Both sides of `φ′(a₁b₁⋯aₙbₙ) = Σ_{σ ∈ NC^B(n)} κ^B_σ(a) φ^B_{Kr σ}(b)`.
pub fn alternating_moment_b(src: &dyn MomentSource, a: &[Poly], b: &[Poly]) -> Result<(Complex64, Complex64)> {
    let ab = interleave(src, a, b)?;
    check_cumulant_len(a.len())?;
    let lhs = src.moment(&Poly::product(src.alphabet(), ab.iter())?)?.soul;
    let mut ea = TupleEval::new(src, a)?;
    let mut eb = TupleEval::new(src, b)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for s in ncb::enumerate_ncb(a.len())? {
        rhs += ea.kappa_b(s)? * eb.phi_b(&s.kreweras_b())?;
    }
    Ok((lhs, rhs))
}

/// Both sides of `κ′ₙ(a₁b₁,…,aₙbₙ) = Σ_{σ ∈ NC^B(n)} κ^B_σ(a) κ^B_{Kr σ}(b)`.
pub fn alternating_cumulant_b(src: &dyn MomentSource, a: &[Poly], b: &[Poly]) -> Result<(Complex64, Complex64)> {
    let ab = interleave(src, a, b)?;
    check_cumulant_len(a.len())?;
    let lhs = kappa_n(src, &ab)?.soul;
    let mut ea = TupleEval::new(src, a)?;
    let mut eb = TupleEval::new(src, b)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for s in ncb::enumerate_ncb(a.len())? {
        rhs += ea.kappa_b(s)? * eb.kappa_b(&s.kreweras_b())?;
    }
    Ok((lhs, rhs))
}

/// The fiber-by-fiber form of [`alternating_moment_b`]: for a fixed `π`,
/// `So(κ̃_π(a) φ̃_{Kr π}(b)) = Σ_{Abs τ = π} κ^B_τ(a) φ^B_{Kr τ}(b)`.
pub fn alternating_fiber_sides(
    src: &dyn MomentSource,
    p: &Partition,
    a: &[Poly],
    b: &[Poly],
) -> Result<(Complex64, Complex64)> {
    check_len(p, a)?;
    check_len(p, b)?;
    let mut ea = TupleEval::new(src, a)?;
    let mut eb = TupleEval::new(src, b)?;
    let lhs = (ea.kappa_blocks(&p.masks())? * eb.phi_blocks(&p.kreweras().masks())?).soul;
    let mut rhs = Complex64::new(0.0, 0.0);
    for t in ncb::fiber(p) {
        rhs += ea.kappa_b(&t)? * eb.phi_b(&t.kreweras_b())?;
    }
    Ok((lhs, rhs))
}

/// `κ̃` on every generator tuple up to `degree`.
pub fn cumulant_spec(src: &dyn MomentSource, degree: usize) -> Result<CumulantSpec> {
    check_cumulant_len(degree)?;
    let alphabet = src.alphabet().clone();
    let entries = tuples_up_to(alphabet.len(), degree)
        .into_iter()
        .map(|t| kappa_letters(src, &t).map(|v| (t, v)))
        .collect::<Result<Vec<_>>>()?;
    CumulantSpec::new(alphabet, degree, entries)
}

/// `φ̃(w) = Σ_{π ∈ NC(|w|)} Π_V κ̃(w|V)` on every normalized word.
pub fn moments_from_cumulants(spec: &CumulantSpec) -> Result<State> {
    let alphabet = spec.alphabet().clone();
    let mut entries = Vec::new();
    for w in alphabet.words_up_to(spec.degree()) {
        if w.is_empty() {
            continue;
        }
        let v = recompose(w.letters(), |t| spec.get(t))?;
        entries.push((w, v));
    }
    State::new(alphabet, spec.degree(), entries)
}

/// Sum over NC(m) of products of `cumulant` on the restricted letter tuples.
pub(crate) fn recompose(letters: &[usize], mut cumulant: impl FnMut(&[usize]) -> Result<Dual>) -> Result<Dual> {
    let lat = nc::lattice(letters.len())?;
    let mut memo: HashMap<u32, Dual> = HashMap::new();
    let mut acc = Dual::ZERO;
    'parts: for i in 0..lat.partitions().len() {
        let mut term = Dual::ONE;
        for &m in lat.masks(i) {
            let k = match memo.get(&m) {
                Some(k) => *k,
                None => {
                    let sub: Vec<usize> = bits(m).iter().map(|&j| letters[j]).collect();
                    let k = cumulant(&sub)?;
                    memo.insert(m, k);
                    k
                }
            };
            if k == Dual::ZERO {
                continue 'parts;
            }
            term *= k;
        }
        acc += term;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Relation;
    use rand::{rngs::StdRng, SeedableRng};

    fn free_state(k: usize, degree: usize, seed: u64) -> State {
        let names: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
        let a = Arc::new(Alphabet::free(&names).unwrap());
        State::random(a, degree, &mut StdRng::seed_from_u64(seed))
    }

    #[test]
    fn first_two_cumulants() {
        let s = free_state(2, 3, 7);
        let a = s.alphabet().clone();
        let m = |l: &[usize]| s.moment(&Poly::monomial(&a, l)).unwrap();
        assert!(kappa_letters(&s, &[0]).unwrap().approx_eq(m(&[0]), 1e-14));
        let k2 = m(&[0, 1]) - m(&[0]) * m(&[1]);
        assert!(kappa_letters(&s, &[0, 1]).unwrap().approx_eq(k2, 1e-14));
    }

    #[test]
    fn four_routes_agree() {
        for seed in 0..5 {
            let s = free_state(2, 5, seed);
            for t in [vec![0], vec![0, 1], vec![1, 0, 1], vec![0, 0, 1, 1], vec![1, 0, 0, 1, 0]] {
                let tup = generator_tuple(s.alphabet(), &t);
                let soul = kappa_n(&s, &tup).unwrap().soul;
                assert!((inf_cumulant_formal(&s, &tup).unwrap() - soul).norm() < 1e-10);
                assert!((inf_cumulant_typeb(&s, &tup).unwrap() - soul).norm() < 1e-10);
                assert!((inf_cumulant_numeric(&s, &tup, DEFAULT_STEP).unwrap() - soul).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn spec_round_trip() {
        let s = free_state(2, 4, 3);
        let spec = cumulant_spec(&s, 4).unwrap();
        let back = moments_from_cumulants(&spec).unwrap();
        for (w, v) in s.table() {
            assert!(back.table()[w].approx_eq(*v, 1e-12));
        }
    }

    #[test]
    fn incomplete_spec_is_reported() {
        let a = Arc::new(Alphabet::free(&["x"]).unwrap());
        let spec = CumulantSpec::new(a, 2, [(vec![0], Dual::ONE)]).unwrap();
        assert!(matches!(moments_from_cumulants(&spec), Err(Error::IncompleteSpec(_))));
    }

    #[test]
    fn size_limit() {
        let s = free_state(1, 10, 1);
        let t = generator_tuple(s.alphabet(), &[0; 10]);
        assert!(matches!(kappa_n(&s, &t), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn involution_words_reduce_inside_products() {
        let a = Arc::new(Alphabet::with_relation(&["u"], Relation::Involution).unwrap());
        let s = State::random(a.clone(), 1, &mut StdRng::seed_from_u64(2));
        // κ̃₂(u,u) = φ̃(1) − φ̃(u)²
        let u = s.table()[&a.normalize(&[0])];
        let k = kappa_letters(&s, &[0, 0]).unwrap();
        assert!(k.approx_eq(Dual::ONE - u * u, 1e-14));
    }
}
