//! Type-B non-crossing partitions: symmetric non-crossing partitions of
//! `1 < … < n < −1 < … < −n`.
//!
//! A `BPartition` is stored as its image in NC(2n) under the positions
//! `i ↦ i` and `−i ↦ n + i`, so order and Kreweras complement are inherited
//! from the type-A lattice.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::nc::{self, blocks_cross, enumerate_nc, mobius_a, Partition};

/// Largest `n` for which NC^B(n) is enumerated.
pub const MAX_N: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BPartition {
    n: usize,
    inner: Partition,
}

fn position(x: i64, n: usize) -> Result<usize> {
    let a = x.unsigned_abs() as usize;
    if x == 0 || a > n {
        return Err(Error::InvalidPartition(format!("element {x} is outside ±1..±{n}")));
    }
    Ok(if x > 0 { a } else { n + a })
}

fn signed(q: usize, n: usize) -> i64 {
    if q <= n {
        q as i64
    } else {
        -((q - n) as i64)
    }
}

fn negate(q: usize, n: usize) -> usize {
    if q <= n {
        q + n
    } else {
        q - n
    }
}

impl BPartition {
    pub fn new(n: usize, blocks: Vec<Vec<i64>>) -> Result<Self> {
        let pos = blocks
            .iter()
            .map(|b| b.iter().map(|&x| position(x, n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let inner = Partition::new(2 * n, pos)?;
        Self::from_type_a(n, inner)
    }

    /// Wraps a partition of NC(2n), checking symmetry.
    pub fn from_type_a(n: usize, inner: Partition) -> Result<Self> {
        if inner.n() != 2 * n {
            return Err(Error::DimensionMismatch(format!("NC({}) is not NC(±{n})", inner.n())));
        }
        let lab = inner.labels();
        let mut zero_blocks = 0;
        for b in inner.blocks() {
            let target = lab[negate(b[0], n) - 1];
            if b.iter().any(|&q| lab[negate(q, n) - 1] != target) {
                return Err(Error::InvalidPartition("partition is not symmetric".into()));
            }
            if lab[b[0] - 1] == target {
                zero_blocks += 1;
            }
        }
        if zero_blocks > 1 {
            return Err(Error::InvalidPartition("more than one zero-block".into()));
        }
        Ok(BPartition { n, inner })
    }

    pub fn zero(n: usize) -> Self {
        BPartition { n, inner: Partition::zero(2 * n) }
    }

    /// `1_{±n}`, a single zero-block.
    pub fn one(n: usize) -> Self {
        BPartition { n, inner: Partition::one(2 * n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The image in NC(2n).
    pub fn as_type_a(&self) -> &Partition {
        &self.inner
    }

    /// Blocks in circular order, as signed integers.
    pub fn blocks(&self) -> Vec<Vec<i64>> {
        self.inner
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&q| signed(q, self.n)).collect())
            .collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.inner.num_blocks()
    }

    fn is_zero_block(&self, b: &[usize]) -> bool {
        b.contains(&negate(b[0], self.n))
    }

    pub fn zero_block(&self) -> Option<Vec<i64>> {
        self.inner
            .blocks()
            .iter()
            .find(|b| self.is_zero_block(b))
            .map(|b| b.iter().map(|&q| signed(q, self.n)).collect())
    }

    pub fn has_zero_block(&self) -> bool {
        self.inner.blocks().iter().any(|b| self.is_zero_block(b))
    }

    /// Absolute values of the zero-block, increasing.
    pub fn zero_block_abs(&self) -> Option<Vec<usize>> {
        self.zero_block().map(|z| {
            let mut a: Vec<usize> = z.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect();
            a.sort_unstable();
            a
        })
    }

    /// One representative `|V|` per pair `{V, −V}` of non-zero blocks.
    pub fn pair_blocks_abs(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for b in self.inner.blocks() {
            if self.is_zero_block(b) {
                continue;
            }
            let mut a: Vec<usize> = b.iter().map(|&q| if q <= self.n { q } else { q - self.n }).collect();
            a.sort_unstable();
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out.sort();
        out
    }

    /// Blockwise absolute value, a partition in NC(n).
    pub fn abs_map(&self) -> Partition {
        let mut blocks = self.pair_blocks_abs();
        blocks.extend(self.zero_block_abs());
        Partition::new(self.n, blocks).expect("absolute value of a type-B partition is non-crossing")
    }

    pub fn leq(&self, other: &BPartition) -> bool {
        self.n == other.n && self.inner.leq(&other.inner)
    }

    /// Kreweras complement taken in NC(2n).
    pub fn kreweras_b(&self) -> BPartition {
        BPartition::from_type_a(self.n, self.inner.kreweras())
            .expect("Kreweras complement of a symmetric partition is symmetric")
    }
}

impl fmt::Display for BPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.blocks() {
            let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for BPartition {
    type Err = Error;

    /// Parses `{1,-3}{3,-1}{2,-2}`; `n` is the largest absolute value.
    fn from_str(s: &str) -> Result<Self> {
        let blocks = nc::parse_blocks::<i64>(s)?;
        let n = blocks.iter().flatten().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0);
        BPartition::new(n, blocks)
    }
}

/// All `τ` in NC^B(n) with `Abs(τ) = p`, found by choosing an optional
/// zero-block among the blocks of `p` and backtracking over sign patterns of
/// the remaining blocks.
pub fn fiber(p: &Partition) -> Vec<BPartition> {
    let mut out = fiber_with_zero(p, None);
    for b in p.blocks() {
        out.extend(fiber_with_zero(p, Some(b)));
    }
    out.sort();
    out
}

/// The unique `τ` in the fiber over `p` whose zero-block is `v ∪ −v`.
pub fn zero_block_lift(p: &Partition, v: &[usize]) -> Result<BPartition> {
    if !p.contains_block(v) {
        return Err(Error::BlockNotInPartition);
    }
    let mut b = v.to_vec();
    b.sort_unstable();
    let mut lifts = fiber_with_zero(p, Some(&b));
    match lifts.len() {
        1 => Ok(lifts.remove(0)),
        k => unreachable!("zero-block lift is unique, found {k}"),
    }
}

fn fiber_with_zero(p: &Partition, zero: Option<&Vec<usize>>) -> Vec<BPartition> {
    let n = p.n();
    let mut placed: Vec<Vec<usize>> = Vec::new();
    if let Some(v) = zero {
        let mut z: Vec<usize> = v.iter().flat_map(|&x| [x, x + n]).collect();
        z.sort_unstable();
        placed.push(z);
    }
    let rest: Vec<&Vec<usize>> = p.blocks().iter().filter(|b| Some(*b) != zero).collect();
    let mut out = Vec::new();
    backtrack(n, &rest, &mut placed, &mut out);
    out
}

fn backtrack(n: usize, rest: &[&Vec<usize>], placed: &mut Vec<Vec<usize>>, out: &mut Vec<BPartition>) {
    let Some((block, tail)) = rest.split_first() else {
        let inner = Partition::new(2 * n, placed.clone()).expect("placed blocks are non-crossing");
        out.push(BPartition::from_type_a(n, inner).expect("lift is symmetric"));
        return;
    };
    // The smallest element keeps its sign; the mirror block covers the other choice.
    for signs in 0u32..(1 << (block.len() - 1)) {
        let mut pos: Vec<usize> = block
            .iter()
            .enumerate()
            .map(|(i, &x)| if i > 0 && signs >> (i - 1) & 1 == 1 { x + n } else { x })
            .collect();
        pos.sort_unstable();
        let mut mirror: Vec<usize> = pos.iter().map(|&q| negate(q, n)).collect();
        mirror.sort_unstable();
        if blocks_cross(&pos, &mirror) || placed.iter().any(|b| blocks_cross(b, &pos) || blocks_cross(b, &mirror)) {
            continue;
        }
        placed.push(pos);
        placed.push(mirror);
        backtrack(n, tail, placed, out);
        placed.pop();
        placed.pop();
    }
}

static NCB: [OnceLock<Vec<BPartition>>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];

/// NC^B(n), assembled as the union of the fibers over NC(n).
pub fn enumerate_ncb(n: usize) -> Result<&'static [BPartition]> {
    if n > MAX_N {
        return Err(Error::SizeLimit { what: "NC^B(n)", n, max: MAX_N });
    }
    if n == 0 {
        return Err(Error::InvalidPartition("n must be positive".into()));
    }
    Ok(NCB[n].get_or_init(|| {
        let mut all: Vec<BPartition> = enumerate_nc(n).expect("n is in range").iter().flat_map(fiber).collect();
        all.sort();
        all
    }))
}

/// The elements of NC^B(n) that have a zero-block.
pub fn enumerate_ncz(n: usize) -> Result<Vec<BPartition>> {
    Ok(enumerate_ncb(n)?.iter().filter(|t| t.has_zero_block()).cloned().collect())
}

/// Möbius function between partitions with zero-blocks, through the
/// type-A lattice: `μ_B(σ, τ) = μ_A(Abs σ, Abs τ)`.
pub fn mobius_b_zero(s: &BPartition, t: &BPartition) -> Result<i64> {
    if !s.has_zero_block() || !t.has_zero_block() {
        return Err(Error::NoZeroBlock);
    }
    if !s.leq(t) {
        return Err(Error::NotComparable);
    }
    mobius_a(&s.abs_map(), &t.abs_map())
}
