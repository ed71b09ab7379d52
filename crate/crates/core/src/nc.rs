//! The lattice NC(n) of non-crossing partitions of `1..=n`, ordered by
//! reverse refinement.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest `n` for which NC(n) is enumerated.
pub const MAX_N: usize = 12;
/// Largest `n` for which the Möbius values `μ(π, 1ₙ)` are tabulated.
pub const MAX_MOBIUS_N: usize = 9;

/// A non-crossing partition of `1..=n`. Blocks are increasing and sorted by
/// their minimum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::canonical(n, blocks)?;
        if let Some((a, b)) = first_crossing(&p.blocks) {
            return Err(Error::InvalidPartition(format!(
                "blocks {:?} and {:?} cross",
                p.blocks[a], p.blocks[b]
            )));
        }
        Ok(p)
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("n must be positive".into()));
        }
        let mut seen = vec![false; n + 1];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::InvalidPartition(format!("element {x} is out of range or repeated")));
                }
                seen[x] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::InvalidPartition(format!("blocks do not cover 1..{n}")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { n, blocks })
    }

    /// The finest partition `0ₙ`.
    pub fn zero(n: usize) -> Self {
        Partition { n, blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    /// The coarsest partition `1ₙ`.
    pub fn one(n: usize) -> Self {
        Partition { n, blocks: vec![(1..=n).collect()] }
    }

    /// The interval partition with consecutive blocks of the given sizes.
    pub fn interval(sizes: &[usize]) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut start = 1;
        for &s in sizes {
            blocks.push((start..start + s).collect());
            start += s;
        }
        Partition::new(start - 1, blocks)
    }

    /// `{1,n},{2,n−1},…,{(n+1)/2}` for odd `n`.
    pub fn rainbow_with_center(n: usize) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::EvenInput(n));
        }
        let mut blocks: Vec<Vec<usize>> = (1..=n / 2).map(|i| vec![i, n + 1 - i]).collect();
        blocks.push(vec![n / 2 + 1]);
        Partition::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of each element, indexed by `element - 1`.
    pub fn labels(&self) -> Vec<usize> {
        let mut lab = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                lab[x - 1] = i;
            }
        }
        lab
    }

    /// Each block as a bitmask over positions `0..n`.
    pub fn masks(&self) -> Vec<u32> {
        self.blocks.iter().map(|b| b.iter().fold(0u32, |m, &x| m | 1 << (x - 1))).collect()
    }

    pub fn contains_block(&self, block: &[usize]) -> bool {
        let mut b = block.to_vec();
        b.sort_unstable();
        self.blocks.contains(&b)
    }

    /// `self ≤ other`: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Partition) -> bool {
        if self.n != other.n {
            return false;
        }
        let lab = other.labels();
        self.blocks.iter().all(|b| b.iter().all(|&x| lab[x - 1] == lab[b[0] - 1]))
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.same_n(other)?;
        let lab = other.labels();
        let mut blocks = Vec::new();
        for b in &self.blocks {
            let mut parts: HashMap<usize, Vec<usize>> = HashMap::new();
            for &x in b {
                parts.entry(lab[x - 1]).or_default().push(x);
            }
            blocks.extend(parts.into_values());
        }
        Partition::new(self.n, blocks)
    }

    /// Least upper bound in NC(n): the set-partition join, then blocks that
    /// cross are merged until none do.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.same_n(other)?;
        let mut uf: Vec<usize> = (0..self.n).collect();
        for b in self.blocks.iter().chain(other.blocks.iter()) {
            for w in b.windows(2) {
                union(&mut uf, w[0] - 1, w[1] - 1);
            }
        }
        loop {
            let blocks = classes(&mut uf);
            match first_crossing(&blocks) {
                None => return Partition::new(self.n, blocks),
                Some((a, b)) => union(&mut uf, blocks[a][0] - 1, blocks[b][0] - 1),
            }
        }
    }

    /// Kreweras complement, via the permutation `π⁻¹ ∘ γ` with
    /// `γ = (1 2 … n)` and each block of `π` read as an increasing cycle.
    pub fn kreweras(&self) -> Partition {
        let n = self.n;
        let mut pi_inv = vec![0usize; n];
        for b in &self.blocks {
            for k in 0..b.len() {
                let from = b[k] - 1;
                let to = b[(k + 1) % b.len()] - 1;
                pi_inv[to] = from;
            }
        }
        let perm: Vec<usize> = (0..n).map(|i| pi_inv[(i + 1) % n]).collect();
        let blocks = cycles(&perm);
        Partition::canonical(n, blocks).expect("cycles cover 1..n")
    }

    /// Image under the rotation `i ↦ i + 1 (mod n)`.
    pub fn cyclic_rotate(&self) -> Partition {
        let n = self.n;
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| x % n + 1).collect()).collect();
        Partition::canonical(n, blocks).expect("rotation is a bijection")
    }

    fn same_n(&self, other: &Partition) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("NC({}) vs NC({})", self.n, other.n)));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `{1,3}{2}`; `n` is the largest element.
    fn from_str(s: &str) -> Result<Self> {
        let blocks = parse_blocks::<usize>(s)?;
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        Partition::new(n, blocks)
    }
}

/// Parses a brace-delimited block list such as `{1,-3}{2,-2}`.
pub(crate) fn parse_blocks<T: FromStr>(s: &str) -> Result<Vec<Vec<T>>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = s.as_str();
    let mut blocks = Vec::new();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('{')
            .and_then(|r| r.split_once('}'))
            .ok_or_else(|| Error::Parse(format!("expected '{{...}}' in {s:?}")))?;
        let block = inner
            .0
            .split(',')
            .map(|t| t.parse::<T>().map_err(|_| Error::Parse(format!("bad element {t:?}"))))
            .collect::<Result<Vec<T>>>()?;
        blocks.push(block);
        rest = inner.1;
    }
    if blocks.is_empty() {
        return Err(Error::Parse("empty partition".into()));
    }
    Ok(blocks)
}

fn union(uf: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(uf, a), find(uf, b));
    if ra != rb {
        uf[ra.max(rb)] = ra.min(rb);
    }
}

fn find(uf: &mut [usize], mut a: usize) -> usize {
    while uf[a] != a {
        uf[a] = uf[uf[a]];
        a = uf[a];
    }
    a
}

fn classes(uf: &mut [usize]) -> Vec<Vec<usize>> {
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); uf.len()];
    for x in 0..uf.len() {
        let r = find(uf, x);
        by_root[r].push(x + 1);
    }
    by_root.into_iter().filter(|b| !b.is_empty()).collect()
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i + 1);
            i = perm[i];
        }
        out.push(cyc);
    }
    out
}

/// Two blocks cross iff, read along `1..n`, their elements alternate in at
/// least four runs.
pub(crate) fn blocks_cross(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j, mut runs, mut last) = (0, 0, 0, 2u8);
    while i < a.len() || j < b.len() {
        let side = if j == b.len() || (i < a.len() && a[i] < b[j]) {
            i += 1;
            0
        } else {
            j += 1;
            1
        };
        if side != last {
            runs += 1;
            last = side;
        }
    }
    runs >= 4
}

/// Indices of the first pair of crossing blocks, if any. Blocks must be sorted.
pub(crate) fn first_crossing(blocks: &[Vec<usize>]) -> Option<(usize, usize)> {
    let mut sorted: Vec<Vec<usize>> = blocks.to_vec();
    for b in &mut sorted {
        b.sort_unstable();
    }
    for a in 0..sorted.len() {
        for b in a + 1..sorted.len() {
            if blocks_cross(&sorted[a], &sorted[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// True when no two of the given blocks cross.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> bool {
    first_crossing(blocks).is_none()
}

/// All non-crossing partitions of the positions `0..len`, as index sets.
fn shapes(len: usize, memo: &mut HashMap<usize, Vec<Vec<Vec<usize>>>>) -> Vec<Vec<Vec<usize>>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    if let Some(v) = memo.get(&len) {
        return v.clone();
    }
    let mut out = Vec::new();
    // The block of position 0 picks a subset of 1..len; the gaps between its
    // members are filled independently.
    for subset in 0u32..(1 << (len - 1)) {
        let members: Vec<usize> =
            std::iter::once(0).chain((1..len).filter(|i| subset >> (i - 1) & 1 == 1)).collect();
        let mut gaps: Vec<(usize, usize)> = Vec::new();
        for w in members.windows(2) {
            gaps.push((w[0] + 1, w[1]));
        }
        gaps.push((members[members.len() - 1] + 1, len));
        let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![members.clone()]];
        for (lo, hi) in gaps {
            if lo == hi {
                continue;
            }
            let inner = shapes(hi - lo, memo);
            let mut next = Vec::with_capacity(partial.len() * inner.len());
            for p in &partial {
                for q in &inner {
                    let mut r = p.clone();
                    r.extend(q.iter().map(|b| b.iter().map(|x| x + lo).collect::<Vec<_>>()));
                    next.push(r);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    memo.insert(len, out.clone());
    out
}

/// NC(n) together with cached block masks and the Möbius values to the top.
pub struct NcLattice {
    n: usize,
    parts: Vec<Partition>,
    masks: Vec<Vec<u32>>,
    index: HashMap<Partition, usize>,
    mobius_top: OnceLock<Vec<i64>>,
}

impl NcLattice {
    fn build(n: usize) -> Self {
        let mut parts: Vec<Partition> = shapes(n, &mut HashMap::new())
            .into_iter()
            .map(|bs| {
                let blocks = bs.into_iter().map(|b| b.into_iter().map(|x| x + 1).collect()).collect();
                Partition::canonical(n, blocks).expect("shapes cover 0..n")
            })
            .collect();
        parts.sort();
        let masks = parts.iter().map(|p| p.masks()).collect();
        let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        NcLattice { n, parts, masks, index, mobius_top: OnceLock::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn masks(&self, i: usize) -> &[u32] {
        &self.masks[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `μ(π, 1ₙ)` for every `π`, aligned with [`Self::partitions`], computed
    /// by `μ(π,1) = −Σ_{π<ρ≤1} μ(ρ,1)`.
    pub fn mobius_to_top(&self) -> Result<&[i64]> {
        if self.n > MAX_MOBIUS_N {
            return Err(Error::SizeLimit { what: "Möbius table NC(n)", n: self.n, max: MAX_MOBIUS_N });
        }
        Ok(self.mobius_top.get_or_init(|| {
            let mut order: Vec<usize> = (0..self.parts.len()).collect();
            order.sort_by_key(|&i| self.parts[i].num_blocks());
            let mut mu = vec![0i64; self.parts.len()];
            for (k, &i) in order.iter().enumerate() {
                let p = &self.parts[i];
                let mut s = 0;
                for &j in &order[..k] {
                    if self.parts[j].num_blocks() < p.num_blocks() && p.leq(&self.parts[j]) {
                        s += mu[j];
                    }
                }
                mu[i] = if k == 0 { 1 } else { -s };
            }
            mu
        }))
    }
}

static LATTICES: [OnceLock<NcLattice>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];

pub fn lattice(n: usize) -> Result<&'static NcLattice> {
    if n > MAX_N {
        return Err(Error::SizeLimit { what: "NC(n)", n, max: MAX_N });
    }
    if n == 0 {
        return Err(Error::InvalidPartition("n must be positive".into()));
    }
    Ok(LATTICES[n].get_or_init(|| NcLattice::build(n)))
}

/// NC(n) in lexicographic order of block lists.
pub fn enumerate_nc(n: usize) -> Result<&'static [Partition]> {
    Ok(lattice(n)?.partitions())
}

type MobiusKey = (Partition, Partition);
static MOBIUS_MEMO: OnceLock<Mutex<HashMap<MobiusKey, i64>>> = OnceLock::new();

/// `μ(π, σ)` by the recursion `μ(π,π) = 1`, `μ(π,σ) = −Σ_{π≤ρ<σ} μ(π,ρ)`.
pub fn mobius_a(p: &Partition, q: &Partition) -> Result<i64> {
    p.same_n(q)?;
    if !p.leq(q) {
        return Err(Error::NotComparable);
    }
    let memo = MOBIUS_MEMO.get_or_init(Default::default);
    if let Some(&v) = memo.lock().expect("memo poisoned").get(&(p.clone(), q.clone())) {
        return Ok(v);
    }
    let mut interval: Vec<&Partition> =
        enumerate_nc(p.n)?.iter().filter(|r| p.leq(r) && r.leq(q)).collect();
    interval.sort_by_key(|r| std::cmp::Reverse(r.num_blocks()));
    let mut mu: Vec<i64> = Vec::with_capacity(interval.len());
    for (k, r) in interval.iter().enumerate() {
        let v = if k == 0 {
            1
        } else {
            -(0..k)
                .filter(|&j| interval[j].num_blocks() > r.num_blocks() && interval[j].leq(r))
                .map(|j| mu[j])
                .sum::<i64>()
        };
        mu.push(v);
    }
    let mut guard = memo.lock().expect("memo poisoned");
    for (r, v) in interval.iter().zip(&mu) {
        guard.insert((p.clone(), (*r).clone()), *v);
    }
    Ok(guard[&(p.clone(), q.clone())])
}

/// Labelling of the positions of a tuple, e.g. by the subalgebra each
/// argument comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping {
    labels: Vec<usize>,
}

impl Grouping {
    pub fn new(labels: Vec<usize>) -> Self {
        Grouping { labels }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// True when the labels are not all equal.
    pub fn is_mixed(&self) -> bool {
        self.labels.windows(2).any(|w| w[0] != w[1])
    }

    /// True when every block of `p` carries a single label.
    pub fn is_refined_by(&self, p: &Partition) -> bool {
        p.n() == self.labels.len()
            && p.blocks().iter().all(|b| b.iter().all(|&x| self.labels[x - 1] == self.labels[b[0] - 1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Brute force: every set partition of 1..n with no crossing quadruple.
    fn nc_by_filter(n: usize) -> Vec<Partition> {
        fn rgs(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let m = cur.iter().copied().max().map_or(0, |m| m + 1);
            for v in 0..=m {
                cur.push(v);
                rgs(n, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        rgs(n, &mut Vec::new(), &mut all);
        let mut out: Vec<Partition> = all
            .into_iter()
            .filter(|lab| {
                for a in 0..n {
                    for b in a + 1..n {
                        for c in b + 1..n {
                            for d in c + 1..n {
                                if lab[a] == lab[c] && lab[b] == lab[d] && lab[a] != lab[b] {
                                    return false;
                                }
                            }
                        }
                    }
                }
                true
            })
            .map(|lab| {
                let k = lab.iter().max().unwrap() + 1;
                let mut blocks = vec![Vec::new(); k];
                for (i, l) in lab.iter().enumerate() {
                    blocks[*l].push(i + 1);
                }
                Partition::new(n, blocks).unwrap()
            })
            .collect();
        out.sort();
        out
    }

    fn catalan(n: usize) -> i64 {
        (0..n).fold(1i64, |c, k| c * 2 * (2 * k as i64 + 1) / (k as i64 + 2))
    }

    #[test]
    fn enumeration_matches_filter_oracle() {
        for n in 1..=8 {
            assert_eq!(enumerate_nc(n).unwrap(), nc_by_filter(n).as_slice(), "n = {n}");
        }
    }

    #[test]
    fn catalan_counts_up_to_twelve() {
        for n in 1..=MAX_N {
            assert_eq!(enumerate_nc(n).unwrap().len() as i64, catalan(n));
        }
        assert!(matches!(enumerate_nc(13), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let q = p("{3}{1,2}");
        assert_eq!(q.to_string(), "{1,2}{3}");
        assert!("{1,3}{2,4}".parse::<Partition>().is_err());
        assert!("{1,3}".parse::<Partition>().is_err());
    }

    #[test]
    fn kreweras_examples() {
        assert_eq!(p("{1,2}{3}").kreweras(), p("{1}{2,3}"));
        assert_eq!(Partition::zero(4).kreweras(), Partition::one(4));
        assert_eq!(Partition::one(4).kreweras(), Partition::zero(4));
    }

    /// Kreweras complement as the coarsest σ with π ∪ σ non-crossing on the
    /// interlaced points 1 < 1̄ < 2 < 2̄ < ….
    fn kreweras_oracle(q: &Partition) -> Partition {
        let n = q.n();
        let mut best: Option<&Partition> = None;
        for s in enumerate_nc(n).unwrap() {
            let mut blocks: Vec<Vec<usize>> =
                q.blocks().iter().map(|b| b.iter().map(|x| 2 * x - 1).collect()).collect();
            blocks.extend(s.blocks().iter().map(|b| b.iter().map(|x| 2 * x).collect()));
            if is_noncrossing(&blocks) && best.is_none_or(|b| s.num_blocks() < b.num_blocks()) {
                best = Some(s);
            }
        }
        best.unwrap().clone()
    }

    #[test]
    fn kreweras_matches_oracle() {
        for n in 1..=6 {
            for q in enumerate_nc(n).unwrap() {
                assert_eq!(q.kreweras(), kreweras_oracle(q), "{q}");
            }
        }
    }

    #[test]
    fn mobius_closed_form_at_bottom() {
        for n in 1..=7 {
            let m = mobius_a(&Partition::zero(n), &Partition::one(n)).unwrap();
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(m, sign * catalan(n - 1), "n = {n}");
        }
        assert_eq!(mobius_a(&Partition::zero(3), &Partition::one(3)).unwrap(), 2);
    }

    #[test]
    fn mobius_table_matches_kreweras_product_and_recursion() {
        for n in 1..=7 {
            let lat = lattice(n).unwrap();
            let table = lat.mobius_to_top().unwrap();
            for (i, q) in lat.partitions().iter().enumerate() {
                let product: i64 = q
                    .kreweras()
                    .blocks()
                    .iter()
                    .map(|b| {
                        let k = b.len() - 1;
                        if k % 2 == 0 { catalan(k) } else { -catalan(k) }
                    })
                    .product();
                assert_eq!(table[i], product, "{q}");
                if n <= 5 {
                    assert_eq!(table[i], mobius_a(q, &Partition::one(n)).unwrap());
                }
            }
        }
    }

    #[test]
    fn mobius_rejects_incomparable() {
        assert_eq!(mobius_a(&p("{1,2}{3}"), &p("{1}{2,3}")), Err(Error::NotComparable));
    }

    #[test]
    fn rainbow() {
        assert_eq!(Partition::rainbow_with_center(5).unwrap(), p("{1,5}{2,4}{3}"));
        assert_eq!(Partition::rainbow_with_center(4), Err(Error::EvenInput(4)));
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(p("{1,2}{3}").cyclic_rotate(), p("{1}{2,3}"));
        assert_eq!(p("{1,3}{2}").cyclic_rotate(), p("{1,2}{3}"));
    }

    fn arb_partition(max_n: usize) -> impl Strategy<Value = Partition> {
        (1..=max_n).prop_flat_map(|n| {
            let len = enumerate_nc(n).unwrap().len();
            (0..len).prop_map(move |i| enumerate_nc(n).unwrap()[i].clone())
        })
    }

    fn arb_pair(max_n: usize) -> impl Strategy<Value = (Partition, Partition)> {
        (1..=max_n).prop_flat_map(|n| {
            let len = enumerate_nc(n).unwrap().len();
            (0..len, 0..len).prop_map(move |(i, j)| {
                let l = enumerate_nc(n).unwrap();
                (l[i].clone(), l[j].clone())
            })
        })
    }

    proptest! {
        #[test]
        fn kreweras_block_count_and_square(q in arb_partition(9)) {
            let k = q.kreweras();
            prop_assert_eq!(q.num_blocks() + k.num_blocks(), q.n() + 1);
            prop_assert_eq!(k.kreweras().cyclic_rotate(), q);
        }

        #[test]
        fn kreweras_reverses_order((a, b) in arb_pair(7)) {
            if a.leq(&b) {
                prop_assert!(b.kreweras().leq(&a.kreweras()));
            }
        }

        #[test]
        fn meet_and_join_are_bounds((a, b) in arb_pair(7)) {
            let m = a.meet(&b).unwrap();
            let j = a.join(&b).unwrap();
            prop_assert!(m.leq(&a) && m.leq(&b));
            prop_assert!(a.leq(&j) && b.leq(&j));
            for r in enumerate_nc(a.n()).unwrap() {
                if r.leq(&a) && r.leq(&b) {
                    prop_assert!(r.leq(&m));
                }
                if a.leq(r) && b.leq(r) {
                    prop_assert!(j.leq(r));
                }
            }
        }

        #[test]
        fn mobius_sums_to_delta((a, b) in arb_pair(6)) {
            if a.leq(&b) {
                let s: i64 = enumerate_nc(a.n()).unwrap()
                    .iter()
                    .filter(|r| a.leq(r) && r.leq(&b))
                    .map(|r| mobius_a(&a, r).unwrap())
                    .sum();
                prop_assert_eq!(s, i64::from(a == b));
            }
        }

        #[test]
        fn rotation_preserves_shape(q in arb_partition(9)) {
            let r = q.cyclic_rotate();
            let mut s1: Vec<usize> = q.blocks().iter().map(Vec::len).collect();
            let mut s2: Vec<usize> = r.blocks().iter().map(Vec::len).collect();
            s1.sort();
            s2.sort();
            prop_assert_eq!(s1, s2);
            let mut back = r;
            for _ in 1..q.n() {
                back = back.cyclic_rotate();
            }
            prop_assert_eq!(back, q);
        }
    }
}
