//! Dyck paths, non-crossing partitions and the descent/block bijection between them.
//!
//! Everything here is exact. The exhaustive enumerator is the ground truth that
//! the samplers and the moment-cumulant code are checked against.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest semilength the enumerator accepts unless a cap is given explicitly.
pub const DEFAULT_ENUMERATION_CAP: usize = 14;

/// A single lattice step. `Up < Down`, which fixes the enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Up,
    Down,
}

/// A Dyck path of positive semilength, stored as a packed bit sequence (`1` = down step).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyckPath {
    bits: Vec<u64>,
    semilength: usize,
}

impl DyckPath {
    /// Builds a path from explicit steps, checking the Dyck condition.
    pub fn from_steps(steps: &[Step]) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Validation("a Dyck path needs at least one step".into()));
        }
        if steps.len() % 2 != 0 {
            return Err(Error::Validation(format!(
                "a Dyck path has even length, got {}",
                steps.len()
            )));
        }
        let mut height: i64 = 0;
        let mut bits = vec![0u64; words_for(steps.len())];
        for (i, step) in steps.iter().enumerate() {
            match step {
                Step::Up => height += 1,
                Step::Down => {
                    height -= 1;
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            if height < 0 {
                return Err(Error::Validation(format!("path falls below zero at step {}", i + 1)));
            }
        }
        if height != 0 {
            return Err(Error::Validation(format!("path ends at height {height}, not 0")));
        }
        Ok(Self {
            bits,
            semilength: steps.len() / 2,
        })
    }

    /// Builds the path with ascents `x_1, y_1, x_2, y_2, ...` (ascent and descent run lengths).
    pub fn from_runs(ascents: &[usize], descents: &[usize]) -> Result<Self> {
        if ascents.len() != descents.len() {
            return Err(Error::Validation("ascent and descent counts differ".into()));
        }
        let total: usize = ascents.iter().chain(descents).sum();
        let mut steps = Vec::with_capacity(total);
        for (&x, &y) in ascents.iter().zip(descents) {
            if x == 0 || y == 0 {
                return Err(Error::Validation("runs must be positive".into()));
            }
            steps.extend(std::iter::repeat(Step::Up).take(x));
            steps.extend(std::iter::repeat(Step::Down).take(y));
        }
        Self::from_steps(&steps)
    }

    pub fn semilength(&self) -> usize {
        self.semilength
    }

    /// Number of steps, `2n`.
    pub fn len(&self) -> usize {
        2 * self.semilength
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self, i: usize) -> Step {
        assert!(i < self.len(), "step index {i} out of range");
        if self.bits[i / 64] >> (i % 64) & 1 == 1 {
            Step::Down
        } else {
            Step::Up
        }
    }

    pub fn steps(&self) -> impl Iterator<Item = Step> + '_ {
        (0..self.len()).map(move |i| self.step(i))
    }

    /// Lengths of the maximal runs of `step`, left to right.
    fn runs(&self, step: Step) -> Vec<usize> {
        let mut out = Vec::new();
        let mut current = 0;
        for s in self.steps() {
            if s == step {
                current += 1;
            } else if current > 0 {
                out.push(current);
                current = 0;
            }
        }
        if current > 0 {
            out.push(current);
        }
        out
    }

    /// Descent lengths, left to right.
    pub fn descents(&self) -> Vec<usize> {
        self.runs(Step::Down)
    }

    /// Ascent lengths, left to right.
    pub fn ascents(&self) -> Vec<usize> {
        self.runs(Step::Up)
    }

    pub fn descent_count(&self) -> usize {
        self.steps()
            .zip(self.steps().skip(1).map(Some).chain([None]))
            .filter(|&(s, next)| s == Step::Down && next != Some(Step::Down))
            .count()
    }
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.steps() {
            f.write_str(match s {
                Step::Up => "U",
                Step::Down => "D",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyckPath({self})")
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .trim()
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(Step::Up),
                'D' | 'd' => Ok(Step::Down),
                other => Err(Error::Validation(format!("unexpected step character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_steps(&steps)
    }
}

impl Serialize for DyckPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyckPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A non-crossing partition of `{1..n}`.
///
/// Blocks are kept sorted internally and ordered by least element, so structural
/// equality is equality of partitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonCrossingPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NonCrossingPartition {
    /// Validates that `blocks` partition `{1..n}` without crossings.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let (n, blocks) = canonical_partition(blocks)?;
        if !noncrossing_canonical(n, &blocks) {
            return Err(Error::Validation("partition has crossing blocks".into()));
        }
        Ok(Self { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes in block order (by least element).
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn singleton_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() == 1).count()
    }
}

impl Serialize for NonCrossingPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NonCrossingPartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(deserializer)?;
        Self::new(blocks).map_err(serde::de::Error::custom)
    }
}

/// Sorts blocks and checks they partition `{1..n}` where `n` is the number of elements.
fn canonical_partition(mut blocks: Vec<Vec<usize>>) -> Result<(usize, Vec<Vec<usize>>)> {
    if blocks.iter().any(Vec::is_empty) {
        return Err(Error::Validation("blocks must be non-empty".into()));
    }
    let n: usize = blocks.iter().map(Vec::len).sum();
    if n == 0 {
        return Err(Error::Validation("partition of the empty set".into()));
    }
    let mut seen = vec![false; n + 1];
    for block in &mut blocks {
        block.sort_unstable();
        for &x in block.iter() {
            if x == 0 || x > n {
                return Err(Error::Validation(format!("element {x} outside 1..={n}")));
            }
            if seen[x] {
                return Err(Error::Validation(format!("element {x} appears twice")));
            }
            seen[x] = true;
        }
    }
    blocks.sort_unstable_by_key(|b| b[0]);
    Ok((n, blocks))
}

/// Stack scan: between two consecutive elements of a block, every block opened
/// must also be closed.
fn noncrossing_canonical(n: usize, blocks: &[Vec<usize>]) -> bool {
    let mut owner = vec![0usize; n + 1];
    let mut last = vec![0usize; blocks.len()];
    for (id, block) in blocks.iter().enumerate() {
        for &x in block {
            owner[x] = id;
        }
        last[id] = *block.last().expect("non-empty block");
    }
    let mut first_seen = vec![false; blocks.len()];
    let mut open: Vec<usize> = Vec::new();
    for x in 1..=n {
        let id = owner[x];
        if first_seen[id] {
            if open.last() != Some(&id) {
                return false;
            }
            if last[id] == x {
                open.pop();
            }
        } else {
            first_seen[id] = true;
            if last[id] != x {
                open.push(id);
            }
        }
    }
    open.is_empty()
}

/// Whether `blocks` is non-crossing.
///
/// The ground set is the union of the blocks, ordered as integers; for a partition of
/// `{1..n}` this is the usual definition. Overlapping, empty or zero-labelled blocks
/// are rejected.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> Result<bool> {
    let mut elements: Vec<usize> = blocks.iter().flatten().copied().collect();
    elements.sort_unstable();
    let rank = |x: usize| elements.binary_search(&x).map(|i| i + 1);
    let relabelled = blocks
        .iter()
        .map(|b| b.iter().map(|&x| rank(x).expect("element present")).collect())
        .collect();
    if elements.first() == Some(&0) {
        return Err(Error::Validation("labels start at 1".into()));
    }
    if elements.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Validation("blocks overlap".into()));
    }
    let (n, blocks) = canonical_partition(relabelled)?;
    Ok(noncrossing_canonical(n, &blocks))
}

/// The Catalan number `C_n`, exact. Errors once the value no longer fits in `u128`.
pub fn catalan_number(n: u32) -> Result<u128> {
    // C_{k+1} = C_k * 2(2k+1) / (k+2); reduce by the gcd first to delay overflow.
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        let num = 2 * (2 * k + 1);
        let den = k + 2;
        let g = gcd(c, den);
        let (c_red, den_red) = (c / g, den / g);
        let num_red = num / den_red;
        debug_assert_eq!(num % den_red, 0);
        c = c_red.checked_mul(num_red).ok_or(Error::Range {
            what: "catalan n",
            value: n as u64,
            max: k as u64,
        })?;
    }
    Ok(c)
}

/// Binomial coefficient with overflow checking.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let num = n as u128 - i;
        let den = i + 1;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        acc = a
            .checked_mul(num / d)
            .ok_or(Error::Range {
                what: "binomial n",
                value: n,
                max: u64::MAX,
            })?;
    }
    Ok(acc)
}

/// Narayana number `N(n, k)`: Dyck paths of semilength `n` with exactly `k` descents.
pub fn narayana(n: u64, k: u64) -> Result<u128> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::Domain(format!("narayana needs 1 <= k <= n, got n={n}, k={k}")));
    }
    let a = binomial(n, k)?;
    let b = binomial(n, k - 1)?;
    let g = gcd(a, n as u128);
    let b = b / (n as u128 / g);
    (a / g).checked_mul(b).ok_or(Error::Range {
        what: "narayana n",
        value: n,
        max: n - 1,
    })
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Lexicographic (Up < Down) stream of all Dyck paths of one semilength.
pub struct DyckPaths {
    current: Option<Vec<Step>>,
    n: usize,
}

impl Iterator for DyckPaths {
    type Item = DyckPath;

    fn next(&mut self) -> Option<DyckPath> {
        let steps = self.current.as_mut()?;
        let out = DyckPath::from_steps(steps).expect("enumerator only yields Dyck paths");
        if !advance(steps, self.n) {
            self.current = None;
        }
        Some(out)
    }
}

/// Moves `steps` to its lexicographic successor; false once exhausted.
fn advance(steps: &mut [Step], n: usize) -> bool {
    let mut ups = vec![0usize; steps.len() + 1];
    for (i, s) in steps.iter().enumerate() {
        ups[i + 1] = ups[i] + usize::from(*s == Step::Up);
    }
    for i in (0..steps.len()).rev() {
        let (u, d) = (ups[i], i - ups[i]);
        if steps[i] == Step::Up && u > d {
            steps[i] = Step::Down;
            let remaining_ups = n - u;
            for (j, s) in steps[i + 1..].iter_mut().enumerate() {
                *s = if j < remaining_ups { Step::Up } else { Step::Down };
            }
            return true;
        }
    }
    false
}

/// Enumerates Dyck paths of semilength `n` with the default cap.
pub fn enumerate_dyck_paths(n: usize) -> Result<DyckPaths> {
    enumerate_dyck_paths_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_dyck_paths_capped(n: usize, cap: usize) -> Result<DyckPaths> {
    if n == 0 {
        return Err(Error::Domain("semilength must be positive".into()));
    }
    if n > cap {
        return Err(Error::Range {
            what: "enumeration semilength",
            value: n as u64,
            max: cap as u64,
        });
    }
    let mut start = vec![Step::Up; n];
    start.extend(std::iter::repeat(Step::Down).take(n));
    Ok(DyckPaths {
        current: Some(start),
        n,
    })
}

/// Descent-to-block bijection: up steps are labelled `1..n`, each down step takes
/// the label of its matching up step, and each descent becomes a block.
pub fn phi(path: &DyckPath) -> NonCrossingPartition {
    let mut open = Vec::with_capacity(path.semilength());
    let mut next_label = 1;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut in_descent = false;
    for s in path.steps() {
        match s {
            Step::Up => {
                open.push(next_label);
                next_label += 1;
                in_descent = false;
            }
            Step::Down => {
                let label = open.pop().expect("Dyck path never goes below zero");
                if !in_descent {
                    blocks.push(Vec::new());
                    in_descent = true;
                }
                blocks.last_mut().expect("descent started").push(label);
            }
        }
    }
    let (n, blocks) = canonical_partition(blocks).expect("descent labels partition 1..n");
    debug_assert!(noncrossing_canonical(n, &blocks));
    NonCrossingPartition { n, blocks }
}

/// Inverse of [`phi`]. The descent carrying block `V` sits directly after up step `max V`.
pub fn phi_inverse(partition: &NonCrossingPartition) -> DyckPath {
    let n = partition.n();
    let mut descent_after = vec![0usize; n + 1];
    for block in partition.blocks() {
        descent_after[*block.last().expect("non-empty block")] = block.len();
    }
    let mut steps = Vec::with_capacity(2 * n);
    for &len in &descent_after[1..] {
        steps.push(Step::Up);
        steps.extend(std::iter::repeat(Step::Down).take(len));
    }
    DyckPath::from_steps(&steps).expect("non-crossing partition maps to a Dyck path")
}

/// Number of blocks of each size.
pub fn block_size_histogram(partition: &NonCrossingPartition) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for len in partition.block_sizes() {
        *hist.entry(len).or_insert(0) += 1;
    }
    hist
}

/// Exact statistics of `NC(n)` gathered by full enumeration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationSummary {
    pub n: usize,
    pub catalan: u128,
    /// `narayana_row[k-1]` = number of paths with `k` descents.
    pub narayana_row: Vec<u128>,
    #[serde(serialize_with = "ratio_as_string")]
    pub mean_blocks: Ratio<u128>,
    #[serde(serialize_with = "ratio_as_string")]
    pub mean_singletons: Ratio<u128>,
}

fn ratio_as_string<S: Serializer>(r: &Ratio<u128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn enumeration_summary(n: usize, cap: usize) -> Result<EnumerationSummary> {
    let mut count: u128 = 0;
    let mut row = vec![0u128; n];
    let mut blocks: u128 = 0;
    let mut singletons: u128 = 0;
    for path in enumerate_dyck_paths_capped(n, cap)? {
        let pi = phi(&path);
        count += 1;
        row[pi.block_count() - 1] += 1;
        blocks += pi.block_count() as u128;
        singletons += pi.singleton_count() as u128;
    }
    Ok(EnumerationSummary {
        n,
        catalan: count,
        narayana_row: row,
        mean_blocks: Ratio::new(blocks, count),
        mean_singletons: Ratio::new(singletons, count),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nc(blocks: &[&[usize]]) -> NonCrossingPartition {
        NonCrossingPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn catalan_small_values() {
        assert_eq!(catalan_number(0).unwrap(), 1);
        assert_eq!(catalan_number(4).unwrap(), 14);
        assert_eq!(catalan_number(10).unwrap(), 16796);
        assert_eq!(catalan_number(35).unwrap(), 3_116_285_494_907_301_262);
    }

    #[test]
    fn catalan_overflow_is_a_range_error() {
        assert!(catalan_number(60).is_ok());
        assert!(matches!(catalan_number(80), Err(Error::Range { .. })));
    }

    #[test]
    fn catalan_matches_factorial_formula() {
        // (2n)! / (n! (n+1)!) evaluated as a product of binomials.
        for n in 0..30u64 {
            let expected = binomial(2 * n, n).unwrap() / (n as u128 + 1);
            assert_eq!(catalan_number(n as u32).unwrap(), expected);
        }
    }

    #[test]
    fn narayana_examples() {
        assert_eq!(narayana(3, 1).unwrap(), 1);
        assert_eq!(narayana(3, 2).unwrap(), 3);
        assert_eq!(narayana(4, 2).unwrap(), 6);
        assert!(matches!(narayana(3, 4), Err(Error::Domain(_))));
        assert!(matches!(narayana(3, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn enumerate_small() {
        let one: Vec<String> = enumerate_dyck_paths(1).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(one, ["UD"]);
        let two: Vec<String> = enumerate_dyck_paths(2).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(two, ["UUDD", "UDUD"]);
        assert_eq!(enumerate_dyck_paths(5).unwrap().count(), 42);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let paths: Vec<Vec<Step>> = enumerate_dyck_paths(6)
            .unwrap()
            .map(|p| p.steps().collect())
            .collect();
        assert!(paths.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(enumerate_dyck_paths(15), Err(Error::Range { .. })));
        assert!(enumerate_dyck_paths_capped(15, 15).is_ok());
        assert!(enumerate_dyck_paths(0).is_err());
    }

    #[test]
    fn phi_examples() {
        let udud: DyckPath = "UDUD".parse().unwrap();
        assert_eq!(phi(&udud), nc(&[&[1], &[2]]));
        let uudd: DyckPath = "UUDD".parse().unwrap();
        assert_eq!(phi(&uudd), nc(&[&[1, 2]]));
        let p: DyckPath = "UUDUDD".parse().unwrap();
        assert_eq!(phi(&p), nc(&[&[1, 3], &[2]]));
    }

    #[test]
    fn phi_inverse_examples() {
        assert_eq!(phi_inverse(&nc(&[&[1]])).to_string(), "UD");
        assert_eq!(phi_inverse(&nc(&[&[1, 2]])).to_string(), "UUDD");
        assert_eq!(phi_inverse(&nc(&[&[1, 3], &[2]])).to_string(), "UUDUDD");
    }

    #[test]
    fn phi_preserves_descent_multiset_and_round_trips() {
        for n in 1..=8 {
            for path in enumerate_dyck_paths(n).unwrap() {
                let pi = phi(&path);
                let mut d = path.descents();
                let mut b = pi.block_sizes();
                d.sort_unstable();
                b.sort_unstable();
                assert_eq!(d, b);
                assert_eq!(pi.block_count(), path.descent_count());
                assert_eq!(phi_inverse(&pi), path);
            }
        }
    }

    #[test]
    fn figure_partitions() {
        let good = vec![vec![8], vec![9], vec![10, 7, 6], vec![11, 5], vec![12, 4, 3, 2, 1]];
        assert!(is_noncrossing(&good).unwrap());
        // As printed this omits 11; the crossing does not depend on it.
        let bad = vec![vec![5, 1], vec![8], vec![9, 3], vec![10, 7, 6], vec![12, 4, 2]];
        assert!(!is_noncrossing(&bad).unwrap());
        let bad_full = vec![vec![5, 1], vec![8], vec![9, 3], vec![10, 7, 6], vec![12, 4, 2], vec![11]];
        assert!(!is_noncrossing(&bad_full).unwrap());
        assert!(NonCrossingPartition::new(bad_full).is_err());
    }

    #[test]
    fn singletons_are_noncrossing() {
        let blocks: Vec<Vec<usize>> = (1..=9).map(|i| vec![i]).collect();
        assert!(is_noncrossing(&blocks).unwrap());
    }

    #[test]
    fn not_a_partition() {
        assert!(is_noncrossing(&[vec![1, 1]]).is_err());
        assert!(is_noncrossing(&[vec![0], vec![3]]).is_err());
        assert!(is_noncrossing(&[vec![1, 2], vec![2]]).is_err());
        assert!(is_noncrossing(&[vec![]]).is_err());
    }

    #[test]
    fn crossing_brute_force_agrees_with_stack_scan() {
        // All set partitions of 1..=6 via restricted growth strings.
        fn rgs(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            let max = prefix.iter().copied().max().map_or(0, |m| m + 1);
            for v in 0..=max {
                prefix.push(v);
                rgs(n, prefix, out);
                prefix.pop();
            }
        }
        for n in 1..=7 {
            let mut all = Vec::new();
            rgs(n, &mut Vec::new(), &mut all);
            let mut noncrossing = 0;
            for labels in &all {
                let k = labels.iter().max().unwrap() + 1;
                let mut blocks = vec![Vec::new(); k];
                for (i, &l) in labels.iter().enumerate() {
                    blocks[l].push(i + 1);
                }
                let crossing = (1..=n).any(|a| {
                    (a + 1..=n).any(|b| {
                        (b + 1..=n).any(|c| {
                            (c + 1..=n).any(|d| {
                                labels[a - 1] == labels[c - 1]
                                    && labels[b - 1] == labels[d - 1]
                                    && labels[a - 1] != labels[b - 1]
                            })
                        })
                    })
                });
                assert_eq!(is_noncrossing(&blocks).unwrap(), !crossing);
                noncrossing += usize::from(!crossing);
            }
            assert_eq!(noncrossing as u128, catalan_number(n as u32).unwrap());
        }
    }

    #[test]
    fn histogram_examples() {
        let h = block_size_histogram(&nc(&[&[1], &[2]]));
        assert_eq!(h, BTreeMap::from([(1, 2)]));
        let h = block_size_histogram(&nc(&[&[1, 2, 5], &[3, 4]]));
        assert_eq!(h, BTreeMap::from([(2, 1), (3, 1)]));
    }

    #[test]
    fn histogram_weights_sum_to_n() {
        for path in enumerate_dyck_paths(8).unwrap() {
            let pi = phi(&path);
            let h = block_size_histogram(&pi);
            assert_eq!(h.iter().map(|(j, c)| j * c).sum::<usize>(), 8);
            assert_eq!(h.values().sum::<usize>(), pi.block_count());
        }
    }

    #[test]
    fn path_parsing_and_validation() {
        assert!("UDDU".parse::<DyckPath>().is_err());
        assert!("UUD".parse::<DyckPath>().is_err());
        assert!("".parse::<DyckPath>().is_err());
        assert!("UXD".parse::<DyckPath>().is_err());
        let p: DyckPath = "UUDUDD".parse().unwrap();
        assert_eq!(p.ascents(), vec![2, 1]);
        assert_eq!(p.descents(), vec![1, 2]);
        assert_eq!(DyckPath::from_runs(&[2, 1], &[1, 2]).unwrap(), p);
    }

    #[test]
    fn long_path_packing() {
        let mut steps = vec![Step::Up; 100];
        steps.extend(vec![Step::Down; 100]);
        let p = DyckPath::from_steps(&steps).unwrap();
        assert_eq!(p.step(99), Step::Up);
        assert_eq!(p.step(100), Step::Down);
        assert_eq!(p.descents(), vec![100]);
    }

    #[test]
    fn partition_json_is_sorted_block_list() {
        let pi = NonCrossingPartition::new(vec![vec![3], vec![2, 1]]).unwrap();
        assert_eq!(serde_json::to_string(&pi).unwrap(), "[[1,2],[3]]");
        let back: NonCrossingPartition = serde_json::from_str("[[3],[1,2]]").unwrap();
        assert_eq!(back, pi);
        assert!(serde_json::from_str::<NonCrossingPartition>("[[1,3],[2,4]]").is_err());
    }

    #[test]
    fn summary_small() {
        let s = enumeration_summary(4, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(s.catalan, 14);
        assert_eq!(s.mean_blocks, Ratio::new(5, 2));
        let s = enumeration_summary(2, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(s.mean_singletons, Ratio::new(1, 1));
    }

    #[test]
    fn mean_singletons_is_n_c_prev_over_c() {
        for n in 2..=9u32 {
            let s = enumeration_summary(n as usize, DEFAULT_ENUMERATION_CAP).unwrap();
            let n = n as u128;
            assert_eq!(s.mean_singletons, Ratio::new(n * n + n, 4 * n - 2));
        }
    }
}
