//! Finite partial orders on `0..n` stored as transitive-closure bit rows.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

/// A partial order on `0..n`. `up[i]` holds every `j` with `i <= j`
/// (reflexive). The generating pairs are retained for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrder {
    n: usize,
    generators: Vec<(usize, usize)>,
    up: Vec<FixedBitSet>,
}

impl PartialOrder {
    /// Reflexive-transitive closure of `pairs` (`(a, b)` meaning `a <= b`).
    /// On failure returns a shortest cycle through the generating relation.
    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, Vec<usize>> {
        let mut generators: Vec<(usize, usize)> =
            pairs.into_iter().filter(|(a, b)| a != b).collect();
        generators.sort_unstable();
        generators.dedup();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &generators {
            succ[a].push(b);
        }
        let up = reachability(&succ);
        for a in 0..n {
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return Err(shortest_cycle(&succ, a));
                }
            }
        }
        Ok(PartialOrder { n, generators, up })
    }

    /// Total order listing `seq` from smallest to largest.
    pub fn chain(n: usize, seq: &[usize]) -> Result<Self, Vec<usize>> {
        Self::from_pairs(n, seq.windows(2).map(|w| (w[0], w[1])))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn up(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    /// Same closure, regardless of generating pairs.
    pub fn same_order(&self, other: &PartialOrder) -> bool {
        self.n == other.n && self.up == other.up
    }

    /// `self` is the reverse of `other`.
    pub fn is_dual_of(&self, other: &PartialOrder) -> bool {
        self.n == other.n
            && (0..self.n).all(|a| self.up[a].ones().all(|b| other.le(b, a)))
            && (0..self.n).all(|a| other.up[a].ones().all(|b| self.le(b, a)))
    }

    /// Pairs `(a, b)` with `a <= b` in one order but not the other.
    pub fn difference(&self, other: &PartialOrder) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            let mut x = self.up[a].clone();
            x.symmetric_difference_with(&other.up[a]);
            out.extend(x.ones().map(|b| (a, b)));
        }
        out
    }

    /// Minimal elements of the order restricted to `subset`.
    pub fn minimal_in(&self, subset: &[usize]) -> Vec<usize> {
        subset
            .iter()
            .copied()
            .filter(|&x| !subset.iter().any(|&y| y != x && self.le(y, x)))
            .collect()
    }

    /// Maximal elements of the whole order.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| self.up[a].count_ones(..) == 1)
            .collect()
    }

    pub fn is_linear_extension(&self, seq: &[usize]) -> bool {
        if seq.len() != self.n {
            return false;
        }
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in seq.iter().enumerate() {
            if x >= self.n || pos[x] != usize::MAX {
                return false;
            }
            pos[x] = i;
        }
        (0..self.n).all(|a| self.up[a].ones().all(|b| pos[a] <= pos[b]))
    }

    fn strict_pred_counts(&self) -> Vec<usize> {
        let mut count = vec![0; self.n];
        for a in 0..self.n {
            for b in self.up[a].ones() {
                if b != a {
                    count[b] += 1;
                }
            }
        }
        count
    }

    /// The lexicographically smallest linear extension.
    pub fn first_extension(&self) -> Vec<usize> {
        let mut count = self.strict_pred_counts();
        let mut placed = vec![false; self.n];
        let mut seq = Vec::with_capacity(self.n);
        while seq.len() < self.n {
            let x = (0..self.n)
                .find(|&x| !placed[x] && count[x] == 0)
                .expect("acyclic");
            placed[x] = true;
            seq.push(x);
            for y in self.up[x].ones() {
                if y != x {
                    count[y] -= 1;
                }
            }
        }
        seq
    }

    /// All linear extensions in lexicographic order, or `None` once more
    /// than `cap` exist.
    pub fn linear_extensions(&self, cap: usize) -> Option<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut count = self.strict_pred_counts();
        let mut placed = vec![false; self.n];
        let mut seq = Vec::with_capacity(self.n);
        if self.extend_all(&mut count, &mut placed, &mut seq, &mut out, cap) {
            Some(out)
        } else {
            None
        }
    }

    fn extend_all(
        &self,
        count: &mut [usize],
        placed: &mut [bool],
        seq: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        if seq.len() == self.n {
            if out.len() >= cap {
                return false;
            }
            out.push(seq.clone());
            return true;
        }
        for x in 0..self.n {
            if placed[x] || count[x] != 0 {
                continue;
            }
            placed[x] = true;
            seq.push(x);
            for y in self.up[x].ones() {
                if y != x {
                    count[y] -= 1;
                }
            }
            let ok = self.extend_all(count, placed, seq, out, cap);
            for y in self.up[x].ones() {
                if y != x {
                    count[y] += 1;
                }
            }
            seq.pop();
            placed[x] = false;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Linear extension counter over down-sets; `None` when the order has
    /// more than 128 elements or more than `max_states` down-sets.
    pub fn extension_counter(&self, max_states: usize) -> Option<ExtensionCounter> {
        if self.n > 128 {
            return None;
        }
        let mut down = vec![0u128; self.n];
        for a in 0..self.n {
            for b in self.up[a].ones() {
                if b != a {
                    down[b] |= 1 << a;
                }
            }
        }
        let mut counter = ExtensionCounter {
            n: self.n,
            down,
            memo: HashMap::new(),
            max_states,
        };
        counter.count(0)?;
        Some(counter)
    }

    /// Random linear extension built by picking uniformly among the
    /// currently available minimal elements. Not uniform over extensions.
    pub fn random_topological_sort<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        let mut count = self.strict_pred_counts();
        let mut placed = vec![false; self.n];
        let mut seq = Vec::with_capacity(self.n);
        while seq.len() < self.n {
            let avail: Vec<usize> = (0..self.n)
                .filter(|&x| !placed[x] && count[x] == 0)
                .collect();
            let x = avail[rng.gen_range(0..avail.len())];
            placed[x] = true;
            seq.push(x);
            for y in self.up[x].ones() {
                if y != x {
                    count[y] -= 1;
                }
            }
        }
        seq
    }
}

/// Reflexive reachability rows of a digraph given by successor lists.
pub fn reachability(succ: &[Vec<usize>]) -> Vec<FixedBitSet> {
    let n = succ.len();
    let mut out = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for start in 0..n {
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(start);
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for &y in &succ[x] {
                if !seen.put(y) {
                    queue.push_back(y);
                }
            }
        }
        out.push(seen);
    }
    out
}

/// Exact linear-extension counts keyed by down-set, for uniform sampling.
pub struct ExtensionCounter {
    n: usize,
    down: Vec<u128>,
    memo: HashMap<u128, BigUint>,
    max_states: usize,
}

impl ExtensionCounter {
    fn available(&self, placed: u128) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&x| placed >> x & 1 == 0 && self.down[x] & !placed == 0)
    }

    fn count(&mut self, placed: u128) -> Option<BigUint> {
        if let Some(c) = self.memo.get(&placed) {
            return Some(c.clone());
        }
        if self.memo.len() >= self.max_states {
            return None;
        }
        let total = if placed.count_ones() as usize == self.n {
            BigUint::one()
        } else {
            let avail: Vec<usize> = self.available(placed).collect();
            let mut total = BigUint::zero();
            for x in avail {
                total += self.count(placed | 1 << x)?;
            }
            total
        };
        self.memo.insert(placed, total.clone());
        Some(total)
    }

    pub fn total(&self) -> BigUint {
        self.memo[&0].clone()
    }

    /// Number of down-sets visited.
    pub fn states(&self) -> usize {
        self.memo.len()
    }

    /// A linear extension drawn uniformly at random.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        let mut placed = 0u128;
        let mut seq = Vec::with_capacity(self.n);
        while seq.len() < self.n {
            let mut target = random_below(&self.memo[&placed], rng);
            let mut chosen = None;
            for x in self.available(placed) {
                let c = &self.memo[&(placed | 1 << x)];
                if &target < c {
                    chosen = Some(x);
                    break;
                }
                target -= c;
            }
            let x = chosen.expect("counts are consistent");
            seq.push(x);
            placed |= 1 << x;
        }
        seq
    }
}

fn random_below<R: Rng>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bytes = bound.to_bytes_le();
    let top = *bytes.last().unwrap_or(&0);
    let mask = if top == 0 {
        0
    } else {
        u8::MAX >> top.leading_zeros()
    };
    loop {
        let mut buf: Vec<u8> = (0..bytes.len()).map(|_| rng.gen()).collect();
        if let Some(last) = buf.last_mut() {
            *last &= mask;
        }
        let x = BigUint::from_bytes_le(&buf);
        if &x < bound {
            return x;
        }
    }
}

fn shortest_cycle(succ: &[Vec<usize>], start: usize) -> Vec<usize> {
    let n = succ.len();
    let mut prev = vec![usize::MAX; n];
    let mut queue = VecDeque::from([start]);
    let mut seen = vec![false; n];
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &succ[x] {
            if y == start {
                let mut cycle = vec![x];
                let mut cur = x;
                while cur != start {
                    cur = prev[cur];
                    cycle.push(cur);
                }
                cycle.reverse();
                cycle.push(start);
                return cycle;
            }
            if !seen[y] {
                seen[y] = true;
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    vec![start]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closure_and_cycle() {
        let p = PartialOrder::from_pairs(4, [(0, 1), (1, 2)]).unwrap();
        assert!(p.le(0, 2));
        assert!(!p.le(2, 0));
        assert!(!p.le(0, 3));
        let err = PartialOrder::from_pairs(3, [(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert_eq!(err, vec![0, 1, 2, 0]);
    }

    #[test]
    fn extension_counts_match_enumeration() {
        // two incomparable chains of length 2: C(4,2) = 6 extensions
        let p = PartialOrder::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        let all = p.linear_extensions(100).unwrap();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|s| p.is_linear_extension(s)));
        let counter = p.extension_counter(1000).unwrap();
        assert_eq!(counter.total(), BigUint::from(6u32));
        assert!(p.linear_extensions(5).is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut hits = HashMap::new();
        for _ in 0..600 {
            let s = counter.sample(&mut rng);
            assert!(p.is_linear_extension(&s));
            *hits.entry(s).or_insert(0) += 1;
        }
        assert_eq!(hits.len(), 6);
    }

    #[test]
    fn duality() {
        let a = PartialOrder::chain(3, &[0, 1, 2]).unwrap();
        let b = PartialOrder::chain(3, &[2, 1, 0]).unwrap();
        assert!(a.is_dual_of(&b));
        assert!(!a.is_dual_of(&a));
        assert_eq!(a.maximal(), vec![2]);
    }
}
