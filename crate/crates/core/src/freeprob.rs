//! Non-crossing pair partitions, Dyck words and the moments of free
//! semicircular variables.
//!
//! The mixed moment `φ(I)` of `d` free standard semicircular variables counts
//! the non-crossing pair partitions of `{1..|I|}` whose pairs only join equal
//! letters of `I`. It is computed two ways: by brute-force enumeration
//! ([`semicircular_moment`]) and by the Schwinger-Dyson recursion
//! `φ(Ij) = Σ_{I = KjL} φ(K)φ(L)` tabulated over all words
//! ([`MomentTable`]). The enumerator is the oracle for the table.
//!
//! Generations of Dyck words follow the recursive rule: the pair closing
//! the word has generation 1, and a pair has generation `k + 1` when the
//! parenthesis right after its `)` belongs to a pair of generation `k`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest set size [`nc2_enumerate`] will list.
pub const MAX_ENUMERATION_SIZE: usize = 20;

/// Largest `k` for which [`catalan`] is supported.
pub const MAX_CATALAN_INDEX: u32 = 30;

/// A non-crossing perfect matching of `{1..2k}`; pairs are stored 1-based as
/// `(opener, closer)` sorted by opener.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    size: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    pub fn new(size: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        let mut seen = vec![false; size + 1];
        for &(a, b) in &pairs {
            if a == 0 || b > size || a == b {
                return Err(Error::domain(format!("pair ({a}, {b}) outside 1..={size}")));
            }
            for x in [a, b] {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::domain(format!("element {x} paired twice")));
                }
            }
        }
        if seen.iter().skip(1).any(|s| !s) {
            return Err(Error::domain("pairs do not cover the whole set"));
        }
        for (i, &(a, c)) in pairs.iter().enumerate() {
            for &(b, e) in &pairs[i + 1..] {
                if a < b && b < c && c < e {
                    return Err(Error::domain(format!("pairs ({a}, {c}) and ({b}, {e}) cross")));
                }
            }
        }
        Ok(Self { size, pairs })
    }

    /// Size `2k` of the underlying set.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// A balanced parenthesis word; `true` is `(`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DyckWord {
    parens: Vec<bool>,
}

impl DyckWord {
    pub fn new(parens: Vec<bool>) -> Result<Self> {
        let mut depth: i64 = 0;
        for &p in &parens {
            depth += if p { 1 } else { -1 };
            if depth < 0 {
                return Err(Error::domain("prefix closes more parentheses than it opens"));
            }
        }
        if depth != 0 {
            return Err(Error::domain("unbalanced parentheses"));
        }
        Ok(Self { parens })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.parens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parens.is_empty()
    }

    pub fn parens(&self) -> &[bool] {
        &self.parens
    }

    /// Matching pairs as 1-based `(open, close)` positions, sorted by opener.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut stack = Vec::new();
        let mut pairs = Vec::with_capacity(self.len() / 2);
        for (i, &p) in self.parens.iter().enumerate() {
            if p {
                stack.push(i + 1);
            } else {
                let open = stack.pop().expect("validated Dyck word");
                pairs.push((open, i + 1));
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// Rooted plane tree as nested lists: each pair is a node whose children
    /// are the pairs directly inside it, e.g. `(()())()` ↦ `[[[],[]],[]]`.
    pub fn to_tree_string(&self) -> String {
        let mut out = String::from("[");
        let mut first = true;
        for &p in &self.parens {
            if p {
                if !first {
                    out.push(',');
                }
                out.push('[');
                first = true;
            } else {
                out.push(']');
                first = false;
            }
        }
        out.push(']');
        out
    }
}

impl fmt::Display for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &p in &self.parens {
            f.write_str(if p { "(" } else { ")" })?;
        }
        Ok(())
    }
}

impl FromStr for DyckWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parens = s
            .chars()
            .map(|c| match c {
                '(' => Ok(true),
                ')' => Ok(false),
                other => Err(Error::Parse(format!("unexpected character `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckWord::new(parens)
    }
}

pub fn dyck_from_partition(p: &PairPartition) -> DyckWord {
    let mut parens = vec![false; p.size];
    for &(open, _) in &p.pairs {
        parens[open - 1] = true;
    }
    DyckWord { parens }
}

pub fn partition_from_dyck(d: &DyckWord) -> PairPartition {
    PairPartition {
        size: d.len(),
        pairs: d.pairs(),
    }
}

/// All Dyck words of length `n` in lexicographic order (`(` before `)`).
pub fn dyck_words(n: usize) -> Result<Vec<DyckWord>> {
    if n > MAX_ENUMERATION_SIZE {
        return Err(Error::resource(format!(
            "enumeration of size {n} exceeds {MAX_ENUMERATION_SIZE}"
        )));
    }
    let mut out = Vec::new();
    if n % 2 == 1 {
        return Ok(out);
    }
    fn rec(n: usize, open: usize, depth: usize, cur: &mut Vec<bool>, out: &mut Vec<DyckWord>) {
        if cur.len() == n {
            out.push(DyckWord { parens: cur.clone() });
            return;
        }
        if open < n / 2 {
            cur.push(true);
            rec(n, open + 1, depth + 1, cur, out);
            cur.pop();
        }
        if depth > 0 {
            cur.push(false);
            rec(n, open, depth - 1, cur, out);
            cur.pop();
        }
    }
    rec(n, 0, 0, &mut Vec::with_capacity(n), &mut out);
    Ok(out)
}

/// `NC₂(n)`; empty for odd `n`.
pub fn nc2_enumerate(n: usize) -> Result<Vec<PairPartition>> {
    Ok(dyck_words(n)?.iter().map(partition_from_dyck).collect())
}

/// Generation of every pair of a Dyck word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationLabels {
    /// 1-based `(open, close)` pairs, sorted by opener.
    pub pairs: Vec<(usize, usize)>,
    /// `generations[i]` labels `pairs[i]`.
    pub generations: Vec<usize>,
    /// Largest label; 0 for the empty word.
    pub word_generation: usize,
}

impl GenerationLabels {
    /// `g(d)`: the pairs carrying the maximal label.
    pub fn maximal_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .zip(&self.generations)
            .filter(|(_, &g)| g == self.word_generation)
            .map(|(&p, _)| p)
            .collect()
    }

    pub fn generation_of(&self, pair: (usize, usize)) -> Option<usize> {
        self.pairs
            .iter()
            .position(|&p| p == pair)
            .map(|i| self.generations[i])
    }
}

pub fn generation_labels(d: &DyckWord) -> GenerationLabels {
    let n = d.len();
    let pairs = d.pairs();
    // owner[pos] = index into `pairs` of the pair containing 1-based `pos`
    let mut owner = vec![0; n + 1];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        owner[a] = i;
        owner[b] = i;
    }
    let mut generations = vec![0; pairs.len()];
    // Closers processed right to left: the successor of a closer belongs to a
    // pair whose closer lies further right, so its label is already known.
    let mut by_close: Vec<usize> = (0..pairs.len()).collect();
    by_close.sort_unstable_by_key(|&i| std::cmp::Reverse(pairs[i].1));
    for i in by_close {
        let close = pairs[i].1;
        generations[i] = if close == n {
            1
        } else {
            generations[owner[close + 1]] + 1
        };
    }
    let word_generation = generations.iter().copied().max().unwrap_or(0);
    GenerationLabels {
        pairs,
        generations,
        word_generation,
    }
}

/// `G(d)`: every word obtained by inserting `()` immediately left of at least
/// one parenthesis belonging to a maximal-generation pair. `G(∅) = {()}`.
pub fn insert_generation(d: &DyckWord) -> BTreeSet<DyckWord> {
    let mut out = BTreeSet::new();
    if d.is_empty() {
        out.insert(DyckWord {
            parens: vec![true, false],
        });
        return out;
    }
    let labels = generation_labels(d);
    let mut sites: Vec<usize> = labels
        .maximal_pairs()
        .iter()
        .flat_map(|&(a, b)| [a - 1, b - 1])
        .collect();
    sites.sort_unstable();
    for mask in 1u64..(1u64 << sites.len()) {
        let mut parens = Vec::with_capacity(d.len() + 2 * mask.count_ones() as usize);
        let mut next_site = 0;
        for (pos, &p) in d.parens.iter().enumerate() {
            if next_site < sites.len() && sites[next_site] == pos {
                if mask & (1 << next_site) != 0 {
                    parens.extend([true, false]);
                }
                next_site += 1;
            }
            parens.push(p);
        }
        out.insert(DyckWord { parens });
    }
    out
}

/// Checks the generation facts on all Dyck words of length at most
/// `max_len`: maximal-generation pairs are adjacent `()`, the sets `G(d)` are
/// pairwise disjoint within one generation, and their union over generation
/// `k` is generation `k+1` (compared up to `max_len`).
pub fn generation_lemma_check(max_len: usize) -> Result<bool> {
    let mut by_generation: Vec<BTreeSet<DyckWord>> = vec![BTreeSet::from([DyckWord::empty()])];
    for n in (2..=max_len).step_by(2) {
        for d in dyck_words(n)? {
            let labels = generation_labels(&d);
            if labels.maximal_pairs().iter().any(|&(a, b)| b != a + 1) {
                return Ok(false);
            }
            let k = labels.word_generation;
            if by_generation.len() <= k {
                by_generation.resize(k + 1, BTreeSet::new());
            }
            by_generation[k].insert(d);
        }
    }
    by_generation.push(BTreeSet::new());
    for k in 0..by_generation.len() - 1 {
        let mut union = BTreeSet::new();
        for d in &by_generation[k] {
            for w in insert_generation(d) {
                if w.len() > max_len {
                    continue;
                }
                if !union.insert(w) {
                    return Ok(false);
                }
            }
        }
        if union != by_generation[k + 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact Catalan number `C_k`.
pub fn catalan(k: u32) -> Result<u64> {
    if k > MAX_CATALAN_INDEX {
        return Err(Error::domain(format!("catalan({k}) outside 0..={MAX_CATALAN_INDEX}")));
    }
    // C_{j+1} = C_j · 2(2j+1)/(j+2), exact in u128
    let mut c: u128 = 1;
    for j in 0..k as u128 {
        c = c * 2 * (2 * j + 1) / (j + 2);
    }
    Ok(c as u64)
}

/// `φ(I)` by enumeration of `NC₂(|I|)` with letter matching.
pub fn semicircular_moment(word: &[usize]) -> Result<u64> {
    Ok(count_matching(word, &nc2_enumerate(word.len())?))
}

fn count_matching(word: &[usize], partitions: &[PairPartition]) -> u64 {
    if word.is_empty() {
        return 1;
    }
    partitions
        .iter()
        .filter(|p| p.pairs.iter().all(|&(a, b)| word[a - 1] == word[b - 1]))
        .count() as u64
}

/// `φ` for every word over `{1..d}` up to a maximal length, filled level by
/// level with the Schwinger-Dyson recursion. Words are indexed as in
/// [`crate::signature`].
#[derive(Debug, Clone)]
pub struct MomentTable {
    dim: usize,
    levels: Vec<Vec<u64>>,
}

impl MomentTable {
    pub fn new(dim: usize, max_len: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("alphabet must have at least one letter"));
        }
        crate::signature::check_storage(dim, max_len)?;
        let mut levels: Vec<Vec<u64>> = vec![vec![1]];
        let mut powers = vec![1usize];
        for m in 1..=max_len {
            powers.push(powers[m - 1] * dim);
            let size = powers[m];
            if m % 2 == 1 {
                levels.push(vec![0; size]);
                continue;
            }
            let mut level = vec![0u64; size];
            let mut letters = vec![0usize; m];
            let mut prefix = vec![0usize; m + 1];
            for (index, slot) in level.iter_mut().enumerate() {
                let mut rest = index;
                for k in (0..m).rev() {
                    letters[k] = rest % dim;
                    rest /= dim;
                }
                for k in 0..m {
                    prefix[k + 1] = prefix[k] * dim + letters[k];
                }
                // φ(Ij) with j = last letter, I = letters[..m-1]; K = I[..p] must
                // have even length, and then L = I[p+1..] does too.
                let last = letters[m - 1];
                let mut total = 0;
                for p in (0..m - 1).step_by(2) {
                    if letters[p] != last {
                        continue;
                    }
                    let left = levels[p][prefix[p]];
                    if left == 0 {
                        continue;
                    }
                    let len_r = m - 2 - p;
                    let right_index = prefix[m - 1] - prefix[p + 1] * powers[len_r];
                    total += left * levels[len_r][right_index];
                }
                *slot = total;
            }
            levels.push(level);
        }
        Ok(Self { dim, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_len(&self) -> usize {
        self.levels.len() - 1
    }

    /// Moments of all words of length `m`.
    pub fn level(&self, m: usize) -> &[u64] {
        &self.levels[m]
    }

    /// `φ(word)` for letters in `1..=d`.
    pub fn get(&self, word: &[usize]) -> Result<u64> {
        if word.len() > self.max_len() {
            return Err(Error::domain("word longer than the table"));
        }
        let mut index = 0;
        for &l in word {
            if l == 0 || l > self.dim {
                return Err(Error::domain(format!("letter {l} outside 1..={}", self.dim)));
            }
            index = index * self.dim + l - 1;
        }
        Ok(self.levels[word.len()][index])
    }
}

/// Largest word length [`schwinger_dyson_check`] accepts.
pub const MAX_CHECK_LEN: usize = 10;

/// Verifies `φ(IJ) = φ(JI)` and `φ(Ij) = Σ_{I=KjL} φ(K)φ(L)` for every word
/// over `{1..d}` of length at most `max_len`, with `φ` from enumeration.
pub fn schwinger_dyson_check(max_len: usize, d: usize) -> Result<bool> {
    if max_len > MAX_CHECK_LEN {
        return Err(Error::resource(format!(
            "check length {max_len} exceeds {MAX_CHECK_LEN}"
        )));
    }
    if d == 0 {
        return Err(Error::domain("alphabet must have at least one letter"));
    }
    let lists: Vec<Vec<PairPartition>> =
        (0..=max_len).map(nc2_enumerate).collect::<Result<_>>()?;
    let mut cache: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut phi = |w: &[usize]| -> u64 {
        *cache
            .entry(w.to_vec())
            .or_insert_with(|| count_matching(w, &lists[w.len()]))
    };
    for len in 1..=max_len {
        let mut word = vec![1usize; len];
        loop {
            let whole = phi(&word);
            for k in 1..len {
                let rotated: Vec<usize> = word[k..].iter().chain(&word[..k]).copied().collect();
                if phi(&rotated) != whole {
                    return Ok(false);
                }
            }
            let (init, last) = (&word[..len - 1], word[len - 1]);
            let split: u64 = (0..init.len())
                .filter(|&p| init[p] == last)
                .map(|p| phi(&init[..p]) * phi(&init[p + 1..]))
                .sum();
            if split != whole {
                return Ok(false);
            }
            if !next_word(&mut word, d) {
                break;
            }
        }
    }
    Ok(true)
}

/// Odometer over `{1..d}^n`; false once it wraps.
fn next_word(word: &mut [usize], d: usize) -> bool {
    for letter in word.iter_mut().rev() {
        if *letter < d {
            *letter += 1;
            return true;
        }
        *letter = 1;
    }
    false
}
