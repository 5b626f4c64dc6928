//! Braid words, their closures, resolutions of the closure diagram and
//! Markov-type rewrites.
//!
//! The closure of a word with `k` letters on `n` strands is cut into arcs
//! `(slot j, level t)` for `1 ≤ j ≤ n`, `0 ≤ t < max(k, 1)`. Arc `(j, t)` runs
//! from crossing `t − 1` to crossing `t`, levels wrapping around the closure.

use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidBraid("a braid needs at least one strand".into()));
        }
        if letters.len() > 63 {
            return Err(Error::InvalidBraid(format!("{} letters; at most 63 supported", letters.len())));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::InvalidBraid(format!("letter {l} on {strands} strands")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn unknot() -> Self {
        BraidWord { strands: 1, letters: vec![] }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn writhe(&self) -> i32 {
        self.letters.iter().map(|l| l.signum()).sum()
    }

    pub fn n_plus(&self) -> usize {
        self.letters.iter().filter(|&&l| l > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.letters.iter().filter(|&&l| l < 0).count()
    }

    pub fn levels(&self) -> usize {
        self.letters.len().max(1)
    }

    pub fn num_arcs(&self) -> usize {
        self.strands * self.levels()
    }

    /// Arc id of `(slot, level)`, slots 1-based.
    pub fn arc(&self, slot: usize, level: usize) -> usize {
        (level % self.levels()) * self.strands + (slot - 1)
    }

    /// Number of components of the closure.
    pub fn components(&self) -> usize {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        let mut seen = vec![false; self.strands];
        let mut count = 0;
        for s in 0..self.strands {
            if !seen[s] {
                count += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = perm[x];
                }
            }
        }
        count
    }

    pub fn is_knot(&self) -> bool {
        self.components() == 1
    }

    /// The mirror image: every crossing flipped.
    pub fn mirror(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().map(|l| -l).collect() }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

pub fn self_linking(b: &BraidWord) -> i32 {
    b.writhe() - b.strands as i32
}

/// A resolution as a bit mask; bit `t` is the smoothing at crossing `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution {
    bits: u64,
    len: usize,
}

impl Resolution {
    pub fn new(bits: u64, len: usize) -> Self {
        debug_assert!(len <= 63 && bits >> len == 0);
        Resolution { bits, len }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mask = bits.iter().enumerate().fold(0u64, |m, (i, &b)| m | ((b as u64 & 1) << i));
        Resolution::new(mask, bits.len())
    }

    pub fn mask(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, t: usize) -> bool {
        self.bits >> t & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn flip(&self, t: usize) -> Self {
        Resolution::new(self.bits ^ (1 << t), self.len)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|t| self.bit(t) as u8).collect()
    }
}

/// Whether crossing `t` is smoothed parallel (the oriented smoothing) in `r`.
pub fn is_parallel(letter: i32, bit: bool) -> bool {
    bit == (letter < 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleSet {
    count: usize,
    circle_of_arc: Vec<usize>,
}

impl CircleSet {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn circle_of_arc(&self, arc: usize) -> usize {
        self.circle_of_arc[arc]
    }

    pub fn arcs(&self) -> &[usize] {
        &self.circle_of_arc
    }

    /// Arcs of each circle, in increasing order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.count];
        for (a, &c) in self.circle_of_arc.iter().enumerate() {
            m[c].push(a);
        }
        m
    }
}

/// Circles of a resolution, ordered by their smallest arc id.
pub fn resolve(b: &BraidWord, r: Resolution) -> CircleSet {
    debug_assert_eq!(r.len(), b.len());
    let n = b.strands;
    let k = b.letters.len();
    let mut uf = UnionFind::<usize>::new(b.num_arcs());
    if k > 0 {
        for (t, &l) in b.letters.iter().enumerate() {
            let i = l.unsigned_abs() as usize;
            for j in 1..=n {
                if j != i && j != i + 1 {
                    uf.union(b.arc(j, t), b.arc(j, t + 1));
                }
            }
            if is_parallel(l, r.bit(t)) {
                uf.union(b.arc(i, t), b.arc(i, t + 1));
                uf.union(b.arc(i + 1, t), b.arc(i + 1, t + 1));
            } else {
                uf.union(b.arc(i, t), b.arc(i + 1, t));
                uf.union(b.arc(i, t + 1), b.arc(i + 1, t + 1));
            }
        }
    }
    let mut index = vec![usize::MAX; b.num_arcs()];
    let mut circle_of_arc = Vec::with_capacity(b.num_arcs());
    let mut count = 0;
    for a in 0..b.num_arcs() {
        let root = uf.find(a);
        if index[root] == usize::MAX {
            index[root] = count;
            count += 1;
        }
        circle_of_arc.push(index[root]);
    }
    CircleSet { count, circle_of_arc }
}

/// The oriented resolution, its circles, and the nesting parity of each
/// circle. Slot 1 is innermost with parity 0.
pub fn oriented_resolution(b: &BraidWord) -> (Resolution, CircleSet, Vec<u8>) {
    let mask = b.letters.iter().enumerate().fold(0u64, |m, (t, &l)| m | (((l < 0) as u64) << t));
    let r = Resolution::new(mask, b.len());
    let cs = resolve(b, r);
    let mut nesting = vec![0u8; cs.count()];
    for j in 1..=b.strands {
        nesting[cs.circle_of_arc(b.arc(j, 0))] = ((j - 1) % 2) as u8;
    }
    (r, cs, nesting)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MoveKind {
    /// `σᵢσᵢ₊₁σᵢ ↔ σᵢ₊₁σᵢσᵢ₊₁` (or the all-inverse form) at a position.
    BraidRelation,
    /// Swap of adjacent letters `σᵢ^±σⱼ^±` with `|i − j| ≥ 2`.
    FarCommute,
    /// Conjugation by the first letter: it moves to the end.
    Rotate,
    /// Insert `ℓ, −ℓ` at a position.
    R2Insert { letter: i32 },
    /// Remove an adjacent cancelling pair at a position.
    R2Remove,
    /// Append `σ_n^±` on a new strand.
    Stabilize { positive: bool },
    /// Remove a terminal `σ_{n−1}^±` not otherwise using generator `n − 1`.
    Destabilize,
}

impl MoveKind {
    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::BraidRelation => "braid_relation",
            MoveKind::FarCommute => "far_commute",
            MoveKind::Rotate => "rotate",
            MoveKind::R2Insert { .. } => "r2_insert",
            MoveKind::R2Remove => "r2_remove",
            MoveKind::Stabilize { positive: true } => "stabilize_pos",
            MoveKind::Stabilize { positive: false } => "stabilize_neg",
            MoveKind::Destabilize => "destabilize",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub word: BraidWord,
    /// False only for negative (de)stabilization.
    pub transverse: bool,
}

fn rewrite_err(m: MoveKind, pos: usize, b: &BraidWord) -> Error {
    Error::Rewrite(format!("{} at {pos} on {b}", m.name()))
}

pub fn markov_rewrite(b: &BraidWord, m: MoveKind, pos: usize) -> Result<Rewrite> {
    let w = &b.letters;
    let n = b.strands;
    let err = || rewrite_err(m, pos, b);
    let mut letters = w.clone();
    let mut strands = n;
    let mut transverse = true;
    match m {
        MoveKind::BraidRelation => {
            let s = w.get(pos..pos + 3).ok_or_else(err)?;
            let (a, c) = (s[0], s[1]);
            if s[2] != a || a.signum() != c.signum() || (a.abs() - c.abs()).abs() != 1 {
                return Err(err());
            }
            letters[pos] = c;
            letters[pos + 1] = a;
            letters[pos + 2] = c;
        }
        MoveKind::FarCommute => {
            let s = w.get(pos..pos + 2).ok_or_else(err)?;
            if (s[0].abs() - s[1].abs()).abs() < 2 {
                return Err(err());
            }
            letters.swap(pos, pos + 1);
        }
        MoveKind::Rotate => {
            if w.is_empty() {
                return Err(err());
            }
            letters.rotate_left(1);
        }
        MoveKind::R2Insert { letter } => {
            if pos > w.len() || letter == 0 || letter.unsigned_abs() as usize >= n {
                return Err(err());
            }
            letters.splice(pos..pos, [letter, -letter]);
        }
        MoveKind::R2Remove => {
            let s = w.get(pos..pos + 2).ok_or_else(err)?;
            if s[0] != -s[1] {
                return Err(err());
            }
            letters.drain(pos..pos + 2);
        }
        MoveKind::Stabilize { positive } => {
            let g = n as i32;
            letters.push(if positive { g } else { -g });
            strands += 1;
            transverse = positive;
        }
        MoveKind::Destabilize => {
            let g = n as i32 - 1;
            let last = *w.last().ok_or_else(err)?;
            if g < 1 || last.abs() != g || w[..w.len() - 1].iter().any(|l| l.abs() == g) {
                return Err(err());
            }
            letters.pop();
            strands -= 1;
            transverse = last > 0;
        }
    }
    Ok(Rewrite { word: BraidWord::new(strands, letters)?, transverse })
}

/// Every `(move, position)` applicable to `b`, excluding insertions, which
/// are always applicable.
pub fn applicable_moves(b: &BraidWord) -> Vec<(MoveKind, usize)> {
    let mut out = Vec::new();
    for pos in 0..b.len() {
        for m in [MoveKind::BraidRelation, MoveKind::FarCommute, MoveKind::R2Remove] {
            if markov_rewrite(b, m, pos).is_ok() {
                out.push((m, pos));
            }
        }
    }
    if !b.is_empty() {
        out.push((MoveKind::Rotate, 0));
    }
    if markov_rewrite(b, MoveKind::Destabilize, 0).is_ok() {
        out.push((MoveKind::Destabilize, 0));
    }
    out
}

/// A named braid from a catalog file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedBraid {
    pub name: String,
    pub word: BraidWord,
}

fn parse_letters(s: &str, line: usize) -> Result<Vec<i32>> {
    s.split_whitespace()
        .map(|t| t.parse::<i32>().map_err(|_| Error::Parse { line, msg: format!("bad letter {t:?}") }))
        .collect()
}

/// Parses `name : n : l1 l2 …` lines. Blank lines and `#` comments are
/// skipped.
pub fn parse_braids(text: &str) -> Result<Vec<NamedBraid>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parts: Vec<&str> = content.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse { line, msg: "expected `name : strands : letters`".into() });
        }
        let name = parts[0].trim();
        if name.is_empty() {
            return Err(Error::Parse { line, msg: "empty name".into() });
        }
        let strands = parts[1]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse { line, msg: format!("bad strand count {:?}", parts[1].trim()) })?;
        let letters = parse_letters(parts[2], line)?;
        let word = BraidWord::new(strands, letters).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        out.push(NamedBraid { name: name.to_string(), word });
    }
    Ok(out)
}

/// Parses an inline `n : l1 l2 …`.
pub fn parse_inline(s: &str) -> Result<BraidWord> {
    let (n, rest) = s.split_once(':').ok_or(Error::Parse { line: 1, msg: "expected `strands : letters`".into() })?;
    let strands =
        n.trim().parse::<usize>().map_err(|_| Error::Parse { line: 1, msg: format!("bad strand count {n:?}") })?;
    BraidWord::new(strands, parse_letters(rest, 1)?).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })
}
