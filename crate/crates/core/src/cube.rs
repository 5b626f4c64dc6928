//! The cube of resolutions of a braid closure and its Khovanov-type chain
//! complex.
//!
//! An enhanced state is a resolution mask together with a label mask over
//! the circles of that resolution (bit `c` set means circle `c` carries
//! `x₋`). Generators of each homological degree are ordered by resolution
//! mask, then label mask.

use std::collections::{BTreeMap, HashMap};

use crate::braid::{resolve, BraidWord, CircleSet, Resolution};
use crate::coeff::Poly;
use crate::error::{Error, Result};
use crate::frobenius::{AlgebraElement, FrobeniusAlgebra, Label, TensorCoeffs, Theory};

/// `(−1)^{#ones of r before the flipped crossing}` when `s` covers `r`, else 0.
pub fn sign(r: Resolution, s: Resolution) -> i32 {
    if r.len() != s.len() {
        return 0;
    }
    let diff = r.mask() ^ s.mask();
    if diff.count_ones() != 1 || s.mask() & diff == 0 {
        return 0;
    }
    let j = diff.trailing_zeros();
    if (r.mask() & ((1u64 << j) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedState {
    pub res: u64,
    pub labels: u64,
}

impl EnhancedState {
    pub fn new(res: u64, labels: u64) -> Self {
        EnhancedState { res, labels }
    }

    pub fn label(&self, circle: usize) -> Label {
        if self.labels >> circle & 1 == 1 {
            Label::Minus
        } else {
            Label::Plus
        }
    }
}

/// A finite combination of enhanced states with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnhancedChain {
    p: u32,
    terms: BTreeMap<EnhancedState, Poly>,
}

impl EnhancedChain {
    pub fn zero(p: u32) -> Self {
        EnhancedChain { p, terms: BTreeMap::new() }
    }

    pub fn state(s: EnhancedState, p: u32) -> Self {
        let mut c = Self::zero(p);
        c.add_term(s, Poly::one(p));
        c
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EnhancedState, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &EnhancedState) -> Poly {
        self.terms.get(s).cloned().unwrap_or_else(|| Poly::zero(self.p))
    }

    pub fn add_term(&mut self, s: EnhancedState, c: Poly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&s) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &o.terms {
            out.add_term(*s, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Poly::from_int(-1, self.p)))
    }

    pub fn scale(&self, c: &Poly) -> Self {
        let mut out = Self::zero(self.p);
        for (s, x) in &self.terms {
            out.add_term(*s, x * c);
        }
        out
    }

    pub fn specialize(&self, u: Option<crate::coeff::FieldElem>, v: Option<crate::coeff::FieldElem>) -> Self {
        let mut out = Self::zero(self.p);
        for (s, x) in &self.terms {
            out.add_term(*s, x.specialize(u, v));
        }
        out
    }
}

/// How the circles of one resolution are carried to another, one elementary
/// cobordism per connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Copy { src: usize, dst: usize },
    Merge { a: usize, b: usize, dst: usize },
    Split { src: usize, d1: usize, d2: usize },
    Unit { dst: usize },
    Counit { src: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub pieces: Vec<Piece>,
}

/// Multiplication and comultiplication on basis labels, precomputed.
#[derive(Debug, Clone)]
pub struct Tables {
    p: u32,
    mul: [[AlgebraElement; 2]; 2],
    comul: [TensorCoeffs; 2],
}

impl Tables {
    pub fn new(alg: &FrobeniusAlgebra) -> Self {
        let mb = |a, b| alg.mul_basis(a, b);
        Tables {
            p: alg.p(),
            mul: [[mb(Label::Plus, Label::Plus), mb(Label::Plus, Label::Minus)], [
                mb(Label::Minus, Label::Plus),
                mb(Label::Minus, Label::Minus),
            ]],
            comul: [alg.comul_basis(Label::Plus), alg.comul_basis(Label::Minus)],
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

impl Plan {
    /// Builds the plan from identified arc pairs `(src_arc, dst_arc)`.
    /// Circles touched by no pair become births or deaths.
    pub fn from_arcs(src: &CircleSet, dst: &CircleSet, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Plan> {
        let (ns, nd) = (src.count(), dst.count());
        let mut parent: Vec<usize> = (0..ns + nd).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in pairs {
            let (x, y) = (find(&mut parent, src.circle_of_arc(a)), find(&mut parent, ns + dst.circle_of_arc(b)));
            parent[x] = y;
        }
        let mut comps: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for v in 0..ns + nd {
            let root = find(&mut parent, v);
            let e = comps.entry(root).or_default();
            if v < ns {
                e.0.push(v);
            } else {
                e.1.push(v - ns);
            }
        }
        let mut pieces = Vec::with_capacity(comps.len());
        for (s, d) in comps.into_values() {
            pieces.push(match (s.as_slice(), d.as_slice()) {
                ([a], [b]) => Piece::Copy { src: *a, dst: *b },
                ([a, b], [c]) => Piece::Merge { a: *a, b: *b, dst: *c },
                ([a], [c, d]) => Piece::Split { src: *a, d1: *c, d2: *d },
                ([], [c]) => Piece::Unit { dst: *c },
                ([a], []) => Piece::Counit { src: *a },
                _ => return Err(Error::Site(format!("component with {} source, {} target circles", s.len(), d.len()))),
            });
        }
        Ok(Plan { pieces })
    }

    /// Image of a basis state, as target label masks with coefficients.
    pub fn apply(&self, t: &Tables, labels: u64) -> Vec<(u64, Poly)> {
        let p = t.p;
        let lab = |c: usize| (labels >> c & 1) as usize;
        let mut acc: Vec<(u64, Poly)> = vec![(0, Poly::one(p))];
        for piece in &self.pieces {
            let opts: Vec<(u64, Poly)> = match *piece {
                // Label-only pieces touch no coefficient.
                Piece::Copy { src, dst } => {
                    for a in acc.iter_mut() {
                        a.0 |= (lab(src) as u64) << dst;
                    }
                    continue;
                }
                Piece::Unit { .. } => continue,
                Piece::Counit { src } => {
                    if lab(src) == 1 {
                        continue;
                    }
                    return vec![];
                }
                Piece::Merge { a, b, dst } => {
                    let m = &t.mul[lab(a)][lab(b)];
                    [(0u64, &m.a_plus), (1u64 << dst, &m.a_minus)]
                        .into_iter()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(l, c)| (l, c.clone()))
                        .collect()
                }
                Piece::Split { src, d1, d2 } => {
                    let c = &t.comul[lab(src)];
                    let mut v = Vec::with_capacity(4);
                    for i in 0..2u64 {
                        for j in 0..2u64 {
                            let x = &c[i as usize][j as usize];
                            if !x.is_zero() {
                                v.push(((i << d1) | (j << d2), x.clone()));
                            }
                        }
                    }
                    v
                }
            };
            if opts.len() == 1 && opts[0].1.as_constant().is_some_and(|c| c.is_one()) {
                for a in acc.iter_mut() {
                    a.0 |= opts[0].0;
                }
                continue;
            }
            let mut next = Vec::with_capacity(acc.len() * opts.len());
            for (l, c) in &acc {
                for (l2, c2) in &opts {
                    next.push((l | l2, c * c2));
                }
            }
            acc = next;
            if acc.is_empty() {
                break;
            }
        }
        acc
    }
}

/// Sparse matrix stored by columns, entries sorted by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    pub nrows: usize,
    pub cols: Vec<Vec<(usize, Poly)>>,
}

impl SparseMat {
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn mul(&self, rhs: &SparseMat, p: u32) -> SparseMat {
        // Dense scratch column, reset through the list of touched rows.
        let mut acc = vec![Poly::zero(p); self.nrows];
        let mut touched: Vec<usize> = Vec::new();
        let cols = rhs
            .cols
            .iter()
            .map(|col| {
                for (k, c) in col {
                    for (r, x) in &self.cols[*k] {
                        if acc[*r].is_zero() {
                            touched.push(*r);
                        }
                        acc[*r].add_product(x, c);
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                touched
                    .drain(..)
                    .filter_map(|r| {
                        let v = std::mem::replace(&mut acc[r], Poly::zero(p));
                        (!v.is_zero()).then_some((r, v))
                    })
                    .collect()
            })
            .collect();
        SparseMat { nrows: self.nrows, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }
}

/// The generators of one homological degree.
#[derive(Debug, Clone, Default)]
pub struct DegreeBlock {
    pub gens: Vec<EnhancedState>,
    pub qdeg: Vec<i32>,
}

#[derive(Debug, Clone)]
pub struct GradedComplex {
    word: BraidWord,
    theory: Theory,
    alg: FrobeniusAlgebra,
    tables: Tables,
    imin: i32,
    imax: i32,
    circles: HashMap<u64, CircleSet>,
    offset: HashMap<u64, usize>,
    blocks: Vec<DegreeBlock>,
    d: Vec<SparseMat>,
}

pub fn build_complex(b: &BraidWord, t: Theory) -> Result<GradedComplex> {
    let lo = -(b.n_minus() as i32);
    build_complex_range(b, t, lo, lo + b.len() as i32)
}

/// The part of the complex in homological degrees `lo..=hi`, with the
/// differentials between them.
pub fn build_complex_range(b: &BraidWord, t: Theory, lo: i32, hi: i32) -> Result<GradedComplex> {
    if !t.is_graded() {
        return Err(Error::UnsupportedTheory(format!("{} is filtered; no graded complex", t.tag)));
    }
    build_inner(b, t, lo, hi)
}

/// The complex of a filtered theory, for chain-level checks only. Its
/// quantum degrees are those of the associated graded and the differential
/// does not preserve them.
pub fn build_filtered_complex(b: &BraidWord, t: Theory) -> Result<GradedComplex> {
    let lo = -(b.n_minus() as i32);
    build_inner(b, t, lo, lo + b.len() as i32)
}

fn build_inner(b: &BraidWord, t: Theory, lo: i32, hi: i32) -> Result<GradedComplex> {
    let alg = FrobeniusAlgebra::new(t);
    let tables = Tables::new(&alg);
    let k = b.len();
    let nm = b.n_minus() as i32;
    let np = b.n_plus() as i32;
    let imin = lo.max(-nm);
    let imax = hi.min(k as i32 - nm);
    let nblocks = (imax - imin + 1).max(0) as usize;
    let mut blocks = vec![DegreeBlock::default(); nblocks];
    let mut circles = HashMap::new();
    let mut offset = HashMap::new();
    for r in 0..(1u64 << k) {
        let i = r.count_ones() as i32 - nm;
        if i < imin || i > imax {
            continue;
        }
        let cs = resolve(b, Resolution::new(r, k));
        let blk = &mut blocks[(i - imin) as usize];
        offset.insert(r, blk.gens.len());
        let c = cs.count();
        for l in 0..(1u64 << c) {
            let minus = l.count_ones() as i32;
            blk.gens.push(EnhancedState::new(r, l));
            blk.qdeg.push(c as i32 - 2 * minus + r.count_ones() as i32 + np - 2 * nm);
        }
        circles.insert(r, cs);
    }
    let mut cx = GradedComplex { word: b.clone(), theory: t, alg, tables, imin, imax, circles, offset, blocks, d: vec![] };
    let mut d = Vec::new();
    for i in imin..imax {
        d.push(cx.assemble_d(i)?);
    }
    cx.d = d;
    Ok(cx)
}

impl GradedComplex {
    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra {
        &self.alg
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    pub fn p(&self) -> u32 {
        self.theory.p
    }

    /// Homological degrees present, inclusive.
    pub fn range(&self) -> (i32, i32) {
        (self.imin, self.imax)
    }

    pub fn block(&self, i: i32) -> Option<&DegreeBlock> {
        if i < self.imin || i > self.imax {
            return None;
        }
        self.blocks.get((i - self.imin) as usize)
    }

    pub fn rank(&self, i: i32) -> usize {
        self.block(i).map_or(0, |b| b.gens.len())
    }

    /// `d^i : C^i → C^{i+1}`, if both degrees are in range.
    pub fn differential(&self, i: i32) -> Option<&SparseMat> {
        if i < self.imin || i >= self.imax {
            return None;
        }
        self.d.get((i - self.imin) as usize)
    }

    pub fn circles(&self, r: u64) -> Option<&CircleSet> {
        self.circles.get(&r)
    }

    pub fn homological_degree(&self, r: u64) -> i32 {
        r.count_ones() as i32 - self.word.n_minus() as i32
    }

    pub fn quantum_degree(&self, s: &EnhancedState) -> Option<i32> {
        let c = self.circles.get(&s.res)?.count() as i32;
        let (np, nm) = (self.word.n_plus() as i32, self.word.n_minus() as i32);
        Some(c - 2 * s.labels.count_ones() as i32 + s.res.count_ones() as i32 + np - 2 * nm)
    }

    /// Position of a state within its degree block.
    pub fn index_of(&self, s: &EnhancedState) -> Option<usize> {
        let c = self.circles.get(&s.res)?.count();
        if c < 64 && s.labels >> c != 0 {
            return None;
        }
        Some(self.offset[&s.res] + s.labels as usize)
    }

    /// The plan for the edge that flips crossing `t` of `r` from 0 to 1.
    pub fn edge_plan(&self, r: u64, t: usize) -> Result<Plan> {
        let s = r | (1 << t);
        let k = self.word.len();
        let (own_src, own_dst);
        let src = match self.circles.get(&r) {
            Some(c) => c,
            None => {
                own_src = resolve(&self.word, Resolution::new(r, k));
                &own_src
            }
        };
        let dst = match self.circles.get(&s) {
            Some(c) => c,
            None => {
                own_dst = resolve(&self.word, Resolution::new(s, k));
                &own_dst
            }
        };
        Plan::from_arcs(src, dst, (0..self.word.num_arcs()).map(|a| (a, a)))
    }

    fn assemble_d(&self, i: i32) -> Result<SparseMat> {
        let k = self.word.len();
        let src = &self.blocks[(i - self.imin) as usize];
        let nrows = self.blocks[(i + 1 - self.imin) as usize].gens.len();
        let mut cols: Vec<Vec<(usize, Poly)>> = vec![Vec::new(); src.gens.len()];
        let mut start = 0;
        while start < src.gens.len() {
            let r = src.gens[start].res;
            let width = 1usize << self.circles[&r].count();
            for t in 0..k {
                if r >> t & 1 == 1 {
                    continue;
                }
                let s = r | (1 << t);
                let sg = sign(Resolution::new(r, k), Resolution::new(s, k));
                let plan = self.edge_plan(r, t)?;
                let base = self.offset[&s];
                for l in 0..width as u64 {
                    for (l2, c) in plan.apply(&self.tables, l) {
                        let c = if sg < 0 { -&c } else { c };
                        cols[start + l as usize].push((base + l2 as usize, c));
                    }
                }
            }
            start += width;
        }
        for col in cols.iter_mut() {
            col.sort_by_key(|e| e.0);
        }
        Ok(SparseMat { nrows, cols })
    }

    /// `d` applied to a chain whose states lie in degrees with an outgoing
    /// differential.
    pub fn apply_d(&self, x: &EnhancedChain) -> Result<EnhancedChain> {
        let mut out = EnhancedChain::zero(self.p());
        for (s, c) in x.terms() {
            let i = self.homological_degree(s.res);
            let d = self
                .differential(i)
                .ok_or_else(|| Error::Grading(format!("no differential out of degree {i}")))?;
            let idx = self.index_of(s).ok_or_else(|| Error::Grading("state not in complex".into()))?;
            let tgt = self.block(i + 1).expect("target block");
            for (row, e) in &d.cols[idx] {
                out.add_term(tgt.gens[*row], e * c);
            }
        }
        Ok(out)
    }

    /// `(i, q)` of a homogeneous chain; `None` for zero or inhomogeneous
    /// chains.
    pub fn bidegree(&self, x: &EnhancedChain) -> Option<(i32, i32)> {
        let mut out = None;
        for (s, c) in x.terms() {
            let d = (self.homological_degree(s.res), self.quantum_degree(s)? + c.degree()?);
            match out {
                None => out = Some(d),
                Some(o) if o != d => return None,
                _ => {}
            }
        }
        out
    }

    /// Dense coordinate vector of a chain in degree `i`.
    pub fn to_vector(&self, i: i32, x: &EnhancedChain) -> Result<Vec<(usize, Poly)>> {
        let mut v = Vec::with_capacity(x.len());
        for (s, c) in x.terms() {
            if self.homological_degree(s.res) != i {
                return Err(Error::Grading(format!("state outside degree {i}")));
            }
            v.push((self.index_of(s).ok_or_else(|| Error::Grading("state not in complex".into()))?, c.clone()));
        }
        v.sort_by_key(|e| e.0);
        Ok(v)
    }

    pub fn from_vector(&self, i: i32, v: &[(usize, Poly)]) -> EnhancedChain {
        let blk = self.block(i).expect("degree in range");
        let mut out = EnhancedChain::zero(self.p());
        for (idx, c) in v {
            out.add_term(blk.gens[*idx], c.clone());
        }
        out
    }

    /// Whether `d^{i+1} ∘ d^i` vanishes for every built `i`.
    pub fn d_squared_is_zero(&self) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0], self.p()).is_zero())
    }

    /// Whether each nonzero entry of `d` has the degree forced by its row
    /// and column, i.e. the differential preserves the quantum grading.
    pub fn is_homogeneous(&self) -> bool {
        (self.imin..self.imax).all(|i| {
            let (src, dst) = (self.block(i).unwrap(), self.block(i + 1).unwrap());
            self.differential(i).unwrap().cols.iter().enumerate().all(|(j, col)| {
                col.iter().all(|(r, c)| c.degree() == Some(src.qdeg[j] - dst.qdeg[*r]))
            })
        })
    }

    /// `Σ_{i,q} (−1)^i rank C^{i,q} t^q` as a map `q ↦ coefficient`.
    pub fn euler_characteristic(&self) -> BTreeMap<i32, i64> {
        let mut chi = BTreeMap::new();
        for i in self.imin..=self.imax {
            let sgn = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            for &q in &self.block(i).unwrap().qdeg {
                *chi.entry(q).or_insert(0) += sgn;
            }
        }
        chi.retain(|_, v| *v != 0);
        chi
    }
}

/// The edge map between two resolutions of one word differing at crossing
/// `t`, applied to a chain supported on the source resolution.
pub fn saddle(cx: &GradedComplex, x: &EnhancedChain, t: usize) -> Result<EnhancedChain> {
    let mut out = EnhancedChain::zero(cx.p());
    for (s, c) in x.terms() {
        if s.res >> t & 1 == 1 {
            return Err(Error::Site(format!("crossing {t} already 1-smoothed")));
        }
        let plan = cx.edge_plan(s.res, t)?;
        for (l, e) in plan.apply(cx.tables(), s.labels) {
            out.add_term(EnhancedState::new(s.res | (1 << t), l), &e * c);
        }
    }
    Ok(out)
}
