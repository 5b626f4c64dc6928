//! Homology of graded complexes over `F_p` and over `F_p[U]`.
//!
//! Every entry of a homogeneous differential between graded free
//! `F_p[U]`-modules is `c·U^e` with `e = (q_row − q_col)/2` forced by the
//! gradings, so matrices store only the `F_p` coefficient. A homogeneous
//! element of degree `q` is then an `F_p`-vector over the basis elements of
//! degree at least `q`, and all the graded linear algebra reduces to field
//! elimination in which a column may only absorb columns of higher or equal
//! degree. The cyclic decomposition is read off from the resulting
//! birth/death pairing of generators.

use std::collections::{BTreeMap, HashMap};

use crate::coeff::{mono_divide, Field, FieldElem, Monomial};
use crate::cube::{EnhancedChain, GradedComplex};
use crate::error::{Error, Result};
use crate::frobenius::TheoryTag;

/// Sparse `F_p` vector, sorted by key.
pub type SVec = Vec<(usize, u32)>;

/// `y += a·x`.
fn axpy(f: Field, y: &mut SVec, a: u32, x: &SVec) {
    if a == 0 || x.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i]);
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, f.mul(a, x[j].1)));
            j += 1;
        } else {
            let v = f.add(y[i].1, f.mul(a, x[j].1));
            if v != 0 {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    *y = out;
}

fn lookup(v: &SVec, key: usize) -> u32 {
    v.binary_search_by_key(&key, |e| e.0).map_or(0, |i| v[i].1)
}

/// Column-reduced basis of a span, pivoting on the largest key.
#[derive(Debug, Clone)]
struct Echelon {
    f: Field,
    by_low: HashMap<usize, usize>,
    cols: Vec<SVec>,
}

impl Echelon {
    fn new(f: Field) -> Self {
        Echelon { f, by_low: HashMap::new(), cols: Vec::new() }
    }

    /// Reduces `v` against the stored columns. Returns the residue and,
    /// when `track` is set, the multipliers used, by stored column id.
    fn reduce(&self, mut v: SVec, mut track: Option<&mut Vec<(usize, u32)>>) -> SVec {
        while let Some(&(low, c)) = v.last() {
            let Some(&id) = self.by_low.get(&low) else { break };
            let col = &self.cols[id];
            let lead = col.last().unwrap().1;
            let a = self.f.neg(self.f.mul(c, self.f.inv(lead).unwrap()));
            axpy(self.f, &mut v, a, col);
            if let Some(t) = track.as_deref_mut() {
                t.push((id, a));
            }
        }
        v
    }

    /// Inserts a nonzero reduced column; returns its id.
    fn insert(&mut self, v: SVec) -> usize {
        let id = self.cols.len();
        self.by_low.insert(v.last().unwrap().0, id);
        self.cols.push(v);
        id
    }

    fn rank(&self) -> usize {
        self.cols.len()
    }
}

/// A homogeneous matrix over `F_p[U]` in coefficient form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    pub p: u32,
    pub row_deg: Vec<i32>,
    pub col_deg: Vec<i32>,
    /// Columns of `(row, coefficient)`, sorted by row.
    pub cols: Vec<SVec>,
}

impl GradedMatrix {
    /// `d^i` of a BN or Kh complex.
    pub fn from_complex(cx: &GradedComplex, i: i32) -> Result<Self> {
        let tag = cx.theory().tag;
        if !matches!(tag, TheoryTag::Bn | TheoryTag::Kh) {
            return Err(Error::UnsupportedTheory(format!("homology over {tag} is not computed")));
        }
        let d = cx.differential(i).ok_or_else(|| Error::Grading(format!("d^{i} not built")))?;
        let row_deg = cx.block(i + 1).unwrap().qdeg.clone();
        let col_deg = cx.block(i).unwrap().qdeg.clone();
        let mut cols = Vec::with_capacity(d.cols.len());
        for (j, col) in d.cols.iter().enumerate() {
            let mut out = Vec::with_capacity(col.len());
            for (r, e) in col {
                let m = e.as_monomial().ok_or_else(|| Error::Grading(format!("entry {e} is not a monomial")))?;
                if m.degree() != col_deg[j] - row_deg[*r] {
                    return Err(Error::Grading(format!("entry {e} at ({r},{j}) has the wrong degree")));
                }
                out.push((*r, m.coeff().value()));
            }
            cols.push(out);
        }
        Ok(GradedMatrix { p: cx.p(), row_deg, col_deg, cols })
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nrows(&self) -> usize {
        self.row_deg.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> Monomial {
        let v = lookup(&self.cols[c], r);
        if v == 0 {
            return Monomial::zero(self.p);
        }
        let e = (self.row_deg[r] - self.col_deg[c]) / 2;
        Monomial::new(FieldElem::new(v as i64, self.p).unwrap(), e as u32)
    }

    /// Reduction mod `U`: only degree-preserving entries survive.
    pub fn mod_u(&self) -> GradedMatrix {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(j, c)| c.iter().copied().filter(|(r, _)| self.row_deg[*r] == self.col_deg[j]).collect())
            .collect();
        GradedMatrix { cols, ..self.clone() }
    }

    pub fn to_dense(&self) -> Vec<Vec<Monomial>> {
        (0..self.nrows()).map(|r| (0..self.ncols()).map(|c| self.entry(r, c)).collect()).collect()
    }
}

/// Output of [`snf_graded`]: `left · M · right = diag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    /// U-exponents of the nonzero diagonal entries, nondecreasing.
    pub orders: Vec<u32>,
    pub diag: Vec<Vec<Monomial>>,
    pub left: Vec<Vec<Monomial>>,
    pub right: Vec<Vec<Monomial>>,
}

fn identity(n: usize, p: u32) -> Vec<Vec<Monomial>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Monomial::one(p) } else { Monomial::zero(p) }).collect()).collect()
}

/// Product of monomial matrices; fails on a degree-inconsistent sum.
pub fn mono_matmul(a: &[Vec<Monomial>], b: &[Vec<Monomial>], p: u32) -> Result<Vec<Vec<Monomial>>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Monomial::zero(p); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = Monomial::zero(p);
            for (k, row) in b.iter().enumerate() {
                acc = acc.try_add(&(a[i][k] * row[j]))?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// Smith normal form of a dense homogeneous monomial matrix by full-pivot
/// elimination, pivoting on the least U-exponent (ties by position).
pub fn snf_graded(m: &[Vec<Monomial>], p: u32) -> Result<Snf> {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Monomial>> = m.to_vec();
    let mut left = identity(nr, p);
    let mut right = identity(nc, p);
    let mut orders = Vec::new();
    for k in 0..nr.min(nc) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if !e.is_zero() && best.is_none_or(|b| e.upow() < b.0) {
                    best = Some((e.upow(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(k, pi);
        left.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        for row in right.iter_mut() {
            row.swap(k, pj);
        }
        // unit leading coefficient
        let inv = a[k][k].coeff().inv()?;
        for x in a[k].iter_mut() {
            *x = x.scale(inv);
        }
        for x in left[k].iter_mut() {
            *x = x.scale(inv);
        }
        let piv = a[k][k];
        for i in 0..nr {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let q = mono_divide(a[i][k], piv)?;
            for j in 0..nc {
                a[i][j] = a[i][j].try_sub(&(q * a[k][j]))?;
            }
            for j in 0..nr {
                left[i][j] = left[i][j].try_sub(&(q * left[k][j]))?;
            }
        }
        for j in 0..nc {
            if j == k || a[k][j].is_zero() {
                continue;
            }
            let q = mono_divide(a[k][j], piv)?;
            for row in a.iter_mut() {
                row[j] = row[j].try_sub(&(q * row[k]))?;
            }
            for row in right.iter_mut() {
                row[j] = row[j].try_sub(&(q * row[k]))?;
            }
        }
        orders.push(piv.upow());
    }
    Ok(Snf { orders, diag: a, left, right })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SummandKind {
    Free,
    /// `F[U]/(U^t)`, `t ≥ 1`.
    Torsion(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub kind: SummandKind,
    pub qdeg: i32,
    /// Generator cycle over the basis of `C^i`, as `F_p` coefficients; the
    /// U-power at basis element `j` is `(q_j − qdeg)/2`.
    pub generator: SVec,
}

/// Coordinates of a class, one per summand, reduced mod `U^t` on torsion
/// summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub coords: Vec<Monomial>,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Monomial::is_zero)
    }
}

/// Degree-`i` homology over `F_p[U]`, with enough change-of-basis data to
/// coordinate any cycle.
#[derive(Debug, Clone)]
pub struct HomologyPresentation {
    pub degree: i32,
    pub p: u32,
    pub summands: Vec<Summand>,
    qdeg: Vec<i32>,
    /// Basis index → position in birth order (descending degree).
    pos: Vec<usize>,
    by_pos: Vec<usize>,
    d_out: Option<GradedMatrix>,
    d_in: Option<GradedMatrix>,
    /// Kernel vectors keyed by position, by leader position.
    kernel: HashMap<usize, SVec>,
    /// Leader position → (reduced relation column keyed by leader
    /// position, its degree).
    pairs: HashMap<usize, (SVec, i32)>,
    /// Leader position → summand index.
    summand_of: HashMap<usize, usize>,
}

fn birth_order(qdeg: &[i32]) -> (Vec<usize>, Vec<usize>) {
    let mut by_pos: Vec<usize> = (0..qdeg.len()).collect();
    by_pos.sort_by_key(|&j| (-qdeg[j], j));
    let mut pos = vec![0; qdeg.len()];
    for (k, &j) in by_pos.iter().enumerate() {
        pos[j] = k;
    }
    (pos, by_pos)
}

fn incoming(cx: &GradedComplex, i: i32) -> Result<Option<GradedMatrix>> {
    let (lo, _) = cx.range();
    if i - 1 >= lo {
        return GradedMatrix::from_complex(cx, i - 1).map(Some);
    }
    if lo > -(cx.word().n_minus() as i32) {
        return Err(Error::Grading(format!("degree {} not built", i - 1)));
    }
    Ok(None)
}

fn outgoing(cx: &GradedComplex, i: i32) -> Result<Option<GradedMatrix>> {
    let (_, hi) = cx.range();
    if i + 1 <= hi {
        return GradedMatrix::from_complex(cx, i).map(Some);
    }
    if hi < cx.word().len() as i32 - cx.word().n_minus() as i32 {
        return Err(Error::Grading(format!("degree {} not built", i + 1)));
    }
    Ok(None)
}

pub fn homology_u(cx: &GradedComplex, i: i32) -> Result<HomologyPresentation> {
    if cx.theory().tag != TheoryTag::Bn {
        return Err(Error::UnsupportedTheory(format!("U-homology needs bn, got {}", cx.theory().tag)));
    }
    let blk = cx.block(i).ok_or_else(|| Error::Grading(format!("degree {i} not built")))?;
    let d_out = outgoing(cx, i)?;
    let d_in = incoming(cx, i)?;
    HomologyPresentation::compute(i, cx.p(), blk.qdeg.clone(), d_in, d_out)
}

impl HomologyPresentation {
    pub fn compute(
        degree: i32,
        p: u32,
        qdeg: Vec<i32>,
        d_in: Option<GradedMatrix>,
        d_out: Option<GradedMatrix>,
    ) -> Result<Self> {
        let f = Field::new(p)?;
        let n = qdeg.len();
        let (pos, by_pos) = birth_order(&qdeg);

        // Kernel of d_out: reduce its columns in birth order, tracking the
        // basis change; columns that die give kernel vectors led by their
        // own position.
        let mut kernel: HashMap<usize, SVec> = HashMap::new();
        match &d_out {
            None => {
                for k in 0..n {
                    kernel.insert(k, vec![(k, 1)]);
                }
            }
            Some(d) => {
                let mut ech = Echelon::new(f);
                let mut transforms: Vec<SVec> = Vec::new();
                for (k, &j) in by_pos.iter().enumerate() {
                    let mut track = Vec::new();
                    let v = ech.reduce(d.cols[j].clone(), Some(&mut track));
                    let mut t: SVec = vec![(k, 1)];
                    for (id, a) in track {
                        axpy(f, &mut t, a, &transforms[id]);
                    }
                    if v.is_empty() {
                        kernel.insert(k, t);
                    } else {
                        ech.insert(v);
                        transforms.push(t);
                    }
                }
            }
        }

        let mut pres = HomologyPresentation {
            degree,
            p,
            summands: Vec::new(),
            qdeg,
            pos,
            by_pos,
            d_out,
            d_in,
            kernel,
            pairs: HashMap::new(),
            summand_of: HashMap::new(),
        };

        // Relations in kernel coordinates, reduced with the latest-born
        // kernel generator as pivot, columns taken in descending degree.
        let mut relations: Vec<(usize, i32)> = match &pres.d_in {
            Some(d) => (0..d.ncols()).map(|c| (c, d.col_deg[c])).collect(),
            None => vec![],
        };
        relations.sort_by_key(|&(c, q)| (-q, c));
        let mut ech = Echelon::new(f);
        for (c, q) in relations {
            let col = pres.d_in.as_ref().unwrap().cols[c].clone();
            let coords = pres.kernel_coords(pres.to_pos(&col))?;
            let v = ech.reduce(coords, None);
            if !v.is_empty() {
                let low = v.last().unwrap().0;
                ech.insert(v.clone());
                pres.pairs.insert(low, (v, q));
            }
        }

        let mut leaders: Vec<usize> = pres.kernel.keys().copied().collect();
        leaders.sort_unstable();
        for r in leaders {
            let qr = pres.qdeg[pres.by_pos[r]];
            let (kind, gen_coords) = match pres.pairs.get(&r) {
                None => (SummandKind::Free, vec![(r, 1)]),
                Some((col, qc)) => {
                    let t = ((qr - qc) / 2) as u32;
                    if t == 0 {
                        continue;
                    }
                    let lead = col.last().unwrap().1;
                    let inv = f.inv(lead)?;
                    (SummandKind::Torsion(t), col.iter().map(|&(k, c)| (k, f.mul(c, inv))).collect())
                }
            };
            let mut gen_pos: SVec = Vec::new();
            for (k, c) in gen_coords {
                axpy(f, &mut gen_pos, c, &pres.kernel[&k]);
            }
            let mut generator: SVec = gen_pos.into_iter().map(|(k, c)| (pres.by_pos[k], c)).collect();
            generator.sort_unstable();
            pres.summand_of.insert(r, pres.summands.len());
            pres.summands.push(Summand { kind, qdeg: qr, generator });
        }
        Ok(pres)
    }

    fn field(&self) -> Field {
        Field::new(self.p).unwrap()
    }

    fn to_pos(&self, v: &SVec) -> SVec {
        let mut out: SVec = v.iter().map(|&(j, c)| (self.pos[j], c)).collect();
        out.sort_unstable();
        out
    }

    /// Writes a cycle (keyed by position) in the kernel basis, keyed by
    /// leader position.
    fn kernel_coords(&self, mut v: SVec) -> Result<SVec> {
        let f = self.field();
        let mut out = Vec::new();
        while let Some(&(lead, c)) = v.last() {
            let kv = self.kernel.get(&lead).ok_or(Error::NotACycle)?;
            out.push((lead, c));
            axpy(f, &mut v, f.neg(c), kv);
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn free_rank(&self) -> usize {
        self.summands.iter().filter(|s| s.kind == SummandKind::Free).count()
    }

    pub fn free_degrees(&self) -> Vec<i32> {
        let mut v: Vec<i32> =
            self.summands.iter().filter(|s| s.kind == SummandKind::Free).map(|s| s.qdeg).collect();
        v.sort_unstable();
        v
    }

    /// `(qdeg, t)` for each torsion summand.
    pub fn torsion(&self) -> Vec<(i32, u32)> {
        let mut v: Vec<(i32, u32)> = self
            .summands
            .iter()
            .filter_map(|s| match s.kind {
                SummandKind::Torsion(t) => Some((s.qdeg, t)),
                SummandKind::Free => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    pub fn qdeg(&self) -> &[i32] {
        &self.qdeg
    }

    /// Coefficient form of a homogeneous chain of degree `q` in `C^i`.
    pub fn chain_vector(&self, cx: &GradedComplex, z: &EnhancedChain) -> Result<(SVec, Option<i32>)> {
        let Some((i, q)) = cx.bidegree(z) else {
            if z.is_zero() {
                return Ok((vec![], None));
            }
            return Err(Error::Grading("chain is not homogeneous".into()));
        };
        if i != self.degree {
            return Err(Error::Grading(format!("chain in degree {i}, presentation in {}", self.degree)));
        }
        let mut v: SVec = Vec::new();
        for (s, c) in z.terms() {
            let m = c.as_monomial().ok_or_else(|| Error::Grading(format!("coefficient {c} not a U-monomial")))?;
            let j = cx.index_of(s).ok_or_else(|| Error::Grading("state not in complex".into()))?;
            v.push((j, m.coeff().value()));
        }
        v.sort_unstable();
        Ok((v, Some(q)))
    }

    pub fn is_cycle(&self, v: &SVec) -> bool {
        let Some(d) = &self.d_out else { return true };
        let f = self.field();
        let mut acc: SVec = Vec::new();
        for &(j, c) in v {
            axpy(f, &mut acc, c, &d.cols[j]);
        }
        acc.is_empty()
    }

    /// Coordinates of a cycle given in coefficient form at degree `q`.
    pub fn coordinates_vec(&self, v: &SVec, q: i32) -> Result<ClassCoordinates> {
        let f = self.field();
        let mut coords = vec![Monomial::zero(self.p); self.summands.len()];
        if v.is_empty() {
            return Ok(ClassCoordinates { coords });
        }
        if v.iter().any(|&(j, _)| self.qdeg[j] < q || (self.qdeg[j] - q) % 2 != 0) {
            return Err(Error::Grading(format!("vector not of degree {q}")));
        }
        if !self.is_cycle(v) {
            return Err(Error::NotACycle);
        }
        let mut a = self.kernel_coords(self.to_pos(v))?;
        while let Some(&(r, c)) = a.last() {
            let qr = self.qdeg[self.by_pos[r]];
            let e = ((qr - q) / 2) as u32;
            match self.pairs.get(&r) {
                Some((col, qc)) => {
                    let lead = col.last().unwrap().1;
                    let x = f.mul(c, f.inv(lead)?);
                    axpy(f, &mut a, f.neg(x), col);
                    let t = ((qr - qc) / 2) as u32;
                    if t > 0 {
                        let m = Monomial::new(FieldElem::new(x as i64, self.p)?, e).reduce_mod(t);
                        coords[self.summand_of[&r]] = m;
                    }
                }
                None => {
                    a.pop();
                    coords[self.summand_of[&r]] = Monomial::new(FieldElem::new(c as i64, self.p)?, e);
                }
            }
        }
        Ok(ClassCoordinates { coords })
    }

    pub fn coordinates(&self, cx: &GradedComplex, z: &EnhancedChain) -> Result<ClassCoordinates> {
        let (v, q) = self.chain_vector(cx, z)?;
        match q {
            None => Ok(ClassCoordinates { coords: vec![Monomial::zero(self.p); self.summands.len()] }),
            Some(q) => self.coordinates_vec(&v, q),
        }
    }

    /// `Σ coordⱼ·genⱼ` in coefficient form at degree `q`.
    pub fn reconstruct(&self, c: &ClassCoordinates, q: i32) -> Result<SVec> {
        let f = self.field();
        let mut out: SVec = Vec::new();
        for (s, m) in self.summands.iter().zip(&c.coords) {
            if m.is_zero() {
                continue;
            }
            if s.qdeg - 2 * m.upow() as i32 != q {
                return Err(Error::Grading("coordinate degree mismatch".into()));
            }
            axpy(f, &mut out, m.coeff().value(), &s.generator);
        }
        Ok(out)
    }

    /// Whether a degree-`q` element lies in `im d^{i−1}` over `F_p[U]`.
    pub fn is_boundary(&self, v: &SVec, q: i32) -> bool {
        if v.is_empty() {
            return true;
        }
        let Some(d) = &self.d_in else { return false };
        span_contains(self.field(), d, |qc| qc >= q, v)
    }
}

fn span_contains(f: Field, d: &GradedMatrix, keep: impl Fn(i32) -> bool, v: &SVec) -> bool {
    let mut ech = Echelon::new(f);
    for (c, col) in d.cols.iter().enumerate() {
        if keep(d.col_deg[c]) {
            let r = ech.reduce(col.clone(), None);
            if !r.is_empty() {
                ech.insert(r);
            }
        }
    }
    ech.reduce(v.clone(), None).is_empty()
}

/// Largest `k` with `U^k·y = class` solvable, from reduced coordinates.
pub fn u_divisibility(pres: &HomologyPresentation, c: &ClassCoordinates) -> Result<u32> {
    let free_nonzero = pres.summands.iter().zip(&c.coords).any(|(s, m)| s.kind == SummandKind::Free && !m.is_zero());
    if !free_nonzero {
        return Err(Error::TorsionClass);
    }
    Ok(c.coords.iter().filter(|m| !m.is_zero()).map(Monomial::upow).min().unwrap())
}

fn outside_full_range(cx: &GradedComplex, i: i32) -> bool {
    let nm = cx.word().n_minus() as i32;
    i < -nm || i > cx.word().len() as i32 - nm
}

fn rank_by_degree(f: Field, d: &GradedMatrix) -> BTreeMap<i32, usize> {
    let mut groups: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (c, &q) in d.col_deg.iter().enumerate() {
        groups.entry(q).or_default().push(c);
    }
    groups
        .into_iter()
        .map(|(q, cs)| {
            let mut ech = Echelon::new(f);
            for c in cs {
                let r = ech.reduce(d.cols[c].clone(), None);
                if !r.is_empty() {
                    ech.insert(r);
                }
            }
            (q, ech.rank())
        })
        .collect()
}

/// `dim_F H^{i,q}` of the Khovanov complex for every `q`, from a Kh complex
/// or from a BN complex reduced mod `U`. Zero entries are omitted.
pub fn kh_dimensions(cx: &GradedComplex, i: i32) -> Result<BTreeMap<i32, usize>> {
    let f = Field::new(cx.p())?;
    if outside_full_range(cx, i) {
        return Ok(BTreeMap::new());
    }
    let qdeg = cx.block(i).ok_or_else(|| Error::Grading(format!("degree {i} not built")))?.qdeg.clone();
    let d_in = incoming(cx, i)?.map(|m| m.mod_u());
    let d_out = outgoing(cx, i)?.map(|m| m.mod_u());
    let mut dims: BTreeMap<i32, i64> = BTreeMap::new();
    for &q in &qdeg {
        *dims.entry(q).or_insert(0) += 1;
    }
    if let Some(d) = &d_out {
        for (q, r) in rank_by_degree(f, d) {
            *dims.entry(q).or_insert(0) -= r as i64;
        }
    }
    if let Some(d) = &d_in {
        for (q, r) in rank_by_degree(f, d) {
            *dims.entry(q).or_insert(0) -= r as i64;
        }
    }
    Ok(dims.into_iter().filter(|(_, v)| *v != 0).map(|(q, v)| (q, v as usize)).collect())
}

pub fn homology_f(cx: &GradedComplex, i: i32, q: i32) -> Result<usize> {
    Ok(kh_dimensions(cx, i)?.get(&q).copied().unwrap_or(0))
}

/// Whether a chain, reduced mod `U`, is a Khovanov boundary. The chain must
/// be homogeneous of degree `i`.
pub fn kh_boundary_contains(cx: &GradedComplex, i: i32, z: &EnhancedChain) -> Result<bool> {
    let f = Field::new(cx.p())?;
    let z0 = z.specialize(Some(FieldElem::zero(cx.p())), None);
    if z0.is_zero() {
        return Ok(true);
    }
    let (_, q) = cx.bidegree(&z0).ok_or_else(|| Error::Grading("chain is not homogeneous".into()))?;
    let d_in = incoming(cx, i)?.map(|m| m.mod_u());
    let mut v: SVec = Vec::new();
    for (s, c) in z0.terms() {
        let c = c.as_constant().ok_or_else(|| Error::Grading("non-constant coefficient".into()))?;
        v.push((cx.index_of(s).ok_or_else(|| Error::Grading("state not in complex".into()))?, c.value()));
    }
    v.sort_unstable();
    let Some(d) = d_in else { return Ok(false) };
    Ok(span_contains(f, &d, |qc| qc == q, &v))
}

/// Whether a homogeneous BN chain of degree `i` is a boundary over `F_p[U]`.
pub fn boundary_contains(cx: &GradedComplex, i: i32, z: &EnhancedChain) -> Result<bool> {
    if z.is_zero() {
        return Ok(true);
    }
    let f = Field::new(cx.p())?;
    let (zi, q) = cx.bidegree(z).ok_or_else(|| Error::Grading("chain is not homogeneous".into()))?;
    if zi != i {
        return Err(Error::Grading(format!("chain in degree {zi}, expected {i}")));
    }
    let mut v: SVec = Vec::new();
    for (s, c) in z.terms() {
        let m = c.as_monomial().ok_or_else(|| Error::Grading(format!("coefficient {c} not a U-monomial")))?;
        v.push((cx.index_of(s).ok_or_else(|| Error::Grading("state not in complex".into()))?, m.coeff().value()));
    }
    v.sort_unstable();
    let Some(d) = incoming(cx, i)? else { return Ok(false) };
    Ok(span_contains(f, &d, |qc| qc >= q, &v))
}
