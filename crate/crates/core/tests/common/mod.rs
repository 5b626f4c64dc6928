//! Independent oracles shared by the integration tests. Circle counts and
//! linear algebra are redone from scratch; only [`predicted`] reads the
//! homology engine, so that it can be compared against them.
#![allow(dead_code)]

use std::collections::BTreeMap;

use khbeta::braid::BraidWord;
use khbeta::cube::{build_complex, GradedComplex};
use khbeta::frobenius::Theory;
use khbeta::homalg::{homology_u, SummandKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every word with at most `max_len` letters on `2..=max_strands` strands,
/// plus the one-strand unknot.
pub fn all_words(max_len: usize, max_strands: usize) -> Vec<BraidWord> {
    let mut out = vec![BraidWord::unknot()];
    for n in 2..=max_strands {
        let alphabet: Vec<i32> = (1..n as i32).flat_map(|g| [g, -g]).collect();
        let mut layer: Vec<Vec<i32>> = vec![vec![]];
        for _ in 0..=max_len {
            let mut next = Vec::new();
            for w in &layer {
                out.push(BraidWord::new(n, w.clone()).unwrap());
                for &a in &alphabet {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            layer = next;
            if layer.first().is_some_and(|w| w.len() > max_len) {
                break;
            }
        }
    }
    out
}

pub fn random_words(seed: u64, count: usize, max_len: usize, max_strands: usize) -> Vec<BraidWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_strands);
            let len = rng.gen_range(0..=max_len);
            let letters = (0..len)
                .map(|_| {
                    let g = rng.gen_range(1..n as i32);
                    if rng.gen_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect();
            BraidWord::new(n, letters).unwrap()
        })
        .collect()
}

/// Loops of the closure when crossing `t` is smoothed "straight" iff bit `t`
/// of `straight` is set. Nodes are strand segments; each is joined to its
/// neighbours below and above, and loops are counted by walking.
pub fn loops(b: &BraidWord, straight: u64) -> usize {
    let n = b.strands();
    let k = b.len();
    if k == 0 {
        return n;
    }
    // Segment (j, t): slot j between crossing t-1 and crossing t.
    let id = |j: usize, t: usize| (t % k) * n + j;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n * k];
    for (t, &l) in b.letters().iter().enumerate() {
        let i = l.unsigned_abs() as usize - 1;
        for j in 0..n {
            if j != i && j != i + 1 {
                adj[id(j, t)].push(id(j, t + 1));
                adj[id(j, t + 1)].push(id(j, t));
            }
        }
        let pairs = if straight >> t & 1 == 1 {
            [(id(i, t), id(i, t + 1)), (id(i + 1, t), id(i + 1, t + 1))]
        } else {
            [(id(i, t), id(i + 1, t)), (id(i, t + 1), id(i + 1, t + 1))]
        };
        for (a, c) in pairs {
            adj[a].push(c);
            adj[c].push(a);
        }
    }
    let mut seen = vec![false; n * k];
    let mut count = 0;
    for s in 0..n * k {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

type Laurent = BTreeMap<i32, i64>;

fn lmul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_insert(0) += x * y;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Kauffman bracket `⟨D⟩ ∈ Z[A^±]` as a state sum. The A-smoothing of a
/// positive letter is the straight one.
pub fn bracket(b: &BraidWord) -> Laurent {
    let k = b.len();
    let delta: Laurent = [(2, -1), (-2, -1)].into();
    let mut total = Laurent::new();
    for s in 0..(1u64 << k) {
        // Bit set: A-smoothing.
        let mut a_minus_b = 0;
        let mut straight = 0u64;
        for (t, &l) in b.letters().iter().enumerate() {
            let a = s >> t & 1 == 1;
            a_minus_b += if a { 1 } else { -1 };
            if a == (l > 0) {
                straight |= 1 << t;
            }
        }
        let mut term: Laurent = [(a_minus_b, 1)].into();
        for _ in 1..loops(b, straight) {
            term = lmul(&term, &delta);
        }
        for (e, c) in term {
            *total.entry(e).or_insert(0) += c;
        }
    }
    total.retain(|_, v| *v != 0);
    total
}

/// `(−A³)^{−w}⟨D⟩` in powers of `A`.
pub fn normalized_bracket(b: &BraidWord) -> Laurent {
    let w = b.writhe();
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    bracket(b).into_iter().map(|(e, c)| (e - 3 * w, sign * c)).collect()
}

/// Jones polynomial in powers of `t^{1/4}` would need fractions; this
/// returns it in powers of `t^{1/2}` (exponent `m` means `t^{m/2}`).
pub fn jones_half(b: &BraidWord) -> Laurent {
    normalized_bracket(b).into_iter().map(|(e, c)| (-e / 2, c)).collect()
}

/// The graded Euler characteristic of Khovanov homology predicted by the
/// bracket: `(q + q⁻¹)·V` with `t^{1/2} = −q`.
pub fn kh_euler_oracle(b: &BraidWord) -> Laurent {
    let v: Laurent =
        jones_half(b).into_iter().map(|(m, c)| (m, if m.rem_euclid(2) == 0 { c } else { -c })).collect();
    lmul(&v, &[(1, 1), (-1, 1)].into())
}

/// `|V(−1)|` for a knot.
pub fn determinant(b: &BraidWord) -> i64 {
    // t^{m/2} at t = −1 for even m only; knots have no odd m.
    let mut s = 0i64;
    for (m, c) in jones_half(b) {
        assert!(m % 2 == 0, "odd half-power for a knot");
        s += if (m / 2).rem_euclid(2) == 0 { c } else { -c };
    }
    s.abs()
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

/// Rank of a dense matrix over `F_p` (rows of equal length).
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for cc in 0..cols {
                    m[r][cc] = (m[r][cc] + p * p - f * m[rank][cc] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `v` lies in the span of `cols` over `F_p`.
pub fn in_span(cols: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let to_rows = |cs: &[Vec<u64>]| -> Vec<Vec<u64>> {
        if cs.is_empty() {
            return vec![];
        }
        (0..cs[0].len()).map(|r| cs.iter().map(|c| c[r]).collect()).collect()
    };
    let base = rank_mod_p(to_rows(cols), p);
    let mut ext = cols.to_vec();
    ext.push(v.to_vec());
    rank_mod_p(to_rows(&ext), p) == base
}

/// `(coefficient, U-exponent)` of a differential entry.
fn entry(c: &khbeta::coeff::Poly) -> (u64, u32) {
    let terms: Vec<_> = c.terms().collect();
    assert_eq!(terms.len(), 1, "entry {c} is not a monomial");
    let ((eu, ev), x) = terms[0];
    assert_eq!(ev, 0, "V in a Bar-Natan entry");
    (x.value() as u64, eu)
}

/// `dim H^{i,q}` of `C ⊗ F[U]/U^N`, by dense linear algebra per quantum
/// degree. The complex must be Bar-Natan and cover `i − 1..=i + 1` when
/// those degrees exist.
pub fn truncated_dims(cx: &GradedComplex, i: i32, n: u32) -> BTreeMap<i32, usize> {
    let p = cx.p() as u64;
    // Basis of degree j, quantum degree q: generators g with a = (q_g − q)/2
    // in 0..N.
    let basis = |j: i32, q: i32| -> Vec<usize> {
        cx.block(j).map_or(vec![], |b| {
            (0..b.gens.len())
                .filter(|&g| {
                    let d = b.qdeg[g] - q;
                    d >= 0 && d % 2 == 0 && d / 2 < n as i32
                })
                .collect()
        })
    };
    let matrix = |j: i32, q: i32| -> Vec<Vec<u64>> {
        let (src, dst) = (basis(j, q), basis(j + 1, q));
        let Some(d) = cx.differential(j) else { return vec![] };
        let qs = &cx.block(j).unwrap().qdeg;
        let qd = &cx.block(j + 1).unwrap().qdeg;
        let pos: BTreeMap<usize, usize> = dst.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let mut rows = vec![vec![0u64; src.len()]; dst.len()];
        for (ci, &g) in src.iter().enumerate() {
            let a = (qs[g] - q) / 2;
            for (r, c) in &d.cols[g] {
                let (x, e) = entry(c);
                let Some(&ri) = pos.get(r) else { continue };
                debug_assert_eq!((qd[*r] - q) / 2, a + e as i32);
                rows[ri][ci] = x % p;
            }
        }
        rows
    };
    let mut qs: Vec<i32> = Vec::new();
    if let Some(b) = cx.block(i) {
        for &qg in &b.qdeg {
            for a in 0..n as i32 {
                qs.push(qg - 2 * a);
            }
        }
    }
    qs.sort_unstable();
    qs.dedup();
    let mut out = BTreeMap::new();
    for q in qs {
        let dim = basis(i, q).len();
        let out_rank = rank_mod_p(matrix(i, q), p);
        let in_rank = rank_mod_p(matrix(i - 1, q), p);
        let h = dim - out_rank - in_rank;
        if h > 0 {
            out.insert(q, h);
        }
    }
    out
}

/// The largest `k` with `z ∈ U^k·C^0 + d(C^{−1})` in the quantum degree of
/// `z`, or `None` when `z` is a boundary. `z` is given as `(index, coeff,
/// U-exponent)` triples in degree 0.
pub fn brute_force_divisibility(cx: &GradedComplex, z: &khbeta::cube::EnhancedChain) -> Option<u32> {
    let p = cx.p() as u64;
    let (_, q0) = cx.bidegree(z).expect("homogeneous");
    let b0 = cx.block(0).unwrap();
    let basis: Vec<usize> =
        (0..b0.gens.len()).filter(|&g| b0.qdeg[g] >= q0 && (b0.qdeg[g] - q0) % 2 == 0).collect();
    let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let a_of = |g: usize| ((b0.qdeg[g] - q0) / 2) as u32;
    let mut v = vec![0u64; basis.len()];
    for (s, c) in z.terms() {
        let g = cx.index_of(s).unwrap();
        v[pos[&g]] = entry(c).0 % p;
    }
    let mut bcols: Vec<Vec<u64>> = Vec::new();
    if let (Some(d), Some(bm)) = (cx.differential(-1), cx.block(-1)) {
        for h in 0..bm.gens.len() {
            let dq = bm.qdeg[h] - q0;
            if dq < 0 || dq % 2 != 0 {
                continue;
            }
            let mut col = vec![0u64; basis.len()];
            for (r, c) in &d.cols[h] {
                if let Some(&ri) = pos.get(r) {
                    col[ri] = entry(c).0 % p;
                }
            }
            bcols.push(col);
        }
    }
    let max_a = basis.iter().map(|&g| a_of(g)).max().unwrap_or(0);
    let mut best = None;
    for k in 0..=max_a + 1 {
        let mut cols = bcols.clone();
        for (idx, &g) in basis.iter().enumerate() {
            if a_of(g) >= k {
                let mut e = vec![0u64; basis.len()];
                e[idx] = 1;
                cols.push(e);
            }
        }
        if in_span(&cols, &v, p) {
            best = Some(k);
        } else {
            break;
        }
    }
    if best == Some(max_a + 1) {
        None
    } else {
        best
    }
}

/// Whether `z mod U` is a boundary of the Khovanov complex, using only the
/// constant parts of `d`.
pub fn brute_force_psi_vanishes(cx: &GradedComplex, z: &khbeta::cube::EnhancedChain) -> bool {
    let p = cx.p() as u64;
    let (_, q0) = cx.bidegree(z).expect("homogeneous");
    let b0 = cx.block(0).unwrap();
    let basis: Vec<usize> = (0..b0.gens.len()).filter(|&g| b0.qdeg[g] == q0).collect();
    let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let mut v = vec![0u64; basis.len()];
    for (s, c) in z.terms() {
        let g = cx.index_of(s).unwrap();
        if let Some(&i) = pos.get(&g) {
            v[i] = entry(c).0 % p;
        }
    }
    let mut cols = Vec::new();
    if let (Some(d), Some(bm)) = (cx.differential(-1), cx.block(-1)) {
        for h in (0..bm.gens.len()).filter(|&h| bm.qdeg[h] == q0) {
            let mut col = vec![0u64; basis.len()];
            for (r, c) in &d.cols[h] {
                if let Some(&ri) = pos.get(r) {
                    col[ri] = entry(c).0 % p;
                }
            }
            cols.push(col);
        }
    }
    in_span(&cols, &v, p)
}

/// Dimensions of `H^i(C ⊗ F[U]/U^N)` for every `i`, predicted from the
/// `F[U]` presentation by universal coefficients.
pub fn predicted_all(b: &BraidWord, n: u32) -> BTreeMap<i32, BTreeMap<i32, usize>> {
    let cx = build_complex(b, Theory::bn(3).unwrap()).unwrap();
    let (lo, hi) = cx.range();
    let pres: Vec<_> = (lo..=hi).map(|i| homology_u(&cx, i).unwrap()).collect();
    let mut all = BTreeMap::new();
    for i in lo..=hi {
        let mut out = BTreeMap::new();
        let mut bump = |q: i32| *out.entry(q).or_insert(0) += 1;
        for s in &pres[(i - lo) as usize].summands {
            let len = match s.kind {
                SummandKind::Free => n,
                SummandKind::Torsion(t) => t.min(n),
            };
            for a in 0..len as i32 {
                bump(s.qdeg - 2 * a);
            }
        }
        if i < hi {
            for (q, t) in pres[(i + 1 - lo) as usize].torsion() {
                for m in n.saturating_sub(t)..n {
                    bump(q - 2 * t as i32 - 2 * m as i32);
                }
            }
        }
        all.insert(i, out);
    }
    all
}

/// A basis of the right kernel of `m` (rows of length `cols`).
pub fn nullspace(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for cc in 0..cols {
                    m[r][cc] = (m[r][cc] + p * p - f * m[rank][cc] % p) % p;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f] % p) % p;
            }
            v
        })
        .collect()
}

/// `s` of a knot from the filtration that `F[U]` induces on the degree-0
/// homology of `C ⊗ F[U, U⁻¹]` (the complex at `U = 1`). `F_q` is the image
/// of degree-`q` cycles; its dimension is 2 up to `s − 1`, then 1 up to
/// `s + 1`, then 0.
pub fn s_oracle(b: &BraidWord, p: u32) -> i32 {
    let cx = build_complex(b, Theory::bn(p).unwrap()).unwrap();
    let pp = p as u64;
    let b0 = cx.block(0).unwrap();
    let n0 = b0.gens.len();
    // d at U = 1 out of degree −1 and out of degree 0, over all generators.
    let dense = |i: i32| -> Option<Vec<Vec<u64>>> {
        let d = cx.differential(i)?;
        let mut rows = vec![vec![0u64; d.ncols()]; d.nrows];
        for (c, col) in d.cols.iter().enumerate() {
            for (r, e) in col {
                rows[*r][c] = entry(e).0 % pp;
            }
        }
        Some(rows)
    };
    let bound_cols: Vec<Vec<u64>> = match dense(-1) {
        Some(m) => (0..m[0].len()).map(|c| m.iter().map(|row| row[c]).collect()).collect(),
        None => vec![],
    };
    let d0 = dense(0);
    let dim_f = |q: i32| -> usize {
        let keep: Vec<usize> = (0..n0).filter(|&g| b0.qdeg[g] >= q && (b0.qdeg[g] - q) % 2 == 0).collect();
        // Cycles supported on `keep`: kernel of d⁰ restricted to those columns.
        let cycles: Vec<Vec<u64>> = match &d0 {
            Some(m) => {
                let sub: Vec<Vec<u64>> = m.iter().map(|row| keep.iter().map(|&g| row[g]).collect()).collect();
                nullspace(sub, keep.len(), pp)
                    .into_iter()
                    .map(|v| {
                        let mut full = vec![0u64; n0];
                        for (k, &g) in keep.iter().enumerate() {
                            full[g] = v[k];
                        }
                        full
                    })
                    .collect()
            }
            None => keep
                .iter()
                .map(|&g| {
                    let mut e = vec![0u64; n0];
                    e[g] = 1;
                    e
                })
                .collect(),
        };
        let as_rows = |cols: &[Vec<u64>]| -> Vec<Vec<u64>> {
            (0..n0).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
        };
        let base = if bound_cols.is_empty() { 0 } else { rank_mod_p(as_rows(&bound_cols), pp) };
        let mut all = bound_cols.clone();
        all.extend(cycles);
        if all.is_empty() {
            return 0;
        }
        rank_mod_p(as_rows(&all), pp) - base
    };
    let qs: Vec<i32> = {
        let mut v = b0.qdeg.clone();
        v.sort_unstable();
        v.dedup();
        v
    };
    let top2 = qs.iter().copied().filter(|&q| dim_f(q) == 2).max().expect("rank-2 localized homology");
    let top1 = qs.iter().copied().filter(|&q| dim_f(q) >= 1).max().unwrap();
    assert_eq!(top1, top2 + 2, "free generators of {b} are not two apart");
    top2 + 1
}
