//! Chain maps for stabilization, the braid-like second Reidemeister move,
//! cyclic rotation and far commutation, and a randomized harness that pushes
//! β through them.
//!
//! Every map is a signed sum of "legs": a target resolution together with a
//! circle transport [`Plan`] built from an explicit arc identification
//! between the two closures. Arc identifications are computed per map, never
//! assumed positionally.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braid::{markov_rewrite, resolve, self_linking, BraidWord, MoveKind, Resolution};
use crate::coeff::Poly;
use crate::cube::{build_complex_range, EnhancedChain, EnhancedState, GradedComplex, Plan, Tables};
use crate::error::{Error, Result};
use crate::frobenius::{AlgebraElement, FrobeniusAlgebra, Theory};
use crate::homalg::boundary_contains;
use crate::invariants::{beta_chain, invariant_report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "map")]
pub enum MapKind {
    /// `C(B) → C(B·σ_n)`, adding a positive curl.
    Phi1Plus,
    /// `C(B·σ_n) → C(B)`, removing it.
    Psi1Plus,
    /// `C(B) → C(B·σ_n⁻¹)`.
    Phi1Minus,
    /// `C(B) → C(B'')` where `B''` has `ℓ, −ℓ` inserted at `site`.
    Psi2 { site: usize },
    /// `C(B'') → C(B)`, removing the pair at `site`.
    Phi2 { site: usize },
    /// `C(ℓ₀ℓ₁…) → C(ℓ₁…ℓ₀)`.
    Rotation,
    /// `C(…ℓₜℓₜ₊₁…) → C(…ℓₜ₊₁ℓₜ…)` with `site = t`.
    FarCommute { site: usize },
}

#[derive(Debug, Clone)]
struct Leg {
    res: u64,
    negate: bool,
    plan: Plan,
    /// A circle born by the plan that carries this element instead of 1.
    dress: Option<(usize, AlgebraElement)>,
}

/// A chain map between the complexes of two braid words. It preserves both
/// gradings.
#[derive(Debug)]
pub struct ChainMap {
    kind: MapKind,
    source: BraidWord,
    target: BraidWord,
    alg: FrobeniusAlgebra,
    tables: Tables,
    /// Legs by source resolution, filled on demand.
    memo: Mutex<HashMap<u64, Arc<Vec<Leg>>>>,
}

impl Clone for ChainMap {
    fn clone(&self) -> Self {
        ChainMap::new(self.kind, self.source.clone(), self.target.clone(), &self.alg)
    }
}

fn oriented_mask(b: &BraidWord) -> u64 {
    b.letters().iter().enumerate().fold(0, |m, (t, &l)| m | (((l < 0) as u64) << t))
}

fn insert_bits(r: u64, site: usize, bits: (u64, u64)) -> u64 {
    let low = r & ((1u64 << site) - 1);
    low | (bits.0 << site) | (bits.1 << (site + 1)) | ((r >> site) << (site + 2))
}

fn remove_bits(r: u64, site: usize) -> u64 {
    (r & ((1u64 << site) - 1)) | ((r >> (site + 2)) << site)
}

/// Local bits `(b_site, b_site+1)` of the parallel-parallel and cap-cup
/// smoothings of the pair `ℓ, −ℓ`.
fn r2_bits(letter: i32) -> ((u64, u64), (u64, u64)) {
    if letter > 0 {
        ((0, 1), (1, 0))
    } else {
        ((1, 0), (0, 1))
    }
}

fn parity(x: u64) -> bool {
    x.count_ones() % 2 == 1
}

impl ChainMap {
    fn new(kind: MapKind, source: BraidWord, target: BraidWord, alg: &FrobeniusAlgebra) -> Self {
        ChainMap { kind, source, target, alg: alg.clone(), tables: Tables::new(alg), memo: Mutex::default() }
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn source(&self) -> &BraidWord {
        &self.source
    }

    pub fn target(&self) -> &BraidWord {
        &self.target
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra {
        &self.alg
    }

    /// Shift in `(homological, quantum)` degree; every map here has none.
    pub fn bidegree_shift(&self) -> (i32, i32) {
        (0, 0)
    }

    /// Arc pairs `(small word arc, big word arc)` for a letter appended to
    /// `small` on a new last strand.
    fn stab_pairs(small: &BraidWord, big: &BraidWord) -> Vec<(usize, usize)> {
        let k = small.len();
        let mut v = Vec::new();
        for j in 1..=small.strands() {
            for t in 0..=k {
                v.push((small.arc(j, t), big.arc(j, t)));
            }
        }
        v
    }

    /// Arc pairs between `small` and `big = small` with a cancelling pair
    /// inserted at `site`. The level cut by the pair maps to both sides.
    fn r2_pairs(small: &BraidWord, big: &BraidWord, site: usize) -> Vec<(usize, usize)> {
        let k = small.len();
        let mut v = Vec::new();
        for j in 1..=small.strands() {
            for t in 0..=k {
                let a = small.arc(j, t);
                match t.cmp(&site) {
                    std::cmp::Ordering::Less => v.push((a, big.arc(j, t))),
                    std::cmp::Ordering::Equal => {
                        v.push((a, big.arc(j, t)));
                        v.push((a, big.arc(j, t + 2)));
                    }
                    std::cmp::Ordering::Greater => v.push((a, big.arc(j, t + 2))),
                }
            }
        }
        v
    }

    fn legs(&self, r: u64) -> Result<Vec<Leg>> {
        let (src, dst) = (&self.source, &self.target);
        let k = src.len();
        let cs = resolve(src, Resolution::new(r, k));
        let dres = |m: u64| resolve(dst, Resolution::new(m, dst.len()));
        let rev = |v: Vec<(usize, usize)>| v.into_iter().map(|(a, b)| (b, a)).collect::<Vec<_>>();
        let leg = |res: u64, negate: bool, plan: Plan| Leg { res, negate, plan, dress: None };
        let legs = match self.kind {
            MapKind::Phi1Plus => {
                let cd = dres(r);
                let n = src.strands();
                let pairs = Self::stab_pairs(src, dst);
                let curl = cd.circle_of_arc(dst.arc(n + 1, 0));
                let keep = Plan::from_arcs(&cs, &cd, pairs.iter().copied())?;
                let split =
                    Plan::from_arcs(&cs, &cd, pairs.iter().copied().chain([(src.arc(n, 0), dst.arc(n + 1, 0))]))?;
                vec![
                    Leg { res: r, negate: false, plan: keep, dress: Some((curl, self.alg.torus_map())) },
                    leg(r, true, split),
                ]
            }
            MapKind::Psi1Plus => {
                if r >> (k - 1) & 1 == 1 {
                    vec![]
                } else {
                    let cd = dres(r);
                    vec![leg(r, false, Plan::from_arcs(&cs, &cd, rev(Self::stab_pairs(dst, src)))?)]
                }
            }
            MapKind::Phi1Minus => {
                let res = r | (1 << k);
                let cd = dres(res);
                vec![leg(res, false, Plan::from_arcs(&cs, &cd, Self::stab_pairs(src, dst))?)]
            }
            MapKind::Psi2 { site } => {
                let (pp, cc) = r2_bits(dst.letters()[site]);
                let tau = parity((r ^ oriented_mask(src)) >> site);
                let pairs = Self::r2_pairs(src, dst, site);
                let (rp, rc) = (insert_bits(r, site, pp), insert_bits(r, site, cc));
                vec![
                    leg(rp, tau, Plan::from_arcs(&cs, &dres(rp), pairs.iter().copied())?),
                    leg(rc, tau, Plan::from_arcs(&cs, &dres(rc), pairs.iter().copied())?),
                ]
            }
            MapKind::Phi2 { site } => {
                let (pp, cc) = r2_bits(src.letters()[site]);
                let local = (r >> site & 1, r >> (site + 1) & 1);
                let r0 = remove_bits(r, site);
                let tau = parity((r0 ^ oriented_mask(dst)) >> site);
                let pairs = rev(Self::r2_pairs(dst, src, site));
                if local == pp {
                    vec![leg(r0, tau, Plan::from_arcs(&cs, &dres(r0), pairs)?)]
                } else if local == cc {
                    vec![leg(r0, !tau, Plan::from_arcs(&cs, &dres(r0), pairs)?)]
                } else {
                    vec![]
                }
            }
            MapKind::Rotation => {
                let rot = |m: u64| (m >> 1) | ((m & 1) << (k - 1));
                let eps = |m: u64| (m & 1 == 1) && parity(m >> 1);
                let negate = eps(r) != eps(oriented_mask(src));
                let res = rot(r);
                let mut pairs = Vec::new();
                for j in 1..=src.strands() {
                    for t in 0..k {
                        pairs.push((src.arc(j, t), dst.arc(j, (t + k - 1) % k)));
                    }
                }
                vec![leg(res, negate, Plan::from_arcs(&cs, &dres(res), pairs)?)]
            }
            MapKind::FarCommute { site } => {
                let (a, b) = (r >> site & 1, r >> (site + 1) & 1);
                let res = (r & !(3 << site)) | (b << site) | (a << (site + 1));
                let eps = |m: u64| (m >> site & 1) & (m >> (site + 1) & 1) == 1;
                let negate = eps(r) != eps(oriented_mask(src));
                let mut pairs = Vec::new();
                for j in 1..=src.strands() {
                    for t in (0..src.levels()).filter(|&t| t != site + 1) {
                        pairs.push((src.arc(j, t), dst.arc(j, t)));
                    }
                }
                vec![leg(res, negate, Plan::from_arcs(&cs, &dres(res), pairs)?)]
            }
        };
        Ok(legs)
    }

    fn push_state(&self, legs: &[Leg], s: &EnhancedState, c: &Poly, out: &mut EnhancedChain) {
        for leg in legs {
            for (l, e) in leg.plan.apply(&self.tables, s.labels) {
                let e = &e * c;
                let e = if leg.negate { -&e } else { e };
                match &leg.dress {
                    None => out.add_term(EnhancedState::new(leg.res, l), e),
                    Some((z, x)) => {
                        out.add_term(EnhancedState::new(leg.res, l), &e * &x.a_plus);
                        out.add_term(EnhancedState::new(leg.res, l | 1 << z), &e * &x.a_minus);
                    }
                }
            }
        }
    }

    fn legs_memo(&self, r: u64) -> Result<Arc<Vec<Leg>>> {
        if let Some(l) = self.memo.lock().unwrap().get(&r) {
            return Ok(l.clone());
        }
        let l = Arc::new(self.legs(r)?);
        self.memo.lock().unwrap().insert(r, l.clone());
        Ok(l)
    }

    pub fn apply_state(&self, s: &EnhancedState) -> Result<EnhancedChain> {
        let mut out = EnhancedChain::zero(self.alg.p());
        self.push_state(&self.legs_memo(s.res)?, s, &Poly::one(self.alg.p()), &mut out);
        Ok(out)
    }

    pub fn apply(&self, x: &EnhancedChain) -> Result<EnhancedChain> {
        let mut out = EnhancedChain::zero(self.alg.p());
        for (s, c) in x.terms() {
            self.push_state(&self.legs_memo(s.res)?, s, c, &mut out);
        }
        Ok(out)
    }

    /// The first basis state of `src` on which `d ∘ Φ ≠ Φ ∘ d`, if any. Both
    /// complexes must cover the full homological range.
    pub fn commutation_defect(&self, src: &GradedComplex, dst: &GradedComplex) -> Result<Option<EnhancedState>> {
        let (lo, hi) = src.range();
        for i in lo..=hi {
            for s in &src.block(i).expect("degree in range").gens {
                let x = EnhancedChain::state(*s, self.alg.p());
                let lhs = d_or_zero(dst, &self.apply(&x)?)?;
                let rhs = self.apply(&d_or_zero(src, &x)?)?;
                if lhs != rhs {
                    return Ok(Some(*s));
                }
            }
        }
        Ok(None)
    }

    /// Whether the map commutes with the differentials of `t`.
    pub fn commutes_in(&self, t: Theory) -> Result<bool> {
        let full = |b: &BraidWord| build_complex_range(b, t, i32::MIN / 2, i32::MAX / 2);
        Ok(self.commutation_defect(&full(&self.source)?, &full(&self.target)?)?.is_none())
    }
}

/// `d` on a chain, treating degrees without an outgoing differential as the
/// top of the complex.
fn d_or_zero(cx: &GradedComplex, x: &EnhancedChain) -> Result<EnhancedChain> {
    let mut out = EnhancedChain::zero(cx.p());
    for (s, c) in x.terms() {
        if cx.differential(cx.homological_degree(s.res)).is_some() {
            let mut one = EnhancedChain::zero(cx.p());
            one.add_term(*s, c.clone());
            out = out.add(&cx.apply_d(&one)?);
        }
    }
    Ok(out)
}

fn site_err(what: &str, b: &BraidWord) -> Error {
    Error::Site(format!("{what} on {b}"))
}

pub fn phi1_plus(b: &BraidWord, alg: &FrobeniusAlgebra) -> Result<ChainMap> {
    let t = markov_rewrite(b, MoveKind::Stabilize { positive: true }, 0)?.word;
    Ok(ChainMap::new(MapKind::Phi1Plus, b.clone(), t, alg))
}

/// `Ψ₁⁺` out of a word ending in a positive stabilization.
pub fn psi1_plus(b: &BraidWord, alg: &FrobeniusAlgebra) -> Result<ChainMap> {
    let rw = markov_rewrite(b, MoveKind::Destabilize, 0).map_err(|_| site_err("no stabilization site", b))?;
    if !rw.transverse {
        return Err(site_err("last letter is a negative stabilization", b));
    }
    Ok(ChainMap::new(MapKind::Psi1Plus, b.clone(), rw.word, alg))
}

pub fn phi1_minus(b: &BraidWord, alg: &FrobeniusAlgebra) -> Result<ChainMap> {
    let t = markov_rewrite(b, MoveKind::Stabilize { positive: false }, 0)?.word;
    Ok(ChainMap::new(MapKind::Phi1Minus, b.clone(), t, alg))
}

/// `Ψ₂` for inserting `letter, −letter` at `site`.
pub fn psi2(b: &BraidWord, site: usize, letter: i32, alg: &FrobeniusAlgebra) -> Result<ChainMap> {
    let t = markov_rewrite(b, MoveKind::R2Insert { letter }, site)
        .map_err(|_| site_err(&format!("cannot insert {letter} at {site}"), b))?
        .word;
    Ok(ChainMap::new(MapKind::Psi2 { site }, b.clone(), t, alg))
}

/// `Φ₂` removing the cancelling pair at `site`. Braid closures only carry
/// coherent second moves, so any cancelling pair is a valid site.
pub fn phi2(b: &BraidWord, site: usize, alg: &FrobeniusAlgebra) -> Result<ChainMap> {
    let t = markov_rewrite(b, MoveKind::R2Remove, site)
        .map_err(|_| site_err(&format!("no cancelling pair at {site}"), b))?
        .word;
    Ok(ChainMap::new(MapKind::Phi2 { site }, b.clone(), t, alg))
}

pub fn rotation(b: &BraidWord, alg: &FrobeniusAlgebra) -> Result<ChainMap> {
    let t = markov_rewrite(b, MoveKind::Rotate, 0)?.word;
    Ok(ChainMap::new(MapKind::Rotation, b.clone(), t, alg))
}

pub fn far_commute(b: &BraidWord, site: usize, alg: &FrobeniusAlgebra) -> Result<ChainMap> {
    let t = markov_rewrite(b, MoveKind::FarCommute, site)
        .map_err(|_| site_err(&format!("letters at {site} do not commute"), b))?
        .word;
    Ok(ChainMap::new(MapKind::FarCommute { site }, b.clone(), t, alg))
}

/// Result of the negative-stabilization check in `C⁰(B·σ_n⁻¹)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct R1nOutcome {
    /// `+1` if `U·Φ₁⁻(β) − β′` is a boundary, `−1` if `U·Φ₁⁻(β) + β′` is.
    pub sign: Option<i32>,
}

/// Checks that `U·Φ₁⁻(β) ± β′` is a boundary in Bar-Natan theory, where
/// `β′` is the β of `B·σ_n⁻¹`, for both β and β̄.
pub fn r1n_check(b: &BraidWord, p: u32) -> Result<[R1nOutcome; 2]> {
    let alg = FrobeniusAlgebra::new(Theory::bn(p)?);
    let phi = phi1_minus(b, &alg)?;
    let bp = phi.target().clone();
    let cx = build_complex_range(&bp, Theory::bn(p)?, -1, 0)?;
    let u = Poly::u(p);
    let mut out = [R1nOutcome { sign: None }; 2];
    for (slot, bar) in [false, true].into_iter().enumerate() {
        let z = phi.apply(&beta_chain(b, &alg, bar)?)?.scale(&u);
        let bprime = beta_chain(&bp, &alg, bar)?;
        if boundary_contains(&cx, 0, &z.sub(&bprime))? {
            out[slot].sign = Some(1);
        } else if boundary_contains(&cx, 0, &z.add(&bprime))? {
            out[slot].sign = Some(-1);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// One line of the harness trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: String,
    pub site: usize,
    pub word: String,
    pub assertion: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarnessConfig {
    pub seed: u64,
    pub n_moves: usize,
    pub allow_negative: bool,
    pub p: u32,
    /// Moves that would grow the word past these bounds are not drawn.
    pub max_letters: usize,
    pub max_strands: usize,
}

impl HarnessConfig {
    pub fn new(seed: u64, n_moves: usize, allow_negative: bool) -> Self {
        HarnessConfig { seed, n_moves, allow_negative, p: 3, max_letters: 9, max_strands: 4 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnessReport {
    pub seed: u64,
    pub start: String,
    pub end: String,
    pub trace: Vec<TraceEntry>,
    /// The sign of each negative-stabilization relation, in order.
    pub r1n_signs: Vec<i32>,
    pub passed: bool,
}

impl HarnessReport {
    pub fn failures(&self) -> impl Iterator<Item = &TraceEntry> {
        self.trace.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for e in &self.trace {
            s.push_str(&serde_json::to_string(e).expect("trace entries serialize"));
            s.push('\n');
        }
        s
    }
}

/// The transverse data compared across braid relations.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Summary {
    sl: i32,
    c_pair: (u32, u32),
    psi_vanishes: bool,
    s: Option<i32>,
}

struct Harness {
    cfg: HarnessConfig,
    alg: FrobeniusAlgebra,
    trace: Vec<TraceEntry>,
    r1n_signs: Vec<i32>,
    summaries: HashMap<BraidWord, Summary>,
}

impl Harness {
    fn summary(&mut self, b: &BraidWord) -> Result<Summary> {
        if let Some(s) = self.summaries.get(b) {
            return Ok(s.clone());
        }
        let r = invariant_report(b, self.cfg.p)?;
        let s = Summary { sl: r.sl, c_pair: (r.c.min(r.c_bar), r.c.max(r.c_bar)), psi_vanishes: r.psi_vanishes, s: r.s };
        self.summaries.insert(b.clone(), s.clone());
        Ok(s)
    }

    fn record(&mut self, step: usize, m: MoveKind, site: usize, word: &BraidWord, assertion: &str, ok: bool, detail: Option<String>) {
        self.trace.push(TraceEntry {
            step,
            mv: m.name().into(),
            site,
            word: word.to_string(),
            assertion: assertion.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        });
    }

    /// `map(β(from)) = β(to)` for β and β̄.
    fn carries_beta(&self, map: &ChainMap) -> Result<bool> {
        for bar in [false, true] {
            let img = map.apply(&beta_chain(map.source(), &self.alg, bar)?)?;
            if img != beta_chain(map.target(), &self.alg, bar)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_maps(&mut self, step: usize, m: MoveKind, site: usize, after: &BraidWord, maps: Vec<(&str, ChainMap)>) -> Result<()> {
        for (name, map) in maps {
            let ok = self.carries_beta(&map)?;
            self.record(step, m, site, after, name, ok, None);
        }
        Ok(())
    }

    fn step(&mut self, step: usize, b: &BraidWord, m: MoveKind, site: usize) -> Result<BraidWord> {
        let rw = markov_rewrite(b, m, site)?;
        let a = rw.word;
        let alg = self.alg.clone();
        match m {
            MoveKind::Rotate => self.check_maps(step, m, site, &a, vec![("rotation(beta)=beta'", rotation(b, &alg)?)])?,
            MoveKind::FarCommute => {
                self.check_maps(step, m, site, &a, vec![("commute(beta)=beta'", far_commute(b, site, &alg)?)])?
            }
            MoveKind::R2Insert { letter } => self.check_maps(step, m, site, &a, vec![
                ("psi2(beta)=beta'", psi2(b, site, letter, &alg)?),
                ("phi2(beta')=beta", phi2(&a, site, &alg)?),
            ])?,
            MoveKind::R2Remove => {
                let letter = b.letters()[site];
                self.check_maps(step, m, site, &a, vec![
                    ("phi2(beta)=beta'", phi2(b, site, &alg)?),
                    ("psi2(beta')=beta", psi2(&a, site, letter, &alg)?),
                ])?
            }
            MoveKind::Stabilize { positive: true } => self.check_maps(step, m, site, &a, vec![
                ("phi1+(beta)=beta'", phi1_plus(b, &alg)?),
                ("psi1+(beta')=beta", psi1_plus(&a, &alg)?),
            ])?,
            MoveKind::Destabilize if rw.transverse => self.check_maps(step, m, site, &a, vec![
                ("psi1+(beta)=beta'", psi1_plus(b, &alg)?),
                ("phi1+(beta')=beta", phi1_plus(&a, &alg)?),
            ])?,
            MoveKind::Stabilize { positive: false } | MoveKind::Destabilize => {
                let (small, big) = if rw.transverse || matches!(m, MoveKind::Stabilize { .. }) { (b, &a) } else { (&a, b) };
                let out = r1n_check(small, self.cfg.p)?;
                for (o, which) in out.iter().zip(["beta", "beta_bar"]) {
                    let ok = o.sign.is_some();
                    if let Some(sg) = o.sign {
                        self.r1n_signs.push(sg);
                    }
                    let detail = o.sign.map(|s| format!("sign {s:+}"));
                    self.record(step, m, site, &a, &format!("U*phi1-({which}) +- {which}' in im d"), ok, detail);
                }
                let drop = self_linking(small) - self_linking(big);
                self.record(step, m, site, &a, "sl drops by 2", drop == 2, None);
            }
            MoveKind::BraidRelation => {
                let (x, y) = (self.summary(b)?, self.summary(&a)?);
                let ok = x == y;
                let detail = (!ok).then(|| format!("{x:?} vs {y:?}"));
                self.record(step, m, site, &a, "invariants equal", ok, detail);
            }
        }
        Ok(a)
    }

    fn candidates(&self, b: &BraidWord, rng: &mut ChaCha8Rng) -> Vec<(MoveKind, usize)> {
        let c = &self.cfg;
        let mut out: Vec<(MoveKind, usize)> = applicable_moves_filtered(b, c.allow_negative);
        let n = b.strands();
        if n >= 2 && b.len() + 2 <= c.max_letters {
            let g = rng.gen_range(1..n as i32);
            let letter = if rng.gen_bool(0.5) { g } else { -g };
            out.push((MoveKind::R2Insert { letter }, rng.gen_range(0..=b.len())));
        }
        if n < c.max_strands && b.len() < c.max_letters {
            out.push((MoveKind::Stabilize { positive: true }, 0));
            if c.allow_negative {
                out.push((MoveKind::Stabilize { positive: false }, 0));
            }
        }
        out
    }
}

fn applicable_moves_filtered(b: &BraidWord, allow_negative: bool) -> Vec<(MoveKind, usize)> {
    crate::braid::applicable_moves(b)
        .into_iter()
        .filter(|&(m, pos)| {
            m != MoveKind::Destabilize || allow_negative || markov_rewrite(b, m, pos).is_ok_and(|r| r.transverse)
        })
        .collect()
}

/// Runs `n_moves` random rewrites from `b` with the default bounds over
/// `F₃`.
pub fn invariance_harness(b: &BraidWord, seed: u64, n_moves: usize, allow_negative: bool) -> Result<HarnessReport> {
    run_harness(b, &HarnessConfig::new(seed, n_moves, allow_negative))
}

pub fn run_harness(b: &BraidWord, cfg: &HarnessConfig) -> Result<HarnessReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut h = Harness {
        cfg: *cfg,
        alg: FrobeniusAlgebra::new(Theory::bn(cfg.p)?),
        trace: Vec::new(),
        r1n_signs: Vec::new(),
        summaries: HashMap::new(),
    };
    let mut cur = b.clone();
    let mut transverse = true;
    for step in 0..cfg.n_moves {
        let cands = h.candidates(&cur, &mut rng);
        let Some(&(m, site)) = cands.choose(&mut rng) else { break };
        let rw = markov_rewrite(&cur, m, site)?;
        transverse &= rw.transverse;
        cur = h.step(step, &cur, m, site)?;
    }
    if transverse && cfg.n_moves > 0 {
        let (x, y) = (h.summary(b)?, h.summary(&cur)?);
        let ok = x == y;
        let detail = (!ok).then(|| format!("{x:?} vs {y:?}"));
        h.trace.push(TraceEntry {
            step: cfg.n_moves,
            mv: "endpoints".into(),
            site: 0,
            word: cur.to_string(),
            assertion: "invariants equal".into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        });
    }
    let passed = h.trace.iter().all(|e| e.status == Status::Pass);
    Ok(HarnessReport { seed: cfg.seed, start: b.to_string(), end: cur.to_string(), trace: h.trace, r1n_signs: h.r1n_signs, passed })
}
