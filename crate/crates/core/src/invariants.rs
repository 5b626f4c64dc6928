//! The β/β̄ cycles and the invariants read off from their classes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::braid::{oriented_resolution, self_linking, BraidWord};
use crate::coeff::Poly;
use crate::cube::{build_complex_range, build_filtered_complex, EnhancedChain, EnhancedState, GradedComplex};
use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusAlgebra, Theory, TheoryTag, ZeroDivisor};
use crate::homalg::{homology_u, kh_boundary_contains, kh_dimensions, u_divisibility, HomologyPresentation};

/// Root order, nesting rule and sign rule, reported with every result so
/// that runs under other conventions can be reconciled.
pub const CONVENTIONS: &str =
    "roots: bn (x1,x2)=(0,U) so x_circ=X, x_bullet=X-U; nesting: slot 1 innermost, parity (slot-1) mod 2; \
     sign: (-1)^(#1-bits before flipped crossing); oriented smoothing: 0 at positive, 1 at negative crossings";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaPair {
    pub beta: EnhancedChain,
    pub beta_bar: EnhancedChain,
}

/// `⊗_γ x_γ` on the oriented resolution, where `x_γ` is `x∘` on circles of
/// parity 0 and `x•` on parity 1, or the reverse when `bar` is set.
pub fn beta_chain(b: &BraidWord, alg: &FrobeniusAlgebra, bar: bool) -> Result<EnhancedChain> {
    let p = alg.p();
    let (r, cs, nesting) = oriented_resolution(b);
    let xc = alg.x_circ()?;
    let xb = alg.x_bullet()?;
    let mut terms: Vec<(u64, Poly)> = vec![(0, Poly::one(p))];
    for (c, &par) in nesting.iter().enumerate().take(cs.count()) {
        let x = if (par == 0) != bar { &xc } else { &xb };
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (l, k) in &terms {
            if !x.a_plus.is_zero() {
                next.push((*l, k * &x.a_plus));
            }
            if !x.a_minus.is_zero() {
                next.push((l | (1 << c), k * &x.a_minus));
            }
        }
        terms = next;
    }
    let mut out = EnhancedChain::zero(p);
    for (l, k) in terms {
        out.add_term(EnhancedState::new(r.mask(), l), k);
    }
    Ok(out)
}

/// β and β̄, checked to be cycles in `cx`, which must contain degrees 0
/// and 1 (or end at 0).
pub fn beta_pair_in(cx: &GradedComplex) -> Result<BetaPair> {
    let b = cx.word();
    let beta = beta_chain(b, cx.algebra(), false)?;
    let beta_bar = beta_chain(b, cx.algebra(), true)?;
    if cx.differential(0).is_some() {
        for z in [&beta, &beta_bar] {
            if !cx.apply_d(z)?.is_zero() {
                return Err(Error::Consistency(format!("beta of {b} is not a cycle over {}", cx.theory())));
            }
        }
    }
    Ok(BetaPair { beta, beta_bar })
}

pub fn beta_pair(b: &BraidWord, t: Theory) -> Result<BetaPair> {
    FrobeniusAlgebra::new(t).roots()?;
    let cx = if t.is_graded() { build_complex_range(b, t, 0, 1)? } else { build_filtered_complex(b, t)? };
    beta_pair_in(&cx)
}

/// Everything about degree 0 (and −1) needed for the invariants, computed
/// once.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub word: BraidWord,
    pub p: u32,
    pub sl: i32,
    pub bn: GradedComplex,
    pub h0: HomologyPresentation,
    pub betas: BetaPair,
    pub c: u32,
    pub c_bar: u32,
}

impl Analysis {
    /// With `with_minus_two` the complex also covers degree −2, enough
    /// for Khovanov homology in degree −1.
    pub fn new(b: &BraidWord, p: u32, with_minus_two: bool) -> Result<Self> {
        let t = Theory::bn(p)?;
        let lo = if with_minus_two { -2 } else { -1 };
        let bn = build_complex_range(b, t, lo, 1)?;
        let h0 = homology_u(&bn, 0)?;
        let betas = beta_pair_in(&bn)?;
        let cb = h0.coordinates(&bn, &betas.beta)?;
        let cbb = h0.coordinates(&bn, &betas.beta_bar)?;
        let c = u_divisibility(&h0, &cb)?;
        let c_bar = u_divisibility(&h0, &cbb)?;
        Ok(Analysis { word: b.clone(), p, sl: self_linking(b), bn, h0, betas, c, c_bar })
    }

    pub fn s(&self) -> Result<i32> {
        let k = self.word.components();
        if k != 1 {
            return Err(Error::NotAKnot(k));
        }
        match self.h0.free_degrees().as_slice() {
            [a, b] if b - a == 2 => Ok(a + 1),
            d => Err(Error::Consistency(format!("free part of H^0 at degrees {d:?}"))),
        }
    }
}

/// `(c, c̄)` of a braid over `F_p`.
pub fn c_invariants(b: &BraidWord, p: u32) -> Result<(u32, u32)> {
    let a = Analysis::new(b, p, false)?;
    Ok((a.c, a.c_bar))
}

/// Whether ψ is a boundary in the Khovanov complex, cross-checked against
/// `c > 0`.
pub fn psi_class_vanishes(b: &BraidWord, p: u32) -> Result<bool> {
    let a = Analysis::new(b, p, false)?;
    psi_vanishes_checked(&a)
}

fn psi_vanishes_checked(a: &Analysis) -> Result<bool> {
    let kh = build_complex_range(&a.word, Theory::kh(a.p)?, -1, 0)?;
    let psi = beta_chain(&a.word, kh.algebra(), false)?;
    let vanishes = kh_boundary_contains(&kh, 0, &psi)?;
    if vanishes != (a.c > 0) {
        return Err(Error::Consistency(format!(
            "psi {} but c = {} for {}",
            if vanishes { "vanishes" } else { "survives" },
            a.c,
            a.word
        )));
    }
    Ok(vanishes)
}

pub fn s_invariant(b: &BraidWord, p: u32) -> Result<i32> {
    let k = b.components();
    if k != 1 {
        return Err(Error::NotAKnot(k));
    }
    Analysis::new(b, p, false)?.s()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CSimplicity {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
    pub pseudo_thin: bool,
    /// Every degree-0 torsion generator sits in quantum degree ≥ s − 1;
    /// implied by each of the three conditions.
    pub torsion_above: bool,
    pub s: i32,
    pub kh0: BTreeMap<i32, usize>,
    pub kh_minus1: BTreeMap<i32, usize>,
    pub torsion0: Vec<(i32, u32)>,
}

impl CSimplicity {
    pub fn any(&self) -> bool {
        self.cond1 || self.cond2 || self.cond3
    }
}

fn simplicity_from(a: &Analysis) -> Result<CSimplicity> {
    let s = a.s()?;
    let kh0 = kh_dimensions(&a.bn, 0)?;
    let kh_minus1 = kh_dimensions(&a.bn, -1)?;
    let torsion0 = a.h0.torsion();
    let below = |m: &BTreeMap<i32, usize>, bound: i32| m.range(..bound).next().is_none();
    let cond1 = below(&kh0, s - 1);
    let cond2 = below(&kh_minus1, s - 3);
    let cond3 = torsion0.iter().all(|&(_, t)| t % 2 == 0) && below(&kh_minus1, s - 5);
    let pseudo_thin = kh0.len() <= 2;
    let torsion_above = torsion0.iter().all(|&(q, _)| q >= s - 1);
    let out = CSimplicity { cond1, cond2, cond3, pseudo_thin, torsion_above, s, kh0, kh_minus1, torsion0 };
    if out.any() && !out.torsion_above {
        return Err(Error::Consistency(format!("{}: a c-simplicity condition holds but torsion sits below s-1", a.word)));
    }
    Ok(out)
}

pub fn c_simplicity_check(b: &BraidWord, p: u32) -> Result<CSimplicity> {
    let k = b.components();
    if k != 1 {
        return Err(Error::NotAKnot(k));
    }
    simplicity_from(&Analysis::new(b, p, true)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub strands: usize,
    pub letters: Vec<i32>,
    pub writhe: i32,
    pub sl: i32,
    pub c: u32,
    pub c_bar: u32,
    pub psi_vanishes: bool,
    pub s: Option<i32>,
    pub s_reason: Option<String>,
    pub theory: String,
    pub char: u32,
    pub conventions: String,
    /// Set when `c ≠ c̄`: not an error, but worth a look.
    pub c_differs: bool,
    pub warnings: Vec<String>,
}

pub fn invariant_report(b: &BraidWord, p: u32) -> Result<InvariantReport> {
    let a = Analysis::new(b, p, false)?;
    let psi_vanishes = psi_vanishes_checked(&a)?;
    let (s, s_reason) = match a.s() {
        Ok(s) => (Some(s), None),
        Err(Error::NotAKnot(k)) => (None, Some(format!("closure has {k} components"))),
        Err(e) => return Err(e),
    };
    let mut warnings = Vec::new();
    if p == 2 {
        warnings.push("characteristic 2: s and c-simplicity results are not covered by the odd-characteristic theory".into());
    }
    Ok(InvariantReport {
        strands: b.strands(),
        letters: b.letters().to_vec(),
        writhe: b.writhe(),
        sl: a.sl,
        c: a.c,
        c_bar: a.c_bar,
        psi_vanishes,
        s,
        s_reason,
        theory: TheoryTag::Bn.name().into(),
        char: p,
        conventions: CONVENTIONS.into(),
        c_differs: a.c != a.c_bar,
        warnings,
    })
}

/// `s − 1 = sl + 2c`, the identity that holds whenever a c-simplicity
/// condition does.
pub fn s_identity_holds(s: i32, sl: i32, c: u32) -> bool {
    s - 1 == sl + 2 * c as i32
}

pub fn zero_divisor_for_parity(parity: u8, bar: bool) -> ZeroDivisor {
    if (parity == 0) != bar {
        ZeroDivisor::Circ
    } else {
        ZeroDivisor::Bullet
    }
}
