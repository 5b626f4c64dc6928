//! The rank-2 Frobenius algebras `R[X]/(X² − uX + v)` with basis
//! `x₊ = 1`, `x₋ = X`, for the named specializations of `(u, v)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coeff::{Field, FieldElem, Poly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoryTag {
    Big,
    Kh,
    Bn,
    Vt,
    OLee,
    TLee,
}

impl TheoryTag {
    pub const ALL: [TheoryTag; 6] =
        [TheoryTag::Big, TheoryTag::Kh, TheoryTag::Bn, TheoryTag::Vt, TheoryTag::OLee, TheoryTag::TLee];

    pub fn name(&self) -> &'static str {
        match self {
            TheoryTag::Big => "big",
            TheoryTag::Kh => "kh",
            TheoryTag::Bn => "bn",
            TheoryTag::Vt => "vt",
            TheoryTag::OLee => "olee",
            TheoryTag::TLee => "tlee",
        }
    }
}

impl fmt::Display for TheoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoryTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoryTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnsupportedTheory(s.to_string()))
    }
}

/// A named theory over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Theory {
    pub tag: TheoryTag,
    pub p: u32,
}

impl Theory {
    pub fn new(tag: TheoryTag, p: u32) -> Result<Self> {
        Field::new(p)?;
        Ok(Theory { tag, p })
    }

    pub fn bn(p: u32) -> Result<Self> {
        Self::new(TheoryTag::Bn, p)
    }

    pub fn kh(p: u32) -> Result<Self> {
        Self::new(TheoryTag::Kh, p)
    }

    /// Graded theories admit a quantum grading; the Lee theories are only
    /// filtered.
    pub fn is_graded(&self) -> bool {
        !matches!(self.tag, TheoryTag::OLee | TheoryTag::TLee)
    }

    /// The structure constants `(u, v)` of `X² − uX + v`.
    pub fn structure_constants(&self) -> (Poly, Poly) {
        let p = self.p;
        let (z, o) = (Poly::zero(p), Poly::one(p));
        match self.tag {
            TheoryTag::Big => (Poly::u(p), Poly::v(p)),
            TheoryTag::Bn => (Poly::u(p), z),
            TheoryTag::Kh => (z.clone(), z),
            TheoryTag::Vt => (z, Poly::v(p)),
            TheoryTag::OLee => (z, o),
            TheoryTag::TLee => (o, z),
        }
    }

    /// The `(U, V)` specialization as optional substituted values.
    pub fn specialization(&self) -> (Option<FieldElem>, Option<FieldElem>) {
        let (z, o) = (FieldElem::zero(self.p), FieldElem::one(self.p));
        match self.tag {
            TheoryTag::Big => (None, None),
            TheoryTag::Bn => (None, Some(z)),
            TheoryTag::Kh => (Some(z), Some(z)),
            TheoryTag::Vt => (Some(z), None),
            TheoryTag::OLee => (Some(z), Some(o)),
            TheoryTag::TLee => (Some(o), Some(z)),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/F{}", self.tag, self.p)
    }
}

/// Basis label of a circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Plus,
    Minus,
}

impl Label {
    pub fn degree(&self) -> i32 {
        match self {
            Label::Plus => 1,
            Label::Minus => -1,
        }
    }

    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn from_index(i: usize) -> Label {
        if i == 0 {
            Label::Plus
        } else {
            Label::Minus
        }
    }
}

/// `a_plus·x₊ + a_minus·x₋`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub a_plus: Poly,
    pub a_minus: Poly,
}

impl AlgebraElement {
    pub fn new(a_plus: Poly, a_minus: Poly) -> Self {
        assert_eq!(a_plus.p(), a_minus.p(), "mixed characteristics");
        AlgebraElement { a_plus, a_minus }
    }

    pub fn zero(p: u32) -> Self {
        Self::new(Poly::zero(p), Poly::zero(p))
    }

    pub fn one(p: u32) -> Self {
        Self::new(Poly::one(p), Poly::zero(p))
    }

    pub fn x(p: u32) -> Self {
        Self::new(Poly::zero(p), Poly::one(p))
    }

    pub fn basis(l: Label, p: u32) -> Self {
        match l {
            Label::Plus => Self::one(p),
            Label::Minus => Self::x(p),
        }
    }

    pub fn p(&self) -> u32 {
        self.a_plus.p()
    }

    pub fn coeff(&self, l: Label) -> &Poly {
        match l {
            Label::Plus => &self.a_plus,
            Label::Minus => &self.a_minus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a_plus.is_zero() && self.a_minus.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.a_plus + &o.a_plus, &self.a_minus + &o.a_minus)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.a_plus - &o.a_plus, &self.a_minus - &o.a_minus)
    }

    pub fn scale(&self, c: &Poly) -> Self {
        Self::new(c * &self.a_plus, c * &self.a_minus)
    }

    /// Total degree when homogeneous, with `deg x₊ = 1`, `deg x₋ = −1`.
    pub fn degree(&self) -> Option<i32> {
        let dp = self.a_plus.degree().map(|d| d + 1);
        let dm = self.a_minus.degree().map(|d| d - 1);
        match (self.a_plus.is_zero(), self.a_minus.is_zero()) {
            (true, true) => None,
            (false, true) => dp,
            (true, false) => dm,
            (false, false) => dp.filter(|&a| Some(a) == dm),
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·x₊ + ({})·x₋", self.a_plus, self.a_minus)
    }
}

/// One term `left ⊗ right` of a comultiplication.
pub type TensorTerm = (AlgebraElement, AlgebraElement);

/// Coefficients `c[i][j]` of `bᵢ ⊗ bⱼ` over the basis `{x₊, x₋}`.
pub type TensorCoeffs = [[Poly; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootPair {
    pub x1: Poly,
    pub x2: Poly,
}

/// A concrete Frobenius algebra: a theory, or the split generic algebra
/// used to check identities symbolically.
#[derive(Debug, Clone)]
pub struct FrobeniusAlgebra {
    p: u32,
    u: Poly,
    v: Poly,
    roots: Option<RootPair>,
    theory: Option<Theory>,
}

impl FrobeniusAlgebra {
    pub fn new(t: Theory) -> Self {
        let (u, v) = t.structure_constants();
        FrobeniusAlgebra { p: t.p, u, v, roots: roots(t).ok(), theory: Some(t) }
    }

    /// `F_p[x1, x2][X]/((X − x1)(X − x2))`, i.e. the generic algebra after
    /// adjoining the two roots. The `Poly` variables `U` and `V` stand for
    /// `x1` and `x2` here, so `u = x1 + x2` and `v = x1·x2`. Any identity that
    /// holds here holds in every theory that factors.
    pub fn split_generic(p: u32) -> Self {
        let (x1, x2) = (Poly::u(p), Poly::v(p));
        FrobeniusAlgebra {
            p,
            u: &x1 + &x2,
            v: &x1 * &x2,
            roots: Some(RootPair { x1, x2 }),
            theory: None,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn theory(&self) -> Option<Theory> {
        self.theory
    }

    pub fn u(&self) -> &Poly {
        &self.u
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    pub fn roots(&self) -> Result<&RootPair> {
        self.roots.as_ref().ok_or_else(|| {
            Error::UnsupportedTheory(match self.theory {
                Some(t) => format!("{t} has no factorization over its base ring"),
                None => "no roots".into(),
            })
        })
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement::one(self.p)
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let bd = &a.a_minus * &b.a_minus;
        let plus = &(&a.a_plus * &b.a_plus) - &(&self.v * &bd);
        let minus = &(&(&a.a_plus * &b.a_minus) + &(&a.a_minus * &b.a_plus)) + &(&self.u * &bd);
        AlgebraElement::new(plus, minus)
    }

    /// Comultiplication as a list of tensor terms, one block per basis
    /// component of the input.
    pub fn comul(&self, a: &AlgebraElement) -> Vec<TensorTerm> {
        let p = self.p;
        let (xp, xm) = (AlgebraElement::one(p), AlgebraElement::x(p));
        let mut out = Vec::new();
        if !a.a_plus.is_zero() {
            let c = &a.a_plus;
            out.push((xp.scale(c), xm.clone()));
            out.push((xm.scale(c), xp.clone()));
            out.push((xp.scale(&-&(c * &self.u)), xp.clone()));
        }
        if !a.a_minus.is_zero() {
            let c = &a.a_minus;
            out.push((xm.scale(c), xm.clone()));
            out.push((xp.scale(&-&(c * &self.v)), xp.clone()));
        }
        out.retain(|(l, r)| !l.is_zero() && !r.is_zero());
        out
    }

    pub fn counit(&self, a: &AlgebraElement) -> Poly {
        a.a_minus.clone()
    }

    pub fn x_circ(&self) -> Result<AlgebraElement> {
        let r = self.roots()?;
        Ok(AlgebraElement::new(-&r.x1, Poly::one(self.p)))
    }

    pub fn x_bullet(&self) -> Result<AlgebraElement> {
        let r = self.roots()?;
        Ok(AlgebraElement::new(-&r.x2, Poly::one(self.p)))
    }

    pub fn zero_divisor(&self, z: ZeroDivisor) -> Result<AlgebraElement> {
        match z {
            ZeroDivisor::Circ => self.x_circ(),
            ZeroDivisor::Bullet => self.x_bullet(),
        }
    }

    /// `x̄ = x − e_x·(x₂ − x₁)·1`.
    pub fn conjugate(&self, z: ZeroDivisor) -> Result<AlgebraElement> {
        let r = self.roots()?;
        let x = self.zero_divisor(z)?;
        let shift = (&r.x2 - &r.x1).scale(FieldElem::new(z.e_sign() as i64, self.p)?);
        Ok(x.sub(&AlgebraElement::new(shift, Poly::zero(self.p))))
    }

    /// The de-cupped torus map `m(Δ(1))`.
    pub fn torus_map(&self) -> AlgebraElement {
        self.comul(&self.unit())
            .iter()
            .fold(AlgebraElement::zero(self.p), |acc, (l, r)| acc.add(&self.mul(l, r)))
    }

    pub fn mul_basis(&self, a: Label, b: Label) -> AlgebraElement {
        self.mul(&AlgebraElement::basis(a, self.p), &AlgebraElement::basis(b, self.p))
    }

    pub fn comul_basis(&self, a: Label) -> TensorCoeffs {
        tensor_coeffs(&self.comul(&AlgebraElement::basis(a, self.p)), self.p)
    }
}

/// Collects a list of tensor terms into basis coefficients.
pub fn tensor_coeffs(terms: &[TensorTerm], p: u32) -> TensorCoeffs {
    let z = Poly::zero(p);
    let mut c: TensorCoeffs = [[z.clone(), z.clone()], [z.clone(), z]];
    for (l, r) in terms {
        for i in [Label::Plus, Label::Minus] {
            for j in [Label::Plus, Label::Minus] {
                let add = l.coeff(i) * r.coeff(j);
                c[i.index()][j.index()] = &c[i.index()][j.index()] + &add;
            }
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroDivisor {
    Circ,
    Bullet,
}

impl ZeroDivisor {
    pub fn e_sign(&self) -> i32 {
        match self {
            ZeroDivisor::Circ => 1,
            ZeroDivisor::Bullet => -1,
        }
    }

    pub fn bar(&self) -> ZeroDivisor {
        match self {
            ZeroDivisor::Circ => ZeroDivisor::Bullet,
            ZeroDivisor::Bullet => ZeroDivisor::Circ,
        }
    }
}

/// The fixed root order: BN is `(0, U)`, so `x∘ = X` and `x• = X − U`.
pub fn roots(t: Theory) -> Result<RootPair> {
    let p = t.p;
    let (z, o) = (Poly::zero(p), Poly::one(p));
    match t.tag {
        TheoryTag::Kh => Ok(RootPair { x1: z.clone(), x2: z }),
        TheoryTag::Bn => Ok(RootPair { x1: z, x2: Poly::u(p) }),
        TheoryTag::TLee => Ok(RootPair { x1: z, x2: o }),
        TheoryTag::OLee => {
            let f = Field::new(p)?;
            let i = f
                .sqrt(f.neg(1))
                .ok_or_else(|| Error::UnsupportedTheory(format!("olee: -1 is not a square mod {p}")))?;
            let i = Poly::from_int(i as i64, p);
            Ok(RootPair { x2: -&i, x1: i })
        }
        TheoryTag::Vt | TheoryTag::Big => {
            Err(Error::UnsupportedTheory(format!("{} does not factor over its base ring", t.tag)))
        }
    }
}

/// Which ideal a nonzero zero-divisor of BN lies in, if any.
pub fn bn_ideal_membership(a: &AlgebraElement) -> (bool, bool) {
    // (X) = {a₊ = 0}; (X − U) = {a₊ = −U·a₋}.
    let p = a.p();
    let in_circ = a.a_plus.is_zero();
    let in_bullet = a.a_plus == -&(&Poly::u(p) * &a.a_minus);
    (in_circ, in_bullet)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(tag: TheoryTag, p: u32) -> FrobeniusAlgebra {
        FrobeniusAlgebra::new(Theory::new(tag, p).unwrap())
    }

    fn basis_pairs(a: &FrobeniusAlgebra) -> Vec<AlgebraElement> {
        vec![AlgebraElement::one(a.p()), AlgebraElement::x(a.p())]
    }

    #[test]
    fn roots_examples() {
        let r = roots(Theory::bn(3).unwrap()).unwrap();
        assert_eq!((r.x1, r.x2), (Poly::zero(3), Poly::u(3)));
        let r = roots(Theory::kh(3).unwrap()).unwrap();
        assert!(r.x1.is_zero() && r.x2.is_zero());
        let r = roots(Theory::new(TheoryTag::TLee, 3).unwrap()).unwrap();
        assert_eq!((r.x1, r.x2), (Poly::zero(3), Poly::one(3)));
        assert!(roots(Theory::new(TheoryTag::OLee, 3).unwrap()).is_err());
        assert!(roots(Theory::new(TheoryTag::OLee, 5).unwrap()).is_ok());
        assert!(roots(Theory::new(TheoryTag::Vt, 3).unwrap()).is_err());
    }

    #[test]
    fn factorization_identity() {
        for p in [2, 3, 5, 13] {
            for tag in TheoryTag::ALL {
                let a = alg(tag, p);
                let Ok(r) = a.roots() else { continue };
                assert_eq!(&r.x1 + &r.x2, *a.u(), "{tag} p={p}");
                assert_eq!(&r.x1 * &r.x2, *a.v(), "{tag} p={p}");
            }
        }
    }

    #[test]
    fn bn_products() {
        let a = alg(TheoryTag::Bn, 3);
        let x = AlgebraElement::x(3);
        assert_eq!(a.mul(&x, &x), AlgebraElement::new(Poly::zero(3), Poly::u(3)));
        let xc = a.x_circ().unwrap();
        let xb = a.x_bullet().unwrap();
        assert!(a.mul(&xc, &xb).is_zero());
        assert_eq!(a.conjugate(ZeroDivisor::Circ).unwrap(), xb);
        assert_eq!(xb, AlgebraElement::new(-&Poly::u(3), Poly::one(3)));
        assert_eq!(ZeroDivisor::Bullet.e_sign(), -1);
    }

    #[test]
    fn comul_examples() {
        let g = FrobeniusAlgebra::split_generic(3);
        let xb = g.x_bullet().unwrap();
        let xc = g.x_circ().unwrap();
        let one = g.unit();
        assert_eq!(tensor_coeffs(&g.comul(&xb), 3), tensor_coeffs(&[(xb.clone(), xb.clone())], 3));
        assert_eq!(
            tensor_coeffs(&g.comul(&one), 3),
            tensor_coeffs(&[(xc.clone(), one.clone()), (one.clone(), xb.clone())], 3)
        );
        let kh = alg(TheoryTag::Kh, 3);
        let x = AlgebraElement::x(3);
        assert_eq!(kh.comul(&x), vec![(x.clone(), x.clone())]);
    }

    #[test]
    fn counit_examples() {
        let g = FrobeniusAlgebra::split_generic(5);
        assert_eq!(g.counit(&g.x_circ().unwrap()), Poly::one(5));
        assert!(g.counit(&g.unit()).is_zero());
        let three = AlgebraElement::x(5).scale(&Poly::from_int(3, 5));
        assert_eq!(g.counit(&three), Poly::from_int(3, 5));
    }

    #[test]
    fn torus_map_examples() {
        let bn = alg(TheoryTag::Bn, 3);
        assert_eq!(bn.torus_map(), AlgebraElement::new(-&Poly::u(3), Poly::from_int(2, 3)));
        let kh = alg(TheoryTag::Kh, 3);
        assert_eq!(kh.torus_map(), AlgebraElement::new(Poly::zero(3), Poly::from_int(2, 3)));
        let bn2 = alg(TheoryTag::Bn, 2);
        assert_eq!(bn2.torus_map(), AlgebraElement::new(Poly::u(2), Poly::zero(2)));
    }

    #[test]
    fn pairing_is_nondegenerate() {
        for tag in TheoryTag::ALL {
            let a = alg(tag, 3);
            let b = basis_pairs(&a);
            // det of [[ε(1·1), ε(1·X)], [ε(X·1), ε(X·X)]] = 0·u − 1 = −1.
            let e = |i: usize, j: usize| a.counit(&a.mul(&b[i], &b[j]));
            let det = &(&e(0, 0) * &e(1, 1)) - &(&e(0, 1) * &e(1, 0));
            assert_eq!(det.as_constant().map(|c| c.is_zero()), Some(false), "{tag}");
        }
    }

    #[test]
    fn comul_is_degree_preserving_up_to_shift() {
        // Δ lowers total degree by one: deg(l) + deg(r) = deg(a) − 1.
        for tag in [TheoryTag::Big, TheoryTag::Bn, TheoryTag::Kh, TheoryTag::Vt] {
            let a = alg(tag, 3);
            for b in basis_pairs(&a) {
                let d = b.degree().unwrap();
                for (l, r) in a.comul(&b) {
                    assert_eq!(l.degree().unwrap() + r.degree().unwrap(), d - 1, "{tag}");
                }
                for c in basis_pairs(&a) {
                    let m = a.mul(&b, &c);
                    if !m.is_zero() {
                        assert_eq!(m.degree().unwrap(), d + c.degree().unwrap() - 1, "{tag}");
                    }
                }
            }
        }
    }
}
