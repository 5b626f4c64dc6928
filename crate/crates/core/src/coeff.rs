//! Exact coefficients: the prime field `F_p`, polynomials over `F_p` in the
//! two formal variables `U` (degree -2) and `V` (degree -4), and the graded
//! monomials `c·U^k` that the homology engine works with.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

pub const DEG_U: i32 = -2;
pub const DEG_V: i32 = -4;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic in `F_p` on raw residues. Used by the sparse linear algebra,
/// where carrying `p` in every entry would be wasteful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + (self.p - b) as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }

    pub fn elem(&self, v: i64) -> FieldElem {
        FieldElem { value: self.reduce(v), p: self.p }
    }

    /// A square root of `a`, if one exists (smallest residue).
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        (0..self.p).find(|&x| self.mul(x, x) == a % self.p)
    }
}

/// An element of `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u32,
    p: u32,
}

impl FieldElem {
    pub fn new(v: i64, p: u32) -> Result<Self> {
        Ok(Field::new(p)?.elem(v))
    }

    pub(crate) fn from_raw(value: u32, p: u32) -> Self {
        debug_assert!(value < p);
        FieldElem { value, p }
    }

    pub fn zero(p: u32) -> Self {
        FieldElem { value: 0, p }
    }

    pub fn one(p: u32) -> Self {
        FieldElem { value: 1 % p, p }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    fn field(&self) -> Field {
        Field { p: self.p }
    }

    /// Value as a signed residue in `(-p/2, p/2]`, for display.
    pub fn signed(&self) -> i64 {
        let v = self.value as i64;
        if v > self.p as i64 / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(FieldElem { value: self.field().inv(self.value)?, p: self.p })
    }
}

/// Multiplicative inverse in `F_p`; zero has none.
pub fn field_inv(a: FieldElem) -> Result<FieldElem> {
    a.inv()
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        assert_eq!(self.p, o.p, "mixed characteristics");
        FieldElem { value: self.field().add(self.value, o.value), p: self.p }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        assert_eq!(self.p, o.p, "mixed characteristics");
        FieldElem { value: self.field().sub(self.value, o.value), p: self.p }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        assert_eq!(self.p, o.p, "mixed characteristics");
        FieldElem { value: self.field().mul(self.value, o.value), p: self.p }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { value: self.field().neg(self.value), p: self.p }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}

/// Exponent pair `(e_U, e_V)`.
pub type Exp = (u32, u32);

/// Almost every coefficient in a complex is a monomial; keep those inline.
type Terms = SmallVec<[(Exp, u32); 2]>;

/// Sparse polynomial in `F_p[U, V]`. Terms are kept sorted by exponent with
/// no zero coefficients, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u32,
    terms: Terms,
}

impl Poly {
    pub fn zero(p: u32) -> Self {
        Poly { p, terms: Terms::new() }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(FieldElem::one(p))
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn from_int(c: i64, p: u32) -> Self {
        Self::constant(Field { p }.elem(c))
    }

    pub fn term(c: FieldElem, eu: u32, ev: u32) -> Self {
        let terms = if c.is_zero() { Terms::new() } else { smallvec![((eu, ev), c.value)] };
        Poly { p: c.p, terms }
    }

    pub fn u(p: u32) -> Self {
        Self::term(FieldElem::one(p), 1, 0)
    }

    pub fn v(p: u32) -> Self {
        Self::term(FieldElem::one(p), 0, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn field(&self) -> Field {
        Field { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self += a·b`, in place when both factors are monomials.
    pub fn add_product(&mut self, a: &Poly, b: &Poly) {
        if let ([(ea, ca)], [(eb, cb)]) = (a.terms.as_slice(), b.terms.as_slice()) {
            let f = self.field();
            let e = (ea.0 + eb.0, ea.1 + eb.1);
            let c = f.mul(*ca, *cb);
            match self.terms.binary_search_by(|t| t.0.cmp(&e)) {
                Ok(i) => {
                    let sum = f.add(self.terms[i].1, c);
                    if sum == 0 {
                        self.terms.remove(i);
                    } else {
                        self.terms[i].1 = sum;
                    }
                }
                Err(i) => self.terms.insert(i, (e, c)),
            }
            return;
        }
        *self = &*self + &(a * b);
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exp, FieldElem)> + '_ {
        self.terms.iter().map(move |&(e, c)| (e, FieldElem::from_raw(c, self.p)))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exp) -> FieldElem {
        match self.terms.binary_search_by(|(x, _)| x.cmp(&e)) {
            Ok(i) => FieldElem::from_raw(self.terms[i].1, self.p),
            Err(_) => FieldElem::zero(self.p),
        }
    }

    /// The constant term when the polynomial is constant.
    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.as_slice() {
            [] => Some(FieldElem::zero(self.p)),
            [((0, 0), c)] => Some(FieldElem::from_raw(*c, self.p)),
            _ => None,
        }
    }

    /// `c·U^k` when the polynomial is a single `U`-power term (or zero).
    pub fn as_monomial(&self) -> Option<Monomial> {
        match self.terms.as_slice() {
            [] => Some(Monomial::zero(self.p)),
            [((k, 0), c)] => Some(Monomial::new(FieldElem::from_raw(*c, self.p), *k)),
            _ => None,
        }
    }

    /// Degree of the polynomial if homogeneous (zero has no degree).
    pub fn degree(&self) -> Option<i32> {
        let mut it = self.terms.iter().map(|&((a, b), _)| DEG_U * a as i32 + DEG_V * b as i32);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    fn from_unsorted(p: u32, mut raw: Vec<(Exp, u32)>) -> Self {
        raw.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let f = Field { p };
        let mut terms = Terms::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => *lc = f.add(*lc, c),
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        Poly { p, terms }
    }

    pub fn scale(&self, c: FieldElem) -> Poly {
        assert_eq!(self.p, c.p, "mixed characteristics");
        if c.is_zero() {
            return Poly::zero(self.p);
        }
        let f = self.field();
        Poly { p: self.p, terms: self.terms.iter().map(|&(e, x)| (e, f.mul(x, c.value))).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.p);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes values for `U` and/or `V`; an absent value keeps the
    /// variable formal.
    pub fn specialize(&self, u_val: Option<FieldElem>, v_val: Option<FieldElem>) -> Poly {
        let f = self.field();
        let pw = |x: u32, k: u32| (0..k).fold(1 % self.p, |acc, _| f.mul(acc, x));
        let raw = self
            .terms
            .iter()
            .map(|&((a, b), c)| {
                let (mut c, mut a2, mut b2) = (c, a, b);
                if let Some(u) = u_val {
                    c = f.mul(c, pw(u.value, a));
                    a2 = 0;
                }
                if let Some(v) = v_val {
                    c = f.mul(c, pw(v.value, b));
                    b2 = 0;
                }
                ((a2, b2), c)
            })
            .collect();
        Poly::from_unsorted(self.p, raw)
    }

    /// Substitutes arbitrary polynomials for `U` and `V`.
    pub fn substitute(&self, u: &Poly, v: &Poly) -> Poly {
        let mut acc = Poly::zero(self.p);
        for &((a, b), c) in &self.terms {
            let t = (&u.pow(a) * &v.pow(b)).scale(FieldElem::from_raw(c, self.p));
            acc = &acc + &t;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.p, o.p, "mixed characteristics");
        let f = self.field();
        let mut out = Terms::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.terms[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(self.terms[i].1, o.terms[j].1);
                    if c != 0 {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { p: self.p, terms: out }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field();
        Poly { p: self.p, terms: self.terms.iter().map(|&(e, c)| (e, f.neg(c))).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.p, o.p, "mixed characteristics");
        let f = self.field();
        if let ([((a1, b1), c1)], [((a2, b2), c2)]) = (self.terms.as_slice(), o.terms.as_slice()) {
            let terms = smallvec![((a1 + a2, b1 + b2), f.mul(*c1, *c2))];
            return Poly { p: self.p, terms };
        }
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for &((a1, b1), c1) in &self.terms {
            for &((a2, b2), c2) in &o.terms {
                raw.push(((a1 + a2, b1 + b2), f.mul(c1, c2)));
            }
        }
        Poly::from_unsorted(self.p, raw)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &((a, b), c)) in self.terms.iter().enumerate() {
            let c = FieldElem::from_raw(c, self.p).signed();
            if i > 0 {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            let c = c.abs();
            let mut parts = Vec::new();
            if c != 1 || (a == 0 && b == 0) {
                parts.push(c.to_string());
            }
            match a {
                0 => {}
                1 => parts.push("U".into()),
                _ => parts.push(format!("U^{a}")),
            }
            match b {
                0 => {}
                1 => parts.push("V".into()),
                _ => parts.push(format!("V^{b}")),
            }
            write!(f, "{}", parts.join("·"))?;
        }
        Ok(())
    }
}

/// A homogeneous element `c·U^k` of `F_p[U]`. The zero monomial is stored
/// with `upow = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    coeff: FieldElem,
    upow: u32,
}

impl Monomial {
    pub fn new(coeff: FieldElem, upow: u32) -> Self {
        if coeff.is_zero() {
            Monomial { coeff, upow: 0 }
        } else {
            Monomial { coeff, upow }
        }
    }

    pub fn zero(p: u32) -> Self {
        Monomial { coeff: FieldElem::zero(p), upow: 0 }
    }

    pub fn one(p: u32) -> Self {
        Monomial { coeff: FieldElem::one(p), upow: 0 }
    }

    pub fn u_pow(k: u32, p: u32) -> Self {
        Monomial::new(FieldElem::one(p), k)
    }

    pub fn coeff(&self) -> FieldElem {
        self.coeff
    }

    pub fn upow(&self) -> u32 {
        self.upow
    }

    pub fn p(&self) -> u32 {
        self.coeff.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Internal degree, `-2k`.
    pub fn degree(&self) -> i32 {
        DEG_U * self.upow as i32
    }

    /// Sum of two monomials. Fails unless the `U`-powers agree or one side is
    /// zero.
    pub fn try_add(&self, o: &Monomial) -> Result<Monomial> {
        if self.is_zero() {
            return Ok(*o);
        }
        if o.is_zero() {
            return Ok(*self);
        }
        if self.upow != o.upow {
            return Err(Error::DegreeMismatch(self.upow, o.upow));
        }
        Ok(Monomial::new(self.coeff + o.coeff, self.upow))
    }

    pub fn try_sub(&self, o: &Monomial) -> Result<Monomial> {
        self.try_add(&-*o)
    }

    pub fn scale(&self, c: FieldElem) -> Monomial {
        Monomial::new(self.coeff * c, self.upow)
    }

    /// Reduction modulo `U^t`.
    pub fn reduce_mod(&self, t: u32) -> Monomial {
        if self.upow >= t {
            Monomial::zero(self.p())
        } else {
            *self
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::term(self.coeff, self.upow, 0)
    }
}

/// Exact quotient `a / b` in `F_p[U]`.
pub fn mono_divide(a: Monomial, b: Monomial) -> Result<Monomial> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.is_zero() {
        return Ok(Monomial::zero(a.p()));
    }
    if b.upow > a.upow {
        return Err(Error::NotDivisible { dividend: a.upow, divisor: b.upow });
    }
    Ok(Monomial::new(a.coeff * b.coeff.inv()?, a.upow - b.upow))
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, o: Monomial) -> Monomial {
        Monomial::new(self.coeff * o.coeff, self.upow + o.upow)
    }
}

impl Neg for Monomial {
    type Output = Monomial;
    fn neg(self) -> Monomial {
        Monomial::new(-self.coeff, self.upow)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}
