//! Sparse multivariate polynomials over the rationals.
//!
//! A polynomial lives in a ring with `a_vars` coefficient variables
//! `a0..a{a_vars-1}` followed by `aux_vars` auxiliary variables (`x, y`
//! when there are two, `x0, y0, x1, y1` when there are four). Auxiliary
//! variables may carry negative exponents, which makes the ring a Laurent
//! ring in those slots; the `a` slots are always nonnegative.
//!
//! Terms are kept in a `BTreeMap` ordered graded-lexicographically, with no
//! zero coefficients stored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::rational::{parse_rational, to_short_string, Rational};
use crate::error::{Error, Result};

/// A variable of the polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A(usize),
    Aux(usize),
}

impl Var {
    pub const X: Var = Var::Aux(0);
    pub const Y: Var = Var::Aux(1);
}

/// Exponent vector; `a` slots first, then auxiliary slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[i32; 10]>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(SmallVec::from_elem(0, len))
    }

    pub fn from_exponents(exps: &[i32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn total_degree(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    a_vars: usize,
    aux_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

pub fn aux_name(aux_vars: usize, idx: usize) -> String {
    match (aux_vars, idx) {
        (2, 0) => "x".into(),
        (2, 1) => "y".into(),
        (4, i) => format!("{}{}", if i % 2 == 0 { "x" } else { "y" }, i / 2),
        (_, i) => format!("t{i}"),
    }
}

impl MultiPoly {
    pub fn zero(a_vars: usize, aux_vars: usize) -> Self {
        MultiPoly {
            a_vars,
            aux_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(a_vars: usize, aux_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(a_vars, aux_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(a_vars + aux_vars), c);
        }
        p
    }

    pub fn one(a_vars: usize, aux_vars: usize) -> Self {
        Self::constant(a_vars, aux_vars, Rational::one())
    }

    pub fn var(a_vars: usize, aux_vars: usize, v: Var) -> Self {
        Self::term(a_vars, aux_vars, Rational::one(), &[(v, 1)])
    }

    /// `c * prod(v^e)`. Panics if a variable is out of range or an `a`
    /// exponent is negative.
    pub fn term(a_vars: usize, aux_vars: usize, c: Rational, powers: &[(Var, i32)]) -> Self {
        let mut exps = vec![0; a_vars + aux_vars];
        for &(v, e) in powers {
            let slot = match v {
                Var::A(i) => {
                    assert!(i < a_vars, "a{i} out of range");
                    assert!(e >= 0, "negative exponent on a{i}");
                    i
                }
                Var::Aux(j) => {
                    assert!(j < aux_vars, "aux variable {j} out of range");
                    a_vars + j
                }
            };
            exps[slot] += e;
        }
        Self::from_terms(a_vars, aux_vars, [(exps, c)])
    }

    /// Builds from exponent vectors, summing duplicates and dropping zeros.
    pub fn from_terms<I, E>(a_vars: usize, aux_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (E, Rational)>,
        E: AsRef<[i32]>,
    {
        let mut p = Self::zero(a_vars, aux_vars);
        for (e, c) in terms {
            let e = e.as_ref();
            assert_eq!(e.len(), a_vars + aux_vars, "exponent vector length");
            assert!(e[..a_vars].iter().all(|&x| x >= 0), "negative a-exponent");
            p.add_term(Monomial::from_exponents(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn a_vars(&self) -> usize {
        self.a_vars
    }

    pub fn aux_vars(&self) -> usize {
        self.aux_vars
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.a_vars, self.aux_vars)
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

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.0[self.a_vars..].iter().any(|&e| e < 0))
    }

    fn check_shape(&self, other: &MultiPoly) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::VarCountMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_shape(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.a_vars, self.aux_vars));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        Ok(MultiPoly {
            a_vars: self.a_vars,
            aux_vars: self.aux_vars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.a_vars, self.aux_vars);
        }
        MultiPoly {
            a_vars: self.a_vars,
            aux_vars: self.aux_vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by a single monomial given as an exponent vector.
    pub fn mul_monomial(&self, exps: &[i32]) -> MultiPoly {
        let m = Monomial::from_exponents(exps);
        MultiPoly {
            a_vars: self.a_vars,
            aux_vars: self.aux_vars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(&m), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = Self::one(self.a_vars, self.aux_vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact quotient `self / den`. Fails with `NonExactDivision` if `den`
    /// does not divide `self`.
    pub fn exact_div(&self, den: &MultiPoly) -> Result<MultiPoly> {
        self.check_shape(den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if den.terms.len() == 1 {
            return self.div_by_term(den);
        }
        if self.is_laurent() || den.is_laurent() {
            // Normalize each side so its smallest auxiliary exponents are 0;
            // monomials are units, so the quotient only changes by the
            // ratio of the two shifts.
            let (sn, sd) = (self.aux_content_shift(), den.aux_content_shift());
            let q = self.mul_monomial(&sn).exact_div(&den.mul_monomial(&sd))?;
            let back: Vec<i32> = sd.iter().zip(&sn).map(|(d, n)| d - n).collect();
            return Ok(q.mul_monomial(&back));
        }
        let (lm, lc) = den.leading_term().unwrap();
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back() {
            if !lm.divides(m) {
                return Err(Error::NonExactDivision);
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            for (dm, dc) in &den.terms {
                let key = dm.mul(&qm);
                let delta = &qc * dc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quot.insert(qm, qc);
        }
        Ok(MultiPoly {
            a_vars: self.a_vars,
            aux_vars: self.aux_vars,
            terms: quot,
        })
    }

    fn aux_content_shift(&self) -> Vec<i32> {
        let mut shift = vec![0; self.a_vars + self.aux_vars];
        for j in self.a_vars..shift.len() {
            let min = self.terms.keys().map(|m| m.0[j]).min().unwrap_or(0);
            shift[j] = -min;
        }
        shift
    }

    fn div_by_term(&self, den: &MultiPoly) -> Result<MultiPoly> {
        let (dm, dc) = den.terms.iter().next().unwrap();
        let laurent = self.is_laurent() || den.is_laurent();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let q = m.div(dm);
            let bad_a = q.0[..self.a_vars].iter().any(|&e| e < 0);
            let bad_aux = !laurent && q.0[self.a_vars..].iter().any(|&e| e < 0);
            if bad_a || bad_aux {
                return Err(Error::NonExactDivision);
            }
            terms.insert(q, c / dc);
        }
        Ok(MultiPoly {
            a_vars: self.a_vars,
            aux_vars: self.aux_vars,
            terms,
        })
    }

    fn slot(&self, v: Var) -> Result<usize> {
        match v {
            Var::A(i) if i < self.a_vars => Ok(i),
            Var::Aux(j) if j < self.aux_vars => Ok(self.a_vars + j),
            _ => Err(Error::UnknownVariable(self.var_name_of(v))),
        }
    }

    fn var_name_of(&self, v: Var) -> String {
        match v {
            Var::A(i) => format!("a{i}"),
            Var::Aux(j) => aux_name(self.aux_vars, j),
        }
    }

    /// Formal partial derivative; negative exponents are handled as in the
    /// Laurent ring.
    pub fn differentiate(&self, v: Var) -> Result<MultiPoly> {
        let s = self.slot(v)?;
        let mut out = Self::zero(self.a_vars, self.aux_vars);
        for (m, c) in &self.terms {
            let e = m.0[s];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[s] -= 1;
            out.terms.insert(nm, c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Substitutes the given values; unassigned variables stay symbolic.
    pub fn specialize(&self, assignment: &BTreeMap<Var, Rational>) -> Result<MultiPoly> {
        if assignment.is_empty() {
            return Ok(self.clone());
        }
        let slots: Vec<(usize, &Rational, Var)> = assignment
            .iter()
            .map(|(v, r)| Ok((self.slot(*v)?, r, *v)))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(self.a_vars, self.aux_vars);
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let mut nc = c.clone();
            for &(s, val, v) in &slots {
                let e = nm.0[s];
                if e == 0 {
                    continue;
                }
                if val.is_zero() {
                    if e < 0 {
                        return Err(Error::ZeroLaurentSubstitution(self.var_name_of(v)));
                    }
                    nc = Rational::zero();
                    break;
                }
                nc *= pow_rat(val, e);
                nm.0[s] = 0;
            }
            out.add_term(nm, nc);
        }
        Ok(out)
    }

    /// Full evaluation at `a0..` (and auxiliary values, if any, appended).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.a_vars + self.aux_vars {
            return Err(Error::VarCountMismatch {
                left: self.shape(),
                right: (point.len(), 0),
            });
        }
        let mut acc = Rational::zero();
        'terms: for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if point[i].is_zero() {
                    if e < 0 {
                        return Err(Error::ZeroLaurentSubstitution(self.slot_name(i)));
                    }
                    continue 'terms;
                }
                t *= pow_rat(&point[i], e);
            }
            acc += t;
        }
        Ok(acc)
    }

    fn slot_name(&self, s: usize) -> String {
        if s < self.a_vars {
            format!("a{s}")
        } else {
            aux_name(self.aux_vars, s - self.a_vars)
        }
    }

    /// Re-embeds into a ring with `aux_vars` auxiliary slots. Existing
    /// auxiliary exponents must be zero unless the count is unchanged.
    pub fn with_aux(&self, aux_vars: usize) -> Result<MultiPoly> {
        if aux_vars == self.aux_vars {
            return Ok(self.clone());
        }
        let mut out = Self::zero(self.a_vars, aux_vars);
        for (m, c) in &self.terms {
            if m.0[self.a_vars..].iter().any(|&e| e != 0) {
                return Err(Error::Construction(
                    "dropping an auxiliary variable that is in use".into(),
                ));
            }
            let mut e: SmallVec<[i32; 10]> = SmallVec::from_slice(&m.0[..self.a_vars]);
            e.extend(std::iter::repeat_n(0, aux_vars));
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Groups terms by their `(x, y)` exponents, returning the coefficient
    /// of each as a polynomial in the `a` variables only. Needs exactly two
    /// auxiliary slots.
    pub fn xy_coefficients(&self) -> BTreeMap<(i32, i32), MultiPoly> {
        assert_eq!(self.aux_vars, 2, "xy_coefficients needs an (x, y) ring");
        let mut out: BTreeMap<(i32, i32), MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = (m.0[self.a_vars], m.0[self.a_vars + 1]);
            let e = Monomial(SmallVec::from_slice(&m.0[..self.a_vars]));
            out.entry(key)
                .or_insert_with(|| Self::zero(self.a_vars, 0))
                .terms
                .insert(e, c.clone());
        }
        out
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&[i32]) -> bool) -> MultiPoly {
        MultiPoly {
            a_vars: self.a_vars,
            aux_vars: self.aux_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(&m.0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Total degree in the `a` variables of every term, if all agree.
    pub fn a_degree(&self) -> Option<i32> {
        let mut degs = self
            .terms
            .keys()
            .map(|m| m.0[..self.a_vars].iter().sum::<i32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Formats a monomial as `a0^2*a4*x^-1`, or `1` for the unit.
    pub fn monomial_string(&self, m: &Monomial) -> String {
        monomial_to_string(m, self.a_vars, self.aux_vars)
    }

    /// Parses a polynomial such as `3*a1^2 - 8*a0*a2 + 1/9*x^-2*y^-1`.
    pub fn parse(s: &str, a_vars: usize, aux_vars: usize) -> Result<MultiPoly> {
        let mut out = Self::zero(a_vars, aux_vars);
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s == "0" {
            return Ok(out);
        }
        // split on top-level + and - (not those following '^')
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut pieces = Vec::new();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                pieces.push(&s[start..i]);
                start = i;
            }
        }
        pieces.push(&s[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'+' => (Rational::one(), &piece[1..]),
                b'-' => (-Rational::one(), &piece[1..]),
                _ => (Rational::one(), piece),
            };
            let mut coeff = sign;
            let mut exps = vec![0; a_vars + aux_vars];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("bad term {piece:?}")));
                }
                if factor.as_bytes()[0].is_ascii_digit() {
                    coeff *= parse_rational(factor)?;
                } else {
                    let (slot, e) = parse_power(factor, a_vars, aux_vars)?;
                    exps[slot] += e;
                }
            }
            if exps[..a_vars].iter().any(|&e| e < 0) {
                return Err(Error::Parse(format!("negative a-exponent in {piece:?}")));
            }
            out.add_term(Monomial::from_exponents(&exps), coeff);
        }
        Ok(out)
    }
}

fn pow_rat(v: &Rational, e: i32) -> Rational {
    let r = num_traits::pow(v.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

fn parse_power(factor: &str, a_vars: usize, aux_vars: usize) -> Result<(usize, i32)> {
    let (name, e) = match factor.split_once('^') {
        Some((n, e)) => (
            n,
            e.parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
        ),
        None => (factor, 1),
    };
    if let Some(idx) = name.strip_prefix('a') {
        let i: usize = idx
            .parse()
            .map_err(|_| Error::Parse(format!("bad variable {name:?}")))?;
        if i < a_vars {
            return Ok((i, e));
        }
    } else if let Some(j) = (0..aux_vars).find(|&j| aux_name(aux_vars, j) == name) {
        return Ok((a_vars + j, e));
    }
    Err(Error::Parse(format!("unknown variable {name:?}")))
}

pub fn monomial_to_string(m: &Monomial, a_vars: usize, aux_vars: usize) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = if i < a_vars {
            format!("a{i}")
        } else {
            aux_name(aux_vars, i - a_vars)
        };
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Parses a monomial key as written by [`monomial_to_string`].
pub fn parse_monomial(s: &str, a_vars: usize, aux_vars: usize) -> Result<Monomial> {
    let mut exps = vec![0; a_vars + aux_vars];
    if s.trim() != "1" {
        for factor in s.trim().split('*') {
            let (slot, e) = parse_power(factor, a_vars, aux_vars)?;
            exps[slot] += e;
        }
    }
    if exps[..a_vars].iter().any(|&e| e < 0) {
        return Err(Error::Parse(format!("negative a-exponent in {s:?}")));
    }
    Ok(Monomial::from_exponents(&exps))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = self.monomial_string(m);
            match (abs.is_one(), mono == "1") {
                (_, true) => write!(f, "{}", to_short_string(&abs))?,
                (true, false) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{}*{mono}", to_short_string(&abs))?,
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}
