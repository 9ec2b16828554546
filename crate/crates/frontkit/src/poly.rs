//! Sparse multivariate polynomials over an abstract coefficient field.
//!
//! Terms are stored in a BTreeMap keyed by exponent vector, which keeps every
//! value canonical (no zero coefficients, deterministic iteration) while the
//! Groebner engine imposes whatever monomial order it is working under.

use crate::arith::{ArithError, Field, Rat};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A polynomial ring identified by its ordered list of variable names.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
}

pub type RingRc = Arc<PolyRing>;

impl PolyRing {
    pub fn new<S: Into<String>>(vars: Vec<S>) -> RingRc {
        Arc::new(PolyRing {
            vars: vars.into_iter().map(Into::into).collect(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn describe(&self) -> String {
        format!("[{}]", self.vars.join(","))
    }
}

pub fn same_ring(a: &RingRc, b: &RingRc) -> Result<(), PolyError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(PolyError::RingMismatch(a.describe(), b.describe()))
    }
}

/// Exponent vector of a monomial; length always equals the ring's nvars.
/// The derived Ord is structural (for map storage) and is not a monomial
/// order; use [`MonomialOrder::cmp_exp`] for that.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExponentVector(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, rhs: &Self) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| a <= b)
    }

    /// rhs / self, assuming divisibility.
    pub fn div_into(&self, rhs: &Self) -> Self {
        ExponentVector(rhs.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, rhs: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, rhs: &Self) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Monomial orders used by the Groebner engine. All are total, compatible
/// with multiplication and have 1 as the minimal monomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    /// Lex on the leading `split` variables, degrevlex on the rest.
    Block {
        split: usize,
    },
}

impl MonomialOrder {
    pub fn cmp_exp(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => degrevlex(&a.0, &b.0),
            MonomialOrder::Lex => lex(&a.0, &b.0),
            MonomialOrder::Block { split } => {
                let s = (*split).min(a.0.len());
                lex(&a.0[..s], &b.0[..s]).then_with(|| degrevlex(&a.0[s..], &b.0[s..]))
            }
        }
    }
}

fn lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // smaller exponent in the last differing position wins
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePolynomial<F: Field> {
    ring: RingRc,
    terms: BTreeMap<ExponentVector, F>,
}

impl<F: Field> SparsePolynomial<F> {
    pub fn zero(ring: &RingRc) -> Self {
        SparsePolynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &RingRc, c: F) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(ExponentVector::zero(ring.nvars()), c);
        }
        p
    }

    pub fn one(ring: &RingRc) -> Self {
        Self::constant(ring, F::one())
    }

    pub fn var(ring: &RingRc, i: usize) -> Self {
        let mut p = Self::zero(ring);
        p.terms
            .insert(ExponentVector::unit(ring.nvars(), i), F::one());
        p
    }

    pub fn monomial(ring: &RingRc, exp: ExponentVector, coeff: F) -> Self {
        let mut p = Self::zero(ring);
        if !coeff.is_zero() {
            assert_eq!(exp.0.len(), ring.nvars());
            p.terms.insert(exp, coeff);
        }
        p
    }

    pub fn from_terms(ring: &RingRc, terms: Vec<(ExponentVector, F)>) -> Self {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn ring(&self) -> &RingRc {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &ExponentVector) -> F {
        self.terms.get(exp).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&ExponentVector::zero(self.ring.nvars()))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.total_degree()).max()
    }

    fn add_term(&mut self, exp: ExponentVector, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, coeff);
            }
            Some(old) => {
                let s = old.add(&coeff);
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, PolyError> {
        same_ring(&self.ring, &rhs.ring)?;
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        same_ring(&self.ring, &rhs.ring)?;
        let mut out = Self::zero(&self.ring);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                out.add_term(ea.mul(eb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn mul_scalar(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        SparsePolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k.mul(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, exp: &ExponentVector, coeff: &F) -> Self {
        if coeff.is_zero() {
            return Self::zero(&self.ring);
        }
        SparsePolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.mul(exp), c.mul(coeff)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.ring);
        for _ in 0..n {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// Leading term under the given order.
    pub fn leading(&self, order: MonomialOrder) -> Option<(&ExponentVector, &F)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp_exp(a, b))
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.ring.nvars() {
            return Err(PolyError::UnknownVariable(format!("#{var}")));
        }
        let mut out = Self::zero(&self.ring);
        for (e, c) in self.terms.iter() {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.0[var] = k - 1;
            out.add_term(e2, c.mul(&F::from_rat(&Rat::from_integer(k.into()))));
        }
        Ok(out)
    }

    /// Ring homomorphism: every variable of `self` is sent to `images[i]`,
    /// all living in a common target ring.
    pub fn substitute(&self, images: &[Self]) -> Result<Self, PolyError> {
        assert_eq!(images.len(), self.ring.nvars());
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        for im in images {
            same_ring(&target, &im.ring)?;
        }
        let mut out = Self::zero(&target);
        for (e, c) in self.terms.iter() {
            let mut term = Self::constant(&target, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k))?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Partial evaluation at constants; unassigned variables pass through.
    pub fn eval_partial(&self, assignment: &[(usize, F)]) -> Self {
        let mut images: Vec<Self> = (0..self.ring.nvars())
            .map(|i| Self::var(&self.ring, i))
            .collect();
        for (i, v) in assignment {
            images[*i] = Self::constant(&self.ring, v.clone());
        }
        self.substitute(&images).expect("same ring")
    }

    /// Full evaluation at a point.
    pub fn eval(&self, values: &[F]) -> F {
        assert_eq!(values.len(), self.ring.nvars());
        let mut acc = F::zero();
        for (e, c) in self.terms.iter() {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&values[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Moves the polynomial into `target`, sending variable `i` of `self` to
    /// variable `var_map[i]` of the target; fails if a variable that actually
    /// occurs has no image.
    pub fn project(&self, target: &RingRc, var_map: &[Option<usize>]) -> Result<Self, PolyError> {
        let mut out = Self::zero(target);
        for (e, c) in self.terms.iter() {
            let mut e2 = vec![0u32; target.nvars()];
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match var_map[i] {
                    Some(j) => e2[j] += k,
                    None => {
                        return Err(PolyError::UnknownVariable(
                            self.ring.var_name(i).to_string(),
                        ))
                    }
                }
            }
            out.add_term(ExponentVector(e2), c.clone());
        }
        Ok(out)
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> SparsePolynomial<G> {
        SparsePolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let g = f(c);
                    if g.is_zero() {
                        None
                    } else {
                        Some((e.clone(), g))
                    }
                })
                .collect(),
        }
    }

    /// Divides out the canonical content unit, leading term taken under
    /// `order`. Keeps rational polynomials integer-primitive with positive
    /// leading coefficient.
    pub fn content_normalize(&self, order: MonomialOrder) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut entries: Vec<(&ExponentVector, &F)> = self.terms.iter().collect();
        entries.sort_by(|(a, _), (b, _)| order.cmp_exp(b, a));
        let unit = F::content_unit(entries.iter().map(|(_, c)| *c));
        let inv = unit
            .inv()
            .expect("content of nonzero polynomial is nonzero");
        self.mul_scalar(&inv)
    }

    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading(order) {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("leading coefficient nonzero");
                self.mul_scalar(&inv)
            }
        }
    }

    /// Exact division; None when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self, order: MonomialOrder) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (dlm, dlc) = {
            let (e, c) = divisor.leading(order)?;
            (e.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ring);
        while !rem.is_zero() {
            let (rlm, rlc) = {
                let (e, c) = rem.leading(order).unwrap();
                (e.clone(), c.clone())
            };
            if !dlm.divides(&rlm) {
                return None;
            }
            let e = dlm.div_into(&rlm);
            let c = rlc.div(&dlc).ok()?;
            quot.add_term(e.clone(), c.clone());
            rem = rem.sub(&divisor.mul_monomial(&e, &c)).expect("same ring");
        }
        Some(quot)
    }
}

impl SparsePolynomial<Rat> {
    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for (e, c) in self.terms.iter() {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (i, &k) in e.0.iter().enumerate() {
                t *= values[i].powi(k as i32);
            }
            acc += t;
        }
        acc
    }
}

// Display uses descending degrevlex so reports read highest degree first.
impl<F: Field> fmt::Display for SparsePolynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&ExponentVector, &F)> = self.terms.iter().collect();
        entries.sort_by(|(a, _), (b, _)| MonomialOrder::DegRevLex.cmp_exp(b, a));
        let mut first = true;
        for (e, c) in entries {
            let mono =
                e.0.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            self.ring.var_name(i).to_string()
                        } else {
                            format!("{}^{}", self.ring.var_name(i), k)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*");
            let cs = format!("{c}");
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) if !cs.starts_with("(-") => ("-", rest.to_string()),
                _ => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if sign == "-" { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for SparsePolynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Recursive-descent parser for the conventional infix notation used in the
/// CLI config: `9*z^8 + s1`, `^` for powers, `*` optional (juxtaposition),
/// `/` for division by a nonzero constant.
pub fn parse_polynomial(ring: &RingRc, text: &str) -> Result<SparsePolynomial<Rat>, PolyError> {
    let mut p = Parser {
        ring: ring.clone(),
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser {
    ring: RingRc,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse {
            line: self.line,
            col: self.col,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn expr(&mut self) -> Result<SparsePolynomial<Rat>, PolyError> {
        let mut acc = if self.peek() == Some('-') {
            self.bump();
            self.skip_ws();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    self.skip_ws();
                    acc = acc.add(&self.term()?)?;
                }
                Some('-') => {
                    self.bump();
                    self.skip_ws();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SparsePolynomial<Rat>, PolyError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    self.skip_ws();
                    acc = acc.mul(&self.factor()?)?;
                }
                Some('/') => {
                    self.bump();
                    self.skip_ws();
                    let d = self.factor()?;
                    if !d.terms.keys().all(ExponentVector::is_constant) {
                        return Err(self.err("`/` only divides by a nonzero constant"));
                    }
                    let c = d.constant_term();
                    if num_traits::Zero::is_zero(&c) {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.mul_scalar(&c.recip());
                }
                // juxtaposition
                Some(c) if c.is_ascii_alphanumeric() || c == '(' || c == '_' => {
                    acc = acc.mul(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<SparsePolynomial<Rat>, PolyError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let n = self.uint()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u32, PolyError> {
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(self.err("expected an exponent"));
        }
        digits
            .parse()
            .map_err(|_| self.err("exponent out of range"))
    }

    fn atom(&mut self) -> Result<SparsePolynomial<Rat>, PolyError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                self.skip_ws();
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            Some('-') => {
                self.bump();
                self.skip_ws();
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
                    lit.push(self.bump().unwrap());
                }
                let q = crate::arith::parse_rat(&lit).map_err(|e| self.err(&e.to_string()))?;
                Ok(SparsePolynomial::constant(&self.ring, q))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    name.push(self.bump().unwrap());
                }
                match self.ring.var_index(&name) {
                    Some(i) => Ok(SparsePolynomial::var(&self.ring, i)),
                    None => Err(PolyError::UnknownVariable(name)),
                }
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn zring() -> RingRc {
        PolyRing::new(vec!["z"])
    }

    fn z2ring() -> RingRc {
        PolyRing::new(vec!["z1", "z2"])
    }

    fn rand_poly(
        rng: &mut StdRng,
        ring: &RingRc,
        max_deg: u32,
        max_terms: usize,
    ) -> SparsePolynomial<Rat> {
        let n = ring.nvars();
        let terms = rng.gen_range(0..=max_terms);
        let mut p = SparsePolynomial::zero(ring);
        for _ in 0..terms {
            let e = ExponentVector((0..n).map(|_| rng.gen_range(0..=max_deg)).collect());
            let c = rat(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            p = p.add(&SparsePolynomial::monomial(ring, e, c)).unwrap();
        }
        p
    }

    #[test]
    fn product_difference_of_squares() {
        let r = zring();
        let z = SparsePolynomial::<Rat>::var(&r, 0);
        let one = SparsePolynomial::one(&r);
        let lhs = z.add(&one).unwrap().mul(&z.sub(&one).unwrap()).unwrap();
        let rhs = z.pow(2).sub(&one).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn add_zero_is_identity() {
        let r = z2ring();
        let mut rng = StdRng::seed_from_u64(1);
        let p = rand_poly(&mut rng, &r, 4, 6);
        assert_eq!(p.add(&SparsePolynomial::zero(&r)).unwrap(), p);
    }

    #[test]
    fn expansion_z8_coefficient() {
        // (a z^2 + z^4)^2 has z^8 coefficient 1
        let r = zring();
        let z = SparsePolynomial::<Rat>::var(&r, 0);
        let a = rat_int(3);
        let p = z.pow(2).mul_scalar(&a).add(&z.pow(4)).unwrap().pow(2);
        assert_eq!(p.coeff(&ExponentVector(vec![8])), rat_int(1));
    }

    #[test]
    fn ring_mismatch_reported() {
        let p = SparsePolynomial::<Rat>::var(&zring(), 0);
        let q = SparsePolynomial::<Rat>::var(&z2ring(), 0);
        assert!(matches!(p.add(&q), Err(PolyError::RingMismatch(_, _))));
    }

    #[test]
    fn partial_derivative_basics() {
        let r = zring();
        let z = SparsePolynomial::<Rat>::var(&r, 0);
        let d = z.pow(4).partial_derivative(0).unwrap();
        assert_eq!(d, z.pow(3).mul_scalar(&rat_int(4)));

        let r2 = z2ring();
        let z1 = SparsePolynomial::<Rat>::var(&r2, 0);
        let z2 = SparsePolynomial::<Rat>::var(&r2, 1);
        let p = z1.pow(2).mul(&z2).unwrap();
        assert_eq!(
            p.partial_derivative(0).unwrap(),
            z1.mul(&z2).unwrap().mul_scalar(&rat_int(2))
        );
        assert!(p.partial_derivative(7).is_err());
    }

    #[test]
    fn substitution_identity_passthrough() {
        let r = z2ring();
        let mut rng = StdRng::seed_from_u64(2);
        let p = rand_poly(&mut rng, &r, 4, 8);
        let images: Vec<_> = (0..2).map(|i| SparsePolynomial::var(&r, i)).collect();
        assert_eq!(p.substitute(&images).unwrap(), p);
    }

    #[test]
    fn mul_commutative_associative() {
        let r = z2ring();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..500 {
            let a = rand_poly(&mut rng, &r, 3, 4);
            let b = rand_poly(&mut rng, &r, 3, 4);
            let c = rand_poly(&mut rng, &r, 3, 4);
            assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn mixed_partials_commute() {
        let r = z2ring();
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..200 {
            let p = rand_poly(&mut rng, &r, 5, 8);
            let ab = p
                .partial_derivative(0)
                .unwrap()
                .partial_derivative(1)
                .unwrap();
            let ba = p
                .partial_derivative(1)
                .unwrap()
                .partial_derivative(0)
                .unwrap();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn substitution_is_ring_homomorphism() {
        let r = z2ring();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let p = rand_poly(&mut rng, &r, 3, 4);
            let q = rand_poly(&mut rng, &r, 3, 4);
            let images = vec![rand_poly(&mut rng, &r, 2, 3), rand_poly(&mut rng, &r, 2, 3)];
            let lhs = p.mul(&q).unwrap().substitute(&images).unwrap();
            let rhs = p
                .substitute(&images)
                .unwrap()
                .mul(&q.substitute(&images).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degrevlex_well_order() {
        let o = MonomialOrder::DegRevLex;
        let a = ExponentVector(vec![1, 0]);
        let b = ExponentVector(vec![0, 1]);
        // z1 > z2 in degrevlex
        assert_eq!(o.cmp_exp(&a, &b), Ordering::Greater);
        let one = ExponentVector::zero(2);
        assert_eq!(o.cmp_exp(&a, &one), Ordering::Greater);
    }

    #[test]
    fn parser_round_trips() {
        let r = PolyRing::new(vec!["z", "s1"]);
        let p = parse_polynomial(&r, "9*z^8 + s1").unwrap();
        assert_eq!(p.coeff(&ExponentVector(vec![8, 0])), rat_int(9));
        assert_eq!(p.coeff(&ExponentVector(vec![0, 1])), rat_int(1));

        let q = parse_polynomial(&r, "-(1/2) z^2 - 3/4").unwrap();
        assert_eq!(q.coeff(&ExponentVector(vec![2, 0])), rat(-1, 2));
        assert_eq!(q.constant_term(), rat(-3, 4));

        assert!(matches!(
            parse_polynomial(&r, "2 + w"),
            Err(PolyError::UnknownVariable(_))
        ));
        assert!(matches!(
            parse_polynomial(&r, "2 + "),
            Err(PolyError::Parse { .. })
        ));
    }

    #[test]
    fn div_exact_round_trip() {
        let r = z2ring();
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..100 {
            let a = rand_poly(&mut rng, &r, 3, 4);
            let mut b = rand_poly(&mut rng, &r, 3, 4);
            if b.is_zero() {
                b = SparsePolynomial::one(&r);
            }
            let prod = a.mul(&b).unwrap();
            let q = prod.div_exact(&b, MonomialOrder::DegRevLex).unwrap();
            assert_eq!(q, a);
        }
    }
}
