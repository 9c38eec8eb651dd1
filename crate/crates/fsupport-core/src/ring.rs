//! Multivariate polynomial arithmetic over a prime field `F_p`.
//!
//! A [`RingSpec`] fixes the modulus, the ordered variable list, and the
//! monomial order; polynomials are plain data and every operation takes the
//! ring as context. Polynomials are kept canonical at all times: terms sorted
//! strictly descending in the ring's monomial order, coefficients reduced to
//! `1..p-1`, no zero terms. Canonical text output round-trips exactly through
//! [`parse_poly`].
//!
//! Exponents are `u32` and every exponent computation is checked; leaving the
//! range is reported as [`Error::ExponentOverflow`], never wrapped silently.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt::Write as _;

/// Supported monomial orders. `GrevLex` is the default used by the rest of
/// the engine unless a caller asks otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    GrevLex,
    /// Pure lexicographic.
    Lex,
    /// Graded lexicographic.
    GrLex,
}

impl MonomialOrder {
    /// Canonical lowercase name, matching the serialized form.
    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::GrevLex => "grevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::GrLex => "grlex",
        }
    }
}

/// A power product of the ring variables; one exponent per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    /// Exponent vector, indexed like `RingSpec::vars`.
    pub exps: Vec<u32>,
}

impl Monomial {
    /// The monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// True when every exponent is zero.
    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Total degree as `u64` (cannot overflow: at most `n * u32::MAX`).
    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    /// Componentwise product, failing loudly on `u32` overflow.
    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| {
                a.checked_add(b).ok_or_else(|| {
                    Error::ExponentOverflow(format!(
                        "monomial product exponent {a} + {b} exceeds u32"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    /// True when `self` divides `other` componentwise.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// Exact quotient `other / self`; caller must ensure divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(&b, &a)| b - a)
                .collect(),
        }
    }

    /// Componentwise max (least common multiple of power products).
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }
}

/// A polynomial in canonical form: terms strictly descending in the ring's
/// monomial order, coefficients in `1..p-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    /// `(monomial, coefficient)` pairs, sorted descending, no zeros.
    pub terms: Vec<(Monomial, u32)>,
}

impl Polynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading `(monomial, coefficient)` pair, if nonzero.
    pub fn lead(&self) -> Option<&(Monomial, u32)> {
        self.terms.first()
    }

    /// True when the polynomial is a nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Largest total degree among terms (0 for the zero polynomial).
    pub fn total_degree(&self) -> u64 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree())
            .max()
            .unwrap_or(0)
    }
}

/// Ring context: prime modulus, named variables, monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    p: u32,
    vars: Vec<String>,
    order: MonomialOrder,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingSpec {
    /// Builds a ring context, validating the modulus (prime, `2..=65536`) and
    /// the variable names (distinct, identifier-shaped, at least one).
    pub fn new(p: u32, vars: &[&str], order: MonomialOrder) -> Result<Self> {
        if !(2..=65536).contains(&p) {
            return Err(Error::Validation(format!(
                "modulus {p} outside supported range 2..=65536"
            )));
        }
        if !is_prime(p) {
            return Err(Error::Validation(format!("modulus {p} is not prime")));
        }
        if vars.is_empty() {
            return Err(Error::Validation("variable list must be nonempty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in vars {
            if !valid_identifier(v) {
                return Err(Error::Validation(format!("invalid variable name '{v}'")));
            }
            if !seen.insert(v.to_string()) {
                return Err(Error::Validation(format!("duplicate variable name '{v}'")));
            }
        }
        Ok(RingSpec {
            p,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
        })
    }

    /// The prime modulus.
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Variable names in declaration order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// The monomial order in effect.
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// A new ring with one extra variable appended, named to avoid clashing
    /// with the existing variables (tries `t`, `t0`, `t1`, ...).
    pub fn with_fresh_var(&self) -> Result<(RingSpec, usize)> {
        let mut candidates = vec!["t".to_string()];
        for i in 0..self.vars.len() + 2 {
            candidates.push(format!("t{i}"));
        }
        let fresh = candidates
            .into_iter()
            .find(|c| !self.vars.contains(c))
            .ok_or_else(|| Error::Internal("could not find fresh variable name".into()))?;
        let mut vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        vars.push(&fresh);
        let idx = vars.len() - 1;
        Ok((RingSpec::new(self.p, &vars, self.order)?, idx))
    }

    /// Lifts a polynomial of this ring into a ring with more variables whose
    /// leading variables coincide with this ring's (exponents padded by 0).
    pub fn lift_to(&self, bigger: &RingSpec, f: &Polynomial) -> Polynomial {
        debug_assert!(bigger.nvars() >= self.nvars());
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = m.exps.clone();
                    exps.resize(bigger.nvars(), 0);
                    (Monomial { exps }, *c)
                })
                .collect(),
        }
    }

    // ----- coefficient arithmetic -------------------------------------------------

    /// Reduces an integer into `0..p`.
    pub fn coeff_from_u64(&self, n: u64) -> u32 {
        (n % self.p as u64) as u32
    }

    /// Sum mod p.
    pub fn coeff_add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    /// Additive inverse mod p.
    pub fn coeff_neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Product mod p.
    pub fn coeff_mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse of a nonzero residue mod p (Fermat).
    pub fn coeff_inv(&self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        // p <= 2^16 so repeated squaring over u64 is exact.
        let mut base = a as u64 % self.p as u64;
        let mut exp = self.p as u64 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            exp >>= 1;
        }
        acc as u32
    }

    // ----- monomial order ---------------------------------------------------------

    /// Compares monomials in this ring's order (`Greater` = larger monomial).
    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.exps.len(), self.nvars());
        debug_assert_eq!(b.exps.len(), self.nvars());
        match self.order {
            MonomialOrder::Lex => Self::cmp_lex(a, b),
            MonomialOrder::GrLex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| Self::cmp_lex(a, b)),
            MonomialOrder::GrevLex => a.total_degree().cmp(&b.total_degree()).then_with(|| {
                for i in (0..a.exps.len()).rev() {
                    match a.exps[i].cmp(&b.exps[i]) {
                        Ordering::Equal => continue,
                        // Smaller exponent in the rightmost differing slot wins.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }),
        }
    }

    fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
        for i in 0..a.exps.len() {
            match a.exps[i].cmp(&b.exps[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    // ----- polynomial construction ------------------------------------------------

    /// Canonicalizes a term list: merge equal monomials, drop zeros, sort
    /// descending in the ring order.
    pub fn poly_from_terms(&self, terms: Vec<(Monomial, u32)>) -> Polynomial {
        let mut terms: Vec<(Monomial, u32)> = terms
            .into_iter()
            .map(|(m, c)| (m, c % self.p))
            .filter(|(_, c)| *c != 0)
            .collect();
        terms.sort_by(|x, y| self.cmp_mono(&y.0, &x.0));
        let mut merged: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc = self.coeff_add(*lc, c);
                }
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        Polynomial { terms: merged }
    }

    /// The constant polynomial for a residue.
    pub fn constant(&self, c: u32) -> Polynomial {
        let c = c % self.p;
        if c == 0 {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: vec![(Monomial::one(self.nvars()), c)],
            }
        }
    }

    /// The multiplicative unit.
    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(&self, i: usize) -> Polynomial {
        let mut m = Monomial::one(self.nvars());
        m.exps[i] = 1;
        Polynomial {
            terms: vec![(m, 1)],
        }
    }

    /// A single term `c * m` (canonicalized).
    pub fn monomial_term(&self, m: Monomial, c: u32) -> Polynomial {
        self.poly_from_terms(vec![(m, c)])
    }

    // ----- polynomial arithmetic --------------------------------------------------

    /// Sum.
    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        // Merge two descending term lists.
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match self.cmp_mono(&a.terms[i].0, &b.terms[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.coeff_add(a.terms[i].1, b.terms[j].1);
                    if c != 0 {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend_from_slice(&b.terms[j..]);
        Polynomial { terms: out }
    }

    /// Additive inverse.
    pub fn neg(&self, a: &Polynomial) -> Polynomial {
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.coeff_neg(*c)))
                .collect(),
        }
    }

    /// Difference.
    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.add(a, &self.neg(b))
    }

    /// Product with a single term `c * m`.
    pub fn mul_term(&self, a: &Polynomial, m: &Monomial, c: u32) -> Result<Polynomial> {
        let c = c % self.p;
        if c == 0 || a.is_zero() {
            return Ok(Polynomial::zero());
        }
        let terms = a
            .terms
            .iter()
            .map(|(am, ac)| Ok((am.checked_mul(m)?, self.coeff_mul(*ac, c))))
            .collect::<Result<Vec<_>>>()?;
        // Term-by-monomial multiplication preserves the descending order.
        Ok(Polynomial { terms })
    }

    /// Product.
    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        for (m, c) in &b.terms {
            acc = self.add(&acc, &self.mul_term(a, m, *c)?);
        }
        Ok(acc)
    }

    /// Scales by a residue.
    pub fn scale(&self, a: &Polynomial, c: u32) -> Polynomial {
        let c = c % self.p;
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, ac)| (m.clone(), self.coeff_mul(*ac, c)))
                .collect(),
        }
    }

    /// Small-integer power by repeated squaring.
    pub fn pow(&self, a: &Polynomial, mut e: u64) -> Result<Polynomial> {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `p^e` as a checked `u64`.
    pub fn p_power(&self, e: u32) -> Result<u64> {
        (self.p as u64).checked_pow(e).ok_or_else(|| {
            Error::ExponentOverflow(format!("p^e with p={} e={e} exceeds u64", self.p))
        })
    }

    // ----- text output ------------------------------------------------------------

    /// Canonical text form: terms descending, `+`-separated, `*` between
    /// factors, `^` for exponents at least 2. Round-trips exactly through
    /// [`parse_poly`].
    pub fn format(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in f.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            for (vi, &e) in m.exps.iter().enumerate() {
                if e == 1 {
                    factors.push(self.vars[vi].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.vars[vi], e));
                }
            }
            if factors.is_empty() {
                let _ = write!(out, "{c}");
            } else {
                if *c != 1 {
                    let _ = write!(out, "{c}*");
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

// ----- Frobenius ------------------------------------------------------------------

/// Computes `f^(p^e)` using the Frobenius endomorphism: each exponent is
/// multiplied by `p^e` and coefficients are fixed (Fermat). Fails loudly if
/// any exponent leaves `u32`.
pub fn frobenius_power(ring: &RingSpec, f: &Polynomial, e: u32) -> Result<Polynomial> {
    if e == 0 {
        return Ok(f.clone());
    }
    let q = ring.p_power(e)?;
    if f.terms.iter().all(|(m, _)| m.is_one()) {
        // Constants are fixed by Frobenius.
        return Ok(f.clone());
    }
    if q > u32::MAX as u64 {
        return Err(Error::ExponentOverflow(format!(
            "p^e = {q} exceeds u32; cannot raise nonconstant polynomial"
        )));
    }
    let q32 = q as u32;
    let terms = f
        .terms
        .iter()
        .map(|(m, c)| {
            let exps = m
                .exps
                .iter()
                .map(|&x| {
                    x.checked_mul(q32).ok_or_else(|| {
                        Error::ExponentOverflow(format!(
                            "exponent {x} * p^e = {x}*{q32} exceeds u32"
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((Monomial { exps }, *c))
        })
        .collect::<Result<Vec<_>>>()?;
    // Exponent scaling is strictly monotone for every supported order, so the
    // descending term order is preserved.
    Ok(Polynomial { terms })
}

// ----- parsing --------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Nat(String),
    Ident(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<(Vec<Spanned>, usize, usize)> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' => {
                chars.next();
                col += 1;
                toks.push(Spanned {
                    tok: Tok::Plus,
                    line: tl,
                    col: tc,
                });
            }
            '-' => {
                chars.next();
                col += 1;
                toks.push(Spanned {
                    tok: Tok::Minus,
                    line: tl,
                    col: tc,
                });
            }
            '*' => {
                chars.next();
                col += 1;
                toks.push(Spanned {
                    tok: Tok::Star,
                    line: tl,
                    col: tc,
                });
            }
            '^' => {
                chars.next();
                col += 1;
                toks.push(Spanned {
                    tok: Tok::Caret,
                    line: tl,
                    col: tc,
                });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push(Spanned {
                    tok: Tok::Nat(s),
                    line: tl,
                    col: tc,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push(Spanned {
                    tok: Tok::Ident(s),
                    line: tl,
                    col: tc,
                });
            }
            other => {
                return Err(Error::Parse {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    Ok((toks, line, col))
}

struct Parser<'a> {
    ring: &'a RingSpec,
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(s) => (s.line, s.col),
            None => (self.end_line, self.end_col),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// term := coeff? ('*'? var ('^' nat)?)*  — at least one factor overall.
    fn parse_term(&mut self) -> Result<Polynomial> {
        let mut coeff: Option<u32> = None;
        let mut mono = Monomial::one(self.ring.nvars());
        let mut saw_factor = false;

        if let Some(Spanned {
            tok: Tok::Nat(s), ..
        }) = self.peek().cloned()
        {
            self.bump();
            let mut acc = 0u64;
            for d in s.bytes() {
                acc = (acc * 10 + (d - b'0') as u64) % self.ring.modulus() as u64;
            }
            coeff = Some(acc as u32);
            saw_factor = true;
        }

        loop {
            // Optional '*' between factors; a '*' must be followed by a variable.
            let starred = matches!(self.peek(), Some(Spanned { tok: Tok::Star, .. }));
            if starred {
                self.bump();
            }
            match self.peek().cloned() {
                Some(Spanned {
                    tok: Tok::Ident(name),
                    line,
                    col,
                }) => {
                    self.bump();
                    let vi =
                        self.ring
                            .vars()
                            .iter()
                            .position(|v| *v == name)
                            .ok_or(Error::Parse {
                                line,
                                col,
                                msg: format!("unknown variable '{name}'"),
                            })?;
                    let mut exp: u32 = 1;
                    if matches!(
                        self.peek(),
                        Some(Spanned {
                            tok: Tok::Caret,
                            ..
                        })
                    ) {
                        self.bump();
                        match self.peek().cloned() {
                            Some(Spanned {
                                tok: Tok::Nat(s),
                                line,
                                col,
                            }) => {
                                self.bump();
                                let v: u64 = s.parse().map_err(|_| Error::Parse {
                                    line,
                                    col,
                                    msg: format!("exponent '{s}' is not a valid number"),
                                })?;
                                if v > u32::MAX as u64 {
                                    return Err(Error::ExponentOverflow(format!(
                                        "exponent {v} exceeds u32 (line {line}, column {col})"
                                    )));
                                }
                                exp = v as u32;
                            }
                            _ => return Err(self.err("expected exponent after '^'")),
                        }
                    }
                    mono.exps[vi] = mono.exps[vi].checked_add(exp).ok_or_else(|| {
                        Error::ExponentOverflow(format!(
                            "accumulated exponent for '{name}' exceeds u32"
                        ))
                    })?;
                    saw_factor = true;
                }
                _ if starred => return Err(self.err("expected variable after '*'")),
                _ => break,
            }
        }

        if !saw_factor {
            return Err(self.err("expected term"));
        }
        Ok(self.ring.monomial_term(mono, coeff.unwrap_or(1)))
    }

    /// expr := '-'? term (('+'|'-') term)*
    fn parse_expr(&mut self) -> Result<Polynomial> {
        let mut negate_first = false;
        if matches!(
            self.peek(),
            Some(Spanned {
                tok: Tok::Minus,
                ..
            })
        ) {
            self.bump();
            negate_first = true;
        }
        let first = self.parse_term()?;
        let mut acc = if negate_first {
            self.ring.neg(&first)
        } else {
            first
        };
        loop {
            match self.peek() {
                Some(Spanned { tok: Tok::Plus, .. }) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(Spanned {
                    tok: Tok::Minus, ..
                }) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                Some(_) => return Err(self.err("expected '+' or end of input")),
                None => break,
            }
        }
        Ok(acc)
    }
}

/// Parses polynomial text over the given ring.
///
/// Grammar: `expr := '-'? term (('+'|'-') term)*`,
/// `term := coeff? ('*'? var ('^' nat)?)*` with at least one factor.
/// Integer coefficients are reduced mod p; unknown variables and malformed
/// input are rejected with 1-based line/column positions.
pub fn parse_poly(text: &str, ring: &RingSpec) -> Result<Polynomial> {
    let (toks, end_line, end_col) = lex(text)?;
    let mut parser = Parser {
        ring,
        toks,
        pos: 0,
        end_line,
        end_col,
    };
    if parser.peek().is_none() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "empty input".into(),
        });
    }
    parser.parse_expr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring5() -> RingSpec {
        RingSpec::new(5, &["x", "y"], MonomialOrder::GrevLex).unwrap()
    }

    fn ring2xy() -> RingSpec {
        RingSpec::new(2, &["x", "y"], MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn ring_validation() {
        assert!(RingSpec::new(4, &["x"], MonomialOrder::GrevLex).is_err());
        assert!(RingSpec::new(1, &["x"], MonomialOrder::GrevLex).is_err());
        assert!(RingSpec::new(65537, &["x"], MonomialOrder::GrevLex).is_err());
        assert!(RingSpec::new(65521, &["x"], MonomialOrder::GrevLex).is_ok());
        assert!(RingSpec::new(5, &[], MonomialOrder::GrevLex).is_err());
        assert!(RingSpec::new(5, &["x", "x"], MonomialOrder::GrevLex).is_err());
        assert!(RingSpec::new(5, &["2x"], MonomialOrder::GrevLex).is_err());
    }

    #[test]
    fn parse_and_print_round_trip() {
        let r = ring5();
        let f = parse_poly("x^2*y + 3*x + 1", &r).unwrap();
        assert_eq!(r.format(&f), "x^2*y + 3*x + 1");
        let again = parse_poly(&r.format(&f), &r).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn parse_reduces_coefficients_mod_p() {
        let r = ring2xy();
        let f = parse_poly("3*x + 2*y + 7", &r).unwrap();
        assert_eq!(r.format(&f), "x + 1");
    }

    #[test]
    fn parse_implicit_multiplication_and_merging() {
        let r = ring5();
        let f = parse_poly("2x y + x*y + x y", &r).unwrap();
        // 2xy + xy + xy = 4xy
        assert_eq!(r.format(&f), "4*x*y");
    }

    #[test]
    fn parse_minus_maps_to_additive_inverse() {
        let r = ring5();
        let f = parse_poly("x - y", &r).unwrap();
        assert_eq!(r.format(&f), "x + 4*y");
        let g = parse_poly("-x", &r).unwrap();
        assert_eq!(r.format(&g), "4*x");
    }

    #[test]
    fn parse_error_positions() {
        let r = ring5();
        match parse_poly("x + + y", &r) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!((line, col), (1, 5));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("x^", &r) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!((line, col), (1, 3));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("z + x", &r) {
            Err(Error::Parse { line, col, msg }) => {
                assert_eq!((line, col), (1, 1));
                assert!(msg.contains("unknown variable"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("", &r) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (1, 1)),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("x *", &r) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn zero_literal_and_zero_terms() {
        let r = ring5();
        let z = parse_poly("0", &r).unwrap();
        assert!(z.is_zero());
        assert_eq!(r.format(&z), "0");
        let f = parse_poly("0*x + y", &r).unwrap();
        assert_eq!(r.format(&f), "y");
    }

    #[test]
    fn grevlex_ordering_of_terms() {
        let r = RingSpec::new(7, &["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
        // x*z vs y^2: same degree; rightmost differing exponent is z (1 vs 0),
        // so y^2 > x*z under grevlex.
        let f = parse_poly("x*z + y^2", &r).unwrap();
        assert_eq!(r.format(&f), "y^2 + x*z");
        let lex = RingSpec::new(7, &["x", "y", "z"], MonomialOrder::Lex).unwrap();
        let g = parse_poly("y^3 + x", &lex).unwrap();
        assert_eq!(lex.format(&g), "x + y^3");
        let grlex = RingSpec::new(7, &["x", "y", "z"], MonomialOrder::GrLex).unwrap();
        let h = parse_poly("y^2 + x*z", &grlex).unwrap();
        assert_eq!(grlex.format(&h), "x*z + y^2");
    }

    #[test]
    fn arithmetic_basics() {
        let r = ring2xy();
        let x = r.var(0);
        let y = r.var(1);
        let s = r.add(&x, &y);
        let sq = r.mul(&s, &s).unwrap();
        // (x+y)^2 = x^2 + y^2 over F_2
        assert_eq!(r.format(&sq), "x^2 + y^2");
        assert!(r.sub(&s, &s).is_zero());
    }

    #[test]
    fn frobenius_matches_direct_power() {
        let r = ring2xy();
        let f = parse_poly("x + y", &r).unwrap();
        let via_frob = frobenius_power(&r, &f, 2).unwrap();
        let via_pow = r.pow(&f, 4).unwrap();
        assert_eq!(via_frob, via_pow);
        assert_eq!(r.format(&via_frob), "x^4 + y^4");
    }

    #[test]
    fn frobenius_on_constants_is_identity() {
        let r = ring5();
        let c = r.constant(3);
        assert_eq!(frobenius_power(&r, &c, 9).unwrap(), c);
    }

    #[test]
    fn frobenius_overflow_is_loud() {
        let r = ring2xy();
        let f = parse_poly("x^4000000000", &r).unwrap();
        match frobenius_power(&r, &f, 1) {
            Err(Error::ExponentOverflow(_)) => {}
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn coeff_inverse() {
        let r = ring5();
        for a in 1..5 {
            assert_eq!(r.coeff_mul(a, r.coeff_inv(a)), 1);
        }
    }

    #[test]
    fn fresh_var_avoids_collisions() {
        let r = RingSpec::new(3, &["t", "t0"], MonomialOrder::GrevLex).unwrap();
        let (ext, idx) = r.with_fresh_var().unwrap();
        assert_eq!(idx, 2);
        assert_eq!(ext.vars()[2], "t1");
    }
}
