//! Polynomial expressions over a fixed variable list, and the graded
//! reverse-lexicographic monomial order used to pick standard monomial bases.
//!
//! Grammar: a polynomial is a sum of signed terms; a term is an optional
//! integer coefficient followed by variables with optional `^` positive
//! integer exponents; `*` between factors is optional and whitespace is
//! insignificant. `x^2`, `x*y - z^2` and `3x^2y` all parse. Alphanumeric
//! runs are split greedily (longest match first) against the declared
//! variable names, so `xy` means `x*y` when `x` and `y` are variables but
//! names a single variable when `xy` itself is declared.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector over the owning variable list.
pub type Monomial = Vec<u32>;

pub fn monomial_degree(m: &[u32]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

pub fn monomial_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Graded reverse-lexicographic comparison: higher total degree wins; on
/// ties the monomial whose trailing exponent difference is negative is the
/// larger one.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db) = (monomial_degree(a), monomial_degree(b));
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // last nonzero entry of a-b negative  =>  a > b
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// All monomials in `nvars` variables of total degree exactly `d`,
/// listed in decreasing grevlex order.
pub fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, d);
    out.sort_by(|a, b| grevlex_cmp(b, a));
    return out;

    fn fill(out: &mut Vec<Monomial>, cur: &mut Monomial, idx: usize, rem: usize) {
        if idx + 1 == cur.len() {
            cur[idx] = rem as u32;
            out.push(cur.clone());
            cur[idx] = 0;
            return;
        }
        for e in 0..=rem {
            cur[idx] = e as u32;
            fill(out, cur, idx + 1, rem - e);
        }
        cur[idx] = 0;
    }
}

/// A polynomial with integer coefficients over a declared variable list,
/// stored as exponent-vector terms with like terms combined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub nvars: usize,
    /// (exponents, coefficient), sorted by decreasing grevlex, no zeros.
    pub terms: Vec<(Monomial, i64)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    fn from_raw_terms(nvars: usize, raw: Vec<(Monomial, i64)>) -> Self {
        let mut terms = raw;
        terms.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
        let mut merged: Vec<(Monomial, i64)> = Vec::new();
        for (m, c) in terms {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        Polynomial {
            nvars,
            terms: merged,
        }
    }

    pub fn constant_term(&self) -> i64 {
        self.terms
            .iter()
            .find(|(m, _)| monomial_degree(m) == 0)
            .map_or(0, |(_, c)| *c)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| monomial_degree(m));
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(m, _)| monomial_degree(m))
            .max()
            .unwrap_or(0)
    }

    /// Widens the exponent vectors into a larger variable list, placing the
    /// original variables at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Polynomial {
        assert!(offset + self.nvars <= nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; nvars];
                e[offset..offset + self.nvars].copy_from_slice(m);
                (e, *c)
            })
            .collect();
        Polynomial { nvars, terms }
    }

    pub fn display(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if *c < 0 {
                    out.push('-');
                }
            } else if *c < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = monomial_display(m, vars);
            if mag != 1 || mono.is_empty() {
                out.push_str(&mag.to_string());
                if !mono.is_empty() {
                    out.push('*');
                }
            }
            out.push_str(&mono);
        }
        out
    }
}

pub fn monomial_display(m: &[u32], vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(m) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(u64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

fn lex(input: &str, vars: &[String]) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch == '+' {
            tokens.push(Token::Plus);
            i += 1;
        } else if ch == '-' {
            tokens.push(Token::Minus);
            i += 1;
        } else if ch == '*' {
            tokens.push(Token::Star);
            i += 1;
        } else if ch == '^' {
            tokens.push(Token::Caret);
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let value: u64 = text
                .parse()
                .map_err(|_| Error::Parse(format!("integer `{text}` out of range")))?;
            tokens.push(Token::Int(value));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            // an alphanumeric run, split greedily against the variable list
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let run: String = chars[start..i].iter().collect();
            let mut pos = 0;
            while pos < run.len() {
                let rest = &run[pos..];
                let hit = vars
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| rest.starts_with(v.as_str()))
                    .max_by_key(|(_, v)| v.len());
                match hit {
                    Some((vi, v)) => {
                        // exponent digits directly after a variable belong to `^`
                        // only via an explicit caret, so stop the name here
                        tokens.push(Token::Var(vi));
                        pos += v.len();
                    }
                    None => {
                        return Err(Error::Parse(format!(
                            "unknown variable at `{rest}` in `{input}`"
                        )));
                    }
                }
            }
        } else {
            return Err(Error::Parse(format!("unexpected character `{ch}` in `{input}`")));
        }
    }
    Ok(tokens)
}

/// Parses a polynomial in the grammar above over the given variables.
pub fn parse_polynomial(input: &str, vars: &[String]) -> Result<Polynomial> {
    let tokens = lex(input, vars)?;
    if tokens.is_empty() {
        return Err(Error::Parse(format!("empty polynomial in `{input}`")));
    }
    let nvars = vars.len();
    let mut terms: Vec<(Monomial, i64)> = Vec::new();
    let mut i = 0;

    loop {
        // sign prefix
        let mut sign = 1i64;
        while i < tokens.len() {
            match tokens[i] {
                Token::Plus => i += 1,
                Token::Minus => {
                    sign = -sign;
                    i += 1;
                }
                _ => break,
            }
        }
        if i == tokens.len() {
            return Err(Error::Parse(format!("dangling sign in `{input}`")));
        }
        // one term: factors separated by optional '*'
        let mut coeff: i64 = sign;
        let mut expo = vec![0u32; nvars];
        let mut saw_factor = false;
        loop {
            match tokens.get(i) {
                Some(Token::Int(v)) => {
                    let v = i64::try_from(*v)
                        .map_err(|_| Error::Parse(format!("coefficient too large in `{input}`")))?;
                    coeff = coeff
                        .checked_mul(v)
                        .ok_or_else(|| Error::Parse(format!("coefficient overflow in `{input}`")))?;
                    i += 1;
                    saw_factor = true;
                }
                Some(Token::Var(vi)) => {
                    let vi = *vi;
                    i += 1;
                    let mut e: u32 = 1;
                    if tokens.get(i) == Some(&Token::Caret) {
                        i += 1;
                        match tokens.get(i) {
                            Some(Token::Int(v)) if *v >= 1 => {
                                e = u32::try_from(*v).map_err(|_| {
                                    Error::Parse(format!("exponent too large in `{input}`"))
                                })?;
                                i += 1;
                            }
                            _ => {
                                return Err(Error::Parse(format!(
                                    "`^` must be followed by a positive integer in `{input}`"
                                )))
                            }
                        }
                    }
                    expo[vi] = expo[vi]
                        .checked_add(e)
                        .ok_or_else(|| Error::Parse(format!("exponent overflow in `{input}`")))?;
                    saw_factor = true;
                }
                Some(Token::Star) => {
                    i += 1;
                    if !matches!(tokens.get(i), Some(Token::Int(_)) | Some(Token::Var(_))) {
                        return Err(Error::Parse(format!("dangling `*` in `{input}`")));
                    }
                }
                _ => break,
            }
        }
        if !saw_factor {
            return Err(Error::Parse(format!("expected a term in `{input}`")));
        }
        terms.push((expo, coeff));
        match tokens.get(i) {
            None => break,
            Some(Token::Plus) | Some(Token::Minus) => continue,
            Some(t) => {
                return Err(Error::Parse(format!(
                    "unexpected token {t:?} after term in `{input}`"
                )))
            }
        }
    }
    Ok(Polynomial::from_raw_terms(nvars, terms))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display(&vars))
    }
}
