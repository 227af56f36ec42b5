//! Sparse multivariate polynomials with real coefficients.
//!
//! Used as the carrier of the sensitivity semiring (real coefficients) and of
//! the positive relational algebra provenance semiring (natural coefficients).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::lit::Var;

/// Coefficients smaller than this in absolute value are dropped after arithmetic.
pub const COEFFICIENT_EPSILON: f64 = 1e-15;

/// A product of indeterminates: `(variable, exponent)` pairs sorted by variable,
/// every exponent at least 1. The empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary factors, merging repeated variables.
    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent addition, merging the two sorted factor lists.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn evaluate(&self, point: &impl Fn(Var) -> f64) -> f64 {
        self.0
            .iter()
            .map(|&(v, e)| point(v).powi(e as i32))
            .product()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in canonical form: no zero coefficients, monomials ordered.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(1.0)
    }

    pub fn constant(c: f64) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    /// The indeterminate `x_v`.
    pub fn var(v: Var) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::var(v), 1.0);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, f64)>) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: f64) {
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if c.abs() >= COEFFICIENT_EPSILON {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let sum = *e.get() + c;
                if sum.abs() < COEFFICIENT_EPSILON {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, &c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut acc: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert(0.0) += ca * cb;
            }
        }
        acc.retain(|_, c| c.abs() >= COEFFICIENT_EPSILON);
        Polynomial { terms: acc }
    }

    /// Substitutes a numeric value for every indeterminate.
    pub fn evaluate(&self, point: impl Fn(Var) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, &c)| c * m.evaluate(&point))
            .sum()
    }

    /// True when every coefficient is a nonnegative integer.
    pub fn has_natural_coefficients(&self) -> bool {
        self.terms.values().all(|&c| c >= 0.0 && c.fract() == 0.0)
    }

    /// Coefficient-wise comparison with an absolute tolerance.
    pub fn approx_eq(&self, other: &Polynomial, tol: f64) -> bool {
        let close = |a: &Polynomial, b: &Polynomial| {
            a.terms
                .iter()
                .all(|(m, &c)| (c - b.coefficient(m)).abs() <= tol)
        };
        close(self, other) && close(other, self)
    }

    /// Coefficient-wise comparison with a relative tolerance (absolute below 1e-12).
    pub fn approx_eq_rel(&self, other: &Polynomial, rel: f64) -> bool {
        let close = |a: &Polynomial, b: &Polynomial| {
            a.terms.iter().all(|(m, &c)| {
                let d = b.coefficient(m);
                super::value::reals_close_rel(c, d, rel)
            })
        };
        close(self, other) && close(other, self)
    }

    /// Parses the textual form produced by `Display`, e.g. `0.3*x1*x2^2 + 1`.
    ///
    /// A bare `x` (no index) stands for `x_{own}`, the indeterminate of the
    /// variable whose label is being parsed.
    pub fn parse(text: &str, own: Option<Var>) -> Result<Polynomial, String> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            let at_split = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-')
                    && !matches!(bytes[i - 1], b'e' | b'E' | b'*' | b'^'));
            if at_split {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        let mut p = Polynomial::zero();
        for term in terms {
            let (sign, body) = match term.as_bytes()[0] {
                b'+' => (1.0, &term[1..]),
                b'-' => (-1.0, &term[1..]),
                _ => (1.0, term),
            };
            if body.is_empty() {
                return Err(format!("dangling sign in `{text}`"));
            }
            let mut coef = sign;
            let mut factors = Vec::new();
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (
                            i,
                            e.parse::<u32>()
                                .map_err(|_| format!("bad exponent in `{factor}`"))?,
                        ),
                        None => (rest, 1),
                    };
                    let var = if idx.is_empty() {
                        own.ok_or_else(|| format!("bare `x` without a variable in `{text}`"))?
                    } else {
                        idx.parse::<Var>()
                            .ok()
                            .filter(|&v| v >= 1)
                            .ok_or_else(|| format!("bad indeterminate `{factor}`"))?
                    };
                    factors.push((var, exp));
                } else {
                    let c: f64 = factor
                        .parse()
                        .map_err(|_| format!("bad coefficient `{factor}`"))?;
                    coef *= c;
                }
            }
            p.add_term(Monomial::from_factors(factors), coef);
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c < 0.0 {
                    f.write_str("-")?;
                }
            } else if c < 0.0 {
                f.write_str("-")?;
            } else {
                f.write_str("+")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
