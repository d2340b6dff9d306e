use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A real multilinear polynomial `∑_S c_S ∏_{i∈S} x_i`, monomials keyed by
/// variable bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearPoly<T> {
    arity: usize,
    terms: BTreeMap<usize, T>,
}

impl<T: Scalar> MultilinearPoly<T> {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: T) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(0, c);
        p
    }

    /// The monomial `x_i`.
    pub fn var(arity: usize, i: usize) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(1 << i, T::one());
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (usize, T)>) -> Self {
        let mut p = Self::zero(arity);
        for (s, c) in terms {
            p.add_term(s, c);
        }
        p
    }

    pub fn add_term(&mut self, subset: usize, c: T) {
        assert!(subset >> self.arity == 0, "monomial {subset:#b} outside arity {}", self.arity);
        let entry = self.terms.entry(subset).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&subset);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> {
        self.terms.iter().map(|(&s, c)| (s, c))
    }

    pub fn coeff(&self, subset: usize) -> T {
        self.terms.get(&subset).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|s| s.count_ones() as usize).max().unwrap_or(0)
    }

    /// Value at the Boolean point encoded by input index `x`.
    pub fn eval_bool(&self, x: usize) -> T {
        self.terms
            .iter()
            .filter(|(&s, _)| s & !x == 0)
            .fold(T::zero(), |acc, (_, c)| acc + c.clone())
    }

    /// Multilinear evaluation at a point of `[0,1]^n` (or anywhere in `R^n`).
    pub fn eval(&self, z: &[T]) -> T {
        assert_eq!(z.len(), self.arity);
        self.terms.iter().fold(T::zero(), |acc, (&s, c)| {
            let mono = (0..self.arity)
                .filter(|i| s >> i & 1 == 1)
                .fold(c.clone(), |m, i| m * z[i].clone());
            acc + mono
        })
    }

    pub fn scale(&self, k: T) -> Self {
        Self::from_terms(self.arity, self.terms.iter().map(|(&s, c)| (s, c.clone() * k.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut p = self.clone();
        for (&s, c) in &other.terms {
            p.add_term(s, c.clone());
        }
        p
    }

    /// Product reduced with `x_i^2 = x_i`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut p = Self::zero(self.arity);
        for (&s, a) in &self.terms {
            for (&t, b) in &other.terms {
                p.add_term(s | t, a.clone() * b.clone());
            }
        }
        p
    }

    /// `A(p(x))` reduced to multilinear form, by Horner's rule.
    pub fn compose_univariate(&self, a: &UnivariatePoly<T>) -> Self {
        let mut acc = Self::zero(self.arity);
        for c in a.coeffs().iter().rev() {
            acc = acc.mul(self);
            acc.add_term(0, c.clone());
        }
        acc
    }

    /// Re-expresses this polynomial in a larger variable space: variable `i`
    /// is replaced by `x_{map[i].0}`, or by `1 - x_{map[i].0}` when
    /// `map[i].1` is true.
    pub fn substitute_literals(&self, arity: usize, map: &[(usize, bool)]) -> Self {
        assert_eq!(map.len(), self.arity);
        let literal = |i: usize| {
            let (v, negated) = map[i];
            if negated {
                Self::constant(arity, T::one()).add(&Self::var(arity, v).scale(-T::one()))
            } else {
                Self::var(arity, v)
            }
        };
        let mut out = Self::zero(arity);
        for (&s, c) in &self.terms {
            let mono = (0..self.arity)
                .filter(|i| s >> i & 1 == 1)
                .fold(Self::constant(arity, c.clone()), |m, i| m.mul(&literal(i)));
            out = out.add(&mono);
        }
        out
    }

    /// Fixes variables and renumbers the free ones in increasing order.
    pub fn restrict(&self, fixing: &BTreeMap<usize, bool>) -> Self {
        let free: Vec<usize> = (0..self.arity).filter(|i| !fixing.contains_key(i)).collect();
        let mut out = Self::zero(free.len());
        'terms: for (&s, c) in &self.terms {
            let mut mask = 0;
            for i in (0..self.arity).filter(|i| s >> i & 1 == 1) {
                match fixing.get(&i) {
                    Some(false) => continue 'terms,
                    Some(true) => {}
                    None => mask |= 1 << free.iter().position(|&f| f == i).unwrap(),
                }
            }
            out.add_term(mask, c.clone());
        }
        out
    }

    /// Lines of `subset-bitmask coefficient`, coefficients in fixed-point
    /// decimal with 15 fractional digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&s, c) in &self.terms {
            let _ = writeln!(out, "{s} {:.15}", c.to_f64_lossy());
        }
        out
    }

    pub fn from_text(arity: usize, text: &str) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::InvalidArgument(format!("polynomial line {}: {line:?}", ln + 1));
            let (s, c) = line.split_once(char::is_whitespace).ok_or_else(bad)?;
            let s: usize = s.parse().map_err(|_| bad())?;
            let c: f64 = c.trim().parse().map_err(|_| bad())?;
            if s >> arity != 0 {
                return Err(bad());
            }
            p.add_term(s, T::from_f64(c).ok_or_else(bad)?);
        }
        Ok(p)
    }
}

/// A univariate polynomial `∑_j c_j x^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariatePoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> UnivariatePoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        if self.coeffs.len() == 1 && self.coeffs[0].is_zero() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}
