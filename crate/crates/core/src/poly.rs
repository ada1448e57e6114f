//! Exact multivariate polynomials with optional negative exponents.
//!
//! Terms are kept in a sorted map from exponent vectors to nonzero, ring-
//! canonical coefficients; Laurent monomials simply carry negative entries.

use crate::ring::{fmt_coeff, Coeff, CoeffRing};
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: CoeffRing,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Coeff>,
}

impl MultiPoly {
    pub fn zero(ring: &CoeffRing, nvars: usize) -> Self {
        MultiPoly { ring: ring.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &CoeffRing, nvars: usize, c: Coeff) -> Self {
        let mut p = Self::zero(ring, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(ring: &CoeffRing, nvars: usize) -> Self {
        Self::constant(ring, nvars, ring.one())
    }

    pub fn var(ring: &CoeffRing, nvars: usize, v: usize) -> Self {
        Self::monomial(ring, nvars, v, 1, ring.one())
    }

    pub fn monomial(ring: &CoeffRing, nvars: usize, v: usize, exp: i64, c: Coeff) -> Self {
        assert!(v < nvars);
        let mut e = vec![0; nvars];
        e[v] = exp;
        let mut p = Self::zero(ring, nvars);
        p.add_term(e, c);
        p
    }

    /// Univariate polynomial in variable `v` from low-to-high coefficients.
    pub fn from_univariate(ring: &CoeffRing, nvars: usize, v: usize, coeffs: &[Coeff]) -> Self {
        let mut p = Self::zero(ring, nvars);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[v] = k as i64;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: Coeff) {
        assert_eq!(exp.len(), self.nvars);
        let c = self.ring.normalize(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = self.ring.add(o.get(), &c);
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(vac) => {
                vac.insert(c);
            }
        }
    }

    pub fn coefficient(&self, exp: &[i64]) -> Coeff {
        self.terms.get(exp).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = Self::zero(&self.ring, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Coeff) -> MultiPoly {
        let mut out = Self::zero(&self.ring, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), self.ring.mul(c, k));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(&self.ring, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, self.ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = Self::one(&self.ring, self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Substitute each variable by the given image (in the images' variable
    /// set). Negative exponents require the image to be an invertible
    /// monomial.
    pub fn substitute(&self, target_nvars: usize, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let mut out = MultiPoly::zero(&self.ring, target_nvars);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(&self.ring, target_nvars, c.clone());
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let factor = if k > 0 {
                    images[v].pow(k as u32)
                } else {
                    images[v]
                        .invert_monomial()
                        .expect("negative exponent needs an invertible monomial image")
                        .pow((-k) as u32)
                };
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    /// Inverse of a single-term polynomial with a unit coefficient.
    pub fn invert_monomial(&self) -> Option<MultiPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let cinv = self.ring.inv(c)?;
        let einv: Vec<i64> = e.iter().map(|k| -k).collect();
        let mut p = MultiPoly::zero(&self.ring, self.nvars);
        p.add_term(einv, cinv);
        Some(p)
    }

    /// Map variable v to x_v^{-1}, the Laurent antipode substitution.
    pub fn invert_variables(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.iter().map(|k| -k).collect(), c.clone());
        }
        out
    }

    pub fn min_exponent(&self, v: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[v]).min()
    }

    pub fn max_exponent(&self, v: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[v]).max()
    }

    /// True when only variable `v` occurs.
    pub fn is_univariate_in(&self, v: usize) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().enumerate().all(|(w, &k)| w == v || k == 0))
    }

    /// Low-to-high coefficients when the polynomial is univariate in `v`
    /// with nonnegative exponents.
    pub fn univariate_coeffs(&self, v: usize) -> Option<Vec<Coeff>> {
        if !self.is_univariate_in(v) {
            return None;
        }
        if self.min_exponent(v).unwrap_or(0) < 0 {
            return None;
        }
        let deg = self.max_exponent(v).unwrap_or(0);
        let mut out = vec![self.ring.zero(); (deg + 1) as usize];
        for (e, c) in &self.terms {
            out[e[v] as usize] = c.clone();
        }
        Some(out)
    }

    pub fn is_monic_univariate(&self, v: usize) -> bool {
        match self.univariate_coeffs(v) {
            Some(cs) => cs.last().map_or(false, |c| c == &self.ring.one()) && cs.len() >= 2,
            None => false,
        }
    }

    /// Shift all exponents of variable v by k (multiplication by x_v^k).
    pub fn shift_var(&self, v: usize, k: i64) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring, self.nvars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[v] += k;
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn display(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(vars[v].clone());
                } else if k != 0 {
                    factors.push(format!("{}^{}", vars[v], k));
                }
            }
            let coeff = fmt_coeff(c);
            let body = if factors.is_empty() {
                coeff
            } else if coeff == "1" {
                factors.join("*")
            } else if coeff == "-1" {
                format!("-{}", factors.join("*"))
            } else {
                format!("{}*{}", coeff, factors.join("*"))
            };
            parts.push(body);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoeffRing {
        CoeffRing::integers()
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let ring = z();
        let x = MultiPoly::var(&ring, 1, 0);
        let one = MultiPoly::one(&ring, 1);
        let p = x.add(&one); // x + 1
        let q = x.sub(&one); // x - 1
        let prod = p.mul(&q);
        let expect = x.mul(&x).sub(&one);
        assert_eq!(prod, expect);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn univariate_extraction() {
        let ring = z();
        let x = MultiPoly::var(&ring, 2, 0);
        let y = MultiPoly::var(&ring, 2, 1);
        let p = x.pow(2).add(&MultiPoly::one(&ring, 2));
        assert!(p.is_univariate_in(0));
        assert!(!p.add(&y).is_univariate_in(0));
        let coeffs = p.univariate_coeffs(0).unwrap();
        assert_eq!(coeffs.len(), 3);
        assert!(p.is_monic_univariate(0));
    }

    #[test]
    fn laurent_substitution() {
        let ring = z();
        let x = MultiPoly::var(&ring, 1, 0);
        let p = x.pow(2).sub(&MultiPoly::one(&ring, 1));
        let s = p.invert_variables(); // x^{-2} - 1
        assert_eq!(s.min_exponent(0), Some(-2));
        let back = s.invert_variables();
        assert_eq!(back, p);
    }

    #[test]
    fn group_like_substitution_doubles_vars() {
        let ring = z();
        let x = MultiPoly::var(&ring, 1, 0);
        let p = x.pow(3);
        // x -> l*r in a two-variable target.
        let l = MultiPoly::var(&ring, 2, 0);
        let r = MultiPoly::var(&ring, 2, 1);
        let image = l.mul(&r);
        let q = p.substitute(2, &[image]);
        assert_eq!(q.coefficient(&[3, 3]), ring.one());
        assert_eq!(q.terms().count(), 1);
    }
}
