//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in descending order with respect to a fixed
//! `MonomialOrder`, so the leading term is always `terms[0]`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::order::{Exponent, MonomialOrder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub exp: Exponent,
}

/// Polynomial with terms sorted descending under the ambient order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub terms: Vec<Term>,
}

pub fn exp_mul(a: &Exponent, b: &Exponent) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn exp_div(a: &Exponent, b: &Exponent) -> Option<Exponent> {
    let mut out = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return None;
        }
        out.push(x - y);
    }
    Some(out)
}

pub fn exp_lcm(a: &Exponent, b: &Exponent) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn exp_divides(a: &Exponent, b: &Exponent) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn exp_coprime(a: &Exponent, b: &Exponent) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(exp: Exponent) -> Self {
        Polynomial { terms: vec![Term { coeff: BigRational::one(), exp }] }
    }

    /// Build from unordered terms: sorts under `order` and merges duplicates.
    pub fn from_terms(mut terms: Vec<Term>, order: &MonomialOrder) -> Self {
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by(|a, b| order.cmp_exp(&b.exp, &a.exp));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exp == t.exp => {
                    last.coeff += t.coeff;
                    if last.coeff.is_zero() {
                        merged.pop();
                    }
                }
                _ => merged.push(t),
            }
        }
        Polynomial { terms: merged }
    }

    pub fn binomial(lead: Exponent, trail: Exponent, order: &MonomialOrder) -> Self {
        Polynomial::from_terms(
            vec![
                Term { coeff: BigRational::one(), exp: lead },
                Term { coeff: -BigRational::one(), exp: trail },
            ],
            order,
        )
    }

    pub fn leading_term(&self) -> &Term {
        &self.terms[0]
    }

    pub fn leading_exp(&self) -> &Exponent {
        &self.terms[0].exp
    }

    pub fn num_vars(&self) -> usize {
        self.terms.first().map_or(0, |t| t.exp.len())
    }

    pub fn add(&self, other: &Polynomial, order: &MonomialOrder) -> Polynomial {
        // merge of two sorted term lists
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match order.cmp_exp(&self.terms[i].exp, &other.terms[j].exp) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].coeff + &other.terms[j].coeff;
                    if !c.is_zero() {
                        out.push(Term { coeff: c, exp: self.terms[i].exp.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { terms: out }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: &t.coeff * c, exp: t.exp.clone() })
                .collect(),
        }
    }

    /// Multiply by the term `c * x^m`; preserves sortedness.
    pub fn mul_term(&self, c: &BigRational, m: &Exponent) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: &t.coeff * c, exp: exp_mul(&t.exp, m) })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial, order: &MonomialOrder) -> Polynomial {
        let mut acc = Polynomial::zero();
        for t in &other.terms {
            acc = acc.add(&self.mul_term(&t.coeff, &t.exp), order);
        }
        acc
    }

    pub fn sub(&self, other: &Polynomial, order: &MonomialOrder) -> Polynomial {
        self.add(&other.scale(&-BigRational::one()), order)
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.terms[0].coeff.recip();
        self.scale(&inv)
    }

    /// Append `extra` zero exponents to every term (for tag variables).
    pub fn extend_vars(&self, extra: usize) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut exp = t.exp.clone();
                    exp.extend(std::iter::repeat(0).take(extra));
                    Term { coeff: t.coeff.clone(), exp }
                })
                .collect(),
        }
    }

    /// Drop the trailing `extra` exponent slots; panics if any are nonzero.
    pub fn truncate_vars(&self, extra: usize) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let n = t.exp.len() - extra;
                    assert!(t.exp[n..].iter().all(|&c| c == 0));
                    Term { coeff: t.coeff.clone(), exp: t.exp[..n].to_vec() }
                })
                .collect(),
        }
    }

    /// The set of variables occurring in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        let n = self.num_vars();
        (0..n)
            .filter(|&v| self.terms.iter().any(|t| t.exp[v] != 0))
            .collect()
    }
}

/// Divide each term of `f` by `x_i` once; panics unless `x_i` divides every
/// term.
pub fn divide_by_variable(f: &Polynomial, i: usize) -> Polynomial {
    Polynomial {
        terms: f
            .terms
            .iter()
            .map(|t| {
                assert!(t.exp[i] > 0, "variable does not divide every term");
                let mut exp = t.exp.clone();
                exp[i] -= 1;
                Term { coeff: t.coeff.clone(), exp }
            })
            .collect(),
    }
}

/// Divide each term of `f` by the largest common power of `x_i`.
pub fn saturate_by_variable(f: &Polynomial, i: usize) -> Polynomial {
    let k = f.terms.iter().map(|t| t.exp[i]).min().unwrap_or(0);
    if k == 0 {
        return f.clone();
    }
    Polynomial {
        terms: f
            .terms
            .iter()
            .map(|t| {
                let mut exp = t.exp.clone();
                exp[i] -= k;
                Term { coeff: t.coeff.clone(), exp }
            })
            .collect(),
    }
}

/// Remainder of `f` on division by `basis` (multivariate division algorithm).
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let mut rem = Polynomial::zero();
    let mut p = f.clone();
    while !p.is_zero() {
        let lt = p.leading_term().clone();
        let mut reduced = false;
        for g in basis {
            if g.is_zero() {
                continue;
            }
            if let Some(q) = exp_div(&lt.exp, g.leading_exp()) {
                let c = &lt.coeff / &g.leading_term().coeff;
                p = p.sub(&g.mul_term(&c, &q), order);
                reduced = true;
                break;
            }
        }
        if !reduced {
            rem.terms.push(lt.clone());
            p.terms.remove(0);
        }
    }
    Polynomial { terms: rem.terms }
}

/// S-polynomial of `f` and `g`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let l = exp_lcm(f.leading_exp(), g.leading_exp());
    let qf = exp_div(&l, f.leading_exp()).unwrap();
    let qg = exp_div(&l, g.leading_exp()).unwrap();
    let cf = f.leading_term().coeff.recip();
    let cg = g.leading_term().coeff.recip();
    f.mul_term(&cf, &qf).sub(&g.mul_term(&cg, &qg), order)
}

/// Exact quotient `f / g`; `None` if the division has a remainder.
pub fn exact_divide(
    f: &Polynomial,
    g: &Polynomial,
    order: &MonomialOrder,
) -> Option<Polynomial> {
    assert!(!g.is_zero());
    let mut q = Polynomial::zero();
    let mut r = f.clone();
    while !r.is_zero() {
        let lt = r.leading_term();
        let m = exp_div(&lt.exp, g.leading_exp())?;
        let c = &lt.coeff / &g.leading_term().coeff;
        q.terms.push(Term { coeff: c.clone(), exp: m.clone() });
        r = r.sub(&g.mul_term(&c, &m), order);
    }
    Some(q)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let c = &t.coeff;
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let is_const = t.exp.iter().all(|&x| x == 0);
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (v, &x) in t.exp.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if x == 1 {
                    write!(f, "x{}", v + 1)?;
                } else {
                    write!(f, "x{}^{}", v + 1, x)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ord(n: usize) -> MonomialOrder {
        MonomialOrder::WeightedRevLex {
            weights: vec![BigInt::from(1); n],
            ranking: (0..n).collect(),
        }
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn add_cancels() {
        let o = ord(2);
        let f = Polynomial::binomial(vec![2, 0], vec![0, 1], &o);
        let g = Polynomial::binomial(vec![0, 1], vec![2, 0], &o);
        assert!(f.add(&g, &o).is_zero());
    }

    #[test]
    fn from_terms_merges() {
        let o = ord(2);
        let f = Polynomial::from_terms(
            vec![
                Term { coeff: q(1), exp: vec![1, 1] },
                Term { coeff: q(2), exp: vec![1, 1] },
                Term { coeff: q(0), exp: vec![3, 0] },
            ],
            &o,
        );
        assert_eq!(f.terms.len(), 1);
        assert_eq!(f.terms[0].coeff, q(3));
    }

    #[test]
    fn s_polynomial_classic() {
        // f = x^2 - y, g = xy - 1  (x = x1, y = x2), degrevlex
        let o = ord(2);
        let f = Polynomial::binomial(vec![2, 0], vec![0, 1], &o);
        let g = Polynomial::binomial(vec![1, 1], vec![0, 0], &o);
        let s = s_polynomial(&f, &g, &o);
        // S = y*f - x*g = x - y^2
        let expect = Polynomial::binomial(vec![1, 0], vec![0, 2], &o);
        assert_eq!(s, expect);
    }

    #[test]
    fn normal_form_reduces() {
        // lex so that x > y^2 and the reduction runs the classic way
        let o = MonomialOrder::Lex { ranking: vec![0, 1] };
        let f = Polynomial::binomial(vec![1, 0], vec![0, 2], &o); // x - y^2
        let g = Polynomial::binomial(vec![0, 3], vec![0, 0], &o); // y^3 - 1
        // x*y^3 reduces: -> y^2 * y^3 -> y^2
        let target = Polynomial::monomial(vec![1, 3]);
        let nf = normal_form(&target, &[f, g], &o);
        assert_eq!(nf, Polynomial::monomial(vec![0, 2]));
    }

    #[test]
    fn exact_division() {
        let o = ord(2);
        // (x^2 - y^2) / (x - y) = x + y
        let f = Polynomial::binomial(vec![2, 0], vec![0, 2], &o);
        let g = Polynomial::binomial(vec![1, 0], vec![0, 1], &o);
        let quot = exact_divide(&f, &g, &o).unwrap();
        let expect = Polynomial::from_terms(
            vec![Term { coeff: q(1), exp: vec![1, 0] }, Term { coeff: q(1), exp: vec![0, 1] }],
            &o,
        );
        assert_eq!(quot, expect);
        // x^2 - y is not divisible by x - y
        let h = Polynomial::binomial(vec![2, 0], vec![0, 1], &o);
        assert!(exact_divide(&h, &g, &o).is_none());
    }

    #[test]
    fn mul_and_display() {
        let o = ord(2);
        let f = Polynomial::binomial(vec![1, 0], vec![0, 1], &o);
        let p = f.mul(&f, &o);
        assert_eq!(p.terms.len(), 3);
        assert_eq!(format!("{p}"), "x1^2 - 2*x1*x2 + x2^2");
    }

    #[test]
    fn variable_division_helpers() {
        let o = ord(2);
        let f = Polynomial::binomial(vec![3, 1], vec![2, 2], &o);
        let once = divide_by_variable(&f, 0);
        assert_eq!(once, Polynomial::binomial(vec![2, 1], vec![1, 2], &o));
        let sat = saturate_by_variable(&f, 0);
        assert_eq!(sat, Polynomial::binomial(vec![1, 1], vec![0, 2], &o));
    }
}
