//! Multivariate polynomials in canonical form.

use crate::field::Scalar;
use crate::monomial::Monomial;

/// Terms sorted strictly descending in the owning ring's monomial order,
/// no zero coefficients, no duplicate monomials. The zero polynomial has
/// an empty term list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    pub terms: Vec<(Scalar, Monomial)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Scalar, &Monomial)> {
        self.terms.first().map(|(c, m)| (c, m))
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|(c, _)| c)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(_, m)| m)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(_, m)| m.degree()).max()
    }

    /// Degree-0 part, if any.
    pub fn constant_coeff(&self) -> Option<&Scalar> {
        self.terms
            .iter()
            .find(|(_, m)| m.is_one())
            .map(|(c, _)| c)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(_, m)| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Renders a polynomial with explicit `*` and `^` so output re-parses
/// under the expression grammar.
pub fn poly_string(p: &Poly, vars: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, m)) in p.terms.iter().enumerate() {
        let cs = c.to_string();
        let (neg, mag) = match cs.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, cs),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        if mag != "1" || m.is_one() {
            factors.push(mag);
        }
        for (v, &e) in vars.iter().zip(&m.0) {
            if e == 1 {
                factors.push(v.clone());
            } else if e > 1 {
                factors.push(format!("{v}^{e}"));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}
