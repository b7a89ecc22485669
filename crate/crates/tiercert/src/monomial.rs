//! Monomials and monomial orders.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Exponent vector; length always equals the ambient variable count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, weights: &[u64]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(
                self.0
                    .iter()
                    .zip(&other.0)
                    .map(|(a, b)| a - b)
                    .collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Support = indices of variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Exponent of the first variable dominates; ties broken by the inner
    /// order on the remaining variables. Used internally for elimination.
    ElimFirst(Box<MonomialOrder>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_slices(&a.0, &b.0)
    }

    fn cmp_slices(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => {
                for (x, y) in a.iter().zip(b) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::GrevLex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                for (x, y) in a.iter().zip(b).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        // smaller exponent in the rightmost differing slot wins
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::ElimFirst(inner) => match a[0].cmp(&b[0]) {
                Ordering::Equal => inner.cmp_slices(&a[1..], &b[1..]),
                ord => ord,
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            MonomialOrder::GrevLex => "grevlex".to_string(),
            MonomialOrder::Lex => "lex".to_string(),
            MonomialOrder::ElimFirst(inner) => format!("elim({})", inner.label()),
        }
    }

    pub fn parse_label(s: &str) -> Option<MonomialOrder> {
        match s {
            "grevlex" => Some(MonomialOrder::GrevLex),
            "lex" => Some(MonomialOrder::Lex),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn grevlex_standard_chain() {
        // x > y > z and on degree 2: x^2 > xy > y^2 > xz > yz > z^2
        let o = MonomialOrder::GrevLex;
        let chain = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in chain.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn lex_order() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 2]), &m(&[1, 3])), Ordering::Less);
    }

    #[test]
    fn elim_first_dominates() {
        let o = MonomialOrder::ElimFirst(Box::new(MonomialOrder::GrevLex));
        // t^1 beats anything with t^0, regardless of degree
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert!(!a.divides(&b));
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert_eq!(a.try_div(&m(&[1, 1])), Some(m(&[1, 0])));
        assert!(m(&[1, 0]).gcd_is_one(&m(&[0, 2])));
    }
}
