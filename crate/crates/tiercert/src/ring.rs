//! Ambient polynomial rings and quotient rings presented by a Gröbner basis.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::groebner;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{poly_string, Poly};
use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

/// k[x_1..x_n] with a fixed monomial order and grading weights.
/// Weights only enter homogeneity checks, never the term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientRing {
    pub vars: Vec<String>,
    pub field: FieldSpec,
    pub order: MonomialOrder,
    pub weights: Vec<u64>,
}

impl AmbientRing {
    pub fn new(vars: Vec<String>, field: FieldSpec, order: MonomialOrder) -> AmbientRing {
        let n = vars.len();
        AmbientRing { vars, field, order, weights: vec![1; n] }
    }

    pub fn with_weights(mut self, weights: Vec<u64>) -> AmbientRing {
        assert_eq!(weights.len(), self.vars.len());
        self.weights = weights;
        self
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(c, Monomial::one(self.nvars()))] }
        }
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(self.field.from_i64(n))
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly { terms: vec![(self.field.one(), Monomial::var(self.nvars(), i))] }
    }

    pub fn monomial(&self, c: Scalar, m: Monomial) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(c, m)] }
        }
    }

    /// Canonicalizes an arbitrary term list: sorts descending, merges
    /// duplicates, drops zeros.
    pub fn normalize(&self, mut terms: Vec<(Scalar, Monomial)>) -> Poly {
        terms.sort_by(|a, b| self.order.cmp(&b.1, &a.1));
        let mut out: Vec<(Scalar, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            if let Some(last) = out.last_mut() {
                if last.1 == m {
                    last.0 = last.0.add(&c);
                    continue;
                }
            }
            out.push((c, m));
        }
        out.retain(|(c, _)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        // merge of two sorted term lists
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match self.order.cmp(&a.terms[i].1, &b.terms[j].1) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.terms[i].0.add(&b.terms[j].0);
                    if !c.is_zero() {
                        out.push((c, a.terms[i].1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend_from_slice(&b.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly { terms: a.terms.iter().map(|(c, m)| (c.neg(), m.clone())).collect() }
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: a.terms.iter().map(|(k, m)| (k.mul(c), m.clone())).collect() }
    }

    /// a * c*x^m
    pub fn mul_term(&self, a: &Poly, c: &Scalar, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: a.terms.iter().map(|(k, mm)| (k.mul(c), mm.mul(m))).collect() }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (c, m) in &b.terms {
            acc = self.add(&acc, &self.mul_term(a, c, m));
        }
        acc
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn make_monic(&self, a: &Poly) -> Poly {
        match a.leading_coeff() {
            None => Poly::zero(),
            Some(c) if c.is_one() => a.clone(),
            Some(c) => self.scale(a, &c.inv()),
        }
    }

    /// Total order on polynomials used for canonical sorting of bases.
    pub fn poly_cmp(&self, a: &Poly, b: &Poly) -> Ordering {
        for ((ca, ma), (cb, mb)) in a.terms.iter().zip(&b.terms) {
            match self.order.cmp(ma, mb) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match ca.canonical_cmp(cb) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        a.terms.len().cmp(&b.terms.len())
    }

    /// Weighted degree if homogeneous, else None. Zero counts as
    /// homogeneous of every degree; reported as Some(0).
    pub fn homogeneous_degree(&self, a: &Poly) -> Option<u64> {
        let mut deg = None;
        for (_, m) in &a.terms {
            let d = m.weighted_degree(&self.weights);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing == d => {}
                _ => return None,
            }
        }
        Some(deg.unwrap_or(0))
    }

    pub fn weighted_degree(&self, a: &Poly) -> Option<u64> {
        a.terms
            .iter()
            .map(|(_, m)| m.weighted_degree(&self.weights))
            .max()
    }

    pub fn poly_string(&self, p: &Poly) -> String {
        poly_string(p, &self.vars)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, a: &Poly, i: usize) -> Poly {
        let mut terms = Vec::new();
        for (c, m) in &a.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let coef = c.mul(&self.field.from_i64(e as i64));
            if coef.is_zero() {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            terms.push((coef, Monomial(exps)));
        }
        self.normalize(terms)
    }

    /// Ring with `k` fresh variables prepended (used for elimination);
    /// keeps this ring's order on the old block.
    pub fn extend_front(&self, k: usize) -> AmbientRing {
        let mut vars: Vec<String> = (0..k).map(|i| format!("@t{i}")).collect();
        vars.extend(self.vars.iter().cloned());
        let mut order = self.order.clone();
        for _ in 0..k {
            order = MonomialOrder::ElimFirst(Box::new(order));
        }
        let mut weights = vec![1; k];
        weights.extend_from_slice(&self.weights);
        AmbientRing { vars, field: self.field, order, weights }
    }

    /// Embeds a polynomial of this ring into `extend_front(k)`.
    pub fn lift_front(&self, p: &Poly, k: usize) -> Poly {
        Poly {
            terms: p
                .terms
                .iter()
                .map(|(c, m)| {
                    let mut e = vec![0u32; k];
                    e.extend_from_slice(&m.0);
                    (c.clone(), Monomial(e))
                })
                .collect(),
        }
    }

    /// Projects from `extend_front(k)` back down; None if any front
    /// variable occurs. Terms stay sorted (dropping a zero block preserves
    /// relative order under ElimFirst-extended orders).
    pub fn drop_front(&self, p: &Poly, k: usize) -> Option<Poly> {
        let mut terms = Vec::with_capacity(p.terms.len());
        for (c, m) in &p.terms {
            if m.0[..k].iter().any(|&e| e > 0) {
                return None;
            }
            terms.push((c.clone(), Monomial(m.0[k..].to_vec())));
        }
        Some(Poly { terms })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingMeta {
    /// Corpus assertion that the defining ideal is equidimensional, for
    /// rings where the built-in criteria cannot decide it.
    pub equidimensional: Option<bool>,
    /// Corpus assertion that the Jacobian criterion computes Sing exactly.
    pub jacobian_exact: bool,
}

/// R = k[x]/J, elements represented by normal forms modulo the reduced
/// Gröbner basis of J. `defining_gb` is empty for the polynomial ring.
#[derive(Debug)]
pub struct QuotientRingData {
    pub ambient: AmbientRing,
    pub defining_gens: Vec<Poly>,
    pub defining_gb: Vec<Poly>,
    pub meta: RingMeta,
    dim_cache: OnceLock<i64>,
    graded_cache: OnceLock<bool>,
}

pub type Ring = Arc<QuotientRingData>;

pub fn polynomial_ring(ambient: AmbientRing) -> Ring {
    Arc::new(QuotientRingData {
        ambient,
        defining_gens: Vec::new(),
        defining_gb: Vec::new(),
        meta: RingMeta { equidimensional: Some(true), jacobian_exact: true },
        dim_cache: OnceLock::new(),
        graded_cache: OnceLock::new(),
    })
}

pub fn quotient_ring(ambient: AmbientRing, gens: Vec<Poly>) -> Result<Ring> {
    quotient_ring_with_meta(ambient, gens, RingMeta { equidimensional: None, jacobian_exact: true })
}

pub fn quotient_ring_with_meta(ambient: AmbientRing, gens: Vec<Poly>, meta: RingMeta) -> Result<Ring> {
    let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        let mut ring = polynomial_ring(ambient);
        Arc::get_mut(&mut ring).unwrap().meta = meta;
        return Ok(ring);
    }
    let gb = groebner::ideal_gb(&ambient, gens.clone());
    if gb.len() == 1 && gb[0].is_constant() {
        return Err(Error::usage("defining ideal is the unit ideal".to_string()));
    }
    Ok(Arc::new(QuotientRingData {
        ambient,
        defining_gens: gens,
        defining_gb: gb,
        meta,
        dim_cache: OnceLock::new(),
        graded_cache: OnceLock::new(),
    }))
}

impl QuotientRingData {
    pub fn is_polynomial_ring(&self) -> bool {
        self.defining_gb.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    /// Normal form modulo the defining ideal.
    pub fn nf(&self, p: &Poly) -> Poly {
        if self.defining_gb.is_empty() {
            p.clone()
        } else {
            groebner::poly_nf(&self.ambient, p, &self.defining_gb)
        }
    }

    pub fn is_zero_elem(&self, p: &Poly) -> bool {
        self.nf(p).is_zero()
    }

    /// Krull dimension of R, from the staircase of the defining ideal.
    pub fn dim(&self) -> i64 {
        *self
            .dim_cache
            .get_or_init(|| groebner::staircase_dim(&self.ambient, &self.defining_gb))
    }

    /// True when every defining relation is homogeneous for the weights.
    pub fn is_graded(&self) -> bool {
        *self.graded_cache.get_or_init(|| {
            self.defining_gb
                .iter()
                .all(|g| self.ambient.homogeneous_degree(g).is_some())
        })
    }

    /// Equidimensionality of the defining ideal, when decidable:
    /// zero ideal, principal ideals (unmixedness), and zero-dimensional
    /// ideals are automatic; otherwise the corpus metadata decides.
    pub fn equidimensional(&self) -> Option<bool> {
        if self.defining_gb.is_empty() || self.defining_gens.len() == 1 {
            return Some(true);
        }
        if self.defining_gb.len() == 1 {
            return Some(true);
        }
        if self.dim() == 0 {
            return Some(true);
        }
        self.meta.equidimensional
    }

    pub fn describe(&self) -> String {
        let a = &self.ambient;
        let vars = a.vars.join(",");
        if self.is_polynomial_ring() {
            format!("{}[{}]", a.field.label(), vars)
        } else {
            let gens: Vec<String> = self.defining_gb.iter().map(|g| a.poly_string(g)).collect();
            format!("{}[{}]/({})", a.field.label(), vars, gens.join(", "))
        }
    }
}

/// Structural ring equality (field, variables, order, weights, defining GB).
pub fn ring_eq(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b)
        || (a.ambient == b.ambient && a.defining_gb == b.defining_gb)
}

pub fn ensure_same_ring(a: &Ring, b: &Ring, what: &str) -> Result<()> {
    if ring_eq(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!(
            "{what}: {} vs {}",
            a.describe(),
            b.describe()
        )))
    }
}
