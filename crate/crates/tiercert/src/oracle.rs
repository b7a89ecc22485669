//! Independent brute-force oracles over F_p.
//!
//! These deliberately avoid the Gröbner path: ideal membership, colon, and
//! intersection are recomputed as fixed-degree F_p linear algebra and
//! cross-checked against the engine. Test and corpus code only.

use crate::field::{FieldSpec, Scalar};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::AmbientRing;

/// Row-reduced spanning set of coefficient vectors over F_p.
pub struct Rref {
    p: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Rref {
    pub fn new(p: u64, width: usize) -> Rref {
        Rref { p, width, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Reduces `v` against the current rows.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc] % self.p;
            if c != 0 {
                for (slot, r) in v.iter_mut().zip(row) {
                    *slot = (*slot + (self.p - c) * r) % self.p;
                }
            }
        }
        v
    }

    /// Inserts `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut v = self.reduce(v);
        let Some(pc) = v.iter().position(|&c| c % self.p != 0) else {
            return false;
        };
        let inv = mod_inv(v[pc] % self.p, self.p);
        for c in v.iter_mut() {
            *c = *c * inv % self.p;
        }
        // keep earlier rows reduced against the new one
        for (row, &rpc) in self.rows.iter_mut().zip(&self.pivots) {
            let _ = rpc;
            let c = row[pc] % self.p;
            if c != 0 {
                for (slot, n) in row.iter_mut().zip(&v) {
                    *slot = (*slot + (self.p - c) * n) % self.p;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn contains(&self, v: Vec<u64>) -> bool {
        self.reduce(v).iter().all(|&c| c % self.p == 0)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Fixed monomial frame: all monomials of total degree ≤ cap, descending.
pub struct Frame {
    pub ring: AmbientRing,
    pub cap: u64,
    pub monos: Vec<Monomial>,
    pub p: u64,
}

impl Frame {
    pub fn new(ring: &AmbientRing, cap: u64) -> Frame {
        let p = match ring.field {
            FieldSpec::Fp(p) => p,
            FieldSpec::Rational => panic!("oracle frames are F_p only"),
        };
        let mut monos = Vec::new();
        let mut exps = vec![0u32; ring.nvars()];
        gen(ring.nvars(), cap, 0, &mut exps, &mut monos);
        monos.sort_by(|a, b| ring.order.cmp(b, a));
        Frame { ring: ring.clone(), cap, monos, p }
    }

    pub fn to_vec(&self, f: &Poly) -> Option<Vec<u64>> {
        let mut v = vec![0u64; self.monos.len()];
        for (c, m) in &f.terms {
            let idx = self.monos.iter().position(|b| b == m)?;
            match c {
                Scalar::Fp { val, .. } => v[idx] = *val,
                _ => return None,
            }
        }
        Some(v)
    }

    pub fn to_poly(&self, v: &[u64]) -> Poly {
        let terms: Vec<_> = v
            .iter()
            .zip(&self.monos)
            .filter(|(&c, _)| c % self.p != 0)
            .map(|(&c, m)| (self.ring.field.from_i64((c % self.p) as i64), m.clone()))
            .collect();
        self.ring.normalize(terms)
    }

    /// Span of {m·g : g ∈ gens, deg(m·g) ≤ cap}.
    pub fn ideal_span(&self, gens: &[Poly]) -> Rref {
        let mut rref = Rref::new(self.p, self.monos.len());
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let gdeg = g.total_degree().unwrap_or(0);
            if gdeg > self.cap {
                continue;
            }
            for m in &self.monos {
                if m.degree() + gdeg > self.cap {
                    continue;
                }
                let prod = self.ring.mul_term(g, &self.ring.field.one(), m);
                if let Some(v) = self.to_vec(&prod) {
                    rref.insert(v);
                }
            }
        }
        rref
    }

    /// Brute-force membership f ∈ I at this truncation degree.
    pub fn membership(&self, gens: &[Poly], f: &Poly) -> bool {
        let span = self.ideal_span(gens);
        match self.to_vec(f) {
            Some(v) => span.contains(v),
            None => false,
        }
    }

    /// Basis of {r : deg r ≤ r_cap, r·a ∈ span(I at cap)}.
    pub fn colon_space(&self, gens: &[Poly], a: &Poly, r_cap: u64) -> Vec<Poly> {
        let span = self.ideal_span(gens);
        let r_monos: Vec<&Monomial> = self
            .monos
            .iter()
            .filter(|m| m.degree() <= r_cap)
            .collect();
        // linear map: coefficients of r ↦ residue of r·a mod span
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for m in &r_monos {
            let prod = self.ring.mul_term(a, &self.ring.field.one(), m);
            let v = self
                .to_vec(&prod)
                .expect("colon product exceeds oracle frame");
            cols.push(span.reduce(v));
        }
        let kernel = kernel_basis(&cols, self.monos.len(), self.p);
        kernel
            .into_iter()
            .map(|k| {
                let terms: Vec<_> = k
                    .iter()
                    .zip(&r_monos)
                    .filter(|(&c, _)| c != 0)
                    .map(|(&c, m)| (self.ring.field.from_i64(c as i64), (*m).clone()))
                    .collect();
                self.ring.normalize(terms)
            })
            .filter(|f| !f.is_zero())
            .collect()
    }

    /// Basis of span(I) ∩ span(J) at this truncation degree.
    pub fn intersection_space(&self, gens_a: &[Poly], gens_b: &[Poly]) -> Vec<Poly> {
        let a = self.ideal_span(gens_a);
        let b = self.ideal_span(gens_b);
        // vectors in span(a) that reduce to zero against span(b)
        let cols: Vec<Vec<u64>> = a.rows().iter().map(|r| b.reduce(r.clone())).collect();
        let kernel = kernel_basis(&cols, self.monos.len(), self.p);
        let mut out = Vec::new();
        for k in kernel {
            let mut v = vec![0u64; self.monos.len()];
            for (c, row) in k.iter().zip(a.rows()) {
                if *c == 0 {
                    continue;
                }
                for (slot, r) in v.iter_mut().zip(row) {
                    *slot = (*slot + c * r) % self.p;
                }
            }
            let f = self.to_poly(&v);
            if !f.is_zero() {
                out.push(f);
            }
        }
        out
    }
}

/// Kernel basis of the linear map given column-wise: `cols[j]` is the
/// image of unit vector j in F_p^height.
pub fn kernel_basis(cols: &[Vec<u64>], height: usize, p: u64) -> Vec<Vec<u64>> {
    let ncols = cols.len();
    // row-reduce the transpose-augmented system
    let mut mat: Vec<Vec<u64>> = (0..height)
        .map(|r| cols.iter().map(|c| c[r] % p).collect())
        .collect();
    let mut pivot_col_of_row = Vec::new();
    let mut is_pivot = vec![false; ncols];
    let mut row = 0;
    for col in 0..ncols {
        let mut sel = None;
        for (r, mrow) in mat.iter().enumerate().take(height).skip(row) {
            if mrow[col] != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        mat.swap(row, sel);
        let inv = mod_inv(mat[row][col], p);
        for c in 0..ncols {
            mat[row][c] = mat[row][c] * inv % p;
        }
        for r in 0..height {
            if r != row && mat[r][col] != 0 {
                let f = mat[r][col];
                for c in 0..ncols {
                    mat[r][c] = (mat[r][c] + (p - f) * mat[row][c]) % p;
                }
            }
        }
        pivot_col_of_row.push(col);
        is_pivot[col] = true;
        row += 1;
        if row == height {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = (p - mat[r][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

fn gen(n: usize, budget: u64, i: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if i == n {
        out.push(Monomial(exps.clone()));
        return;
    }
    for e in 0..=budget {
        exps[i] = e as u32;
        gen(n, budget - e, i + 1, exps, out);
    }
    exps[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::ideal::{ideal_intersect, ideal_quotient, Ideal};
    use crate::monomial::MonomialOrder;
    use crate::parse::parse_poly;
    use crate::ring::polynomial_ring;

    fn setup() -> (AmbientRing, crate::ring::Ring) {
        let amb = AmbientRing::new(
            vec!["x".into(), "y".into()],
            FieldSpec::prime_field(5).unwrap(),
            MonomialOrder::GrevLex,
        );
        let r = polynomial_ring(amb.clone());
        (amb, r)
    }

    #[test]
    fn membership_agrees_with_groebner_on_small_cases() {
        let (amb, r) = setup();
        let frame = Frame::new(&amb, 8);
        let gens = vec![
            parse_poly(&amb, "x^2 - y").unwrap(),
            parse_poly(&amb, "x*y - 1").unwrap(),
        ];
        let ideal = Ideal::new(&r, gens.clone());
        for s in ["y^3 - 1", "x + y", "x^3 - x*y^2 + y - 1", "x^4"] {
            let f = parse_poly(&amb, s).unwrap();
            assert_eq!(
                frame.membership(&gens, &f),
                ideal.contains(&f),
                "disagreement on {s}"
            );
        }
    }

    #[test]
    fn colon_space_matches_ideal_quotient() {
        let (amb, r) = setup();
        let frame = Frame::new(&amb, 8);
        let gens = vec![parse_poly(&amb, "x*y").unwrap()];
        let a = parse_poly(&amb, "x").unwrap();
        let colon = ideal_quotient(&Ideal::new(&r, gens.clone()), &a).ideal;
        // every oracle element reduces to zero mod the computed colon
        for f in frame.colon_space(&gens, &a, 3) {
            assert!(colon.contains(&f));
        }
        // and the computed generators appear in the oracle space at their degree
        let space = frame.colon_space(&gens, &a, 3);
        let span = {
            let mut rr = Rref::new(5, frame.monos.len());
            for f in &space {
                rr.insert(frame.to_vec(f).unwrap());
            }
            rr
        };
        for g in &colon.gens {
            assert!(span.contains(frame.to_vec(g).unwrap()));
        }
    }

    #[test]
    fn intersection_space_matches_ideal_intersect() {
        let (amb, r) = setup();
        let frame = Frame::new(&amb, 6);
        let ga = vec![parse_poly(&amb, "x").unwrap()];
        let gb = vec![parse_poly(&amb, "y").unwrap()];
        let inter = ideal_intersect(&Ideal::new(&r, ga.clone()), &Ideal::new(&r, gb.clone()))
            .unwrap();
        for f in frame.intersection_space(&ga, &gb) {
            assert!(inter.contains(&f));
        }
    }
}
