//! Koszul complexes, their homology, and the Koszul depth formula.

use crate::error::{Error, Result};
use crate::groebner::{vector_is_zero, SubmoduleGb};
use crate::module::{direct_sum, map_kernel, Matrix, ModuleMap, PresentedModule};
use crate::poly::Poly;
use crate::ring::Ring;

/// K(x_1..x_h): exterior basis indexed by subsets of {0..h-1} sorted
/// lexicographically, differential e_S ↦ Σ_{j∈S} (−1)^{pos(j,S)} x_j e_{S∖j}.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    pub ring: Ring,
    pub elements: Vec<Poly>,
    /// diffs[i-1] = d_i : K_i → K_{i-1}, rows C(h,i-1) × cols C(h,i).
    pub diffs: Vec<Matrix>,
}

fn subsets_of_size(h: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, h: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..h {
            cur.push(i);
            rec(i + 1, h, k, cur, out);
            cur.pop();
        }
    }
    rec(0, h, k, &mut cur, &mut out);
    out
}

pub fn koszul_complex(ring: &Ring, xs: &[Poly]) -> Result<KoszulComplex> {
    if xs.is_empty() {
        return Err(Error::usage("Koszul complex on an empty sequence".to_string()));
    }
    let xs: Vec<Poly> = xs.iter().map(|x| ring.nf(x)).collect();
    let h = xs.len();
    let amb = &ring.ambient;
    let mut diffs = Vec::with_capacity(h);
    for i in 1..=h {
        let rows_sets = subsets_of_size(h, i - 1);
        let cols_sets = subsets_of_size(h, i);
        let mut d = Matrix::zero(rows_sets.len(), cols_sets.len());
        for (c, s) in cols_sets.iter().enumerate() {
            for (pos, &j) in s.iter().enumerate() {
                let mut t = s.clone();
                t.remove(pos);
                let r = rows_sets.iter().position(|u| *u == t).unwrap();
                let entry = if pos % 2 == 0 {
                    xs[j].clone()
                } else {
                    amb.neg(&xs[j])
                };
                d.set(r, c, ring.nf(&entry));
            }
        }
        diffs.push(d);
    }
    // composites vanish by construction; verify anyway at build time
    for w in diffs.windows(2) {
        let prod = w[0].mul(ring, &w[1]);
        if !prod.is_zero() {
            return Err(Error::BuilderInvariant(
                "Koszul differentials do not compose to zero".to_string(),
            ));
        }
    }
    Ok(KoszulComplex { ring: ring.clone(), elements: xs, diffs })
}

impl KoszulComplex {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rank(&self, i: usize) -> usize {
        if i == 0 {
            return 1;
        }
        self.diffs[i - 1].cols
    }

    /// d_i as a map of free modules.
    pub fn diff_map(&self, i: usize) -> ModuleMap {
        let d = &self.diffs[i - 1];
        ModuleMap::new(
            PresentedModule::free(&self.ring, d.cols),
            PresentedModule::free(&self.ring, d.rows),
            d.clone(),
        )
    }
}

/// H_i(K) as a presented subquotient: generators are the kernel
/// generators of d_i, relations express the columns of d_{i+1} in them.
/// H_0 = R/(x_1..x_h).
pub fn koszul_homology(k: &KoszulComplex, i: usize) -> Result<PresentedModule> {
    let h = k.len();
    if i > h {
        return Err(Error::usage(format!("homology index {i} out of range 0..={h}")));
    }
    let incoming = if i < h { Some(k.diff_map(i + 1)) } else { None };
    if i == 0 {
        let middle = PresentedModule::free(&k.ring, 1);
        return homology_at(&k.ring, None, &middle, incoming.as_ref());
    }
    let outgoing = k.diff_map(i);
    homology_at(&k.ring, Some(&outgoing), &outgoing.source, incoming.as_ref())
}

/// ker(outgoing)/im(incoming) at a presented module `middle`; with no
/// outgoing map the kernel is all of `middle`.
pub fn homology_at(
    ring: &Ring,
    outgoing: Option<&ModuleMap>,
    middle: &PresentedModule,
    incoming: Option<&ModuleMap>,
) -> Result<PresentedModule> {
    let (kernel, incl) = match outgoing {
        Some(g) => map_kernel(g)?,
        None => {
            let m = middle.clone();
            let id = ModuleMap::identity(&m);
            (m, id)
        }
    };
    let Some(f) = incoming else {
        return Ok(kernel);
    };
    // express each incoming generator image in the kernel generators,
    // modulo the middle module's relations
    let span_cols = incl.matrix.hcat(&middle.rels);
    let span = SubmoduleGb::new(ring, &span_cols.columns(), middle.ngens, true);
    let mut new_rels = kernel.rels.clone();
    for c in 0..f.matrix.cols {
        let img = f.matrix.col(c);
        if vector_is_zero(&img) {
            continue;
        }
        let rep = span.representation(&img).ok_or_else(|| {
            Error::BuilderInvariant(
                "image of incoming differential escapes the kernel".to_string(),
            )
        })?;
        let col: Vec<Poly> = rep[..kernel.ngens].to_vec();
        new_rels = new_rels.hcat(&Matrix::from_cols(kernel.ngens, vec![col]));
    }
    Ok(PresentedModule::new(ring, kernel.ngens, new_rels))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    /// The zero module, by convention.
    Infinite,
}

/// Koszul depth: h − max{i : H_i(K ⊗ M) ≠ 0} for K the Koszul complex on
/// the given generators (the irrelevant maximal ideal on the corpus).
pub fn depth(m: &PresentedModule, gens: &[Poly]) -> Result<Depth> {
    if m.is_zero_module() {
        return Ok(Depth::Infinite);
    }
    let ring = &m.ring;
    let k = koszul_complex(ring, gens)?;
    let h = k.len();
    for i in (1..=h).rev() {
        let hm = tensor_homology(&k, m, i)?;
        if !hm.is_zero_module() {
            return Ok(Depth::Finite(h - i));
        }
    }
    let h0 = tensor_homology(&k, m, 0)?;
    if h0.is_zero_module() {
        return Err(Error::usage(
            "depth: the given generators do not cut out the module (M = IM)".to_string(),
        ));
    }
    Ok(Depth::Finite(h))
}

/// H_i(K ⊗ M).
pub fn tensor_homology(k: &KoszulComplex, m: &PresentedModule, i: usize) -> Result<PresentedModule> {
    let ring = &k.ring;
    let h = k.len();
    if i > h {
        return Err(Error::usage(format!("homology index {i} out of range 0..={h}")));
    }
    let middle = tensor_power(ring, m, k.rank(i))?;
    let outgoing = if i >= 1 {
        let lower = tensor_power(ring, m, k.rank(i - 1))?;
        Some(ModuleMap::new(
            middle.clone(),
            lower,
            kronecker_with_identity(ring, &k.diffs[i - 1], m.ngens),
        ))
    } else {
        None
    };
    let incoming = if i < h {
        let upper = tensor_power(ring, m, k.rank(i + 1))?;
        Some(ModuleMap::new(
            upper,
            middle.clone(),
            kronecker_with_identity(ring, &k.diffs[i], m.ngens),
        ))
    } else {
        None
    };
    homology_at(ring, outgoing.as_ref(), &middle, incoming.as_ref())
}

fn tensor_power(ring: &Ring, m: &PresentedModule, copies: usize) -> Result<PresentedModule> {
    let mods: Vec<PresentedModule> = (0..copies).map(|_| m.clone()).collect();
    if mods.is_empty() {
        return Ok(PresentedModule::zero(ring));
    }
    let (sum, _, _) = direct_sum(ring, &mods)?;
    Ok(sum)
}

/// d ⊗ id: block matrix with (r,c) block = d[r][c]·I_n.
fn kronecker_with_identity(ring: &Ring, d: &Matrix, n: usize) -> Matrix {
    let mut out = Matrix::zero(d.rows * n, d.cols * n);
    for r in 0..d.rows {
        for c in 0..d.cols {
            let e = d.get(r, c);
            if e.is_zero() {
                continue;
            }
            for i in 0..n {
                out.set(r * n + i, c * n + i, ring.nf(e));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::monomial::MonomialOrder;
    use crate::parse::parse_poly;
    use crate::ring::{polynomial_ring, quotient_ring, AmbientRing};

    fn f5(vars: &[&str]) -> AmbientRing {
        AmbientRing::new(
            vars.iter().map(|s| s.to_string()).collect(),
            FieldSpec::prime_field(5).unwrap(),
            MonomialOrder::GrevLex,
        )
    }

    fn pp(ring: &Ring, s: &str) -> Poly {
        parse_poly(&ring.ambient, s).unwrap()
    }

    #[test]
    fn koszul_on_one_element() {
        let r = polynomial_ring(f5(&["x"]));
        let k = koszul_complex(&r, &[pp(&r, "x")]).unwrap();
        assert_eq!(k.diffs.len(), 1);
        assert_eq!(k.diffs[0].rows, 1);
        assert_eq!(k.diffs[0].cols, 1);
        assert_eq!(k.diffs[0].get(0, 0), &pp(&r, "x"));
    }

    #[test]
    fn koszul_on_two_elements_signs() {
        let r = polynomial_ring(f5(&["x", "y"]));
        let k = koszul_complex(&r, &[pp(&r, "x"), pp(&r, "y")]).unwrap();
        let d1 = &k.diffs[0];
        assert_eq!(d1.get(0, 0), &pp(&r, "x"));
        assert_eq!(d1.get(0, 1), &pp(&r, "y"));
        let d2 = &k.diffs[1];
        assert_eq!(d2.get(0, 0), &pp(&r, "-y"));
        assert_eq!(d2.get(1, 0), &pp(&r, "x"));
    }

    #[test]
    fn koszul_over_quotient_composes_to_zero() {
        let amb = f5(&["x", "y"]).with_weights(vec![2, 3]);
        let r = quotient_ring(amb.clone(), vec![parse_poly(&amb, "y^2 - x^3").unwrap()]).unwrap();
        let k = koszul_complex(&r, &[pp(&r, "x"), pp(&r, "y")]).unwrap();
        let prod = k.diffs[0].mul(&r, &k.diffs[1]);
        assert!(prod.is_zero());
    }

    #[test]
    fn empty_sequence_is_an_error() {
        let r = polynomial_ring(f5(&["x"]));
        assert!(koszul_complex(&r, &[]).is_err());
    }

    #[test]
    fn homology_of_regular_sequence_vanishes() {
        let r = polynomial_ring(f5(&["x", "y"]));
        let k = koszul_complex(&r, &[pp(&r, "x"), pp(&r, "y")]).unwrap();
        assert!(koszul_homology(&k, 1).unwrap().is_zero_module());
        assert!(koszul_homology(&k, 2).unwrap().is_zero_module());
        let h0 = koszul_homology(&k, 0).unwrap();
        assert!(!h0.is_zero_module());
    }

    #[test]
    fn homology_over_domain_is_torsion_free_in_top_degree() {
        let amb = f5(&["x", "y"]).with_weights(vec![2, 3]);
        let r = quotient_ring(amb.clone(), vec![parse_poly(&amb, "y^2 - x^3").unwrap()]).unwrap();
        let k = koszul_complex(&r, &[pp(&r, "x")]).unwrap();
        assert!(koszul_homology(&k, 1).unwrap().is_zero_module());
    }

    #[test]
    fn homology_detects_torsion() {
        let amb = f5(&["x"]);
        let r = quotient_ring(amb.clone(), vec![parse_poly(&amb, "x^2").unwrap()]).unwrap();
        let k = koszul_complex(&r, &[pp(&r, "x")]).unwrap();
        let h1 = koszul_homology(&k, 1).unwrap();
        // H_1 = (0 : x) = (x)/(x^2) ≅ R/(x)
        let rx = PresentedModule::cyclic(&r, &[pp(&r, "x")]);
        assert!(h1.canon_eq(&rx));
    }

    #[test]
    fn depth_examples() {
        // regular: depth R = 2
        let r = polynomial_ring(f5(&["x", "y"]));
        let free = PresentedModule::free(&r, 1);
        assert_eq!(
            depth(&free, &[pp(&r, "x"), pp(&r, "y")]).unwrap(),
            Depth::Finite(2)
        );
        // cusp: depth R = 1
        let amb = f5(&["x", "y"]).with_weights(vec![2, 3]);
        let c = quotient_ring(amb.clone(), vec![parse_poly(&amb, "y^2 - x^3").unwrap()]).unwrap();
        let cfree = PresentedModule::free(&c, 1);
        assert_eq!(
            depth(&cfree, &[pp(&c, "x"), pp(&c, "y")]).unwrap(),
            Depth::Finite(1)
        );
        // k has depth 0; the zero module has infinite depth
        let k = PresentedModule::cyclic(&r, &[pp(&r, "x"), pp(&r, "y")]);
        assert_eq!(depth(&k, &[pp(&r, "x"), pp(&r, "y")]).unwrap(), Depth::Finite(0));
        assert_eq!(
            depth(&PresentedModule::zero(&r), &[pp(&r, "x")]).unwrap(),
            Depth::Infinite
        );
    }

    #[test]
    fn matrix_factorization_module_is_mcm() {
        let amb = f5(&["x", "y", "z"]);
        let r = quotient_ring(amb.clone(), vec![parse_poly(&amb, "x^2 + y^2 + z^2").unwrap()])
            .unwrap();
        let m = PresentedModule::new(
            &r,
            2,
            Matrix::from_rows(vec![
                vec![pp(&r, "z"), pp(&r, "x + 2*y")],
                vec![pp(&r, "x - 2*y"), pp(&r, "-z")],
            ]),
        );
        let gens = [pp(&r, "x"), pp(&r, "y"), pp(&r, "z")];
        assert_eq!(depth(&m, &gens).unwrap(), Depth::Finite(2));
    }
}
