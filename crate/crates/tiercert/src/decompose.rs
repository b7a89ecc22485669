//! Decomposition of tier-derived modules over a local graded ring:
//! given a derivation of M from finite-length and bounded-projective-
//! dimension pieces, produce an exact sequence 0 → L → M ⊕ M' → P → 0
//! with L of finite length and pd P ≤ n, by structural recursion through
//! a pushout, a split pullback, and a final pullback.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::groebner::{vector_is_zero, SubmoduleGb, Vector};
use crate::koszul::depth as koszul_depth;
use crate::koszul::Depth;
use crate::module::{
    annihilator, direct_sum, exactness_failures, free_resolution, minimize, pullback,
    pushout, ExactSequenceWitness, Matrix, ModuleMap, Pd, PresentedModule,
};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::ring::Ring;
use crate::CancelToken;
use std::collections::BTreeMap;

/// Additive-closure data: M ⊕ M' ≅ L ⊕ P with L finite length and
/// pd P ≤ n, witnessed by explicit mutually inverse maps.
#[derive(Clone, Debug)]
pub struct AddSplit {
    pub m_prime: PresentedModule,
    pub l: PresentedModule,
    pub p: PresentedModule,
    /// M ⊕ M' → L ⊕ P.
    pub to_lp: ModuleMap,
    /// L ⊕ P → M ⊕ M'.
    pub from_lp: ModuleMap,
}

/// A |S|_m-style derivation of M from fl(R) ∪ PD_n(R).
#[derive(Clone, Debug)]
pub enum Derivation {
    /// m = 1: M (plus padding) is a direct sum of the two kinds.
    Base { module: PresentedModule, split: AddSplit },
    /// m ≥ 2: an exact sequence 0 → X → M ⊕ M' → Y → 0 with X derived at
    /// m−1 and Y in the additive closure.
    Step {
        module: PresentedModule,
        m_prime: PresentedModule,
        x: Box<Derivation>,
        /// X → M ⊕ M' (the direct-sum presentation, M block first).
        x_to_mid: ModuleMap,
        /// M ⊕ M' → Y.
        mid_to_y: ModuleMap,
        y: AddSplit,
    },
}

impl Derivation {
    pub fn module(&self) -> &PresentedModule {
        match self {
            Derivation::Base { module, .. } => module,
            Derivation::Step { module, .. } => module,
        }
    }
}

#[derive(Debug)]
pub struct Decomposition {
    pub l: PresentedModule,
    pub m_prime: PresentedModule,
    pub p: PresentedModule,
    /// 0 → L → M ⊕ M' → P → 0 with the M block leading the middle term.
    pub seq: ExactSequenceWitness,
    pub m_gens: usize,
}

impl Decomposition {
    /// The component L → M of the first map (zero whenever M has
    /// positive depth).
    pub fn alpha_map(&self, m: &PresentedModule) -> ModuleMap {
        let first = &self.seq.maps[0];
        let rows: Vec<Vec<Poly>> = (0..self.m_gens)
            .map(|r| {
                (0..first.matrix.cols)
                    .map(|c| first.matrix.get(r, c).clone())
                    .collect()
            })
            .collect();
        let mat = if rows.is_empty() {
            Matrix::zero(0, first.matrix.cols)
        } else {
            Matrix::from_rows(rows)
        };
        ModuleMap::new(self.l.clone(), m.clone(), mat)
    }
}

/// Depth of R as a module over itself on the irrelevant maximal ideal.
pub fn ring_depth(ring: &Ring) -> Result<usize> {
    let gens: Vec<Poly> = (0..ring.ambient.nvars()).map(|i| ring.ambient.var(i)).collect();
    match koszul_depth(&PresentedModule::free(ring, 1), &gens)? {
        Depth::Finite(d) => Ok(d),
        Depth::Infinite => Err(Error::BuilderInvariant("zero ring".to_string())),
    }
}

pub fn decompose_tier(
    ring: &Ring,
    derivation: &Derivation,
    n: i64,
    degree_bound: u32,
) -> Result<Decomposition> {
    let depth_r = ring_depth(ring)? as i64;
    if n < -1 || n > depth_r - 2 {
        return Err(Error::usage(format!(
            "decompose_tier needs -1 ≤ n ≤ depth R - 2 = {}",
            depth_r - 2
        )));
    }
    let out = decompose_rec(ring, derivation, n, degree_bound)?;
    // post-checks: L finite length, pd P ≤ n, exactness
    let ann = annihilator(&out.l)?;
    if ann.dim() > 0 {
        return Err(Error::BuilderInvariant(
            "decomposition L-part is not finite length".to_string(),
        ));
    }
    check_pd_bound(&out.p, n)?;
    let fails = exactness_failures(&out.seq);
    if !fails.is_empty() {
        return Err(Error::BuilderInvariant(format!(
            "decomposition sequence failed certification: {}",
            fails.join("; ")
        )));
    }
    Ok(out)
}

fn check_pd_bound(p: &PresentedModule, n: i64) -> Result<()> {
    if p.is_zero_module() {
        return Ok(());
    }
    if n < 0 {
        return Err(Error::BuilderInvariant(
            "nonzero P-part at level n = -1".to_string(),
        ));
    }
    let min = minimize(p);
    let res = free_resolution(&min.module, n as usize + 1, &CancelToken::new())?;
    match res.pd {
        Pd::Finite(l) if (l as i64) <= n => Ok(()),
        other => Err(Error::BuilderInvariant(format!(
            "decomposition P-part has uncertified projective dimension ({other:?}, needed ≤ {n})"
        ))),
    }
}

fn decompose_rec(
    ring: &Ring,
    derivation: &Derivation,
    n: i64,
    degree_bound: u32,
) -> Result<Decomposition> {
    match derivation {
        Derivation::Base { module, split } => decompose_base(ring, module, split),
        Derivation::Step { module, m_prime, x, x_to_mid, mid_to_y, y } => {
            decompose_step(ring, module, m_prime, x, x_to_mid, mid_to_y, y, n, degree_bound)
        }
    }
}

/// Base case: conjugate the split sequence 0 → L → L⊕P → P → 0 through
/// the given isomorphism.
fn decompose_base(ring: &Ring, module: &PresentedModule, split: &AddSplit) -> Result<Decomposition> {
    let (lp, lp_injs, lp_projs) = direct_sum(ring, &[split.l.clone(), split.p.clone()])?;
    if !split.from_lp.source.canon_eq(&lp) || !split.to_lp.target.canon_eq(&lp) {
        return Err(Error::usage(
            "base split maps must relate M ⊕ M' and L ⊕ P".to_string(),
        ));
    }
    let first = split.from_lp.compose(&lp_injs[0]);
    let second = lp_projs[1].compose(&split.to_lp);
    let seq = ExactSequenceWitness::new(vec![first, second])?;
    Ok(Decomposition {
        l: split.l.clone(),
        m_prime: split.m_prime.clone(),
        p: split.p.clone(),
        seq,
        m_gens: module.ngens,
    })
}

#[allow(clippy::too_many_arguments)]
fn decompose_step(
    ring: &Ring,
    module: &PresentedModule,
    m_prime: &PresentedModule,
    x: &Derivation,
    x_to_mid: &ModuleMap,
    mid_to_y: &ModuleMap,
    y: &AddSplit,
    n: i64,
    degree_bound: u32,
) -> Result<Decomposition> {
    // recurse: 0 → L' → X ⊕ X' → P' → 0
    let sub = decompose_rec(ring, x, n, degree_bound)?;
    let x_mod = x.module().clone();
    let (x_sum, _x_injs, _) = direct_sum(ring, &[x_mod.clone(), sub.m_prime.clone()])?;
    let iota_prime = &sub.seq.maps[0]; // L' → X ⊕ X'
    let pi_prime = &sub.seq.maps[1]; // X ⊕ X' → P'

    // V = M ⊕ (M' ⊕ X' ⊕ Y'): the M block leads so the final sequence has
    // the required shape
    let parts = [
        module.clone(),
        m_prime.clone(),
        sub.m_prime.clone(),
        y.m_prime.clone(),
    ];
    let (v, v_injs, _v_projs) = direct_sum(ring, &parts)?;

    // φ: X ⊕ X' → V  (X through x_to_mid into the (M, M') blocks, X'
    // into its own slot)
    let mid_gens = module.ngens + m_prime.ngens;
    let mut phi = Matrix::zero(v.ngens, x_sum.ngens);
    for c in 0..x_mod.ngens {
        for r in 0..mid_gens {
            phi.set(r, c, x_to_mid.matrix.get(r, c).clone());
        }
    }
    for c in 0..sub.m_prime.ngens {
        for r in 0..sub.m_prime.ngens {
            phi.set(
                mid_gens + r,
                x_mod.ngens + c,
                v_injs[2].matrix.get(mid_gens + r, c).clone(),
            );
        }
    }
    let phi = ModuleMap::new(x_sum.clone(), v.clone(), phi);

    // ψ: V → L ⊕ P via u ∘ (mid_to_y ⊕ id_{Y'})
    let (lp, lp_injs, lp_projs) = direct_sum(ring, &[y.l.clone(), y.p.clone()])?;
    if !y.to_lp.target.canon_eq(&lp) {
        return Err(Error::usage("Y split maps must land in L ⊕ P".to_string()));
    }
    let (ysum, y_injs, _) = direct_sum(ring, &[mid_to_y.target.clone(), y.m_prime.clone()])?;
    let mut v_to_ysum = Matrix::zero(ysum.ngens, v.ngens);
    for c in 0..mid_gens {
        for r in 0..mid_to_y.target.ngens {
            v_to_ysum.set(r, c, mid_to_y.matrix.get(r, c).clone());
        }
    }
    let yp_off = mid_gens + sub.m_prime.ngens;
    for c in 0..y.m_prime.ngens {
        for r in 0..y.m_prime.ngens {
            v_to_ysum.set(
                mid_to_y.target.ngens + r,
                yp_off + c,
                y_injs[1].matrix.get(mid_to_y.target.ngens + r, c).clone(),
            );
        }
    }
    let v_to_ysum = ModuleMap::new(v.clone(), ysum.clone(), v_to_ysum);
    let psi = y.to_lp.compose(&v_to_ysum);

    let top_row = ExactSequenceWitness::new(vec![phi.clone(), psi.clone()])?;
    let fails = exactness_failures(&top_row);
    if !fails.is_empty() {
        return Err(Error::BuilderInvariant(format!(
            "combined row 0 → X⊕X' → V → L⊕P → 0 is not exact: {}",
            fails.join("; ")
        )));
    }

    // pushout (po): W = V ⊔_{X⊕X'} P'
    let (w, from_v, from_pprime) = pushout(&phi, pi_prime)?;
    // induced W → L⊕P: [ψ | 0]
    let w_to_lp_mat = psi.matrix.hcat(&Matrix::zero(lp.ngens, sub.p.ngens));
    let w_to_lp = ModuleMap::new(w.clone(), lp.clone(), w_to_lp_mat);
    w_to_lp.check_well_defined()?;

    // pullback (pb): P'' over (W → L⊕P ← P)
    let incl_p = lp_injs[1].clone();
    let (p_dd, pdd_to_w, pdd_to_p) = pullback(&w_to_lp, &incl_p)?;
    let _ = pdd_to_p;
    // the middle column 0 → P'' → W → L → 0 splits by the depth bound
    let pi_l = lp_projs[0].compose(&w_to_lp);
    let sigma = solve_section(&pi_l, degree_bound)?.ok_or_else(|| {
        Error::BuilderInvariant(
            "splitting witness not found where depth guarantees it".to_string(),
        )
    })?;
    // ρ: W → P'' with ρ ∘ (P''→W) = id, from (id − σπ) landing in im(P''→W)
    let rho = retraction_through(&p_dd, &pdd_to_w, &sigma, &pi_l)?;

    // rewritten middle column of (po): 0 → L' → V → L ⊕ P'' → 0
    let l_prime_to_v = phi.compose(iota_prime);
    l_prime_to_v.check_well_defined()?;
    let (lpdd, lpdd_injs, _) = direct_sum(ring, &[y.l.clone(), p_dd.clone()])?;
    let v_to_w = from_v;
    let l_comp = pi_l.compose(&v_to_w);
    let pdd_comp = rho.compose(&v_to_w);
    let v_to_lpdd = ModuleMap::new(
        v.clone(),
        lpdd.clone(),
        l_comp.matrix.vcat(&pdd_comp.matrix),
    );
    v_to_lpdd.check_well_defined()?;

    // pullback (pb2): L'' over (V → L ⊕ P'' ← L)
    let incl_l = lpdd_injs[0].clone();
    let (l_dd, ldd_to_v, _ldd_to_l) = pullback(&v_to_lpdd, &incl_l)?;

    // final middle column: 0 → L'' → V → P'' → 0
    let first = ldd_to_v;
    let second = pdd_comp;
    let seq = ExactSequenceWitness::new(vec![first, second])?;

    // M' for the output is the non-M block of V
    let (rest, _, _) = direct_sum(
        ring,
        &[m_prime.clone(), sub.m_prime.clone(), y.m_prime.clone()],
    )?;
    let _ = from_pprime;
    Ok(Decomposition {
        l: l_dd,
        m_prime: rest,
        p: p_dd,
        seq,
        m_gens: module.ngens,
    })
}

/// ρ: W → P'' with ρ∘ι = id, where ι = P'' → W and id − σπ factors
/// through ι.
fn retraction_through(
    p_dd: &PresentedModule,
    iota: &ModuleMap,
    sigma: &ModuleMap,
    pi: &ModuleMap,
) -> Result<ModuleMap> {
    let ring = &p_dd.ring;
    let w = &iota.target;
    let sp = sigma.compose(pi);
    let span_cols = iota.matrix.hcat(&w.rels);
    let span = SubmoduleGb::new(ring, &span_cols.columns(), w.ngens, true);
    let mut rho = Matrix::zero(p_dd.ngens, w.ngens);
    for t in 0..w.ngens {
        let mut v: Vector = (0..w.ngens)
            .map(|r| {
                let e = sp.matrix.get(r, t);
                ring.nf(&ring.ambient.neg(e))
            })
            .collect();
        v[t] = ring.nf(&ring.ambient.add(&v[t], &ring.ambient.one()));
        if vector_is_zero(&v) {
            continue;
        }
        let rep = span.representation(&v).ok_or_else(|| {
            Error::BuilderInvariant(
                "id − σπ does not factor through the pullback inclusion".to_string(),
            )
        })?;
        for (r, entry) in rep[..p_dd.ngens].iter().enumerate() {
            rho.set(r, t, entry.clone());
        }
    }
    let rho = ModuleMap::new(w.clone(), p_dd.clone(), rho);
    if !rho.compose(iota).is_identity_map() {
        return Err(Error::BuilderInvariant(
            "retraction does not split the pullback inclusion".to_string(),
        ));
    }
    Ok(rho)
}

/// Solves for a section σ of π: W → L (π∘σ = id, σ well-defined) by
/// exact linear algebra over the coefficient field. Entry supports come
/// from the grading when both modules carry one, otherwise from all
/// monomials up to the degree bound.
pub fn solve_section(pi: &ModuleMap, degree_bound: u32) -> Result<Option<ModuleMap>> {
    let w = &pi.source;
    let l = &pi.target;
    let ring = &w.ring;
    let amb = &ring.ambient;
    if l.ngens == 0 {
        return Ok(Some(ModuleMap::new(
            l.clone(),
            w.clone(),
            Matrix::zero(w.ngens, 0),
        )));
    }
    // candidate monomials per entry (i = W generator, j = L generator)
    let graded = ring.is_graded() && w.degrees.is_some() && l.degrees.is_some();
    let mut unknowns: Vec<(usize, usize, Monomial)> = Vec::new();
    for i in 0..w.ngens {
        for j in 0..l.ngens {
            if graded {
                let target = l.degrees.as_ref().unwrap()[j] - w.degrees.as_ref().unwrap()[i];
                if target < 0 {
                    continue;
                }
                for m in monomials_of_weighted_degree(amb, target as u64) {
                    unknowns.push((i, j, m));
                }
            } else {
                for m in monomials_up_to_degree(amb, degree_bound as u64) {
                    unknowns.push((i, j, m));
                }
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(None);
    }

    let w_span = SubmoduleGb::new(ring, &w.rels.columns(), w.ngens, false);
    let l_span = SubmoduleGb::new(ring, &l.rels.columns(), l.ngens, false);

    let mut row_index: BTreeMap<(usize, usize, Monomial), usize> = BTreeMap::new();
    let mut cols: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); unknowns.len()];
    let mut rhs: BTreeMap<usize, Scalar> = BTreeMap::new();
    let mut nrows = 0usize;
    let mut row_of = |key: (usize, usize, Monomial), nrows: &mut usize| -> usize {
        *row_index.entry(key).or_insert_with(|| {
            let r = *nrows;
            *nrows += 1;
            r
        })
    };

    // well-definedness: σ · (relation columns of L) dies in W
    for c in 0..l.rels.cols {
        for (u, (i, j, m)) in unknowns.iter().enumerate() {
            let coeff = l.rels.get(*j, c);
            if coeff.is_zero() {
                continue;
            }
            let mut vec = vec![Poly::zero(); w.ngens];
            vec[*i] = amb.mul_term(coeff, &amb.field.one(), m);
            let nf = w_span.nf(&vec);
            for (comp, poly) in nf.iter().enumerate() {
                for (s, mono) in &poly.terms {
                    let r = row_of((c, comp, mono.clone()), &mut nrows);
                    let slot = cols[u].entry(r).or_insert_with(|| amb.field.zero());
                    *slot = slot.add(s);
                }
            }
        }
    }
    // section condition: π σ(e_j) ≡ e_j in L
    let cond_off = l.rels.cols;
    for j in 0..l.ngens {
        for (u, (i, jj, m)) in unknowns.iter().enumerate() {
            if *jj != j {
                continue;
            }
            let mut vec = vec![Poly::zero(); l.ngens];
            for r in 0..l.ngens {
                let e = pi.matrix.get(r, *i);
                if !e.is_zero() {
                    vec[r] = amb.mul_term(e, &amb.field.one(), m);
                }
            }
            let nf = l_span.nf(&vec);
            for (comp, poly) in nf.iter().enumerate() {
                for (s, mono) in &poly.terms {
                    let r = row_of((cond_off + j, comp, mono.clone()), &mut nrows);
                    let slot = cols[u].entry(r).or_insert_with(|| amb.field.zero());
                    *slot = slot.add(s);
                }
            }
        }
        let mut e = vec![Poly::zero(); l.ngens];
        e[j] = amb.one();
        let nf = l_span.nf(&e);
        for (comp, poly) in nf.iter().enumerate() {
            for (s, mono) in &poly.terms {
                let r = row_of((cond_off + j, comp, mono.clone()), &mut nrows);
                let slot = rhs.entry(r).or_insert_with(|| amb.field.zero());
                *slot = slot.add(s);
            }
        }
    }

    let mut mat: Vec<Vec<Scalar>> = vec![vec![amb.field.zero(); unknowns.len()]; nrows];
    let mut b: Vec<Scalar> = vec![amb.field.zero(); nrows];
    for (u, col) in cols.iter().enumerate() {
        for (&r, s) in col {
            mat[r][u] = s.clone();
        }
    }
    for (&r, s) in &rhs {
        b[r] = s.clone();
    }
    let Some(sol) = solve_linear(mat, b, &amb.field) else {
        return Ok(None);
    };
    let mut sigma = Matrix::zero(w.ngens, l.ngens);
    for ((i, j, m), s) in unknowns.into_iter().zip(sol) {
        if s.is_zero() {
            continue;
        }
        let term = amb.monomial(s, m);
        let cur = sigma.get(i, j).clone();
        sigma.set(i, j, amb.add(&cur, &term));
    }
    let sigma = ModuleMap::new(l.clone(), w.clone(), sigma);
    if sigma.well_defined_violation().is_some() || !pi.compose(&sigma).is_identity_map() {
        return Ok(None);
    }
    Ok(Some(sigma))
}

fn monomials_of_weighted_degree(amb: &crate::ring::AmbientRing, d: u64) -> Vec<Monomial> {
    let all = monomials_up_to_degree(amb, d);
    all.into_iter()
        .filter(|m| m.weighted_degree(&amb.weights) == d)
        .collect()
}

fn monomials_up_to_degree(amb: &crate::ring::AmbientRing, d: u64) -> Vec<Monomial> {
    let n = amb.nvars();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(n: usize, budget: u64, i: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == n {
            out.push(Monomial(exps.clone()));
            return;
        }
        for e in 0..=budget {
            exps[i] = e as u32;
            rec(n, budget - e, i + 1, exps, out);
        }
        exps[i] = 0;
    }
    rec(n, d, 0, &mut exps, &mut out);
    out.sort_by(|a, b| amb.order.cmp(b, a));
    out
}

/// One solution of A·x = b over the coefficient field, free variables set
/// to zero; None when inconsistent.
fn solve_linear(
    mut a: Vec<Vec<Scalar>>,
    mut b: Vec<Scalar>,
    field: &crate::field::FieldSpec,
) -> Option<Vec<Scalar>> {
    let nrows = a.len();
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(sel) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, sel);
        b.swap(row, sel);
        let inv = a[row][col].inv();
        for c in 0..ncols {
            a[row][c] = a[row][c].mul(&inv);
        }
        b[row] = b[row].mul(&inv);
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..ncols {
                    let t = a[row][c].mul(&f);
                    a[r][c] = a[r][c].sub(&t);
                }
                let t = b[row].mul(&f);
                b[r] = b[r].sub(&t);
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // consistency
    for r in row..nrows {
        if !b[r].is_zero() {
            return None;
        }
    }
    let mut x = vec![field.zero(); ncols];
    for (c, piv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = piv {
            x[c] = b[*r].clone();
        }
    }
    Some(x)
}

/// Convenience constructors for the derivations the corpus uses.
pub mod build {
    use super::*;

    /// M itself finite length: M ⊕ 0 ≅ M ⊕ 0 with L = M, P = 0.
    pub fn fl_base(ring: &Ring, m: &PresentedModule) -> Result<Derivation> {
        let zero = PresentedModule::zero(ring);
        let (sum, _, _) = direct_sum(ring, &[m.clone(), zero.clone()])?;
        let id = ModuleMap::identity(&sum);
        Ok(Derivation::Base {
            module: m.clone(),
            split: AddSplit {
                m_prime: zero.clone(),
                l: m.clone(),
                p: zero,
                to_lp: id.clone(),
                from_lp: id,
            },
        })
    }

    /// M free (or of certified pd ≤ n): L = 0, P = M.
    pub fn pd_base(ring: &Ring, m: &PresentedModule) -> Result<Derivation> {
        let zero = PresentedModule::zero(ring);
        let (sum, _, _) = direct_sum(ring, &[m.clone(), zero.clone()])?;
        let id = ModuleMap::identity(&sum);
        Ok(Derivation::Base {
            module: m.clone(),
            split: AddSplit {
                m_prime: zero.clone(),
                l: zero,
                p: m.clone(),
                to_lp: id.clone(),
                from_lp: id,
            },
        })
    }

    /// M = F ⊕ G presented block-diagonally, with F finite length and G of
    /// bounded projective dimension: the swap-free base split.
    pub fn sum_base(
        ring: &Ring,
        m: &PresentedModule,
        fl_part: &PresentedModule,
        pd_part: &PresentedModule,
    ) -> Result<Derivation> {
        let (expect, _, _) = direct_sum(ring, &[fl_part.clone(), pd_part.clone()])?;
        if !m.canon_eq(&expect) {
            return Err(Error::usage(
                "sum_base needs M presented as fl_part ⊕ pd_part".to_string(),
            ));
        }
        let zero = PresentedModule::zero(ring);
        let (sum, _, _) = direct_sum(ring, &[m.clone(), zero.clone()])?;
        let id = ModuleMap::identity(&sum);
        Ok(Derivation::Base {
            module: m.clone(),
            split: AddSplit {
                m_prime: zero,
                l: fl_part.clone(),
                p: pd_part.clone(),
                to_lp: id.clone(),
                from_lp: id,
            },
        })
    }

    /// An extension step 0 → X → M ⊕ M' → Y → 0 from explicit data.
    pub fn step(
        module: &PresentedModule,
        m_prime: &PresentedModule,
        x: Derivation,
        x_to_mid: ModuleMap,
        mid_to_y: ModuleMap,
        y: AddSplit,
    ) -> Derivation {
        Derivation::Step {
            module: module.clone(),
            m_prime: m_prime.clone(),
            x: Box::new(x),
            x_to_mid,
            mid_to_y,
            y,
        }
    }

    /// AddSplit for Y itself finite length (L = Y, P = 0).
    pub fn fl_split(ring: &Ring, y: &PresentedModule) -> Result<AddSplit> {
        let zero = PresentedModule::zero(ring);
        let (sum, _, _) = direct_sum(ring, &[y.clone(), zero.clone()])?;
        let id = ModuleMap::identity(&sum);
        Ok(AddSplit { m_prime: zero.clone(), l: y.clone(), p: zero, to_lp: id.clone(), from_lp: id })
    }

    /// AddSplit for Y of bounded projective dimension (L = 0, P = Y);
    /// needs the zero-leading presentation L ⊕ P = 0 ⊕ Y = Y.
    pub fn pd_split(ring: &Ring, y: &PresentedModule) -> Result<AddSplit> {
        let zero = PresentedModule::zero(ring);
        let (sum, _, _) = direct_sum(ring, &[y.clone(), zero.clone()])?;
        let (lp, _, _) = direct_sum(ring, &[zero.clone(), y.clone()])?;
        // generator order is unchanged (the zero block is empty), so the
        // identity matrix is the isomorphism
        let to_lp = ModuleMap::new(sum.clone(), lp.clone(), Matrix::identity(ring, y.ngens));
        let from_lp = ModuleMap::new(lp, sum, Matrix::identity(ring, y.ngens));
        Ok(AddSplit { m_prime: zero.clone(), l: zero, p: y.clone(), to_lp, from_lp })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::koszul::depth as module_depth;
    use crate::monomial::MonomialOrder;
    use crate::parse::parse_poly;
    use crate::ring::{quotient_ring, AmbientRing};

    fn a1_surface() -> Ring {
        let amb = AmbientRing::new(
            vec!["x".into(), "y".into(), "z".into()],
            FieldSpec::prime_field(5).unwrap(),
            MonomialOrder::GrevLex,
        );
        quotient_ring(amb.clone(), vec![parse_poly(&amb, "x^2 + y^2 + z^2").unwrap()]).unwrap()
    }

    fn pp(ring: &Ring, s: &str) -> Poly {
        parse_poly(&ring.ambient, s).unwrap()
    }

    fn residue_field(ring: &Ring) -> PresentedModule {
        PresentedModule::cyclic(ring, &[pp(ring, "x"), pp(ring, "y"), pp(ring, "z")])
            .with_degrees(vec![0])
    }

    #[test]
    fn ring_depth_of_a1_is_two() {
        let r = a1_surface();
        assert_eq!(ring_depth(&r).unwrap(), 2);
    }

    #[test]
    fn base_case_fl_at_minus_one() {
        let r = a1_surface();
        let k = residue_field(&r);
        let d = build::fl_base(&r, &k).unwrap();
        let out = decompose_tier(&r, &d, -1, 2).unwrap();
        assert!(out.p.is_zero_module());
        assert!(crate::module::is_exact(&out.seq));
    }

    #[test]
    fn base_case_k_plus_r_at_zero() {
        let r = a1_surface();
        let k = residue_field(&r);
        let free = PresentedModule::free(&r, 1).with_degrees(vec![0]);
        let (m, _, _) = direct_sum(&r, &[k.clone(), free.clone()]).unwrap();
        let d = build::sum_base(&r, &m, &k, &free).unwrap();
        let out = decompose_tier(&r, &d, 0, 2).unwrap();
        assert_eq!(out.l.ngens, k.ngens);
        assert!(crate::module::is_exact(&out.seq));
    }

    #[test]
    fn step_case_free_module_has_zero_alpha() {
        let r = a1_surface();
        let k = residue_field(&r);
        let free = PresentedModule::free(&r, 1).with_degrees(vec![0]);
        // 0 → k → R ⊕ k → R → 0 with M = R leading the middle
        let (mid, _, _) = direct_sum(&r, &[free.clone(), k.clone()]).unwrap();
        let x_to_mid = ModuleMap::new(
            k.clone(),
            mid.clone(),
            Matrix::from_rows(vec![vec![Poly::zero()], vec![r.ambient.one()]]),
        );
        let mid_to_y = ModuleMap::new(
            mid.clone(),
            free.clone(),
            Matrix::from_rows(vec![vec![r.ambient.one(), Poly::zero()]]),
        );
        let x = build::fl_base(&r, &k).unwrap();
        let y = build::pd_split(&r, &free).unwrap();
        let d = build::step(&free, &k, x, x_to_mid, mid_to_y, y);
        let out = decompose_tier(&r, &d, 0, 2).unwrap();
        // M = R has positive depth, so the component L → M must vanish
        assert_eq!(
            module_depth(&free, &[pp(&r, "x"), pp(&r, "y"), pp(&r, "z")]).unwrap(),
            Depth::Finite(2)
        );
        let alpha = out.alpha_map(&free);
        assert!(alpha.is_zero_map());
    }

    #[test]
    fn step_case_nonsplit_extension_of_k_by_k() {
        let r = a1_surface();
        let k = residue_field(&r);
        // E = R/(x, y, z^2): 0 → k →·z→ E → k → 0
        let e = PresentedModule::cyclic(&r, &[pp(&r, "x"), pp(&r, "y"), pp(&r, "z^2")])
            .with_degrees(vec![0]);
        let (mid, _, _) = direct_sum(&r, &[e.clone(), PresentedModule::zero(&r)]).unwrap();
        let x_to_mid = ModuleMap::new(
            k.clone(),
            mid.clone(),
            Matrix::from_rows(vec![vec![pp(&r, "z")]]),
        );
        let mid_to_y = ModuleMap::new(mid.clone(), k.clone(), Matrix::identity(&r, 1));
        let x = build::fl_base(&r, &k).unwrap();
        let y = build::fl_split(&r, &k).unwrap();
        let d = build::step(&e, &PresentedModule::zero(&r), x, x_to_mid, mid_to_y, y);
        let out = decompose_tier(&r, &d, 0, 2).unwrap();
        assert!(crate::module::is_exact(&out.seq));
        // both outer terms collapse to finite length; P stays zero-ish free
        let ann = annihilator(&out.l).unwrap();
        assert!(ann.dim() <= 0);
    }

    #[test]
    fn range_check() {
        let r = a1_surface();
        let k = residue_field(&r);
        let d = build::fl_base(&r, &k).unwrap();
        assert!(decompose_tier(&r, &d, 1, 2).is_err());
        assert!(decompose_tier(&r, &d, -2, 2).is_err());
    }
}
