//! Singular locus via the Jacobian criterion, its codimension, and
//! support-in-Sing tests for modules.

use crate::error::{Error, Result};
use crate::ideal::{radical_membership, Ideal};
use crate::module::{annihilator, PresentedModule};
use crate::poly::Poly;
use crate::ring::Ring;

/// Codimension of the singular locus: sup of heights of regular primes,
/// −1 when the regular locus is empty. Outside the corpus classes the
/// exact value may be undecidable without primary decomposition; then a
/// justified bracket is reported instead of a possibly wrong number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodimSing {
    Exact(i64),
    Range(i64, i64),
}

impl CodimSing {
    pub fn exact(&self) -> Option<i64> {
        match self {
            CodimSing::Exact(c) => Some(*c),
            CodimSing::Range(..) => None,
        }
    }
}

#[derive(Debug)]
pub struct SingularityData {
    pub ring: Ring,
    pub sing_ideal: Ideal,
    pub codim: CodimSing,
    pub isolated: bool,
}

fn ensure_equidimensional(ring: &Ring) -> Result<()> {
    match ring.equidimensional() {
        Some(true) => Ok(()),
        Some(false) | None => Err(Error::NotEquidimensional(format!(
            "singular-locus analysis over {} needs an equidimensional defining ideal",
            ring.describe()
        ))),
    }
}

/// Defining ideal plus all c₀×c₀ minors of the Jacobian of its reduced
/// Gröbner basis, c₀ the codimension of the defining ideal. Its vanishing
/// locus is Sing R on the corpus (perfect field, generically smooth
/// equidimensional input).
pub fn sing_ideal(ring: &Ring) -> Result<Ideal> {
    ensure_equidimensional(ring)?;
    let amb = &ring.ambient;
    let n = amb.nvars();
    let c0 = (n as i64 - ring.dim()) as usize;
    if c0 == 0 {
        return Ok(Ideal::unit(ring));
    }
    let gens = &ring.defining_gb;
    // Jacobian: rows = defining relations, columns = variables
    let jac: Vec<Vec<Poly>> = gens
        .iter()
        .map(|g| (0..n).map(|i| amb.derivative(g, i)).collect())
        .collect();
    let mut out: Vec<Poly> = gens.clone();
    let row_sets = combinations(gens.len(), c0);
    let col_sets = combinations(n, c0);
    for rs in &row_sets {
        for cs in &col_sets {
            let minor = determinant(ring, &jac, rs, cs);
            if !minor.is_zero() {
                out.push(minor);
            }
        }
    }
    Ok(Ideal::new(ring, out))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn determinant(ring: &Ring, m: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Poly {
    let amb = &ring.ambient;
    if rows.is_empty() {
        return amb.one();
    }
    if rows.len() == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    // Laplace expansion along the first row; minors stay tiny here.
    let mut acc = Poly::zero();
    let r0 = rows[0];
    let rest_rows = &rows[1..];
    for (j, &c) in cols.iter().enumerate() {
        let e = &m[r0][c];
        if e.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|(jj, _)| *jj != j)
            .map(|(_, &cc)| cc)
            .collect();
        let sub = determinant(ring, m, rest_rows, &sub_cols);
        let term = amb.mul(e, &sub);
        acc = if j % 2 == 0 {
            amb.add(&acc, &term)
        } else {
            amb.sub(&acc, &term)
        };
    }
    ring.nf(&acc)
}

/// Codimension of Sing R over the decidable corpus classes; see the enum
/// docs for the bracket fallback.
pub fn codim_sing(ring: &Ring) -> Result<CodimSing> {
    let sing = sing_ideal(ring)?;
    codim_from_sing(ring, &sing)
}

fn codim_from_sing(ring: &Ring, sing: &Ideal) -> Result<CodimSing> {
    let d = ring.dim();
    if sing.is_unit() {
        // regular ring: every prime is regular
        return Ok(CodimSing::Exact(d));
    }
    // Sing = Spec iff the singular ideal is nilpotent in R
    let defining = Ideal::zero(ring);
    if sing.gens.iter().all(|g| radical_membership(g, &defining)) {
        return Ok(CodimSing::Exact(-1));
    }
    // if V(sing) has lower dimension than every (equidimensional)
    // component, each component carries a regular closed point of full
    // height
    if sing.dim() < d {
        return Ok(CodimSing::Exact(d));
    }
    Ok(CodimSing::Range(-1, d))
}

/// Over the graded corpus: R is singular and √(sing ideal) is the
/// irrelevant maximal ideal, with Sing a proper subset of Spec.
pub fn is_isolated_singularity(ring: &Ring) -> Result<bool> {
    let sing = sing_ideal(ring)?;
    if sing.is_unit() {
        return Ok(false); // regular
    }
    let codim = codim_from_sing(ring, &sing)?;
    if codim == CodimSing::Exact(-1) {
        return Ok(false); // singular everywhere
    }
    let amb = &ring.ambient;
    for i in 0..amb.nvars() {
        if !radical_membership(&amb.var(i), &sing) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Supp M ⊆ Sing R, decided as sing_ideal ⊆ √(Ann M) by radical
/// membership of each singular-ideal generator.
pub fn supported_in_sing(m: &PresentedModule) -> Result<bool> {
    let sing = sing_ideal(&m.ring)?;
    let ann = annihilator(m)?;
    for g in &sing.gens {
        if !radical_membership(g, &ann) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn analyze(ring: &Ring) -> Result<SingularityData> {
    let sing = sing_ideal(ring)?;
    let codim = codim_from_sing(ring, &sing)?;
    let isolated = is_isolated_singularity(ring)?;
    Ok(SingularityData { ring: ring.clone(), sing_ideal: sing, codim, isolated })
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

    fn cusp() -> Ring {
        let amb = f5(&["x", "y"]).with_weights(vec![2, 3]);
        quotient_ring(amb.clone(), vec![parse_poly(&amb, "y^2 - x^3").unwrap()]).unwrap()
    }

    fn a1_surface() -> Ring {
        let amb = f5(&["x", "y", "z"]);
        quotient_ring(amb.clone(), vec![parse_poly(&amb, "x^2 + y^2 + z^2").unwrap()]).unwrap()
    }

    #[test]
    fn regular_ring_has_unit_sing_ideal() {
        let r = polynomial_ring(f5(&["x", "y"]));
        let s = sing_ideal(&r).unwrap();
        assert!(s.is_unit());
        assert_eq!(codim_sing(&r).unwrap(), CodimSing::Exact(2));
        assert!(!is_isolated_singularity(&r).unwrap());
    }

    #[test]
    fn cusp_singular_locus_is_the_origin() {
        let r = cusp();
        let s = sing_ideal(&r).unwrap();
        let x = parse_poly(&r.ambient, "x").unwrap();
        let y = parse_poly(&r.ambient, "y").unwrap();
        assert!(radical_membership(&x, &s));
        assert!(radical_membership(&y, &s));
        assert!(!s.is_unit());
        assert_eq!(codim_sing(&r).unwrap(), CodimSing::Exact(1));
        assert!(is_isolated_singularity(&r).unwrap());
    }

    #[test]
    fn a1_surface_singular_locus() {
        let r = a1_surface();
        let s = sing_ideal(&r).unwrap();
        for v in ["x", "y", "z"] {
            assert!(radical_membership(&parse_poly(&r.ambient, v).unwrap(), &s));
        }
        assert_eq!(codim_sing(&r).unwrap(), CodimSing::Exact(2));
        assert!(is_isolated_singularity(&r).unwrap());
    }

    #[test]
    fn everywhere_singular_line() {
        let amb = f5(&["x"]);
        let r = quotient_ring(amb.clone(), vec![parse_poly(&amb, "x^2").unwrap()]).unwrap();
        assert_eq!(codim_sing(&r).unwrap(), CodimSing::Exact(-1));
        assert!(!is_isolated_singularity(&r).unwrap());
    }

    #[test]
    fn support_tests() {
        let r = cusp();
        // the zero module is supported everywhere-vacuously
        let zero = PresentedModule::zero(&r);
        assert!(supported_in_sing(&zero).unwrap());
        // k = R/(x,y) sits at the singular point
        let k = PresentedModule::cyclic(
            &r,
            &[
                parse_poly(&r.ambient, "x").unwrap(),
                parse_poly(&r.ambient, "y").unwrap(),
            ],
        );
        assert!(supported_in_sing(&k).unwrap());
        // R itself is supported on all of Spec, which meets Reg
        let free = PresentedModule::free(&r, 1);
        assert!(!supported_in_sing(&free).unwrap());
        // a cyclic module at a smooth point is not supported in Sing
        let smooth = PresentedModule::cyclic(
            &r,
            &[
                parse_poly(&r.ambient, "x - 1").unwrap(),
                parse_poly(&r.ambient, "y - 1").unwrap(),
            ],
        );
        assert!(!supported_in_sing(&smooth).unwrap());
    }
}
