//! The tier-certificate data model, its structural tier-index semantics,
//! and the canonical JSON serialization.
//!
//! A certificate is a tree of steps, each carrying the presentation of the
//! module it derives. Tier indices are never stored per node; they are a
//! pure structural recomputation. On disk the format is UTF-8 JSON with
//! sorted object keys, no insignificant whitespace, and polynomials as
//! canonical strings, so equal certificates have equal bytes.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ideal::Ideal;
use crate::module::{Matrix, PresentedModule};
use crate::monomial::MonomialOrder;
use crate::parse::parse_poly;
use crate::poly::Poly;
use crate::ring::{polynomial_ring, quotient_ring, Ring};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct CertNode {
    pub module: PresentedModule,
    pub step: StepKind,
}

#[derive(Clone, Debug)]
pub enum StepKind {
    /// R/p for a prime p contained in the singular locus.
    LeafSingPrime { prime: Vec<Poly> },
    /// The zero module; the base object of every tier.
    Zero,
    /// 0 → sub → M → quotient → 0.
    Extension { sub: Box<CertNode>, quotient: Box<CertNode>, first: Matrix, second: Matrix },
    /// M is a direct summand of the ambient module, with an explicit
    /// retraction splitting the inclusion.
    Summand { ambient: Box<CertNode>, inclusion: Matrix, retraction: Matrix },
    /// 0 → kernel → R^middle_rank → M → 0.
    Cosyzygy { kernel: Box<CertNode>, middle_rank: usize, first: Matrix, second: Matrix },
    /// M ≅ of, with explicit mutually inverse maps (forward: of → M).
    Isomorphism { of: Box<CertNode>, forward: Matrix, inverse: Matrix },
}

#[derive(Clone, Debug)]
pub struct TierCertificate {
    pub ring: Ring,
    pub root: CertNode,
    pub claimed_tier: i64,
}

/// Structural tier index: leaves sit at −1, extensions/summands/
/// isomorphisms preserve the maximum, a cosyzygy increments its kernel's
/// index, floored at 0.
pub fn tier_index(node: &CertNode) -> i64 {
    match &node.step {
        StepKind::LeafSingPrime { .. } | StepKind::Zero => -1,
        StepKind::Extension { sub, quotient, .. } => tier_index(sub).max(tier_index(quotient)),
        StepKind::Summand { ambient, .. } => tier_index(ambient),
        StepKind::Cosyzygy { kernel, .. } => (tier_index(kernel) + 1).max(0),
        StepKind::Isomorphism { of, .. } => tier_index(of),
    }
}

/// Extension depth within the current tier level: the m of |S|_m. Leaves
/// start at 1, extensions add, summands and isomorphisms preserve, and a
/// cosyzygy resets the count for the next level.
pub fn extension_depth(node: &CertNode) -> u64 {
    match &node.step {
        StepKind::LeafSingPrime { .. } | StepKind::Zero => 1,
        StepKind::Extension { sub, quotient, .. } => {
            extension_depth(sub) + extension_depth(quotient)
        }
        StepKind::Summand { ambient, .. } => extension_depth(ambient),
        StepKind::Cosyzygy { .. } => 1,
        StepKind::Isomorphism { of, .. } => extension_depth(of),
    }
}

// ---------------------------------------------------------------------
// serialized form
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RingDesc {
    pub field: String,
    pub vars: Vec<String>,
    pub order: String,
    pub weights: Vec<u64>,
    pub quotient: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModuleDesc {
    pub generators: usize,
    /// Row-major: relations[i][j] = coefficient of generator i in relation j.
    pub relations: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i64>>,
}

pub type MatrixDesc = Vec<Vec<String>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepDesc {
    LeafSingPrime {
        prime: Vec<String>,
    },
    Zero {},
    Extension {
        sub: Box<NodeDesc>,
        quotient: Box<NodeDesc>,
        first: MatrixDesc,
        second: MatrixDesc,
    },
    Summand {
        ambient: Box<NodeDesc>,
        inclusion: MatrixDesc,
        retraction: MatrixDesc,
    },
    Cosyzygy {
        kernel: Box<NodeDesc>,
        middle_rank: usize,
        first: MatrixDesc,
        second: MatrixDesc,
    },
    Isomorphism {
        of: Box<NodeDesc>,
        forward: MatrixDesc,
        inverse: MatrixDesc,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NodeDesc {
    pub module: ModuleDesc,
    pub step: StepDesc,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertDesc {
    pub ring: RingDesc,
    pub root_module: ModuleDesc,
    pub step: StepDesc,
    pub claimed_tier: i64,
}

pub fn ring_to_desc(ring: &Ring) -> RingDesc {
    let amb = &ring.ambient;
    RingDesc {
        field: amb.field.label(),
        vars: amb.vars.clone(),
        order: amb.order.label(),
        weights: amb.weights.clone(),
        quotient: ring.defining_gb.iter().map(|g| amb.poly_string(g)).collect(),
    }
}

pub fn ring_from_desc(desc: &RingDesc) -> Result<Ring> {
    let field = FieldSpec::parse_label(&desc.field)?;
    let order = MonomialOrder::parse_label(&desc.order)
        .ok_or_else(|| Error::usage(format!("unknown monomial order `{}`", desc.order)))?;
    if desc.vars.is_empty() {
        return Err(Error::usage("ring needs at least one variable".to_string()));
    }
    if desc.weights.len() != desc.vars.len() || desc.weights.iter().any(|&w| w == 0) {
        return Err(Error::usage("ring weights must be positive, one per variable".to_string()));
    }
    let amb = crate::ring::AmbientRing::new(desc.vars.clone(), field, order)
        .with_weights(desc.weights.clone());
    let gens: Result<Vec<Poly>> = desc.quotient.iter().map(|s| parse_poly(&amb, s)).collect();
    quotient_ring_or_poly(amb, gens?)
}

fn quotient_ring_or_poly(amb: crate::ring::AmbientRing, gens: Vec<Poly>) -> Result<Ring> {
    if gens.is_empty() {
        Ok(polynomial_ring(amb))
    } else {
        quotient_ring(amb, gens)
    }
}

pub fn module_to_desc(m: &PresentedModule) -> ModuleDesc {
    let amb = &m.ring.ambient;
    let relations = (0..m.rels.rows)
        .map(|r| {
            (0..m.rels.cols)
                .map(|c| amb.poly_string(m.rels.get(r, c)))
                .collect()
        })
        .collect();
    ModuleDesc { generators: m.ngens, relations, degrees: m.degrees.clone() }
}

pub fn module_from_desc(ring: &Ring, desc: &ModuleDesc) -> Result<PresentedModule> {
    if desc.relations.len() != desc.generators && !desc.relations.is_empty() {
        return Err(Error::usage(format!(
            "module presentation has {} relation rows for {} generators",
            desc.relations.len(),
            desc.generators
        )));
    }
    let ncols = desc.relations.first().map(|r| r.len()).unwrap_or(0);
    let mut mat = Matrix::zero(desc.generators, ncols);
    for (r, row) in desc.relations.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::usage("ragged relation matrix".to_string()));
        }
        for (c, s) in row.iter().enumerate() {
            mat.set(r, c, parse_poly(&ring.ambient, s)?);
        }
    }
    let mut m = PresentedModule::new(ring, desc.generators, mat);
    if let Some(d) = &desc.degrees {
        if d.len() != desc.generators {
            return Err(Error::usage("degree list length mismatch".to_string()));
        }
        m = m.with_degrees(d.clone());
    }
    Ok(m)
}

pub fn matrix_to_desc(ring: &Ring, m: &Matrix) -> MatrixDesc {
    (0..m.rows)
        .map(|r| {
            (0..m.cols)
                .map(|c| ring.ambient.poly_string(m.get(r, c)))
                .collect()
        })
        .collect()
}

pub fn matrix_from_desc(ring: &Ring, desc: &MatrixDesc, rows: usize, cols: usize) -> Result<Matrix> {
    if desc.len() != rows && !(desc.is_empty() && rows == 0) {
        return Err(Error::usage(format!(
            "matrix has {} rows, expected {rows}",
            desc.len()
        )));
    }
    let mut m = Matrix::zero(rows, cols);
    for (r, row) in desc.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::usage(format!(
                "matrix row {r} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (c, s) in row.iter().enumerate() {
            m.set(r, c, parse_poly(&ring.ambient, s)?);
        }
    }
    Ok(m)
}

fn node_to_desc(ring: &Ring, node: &CertNode) -> NodeDesc {
    NodeDesc {
        module: module_to_desc(&node.module),
        step: step_to_desc(ring, &node.step),
    }
}

fn step_to_desc(ring: &Ring, step: &StepKind) -> StepDesc {
    match step {
        StepKind::LeafSingPrime { prime } => StepDesc::LeafSingPrime {
            prime: prime.iter().map(|g| ring.ambient.poly_string(g)).collect(),
        },
        StepKind::Zero => StepDesc::Zero {},
        StepKind::Extension { sub, quotient, first, second } => StepDesc::Extension {
            sub: Box::new(node_to_desc(ring, sub)),
            quotient: Box::new(node_to_desc(ring, quotient)),
            first: matrix_to_desc(ring, first),
            second: matrix_to_desc(ring, second),
        },
        StepKind::Summand { ambient, inclusion, retraction } => StepDesc::Summand {
            ambient: Box::new(node_to_desc(ring, ambient)),
            inclusion: matrix_to_desc(ring, inclusion),
            retraction: matrix_to_desc(ring, retraction),
        },
        StepKind::Cosyzygy { kernel, middle_rank, first, second } => StepDesc::Cosyzygy {
            kernel: Box::new(node_to_desc(ring, kernel)),
            middle_rank: *middle_rank,
            first: matrix_to_desc(ring, first),
            second: matrix_to_desc(ring, second),
        },
        StepKind::Isomorphism { of, forward, inverse } => StepDesc::Isomorphism {
            of: Box::new(node_to_desc(ring, of)),
            forward: matrix_to_desc(ring, forward),
            inverse: matrix_to_desc(ring, inverse),
        },
    }
}

fn node_from_desc(ring: &Ring, desc: &NodeDesc, path: &str) -> Result<CertNode> {
    let module = module_from_desc(ring, &desc.module).map_err(|e| Error::Structure {
        path: format!("{path}.module"),
        msg: e.to_string(),
    })?;
    let step = step_from_desc(ring, &desc.step, &module, path)?;
    Ok(CertNode { module, step })
}

fn step_from_desc(
    ring: &Ring,
    desc: &StepDesc,
    module: &PresentedModule,
    path: &str,
) -> Result<StepKind> {
    let wrap = |p: String, e: Error| Error::Structure { path: p, msg: e.to_string() };
    match desc {
        StepDesc::LeafSingPrime { prime } => {
            let gens: Result<Vec<Poly>> = prime
                .iter()
                .map(|s| parse_poly(&ring.ambient, s))
                .collect();
            Ok(StepKind::LeafSingPrime {
                prime: gens.map_err(|e| wrap(format!("{path}.prime"), e))?,
            })
        }
        StepDesc::Zero {} => Ok(StepKind::Zero),
        StepDesc::Extension { sub, quotient, first, second } => {
            let sub = node_from_desc(ring, sub, &format!("{path}.sub"))?;
            let quotient = node_from_desc(ring, quotient, &format!("{path}.quotient"))?;
            let first = matrix_from_desc(ring, first, module.ngens, sub.module.ngens)
                .map_err(|e| wrap(format!("{path}.first"), e))?;
            let second = matrix_from_desc(ring, second, quotient.module.ngens, module.ngens)
                .map_err(|e| wrap(format!("{path}.second"), e))?;
            Ok(StepKind::Extension {
                sub: Box::new(sub),
                quotient: Box::new(quotient),
                first,
                second,
            })
        }
        StepDesc::Summand { ambient, inclusion, retraction } => {
            let ambient = node_from_desc(ring, ambient, &format!("{path}.ambient"))?;
            let inclusion = matrix_from_desc(ring, inclusion, ambient.module.ngens, module.ngens)
                .map_err(|e| wrap(format!("{path}.inclusion"), e))?;
            let retraction = matrix_from_desc(ring, retraction, module.ngens, ambient.module.ngens)
                .map_err(|e| wrap(format!("{path}.retraction"), e))?;
            Ok(StepKind::Summand { ambient: Box::new(ambient), inclusion, retraction })
        }
        StepDesc::Cosyzygy { kernel, middle_rank, first, second } => {
            let kernel = node_from_desc(ring, kernel, &format!("{path}.kernel"))?;
            let first = matrix_from_desc(ring, first, *middle_rank, kernel.module.ngens)
                .map_err(|e| wrap(format!("{path}.first"), e))?;
            let second = matrix_from_desc(ring, second, module.ngens, *middle_rank)
                .map_err(|e| wrap(format!("{path}.second"), e))?;
            Ok(StepKind::Cosyzygy {
                kernel: Box::new(kernel),
                middle_rank: *middle_rank,
                first,
                second,
            })
        }
        StepDesc::Isomorphism { of, forward, inverse } => {
            let of = node_from_desc(ring, of, &format!("{path}.of"))?;
            let forward = matrix_from_desc(ring, forward, module.ngens, of.module.ngens)
                .map_err(|e| wrap(format!("{path}.forward"), e))?;
            let inverse = matrix_from_desc(ring, inverse, of.module.ngens, module.ngens)
                .map_err(|e| wrap(format!("{path}.inverse"), e))?;
            Ok(StepKind::Isomorphism { of: Box::new(of), forward, inverse })
        }
    }
}

pub fn to_desc(cert: &TierCertificate) -> CertDesc {
    CertDesc {
        ring: ring_to_desc(&cert.ring),
        root_module: module_to_desc(&cert.root.module),
        step: step_to_desc(&cert.ring, &cert.root.step),
        claimed_tier: cert.claimed_tier,
    }
}

pub fn from_desc(desc: &CertDesc) -> Result<TierCertificate> {
    let ring = ring_from_desc(&desc.ring)?;
    let module = module_from_desc(&ring, &desc.root_module).map_err(|e| Error::Structure {
        path: "root_module".to_string(),
        msg: e.to_string(),
    })?;
    let step = step_from_desc(&ring, &desc.step, &module, "step")?;
    Ok(TierCertificate {
        ring,
        root: CertNode { module, step },
        claimed_tier: desc.claimed_tier,
    })
}

/// Canonical bytes: sorted object keys, compact separators, canonical
/// polynomial strings.
pub fn to_canonical_json(cert: &TierCertificate) -> String {
    let desc = to_desc(cert);
    let value = serde_json::to_value(&desc).expect("certificate serialization");
    serde_json::to_string(&value).expect("certificate serialization")
}

pub fn from_json_str(s: &str) -> Result<TierCertificate> {
    let desc: CertDesc = serde_json::from_str(s).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    from_desc(&desc)
}

/// Serialize-then-parse; the result must be structurally identical.
pub fn roundtrip(cert: &TierCertificate) -> Result<TierCertificate> {
    from_json_str(&to_canonical_json(cert))
}

/// Convenience: the leaf prime of a node as an Ideal.
pub fn leaf_prime_ideal(ring: &Ring, gens: &[Poly]) -> Ideal {
    Ideal::new(ring, gens.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::monomial::MonomialOrder;
    use crate::ring::AmbientRing;

    fn cusp() -> Ring {
        let amb = AmbientRing::new(
            vec!["x".into(), "y".into()],
            FieldSpec::prime_field(5).unwrap(),
            MonomialOrder::GrevLex,
        )
        .with_weights(vec![2, 3]);
        let j = parse_poly(&amb, "y^2 - x^3").unwrap();
        quotient_ring(amb, vec![j]).unwrap()
    }

    fn leaf_cert(ring: &Ring) -> TierCertificate {
        let gens = vec![
            parse_poly(&ring.ambient, "x").unwrap(),
            parse_poly(&ring.ambient, "y").unwrap(),
        ];
        let module = PresentedModule::cyclic(ring, &gens);
        let root = CertNode { module, step: StepKind::LeafSingPrime { prime: gens } };
        let claimed = tier_index(&root);
        TierCertificate { ring: ring.clone(), root, claimed_tier: claimed }
    }

    #[test]
    fn tier_index_rules() {
        let ring = cusp();
        let leaf = leaf_cert(&ring);
        assert_eq!(tier_index(&leaf.root), -1);
        // cosyzygy over a leaf lands at 0
        let cos = CertNode {
            module: PresentedModule::free(&ring, 1),
            step: StepKind::Cosyzygy {
                kernel: Box::new(leaf.root.clone()),
                middle_rank: 1,
                first: Matrix::zero(1, 1),
                second: Matrix::identity(&ring, 1),
            },
        };
        assert_eq!(tier_index(&cos), 0);
        // extension of two leaves stays at -1 and has depth 2
        let ext = CertNode {
            module: PresentedModule::free(&ring, 2),
            step: StepKind::Extension {
                sub: Box::new(leaf.root.clone()),
                quotient: Box::new(leaf.root.clone()),
                first: Matrix::zero(2, 1),
                second: Matrix::zero(1, 2),
            },
        };
        assert_eq!(tier_index(&ext), -1);
        assert_eq!(extension_depth(&ext), 2);
        assert_eq!(extension_depth(&cos), 1);
    }

    #[test]
    fn extension_depth_composition_law() {
        // grafting extensions of depth m and m' yields depth m + m'
        let ring = cusp();
        let leaf = leaf_cert(&ring).root;
        let pair = CertNode {
            module: PresentedModule::free(&ring, 2),
            step: StepKind::Extension {
                sub: Box::new(leaf.clone()),
                quotient: Box::new(leaf.clone()),
                first: Matrix::zero(2, 1),
                second: Matrix::zero(1, 2),
            },
        };
        let triple = CertNode {
            module: PresentedModule::free(&ring, 3),
            step: StepKind::Extension {
                sub: Box::new(pair.clone()),
                quotient: Box::new(leaf.clone()),
                first: Matrix::zero(3, 2),
                second: Matrix::zero(1, 3),
            },
        };
        assert_eq!(
            extension_depth(&triple),
            extension_depth(&pair) + extension_depth(&leaf)
        );
    }

    #[test]
    fn canonical_json_roundtrips() {
        let cert = leaf_cert(&cusp());
        let json = to_canonical_json(&cert);
        let back = roundtrip(&cert).unwrap();
        assert_eq!(json, to_canonical_json(&back));
        // canonical form is stable under reserialization of parsed json
        let reparsed = from_json_str(&json).unwrap();
        assert_eq!(json, to_canonical_json(&reparsed));
    }

    #[test]
    fn canonical_json_has_sorted_keys_and_no_whitespace() {
        let cert = leaf_cert(&cusp());
        let json = to_canonical_json(&cert);
        assert!(!json.contains(": "));
        let ci = json.find("\"claimed_tier\"").unwrap();
        let ri = json.find("\"ring\"").unwrap();
        assert!(ci < ri, "top-level keys must be sorted");
    }

    #[test]
    fn unknown_step_kind_is_a_parse_error() {
        let cert = leaf_cert(&cusp());
        let json = to_canonical_json(&cert).replace("leaf_sing_prime", "mystery_step");
        assert!(from_json_str(&json).is_err());
    }
}
