//! Independent certificate verifier.
//!
//! Trusts nothing from the builder: every Gröbner basis, kernel, and
//! exactness fact is re-derived here from the raw matrices in the
//! certificate. Only the kernel modules (ring, ideal, module, singularity)
//! are used; builder state is never consulted.

use crate::cert::{leaf_prime_ideal, tier_index, CertNode, StepKind, TierCertificate};
use crate::ideal::{is_prime, Primality};
use crate::module::{
    exactness_failures, ExactSequenceWitness, ModuleMap, PresentedModule,
};
use crate::ring::Ring;
use crate::singularity::supported_in_sing;

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub accepted: bool,
    pub failures: Vec<(String, String)>,
}

impl VerifyReport {
    pub fn render(&self) -> String {
        if self.accepted {
            "accepted".to_string()
        } else {
            let mut out = String::from("rejected\n");
            for (path, reason) in &self.failures {
                out.push_str(&format!("  {path}: {reason}\n"));
            }
            out
        }
    }
}

pub fn verify(cert: &TierCertificate) -> VerifyReport {
    let mut failures: Vec<(String, String)> = Vec::new();
    check_node(&cert.ring, &cert.root, "step", &mut failures);
    let computed = tier_index(&cert.root);
    if computed != cert.claimed_tier {
        failures.push((
            "claimed_tier".to_string(),
            format!("claimed tier {} but the structural index is {computed}", cert.claimed_tier),
        ));
    }
    failures.sort();
    failures.dedup();
    VerifyReport { accepted: failures.is_empty(), failures }
}

fn fail(failures: &mut Vec<(String, String)>, path: &str, msg: impl Into<String>) {
    failures.push((path.to_string(), msg.into()));
}

fn check_node(ring: &Ring, node: &CertNode, path: &str, failures: &mut Vec<(String, String)>) {
    match &node.step {
        StepKind::LeafSingPrime { prime } => {
            let p = leaf_prime_ideal(ring, prime);
            if p.is_unit() {
                fail(failures, path, "leaf prime is the unit ideal");
                return;
            }
            match is_prime(&p) {
                Ok(Primality::Prime(_)) => {}
                Ok(Primality::NotPrime { .. }) => {
                    fail(failures, path, "leaf ideal is not prime");
                }
                Ok(Primality::Undecided(reason)) => {
                    fail(failures, path, format!("leaf primality undecided: {reason}"));
                }
                Err(e) => fail(failures, path, format!("leaf primality check failed: {e}")),
            }
            let expected = PresentedModule::cyclic(ring, prime);
            if !node.module.canon_eq(&expected) {
                fail(failures, path, "leaf module is not the cyclic module of its prime");
            }
            match supported_in_sing(&node.module) {
                Ok(true) => {}
                Ok(false) => fail(failures, path, "leaf prime is not in the singular locus"),
                Err(e) => fail(failures, path, format!("support check failed: {e}")),
            }
        }
        StepKind::Zero => {
            if !node.module.is_zero_module() {
                fail(failures, path, "zero step on a nonzero module");
            }
        }
        StepKind::Extension { sub, quotient, first, second } => {
            let f = ModuleMap::new(sub.module.clone(), node.module.clone(), first.clone());
            let g = ModuleMap::new(node.module.clone(), quotient.module.clone(), second.clone());
            check_short_exact(&[f, g], path, failures);
            check_node(ring, sub, &format!("{path}.sub"), failures);
            check_node(ring, quotient, &format!("{path}.quotient"), failures);
        }
        StepKind::Summand { ambient, inclusion, retraction } => {
            let incl = ModuleMap::new(node.module.clone(), ambient.module.clone(), inclusion.clone());
            let retr = ModuleMap::new(ambient.module.clone(), node.module.clone(), retraction.clone());
            if incl.well_defined_violation().is_some() {
                fail(failures, path, "summand inclusion is ill-defined");
            }
            if retr.well_defined_violation().is_some() {
                fail(failures, path, "summand retraction is ill-defined");
            }
            if !retr.compose(&incl).is_identity_map() {
                fail(failures, path, "retraction does not split the inclusion");
            }
            check_node(ring, ambient, &format!("{path}.ambient"), failures);
        }
        StepKind::Cosyzygy { kernel, middle_rank, first, second } => {
            let middle = PresentedModule::free(ring, *middle_rank);
            let f = ModuleMap::new(kernel.module.clone(), middle.clone(), first.clone());
            let g = ModuleMap::new(middle, node.module.clone(), second.clone());
            check_short_exact(&[f, g], path, failures);
            check_node(ring, kernel, &format!("{path}.kernel"), failures);
        }
        StepKind::Isomorphism { of, forward, inverse } => {
            let fwd = ModuleMap::new(of.module.clone(), node.module.clone(), forward.clone());
            let inv = ModuleMap::new(node.module.clone(), of.module.clone(), inverse.clone());
            if fwd.well_defined_violation().is_some() {
                fail(failures, path, "forward map is ill-defined");
            }
            if inv.well_defined_violation().is_some() {
                fail(failures, path, "inverse map is ill-defined");
            }
            if !fwd.compose(&inv).is_identity_map() || !inv.compose(&fwd).is_identity_map() {
                fail(failures, path, "maps are not mutually inverse");
            }
            check_node(ring, of, &format!("{path}.of"), failures);
        }
    }
}

fn check_short_exact(maps: &[ModuleMap], path: &str, failures: &mut Vec<(String, String)>) {
    match ExactSequenceWitness::new(maps.to_vec()) {
        Ok(w) => {
            for reason in exactness_failures(&w) {
                fail(failures, path, format!("sequence not exact: {reason}"));
            }
        }
        Err(e) => fail(failures, path, format!("malformed sequence: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::{tier_index, StepKind, TierCertificate};
    use crate::field::FieldSpec;
    use crate::module::Matrix;
    use crate::monomial::MonomialOrder;
    use crate::parse::parse_poly;
    use crate::poly::Poly;
    use crate::ring::{quotient_ring, AmbientRing};

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

    fn pp(ring: &Ring, s: &str) -> Poly {
        parse_poly(&ring.ambient, s).unwrap()
    }

    fn singular_leaf(ring: &Ring) -> CertNode {
        let gens = vec![pp(ring, "x"), pp(ring, "y")];
        CertNode {
            module: PresentedModule::cyclic(ring, &gens),
            step: StepKind::LeafSingPrime { prime: gens },
        }
    }

    #[test]
    fn accepts_a_singular_leaf() {
        let ring = cusp();
        let root = singular_leaf(&ring);
        let cert = TierCertificate { ring, claimed_tier: tier_index(&root), root };
        let report = verify(&cert);
        assert!(report.accepted, "{:?}", report.failures);
    }

    #[test]
    fn rejects_regular_prime_leaf() {
        let ring = cusp();
        let gens = vec![pp(&ring, "x - 1"), pp(&ring, "y - 1")];
        let root = CertNode {
            module: PresentedModule::cyclic(&ring, &gens),
            step: StepKind::LeafSingPrime { prime: gens },
        };
        let cert = TierCertificate { ring, claimed_tier: -1, root };
        let report = verify(&cert);
        assert!(!report.accepted);
        assert!(report
            .failures
            .iter()
            .any(|(_, r)| r.contains("singular locus")));
    }

    #[test]
    fn rejects_wrong_claimed_tier() {
        let ring = cusp();
        let root = singular_leaf(&ring);
        let cert = TierCertificate { ring, claimed_tier: 3, root };
        let report = verify(&cert);
        assert!(!report.accepted);
        assert!(report.failures.iter().any(|(p, _)| p == "claimed_tier"));
    }

    #[test]
    fn accepts_cosyzygy_of_zero_and_rejects_tampering() {
        let ring = cusp();
        // 0 → 0 → R → R → 0 realizes R as a cosyzygy of the zero module
        let zero = CertNode {
            module: PresentedModule::zero(&ring),
            step: StepKind::Zero,
        };
        let free = PresentedModule::free(&ring, 1);
        let root = CertNode {
            module: free.clone(),
            step: StepKind::Cosyzygy {
                kernel: Box::new(zero),
                middle_rank: 1,
                first: Matrix::zero(1, 0),
                second: Matrix::identity(&ring, 1),
            },
        };
        let cert = TierCertificate { ring: ring.clone(), claimed_tier: tier_index(&root), root };
        let report = verify(&cert);
        assert!(report.accepted, "{:?}", report.failures);

        // tamper: make the projection multiplication by x
        let mut bad = cert.clone();
        if let StepKind::Cosyzygy { second, .. } = &mut bad.root.step {
            second.set(0, 0, pp(&ring, "x"));
        }
        let report = verify(&bad);
        assert!(!report.accepted);
        assert!(report
            .failures
            .iter()
            .any(|(p, r)| p == "step" && r.contains("not exact")));
    }

    #[test]
    fn summand_needs_a_real_retraction() {
        let ring = cusp();
        let leaf = singular_leaf(&ring);
        let m = leaf.module.clone();
        let good = CertNode {
            module: m.clone(),
            step: StepKind::Summand {
                ambient: Box::new(leaf.clone()),
                inclusion: Matrix::identity(&ring, 1),
                retraction: Matrix::identity(&ring, 1),
            },
        };
        let cert = TierCertificate { ring: ring.clone(), claimed_tier: -1, root: good };
        assert!(verify(&cert).accepted);
        let bad = CertNode {
            module: m,
            step: StepKind::Summand {
                ambient: Box::new(leaf),
                inclusion: Matrix::identity(&ring, 1),
                retraction: Matrix::zero(1, 1),
            },
        };
        let cert = TierCertificate { ring, claimed_tier: -1, root: bad };
        let report = verify(&cert);
        assert!(!report.accepted);
        assert!(report
            .failures
            .iter()
            .any(|(_, r)| r.contains("retraction does not split")));
    }
}
