//! Certificate builder: constructs tier certificates for modules by prime
//! filtration, a Mayer–Vietoris splitting at each regular prime, and
//! Koszul descent, verifying every witness it emits as it goes.
//!
//! Searches are seeded and bounded; nothing unverified is ever returned.

use crate::cert::{tier_index, CertNode, StepKind, TierCertificate};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::groebner::{SubmoduleGb, Vector};
use crate::ideal::{
    ideal_intersect, ideal_quotient, ideal_quotient_ideal, ideal_sum, is_prime, Ideal, Primality,
};
use crate::koszul::{koszul_complex, koszul_homology};
use crate::koszul::homology_at;
use crate::module::{
    ann_element, annihilator, exactness_failures, free_resolution, map_kernel,
    ExactSequenceWitness, Matrix, ModuleMap, Pd, PresentedModule,
};
use crate::poly::Poly;
use crate::ring::{ensure_same_ring, quotient_ring, Ring};
use crate::singularity::{analyze, supported_in_sing, CodimSing, SingularityData};
use crate::CancelToken;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimalityPolicy {
    /// Abort on an undecided primality question.
    Fail,
    /// Proceed, counting the assumption; the verifier will still reject
    /// any leaf whose primality it cannot confirm.
    Assume,
}

#[derive(Clone, Debug)]
pub struct BuilderConfig {
    pub seed: u64,
    pub max_attempts: u32,
    pub degree_bound: u32,
    pub primality_policy: PrimalityPolicy,
    pub resolution_bound: Option<usize>,
    pub cancel: CancelToken,
}

impl Default for BuilderConfig {
    fn default() -> Self {
        BuilderConfig {
            seed: 0,
            max_attempts: 64,
            degree_bound: 2,
            primality_policy: PrimalityPolicy::Fail,
            resolution_bound: None,
            cancel: CancelToken::new(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunStats {
    /// Positive-degree Koszul homology support checks performed (all must
    /// pass or the build aborts).
    pub koszul_support_checks: usize,
    pub filtration_steps: usize,
    pub assumed_primes: usize,
}

/// The induction bookkeeping attached to a prime during certification.
#[derive(Clone, Debug)]
pub struct PrimeTask {
    pub prime: Ideal,
    pub n_rank: i64,
    pub height: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdAtPrime {
    /// M_p = 0; the localized projective dimension is undefined.
    NotSupported,
    Pd(usize),
    AtLeast(usize),
}

pub struct Builder {
    pub ring: Ring,
    pub sing: SingularityData,
    pub config: BuilderConfig,
    pub stats: RunStats,
    rng: ChaCha8Rng,
}

const FILTRATION_CAP: usize = 512;
const ENLARGEMENT_CAP: usize = 64;

impl Builder {
    pub fn new(ring: &Ring, config: BuilderConfig) -> Result<Builder> {
        let sing = analyze(ring)?;
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Ok(Builder { ring: ring.clone(), sing, config, stats: RunStats::default(), rng })
    }

    fn random_scalar(&mut self) -> Scalar {
        match self.ring.ambient.field {
            FieldSpec::Fp(p) => self.ring.ambient.field.from_i64(self.rng.gen_range(0..p) as i64),
            FieldSpec::Rational => self.ring.ambient.field.from_i64(self.rng.gen_range(-2..=2)),
        }
    }

    fn prime_is_singular(&self, p: &Ideal) -> bool {
        self.sing.sing_ideal.gens.iter().all(|g| p.contains(g))
    }

    /// n(p): zero exactly on singular primes, else a measure that strictly
    /// decreases along the filtration of R/(p + (a)).
    pub fn n_rank(&self, p: &Ideal) -> i64 {
        if self.prime_is_singular(p) {
            0
        } else {
            p.dim() + 1
        }
    }

    pub fn prime_task(&self, p: &Ideal) -> Result<PrimeTask> {
        Ok(PrimeTask {
            prime: p.clone(),
            n_rank: self.n_rank(p),
            height: self.ring.dim() - p.dim(),
        })
    }

    /// Elements x_1..x_h of a regular prime p generating an ideal I of
    /// height h with I R_p = p R_p, plus the annihilator witness f with
    /// f·p ⊆ I and f ∉ p. Generators are tried first, then seeded random
    /// combinations.
    pub fn choose_regular_system(&mut self, p: &Ideal) -> Result<(Vec<Poly>, Poly)> {
        ensure_same_ring(&self.ring, &p.ring, "choose_regular_system")?;
        let ring = self.ring.clone();
        let h = (ring.dim() - p.dim()) as usize;
        if h == 0 {
            let i = Ideal::zero(&ring);
            if let Some(f) = self.local_equality_witness(&i, p) {
                return Ok((Vec::new(), f));
            }
            return Err(Error::SearchExhausted(format!(
                "no annihilator witness for the height-0 prime {}",
                p.describe()
            )));
        }
        let gens: Vec<Poly> = if p.gens.is_empty() { p.gb().to_vec() } else { p.gens.clone() };
        let mut attempts = 0u32;
        // stage 0: size-h subsets of the generators, in index order
        let mut subset_state: Vec<usize> = (0..h).collect();
        if gens.len() >= h {
            loop {
                if attempts >= self.config.max_attempts {
                    break;
                }
                attempts += 1;
                let xs: Vec<Poly> = subset_state.iter().map(|&i| gens[i].clone()).collect();
                if let Some(f) = self.try_regular_system(&xs, p, h) {
                    return Ok((xs, f));
                }
                if !next_combination(&mut subset_state, gens.len()) {
                    break;
                }
            }
        }
        // stage 1: random linear (then degree-bounded) combinations
        while attempts < self.config.max_attempts {
            attempts += 1;
            let use_degree = attempts > self.config.max_attempts / 2;
            let xs: Vec<Poly> = (0..h).map(|_| self.random_combination(&gens, use_degree)).collect();
            if xs.iter().any(|x| x.is_zero()) {
                continue;
            }
            if let Some(f) = self.try_regular_system(&xs, p, h) {
                return Ok((xs, f));
            }
        }
        Err(Error::SearchExhausted(format!(
            "no regular system of height {h} found in {} for {}",
            self.config.max_attempts,
            p.describe()
        )))
    }

    fn random_combination(&mut self, gens: &[Poly], with_degree: bool) -> Poly {
        let amb = self.ring.ambient.clone();
        let mut acc = Poly::zero();
        for g in gens {
            let c = self.random_scalar();
            let mut coeff = amb.constant(c);
            if with_degree && self.config.degree_bound > 0 && self.rng.gen_bool(0.5) {
                let v = self.rng.gen_range(0..amb.nvars());
                let c2 = self.random_scalar();
                coeff = amb.add(&coeff, &amb.scale(&amb.var(v), &c2));
            }
            acc = amb.add(&acc, &amb.mul(&coeff, g));
        }
        self.ring.nf(&acc)
    }

    fn try_regular_system(&self, xs: &[Poly], p: &Ideal, h: usize) -> Option<Poly> {
        let ring = &self.ring;
        if xs.iter().any(|x| ring.nf(x).is_zero()) {
            return None;
        }
        if xs.iter().any(|x| !p.contains(x)) {
            return None;
        }
        let i = Ideal::new(ring, xs.to_vec());
        // height check via the dimension formula on the equidimensional ring
        if i.dim() != ring.dim() - h as i64 {
            return None;
        }
        self.local_equality_witness(&i, p)
    }

    /// f ∈ (I : p) with f ∉ p, certifying (p/I)_p = 0.
    fn local_equality_witness(&self, i: &Ideal, p: &Ideal) -> Option<Poly> {
        let q = ideal_quotient_ideal(i, p).ok()?;
        q.gb().iter().find(|f| !p.nf(f).is_zero()).cloned()
    }

    /// An element a with (I : a) = p, both inclusions Gröbner-verified.
    /// Under the theorem's preconditions a ∉ p; candidates outside p are
    /// preferred, with an in-p fallback for degenerate standalone calls.
    pub fn colon_witness(&mut self, i: &Ideal, p: &Ideal) -> Result<Poly> {
        ensure_same_ring(&i.ring, &p.ring, "colon_witness")?;
        let q = ideal_quotient_ideal(i, p)?;
        let mut candidates: Vec<Poly> = q
            .gb()
            .iter()
            .filter(|a| !p.nf(a).is_zero())
            .cloned()
            .collect();
        // seeded random combinations of (I : p) generators, still outside p
        let qgens = q.gb().to_vec();
        for _ in 0..self.config.max_attempts {
            let cand = self.random_combination(&qgens, false);
            if !cand.is_zero() && !p.nf(&cand).is_zero() {
                candidates.push(cand);
            }
        }
        // fallback: witnesses inside p still satisfy (I : a) = p in
        // degenerate cases such as I = (x^2), p = (x)
        candidates.extend(q.gb().iter().cloned());
        for a in candidates {
            if a.is_zero() {
                continue;
            }
            let colon = ideal_quotient(i, &a).ideal;
            if colon.eq(p) {
                return Ok(a);
            }
        }
        Err(Error::SearchExhausted(format!(
            "no colon witness with ({} : a) = {}",
            i.describe(),
            p.describe()
        )))
    }

    /// The Mayer–Vietoris sequence 0 → R/I → R/p ⊕ R/(I+(a)) → R/(p+(a)) → 0,
    /// with the diagonal and difference maps, exactness certified. Aborts
    /// when the intersection identity I = (I+(a)) ∩ p fails.
    pub fn mayer_vietoris(&self, i: &Ideal, p: &Ideal, a: &Poly) -> Result<ExactSequenceWitness> {
        let (b_mod, first, second, quot) = self.mv_data(i, p, a)?;
        let sub = PresentedModule::cyclic_from_ideal(&self.ring, i);
        let f = ModuleMap::new(sub, b_mod.clone(), first);
        let g = ModuleMap::new(b_mod, quot, second);
        let w = ExactSequenceWitness::new(vec![f, g])?;
        let fails = exactness_failures(&w);
        if !fails.is_empty() {
            return Err(Error::BuilderInvariant(format!(
                "Mayer–Vietoris sequence failed certification: {}",
                fails.join("; ")
            )));
        }
        Ok(w)
    }

    fn mv_data(
        &self,
        i: &Ideal,
        p: &Ideal,
        a: &Poly,
    ) -> Result<(PresentedModule, Matrix, Matrix, PresentedModule)> {
        let ring = &self.ring;
        let a_ideal = Ideal::new(ring, vec![a.clone()]);
        let ipa = ideal_sum(i, &a_ideal)?;
        let inter = ideal_intersect(&ipa, p)?;
        if !inter.eq(i) {
            return Err(Error::BuilderInvariant(format!(
                "intersection identity fails: ({} + (a)) ∩ {} ≠ {}",
                i.describe(),
                p.describe(),
                i.describe()
            )));
        }
        let ppa = ideal_sum(p, &a_ideal)?;
        let rp = PresentedModule::cyclic_from_ideal(ring, p);
        let ripa = PresentedModule::cyclic_from_ideal(ring, &ipa);
        let b_rels = Matrix::block_diag(&rp.rels, &ripa.rels);
        let b_mod = PresentedModule::new(ring, 2, b_rels);
        let one = ring.ambient.one();
        let minus_one = ring.ambient.int(-1);
        let first = Matrix::from_rows(vec![vec![one.clone()], vec![one.clone()]]);
        let second = Matrix::from_rows(vec![vec![one, minus_one]]);
        let quot = PresentedModule::cyclic_from_ideal(ring, &ppa);
        Ok((b_mod, first, second, quot))
    }

    /// Koszul descent certificate for R/I on a regular system xs: leaves
    /// for the positive homology (supported in Sing), extension steps
    /// along 0 → Im d_{i+1} → Ker d_i → H_i → 0, cosyzygy steps along
    /// 0 → Ker d_i → K_i → Im d_i → 0, ending at R/I in tier h.
    pub fn koszul_descent(&mut self, i_ideal: &Ideal, xs: &[Poly]) -> Result<CertNode> {
        let ring = self.ring.clone();
        let module = PresentedModule::cyclic_from_ideal(&ring, i_ideal);
        if xs.is_empty() {
            // R/(0) is free: a cosyzygy of the zero module
            let zero = CertNode { module: PresentedModule::zero(&ring), step: StepKind::Zero };
            return Ok(CertNode {
                module,
                step: StepKind::Cosyzygy {
                    kernel: Box::new(zero),
                    middle_rank: 1,
                    first: Matrix::zero(1, 0),
                    second: Matrix::identity(&ring, 1),
                },
            });
        }
        let k = koszul_complex(&ring, xs)?;
        let h = k.len();
        // support invariant from the main construction: H_i lives in Sing
        let mut homologies = Vec::with_capacity(h);
        for i in 1..=h {
            let hi = koszul_homology(&k, i)?;
            self.stats.koszul_support_checks += 1;
            if !supported_in_sing(&hi)? {
                return Err(Error::BuilderInvariant(format!(
                    "Koszul homology H_{i} is not supported in the singular locus"
                )));
            }
            homologies.push(hi);
        }
        // kernel presentations and inclusions into the free stages
        let mut kernels = Vec::with_capacity(h);
        for i in 1..=h {
            kernels.push(map_kernel(&k.diff_map(i))?);
        }
        // start at the top: Ker d_h = H_h
        let (ker_h, _) = &kernels[h - 1];
        let mut cur = self.certify_module(ker_h, 0)?;
        for i in (1..=h).rev() {
            let (ker_i, incl_i) = &kernels[i - 1];
            let rank_i = k.rank(i);
            debug_assert!(cur.module.canon_eq(ker_i));
            let im_mod = PresentedModule::new(&ring, rank_i, incl_i.matrix.clone());
            let im_node = CertNode {
                module: im_mod,
                step: StepKind::Cosyzygy {
                    kernel: Box::new(cur),
                    middle_rank: rank_i,
                    first: incl_i.matrix.clone(),
                    second: Matrix::identity(&ring, rank_i),
                },
            };
            if i == 1 {
                return Ok(CertNode {
                    module,
                    step: StepKind::Cosyzygy {
                        kernel: Box::new(im_node),
                        middle_rank: 1,
                        first: k.diffs[0].clone(),
                        second: Matrix::identity(&ring, 1),
                    },
                });
            }
            // extension 0 → Im d_i → Ker d_{i-1} → H_{i-1} → 0
            let (ker_prev, incl_prev) = &kernels[i - 2];
            let span = SubmoduleGb::new(&ring, &incl_prev.matrix.columns(), incl_prev.matrix.rows, true);
            let mut phi = Matrix::zero(ker_prev.ngens, rank_i);
            for c in 0..rank_i {
                let col = k.diffs[i - 1].col(c);
                let rep = span.representation(&col).ok_or_else(|| {
                    Error::BuilderInvariant(
                        "Koszul image column escapes the kernel span".to_string(),
                    )
                })?;
                for (r, entry) in rep.into_iter().enumerate() {
                    phi.set(r, c, entry);
                }
            }
            let h_node = self.certify_module(&homologies[i - 2], 0)?;
            cur = CertNode {
                module: ker_prev.clone(),
                step: StepKind::Extension {
                    sub: Box::new(im_node),
                    quotient: Box::new(h_node),
                    first: phi,
                    second: Matrix::identity(&ring, ker_prev.ngens),
                },
            };
        }
        unreachable!("descent loop always returns at i = 1")
    }

    /// Prime filtration 0 = M_0 ⊂ … ⊂ M_t = M with cyclic prime
    /// subquotients, by annihilator enlargement. Elements are reported in
    /// generator coordinates, each taken modulo the previous steps.
    pub fn prime_filtration(&mut self, m: &PresentedModule) -> Result<Vec<FiltrationStep>> {
        ensure_same_ring(&self.ring, &m.ring, "prime_filtration")?;
        if m.is_zero_module() {
            return Err(Error::usage("prime filtration of the zero module".to_string()));
        }
        let mut steps = Vec::new();
        let mut work = m.clone();
        while !work.is_zero_module() {
            self.config.cancel.check()?;
            if steps.len() >= FILTRATION_CAP {
                return Err(Error::BuilderInvariant(
                    "prime filtration exceeded the step cap".to_string(),
                ));
            }
            let (elem, prime) = self.find_prime_element(&work)?;
            work = quotient_by_element(&work, &elem);
            steps.push(FiltrationStep { element: elem, prime });
        }
        Ok(steps)
    }

    fn find_prime_element(&mut self, m: &PresentedModule) -> Result<(Vec<Poly>, Ideal)> {
        let ring = self.ring.clone();
        let mut elem: Vector = (0..m.ngens)
            .map(|i| {
                let mut e = vec![Poly::zero(); m.ngens];
                e[i] = ring.ambient.one();
                e
            })
            .find(|e| !m.elem_is_zero(e))
            .ok_or_else(|| Error::BuilderInvariant("no nonzero generator".to_string()))?;
        for _ in 0..ENLARGEMENT_CAP {
            let ann = ann_element(m, &elem);
            match is_prime(&ann)? {
                Primality::Prime(_) => {
                    self.stats.filtration_steps += 1;
                    return Ok((elem, ann));
                }
                Primality::NotPrime { f, .. } => {
                    let scaled: Vector = elem.iter().map(|e| ring.nf(&ring.ambient.mul(e, &f))).collect();
                    if m.elem_is_zero(&scaled) {
                        return Err(Error::BuilderInvariant(
                            "zero-divisor witness annihilated the element".to_string(),
                        ));
                    }
                    elem = scaled;
                }
                Primality::Undecided(reason) => match self.config.primality_policy {
                    PrimalityPolicy::Fail => {
                        return Err(Error::PrimalityUndecided(format!(
                            "{} while filtering {}-generator module: {reason}",
                            ann.describe(),
                            m.ngens
                        )))
                    }
                    PrimalityPolicy::Assume => {
                        self.stats.assumed_primes += 1;
                        self.stats.filtration_steps += 1;
                        return Ok((elem, ann));
                    }
                },
            }
        }
        Err(Error::BuilderInvariant(
            "annihilator enlargement did not reach a prime".to_string(),
        ))
    }

    /// Full certificate for M: prime filtration desugared into nested
    /// extensions, with the Mayer–Vietoris/Koszul route at every regular
    /// prime.
    pub fn certify(&mut self, m: &PresentedModule) -> Result<TierCertificate> {
        ensure_same_ring(&self.ring, &m.ring, "certify")?;
        let root = self.certify_module(m, 0)?;
        let claimed = tier_index(&root);
        if let CodimSing::Exact(c) = self.sing.codim {
            if claimed > c {
                return Err(Error::BuilderInvariant(format!(
                    "certificate tier {claimed} exceeds the codimension bound {c}"
                )));
            }
        }
        Ok(TierCertificate { ring: self.ring.clone(), root, claimed_tier: claimed })
    }

    fn certify_module(&mut self, m: &PresentedModule, depth: usize) -> Result<CertNode> {
        self.config.cancel.check()?;
        if depth > FILTRATION_CAP {
            return Err(Error::BuilderInvariant(
                "certificate recursion exceeded the depth cap".to_string(),
            ));
        }
        if m.is_zero_module() {
            return Ok(CertNode { module: m.clone(), step: StepKind::Zero });
        }
        let (elem, prime) = self.find_prime_element(m)?;
        let sub_node = self.certify_prime(&prime)?;
        let quot = quotient_by_element(m, &elem);
        let quot_node = self.certify_module(&quot, depth + 1)?;
        let first = Matrix::from_cols(m.ngens, vec![elem]);
        let second = Matrix::identity(&self.ring, m.ngens);
        Ok(CertNode {
            module: m.clone(),
            step: StepKind::Extension {
                sub: Box::new(sub_node),
                quotient: Box::new(quot_node),
                first,
                second,
            },
        })
    }

    /// Certificate for R/p. Singular primes are leaves; for a regular
    /// prime the Mayer–Vietoris sequence realizes R/p as a summand of an
    /// extension of R/(p+(a)) by the Koszul-descent module R/I.
    fn certify_prime(&mut self, p: &Ideal) -> Result<CertNode> {
        let ring = self.ring.clone();
        let module = PresentedModule::cyclic_from_ideal(&ring, p);
        if self.prime_is_singular(p) {
            return Ok(CertNode {
                module,
                step: StepKind::LeafSingPrime { prime: p.gb().to_vec() },
            });
        }
        let task = self.prime_task(p)?;
        let (xs, _witness) = self.choose_regular_system(p)?;
        let i_ideal = Ideal::new(&ring, xs.clone());
        let a = self.colon_witness(&i_ideal, p)?;
        if p.contains(&a) {
            return Err(Error::BuilderInvariant(
                "colon witness landed inside the prime".to_string(),
            ));
        }
        let (b_mod, first, second, quot_mod) = self.mv_data(&i_ideal, p, &a)?;
        // support of R/(p+(a)) strictly shrinks, so the measure drops
        if !quot_mod.is_zero_module() {
            let ppa = ideal_sum(p, &Ideal::new(&ring, vec![a.clone()]))?;
            if ppa.dim() >= p.dim() {
                return Err(Error::BuilderInvariant(
                    "induction measure failed to decrease".to_string(),
                ));
            }
            debug_assert!(self.n_rank(p) > 0 && ppa.dim() + 1 < task.n_rank + 1);
        }
        let descent = self.koszul_descent(&i_ideal, &xs)?;
        let quot_node = self.certify_module(&quot_mod, 0)?;
        let ext = CertNode {
            module: b_mod,
            step: StepKind::Extension {
                sub: Box::new(descent),
                quotient: Box::new(quot_node),
                first,
                second,
            },
        };
        let one = ring.ambient.one();
        let inclusion = Matrix::from_rows(vec![vec![one.clone()], vec![Poly::zero()]]);
        let retraction = Matrix::from_rows(vec![vec![one, Poly::zero()]]);
        Ok(CertNode {
            module,
            step: StepKind::Summand { ambient: Box::new(ext), inclusion, retraction },
        })
    }

    /// pd over the localization at a regular prime p, computed as the top
    /// nonvanishing Ext^i(M, R/p) at p from a free resolution of M.
    pub fn pd_at_prime(&self, m: &PresentedModule, p: &Ideal) -> Result<PdAtPrime> {
        ensure_same_ring(&self.ring, &m.ring, "pd_at_prime")?;
        match is_prime(p)? {
            Primality::Prime(_) => {}
            Primality::NotPrime { .. } => {
                return Err(Error::usage("pd_at_prime needs a prime ideal".to_string()))
            }
            Primality::Undecided(reason) => return Err(Error::PrimalityUndecided(reason)),
        }
        if self.prime_is_singular(p) {
            return Err(Error::usage(
                "pd_at_prime is only defined at regular primes".to_string(),
            ));
        }
        // support shortcut: M_p = 0 iff Ann(M) ⊄ p
        let ann = annihilator(m)?;
        if !ann.gens.iter().all(|g| p.contains(g)) {
            return Ok(PdAtPrime::NotSupported);
        }
        let bound = self
            .config
            .resolution_bound
            .unwrap_or((self.ring.dim().max(0) as usize) + 2);
        let res = free_resolution(m, bound, &self.config.cancel)?;
        let s_ring = quotient_ring(self.ring.ambient.clone(), p.gb().to_vec())?;
        // Hom(F_•, R/p): free S-modules with transposed differentials
        let mut ranks = vec![res.ngens0];
        for d in &res.mats {
            ranks.push(d.cols);
        }
        let len = res.mats.len();
        // when the resolution was truncated, Ext at the truncation spot is
        // not computable (the next differential is missing); positions
        // strictly below the truncation are exact, which covers every
        // regular prime since pd over R_p is at most dim R
        let top = match res.pd {
            Pd::Finite(l) => l,
            Pd::AtLeast(_) => len.saturating_sub(1),
        };
        for i in (0..=top).rev() {
            let middle = PresentedModule::free(&s_ring, ranks[i]);
            let outgoing = if i < len {
                let next = PresentedModule::free(&s_ring, ranks[i + 1]);
                Some(ModuleMap::new(middle.clone(), next, res.mats[i].transpose()))
            } else {
                None
            };
            let incoming = if i >= 1 {
                let prev = PresentedModule::free(&s_ring, ranks[i - 1]);
                Some(ModuleMap::new(prev, middle.clone(), res.mats[i - 1].transpose()))
            } else {
                None
            };
            let ext = homology_at(&s_ring, outgoing.as_ref(), &middle, incoming.as_ref())?;
            let ext_ann = annihilator(&ext)?;
            if ext_ann.gens.iter().all(|g| p.contains(g)) {
                // Ext^i(M, R/p) is supported at p
                return Ok(PdAtPrime::Pd(i));
            }
        }
        match res.pd {
            Pd::Finite(_) => Ok(PdAtPrime::NotSupported),
            Pd::AtLeast(b) => Ok(PdAtPrime::AtLeast(b)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationStep {
    pub element: Vec<Poly>,
    pub prime: Ideal,
}

/// M/(R·elem): the presentation gains one relation column.
pub fn quotient_by_element(m: &PresentedModule, elem: &[Poly]) -> PresentedModule {
    let col: Vector = elem.to_vec();
    let extra = Matrix::from_cols(m.ngens, vec![col]);
    PresentedModule::new(&m.ring, m.ngens, m.rels.hcat(&extra))
}

fn next_combination(state: &mut [usize], n: usize) -> bool {
    let k = state.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if state[i] < n - (k - i) {
            state[i] += 1;
            for j in i + 1..k {
                state[j] = state[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::monomial::MonomialOrder;
    use crate::parse::parse_poly;
    use crate::ring::{polynomial_ring, AmbientRing};
    use crate::verify::verify;

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

    fn pp(ring: &Ring, s: &str) -> Poly {
        parse_poly(&ring.ambient, s).unwrap()
    }

    fn id(ring: &Ring, gens: &[&str]) -> Ideal {
        Ideal::new(ring, gens.iter().map(|s| pp(ring, s)).collect())
    }

    #[test]
    fn regular_system_for_principal_prime() {
        let r = polynomial_ring(f5(&["x", "y"]));
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let p = id(&r, &["x"]);
        let (xs, f) = b.choose_regular_system(&p).unwrap();
        assert_eq!(xs, vec![pp(&r, "x")]);
        assert!(!p.contains(&f));
    }

    #[test]
    fn regular_system_for_maximal_ideal() {
        let r = polynomial_ring(f5(&["x", "y"]));
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let p = id(&r, &["x", "y"]);
        let (xs, _f) = b.choose_regular_system(&p).unwrap();
        assert_eq!(xs.len(), 2);
        let i = Ideal::new(&r, xs);
        assert_eq!(i.dim(), 0);
    }

    #[test]
    fn regular_system_at_smooth_point_of_cusp() {
        let r = cusp();
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let p = id(&r, &["x - 1", "y - 1"]);
        let (xs, f) = b.choose_regular_system(&p).unwrap();
        assert_eq!(xs.len(), 1);
        assert!(!p.contains(&f));
        let i = Ideal::new(&r, xs);
        assert_eq!(i.dim(), 0);
    }

    #[test]
    fn colon_witness_examples() {
        let r = polynomial_ring(f5(&["x"]));
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        // I = p → a = 1
        let p = id(&r, &["x"]);
        let a = b.colon_witness(&p.clone(), &p).unwrap();
        assert!(a.is_constant());
        // I = (x^2) ⊂ p = (x): a = x (degenerate fallback inside p)
        let i = id(&r, &["x^2"]);
        let a = b.colon_witness(&i, &p).unwrap();
        let colon = ideal_quotient(&i, &a).ideal;
        assert!(colon.eq(&p));
    }

    #[test]
    fn mayer_vietoris_degenerate_unit() {
        // a = 1 collapses the sequence: R/(I+(1)) = 0 and R/I ≅ R/p
        let r = polynomial_ring(f5(&["x", "y"]));
        let b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let p = id(&r, &["x"]);
        let w = b.mayer_vietoris(&p.clone(), &p, &r.ambient.one()).unwrap();
        assert_eq!(w.maps.len(), 2);
    }

    #[test]
    fn mayer_vietoris_rejects_bad_intersection() {
        // (x^2) ≠ ((x^2)+(x)) ∩ (x); the operation must abort
        let r = polynomial_ring(f5(&["x"]));
        let b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let i = id(&r, &["x^2"]);
        let p = id(&r, &["x"]);
        match b.mayer_vietoris(&i, &p, &pp(&r, "x")) {
            Err(Error::BuilderInvariant(msg)) => assert!(msg.contains("intersection")),
            other => panic!("expected abort, got {other:?}"),
        }
    }

    #[test]
    fn mayer_vietoris_cusp_instance() {
        let r = cusp();
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let p = id(&r, &["x - 1", "y - 1"]);
        let (xs, _) = b.choose_regular_system(&p).unwrap();
        let i = Ideal::new(&r, xs);
        let a = b.colon_witness(&i, &p).unwrap();
        assert!(!p.contains(&a));
        let w = b.mayer_vietoris(&i, &p, &a).unwrap();
        assert!(crate::module::is_exact(&w));
    }

    #[test]
    fn descent_over_regular_line() {
        // I = (x) in F5[x]: H_1 = 0, certificate is a double cosyzygy of 0
        let r = polynomial_ring(f5(&["x"]));
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let i = id(&r, &["x"]);
        let node = b.koszul_descent(&i, &[pp(&r, "x")]).unwrap();
        assert_eq!(tier_index(&node), 1);
        let cert = TierCertificate { ring: r.clone(), claimed_tier: 1, root: node };
        let report = verify(&cert);
        assert!(report.accepted, "{:?}", report.failures);
    }

    #[test]
    fn descent_height_two() {
        let r = polynomial_ring(f5(&["x", "y"]));
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let i = id(&r, &["x", "y"]);
        let node = b
            .koszul_descent(&i, &[pp(&r, "x"), pp(&r, "y")])
            .unwrap();
        assert_eq!(tier_index(&node), 2);
        let cert = TierCertificate { ring: r.clone(), claimed_tier: 2, root: node };
        let report = verify(&cert);
        assert!(report.accepted, "{:?}", report.failures);
    }

    #[test]
    fn filtration_of_double_point() {
        let amb = f5(&["x"]);
        let r = quotient_ring(amb.clone(), vec![parse_poly(&amb, "x^2").unwrap()]).unwrap();
        let m = PresentedModule::free(&r, 1);
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let steps = b.prime_filtration(&m).unwrap();
        assert_eq!(steps.len(), 2);
        for s in &steps {
            assert!(s.prime.eq(&id(&r, &["x"])));
        }
    }

    #[test]
    fn certify_residue_field_of_plane() {
        let r = polynomial_ring(f5(&["x", "y"]));
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let k = PresentedModule::cyclic(&r, &[pp(&r, "x"), pp(&r, "y")]);
        let cert = b.certify(&k).unwrap();
        assert_eq!(cert.claimed_tier, 2);
        let report = verify(&cert);
        assert!(report.accepted, "{:?}", report.failures);
    }

    #[test]
    fn certify_cyclic_at_smooth_point_of_cusp() {
        let r = cusp();
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let m = PresentedModule::cyclic(&r, &[pp(&r, "x - 1"), pp(&r, "y - 1")]);
        let cert = b.certify(&m).unwrap();
        assert!(cert.claimed_tier <= 1);
        let report = verify(&cert);
        assert!(report.accepted, "{:?}", report.failures);
        assert!(b.stats.koszul_support_checks > 0);
    }

    #[test]
    fn certify_singular_leaf_directly() {
        let r = cusp();
        let mut b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let m = PresentedModule::cyclic(&r, &[pp(&r, "x"), pp(&r, "y")]);
        let cert = b.certify(&m).unwrap();
        assert_eq!(cert.claimed_tier, -1);
        assert!(verify(&cert).accepted);
    }

    #[test]
    fn pd_at_prime_examples() {
        let r = polynomial_ring(f5(&["x", "y"]));
        let b = Builder::new(&r, BuilderConfig::default()).unwrap();
        // free module → 0
        let free = PresentedModule::free(&r, 2).with_degrees(vec![0, 0]);
        let p = id(&r, &["x", "y - 1"]);
        assert_eq!(b.pd_at_prime(&free, &p).unwrap(), PdAtPrime::Pd(0));
        // R/(x) at (x, y-1) → 1
        let m = PresentedModule::cyclic(&r, &[pp(&r, "x")]).with_degrees(vec![0]);
        assert_eq!(b.pd_at_prime(&m, &p).unwrap(), PdAtPrime::Pd(1));
        // unsupported: R/(x) at (x - 1, y)
        let q = id(&r, &["x - 1", "y"]);
        assert_eq!(b.pd_at_prime(&m, &q).unwrap(), PdAtPrime::NotSupported);
    }

    #[test]
    fn pd_at_prime_on_cusp_smooth_point() {
        let r = cusp();
        let b = Builder::new(&r, BuilderConfig::default()).unwrap();
        let p = id(&r, &["x - 1", "y - 1"]);
        let m = PresentedModule::cyclic_from_ideal(&r, &p);
        assert_eq!(b.pd_at_prime(&m, &p).unwrap(), PdAtPrime::Pd(1));
        // k, supported only at the singular point, vanishes at p
        let k = PresentedModule::cyclic(&r, &[pp(&r, "x"), pp(&r, "y")]);
        assert_eq!(b.pd_at_prime(&k, &p).unwrap(), PdAtPrime::NotSupported);
    }

    #[test]
    fn seeded_builder_is_deterministic() {
        let r = cusp();
        let m = PresentedModule::cyclic(&r, &[pp(&r, "x - 1"), pp(&r, "y - 1")]);
        let run = |seed: u64| {
            let mut b = Builder::new(
                &r,
                BuilderConfig { seed, ..BuilderConfig::default() },
            )
            .unwrap();
            crate::cert::to_canonical_json(&b.certify(&m).unwrap())
        };
        assert_eq!(run(7), run(7));
    }
}
