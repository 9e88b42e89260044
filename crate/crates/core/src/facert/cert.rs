use serde::{Deserialize, Serialize};

use super::evidence::{order_evidence, small_evidence, ChainPremises, EllipticEvidence, EvidenceKind};
use crate::dyadic::StdInterval;
use crate::elements::{arc_subgroup_generators, standard_generator, Arc, CellMap, Generator, GroupClass};
use crate::error::{Error, Result};

pub const CERT_FORMAT_VERSION: u32 = 1;
pub const CONCLUSION: &str = "pairwise elliptic generating set";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertGenerator {
    pub name: String,
    /// Arc of the circle the generator is supported on (T certificates).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<Arc>,
    pub element: CellMap,
}

/// Evidence that `generators[i] · generators[j]` (`i <= j`) is elliptic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEvidence {
    pub i: usize,
    pub j: usize,
    pub evidence: EllipticEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FACertificate {
    pub format_version: u32,
    pub group: GroupClass,
    pub generators: Vec<CertGenerator>,
    pub generator_evidence: Vec<EllipticEvidence>,
    pub pair_evidence: Vec<PairEvidence>,
    /// The T certificate a V certificate builds on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Box<FACertificate>>,
    pub conclusion: String,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::CertificateFailure(msg.into())
}

impl FACertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(s: &str) -> Result<FACertificate> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }

    fn pair_label(&self, i: usize, j: usize) -> String {
        format!("{}·{}", self.generators[i].name, self.generators[j].name)
    }
}

/// Evidence for `s_i·s_j`: smallness, or for opposite arcs a commuting
/// disjoint pair.
fn t_pair_evidence(gens: &[CertGenerator], i: usize, j: usize) -> Result<EllipticEvidence> {
    let (s, t) = (&gens[i].element, &gens[j].element);
    let product = s.compose(t);
    if let Some(e) = small_evidence(&product) {
        return Ok(e);
    }
    let opposite = matches!((gens[i].arc, gens[j].arc), (Some(a), Some(b)) if a.opposite() == b);
    if opposite && s.compose(t) == t.compose(s) {
        if let (Some(ws), Some(wt)) = (s.is_small(), t.is_small()) {
            return Ok(EllipticEvidence {
                subject: product,
                kind: EvidenceKind::CommutingDisjointPair {
                    factors: [s.clone(), t.clone()],
                    witnesses: [ws, wt],
                },
            });
        }
    }
    Err(fail(format!(
        "{}·{} is not small and has no commuting disjoint pair route",
        gens[i].name, gens[j].name
    )))
}

/// Certificate for T from generators supported on arcs; each generator and
/// each product of two must be small, except that opposite-arc products
/// may be commuting disjoint pairs.
pub fn t_certificate_from(generators: Vec<CertGenerator>) -> Result<FACertificate> {
    let mut generator_evidence = Vec::new();
    for g in &generators {
        // prefer a witness in the complementary arc
        let witness = g
            .arc
            .and_then(|arc| arc.complement().iter().find_map(|c| g.element.small_witness_in(c)))
            .or_else(|| g.element.is_small());
        let witness = witness.ok_or_else(|| fail(format!("generator {} is not small", g.name)))?;
        generator_evidence.push(EllipticEvidence {
            subject: g.element.clone(),
            kind: EvidenceKind::Small { witness },
        });
    }
    let mut pair_evidence = Vec::new();
    for i in 0..generators.len() {
        for j in i..generators.len() {
            pair_evidence.push(PairEvidence {
                i,
                j,
                evidence: t_pair_evidence(&generators, i, j)?,
            });
        }
    }
    Ok(FACertificate {
        format_version: CERT_FORMAT_VERSION,
        group: GroupClass::T,
        generators,
        generator_evidence,
        pair_evidence,
        subgroup: None,
        conclusion: CONCLUSION.into(),
    })
}

/// The two generators of each of the arc subgroups `T_L, T_R, T_U, T_D`.
pub fn arc_generators() -> Vec<CertGenerator> {
    Arc::ALL
        .iter()
        .flat_map(|&arc| {
            arc_subgroup_generators(arc)
                .into_iter()
                .enumerate()
                .map(move |(k, element)| CertGenerator {
                    name: format!("{}{k}", arc.name()),
                    arc: Some(arc),
                    element,
                })
        })
        .collect()
}

pub fn t_certificate() -> Result<FACertificate> {
    t_certificate_from(arc_generators())
}

/// Certificate for V over `pi1, x0, x1, pi0`: the T generators and their
/// products are covered by the T certificate, `pi1` and `pi1·pi0` have
/// finite order, `pi1·x1` is small and `pi1·x0` goes through the
/// commutator chain.
pub fn v_certificate() -> Result<FACertificate> {
    let t = t_certificate()?;
    verify(&t)?;
    let order = [Generator::Pi1, Generator::X0, Generator::X1, Generator::Pi0];
    let generators: Vec<CertGenerator> = order
        .iter()
        .map(|&g| CertGenerator {
            name: g.name().into(),
            arc: None,
            element: standard_generator(g),
        })
        .collect();
    let [pi1, x0, x1, pi0] = order.map(standard_generator);
    let in_t = |g: &CellMap| EllipticEvidence {
        subject: g.clone(),
        kind: EvidenceKind::TSubgroup,
    };
    let finite = |g: &CellMap, what: &str| order_evidence(g).ok_or_else(|| fail(format!("{what} has no finite order")));
    let generator_evidence = vec![finite(&pi1, "pi1")?, in_t(&x0), in_t(&x1), in_t(&pi0)];

    let half = StdInterval::left_half();
    let chain = ChainPremises {
        g: pi1.clone(),
        g_order: pi1.order_up_to(super::FINITE_ORDER_BOUND).ok_or_else(|| fail("pi1 has no finite order"))?,
        h: x0.clone(),
        commutator_witness: half.clone(),
    };
    if !chain.commutator().is_identity_on(&half) {
        return Err(fail("x0^-1·pi1·x0·pi1 is not the identity on [0,1/2)"));
    }
    let pi1x1 = pi1.compose(&x1);
    if !pi1x1.is_identity_on(&half) {
        return Err(fail("pi1·x1 is not the identity on [0,1/2)"));
    }
    let mut pair_evidence = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            let product = generators[i].element.compose(&generators[j].element);
            let evidence = match (i, j) {
                (0, 0) => finite(&product, "pi1·pi1")?,
                (0, 1) => EllipticEvidence {
                    subject: product,
                    kind: EvidenceKind::CommutatorChain {
                        premises: chain.clone(),
                    },
                },
                (0, 2) => EllipticEvidence {
                    subject: product,
                    kind: EvidenceKind::Small {
                        witness: half.clone(),
                    },
                },
                (0, 3) => finite(&product, "pi1·pi0")?,
                _ => in_t(&product),
            };
            pair_evidence.push(PairEvidence { i, j, evidence });
        }
    }
    Ok(FACertificate {
        format_version: CERT_FORMAT_VERSION,
        group: GroupClass::V,
        generators,
        generator_evidence,
        pair_evidence,
        subgroup: Some(Box::new(t)),
        conclusion: CONCLUSION.into(),
    })
}

/// Re-check a certificate from its raw elements. Returns the audit trail;
/// the first failing check is reported as `CertificateFailure`.
pub fn verify(cert: &FACertificate) -> Result<Vec<String>> {
    let mut audit = Vec::new();
    if cert.format_version != CERT_FORMAT_VERSION {
        return Err(fail(format!("format version {} (expected {CERT_FORMAT_VERSION})", cert.format_version)));
    }
    if cert.conclusion != CONCLUSION {
        return Err(fail(format!("unexpected conclusion {:?}", cert.conclusion)));
    }
    let t_fixes_point = match cert.group {
        GroupClass::T => {
            if cert.subgroup.is_some() {
                return Err(fail("a T certificate carries no subgroup certificate"));
            }
            if cert.generators.len() != 8 {
                return Err(fail(format!("T certificate needs 8 generators, has {}", cert.generators.len())));
            }
            for g in &cert.generators {
                if g.element.class() == GroupClass::V {
                    return Err(fail(format!("generator {} is not in T", g.name)));
                }
            }
            false
        }
        GroupClass::V => {
            let sub = cert
                .subgroup
                .as_ref()
                .ok_or_else(|| fail("V certificate without its T certificate"))?;
            if sub.group != GroupClass::T {
                return Err(fail("subgroup certificate is not for T"));
            }
            for line in verify(sub)? {
                audit.push(format!("  [T] {line}"));
            }
            audit.push("T fixes a point (pairwise elliptic generators of T)".into());
            let expected = [Generator::Pi1, Generator::X0, Generator::X1, Generator::Pi0];
            let names: Vec<&str> = cert.generators.iter().map(|g| g.name.as_str()).collect();
            let standard = cert.generators.len() == 4
                && cert
                    .generators
                    .iter()
                    .zip(expected)
                    .all(|(g, e)| g.element == standard_generator(e));
            if !standard {
                return Err(fail(format!("V generators {names:?} are not pi1, x0, x1, pi0")));
            }
            true
        }
        GroupClass::F => return Err(fail("certificates are for T or V")),
    };
    if cert.generator_evidence.len() != cert.generators.len() {
        return Err(fail("generator evidence does not match the generator list"));
    }
    for (g, e) in cert.generators.iter().zip(&cert.generator_evidence) {
        if e.subject != g.element {
            return Err(fail(format!("evidence for {} is about another element", g.name)));
        }
        if matches!(e.kind, EvidenceKind::CommutingDisjointPair { .. }) {
            return Err(fail(format!("{}: pair evidence used for a generator", g.name)));
        }
        e.verify(&g.name, t_fixes_point)?;
        audit.push(format!("generator {}: {}", g.name, e.describe()));
    }
    let n = cert.generators.len();
    let mut seen = vec![vec![false; n]; n];
    for p in &cert.pair_evidence {
        if p.i > p.j || p.j >= n {
            return Err(fail(format!("pair ({}, {}) out of range", p.i, p.j)));
        }
        if std::mem::replace(&mut seen[p.i][p.j], true) {
            return Err(fail(format!("pair ({}, {}) listed twice", p.i, p.j)));
        }
        let label = cert.pair_label(p.i, p.j);
        let (a, b) = (&cert.generators[p.i], &cert.generators[p.j]);
        if p.evidence.subject != a.element.compose(&b.element) {
            return Err(fail(format!("{label}: subject is not the product")));
        }
        if let EvidenceKind::CommutingDisjointPair { factors, .. } = &p.evidence.kind {
            let opposite = matches!((a.arc, b.arc), (Some(x), Some(y)) if x.opposite() == y);
            if cert.group != GroupClass::T || !opposite {
                return Err(fail(format!("{label}: commuting pair route is only for opposite arcs")));
            }
            if factors[0] != a.element || factors[1] != b.element {
                return Err(fail(format!("{label}: factors are not the two generators")));
            }
        }
        p.evidence.verify(&label, t_fixes_point)?;
        audit.push(format!("pair {label}: {}", p.evidence.describe()));
        if let EvidenceKind::CommutatorChain { premises } = &p.evidence.kind {
            for s in premises.statements() {
                audit.push(format!("  {s}"));
            }
        }
    }
    let missing = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).find(|&(i, j)| !seen[i][j]);
    if let Some((i, j)) = missing {
        return Err(fail(format!("no evidence for {}", cert.pair_label(i, j))));
    }
    audit.push(format!(
        "{} generators and {} products elliptic; {} has a fixed point ({})",
        n,
        cert.pair_evidence.len(),
        cert.group,
        cert.conclusion
    ));
    Ok(audit)
}
