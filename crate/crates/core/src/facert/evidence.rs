use serde::{Deserialize, Serialize};

use crate::dyadic::StdInterval;
use crate::elements::{CellMap, GroupClass};
use crate::error::{Error, Result};

/// Orders above this are reported as "no finite order found".
pub const FINITE_ORDER_BOUND: u32 = 200;

/// The computable premises of the chain
/// `Fix(h⁻¹gh) ∩ Fix(g) ≠ ∅ ⇒ h⁻¹·Fix(g) ∩ Fix(g) ≠ ∅ ⇒ Fix(h⁻¹) ∩ Fix(g) ≠ ∅`
/// for the subject `g·h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainPremises {
    /// Finite order, so elliptic.
    pub g: CellMap,
    pub g_order: u32,
    /// An element of T, elliptic once T fixes a point.
    pub h: CellMap,
    /// `h⁻¹·g·h·g` is the identity on this interval.
    pub commutator_witness: StdInterval,
}

impl ChainPremises {
    pub fn commutator(&self) -> CellMap {
        self.h
            .invert()
            .compose(&self.g)
            .compose(&self.h)
            .compose(&self.g)
    }

    /// The displayed implications, for the audit trail.
    pub fn statements(&self) -> Vec<String> {
        vec![
            "h^-1 g h g is small, hence elliptic; h^-1 g h and g are elliptic, so Fix(h^-1 g h) ∩ Fix(g) ≠ ∅".into(),
            "Fix(h^-1 g h) = h^-1·Fix(g), so h^-1·Fix(g) ∩ Fix(g) ≠ ∅".into(),
            "hence Fix(h^-1) ∩ Fix(g) ≠ ∅ and g·h fixes a common fixed point".into(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum EvidenceKind {
    /// The subject is the identity on `witness`.
    Small { witness: StdInterval },
    FiniteOrder { order: u32 },
    /// `k·subject·k⁻¹` is the identity on `witness`.
    ConjugateSmall { conjugator: CellMap, witness: StdInterval },
    /// `subject = s·t` with `s`, `t` small, disjointly supported and
    /// commuting: `s` stabilises `Fix(t)`, so the two share a fixed point.
    CommutingDisjointPair {
        factors: [CellMap; 2],
        witnesses: [StdInterval; 2],
    },
    CommutatorChain { premises: ChainPremises },
    /// The subject lies in T, which fixes a point by the T certificate.
    TSubgroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticEvidence {
    pub subject: CellMap,
    #[serde(flatten)]
    pub kind: EvidenceKind,
}

/// Optional extra routes for [`elliptic_evidence`].
#[derive(Debug, Clone, Default)]
pub struct EvidenceHints {
    pub conjugator: Option<CellMap>,
    /// `t` such that `subject = s·t` may be a commuting disjoint pair.
    pub partner: Option<CellMap>,
}

fn supports_disjoint(s: &CellMap, t: &CellMap) -> bool {
    let (a, b) = (s.support(), t.support());
    a.iter().all(|x| b.iter().all(|y| x.intersect(y).is_none()))
}

fn commuting_pair(subject: &CellMap, partner: &CellMap) -> Option<EvidenceKind> {
    let s = subject.compose(&partner.invert());
    let witnesses = [s.is_small()?, partner.is_small()?];
    (supports_disjoint(&s, partner) && s.compose(partner) == partner.compose(&s)).then(|| {
        EvidenceKind::CommutingDisjointPair {
            factors: [s, partner.clone()],
            witnesses,
        }
    })
}

/// The first route that applies: smallness, finite order (up to
/// [`FINITE_ORDER_BOUND`]), then the hinted conjugate and
/// commuting-pair routes.
pub fn elliptic_evidence(g: &CellMap, hints: &EvidenceHints) -> Result<EllipticEvidence> {
    let found = |kind| EllipticEvidence {
        subject: g.clone(),
        kind,
    };
    if let Some(witness) = g.is_small() {
        return Ok(found(EvidenceKind::Small { witness }));
    }
    if let Some(order) = g.order_up_to(FINITE_ORDER_BOUND) {
        return Ok(found(EvidenceKind::FiniteOrder { order }));
    }
    if let Some(k) = &hints.conjugator {
        if let Some(witness) = g.conjugate_by(k).is_small() {
            return Ok(found(EvidenceKind::ConjugateSmall {
                conjugator: k.clone(),
                witness,
            }));
        }
    }
    if let Some(kind) = hints.partner.as_ref().and_then(|t| commuting_pair(g, t)) {
        return Ok(found(kind));
    }
    Err(Error::NoEvidence(g.to_string()))
}

pub(crate) fn small_evidence(g: &CellMap) -> Option<EllipticEvidence> {
    g.is_small().map(|witness| EllipticEvidence {
        subject: g.clone(),
        kind: EvidenceKind::Small { witness },
    })
}

pub(crate) fn order_evidence(g: &CellMap) -> Option<EllipticEvidence> {
    g.order_up_to(FINITE_ORDER_BOUND).map(|order| EllipticEvidence {
        subject: g.clone(),
        kind: EvidenceKind::FiniteOrder { order },
    })
}

fn fail(msg: String) -> Error {
    Error::CertificateFailure(msg)
}

impl EllipticEvidence {
    /// Short description for audit lines.
    pub fn describe(&self) -> String {
        match &self.kind {
            EvidenceKind::Small { witness } => format!("Small, identity on {witness:?}"),
            EvidenceKind::FiniteOrder { order } => format!("FiniteOrder({order})"),
            EvidenceKind::ConjugateSmall { witness, .. } => {
                format!("ConjugateSmall, conjugate is the identity on {witness:?}")
            }
            EvidenceKind::CommutingDisjointPair { witnesses, .. } => format!(
                "CommutingDisjointPair, factors small on {:?} and {:?}, disjoint supports, commute",
                witnesses[0], witnesses[1]
            ),
            EvidenceKind::CommutatorChain { premises } => format!(
                "CommutatorChain, h^-1 g h g identity on {:?}",
                premises.commutator_witness
            ),
            EvidenceKind::TSubgroup => "TSubgroup, element of T".into(),
        }
    }

    /// Recompute every premise from the stored elements. `t_fixes_point`
    /// says whether a verified T certificate is in scope.
    pub fn verify(&self, label: &str, t_fixes_point: bool) -> Result<()> {
        let g = &self.subject;
        match &self.kind {
            EvidenceKind::Small { witness } => {
                if !g.is_identity_on(witness) {
                    return Err(fail(format!("{label}: not the identity on {witness:?}")));
                }
            }
            EvidenceKind::FiniteOrder { order } => {
                if *order == 0 || *order > FINITE_ORDER_BOUND || g.order_up_to(*order) != Some(*order) {
                    return Err(fail(format!("{label}: order is not {order}")));
                }
            }
            EvidenceKind::ConjugateSmall { conjugator, witness } => {
                if !g.conjugate_by(conjugator).is_identity_on(witness) {
                    return Err(fail(format!("{label}: conjugate is not the identity on {witness:?}")));
                }
            }
            EvidenceKind::CommutingDisjointPair { factors, witnesses } => {
                let [s, t] = factors;
                if s.compose(t) != *g {
                    return Err(fail(format!("{label}: factors do not multiply to the subject")));
                }
                for (f, w) in factors.iter().zip(witnesses) {
                    if !f.is_identity_on(w) {
                        return Err(fail(format!("{label}: factor is not the identity on {w:?}")));
                    }
                }
                if !supports_disjoint(s, t) {
                    return Err(fail(format!("{label}: factor supports overlap")));
                }
                if s.compose(t) != t.compose(s) {
                    return Err(fail(format!("{label}: factors do not commute")));
                }
            }
            EvidenceKind::CommutatorChain { premises } => {
                let p = premises;
                if p.g.compose(&p.h) != *g {
                    return Err(fail(format!("{label}: subject is not g·h")));
                }
                if p.g_order == 0 || p.g.order_up_to(p.g_order) != Some(p.g_order) {
                    return Err(fail(format!("{label}: g does not have order {}", p.g_order)));
                }
                if p.h.class() == GroupClass::V || !t_fixes_point {
                    return Err(fail(format!("{label}: h is not covered by a verified T certificate")));
                }
                if !p.commutator().is_identity_on(&p.commutator_witness) {
                    return Err(fail(format!(
                        "{label}: h^-1 g h g is not the identity on {:?}",
                        p.commutator_witness
                    )));
                }
            }
            EvidenceKind::TSubgroup => {
                if g.class() == GroupClass::V {
                    return Err(fail(format!("{label}: not an element of T")));
                }
                if !t_fixes_point {
                    return Err(fail(format!("{label}: no verified T certificate in scope")));
                }
            }
        }
        Ok(())
    }
}
