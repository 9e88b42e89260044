//! Re-checkable certificates for the property FA arguments for T and V.
//!
//! A certificate lists generators `s_1..s_m` with evidence that every `s_i`
//! and every `s_i·s_j` is elliptic in any action on a tree, which gives a
//! global fixed point. Evidence is only ever trusted after
//! [`verify`] recomputes it from the stored cell maps.

mod cert;
mod evidence;

pub use cert::{
    arc_generators, t_certificate, t_certificate_from, v_certificate, verify, CertGenerator, FACertificate,
    PairEvidence, CERT_FORMAT_VERSION, CONCLUSION,
};
pub use evidence::{
    elliptic_evidence, ChainPremises, EllipticEvidence, EvidenceHints, EvidenceKind, FINITE_ORDER_BOUND,
};
