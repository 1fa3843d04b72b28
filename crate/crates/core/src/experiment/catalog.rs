//! Machine-readable list of experiment kinds and the statement each exercises.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub kind: String,
    pub statement: String,
    /// `kind → statement`.
    pub citation: String,
    pub summary: String,
}

const ENTRIES: [(&str, &str, &str); 9] = [
    ("average", "Theorem 1", "averaged spectral measure ∫ρ_{A+tB}^Φ h(t)dt, checked against the scalar closed form"),
    (
        "contrast",
        "Theorem 1, modulus of continuity comparison",
        "continuity ladders of the averaged measure and of a single ρ_{H(t₀)}^Φ",
    ),
    (
        "change-of-variables",
        "Proof of Theorem 1, substitution s = tanh t",
        "tanh family against the substituted linear family",
    ),
    (
        "direct-integral",
        "Remark 2.1",
        "spectral projections of a block direct integral against the fiberwise sum",
    ),
    ("commutator", "Howland Lemma 2.9", "spectrum of C = i[tanh Q, arctan P] on a periodic grid"),
    (
        "kato-putnam",
        "Corollary: i[Ĥ, D̂] = B⊗C ≥ 0",
        "Kronecker commutator identity and the spectrum of B⊗C",
    ),
    ("cyclicity", "Corollary 1.2", "dimension of the span of φ(A)Bf"),
    (
        "ids",
        "Integrated density of states trace formula",
        "Monte Carlo or enumerated average of Tr(χ E_H(I) χ)",
    ),
    (
        "wegner",
        "Corollary: the integrated density of states is absolutely continuous",
        "window-density stability of the estimated density of states",
    ),
];

pub fn catalog() -> Vec<CatalogEntry> {
    ENTRIES
        .iter()
        .map(|(kind, statement, summary)| CatalogEntry {
            kind: kind.to_string(),
            statement: statement.to_string(),
            citation: format!("{kind} → {statement}"),
            summary: summary.to_string(),
        })
        .collect()
}

pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&catalog()).expect("catalog serializes")
}
