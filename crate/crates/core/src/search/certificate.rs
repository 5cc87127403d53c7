//! Search certificates: extremal colorings, forced ranges, and partial
//! (unknown) outcomes, serialized with the family in DSL form so replay
//! never depends on in-process state.

use serde::{Deserialize, Serialize};

use super::{Coloring, ThresholdOutcome, ThresholdResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedStats {
    pub nodes: u64,
    pub symmetry: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum CertificateKind {
    /// `coloring` is witness-free for the family on `[1..N]`.
    Extremal { coloring: Coloring },
    /// Every r-coloring of `[1..N]` contains a monochromatic instance.
    Forced { stats: ForcedStats },
    /// Search stopped at the cap; the best extremal found is attached.
    Unknown { extremal: Option<Coloring> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Family in DSL text; reparsing it reproduces the search input.
    pub family: String,
    pub r: u8,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(flatten)]
    pub kind: CertificateKind,
    pub tool_version: String,
}

fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_owned()
}

impl Certificate {
    pub fn extremal(family: &crate::pattern::PatternFamily, r: u8, coloring: Coloring) -> Self {
        Certificate {
            family: family.to_string(),
            r,
            n: coloring.n(),
            kind: CertificateKind::Extremal { coloring },
            tool_version: tool_version(),
        }
    }

    pub fn forced(
        family: &crate::pattern::PatternFamily,
        r: u8,
        n: u32,
        stats: ForcedStats,
    ) -> Self {
        Certificate {
            family: family.to_string(),
            r,
            n,
            kind: CertificateKind::Forced { stats },
            tool_version: tool_version(),
        }
    }

    pub fn unknown(
        family: &crate::pattern::PatternFamily,
        r: u8,
        n_max: u32,
        extremal: Option<Coloring>,
    ) -> Self {
        Certificate {
            family: family.to_string(),
            r,
            n: n_max,
            kind: CertificateKind::Unknown { extremal },
            tool_version: tool_version(),
        }
    }

    /// Certificate for the forced side of a threshold result.
    pub fn from_threshold(
        family: &crate::pattern::PatternFamily,
        r: u8,
        outcome: &ThresholdOutcome,
        symmetry: bool,
    ) -> Self {
        match outcome {
            ThresholdOutcome::Forced(ThresholdResult { forcing_n, nodes, .. }) => Certificate::forced(
                family,
                r,
                *forcing_n,
                ForcedStats { nodes: *nodes, symmetry },
            ),
            ThresholdOutcome::Unknown { n_max, extremal, .. } => {
                Certificate::unknown(family, r, *n_max, Some(extremal.clone()))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::schur_family;

    #[test]
    fn json_round_trip() {
        let coloring = Coloring::from_colors(2, &[0, 1, 1, 0]).unwrap();
        let cert = Certificate::extremal(&schur_family(), 2, coloring);
        let json = cert.to_json();
        assert!(json.contains("\"kind\": \"extremal\""));
        assert!(json.contains("\"tool_version\""));
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back, cert);
    }
}
