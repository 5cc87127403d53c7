//! Certificate replay.
//!
//! Extremal certificates are re-checked by rerunning the witness search,
//! which shares no code with the DFS that produced them. Forced
//! certificates are replayed by a deliberately naive enumerator — every
//! coloring, every assignment, no pruning — as long as the estimated
//! work fits the replay budget; beyond it only internal consistency is
//! checked and the result is marked attested rather than replayed.

use crate::pattern::{parse_family, Assignment, PatternFamily};

use super::certificate::{Certificate, CertificateKind};
use super::witness::find_witness;
use super::Coloring;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// The claim was re-established from scratch.
    Replayed,
    /// Only structural consistency was checked.
    Attested,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub valid: bool,
    pub mode: VerifyMode,
    pub detail: String,
}

/// Work cap for forced-certificate replay, in naive enumeration steps
/// (colorings times assignments).
#[derive(Debug, Clone, Copy)]
pub struct ReplayBudget {
    pub max_steps: u64,
}

impl Default for ReplayBudget {
    fn default() -> Self {
        ReplayBudget { max_steps: 1 << 22 }
    }
}

pub fn verify_certificate(cert: &Certificate, budget: &ReplayBudget) -> VerifyReport {
    let family = match parse_family(&cert.family) {
        Ok(f) => f,
        Err(e) => {
            return VerifyReport {
                valid: false,
                mode: VerifyMode::Replayed,
                detail: format!("family does not parse: {e}"),
            }
        }
    };
    match &cert.kind {
        CertificateKind::Extremal { coloring } => verify_extremal(&family, cert, coloring),
        CertificateKind::Forced { stats } => {
            if cert.n == 0 || cert.r == 0 || cert.r > super::MAX_COLORS {
                return VerifyReport {
                    valid: false,
                    mode: VerifyMode::Attested,
                    detail: "forced certificate with out-of-range parameters".into(),
                };
            }
            let cost = naive_cost(&family, cert.r, cert.n);
            if cost <= budget.max_steps {
                let valid = naive_all_colorings_have_witness(&family, cert.r, cert.n);
                VerifyReport {
                    valid,
                    mode: VerifyMode::Replayed,
                    detail: format!(
                        "replayed {} colorings naively",
                        pow_u128(u128::from(cert.r), cert.n)
                    ),
                }
            } else {
                // Too large to replay: accept on structural grounds only.
                let valid = stats.nodes >= u64::from(cert.n);
                VerifyReport {
                    valid,
                    mode: VerifyMode::Attested,
                    detail: "replay budget exceeded; statistics consistency only".into(),
                }
            }
        }
        CertificateKind::Unknown { extremal } => match extremal {
            Some(coloring) => verify_extremal(&family, cert, coloring),
            None => VerifyReport {
                valid: true,
                mode: VerifyMode::Attested,
                detail: "unknown certificate carries no extremal coloring".into(),
            },
        },
    }
}

fn verify_extremal(family: &PatternFamily, cert: &Certificate, coloring: &Coloring) -> VerifyReport {
    if coloring.r() != cert.r {
        return VerifyReport {
            valid: false,
            mode: VerifyMode::Replayed,
            detail: "coloring color count disagrees with certificate".into(),
        };
    }
    match find_witness(family, coloring) {
        None => VerifyReport {
            valid: true,
            mode: VerifyMode::Replayed,
            detail: "witness search confirms the coloring is witness-free".into(),
        },
        Some(w) => VerifyReport {
            valid: false,
            mode: VerifyMode::Replayed,
            detail: format!(
                "monochromatic instance found: values {:?} in color {}",
                w.values, w.color
            ),
        },
    }
}

fn pow_u128(base: u128, exp: u32) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

fn naive_cost(family: &PatternFamily, r: u8, n: u32) -> u64 {
    let copies = family.expanded().copies.len() as u32;
    let colorings = pow_u128(u128::from(r), n);
    let assignments = pow_u128(u128::from(n), copies);
    u64::try_from(colorings.saturating_mul(assignments)).unwrap_or(u64::MAX)
}

/// The independent enumerator: every r-coloring of `[1..N]`, every total
/// assignment, straight evaluation.
fn naive_all_colorings_have_witness(family: &PatternFamily, r: u8, n: u32) -> bool {
    let expanded = family.expanded();
    let copies: Vec<String> = expanded.copies.iter().map(|c| c.name.clone()).collect();
    let mut colors = vec![0u8; n as usize];
    loop {
        let coloring = Coloring::from_colors(r, &colors).expect("colors in range");
        if !naive_has_witness(&expanded, &copies, &coloring) {
            return false;
        }
        // Odometer over base-r color words.
        let mut i = 0;
        loop {
            if i == colors.len() {
                return true;
            }
            colors[i] += 1;
            if colors[i] < r {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

fn naive_has_witness(
    expanded: &crate::pattern::ExpandedFamily,
    copies: &[String],
    coloring: &Coloring,
) -> bool {
    let n = coloring.n();
    let mut values = vec![1u64; copies.len()];
    'assignments: loop {
        let mut asg = Assignment::new();
        for (name, &v) in copies.iter().zip(&values) {
            asg.bind_str(name, v).expect("positive");
        }
        let usable = !expanded.distinct || expanded.check_distinct(&asg).is_ok();
        if usable {
            if let Ok(instance) = expanded.instantiate(&asg) {
                if instance.iter().all(|&v| v <= u64::from(n)) {
                    let as_u32: Vec<u32> = instance.iter().map(|&v| v as u32).collect();
                    if coloring.monochromatic(&as_u32).is_some() {
                        return true;
                    }
                }
            }
        }
        let mut i = 0;
        loop {
            if i == values.len() {
                break 'assignments;
            }
            values[i] += 1;
            if values[i] <= u64::from(n) {
                break;
            }
            values[i] = 1;
            i += 1;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::schur_family;
    use crate::search::certificate::ForcedStats;

    #[test]
    fn valid_extremal_certificate() {
        let coloring = Coloring::from_colors(2, &[0, 1, 1, 0]).unwrap();
        let cert = Certificate::extremal(&schur_family(), 2, coloring);
        let report = verify_certificate(&cert, &ReplayBudget::default());
        assert!(report.valid);
        assert_eq!(report.mode, VerifyMode::Replayed);
    }

    #[test]
    fn invalid_extremal_certificate_exposes_witness() {
        // x = y = 2 gives {2, 4}, both color 1.
        let coloring = Coloring::from_colors(2, &[0, 1, 1, 1]).unwrap();
        let cert = Certificate::extremal(&schur_family(), 2, coloring);
        let report = verify_certificate(&cert, &ReplayBudget::default());
        assert!(!report.valid);
        assert!(report.detail.contains("monochromatic"));
    }

    #[test]
    fn forced_certificate_replays() {
        let cert = Certificate::forced(
            &schur_family(),
            2,
            5,
            ForcedStats { nodes: 100, symmetry: true },
        );
        let report = verify_certificate(&cert, &ReplayBudget::default());
        assert!(report.valid);
        assert_eq!(report.mode, VerifyMode::Replayed);

        // N = 4 is not forced; replay must reject.
        let bogus = Certificate::forced(
            &schur_family(),
            2,
            4,
            ForcedStats { nodes: 100, symmetry: true },
        );
        assert!(!verify_certificate(&bogus, &ReplayBudget::default()).valid);
    }

    #[test]
    fn oversized_forced_certificate_is_attested() {
        let cert = Certificate::forced(
            &schur_family(),
            2,
            60,
            ForcedStats { nodes: 1_000_000, symmetry: true },
        );
        let report = verify_certificate(&cert, &ReplayBudget::default());
        assert_eq!(report.mode, VerifyMode::Attested);
        assert!(report.valid);
    }
}
