//! Screens for the genericity assumptions behind the intersection checks.

use super::assemble::Verdict;
use super::vertices::VertexExtraction;
use crate::amoeba::{AmoebaRaster, Window};
use crate::error::Error;

/// Longest shared boundary run, in squares, still treated as a crossing.
pub const MAX_SHARED_RUN: usize = 5;
/// Below this fraction of interior member cells an amoeba counts as thin.
pub const THIN_FRACTION: f64 = 0.05;

/// Fraction of member cells whose eight neighbours are all members.
pub fn interior_fraction(w: &Window, membership: &[bool]) -> f64 {
    let members = membership.iter().filter(|m| **m).count();
    if members == 0 {
        return 0.0;
    }
    let interior = (0..w.len())
        .filter(|&c| {
            let (i, j) = w.coords(c);
            membership[c]
                && !w.on_edge(i, j)
                && (j - 1..=j + 1).all(|b| (i - 1..=i + 1).all(|a| membership[w.index(a, b)]))
        })
        .count();
    interior as f64 / members as f64
}

pub fn is_thin(r: &AmoebaRaster) -> bool {
    interior_fraction(&r.window, &r.membership) < THIN_FRACTION
}

/// Screen verdicts. `shared_run` comes from the boundary comparison and
/// `fractions` from the rasters before any fattening.
pub fn genericity_screen(shared_run: usize, fractions: [f64; 2], extraction: &VertexExtraction, degenerate: bool) -> Vec<Verdict> {
    let mut out = Vec::new();
    out.push(Verdict::skipped(
        "irreducibility",
        "Genericity: irreducible polynomials",
        if degenerate {
            "not checked; degenerate mode was requested for this input".into()
        } else {
            "not checked".into()
        },
    ));
    out.push(Verdict::new(
        "finite_boundary_intersection",
        "Genericity: boundaries meet in finitely many points",
        shared_run <= MAX_SHARED_RUN,
        format!("longest shared boundary run is {shared_run} squares (limit {MAX_SHARED_RUN})"),
    ));
    let violations: Vec<String> = extraction
        .rejected
        .iter()
        .filter(|r| matches!(r.error, Error::GenericityViolated(_)))
        .map(|r| r.reason.clone())
        .collect();
    let others = extraction.rejected.len() - violations.len();
    out.push(Verdict::new(
        "unique_adjacent_component",
        "Genericity: each vertex touches one complement component per amoeba",
        violations.is_empty(),
        if violations.is_empty() {
            format!("no violations; {others} candidates rejected for other reasons")
        } else {
            format!("{} violations; {others} other rejections; {}", violations.len(), violations.join("; "))
        },
    ));
    let thin: Vec<String> = fractions
        .iter()
        .enumerate()
        .filter(|(_, f)| **f < THIN_FRACTION)
        .map(|(k, f)| format!("amoeba {} ({:.1}% interior cells)", k + 1, 100.0 * f))
        .collect();
    out.push(Verdict::new(
        "full_dimensional_amoebas",
        "Genericity: amoebas have nonempty interior",
        thin.is_empty(),
        if thin.is_empty() {
            format!("interior fractions {:.3} and {:.3}", fractions[0], fractions[1])
        } else {
            format!("thin membership, likely a measure-zero amoeba: {}", thin.join(", "))
        },
    ));
    out
}
