//! End-to-end analysis of a pair of polynomials on one window.

use super::assemble::{assemble_components, AssemblyInput, IntersectionReport};
use super::contour::longest_shared_run;
use super::genericity::{genericity_screen, interior_fraction, THIN_FRACTION};
use super::order_polytope::order_polytope;
use super::raster_ops::{intersect_rasters, IntersectionGrid};
use super::vertices::{extract_vertices, ExtractOptions, VertexExtraction};
use crate::amoeba::{label_components, raster::dilate, raster_amoeba_with, AmoebaRaster, RasterOptions, Window};
use crate::error::Result;
use crate::exec::Exec;
use crate::laurent::LaurentPolynomial;
use crate::spine::{build_spine, SpineData};
use crate::tropical::{stable_intersection, StableIntersection};

/// Dilation in cells applied to thin amoebas in degenerate mode.
pub const FATTEN_CELLS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct PairConfig {
    pub window: Window,
    pub angle_samples: usize,
    pub quad_n: usize,
    pub seed: u64,
    pub exec: Exec,
    pub degenerate: bool,
    pub merge_radius: f64,
    pub refine_factor: usize,
}

impl PairConfig {
    pub fn new(window: Window) -> Self {
        PairConfig {
            window,
            angle_samples: 256,
            quad_n: 256,
            seed: 0,
            exec: Exec::default(),
            degenerate: false,
            merge_radius: 3.0,
            refine_factor: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PairAnalysis {
    pub rasters: [AmoebaRaster; 2],
    pub grid: IntersectionGrid,
    pub extraction: VertexExtraction,
    pub spines: [std::result::Result<SpineData, String>; 2],
    pub stable: std::result::Result<StableIntersection, String>,
    pub report: IntersectionReport,
}

pub fn analyze_pair(f1: &LaurentPolynomial, f2: &LaurentPolynomial, cfg: &PairConfig) -> Result<PairAnalysis> {
    let w = cfg.window;
    let opts = RasterOptions { angle_samples: cfg.angle_samples, seed: cfg.seed, exec: cfg.exec, ..RasterOptions::default() };
    let mut raw = [raster_amoeba_with(f1, &w, &opts)?, raster_amoeba_with(f2, &w, &opts)?];
    let fractions = [interior_fraction(&w, &raw[0].membership), interior_fraction(&w, &raw[1].membership)];
    let mut fatten = [0usize; 2];
    if cfg.degenerate {
        for k in 0..2 {
            if fractions[k] < THIN_FRACTION {
                fatten[k] = FATTEN_CELLS;
                for _ in 0..FATTEN_CELLS {
                    raw[k].membership = dilate(&w, &raw[k].membership);
                }
            }
        }
    }
    let [a, b] = raw;
    let rasters = [label_components(a, f1, cfg.exec), label_components(b, f2, cfg.exec)];
    let grid = intersect_rasters(&rasters[0], &rasters[1])?;
    let eo = ExtractOptions { merge_radius: cfg.merge_radius, refine_factor: cfg.refine_factor, raster: opts, fatten };
    let extraction = extract_vertices(&rasters[0], &rasters[1], f1, f2, &eo)?;

    let spines = [
        build_spine(f1, &rasters[0], cfg.quad_n, cfg.exec).map_err(|e| e.to_string()),
        build_spine(f2, &rasters[1], cfg.quad_n, cfg.exec).map_err(|e| e.to_string()),
    ];
    let stable = match (&spines[0], &spines[1]) {
        (Ok(s1), Ok(s2)) => stable_intersection(&s1.curve, &s2.curve, cfg.seed).map_err(|e| e.to_string()),
        (Err(e), _) => Err(format!("spine of f1: {e}")),
        (_, Err(e)) => Err(format!("spine of f2: {e}")),
    };

    let mut report = assemble_components(&AssemblyInput {
        polynomials: [f1, f2],
        rasters: [&rasters[0], &rasters[1]],
        grid: &grid,
        extraction: &extraction,
        stable: stable.as_ref().map_err(|e| e.clone()),
        degenerate: cfg.degenerate,
    });
    order_polytope(&mut report, [f1, f2]);
    let shared = longest_shared_run(&w, &rasters[0].membership, &rasters[1].membership);
    report.verdicts.extend(genericity_screen(shared, fractions, &extraction, cfg.degenerate));
    for (k, r) in rasters.iter().enumerate() {
        report.warnings.extend(r.warnings.iter().map(|m| format!("amoeba {}: {m}", k + 1)));
    }
    for (k, s) in spines.iter().enumerate() {
        if let Ok(s) = s {
            report.warnings.extend(s.warnings.iter().map(|m| format!("spine {}: {m}", k + 1)));
        }
    }
    if fatten.iter().any(|f| *f > 0) {
        report.warnings.push(format!("degenerate mode: thin amoebas dilated by {fatten:?} cells"));
    }
    Ok(PairAnalysis { rasters, grid, extraction, spines, stable, report })
}
