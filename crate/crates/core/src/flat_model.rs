//! The flat-model fixture: the constant (2,3) metric, the parallel tractor
//! 3-form through Φ, its σ-slot φ₀, the recovered distribution and the
//! derived constants.

use std::fmt::Write as _;
use std::path::Path;

use g2t_exact::{AlgScalar, Rat, RatFn};

use crate::characterize::{
    characterize_two_form, fmt_point, growth_vector, proportionality, recover_distribution, symbol_algebra_check,
    CharacterizationReport, DistributionFrame,
};
use crate::error::CoreError;
use crate::io;
use crate::killing::{calibrate_constant, solve_polynomial_solutions, SolutionKind};
use crate::lie::{three_form_phi, PhiSplitting};
use crate::tensor::{Curvature, Geometry, TensorField};
use crate::tractor::{flat_parallel_solve, slots_from_threeform, TractorSection};

/// Polynomial degree bound for the parallel solve; the slots have degree ≤ 4.
pub const PARALLEL_DEGREE: u32 = 4;

#[derive(Clone, Debug)]
pub struct FlatModelBundle {
    pub geometry: Geometry,
    pub curvature: Curvature,
    pub samples: Vec<Vec<Rat>>,
    /// Slots of Φ read at the origin.
    pub origin_slots: TractorSection,
    pub parallel: TractorSection,
    pub phi0: TensorField,
    pub report: CharacterizationReport,
    pub distribution: DistributionFrame,
    pub growth: Vec<(usize, usize, usize)>,
    /// μ(φ₀) over the μ-slot of the parallel section.
    pub parallel_mu_factor: AlgScalar,
    pub scales: Vec<RatFn>,
    pub c: AlgScalar,
    pub kappa: AlgScalar,
}

fn check(ok: bool, what: &str) -> Result<(), CoreError> {
    if ok {
        Ok(())
    } else {
        Err(CoreError::Check(format!("flat model: {what}")))
    }
}

pub fn build_flat_model() -> Result<FlatModelBundle, CoreError> {
    build_flat_model_at(&io::default_samples())
}

pub fn build_flat_model_at(samples: &[Vec<Rat>]) -> Result<FlatModelBundle, CoreError> {
    let geometry = Geometry::flat();
    let curvature = geometry.curvature();
    let origin_slots = slots_from_threeform(&three_form_phi());
    let parallel = flat_parallel_solve(&origin_slots, PARALLEL_DEGREE)?;
    let phi0 = parallel.sigma.clone();
    let report = characterize_two_form(&geometry, &phi0, samples)?;
    check(report.decomposable, "φ₀∧φ₀ does not vanish")?;
    check(report.normal, "φ₀ is not normal")?;
    check(report.generic, "φ₀∧μ∧ρ vanishes")?;
    let distribution = recover_distribution(&geometry, &phi0, samples)?;
    let mut growth = Vec::with_capacity(samples.len());
    for p in samples {
        let gv = growth_vector(&distribution.frame, p)?;
        check(gv == (2, 3, 5), &format!("growth {gv:?} at {}", fmt_point(p)))?;
        let sym = symbol_algebra_check(&distribution.frame, p)?;
        check(sym.first_iso && sym.second_iso, &format!("symbol algebra at {}", fmt_point(p)))?;
        growth.push(gv);
    }
    let parallel_mu_factor = proportionality(&report.mu, parallel.mu.as_ref().expect("k = 2 has a μ slot"))
        .ok_or_else(|| CoreError::Check("flat model: μ(φ₀) is not a constant multiple of the μ-slot".into()))?;
    let aes = solve_polynomial_solutions(SolutionKind::AlmostEinstein, &geometry, 2)?;
    let scales: Vec<RatFn> = aes.basis.iter().map(|s| s.scalar_value().clone()).collect();
    let c = calibrate_constant(&geometry, &phi0, &scales)?;
    let kappa = PhiSplitting::new()?.kappa;
    Ok(FlatModelBundle {
        geometry,
        curvature,
        samples: samples.to_vec(),
        origin_slots,
        parallel,
        phi0,
        report,
        distribution,
        growth,
        parallel_mu_factor,
        scales,
        c,
        kappa,
    })
}

fn opt(x: &Option<AlgScalar>) -> String {
    x.as_ref().map_or_else(|| "none".into(), |v| v.to_string())
}

impl FlatModelBundle {
    /// The asset files as (file name, contents), in a fixed order.
    pub fn asset_files(&self) -> Vec<(&'static str, String)> {
        let mut frame = String::new();
        for (i, v) in self.distribution.frame.iter().enumerate() {
            frame.push_str(&io::serialize_tensor(&format!("frame{}", i + 1), v));
        }
        for (i, v) in self.distribution.derived.iter().enumerate() {
            frame.push_str(&io::serialize_tensor(&format!("derived{}", i + 1), v));
        }
        let mut scales = String::new();
        for (i, s) in self.scales.iter().enumerate() {
            scales.push_str(&io::serialize_scalar(&format!("scale{}", i + 1), s, 1));
        }
        vec![
            ("metric.g2t", io::serialize_metric(&self.geometry.metric)),
            ("phi0.g2t", io::serialize_tensor("phi0", &self.phi0)),
            ("origin_slots.g2t", io::serialize_tractor("Phi", &self.origin_slots)),
            ("parallel.g2t", io::serialize_tractor("Phi", &self.parallel)),
            ("frame.g2t", frame),
            ("scales.g2t", scales),
            ("samples.txt", io::serialize_samples(&self.samples)),
            ("manifest.txt", self.manifest()),
        ]
    }

    pub fn manifest(&self) -> String {
        let r = &self.report;
        let mut m = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(m, "{k} = {v}");
        };
        kv("metric.g2t", "MetricField::flat".into());
        kv("origin_slots.g2t", "slots_from_threeform(three_form_phi())".into());
        kv("parallel.g2t", format!("flat_parallel_solve(origin slots, degree {PARALLEL_DEGREE})"));
        kv("phi0.g2t", "sigma slot of parallel.g2t".into());
        kv("frame.g2t", "recover_distribution(flat metric, phi0, samples)".into());
        kv("scales.g2t", "solve_polynomial_solutions(almost Einstein, flat metric, degree 2)".into());
        kv("samples.txt", "io::default_samples".into());
        kv("decomposable", r.decomposable.to_string());
        kv("normal", r.normal.to_string());
        kv("generic_form", r.generic_form.to_string());
        kv("growth", self.growth.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>().join(" "));
        kv("mu_over_l0_mu_slot", opt(&r.mu_factor));
        kv("rho_over_l0_rho_slot", opt(&r.rho_factor));
        kv("mu_over_parallel_mu_slot", self.parallel_mu_factor.to_string());
        kv("calibration_c", self.c.to_string());
        kv("double_insertion_kappa", self.kappa.to_string());
        m
    }

    pub fn write_assets(&self, dir: &Path) -> Result<(), CoreError> {
        std::fs::create_dir_all(dir).map_err(|e| CoreError::Input(format!("{}: {e}", dir.display())))?;
        for (name, body) in self.asset_files() {
            let p = dir.join(name);
            std::fs::write(&p, body).map_err(|e| CoreError::Input(format!("{}: {e}", p.display())))?;
        }
        Ok(())
    }
}

/// Location of the committed assets inside this crate.
pub fn shipped_asset_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets").join("flat_model")
}
