use std::sync::OnceLock;

use g2t_core::flat_model::{build_flat_model, shipped_asset_dir, FlatModelBundle};
use g2t_core::io::parse_document;
use g2t_core::tensor::{MetricField, TensorField};
use g2t_exact::{parse_expr, AlgScalar, RatFn};

fn bundle() -> &'static FlatModelBundle {
    static B: OnceLock<FlatModelBundle> = OnceLock::new();
    B.get_or_init(|| build_flat_model().expect("flat model builds"))
}

fn c(s: &str) -> RatFn {
    parse_expr(s).unwrap()
}

/// Set G2T_REGENERATE_ASSETS=1 to rewrite the committed files.
#[test]
fn assets_regenerate_byte_identically() {
    let dir = shipped_asset_dir();
    if std::env::var_os("G2T_REGENERATE_ASSETS").is_some() {
        bundle().write_assets(&dir).unwrap();
    }
    for (name, body) in bundle().asset_files() {
        let on_disk = std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(on_disk, body, "asset {name} differs from a fresh build");
    }
    let again = build_flat_model().unwrap();
    assert_eq!(again.asset_files(), bundle().asset_files());
}

#[test]
fn assets_parse_back() {
    let b = bundle();
    let files = b.asset_files();
    let get = |n: &str| files.iter().find(|(k, _)| *k == n).unwrap().1.clone();
    let m = parse_document(&get("metric.g2t")).unwrap().metric.unwrap();
    assert_eq!(m.g, MetricField::flat().g);
    let phi = parse_document(&get("phi0.g2t")).unwrap().tensors.remove("phi0").unwrap();
    assert_eq!(phi, b.phi0);
    let par = parse_document(&get("parallel.g2t")).unwrap().tractors.remove("Phi").unwrap();
    assert_eq!(par, b.parallel);
    let frame = parse_document(&get("frame.g2t")).unwrap();
    assert_eq!(frame.tensors["frame1"], b.distribution.frame[0]);
    assert_eq!(frame.tensors["frame2"], b.distribution.frame[1]);
    let scales = parse_document(&get("scales.g2t")).unwrap();
    assert_eq!(scales.scalars.len(), 7);
}

#[test]
fn origin_slots_of_phi() {
    let s = &bundle().origin_slots;
    let mut sigma = TensorField::covariant(2, 3, |_| RatFn::zero());
    sigma.set(&[0, 1], c("-sqrt3/3"));
    sigma.set(&[1, 0], c("sqrt3/3"));
    assert_eq!(s.sigma, sigma);
    let mu = s.mu.as_ref().unwrap();
    for a in 0..5 {
        let expected = if a == 2 { c("sqrt6/6") } else { RatFn::zero() };
        assert_eq!(mu.get(&[a]), &expected);
    }
}

#[test]
fn generic_form_at_origin() {
    let b = bundle();
    let at0 = &b.report.samples[0];
    assert!(at0.0.iter().all(|x| x.is_zero()));
    assert!(!at0.1.as_ref().unwrap().is_zero());
    assert!(b.report.samples_consistent);
    // φ₀∧μ∧ρ of a parallel section is constant.
    assert!(b.report.generic_form.constant_value().is_some());
}

#[test]
fn derived_constants() {
    let b = bundle();
    // Each constant is recomputed from the raw objects rather than read back.
    let mu_slot = b.parallel.mu.as_ref().unwrap();
    let factor = b.parallel_mu_factor.clone();
    assert_eq!(mu_slot.scale(&factor).comps(), b.report.mu.comps());
    assert!(!b.c.is_zero());
    assert!(!b.kappa.is_zero());
    assert_eq!(b.report.mu_factor, Some(factor));
    assert!(b.report.rho_factor.is_some());
    assert_ne!(b.c, AlgScalar::zero());
}
