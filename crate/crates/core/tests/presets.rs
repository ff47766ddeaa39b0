use lrc_forge::analysis::locality_audit;
use lrc_forge::forge::{BuildOptions, ForgeError};
use lrc_forge::presets::{build_preset, Preset, PresetParams};

fn p(q: u64) -> PresetParams {
    PresetParams { q: Some(q), ..Default::default() }
}

fn strict() -> BuildOptions {
    BuildOptions::default()
}

#[test]
fn hermitian_i_summary() {
    let c = build_preset(Preset::HermitianI, &PresetParams { u: Some(4), t2: Some(1), ..p(3) }, strict()).unwrap();
    assert_eq!(c.summary(), "[24, 3, ≥9; 2, 3] over GF(9)");
    assert_eq!(c.basis.len(), 3);
    // z = y^(u-1) is not fixed by the scaling factor; recorded, locality still holds
    assert_eq!(c.discrepancies.len(), 1);
    assert!(locality_audit(&c, None).passed());
}

#[test]
fn hermitian_i_ii_forces_t2() {
    let c = build_preset(Preset::HermitianIi, &p(3), strict()).unwrap();
    assert_eq!((c.n(), c.k(), c.d_design), (24, 3, 14));
    assert!(c.params.contains(&("t2".into(), 0)));
    let wrong = PresetParams { t2: Some(1), ..p(3) };
    assert!(matches!(build_preset(Preset::HermitianIi, &wrong, strict()), Err(ForgeError::Constraint { .. })));
    let low = build_preset(Preset::HermitianIi, &PresetParams { t1: Some(1), ..p(3) }, strict()).unwrap();
    assert!(low.notes.iter().any(|n| n.contains("t1 = 1")));
}

#[test]
fn hermitian_i_ii_at_five_is_not_local() {
    let pp = PresetParams { u: Some(3), ..p(5) };
    assert!(matches!(build_preset(Preset::HermitianIi, &pp, strict()), Err(ForgeError::NotLocal { .. })));
    let diag = build_preset(Preset::HermitianIi, &pp, BuildOptions { diagnostic: true }).unwrap();
    assert!(!locality_audit(&diag, None).passed());
}

#[test]
fn hermitian_ii_generic_dimension() {
    let pp = PresetParams { u: Some(4), t1: Some(2), t2: Some(2), ..p(3) };
    let c = build_preset(Preset::HermitianII, &pp, strict()).unwrap();
    assert_eq!((c.k(), c.max_pole, c.d_design), (6, 14, 10));
    assert!(c.discrepancies.iter().any(|d| d.starts_with("dimension: claimed 9")));
    assert!(locality_audit(&c, None).passed());
}

#[test]
fn gen_hermitian_degenerates_to_hermitian() {
    let g = build_preset(Preset::GenHermitian, &p(3), strict()).unwrap();
    let h = build_preset(Preset::HermitianII, &PresetParams { u: Some(4), ..p(3) }, strict()).unwrap();
    assert_eq!(g.places, h.places);
    assert_eq!(g.matrix, h.matrix);
    assert_eq!(g.d_design, 14);
}

#[test]
fn normtrace_length_and_localities() {
    let pp = PresetParams { l: Some(3), t1: Some(1), t2: Some(1), ..p(2) };
    let c = build_preset(Preset::NormTrace, &pp, strict()).unwrap();
    assert_eq!((c.n(), c.k()), (28, 4));
    let mut loc = c.localities.clone();
    loc.sort();
    assert_eq!(loc, vec![3, 6]);
    assert!(!c.discrepancies.iter().any(|d| d.starts_with("localities")));
    assert!(locality_audit(&c, None).passed());
}

#[test]
fn overlapping_factors() {
    let strict_err = build_preset(Preset::GenHermitianNt, &PresetParams::default(), strict());
    assert!(matches!(strict_err, Err(ForgeError::Injectivity { .. })));
    let diag = BuildOptions { diagnostic: true };
    let seq = build_preset(Preset::GenHermitianNt, &PresetParams::default(), diag).unwrap();
    assert_eq!(seq.localities, vec![5, 2]);
    let exc = PresetParams { exclusive: true, ..Default::default() };
    let exc = build_preset(Preset::GenHermitianNt, &exc, diag).unwrap();
    assert_eq!(exc.localities, vec![4, 2]);
    assert!(seq.discrepancies.iter().any(|d| d.starts_with("localities: claimed [6, 2]")));
}

#[test]
fn gk_three() {
    let c = build_preset(Preset::Gk, &p(3), strict()).unwrap();
    assert_eq!(c.summary(), "[6048, 6, ≥5977; 2, 3, 6] over GF(729)");
    assert!(c.discrepancies.is_empty());
    let sample: Vec<usize> = (0..c.n()).step_by(97).collect();
    assert!(locality_audit(&c, Some(&sample)).passed());
}
