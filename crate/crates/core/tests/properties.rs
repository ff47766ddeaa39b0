use std::sync::OnceLock;

use proptest::prelude::*;

use lrc_forge::analysis::{
    bound_eq2, bound_eq5, main_bound, min_distance_exhaustive, min_distance_rank_oracle, min_weight_sample,
    relative_defect, BoundParams,
};
use lrc_forge::automorphism::verify_automorphism;
use lrc_forge::descriptor;
use lrc_forge::forge::{BuildOptions, LrcCode};
use lrc_forge::gf::{Fe, Field};
use lrc_forge::matrix::Matrix;
use lrc_forge::presets::{build_preset, Preset, PresetParams};
use lrc_forge::repair::{encode, in_code, repair_erasures, repair_erasures_in_order, repair_symbol, Codeword};

fn herm1() -> &'static LrcCode {
    static CODE: OnceLock<LrcCode> = OnceLock::new();
    CODE.get_or_init(|| {
        let p = PresetParams { q: Some(3), u: Some(4), ..Default::default() };
        build_preset(Preset::HermitianI, &p, BuildOptions::default()).unwrap()
    })
}

fn normtrace() -> &'static LrcCode {
    static CODE: OnceLock<LrcCode> = OnceLock::new();
    CODE.get_or_init(|| {
        let p = PresetParams { q: Some(2), l: Some(3), ..Default::default() };
        build_preset(Preset::NormTrace, &p, BuildOptions::default()).unwrap()
    })
}

fn fields() -> Vec<(Field, Field)> {
    [(2, 3), (3, 2), (2, 4), (5, 2), (7, 1)]
        .iter()
        .map(|&(p, m)| (Field::new(p, m).unwrap(), Field::new_untabulated(p, m).unwrap()))
        .collect()
}

fn message(code: &LrcCode, seed: &[u32]) -> Vec<Fe> {
    let q = code.field.order() as u32;
    (0..code.k()).map(|i| Fe(seed[i % seed.len()].wrapping_mul(i as u32 + 7) % q)).collect()
}

proptest! {
    #[test]
    fn field_axioms(f in 0usize..5, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let (t, u) = &fields()[f];
        let q = t.order() as u32;
        let (a, b, c) = (Fe(a % q), Fe(b % q), Fe(c % q));
        prop_assert_eq!(t.mul(a, b), t.mul(b, a));
        prop_assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
        prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
        prop_assert_eq!(t.add(a, t.neg(a)), Fe::ZERO);
        // tables and polynomial arithmetic agree
        prop_assert_eq!(t.mul(a, b), u.mul(a, b));
        prop_assert_eq!(t.pow(a, 5), u.pow(a, 5));
        if a != Fe::ZERO {
            prop_assert_eq!(t.mul(a, t.inv(a).unwrap()), Fe::ONE);
            prop_assert_eq!(t.inv(a).unwrap(), u.inv(a).unwrap());
        }
    }

    #[test]
    fn frobenius_is_additive(f in 0usize..5, a in any::<u32>(), b in any::<u32>()) {
        let (t, _) = &fields()[f];
        let q = t.order() as u32;
        let p = t.characteristic() as u64;
        let (a, b) = (Fe(a % q), Fe(b % q));
        prop_assert_eq!(t.pow(t.add(a, b), p), t.add(t.pow(a, p), t.pow(b, p)));
    }

    #[test]
    fn generators_preserve_places(which in 0usize..2) {
        let code = if which == 0 { herm1() } else { normtrace() };
        for g in code.generators.iter().flatten() {
            prop_assert!(verify_automorphism(&code.field, g, &code.places));
        }
    }

    #[test]
    fn repair_matches_every_set(seed in prop::collection::vec(any::<u32>(), 1..6), which in 0usize..2) {
        let code = if which == 0 { herm1() } else { normtrace() };
        let truth = encode(code, &message(code, &seed)).unwrap();
        let word = Codeword::from_values(&truth);
        for c in 0..code.n() {
            for s in 0..code.recovery[c].len() {
                prop_assert_eq!(repair_symbol(code, &word, c, s).unwrap(), truth[c]);
            }
        }
    }

    #[test]
    fn tampered_helper_changes_repair(seed in prop::collection::vec(any::<u32>(), 1..6), pos in 0usize..24, bump in 1u32..9) {
        let code = herm1();
        let truth = encode(code, &message(code, &seed)).unwrap();
        for s in 0..code.recovery[pos].len() {
            let helper = code.recovery[pos][s].members[0];
            let mut values = truth.clone();
            values[helper] = code.field.add(values[helper], Fe(bump));
            let word = Codeword::from_values(&values);
            prop_assert_ne!(repair_symbol(code, &word, pos, s).unwrap(), truth[pos]);
        }
    }

    #[test]
    fn peeling_is_order_independent(seed in prop::collection::vec(any::<u32>(), 1..6), erased in prop::collection::btree_set(0usize..24, 0..10)) {
        let code = herm1();
        let truth = encode(code, &message(code, &seed)).unwrap();
        let mut word = Codeword::from_values(&truth);
        for &e in &erased {
            word.erase(e);
        }
        let (a, report) = repair_erasures(code, &word);
        let reversed: Vec<usize> = (0..code.n()).rev().collect();
        let (b, _) = repair_erasures_in_order(code, &word, &reversed);
        prop_assert_eq!(a.erased_positions(), b.erased_positions());
        for o in &report.outcomes {
            if let Some(v) = a.get(o.position) {
                prop_assert_eq!(v, truth[o.position]);
            }
        }
        if let Some(values) = a.values() {
            prop_assert!(in_code(code, &values));
        }
    }

    #[test]
    fn main_bound_dominates_equal_locality_bound(k in 3u64..40, r in 2u64..10, delta in 1u64..6, extra in 0u64..100) {
        let n = k + delta + extra;
        let p = BoundParams::new(n, k, vec![r; delta as usize]).unwrap();
        prop_assert!(main_bound(&p) >= bound_eq5(n, k, r, delta).unwrap());
        prop_assert_eq!(bound_eq2(n, k, r, 0).unwrap(), (n - k + 1) as i64);
        if main_bound(&p) >= 1 {
            prop_assert_eq!(relative_defect(&p, main_bound(&p)).unwrap(), num_rational::Ratio::from_integer(0));
        }
    }

    #[test]
    fn distance_routes_agree(rows in prop::collection::vec(prop::collection::vec(0u32..4, 8), 1..4), seed in any::<u64>()) {
        let field = Field::new(2, 2).unwrap();
        let g = Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(Fe).collect()).collect());
        let keep = g.independent_rows(&field);
        prop_assume!(!keep.is_empty());
        let g = g.select_rows(&keep);
        let exh = min_distance_exhaustive(&field, &g).unwrap();
        prop_assert_eq!(exh, min_distance_rank_oracle(&field, &g).unwrap());
        prop_assert!(min_weight_sample(&field, &g, 64, seed).unwrap() >= exh);
    }

    #[test]
    fn descriptor_round_trip(which in 0usize..2) {
        let code = if which == 0 { herm1() } else { normtrace() };
        let text = descriptor::to_string(code);
        let back = descriptor::from_str(&text).unwrap();
        prop_assert_eq!(&back.matrix, &code.matrix);
        prop_assert_eq!(&back.recovery, &code.recovery);
        prop_assert_eq!(descriptor::to_string(&back), text);
    }

    #[test]
    fn rank_is_bounded(rows in prop::collection::vec(prop::collection::vec(0u32..9, 6), 1..6)) {
        let field = Field::new(3, 2).unwrap();
        let g = Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(Fe).collect()).collect());
        let rank = g.rank(&field);
        prop_assert!(rank <= g.rows().min(g.cols()));
        prop_assert_eq!(g.independent_rows(&field).len(), rank);
    }
}

#[test]
fn designed_distance_is_a_lower_bound() {
    for code in [herm1(), normtrace()] {
        let d = min_distance_exhaustive(&code.field, &code.matrix).unwrap();
        assert!(d as i64 >= code.d_design);
        let p = BoundParams::new(code.n() as u64, code.k() as u64, code.localities.iter().map(|&r| r as u64).collect())
            .unwrap();
        assert!(d as i64 <= main_bound(&p));
    }
}
