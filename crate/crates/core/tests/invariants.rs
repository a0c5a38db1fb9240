use crosscap::checker::{check_script, RewriteVerdict};
use crosscap::homology::{self, F2Matrix};
use crosscap::script::{Script, BUNDLED};
use crosscap::surface::{validate_table, Family};
use crosscap::{CurveId, Genus, Letter, SurfaceModel, Word};
use proptest::prelude::*;

fn model(g: u32) -> SurfaceModel {
    SurfaceModel::bundled(Genus::new(g).unwrap()).unwrap()
}

#[test]
fn verified_steps_are_never_refuted() {
    for g in 13..=30 {
        let m = model(g);
        for name in BUNDLED {
            let script = Script::bundled(name).unwrap();
            if !script.admits(m.genus()) {
                continue;
            }
            let r = check_script(&script, &m).unwrap();
            for st in &r.steps {
                if st.verdict.is_ok() {
                    assert!(!st.oracle.is_refuted(), "{name} g={g} {}", st.step);
                }
            }
        }
    }
}

#[test]
fn fingerprint_is_genus_invariant() {
    let script = Script::bundled("thm_main").unwrap();
    let f14 = check_script(&script, &model(14)).unwrap().fingerprint;
    let f20 = check_script(&script, &model(20)).unwrap().fingerprint;
    assert!(!f14.is_empty());
    assert_eq!(f14, f20);
}

#[test]
fn bundled_table_is_consistent() {
    for g in 11..=40 {
        let m = model(g);
        assert!(validate_table(&m.table, &m.facts).is_empty(), "g={g}");
    }
}

#[test]
fn axiom_steps_list_their_axioms() {
    let r = check_script(&Script::bundled("thm_main").unwrap(), &model(16)).unwrap();
    let with_axioms: Vec<&str> = r
        .steps
        .iter()
        .filter(|s| matches!(s.verdict, RewriteVerdict::UsesAxiom { .. }))
        .map(|s| s.step.as_str())
        .collect();
    assert_eq!(with_axioms, ["A1C1inv"]);
}

#[test]
fn structured_report_field_names() {
    let r = check_script(&Script::bundled("thm_main2").unwrap(), &model(13)).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    let step = &v["steps"][0];
    for key in ["step", "verdict", "oracle", "axioms", "facts"] {
        assert!(step.get(key).is_some(), "missing {key}");
    }
    assert_eq!(step["verdict"]["status"], "Verified");
    assert_eq!(step["oracle"]["verdict"], "ConsistentMod2");
}

fn letter() -> impl Strategy<Value = Letter> {
    let exp = prop_oneof![-3i32..=-1, 1i32..=3];
    let curve = prop::sample::select(vec![(Family::A, 1), (Family::A, 2), (Family::B, 1), (Family::B, 4), (Family::C, 2), (Family::Gamma, 3), (Family::Gamma, 8)]);
    prop_oneof![
        exp.clone().prop_map(Letter::rotation),
        (1u32..14, exp.clone()).prop_map(|(i, e)| Letter::transposition(i, e)),
        (curve, exp).prop_map(|((f, i), e)| Letter::twist(CurveId::new(f, i), e)),
    ]
}

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 0..16)
}

/// Reference reduction: repeatedly merge the leftmost adjacent pair.
fn reduce_leftmost(mut ls: Vec<Letter>) -> Vec<Letter> {
    loop {
        let Some(i) = (0..ls.len().saturating_sub(1)).find(|&i| ls[i].kind == ls[i + 1].kind) else { return ls };
        let e = ls[i].exponent + ls[i + 1].exponent;
        ls.remove(i + 1);
        if e == 0 {
            ls.remove(i);
        } else {
            ls[i].exponent = e;
        }
    }
}

proptest! {
    #[test]
    fn reduction_is_confluent(ls in letters(), split in 0usize..16) {
        let cut = split.min(ls.len());
        let whole = Word::new(ls.clone());
        let pieces = Word::new(ls[..cut].to_vec()).multiply(&Word::new(ls[cut..].to_vec()));
        prop_assert_eq!(&whole, &pieces);
        let reference = reduce_leftmost(ls);
        prop_assert_eq!(whole.letters(), reference.as_slice());
    }

    #[test]
    fn multiplication_is_associative(a in letters(), b in letters(), c in letters()) {
        let (a, b, c) = (Word::new(a), Word::new(b), Word::new(c));
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
    }

    #[test]
    fn product_length_bound(a in letters(), b in letters()) {
        let (a, b) = (Word::new(a), Word::new(b));
        prop_assert!(a.multiply(&b).len() <= a.len() + b.len());
    }

    #[test]
    fn inversion_laws(a in letters(), b in letters()) {
        let (a, b) = (Word::new(a), Word::new(b));
        prop_assert_eq!(a.invert().invert(), a.clone());
        prop_assert!(a.multiply(&a.invert()).is_empty());
        prop_assert_eq!(a.multiply(&b).invert(), b.invert().multiply(&a.invert()));
    }

    #[test]
    fn display_parse_round_trip(a in letters()) {
        let w = Word::new(a);
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    #[test]
    fn inverse_word_has_inverse_matrix(a in letters()) {
        let m = model(14);
        let w = Word::new(a);
        let x = homology::word_matrix(&w, m.genus(), &m.table).unwrap();
        let y = homology::word_matrix(&w.invert(), m.genus(), &m.table).unwrap();
        prop_assert!(x.mul(&y).is_identity());
        prop_assert_eq!(x.inverse().unwrap(), y);
        prop_assert_eq!(F2Matrix::parse_dump(&x.dump()).unwrap(), x);
    }
}
