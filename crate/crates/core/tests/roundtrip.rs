mod common;

use common::Gen;
use proptest::prelude::*;
use pts_core::term::{alpha_eq, substitute, Term, Var};
use pts_core::{parse_term, print_term};

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "x", "y", "x'", "_", "_'", "f"]).prop_map(str::to_string)
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::sort("*")),
        Just(Term::sort("BOX")),
        name().prop_map(Term::var),
        name().prop_map(|x| Term::Var(Var::tagged(x, "*"))),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (name(), inner.clone(), inner.clone()).prop_map(|(x, a, b)| Term::prod(x, a, b)),
            (name(), inner.clone(), inner).prop_map(|(x, a, b)| Term::abs(x, a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn printed_terms_parse_back(t in term()) {
        let back = parse_term(&print_term(&t)).unwrap();
        prop_assert!(alpha_eq(&t, &back), "{} reparsed as {}", t, back);
    }

    #[test]
    fn substitution_free_variables(t in term(), x in name(), u in term()) {
        let out = substitute(&t, &x, &u);
        let mut allowed = t.free_vars();
        if allowed.remove(&x) {
            allowed.extend(u.free_vars());
        }
        prop_assert_eq!(out.free_vars(), allowed);
    }

    #[test]
    fn substitution_identities(t in term(), x in name(), u in term()) {
        prop_assert!(alpha_eq(&substitute(&t, &x, &Term::var(&x)), &t));
        if !t.occurs_free(&x) {
            prop_assert!(alpha_eq(&substitute(&t, &x, &u), &t));
        }
    }

    #[test]
    fn substitution_respects_alpha(x in name(), u in term(), body in term()) {
        // renaming a binder to a name nowhere in sight gives an α-equal term
        let t = Term::abs("y", Term::sort("*"), body.clone());
        let renamed = Term::abs("unused", Term::sort("*"), substitute(&body, "y", &Term::var("unused")));
        prop_assert!(alpha_eq(&t, &renamed));
        prop_assert!(alpha_eq(&substitute(&t, &x, &u), &substitute(&renamed, &x, &u)));
    }
}

#[test]
fn seeded_round_trip() {
    let mut g = Gen::new(0x9a55);
    for i in 0..1000 {
        let depth = g.rng_range(0, 5) as u32;
        let t = g.raw_term(depth);
        let printed = print_term(&t);
        let back = parse_term(&printed).unwrap_or_else(|e| panic!("term {i}: `{printed}`: {e}"));
        assert!(alpha_eq(&t, &back), "term {i}: `{printed}` reparsed as `{back}`");
        assert_eq!(print_term(&back), printed);
    }
}
