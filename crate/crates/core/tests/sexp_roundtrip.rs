use msos_core::sexp::{parse_term, parse_value};
use msos_core::terms::{enumerate_terms, Enumerator};
use msos_core::*;
use proptest::prelude::*;

fn full() -> Language {
    Language::build(&LanguageDefinition::full(), &Repository::standard()).unwrap()
}

#[test]
fn printed_terms_parse_back() {
    let lang = full();
    for sort in lang.sorts().to_vec() {
        for t in enumerate_terms(lang.grammar(), lang.seeds(), sort, 2) {
            assert_eq!(parse_term(&t.to_string(), lang.grammar()).unwrap(), t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn deeper_terms_parse_back(i in 0usize..50_000) {
        let lang = full();
        let t = Enumerator::new(lang.grammar(), lang.seeds()).stream(Sort::Cmd, 3).nth(i).unwrap();
        prop_assert_eq!(parse_term(&t.to_string(), lang.grammar()).unwrap(), t);
    }

    #[test]
    fn integers_and_maps_parse_back(n in any::<i64>(), k in "[a-z][a-z0-9_]{0,6}", b in any::<bool>()) {
        prop_assume!(!["true", "false", "env"].contains(&k.as_str()));
        prop_assert_eq!(parse_value(&n.to_string()).unwrap(), Value::Int(n));
        let m = Value::map([(k.as_str(), Value::Int(n)), ("flag", Value::Bool(b))]);
        prop_assert_eq!(parse_value(&m.to_string()).unwrap(), m);
    }
}
