//! The enumerator against a naive recursive oracle.

use std::collections::HashSet;

use msos_core::terms::{count_terms, enumerate_terms, Arg, Construct, Grammar, Param, Seeds};
use msos_core::*;

fn full() -> Language {
    Language::build(&LanguageDefinition::full(), &Repository::standard()).unwrap()
}

fn leaves(p: Param, seeds: &Seeds) -> Vec<Arg> {
    match p {
        Param::Value => seeds.values.iter().cloned().map(Arg::Value).collect(),
        Param::Map => seeds.maps.iter().cloned().map(Arg::Value).collect(),
        Param::Name => seeds.names.iter().cloned().map(Arg::Name).collect(),
        Param::Sort(_) => unreachable!(),
    }
}

/// Every term of `sort` with height <= `h`, by direct recursion.
fn naive(g: &Grammar, seeds: &Seeds, sort: Sort, h: usize) -> Vec<Term> {
    if h == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for c in g.of_sort(sort) {
        let mut tuples: Vec<Vec<Arg>> = vec![Vec::new()];
        for &p in c.params() {
            let options: Vec<Arg> = match p {
                Param::Sort(s) => naive(g, seeds, s, h - 1).into_iter().map(Arg::Term).collect(),
                _ => leaves(p, seeds),
            };
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    options.iter().map(move |o| {
                        let mut t = t.clone();
                        t.push(o.clone());
                        t
                    })
                })
                .collect();
        }
        let c: &'static Construct = c;
        out.extend(tuples.into_iter().map(|args| c.inject(args).unwrap()));
    }
    out
}

fn agree(lang: &Language, sort: Sort, depth: usize) {
    let got = enumerate_terms(lang.grammar(), lang.seeds(), sort, depth);
    let expected: HashSet<Term> = naive(lang.grammar(), lang.seeds(), sort, depth).into_iter().collect();
    let got_set: HashSet<Term> = got.iter().cloned().collect();
    assert_eq!(got.len(), got_set.len(), "{sort} depth {depth}: duplicates");
    assert_eq!(got_set, expected, "{sort} depth {depth}");
    assert_eq!(count_terms(lang.grammar(), lang.seeds(), sort, depth), got.len() as u128);
    assert!(got.windows(2).all(|w| w[0].height() <= w[1].height()), "not ordered by height");
    assert!(got.iter().all(|t| t.height() <= depth && t.sort() == sort));
}

#[test]
fn full_language_matches_naive_oracle() {
    let lang = full();
    for (sort, depth) in [
        (Sort::Cmd, 2),
        (Sort::Exp, 3),
        (Sort::Dcl, 3),
        (Sort::Pcd, 2),
        (Sort::Prm, 3),
    ] {
        for d in 0..=depth {
            agree(&lang, sort, d);
        }
    }
}

#[test]
fn skip_seq_matches_naive_oracle() {
    let def = LanguageDefinition::skip_seq(vec![]);
    let lang = Language::build(&def, &Repository::standard()).unwrap();
    for d in 0..=5 {
        agree(&lang, Sort::Cmd, d);
    }
}

#[test]
fn exact_counts_by_hand() {
    let lang = full();
    // skip; throwing over 5 literals.
    assert_eq!(count_terms(lang.grammar(), lang.seeds(), Sort::Cmd, 1), 6);
    // lit over 5 literals, boundid and deref over 2 names.
    assert_eq!(count_terms(lang.grammar(), lang.seeds(), Sort::Exp, 1), 9);
    // env over 2 maps.
    assert_eq!(count_terms(lang.grammar(), lang.seeds(), Sort::Dcl, 1), 2);
    assert_eq!(count_terms(lang.grammar(), lang.seeds(), Sort::Pcd, 1), 0);
}
