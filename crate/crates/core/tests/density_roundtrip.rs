use fracvar::density::{parse_density, Density, Monomial, MAX_EXPONENT};
use fracvar::Error;
use proptest::prelude::*;

const CORPUS: [&str; 50] = [
    "u",
    "ux",
    "u^2",
    "u^3",
    "u^5",
    "u*ux",
    "0.5*ux^2",
    "u^2 + ux^2",
    "3",
    "-u",
    "-2*u^2",
    "u - ux",
    "1 + u + u^2",
    "u*u",
    "ux*u",
    "u^2*ux^3",
    "2.5*u*ux^4",
    "3 - u - 2.5*u*ux^4",
    "u^12",
    "ux^12",
    "1e-3*u",
    "-1.5e2*ux",
    "0",
    "u - u",
    "+u",
    "  u  *  ux ",
    "u^1",
    "7*u^0",
    "u + u + u",
    "0.25*u^4 - 0.25*u^4 + ux",
    "1.0*u",
    "u^2*u^3",
    "ux*ux*ux",
    "4*u*ux + 2*u",
    "-u^3 + 2*u^3",
    "10",
    "0.1 + 0.2*u",
    "u^6*ux^6",
    "5*ux - 3*u^2*ux",
    "u^2 - 2*u*ux + ux^2",
    "2*u^2*ux^2 + u",
    ".5*u",
    "6.02e23*u",
    "1E2*ux",
    "u*ux^2*u",
    "-0.5",
    "u^11*ux",
    "1 - ux^2",
    "3*u*ux^2",
    "u + 1e-300",
];

#[test]
fn corpus_round_trips() {
    for src in CORPUS {
        let f = parse_density(src).unwrap_or_else(|e| panic!("`{src}`: {e}"));
        let printed = f.to_string();
        let again: Density = printed
            .parse()
            .unwrap_or_else(|e| panic!("`{printed}`: {e}"));
        assert_eq!(again, f, "`{src}` printed as `{printed}`");
        assert_eq!(again.to_string(), printed);
    }
}

#[test]
fn canonical_forms() {
    assert_eq!(
        parse_density("u*ux").unwrap(),
        parse_density("ux*u").unwrap()
    );
    assert_eq!(parse_density("u - u").unwrap().to_string(), "0");
    assert_eq!(
        parse_density("2*ux*u^2 + u*ux*u").unwrap().to_string(),
        "3*u^2*ux"
    );
    assert_eq!(
        parse_density("u^2*u^3 + 2*u^5").unwrap(),
        Density::power(3.0, 5)
    );
}

#[test]
fn rejects_malformed() {
    for src in [
        "", "u^", "u^-1", "2 u", "u**2", "u^13", "u^7*u^6", "3*u*2", "x", "u +", "1e", "(u)",
    ] {
        match parse_density(src) {
            Err(Error::Parse { offset, .. }) => assert!(offset <= src.len(), "`{src}`"),
            other => panic!("`{src}` gave {other:?}"),
        }
    }
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (-1e3f64..1e3, 0..=MAX_EXPONENT / 2, 0..=MAX_EXPONENT / 2)
        .prop_map(|(c, p, q)| Monomial::new(c, p, q))
}

proptest! {
    #[test]
    fn printed_density_parses_back(terms in prop::collection::vec(monomial(), 0..6)) {
        let f = Density::from_terms(terms).unwrap();
        let again: Density = f.to_string().parse().unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn partials_are_linear(a in prop::collection::vec(monomial(), 0..4), b in prop::collection::vec(monomial(), 0..4), u in -2.0f64..2.0, ux in -2.0f64..2.0) {
        let f = Density::from_terms(a).unwrap();
        let g = Density::from_terms(b).unwrap();
        let sum = f.add(&g);
        let lhs = sum.partial_u().value(u, ux);
        let rhs = f.partial_u().value(u, ux) + g.partial_u().value(u, ux);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        let lhs = sum.partial_ux().value(u, ux);
        let rhs = f.partial_ux().value(u, ux) + g.partial_ux().value(u, ux);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }
}
