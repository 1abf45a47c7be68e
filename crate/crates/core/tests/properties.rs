use alkit::dispersionless::integrate_total_x_derivative;
use alkit::duality::hat;
use alkit::lambda_ops::{Direction, LambdaSeries};
use alkit::symkernel::{
    functional_canonical_form, gcd, total_x_derivative, variational_derivative, Odd, Target,
};
use alkit::report::{Status, SuiteReport};
use alkit::trihamiltonian::{p1, p2, p3, schouten_bracket};
use alkit::{Expr, Field, Var};
use proptest::prelude::*;

fn lattice_var() -> impl Strategy<Value = Expr> {
    (any::<bool>(), -2i32..=2).prop_map(|(p, j)| {
        Expr::var(Var::shifted(if p { Field::P } else { Field::Q }, j))
    })
}

fn coefficient() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

/// `c * x1 * ... * xn`, optionally divided by one `P[j]`.
fn lattice_term(laurent: bool) -> impl Strategy<Value = Expr> {
    let inv = if laurent {
        proptest::option::of(-2i32..=2).boxed()
    } else {
        Just(None).boxed()
    };
    (coefficient(), prop::collection::vec(lattice_var(), 0..=3), inv).prop_map(|(c, xs, inv)| {
        let mut t = Expr::int(c);
        for x in xs {
            t = t * x;
        }
        if let Some(j) = inv {
            t = t / Expr::var(Var::shifted(Field::P, j));
        }
        t
    })
}

fn lattice_poly(laurent: bool) -> impl Strategy<Value = Expr> {
    prop::collection::vec(lattice_term(laurent), 1..=4).prop_map(|ts| ts.into_iter().sum())
}

fn nonzero_poly() -> impl Strategy<Value = Expr> {
    lattice_poly(false).prop_filter("nonzero", |e| !e.is_zero())
}

fn jet_var() -> impl Strategy<Value = Expr> {
    (any::<bool>(), 0u32..=2).prop_map(|(a, l)| {
        Expr::var(Var::jet(if a { Field::U1 } else { Field::U2 }, l))
    })
}

fn jet_poly() -> impl Strategy<Value = Expr> {
    let term = (coefficient(), prop::collection::vec(jet_var(), 0..=3)).prop_map(|(c, xs)| {
        xs.into_iter().fold(Expr::int(c), |acc, x| acc * x)
    });
    prop::collection::vec(term, 1..=3).prop_map(|ts| ts.into_iter().sum())
}

/// Zeroth-order functions of `v1, v2, w = e^{v2}` with `v1^{-1}`, `w^{-1}`
/// and `log v1` allowed.
fn hydro_function() -> impl Strategy<Value = Expr> {
    let v = |f: Field| Expr::var(Var::jet(f, 0));
    let atom = prop_oneof![
        Just(v(Field::V1)),
        Just(v(Field::V2)),
        Just(v(Field::W)),
        Just(v(Field::V1).inv().unwrap()),
        Just(v(Field::W).inv().unwrap()),
        Just(Expr::log(&v(Field::V1)).unwrap()),
    ];
    let term = (coefficient(), prop::collection::vec(atom, 1..=2)).prop_filter_map("one log", |(c, xs)| {
        let logs = xs.iter().filter(|x| x.has_logs()).count();
        (logs <= 1).then(|| xs.into_iter().fold(Expr::int(c), |acc, x| acc * x))
    });
    prop::collection::vec(term, 1..=3).prop_map(|ts| ts.into_iter().sum())
}

fn status() -> impl Strategy<Value = Status> {
    prop_oneof![Just(Status::Pass), Just(Status::Fail), Just(Status::Skip)]
}

/// Finite series with polynomial coefficients at powers `-2..=2`.
fn finite_series() -> impl Strategy<Value = LambdaSeries> {
    prop::collection::vec((-2i32..=2, lattice_poly(false)), 1..=3)
        .prop_map(LambdaSeries::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_is_a_ring_automorphism(a in lattice_poly(true), b in nonzero_poly(), s in -3i32..=3) {
        prop_assert_eq!((&a * &b).shift(s).unwrap(), a.shift(s).unwrap() * b.shift(s).unwrap());
        prop_assert_eq!((&a + &b).shift(s).unwrap(), a.shift(s).unwrap() + b.shift(s).unwrap());
        prop_assert_eq!((&a / &b).shift(s).unwrap(), a.shift(s).unwrap() / b.shift(s).unwrap());
    }

    #[test]
    fn canonical_form_is_idempotent(h in lattice_poly(true)) {
        let c = functional_canonical_form(&h).unwrap();
        prop_assert_eq!(functional_canonical_form(&c).unwrap(), c);
    }

    #[test]
    fn canonical_form_kills_total_differences(h in lattice_poly(true), s in -3i32..=3) {
        let d = h.shift(1).unwrap() - &h;
        prop_assert!(functional_canonical_form(&d).unwrap().is_zero());
        prop_assert_eq!(
            functional_canonical_form(&h.shift(s).unwrap()).unwrap(),
            functional_canonical_form(&h).unwrap()
        );
    }

    #[test]
    fn variational_derivative_kills_total_differences(h in lattice_poly(true)) {
        let d = h.shift(1).unwrap() - &h;
        for f in [Field::P, Field::Q] {
            prop_assert!(variational_derivative(&d, Target::Even(f)).unwrap().is_zero());
        }
    }

    #[test]
    fn variational_derivative_kills_x_derivatives(h in jet_poly()) {
        let d = total_x_derivative(&h).unwrap();
        for f in [Field::U1, Field::U2] {
            prop_assert!(variational_derivative(&d, Target::Even(f)).unwrap().is_zero());
        }
    }

    #[test]
    fn odd_reordering_tracks_the_sign(
        perm in Just((0usize..4).collect::<Vec<_>>()).prop_shuffle(),
        coeff in lattice_poly(false),
    ) {
        let gens: Vec<Expr> = [(1u8, 0i32), (2, 0), (1, 1), (2, -1)]
            .iter()
            .map(|&(a, j)| Expr::odd(Odd::shifted(a, j)))
            .collect();
        let ordered = gens.iter().fold(coeff.clone(), |acc, g| acc * g);
        let shuffled = perm.iter().fold(coeff, |acc, &i| acc * &gens[i]);
        let mut inversions = 0;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let want = if inversions % 2 == 0 { ordered } else { -ordered };
        prop_assert_eq!(shuffled, want);
    }

    #[test]
    fn fractions_stay_reduced(a in lattice_poly(false), b in nonzero_poly(), c in lattice_poly(false), d in nonzero_poly()) {
        let e = &a / &b + &c / &d;
        let g = gcd(&[e.num(), e.den()]);
        prop_assert!(g.as_constant().is_some(), "gcd {} of {}", Expr::from(g.clone()), e);
        let f = &e * &(&b / &d);
        let g = gcd(&[f.num(), f.den()]);
        prop_assert!(g.as_constant().is_some());
    }

    #[test]
    fn residue_of_a_commutator_is_a_total_difference(x in finite_series(), y in finite_series()) {
        let c = x.compose(&y).unwrap().sub(&y.compose(&x).unwrap());
        let r = c.residue().unwrap();
        prop_assert!(functional_canonical_form(&r).unwrap().is_zero());
    }

    #[test]
    fn deeper_inverses_agree_inside_the_window(f in nonzero_poly(), y in finite_series()) {
        let b = LambdaSeries::from_terms([(0, Expr::one()), (-1, f)]);
        let short = b.truncated_inverse(3, Direction::Descending).unwrap();
        let long = b.truncated_inverse(5, Direction::Descending).unwrap();
        prop_assert!(short.agrees_with(&long));
        let ys = short.compose(&y).unwrap();
        let yl = long.compose(&y).unwrap();
        prop_assert!(ys.agrees_with(&yl));
        let id = b.compose(&short).unwrap();
        prop_assert!(id.agrees_with(&LambdaSeries::one()));
    }

    #[test]
    fn hat_is_an_involution(a in lattice_poly(true), b in nonzero_poly()) {
        let e = &a / &b;
        prop_assert_eq!(hat(&hat(&e).unwrap()).unwrap(), e);
    }

    #[test]
    fn integration_inverts_the_x_derivative(f in hydro_function()) {
        let df = total_x_derivative(&f).unwrap();
        let g = integrate_total_x_derivative(&df).unwrap();
        prop_assert_eq!(total_x_derivative(&g).unwrap(), df);
    }

    #[test]
    fn report_json_round_trips(
        suite in "[a-z]{1,8}",
        checks in prop::collection::vec(
            ("[ -~]{0,16}", status(), proptest::option::of("[ -~]{0,24}"), 0u32..100_000),
            0..6,
        ),
    ) {
        let mut r = SuiteReport::new(suite);
        for (name, st, res, ms) in checks {
            r.push(name, st, res, f64::from(ms) / 1000.0);
        }
        let text = r.to_json();
        let back = SuiteReport::from_json(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn bivector_bracket_is_symmetric(
        terms in prop::collection::vec((coefficient(), 1u8..=2, 1u8..=2, 0i32..=2, lattice_var()), 1..=3),
        others in prop::collection::vec((coefficient(), 1u8..=2, 1u8..=2, 0i32..=2, lattice_var()), 1..=3),
    ) {
        let build = |ts: &[(i64, u8, u8, i32, Expr)]| -> Expr {
            let sum: Expr = ts
                .iter()
                .map(|(c, a, b, j, x)| {
                    Expr::int(*c) * x * Expr::odd(Odd::shifted(*a, 0)) * Expr::odd(Odd::shifted(*b, *j))
                })
                .sum();
            functional_canonical_form(&sum).unwrap()
        };
        let f = build(&terms);
        let g = build(&others);
        prop_assert_eq!(schouten_bracket(&f, &g).unwrap(), schouten_bracket(&g, &f).unwrap());
    }
}

#[test]
fn operators_are_antisymmetric() {
    for op in [p1(), p2(), p3()] {
        assert!(op.adjoint().unwrap().add(&op).is_zero());
    }
}
