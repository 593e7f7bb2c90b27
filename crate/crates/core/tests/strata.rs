use std::collections::{HashMap, HashSet};

use plane_sheaves::exact::Form;
use plane_sheaves::stability::{bounds_check, BoundsQuery, BoundsVerdict};
use plane_sheaves::strata::{
    classify, dim_audit, find_row, generate, normalize, normalize_chi, orbit_audit, registry, side_condition, verify_row,
    ChiStep, SideOutcome, SIDE_CONDITIONS,
};
use plane_sheaves::{Error, Presentation, QuotientKind};
use proptest::prelude::*;

fn f(s: &str) -> Form {
    s.parse().unwrap()
}

fn pres(source: &[i64], target: &[i64], rows: &[&[&str]]) -> Presentation {
    let m = rows.iter().map(|r| r.iter().map(|s| f(s)).collect()).collect();
    Presentation::new(source.to_vec(), target.to_vec(), m).unwrap()
}

type Expected = (i64, &'static str, [u64; 3], &'static [i64], &'static [i64], u32, &'static str);

// (χ, id, the three table conditions, source, target, codim, side condition)
const EXPECTED: [Expected; 28] = [
    (1, "X_0", [0, 0, 0], &[-2, -2, -2, -2, -2], &[-1, -1, -1, -1, 0], 0, "kronecker-11"),
    (1, "X_1", [0, 1, 0], &[-3, -2, -2], &[-1, 0, 0], 2, "orbit-forms"),
    (1, "X_2", [0, 1, 1], &[-3, -2, -2, -1], &[-1, -1, 0, 0], 4, "linear-block-mod-det"),
    (1, "X_3", [0, 2, 2], &[-3, -3, -1, -1], &[-2, 0, 0, 0], 6, "independent-11-minors-22"),
    (1, "X_4", [1, 2, 3], &[-3, -3, -2], &[-2, -1, 1], 6, "unit-or-linear-pair"),
    (1, "X_5", [1, 3, 4], &[-4, -1], &[0, 1], 8, "nonzero-12-not-dividing-22"),
    (2, "X_0", [0, 0, 0], &[-2, -2, -2, -2], &[-1, -1, 0, 0], 0, "orbit-forms"),
    (2, "X_1", [0, 0, 1], &[-2, -2, -2, -2, -1], &[-1, -1, -1, 0, 0], 3, "zero-12-kronecker-11-22"),
    (2, "X_2", [0, 1, 1], &[-3, -2, -1], &[0, 0, 0], 3, "orbit-forms"),
    (2, "X_3", [0, 1, 2], &[-3, -2, -1, -1], &[-1, 0, 0, 0], 5, "zero-13-not-dividing-11-minors-23"),
    (2, "X_4", [1, 1, 3], &[-3, -2, -2], &[-1, -1, 1], 5, "orbit-forms"),
    (2, "X_5", [1, 2, 4], &[-3, -3, -1], &[-2, 0, 1], 7, "independent-11-not-dividing-22-32"),
    (2, "X_6", [2, 3, 6], &[-4, 0], &[1, 1], 9, "independent-12"),
    (3, "X_0", [0, 0, 0], &[-2, -2, -2], &[0, 0, 0], 0, "nonzero-determinant"),
    (3, "X_1", [0, 0, 1], &[-2, -2, -2, -1], &[-1, 0, 0, 0], 1, "zero-12-orbit-forms"),
    (3, "X_2", [0, 0, 2], &[-2, -2, -2, -1, -1], &[-1, -1, 0, 0, 0], 4, "zero-12-kronecker-11-22"),
    (3, "X_3", [0, 1, 3], &[-3, -1, -1, -1], &[0, 0, 0, 0], 4, "kronecker-12"),
    (3, "X_3D", [1, 0, 3], &[-2, -2, -2, -2], &[-1, -1, -1, 1], 4, "kronecker-11"),
    (3, "X_4", [1, 1, 3], &[-3, -2], &[0, 1], 5, "nonzero-12"),
    (3, "X_5", [1, 1, 4], &[-3, -2, -1], &[-1, 0, 1], 6, "zero-13-two-non-divisors"),
    (3, "X_6", [2, 2, 6], &[-3, -3, 0], &[-2, 1, 1], 8, "independent-11-independent-22"),
    (3, "X_7", [3, 3, 8], &[-4], &[2], 10, "nonzero-determinant"),
    (0, "X_0", [0, 0, 0], &[-2, -2, -2, -2, -2, -2], &[-1, -1, -1, -1, -1, -1], 0, "nonzero-determinant"),
    (0, "X_1", [0, 1, 0], &[-3, -2, -2, -2], &[-1, -1, -1, 0], 1, "kronecker-12"),
    (0, "X_2", [0, 2, 0], &[-3, -3, -2, -1], &[-2, -1, 0, 0], 4, "unit-pattern-forms"),
    (0, "X_3", [0, 3, 1], &[-4, -1, -1], &[0, 0, 0], 7, "minors-12"),
    (0, "X_3D", [1, 3, 0], &[-3, -3, -3], &[-2, -2, 1], 7, "minors-11"),
    (0, "X_4", [1, 3, 1], &[-4, -2], &[-1, 1], 8, "nonzero-12"),
];

#[test]
fn registry_matches_expectations() {
    let rows = registry();
    assert_eq!(rows.len(), 28);
    for (row, e) in rows.iter().zip(EXPECTED.iter()) {
        let (chi, id, cond, source, target, codim, side) = *e;
        assert_eq!((row.chi, row.id.as_str()), (chi, id));
        let c = row.conditions;
        let third = if chi == 0 { c.h1_f1 } else { c.h0_omega };
        assert_eq!([c.h0_fm1, c.h1_f, third], cond.map(Some), "{} {}", chi, id);
        if chi == 0 {
            assert_eq!(c.h0_omega, None);
        } else {
            assert_eq!(c.h1_f1, None);
        }
        assert_eq!((row.source.as_slice(), row.target.as_slice()), (source, target), "{} {}", chi, id);
        assert_eq!(row.codim, codim, "{} {}", chi, id);
        assert_eq!(row.side_condition, side, "{} {}", chi, id);
        assert!(SIDE_CONDITIONS.contains(&row.side_condition.as_str()));
        let h = Presentation::from_fn(row.source.clone(), row.target.clone(), |_, _, k| Form::zero(k))
            .unwrap()
            .hilbert()
            .unwrap();
        assert_eq!((h.r, h.chi), (6, chi), "{} {}", chi, id);
    }
    let count = |chi| rows.iter().filter(|r| r.chi == chi).count();
    assert_eq!([count(1), count(2), count(3), count(0)], [6, 7, 9, 6]);
    let mut seen = HashSet::new();
    for r in rows {
        assert!(seen.insert((r.chi, r.conditions.as_array())), "duplicate conditions {} {}", r.chi, r.id);
    }
    let kinds: HashMap<_, _> = rows.iter().map(|r| ((r.chi, r.id.as_str()), r.quotient_kind)).collect();
    assert_eq!(kinds[&(2, "X_0")], QuotientKind::Good);
    assert_eq!(kinds[&(3, "X_1")], QuotientKind::Categorical);
    assert_eq!(kinds[&(0, "X_3D")], QuotientKind::Mixed);
    assert_eq!(kinds[&(1, "X_5")], QuotientKind::Geometric);
}

#[test]
fn chi_normalization() {
    assert_eq!(normalize_chi(6, 7).unwrap(), (1, vec![ChiStep::Twist(-1)]));
    assert_eq!(normalize_chi(6, 5).unwrap(), (1, vec![ChiStep::Dualize, ChiStep::Twist(1)]));
    assert_eq!(normalize_chi(6, -2).unwrap(), (2, vec![ChiStep::Dualize]));
    assert_eq!(normalize_chi(6, -3).unwrap(), (3, vec![ChiStep::Twist(1)]));
    assert_eq!(normalize_chi(6, 0).unwrap(), (0, vec![]));
    assert!(matches!(normalize_chi(5, 1), Err(Error::UnsupportedMultiplicity(5))));
}

#[test]
fn classify_examples() {
    let x4 = pres(&[-4, -2], &[-1, 1], &[&["X^3 + Y^2*Z", "X"], &["Y^5 + Z^5 - X*Y*Z^3", "Y^3 + X*Z^2"]]);
    let l = classify(&x4).unwrap();
    assert_eq!((l.chi, l.id.as_str(), l.codim), (0, "X_4", 8));
    let sextic = pres(&[-4], &[2], &[&["X^6 + Y^6 + Z^6"]]);
    let l = classify(&sextic).unwrap();
    assert_eq!((l.chi, l.id.as_str(), l.codim), (3, "X_7", 10));
    let x0 = generate(0, "X_0", 3).unwrap();
    assert_eq!(classify(&x0).unwrap().id, "X_0");
    // twisting and dualizing do not change the answer
    assert_eq!(classify(&sextic.twist(2)).unwrap().id, "X_7");
    let x5 = generate(1, "X_5", 0).unwrap();
    assert_eq!(classify(&x5.dual().twist(-3)).unwrap().id, "X_5");
    // a line and a quintic with unbalanced slopes
    let off = pres(&[-4, -2], &[-3, 3], &[&["X", "0"], &["0", "Y^5 + Z^5"]]);
    assert!(matches!(classify(&off), Err(Error::ProfileNotInTable { chi: 2, .. })));
    let not_injective = pres(&[-2, -2], &[-1, -1], &[&["X", "Y"], &["2*X", "2*Y"]]);
    assert!(matches!(classify(&not_injective), Err(Error::Precondition(_))));
}

#[test]
fn round_trip_on_every_row() {
    for row in registry() {
        for seed in 0..3 {
            let p = generate(row.chi, &row.id, seed).unwrap();
            assert_eq!(classify(&p).unwrap(), row.label());
            assert_eq!((p.source(), p.target()), (row.source.as_slice(), row.target.as_slice()));
            assert!(!side_condition(&p, row).unwrap().is_fail());
        }
    }
    assert!(matches!(generate(1, "X_9", 0), Err(Error::NoSuchRow { .. })));
}

#[test]
fn side_conditions() {
    let x5 = find_row(3, "X_5").unwrap();
    let good = pres(
        &[-3, -2, -1],
        &[-1, 0, 1],
        &[&["X^2 + Y*Z", "Y", "0"], &["X^3", "Z^2", "X"], &["Y^4", "X^3", "Z^2 + X*Y"]],
    );
    assert_eq!(side_condition(&good, x5).unwrap(), SideOutcome::Pass);
    let divides = good.with_matrix(vec![
        vec![f("X*Y"), f("Y"), f("0")],
        vec![f("X^3"), f("Z^2"), f("X")],
        vec![f("Y^4"), f("X^3"), f("Z^2 + X*Y")],
    ]);
    assert!(side_condition(&divides.unwrap(), x5).unwrap().is_fail());
    let nonzero_13 = good.with_matrix(vec![
        vec![f("X^2 + Y*Z"), f("Y"), f("1")],
        vec![f("X^3"), f("Z^2"), f("X")],
        vec![f("Y^4"), f("X^3"), f("Z^2 + X*Y")],
    ]);
    assert!(side_condition(&nonzero_13.unwrap(), x5).unwrap().is_fail());

    let x3 = find_row(1, "X_3").unwrap();
    let dependent = pres(
        &[-3, -3, -1, -1],
        &[-2, 0, 0, 0],
        &[
            &["X", "2*X", "0", "0"],
            &["Y^3", "Z^3", "X", "0"],
            &["X^3", "Y^3", "Y", "X"],
            &["Z^3", "X*Y*Z", "Z", "Y"],
        ],
    );
    assert!(side_condition(&dependent, x3).unwrap().is_fail());

    let x0 = find_row(2, "X_0").unwrap();
    let p = generate(2, "X_0", 1).unwrap();
    assert!(matches!(side_condition(&p, x0).unwrap(), SideOutcome::Unknown(_)));
    assert!(matches!(side_condition(&good, x0), Err(Error::Shape(_))));
}

#[test]
fn side_condition_variants_are_all_generated() {
    let mut patterns = HashSet::new();
    for seed in 0..40 {
        let p = generate(0, "X_2", seed).unwrap();
        patterns.insert((p.entry(0, 2).is_zero(), p.entry(1, 3).is_zero()));
    }
    assert_eq!(patterns.len(), 4);
    let mut units = HashSet::new();
    for seed in 0..20 {
        units.insert(generate(1, "X_4", seed).unwrap().entry(0, 2).is_zero());
    }
    assert_eq!(units.len(), 2);
}

#[test]
fn dimension_counts() {
    let anchor = |chi, id: &str| {
        let a = dim_audit(find_row(chi, id).unwrap());
        (a.dim_w, a.dim_g, a.dim_x, a.holds)
    };
    assert_eq!(anchor(1, "X_0"), (90, 53, 37, true));
    assert_eq!(anchor(1, "X_5"), (45, 16, 29, true));
    assert_eq!(anchor(2, "X_6"), (48, 20, 28, true));
    assert_eq!(anchor(3, "X_4"), (41, 9, 32, true));
    let naive_fails: Vec<_> =
        registry().iter().map(dim_audit).filter(|a| !a.holds).map(|a| (a.chi, a.id, a.dim_x, a.expected)).collect();
    assert_eq!(
        naive_fails,
        vec![
            (1, "X_3".to_string(), 25, 31),
            (1, "X_4".to_string(), 30, 31),
            (2, "X_5".to_string(), 27, 30),
            (3, "X_6".to_string(), 23, 29),
            (0, "X_2".to_string(), 28, 33),
        ]
    );
}

#[test]
fn orbit_counts_reproduce_codimensions() {
    let stab: HashMap<(i64, &str), i64> = [
        ((1, "X_2"), 3),
        ((1, "X_3"), 7),
        ((1, "X_4"), 2),
        ((2, "X_1"), 4),
        ((2, "X_3"), 3),
        ((2, "X_5"), 4),
        ((3, "X_1"), 2),
        ((3, "X_2"), 5),
        ((3, "X_5"), 2),
        ((3, "X_6"), 7),
        ((0, "X_2"), 6),
    ]
    .into_iter()
    .collect();
    for row in registry() {
        let a = orbit_audit(row, 11).unwrap();
        assert!(a.holds, "{} {}: {} vs {}", row.chi, row.id, a.dim_x, a.expected);
        assert_eq!(a.stabilizer, *stab.get(&(row.chi, row.id.as_str())).unwrap_or(&1), "{} {}", row.chi, row.id);
        assert_eq!(a.free_dim, dim_audit(row).dim_w - row.forced_zeros.len() as i64);
    }
}

#[test]
fn duality_closure() {
    let partner = |chi: i64, id: &str| match (chi, id) {
        (0 | 3, "X_3") => "X_3D".to_string(),
        (0 | 3, "X_3D") => "X_3".to_string(),
        (_, id) => id.to_string(),
    };
    for row in registry() {
        let p = generate(row.chi, &row.id, 5).unwrap();
        let d = normalize(&p.dual()).unwrap();
        let l = classify(&d).unwrap();
        assert_eq!((l.chi, l.id.clone()), (row.chi, partner(row.chi, &row.id)), "{} {}", row.chi, row.id);
    }
    let x3 = find_row(0, "X_3").unwrap();
    let shape = Presentation::from_fn(x3.source.clone(), x3.target.clone(), |_, _, k| Form::zero(k)).unwrap().dual();
    let x3d = find_row(0, "X_3D").unwrap();
    assert_eq!((shape.source(), shape.target()), (x3d.source.as_slice(), x3d.target.as_slice()));
}

#[test]
fn generated_profiles_are_allowed() {
    for row in registry() {
        let p = generate(row.chi, &row.id, 2).unwrap();
        let q = BoundsQuery::from_presentation(&p).unwrap();
        assert_eq!(bounds_check(&q), BoundsVerdict::Allowed, "{} {}", row.chi, row.id);
    }
}

#[test]
fn row_reports() {
    for row in registry() {
        let rep = verify_row(row.chi, &row.id, 2, 100).unwrap();
        assert!(rep.passed(), "{:?}", rep);
        assert!(rep.accepted <= rep.attempted);
    }
    assert!(verify_row(4, "X_0", 1, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn normalization_lands_in_range(chi in -60i64..60) {
        let (c, steps) = normalize_chi(6, chi).unwrap();
        prop_assert!((0..=3).contains(&c));
        let mut x = chi;
        for s in &steps {
            x = match s {
                ChiStep::Twist(k) => x + 6 * k,
                ChiStep::Dualize => -x,
            };
        }
        prop_assert_eq!(x, c);
    }

    #[test]
    fn classification_ignores_twists(idx in 0usize..28, seed in 0u64..1000, k in -3i64..=3, dual in any::<bool>()) {
        let row = &registry()[idx];
        let p = generate(row.chi, &row.id, seed).unwrap();
        let mut q = p.twist(k);
        // χ ∈ {1, 2} comes back through the dual; χ ∈ {0, 3} would swap X_3 and X_3D
        if dual && (row.chi == 1 || row.chi == 2) {
            q = q.dual();
        }
        prop_assert_eq!(classify(&q).unwrap(), row.label());
    }
}
