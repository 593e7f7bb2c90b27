use plane_sheaves::exact::{rat, Form};
use plane_sheaves::presentation::{CohomologyProfile, HilbertData, Presentation, PresentationJson};
use plane_sheaves::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random(source: &[i64], target: &[i64], seed: u64) -> Presentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Presentation::from_fn(source.to_vec(), target.to_vec(), |_, _, k| Form::random(k, 9, &mut rng)).unwrap()
}

fn f(s: &str) -> Form {
    s.parse().unwrap()
}

fn sextic() -> Presentation {
    Presentation::new(vec![-4], vec![2], vec![vec![f("X^6 + Y^6 + Z^6 - 3*X^2*Y^2*Z^2")]]).unwrap()
}

#[test]
fn validation() {
    let p = random(&[-2; 5], &[-1, -1, -1, -1, 0], 1);
    assert_eq!(p.rows(), 5);
    let bad = Presentation::new(vec![-1], vec![0], vec![vec![f("X^2")]]);
    assert!(matches!(bad, Err(Error::EntryDegree { row: 0, col: 0, found: 2, expected: 1 })));
    let neg = Presentation::new(vec![0], vec![-1], vec![vec![f("1")]]);
    assert!(matches!(neg, Err(Error::EntryDegree { expected: -1, .. })));
    // unsorted input is sorted with the matrix permuted along
    let q = Presentation::new(vec![-1, -2], vec![0, -1], vec![vec![f("X"), f("Y^2")], vec![f("1"), f("Z")]]).unwrap();
    assert_eq!(q.source(), &[-2, -1]);
    assert_eq!(q.target(), &[-1, 0]);
    assert_eq!(q.entry(0, 0), &f("Z"));
    assert_eq!(q.entry(1, 0), &f("Y^2"));
}

#[test]
fn hilbert_data() {
    assert_eq!(random(&[-2; 5], &[-1, -1, -1, -1, 0], 2).hilbert().unwrap(), HilbertData { r: 6, chi: 1 });
    assert_eq!(sextic().hilbert().unwrap(), HilbertData { r: 6, chi: 3 });
    let line = Presentation::new(vec![-1], vec![0], vec![vec![f("X")]]).unwrap();
    assert_eq!(line.hilbert().unwrap(), HilbertData { r: 1, chi: 1 });
    let wide = random(&[-1], &[0, 0], 3);
    assert!(matches!(wide.hilbert(), Err(Error::NotOneDimensional(_))));
}

#[test]
fn injectivity() {
    let diag = Presentation::new(vec![-1, -1], vec![0, 0], vec![vec![f("X"), f("0")], vec![f("0"), f("Y")]]).unwrap();
    assert!(diag.is_injective());
    let same = Presentation::new(vec![-1, -1], vec![0, 0], vec![vec![f("X"), f("X")], vec![f("Y"), f("Y")]]).unwrap();
    assert!(!same.is_injective());
    assert!(random(&[-2; 3], &[0; 3], 4).is_injective());
}

#[test]
fn twisted_cohomology() {
    let x5 = random(&[-4, -1], &[0, 1], 5);
    assert_eq!(x5.h0_twist(0), 4);
    assert_eq!(x5.h0_twist(-1), 1);
    assert_eq!(x5.h1_twist(0).unwrap(), 3);
    let s = sextic();
    assert_eq!(s.h0_twist(-1), 3);
    assert_eq!(s.h1_twist(0).unwrap(), 3);
    assert_eq!(s.h0_twist(-5), 0);
    let x0 = random(&[-2; 5], &[-1, -1, -1, -1, 0], 6);
    assert_eq!(x0.h1_twist(0).unwrap(), 0);
    assert_eq!(x0.h0_twist(0), 1);
}

#[test]
fn graded_pieces() {
    let s = sextic();
    let g0 = s.graded_piece(0).unwrap();
    assert_eq!((g0.ambient, g0.image.rank(), g0.dim()), (6, 0, 6));
    // O(-4+t) has no sections until t = 4, where the single relation appears
    let g2 = s.graded_piece(2).unwrap();
    assert_eq!((g2.ambient, g2.image.rank(), g2.dim()), (15, 0, 15));
    let g4 = s.graded_piece(4).unwrap();
    assert_eq!((g4.ambient, g4.image.rank(), g4.dim()), (28, 1, 27));
    let x0 = random(&[-2; 5], &[-1, -1, -1, -1, 0], 7);
    assert_eq!(x0.graded_piece(0).unwrap().dim(), 1);
}

#[test]
fn euler_invariant() {
    let s = sextic();
    assert_eq!(s.h0_omega().unwrap(), 8);
    // 8 - 3*6 + 10 + 3*3 - 1
    assert_eq!(s.h1_omega().unwrap(), 8);
    let t3x0 = random(&[-2; 3], &[0; 3], 8);
    assert_eq!(t3x0.h0_omega().unwrap(), 0);
    assert_eq!(t3x0.h1_omega().unwrap(), 0);
    let t2x6 = random(&[-4, 0], &[1, 1], 9);
    assert_eq!(t2x6.h0_omega().unwrap(), 6);
    let t1x0 = random(&[-2; 5], &[-1, -1, -1, -1, 0], 10);
    assert_eq!(t1x0.h1_omega().unwrap(), 4);
}

#[test]
fn profiles() {
    assert_eq!(
        sextic().profile().unwrap(),
        CohomologyProfile { h0_fm1: 3, h1_f: 3, h0_omega: 8, h1_f1: 1 }
    );
    assert_eq!(random(&[-2; 5], &[-1, -1, -1, -1, 0], 11).profile().unwrap().as_array(), [0, 0, 0, 0]);
    let p = random(&[-4, 0], &[1, 1], 12).profile().unwrap();
    assert_eq!((p.h0_fm1, p.h1_f, p.h0_omega), (2, 3, 6));
}

#[test]
fn duality_and_twist() {
    let d = sextic().dual();
    assert_eq!((d.source(), d.target()), (&[-5][..], &[1][..]));
    assert_eq!(d.hilbert().unwrap(), HilbertData { r: 6, chi: -3 });
    let sym = random(&[-2; 6], &[-1; 6], 13);
    assert_eq!(sym.dual().source(), sym.source());
    assert_eq!(sym.dual().target(), sym.target());
    let x3 = random(&[-4, -1, -1], &[0, 0, 0], 14).dual();
    assert_eq!((x3.source(), x3.target()), (&[-3, -3, -3][..], &[-2, -2, 1][..]));

    let t = sextic().twist(-1);
    assert_eq!((t.source(), t.target()), (&[-5][..], &[1][..]));
    assert_eq!(t.hilbert().unwrap().chi, -3);
    assert_eq!(sextic().twist(3).twist(-3), sextic());
}

#[test]
fn minimization() {
    // a unit entry cancels one summand on each side
    let p = random(&[-3, -3, -2], &[-2, -1, 1], 15);
    let m = p.minimize();
    assert_eq!((m.source(), m.target()), (&[-3, -3][..], &[-1, 1][..]));
    assert_eq!(m.hilbert().unwrap(), p.hilbert().unwrap());
    assert_eq!(m.profile().unwrap(), p.profile().unwrap());
}

#[test]
fn json_roundtrip() {
    let p = random(&[-3, -2, -2], &[-1, -1, 1], 16);
    let text = p.to_json();
    let back = Presentation::from_json(&text).unwrap();
    assert_eq!(back, p);
    assert_eq!(back.to_json(), text);
    let bad = r#"{"source":[-1],"target":[0],"matrix":[["X +"]]}"#;
    assert!(matches!(Presentation::from_json(bad), Err(Error::Parse { .. })));
    let j = PresentationJson::from(&sextic());
    assert_eq!(j.matrix[0][0], "X^6 - 3*X^2*Y^2*Z^2 + Y^6 + Z^6");
}

const SHAPES: &[(&[i64], &[i64])] = &[
    (&[-2, -2, -2, -2, -2], &[-1, -1, -1, -1, 0]),
    (&[-3, -2, -2], &[-1, 0, 0]),
    (&[-3, -3, -1, -1], &[-2, 0, 0, 0]),
    (&[-4, -1], &[0, 1]),
    (&[-3, -2, -1], &[0, 0, 0]),
    (&[-3, -3, 0], &[-2, 1, 1]),
    (&[-4], &[2]),
    (&[-3, -2, -2, -2], &[-1, -1, -1, 0]),
    (&[-4, -2], &[-1, 1]),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn twisted_cohomology_identities(shape in 0..SHAPES.len(), seed in 0u64..10_000) {
        let (s, t) = SHAPES[shape];
        let p = random(s, t, seed);
        prop_assume!(p.is_injective());
        let h = p.hilbert().unwrap();
        for k in -4..=4 {
            let h0 = p.h0_twist(k) as i64;
            let h1 = p.h1_twist(k).unwrap() as i64;
            prop_assert_eq!(h0 - h1, h.r * k + h.chi);
        }
        let d = p.dual();
        for k in -3..=3 {
            prop_assert_eq!(p.h1_twist(k).unwrap(), d.h0_twist(-k));
        }
        prop_assert_eq!(d.hilbert().unwrap(), HilbertData { r: h.r, chi: -h.chi });
        let dd = d.dual();
        prop_assert_eq!(dd.source(), p.source());
        prop_assert_eq!(dd.target(), p.target());
        prop_assert_eq!(p.twist(1).hilbert().unwrap().chi - h.chi, 6);
        let e = p.h0_omega().unwrap() as i64 - p.h1_omega().unwrap() as i64;
        prop_assert_eq!(e, 2 * h.chi - h.r);
    }

    #[test]
    fn invariants_under_group_action(shape in 0..SHAPES.len(), seed in 0u64..10_000) {
        let (s, t) = SHAPES[shape];
        let p = random(s, t, seed);
        prop_assume!(p.is_injective());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        // unipotent block-triangular automorphisms plus unit diagonal scalings
        let n = p.rows();
        let m = p.cols();
        let b: Vec<Vec<Form>> = (0..n).map(|i| (0..n).map(|i2| {
            let k = p.target()[i] - p.target()[i2];
            if i == i2 { Form::constant(rat(1 + (i as i64 % 3))) }
            else if k >= 0 && i2 < i { Form::random(k as u32, 3, &mut rng) }
            else { Form::zero(0) }
        }).collect()).collect();
        let a: Vec<Vec<Form>> = (0..m).map(|j2| (0..m).map(|j| {
            let k = p.source()[j2] - p.source()[j];
            if j == j2 { Form::constant(rat(2 - (j as i64 % 2) * 3)) }
            else if k >= 0 && j2 > j { Form::random(k as u32, 3, &mut rng) }
            else { Form::zero(0) }
        }).collect()).collect();
        let q = p.act(&b, &a).unwrap();
        prop_assert_eq!(q.h0_omega().unwrap(), p.h0_omega().unwrap());
        prop_assert_eq!(q.profile().unwrap(), p.profile().unwrap());
    }
}
