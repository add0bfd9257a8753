use goppa_core::elliptic::{weierstrass, DivisorClass, PlaneCubic};
use goppa_core::exactla::{proportional, Matrix, Subspace};
use goppa_core::gale::{double_dual_check, gale_transform, is_gale_dual, projective_transport, PointConfig};
use goppa_core::plane_curves::{cubic_pencil_ninth, gen_cubic_pencil_base, gen_general_points, rnc_eval, rnc_through};
use goppa_core::polyspace::{
    evaluate, multiply, plane_curve_intersection, vanishing_system, BasePointSpec, HomogPoly, MonomialBasis,
};
use goppa_core::surface_goppa::{
    dual_degree, eight_points_p4, gen_ci_conic, restrict_series, restriction_kernel,
};
use goppa_core::{Error, FieldElement, FieldSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::rational(),
        FieldSpec::prime(5).unwrap(),
        FieldSpec::prime(7).unwrap(),
        FieldSpec::prime(101).unwrap(),
    ]
}

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(fields())
}

fn random_matrix(field: FieldSpec, rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    // small entries with many zeros so that rank drops often
    let entries = (0..rows * cols)
        .map(|_| if rng.gen_bool(0.4) { field.zero() } else { field.from_i64(rng.gen_range(-4..=4)) })
        .collect();
    Matrix::new(field, rows, cols, entries).unwrap()
}

fn random_poly(field: FieldSpec, rng: &mut ChaCha8Rng, n: usize, d: usize) -> HomogPoly {
    let count = MonomialBasis::new(n, d).count();
    let coeffs = (0..count).map(|_| field.from_i64(rng.gen_range(-5..=5))).collect();
    HomogPoly::new(field, n, d, coeffs).unwrap()
}

fn random_vec(field: FieldSpec, rng: &mut ChaCha8Rng, n: usize) -> Vec<FieldElement> {
    (0..n).map(|_| field.from_i64(rng.gen_range(-9..=9))).collect()
}

fn random_invertible(field: FieldSpec, rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = Matrix::new(field, n, n, (0..n * n).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect()).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

fn random_complement(space: &Subspace, rng: &mut ChaCha8Rng) -> Subspace {
    let field = space.field();
    let n = space.ambient_dim();
    loop {
        let vecs: Vec<_> = (0..n - space.dim()).map(|_| random_vec(field, rng, n)).collect();
        let c = Subspace::span(field, n, &vecs).unwrap();
        if c.dim() == n - space.dim() && c.sum(space).unwrap().dim() == n {
            return c;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(field in field_strategy(), a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000) {
        let (a, b, c) = (field.from_i64(a), field.from_i64(b), field.from_i64(c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn parse_inverts_display(field in field_strategy(), n in -10_000i64..10_000, d in 1i64..50) {
        let x = field.from_i64(n).checked_div(&field.from_i64(d));
        if let Ok(x) = x {
            prop_assert_eq!(field.parse(&x.to_string()).unwrap(), x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rref_is_idempotent(field in field_strategy(), seed: u64, rows in 1usize..7, cols in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(field, &mut rng, rows, cols);
        let r = m.rref();
        prop_assert_eq!(r.matrix.rref().matrix, r.matrix);
    }

    #[test]
    fn kernel_is_annihilated(field in field_strategy(), seed: u64, rows in 1usize..7, cols in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(field, &mut rng, rows, cols);
        let k = m.kernel();
        prop_assert_eq!(k.dim() + m.rank(), cols);
        if k.dim() > 0 {
            prop_assert!(m.mul(k.basis()).unwrap().is_zero());
        }
    }

    #[test]
    fn complement_is_direct_sum(field in field_strategy(), seed: u64, n in 1usize..7, k in 0usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vecs: Vec<_> = (0..k).map(|_| random_matrix(field, &mut rng, 1, n).row(0).to_vec()).collect();
        let u = Subspace::span(field, n, &vecs).unwrap();
        let c = u.complement();
        prop_assert_eq!(u.dim() + c.dim(), n);
        prop_assert_eq!(u.sum(&c).unwrap().dim(), n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn vanishing_dim_is_coordinate_free(field in field_strategy(), seed: u64, d in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_invertible(field, &mut rng, 3);
        let mut base = Vec::new();
        let mut moved = Vec::new();
        for _ in 0..rng.gen_range(1..5) {
            let p = loop {
                let v = random_vec(field, &mut rng, 3);
                if v.iter().any(|x| !x.is_zero()) {
                    break v;
                }
            };
            let m = rng.gen_range(1..3);
            moved.push(BasePointSpec::new(t.mul_vec(&p).unwrap(), m).unwrap());
            base.push(BasePointSpec::new(p, m).unwrap());
        }
        let a = vanishing_system(field, 3, d, &base).unwrap();
        let b = vanishing_system(field, 3, d, &moved).unwrap();
        prop_assert_eq!(a.dim(), b.dim());
    }

    #[test]
    fn product_evaluates_as_product(field in field_strategy(), seed: u64, d1 in 0usize..4, d2 in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(field, &mut rng, 3, d1);
        let g = random_poly(field, &mut rng, 3, d2);
        let x = random_vec(field, &mut rng, 3);
        let fg = multiply(&f, &g).unwrap();
        prop_assert_eq!(evaluate(&fg, &x).unwrap(), &evaluate(&f, &x).unwrap() * &evaluate(&g, &x).unwrap());
    }

    #[test]
    fn gale_transform_is_orthogonal(field in field_strategy(), seed: u64, r in 1usize..4, s in 1usize..4) {
        let Ok(c) = gen_general_points(field, r + s + 2, r, seed) else { return Ok(()) };
        let g = gale_transform(&c).unwrap();
        prop_assert!(g.matrix().transpose().mul(c.matrix()).unwrap().is_zero());
    }

    #[test]
    fn gale_duality_survives_rescaling_and_basis_change(seed: u64, field in field_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Ok(a) = gen_general_points(field, 7, 3, seed) else { return Ok(()) };
        let b = gale_transform(&a).unwrap();
        let scales: Vec<_> = (0..7).map(|_| loop {
            let v = field.from_i64(rng.gen_range(-5..=5));
            if !v.is_zero() { break v; }
        }).collect();
        let rescaled = a.rescale(&scales).unwrap();
        let cert = is_gale_dual(&rescaled, &b).unwrap();
        prop_assert!(cert.as_ref().is_some_and(|c| c.verify()));
        let t = random_invertible(field, &mut rng, 4);
        let moved = PointConfig::new(a.matrix().mul(&t).unwrap()).unwrap();
        prop_assert!(is_gale_dual(&moved, &b).unwrap().is_some());
        let t2 = random_invertible(field, &mut rng, 3);
        let moved_b = PointConfig::new(b.matrix().mul(&t2).unwrap()).unwrap();
        prop_assert!(is_gale_dual(&a, &moved_b).unwrap().is_some());
    }

    #[test]
    fn transport_maps_points_onto_points(seed: u64, field in field_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Ok(src) = gen_general_points(field, 6, 3, seed) else { return Ok(()) };
        let t = random_invertible(field, &mut rng, 4);
        let dst = src.apply(&t).unwrap();
        let tr = projective_transport(&src, &dst).unwrap();
        let m = tr.unique_matrix().unwrap();
        for i in 0..src.len() {
            let img = m.mul_vec(src.point(i)).unwrap();
            prop_assert!(proportional(&img, dst.point(i)));
        }
    }

    #[test]
    fn double_dual_recovers_input(seed: u64, field in field_strategy(), r in 1usize..4) {
        let Ok(c) = gen_general_points(field, r + 4, r, seed) else { return Ok(()) };
        let dd = double_dual_check(&c).unwrap();
        prop_assert!(dd.certificate.verify());
        prop_assert!(dd.double_gale.same_points(&c.apply(&dd.transport).unwrap()));
    }

    #[test]
    fn dual_degree_is_an_involution(d1 in 1i64..7, d2 in 1i64..7, d in 0i64..10) {
        prop_assume!(d <= d1 + d2 - 3);
        prop_assert_eq!(dual_degree(dual_degree(d, d1, d2), d1, d2), d);
    }
}

fn group_order_check(field: FieldSpec, a: i64, b: i64, seed: u64) -> Result<(), TestCaseError> {
    let Ok(c) = PlaneCubic::new(weierstrass(field, a, b)) else { return Ok(()) };
    let p = field.modulus().unwrap() as i64;
    let n = c.order() as i64;
    prop_assert!((n - p - 1).pow(2) <= 4 * p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = c.points();
    let pick = |rng: &mut ChaCha8Rng| pts[rng.gen_range(0..pts.len())].clone();
    let o = c.origin().clone();
    for _ in 0..50 {
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        prop_assert_eq!(c.add(&x, &o).unwrap(), x.clone());
        prop_assert_eq!(c.add(&x, &c.neg(&x).unwrap()).unwrap(), o.clone());
        prop_assert_eq!(c.add(&x, &y).unwrap(), c.add(&y, &x).unwrap());
        prop_assert_eq!(
            c.add(&c.add(&x, &y).unwrap(), &z).unwrap(),
            c.add(&x, &c.add(&y, &z).unwrap()).unwrap()
        );
    }
    for _ in 0..10 {
        prop_assert_eq!(c.mul(n, &pick(&mut rng)).unwrap(), o.clone());
    }
    let h = c.line_class().unwrap();
    for _ in 0..10 {
        let (x, y) = (pick(&mut rng), pick(&mut rng));
        if x == y {
            continue;
        }
        let z = c.third_intersection(&x, &y).unwrap();
        prop_assert_eq!(c.abel_sum(&[x, y, z]).unwrap(), h.clone());
    }
    let t = pick(&mut rng);
    let brute: Vec<_> = pts.iter().filter(|a| c.add(a, a).unwrap() == t).cloned().collect();
    match c.square_roots(&DivisorClass { degree: 6, abel: t }) {
        Ok(roots) => {
            prop_assert_eq!(roots.len(), brute.len());
            for r in roots {
                prop_assert!(brute.contains(&r.abel));
            }
        }
        Err(Error::NoSolution) => prop_assert!(brute.is_empty()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn elliptic_group_over_f7(a in 0i64..7, b in 0i64..7, seed: u64) {
        group_order_check(FieldSpec::prime(7).unwrap(), a, b, seed)?;
    }

    #[test]
    fn elliptic_group_over_f101(a in 0i64..101, b in 0i64..101, seed: u64) {
        group_order_check(FieldSpec::prime(101).unwrap(), a, b, seed)?;
    }
}

fn rational_points(f: &HomogPoly, g: &HomogPoly) -> Vec<Vec<FieldElement>> {
    let field = f.field();
    let p = field.modulus().unwrap();
    let mut out = Vec::new();
    let mut candidates = Vec::new();
    for a in 0..p {
        for b in 0..p {
            candidates.push(vec![field.one(), field.from_u64(a), field.from_u64(b)]);
        }
    }
    for b in 0..p {
        candidates.push(vec![field.zero(), field.one(), field.from_u64(b)]);
    }
    candidates.push(vec![field.zero(), field.zero(), field.one()]);
    for c in candidates {
        if evaluate(f, &c).unwrap().is_zero() && evaluate(g, &c).unwrap().is_zero() {
            out.push(c);
        }
    }
    out
}

#[test]
fn intersection_matches_enumeration() {
    for p in [5u64, 7, 11] {
        let field = FieldSpec::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let mut agreed = 0;
        let mut tries = 0;
        while agreed < 20 {
            tries += 1;
            assert!(tries < 5000, "too few multiplicity-free instances over F_{p}");
            let (d1, d2) = [(1, 2), (2, 2), (1, 3), (2, 3)][rng.gen_range(0..4)];
            let f = random_poly(field, &mut rng, 3, d1);
            let g = random_poly(field, &mut rng, 3, d2);
            let brute = rational_points(&f, &g);
            match plane_curve_intersection(&f, &g, &[]) {
                Ok(mut got) => {
                    got.sort_by_key(|v| format!("{v:?}"));
                    let mut want: Vec<_> = brute.iter().map(|v| goppa_core::exactla::normalize(v)).collect();
                    want.sort_by_key(|v| format!("{v:?}"));
                    assert_eq!(got, want);
                    assert_eq!(got.len(), d1 * d2);
                    agreed += 1;
                }
                Err(Error::NonRationalExcess) | Err(Error::NonReducedIntersection) => {
                    assert!(brute.len() < d1 * d2)
                }
                Err(Error::CommonComponent) | Err(Error::DegenerateAfterRetries(_)) | Err(Error::InvalidInput(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn rnc_round_trip() {
    for field in [FieldSpec::rational(), FieldSpec::prime(101).unwrap()] {
        for s in 2..=5 {
            for seed in 0..10 {
                let pts = gen_general_points(field, s + 3, s, seed).unwrap();
                let param = rnc_through(&pts).unwrap();
                assert_eq!(param.transport_solution_dim, 1);
                for i in 0..pts.len() {
                    let img = rnc_eval(&param, param.source_points.point(i)).unwrap();
                    assert!(proportional(&img, pts.point(i)));
                }
            }
        }
    }
}

#[test]
fn ninth_point_is_on_the_whole_pencil() {
    let field = FieldSpec::prime(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..10 {
        let base = gen_cubic_pencil_base(field, seed).unwrap();
        let eight = base.points.select(&[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        let pn = cubic_pencil_ninth(&eight).unwrap();
        let (s, t) = (field.from_i64(rng.gen_range(1..100)), field.from_i64(rng.gen_range(1..100)));
        let comb = pn.generators[0].scale(&s).add(&pn.generators[1].scale(&t)).unwrap();
        for g in [&pn.generators[0], &pn.generators[1], &comb] {
            assert!(evaluate(g, &pn.ninth).unwrap().is_zero());
        }
    }
}

#[test]
fn every_complement_certifies() {
    let field = FieldSpec::prime(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut cases = 0;
    for seed in 0..20 {
        let ci = gen_ci_conic(field, 5, seed).unwrap();
        let (d, dd) = (2, dual_degree(2, 2, 5) as usize);
        let w = random_complement(&restriction_kernel(&ci.points, d).unwrap(), &mut rng);
        let kernel = restriction_kernel(&ci.points, dd).unwrap();
        let wperp = random_complement(&kernel, &mut rng);
        assert_eq!(w.dim() + wperp.dim(), ci.points.len());
        let a = restrict_series(&ci.points, d, &w).unwrap();
        let b = restrict_series(&ci.points, dd, &wperp).unwrap();
        assert!(is_gale_dual(&a, &b).unwrap().is_some_and(|c| c.verify()));
        cases += 1;
    }
    assert!(cases >= 10);
}

#[test]
fn eight_point_round_trip() {
    for field in [FieldSpec::rational(), FieldSpec::prime(101).unwrap()] {
        for seed in 0..10 {
            let pts = gen_general_points(field, 8, 4, seed).unwrap();
            let fac = eight_points_p4(&pts).unwrap();
            assert_eq!(fac.transport_solution_dim, 1);
            assert!(pts.same_points(&fac.images.apply(&fac.transport).unwrap()));
        }
    }
}
