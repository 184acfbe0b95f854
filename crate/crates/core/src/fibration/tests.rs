use super::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn set(v: &[usize]) -> PointSet {
    v.iter().copied().collect()
}

fn arc(x: FiniteSpace) -> Arc<FiniteSpace> {
    Arc::new(x)
}

fn constant_square(rho: &MultiMap, betas: &[&[usize]]) -> CommutingSquare {
    // W is a point, the square lives on fence(betas.len() - 1).
    let w = arc(models::point());
    let alpha = MultiMap::constant(&w, rho.dom(), set(&[0])).unwrap();
    let k = betas.len() - 1;
    let dom = arc(FiniteSpace::product(&w, &models::fence(k)).unwrap());
    let beta = MultiMap::new(
        dom,
        rho.cod().clone(),
        betas.iter().map(|b| set(b)).collect(),
    )
    .unwrap();
    CommutingSquare::new(rho.clone(), alpha, k, beta).unwrap()
}

#[test]
fn square_validation() {
    let s = arc(models::sierpinski());
    let id = MultiMap::identity(&s);
    let w = arc(models::point());
    let alpha = MultiMap::constant(&w, &s, set(&[0])).unwrap();
    let dom = arc(FiniteSpace::product(&w, &models::fence(1)).unwrap());
    let beta = MultiMap::new(dom.clone(), s.clone(), vec![set(&[1]), set(&[1])]).unwrap();
    assert!(matches!(
        CommutingSquare::new(id.clone(), alpha.clone(), 1, beta),
        Err(Error::NotCommuting(_))
    ));
    let beta = MultiMap::new(dom, s.clone(), vec![set(&[0]), set(&[0])]).unwrap();
    assert!(matches!(
        CommutingSquare::new(id.clone(), alpha.clone(), 2, beta.clone()),
        Err(Error::DomainMismatch(_))
    ));
    let bad = MultiMap::new(s.clone(), s.clone(), vec![set(&[1]), set(&[0])]).unwrap();
    assert!(matches!(
        CommutingSquare::new(bad, alpha, 1, beta),
        Err(Error::NotContinuous(_))
    ));
}

#[test]
fn identity_lifts_by_beta() {
    let x = arc(models::circle4());
    let id = MultiMap::identity(&x);
    assert_eq!(
        fibration_certificate(&id),
        FibrationCertificate::Homeomorphism
    );
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let sq = random_square(&id, &arc(models::sierpinski()), 2, &mut rng).unwrap();
        let eta = find_filler(&sq, 100_000).unwrap();
        assert_eq!(eta.filler().unwrap().values(), sq.beta.values());
    }
}

#[test]
fn constant_map_filler_is_stationary() {
    // Values into a discrete space never move, so every square has β
    // constant and the filler is η(w, t) = α(w).
    let a = arc(models::circle4());
    let b = arc(models::discrete(3));
    let rho = MultiMap::constant(&a, &b, set(&[0, 2])).unwrap();
    assert_eq!(fibration_certificate(&rho), FibrationCertificate::Constant);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..=2 {
        for _ in 0..10 {
            let w = arc(models::random_space(3, rng.gen()).unwrap());
            let sq = random_square(&rho, &w, k, &mut rng).unwrap();
            let FillerOutcome::Found(eta) = find_filler(&sq, 100_000).unwrap() else {
                panic!("constant map must lift");
            };
            assert!(verify_filler(&sq, &eta));
            for x in 0..w.len() {
                for t in 0..=k {
                    assert_eq!(eta.value(sq.point(x, t)), sq.alpha.value(x));
                }
            }
        }
    }
}

#[test]
fn constant_map_with_movable_value_does_not_lift() {
    // ρ: point ⇉ Sierpiński with value {0,1}; β steps to {1} on the open end.
    let p = arc(models::point());
    let s = arc(models::sierpinski());
    let rho = MultiMap::constant(&p, &s, set(&[0, 1])).unwrap();
    assert_eq!(fibration_certificate(&rho), FibrationCertificate::None);
    let moving = constant_square(&rho, &[&[0, 1], &[1]]);
    assert!(matches!(
        find_filler(&moving, 1000).unwrap(),
        FillerOutcome::NotFound
    ));
    let still = constant_square(&rho, &[&[0, 1], &[0, 1]]);
    let eta = find_filler(&still, 1000).unwrap();
    assert_eq!(eta.filler().unwrap().values(), &[set(&[0]), set(&[0])]);
}

#[test]
fn multivalued_homeomorphism_does_not_lift() {
    // point ⇉ indiscrete(2) with value {0,1} has an m-continuous inverse,
    // yet β may shrink to {0}, which is no ρ-image.
    let p = arc(models::point());
    let b = arc(models::indiscrete(2));
    let rho = MultiMap::constant(&p, &b, set(&[0, 1])).unwrap();
    assert!(rho.classify().m_homeomorphism);
    assert_eq!(fibration_certificate(&rho), FibrationCertificate::None);
    let sq = constant_square(&rho, &[&[0, 1], &[0]]);
    assert!(matches!(
        find_filler(&sq, 1000).unwrap(),
        FillerOutcome::NotFound
    ));
}

#[test]
fn projections_lift_by_the_product_formula() {
    let s = models::sierpinski();
    let d = models::discrete(2);
    let a = arc(FiniteSpace::product(&s, &d).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for factor in 0..2 {
        let rho = MultiMap::projection(&a, factor).unwrap();
        assert_eq!(
            fibration_certificate(&rho),
            FibrationCertificate::Projection { factor }
        );
        let other = MultiMap::projection(&a, 1 - factor).unwrap();
        for _ in 0..20 {
            let w = arc(models::random_space(2, rng.gen()).unwrap());
            let sq = random_square(&rho, &w, 2, &mut rng).unwrap();
            let found = find_filler(&sq, 100_000).unwrap();
            assert!(verify_filler(&sq, found.filler().unwrap()));
            // η(w,t) = (β(w,t), Π₂∘α(w)), coordinates ordered by factor
            let nb = d.len();
            let formula = MultiMap::from_fn(sq.beta.dom().clone(), a.clone(), |p| {
                let keep = other.image(sq.alpha.value(p / (sq.k + 1)));
                if factor == 0 {
                    crate::space::set_product(sq.beta.value(p), keep, nb)
                } else {
                    crate::space::set_product(keep, sq.beta.value(p), nb)
                }
            });
            // The formula only reproduces α on the 0-slice when every α(w)
            // is a rectangle.
            let rectangular = (0..w.len()).all(|x| {
                let v = sq.alpha.value(x);
                let (p0, p1) = (
                    MultiMap::projection(&a, 0).unwrap(),
                    MultiMap::projection(&a, 1).unwrap(),
                );
                crate::space::set_product(p0.image(v), p1.image(v), nb) == v
            });
            assert_eq!(verify_filler(&sq, &formula), rectangular);
        }
    }
}

#[test]
fn pullback_examples() {
    let x = arc(models::circle4());
    let id = MultiMap::identity(&x);
    let pb = pullback(&id, &id).unwrap();
    assert_eq!(pb.pairs, vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
    assert!(pb.space.same_topology(&x));

    let a = arc(models::sierpinski());
    let rho = MultiMap::constant(&a, &x, set(&[1, 2])).unwrap();
    let gamma = MultiMap::constant(&x, &x, set(&[1, 2])).unwrap();
    assert_eq!(pullback(&rho, &gamma).unwrap().space.len(), 8);

    let alpha = models::antipodal_pairing();
    let pb = pullback(&alpha, &alpha).unwrap();
    assert_eq!(pb.space.len(), 8);
    assert!(pb.pi1.is_m_continuous() && pb.pi2.is_m_continuous());

    let other = MultiMap::constant(&x, &x, set(&[0])).unwrap();
    assert_eq!(pullback(&rho, &other).unwrap_err(), Error::EmptyPullback);
    let elsewhere = MultiMap::identity(&a);
    assert!(matches!(
        pullback(&rho, &elsewhere),
        Err(Error::DomainMismatch(_))
    ));
}

#[test]
fn section_examples() {
    let x = arc(models::circle4());
    let id = MultiMap::identity(&x);
    for c in x.open_sets().unwrap().into_iter().filter(|c| !c.is_empty()) {
        let found = section_exists(&id, c, 10_000).unwrap();
        let sec = found.section().unwrap();
        assert!(verify_section(&id, sec));
        let embed: Vec<usize> = c.iter().collect();
        for (i, &b) in embed.iter().enumerate() {
            assert_eq!(sec.delta.value(i), PointSet::singleton(b));
        }
    }

    let rho = MultiMap::constant(&x, &x, x.points()).unwrap();
    assert!(matches!(
        section_exists(&rho, x.points(), 10_000).unwrap(),
        SectionOutcome::NotFound
    ));

    let alpha = models::antipodal_pairing();
    assert!(matches!(
        section_exists(&alpha, set(&[0]), 10_000).unwrap(),
        SectionOutcome::NotFound
    ));

    assert!(matches!(
        section_exists(&id, set(&[1]), 10),
        Err(Error::NotOpen(_))
    ));
    assert_eq!(
        section_exists(&id, PointSet::EMPTY, 10).unwrap_err(),
        Error::EmptySubset
    );
}

#[test]
fn section_of_homeomorphism_is_its_inverse() {
    for seed in 0..20 {
        let x = models::random_space(4, seed).unwrap();
        let (_, h) = models::random_relabeling(&x, seed);
        let inv = h.classify().inverse.unwrap();
        let found = section_exists(&h, h.cod().points(), 10_000).unwrap();
        assert_eq!(found.section().unwrap().delta.values(), inv.values());
    }
}

#[test]
fn pullback_along_multivalued_map_can_fail_to_lift() {
    // ρ the identity of indiscrete(3), γ(0) = {1,2}, γ(1) = {1}: the
    // pullback keeps only (1, 1) and Π₁ cannot follow β to {0,1}.
    let b = arc(models::indiscrete(3));
    let rho = MultiMap::identity(&b);
    let bp = arc(models::indiscrete(2));
    let gamma = MultiMap::new(bp.clone(), b.clone(), vec![set(&[1, 2]), set(&[1])]).unwrap();
    let pb = pullback(&rho, &gamma).unwrap();
    assert_eq!(pb.pairs, vec![(1, 1)]);
    let w = arc(models::point());
    let alpha = MultiMap::constant(&w, &pb.space, set(&[0])).unwrap();
    let dom = arc(FiniteSpace::product(&w, &models::fence(1)).unwrap());
    let beta = MultiMap::new(dom, bp, vec![set(&[1]), set(&[0, 1])]).unwrap();
    let sq = CommutingSquare::new(pb.pi1, alpha, 1, beta).unwrap();
    assert!(matches!(
        find_filler(&sq, 1000).unwrap(),
        FillerOutcome::NotFound
    ));
}

#[test]
fn product_with_multivalued_factor_can_fail_to_lift() {
    // id × (constant {0,1}) on discrete(2) × point into discrete(2) ×
    // indiscrete(2): every image is a union of rectangles {x} × {0,1}, but β
    // may shrink to the non-rectangle {(0,0), (0,1), (1,1)}.
    let d = arc(models::discrete(2));
    let i = arc(models::indiscrete(2));
    let p = arc(models::point());
    let rho = MultiMap::identity(&d);
    let sigma = MultiMap::constant(&p, &i, set(&[0, 1])).unwrap();
    let dom = arc(FiniteSpace::product(&d, &p).unwrap());
    let left = MultiMap::compose(&rho, &MultiMap::projection(&dom, 0).unwrap()).unwrap();
    let right = MultiMap::compose(&sigma, &MultiMap::projection(&dom, 1).unwrap()).unwrap();
    let product = MultiMap::pairing(&left, &right).unwrap();
    let w = arc(models::point());
    let alpha = MultiMap::constant(&w, &dom, set(&[0, 1])).unwrap();
    let fdom = arc(FiniteSpace::product(&w, &models::fence(1)).unwrap());
    let beta = MultiMap::new(
        fdom,
        product.cod().clone(),
        vec![set(&[0, 1, 2, 3]), set(&[0, 1, 3])],
    )
    .unwrap();
    let sq = CommutingSquare::new(product, alpha, 1, beta).unwrap();
    assert!(matches!(
        find_filler(&sq, 1000).unwrap(),
        FillerOutcome::NotFound
    ));
}

/// Maps carrying a certificate, drawn at random.
fn certified_map(seed: u64) -> MultiMap {
    certified_map_of(seed, seed % 3)
}

/// Single-valued certified maps: relabelings and projections.
fn certified_function(seed: u64) -> MultiMap {
    certified_map_of(seed, seed % 2)
}

fn certified_map_of(seed: u64, class: u64) -> MultiMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match class {
        0 => {
            let x = models::random_space(1 + (seed / 3 % 4) as usize, seed).unwrap();
            models::random_relabeling(&x, seed).1
        }
        1 => {
            let a = models::random_space(1 + (seed / 3 % 3) as usize, seed).unwrap();
            let b = models::random_space(1 + (seed / 9 % 2) as usize, seed ^ 1).unwrap();
            let p = arc(FiniteSpace::product(&a, &b).unwrap());
            MultiMap::projection(&p, (seed / 27 % 2) as usize).unwrap()
        }
        _ => {
            let a = arc(models::random_space(1 + (seed / 3 % 4) as usize, seed).unwrap());
            let b = arc(models::discrete(1 + (seed / 9 % 3) as usize));
            let v = models::random_values(&arc(models::point()), &b, &mut rng).value(0);
            MultiMap::constant(&a, &b, v).unwrap()
        }
    }
}

/// Random continuous single-valued map, if one turns up among a few tries.
fn random_function(
    dom: &Arc<FiniteSpace>,
    cod: &Arc<FiniteSpace>,
    rng: &mut ChaCha8Rng,
) -> MultiMap {
    for _ in 0..50 {
        let f = models::random_map(dom, cod, rng);
        if f.values().iter().all(|v| v.len() == 1) {
            return f;
        }
    }
    MultiMap::constant(dom, cod, PointSet::singleton(0)).unwrap()
}

fn lifts_on_random_squares(rho: &MultiMap, seed: u64, rounds: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let w = arc(models::random_space(rng.gen_range(1..=3), rng.gen()).unwrap());
        let k = rng.gen_range(0..=2);
        let sq = random_square(rho, &w, k, &mut rng).unwrap();
        match find_filler(&sq, 1_000_000).unwrap() {
            FillerOutcome::Found(eta) if verify_filler(&sq, &eta) => {}
            other => return Err(format!("{other:?} on {sq:?}")),
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_are_sound(seed in any::<u64>()) {
        let rho = certified_map(seed);
        prop_assert_ne!(fibration_certificate(&rho), FibrationCertificate::None);
        prop_assert!(lifts_on_random_squares(&rho, seed, 4).is_ok());
    }

    #[test]
    fn pullbacks_along_functions_lift(seed in any::<u64>()) {
        let rho = certified_map(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bp = arc(models::random_space(rng.gen_range(1..=3), rng.gen()).unwrap());
        let gamma = random_function(&bp, rho.cod(), &mut rng);
        let pb = match pullback(&rho, &gamma) {
            Ok(pb) => pb,
            Err(Error::EmptyPullback) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(lifts_on_random_squares(&pb.pi1, seed, 3).is_ok());
    }

    #[test]
    fn compositions_and_products_of_functions_lift(seed in any::<u64>()) {
        let rho = certified_map(seed);
        // compose with a relabeling of the codomain
        let (_, h) = models::random_relabeling(rho.cod(), seed);
        let composed = MultiMap::compose(&h, &rho).unwrap();
        prop_assert!(lifts_on_random_squares(&composed, seed, 3).is_ok());

        let rho = certified_function(seed);
        let sigma = certified_function(seed.wrapping_add(1));
        prop_assume!(rho.dom().len() * sigma.dom().len() <= 12);
        let dom = arc(FiniteSpace::product(rho.dom(), sigma.dom()).unwrap());
        let left = MultiMap::compose(&rho, &MultiMap::projection(&dom, 0).unwrap()).unwrap();
        let right = MultiMap::compose(&sigma, &MultiMap::projection(&dom, 1).unwrap()).unwrap();
        let product = MultiMap::pairing(&left, &right).unwrap();
        prop_assert!(lifts_on_random_squares(&product, seed, 2).is_ok());
    }

    #[test]
    fn found_sections_verify(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = arc(models::random_space(rng.gen_range(1..=4), rng.gen()).unwrap());
        let b = arc(models::random_space(rng.gen_range(1..=3), rng.gen()).unwrap());
        let rho = models::random_map(&a, &b, &mut rng);
        for c in b.open_sets().unwrap().into_iter().filter(|c| !c.is_empty()) {
            if let SectionOutcome::Found(s) = section_exists(&rho, c, 100_000).unwrap() {
                prop_assert!(verify_section(&rho, &s));
            }
        }
    }
}
