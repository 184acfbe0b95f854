use super::Strategy;
use super::*;
use crate::models;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn set(v: &[usize]) -> PointSet {
    v.iter().copied().collect()
}

fn arc(x: FiniteSpace) -> Arc<FiniteSpace> {
    Arc::new(x)
}

fn constant(x: &Arc<FiniteSpace>, v: &[usize]) -> MultiMap {
    MultiMap::constant(x, x, set(v)).unwrap()
}

#[test]
fn one_step_examples() {
    let s = arc(models::sierpinski());
    let id = MultiMap::identity(&s);
    let c0 = constant(&s, &[0]);
    assert!(one_step(&id, &id).unwrap());
    assert!(one_step(&c0, &id).unwrap());
    assert!(direct_step_oracle(&c0, &id).unwrap());
    assert!(direct_step_oracle(&id, &id).unwrap());

    let d = arc(models::discrete(2));
    let (d0, d1) = (constant(&d, &[0]), constant(&d, &[1]));
    assert!(!one_step(&d0, &d1).unwrap());
    assert!(!direct_step_oracle(&d0, &d1).unwrap());

    let swap = MultiMap::new(s.clone(), s.clone(), vec![set(&[1]), set(&[0])]).unwrap();
    assert!(matches!(one_step(&swap, &id), Err(Error::NotContinuous(_))));
    let other = MultiMap::identity(&d);
    assert!(matches!(
        one_step(&id, &other),
        Err(Error::DomainMismatch(_))
    ));
}

#[test]
fn homotopy_examples() {
    let s = arc(models::sierpinski());
    let id = MultiMap::identity(&s);
    let c0 = constant(&s, &[0]);
    let same = are_m_homotopic(&id, &id, 1000).unwrap();
    assert_eq!(same.status, HomotopyStatus::Homotopic);
    assert_eq!(same.certificate.len(), 1);

    let v = are_m_homotopic(&id, &c0, 1000).unwrap();
    assert_eq!(v.status, HomotopyStatus::Homotopic);
    assert_eq!(v.certificate.len(), 2);
    assert!(v.minimal);
    assert!(is_valid_certificate(&v.certificate, &id, &c0));

    let d = arc(models::discrete(2));
    let v = are_m_homotopic(&constant(&d, &[0]), &constant(&d, &[1]), 1000).unwrap();
    assert_eq!(v.status, HomotopyStatus::NotHomotopic);
    assert!(!v.budget_hit);
}

#[test]
fn null_homotopy_and_contractibility() {
    let s = arc(models::sierpinski());
    let c = is_null_m_homotopic(&constant(&s, &[0, 1]), 1000).unwrap();
    assert_eq!(
        (c.status, c.certificate.len()),
        (HomotopyStatus::Homotopic, 1)
    );
    let v = is_null_m_homotopic(&MultiMap::identity(&s), 1000).unwrap();
    assert_eq!(v.status, HomotopyStatus::Homotopic);
    assert!(is_valid_null_certificate(
        &v.certificate,
        &MultiMap::identity(&s)
    ));

    let d = arc(models::discrete(2));
    assert_eq!(
        is_null_m_homotopic(&MultiMap::identity(&d), 1000)
            .unwrap()
            .status,
        HomotopyStatus::NotHomotopic
    );

    assert_eq!(
        is_m_contractible(&s, 1000).unwrap().status,
        HomotopyStatus::Homotopic
    );
    assert_eq!(
        is_m_contractible(&arc(models::point()), 1000)
            .unwrap()
            .status,
        HomotopyStatus::Homotopic
    );
    assert_eq!(
        is_m_contractible(&d, 1000).unwrap().status,
        HomotopyStatus::NotHomotopic
    );
    assert_eq!(
        is_m_contractible(&arc(models::circle4()), 100_000)
            .unwrap()
            .status,
        HomotopyStatus::NotHomotopic
    );
}

#[test]
fn singleton_constant_mode() {
    // On the indiscrete 2-point space every value is interchangeable.
    let x = arc(models::indiscrete(2));
    let search = HomotopySearch::new(1000).singleton_constants(true);
    let v = search
        .null_homotopic(&MultiMap::constant(&x, &x, x.points()).unwrap())
        .unwrap();
    assert_eq!(v.status, HomotopyStatus::Homotopic);
    assert_eq!(v.certificate.last().unwrap().value(0).len(), 1);
}

#[test]
fn budget_exhaustion_is_unknown() {
    let x = arc(models::circle4());
    let f = MultiMap::identity(&x);
    let v = HomotopySearch::new(1)
        .strategy(Strategy::Direct)
        .null_homotopic(&f)
        .unwrap();
    assert_eq!(v.status, HomotopyStatus::Unknown);
    assert!(v.budget_hit);
}

#[test]
fn m_paths() {
    let s = arc(models::sierpinski());
    assert!(m_path_exists(&s, set(&[0]), set(&[0])).unwrap());
    assert!(m_path_exists(&s, set(&[0]), set(&[1])).unwrap());
    let d = arc(models::discrete(2));
    assert!(!m_path_exists(&d, set(&[0]), set(&[1])).unwrap());
    assert_eq!(
        m_path_exists(&d, PointSet::EMPTY, set(&[1])),
        Err(Error::EmptySubset)
    );

    assert!(is_m_pathwise_connected(&arc(models::point())).unwrap());
    assert!(is_m_pathwise_connected(&s).unwrap());
    assert!(!is_m_pathwise_connected(&d).unwrap());
    assert_eq!(
        path_disconnection(&d).unwrap(),
        Some((set(&[0]), set(&[1])))
    );
    assert!(is_m_pathwise_connected(&arc(models::circle4())).unwrap());
}

#[test]
fn fence_assembly_pads_orientation() {
    let s = arc(models::sierpinski());
    let id = MultiMap::identity(&s);
    let c0 = constant(&s, &[0]);
    // c0 -> id is a forward step, so [id, c0] needs padding: id, id, c0.
    let fh = fence_homotopy(&[id.clone(), c0.clone()]).unwrap();
    assert_eq!(fh.k, 2);
    assert!(fh.map.semicontinuity().unwrap().m_continuous);
    let fh = fence_homotopy(&[c0, id]).unwrap();
    assert_eq!(fh.k, 1);
    assert!(fh.map.semicontinuity().unwrap().m_continuous);
}

fn random_pair(seed: u64, max_dom: usize, max_cod: usize) -> (MultiMap, MultiMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = arc(models::random_space(1 + (seed % max_dom as u64) as usize, seed).unwrap());
    let y =
        arc(models::random_space(1 + (seed / 7 % max_cod as u64) as usize, seed ^ 0xabc).unwrap());
    (
        models::random_map(&x, &y, &mut rng),
        models::random_map(&x, &y, &mut rng),
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn one_step_matches_product_oracle(seed in any::<u64>()) {
        let (f, g) = random_pair(seed, 4, 4);
        prop_assert_eq!(one_step(&f, &g).unwrap(), direct_step_oracle(&f, &g).unwrap());
    }

    #[test]
    fn reduced_and_direct_searches_agree(seed in any::<u64>()) {
        let (f, g) = random_pair(seed, 4, 4);
        let direct = HomotopySearch::new(500_000).strategy(Strategy::Direct).homotopic(&f, &g).unwrap();
        let reduced = HomotopySearch::new(500_000).strategy(Strategy::Reduced).homotopic(&f, &g).unwrap();
        prop_assume!(direct.status != HomotopyStatus::Unknown);
        prop_assert_eq!(direct.status, reduced.status);
        if reduced.status == HomotopyStatus::Homotopic {
            prop_assert!(is_valid_certificate(&reduced.certificate, &f, &g));
            prop_assert!(is_valid_certificate(&direct.certificate, &f, &g));
            prop_assert!(direct.certificate.len() <= reduced.certificate.len());
        }
        let dn = HomotopySearch::new(500_000).strategy(Strategy::Direct).null_homotopic(&f).unwrap();
        let rn = HomotopySearch::new(500_000).strategy(Strategy::Reduced).null_homotopic(&f).unwrap();
        prop_assume!(dn.status != HomotopyStatus::Unknown);
        prop_assert_eq!(dn.status, rn.status);
        if rn.status == HomotopyStatus::Homotopic {
            prop_assert!(is_valid_null_certificate(&rn.certificate, &f));
            prop_assert!(is_valid_null_certificate(&dn.certificate, &f));
        }
    }

    #[test]
    fn homotopy_is_symmetric(seed in any::<u64>()) {
        let (f, g) = random_pair(seed, 4, 3);
        let a = are_m_homotopic(&f, &g, 100_000).unwrap();
        let b = are_m_homotopic(&g, &f, 100_000).unwrap();
        prop_assert_eq!(a.status, b.status);
        if a.minimal && b.minimal {
            prop_assert_eq!(a.certificate.len(), b.certificate.len());
        }
    }

    #[test]
    fn certificates_restrict_to_open_subsets(seed in any::<u64>()) {
        let (f, g) = random_pair(seed, 4, 3);
        let v = are_m_homotopic(&f, &g, 100_000).unwrap();
        prop_assume!(v.status == HomotopyStatus::Homotopic);
        for c in f.dom().open_sets().unwrap().into_iter().filter(|c| !c.is_empty()) {
            let restricted: Vec<MultiMap> = v.certificate.iter().map(|m| m.restrict(c).unwrap()).collect();
            prop_assert!(is_valid_certificate(&restricted, &f.restrict(c).unwrap(), &g.restrict(c).unwrap()));
        }
    }

    #[test]
    fn certificates_assemble_on_fences(seed in any::<u64>()) {
        let (f, g) = random_pair(seed, 3, 3);
        let v = are_m_homotopic(&f, &g, 100_000).unwrap();
        prop_assume!(v.status == HomotopyStatus::Homotopic);
        let fh = fence_homotopy(&v.certificate).unwrap();
        prop_assert!(fh.map.semicontinuity().unwrap().m_continuous);
        let width = fh.k + 1;
        for x in 0..f.dom().len() {
            prop_assert_eq!(fh.map.value(x * width), f.value(x));
            prop_assert_eq!(fh.map.value(x * width + fh.k), g.value(x));
        }
    }

    #[test]
    fn parallel_search_is_identical(seed in any::<u64>()) {
        let (f, g) = random_pair(seed, 4, 3);
        let serial = HomotopySearch::new(100_000).homotopic(&f, &g).unwrap();
        let parallel = HomotopySearch::new(100_000).parallel(true).homotopic(&f, &g).unwrap();
        prop_assert_eq!(serial.status, parallel.status);
        prop_assert_eq!(serial.certificate, parallel.certificate);
    }
}
