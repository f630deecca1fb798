use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symquad_core::domain::{symmetry_generators, symmetry_group};
use symquad_core::{
    enumerate_decompositions, seed_orbits, Decomposition, DomainKind, OrbitInstance, Point,
};

use DomainKind::*;

fn cardinalities(kind: DomainKind) -> &'static [usize] {
    match kind {
        Triangle => &[1, 3, 6],
        Quadrilateral => &[1, 4, 4, 8],
        Tetrahedron => &[1, 4, 6, 12, 24],
        Prism => &[1, 2, 3, 6, 6, 12],
        Pyramid => &[1, 4, 4, 8],
        Hexahedron => &[1, 6, 8, 12, 24, 24, 48],
    }
}

fn param_counts(kind: DomainKind) -> &'static [usize] {
    match kind {
        Triangle => &[0, 1, 2],
        Quadrilateral => &[0, 1, 1, 2],
        Tetrahedron => &[0, 1, 1, 2, 3],
        Prism => &[0, 1, 1, 2, 2, 3],
        Pyramid => &[1, 2, 2, 3],
        Hexahedron => &[0, 1, 1, 1, 2, 2, 3],
    }
}

fn random_instance(kind: DomainKind, id: usize, rng: &mut ChaCha8Rng) -> OrbitInstance {
    let mut mult = vec![0; kind.domain().orbits.len()];
    mult[id] = 1;
    let cand = seed_orbits(kind, &Decomposition::new(kind, mult), rng);
    OrbitInstance::new(id, cand.params)
}

fn same_set(a: &[Point], b: &[Point], tol: f64) -> bool {
    let close = |p: &Point, q: &Point| (0..3).all(|d| (p[d] - q[d]).abs() <= tol);
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| close(p, q)))
        && b.iter().all(|p| a.iter().any(|q| close(p, q)))
}

#[test]
fn catalog_matches_orbit_list() {
    for kind in DomainKind::ALL {
        let orbits = &kind.domain().orbits;
        let sizes: Vec<usize> = orbits.iter().map(|o| o.point_count).collect();
        let params: Vec<usize> = orbits.iter().map(|o| o.param_count).collect();
        assert_eq!(sizes, cardinalities(kind), "{kind:?}");
        assert_eq!(params, param_counts(kind), "{kind:?}");
        // The largest orbit is a generic point of the whole group.
        assert_eq!(*sizes.last().unwrap(), kind.symmetry_number());
        assert_eq!(symmetry_group(kind).len(), kind.symmetry_number());
    }
    let numbers: Vec<usize> = DomainKind::ALL
        .iter()
        .map(|k| k.symmetry_number())
        .collect();
    assert_eq!(numbers, [6, 8, 24, 12, 8, 48]);
}

#[test]
fn group_images_permute_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for kind in DomainKind::ALL {
        let domain = kind.domain();
        let group = symmetry_group(kind);
        let gens = symmetry_generators(kind);
        for id in 0..domain.orbits.len() {
            for _ in 0..50 {
                let pts = domain
                    .expand_orbit(&random_instance(kind, id, &mut rng))
                    .unwrap();
                assert_eq!(pts.len(), cardinalities(kind)[id]);
                for g in gens.iter().chain(&group) {
                    let image: Vec<Point> = pts.iter().map(|p| g.apply(p)).collect();
                    assert!(same_set(&pts, &image, 1e-12), "{kind:?} orbit {id}");
                }
                // Every expanded point lies in the domain.
                assert!(pts.iter().all(|p| kind.boundary_distance(p) >= 0.0));
            }
        }
    }
}

#[test]
fn group_is_closed_under_composition() {
    let probe: Point = [0.11, -0.23, -0.41];
    for kind in DomainKind::ALL {
        let group = symmetry_group(kind);
        let images: Vec<Point> = group.iter().map(|g| g.apply(&probe)).collect();
        for g in &group {
            for h in &group {
                let gh = g.apply(&h.apply(&probe));
                assert!(images
                    .iter()
                    .any(|q| (0..3).all(|d| (q[d] - gh[d]).abs() < 1e-12)));
            }
        }
    }
}

fn barycentric(kind: DomainKind, p: &Point) -> Vec<f64> {
    let d = kind.dimension();
    let mut l: Vec<f64> = (0..d).map(|k| (1.0 + p[k]) / 2.0).collect();
    l.insert(0, 1.0 - l.iter().sum::<f64>());
    l
}

#[test]
fn simplex_orbits_permute_barycentric_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in [Triangle, Tetrahedron] {
        let domain = kind.domain();
        for id in 0..domain.orbits.len() {
            for _ in 0..100 {
                let pts = domain
                    .expand_orbit(&random_instance(kind, id, &mut rng))
                    .unwrap();
                let sorted = |p: &Point| {
                    let mut l = barycentric(kind, p);
                    l.sort_by(f64::total_cmp);
                    l
                };
                let reference = sorted(&pts[0]);
                assert!(reference.iter().all(|&v| v >= 0.0));
                for p in &pts {
                    let l = sorted(p);
                    assert!(l.iter().zip(&reference).all(|(a, b)| (a - b).abs() < 1e-12));
                }
            }
        }
    }
}

/// Every vector with `n_j ≤ Np / |S_j|` (at most one copy of a
/// parameter-free orbit), filtered by point count.
fn brute_force(kind: DomainKind, np: usize) -> Vec<Vec<usize>> {
    let sizes = cardinalities(kind);
    let caps: Vec<usize> = sizes
        .iter()
        .zip(param_counts(kind))
        .map(|(&s, &k)| if k == 0 { 1.min(np / s) } else { np / s })
        .collect();
    let mut out = Vec::new();
    let mut v = vec![0; sizes.len()];
    loop {
        if v.iter().zip(sizes).map(|(n, s)| n * s).sum::<usize>() == np {
            out.push(v.clone());
        }
        let mut j = v.len();
        loop {
            if j == 0 {
                out.sort();
                return out;
            }
            j -= 1;
            if v[j] < caps[j] {
                v[j] += 1;
                break;
            }
            v[j] = 0;
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for kind in DomainKind::ALL {
        for np in 1..=60 {
            let got: Vec<Vec<usize>> = enumerate_decompositions(kind, np)
                .into_iter()
                .map(|d| d.multiplicities)
                .collect();
            let mut sorted = got.clone();
            sorted.sort();
            assert_eq!(got, sorted, "{kind:?} {np}: not lexicographic");
            assert_eq!(got, brute_force(kind, np), "{kind:?} {np}");
        }
    }
}

#[test]
fn known_decomposition_counts() {
    assert!(enumerate_decompositions(Triangle, 44).is_empty());
    assert_eq!(enumerate_decompositions(Prism, 80).len(), 2380);
}

#[test]
fn clamping_is_idempotent_for_every_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for kind in DomainKind::ALL {
        let domain = kind.domain();
        for (id, orbit) in domain.orbits.iter().enumerate() {
            for _ in 0..1000 {
                let params: Vec<f64> = (0..orbit.param_count)
                    .map(|_| rng.random_range(-2.0..2.0))
                    .collect();
                let once = domain.clamp_orbit(&OrbitInstance::new(id, params)).unwrap();
                let twice = domain.clamp_orbit(&once).unwrap();
                assert_eq!(once, twice, "{kind:?} orbit {id}");
                assert!(orbit.is_feasible(&once.params), "{kind:?} {once:?}");
                let pts = orbit.expand_raw(&once.params);
                assert!(pts.iter().all(|p| kind.boundary_distance(p) >= 0.0));
            }
        }
    }
}

fn kind_and_params() -> impl Strategy<Value = (DomainKind, usize, Vec<f64>)> {
    (0..6usize, 0..7usize, prop::collection::vec(-1e3..1e3f64, 3)).prop_map(|(k, id, p)| {
        let kind = DomainKind::ALL[k];
        let id = id % kind.domain().orbits.len();
        let n = kind.domain().orbits[id].param_count;
        (kind, id, p[..n].to_vec())
    })
}

proptest! {
    #[test]
    fn clamp_of_clamp_is_clamp((kind, id, params) in kind_and_params()) {
        let domain = kind.domain();
        let once = domain.clamp_orbit(&OrbitInstance::new(id, params)).unwrap();
        let twice = domain.clamp_orbit(&once).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(domain.orbits[id].is_feasible(&once.params));
    }

    #[test]
    fn feasible_points_are_left_alone((kind, id, _) in kind_and_params(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(kind, id, &mut rng);
        let clamped = kind.domain().clamp_orbit(&inst).unwrap();
        prop_assert_eq!(inst, clamped);
    }
}
