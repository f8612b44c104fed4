use std::collections::BTreeSet;

use speh_kit::dsl::{evaluate, print_canonical};
use speh_kit::enumerate::{enumerate, UniverseSpec};
use speh_kit::rational::rat;
use speh_kit::{Alphabet, ComplementaryFactor, Factor, Segment, SpehFactor, UnitaryRep};

const FIXTURE: &str = include_str!("data/fixture_alphabet.json");

fn fixture() -> Alphabet {
    Alphabet::load(FIXTURE).unwrap()
}

fn grid() -> Vec<speh_kit::Exponent> {
    vec![rat(1, 4), rat(1, 3)]
}

// Factor list built without UniverseSpec::factors.
fn factors(a: &Alphabet, max_degree: u64, max_k: u32) -> Vec<Factor> {
    let mut out = Vec::new();
    for rho in a.rhos() {
        for l in 1..=max_degree as u32 {
            for k in 1..=max_k {
                let speh = SpehFactor::new(Segment::st(rho, l), i64::from(k)).unwrap();
                if speh.degree() <= max_degree {
                    out.push(Factor::Speh(speh.clone()));
                }
                if 2 * speh.degree() <= max_degree {
                    for alpha in grid() {
                        out.push(Factor::Complementary(ComplementaryFactor::from_base(speh.clone(), alpha).unwrap()));
                    }
                }
            }
        }
    }
    out
}

// Degree layers closed under multiplication by single factors.
fn by_products(a: &Alphabet, max_degree: u64, max_k: u32) -> BTreeSet<UnitaryRep> {
    let fs = factors(a, max_degree, max_k);
    let mut layers: Vec<BTreeSet<UnitaryRep>> = vec![BTreeSet::new(); max_degree as usize + 1];
    layers[0].insert(UnitaryRep::empty());
    for d in 1..=max_degree as usize {
        let mut layer = BTreeSet::new();
        for f in &fs {
            let e = f.degree() as usize;
            if e <= d {
                for r in &layers[d - e] {
                    layer.insert(r.product(&UnitaryRep::single(f.clone())));
                }
            }
        }
        layers[d] = layer;
    }
    layers.into_iter().flatten().collect()
}

// Number of multisets of total degree <= max_degree, by the generating
// function prod_f 1 / (1 - x^deg f).
fn count(degrees: &[u64], max_degree: u64) -> u64 {
    let n = max_degree as usize;
    let mut c = vec![0u64; n + 1];
    c[0] = 1;
    for &d in degrees {
        let d = d as usize;
        for i in d..=n {
            c[i] += c[i - d];
        }
    }
    c.iter().sum()
}

#[test]
fn enumeration_matches_product_closure() {
    let a = fixture();
    for (max_degree, max_k) in [(0, 1), (1, 1), (4, 2), (7, 3), (8, 4)] {
        let spec = UniverseSpec::new(a.clone(), max_degree, max_k, grid()).unwrap();
        let listed = enumerate(&spec);
        let expected = by_products(&a, max_degree, max_k);
        let as_set: BTreeSet<UnitaryRep> = listed.iter().cloned().collect();
        assert_eq!(as_set.len(), listed.len(), "duplicates at degree {max_degree}");
        assert_eq!(as_set, expected, "max degree {max_degree}, max k {max_k}");
        assert!(listed.windows(2).all(|w| w[0] < w[1]), "not sorted");
    }
}

#[test]
fn fixture_universe_size() {
    let a = fixture();
    let spec = UniverseSpec::new(a.clone(), 12, 4, grid()).unwrap();
    let degrees: Vec<u64> = factors(&a, 12, 4).iter().map(Factor::degree).collect();
    let expected = count(&degrees, 12);
    assert_eq!(expected, 969_779);
    assert_eq!(enumerate(&spec).len() as u64, expected);
}

#[test]
fn grid_duplicates_do_not_duplicate_reps() {
    let a = fixture();
    let once = UniverseSpec::new(a.clone(), 6, 2, vec![rat(1, 4)]).unwrap();
    let twice = UniverseSpec::new(a, 6, 2, vec![rat(1, 4), rat(2, 8)]).unwrap();
    assert_eq!(enumerate(&once), enumerate(&twice));
}

#[test]
fn product_is_associative_and_commutative_exhaustively() {
    let a = fixture();
    let spec = UniverseSpec::new(a, 4, 2, grid()).unwrap();
    let u = enumerate(&spec);
    let small: Vec<&UnitaryRep> = u.iter().filter(|r| r.degree() <= 2).collect();
    for x in &small {
        for y in &small {
            let xy = x.product(y);
            assert_eq!(xy, y.product(x));
            for z in &small {
                assert_eq!(xy.product(z), x.product(&y.product(z)));
            }
        }
    }
}

#[test]
fn every_rep_prints_and_reparses() {
    let a = fixture();
    let spec = UniverseSpec::new(a.clone(), 8, 4, grid()).unwrap();
    for r in enumerate(&spec) {
        let text = print_canonical(&r, &a);
        assert_eq!(evaluate(&text, &a).unwrap(), r, "{text}");
    }
}
