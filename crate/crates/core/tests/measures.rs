use kmbc::logic::{entails, formula_of_worlds, parse, Alphabet, Formula, WorldSet};
use kmbc::measures::{
    kappa_b, kappa_h, kappa_s, kappa_s_worlds, s_entails, s_equiv, world_substitute, KmValue, KnowledgeMeasure,
    Substitution,
};
use kmbc::prob::{ProbDist, Rational};
use kmbc::scenarios::{birds_dist, birds_kb};
use proptest::prelude::*;

const EPS: f64 = 1e-9;

fn alphabet(n: usize) -> Alphabet {
    Alphabet::new(["a", "b", "c", "d"][..n].iter().copied()).unwrap()
}

fn dist_from_weights(alphabet: &Alphabet, weights: &[u32]) -> Option<ProbDist> {
    let total: u32 = weights.iter().sum();
    (total > 0).then(|| {
        ProbDist::new(alphabet.clone(), weights.iter().map(|&w| Rational::new(w.into(), total.into())).collect())
            .unwrap()
    })
}

fn close(v: KmValue, expected: f64, tol: f64) -> bool {
    v.finite().is_some_and(|x| (x - expected).abs() <= tol)
}

#[test]
fn shannon_measure_on_birds() {
    let d = birds_dist();
    let kb = birds_kb();
    let k = kappa_s(&kb, &d).unwrap();
    assert!(close(k, 1.515, 1e-3), "{k}");
    assert!(close(k, -(0.35f64).log2(), EPS));
    let f = parse("f", d.alphabet()).unwrap();
    assert!(close(kappa_s(&f, &d).unwrap(), 1.152, 1e-3));
    assert_eq!(kappa_s(&Formula::Top, &d).unwrap(), KmValue::Finite(0.0));
    assert_eq!(format!("{:.3}", k), "1.515");
}

#[test]
fn uniform_measure_on_birds_kb() {
    let k = kappa_h(&birds_kb());
    assert!(close(k, 4.0 - 3f64.log2(), EPS));
    assert!(close(k, 2.415, 1e-3));
}

#[test]
fn base_b_family() {
    let d = birds_dist();
    let kb = birds_kb();
    let k2 = kappa_s(&kb, &d).unwrap().to_f64();
    assert!(close(kappa_b(&kb, &d, 2.0).unwrap(), k2, 0.0));
    assert!(close(kappa_b(&kb, &d, std::f64::consts::E).unwrap(), -(0.35f64).ln(), EPS));
    assert!(close(kappa_b(&kb, &d, std::f64::consts::E).unwrap(), 1.0498, 1e-4));
    assert!(close(kappa_b(&kb, &d, 10.0).unwrap(), k2 / 10f64.log2(), EPS));
    let quarter = Rational::new(1.into(), 4.into());
    assert_eq!(KnowledgeMeasure::new(4.0).unwrap().of_prob(&quarter), KmValue::Finite(1.0));
    assert!(kappa_b(&kb, &d, 1.0).is_err());
    assert!(kappa_b(&kb, &d, 0.5).is_err());
    assert_eq!(kappa_b(&Formula::Bottom, &d, 3.0).unwrap(), KmValue::Infinite);
}

#[test]
fn no_surprise() {
    let ab = alphabet(2);
    let d = ProbDist::from_strs("a b", &[("11", "1")]).unwrap();
    let conj = parse("a & b", &ab).unwrap();
    assert_eq!(kappa_s(&conj, &d).unwrap(), KmValue::Finite(0.0));
    assert_eq!(kappa_h(&conj), KmValue::Finite(2.0));
}

#[test]
fn s_entailment_examples() {
    let pq = Alphabet::parse("p q").unwrap();
    let p = parse("p", &pq).unwrap();
    let nq = parse("~q", &pq).unwrap();
    assert!(!entails(&p, &nq, &pq).unwrap());
    assert!(s_entails(&p, &nq, &pq).unwrap());
    assert!(s_equiv(&p, &nq, &pq).unwrap());
    assert!(!s_entails(&p, &parse("p & q", &pq).unwrap(), &pq).unwrap());
    // θ = {p/¬q, q/p} sends [p] to [¬q]
    let theta = Substitution::parse("p/~q, q/p", &pq).unwrap();
    let image = world_substitute(&p.models(&pq).unwrap(), &theta).unwrap();
    assert_eq!(image, nq.models(&pq).unwrap());
    let id = Substitution::identity(2);
    assert_eq!(world_substitute(&image, &id).unwrap(), image);
    let swap = Substitution::parse("p/q, q/p", &pq).unwrap();
    let once = world_substitute(&image, &swap).unwrap();
    assert_eq!(world_substitute(&once, &swap).unwrap(), image);
}

#[test]
fn km_axioms_exhaustively() {
    for n in 1..=3 {
        let sigma = alphabet(n);
        let worlds = 1usize << n;
        let weight_rows: Vec<Vec<u32>> = vec![
            (0..worlds).map(|i| (i % 3) as u32).collect(),
            (0..worlds).map(|i| i as u32 + 1).collect(),
            (0..worlds).map(|i| 1 + 2 * (i % 2) as u32).collect(),
        ];
        for d in weight_rows.iter().filter_map(|w| dist_from_weights(&sigma, w)) {
            // KM1
            assert_eq!(kappa_s(&Formula::Top, &d).unwrap(), KmValue::Finite(0.0));
            assert_eq!(kappa_s(&Formula::Bottom, &d).unwrap(), KmValue::Infinite);
            let subsets = 1u64 << worlds;
            for x in 0..subsets {
                let a = WorldSet::from_mask(n, x);
                let (pa, ka) = (d.prob_of_worlds(&a), kappa_s_worlds(&a, &d));
                for y in 0..subsets {
                    let b = WorldSet::from_mask(n, y);
                    let (pb, kb) = (d.prob_of_worlds(&b), kappa_s_worlds(&b, &d));
                    // KM2 and its strict variant
                    if pa <= pb {
                        assert!(kb <= ka);
                    }
                    if pa < pb {
                        assert!(kb < ka);
                    }
                    // prKM
                    if d.worlds_p_entail(&a, &b) && !d.worlds_p_entail(&b, &a) {
                        assert!(pa < pb);
                        assert!(kb < ka);
                    }
                    // KM3
                    let ab = a.intersection(&b);
                    let pab = d.prob_of_worlds(&ab);
                    if pab == &pa * &pb && !ab.is_empty() && !pab.eq(&Rational::from_integer(0.into())) {
                        let lhs = kappa_s_worlds(&ab, &d).to_f64();
                        assert!((lhs - (ka.to_f64() + kb.to_f64())).abs() < EPS);
                    }
                }
            }
        }
    }
}

#[test]
fn independence_makes_measures_additive_on_birds() {
    let d = birds_dist();
    let kb = birds_kb();
    assert!(d.p_independent(&kb, &Formula::Top).unwrap());
    let sum = kappa_s(&kb, &d).unwrap().to_f64() + kappa_s(&Formula::Top, &d).unwrap().to_f64();
    assert!(close(kappa_s(&kb.clone().and(Formula::Top), &d).unwrap(), sum, EPS));
}

#[test]
fn shannon_collapses_to_uniform_measure() {
    for n in 1..=3 {
        let sigma = alphabet(n);
        let u = ProbDist::uniform(sigma.clone());
        for mask in 0..(1u64 << (1 << n)) {
            let set = WorldSet::from_mask(n, mask);
            let phi = formula_of_worlds(&set, &sigma);
            let ks = kappa_s(&phi, &u).unwrap();
            let kh = kappa_h(&phi);
            match (ks, kh) {
                (KmValue::Infinite, KmValue::Infinite) => {}
                (KmValue::Finite(x), KmValue::Finite(y)) => assert!((x - y).abs() < EPS, "n={n} mask={mask}"),
                other => panic!("mismatch {other:?} for n={n} mask={mask}"),
            }
            // the closed form n − log2 |[φ]| as an independent oracle
            if !set.is_empty() {
                assert!(close(ks, n as f64 - (set.len() as f64).log2(), EPS));
            }
        }
    }
}

#[test]
fn telm_axioms_for_uniform_measure() {
    // (T)
    assert_eq!(kappa_h(&Formula::Top), KmValue::Finite(0.0));
    assert_eq!(kappa_h(&Formula::Bottom), KmValue::Infinite);
    for n in 1..=3 {
        let sigma = alphabet(n);
        let padded = alphabet(n + 1);
        let u = ProbDist::uniform(sigma.clone());
        let up = ProbDist::uniform(padded.clone());
        let subsets = 1u64 << (1 << n);
        for x in 0..subsets {
            let a = WorldSet::from_mask(n, x);
            let phi = formula_of_worlds(&a, &sigma);
            let k = kappa_h(&phi);
            // (L): unaffected by letters outside the formula
            assert_eq!(kappa_s(&phi, &u).unwrap().finite().map(|v| (v * 1e6).round()),
                       kappa_s(&phi, &up).unwrap().finite().map(|v| (v * 1e6).round()));
            // (M)
            if !a.is_empty() {
                let own = phi.letters().len() as f64;
                let v = k.to_f64();
                assert!((0.0..=own + EPS).contains(&v));
                if a.len() == 1 {
                    assert!((v - n as f64).abs() < EPS);
                }
            }
            // (E) over s-entailment, both ≤ and <
            for y in 0..subsets {
                let b = WorldSet::from_mask(n, y);
                let psi = formula_of_worlds(&b, &sigma);
                let ks_phi = kappa_s(&phi, &u).unwrap();
                let ks_psi = kappa_s(&psi, &u).unwrap();
                if s_entails(&phi, &psi, &sigma).unwrap() {
                    assert!(ks_psi.to_f64() <= ks_phi.to_f64() + EPS, "n={n} {x:#x} {y:#x}");
                    if !s_entails(&psi, &phi, &sigma).unwrap() {
                        assert!(ks_psi < ks_phi);
                    }
                }
                if a.is_subset(&b) {
                    assert!(s_entails(&phi, &psi, &sigma).unwrap());
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn classical_entailment_implies_s_entailment(x in 0u64..256, y in 0u64..256) {
        let sigma = alphabet(3);
        let (a, b) = (WorldSet::from_mask(3, x), WorldSet::from_mask(3, x | y));
        let (phi, psi) = (formula_of_worlds(&a, &sigma), formula_of_worlds(&b, &sigma));
        prop_assert!(s_entails(&phi, &psi, &sigma).unwrap());
    }

    #[test]
    fn s_entailment_matches_cardinality(x in 0u64..256, y in 0u64..256) {
        // over the full alphabet substitutions act transitively on worlds, but
        // not on arbitrary sets; cardinality is only a necessary condition
        let sigma = alphabet(3);
        let (a, b) = (WorldSet::from_mask(3, x), WorldSet::from_mask(3, y));
        let (phi, psi) = (formula_of_worlds(&a, &sigma), formula_of_worlds(&b, &sigma));
        if s_entails(&phi, &psi, &sigma).unwrap() {
            prop_assert!(a.len() <= b.len());
        }
        if a.len() <= 1 && a.len() <= b.len() {
            prop_assert!(s_entails(&phi, &psi, &sigma).unwrap());
        }
    }

    #[test]
    fn substitutions_are_bijective(idx in 0usize..48, x in 0u64..256) {
        let theta = Substitution::all(3).nth(idx).unwrap();
        let a = WorldSet::from_mask(3, x);
        prop_assert_eq!(world_substitute(&a, &theta).unwrap().len(), a.len());
    }

    #[test]
    fn base_change_is_a_constant_factor(weights in prop::collection::vec(0u32..5, 4), x in 1u64..16, base in 1.5f64..20.0) {
        let sigma = alphabet(2);
        prop_assume!(weights.iter().any(|&w| w > 0));
        let d = dist_from_weights(&sigma, &weights).unwrap();
        let phi = formula_of_worlds(&WorldSet::from_mask(2, x), &sigma);
        match (kappa_s(&phi, &d).unwrap(), kappa_b(&phi, &d, base).unwrap()) {
            (KmValue::Finite(k2), KmValue::Finite(kb)) => prop_assert!((kb * base.log2() - k2).abs() < EPS),
            (KmValue::Infinite, KmValue::Infinite) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
