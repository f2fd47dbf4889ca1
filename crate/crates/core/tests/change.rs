use kmbc::change::definitional::{
    contract_by_enumeration_worlds, possible_remainders, remainders_by_enumeration, remainders_by_enumeration_worlds,
    severe_by_definition_worlds,
};
use kmbc::change::{
    contract, contract_worlds, expand, expand_report, full_meet_contract, full_meet_worlds, levi_revise_worlds,
    min_kappa, remainders, revise, revise_levi, revise_worlds, severe_withdraw, severe_worlds, sigma_worlds, spheres,
    MeasureKind, OperatorTag, SphereSystem,
};
use kmbc::logic::{parse, Alphabet, Formula, WorldSet};
use kmbc::postulates::grid_distributions;
use kmbc::prob::{parse_rational, ProbDist, Rational};
use kmbc::rankings::dist_from_ranking;
use kmbc::scenarios::{abc_ranking, birds_dist, birds_kb, pets_dist};
use kmbc::Error;
use proptest::prelude::*;

const EPS: f64 = 1e-9;

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn f(text: &str, d: &ProbDist) -> Formula {
    parse(text, d.alphabet()).unwrap()
}

fn ws(d: &ProbDist, bits: &[&str]) -> WorldSet {
    WorldSet::parse(d.alphabet(), bits).unwrap()
}

fn alphabet(n: usize) -> Alphabet {
    Alphabet::new(["a", "b", "c"][..n].iter().copied()).unwrap()
}

fn abc() -> ProbDist {
    dist_from_ranking(&abc_ranking())
}

fn dist_from_weights(alphabet: &Alphabet, weights: &[u32]) -> Option<ProbDist> {
    let total: u32 = weights.iter().sum();
    (total > 0).then(|| {
        ProbDist::new(alphabet.clone(), weights.iter().map(|&w| Rational::new(w.into(), total.into())).collect())
            .unwrap()
    })
}

fn kb_plus(d: &ProbDist) -> WorldSet {
    d.possible(&birds_kb().models(d.alphabet()).unwrap())
}

#[test]
fn contraction_of_birds_kb_by_flies() {
    let d = birds_dist();
    let r = contract(&birds_kb(), &f("f", &d), &d).unwrap();
    assert_eq!(r.operator, OperatorTag::Contraction);
    let expected = kb_plus(&d).union(&ws(&d, &["10101", "10001"]));
    assert_eq!(r.result_worlds, expected);
    assert_eq!(r.result.models(d.alphabet()).unwrap(), expected);
    // oracle: P(result) = 0.35 + 0.4
    let l = r.loss().unwrap();
    assert!((l - (0.75f64 / 0.35).log2()).abs() < EPS);
    assert!((l - 1.1).abs() < 1e-3);
    assert!((r.closed_form - (1.0 + 0.4f64 / 0.35).log2()).abs() < EPS);
    assert!((r.measure - r.closed_form).abs() < EPS);
}

#[test]
fn remainders_of_birds_kb() {
    let d = birds_dist();
    let rs = remainders(&birds_kb(), &f("f", &d), &d).unwrap();
    let mut probs: Vec<Rational> = rs.members().iter().map(|r| r.probability.clone()).collect();
    probs.sort();
    assert_eq!(probs, vec![q("1/2"), q("11/20"), q("11/20")]);
    assert_eq!(rs.base_probability(), &q("7/20"));
    assert_eq!(rs.kappa_min().len(), 2);
    let mut added: Vec<_> = rs.candidates().into_iter().map(|(w, _)| w).collect();
    added.sort();
    let mut not_f = ws(&d, &["11001", "10101", "10001"]).iter().collect::<Vec<_>>();
    not_f.sort();
    assert_eq!(added, not_f);
    // κ of each remainder, against −log2 of its hand-computed probability
    for r in rs.members() {
        let k = kmbc::measures::kappa_s_worlds(&r.worlds, &d).to_f64();
        let p = if r.probability == q("1/2") { 0.5 } else { 0.55 };
        assert!((k - -(p as f64).log2()).abs() < EPS);
    }
    // the enumerated remainders agree over the KB's own letters
    let m = d.marginalize(&Alphabet::parse("b p o f").unwrap()).unwrap();
    let enumerated = remainders_by_enumeration(&birds_kb(), &f("f", &m), &m).unwrap();
    assert_eq!(enumerated.len(), 3);
    let mut eprobs: Vec<Rational> = enumerated.iter().map(|r| m.prob_of_worlds(r)).collect();
    eprobs.sort();
    assert_eq!(eprobs, probs);
}

#[test]
fn full_meet_on_birds() {
    let d = birds_dist();
    let kb = birds_kb();
    let r = full_meet_contract(&kb, &f("f", &d), &d).unwrap();
    assert_eq!(r.result_worlds, kb_plus(&d).union(&ws(&d, &["11001", "10101", "10001"])));
    assert!((r.loss().unwrap() - (0.9f64 / 0.35).log2()).abs() < EPS);
    assert!((r.measure - r.closed_form).abs() < EPS);
    let c = contract(&kb, &f("f", &d), &d).unwrap();
    assert!(d.worlds_p_entail(&c.result_worlds, &r.result_worlds));
    // not entailed: same as contraction
    let b = f("p", &d);
    assert_eq!(full_meet_contract(&kb, &b, &d).unwrap().result_worlds, contract(&kb, &b, &d).unwrap().result_worlds);
}

#[test]
fn severe_withdrawal_on_birds() {
    let d = birds_dist();
    let r = severe_withdraw(&birds_kb(), &f("f", &d), &d).unwrap();
    // p_max(¬f) = 0.2: 11001 (0.15), 01011 (0.07), 01010 (0.03) stay out
    assert_eq!(r.result_worlds, kb_plus(&d).union(&ws(&d, &["10101", "10001"])));
    assert!((r.measure - r.closed_form).abs() < EPS);
    // withdrawing a tautology changes nothing
    let t = severe_withdraw(&birds_kb(), &f("f | ~f", &d), &d).unwrap();
    assert_eq!(t.result_worlds, kb_plus(&d));
    assert_eq!(t.loss(), Some(0.0));
}

#[test]
fn ranked_distribution_operations() {
    let d = abc();
    let ab = f("a & b", &d);
    let c = contract(&ab, &f("b", &d), &d).unwrap();
    assert!(d.p_equiv(&c.result, &f("a", &d)).unwrap());
    assert_eq!(min_kappa(&f("~b", &d).models(d.alphabet()).unwrap(), &d), ws(&d, &["101", "100"]));
    let r = revise(&ab, &f("~b", &d), &d).unwrap();
    assert!(d.p_equiv(&r.result, &f("a & ~b", &d)).unwrap());
    assert_eq!(r.kind, MeasureKind::Change);
    // κ(a∧¬b) − κ(a∧b) = −log2(4/16) + log2(6/16)
    let oracle = 2.0 + (6.0f64 / 16.0).log2();
    assert!((r.change().unwrap() - oracle).abs() < EPS);
    assert!((r.change().unwrap() - 0.585).abs() < 1e-3);
    assert!((r.closed_form - oracle).abs() < EPS);
    assert!(d.p_equiv(&revise_levi(&ab, &f("~b", &d), &d).unwrap().result, &r.result).unwrap());
}

#[test]
fn spheres_around_a_and_b() {
    let d = abc();
    let s = spheres(&f("a & b", &d), &d).unwrap();
    assert_eq!(s.center(), &ws(&d, &["111", "110"]));
    let annuli = s.annuli();
    assert_eq!(annuli.len(), 2);
    assert_eq!(annuli[0], (q("2/16"), ws(&d, &["101", "100", "011", "010"])));
    assert_eq!(annuli[1], (q("1/16"), ws(&d, &["001", "000"])));
    let spheres_list = s.spheres();
    assert_eq!(spheres_list.len(), 3);
    assert_eq!(spheres_list[2], WorldSet::full(3));
    // σ(¬α) is the smallest sphere meeting [¬α]⁺
    let ab = f("a & b", &d).models(d.alphabet()).unwrap();
    for mask in 0..256u64 {
        let alpha = WorldSet::from_mask(3, mask);
        if ab.is_subset(&alpha) && alpha != WorldSet::full(3) {
            let meeting = s.smallest_meeting(&alpha.complement()).unwrap();
            assert_eq!(sigma_worlds(&ab, &alpha, &d), meeting);
        }
    }
    let top = spheres(&Formula::Top, &d).unwrap();
    assert!(top.annuli().is_empty());
    assert!(matches!(spheres(&Formula::Bottom, &d), Err(Error::PInconsistent)));
}

#[test]
fn pets_revision() {
    let d = pets_dist();
    let r = revise(&f("~p", &d), &f("d", &d), &d).unwrap();
    assert_eq!(r.result_worlds, ws(&d, &["110"]));
    let back = revise(&f("~p", &d), &f("~d", &d), &d).unwrap();
    assert!(d.p_equiv(&back.result, &f("~p", &d)).unwrap());
}

#[test]
fn expansion() {
    let d = abc();
    let a = f("a", &d);
    assert_eq!(expand(&a, &f("~b", &d)), f("a & ~b", &d));
    let g = expand_report(&a, &Formula::Top, &d).unwrap();
    assert_eq!(g.gain(), Some(0.0));
    assert_eq!(g.closed_form, 0.0);
    let g = expand_report(&a, &f("b", &d), &d).unwrap();
    // P(b | a) = 6/10
    assert!((g.gain().unwrap() - -(0.6f64).log2()).abs() < EPS);
    assert!((g.measure - g.closed_form).abs() < EPS);
    let birds = birds_dist();
    let g = expand_report(&birds_kb(), &f("p & o", &birds), &birds).unwrap();
    assert_eq!(g.measure, f64::INFINITY);
    assert_eq!(g.closed_form, f64::INFINITY);
}

#[test]
fn revision_by_impossible_input() {
    let d = birds_dist();
    let r = revise(&birds_kb(), &f("p & o", &d), &d).unwrap();
    assert!(r.is_inconsistent());
    assert_eq!(r.result, Formula::Bottom);
    assert_eq!(r.measure, f64::INFINITY);
    assert_eq!(r.closed_form, f64::INFINITY);
}

#[test]
fn p_inconsistent_beliefs_are_rejected() {
    let d = birds_dist();
    let bad = f("p & o", &d);
    let alpha = f("f", &d);
    assert!(matches!(contract(&bad, &alpha, &d), Err(Error::PInconsistent)));
    assert!(matches!(revise(&bad, &alpha, &d), Err(Error::PInconsistent)));
    assert!(matches!(severe_withdraw(&bad, &alpha, &d), Err(Error::PInconsistent)));
    assert!(matches!(remainders(&bad, &alpha, &d), Err(Error::PInconsistent)));
}

#[test]
fn possible_remainders_collapse_for_tautologies() {
    let d = abc();
    let ab = f("a & b", &d);
    let pr = possible_remainders(&ab, &Formula::Top, &d).unwrap();
    assert_eq!(pr, vec![ab.models(d.alphabet()).unwrap()]);
}

// Every (dist, φ, α) over n ≤ 3 letters on the grid distributions.
fn oracle_instances(n: usize, mut visit: impl FnMut(&ProbDist, &WorldSet, &WorldSet)) {
    let sigma = alphabet(n);
    let subsets = 1u64 << (1 << n);
    for d in grid_distributions(&sigma) {
        for x in 0..subsets {
            let phi = WorldSet::from_mask(n, x);
            if !d.worlds_p_consistent(&phi) {
                continue;
            }
            for y in 0..subsets {
                visit(&d, &phi, &WorldSet::from_mask(n, y));
            }
        }
    }
}

#[test]
fn contraction_matches_remainder_enumeration() {
    for n in 1..=3 {
        let mut checked = 0;
        oracle_instances(n, |d, phi, alpha| {
            let fast = contract_worlds(phi, alpha, d);
            let slow = contract_by_enumeration_worlds(phi, alpha, d).unwrap();
            assert!(d.worlds_p_equiv(&fast, &slow), "n={n} φ={phi:?} α={alpha:?}");
            checked += 1;
        });
        assert!(checked > 0);
    }
}

#[test]
fn remainder_characterisation_matches_enumeration() {
    for n in 1..=2 {
        oracle_instances(n, |d, phi, alpha| {
            let mut fast: Vec<WorldSet> = kmbc::change::RemainderSet::from_worlds(phi, alpha, d)
                .members()
                .iter()
                .map(|r| r.worlds.clone())
                .collect();
            let mut slow = remainders_by_enumeration_worlds(phi, alpha, d).unwrap();
            if d.worlds_p_entail(&WorldSet::full(n), alpha) {
                // only [φ]⁺ remains
                assert_eq!(slow, vec![d.possible(phi)]);
                return;
            }
            fast.sort();
            slow.sort();
            assert_eq!(fast, slow);
        });
    }
}

#[test]
fn severe_withdrawal_matches_beta_conjunction() {
    for n in 1..=3 {
        oracle_instances(n, |d, phi, alpha| {
            let fast = severe_worlds(phi, alpha, d);
            let slow = severe_by_definition_worlds(phi, alpha, d).unwrap();
            assert!(d.worlds_p_equiv(&fast, &slow), "n={n} φ={phi:?} α={alpha:?}");
        });
    }
}

#[test]
fn identities_and_dominance() {
    for n in 1..=3 {
        oracle_instances(n, |d, phi, alpha| {
            let not_alpha = alpha.complement();
            let revised = revise_worlds(phi, alpha, d);
            // Levi
            assert!(d.worlds_p_equiv(&revised, &levi_revise_worlds(phi, alpha, d)));
            // Harper
            assert!(d.worlds_p_equiv(&contract_worlds(phi, &not_alpha, d), &phi.union(&revised)));
            // dominance: contraction ≤_P severe withdrawal, and ≤_P full meet
            let c = contract_worlds(phi, alpha, d);
            let s = severe_worlds(phi, alpha, d);
            assert!(d.worlds_p_entail(&c, &s));
            assert!(d.worlds_p_entail(&c, &full_meet_worlds(phi, alpha, d)));
            assert!(d.prob_of_worlds(&c) <= d.prob_of_worlds(&s));
            // tie completeness
            let m = min_kappa(&d.possible(&not_alpha), d);
            if let Some(top) = d.max_mass(&not_alpha) {
                for w in not_alpha.iter() {
                    assert_eq!(m.contains(w), d.mass(w) == top);
                }
            } else {
                assert!(m.is_empty());
            }
        });
    }
}

#[test]
fn sphere_system_reproduces_sigma() {
    for n in 1..=3 {
        oracle_instances(n, |d, phi, alpha| {
            let system = SphereSystem::from_worlds(phi, d);
            let expected = if d.possible(phi).is_subset(alpha) {
                system.smallest_meeting(&d.possible(&alpha.complement())).unwrap_or_else(|| d.possible(phi))
            } else {
                d.possible(phi)
            };
            assert_eq!(sigma_worlds(phi, alpha, d), expected);
        });
    }
}

fn formula_dist_strategy() -> impl Strategy<Value = (Vec<u32>, u64, u64)> {
    (prop::collection::vec(0u32..5, 8), 0u64..256, 0u64..256)
}

proptest! {
    #[test]
    fn measures_agree_with_closed_forms((weights, x, y) in formula_dist_strategy()) {
        let sigma = alphabet(3);
        let Some(d) = dist_from_weights(&sigma, &weights) else { return Ok(()); };
        let phi_m = WorldSet::from_mask(3, x);
        prop_assume!(d.worlds_p_consistent(&phi_m));
        let phi = kmbc::logic::formula_of_worlds(&phi_m, &sigma);
        let alpha = kmbc::logic::formula_of_worlds(&WorldSet::from_mask(3, y), &sigma);
        for r in [
            contract(&phi, &alpha, &d).unwrap(),
            severe_withdraw(&phi, &alpha, &d).unwrap(),
            full_meet_contract(&phi, &alpha, &d).unwrap(),
        ] {
            let l = r.loss().unwrap();
            prop_assert!(l >= -EPS);
            prop_assert!((l - r.closed_form).abs() < EPS, "{:?}: {} vs {}", r.operator, l, r.closed_form);
        }
        let g = expand_report(&phi, &alpha, &d).unwrap();
        prop_assert!(g.gain().unwrap() >= -EPS);
        if g.measure.is_finite() {
            prop_assert!((g.measure - g.closed_form).abs() < EPS);
        } else {
            prop_assert_eq!(g.closed_form, f64::INFINITY);
        }
        let r = revise(&phi, &alpha, &d).unwrap();
        if r.measure.is_finite() {
            prop_assert!((r.measure - r.closed_form).abs() < EPS);
        } else {
            prop_assert_eq!(r.closed_form, f64::INFINITY);
        }
        // R = G whenever φ is P-consistent with α
        if !d.possible(&phi_m).is_disjoint(&alpha.models(&sigma).unwrap()) {
            prop_assert!((r.measure - g.measure).abs() < EPS);
        }
        let l = revise_levi(&phi, &alpha, &d).unwrap();
        prop_assert!(d.worlds_p_equiv(&l.result_worlds, &r.result_worlds));
    }
}
