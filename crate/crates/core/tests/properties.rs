use proptest::prelude::*;
use tribasis::{
    adapt_to_support, canonical, classify_support, enumerate_candidates, estimate_3bb_exact, estimate_5bb_report,
    exact_probs, five_bases, haar_random, infidelity, make_state, three_bases, BasisId, Complex64,
    EstimatorOptions, FiveBasisObservations, LambdaChain, PairBasisParams, ProbabilityVector, PureState,
    ThreeBasisSet, VectorRole,
};

fn three_probs(psi: &PureState, bases: &ThreeBasisSet) -> Vec<ProbabilityVector> {
    bases.bases().into_iter().map(|b| exact_probs(psi, b).unwrap()).collect()
}

fn chain_of(psi: &PureState, bases: &ThreeBasisSet) -> LambdaChain {
    let probs = three_probs(psi, bases);
    let pick = |i: usize, basis: &tribasis::OrthonormalBasis| -> Vec<f64> {
        basis.positions(VectorRole::PairPlus).into_iter().map(|k| probs[i].entries[k]).collect()
    };
    LambdaChain::from_frequencies(&probs[0].entries, &pick(1, &bases.b1p), &pick(2, &bases.b3p), &bases.params)
        .unwrap()
}

#[test]
fn three_and_five_basis_estimates_agree_on_exact_data() {
    for d in [4usize, 6, 8, 10] {
        let params = PairBasisParams::balanced(d);
        let bases = three_bases(d, &params).unwrap();
        let mut five = vec![canonical(d).unwrap()];
        five.extend(five_bases(d, &params).unwrap());
        for seed in 0..100 {
            let psi = haar_random(d, 7_000 + seed).unwrap();
            // probabilities near the exact-data zero threshold change the support
            if psi.probabilities().iter().any(|&p| p < 1e-5) {
                continue;
            }
            let r3 = estimate_3bb_exact(&three_probs(&psi, &bases), &bases, &EstimatorOptions::default()).unwrap();
            let probs5: Vec<_> = five.iter().map(|b| exact_probs(&psi, b).unwrap()).collect();
            let r5 = estimate_5bb_report(
                &FiveBasisObservations::from_probs(&probs5).unwrap(),
                &params,
                &EstimatorOptions::default(),
            )
            .unwrap();
            assert!(infidelity(&r3.estimate, &r5.estimate).unwrap() < 1e-9, "d={d} seed={seed}");
            // signs only matter where the imaginary part is resolvable
            for (k, l) in psi.pair_correlators()[..d - 1].iter().enumerate() {
                if l.im.abs() > 1e-6 {
                    assert_eq!(r3.chosen_signs.0[k], r5.chosen_signs.0[k], "d={d} seed={seed} k={k}");
                }
            }
        }
    }
}

#[test]
fn flipped_signs_give_the_conjugate_candidate() {
    // real pair coefficients: psi and its conjugate share the chain data
    for d in [4usize, 6, 8] {
        let bases = three_bases(d, &PairBasisParams::balanced(d)).unwrap();
        let psi = haar_random(d, 31 + d as u64).unwrap();
        let chain = chain_of(&psi, &bases);
        assert_eq!(chain, chain_of(&psi.conj(), &bases));
        let candidates = enumerate_candidates(&chain, &psi.probabilities(), 1e-6).unwrap();
        for c in &candidates {
            let partner = candidates.iter().find(|x| x.signs == c.signs.flipped()).unwrap();
            assert!(infidelity(&partner.state, &c.state.conj()).unwrap() < 1e-12);
        }
    }
}

#[test]
fn adapted_bases_recover_a_state_on_its_support() {
    let d = 10;
    let arc = [3usize, 4, 5, 6, 7, 8];
    for seed in 0..20 {
        let sub = haar_random(arc.len(), 500 + seed).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        for (&k, &c) in arc.iter().zip(sub.amplitudes()) {
            amps[k] = c;
        }
        let parent = make_state(&amps).unwrap();
        let pattern = classify_support(&parent.probabilities(), 1e-9);
        assert_eq!(pattern.arcs, vec![arc.to_vec()]);

        let adapted = adapt_to_support(&pattern.arcs[0], d, seed).unwrap();
        // measure the parent state against the embedded vectors
        let probs: Vec<ProbabilityVector> = adapted
            .embedded_vectors()
            .iter()
            .zip([BasisId::B0, BasisId::B1p, BasisId::B3p])
            .map(|(vectors, basis)| ProbabilityVector {
                basis,
                entries: vectors.iter().map(|v| parent.inner(&make_state(v).unwrap()).unwrap().norm_sqr()).collect(),
            })
            .collect();
        let r = estimate_3bb_exact(&probs, &adapted.bases, &EstimatorOptions::default()).unwrap();
        let back = adapted.embed_state(&r.estimate).unwrap();
        assert!(infidelity(&back, &parent).unwrap() < 1e-9, "seed {seed}");
    }
}

fn amplitudes(d: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

proptest! {
    #[test]
    fn exact_data_recovers_unflagged_states(amps in prop_oneof![amplitudes(4), amplitudes(6), amplitudes(8)]) {
        let psi = make_state(&amps).unwrap();
        let d = psi.dim();
        prop_assume!(psi.probabilities().iter().all(|&p| p > 1e-4));
        let bases = three_bases(d, &PairBasisParams::balanced(d)).unwrap();
        let r = estimate_3bb_exact(&three_probs(&psi, &bases), &bases, &EstimatorOptions::default()).unwrap();
        prop_assume!(!r.flags.likelihood_tie);
        prop_assert!(infidelity(&psi, &r.estimate).unwrap() < 1e-8);
    }

    #[test]
    fn estimate_is_phase_invariant(amps in amplitudes(6), phase in 0.0f64..6.28) {
        let psi = make_state(&amps).unwrap();
        let rotated = make_state(&amps.iter().map(|c| c * Complex64::from_polar(1.0, phase)).collect::<Vec<_>>()).unwrap();
        let bases = three_bases(6, &PairBasisParams::balanced(6)).unwrap();
        let a = estimate_3bb_exact(&three_probs(&psi, &bases), &bases, &EstimatorOptions::default()).unwrap();
        let b = estimate_3bb_exact(&three_probs(&rotated, &bases), &bases, &EstimatorOptions::default()).unwrap();
        prop_assert!(infidelity(&a.estimate, &b.estimate).unwrap() < 1e-9);
    }
}
