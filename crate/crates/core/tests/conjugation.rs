//! Positive conjugation and the skew-symmetrizing method, checked against the engine.

use clusterlab::catalog::{f4_integer, CoxeterType};
use clusterlab::explore::{enumerate_c_pattern, Coherence};
use clusterlab::quasiint::construct_integer_matrix;
use clusterlab::skewsym::{find_skew_symmetrizer, positive_conjugate, sk};
use clusterlab::{Matrix, Node, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_words(n: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..rng.gen_range(0..9)).map(|_| rng.gen_range(1..=n)).collect()).collect()
}

/// `Ĉ = H C H⁻¹`, `Ĝ = H G H⁻¹` along the same word.
fn assert_conjugate(b: &Matrix, h: &[Scalar], seed: u64) {
    let hb = positive_conjugate(b, h);
    for word in random_words(b.n(), 60, seed) {
        let orig = Node::replay(b, &word);
        let conj = Node::replay(&hb, &word);
        assert_eq!(conj.b, positive_conjugate(&orig.b, h), "B at {word:?}");
        assert_eq!(conj.c, positive_conjugate(&orig.c, h), "C at {word:?}");
        assert_eq!(conj.g, positive_conjugate(&orig.g, h), "G at {word:?}");
    }
}

#[test]
fn positive_conjugation_commutes_with_mutation() {
    let h = [Scalar::from_int(3), Scalar::from_ratio(1, 2), Scalar::from_int(5)];
    assert_conjugate(&CoxeterType::H3.matrix(), &h, 1);
    let h4 = [1, 2, 3, 7].map(Scalar::from_int);
    assert_conjugate(&f4_integer(), &h4, 2);
}

#[test]
fn skew_symmetrizing_method() {
    // Sk(B) = D^{1/2} B D^{-1/2}; the patterns are conjugate by D^{1/2}.
    for b in [f4_integer(), Matrix::from_ints(&[&[0, -1], &[4, 0]]), CoxeterType::B(3).matrix()] {
        let d = find_skew_symmetrizer(&b).unwrap();
        let roots: Vec<Scalar> = d.iter().map(|x| x.sqrt_nonneg().unwrap()).collect();
        assert_eq!(sk(&b).unwrap(), positive_conjugate(&b, &roots));
        assert_conjugate(&b, &roots, 3);
    }
}

#[test]
fn quasi_integer_quivers_are_coherent() {
    // The integer certificate is an ordinary exchange matrix, hence coherent,
    // and its pattern conjugates onto the quiver's.
    for t in [CoxeterType::B(3), CoxeterType::F4, CoxeterType::I2(4), CoxeterType::I2(6)] {
        let q = t.quiver();
        let cert = construct_integer_matrix(&q).unwrap();
        assert!(cert.verified);
        let r = enumerate_c_pattern(q.weights(), t.default_depth());
        assert!(matches!(r.coherence, Some(Coherence::CoherentUpTo(_))), "{t:?}");
        let ri = enumerate_c_pattern(&cert.b, t.default_depth());
        assert_eq!(r.size(), ri.size(), "{t:?}");
    }
}
