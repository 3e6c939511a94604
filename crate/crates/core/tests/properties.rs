use mistrust::bitwise::{bob_entropy, cheat_bound, reveal_probabilities};
use mistrust::codebook::{cheat_operator, gram_matrix, random_codebook, simplex_codebook};
use mistrust::qmath::{
    binary_entropy, hermitian_eigen, tensor, von_neumann_entropy, CMatrix, Complex64,
    DensityMatrix, HermitianOperator, StateVector,
};
use mistrust::rng::rng_stream;
use proptest::prelude::*;

fn random_hermitian(dim: usize, seed: u64) -> HermitianOperator {
    use rand::Rng;
    let mut rng = rng_stream(seed, "hermitian");
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..dim {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m).unwrap()
}

fn haar(dim: usize, seed: u64, label: &str) -> StateVector {
    StateVector::haar(dim, &mut rng_stream(seed, label)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eigen_reconstructs(dim in 1usize..=64, seed in any::<u64>()) {
        let h = random_hermitian(dim, seed);
        let eig = hermitian_eigen(&h).unwrap();
        let scale = h.matrix().frobenius_norm().max(1.0);
        prop_assert!(eig.reconstruct().max_abs_diff(h.matrix()) < 1e-10 * scale);
        let vals = eig.eigenvalues();
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((vals.iter().sum::<f64>() - h.trace()).abs() < 1e-10 * scale);
        let vecs = eig.eigenvectors();
        for i in 0..dim.min(8) {
            for j in 0..dim.min(8) {
                let ip = vecs[i].inner(&vecs[j]).unwrap().norm();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn tensor_is_associative(a in 1usize..4, b in 1usize..4, c in 1usize..4, seed in any::<u64>()) {
        let (x, y, z) = (haar(a, seed, "x"), haar(b, seed, "y"), haar(c, seed, "z"));
        let left = tensor(&tensor(&x, &y), &z);
        let right = tensor(&x, &tensor(&y, &z));
        prop_assert_eq!(left.dim(), a * b * c);
        prop_assert!(left.max_abs_diff(&right) < 1e-15);
        prop_assert!((left.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_within_dimension(dim in 1usize..=12, k in 1usize..=6, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = rng_stream(seed, "weights");
        let states: Vec<_> = (0..k).map(|i| haar(dim, seed, &format!("s{i}"))).collect();
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let rho = DensityMatrix::mixture(&weights, &states).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= -1e-12);
        prop_assert!(s <= (dim as f64).log2().min((k as f64).log2()) + 1e-9);
    }

    #[test]
    fn binary_entropy_symmetric(p in 0.0f64..=1.0) {
        let h = binary_entropy(p).unwrap();
        prop_assert!((0.0..=1.0).contains(&h));
        prop_assert!((h - binary_entropy(1.0 - p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn no_state_beats_the_cheat_bound(theta in 1e-3f64..=std::f64::consts::FRAC_PI_2, seed in any::<u64>()) {
        let (p0, p1) = reveal_probabilities(&haar(2, seed, "cheat"), theta).unwrap();
        prop_assert!(p0 + p1 <= cheat_bound(theta).unwrap() + 1e-9);
    }

    #[test]
    fn ensemble_entropy_is_additive(n in 1usize..=6, theta in 0.01f64..=1.5) {
        let single = bob_entropy(1, theta).unwrap();
        prop_assert!((bob_entropy(n, theta).unwrap() - n as f64 * single).abs() < 1e-9);
    }

    #[test]
    fn simplex_overlaps(d in 2usize..=16) {
        let cb = simplex_codebook(d).unwrap();
        let v = cb.vectors();
        for i in 0..v.len() {
            for j in 0..i {
                prop_assert!((v[i].inner(&v[j]).unwrap().re + 1.0 / d as f64).abs() < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn codebook_multistring_bound(seed in 0u64..1000, picks in proptest::collection::btree_set(0usize..32, 1..=8)) {
        let cb = random_codebook(16, 32, 0.25, seed, 10).unwrap();
        let targets: Vec<usize> = picks.into_iter().collect();
        let q = cheat_operator(&cb, &targets).unwrap().eigen().unwrap();
        let g = gram_matrix(&cb, &targets).unwrap().eigen().unwrap();
        let r = targets.len();
        prop_assert!(q.eigenvalues()[0] <= 1.0 + (r - 1) as f64 * 0.25 + 1e-9);
        for k in 0..r {
            prop_assert!((q.eigenvalues()[k] - g.eigenvalues()[k]).abs() < 1e-9);
        }
        prop_assert!(q.eigenvalues()[r..].iter().all(|l| l.abs() < 1e-9));
    }
}
