use bcrsp::noise::{dephasing_kraus, kraus_set, phase_flip_kraus, NoiseKind};
use bcrsp::protocol::{equatorial_state, fourier_basis, ghz_state, sender_basis, PhaseVector};
use bcrsp::qudit::{
    apply_kraus, apply_on, fidelity, measure, project, tensor, Branch, BranchEnsemble, KrausSet, MeasurementBasis,
    Operator, StateVector,
};
use bcrsp::C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_state<R: Rng>(dims: Vec<usize>, rng: &mut R) -> StateVector {
    let len = dims.iter().product();
    let amps = (0..len).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    StateVector::normalize(dims, amps).unwrap()
}

/// Gram-Schmidt on random columns.
fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> Operator {
    let mut cols: Vec<Vec<C64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for u in &cols {
            let ip: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= ip * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    Operator::from_fn(n, n, |r, col| cols[col][r])
}

fn dense(state: &StateVector) -> Vec<Vec<C64>> {
    let a = state.amplitudes();
    a.iter().map(|x| a.iter().map(|y| x * y.conj()).collect()).collect()
}

fn max_diff(a: &[Vec<C64>], b: &Operator) -> f64 {
    let mut worst: f64 = 0.0;
    for (r, row) in a.iter().enumerate() {
        for (col, x) in row.iter().enumerate() {
            worst = worst.max((x - b.get(r, col)).norm());
        }
    }
    worst
}

/// `sum_l (E_l ⊗ I) rho (E_l ⊗ I)^dagger` with the channel on subsystem
/// `target` of a register with the given dims, by explicit index arithmetic.
fn dense_channel(rho: &[Vec<C64>], dims: &[usize], kraus: &KrausSet, target: usize) -> Vec<Vec<C64>> {
    let len = rho.len();
    let stride: usize = dims[target + 1..].iter().product();
    let d = dims[target];
    let digit = |i: usize| (i / stride) % d;
    let with_digit = |i: usize, v: usize| i - digit(i) * stride + v * stride;
    let mut out = vec![vec![c(0.0, 0.0); len]; len];
    for e in kraus.operators() {
        for (r, out_row) in out.iter_mut().enumerate() {
            for (col, slot) in out_row.iter_mut().enumerate() {
                let mut acc = c(0.0, 0.0);
                for a in 0..d {
                    for b in 0..d {
                        let x = rho[with_digit(r, a)][with_digit(col, b)];
                        acc += e.get(digit(r), a) * x * e.get(digit(col), b).conj();
                    }
                }
                *slot += acc;
            }
        }
    }
    out
}

#[test]
fn double_ghz_by_index_enumeration() {
    let g = ghz_state(3).unwrap();
    let both = tensor(&g, &g);
    assert_eq!(both.len(), 729);
    let a = 1.0 / 3.0;
    for (i, amp) in both.amplitudes().iter().enumerate() {
        let digits: Vec<usize> = (0..6).rev().map(|p| (i / 3usize.pow(p)) % 3).collect();
        let on = digits[0] == digits[1] && digits[1] == digits[2] && digits[3] == digits[4] && digits[4] == digits[5];
        let expect = if on { a } else { 0.0 };
        assert!((amp - c(expect, 0.0)).norm() < 1e-15, "index {i}");
    }
}

#[test]
fn tensor_basis_and_linearity() {
    let zero = StateVector::basis(&[2], &[0]).unwrap();
    let zz = tensor(&zero, &zero);
    assert_eq!(zz.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::new(vec![2], vec![c(h, 0.0), c(h, 0.0)]).unwrap();
    assert_eq!(tensor(&plus, &zero).amplitudes(), &[c(h, 0.0), c(0.0, 0.0), c(h, 0.0), c(0.0, 0.0)]);
}

#[test]
fn projecting_ghz_onto_fourier_zero() {
    let g = ghz_state(3).unwrap();
    let v = fourier_basis(3).unwrap().vectors()[0].clone();
    let s = 1.0 / 3f64.sqrt();
    for target in 0..3 {
        let p = project(&g, &v, target).unwrap();
        assert!((p.probability - 1.0 / 3.0).abs() < 1e-14);
        let rest = p.state.unwrap();
        assert_eq!(rest.dims(), &[3, 3]);
        for (i, a) in rest.amplitudes().iter().enumerate() {
            let expect = if i % 4 == 0 { s } else { 0.0 };
            assert!((a - c(expect, 0.0)).norm() < 1e-14);
        }
    }
    let two = StateVector::basis(&[2, 2], &[0, 0]).unwrap();
    let p = project(&two, &StateVector::basis(&[2], &[0]).unwrap(), 0).unwrap();
    assert_eq!(p.probability, 1.0);
    assert_eq!(p.state.unwrap(), StateVector::basis(&[2], &[0]).unwrap());
}

#[test]
fn zero_probability_projection_is_flagged() {
    let zero = StateVector::basis(&[2, 2], &[0, 0]).unwrap();
    let p = project(&zero, &StateVector::basis(&[2], &[1]).unwrap(), 1).unwrap();
    assert_eq!(p.probability, 0.0);
    assert!(p.state.is_none());
}

/// After `A2 -> phi_1` and `B1 -> phi~_1` the four remaining particles are
/// `(1/9) sum_{j,j'} e^{i(delta~_j + delta_j')} e^{-i 2 pi (j + j')/3} |j j j' j'>`
/// in order `A1 C1 B2 C2`, up to normalisation.
#[test]
fn sequential_projection_four_particle_state() {
    let d = PhaseVector::new(3, vec![0.6, 2.3]).unwrap();
    let dt = PhaseVector::new(3, vec![-1.1, 0.45]).unwrap();
    let g = ghz_state(3).unwrap();
    let both = tensor(&g, &g);
    let after_a2 = project(&both, &sender_basis(&d).vectors()[1], 3).unwrap().state.unwrap();
    let after_b1 = project(&after_a2, &sender_basis(&dt).vectors()[1], 1).unwrap().state.unwrap();
    assert_eq!(after_b1.dims(), &[3, 3, 3, 3]);
    let mut expect = vec![c(0.0, 0.0); 81];
    for j in 0..3 {
        for jp in 0..3 {
            let phase = dt.phase(j) + d.phase(jp) - 2.0 * std::f64::consts::PI * (j + jp) as f64 / 3.0;
            expect[((j * 3 + j) * 3 + jp) * 3 + jp] = C64::from_polar(1.0 / 9.0, phase);
        }
    }
    let expect = StateVector::normalize(vec![3, 3, 3, 3], expect).unwrap();
    assert!(after_b1.overlap(&expect).unwrap() > 1.0 - 1e-12);
}

#[test]
fn born_frequencies_on_ghz() {
    let g = ghz_state(3).unwrap();
    let basis = fourier_basis(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 100_000;
    let mut counts = [0usize; 3];
    for _ in 0..trials {
        counts[measure(&g, &basis, 0, &mut rng).unwrap().outcome] += 1;
    }
    let p = 1.0 / 3.0;
    let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
    for k in counts {
        assert!((k as f64 - trials as f64 * p).abs() < 3.0 * sigma, "{counts:?}");
    }
}

#[test]
fn seeded_measurement_replays() {
    let g = ghz_state(4).unwrap();
    let basis = fourier_basis(4).unwrap();
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..50).map(|_| measure(&g, &basis, 1, &mut rng).unwrap().outcome).collect::<Vec<_>>()
    };
    assert_eq!(run(11), run(11));
    let zero = StateVector::basis(&[3], &[0]).unwrap();
    let m = measure(&zero, &MeasurementBasis::computational(3), 0, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert_eq!((m.outcome, m.probability), (0, 1.0));
}

#[test]
fn correction_on_qutrit_basis_state() {
    let one = StateVector::basis(&[3], &[1]).unwrap();
    let u1 = Operator::diagonal(&[
        c(1.0, 0.0),
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0),
        C64::from_polar(1.0, 4.0 * std::f64::consts::PI / 3.0),
    ]);
    let out = apply_on(&u1, &one, &[0]).unwrap();
    assert!((out.amplitudes()[1] - C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)).norm() < 1e-15);
    assert_eq!(apply_on(&Operator::identity(3), &one, &[0]).unwrap(), one);
}

#[test]
fn dephasing_ensemble_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let psi = random_state(vec![4], &mut rng);
    for gamma in [0.0, 0.3, 0.8, 1.0] {
        let k = dephasing_kraus(gamma, 4).unwrap();
        let ens = apply_kraus(&BranchEnsemble::pure(psi.clone()).unwrap(), &k, 0).unwrap();
        let oracle = dense_channel(&dense(&psi), &[4], &k, 0);
        assert!(max_diff(&oracle, &ens.density_matrix()) < 1e-12);
        // Off-diagonals against |0> shrink by sqrt(1 - gamma), the rest by (1 - gamma).
        let rho = ens.density_matrix();
        let a = psi.amplitudes();
        assert!((rho.get(0, 2) - a[0] * a[2].conj() * (1.0 - gamma).sqrt()).norm() < 1e-12);
        assert!((rho.get(1, 3) - a[1] * a[3].conj() * (1.0 - gamma)).norm() < 1e-12);
    }
}

/// `<t|rho|t> = 1 - 3 gamma / 4` for the equatorial state with zero phases,
/// so the fidelity is its square root.
#[test]
fn phase_flip_single_particle_fidelity() {
    let t = equatorial_state(&PhaseVector::zeros(4).unwrap());
    let ens = apply_kraus(&BranchEnsemble::pure(t.clone()).unwrap(), &phase_flip_kraus(0.4, 4).unwrap(), 0).unwrap();
    let f = fidelity(&t, &ens).unwrap();
    assert!((f * f - 0.7).abs() < 1e-12);
    assert!((f - 0.7f64.sqrt()).abs() < 1e-12);
}

#[test]
fn trace_preserved_for_all_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let psi = random_state(vec![4, 4], &mut rng);
    let ens = BranchEnsemble::pure(psi).unwrap();
    for kind in NoiseKind::ALL {
        for i in 0..20 {
            let gamma = i as f64 / 19.0;
            let out = apply_kraus(&ens, &kraus_set(kind, gamma, 4).unwrap(), 1).unwrap();
            assert!((out.total_weight() - 1.0).abs() < 1e-12, "{kind} {gamma}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_application_preserves_norm(seed in any::<u64>(), n in 2usize..5, target in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(vec![n, n, n], &mut rng);
        let u = random_unitary(n, &mut rng);
        let out = apply_on(&u, &psi, &[target]).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
        prop_assert!(out.is_normalized());
    }

    #[test]
    fn measurement_probabilities_sum_to_one(seed in any::<u64>(), n in 2usize..6, target in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(vec![n, n], &mut rng);
        let u = random_unitary(n, &mut rng);
        let rows = (0..n).map(|r| u.row(r).to_vec()).collect();
        let basis = MeasurementBasis::from_rows(rows).unwrap();
        let total: f64 = basis.vectors().iter().map(|v| project(&psi, v, target).unwrap().probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ensemble_equals_dense_channel(seed in any::<u64>(), n in 2usize..5, kind_idx in 0usize..3, gamma in 0.0f64..=1.0, target in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_state(vec![n, n], &mut rng);
        let k = kraus_set(NoiseKind::ALL[kind_idx], gamma, n).unwrap();
        let ens = apply_kraus(&BranchEnsemble::pure(psi.clone()).unwrap(), &k, target).unwrap();
        let oracle = dense_channel(&dense(&psi), &[n, n], &k, target);
        prop_assert!(max_diff(&oracle, &ens.density_matrix()) < 1e-10);
        prop_assert!((ens.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_squared_is_linear_in_mixing(seed in any::<u64>(), n in 2usize..6, lambda in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_state(vec![n], &mut rng);
        let a = BranchEnsemble::new(vec![
            Branch { weight: 0.3, state: random_state(vec![n], &mut rng) },
            Branch { weight: 0.7, state: random_state(vec![n], &mut rng) },
        ]).unwrap();
        let b = BranchEnsemble::pure(random_state(vec![n], &mut rng)).unwrap();
        let mixed = BranchEnsemble::mix(lambda, &a, &b).unwrap();
        let lhs = fidelity(&t, &mixed).unwrap().powi(2);
        let rhs = lambda * fidelity(&t, &a).unwrap().powi(2) + (1.0 - lambda) * fidelity(&t, &b).unwrap().powi(2);
        prop_assert!((lhs - rhs).abs() < 1e-12);
        let f = fidelity(&t, &mixed).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
    }
}
