//! Random states and operators for sampling-based checks and demos.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{self, ComplexMatrix};
use crate::states::{density_from_pure, DensityOperator, MeasurementAxis, PureState};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-random pure state in dimension `dim`.
pub fn pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let amps: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    PureState::normalized(amps).expect("gaussian vector is nonzero")
}

/// Uniformly distributed unit axis.
pub fn axis<R: Rng + ?Sized>(rng: &mut R) -> MeasurementAxis {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            if let Ok(a) = MeasurementAxis::new([v[0] / n, v[1] / n, v[2] / n]) {
                return a;
            }
        }
    }
}

/// Random probability vector of length `n` (uniform on the simplex).
pub fn probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Mixture of `terms` random pure states with random weights.
pub fn density<R: Rng + ?Sized>(dim: usize, terms: usize, rng: &mut R) -> DensityOperator {
    let weights = probabilities(terms, rng);
    let states: Vec<DensityOperator> = (0..terms)
        .map(|_| density_from_pure(&pure_state(dim, rng)))
        .collect();
    let parts: Vec<(f64, &DensityOperator)> = weights.iter().copied().zip(states.iter()).collect();
    DensityOperator::mixture(&parts).expect("mixture of valid states is valid")
}

/// Random Hermitian matrix with standard normal entries.
pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(StandardNormal.sample(rng), 0.0);
        for j in (i + 1)..n {
            let z = gaussian_complex(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Matrix with independent complex gaussian entries.
pub fn matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian_complex(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite entries")
}

/// Haar-random unitary via Gram-Schmidt on a gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = matrix(n, n, rng);
    let mut u = ComplexMatrix::zeros(n, n);
    let mut done: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.col(j);
        for b in &done {
            let proj = linalg::inner(b, &v);
            for (x, bi) in v.iter_mut().zip(b) {
                *x -= proj * bi;
            }
        }
        let nrm = linalg::norm(&v);
        let v: Vec<Complex64> = v.into_iter().map(|x| x / nrm).collect();
        u.set_col(j, &v);
        done.push(v);
    }
    u
}
