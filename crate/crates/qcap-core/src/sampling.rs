//! Seeded random generators shared by the verification suite and tests.
//!
//! Every draw goes through a ChaCha stream cipher RNG so identical seeds
//! reproduce identical values on every platform.

use crate::channel::{degrading_params, ChannelParamsXYZ, KrausChannel};
use crate::matrix::ComplexMatrix;
use crate::pauli::{pauli_matrix, PauliString};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Full-rank density matrix ρ = MM†/tr(MM†) with uniform complex entries.
pub fn random_density_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let m = ComplexMatrix::from_rows(dim, dim, data);
    let mm = &m * &m.dagger();
    let tr = mm.trace().re;
    mm.scale_real(1.0 / tr)
}

/// Channel-valid parameters: x ∈ [0, 1], 2y + z bounded away from 1.
pub fn random_valid_xyz(rng: &mut ChaCha8Rng) -> ChannelParamsXYZ {
    let x = rng.gen_range(0.0..1.0);
    let y = rng.gen_range(0.0..0.49);
    let z = rng.gen_range(0.0..(1.0 - 2.0 * y - 0.01));
    ChannelParamsXYZ::new(x, y, z)
}

/// Degradable parameters: x < 1/2, 2y + z < 1, rejected until the derived
/// degrading map (g, h, k) is itself a valid channel (k can go negative in
/// the nominal regime, in which case the degrading construction fails).
pub fn random_degradable_xyz(rng: &mut ChaCha8Rng) -> ChannelParamsXYZ {
    loop {
        let x = rng.gen_range(0.0..0.49);
        let y = rng.gen_range(0.0..0.49);
        let z = rng.gen_range(0.0..(1.0 - 2.0 * y - 0.01));
        let p = ChannelParamsXYZ::new(x, y, z);
        if let Ok((g, h, k)) = degrading_params(&p) {
            if g >= 0.0 && h >= 0.0 && k >= 0.0 && 2.0 * h + k <= 1.0 {
                return p;
            }
        }
    }
}

/// Valid nine-coefficient vector for the diagonal-damping family.
pub fn random_phi_a_coeffs(rng: &mut ChaCha8Rng) -> [f64; 9] {
    let a01: f64 = rng.gen_range(0.0..1.0);
    let a11 = (1.0 - a01 * a01).sqrt();
    let a02: f64 = rng.gen_range(0.0..1.0);
    let a21 = (1.0 - a02 * a02).sqrt();
    // point on the nonnegative part of the unit 3-sphere
    let mut v = [0.0f64; 4];
    let mut norm = 0.0;
    while norm < 1e-6 {
        for item in &mut v {
            *item = rng.gen_range(0.0..1.0);
        }
        norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    }
    for item in &mut v {
        *item /= norm;
    }
    [1.0, a01, a02, v[0], a11, v[1], a21, v[2], v[3]]
}

/// Uniformly drawn Pauli-string unitary on m qubits.
pub fn random_pauli_unitary(rng: &mut ChaCha8Rng, m: usize) -> ComplexMatrix {
    let x = rng.gen_range(0..(1u32 << m));
    let z = rng.gen_range(0..(1u32 << m));
    pauli_matrix(&PauliString::new(m, x, z).expect("mask within range")).expect("within qubit cap")
}

/// Random CPT channel with `kraus` operators on `dim` dimensions, obtained by
/// Gram–Schmidt orthonormalization of the columns of a random isometry.
pub fn random_channel(rng: &mut ChaCha8Rng, dim: usize, kraus: usize) -> KrausChannel {
    let rows = dim * kraus;
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| {
                (0..rows)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        if let Some(ortho) = gram_schmidt(&mut cols) {
            let mut ops = Vec::with_capacity(kraus);
            for k in 0..kraus {
                let mut a = ComplexMatrix::zeros(dim, dim);
                for (c, col) in ortho.iter().enumerate() {
                    for r in 0..dim {
                        a.set(r, c, col[k * dim + r]);
                    }
                }
                ops.push(a);
            }
            return KrausChannel::new(ops).expect("isometry columns give a CPT channel");
        }
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass; `None` when a
/// column is (numerically) dependent.
fn gram_schmidt(cols: &mut [Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(cols.len());
    for col in cols.iter() {
        let mut v = col.clone();
        for _ in 0..2 {
            for u in &out {
                let proj: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u.iter()) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for vi in &mut v {
            *vi /= Complex64::new(norm, 0.0);
        }
        out.push(v);
    }
    Some(out)
}

/// Random probability vector over all 4^m Pauli strings.
pub fn random_pauli_channel_probs(rng: &mut ChaCha8Rng, m: usize) -> BTreeMap<PauliString, f64> {
    let strings = PauliString::all(m).expect("within qubit cap");
    let raw: Vec<f64> = strings
        .iter()
        .map(|_| -f64::ln(rng.gen_range(1e-12..1.0)))
        .collect();
    let total: f64 = raw.iter().sum();
    strings
        .into_iter()
        .zip(raw)
        .map(|(p, w)| (p, w / total))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_matrices_are_density_matrices() {
        let mut rng = seeded_rng(5);
        for dim in [2usize, 4] {
            let rho = random_density_matrix(&mut rng, dim);
            assert!(rho.is_hermitian(1e-12));
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            let eigs = crate::eigen::hermitian_eigenvalues(&rho).unwrap();
            assert!(eigs.iter().all(|&l| l >= -1e-10));
        }
    }

    #[test]
    fn seeded_draws_are_reproducible() {
        let a = random_density_matrix(&mut seeded_rng(9), 4);
        let b = random_density_matrix(&mut seeded_rng(9), 4);
        assert_eq!(a.max_diff(&b), 0.0);
    }

    #[test]
    fn random_channels_are_cpt_by_construction() {
        let mut rng = seeded_rng(13);
        for _ in 0..5 {
            // constructor has already verified ΣA†A = 1
            let ch = random_channel(&mut rng, 4, 4);
            assert_eq!(ch.kraus_ops().len(), 4);
        }
    }

    #[test]
    fn degradable_draws_admit_the_degrading_construction() {
        let mut rng = seeded_rng(19);
        for _ in 0..20 {
            let p = random_degradable_xyz(&mut rng);
            crate::channel::make_degrading_map(&p).unwrap();
        }
    }
}
