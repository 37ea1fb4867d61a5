//! Quantum channels in Kraus form, their Choi matrices and complementary
//! channels, and the two-qubit amplitude damping family together with its
//! degrading map.
//!
//! Kraus representations are not unique (the degrading-map identity compares
//! a 16-operator composition against a 4-operator channel), so channel
//! equality is always judged at the Choi level.

use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pauli::{pauli_matrix, PauliString};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Trace-preservation tolerance enforced on every constructed channel.
pub const CPT_TOL: f64 = 1e-10;

/// Max-norm Choi distance below which two channels count as equal.
pub const CHOI_EQ_TOL: f64 = 1e-9;

/// A completely positive trace-preserving map, stored as an ordered list of
/// out_dim × in_dim Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates shapes and trace preservation (‖ΣA†A − 𝟙‖_max ≤ 1e-10).
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::Parameter("channel needs at least one Kraus operator".into()))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        for op in &ops {
            if op.rows() != out_dim || op.cols() != in_dim {
                return Err(Error::Shape(format!(
                    "Kraus operators disagree on shape: {}x{} vs {}x{}",
                    op.rows(),
                    op.cols(),
                    out_dim,
                    in_dim
                )));
            }
        }
        let mut sum = ComplexMatrix::zeros(in_dim, in_dim);
        for op in &ops {
            sum = &sum + &(&op.dagger() * op);
        }
        let defect = sum.max_diff(&ComplexMatrix::identity(in_dim));
        if defect > CPT_TOL {
            return Err(Error::Parameter(format!(
                "trace preservation violated: ‖ΣA†A − 1‖_max = {defect:.3e}"
            )));
        }
        Ok(KrausChannel {
            in_dim,
            out_dim,
            ops,
        })
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel::new(vec![ComplexMatrix::identity(dim)]).expect("identity channel is CPT")
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Φ(ρ) = Σ_k A_k ρ A_k†.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !rho.is_square() || rho.dim() != self.in_dim {
            return Err(Error::Shape(format!(
                "channel expects {0}x{0} input, got {1}x{2}",
                self.in_dim,
                rho.rows(),
                rho.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for op in &self.ops {
            out = &out + &op.conjugate(rho)?;
        }
        Ok(out)
    }

    /// Complementary channel via the canonical row rule: with Kraus operators
    /// A_0..A_{n−1}, the complement has out_dim operators R_μ of shape
    /// n × in_dim where row j of R_μ is row μ of A_j.
    pub fn complementary(&self) -> KrausChannel {
        let n = self.ops.len();
        let mut comp_ops = Vec::with_capacity(self.out_dim);
        for mu in 0..self.out_dim {
            let mut r = ComplexMatrix::zeros(n, self.in_dim);
            for (j, op) in self.ops.iter().enumerate() {
                for c in 0..self.in_dim {
                    r.set(j, c, op.get(mu, c));
                }
            }
            comp_ops.push(r);
        }
        KrausChannel::new(comp_ops).expect("complement of a CPT channel is CPT")
    }

    /// Choi matrix Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|).
    pub fn choi(&self) -> ChoiMatrix {
        let dim = self.in_dim * self.out_dim;
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for op in &self.ops {
            // Σ_ij |i⟩⟨j| ⊗ A E_ij A† = v v† with v = Σ_i |i⟩ ⊗ A|i⟩.
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            for i in 0..self.in_dim {
                for r in 0..self.out_dim {
                    v[i * self.out_dim + r] = op.get(r, i);
                }
            }
            for a in 0..dim {
                if v[a].norm() == 0.0 {
                    continue;
                }
                for b in 0..dim {
                    let prev = matrix.get(a, b);
                    matrix.set(a, b, prev + v[a] * v[b].conj());
                }
            }
        }
        ChoiMatrix {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            matrix,
        }
    }

    /// Composition self ∘ other (apply `other` first). Kraus operators are
    /// all pairwise products, never compressed.
    pub fn compose(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.in_dim != other.out_dim {
            return Err(Error::Shape(format!(
                "cannot compose: inner dims {} vs {}",
                self.in_dim, other.out_dim
            )));
        }
        let mut ops = Vec::with_capacity(self.ops.len() * other.ops.len());
        for g in &self.ops {
            for f in &other.ops {
                ops.push(g.matmul(f)?);
            }
        }
        KrausChannel::new(ops)
    }

    /// Tensor product channel with Kraus set {A_i ⊗ B_j}.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let mut ops = Vec::with_capacity(self.ops.len() * other.ops.len());
        for a in &self.ops {
            for b in &other.ops {
                ops.push(a.kron(b));
            }
        }
        KrausChannel::new(ops).expect("tensor product of CPT channels is CPT")
    }
}

/// Two channels are equal iff their Choi matrices are within 1e-9 max norm.
pub fn channels_equal(a: &KrausChannel, b: &KrausChannel) -> bool {
    a.in_dim == b.in_dim && a.out_dim == b.out_dim && a.choi().max_diff(&b.choi()) <= CHOI_EQ_TOL
}

/// Choi matrix of a channel; a representation-independent fingerprint.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    in_dim: usize,
    out_dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn max_diff(&self, other: &ChoiMatrix) -> f64 {
        self.matrix.max_diff(&other.matrix)
    }

    /// Positive semidefiniteness (eigenvalues ≥ −1e-9) and trace-preservation
    /// (partial trace over the output factor equals 𝟙) checks.
    pub fn check_invariants(&self) -> Result<()> {
        let eigs = hermitian_eigenvalues(&self.matrix)?;
        if let Some(min) = eigs.last() {
            if *min < -1e-9 {
                return Err(Error::Numerical(format!(
                    "Choi matrix has negative eigenvalue {min:.3e}"
                )));
            }
        }
        let reduced = self.matrix.partial_trace_right(self.in_dim, self.out_dim)?;
        let defect = reduced.max_diff(&ComplexMatrix::identity(self.in_dim));
        if defect > 1e-9 {
            return Err(Error::Numerical(format!(
                "partial trace of Choi deviates from identity by {defect:.3e}"
            )));
        }
        Ok(())
    }
}

/// Parameters (x, y, z) of the two-qubit amplitude damping channel Φ_{x,y,z}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParamsXYZ {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Guard band for strict inequalities on the degradable regime.
pub const REGIME_GUARD: f64 = 1e-12;

impl ChannelParamsXYZ {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        ChannelParamsXYZ { x, y, z }
    }

    /// Channel validity: x ∈ [0, 1], y, z ≥ 0 and 2y + z ≤ 1 (the closed
    /// region where the Kraus amplitudes are real).
    pub fn validate_channel(&self) -> Result<()> {
        if !(self.x >= 0.0 && self.y >= 0.0 && self.z >= 0.0) {
            return Err(Error::Parameter(format!(
                "x, y, z >= 0 required (got {}, {}, {})",
                self.x, self.y, self.z
            )));
        }
        if self.x > 1.0 + REGIME_GUARD {
            return Err(Error::Parameter(format!(
                "x <= 1 required (got {})",
                self.x
            )));
        }
        if 2.0 * self.y + self.z > 1.0 + REGIME_GUARD {
            return Err(Error::Parameter(format!(
                "2y + z <= 1 required (got {})",
                2.0 * self.y + self.z
            )));
        }
        Ok(())
    }

    /// Degradable regime: x < 1/2 and 2y + z < 1 strictly (guard band 1e-12).
    pub fn validate_degradable(&self) -> Result<()> {
        self.validate_channel()?;
        if self.x >= 0.5 - REGIME_GUARD {
            return Err(Error::Regime(format!("x < 1/2 required (got {})", self.x)));
        }
        if 2.0 * self.y + self.z >= 1.0 - REGIME_GUARD {
            return Err(Error::Regime(format!(
                "2y + z < 1 required (got {})",
                2.0 * self.y + self.z
            )));
        }
        Ok(())
    }

    pub fn s1(&self) -> f64 {
        (1.0 - self.x).max(0.0).sqrt()
    }

    pub fn s2(&self) -> f64 {
        (1.0 - 2.0 * self.y - self.z).max(0.0).sqrt()
    }

    /// Parameters of the complementary channel: (1 − x, y, 1 − 2y − z).
    pub fn complement(&self) -> ChannelParamsXYZ {
        ChannelParamsXYZ::new(1.0 - self.x, self.y, 1.0 - 2.0 * self.y - self.z)
    }
}

/// Constraint names reported when a 9-coefficient vector fails its
/// normalization conditions.
const PHI_A_CONSTRAINTS: [&str; 4] = [
    "a00 = 1",
    "a01^2 + a11^2 = 1",
    "a02^2 + a21^2 = 1",
    "a03^2 + a12^2 + a22^2 + a31^2 = 1",
];

/// Channel with Kraus operators
///   K0 = diag(a00, a01, a02, a03),
///   K1 = a11|0⟩⟨1| + a12|2⟩⟨3|,
///   K2 = a21|0⟩⟨2| + a22|1⟩⟨3|,
///   K3 = a31|0⟩⟨3|,
/// given the nine coefficients (a00, a01, a02, a03, a11, a12, a21, a22, a31).
pub fn make_phi_a(a: &[f64; 9]) -> Result<KrausChannel> {
    if a.iter().any(|&v| v < 0.0) {
        return Err(Error::Parameter(
            "all nine coefficients must be nonnegative".into(),
        ));
    }
    let [a00, a01, a02, a03, a11, a12, a21, a22, a31] = *a;
    let residuals = [
        a00 - 1.0,
        a01 * a01 + a11 * a11 - 1.0,
        a02 * a02 + a21 * a21 - 1.0,
        a03 * a03 + a12 * a12 + a22 * a22 + a31 * a31 - 1.0,
    ];
    for (r, name) in residuals.iter().zip(PHI_A_CONSTRAINTS) {
        if r.abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "normalization {name} violated by {r:.3e}"
            )));
        }
    }

    let c = |v: f64| Complex64::new(v, 0.0);
    let mut k0 = ComplexMatrix::zeros(4, 4);
    for (i, &v) in [a00, a01, a02, a03].iter().enumerate() {
        k0.set(i, i, c(v));
    }
    let mut k1 = ComplexMatrix::zeros(4, 4);
    k1.set(0, 1, c(a11));
    k1.set(2, 3, c(a12));
    let mut k2 = ComplexMatrix::zeros(4, 4);
    k2.set(0, 2, c(a21));
    k2.set(1, 3, c(a22));
    let mut k3 = ComplexMatrix::zeros(4, 4);
    k3.set(0, 3, c(a31));
    KrausChannel::new(vec![k0, k1, k2, k3])
}

/// Two-qubit amplitude damping channel Φ_{x,y,z} with
/// A0 = |0⟩⟨0| + s1(|1⟩⟨1| + |2⟩⟨2|) + s2|3⟩⟨3|,
/// A1 = √x|0⟩⟨1| + √y|2⟩⟨3|, A2 = √x|0⟩⟨2| + √y|1⟩⟨3|, A3 = √z|0⟩⟨3|,
/// where s1 = √(1−x) and s2 = √(1−2y−z).
pub fn make_phi_xyz(p: &ChannelParamsXYZ) -> Result<KrausChannel> {
    p.validate_channel()?;
    let a = [
        1.0,
        p.s1(),
        p.s1(),
        p.s2(),
        p.x.sqrt(),
        p.y.sqrt(),
        p.x.sqrt(),
        p.y.sqrt(),
        p.z.sqrt(),
    ];
    make_phi_a(&a)
}

/// Degrading-map parameters (g, h, k) for Φ_{x,y,z}:
/// g = (1−2x)/(1−x), h = g·y/(1−2y−z), k = 1 − 2h − z/(1−2y−z).
pub fn degrading_params(p: &ChannelParamsXYZ) -> Result<(f64, f64, f64)> {
    p.validate_degradable()?;
    let g = (1.0 - 2.0 * p.x) / (1.0 - p.x);
    let s2sq = 1.0 - 2.0 * p.y - p.z;
    let h = g * p.y / s2sq;
    let k = 1.0 - 2.0 * h - p.z / s2sq;
    Ok((g, h, k))
}

/// The degrading map 𝒢 = Φ_{g,h,k} satisfying 𝒢 ∘ Φ_{x,y,z} = Φ_{x,y,z}^C.
///
/// The derived (g, h, k) are re-validated: k can go negative inside the
/// nominal regime (e.g. x = 0, y = 0, z = 0.9 gives k = −8), in which case
/// this construction does not produce a valid channel and a consistency
/// error is raised.
pub fn make_degrading_map(p: &ChannelParamsXYZ) -> Result<KrausChannel> {
    let (g, h, k) = degrading_params(p)?;
    if g < -1e-12 || h < -1e-12 || k < -1e-12 || 2.0 * h + k > 1.0 + 1e-12 {
        return Err(Error::Consistency(format!(
            "derived degrading parameters invalid: g = {g:.6}, h = {h:.6}, k = {k:.6}"
        )));
    }
    let gp = ChannelParamsXYZ::new(g.max(0.0), h.max(0.0), k.max(0.0));
    make_phi_xyz(&gp)
}

/// Qubit amplitude damping channel with Kraus operators
/// |0⟩⟨0| + √(1−γ)|1⟩⟨1| and √γ|0⟩⟨1|.
pub fn make_qubit_amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Parameter(format!(
            "damping parameter must lie in [0, 1], got {gamma}"
        )));
    }
    let c = |v: f64| Complex64::new(v, 0.0);
    let mut a0 = ComplexMatrix::zeros(2, 2);
    a0.set(0, 0, c(1.0));
    a0.set(1, 1, c((1.0 - gamma).sqrt()));
    let mut a1 = ComplexMatrix::zeros(2, 2);
    a1.set(0, 1, c(gamma.sqrt()));
    KrausChannel::new(vec![a0, a1])
}

/// Pauli channel with Kraus operators √q_P · matrix(P) for each nonzero
/// probability. Probabilities must be nonnegative and sum to 1 within 1e-12.
pub fn make_pauli_channel(m: usize, probs: &BTreeMap<PauliString, f64>) -> Result<KrausChannel> {
    let mut total = 0.0;
    for (p, &q) in probs {
        if p.qubits() != m {
            return Err(Error::Shape(format!(
                "Pauli string {p} is not on {m} qubits"
            )));
        }
        if q < -1e-12 {
            return Err(Error::Parameter(format!(
                "negative probability {q:.3e} on {p}"
            )));
        }
        total += q;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    let mut ops = Vec::new();
    for (p, &q) in probs {
        if q > 1e-14 {
            ops.push(pauli_matrix(p)?.scale_real(q.sqrt()));
        }
    }
    KrausChannel::new(ops)
}

/// The four-dimensional depolarizing channel D_{p,4} as a Pauli channel:
/// identity with probability 1 − p, each of the 15 non-identity two-qubit
/// Pauli strings with probability p/15. Equivalently the affine map
/// ρ ↦ (1 − 16p/15)ρ + (16p/15)·𝟙/4, which is degradable and antidegradable
/// at the no-cloning point p = 3/8.
pub fn depolarizing_probs(p: f64) -> Result<BTreeMap<PauliString, f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!(
            "depolarizing strength must lie in [0, 1], got {p}"
        )));
    }
    let mut probs = BTreeMap::new();
    for s in PauliString::all(2)? {
        let q = if s.is_identity() { 1.0 - p } else { p / 15.0 };
        probs.insert(s, q);
    }
    Ok(probs)
}

pub fn make_depolarizing_4(p: f64) -> Result<KrausChannel> {
    make_pauli_channel(2, &depolarizing_probs(p)?)
}

/// All 2^m diagonal sign operators {𝟙, Z}^⊗m.
pub fn diagonal_pauli_group(m: usize) -> Result<Vec<ComplexMatrix>> {
    let mut out = Vec::with_capacity(1 << m);
    for z_mask in 0..(1u32 << m) {
        let p = PauliString::new(m, 0, z_mask)?;
        out.push(pauli_matrix(&p)?);
    }
    Ok(out)
}

/// Checks covariance Φ(ΛρΛ) = ΛΦ(ρ)Λ for all Λ ∈ {𝟙, Z}^⊗m against seeded
/// random density matrices. Returns false on the first violation above 1e-9.
pub fn check_covariance(ch: &KrausChannel, trials: usize, seed: u64) -> Result<bool> {
    if ch.in_dim() != ch.out_dim() || !ch.in_dim().is_power_of_two() {
        return Err(Error::Shape(format!(
            "covariance check expects a square channel on 2^m dimensions, got {}x{}",
            ch.in_dim(),
            ch.out_dim()
        )));
    }
    let m = ch.in_dim().trailing_zeros() as usize;
    let lambdas = diagonal_pauli_group(m)?;
    let mut rng = crate::sampling::seeded_rng(seed);
    for _ in 0..trials {
        let rho = crate::sampling::random_density_matrix(&mut rng, ch.in_dim());
        let phi_rho = ch.apply(&rho)?;
        for lambda in &lambdas {
            let conj_in = lambda.conjugate(&rho)?;
            let lhs = ch.apply(&conj_in)?;
            let rhs = lambda.conjugate(&phi_rho)?;
            if lhs.max_diff(&rhs) > 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// JSON channel description consumed by the command-line tools.
///
/// Examples:
/// `{"type":"phi_xyz","params":{"x":0.2,"y":0.05,"z":0.1}}`,
/// `{"type":"pauli","params":{"probs":{"II":0.9,"ZX":0.1}}}`,
/// `{"type":"depolarizing","params":{"p":0.2}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "snake_case")]
pub enum ChannelDescription {
    PhiXyz { x: f64, y: f64, z: f64 },
    Pauli { probs: BTreeMap<String, f64> },
    Depolarizing { p: f64 },
}

impl ChannelDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parameter(format!("invalid channel description: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel description serializes")
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        match self {
            ChannelDescription::PhiXyz { x, y, z } => {
                make_phi_xyz(&ChannelParamsXYZ::new(*x, *y, *z))
            }
            ChannelDescription::Pauli { probs } => {
                let mut parsed = BTreeMap::new();
                let mut qubits = None;
                for (label, &q) in probs {
                    let p = PauliString::from_label(label)?;
                    if let Some(m) = qubits {
                        if p.qubits() != m {
                            return Err(Error::Shape(
                                "Pauli labels disagree on qubit count".into(),
                            ));
                        }
                    } else {
                        qubits = Some(p.qubits());
                    }
                    parsed.insert(p, q);
                }
                let m =
                    qubits.ok_or_else(|| Error::Parameter("empty Pauli probability map".into()))?;
                make_pauli_channel(m, &parsed)
            }
            ChannelDescription::Depolarizing { p } => make_depolarizing_4(*p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    fn xyz(x: f64, y: f64, z: f64) -> ChannelParamsXYZ {
        ChannelParamsXYZ::new(x, y, z)
    }

    #[test]
    fn identity_channel_applies_as_identity() {
        let ch = KrausChannel::identity(4);
        let mut rng = sampling::seeded_rng(3);
        let rho = sampling::random_density_matrix(&mut rng, 4);
        assert!(ch.apply(&rho).unwrap().max_diff(&rho) < 1e-15);
    }

    #[test]
    fn phi_xyz_on_diagonal_matches_closed_form() {
        let p = xyz(0.2, 0.1, 0.1);
        let ch = make_phi_xyz(&p).unwrap();
        let probs = [0.4, 0.3, 0.2, 0.1];
        let rho = ComplexMatrix::from_real_diagonal(&probs);
        let out = ch.apply(&rho).unwrap();
        let (x, y, z) = (p.x, p.y, p.z);
        let expected = ComplexMatrix::from_real_diagonal(&[
            probs[0] + probs[1] * x + probs[2] * x + probs[3] * z,
            probs[1] * (1.0 - x) + probs[3] * y,
            probs[2] * (1.0 - x) + probs[3] * y,
            probs[3] * (1.0 - 2.0 * y - z),
        ]);
        assert!(out.max_diff(&expected) < 1e-12);
        assert!((out.trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn full_decay_sends_excited_to_ground() {
        let ch = make_qubit_amplitude_damping(1.0).unwrap();
        let out = ch.apply(&ComplexMatrix::basis_outer(2, 1, 1)).unwrap();
        assert!(out.max_diff(&ComplexMatrix::basis_outer(2, 0, 0)) < 1e-15);
    }

    #[test]
    fn apply_rejects_wrong_shape() {
        let ch = make_qubit_amplitude_damping(0.3).unwrap();
        let rho = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(matches!(ch.apply(&rho), Err(Error::Shape(_))));
    }

    #[test]
    fn complement_of_phi_xyz_has_swapped_parameters() {
        let mut rng = sampling::seeded_rng(11);
        for _ in 0..25 {
            let p = sampling::random_valid_xyz(&mut rng);
            let direct = make_phi_xyz(&p).unwrap().complementary();
            let expected = make_phi_xyz(&p.complement()).unwrap();
            assert!(
                direct.choi().max_diff(&expected.choi()) <= CHOI_EQ_TOL,
                "complement parameters failed at {p:?}"
            );
        }
    }

    #[test]
    fn complement_of_phi_a_follows_the_row_rule_pattern() {
        // a01 = 0.6, a11 = 0.8; the complement swaps them.
        let a = [1.0, 0.6, 1.0, 1.0, 0.8, 0.0, 0.0, 0.0, 0.0];
        let comp = make_phi_a(&a).unwrap().complementary();
        let a_comp = [1.0, 0.8, 0.0, 0.0, 0.6, 0.0, 1.0, 0.0, 1.0];
        let expected = make_phi_a(&a_comp).unwrap();
        for (got, want) in comp.kraus_ops().iter().zip(expected.kraus_ops()) {
            assert!(got.max_diff(want) < 1e-14);
        }
    }

    #[test]
    fn double_complement_is_identity_on_the_family() {
        let mut rng = sampling::seeded_rng(17);
        for _ in 0..25 {
            let a = sampling::random_phi_a_coeffs(&mut rng);
            let ch = make_phi_a(&a).unwrap();
            let twice = ch.complementary().complementary();
            assert!(ch.choi().max_diff(&twice.choi()) <= CHOI_EQ_TOL);
        }
    }

    #[test]
    fn choi_of_identity_is_unnormalized_bell_projector() {
        let choi = KrausChannel::identity(2).choi();
        let mut expected = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                expected.set(i * 2 + i, j * 2 + j, Complex64::new(1.0, 0.0));
            }
        }
        assert!(choi.matrix().max_diff(&expected) < 1e-15);
        choi.check_invariants().unwrap();
    }

    #[test]
    fn choi_of_completely_dephasing_is_diagonal_projector_sum() {
        let inv = 1.0 / 2.0f64.sqrt();
        let ops = vec![
            ComplexMatrix::identity(2).scale_real(inv),
            pauli_matrix(&PauliString::from_label("Z").unwrap())
                .unwrap()
                .scale_real(inv),
        ];
        let choi = KrausChannel::new(ops).unwrap().choi();
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected.set(0, 0, Complex64::new(1.0, 0.0));
        expected.set(3, 3, Complex64::new(1.0, 0.0));
        assert!(choi.matrix().max_diff(&expected) < 1e-15);
    }

    #[test]
    fn tensor_square_of_qubit_damping_matches_phi_xyz() {
        for gamma in [0.0, 0.1, 0.2, 0.3, 0.4, 0.5] {
            let single = make_qubit_amplitude_damping(gamma).unwrap();
            let square = single.tensor(&single);
            let family = make_phi_xyz(&xyz(gamma, gamma * (1.0 - gamma), gamma * gamma)).unwrap();
            assert!(
                square.choi().max_diff(&family.choi()) <= CHOI_EQ_TOL,
                "factorization failed at gamma = {gamma}"
            );
        }
    }

    #[test]
    fn phi_a_identity_coefficients_give_identity_channel() {
        let ch = make_phi_a(&[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(channels_equal(&ch, &KrausChannel::identity(4)));
        let ch = make_phi_xyz(&xyz(0.0, 0.0, 0.0)).unwrap();
        assert!(channels_equal(&ch, &KrausChannel::identity(4)));
    }

    #[test]
    fn phi_a_normalization_errors_name_the_constraint() {
        let err = make_phi_a(&[1.0, 0.9, 1.0, 1.0, 0.9, 0.0, 0.0, 0.0, 0.0]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("a01^2 + a11^2 = 1"), "got: {msg}");
    }

    #[test]
    fn phi_xyz_kraus_operators_factor_as_diagonal_times_pauli() {
        let ch = make_phi_xyz(&xyz(0.2, 0.1, 0.15)).unwrap();
        for op in ch.kraus_ops() {
            let (v, p) = crate::pauli::factor_diagonal_times_pauli(op)
                .expect("every Kraus operator factors");
            let back = &v * &pauli_matrix(&p).unwrap();
            assert!(back.max_diff(op) < 1e-14);
        }
    }

    #[test]
    fn degrading_params_at_origin_hit_the_boundary() {
        let (g, h, k) = degrading_params(&xyz(0.0, 0.0, 0.0)).unwrap();
        assert!((g - 1.0).abs() < 1e-15);
        assert!(h.abs() < 1e-15);
        assert!((k - 1.0).abs() < 1e-15);
        // 2h + k = 1: the degrading map sits on the channel-validity boundary
        // and must still be constructible.
        make_degrading_map(&xyz(0.0, 0.0, 0.0)).unwrap();
    }

    #[test]
    fn degrading_params_numeric_example() {
        let (g, h, k) = degrading_params(&xyz(0.1, 0.05, 0.05)).unwrap();
        let g_expect = 0.8 / 0.9;
        let h_expect = g_expect * 0.05 / 0.85;
        let k_expect = 1.0 - 2.0 * h_expect - 0.05 / 0.85;
        assert!((g - g_expect).abs() < 1e-15);
        assert!((h - h_expect).abs() < 1e-15);
        assert!((k - k_expect).abs() < 1e-15);
    }

    #[test]
    fn degrading_map_degrades_onto_the_complement() {
        let mut rng = sampling::seeded_rng(23);
        for _ in 0..25 {
            let p = sampling::random_degradable_xyz(&mut rng);
            let phi = make_phi_xyz(&p).unwrap();
            let degrader = make_degrading_map(&p).unwrap();
            let composed = degrader.compose(&phi).unwrap();
            assert!(
                composed.choi().max_diff(&phi.complementary().choi()) <= CHOI_EQ_TOL,
                "degrading identity failed at {p:?}"
            );
        }
    }

    #[test]
    fn degrading_map_rejects_wrong_regimes() {
        assert!(matches!(
            make_degrading_map(&xyz(0.6, 0.0, 0.0)),
            Err(Error::Regime(_))
        ));
        // Valid channel parameters whose derived k is negative.
        assert!(matches!(
            make_degrading_map(&xyz(0.0, 0.0, 0.9)),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn output_pauli_rotation_leaves_the_complement_choi_unchanged() {
        let mut rng = sampling::seeded_rng(29);
        for _ in 0..20 {
            let p = sampling::random_valid_xyz(&mut rng);
            let phi = make_phi_xyz(&p).unwrap();
            let v = sampling::random_pauli_unitary(&mut rng, 2);
            let rotated = KrausChannel::new(
                phi.kraus_ops()
                    .iter()
                    .map(|a| v.matmul(a).unwrap())
                    .collect(),
            )
            .unwrap();
            assert!(
                rotated
                    .complementary()
                    .choi()
                    .max_diff(&phi.complementary().choi())
                    <= CHOI_EQ_TOL
            );
        }
    }

    #[test]
    fn pauli_channel_constructors() {
        let mut probs = BTreeMap::new();
        probs.insert(PauliString::identity(2), 1.0);
        let ch = make_pauli_channel(2, &probs).unwrap();
        assert!(channels_equal(&ch, &KrausChannel::identity(4)));

        // Uniform over all 16 strings: completely depolarizing.
        let uniform: BTreeMap<_, _> = PauliString::all(2)
            .unwrap()
            .into_iter()
            .map(|p| (p, 1.0 / 16.0))
            .collect();
        let depol = make_pauli_channel(2, &uniform).unwrap();
        let mut rng = sampling::seeded_rng(31);
        for _ in 0..5 {
            let rho = sampling::random_density_matrix(&mut rng, 4);
            let out = depol.apply(&rho).unwrap();
            assert!(out.max_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-12);
        }

        let bad: BTreeMap<_, _> = vec![(PauliString::identity(2), 0.9)].into_iter().collect();
        assert!(make_pauli_channel(2, &bad).is_err());
    }

    #[test]
    fn depolarizing_matches_its_affine_definition_at_the_choi_level() {
        for p in [0.0, 0.15, 0.375, 0.8] {
            let ch = make_depolarizing_4(p).unwrap();
            // Choi of ρ ↦ (1−C)ρ + C·𝟙/4 with C = 16p/15, built directly.
            let c_mix = 16.0 * p / 15.0;
            let dim = 16;
            let mut expected = ComplexMatrix::zeros(dim, dim);
            for i in 0..4 {
                for j in 0..4 {
                    // block (i, j) holds (1−C)·E_ij + δ_ij·C·𝟙/4
                    let v = expected.get(i * 4 + i, j * 4 + j);
                    expected.set(i * 4 + i, j * 4 + j, v + Complex64::new(1.0 - c_mix, 0.0));
                    if i == j {
                        for r in 0..4 {
                            let v = expected.get(i * 4 + r, j * 4 + r);
                            expected.set(
                                i * 4 + r,
                                j * 4 + r,
                                v + Complex64::new(c_mix / 4.0, 0.0),
                            );
                        }
                    }
                }
            }
            assert!(
                ch.choi().matrix().max_diff(&expected) < 1e-12,
                "affine equivalence failed at p = {p}"
            );
        }
    }

    #[test]
    fn covariance_holds_for_the_family_and_fails_for_a_rotated_channel() {
        let p = xyz(0.2, 0.1, 0.1);
        let phi = make_phi_xyz(&p).unwrap();
        assert!(check_covariance(&phi, 5, 101).unwrap());
        assert!(check_covariance(&phi.complementary(), 5, 102).unwrap());

        // Compose with a Hadamard-like output rotation on the first qubit.
        let inv = 1.0 / 2.0f64.sqrt();
        let h = &(&pauli_matrix(&PauliString::from_label("X").unwrap()).unwrap()
            + &pauli_matrix(&PauliString::from_label("Z").unwrap()).unwrap())
            .scale_real(inv);
        let u = h.kron(&ComplexMatrix::identity(2));
        let rotated = KrausChannel::new(
            phi.kraus_ops()
                .iter()
                .map(|a| u.matmul(a).unwrap())
                .collect(),
        )
        .unwrap();
        assert!(!check_covariance(&rotated, 5, 103).unwrap());
    }

    #[test]
    fn channel_description_round_trip_and_construction() {
        let desc = ChannelDescription::PhiXyz {
            x: 0.2,
            y: 0.05,
            z: 0.1,
        };
        let text = desc.to_json();
        let parsed = ChannelDescription::from_json(&text).unwrap();
        let ch = parsed.to_channel().unwrap();
        assert!(channels_equal(
            &ch,
            &make_phi_xyz(&xyz(0.2, 0.05, 0.1)).unwrap()
        ));

        let pauli_json = r#"{"type":"pauli","params":{"probs":{"II":0.9,"ZX":0.1}}}"#;
        let ch = ChannelDescription::from_json(pauli_json)
            .unwrap()
            .to_channel()
            .unwrap();
        assert_eq!(ch.kraus_ops().len(), 2);

        let depol_json = r#"{"type":"depolarizing","params":{"p":0.2}}"#;
        let ch = ChannelDescription::from_json(depol_json)
            .unwrap()
            .to_channel()
            .unwrap();
        assert!(channels_equal(&ch, &make_depolarizing_4(0.2).unwrap()));

        assert!(ChannelDescription::from_json("{\"type\":\"nope\"}").is_err());
    }

    #[test]
    fn choi_invariants_hold_for_seeded_channels() {
        let mut rng = sampling::seeded_rng(37);
        for _ in 0..10 {
            let ch = sampling::random_channel(&mut rng, 4, 4);
            ch.choi().check_invariants().unwrap();
        }
    }
}
