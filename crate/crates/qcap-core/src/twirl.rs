//! Pauli twirling and localized Clifford twirling.
//!
//! Both twirls come in two independent routes: a coefficient formula on the
//! Kraus operators and a brute-force conjugation average materialized as an
//! enlarged Kraus list. The two routes are compared at the Choi level
//! throughout the test and verification suites. Twirled coefficients are
//! always computed from the constructed Kraus operators, never from a
//! hand-expanded table.

use crate::channel::{make_pauli_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pauli::{pauli_matrix, PauliString};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// A probability distribution over the 4^m Pauli strings. Entries below
/// 1e-14 are stored as exact zeros (dropped from the map).
#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannel {
    m: usize,
    probs: BTreeMap<PauliString, f64>,
}

impl PauliChannel {
    pub fn new(m: usize, probs: BTreeMap<PauliString, f64>) -> Result<Self> {
        let mut clean = BTreeMap::new();
        let mut total = 0.0;
        for (p, &q) in &probs {
            if p.qubits() != m {
                return Err(Error::Shape(format!("string {p} is not on {m} qubits")));
            }
            if q < -1e-12 {
                return Err(Error::Parameter(format!(
                    "negative probability {q:.3e} on {p}"
                )));
            }
            let q = q.max(0.0);
            total += q;
            if q > 1e-14 {
                clean.insert(*p, q);
            }
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Parameter(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(PauliChannel { m, probs: clean })
    }

    pub fn qubits(&self) -> usize {
        self.m
    }

    pub fn probs(&self) -> &BTreeMap<PauliString, f64> {
        &self.probs
    }

    pub fn prob(&self, p: &PauliString) -> f64 {
        self.probs.get(p).copied().unwrap_or(0.0)
    }

    /// Total probability per Pauli weight class: masses[w] = Σ_{wt(P)=w} q_P.
    pub fn weight_class_masses(&self) -> Vec<f64> {
        let mut masses = vec![0.0; self.m + 1];
        for (p, &q) in &self.probs {
            masses[p.weight() as usize] += q;
        }
        masses
    }

    pub fn to_kraus_channel(&self) -> Result<KrausChannel> {
        make_pauli_channel(self.m, &self.probs)
    }
}

/// Pauli twirl coefficients q_P = Σ_A |tr(P·A)/2^m|² over the Kraus set.
pub fn pauli_twirl(ch: &KrausChannel) -> Result<PauliChannel> {
    let m = square_qubit_count(ch)?;
    let dim = 1usize << m;
    let mut probs = BTreeMap::new();
    for p in PauliString::all(m)? {
        let mut q = 0.0;
        for a in ch.kraus_ops() {
            // tr(P·A) = Σ_c phase_P(c) · A[c][c ⊕ x], one term per row.
            let mut tr = Complex64::new(0.0, 0.0);
            for c in 0..dim as u32 {
                tr += p.column_phase(c) * a.get(c as usize, (c ^ p.x_mask()) as usize);
            }
            q += (tr / dim as f64).norm_sqr();
        }
        probs.insert(p, q);
    }
    PauliChannel::new(m, probs)
}

/// The 4^m-term conjugation average (1/4^m) Σ_P P Φ(PρP) P, materialized as a
/// channel with 4^m·|Kraus| operators P·A·P/2^m. Capped at m ≤ 3.
pub fn pauli_twirl_bruteforce(ch: &KrausChannel) -> Result<KrausChannel> {
    let m = square_qubit_count(ch)?;
    if m > 3 {
        return Err(Error::Size(format!(
            "brute-force twirl capped at 3 qubits, got {m}"
        )));
    }
    let scale = 1.0 / (1usize << m) as f64;
    let mut ops = Vec::with_capacity((1 << (2 * m)) * ch.kraus_ops().len());
    for p in PauliString::all(m)? {
        let pm = pauli_matrix(&p)?;
        for a in ch.kraus_ops() {
            ops.push((&(&pm * a) * &pm).scale_real(scale));
        }
    }
    KrausChannel::new(ops)
}

fn square_qubit_count(ch: &KrausChannel) -> Result<usize> {
    if ch.in_dim() != ch.out_dim() || !ch.in_dim().is_power_of_two() {
        return Err(Error::Shape(format!(
            "twirl expects a square channel on 2^m dimensions, got {}x{}",
            ch.in_dim(),
            ch.out_dim()
        )));
    }
    Ok(ch.in_dim().trailing_zeros() as usize)
}

/// The six single-qubit operators {𝟙, (X+Y)/√2, (X+Z)/√2, (Y+Z)/√2,
/// H_XZ·H_XY, H_XY·H_XZ}. Conjugation by them realizes, up to signs, all six
/// permutations of {X, Y, Z}.
pub fn clifford_b_set() -> Vec<ComplexMatrix> {
    let pm = |l: &str| pauli_matrix(&PauliString::from_label(l).unwrap()).unwrap();
    let h = |a: &ComplexMatrix, b: &ComplexMatrix| (a + b).scale_real(1.0 / 2.0f64.sqrt());
    let h_xy = h(&pm("X"), &pm("Y"));
    let h_xz = h(&pm("X"), &pm("Z"));
    let h_yz = h(&pm("Y"), &pm("Z"));
    let prod_a = &h_xz * &h_xy;
    let prod_b = &h_xy * &h_xz;
    vec![ComplexMatrix::identity(2), h_xy, h_xz, h_yz, prod_a, prod_b]
}

/// Localized Clifford twirl of a two-qubit Pauli channel, by the coefficient
/// rule: the identity mass is untouched, single-qubit masses are averaged
/// over {X, Y, Z} on that qubit (÷3), and weight-two masses over both (÷9).
pub fn local_clifford_twirl(n: &PauliChannel) -> Result<PauliChannel> {
    if n.qubits() != 2 {
        return Err(Error::Shape(format!(
            "localized twirl expects 2 qubits, got {}",
            n.qubits()
        )));
    }
    let letters = ["I", "X", "Y", "Z"];
    let q = |a: usize, b: usize| -> f64 {
        n.prob(&PauliString::from_label(&format!("{}{}", letters[a], letters[b])).unwrap())
    };
    let mut first = 0.0; // Σ over {X,Y,Z}⊗𝟙
    let mut second = 0.0; // Σ over 𝟙⊗{X,Y,Z}
    let mut both = 0.0; // Σ over {X,Y,Z}⊗{X,Y,Z}
    for a in 1..4 {
        first += q(a, 0);
        second += q(0, a);
        for b in 1..4 {
            both += q(a, b);
        }
    }
    let mut probs = BTreeMap::new();
    probs.insert(PauliString::identity(2), q(0, 0));
    for a in 1..4 {
        probs.insert(
            PauliString::from_label(&format!("{}I", letters[a]))?,
            first / 3.0,
        );
        probs.insert(
            PauliString::from_label(&format!("I{}", letters[a]))?,
            second / 3.0,
        );
        for b in 1..4 {
            probs.insert(
                PauliString::from_label(&format!("{}{}", letters[a], letters[b]))?,
                both / 9.0,
            );
        }
    }
    PauliChannel::new(2, probs)
}

/// Brute-force localized Clifford twirl of a two-qubit channel: the 6-element
/// average on the first qubit followed by the 6-element average on the
/// second, materialized as 36·|Kraus| operators.
pub fn local_clifford_twirl_bruteforce(n: &KrausChannel) -> Result<KrausChannel> {
    if n.in_dim() != 4 || n.out_dim() != 4 {
        return Err(Error::Shape(format!(
            "localized twirl expects a 4x4 channel, got {}x{}",
            n.in_dim(),
            n.out_dim()
        )));
    }
    let id = ComplexMatrix::identity(2);
    let first: Vec<ComplexMatrix> = clifford_b_set().iter().map(|b| b.kron(&id)).collect();
    let second: Vec<ComplexMatrix> = clifford_b_set().iter().map(|b| id.kron(b)).collect();
    let after_first = conjugation_average(n, &first)?;
    conjugation_average(&after_first, &second)
}

/// (1/|U|) Σ_U U† Φ(U ρ U†) U as a channel with |U|·|Kraus| operators
/// U†·A·U/√|U|.
fn conjugation_average(ch: &KrausChannel, unitaries: &[ComplexMatrix]) -> Result<KrausChannel> {
    let scale = 1.0 / (unitaries.len() as f64).sqrt();
    let mut ops = Vec::with_capacity(unitaries.len() * ch.kraus_ops().len());
    for u in unitaries {
        let ud = u.dagger();
        for a in ch.kraus_ops() {
            ops.push((&(&ud * a) * u).scale_real(scale));
        }
    }
    KrausChannel::new(ops)
}

/// Weight-class masses (P_0, P_1, P_2) of the Pauli twirl of Φ_{x,y,z} in
/// closed form:
///   P_0 = ((1+2s1+s2)/4)²,
///   P_1 = 2((1−s2)/4)² + ((√x+√y)/2)²,
///   P_2 = ((1−2s1+s2)/4)² + ((√x−√y)/2)² + z/4,
/// with s1 = √(1−x), s2 = √(1−2y−z).
pub fn phi_xyz_twirl_weight_masses(p: &crate::channel::ChannelParamsXYZ) -> Result<[f64; 3]> {
    p.validate_channel()?;
    let (s1, s2) = (p.s1(), p.s2());
    let sx = p.x.sqrt();
    let sy = p.y.sqrt();
    let p0 = ((1.0 + 2.0 * s1 + s2) / 4.0).powi(2);
    let p1 = 2.0 * ((1.0 - s2) / 4.0).powi(2) + ((sx + sy) / 2.0).powi(2);
    let p2 = ((1.0 - 2.0 * s1 + s2) / 4.0).powi(2) + ((sx - sy) / 2.0).powi(2) + p.z / 4.0;
    Ok([p0, p1, p2])
}
