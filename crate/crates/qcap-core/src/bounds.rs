//! Closed-form capacity upper bounds and sampled bound curves.
//!
//! The four-dimensional depolarizing bound combines two ingredients: the
//! twirl bound f(x(p)) evaluated on the slice (x, 0, x), and the chord
//! obtained by interpolating between the identity channel (capacity 2 at
//! p = 0) and the no-cloning point (capacity 0 at p = 3/8). The published
//! curve is the lower convex envelope of their pointwise minimum.

use crate::capacity::{capacity_diagonal_program, eta, OptimizerConfig};
use crate::channel::{ChannelParamsXYZ, REGIME_GUARD};
use crate::error::{Error, Result};
use crate::twirl::{pauli_twirl, PauliChannel};
use rayon::prelude::*;

/// Upper bound on the quantum capacity of the Pauli twirl of Φ_{x,y,z}:
/// η((1+2x+z)/4) + 2η((1−x+y)/4) + η((1−2y−z)/4)
/// − η(1−(2x+2y+z)/4) − 2η((x+y)/4) − η(z/4),
/// the coherent information of Φ_{x,y,z} at the maximally mixed input.
pub fn main_theorem_bound(p: &ChannelParamsXYZ) -> Result<f64> {
    p.validate_degradable()?;
    let (x, y, z) = (p.x, p.y, p.z);
    Ok(eta((1.0 + 2.0 * x + z) / 4.0)?
        + 2.0 * eta((1.0 - x + y) / 4.0)?
        + eta((1.0 - 2.0 * y - z) / 4.0)?
        - eta(1.0 - (2.0 * x + 2.0 * y + z) / 4.0)?
        - 2.0 * eta((x + y) / 4.0)?
        - eta(z / 4.0)?)
}

/// Noise strength at which D_{p,d} is simultaneously degradable and
/// antidegradable, forcing zero capacity: p = (d−1)/(2d).
pub fn no_cloning_p(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    Ok((d as f64 - 1.0) / (2.0 * d as f64))
}

/// The damping parameter x(p) = (8/9)(√(1−p) − 1 + 2p) for which the Pauli
/// twirl of Φ_{x,0,x} has identity mass exactly 1 − p, so its full Clifford
/// twirl is D_{p,4}. Monotone increasing on [0, 3/8].
pub fn dep4_x_of_p(p: f64) -> Result<f64> {
    if !(-REGIME_GUARD..=0.375 + REGIME_GUARD).contains(&p) {
        return Err(Error::Domain(format!(
            "depolarizing strength must lie in [0, 3/8], got {p}"
        )));
    }
    let p = p.clamp(0.0, 0.375);
    Ok(8.0 / 9.0 * ((1.0 - p).sqrt() - 1.0 + 2.0 * p))
}

/// Twirl bound specialized to the slice (x, 0, x):
/// f(x) = η((1+3x)/4) + 3η((1−x)/4) − η(1−3x/4) − 3η(x/4).
fn dep4_f(p: f64) -> Result<f64> {
    let x = dep4_x_of_p(p)?;
    main_theorem_bound(&ChannelParamsXYZ::new(x, 0.0, x))
}

/// Chord through the achievable endpoints (0, 2) and (3/8, 0): 2 − 16p/3.
fn dep4_chord(p: f64) -> f64 {
    2.0 - 16.0 * p / 3.0
}

/// A sampled bound curve with CSV serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    param_name: String,
    value_name: String,
    samples: Vec<(f64, f64)>,
}

impl BoundCurve {
    pub fn new(param_name: &str, value_name: &str, samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Parameter("a curve needs at least 2 samples".into()));
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Parameter(
                    "curve parameter must be strictly increasing".into(),
                ));
            }
        }
        if samples
            .iter()
            .any(|&(_, v)| !(-1e-12..=2.0 + 1e-12).contains(&v))
        {
            return Err(Error::Numerical(
                "curve value escaped the [0, 2] window".into(),
            ));
        }
        Ok(BoundCurve {
            param_name: param_name.to_string(),
            value_name: value_name.to_string(),
            samples,
        })
    }

    pub fn param_name(&self) -> &str {
        &self.param_name
    }

    pub fn value_name(&self) -> &str {
        &self.value_name
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// CSV rendering: header `<param>,<value>`, one sample per line, 12
    /// significant digits, LF newlines, no trailing separator.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.param_name);
        out.push(',');
        out.push_str(&self.value_name);
        out.push('\n');
        for &(p, v) in &self.samples {
            out.push_str(&format_significant(p, 12));
            out.push(',');
            out.push_str(&format_significant(v, 12));
            out.push('\n');
        }
        out
    }

    /// JSON rendering with the same 12-significant-digit number format.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\"param\":\"");
        out.push_str(&self.param_name);
        out.push_str("\",\"value\":\"");
        out.push_str(&self.value_name);
        out.push_str("\",\"samples\":[");
        for (i, &(p, v)) in self.samples.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            out.push_str(&format_significant(p, 12));
            out.push(',');
            out.push_str(&format_significant(v, 12));
            out.push(']');
        }
        out.push_str("]}");
        out
    }
}

/// Formats with the given number of significant digits, trimming trailing
/// zeros (the `%.12g` convention).
pub fn format_significant(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v == 0.0 {
        return "0".to_string();
    }
    if v < 0.0 {
        return format!("-{}", format_significant(-v, digits));
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("exponent parses");
    let digits_only: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    if exp >= -4 && (exp as i64) < digits as i64 {
        if exp >= 0 {
            let split = (exp + 1) as usize;
            let int_part = &digits_only[..split];
            let frac = digits_only[split..].trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            let frac = format!("{zeros}{digits_only}");
            let frac = frac.trim_end_matches('0');
            format!("0.{frac}")
        }
    } else {
        let int_part = &digits_only[..1];
        let frac = digits_only[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{int_part}e{exp}")
        } else {
            format!("{int_part}.{frac}e{exp}")
        }
    }
}

/// Lower convex envelope of a point set via Andrew's monotone chain,
/// dropping collinear interior points (cross-product tolerance 1e-12).
fn lower_hull(mut points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite curve points"));
    points.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for pt in points {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross <= 1e-12 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// Evaluates a piecewise-linear chain at a parameter value.
fn interpolate(chain: &[(f64, f64)], p: f64) -> f64 {
    if p <= chain[0].0 {
        return chain[0].1;
    }
    if p >= chain[chain.len() - 1].0 {
        return chain[chain.len() - 1].1;
    }
    for w in chain.windows(2) {
        let ((p0, v0), (p1, v1)) = (w[0], w[1]);
        if p <= p1 {
            let t = (p - p0) / (p1 - p0);
            return v0 + t * (v1 - v0);
        }
    }
    chain[chain.len() - 1].1
}

/// Upper-bound curve for Q(D_{p,4}) on [pmin, pmax] ⊆ [0, 3/8]: the lower
/// convex envelope of min(f(x(p)), 2 − 16p/3), anchored at the achievable
/// points (0, 2) and (3/8, 0).
pub fn dep4_bound_curve(pmin: f64, pmax: f64, steps: usize) -> Result<BoundCurve> {
    if steps < 2 {
        return Err(Error::Parameter(format!(
            "curve needs at least 2 steps, got {steps}"
        )));
    }
    if !(0.0..=0.375 + REGIME_GUARD).contains(&pmin) || pmax > 0.375 + REGIME_GUARD || pmin >= pmax
    {
        return Err(Error::Domain(format!(
            "curve window must satisfy 0 <= pmin < pmax <= 3/8, got [{pmin}, {pmax}]"
        )));
    }

    let grid: Vec<f64> = (0..steps)
        .map(|k| pmin + (pmax - pmin) * k as f64 / (steps - 1) as f64)
        .collect();
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(steps + 2);
    points.push((0.0, 2.0));
    points.push((0.375, 0.0));
    for &p in &grid {
        points.push((p, dep4_f(p)?.min(dep4_chord(p))));
    }
    let hull = lower_hull(points);
    let samples: Vec<(f64, f64)> = grid.iter().map(|&p| (p, interpolate(&hull, p))).collect();
    BoundCurve::new("p", "bound", samples)
}

/// Weight-class masses of the locally twirled channel plus the capacity
/// bound shared by every locally symmetric Pauli channel with those masses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocallySymmetricBound {
    /// Identity mass.
    pub q0: f64,
    /// Total weight-1 mass (spread q1/6 per string).
    pub q1: f64,
    /// Total weight-2 mass (spread q2/9 per string).
    pub q2: f64,
    /// Capacity upper bound.
    pub bound: f64,
}

/// Computes (q0, q1, q2) from the Pauli twirl of Φ_{x,y,z} (weight-class
/// masses are invariant under the localized Clifford twirl) together with
/// the main upper bound at the same parameters.
pub fn locally_symmetric_bound(p: &ChannelParamsXYZ) -> Result<LocallySymmetricBound> {
    let bound = main_theorem_bound(p)?;
    let twirled: PauliChannel = pauli_twirl(&crate::channel::make_phi_xyz(p)?)?;
    let masses = twirled.weight_class_masses();
    Ok(LocallySymmetricBound {
        q0: masses[0],
        q1: masses[1],
        q2: masses[2],
        bound,
    })
}

/// Curve families exposed by the sweep interface.
#[derive(Debug, Clone)]
pub enum SweepKind {
    /// Depolarizing bound over p ∈ [pmin, pmax] ⊆ [0, 3/8].
    Dep4 { pmin: f64, pmax: f64 },
    /// Capacity of Φ_γ ⊗ Φ_γ over γ ∈ [gmin, gmax] ⊆ [0, 1/2] via the
    /// concave program at (γ, γ(1−γ), γ²).
    AmplitudeDamping {
        gmin: f64,
        gmax: f64,
        optimizer: OptimizerConfig,
    },
    /// Twirl bound along x ∈ [xmin, xmax] ⊂ [0, 1/2) at fixed y, z.
    SymmetricSlice {
        xmin: f64,
        xmax: f64,
        y: f64,
        z: f64,
    },
}

/// Samples the requested curve on a uniform grid. Grid points are
/// independent; the amplitude-damping sweep evaluates them in parallel and
/// reassembles in index order, so outputs are deterministic.
pub fn sweep_curve(kind: &SweepKind, steps: usize) -> Result<BoundCurve> {
    if steps < 2 {
        return Err(Error::Parameter(format!(
            "curve needs at least 2 steps, got {steps}"
        )));
    }
    match kind {
        SweepKind::Dep4 { pmin, pmax } => dep4_bound_curve(*pmin, *pmax, steps),
        SweepKind::AmplitudeDamping {
            gmin,
            gmax,
            optimizer,
        } => {
            if !(0.0..=0.5 + REGIME_GUARD).contains(gmin)
                || *gmax > 0.5 + REGIME_GUARD
                || gmin >= gmax
            {
                return Err(Error::Domain(format!(
                    "damping window must satisfy 0 <= gmin < gmax <= 1/2, got [{gmin}, {gmax}]"
                )));
            }
            let grid: Vec<f64> = (0..steps)
                .map(|k| gmin + (gmax - gmin) * k as f64 / (steps - 1) as f64)
                .collect();
            let samples: Result<Vec<(f64, f64)>> = grid
                .par_iter()
                .map(|&g| {
                    let params = ChannelParamsXYZ::new(g, g * (1.0 - g), g * g);
                    let result = capacity_diagonal_program(&params, optimizer)?;
                    Ok((g, result.value))
                })
                .collect();
            BoundCurve::new("gamma", "capacity", samples?)
        }
        SweepKind::SymmetricSlice { xmin, xmax, y, z } => {
            if !(0.0..0.5).contains(xmin) || !(0.0..0.5).contains(xmax) || xmin >= xmax {
                return Err(Error::Domain(format!(
                    "slice window must satisfy 0 <= xmin < xmax < 1/2, got [{xmin}, {xmax}]"
                )));
            }
            let samples: Result<Vec<(f64, f64)>> = (0..steps)
                .map(|k| {
                    let x = xmin + (xmax - xmin) * k as f64 / (steps - 1) as f64;
                    let bound = main_theorem_bound(&ChannelParamsXYZ::new(x, *y, *z))?;
                    Ok((x, bound))
                })
                .collect();
            BoundCurve::new("x", "bound", samples?)
        }
    }
}
