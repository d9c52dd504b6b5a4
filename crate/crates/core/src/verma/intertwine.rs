//! Module maps between direct sums and the check that they commute with the
//! generators and with the tilde operators `Ω̃_ψ(m)`, `x̃⁻_m`.

use std::fmt;

use super::{DirectSum, Generator, VermaError, VermaVector};
use crate::qalgebra::Element;

/// A map between a direct sum `M` and its summands (or `M` itself).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleMap {
    /// `M̄_q(λᵢ) → M`.
    Inject(usize),
    /// `M → M̄_q(λᵢ)`.
    Project(usize),
    /// `M → M` exchanging the first two components; a module map only when `λ₁ = λ₂`.
    SwapComponents,
}

impl fmt::Display for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleMap::Inject(i) => write!(f, "inject {i}"),
            ModuleMap::Project(i) => write!(f, "project {i}"),
            ModuleMap::SwapComponents => write!(f, "swap components"),
        }
    }
}

impl ModuleMap {
    /// Source and target of the map for the given sum.
    pub fn endpoints(&self, sum: &DirectSum) -> Result<(DirectSum, DirectSum), VermaError> {
        match *self {
            ModuleMap::Inject(i) => Ok((DirectSum::single(sum.weight(i)?), sum.clone())),
            ModuleMap::Project(i) => Ok((sum.clone(), DirectSum::single(sum.weight(i)?))),
            ModuleMap::SwapComponents => {
                sum.weight(2)?;
                Ok((sum.clone(), sum.clone()))
            }
        }
    }

    pub fn apply(&self, sum: &DirectSum, v: &VermaVector) -> Result<VermaVector, VermaError> {
        let (_, target) = self.endpoints(sum)?;
        match *self {
            ModuleMap::Inject(i) => target.inject(i, &v.component(1)),
            ModuleMap::Project(i) => target.inject(1, &v.component(i)),
            ModuleMap::SwapComponents => {
                let mut out = target.zero();
                for (id, e) in v.components() {
                    let to = match id {
                        1 => 2,
                        2 => 1,
                        other => other,
                    };
                    out = out.add(&target.inject(to, e)?);
                }
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwiningFailure {
    pub operator: String,
    pub sample: VermaVector,
    pub map_then_op: VermaVector,
    pub op_then_map: VermaVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwiningReport {
    pub map: ModuleMap,
    pub checked: usize,
    pub failures: Vec<IntertwiningFailure>,
}

impl IntertwiningReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
enum Probe {
    Gen(Generator),
    TildeOmega(i64),
    TildeX(i64),
}

impl Probe {
    fn run(self, v: &VermaVector) -> VermaVector {
        match self {
            Probe::Gen(g) => v.act(g).expect("h_0 excluded"),
            Probe::TildeOmega(m) => v.tilde_omega(m),
            Probe::TildeX(m) => v.tilde_xminus(m),
        }
    }

    fn name(self) -> String {
        match self {
            Probe::Gen(g) => g.to_string(),
            Probe::TildeOmega(m) => format!("tilde Omega_psi({m})"),
            Probe::TildeX(m) => format!("tilde x-[{m}]"),
        }
    }
}

/// Checks `ν ∘ X = X ∘ ν` for `X` among `K`, `D`, `x^±_m`, `h_m` (the module
/// map condition) and `Ω̃_ψ(m)`, `x̃⁻_m`, for `m ∈ [lo, hi]`, on every sample
/// element placed in every source component.
pub fn verify_intertwining(
    map: ModuleMap,
    sum: &DirectSum,
    samples: &[Element],
    (lo, hi): (i64, i64),
) -> Result<IntertwiningReport, VermaError> {
    let (source, _) = map.endpoints(sum)?;
    let mut probes = vec![Probe::Gen(Generator::K(1)), Probe::Gen(Generator::D(1))];
    for m in lo..=hi {
        probes.push(Probe::Gen(Generator::XMinus(m)));
        probes.push(Probe::Gen(Generator::XPlus(m)));
        if m != 0 {
            probes.push(Probe::Gen(Generator::H(m)));
        }
        probes.push(Probe::TildeOmega(m));
        probes.push(Probe::TildeX(m));
    }
    let mut vectors = Vec::new();
    for e in samples {
        for id in 1..=source.len() {
            vectors.push(source.inject(id, e)?);
        }
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    for v in &vectors {
        for &p in &probes {
            checked += 1;
            let a = map.apply(sum, &p.run(v))?;
            let b = p.run(&map.apply(sum, v)?);
            if a != b {
                failures.push(IntertwiningFailure {
                    operator: p.name(),
                    sample: v.clone(),
                    map_then_op: b,
                    op_then_map: a,
                });
            }
        }
    }
    Ok(IntertwiningReport { map, checked, failures })
}
