//! The crystal-basis axioms and the converse splitting check, on finite probes.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    basis_classes, crystal_image_omega, crystal_image_x, invert, reduce_mod_q, ClassImage, CrystalClass, Frame,
    LatticeDesc,
};
use crate::qalgebra::{enumerate_up_to, Monomial};
use crate::qcoeff::{HalfExp, QRat, Valuation};
use crate::verma::DirectSum;

/// The probed region: classes of length `≤ max_length` with indices in
/// `[lo, hi]`, operators `Ω̃_ψ(m)`, `x̃⁻_m` for `m ∈ [m_lo, m_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalBounds {
    pub max_length: usize,
    pub lo: i64,
    pub hi: i64,
    pub m_lo: i64,
    pub m_hi: i64,
}

const MAX_WITNESSES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub witnesses: Vec<String>,
}

impl AxiomResult {
    fn new(axiom: &'static str) -> Self {
        AxiomResult {
            axiom,
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, failure: Option<String>) {
        self.checked += 1;
        if let Some(w) = failure {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrystalReport {
    pub bounds: CrystalBounds,
    pub results: Vec<AxiomResult>,
}

impl CrystalReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(AxiomResult::passed)
    }

    pub fn result(&self, axiom: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }
}

struct GridOutcome {
    stability: Option<String>,
    x_image: Option<String>,
    omega_image: Option<String>,
    commutation: Option<Option<String>>,
}

fn single_class(img: &ClassImage) -> Option<Option<&CrystalClass>> {
    match img {
        ClassImage::Zero => Some(None),
        ClassImage::Class(c) => Some(Some(c)),
        _ => None,
    }
}

fn probe(b: &CrystalClass, m: i64, lattice: &LatticeDesc) -> GridOutcome {
    let lift = b.lift(lattice);
    let mut stability = None;
    for (name, v) in [
        (format!("tilde Omega_psi({m})"), lift.tilde_omega(m)),
        (format!("tilde x-[{m}]"), lift.tilde_xminus(m)),
    ] {
        if let Err(e) = reduce_mod_q(&v, lattice) {
            stability.get_or_insert(format!("{name} on {b}: {e}"));
        }
    }
    let x_img = crystal_image_x(m, b, lattice);
    let o_img = crystal_image_omega(m, b, lattice);
    let shape = |name: &str, img: &ClassImage| match img {
        ClassImage::Violation(_) => Some(format!("{name}({m}) on {b}: {img}")),
        _ => None,
    };
    let x_image = shape("tilde x-", &x_img);
    let omega_image = shape("tilde Omega_psi", &o_img);
    let o_neg = crystal_image_omega(-m, b, lattice);
    let commutation = match (single_class(&o_neg), single_class(&x_img)) {
        (Some(Some(ob)), Some(Some(xb))) => {
            let left = crystal_image_x(m, ob, lattice);
            let right = crystal_image_omega(-m, xb, lattice);
            Some((left != right).then(|| {
                format!(
                    "m={m}, b={b}: x-[{m}] Omega_psi({}) b = {left} but Omega_psi({}) x-[{m}] b = {right}",
                    -m, -m
                )
            }))
        }
        _ => None,
    };
    GridOutcome {
        stability,
        x_image,
        omega_image,
        commutation,
    }
}

/// Checks the lattice and basis axioms over the probed region.
pub fn verify_crystal_axioms(lattice: &LatticeDesc, bounds: CrystalBounds) -> CrystalReport {
    let monomials = enumerate_up_to(bounds.max_length, bounds.lo, bounds.hi);
    let classes = basis_classes(lattice, bounds.max_length, bounds.lo, bounds.hi);

    let mut span = AxiomResult::new("lattice-span");
    for m in &monomials {
        span.record(
            invert(lattice.frame(m))
                .is_none()
                .then(|| format!("frame at {m} is singular")),
        );
    }

    let mut grading = AxiomResult::new("weight-grading");
    let weights = lattice.sum().weights();
    for b in &classes {
        let support: BTreeSet<(i64, i64)> = lattice.frame(&b.mono)[b.component - 1]
            .iter()
            .zip(weights)
            .filter(|(f, _)| !f.is_zero())
            .map(|(_, w)| (w.h(), w.d()))
            .collect();
        grading.record((support.len() > 1).then(|| format!("{b} mixes highest weights {support:?}")));
    }

    let grid: Vec<(usize, i64)> = (0..classes.len())
        .flat_map(|i| (bounds.m_lo..=bounds.m_hi).map(move |m| (i, m)))
        .collect();
    let outcomes: Vec<GridOutcome> = grid.par_iter().map(|&(i, m)| probe(&classes[i], m, lattice)).collect();

    let mut stability = AxiomResult::new("lattice-stability");
    let mut x_image = AxiomResult::new("x-image");
    let mut omega_image = AxiomResult::new("omega-image");
    let mut commutation = AxiomResult::new("commutation");
    for o in outcomes {
        stability.record(o.stability);
        x_image.record(o.x_image);
        omega_image.record(o.omega_image);
        if let Some(c) = o.commutation {
            commutation.record(c);
        }
    }
    CrystalReport {
        bounds,
        results: vec![span, grading, stability, x_image, omega_image, commutation],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    /// Generators of `L` whose component projections leave `L`.
    pub incompatible: Vec<String>,
    /// `(component, report)` for each restricted pair `(L_j, B_j)`.
    pub components: Vec<(usize, CrystalReport)>,
    /// Failures of `B_j = B ∩ (L_j/qL_j)`.
    pub restriction: Vec<String>,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.incompatible.is_empty() && self.restriction.is_empty() && self.components.iter().all(|(_, r)| r.passed())
    }
}

/// Generator of `L ∩ M_j` over a fiber: the column entry of least valuation.
fn column_generator(frame: &Frame, j: usize) -> Option<QRat> {
    frame
        .iter()
        .map(|row| &row[j])
        .filter(|f| !f.is_zero())
        .min_by_key(|f| f.valuation())
        .cloned()
}

fn restricted_lattice(lattice: &LatticeDesc, j: usize, monomials: &[Monomial]) -> LatticeDesc {
    let w = lattice.sum().weights()[j];
    let one = |f: Option<QRat>| vec![vec![f.unwrap_or_else(QRat::one)]];
    let mut out =
        LatticeDesc::with_default_frame(DirectSum::single(w), one(column_generator(&lattice.default_frame, j)))
            .expect("1x1 frame");
    for m in monomials {
        if lattice.overrides.contains_key(m) {
            out = out
                .with_override(m.clone(), one(column_generator(lattice.frame(m), j)))
                .expect("1x1 frame");
        }
    }
    out
}

/// For `L ⊂ M₁ ⊕ M₂`: checks that `L = (L ∩ M₁) ⊕ (L ∩ M₂)` on the probe,
/// that `B_j = B ∩ (L_j/qL_j)`, and runs the axioms on each `(L_j, B_j)`.
pub fn split_converse_check(lattice: &LatticeDesc, bounds: CrystalBounds) -> SplitReport {
    let n = lattice.rank();
    let monomials = enumerate_up_to(bounds.max_length, bounds.lo, bounds.hi);
    let mut incompatible = Vec::new();
    for m in &monomials {
        for r in 1..=n {
            let g = lattice.generator(m, r);
            for j in 1..=n {
                let pj = lattice.sum().inject(j, &g.component(j)).expect("component in range");
                if let Err(e) = reduce_mod_q(&pj, lattice) {
                    incompatible.push(format!("component {j} of generator [{r}] {m} leaves L: {e}"));
                }
            }
        }
    }
    if !incompatible.is_empty() {
        return SplitReport {
            incompatible,
            components: Vec::new(),
            restriction: Vec::new(),
        };
    }

    let zero = Valuation::Finite(HalfExp(0));
    let mut restriction = Vec::new();
    for m in &monomials {
        let frame = lattice.frame(m);
        let gens: Vec<Option<QRat>> = (0..n).map(|j| column_generator(frame, j)).collect();
        for j in 0..n {
            let Some(fj) = &gens[j] else { continue };
            let inside: Vec<QRat> = frame
                .iter()
                .filter(|row| {
                    (0..n).all(|k| {
                        k == j
                            || row[k].is_zero()
                            || gens[k]
                                .as_ref()
                                .is_some_and(|g| row[k].div(g).expect("nonzero").valuation() > zero)
                    })
                })
                .map(|row| row[j].div(fj).expect("nonzero"))
                .filter(|ratio| ratio.valuation() == zero)
                .collect();
            let ok = inside.len() == 1
                && inside[0].value_at_zero().is_ok_and(|v| {
                    v == num_rational::BigRational::from_integer(1.into())
                        || v == num_rational::BigRational::from_integer((-1).into())
                });
            if !ok {
                restriction.push(format!(
                    "over {m}: {} classes of B reduce into L_{}/qL_{}",
                    inside.len(),
                    j + 1,
                    j + 1
                ));
            }
        }
    }

    let components = (0..n)
        .map(|j| {
            let lj = restricted_lattice(lattice, j, &monomials);
            (j + 1, verify_crystal_axioms(&lj, bounds))
        })
        .collect();
    SplitReport {
        incompatible,
        components,
        restriction,
    }
}
