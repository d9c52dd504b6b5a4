//! Imaginary crystal lattices, their bases modulo `q`, and the crystal axioms
//! on finite probes of a direct sum `⊕ᵢ M̄_q(λᵢ)`.
//!
//! A lattice is described fiberwise: over each normal monomial `x_𝐤` the
//! vectors `x_𝐤 v_{λ₁}, …, x_𝐤 v_{λₙ}` span `F^n`, and the lattice there is the
//! `A₀`-span of the rows of an invertible frame matrix. The standard lattice
//! `⊕ᵢ L(λᵢ)` has the identity frame everywhere.

mod axioms;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::qalgebra::{Element, Monomial};
use crate::qcoeff::{Coeff, HalfExp, QRat, Valuation};
use crate::verma::{DirectSum, HighestWeight, VermaError, VermaVector};

pub use axioms::{split_converse_check, verify_crystal_axioms, AxiomResult, CrystalBounds, CrystalReport, SplitReport};

pub type Frame = Vec<Vec<QRat>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("not in the lattice: coordinate {row} at {monomial} is {value}")]
    NotInLattice {
        row: usize,
        monomial: Monomial,
        value: Box<QRat>,
    },
    #[error("frame at {0} is singular")]
    SingularFrame(Monomial),
    #[error("frame has the wrong shape for {0} components")]
    FrameShape(usize),
    #[error(transparent)]
    Module(#[from] VermaError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDesc {
    sum: DirectSum,
    default_frame: Frame,
    overrides: BTreeMap<Monomial, Frame>,
}

fn identity(n: usize) -> Frame {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { QRat::one() } else { QRat::zero() })
                .collect()
        })
        .collect()
}

/// Inverse by Gauss–Jordan elimination; `None` if singular.
pub(crate) fn invert(f: &Frame) -> Option<Frame> {
    let n = f.len();
    let mut a: Vec<Vec<QRat>> = f
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        let inv = a[col][col].inv().ok()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl LatticeDesc {
    /// `L = ⊕ᵢ L(λᵢ)`.
    pub fn standard(sum: DirectSum) -> Self {
        let n = sum.len();
        LatticeDesc {
            sum,
            default_frame: identity(n),
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_default_frame(sum: DirectSum, frame: Frame) -> Result<Self, LatticeError> {
        let n = sum.len();
        if frame.len() != n || frame.iter().any(|r| r.len() != n) {
            return Err(LatticeError::FrameShape(n));
        }
        Ok(LatticeDesc {
            sum,
            default_frame: frame,
            overrides: BTreeMap::new(),
        })
    }

    pub fn with_override(mut self, m: Monomial, frame: Frame) -> Result<Self, LatticeError> {
        let n = self.sum.len();
        if frame.len() != n || frame.iter().any(|r| r.len() != n) {
            return Err(LatticeError::FrameShape(n));
        }
        self.overrides.insert(m, frame);
        Ok(self)
    }

    /// The standard lattice with row `row` of the frame at `m` multiplied by `q^{−1}`.
    pub fn scaled_control(sum: DirectSum, m: Monomial, row: usize) -> Result<Self, LatticeError> {
        let mut frame = identity(sum.len());
        let r = row
            .checked_sub(1)
            .filter(|&r| r < sum.len())
            .ok_or(VermaError::UnknownComponent(row, sum.len()))?;
        frame[r][r] = QRat::q_pow(-1);
        LatticeDesc::standard(sum).with_override(m, frame)
    }

    /// `λ ⊕ λ` with the lattice spanned by `x(v₁ + v₂)` and `q·x v₂` over every monomial.
    pub fn diagonal_control(w: HighestWeight) -> Self {
        let frame = vec![vec![QRat::one(), QRat::one()], vec![QRat::zero(), QRat::q_pow(1)]];
        LatticeDesc::with_default_frame(DirectSum::new(vec![w, w]), frame).expect("2x2 frame")
    }

    pub fn sum(&self) -> &DirectSum {
        &self.sum
    }

    pub fn rank(&self) -> usize {
        self.sum.len()
    }

    pub fn frame(&self, m: &Monomial) -> &Frame {
        self.overrides.get(m).unwrap_or(&self.default_frame)
    }

    fn frame_inverse(&self, m: &Monomial) -> Result<Frame, LatticeError> {
        invert(self.frame(m)).ok_or_else(|| LatticeError::SingularFrame(m.clone()))
    }

    /// The lattice generator `Σⱼ F[row][j] x_𝐤 v_{λⱼ}`.
    pub fn generator(&self, m: &Monomial, row: usize) -> VermaVector {
        let mut v = self.sum.zero();
        for (j, f) in self.frame(m)[row - 1].iter().enumerate() {
            if !f.is_zero() {
                let e = Element::from_monomial(m.clone(), Coeff::from(f.clone()));
                v = v.add(&self.sum.inject(j + 1, &e).expect("component in range"));
            }
        }
        v
    }

    /// Lattice coordinates of `v` over each monomial (`c · F⁻¹`).
    pub fn coordinates(&self, v: &VermaVector) -> Result<BTreeMap<Monomial, Vec<QRat>>, LatticeError> {
        let n = self.rank();
        let mut fibers: BTreeMap<Monomial, Vec<QRat>> = BTreeMap::new();
        for (id, m, c) in v.terms() {
            let row = fibers.entry(m.clone()).or_insert_with(|| vec![QRat::zero(); n]);
            row[id - 1] = c.at_gamma_one();
        }
        let mut out = BTreeMap::new();
        for (m, c) in fibers {
            let inv = self.frame_inverse(&m)?;
            let coords: Vec<QRat> = (0..n)
                .map(|k| (0..n).fold(QRat::zero(), |acc, j| &acc + &(&c[j] * &inv[j][k])))
                .collect();
            out.insert(m, coords);
        }
        Ok(out)
    }
}

/// `±(x_𝐤 ⋅ row + qL)`: a signed basis element of `L/qL`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrystalClass {
    pub sign: i8,
    pub mono: Monomial,
    pub component: usize,
}

impl CrystalClass {
    pub fn new(mono: Monomial, component: usize) -> Self {
        CrystalClass {
            sign: 1,
            mono,
            component,
        }
    }

    pub fn negate(&self) -> Self {
        CrystalClass {
            sign: -self.sign,
            ..self.clone()
        }
    }

    /// The canonical representative.
    pub fn lift(&self, lattice: &LatticeDesc) -> VermaVector {
        lattice
            .generator(&self.mono, self.component)
            .scale(&QRat::from_int(self.sign as i64))
    }
}

impl fmt::Display for CrystalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { '-' } else { '+' };
        write!(f, "{s}[{}] {}", self.component, self.mono)
    }
}

/// An element of `L/qL` in the frame basis: `(row, monomial) ↦ rational`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Reduction {
    pub terms: BTreeMap<(Monomial, usize), BigRational>,
}

impl Reduction {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, row), c)| format!("{c}*[{row}] {m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `v + qL` in the frame basis; fails if `v ∉ L`.
pub fn reduce_mod_q(v: &VermaVector, lattice: &LatticeDesc) -> Result<Reduction, LatticeError> {
    let mut out = Reduction::default();
    for (m, coords) in lattice.coordinates(v)? {
        for (k, c) in coords.into_iter().enumerate() {
            if c.valuation() < Valuation::Finite(HalfExp(0)) {
                return Err(LatticeError::NotInLattice {
                    row: k + 1,
                    monomial: m,
                    value: Box::new(c),
                });
            }
            let r = c.value_at_zero().expect("regular");
            if !r.is_zero() {
                out.terms.insert((m.clone(), k + 1), r);
            }
        }
    }
    Ok(out)
}

/// The image of a basis element under a tilde operator, read in `L/qL`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassImage {
    Zero,
    Class(CrystalClass),
    /// Not of the form `±b` (several terms or a coefficient other than `±1`).
    Violation(Reduction),
    /// The exact image left the lattice.
    OutsideLattice(LatticeError),
}

impl ClassImage {
    pub fn classify(r: Result<Reduction, LatticeError>) -> Self {
        let r = match r {
            Ok(r) => r,
            Err(e) => return ClassImage::OutsideLattice(e),
        };
        if r.is_zero() {
            return ClassImage::Zero;
        }
        if r.terms.len() == 1 {
            let ((m, row), c) = r.terms.iter().next().unwrap();
            if c.abs().is_one() {
                return ClassImage::Class(CrystalClass {
                    sign: if c.is_negative() { -1 } else { 1 },
                    mono: m.clone(),
                    component: *row,
                });
            }
        }
        ClassImage::Violation(r)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ClassImage::Zero)
    }
}

impl fmt::Display for ClassImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassImage::Zero => write!(f, "0"),
            ClassImage::Class(c) => write!(f, "{c}"),
            ClassImage::Violation(r) => write!(f, "not a signed class: {r}"),
            ClassImage::OutsideLattice(e) => write!(f, "{e}"),
        }
    }
}

/// `x̃⁻_m b` in `L/qL`.
pub fn crystal_image_x(m: i64, b: &CrystalClass, lattice: &LatticeDesc) -> ClassImage {
    ClassImage::classify(reduce_mod_q(&b.lift(lattice).tilde_xminus(m), lattice))
}

/// `Ω̃_ψ(m) b` in `L/qL`.
pub fn crystal_image_omega(m: i64, b: &CrystalClass, lattice: &LatticeDesc) -> ClassImage {
    ClassImage::classify(reduce_mod_q(&b.lift(lattice).tilde_omega(m), lattice))
}

/// `(L, B)` for `⊕ᵢ M̄_q(λᵢ)` with `B = ⊔ᵢ B(λᵢ)` enumerated inside the bounds.
pub fn assemble_direct_sum_basis(
    weights: &[HighestWeight],
    max_length: usize,
    lo: i64,
    hi: i64,
) -> (LatticeDesc, Vec<CrystalClass>) {
    let lattice = LatticeDesc::standard(DirectSum::new(weights.to_vec()));
    let classes = basis_classes(&lattice, max_length, lo, hi);
    (lattice, classes)
}

/// Every frame row over every normal monomial in bounds.
pub fn basis_classes(lattice: &LatticeDesc, max_length: usize, lo: i64, hi: i64) -> Vec<CrystalClass> {
    let mut out = Vec::new();
    for id in 1..=lattice.rank() {
        for m in crate::qalgebra::enumerate_up_to(max_length, lo, hi) {
            out.push(CrystalClass::new(m, id));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::parse_element;

    fn single(h: i64) -> LatticeDesc {
        LatticeDesc::standard(DirectSum::single(HighestWeight::new(h, 0).unwrap()))
    }

    fn vec_of(l: &LatticeDesc, s: &str) -> VermaVector {
        l.sum().inject(1, &parse_element(s).unwrap()).unwrap()
    }

    fn class(v: &[i64]) -> CrystalClass {
        CrystalClass::new(Monomial::new(v.to_vec()), 1)
    }

    #[test]
    fn reduction_examples() {
        let l = single(1);
        assert!(reduce_mod_q(&vec_of(&l, "q^2 x[1]x[0]"), &l).unwrap().is_zero());
        assert_eq!(
            ClassImage::classify(reduce_mod_q(&vec_of(&l, "x[1]x[0]"), &l)),
            ClassImage::Class(class(&[1, 0]))
        );
        assert_eq!(
            ClassImage::classify(reduce_mod_q(&vec_of(&l, "(q^2-1) x[1]x[1]"), &l)),
            ClassImage::Class(class(&[1, 1]).negate())
        );
        assert!(matches!(
            reduce_mod_q(&vec_of(&l, "q^-1 x[0]"), &l),
            Err(LatticeError::NotInLattice { .. })
        ));
        assert!(matches!(
            ClassImage::classify(reduce_mod_q(&vec_of(&l, "2 x[0]"), &l)),
            ClassImage::Violation(_)
        ));
    }

    #[test]
    fn image_examples() {
        let l = single(1);
        assert_eq!(
            crystal_image_x(0, &class(&[2]), &l),
            ClassImage::Class(class(&[1, 1]).negate())
        );
        assert_eq!(
            crystal_image_x(2, &class(&[1, 0]), &l),
            ClassImage::Class(class(&[2, 1, 0]))
        );
        assert!(crystal_image_x(0, &class(&[1, 0]), &l).is_zero());
        assert_eq!(
            crystal_image_omega(-1, &class(&[1, 0]), &l),
            ClassImage::Class(class(&[0]))
        );
        assert!(crystal_image_omega(0, &class(&[1, 0]), &l).is_zero());
        assert!(crystal_image_omega(7, &class(&[]), &l).is_zero());
    }

    #[test]
    fn frames_invert() {
        let f = vec![vec![QRat::one(), QRat::one()], vec![QRat::zero(), QRat::q_pow(1)]];
        let inv = invert(&f).unwrap();
        assert_eq!(inv[0][1], -QRat::q_pow(-1));
        assert!(invert(&vec![vec![QRat::one(), QRat::one()], vec![QRat::one(), QRat::one()]]).is_none());
    }

    #[test]
    fn assembled_basis_tags_components() {
        let ws = [HighestWeight::new(1, 0).unwrap(), HighestWeight::new(3, 0).unwrap()];
        let (l, b) = assemble_direct_sum_basis(&ws, 1, 0, 1);
        assert_eq!(l.rank(), 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.iter().filter(|c| c.component == 2).count(), 3);
        let (l0, b0) = assemble_direct_sum_basis(&[], 2, 0, 1);
        assert_eq!(l0.rank(), 0);
        assert!(b0.is_empty());
    }
}
