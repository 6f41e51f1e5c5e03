//! The G-graded fusion algebra, ω-vectors and modular data.

use crate::category::CategoryData;
use crate::report::AxiomReport;
use crate::scalars::CycNumber;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FusionError {
    #[error("basis mismatch: {0} vs {1} labels")]
    BasisMismatch(usize, usize),
}

/// A vector in the fusion algebra over the label basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionElement {
    basis: usize,
    coeffs: BTreeMap<usize, CycNumber>,
    grade: Option<usize>,
}

impl FusionElement {
    pub fn zero(basis: usize) -> FusionElement {
        FusionElement { basis, coeffs: BTreeMap::new(), grade: None }
    }

    /// The basis vector ⟨x⟩.
    pub fn basis_vector(c: &CategoryData, x: usize) -> FusionElement {
        let mut e = FusionElement::zero(c.num_labels());
        e.coeffs.insert(x, c.one());
        e.grade = Some(c.grade(x));
        e
    }

    pub fn from_terms(c: &CategoryData, terms: &[(usize, CycNumber)]) -> FusionElement {
        let mut e = FusionElement::zero(c.num_labels());
        for (x, v) in terms {
            e.add_term(*x, v.clone());
        }
        e.recompute_grade(c);
        e
    }

    fn add_term(&mut self, x: usize, v: CycNumber) {
        let sum = match self.coeffs.remove(&x) {
            Some(old) => old + v,
            None => v,
        };
        if !sum.is_zero() {
            self.coeffs.insert(x, sum);
        }
    }

    fn recompute_grade(&mut self, c: &CategoryData) {
        let mut grades = self.coeffs.keys().map(|&x| c.grade(x));
        self.grade = match grades.next() {
            Some(g) if grades.all(|h| h == g) => Some(g),
            _ => None,
        };
    }

    pub fn coeff(&self, x: usize) -> Option<&CycNumber> {
        self.coeffs.get(&x)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &CycNumber)> {
        self.coeffs.iter().map(|(&x, v)| (x, v))
    }

    pub fn grade(&self) -> Option<usize> {
        self.grade
    }

    pub fn add(&self, other: &FusionElement, c: &CategoryData) -> Result<FusionElement, FusionError> {
        if self.basis != other.basis {
            return Err(FusionError::BasisMismatch(self.basis, other.basis));
        }
        let mut out = self.clone();
        for (x, v) in other.terms() {
            out.add_term(x, v.clone());
        }
        out.recompute_grade(c);
        Ok(out)
    }

    /// Readable form such as `1*<0> + 2*<1>`.
    pub fn display(&self, c: &CategoryData) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.terms()
            .map(|(x, v)| format!("({v})*<{}>", c.labels.name(x)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Bilinear extension of the label product.
pub fn fusion_mul(c: &CategoryData, a: &FusionElement, b: &FusionElement) -> Result<FusionElement, FusionError> {
    if a.basis != b.basis || a.basis != c.num_labels() {
        return Err(FusionError::BasisMismatch(a.basis, b.basis));
    }
    let mut out = FusionElement::zero(a.basis);
    for (x, u) in a.terms() {
        for (y, v) in b.terms() {
            out.add_term(c.labels.mul(x, y), u * v);
        }
    }
    out.recompute_grade(c);
    Ok(out)
}

/// ⟨x⟩ ↦ ⟨x⁻¹⟩.
pub fn fusion_star(c: &CategoryData, a: &FusionElement) -> FusionElement {
    let mut out = FusionElement::zero(a.basis);
    for (x, v) in a.terms() {
        out.add_term(c.labels.inv(x), v.clone());
    }
    out.recompute_grade(c);
    out
}

/// ⟨x⟩ ↦ ⟨φ_α(x)⟩.
pub fn fusion_conj(c: &CategoryData, alpha: usize, a: &FusionElement) -> FusionElement {
    let mut out = FusionElement::zero(a.basis);
    for (x, v) in a.terms() {
        out.add_term(c.act(alpha, x), v.clone());
    }
    out.recompute_grade(c);
    out
}

/// ω^α = Σ_{|x| = α} d(x)⟨x⟩.
pub fn omega(c: &CategoryData, alpha: usize) -> FusionElement {
    let mut out = FusionElement::zero(c.num_labels());
    for x in c.labels_of_grade(alpha) {
        out.add_term(x, c.d(x).clone());
    }
    out.grade = Some(alpha);
    out
}

/// Multiplicity number N_X^i: how often the simple i occurs in X (0 or 1 here).
pub fn multiplicity(x: usize, i: usize) -> usize {
    usize::from(x == i)
}

#[derive(Debug, Clone)]
pub struct ModularReport {
    pub neutral_labels: Vec<usize>,
    pub s_matrix: Vec<Vec<CycNumber>>,
    pub determinant: CycNumber,
    pub delta_plus: CycNumber,
    pub delta_minus: CycNumber,
    pub global_dim: CycNumber,
    pub invertible: bool,
}

/// S_{jk} = tr(c_{k,j} c_{j,k}) with c_{x,y} = (id ⊗ (φ_0)^{-1}) τ_{x,y}.
pub fn s_entry(c: &CategoryData, j: usize, k: usize) -> CycNumber {
    c.d(j) * c.d(k) * c.b(j, k) * c.b(k, j) / (c.p0(j) * c.p0(k))
}

pub fn modular_report(c: &CategoryData) -> ModularReport {
    let neutral = c.neutral_labels();
    let s: Vec<Vec<CycNumber>> = neutral.iter().map(|&j| neutral.iter().map(|&k| s_entry(c, j, k)).collect()).collect();
    let determinant = determinant(&s, c.root_order());
    let (dp, dm) = gauss_sums(c);
    ModularReport {
        invertible: !determinant.is_zero(),
        neutral_labels: neutral,
        s_matrix: s,
        determinant,
        delta_plus: dp,
        delta_minus: dm,
        global_dim: c.neutral_dim(),
    }
}

/// (Δ₊, Δ₋) = Σ_{|x| = 1} θ_x^{±1} d(x)².
pub fn gauss_sums(c: &CategoryData) -> (CycNumber, CycNumber) {
    let mut dp = c.zero();
    let mut dm = c.zero();
    for x in c.neutral_labels() {
        let d2 = c.d(x) * c.d(x);
        let v = c.neutral_twist(x);
        dp = dp + &v * &d2;
        dm = dm + v.inv() * &d2;
    }
    (dp, dm)
}

/// Fraction-free (Bareiss) elimination over Q(ζ_N).
pub fn determinant(m: &[Vec<CycNumber>], n: u32) -> CycNumber {
    let size = m.len();
    if size == 0 {
        return CycNumber::one(n);
    }
    let mut a: Vec<Vec<CycNumber>> = m.to_vec();
    let mut sign_neg = false;
    let mut prev = CycNumber::one(n);
    for k in 0..size - 1 {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_neg = !sign_neg;
                }
                None => return CycNumber::zero(n),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    if sign_neg {
        -det
    } else {
        det
    }
}

/// Σ_{|x| = g} d(x)² = dim(C_1); also available through the checks module.
pub fn check_graded_dims(c: &CategoryData) -> AxiomReport {
    crate::checks::check_graded_dims(c)
}
