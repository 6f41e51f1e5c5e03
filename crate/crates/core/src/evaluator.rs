//! Evaluation of colored diagrams in the pointed realization, where every
//! hom space is at most one-dimensional and a morphism is a scalar.

use crate::category::CategoryData;
use crate::diagram::{crossing, kink, BoundaryObject, ColoredDiagram, Geometry, KinkSide, Piece, Sign, Strand};
use crate::report::AxiomReport;
use crate::scalars::CycNumber;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("coloring invalid: {0}")]
    InvalidColoring(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: BoundaryObject,
    pub target: BoundaryObject,
    pub value: CycNumber,
}

/// Scalar of one elementary piece.
pub fn piece_value(c: &CategoryData, p: &Piece) -> CycNumber {
    match p {
        Piece::Id(_) | Piece::CapRight(_) | Piece::CupRight(_) => c.one(),
        Piece::CapLeft(x) | Piece::CupLeft(x) => c.d(*x).clone(),
        Piece::CrossPos { x, y, psi, .. } => c.b(*x, *y) / psi,
        Piece::CrossNeg { x, out, psi, .. } => psi * c.braid_inv_1(*out, *x),
        Piece::Coupon { value, .. } => value.clone(),
    }
}

pub fn evaluate(d: &ColoredDiagram, c: &CategoryData) -> Result<Morphism, EvalError> {
    let report = crate::diagram::validate_coloring(d, c);
    if let Some(f) = report.failures.first() {
        return Err(EvalError::InvalidColoring(format!("{} at {}", f.axiom, f.instance)));
    }
    Ok(evaluate_unchecked(d, c))
}

/// Evaluation without re-validating the coloring.
pub fn evaluate_unchecked(d: &ColoredDiagram, c: &CategoryData) -> Morphism {
    let value = d.pieces().fold(c.one(), |acc, p| acc * piece_value(c, p));
    Morphism { source: d.source().clone(), target: d.target(), value }
}

fn inv_braid(c: &CategoryData, x: usize, y: usize) -> CycNumber {
    c.b(x, y).inv()
}

/// Compares the ten composite crossings and kinks with their closed forms,
/// for every label pair and a few crossing colors.
pub fn evaluate_special_forms(c: &CategoryData) -> AxiomReport {
    let n = c.root_order();
    let psis = [CycNumber::one(n), CycNumber::zeta_pow(n, 1), CycNumber::from_int(n, 2) * CycNumber::zeta_pow(n, n as i64 - 1)];
    let nl = c.num_labels();
    let g = &c.group;
    let inv = |x: usize| c.labels.inv(x);
    let ev = |d: ColoredDiagram| evaluate_unchecked(&d, c).value;
    let mut r = AxiomReport::new();
    r.par_section(nl, |x, r| {
        let gx = c.grade(x);
        for psi in &psis {
            let inst = || format!("x={},psi={}", c.labels.name(x), psi);
            let theta = c.twist(x);
            let pl = Strand::plus(x);
            r.eq("kink T+", &ev(kink(c, pl, true, KinkSide::Right, psi.clone())), &(&theta / psi), inst);
            r.eq("kink T'+", &ev(kink(c, pl, true, KinkSide::Left, psi.clone())), &(&theta / psi), inst);
            r.eq("kink T-", &ev(kink(c, pl, false, KinkSide::Right, psi.clone())), &(psi / &theta), inst);
            r.eq("kink T'-", &ev(kink(c, pl, false, KinkSide::Left, psi.clone())), &(psi / &theta), inst);
            for y in 0..nl {
                let gy = c.grade(y);
                let inst = || format!("x={},y={},psi={}", c.labels.name(x), c.labels.name(y), psi);
                let (px, mx) = (Strand::plus(x), Strand::minus(x));
                let (py, my) = (Strand::plus(y), Strand::minus(y));
                // σ+(X,Y,X'), ψ: X' → φ_{|Y|}(X)
                r.eq("crossing σ+", &ev(crossing(c, Geometry::P, px, py, psi.clone())), &(c.b(x, y) / psi), inst);
                // σ-(X,Y,Y'), ψ: Y → φ_{|X|}(Y')
                let yp = c.act(g.inv(gx), y);
                r.eq("crossing σ-", &ev(crossing(c, Geometry::N, px, py, psi.clone())), &(psi * inv_braid(c, yp, x)), inst);
                // σ'_+(X,Y,Y'), Y' = φ_{|X|}(Y), ψ: Y' → φ_{|X|}(Y)
                let yp = c.act(gx, y);
                let bar = c.psi_bar(gx, y, psi);
                r.eq("crossing σ'+", &ev(crossing(c, Geometry::N, mx, py, psi.clone())), &(bar * inv_braid(c, yp, inv(x))), inst);
                // σ'_-(X,Y,X'), X' = φ_{|Y|^{-1}}(X), ψ: X → φ_{|Y|}(X')
                let xp = c.act(g.inv(gy), x);
                let bar = c.psi_bar(gy, xp, psi);
                r.eq("crossing σ'-", &ev(crossing(c, Geometry::P, px, my, psi.clone())), &(c.b(x, inv(y)) / bar), inst);
                // σ''_+(X,Y,Y'), Y' = φ_{|X|^{-1}}(Y), ψ: Y → φ_{|X|}(Y')
                let yp = c.act(g.inv(gx), y);
                let minus = c.psi_minus(gx, yp, psi);
                r.eq("crossing σ''+", &ev(crossing(c, Geometry::N, px, my, psi.clone())), &(minus * inv_braid(c, inv(yp), x)), inst);
                // σ''_-(X,Y,X'), X' = φ_{|Y|}(X), ψ: X' → φ_{|Y|}(X)
                let minus = c.psi_minus(gy, x, psi);
                r.eq("crossing σ''-", &ev(crossing(c, Geometry::P, mx, py, psi.clone())), &(c.b(inv(x), y) / minus), inst);
                // σ'''_+(X,Y,X'), X' = φ_{|Y|^{-1}}(X), ψ: X → φ_{|Y|}(X')
                let xp = c.act(g.inv(gy), x);
                let bm = c.psi_bar(gy, inv(xp), &c.psi_minus(gy, xp, psi));
                r.eq("crossing σ'''+", &ev(crossing(c, Geometry::P, mx, my, psi.clone())), &(c.b(inv(x), inv(y)) / bm), inst);
                // σ'''_-(X,Y,Y'), Y' = φ_{|X|}(Y), ψ: Y' → φ_{|X|}(Y)
                let yp = c.act(gx, y);
                let bm = c.psi_bar(gx, inv(y), &c.psi_minus(gx, y, psi));
                r.eq("crossing σ'''-", &ev(crossing(c, Geometry::N, mx, my, psi.clone())), &(bm * inv_braid(c, inv(yp), inv(x))), inst);
            }
        }
    });
    r
}

/// The η-conjugate coloring: labels move by φ_η, crossing colors by the
/// φ_2-composite, coupons by the (φ_η)_m sandwich.
pub fn conjugate_diagram(d: &ColoredDiagram, eta: usize, c: &CategoryData) -> ColoredDiagram {
    let g = &c.group;
    let a = |x: usize| c.act(eta, x);
    let st = |s: &Strand| Strand { label: a(s.label), sign: s.sign };
    // ψ: U_{c+} → φ_β(U_{c-}) with β the over-strand grade
    let cross = |over: usize, under_in: usize, psi: &CycNumber| {
        let beta = c.grade(over);
        let beta_eta = g.conj(beta, eta);
        c.p2(eta, beta, under_in) * psi / c.p2(beta_eta, eta, under_in)
    };
    let f = |p: &Piece| -> Piece {
        match p {
            Piece::Id(s) => Piece::Id(st(s)),
            Piece::CapRight(x) => Piece::CapRight(a(*x)),
            Piece::CupRight(x) => Piece::CupRight(a(*x)),
            Piece::CapLeft(x) => Piece::CapLeft(a(*x)),
            Piece::CupLeft(x) => Piece::CupLeft(a(*x)),
            Piece::CrossPos { x, y, out, psi } => {
                Piece::CrossPos { x: a(*x), y: a(*y), out: a(*out), psi: cross(*y, *x, psi) }
            }
            Piece::CrossNeg { x, y, out, psi } => {
                Piece::CrossNeg { x: a(*x), y: a(*y), out: a(*out), psi: cross(*x, *out, psi) }
            }
            Piece::Coupon { inputs, outputs, value } => {
                let value = boundary_factor(c, eta, outputs) * value / boundary_factor(c, eta, inputs);
                Piece::Coupon { inputs: inputs.iter().map(st).collect(), outputs: outputs.iter().map(st).collect(), value }
            }
        }
    };
    d.map_pieces(&f, &st)
}

/// Π_{ε=-} φ^l_η(u) · (φ_η)_k^{-1} over a boundary object.
fn boundary_factor(c: &CategoryData, eta: usize, obj: &[Strand]) -> CycNumber {
    let labels: Vec<usize> = obj.iter().map(|s| s.object_label(c)).collect();
    let mut out = c.a_multi(eta, &labels).inv();
    for s in obj.iter().filter(|s| s.sign == Sign::Minus) {
        out = out * c.phil(eta, s.label);
    }
    out
}

/// The value F(D^η) predicted from F(D) by transporting through φ_η at
/// both boundaries.
pub fn conjugation_prediction(m: &Morphism, eta: usize, c: &CategoryData) -> CycNumber {
    boundary_factor(c, eta, &m.target) * &m.value / boundary_factor(c, eta, &m.source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::GroupTable;

    fn z2_trivial() -> CategoryData {
        CategoryData::trivial_scalars(GroupTable::cyclic(1), GroupTable::cyclic(2), vec![0, 0], 2).unwrap()
    }

    #[test]
    fn identity_evaluates_to_one() {
        let c = z2_trivial();
        let d = ColoredDiagram::new(vec![Strand::plus(1)], vec![vec![Piece::Id(Strand::plus(1))]]).unwrap();
        let m = evaluate(&d, &c).unwrap();
        assert!(m.value.is_one());
        assert_eq!(m.source, m.target);
    }

    #[test]
    fn bad_coupon_is_rejected() {
        let c = z2_trivial();
        let coupon = Piece::Coupon { inputs: vec![Strand::plus(1)], outputs: vec![Strand::plus(0)], value: c.one() };
        let d = ColoredDiagram::new(vec![Strand::plus(1)], vec![vec![coupon]]).unwrap();
        assert!(evaluate(&d, &c).is_err());
    }
}
