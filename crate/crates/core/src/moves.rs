//! Colored Reidemeister moves and stabilization on sparse diagram words.
//!
//! A site is a level `k` (the boundary between slices k-1 and k) and a strand
//! position `pos` in that level, both taken in the sparse normal form of the
//! diagram. Forward moves rewrite the left-hand pattern into the right-hand
//! one; inverse moves do the opposite.

use crate::category::CategoryData;
use crate::diagram::{
    crossing, crossing_len, crossing_outputs, kink, BoundaryObject, ColoredDiagram, DiagramError, Geometry, KinkSide, Piece, Sign,
    Strand,
};
use crate::scalars::CycNumber;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    T1a,
    T1b,
    T1c,
    T1d,
    T2a,
    T2b,
    T2c,
    T2d,
    T3,
    T4a,
    T4b,
    T4c,
    T4d,
    Stab,
}

impl MoveKind {
    pub const ALL: [MoveKind; 14] = [
        MoveKind::T1a,
        MoveKind::T1b,
        MoveKind::T1c,
        MoveKind::T1d,
        MoveKind::T2a,
        MoveKind::T2b,
        MoveKind::T2c,
        MoveKind::T2d,
        MoveKind::T3,
        MoveKind::T4a,
        MoveKind::T4b,
        MoveKind::T4c,
        MoveKind::T4d,
        MoveKind::Stab,
    ];

    /// Move type: 1 to 4, or 0 for stabilization.
    pub fn family(self) -> u8 {
        use MoveKind::*;
        match self {
            T1a | T1b | T1c | T1d => 1,
            T2a | T2b | T2c | T2d => 2,
            T3 => 3,
            T4a | T4b | T4c | T4d => 4,
            Stab => 0,
        }
    }
}

/// One move application. `free` holds the freely chosen crossing colors
/// (missing entries default to 1); `forced` optionally pins the value that
/// the side condition determines, which is then checked instead of solved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSpec {
    pub kind: MoveKind,
    pub inverse: bool,
    pub level: usize,
    pub pos: usize,
    pub free: Vec<CycNumber>,
    pub forced: Option<CycNumber>,
    /// new color C′ for the type 3 move; must equal C
    pub c_prime: Option<CycNumber>,
}

impl MoveSpec {
    pub fn new(kind: MoveKind, inverse: bool, level: usize, pos: usize) -> MoveSpec {
        MoveSpec { kind, inverse, level, pos, free: Vec::new(), forced: None, c_prime: None }
    }

    pub fn with_free(mut self, free: Vec<CycNumber>) -> MoveSpec {
        self.free = free;
        self
    }
}

fn pattern(msg: impl Into<String>) -> DiagramError {
    DiagramError::Pattern(msg.into())
}

/// Slices of `block` placed at `pos` inside `level`, in sparse form.
fn placed(block: &ColoredDiagram, level: &[Strand], pos: usize) -> Vec<Vec<Piece>> {
    let w = block.source().len();
    block.embed(&level[..pos], &level[pos + w..]).sparse().slices().to_vec()
}

struct Word {
    level: Vec<Strand>,
    slices: Vec<Vec<Piece>>,
}

impl Word {
    fn new(level: &[Strand]) -> Word {
        Word { level: level.to_vec(), slices: Vec::new() }
    }

    fn block(&mut self, b: &ColoredDiagram, pos: usize) {
        let w = b.source().len();
        debug_assert_eq!(&self.level[pos..pos + w], &b.source()[..]);
        self.slices.extend(placed(b, &self.level, pos));
        let mut next = self.level[..pos].to_vec();
        next.extend(b.target());
        next.extend_from_slice(&self.level[pos + w..]);
        self.level = next;
    }

    fn piece(&mut self, p: Piece, pos: usize) {
        let d = ColoredDiagram::new(p.source(), vec![vec![p]]).expect("piece");
        self.block(&d, pos);
    }
}

fn slices_match(d: &ColoredDiagram, k: usize, block: &[Vec<Piece>]) -> bool {
    k + block.len() <= d.num_slices() && d.slices()[k..k + block.len()] == *block
}

fn first_psi(d: &ColoredDiagram, k: usize, len: usize) -> Option<CycNumber> {
    let end = (k + len).min(d.num_slices());
    d.slices()[k..end].iter().flatten().find_map(|p| p.psi().cloned())
}

fn active(d: &ColoredDiagram, k: usize) -> Option<(usize, &Piece)> {
    d.slices().get(k).and_then(|s| ColoredDiagram::active_piece(s))
}

/// Reads a composite crossing of the given geometry at (p, p+1) starting at slice k.
fn read_crossing(
    c: &CategoryData,
    d: &ColoredDiagram,
    level: &[Strand],
    k: usize,
    p: usize,
    geom: Geometry,
) -> Option<(CycNumber, usize, Strand, Strand)> {
    if p + 1 >= level.len() {
        return None;
    }
    let (a, b) = (level[p], level[p + 1]);
    let len = crossing_len(a.sign, b.sign);
    let psi = first_psi(d, k, len)?;
    let block = crossing(c, geom, a, b, psi.clone());
    if !slices_match(d, k, &placed(&block, level, p)) {
        return None;
    }
    let (s, t) = crossing_outputs(c, geom, a, b);
    Some((psi, len, s, t))
}

fn free_at(spec: &MoveSpec, i: usize, n: u32) -> CycNumber {
    spec.free.get(i).cloned().unwrap_or_else(|| CycNumber::one(n))
}

fn t1_block(c: &CategoryData, kind: MoveKind, s: Strand, psi: &CycNumber) -> ColoredDiagram {
    let (first, side) = match kind {
        MoveKind::T1a => (true, KinkSide::Right),
        MoveKind::T1b => (false, KinkSide::Right),
        MoveKind::T1c => (true, KinkSide::Left),
        _ => (false, KinkSide::Left),
    };
    let lower = kink(c, s, first, side, psi.clone());
    let upper = kink(c, s, !first, side, psi.clone());
    ColoredDiagram::compose(&upper, &lower).expect("kinks chain")
}

fn t2_block(c: &CategoryData, kind: MoveKind, a: Strand, b: Strand, psi: &CycNumber) -> Result<ColoredDiagram, DiagramError> {
    let (sa, sb) = match kind {
        MoveKind::T2a | MoveKind::T2b => (Sign::Plus, Sign::Plus),
        MoveKind::T2c => (Sign::Minus, Sign::Plus),
        _ => (Sign::Plus, Sign::Minus),
    };
    if a.sign != sa || b.sign != sb {
        return Err(pattern("type 2 move: strand orientations do not fit"));
    }
    let (g1, g2) = if kind == MoveKind::T2b { (Geometry::P, Geometry::N) } else { (Geometry::N, Geometry::P) };
    let lower = crossing(c, g1, a, b, psi.clone());
    let (s, t) = crossing_outputs(c, g1, a, b);
    let upper = crossing(c, g2, s, t, psi.clone());
    Ok(ColoredDiagram::compose(&upper, &lower).expect("crossings chain"))
}

/// Slice range to replace and the replacement slices.
type Plan = (std::ops::Range<usize>, Vec<Vec<Piece>>);

/// Applies one move; the result is in sparse form.
pub fn apply_move(d: &ColoredDiagram, c: &CategoryData, spec: &MoveSpec) -> Result<ColoredDiagram, DiagramError> {
    let d = d.sparse();
    let levels = d.levels();
    let (range, with) = plan_move(&d, &levels, c, spec)?;
    d.splice(range, with)
}

/// Matches the move at its site in a sparse diagram.
fn plan_move(d: &ColoredDiagram, levels: &[BoundaryObject], c: &CategoryData, spec: &MoveSpec) -> Result<Plan, DiagramError> {
    let k = spec.level;
    if k >= levels.len() {
        return Err(pattern(format!("level {k} out of range")));
    }
    let level = &levels[k];
    let p = spec.pos;
    let n = c.root_order();
    use MoveKind::*;
    match (spec.kind, spec.inverse) {
        (T1a | T1b | T1c | T1d, false) => {
            let s = *level.get(p).ok_or_else(|| pattern("position out of range"))?;
            if s.sign != Sign::Plus {
                return Err(pattern("type 1 move needs a downward strand"));
            }
            let psi = free_at(spec, 0, n);
            if psi.is_zero() {
                return Err(DiagramError::ZeroScalar("crossing color".into()));
            }
            Ok((k..k, placed(&t1_block(c, spec.kind, s, &psi), level, p)))
        }
        (T1a | T1b | T1c | T1d, true) => {
            let s = *level.get(p).ok_or_else(|| pattern("position out of range"))?;
            if s.sign != Sign::Plus {
                return Err(pattern("type 1 move needs a downward strand"));
            }
            let psi = first_psi(d, k, 6).ok_or_else(|| pattern("no kink pair here"))?;
            let block = placed(&t1_block(c, spec.kind, s, &psi), level, p);
            if !slices_match(d, k, &block) {
                return Err(pattern("no kink pair here"));
            }
            Ok((k..k + block.len(), Vec::new()))
        }
        (T2a | T2b | T2c | T2d, false) => {
            if p + 1 >= level.len() {
                return Err(pattern("position out of range"));
            }
            let psi = free_at(spec, 0, n);
            if psi.is_zero() {
                return Err(DiagramError::ZeroScalar("crossing color".into()));
            }
            let b = t2_block(c, spec.kind, level[p], level[p + 1], &psi)?;
            Ok((k..k, placed(&b, level, p)))
        }
        (T2a | T2b | T2c | T2d, true) => {
            if p + 1 >= level.len() {
                return Err(pattern("position out of range"));
            }
            let psi = first_psi(d, k, 10).ok_or_else(|| pattern("no crossing pair here"))?;
            let b = placed(&t2_block(c, spec.kind, level[p], level[p + 1], &psi)?, level, p);
            if !slices_match(d, k, &b) {
                return Err(pattern("no crossing pair here"));
            }
            Ok((k..k + b.len(), Vec::new()))
        }
        (T3, inv) => apply_t3(d, levels, c, spec, inv),
        (T4a | T4b, false) => apply_t4ab_forward(d, levels, c, spec),
        (T4a | T4b, true) => apply_t4ab_inverse(d, levels, c, spec),
        (T4c | T4d, false) => apply_t4cd_forward(d, levels, c, spec),
        (T4c | T4d, true) => apply_t4cd_inverse(d, levels, c, spec),
        (Stab, false) => {
            let s = *level.get(p).ok_or_else(|| pattern("position out of range"))?;
            let coupon = Piece::Coupon { inputs: vec![s], outputs: vec![s], value: c.one() };
            let mut w = Word::new(level);
            w.piece(coupon, p);
            Ok((k..k, w.slices))
        }
        (Stab, true) => match active(d, k) {
            Some((q, Piece::Coupon { inputs, outputs, value }))
                if q == p && inputs.len() == 1 && inputs == outputs && value.is_one() =>
            {
                Ok((k..k + 1, Vec::new()))
            }
            _ => Err(pattern("no identity coupon here")),
        },
    }
}

fn cross_pos_at(d: &ColoredDiagram, k: usize, p: usize) -> Option<(usize, usize, usize, CycNumber)> {
    match active(d, k) {
        Some((q, Piece::CrossPos { x, y, out, psi })) if q == p => Some((*x, *y, *out, psi.clone())),
        _ => None,
    }
}

fn apply_t3(d: &ColoredDiagram, levels: &[BoundaryObject], c: &CategoryData, spec: &MoveSpec, inverse: bool) -> Result<Plan, DiagramError> {
    let (k, p) = (spec.level, spec.pos);
    let n = c.root_order();
    let level = &levels[k];
    let miss = || pattern("no type 3 pattern here");
    // lower/middle/upper crossings at (p, p+1), (p+1, p+2), (p, p+1) or the mirror
    let (o1, o2) = if inverse { (p + 1, p) } else { (p, p + 1) };
    let first = cross_pos_at(d, k, o1).ok_or_else(miss)?;
    let second = cross_pos_at(d, k + 1, o2).ok_or_else(miss)?;
    let third = cross_pos_at(d, k + 2, o1).ok_or_else(miss)?;
    let g = &c.group;
    let mut w = Word::new(level);
    if !inverse {
        // X crosses Y (A), X' crosses Z (B), Y crosses Z (C)
        let (x, y, _xp, a) = first;
        let (_, z, _xpp, b) = second;
        let (_, _, yp, cc) = third;
        let c2 = spec.c_prime.clone().unwrap_or_else(|| cc.clone());
        if c2 != cc {
            return Err(DiagramError::SideCondition { equation: "type 3: C′ = C".into(), lhs: c2.to_string(), rhs: cc.to_string() });
        }
        let (gy, gz, gyp) = (c.grade(y), c.grade(z), c.grade(yp));
        debug_assert_eq!(g.mul(gz, gyp), g.mul(gy, gz));
        let a2 = free_at(spec, 0, n);
        let lhs = c.p2(gz, gy, x) * &a * &b;
        let b2 = match &spec.forced {
            Some(v) => {
                let rhs = c.p2(gyp, gz, x) * &a2 * v;
                if rhs != lhs {
                    return Err(DiagramError::SideCondition { equation: "type 3 square".into(), lhs: lhs.to_string(), rhs: rhs.to_string() });
                }
                v.clone()
            }
            None => lhs / (c.p2(gyp, gz, x) * &a2),
        };
        if a2.is_zero() || b2.is_zero() {
            return Err(DiagramError::ZeroScalar("type 3 color".into()));
        }
        w.piece(Piece::cross_pos(c, y, z, c2), p + 1);
        w.piece(Piece::cross_pos(c, x, z, a2), p);
        let xt = c.act(gz, x);
        w.piece(Piece::cross_pos(c, xt, yp, b2), p + 1);
    } else {
        // right-hand side: Y crosses Z (C), X crosses Z (A'), X~ crosses Y' (B')
        let (y, z, _yp, cc) = first;
        let (x, _, _xt, a2) = second;
        let (_, yp, _, b2) = third;
        let (gy, gz, gyp) = (c.grade(y), c.grade(z), c.grade(yp));
        let a = free_at(spec, 0, n);
        let rhs = c.p2(gyp, gz, x) * &a2 * &b2;
        let b = match &spec.forced {
            Some(v) => {
                let lhs = c.p2(gz, gy, x) * &a * v;
                if lhs != rhs {
                    return Err(DiagramError::SideCondition { equation: "type 3 square".into(), lhs: lhs.to_string(), rhs: rhs.to_string() });
                }
                v.clone()
            }
            None => rhs / (c.p2(gz, gy, x) * &a),
        };
        if a.is_zero() || b.is_zero() {
            return Err(DiagramError::ZeroScalar("type 3 color".into()));
        }
        w.piece(Piece::cross_pos(c, x, y, a), p);
        let xp = c.act(gy, x);
        w.piece(Piece::cross_pos(c, xp, z, b), p + 1);
        w.piece(Piece::cross_pos(c, y, z, cc), p);
    }
    Ok((k..k + 3, w.slices))
}

/// The crossing color seen by the side condition of the Z-moves: ψ, or ψ̄ for
/// an upward Z, then the minus construction on upward legs.
/// `before` and `after` are the leg labels below and above the crossing.
fn z_leg_factor(c: &CategoryData, z: Strand, leg_sign: Sign, before: usize, after: usize, psi: &CycNumber) -> CycNumber {
    let mu = c.grade(z.label);
    let (alpha, inner, phi) = match z.sign {
        // ψ: before → φ_μ(after)
        Sign::Plus => (mu, after, psi.clone()),
        // ψ: after → φ_μ(before); its bar maps before → φ_{μ⁻¹}(after)
        Sign::Minus => (c.group.inv(mu), after, c.psi_bar(mu, before, psi)),
    };
    match leg_sign {
        Sign::Plus => phi,
        Sign::Minus => c.psi_minus(alpha, inner, &phi),
    }
}

fn z_grade(c: &CategoryData, z: Strand) -> usize {
    match z.sign {
        Sign::Plus => c.grade(z.label),
        Sign::Minus => c.group.inv(c.grade(z.label)),
    }
}

fn object_labels(c: &CategoryData, legs: &[Strand]) -> Vec<usize> {
    legs.iter().map(|s| s.object_label(c)).collect()
}

/// Z crossing a run of legs from the left, N geometry; returns the new legs.
fn z_sweep(c: &CategoryData, w: &mut Word, z: Strand, p: usize, legs: &[Strand], psis: &[CycNumber]) -> Vec<Strand> {
    let mut out = Vec::new();
    for (i, leg) in legs.iter().enumerate() {
        w.block(&crossing(c, Geometry::N, z, *leg, psis[i].clone()), p + i);
        out.push(crossing_outputs(c, Geometry::N, z, *leg).0);
    }
    out
}

fn apply_t4ab_forward(d: &ColoredDiagram, levels: &[BoundaryObject], c: &CategoryData, spec: &MoveSpec) -> Result<Plan, DiagramError> {
    let (k, p) = (spec.level, spec.pos);
    let n = c.root_order();
    let level = &levels[k];
    let zsign = if spec.kind == MoveKind::T4a { Sign::Plus } else { Sign::Minus };
    let z = *level.get(p).ok_or_else(|| pattern("position out of range"))?;
    if z.sign != zsign {
        return Err(pattern("Z strand has the wrong orientation"));
    }
    let (inputs, outputs_before, v0) = match active(d, k) {
        Some((q, Piece::Coupon { inputs, outputs, value })) if q == p + 1 => (inputs.clone(), outputs.clone(), value.clone()),
        _ => return Err(pattern("no coupon right of Z")),
    };
    // Z crosses the exits one by one
    let mut cursor = k + 1;
    let mut exit_psis = Vec::new();
    let mut outputs_after = Vec::new();
    for j in 0..outputs_before.len() {
        let lv = &levels[cursor];
        let (psi, len, s, _) = read_crossing(c, d, lv, cursor, p + j, Geometry::N).ok_or_else(|| pattern("Z does not cross every exit"))?;
        exit_psis.push(psi);
        outputs_after.push(s);
        cursor += len;
    }
    let input_psis: Vec<CycNumber> = (0..inputs.len()).map(|i| free_at(spec, i, n)).collect();
    if input_psis.iter().any(|x| x.is_zero()) {
        return Err(DiagramError::ZeroScalar("crossing color".into()));
    }
    let mut w = Word::new(level);
    let inputs_after = z_sweep(c, &mut w, z, p, &inputs, &input_psis);
    let (lhs, rhs_factor) = t4ab_factors(c, z, &inputs, &inputs_after, &input_psis, &outputs_before, &outputs_after, &exit_psis);
    let v1 = match &spec.forced {
        Some(v) => {
            let l = &lhs * &v0;
            let r = v * &rhs_factor;
            if l != r {
                return Err(DiagramError::SideCondition { equation: "type 4 coupon square".into(), lhs: r.to_string(), rhs: l.to_string() });
            }
            v.clone()
        }
        None => lhs * &v0 / rhs_factor,
    };
    w.piece(Piece::Coupon { inputs: inputs_after, outputs: outputs_after, value: v1 }, p);
    Ok((k..cursor, w.slices))
}

/// (A_n Π(ψ^j)^ε, A_m Π ψ_i^ε) so that v1 · second = first · v0.
#[allow(clippy::too_many_arguments)]
fn t4ab_factors(
    c: &CategoryData,
    z: Strand,
    inputs: &[Strand],
    inputs_after: &[Strand],
    input_psis: &[CycNumber],
    outputs_before: &[Strand],
    outputs_after: &[Strand],
    exit_psis: &[CycNumber],
) -> (CycNumber, CycNumber) {
    let mu = z_grade(c, z);
    let mut right = c.a_multi(mu, &object_labels(c, inputs_after));
    for i in 0..inputs.len() {
        right = right * z_leg_factor(c, z, inputs[i].sign, inputs[i].label, inputs_after[i].label, &input_psis[i]);
    }
    let mut left = c.a_multi(mu, &object_labels(c, outputs_after));
    for j in 0..outputs_before.len() {
        left = left * z_leg_factor(c, z, outputs_before[j].sign, outputs_before[j].label, outputs_after[j].label, &exit_psis[j]);
    }
    (left, right)
}

fn apply_t4ab_inverse(d: &ColoredDiagram, levels: &[BoundaryObject], c: &CategoryData, spec: &MoveSpec) -> Result<Plan, DiagramError> {
    let (k, p) = (spec.level, spec.pos);
    let n = c.root_order();
    let level = &levels[k];
    let zsign = if spec.kind == MoveKind::T4a { Sign::Plus } else { Sign::Minus };
    let z = *level.get(p).ok_or_else(|| pattern("position out of range"))?;
    if z.sign != zsign {
        return Err(pattern("Z strand has the wrong orientation"));
    }
    let mut cursor = k;
    let mut input_psis = Vec::new();
    let mut inputs_after = Vec::new();
    let (outputs_after, v1) = loop {
        let lv = &levels[cursor];
        let i = input_psis.len();
        if let Some((q, Piece::Coupon { inputs, outputs, value })) = active(d, cursor) {
            if q == p && inputs.len() == i && lv.get(p + i) == Some(&z) {
                break (outputs.clone(), value.clone());
            }
        }
        if lv.get(p + i) != Some(&z) {
            return Err(pattern("no type 4 pattern here"));
        }
        let (psi, len, s, _) = read_crossing(c, d, lv, cursor, p + i, Geometry::N).ok_or_else(|| pattern("no type 4 pattern here"))?;
        input_psis.push(psi);
        inputs_after.push(s);
        cursor += len;
    };
    let inputs = level[p + 1..p + 1 + input_psis.len()].to_vec();
    // exits before Z crosses them
    let back = if z.sign == Sign::Plus { c.grade(z.label) } else { c.group.inv(c.grade(z.label)) };
    let outputs_before: Vec<Strand> = outputs_after.iter().map(|s| Strand { label: c.act(back, s.label), sign: s.sign }).collect();
    let exit_psis: Vec<CycNumber> = (0..outputs_before.len()).map(|j| free_at(spec, j, n)).collect();
    if exit_psis.iter().any(|x| x.is_zero()) {
        return Err(DiagramError::ZeroScalar("crossing color".into()));
    }
    let (left, right) = t4ab_factors(c, z, &inputs, &inputs_after, &input_psis, &outputs_before, &outputs_after, &exit_psis);
    let v0 = match &spec.forced {
        Some(v) => {
            let l = &left * v;
            let r = &v1 * &right;
            if l != r {
                return Err(DiagramError::SideCondition { equation: "type 4 coupon square".into(), lhs: r.to_string(), rhs: l.to_string() });
            }
            v.clone()
        }
        None => &v1 * &right / left,
    };
    let mut w = Word::new(level);
    w.piece(Piece::Coupon { inputs, outputs: outputs_before.clone(), value: v0 }, p + 1);
    let after = z_sweep(c, &mut w, z, p, &outputs_before, &exit_psis);
    debug_assert_eq!(after, outputs_after);
    Ok((k..cursor + 1, w.slices))
}

/// Branch-side composite: Πξ · iterated φ_2, with ξ = ψ or ψ̄ by leg sign.
/// `legs` are the over strands crossed in order, `labels[j]` the branch
/// label before crossing j (length legs+1).
fn branch_composite(c: &CategoryData, legs: &[Strand], labels: &[usize], psis: &[CycNumber]) -> CycNumber {
    let g = &c.group;
    let x0 = labels[0];
    let mut acc = c.p0(x0).clone();
    let mut prefix = g.unit();
    for (j, leg) in legs.iter().enumerate() {
        let o = leg.object_grade(c);
        acc = acc * c.p2(o, prefix, x0) * branch_xi(c, *leg, labels[j + 1], &psis[j]);
        prefix = g.mul(prefix, o);
    }
    acc
}

fn branch_xi(c: &CategoryData, leg: Strand, after: usize, psi: &CycNumber) -> CycNumber {
    match leg.sign {
        Sign::Plus => psi.clone(),
        Sign::Minus => c.psi_bar(c.grade(leg.label), after, psi),
    }
}

/// ψ recovered from a prescribed ξ.
fn branch_psi(c: &CategoryData, leg: Strand, before: usize, xi: &CycNumber) -> CycNumber {
    match leg.sign {
        Sign::Plus => xi.clone(),
        Sign::Minus => c.psi_bar(c.group.inv(c.grade(leg.label)), before, xi),
    }
}

fn branch_labels(c: &CategoryData, b: Strand, legs: &[Strand]) -> Vec<usize> {
    let mut out = vec![b.label];
    let mut cur = b;
    for leg in legs {
        cur = crossing_outputs(c, Geometry::P, cur, *leg).1;
        out.push(cur.label);
    }
    out
}

/// Solves the last crossing color so the branch composite equals `target`.
fn solve_branch(
    c: &CategoryData,
    spec: &MoveSpec,
    legs: &[Strand],
    labels: &[usize],
    target: &CycNumber,
) -> Result<Vec<CycNumber>, DiagramError> {
    let n = c.root_order();
    let m = legs.len();
    let mut psis: Vec<CycNumber> = (0..m).map(|i| free_at(spec, i, n)).collect();
    if m == 0 {
        let got = c.p0(labels[0]).clone();
        if &got != target {
            return Err(DiagramError::SideCondition { equation: "type 4 branch compositions".into(), lhs: got.to_string(), rhs: target.to_string() });
        }
        return Ok(psis);
    }
    psis[m - 1] = c.one();
    let base = branch_composite(c, legs, labels, &psis) / branch_xi(c, legs[m - 1], labels[m], &psis[m - 1]);
    let xi = target / base;
    let solved = branch_psi(c, legs[m - 1], labels[m - 1], &xi);
    match &spec.forced {
        Some(v) if *v != solved => {
            psis[m - 1] = v.clone();
            let got = branch_composite(c, legs, labels, &psis);
            return Err(DiagramError::SideCondition { equation: "type 4 branch compositions".into(), lhs: got.to_string(), rhs: target.to_string() });
        }
        _ => psis[m - 1] = solved,
    }
    if psis.iter().any(|x| x.is_zero()) {
        return Err(DiagramError::ZeroScalar("crossing color".into()));
    }
    Ok(psis)
}

fn branch_sweep(c: &CategoryData, w: &mut Word, b: Strand, p: usize, legs: &[Strand], psis: &[CycNumber]) -> Strand {
    let mut cur = b;
    for (i, leg) in legs.iter().enumerate() {
        w.block(&crossing(c, Geometry::P, cur, *leg, psis[i].clone()), p + i);
        cur = crossing_outputs(c, Geometry::P, cur, *leg).1;
    }
    cur
}

fn branch_sign(kind: MoveKind) -> Sign {
    if kind == MoveKind::T4c {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn apply_t4cd_forward(d: &ColoredDiagram, levels: &[BoundaryObject], c: &CategoryData, spec: &MoveSpec) -> Result<Plan, DiagramError> {
    let (k, p) = (spec.level, spec.pos);
    let level = &levels[k];
    let b = *level.get(p).ok_or_else(|| pattern("position out of range"))?;
    if b.sign != branch_sign(spec.kind) {
        return Err(pattern("branch has the wrong orientation"));
    }
    let (inputs, outputs, v) = match active(d, k) {
        Some((q, Piece::Coupon { inputs, outputs, value })) if q == p + 1 => (inputs.clone(), outputs.clone(), value.clone()),
        _ => return Err(pattern("no coupon right of the branch")),
    };
    let mut cursor = k + 1;
    let mut exit_psis = Vec::new();
    for j in 0..outputs.len() {
        let lv = &levels[cursor];
        let (psi, len, _, _) = read_crossing(c, d, lv, cursor, p + j, Geometry::P).ok_or_else(|| pattern("branch does not cross every exit"))?;
        exit_psis.push(psi);
        cursor += len;
    }
    let exit_labels = branch_labels(c, b, &outputs);
    let target = branch_composite(c, &outputs, &exit_labels, &exit_psis);
    let in_labels = branch_labels(c, b, &inputs);
    let psis = solve_branch(c, spec, &inputs, &in_labels, &target)?;
    let mut w = Word::new(level);
    let end = branch_sweep(c, &mut w, b, p, &inputs, &psis);
    debug_assert_eq!(end.label, *exit_labels.last().unwrap());
    w.piece(Piece::Coupon { inputs, outputs, value: v }, p);
    Ok((k..cursor, w.slices))
}

fn apply_t4cd_inverse(d: &ColoredDiagram, levels: &[BoundaryObject], c: &CategoryData, spec: &MoveSpec) -> Result<Plan, DiagramError> {
    let (k, p) = (spec.level, spec.pos);
    let level = &levels[k];
    let b = *level.get(p).ok_or_else(|| pattern("position out of range"))?;
    if b.sign != branch_sign(spec.kind) {
        return Err(pattern("branch has the wrong orientation"));
    }
    let mut cursor = k;
    let mut input_psis = Vec::new();
    let mut cur = b;
    let (outputs, v) = loop {
        let lv = &levels[cursor];
        let i = input_psis.len();
        if let Some((q, Piece::Coupon { inputs, outputs, value })) = active(d, cursor) {
            if q == p && inputs.len() == i && lv.get(p + i) == Some(&cur) {
                break (outputs.clone(), value.clone());
            }
        }
        if lv.get(p + i) != Some(&cur) {
            return Err(pattern("no type 4 pattern here"));
        }
        let (psi, len, _, t) = read_crossing(c, d, lv, cursor, p + i, Geometry::P).ok_or_else(|| pattern("no type 4 pattern here"))?;
        input_psis.push(psi);
        cur = t;
        cursor += len;
    };
    let inputs = level[p + 1..p + 1 + input_psis.len()].to_vec();
    let in_labels = branch_labels(c, b, &inputs);
    let target = branch_composite(c, &inputs, &in_labels, &input_psis);
    let exit_labels = branch_labels(c, b, &outputs);
    let psis = solve_branch(c, spec, &outputs, &exit_labels, &target)?;
    let mut w = Word::new(level);
    w.piece(Piece::Coupon { inputs, outputs: outputs.clone(), value: v }, p + 1);
    branch_sweep(c, &mut w, b, p, &outputs, &psis);
    Ok((k..cursor + 1, w.slices))
}

// ---------------------------------------------------------------- fuzzing

/// A random nonzero crossing or coupon color: mostly roots of unity.
pub fn random_color(c: &CategoryData, rng: &mut impl Rng) -> CycNumber {
    let n = c.root_order();
    let z = CycNumber::zeta_pow(n, rng.gen_range(0..n.max(1) as i64));
    match rng.gen_range(0..6) {
        0 => z * CycNumber::from_int(n, 2),
        1 => z / CycNumber::from_int(n, 3),
        _ => z,
    }
}

fn random_strand(c: &CategoryData, rng: &mut impl Rng, plus_bias: f64) -> Strand {
    let label = rng.gen_range(0..c.num_labels());
    if rng.gen_bool(plus_bias) {
        Strand::plus(label)
    } else {
        Strand::minus(label)
    }
}

/// Random legs whose object-label product is `target`.
fn random_legs(c: &CategoryData, rng: &mut impl Rng, count: usize, target: usize) -> Vec<Strand> {
    let mut legs: Vec<Strand> = (0..count.saturating_sub(1)).map(|_| random_strand(c, rng, 0.7)).collect();
    let prod = c.labels.product(legs.iter().map(|s| s.object_label(c)));
    let last_obj = c.labels.mul(c.labels.inv(prod), target);
    if rng.gen_bool(0.7) {
        legs.push(Strand::plus(last_obj));
    } else {
        legs.push(Strand::minus(c.labels.inv(last_obj)));
    }
    legs
}

/// A random well-colored open diagram built from crossings, kinks, coupons,
/// cups, caps and type 3 / type 4 patterns.
pub fn random_diagram(c: &CategoryData, seed: u64, blocks: usize) -> ColoredDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = rng.gen_range(2..=4);
    let source: Vec<Strand> = (0..width).map(|_| random_strand(c, &mut rng, 0.75)).collect();
    let mut w = Word::new(&source);
    for _ in 0..blocks {
        let len = w.level.len();
        match rng.gen_range(0..8) {
            0 | 1 if len >= 2 => {
                let p = rng.gen_range(0..len - 1);
                let geom = if rng.gen_bool(0.5) { Geometry::P } else { Geometry::N };
                let psi = random_color(c, &mut rng);
                let (a, b) = (w.level[p], w.level[p + 1]);
                w.block(&crossing(c, geom, a, b, psi), p);
            }
            2 if len >= 1 => {
                let p = rng.gen_range(0..len);
                let s = w.level[p];
                let side = if rng.gen_bool(0.5) { KinkSide::Left } else { KinkSide::Right };
                let psi = random_color(c, &mut rng);
                w.block(&kink(c, s, rng.gen_bool(0.5), side, psi), p);
            }
            3 => {
                let m = rng.gen_range(0..=2.min(len));
                let p = rng.gen_range(0..=len - m);
                let inputs = w.level[p..p + m].to_vec();
                let obj = c.labels.product(inputs.iter().map(|s| s.object_label(c)));
                let nout = if len - m + 3 > 6 { rng.gen_range(1..=2) } else { rng.gen_range(1..=3) };
                let outputs = random_legs(c, &mut rng, nout, obj);
                let value = random_color(c, &mut rng);
                w.piece(Piece::Coupon { inputs, outputs, value }, p);
            }
            4 if len <= 5 => {
                let p = rng.gen_range(0..=len);
                let x = rng.gen_range(0..c.num_labels());
                let cup = if rng.gen_bool(0.5) { Piece::CupRight(x) } else { Piece::CupLeft(x) };
                w.piece(cup, p);
            }
            5 if len >= 2 => {
                let caps: Vec<(usize, Piece)> = (0..len - 1)
                    .filter_map(|p| {
                        let (a, b) = (w.level[p], w.level[p + 1]);
                        if a.label != b.label || a.sign == b.sign {
                            None
                        } else if a.sign == Sign::Minus {
                            Some((p, Piece::CapRight(a.label)))
                        } else {
                            Some((p, Piece::CapLeft(a.label)))
                        }
                    })
                    .collect();
                if let Some((p, cap)) = caps.choose(&mut rng).cloned() {
                    w.piece(cap, p);
                }
            }
            6 if len >= 3 => {
                // three downward strands crossing as on the left of the type 3 move
                let p = rng.gen_range(0..len - 2);
                if w.level[p..p + 3].iter().all(|s| s.sign == Sign::Plus) {
                    for &q in &[p, p + 1, p] {
                        let (x, y) = (w.level[q].label, w.level[q + 1].label);
                        let psi = random_color(c, &mut rng);
                        w.piece(Piece::cross_pos(c, x, y, psi), q);
                    }
                }
            }
            7 if (1..=4).contains(&len) => {
                // a coupon followed by a strand sweeping across its exits
                let p = rng.gen_range(0..len);
                let m = rng.gen_range(0..=2.min(len - p - 1));
                let inputs = w.level[p + 1..p + 1 + m].to_vec();
                let obj = c.labels.product(inputs.iter().map(|s| s.object_label(c)));
                let nout = rng.gen_range(1..=2);
                let outputs = random_legs(c, &mut rng, nout, obj);
                let value = random_color(c, &mut rng);
                w.piece(Piece::Coupon { inputs, outputs: outputs.clone(), value }, p + 1);
                let geom = if rng.gen_bool(0.5) { Geometry::P } else { Geometry::N };
                for j in 0..outputs.len() {
                    let (a, b) = (w.level[p + j], w.level[p + j + 1]);
                    let psi = random_color(c, &mut rng);
                    w.block(&crossing(c, geom, a, b, psi), p + j);
                }
            }
            _ => {}
        }
    }
    ColoredDiagram::new(source, w.slices).expect("random diagram is well typed")
}

/// Cheap filter on the first slice of a pattern.
fn worth_trying(d: &ColoredDiagram, k: usize, kind: MoveKind, inverse: bool) -> bool {
    let Some((_, piece)) = active(d, k) else { return false };
    match (kind.family(), inverse) {
        (1, true) => matches!(piece, Piece::CupRight(_) | Piece::CupLeft(_)),
        (2, true) => matches!(piece, Piece::CupRight(_) | Piece::CupLeft(_)) || piece.is_crossing(),
        (3, _) => matches!(piece, Piece::CrossPos { .. }),
        (4, false) | (0, true) => matches!(piece, Piece::Coupon { .. }),
        (4, true) => !matches!(piece, Piece::CapRight(_) | Piece::CapLeft(_)),
        _ => true,
    }
}

/// Every site where `kind` applies in the given direction.
pub fn move_sites(d: &ColoredDiagram, c: &CategoryData, kind: MoveKind, inverse: bool) -> Vec<(usize, usize)> {
    let d = d.sparse();
    let levels = d.levels();
    let mut out = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        for p in 0..level.len() {
            let cheap = match (kind.family(), inverse) {
                (1, false) => Some(level[p].sign == Sign::Plus),
                (2, false) => Some(
                    p + 1 < level.len()
                        && match kind {
                            MoveKind::T2a | MoveKind::T2b => level[p].sign == Sign::Plus && level[p + 1].sign == Sign::Plus,
                            MoveKind::T2c => level[p].sign == Sign::Minus && level[p + 1].sign == Sign::Plus,
                            _ => level[p].sign == Sign::Plus && level[p + 1].sign == Sign::Minus,
                        },
                ),
                (0, false) => Some(true),
                _ => None,
            };
            let ok = match cheap {
                Some(v) => v,
                None => {
                    k < d.num_slices()
                        && worth_trying(&d, k, kind, inverse)
                        && plan_move(&d, &levels, c, &MoveSpec::new(kind, inverse, k, p)).is_ok()
                }
            };
            if ok {
                out.push((k, p));
            }
        }
    }
    out
}

/// Applies `steps` random legal moves. The returned log lists every applied
/// move in order; the walk is deterministic per seed.
pub fn random_move_fuzz(d: &ColoredDiagram, c: &CategoryData, seed: u64, steps: usize) -> (ColoredDiagram, Vec<MoveSpec>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.sparse();
    let mut log = Vec::new();
    let mut attempts = 0;
    while log.len() < steps && attempts < steps * 20 {
        attempts += 1;
        let kind = *MoveKind::ALL.choose(&mut rng).unwrap();
        // grow while small, shrink while large
        let big = cur.num_slices() > 60;
        let inverse = if big { rng.gen_bool(0.8) } else { rng.gen_bool(0.35) };
        let sites = move_sites(&cur, c, kind, inverse);
        let Some(&(k, p)) = sites.choose(&mut rng) else { continue };
        let nfree = 4;
        let free: Vec<CycNumber> = (0..nfree).map(|_| random_color(c, &mut rng)).collect();
        let spec = MoveSpec::new(kind, inverse, k, p).with_free(free);
        if let Ok(next) = apply_move(&cur, c, &spec) {
            cur = next;
            log.push(spec);
        }
    }
    (cur, log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::GroupTable;

    fn trivial() -> CategoryData {
        CategoryData::trivial_scalars(GroupTable::cyclic(1), GroupTable::cyclic(1), vec![0], 1).unwrap()
    }

    #[test]
    fn zero_steps_is_identity() {
        let c = trivial();
        let d = random_diagram(&c, 3, 5);
        let (e, log) = random_move_fuzz(&d, &c, 9, 0);
        assert!(log.is_empty());
        assert_eq!(e, d.sparse());
    }

    #[test]
    fn type3_rejects_a_different_c() {
        let c = trivial();
        let s = Strand::plus(0);
        let one = c.one();
        let slices = vec![
            vec![Piece::cross_pos(&c, 0, 0, one.clone()), Piece::Id(s)],
            vec![Piece::Id(s), Piece::cross_pos(&c, 0, 0, one.clone())],
            vec![Piece::cross_pos(&c, 0, 0, one.clone()), Piece::Id(s)],
        ];
        let d = ColoredDiagram::new(vec![s, s, s], slices).unwrap();
        let mut spec = MoveSpec::new(MoveKind::T3, false, 0, 0);
        spec.c_prime = Some(CycNumber::from_int(1, 2));
        assert!(matches!(apply_move(&d, &c, &spec), Err(DiagramError::SideCondition { .. })));
        spec.c_prime = None;
        let e = apply_move(&d, &c, &spec).unwrap();
        let back = apply_move(&e, &c, &MoveSpec::new(MoveKind::T3, true, 0, 0).with_free(vec![one])).unwrap();
        assert_eq!(back, d);
    }
}
