//! Kirby calculus on G-link presentations: the first move, the negative
//! Fenn-Rourke move, orientation reversal and a few isotopies, together with
//! random closed-braid presentations and a fuzz driver checking that τ does
//! not change.

use crate::category::CategoryData;
use crate::diagram::{Geometry, Sign};
use crate::scalars::CycNumber;
use crate::surgery::{
    check_flat_structure, tau, tau_at, wirtinger_output, GLinkPresentation, LinkPiece, LinkStrand, SurgeryError,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Builds a link one piece at a time; every slice holds a single non-identity piece.
#[derive(Debug, Clone)]
pub struct LinkBuilder<'a> {
    c: &'a CategoryData,
    levels: Vec<Vec<LinkStrand>>,
    slices: Vec<Vec<LinkPiece>>,
}

fn label_g(c: &CategoryData, obj: usize, sign: Sign) -> usize {
    match sign {
        Sign::Plus => obj,
        Sign::Minus => c.group.inv(obj),
    }
}

impl<'a> LinkBuilder<'a> {
    pub fn new(c: &'a CategoryData) -> LinkBuilder<'a> {
        LinkBuilder::starting_at(c, vec![])
    }

    /// A tangle whose bottom is `level`.
    pub fn starting_at(c: &'a CategoryData, level: Vec<LinkStrand>) -> LinkBuilder<'a> {
        LinkBuilder { c, levels: vec![level], slices: vec![] }
    }

    pub fn top(&self) -> &[LinkStrand] {
        self.levels.last().expect("at least one level")
    }

    fn push(&mut self, pos: usize, piece: LinkPiece, consumed: usize, new: Vec<LinkStrand>) -> Result<(), SurgeryError> {
        let top = self.top().to_vec();
        if pos + consumed > top.len() {
            return Err(SurgeryError::IllegalSite(format!("position {pos} past a level of {}", top.len())));
        }
        let mut slice = vec![LinkPiece::Id; pos];
        slice.push(piece);
        slice.extend(std::iter::repeat_n(LinkPiece::Id, top.len() - pos - consumed));
        let mut level = top[..pos].to_vec();
        level.extend(new);
        level.extend_from_slice(&top[pos + consumed..]);
        self.slices.push(slice);
        self.levels.push(level);
        Ok(())
    }

    /// CupR gives (+, −), CupL gives (−, +).
    pub fn cup(&mut self, pos: usize, right: bool, comp: usize, g: usize) -> Result<&mut Self, SurgeryError> {
        let (first, piece) = if right { (Sign::Plus, LinkPiece::CupR) } else { (Sign::Minus, LinkPiece::CupL) };
        let s = |sign| LinkStrand { comp, g, sign };
        self.push(pos, piece, 0, vec![s(first), s(first.flip())])?;
        Ok(self)
    }

    pub fn cap(&mut self, pos: usize) -> Result<&mut Self, SurgeryError> {
        let top = self.top();
        let (a, b) = match (top.get(pos), top.get(pos + 1)) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return Err(SurgeryError::IllegalSite(format!("no strand pair at {pos}"))),
        };
        if a.comp != b.comp || a.g != b.g || a.sign == b.sign {
            return Err(SurgeryError::IllegalSite(format!("cap at {pos} joins different arcs")));
        }
        let piece = if a.sign == Sign::Plus { LinkPiece::CapL } else { LinkPiece::CapR };
        self.push(pos, piece, 2, vec![])?;
        Ok(self)
    }

    pub fn cross(&mut self, pos: usize, geom: Geometry) -> Result<&mut Self, SurgeryError> {
        let top = self.top();
        let (a, b) = match (top.get(pos), top.get(pos + 1)) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return Err(SurgeryError::IllegalSite(format!("no strand pair at {pos}"))),
        };
        let out = wirtinger_output(self.c, geom, &a, &b);
        let new = match geom {
            Geometry::P => vec![b, LinkStrand { g: label_g(self.c, out, a.sign), ..a }],
            Geometry::N => vec![LinkStrand { g: label_g(self.c, out, b.sign), ..b }, a],
        };
        self.push(pos, LinkPiece::Cross(geom), 2, new)?;
        Ok(self)
    }

    /// A curl to the right of the strand at `pos`, writhe +1 or −1.
    pub fn kink(&mut self, pos: usize, positive: bool) -> Result<&mut Self, SurgeryError> {
        let s = *self.top().get(pos).ok_or_else(|| SurgeryError::IllegalSite(format!("no strand at {pos}")))?;
        self.cup(pos + 1, s.sign == Sign::Plus, s.comp, s.g)?;
        self.cross(pos, if positive { Geometry::P } else { Geometry::N })?;
        self.cap(pos + 1)?;
        Ok(self)
    }

    pub fn finish(self) -> Result<GLinkPresentation, SurgeryError> {
        GLinkPresentation::new(self.levels, self.slices)
    }

    fn into_parts(self) -> (Vec<Vec<LinkStrand>>, Vec<Vec<LinkPiece>>) {
        (self.levels, self.slices)
    }
}

/// Inserts the tangle built by `f` at level `k`; the tangle must end where it began.
fn insert_tangle<F>(link: &GLinkPresentation, k: usize, c: &CategoryData, f: F) -> Result<GLinkPresentation, SurgeryError>
where
    F: FnOnce(&mut LinkBuilder) -> Result<(), SurgeryError>,
{
    let levels = link.levels();
    if k >= levels.len() {
        return Err(SurgeryError::IllegalSite(format!("level {k}")));
    }
    let mut b = LinkBuilder::starting_at(c, levels[k].clone());
    f(&mut b)?;
    if b.top() != levels[k].as_slice() {
        return Err(SurgeryError::IllegalSite(format!("tangle at level {k} does not close up")));
    }
    let (tl, ts) = b.into_parts();
    let mut new_levels = levels[..=k].to_vec();
    new_levels.extend(tl.into_iter().skip(1));
    new_levels.extend_from_slice(&levels[k + 1..]);
    let mut new_slices = link.slices()[..k].to_vec();
    new_slices.extend(ts);
    new_slices.extend_from_slice(&link.slices()[k..]);
    GLinkPresentation::new(new_levels, new_slices)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KirbyMove {
    /// Adds a split unknot with framing ±1 at (level, pos).
    First { level: usize, pos: usize, positive: bool },
    /// A −1-framed unknot colored `g` around the strands pos..pos+m, with the
    /// compensating full twist and curls.
    FennRourke { level: usize, pos: usize, m: usize, g: usize },
    Reverse { comp: usize },
    /// Two crossings that cancel, the first of geometry `first`.
    Reidemeister2 { level: usize, pos: usize, first: Geometry },
    /// A positive and a negative curl on the same strand.
    CurlPair { level: usize, pos: usize, positive_first: bool },
}

impl KirbyMove {
    pub fn kind(&self) -> &'static str {
        match self {
            KirbyMove::First { .. } => "first",
            KirbyMove::FennRourke { .. } => "fenn-rourke",
            KirbyMove::Reverse { .. } => "reverse",
            KirbyMove::Reidemeister2 { .. } => "reidemeister2",
            KirbyMove::CurlPair { .. } => "curl-pair",
        }
    }
}

pub fn apply_kirby(link: &GLinkPresentation, mv: KirbyMove, c: &CategoryData) -> Result<GLinkPresentation, SurgeryError> {
    let n = link.num_components();
    let unit = c.group.unit();
    let out = match mv {
        KirbyMove::First { level, pos, positive } => insert_tangle(link, level, c, |b| {
            b.cup(pos, true, n, unit)?.kink(pos, positive)?.cap(pos)?;
            Ok(())
        })?,
        KirbyMove::FennRourke { level, pos, m, g } => {
            if m == 0 {
                return Err(SurgeryError::IllegalSite("empty bundle".into()));
            }
            insert_tangle(link, level, c, |b| {
                b.cup(pos, true, n, g)?;
                for i in 0..m {
                    b.cross(pos + 1 + i, Geometry::N)?;
                }
                for i in 0..m {
                    b.cross(pos + i, Geometry::P)?;
                }
                b.kink(pos + m, false)?.cap(pos + m)?;
                for _ in 0..m {
                    for i in 0..m - 1 {
                        b.cross(pos + i, Geometry::N)?;
                    }
                }
                for i in 0..m {
                    b.kink(pos + i, false)?;
                }
                Ok(())
            })?
        }
        KirbyMove::Reverse { comp } => {
            if comp >= n {
                return Err(SurgeryError::IllegalSite(format!("component {comp}")));
            }
            link.reverse(comp, c)
        }
        KirbyMove::Reidemeister2 { level, pos, first } => insert_tangle(link, level, c, |b| {
            let second = match first {
                Geometry::P => Geometry::N,
                Geometry::N => Geometry::P,
            };
            b.cross(pos, first)?.cross(pos, second)?;
            Ok(())
        })?,
        KirbyMove::CurlPair { level, pos, positive_first } => insert_tangle(link, level, c, |b| {
            b.kink(pos, positive_first)?.kink(pos, !positive_first)?;
            Ok(())
        })?,
    };
    let report = check_flat_structure(&out, c);
    match report.failures.first() {
        None => Ok(out),
        Some(f) => Err(SurgeryError::NotSpecial(format!("{} at {}", f.axiom, f.instance))),
    }
}

/// Fenn-Rourke moves around the bundle at (level, pos, m) for every color of
/// the new unknot that keeps the structure flat.
pub fn fenn_rourke_options(link: &GLinkPresentation, level: usize, pos: usize, m: usize, c: &CategoryData) -> Vec<KirbyMove> {
    (0..c.group.len())
        .map(|g| KirbyMove::FennRourke { level, pos, m, g })
        .filter(|mv| apply_kirby(link, *mv, c).is_ok())
        .collect()
}

/// Closed braid on `width` strands; each word letter is a crossing
/// (position, geometry) or a curl (position, sign).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BraidLetter {
    Cross(usize, Geometry),
    Curl(usize, bool),
}

/// Closure of a braid word with arc colors `g` at the bottom of each strand.
pub fn braid_closure(width: usize, word: &[BraidLetter], g: &[usize], c: &CategoryData) -> Result<GLinkPresentation, SurgeryError> {
    // strand permutation, to number components
    let mut perm: Vec<usize> = (0..width).collect();
    for l in word {
        if let BraidLetter::Cross(i, _) = l {
            perm.swap(*i, *i + 1);
        }
    }
    // perm[j] = input strand arriving at output j; cycles give components
    let mut comp = vec![usize::MAX; width];
    let mut next = 0;
    for s in 0..width {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut j = s;
        while comp[j] == usize::MAX {
            comp[j] = next;
            j = perm.iter().position(|&x| x == j).expect("permutation");
        }
        next += 1;
    }
    let mut b = LinkBuilder::new(c);
    for i in 0..width {
        b.cup(i, true, comp[i], g[i])?;
    }
    for l in word {
        match *l {
            BraidLetter::Cross(i, geom) => b.cross(i, geom)?,
            BraidLetter::Curl(i, positive) => b.kink(i, positive)?,
        };
    }
    for i in (0..width).rev() {
        b.cap(i)?;
    }
    b.finish()
}

/// A random special presentation with at most `max_width` braid strands.
pub fn random_presentation(c: &CategoryData, rng: &mut ChaCha8Rng, max_width: usize, max_word: usize) -> GLinkPresentation {
    let width = rng.gen_range(1..=max_width.max(1));
    let len = rng.gen_range(0..=max_word);
    let word: Vec<BraidLetter> = (0..len)
        .map(|_| {
            if width > 1 && rng.gen_bool(0.7) {
                let geom = if rng.gen_bool(0.5) { Geometry::P } else { Geometry::N };
                BraidLetter::Cross(rng.gen_range(0..width - 1), geom)
            } else {
                BraidLetter::Curl(rng.gen_range(0..width), rng.gen_bool(0.5))
            }
        })
        .collect();
    let order = c.group.len();
    let mut link = None;
    for _ in 0..50 {
        let g: Vec<usize> = (0..width).map(|_| rng.gen_range(0..order)).collect();
        if let Ok(l) = braid_closure(width, &word, &g, c) {
            if check_flat_structure(&l, c).passed() {
                link = Some(l);
                break;
            }
        }
    }
    let mut link = link.unwrap_or_else(|| {
        braid_closure(width, &word, &vec![c.group.unit(); width], c).expect("unit colors always close up")
    });
    for r in 0..link.num_components() {
        if rng.gen_bool(0.5) {
            link = link.reverse(r, c);
        }
    }
    link
}

/// A random move that applies to `link`, or None after a few attempts.
pub fn random_kirby_move(link: &GLinkPresentation, c: &CategoryData, rng: &mut ChaCha8Rng) -> Option<(KirbyMove, GLinkPresentation)> {
    let levels = link.levels();
    for _ in 0..40 {
        let kind = rng.gen_range(0..5);
        let level = rng.gen_range(0..levels.len());
        let width = levels[level].len();
        let mv = match kind {
            0 => KirbyMove::First { level, pos: rng.gen_range(0..=width), positive: rng.gen_bool(0.5) },
            1 => {
                if width == 0 {
                    continue;
                }
                let m = rng.gen_range(1..=width.min(2));
                let pos = rng.gen_range(0..=width - m);
                match fenn_rourke_options(link, level, pos, m, c).choose(rng) {
                    Some(mv) => *mv,
                    None => continue,
                }
            }
            2 => {
                if link.num_components() == 0 {
                    continue;
                }
                KirbyMove::Reverse { comp: rng.gen_range(0..link.num_components()) }
            }
            3 => {
                if width < 2 {
                    continue;
                }
                let first = if rng.gen_bool(0.5) { Geometry::P } else { Geometry::N };
                KirbyMove::Reidemeister2 { level, pos: rng.gen_range(0..width - 1), first }
            }
            _ => {
                if width == 0 {
                    continue;
                }
                KirbyMove::CurlPair { level, pos: rng.gen_range(0..width), positive_first: rng.gen_bool(0.5) }
            }
        };
        if let Ok(out) = apply_kirby(link, mv, c) {
            return Some((mv, out));
        }
    }
    None
}

/// Random coupon sites, one admissible position per component.
pub fn random_sites(link: &GLinkPresentation, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    (0..link.num_components()).map(|r| *link.coupon_sites(r).choose(rng).expect("component has a downward strand")).collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct KirbyFuzzReport {
    pub pairs: usize,
    pub moves: BTreeMap<String, usize>,
    pub regaugings: usize,
    pub conjugations: usize,
    pub failures: Vec<String>,
}

impl KirbyFuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `pairs` random (presentation, move sequence) pairs; τ is recomputed after
/// every move, at regauged coupon sites and after a random conjugation.
pub fn kirby_fuzz(c: &CategoryData, pairs: usize, seed: u64, max_moves: usize) -> KirbyFuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = KirbyFuzzReport::default();
    for pair in 0..pairs {
        let mut link = random_presentation(c, &mut rng, 2, 3);
        let want: CycNumber = match tau(&link, c) {
            Ok(r) => r.tau,
            Err(e) => {
                report.failures.push(format!("pair {pair}: {e}"));
                continue;
            }
        };
        report.pairs += 1;
        let steps = rng.gen_range(1..=max_moves.max(1));
        for step in 0..steps {
            let Some((mv, next)) = random_kirby_move(&link, c, &mut rng) else { break };
            *report.moves.entry(mv.kind().to_string()).or_default() += 1;
            link = next;
            let got = tau(&link, c).map(|r| r.tau);
            if got.as_ref() != Ok(&want) {
                report.failures.push(format!("pair {pair} step {step} {mv:?}: {got:?} != {want}"));
                break;
            }
        }
        if link.num_components() > 0 {
            let sites = random_sites(&link, &mut rng);
            report.regaugings += 1;
            let got = tau_at(&link, &sites, c, false).map(|r| r.tau);
            if got.as_ref() != Ok(&want) {
                report.failures.push(format!("pair {pair} regauged at {sites:?}: {got:?} != {want}"));
            }
        }
        let eta = rng.gen_range(0..c.group.len());
        report.conjugations += 1;
        let got = tau(&link.conjugate(eta, c), c).map(|r| r.tau);
        if got.as_ref() != Ok(&want) {
            report.failures.push(format!("pair {pair} conjugated by {}: {got:?} != {want}", c.group.name(eta)));
        }
    }
    report
}
