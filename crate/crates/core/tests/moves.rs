mod common;

use gcrossed_core::diagram::{parse_diagram, print_diagram, validate_coloring};
use gcrossed_core::evaluator::evaluate;
use gcrossed_core::moves::{apply_move, random_diagram, random_move_fuzz, MoveKind};
use std::collections::BTreeMap;

#[test]
fn fuzzed_moves_preserve_evaluation() {
    for name in common::ALL {
        let c = common::load(name);
        let mut counts: BTreeMap<(MoveKind, bool), usize> = BTreeMap::new();
        let mut total = 0;
        for seed in 0..8u64 {
            let d = random_diagram(&c, seed, 14);
            let before = evaluate(&d, &c).unwrap();
            let (_, log) = random_move_fuzz(&d, &c, seed + 100, 130);
            let mut cur = d.sparse();
            for spec in &log {
                cur = apply_move(&cur, &c, spec).unwrap();
                assert!(validate_coloring(&cur, &c).passed());
                let m = evaluate(&cur, &c).unwrap();
                assert_eq!(m, before, "{name} seed {seed} after {spec:?}");
                *counts.entry((spec.kind, spec.inverse)).or_default() += 1;
            }
            total += log.len();
            let text = print_diagram(&cur, &c);
            assert_eq!(parse_diagram(&text, &c).unwrap(), cur);
        }
        eprintln!("{name}: {total} moves {counts:?}");
        assert!(total >= 1000, "{name}: only {total} moves");
        for kind in MoveKind::ALL {
            assert!(counts.contains_key(&(kind, false)), "{name}: {kind:?} never applied");
        }
    }
}

use gcrossed_core::diagram::{crossing, crossing_outputs, ColoredDiagram, Geometry, Piece, Sign, Strand};
use gcrossed_core::moves::MoveSpec;
use gcrossed_core::CycNumber;

/// Coupon with two inputs and two exits, with a strand at its left that
/// sweeps across the exits; every label triple and orientation.
fn type4_patterns(c: &gcrossed_core::CategoryData, geom: Geometry) -> Vec<(Sign, ColoredDiagram)> {
    let nl = c.num_labels();
    let n = c.root_order();
    let mut out = Vec::new();
    let signs = [Sign::Plus, Sign::Minus];
    for &bs in &signs {
        for &s1 in &signs {
            for &s2 in &signs {
                for x in 0..nl {
                    for a in 0..nl {
                        for b in 0..nl {
                            let sweep = Strand { label: x, sign: bs };
                            let i1 = Strand { label: a, sign: s1 };
                            let i2 = Strand { label: b, sign: s2 };
                            let obj = c.labels.mul(i1.object_label(c), i2.object_label(c));
                            let o1 = Strand { label: b, sign: s1 };
                            let rest = c.labels.mul(c.labels.inv(o1.object_label(c)), obj);
                            let o2 = if s2 == Sign::Plus { Strand::plus(rest) } else { Strand::minus(c.labels.inv(rest)) };
                            let coupon = Piece::Coupon {
                                inputs: vec![i1, i2],
                                outputs: vec![o1, o2],
                                value: CycNumber::zeta_pow(n, 1),
                            };
                            let mut d = ColoredDiagram::new(vec![sweep, i1, i2], vec![vec![Piece::Id(sweep), coupon]]).unwrap();
                            let mut cur = sweep;
                            for (j, o) in [o1, o2].iter().enumerate() {
                                let lv = d.target();
                                let psi = CycNumber::zeta_pow(n, j as i64 + 1) * CycNumber::from_int(n, j as i64 + 1);
                                let blk = crossing(c, geom, cur, *o, psi).embed(&lv[..j], &lv[j + 2..]);
                                cur = match geom {
                                    Geometry::P => crossing_outputs(c, geom, cur, *o).1,
                                    Geometry::N => cur,
                                };
                                d = ColoredDiagram::compose(&blk, &d).unwrap();
                            }
                            out.push((bs, d));
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn type4_moves_on_every_two_leg_coupon() {
    for name in common::ALL {
        let c = common::load(name);
        let n = c.root_order();
        for geom in [Geometry::N, Geometry::P] {
            for (bs, d) in type4_patterns(&c, geom) {
                let kind = match (geom, bs) {
                    (Geometry::N, Sign::Plus) => MoveKind::T4a,
                    (Geometry::N, Sign::Minus) => MoveKind::T4b,
                    (Geometry::P, Sign::Plus) => MoveKind::T4c,
                    (Geometry::P, Sign::Minus) => MoveKind::T4d,
                };
                let before = evaluate(&d, &c).unwrap();
                let free = vec![CycNumber::zeta_pow(n, 5), CycNumber::from_int(n, 3)];
                let e = apply_move(&d, &c, &MoveSpec::new(kind, false, 0, 0).with_free(free.clone())).unwrap();
                assert_eq!(evaluate(&e, &c).unwrap(), before, "{name} {kind:?} forward");
                let back = apply_move(&e, &c, &MoveSpec::new(kind, true, 0, 0).with_free(free)).unwrap();
                assert_eq!(evaluate(&back, &c).unwrap(), before, "{name} {kind:?} inverse");
            }
        }
    }
}

#[test]
fn side_conditions_are_checked() {
    let c = common::load("z3");
    let n = c.root_order();
    let d = type4_patterns(&c, Geometry::N).remove(5).1;
    let mut spec = MoveSpec::new(MoveKind::T4a, false, 0, 0);
    let good = apply_move(&d, &c, &spec).unwrap();
    let v1 = good.slices().iter().flatten().find_map(|p| match p {
        Piece::Coupon { value, .. } => Some(value.clone()),
        _ => None,
    });
    spec.forced = v1.clone();
    assert!(apply_move(&d, &c, &spec).is_ok());
    spec.forced = Some(v1.unwrap() * CycNumber::from_int(n, 2));
    assert!(matches!(
        apply_move(&d, &c, &spec),
        Err(gcrossed_core::diagram::DiagramError::SideCondition { .. })
    ));
}
