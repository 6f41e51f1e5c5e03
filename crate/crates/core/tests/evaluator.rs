mod common;

use gcrossed_core::evaluator::evaluate_special_forms;

#[test]
fn special_forms_hold_in_every_category() {
    for name in common::ALL {
        let c = common::load(name);
        let r = evaluate_special_forms(&c);
        assert!(r.passed(), "{name}: {:?}", &r.failures[..r.failures.len().min(5)]);
    }
}

use gcrossed_core::diagram::{validate_coloring, ColoredDiagram, Piece, Strand};
use gcrossed_core::evaluator::{conjugate_diagram, conjugation_prediction, evaluate};
use gcrossed_core::fusion::s_entry;
use gcrossed_core::moves::random_diagram;
use gcrossed_core::CategoryData;

/// Two neutral circles linked twice through positive crossings.
fn hopf(c: &CategoryData, j: usize, k: usize) -> ColoredDiagram {
    use Piece::*;
    let (pj, mj) = (Strand::plus(j), Strand::minus(j));
    let slices = vec![
        vec![CupRight(j)],
        vec![Id(pj), CupRight(k), Id(mj)],
        vec![Piece::cross_pos(c, j, k, c.p0(j).clone()), Id(Strand::minus(k)), Id(mj)],
        vec![Piece::cross_pos(c, k, j, c.p0(k).clone()), Id(Strand::minus(k)), Id(mj)],
        vec![Id(pj), CapLeft(k), Id(mj)],
        vec![CapLeft(j)],
    ];
    ColoredDiagram::new(vec![], slices).unwrap()
}

#[test]
fn hopf_link_gives_the_s_matrix() {
    for name in common::ALL {
        let c = common::load(name);
        for &j in &c.neutral_labels() {
            for &k in &c.neutral_labels() {
                let m = evaluate(&hopf(&c, j, k), &c).unwrap();
                assert_eq!(m.value, s_entry(&c, j, k), "{name} j={j} k={k}");
            }
        }
    }
}

#[test]
fn hopf_link_in_z3_matches_root_of_unity_table() {
    let c = common::load("z3");
    for j in 0..3i64 {
        for k in 0..3i64 {
            let want = common::Eis::omega_pow(2 * j * k).to_cyc();
            let m = evaluate(&hopf(&c, j as usize, k as usize), &c).unwrap();
            assert_eq!(m.value, want, "j={j} k={k}");
        }
    }
}

#[test]
fn evaluation_is_monoidal() {
    for name in common::ALL {
        let c = common::load(name);
        for seed in 0..6u64 {
            let a = random_diagram(&c, seed, 5);
            let b = random_diagram(&c, seed + 50, 5);
            let (fa, fb) = (evaluate(&a, &c).unwrap(), evaluate(&b, &c).unwrap());
            let t = ColoredDiagram::tensor(&a, &b);
            assert_eq!(evaluate(&t, &c).unwrap().value, &fa.value * &fb.value);
            // stack a on top of its own identity-padded copy
            let id = ColoredDiagram::identity(a.source().clone());
            let s = ColoredDiagram::compose(&a, &id).unwrap();
            assert_eq!(evaluate(&s, &c).unwrap(), fa);
            let twice = ColoredDiagram::compose(&ColoredDiagram::identity(a.target()), &a).unwrap();
            assert_eq!(evaluate(&twice, &c).unwrap(), fa);
        }
    }
}

#[test]
fn closing_a_loop_on_either_side_gives_the_dimension() {
    use Piece::*;
    for name in common::ALL {
        let c = common::load(name);
        for x in 0..c.num_labels() {
            let right = ColoredDiagram::new(vec![], vec![vec![CupRight(x)], vec![CapLeft(x)]]).unwrap();
            let left = ColoredDiagram::new(vec![], vec![vec![CupLeft(x)], vec![CapRight(x)]]).unwrap();
            let (r, l) = (evaluate(&right, &c).unwrap().value, evaluate(&left, &c).unwrap().value);
            assert_eq!(r, l, "{name} x={x}");
            assert_eq!(&r, c.d(x));
        }
    }
}

#[test]
fn conjugation_transports_values() {
    for name in common::ALL {
        let c = common::load(name);
        for seed in 0..5u64 {
            let d = random_diagram(&c, seed, 10);
            let m = evaluate(&d, &c).unwrap();
            for eta in 0..c.num_group() {
                let e = conjugate_diagram(&d, eta, &c);
                assert!(validate_coloring(&e, &c).passed(), "{name} seed {seed} eta {eta}");
                let got = evaluate(&e, &c).unwrap().value;
                assert_eq!(got, conjugation_prediction(&m, eta, &c), "{name} seed {seed} eta {eta}");
            }
        }
        for &j in &c.neutral_labels() {
            for &k in &c.neutral_labels() {
                let h = hopf(&c, j, k);
                let v = evaluate(&h, &c).unwrap().value;
                for eta in 0..c.num_group() {
                    assert_eq!(evaluate(&conjugate_diagram(&h, eta, &c), &c).unwrap().value, v);
                }
            }
        }
    }
}
