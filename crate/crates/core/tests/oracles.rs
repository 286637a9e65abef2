//! The library checked against a deliberately naive reimplementation.
//!
//! The reference below works on nested vectors with plain loops and natural
//! logarithms, computes every mutual information from entropy combinations,
//! and never touches the library's marginal or do-operation code.

use dopid::axioms::{make_gate, GateKind, GateSpec};
use dopid::do_op::{do_operation, Source};
use dopid::pid::unique_information;
use dopid::sampling::{boundary_joint, random_joint, substream, BoundaryKind};
use dopid::{decompose, Alphabet, Dist1, JointDist3, LogBase, Var};

type Cube = Vec<Vec<Vec<f64>>>;

fn cube(d: &JointDist3) -> Cube {
    let [nx, ny, nz] = d.shape();
    (0..nx)
        .map(|x| {
            (0..ny)
                .map(|y| (0..nz).map(|z| d.prob(x, y, z)).collect())
                .collect()
        })
        .collect()
}

fn h(ps: impl IntoIterator<Item = f64>) -> f64 {
    -ps.into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
        / std::f64::consts::LN_2
}

struct Naive {
    un_x: f64,
    un_y: f64,
    red: f64,
    syn: f64,
}

fn pair_mi(q: &[Vec<f64>]) -> f64 {
    let rows: Vec<f64> = q.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..q[0].len())
        .map(|j| q.iter().map(|r| r[j]).sum())
        .collect();
    h(rows) + h(cols) - h(q.iter().flatten().copied())
}

/// `(source, z)` joint after rescaling Z to `target`.
fn do_pair(pz_src: &[Vec<f64>], pz: &[f64], target: &[f64]) -> Vec<Vec<f64>> {
    pz_src
        .iter()
        .map(|row| {
            (0..pz.len())
                .map(|z| {
                    if pz[z] > 0.0 {
                        row[z] * target[z] / pz[z]
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

fn naive(p: &Cube) -> Naive {
    let (nx, ny, nz) = (p.len(), p[0].len(), p[0][0].len());
    let mut px = vec![0.0; nx];
    let mut py = vec![0.0; ny];
    let mut pz = vec![0.0; nz];
    let mut pxz = vec![vec![0.0; nz]; nx];
    let mut pyz = vec![vec![0.0; nz]; ny];
    let mut pxy = vec![vec![0.0; ny]; nx];
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                let v = p[x][y][z];
                px[x] += v;
                py[y] += v;
                pz[z] += v;
                pxz[x][z] += v;
                pyz[y][z] += v;
                pxy[x][y] += v;
            }
        }
    }
    let i_xz = pair_mi(&pxz);
    let h_xyz = h(p.iter().flatten().flatten().copied());
    let i_xz_given_y = h(pxy.iter().flatten().copied()) + h(pyz.iter().flatten().copied())
        - h(py.iter().copied())
        - h_xyz;

    let mut un_x = 0.0;
    for y in 0..ny {
        if py[y] > 0.0 {
            let target: Vec<f64> = pyz[y].iter().map(|v| v / py[y]).collect();
            un_x += py[y] * pair_mi(&do_pair(&pxz, &pz, &target));
        }
    }
    let mut un_y = 0.0;
    for x in 0..nx {
        if px[x] > 0.0 {
            let target: Vec<f64> = pxz[x].iter().map(|v| v / px[x]).collect();
            un_y += px[x] * pair_mi(&do_pair(&pyz, &pz, &target));
        }
    }
    Naive {
        un_x,
        un_y,
        red: i_xz - un_x,
        syn: i_xz_given_y - un_x,
    }
}

fn assert_matches(d: &JointDist3, tol: f64) {
    let r = decompose(d);
    let n = naive(&cube(d));
    let pairs = [
        (r.un_x_z_given_y, n.un_x),
        (r.un_y_z_given_x, n.un_y),
        (r.red, n.red),
        (r.syn, n.syn),
    ];
    for (i, (lib, reference)) in pairs.iter().enumerate() {
        assert!(
            (lib - reference).abs() <= tol,
            "atom {i}: library {lib} vs reference {reference}"
        );
    }
}

fn gate(kind: GateKind) -> JointDist3 {
    make_gate(GateSpec::new(kind)).unwrap()
}

#[test]
fn gates_match_reference() {
    for kind in GateKind::ALL {
        assert_matches(&gate(kind), 1e-12);
    }
}

#[test]
fn random_systems_match_reference() {
    for i in 0..200 {
        let shape = [2 + i % 3, 2 + (i / 3) % 3, 2 + (i / 9) % 4];
        let d = random_joint(&mut substream(2024, i as u64), shape);
        assert_matches(&d, 1e-11);
    }
}

#[test]
fn boundary_systems_match_reference() {
    for (k, kind) in BoundaryKind::ALL.into_iter().enumerate() {
        for i in 0..40 {
            let d = boundary_joint(&mut substream(77 + k as u64, i), [3, 2, 4], kind);
            assert_matches(&d, 1e-11);
        }
    }
}

// Reference values from a 40-digit evaluation of the same definitions.

fn assert_frozen(d: &JointDist3, expected: [f64; 4]) {
    let atoms = decompose(d).atoms();
    for (got, want) in atoms.iter().zip(expected) {
        assert!((got - want).abs() <= 1e-12, "{atoms:?} vs {expected:?}");
    }
}

#[test]
fn and_gate_frozen() {
    assert_frozen(
        &gate(GateKind::And),
        [
            0.2295739585136224,
            0.2295739585136224,
            0.08170416594551049,
            0.2704260414863776,
        ],
    );
}

#[test]
fn sum_gate_frozen() {
    assert_frozen(
        &gate(GateKind::Sum),
        [
            0.31127812445913286,
            0.31127812445913286,
            0.18872187554086714,
            0.6887218755408671,
        ],
    );
}

#[test]
fn noisy_biased_and_frozen() {
    let d = make_gate(
        GateSpec::new(GateKind::And)
            .with_bias(0.3, 0.6)
            .with_noise(0.1),
    )
    .unwrap();
    assert_frozen(
        &d,
        [
            0.16437412577348897,
            0.044617749376551383,
            0.014521891789529979,
            0.10911974105676031,
        ],
    );
}

#[test]
fn ramp_distribution_frozen() {
    let r = |n| Alphabet::range(n).unwrap();
    let p = (1..=27).map(|k| k as f64 / 378.0).collect();
    let d = JointDist3::new(r(3), r(3), r(3), p).unwrap();
    assert_frozen(
        &d,
        [
            0.0011662602892196807,
            0.00007903066063262674,
            1.2700808894975224e-7,
            0.0008914937447138826,
        ],
    );
}

#[test]
fn do_operation_matches_formula_cellwise() {
    let d = random_joint(&mut substream(5, 5), [3, 2, 4]);
    let p = cube(&d);
    let target = Dist1::new(Alphabet::range(4).unwrap(), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    let out = do_operation(&d, &target).unwrap().dist;
    let mut pz = [0.0; 4];
    for row in p.iter().flatten() {
        for z in 0..4 {
            pz[z] += row[z];
        }
    }
    for x in 0..3 {
        for y in 0..2 {
            for z in 0..4 {
                let want = p[x][y][z] * target.prob(z) / pz[z];
                assert!((out.prob(x, y, z) - want).abs() <= 1e-15);
            }
        }
    }
}

#[test]
fn natural_log_unique_information() {
    let d = gate(GateKind::Unq);
    let nats = unique_information(&d, Source::X, LogBase::E);
    assert!((nats - std::f64::consts::LN_2).abs() <= 1e-12);
    assert!(d.marginal1(Var::Z).len() == 2);
}
