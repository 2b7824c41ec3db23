//! End-to-end acceptance run: one line per criterion, nonzero exit on failure.

mod common;

use std::time::Instant;

use common::{nonzero_rational, random_gauge, random_oper, series, Q, S};
use opercalc::chevalley::build_lie_basis;
use opercalc::miura::{check_miura_image, miura_transform, CartanConnection};
use opercalc::oper::{is_lambda_regular, Membership, OperSpace};
use opercalc::qchar::{exponent_identity_check, quotient_divergence, character_identity_divergence};
use opercalc::rootdata::{build_root_system, Coweight, Weight};
use opercalc::scalar::q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAPPED: [&str; 13] = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"];
const GRID: [&str; 5] = ["A1", "A2", "B2", "C2", "G2"];

type Outcome = Result<String, String>;

fn grid_weights(rs: &opercalc::rootdata::RootSystem, max: i64) -> Vec<Weight> {
    rs.dominant_box(max).into_iter().map(Weight).collect()
}

fn character_identity() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for label in GRID {
        let rs = build_root_system(label).unwrap();
        for lam in grid_weights(&rs, 3) {
            if let Some(k) = character_identity_divergence(&rs, &lam, 40).unwrap() {
                return Err(format!("{label} lambda={:?} differs at q^{k}", lam.0));
            }
            cases += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 10.0 {
        return Err(format!("{cases} cases took {secs:.1}s"));
    }
    Ok(format!("{cases} cases to q^40 in {secs:.2}s"))
}

fn quotient_construction() -> Outcome {
    let mut cases = 0;
    for label in GRID {
        let rs = build_root_system(label).unwrap();
        for lam in grid_weights(&rs, 3) {
            if let Some(k) = quotient_divergence(&rs, &lam, 40).unwrap() {
                return Err(format!("{label} lambda={:?} differs at q^{k}", lam.0));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases to q^40"))
}

fn exponent_identity() -> Outcome {
    for label in CAPPED {
        if !exponent_identity_check(&build_root_system(label).unwrap()) {
            return Err(label.to_string());
        }
    }
    Ok(format!("{} types", CAPPED.len()))
}

/// 2x2 matrix model of sl2: gauge `f + u h` by `[[1, -u], [0, 1]]`.
fn sl2_matrix_oracle(u: &S) -> S {
    type M = [[S; 2]; 2];
    let mul = |a: &M, b: &M| -> M {
        let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let z = S::zero;
    let a: M = [[u.clone(), z()], [S::one(), u.negate()]];
    let g: M = [[S::one(), u.negate()], [z(), S::one()]];
    let g_inv: M = [[S::one(), u.clone()], [z(), S::one()]];
    let dg: M = [[z(), u.derivative().negate()], [z(), z()]];
    let ad = mul(&mul(&g, &a), &g_inv);
    let d = mul(&dg, &g_inv);
    let out: M = [
        [ad[0][0].sub(&d[0][0]), ad[0][1].sub(&d[0][1])],
        [ad[1][0].sub(&d[1][0]), ad[1][1].sub(&d[1][1])],
    ];
    assert!(out[0][0].is_zero() && out[1][1].is_zero() && out[1][0] == S::one());
    out[0][1].clone()
}

fn sl2_miura_closed_form() -> Outcome {
    let space = OperSpace::for_label("A1").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..20 {
        let u = series(&mut rng, -1, 20);
        let c = miura_transform(&space, &CartanConnection::new(space.cartan_type(), vec![u.clone()])).unwrap();
        let closed = u.mul(&u).add(&u.derivative());
        let oracle = sl2_matrix_oracle(&u);
        if c.coords[0] != closed || closed != oracle {
            return Err(format!("sample {i}: got {}, expected {closed}", c.coords[0]));
        }
    }
    Ok("20 samples match u^2 + u' and the matrix oracle".into())
}

fn miura_connection(space: &OperSpace, rng: &mut ChaCha8Rng, residue: &[Q], prec: i64) -> CartanConnection<Q> {
    let u = residue
        .iter()
        .map(|r| series(rng, 0, prec).add(&S::monomial(r.clone(), -1)))
        .collect();
    CartanConnection::new(space.cartan_type(), u)
}

fn neg_lambda_h(space: &OperSpace, lam: &[i64]) -> Vec<Q> {
    let cw: Vec<Q> = lam.iter().map(|&c| q(-c, 1)).collect();
    space.root_system().coweight_in_coroot_basis(&cw)
}

fn forward_inclusion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for label in ["A1", "A2"] {
        let space = OperSpace::for_label(label).unwrap();
        let rank = space.root_system().rank();
        for i in 0..50 {
            let lam: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=3)).collect();
            let conn = miura_connection(&space, &mut rng, &neg_lambda_h(&space, &lam), 16);
            match check_miura_image(&space, &conn, &Coweight(lam.clone())) {
                Ok(true) => {}
                other => return Err(format!("{label} sample {i} lambda={lam:?}: {other:?}")),
            }
        }
    }
    let space = OperSpace::for_label("A1").unwrap();
    for i in 0..10 {
        let conn = miura_connection(&space, &mut rng, &[q(1, 2)], 16);
        let op = opercalc::miura::miura_operator(&space, &conn).unwrap();
        for lam in space.root_system().dominant_box(4) {
            let got = space.to_lambda_nilpotent(&op, &Coweight(lam.clone())).unwrap();
            if got.form().is_some() {
                return Err(format!("residue 1/2 sample {i} accepted by lambda={lam:?}"));
            }
        }
    }
    Ok("100 forward samples true; residue 1/2 rejected for all lambda <= 4".into())
}

fn classification() -> Outcome {
    let space = OperSpace::for_label("A1").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..30 {
        let m = rng.gen_range(0..=4);
        let conn = miura_connection(&space, &mut rng, &neg_lambda_h(&space, &[m]), 16);
        let c = miura_transform(&space, &conn).unwrap();
        let found = space.classify_monodromy_free(&c, 4).unwrap();
        if found != Some(Coweight(vec![m])) {
            return Err(format!("sample {i}: built with {m}, classified {found:?}"));
        }
        let op = space.embed_canonical(&c).unwrap();
        for other in (0..=4).filter(|&k| k != m) {
            if let Membership::Member(f) = space.to_lambda_nilpotent(&op, &Coweight(vec![other])).unwrap() {
                if is_lambda_regular(&f) {
                    return Err(format!("sample {i}: also regular for {other}"));
                }
            }
        }
    }
    Ok("30 samples recover their coweight uniquely".into())
}

fn gauge_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut min_tracked = i64::MAX;
    for (label, count) in [("A1", 50), ("A2", 50)] {
        let space = OperSpace::for_label(label).unwrap();
        for i in 0..count {
            let op = random_oper(&space, &mut rng, 2, 12);
            let g = random_gauge(&space, &mut rng, 12);
            let p_minus = space.lie().p_minus::<Q>().to_loop();
            let moved = space.lie().gauge_transform(&space.connection(&op), &g).sub(&p_minus);
            let moved = space.operator(moved).unwrap();
            let a = space.reduce_to_canonical(&op).unwrap();
            let b = space.reduce_to_canonical(&moved).unwrap();
            for (x, y) in a.coords.iter().zip(&b.coords) {
                let p = x.precision().unwrap().min(y.precision().unwrap());
                min_tracked = min_tracked.min(p - x.valuation().min(y.valuation()));
                if x.truncate(p) != y.truncate(p) {
                    return Err(format!("{label} sample {i}: {x} vs {y}"));
                }
            }
        }
    }
    Ok(format!("100 pairs agree on every tracked coefficient (at least {min_tracked} per coordinate)"))
}

fn dilation_equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for label in ["A1", "A2"] {
        let space = OperSpace::for_label(label).unwrap();
        for i in 0..30 {
            let op = random_oper(&space, &mut rng, 2, 10);
            let a = nonzero_rational(&mut rng);
            let lhs = space.reduce_to_canonical(&space.dilate_operator(&op, &a).unwrap()).unwrap();
            let rhs = space.dilate_oper(&space.reduce_to_canonical(&op).unwrap(), &a).unwrap();
            if lhs != rhs {
                return Err(format!("{label} sample {i}, a = {a}"));
            }
        }
    }
    Ok("30 samples per type".into())
}

fn positive_root_count(label: &str) -> usize {
    let n: usize = label[1..].parse().unwrap();
    match &label[..1] {
        "A" => n * (n + 1) / 2,
        "B" | "C" => n * n,
        "D" => n * (n - 1),
        "F" => 24,
        "G" => 6,
        _ => unreachable!(),
    }
}

fn structural() -> Outcome {
    for label in CAPPED {
        let rs = build_root_system(label).unwrap();
        build_lie_basis(&rs).map_err(|e| format!("{label}: {e}"))?;
        for i in 0..rs.rank() {
            let mut a = vec![0; rs.rank()];
            a[i] = 1;
            if rs.pair_root(&a, rs.rho_check()).unwrap() != 1 {
                return Err(format!("{label}: <alpha_{i}, rho^vee> != 1"));
            }
        }
        if rs.positive_roots().len() != positive_root_count(label) {
            return Err(format!("{label}: {} positive roots", rs.positive_roots().len()));
        }
        OperSpace::new(&rs).map_err(|e| format!("{label}: {e}"))?;
    }
    Ok(format!("{} types", CAPPED.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("character identity", character_identity),
        ("quotient construction", quotient_construction),
        ("exponent identity", exponent_identity),
        ("sl2 Miura closed form", sl2_miura_closed_form),
        ("Miura image forward inclusion", forward_inclusion),
        ("monodromy-free classification", classification),
        ("gauge invariance", gauge_invariance),
        ("dilation equivariance", dilation_equivariance),
        ("structural self-checks", structural),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
