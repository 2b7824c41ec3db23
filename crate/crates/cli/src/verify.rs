//! The batch verification run behind `opercalc verify`.

use std::collections::BTreeMap;

use opercalc::chevalley::{BasisKind, LoopElement, UnipotentGauge};
use opercalc::formal::LaurentSeries;
use opercalc::miura::{check_miura_image, miura_operator, miura_transform, CartanConnection};
use opercalc::oper::{OperOperator, OperSpace};
use opercalc::qchar::{exponent_identity_check, quotient_divergence, character_identity_divergence};
use opercalc::rootdata::{Coweight, Weight};
use opercalc::scalar::q;
use opercalc::{Error, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

type S = LaurentSeries<Q>;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub label: String,
    pub lambda_max: i64,
    pub order: usize,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    NotMember,
    PrecisionExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub key: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// First divergent q-power or elimination degree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
    pub summary: BTreeMap<String, usize>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        let count = |o: Outcome| self.cases.iter().filter(|c| c.outcome == o).count();
        if count(Outcome::Fail) + count(Outcome::NotMember) > 0 {
            1
        } else if count(Outcome::PrecisionExhausted) > 0 {
            3
        } else {
            0
        }
    }
}

fn pass(key: String) -> CaseResult {
    CaseResult { key, outcome: Outcome::Pass, detail: None, divergence: None }
}

fn fail(key: String, detail: String, divergence: Option<i64>) -> CaseResult {
    CaseResult { key, outcome: Outcome::Fail, detail: Some(detail), divergence }
}

fn from_error(key: String, e: &Error) -> CaseResult {
    match e {
        Error::PrecisionExhausted { needed, .. } => CaseResult {
            key,
            outcome: Outcome::PrecisionExhausted,
            detail: Some(e.to_string()),
            divergence: Some(*needed),
        },
        _ => fail(key, e.to_string(), None),
    }
}

fn rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn series(rng: &mut ChaCha8Rng, val: i64, prec: i64) -> S {
    S::new(val, (val..prec).map(|_| rational(rng)).collect(), prec)
}

fn random_oper(space: &OperSpace, rng: &mut ChaCha8Rng, pole: i64, prec: i64) -> OperOperator<Q> {
    let lie = space.lie();
    let mut v = LoopElement::zero();
    for k in 0..lie.dim() {
        if !matches!(lie.kind(k), BasisKind::F(_)) {
            v.set(k, series(rng, -pole, prec));
        }
    }
    space.operator(v).expect("b-valued")
}

fn miura_connection(space: &OperSpace, rng: &mut ChaCha8Rng, lambda: &[i64], prec: i64) -> CartanConnection<Q> {
    let neg: Vec<Q> = lambda.iter().map(|&c| q(-c, 1)).collect();
    let res = space.root_system().coweight_in_coroot_basis(&neg);
    let u = res.iter().map(|r| series(rng, 0, prec).add(&S::monomial(r.clone(), -1))).collect();
    CartanConnection::new(space.cartan_type(), u)
}

fn fmt_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn character_cases(space: &OperSpace, cfg: &VerifyConfig, out: &mut Vec<CaseResult>) {
    let rs = space.root_system();
    for lam in rs.dominant_box(cfg.lambda_max) {
        let w = Weight(lam.clone());
        let key = |name: &str| format!("{name}/{}/lambda={}", cfg.label, fmt_vec(&lam));
        match character_identity_divergence(rs, &w, cfg.order) {
            Ok(None) => out.push(pass(key("1-character-identity"))),
            Ok(Some(k)) => out.push(fail(key("1-character-identity"), "sides differ".into(), Some(k as i64))),
            Err(e) => out.push(from_error(key("1-character-identity"), &e)),
        }
        match quotient_divergence(rs, &w, cfg.order) {
            Ok(None) => out.push(pass(key("2-quotient"))),
            Ok(Some(k)) => out.push(fail(key("2-quotient"), "quotient differs".into(), Some(k as i64))),
            Err(e) => out.push(from_error(key("2-quotient"), &e)),
        }
    }
    let key = format!("3-exponent-identity/{}", cfg.label);
    out.push(if exponent_identity_check(rs) { pass(key) } else { fail(key, "polynomials differ".into(), None) });
}

fn miura_closed_form(space: &OperSpace, cfg: &VerifyConfig, out: &mut Vec<CaseResult>) {
    if space.root_system().rank() != 1 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 4);
    for i in 0..cfg.samples {
        let key = format!("4-miura-closed-form/{}/{i:03}", cfg.label);
        let u = series(&mut rng, -1, 20);
        let conn = CartanConnection::new(space.cartan_type(), vec![u.clone()]);
        match miura_transform(space, &conn) {
            Ok(c) if c.coords[0] == u.mul(&u).add(&u.derivative()) => out.push(pass(key)),
            Ok(c) => out.push(fail(key, format!("v1 = {}", c.coords[0]), None)),
            Err(e) => out.push(from_error(key, &e)),
        }
    }
}

fn forward_inclusion(space: &OperSpace, cfg: &VerifyConfig, out: &mut Vec<CaseResult>) {
    let rank = space.root_system().rank();
    let top = cfg.lambda_max.clamp(0, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 5);
    for i in 0..cfg.samples {
        let lam: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=top)).collect();
        let key = format!("5-miura-image/{}/{i:03}", cfg.label);
        let conn = miura_connection(space, &mut rng, &lam, 16);
        match check_miura_image(space, &conn, &Coweight(lam.clone())) {
            Ok(true) => out.push(pass(key)),
            Ok(false) => out.push(CaseResult {
                key,
                outcome: Outcome::NotMember,
                detail: Some(format!("lambda={}", fmt_vec(&lam))),
                divergence: None,
            }),
            Err(e) => out.push(from_error(key, &e)),
        }
    }
    if rank == 1 {
        let key = format!("5-miura-image/{}/residue-1/2", cfg.label);
        let u = series(&mut rng, 0, 16).add(&S::monomial(q(1, 2), -1));
        let conn = CartanConnection::new(space.cartan_type(), vec![u]);
        let op = miura_operator(space, &conn).expect("rank matches");
        let accepted = space.root_system().dominant_box(4).into_iter().find_map(|lam| {
            match space.to_lambda_nilpotent(&op, &Coweight(lam.clone())) {
                Ok(m) if m.form().is_some() => Some(Ok(lam)),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            }
        });
        out.push(match accepted {
            None => pass(key),
            Some(Ok(lam)) => fail(key, format!("accepted by lambda={}", fmt_vec(&lam)), None),
            Some(Err(e)) => from_error(key, &e),
        });
    }
}

fn classification(space: &OperSpace, cfg: &VerifyConfig, out: &mut Vec<CaseResult>) {
    let rank = space.root_system().rank();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 6);
    for i in 0..cfg.samples {
        let lam: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=cfg.lambda_max.max(0))).collect();
        let key = format!("6-classification/{}/{i:03}", cfg.label);
        let conn = miura_connection(space, &mut rng, &lam, 16);
        let got = miura_transform(space, &conn).and_then(|c| space.classify_monodromy_free(&c, cfg.lambda_max));
        out.push(match got {
            Ok(Some(found)) if found.0 == lam => pass(key),
            Ok(found) => fail(key, format!("built with {}, classified {:?}", fmt_vec(&lam), found.map(|c| c.0)), None),
            Err(e) => from_error(key, &e),
        });
    }
}

fn gauge_invariance(space: &OperSpace, cfg: &VerifyConfig, out: &mut Vec<CaseResult>) {
    let lie = space.lie();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 7);
    for i in 0..cfg.samples {
        let key = format!("7-gauge-invariance/{}/{i:03}", cfg.label);
        let op = random_oper(space, &mut rng, 2, 12);
        let factors = (0..lie.n_positive()).map(|r| (r, series(&mut rng, 0, 12))).collect();
        let g = UnipotentGauge::ordered(factors).expect("distinct roots");
        let moved = lie.gauge_transform(&space.connection(&op), &g).sub(&lie.p_minus::<Q>().to_loop());
        let result = space
            .operator(moved)
            .and_then(|m| Ok((space.reduce_to_canonical(&op)?, space.reduce_to_canonical(&m)?)));
        out.push(match result {
            Ok((a, b)) => match a.coords.iter().zip(&b.coords).position(|(x, y)| !x.congruent(y)) {
                None => pass(key),
                Some(j) => {
                    let (x, y) = (&a.coords[j], &b.coords[j]);
                    let top = x.precision().min(y.precision()).unwrap_or(i64::MAX);
                    let first = (x.valuation().min(y.valuation())..top).find(|&n| x.coeff(n) != y.coeff(n));
                    fail(key, format!("coordinate {j} differs"), first)
                }
            },
            Err(e) => from_error(key, &e),
        });
    }
}

fn dilation(space: &OperSpace, cfg: &VerifyConfig, out: &mut Vec<CaseResult>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 8);
    for i in 0..cfg.samples {
        let key = format!("8-dilation/{}/{i:03}", cfg.label);
        let op = random_oper(space, &mut rng, 2, 10);
        let a = loop {
            let a = rational(&mut rng);
            if a != q(0, 1) {
                break a;
            }
        };
        let result = (|| {
            let lhs = space.reduce_to_canonical(&space.dilate_operator(&op, &a)?)?;
            let rhs = space.dilate_oper(&space.reduce_to_canonical(&op)?, &a)?;
            Ok::<_, Error>(lhs == rhs)
        })();
        out.push(match result {
            Ok(true) => pass(key),
            Ok(false) => fail(key, format!("a = {a}"), None),
            Err(e) => from_error(key, &e),
        });
    }
}

fn structural(space: &OperSpace, cfg: &VerifyConfig, out: &mut Vec<CaseResult>) {
    let rs = space.root_system();
    let key = format!("9-structure/{}", cfg.label);
    let bad = (0..rs.rank()).find(|&i| {
        let mut a = vec![0; rs.rank()];
        a[i] = 1;
        rs.pair_root(&a, rs.rho_check()).ok() != Some(1)
    });
    out.push(match bad {
        None => pass(key),
        Some(i) => fail(key, format!("<alpha_{}, rho^vee> != 1", i + 1), None),
    });
}

pub fn inputs_digest(cfg: &VerifyConfig) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}|{}|{}|{}|{}", cfg.label, cfg.lambda_max, cfg.order, cfg.seed, cfg.samples));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Run every check for one type. `space` failing to build is reported as
/// a structural failure rather than an error.
pub fn run_verify(cfg: &VerifyConfig, command: Vec<String>) -> Result<RunReport, Error> {
    let rs = opercalc::rootdata::build_root_system(&cfg.label)?;
    let mut cases = Vec::new();
    match OperSpace::new(&rs) {
        Ok(space) => {
            character_cases(&space, cfg, &mut cases);
            miura_closed_form(&space, cfg, &mut cases);
            forward_inclusion(&space, cfg, &mut cases);
            classification(&space, cfg, &mut cases);
            gauge_invariance(&space, cfg, &mut cases);
            dilation(&space, cfg, &mut cases);
            structural(&space, cfg, &mut cases);
        }
        Err(e) => cases.push(fail(format!("9-structure/{}", cfg.label), e.to_string(), None)),
    }
    cases.sort_by(|a, b| a.key.cmp(&b.key));
    let mut summary = BTreeMap::new();
    for c in &cases {
        let name = serde_json::to_value(c.outcome).expect("outcome").as_str().unwrap_or_default().to_string();
        *summary.entry(name).or_insert(0) += 1;
    }
    Ok(RunReport { command, inputs_digest: inputs_digest(cfg), seed: cfg.seed, cases, summary })
}
