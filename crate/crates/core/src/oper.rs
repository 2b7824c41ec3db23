//! Opers `d/dt + p_- + v(t)` with `p_- = sum_i f_i` and `v` in `b((t))`.
//!
//! The canonical slice is `p_- + V_can` where `V_can` is the centralizer of
//! `p_+` in `n`, graded by the exponents. Reduction works up the principal
//! grading: at grade `k` the non-slice part of `v_k` is `[x, p_-]` for a
//! unique `x` in `n_{k+1}`, and `exp(-x)` removes it without touching lower
//! grades.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chevalley::{build_lie_basis, BasisKind, LieBasis, LieElement, LoopElement, UnipotentGauge};
use crate::error::{Error, Result};
use crate::formal::LaurentSeries;
use crate::linalg::{inverse, nullspace, Matrix};
use crate::rootdata::{CartanType, Coweight, Lattice, RootSystem};
use crate::scalar::Scalar;

/// `d/dt + p_- + v`, with `v` supported on `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperOperator<T: Scalar> {
    pub cartan_type: CartanType,
    pub v: LoopElement<T>,
}

/// Coordinates `(v_1, ..., v_l)` along the slice basis `p_1, ..., p_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalOper<T: Scalar> {
    pub cartan_type: CartanType,
    pub coords: Vec<LaurentSeries<T>>,
}

/// `d/dt + sum_i t^<alpha_i, lambda> f_i + b(t) + n/t` with `b` regular.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaNilpotentForm<T: Scalar> {
    pub lambda: Coweight,
    pub b_part: LoopElement<T>,
    pub nilpotent_residue: LieElement<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Obstruction {
    /// A canonical coordinate has a pole beyond the regular-singular bound.
    Irregular,
    /// The residue lies in a different Weyl orbit than `-lambda - rho`.
    Residue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Membership<T: Scalar> {
    Member(LambdaNilpotentForm<T>),
    NotMember { degree: i64, reason: Obstruction },
}

impl<T: Scalar> Membership<T> {
    pub fn form(&self) -> Option<&LambdaNilpotentForm<T>> {
        match self {
            Membership::Member(f) => Some(f),
            Membership::NotMember { .. } => None,
        }
    }
}

/// Weyl-orbit invariant of a residue: the Kostant slice coordinates of
/// `p_- + mu`, which depend on `mu` only through its `W`-orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueClass<T> {
    pub invariants: Vec<T>,
}

#[derive(Debug, Clone)]
struct Grade {
    /// basis indices spanning `b_k`
    rows: Vec<usize>,
    /// basis indices of `n_{k+1}`
    raise: Vec<usize>,
    /// slice coordinates living at this grade
    slice: Vec<usize>,
    /// `[x; c] = inv * y`
    inv: Matrix,
}

/// Lie algebra data plus the slice and the per-grade elimination matrices.
#[derive(Debug, Clone)]
pub struct OperSpace {
    lie: LieBasis,
    slice: Vec<LieElement<BigRational>>,
    slice_degree: Vec<u32>,
    grades: Vec<Grade>,
}

impl OperSpace {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let lie = build_lie_basis(rs)?;
        let dim = lie.dim();
        let top = lie.max_grade();
        let b_k = |k: i64| -> Vec<usize> {
            if k == 0 {
                (0..lie.rank()).map(|i| lie.h(i)).collect()
            } else {
                (0..lie.n_positive()).filter(|&r| lie.grade(r) == k).collect()
            }
        };
        let p_minus: LieElement<BigRational> = lie.p_minus();
        let p_plus: LieElement<BigRational> = lie.p_plus();
        let mut slice = Vec::new();
        let mut slice_degree = Vec::new();
        let mut grades = Vec::new();
        for k in 0..=top {
            let rows = b_k(k);
            let raise = if k < top { b_k(k + 1) } else { Vec::new() };
            let coords = |x: &LieElement<BigRational>, basis: &[usize]| -> Vec<BigRational> {
                basis.iter().map(|&i| x.0[i].clone()).collect()
            };
            // ker ad p_+ on b_k
            let kernel = if k < top {
                let mut m: Matrix = vec![vec![BigRational::zero(); rows.len()]; raise.len()];
                for (c, &b) in rows.iter().enumerate() {
                    let img = lie.bracket(&p_plus, &LieElement::basis(dim, b));
                    for (r, &t) in raise.iter().enumerate() {
                        m[r][c] = img.0[t].clone();
                    }
                }
                nullspace(&m, rows.len())
            } else {
                (0..rows.len())
                    .map(|c| (0..rows.len()).map(|r| if r == c { BigRational::one() } else { BigRational::zero() }).collect())
                    .collect()
            };
            let mut cols: Vec<Vec<BigRational>> = raise
                .iter()
                .map(|&b| coords(&lie.bracket(&LieElement::basis(dim, b), &p_minus), &rows))
                .collect();
            let mut here = Vec::new();
            for v in &kernel {
                let mut x = LieElement::zero(dim);
                for (c, &b) in rows.iter().enumerate() {
                    x.0[b] = v[c].clone();
                }
                here.push(slice.len());
                slice.push(x);
                slice_degree.push(k as u32);
                cols.push(v.clone());
            }
            if cols.len() != rows.len() {
                return Err(Error::StructureCheck(format!("grade {k}: b_k does not split as [n_(k+1), p_-] + slice")));
            }
            let m: Matrix =
                (0..rows.len()).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect();
            let inv = inverse(&m)
                .ok_or_else(|| Error::StructureCheck(format!("grade {k}: elimination matrix is singular")))?;
            grades.push(Grade { rows, raise, slice: here, inv });
        }
        let mut sorted = slice_degree.clone();
        sorted.sort_unstable();
        if sorted != rs.exponents() {
            return Err(Error::StructureCheck("slice grades differ from the exponents".into()));
        }
        Ok(OperSpace { lie, slice, slice_degree, grades })
    }

    pub fn for_label(label: &str) -> Result<Self> {
        Self::new(&crate::rootdata::build_root_system(label)?)
    }

    pub fn lie(&self) -> &LieBasis {
        &self.lie
    }

    pub fn root_system(&self) -> &RootSystem {
        self.lie.root_system()
    }

    pub fn cartan_type(&self) -> CartanType {
        self.root_system().cartan_type()
    }

    /// Slice basis vector `p_j`.
    pub fn slice_vector(&self, j: usize) -> &LieElement<BigRational> {
        &self.slice[j]
    }

    /// Exponent `d_j` carried by coordinate `j`.
    pub fn slice_degree(&self, j: usize) -> u32 {
        self.slice_degree[j]
    }

    pub fn slice_degrees(&self) -> &[u32] {
        &self.slice_degree
    }

    fn check_type(&self, t: CartanType) -> Result<()> {
        if t == self.cartan_type() {
            Ok(())
        } else {
            Err(Error::TypeMismatch { expected: self.cartan_type().to_string(), got: t.to_string() })
        }
    }

    pub fn operator<T: Scalar>(&self, v: LoopElement<T>) -> Result<OperOperator<T>> {
        if v.0.keys().any(|&k| matches!(self.lie.kind(k), BasisKind::F(_))) {
            return Err(Error::Parse("oper part must lie in b".into()));
        }
        Ok(OperOperator { cartan_type: self.cartan_type(), v })
    }

    /// Full connection coefficient `p_- + v`.
    pub fn connection<T: Scalar>(&self, op: &OperOperator<T>) -> LoopElement<T> {
        self.lie.p_minus::<T>().to_loop().add(&op.v)
    }

    /// Reduce `p_- + v` to the slice; returns coordinates and the gauge
    /// steps in application order.
    fn reduce_connection<T: Scalar>(&self, a: &LoopElement<T>) -> (Vec<LaurentSeries<T>>, Vec<UnipotentGauge<T>>) {
        let mut cur = a.clone();
        let mut coords = vec![LaurentSeries::zero(); self.slice.len()];
        let mut steps = Vec::new();
        for g in &self.grades {
            let y: Vec<LaurentSeries<T>> = g.rows.iter().map(|&b| cur.get(b)).collect();
            let solve = |row: &[BigRational]| -> LaurentSeries<T> {
                let mut acc = LaurentSeries::zero();
                for (c, s) in row.iter().zip(&y) {
                    if !c.is_zero() {
                        acc = acc.add(&s.scale(&T::from_rational(c)));
                    }
                }
                acc
            };
            let nr = g.raise.len();
            for (j, &slot) in g.slice.iter().enumerate() {
                coords[slot] = solve(&g.inv[nr + j]);
            }
            let factors: Vec<(usize, LaurentSeries<T>)> = g
                .raise
                .iter()
                .enumerate()
                .map(|(i, &r)| (r, solve(&g.inv[i]).negate()))
                .filter(|(_, x)| !(x.is_exact() && x.is_zero()))
                .collect();
            if factors.is_empty() {
                continue;
            }
            let gauge = UnipotentGauge::ordered(factors).expect("distinct roots");
            cur = self.lie.gauge_transform(&cur, &gauge);
            steps.push(gauge);
        }
        (coords, steps)
    }

    pub fn reduce_to_canonical<T: Scalar>(&self, op: &OperOperator<T>) -> Result<CanonicalOper<T>> {
        self.check_type(op.cartan_type)?;
        let (coords, _) = self.reduce_connection(&self.connection(op));
        Ok(CanonicalOper { cartan_type: op.cartan_type, coords })
    }

    /// As [`Self::reduce_to_canonical`], failing unless every coordinate is
    /// known through `t^(precision-1)`.
    pub fn reduce_to_precision<T: Scalar>(&self, op: &OperOperator<T>, precision: i64) -> Result<CanonicalOper<T>> {
        let c = self.reduce_to_canonical(op)?;
        for s in &c.coords {
            if let Some(p) = s.precision() {
                if p < precision {
                    return Err(Error::PrecisionExhausted { needed: precision, available: p });
                }
            }
        }
        Ok(CanonicalOper { cartan_type: c.cartan_type, coords: c.coords.iter().map(|s| s.truncate(precision)).collect() })
    }

    pub fn embed_canonical<T: Scalar>(&self, c: &CanonicalOper<T>) -> Result<OperOperator<T>> {
        self.check_type(c.cartan_type)?;
        if c.coords.len() != self.slice.len() {
            return Err(Error::Mismatch { expected: self.slice.len(), got: c.coords.len() });
        }
        let mut v = LoopElement::zero();
        for (s, p) in c.coords.iter().zip(&self.slice) {
            for (k, x) in p.0.iter().enumerate() {
                if !x.is_zero() {
                    v.add_at(k, &s.scale(&T::from_rational(x)));
                }
            }
        }
        Ok(OperOperator { cartan_type: c.cartan_type, v })
    }

    /// `t -> a t` on canonical coordinates: `v_j -> a^(d_j+1) v_j(a t)`.
    pub fn dilate_oper<T: Scalar>(&self, c: &CanonicalOper<T>, a: &T) -> Result<CanonicalOper<T>> {
        self.check_type(c.cartan_type)?;
        let coords = c
            .coords
            .iter()
            .zip(&self.slice_degree)
            .map(|(s, &d)| Ok(s.dilate(a)?.scale(&a.powi(d as i64 + 1))))
            .collect::<Result<_>>()?;
        Ok(CanonicalOper { cartan_type: c.cartan_type, coords })
    }

    /// The same dilation on an operator: the grade `k` part gets `a^(k+1)`.
    pub fn dilate_operator<T: Scalar>(&self, op: &OperOperator<T>, a: &T) -> Result<OperOperator<T>> {
        self.check_type(op.cartan_type)?;
        let mut v = LoopElement::zero();
        for (&k, s) in &op.v.0 {
            v.set(k, s.dilate(a)?.scale(&a.powi(self.lie.grade(k) + 1)));
        }
        Ok(OperOperator { cartan_type: op.cartan_type, v })
    }

    fn coweight_h<T: Scalar>(&self, cw: &[BigRational]) -> LieElement<T> {
        self.lie.coweight_element(cw)
    }

    /// Kostant invariants of the constant element `p_- + b`.
    fn kostant<T: Scalar>(&self, x: &LieElement<T>) -> (Vec<T>, Vec<UnipotentGauge<T>>) {
        let (coords, steps) = self.reduce_connection(&x.to_loop());
        (coords.iter().map(|s| s.coeff(0).expect("exact constant")).collect(), steps)
    }

    pub fn residue_class_of_coweight<T: Scalar>(&self, mu: &[BigRational]) -> ResidueClass<T> {
        let x = self.lie.p_minus::<T>().add(&self.coweight_h(mu));
        ResidueClass { invariants: self.kostant(&x).0 }
    }

    /// Constant term of `t * (rho(t) . op)` together with that operator.
    fn rho_frame<T: Scalar>(&self, c: &CanonicalOper<T>) -> Result<(LoopElement<T>, LieElement<T>)> {
        let dim = self.lie.dim();
        for (j, s) in c.coords.iter().enumerate() {
            let bound = -(self.slice_degree[j] as i64 + 1);
            if let Some(o) = s.order() {
                if o < bound {
                    return Err(Error::IrregularSingularity { order: -o, max: -bound });
                }
            }
        }
        let embedded = self.connection(&self.embed_canonical(c)?);
        let psi = self.lie.gauge_by_cocharacter(&embedded, self.root_system().rho_check());
        let q0 = psi.coefficient(-1, dim)?;
        Ok((psi, q0))
    }

    pub fn residue_class<T: Scalar>(&self, op: &OperOperator<T>) -> Result<ResidueClass<T>> {
        let c = self.reduce_to_canonical(op)?;
        let (_, q0) = self.rho_frame(&c)?;
        Ok(ResidueClass { invariants: self.kostant(&q0).0 })
    }

    /// `varpi(-lambda - rho)` for a form with coweight `lambda`.
    pub fn residue_class_of_form<T: Scalar>(&self, form: &LambdaNilpotentForm<T>) -> ResidueClass<T> {
        let mu: Vec<BigRational> = form
            .lambda
            .add(self.root_system().rho_check())
            .neg()
            .0
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        self.residue_class_of_coweight(&mu)
    }

    /// Bring `op` to the lambda-nilpotent shape, or report the obstruction.
    pub fn to_lambda_nilpotent<T: Scalar>(&self, op: &OperOperator<T>, lambda: &Coweight) -> Result<Membership<T>> {
        let rs = self.root_system();
        if lambda.0.len() != rs.rank() {
            return Err(Error::Mismatch { expected: rs.rank(), got: lambda.0.len() });
        }
        if !lambda.is_dominant_integral() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        let c = self.reduce_to_canonical(op)?;
        let (mut psi, q0) = match self.rho_frame(&c) {
            Ok(x) => x,
            Err(Error::IrregularSingularity { order, .. }) => {
                return Ok(Membership::NotMember { degree: -order, reason: Obstruction::Irregular })
            }
            Err(e) => return Err(e),
        };
        let shift = lambda.add(rs.rho_check());
        let shift_q: Vec<BigRational> = shift.0.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let target = self.lie.p_minus::<T>().sub(&self.coweight_h(&shift_q));
        let (inv_here, steps_here) = self.kostant(&q0);
        let (inv_target, steps_target) = self.kostant(&target);
        if inv_here != inv_target {
            return Ok(Membership::NotMember { degree: 0, reason: Obstruction::Residue });
        }
        // constant gauge taking q0 to target: (g_target)^-1 g_here
        let mut word: Vec<UnipotentGauge<T>> = steps_here;
        word.extend(steps_target.iter().rev().map(|g| g.inverse()));
        for g in &word {
            psi = self.lie.gauge_transform(&psi, g);
        }

        // h(beta) = <beta, lambda + rho>
        let n_pos = self.lie.n_positive();
        let h: Vec<i64> = (0..n_pos).map(|r| rs.pair_root(self.lie.root(r), &shift).unwrap()).collect();
        let mut by_h: Vec<usize> = (0..n_pos).collect();
        by_h.sort_by_key(|&r| (std::cmp::Reverse(h[r]), r));
        let max_h = h.iter().copied().max().unwrap_or(0);
        let p_minus: LieElement<T> = self.lie.p_minus();
        let dim = self.lie.dim();
        for n in 1..max_h {
            let mut xs: Vec<(usize, T)> = Vec::new();
            let mut correction = LieElement::<T>::zero(dim);
            for &beta in by_h.iter().filter(|&&r| h[r] > n) {
                let s = psi.get(self.lie.e(beta));
                let qn = s.coeff(n - 1).ok_or(Error::PrecisionExhausted {
                    needed: n,
                    available: s.precision().unwrap_or(i64::MAX),
                })?;
                let x = (qn + correction.0[self.lie.e(beta)].clone()) / T::from_i64(n - h[beta]);
                if !x.is_zero() {
                    let bx = self.lie.bracket(&LieElement::basis(dim, self.lie.e(beta)), &p_minus).scale(&x);
                    correction = correction.add(&bx);
                    xs.push((beta, x));
                }
            }
            if xs.is_empty() {
                continue;
            }
            xs.sort_by_key(|(r, _)| *r);
            let factors = xs.into_iter().map(|(r, x)| (r, LaurentSeries::monomial(x, n))).collect();
            psi = self.lie.gauge_transform(&psi, &UnipotentGauge::ordered(factors)?);
        }
        let form_conn = self.lie.gauge_by_cocharacter(&psi, &shift.neg());
        self.split_form(&form_conn, lambda).map(Membership::Member)
    }

    fn split_form<T: Scalar>(&self, conn: &LoopElement<T>, lambda: &Coweight) -> Result<LambdaNilpotentForm<T>> {
        let rs = self.root_system();
        let mut b_part = LoopElement::zero();
        let mut residue = LieElement::zero(self.lie.dim());
        for (&k, s) in &conn.0 {
            match self.lie.kind(k) {
                BasisKind::F(r) => {
                    let simple = (0..rs.rank()).find(|&i| self.lie.simple(i) == r);
                    let ok = simple.is_some_and(|i| *s == LaurentSeries::monomial(T::one(), lambda.0[i]));
                    if !ok {
                        return Err(Error::StructureCheck(format!("unexpected {} term in normal form", self.lie.label(k))));
                    }
                }
                BasisKind::E(_) | BasisKind::H(_) => {
                    let unknown = |n: i64| Error::PrecisionExhausted { needed: n + 1, available: s.precision().unwrap_or(i64::MAX) };
                    if s.valuation() < -1 {
                        return Err(match s.coeff(s.valuation()) {
                            Some(c) if !c.is_zero() => Error::StructureCheck(format!("pole of order {} left in {}", -s.valuation(), self.lie.label(k))),
                            _ => unknown(s.valuation()),
                        });
                    }
                    let r = s.coeff(-1).ok_or_else(|| unknown(-1))?;
                    if !r.is_zero() {
                        if matches!(self.lie.kind(k), BasisKind::H(_)) {
                            return Err(Error::StructureCheck("Cartan residue left in normal form".into()));
                        }
                        residue.0[k] = r.clone();
                    }
                    b_part.set(k, s.sub(&LaurentSeries::monomial(r, -1)));
                }
            }
        }
        Ok(LambdaNilpotentForm { lambda: lambda.clone(), b_part, nilpotent_residue: residue })
    }

    /// Search the dominant box for the coweight whose regular locus contains `c`.
    pub fn classify_monodromy_free<T: Scalar>(&self, c: &CanonicalOper<T>, bound: i64) -> Result<Option<Coweight>> {
        let op = self.embed_canonical(c)?;
        // only the coweight with matching residue invariants can succeed
        let here = match self.rho_frame(c) {
            Ok((_, q0)) => self.kostant(&q0).0,
            Err(Error::IrregularSingularity { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        for lam in self.root_system().dominant_box(bound) {
            let mu: Vec<BigRational> = lam.iter().map(|&x| BigRational::from_integer((-x - 1).into())).collect();
            if self.residue_class_of_coweight::<T>(&mu).invariants != here {
                continue;
            }
            let lam = Coweight(lam);
            return Ok(match self.to_lambda_nilpotent(&op, &lam)? {
                Membership::Member(form) if is_lambda_regular(&form) => Some(lam),
                _ => None,
            });
        }
        Ok(None)
    }

    /// `W`-equality of two coweights, on the coweight side.
    pub fn same_residue(&self, a: &[BigRational], b: &[BigRational]) -> Result<bool> {
        self.root_system().harish_chandra_equal_on(a, b, Lattice::Coweights)
    }
}

pub fn is_lambda_regular<T: Scalar>(form: &LambdaNilpotentForm<T>) -> bool {
    form.nilpotent_residue.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    type Q = BigRational;
    type S = LaurentSeries<Q>;

    fn sl2() -> OperSpace {
        OperSpace::for_label("A1").unwrap()
    }

    fn canon(space: &OperSpace, v: S) -> CanonicalOper<Q> {
        CanonicalOper { cartan_type: space.cartan_type(), coords: vec![v] }
    }

    #[test]
    fn slice_grades_are_exponents() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let s = OperSpace::for_label(label).unwrap();
            assert_eq!(s.slice_degrees().len(), s.root_system().rank(), "{label}");
        }
    }

    #[test]
    fn sl2_miura_shape_reduces_to_u2_plus_du() {
        let s = sl2();
        let lie = s.lie();
        let u = S::new(-1, vec![q(-1, 1), q(2, 1), q(1, 3)], 5);
        let op = s.operator(LoopElement::single(lie.h(0), u.clone())).unwrap();
        let c = s.reduce_to_canonical(&op).unwrap();
        let v = u.mul(&u).add(&u.derivative());
        // p_1 = e for sl2
        assert_eq!(s.slice_vector(0), &LieElement::basis(lie.dim(), lie.e(0)));
        assert_eq!(c.coords[0], v);
    }

    #[test]
    fn already_canonical_is_fixed() {
        let s = sl2();
        let cc = S::new(-2, vec![q(2, 1), q(0, 1), q(5, 7)], 6);
        let op = s.operator(LoopElement::single(s.lie().e(0), cc.clone())).unwrap();
        assert_eq!(s.reduce_to_canonical(&op).unwrap().coords, vec![cc.clone()]);
        let c = canon(&s, S::monomial(q(2, 1), -2));
        let emb = s.embed_canonical(&c).unwrap();
        assert_eq!(emb.v, LoopElement::single(s.lie().e(0), S::monomial(q(2, 1), -2)));
        let zero = CanonicalOper { cartan_type: s.cartan_type(), coords: vec![S::zero()] };
        assert!(s.embed_canonical(&zero).unwrap().v.0.is_empty());
    }

    #[test]
    fn sl2_double_pole_membership() {
        let s = sl2();
        // v = m(m+2)/4 t^-2 sits in the regular locus of lambda = (m)
        for m in 0..5i64 {
            let c = canon(&s, S::monomial(q(m * (m + 2), 4), -2));
            let op = s.embed_canonical(&c).unwrap();
            let got = s.to_lambda_nilpotent(&op, &Coweight(vec![m])).unwrap();
            let form = got.form().unwrap_or_else(|| panic!("m={m}: {got:?}"));
            assert!(is_lambda_regular(form), "m={m}");
            assert_eq!(s.classify_monodromy_free(&c, 4).unwrap(), Some(Coweight(vec![m])));
        }
        let c = canon(&s, S::monomial(q(2, 1), -2));
        assert_eq!(s.classify_monodromy_free(&c, 4).unwrap(), Some(Coweight(vec![2])));
        let c = canon(&s, S::monomial(q(1, 1), -2));
        assert_eq!(s.classify_monodromy_free(&c, 4).unwrap(), None);
    }

    #[test]
    fn regular_oper_is_lambda_zero_regular() {
        let s = sl2();
        let v = S::new(0, vec![q(1, 1), q(-3, 2), q(2, 1)], 8);
        let op = s.embed_canonical(&canon(&s, v.clone())).unwrap();
        let got = s.to_lambda_nilpotent(&op, &Coweight(vec![0])).unwrap();
        let form = got.form().unwrap();
        assert!(is_lambda_regular(form));
        assert_eq!(form.b_part, LoopElement::single(s.lie().e(0), v));
    }

    #[test]
    fn triple_pole_is_not_member() {
        let s = sl2();
        let op = s.embed_canonical(&canon(&s, S::monomial(q(1, 1), -3))).unwrap();
        assert!(matches!(
            s.to_lambda_nilpotent(&op, &Coweight(vec![0])).unwrap(),
            Membership::NotMember { reason: Obstruction::Irregular, degree: -3 }
        ));
    }

    #[test]
    fn simple_pole_gives_nilpotent_residue() {
        let s = sl2();
        let c = canon(&s, S::exact(-2, vec![q(2, 1), q(1, 1)]));
        let op = s.embed_canonical(&c).unwrap();
        let form = s.to_lambda_nilpotent(&op, &Coweight(vec![2])).unwrap();
        assert!(!is_lambda_regular(form.form().unwrap()));
        assert_eq!(s.classify_monodromy_free(&c, 4).unwrap(), None);
    }

    #[test]
    fn untracked_residue_is_precision_exhausted() {
        let s = sl2();
        let op = s.embed_canonical(&canon(&s, S::zero_to(-3))).unwrap();
        assert!(matches!(s.to_lambda_nilpotent(&op, &Coweight(vec![1])), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn residue_class_is_weyl_invariant() {
        for label in ["A1", "A2", "B2", "G2"] {
            let s = OperSpace::for_label(label).unwrap();
            let rs = s.root_system();
            let mu: Vec<Q> = (0..rs.rank()).map(|i| q(-(i as i64) - 2, 1)).collect();
            let base: ResidueClass<Q> = s.residue_class_of_coweight(&mu);
            for w in rs.weyl_orbit(&mu, Lattice::Coweights).unwrap() {
                assert_eq!(s.residue_class_of_coweight::<Q>(&w), base, "{label}");
            }
        }
    }

    #[test]
    fn residue_class_of_forms() {
        let s = sl2();
        for m in 0..4i64 {
            let op = s.embed_canonical(&canon(&s, S::monomial(q(m * (m + 2), 4), -2))).unwrap();
            let form = s.to_lambda_nilpotent(&op, &Coweight(vec![m])).unwrap();
            let form = form.form().unwrap();
            assert_eq!(s.residue_class(&op).unwrap(), s.residue_class_of_form(form));
            assert_eq!(s.residue_class_of_form(form), s.residue_class_of_coweight(&[q(-m - 1, 1)]));
        }
        assert!(s.same_residue(&[q(-2, 1)], &[q(2, 1)]).unwrap());
    }

    #[test]
    fn dilation_weights() {
        let s = sl2();
        let c = canon(&s, S::monomial(q(1, 1), -2));
        assert_eq!(s.dilate_oper(&c, &q(3, 1)).unwrap(), c);
        let c = canon(&s, S::new(-1, vec![q(1, 1), q(2, 1)], 3));
        assert_eq!(s.dilate_oper(&c, &q(1, 1)).unwrap(), c);
        assert!(matches!(s.dilate_oper(&c, &q(0, 1)), Err(Error::ZeroScale)));
    }

    #[test]
    fn sl3_lambda_forms() {
        let s = OperSpace::for_label("A2").unwrap();
        let lie = s.lie();
        for lam in [[0i64, 0], [1, 0], [0, 2], [1, 1]] {
            // Miura image of u = -lambda/t
            let y = s.root_system().coweight_in_coroot_basis(&[q(lam[0], 1), q(lam[1], 1)]);
            let mut v = LoopElement::zero();
            for (i, c) in y.iter().enumerate() {
                v.add_at(lie.h(i), &S::new(-1, vec![-c.clone(), q(1, 1), q(i as i64, 1)], 8));
            }
            let op = s.operator(v).unwrap();
            let got = s.to_lambda_nilpotent(&op, &Coweight(lam.to_vec())).unwrap();
            assert!(is_lambda_regular(got.form().unwrap()), "{lam:?}: {got:?}");
            let c = s.reduce_to_canonical(&op).unwrap();
            assert_eq!(s.classify_monodromy_free(&c, 3).unwrap(), Some(Coweight(lam.to_vec())));
        }
    }
}
