//! Chevalley bases, nilpotent adjoint exponentials and gauge actions.
//!
//! The basis of `g` is indexed as
//! `e_alpha` (positive roots, `0..n`), `f_alpha = e_{-alpha}` (`n..2n`) and
//! `h_i = alpha_i^vee` (`2n..2n+rank`), with roots in the global
//! height-then-reverse-lexicographic order of [`RootSystem::positive_roots`].
//!
//! Structure constants `N_{a,b}` (with `[e_a, e_b] = N_{a,b} e_{a+b}`) come
//! from the extraspecial-pair algorithm: every extraspecial pair gets sign
//! `+1`, the remaining constants follow from the Chevalley relations. The
//! resulting table is checked against the Jacobi identity, antisymmetry and
//! the Serre relations before a [`LieBasis`] is handed out.
//!
//! Gauge convention: a group element `g` sends `d/dt + A` to
//! `d/dt + Ad_g(A) - (d/dt g) g^-1`. With it, the sl2 Miura image of
//! `d/dt + f + u h` is `u^2 + u'`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::formal::LaurentSeries;
use crate::rootdata::{Coweight, RootSystem};
use crate::scalar::Scalar;

/// Kind of a basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    E(usize),
    F(usize),
    H(usize),
}

#[derive(Debug, Clone)]
pub struct LieBasis {
    rs: RootSystem,
    /// `table[a][b]` is the sparse expansion of `[x_a, x_b]`.
    table: Vec<Vec<Vec<(usize, i64)>>>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

fn vadd(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vneg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

fn is_positive(a: &[i64]) -> bool {
    a.iter().all(|&c| c >= 0)
}

struct ConstantSolver<'a> {
    rs: &'a RootSystem,
    memo: HashMap<(Vec<i64>, Vec<i64>), BigRational>,
}

impl<'a> ConstantSolver<'a> {
    fn norm(&self, a: &[i64]) -> BigRational {
        self.rs.inner_roots(a, a)
    }

    fn order_index(&self, a: &[i64]) -> usize {
        self.rs.root_index(a).expect("positive root")
    }

    /// Largest `p` with `b - p a` a root.
    fn string_down(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut p = 0;
        let mut cur = b.to_vec();
        loop {
            cur = cur.iter().zip(a).map(|(x, y)| x - y).collect();
            if cur.iter().all(|&c| c == 0) || !self.rs.is_root(&cur) {
                return p;
            }
            p += 1;
        }
    }

    fn extraspecial(&self, gamma: &[i64]) -> (Vec<i64>, Vec<i64>) {
        for alpha in self.rs.positive_roots() {
            let beta: Vec<i64> = gamma.iter().zip(alpha).map(|(g, a)| g - a).collect();
            if is_positive(&beta) && self.rs.is_root(&beta) {
                return (alpha.clone(), beta);
            }
        }
        unreachable!("non-simple positive roots decompose")
    }

    /// `N_{a,b}` for roots with `a + b` a root.
    fn n(&mut self, a: &[i64], b: &[i64]) -> BigRational {
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = self.compute(a, b);
        self.memo.insert(key, v.clone());
        v
    }

    fn n_or_zero(&mut self, a: &[i64], b: &[i64]) -> BigRational {
        let s = vadd(a, b);
        if s.iter().all(|&c| c == 0) || !self.rs.is_root(&s) {
            BigRational::zero()
        } else {
            self.n(a, b)
        }
    }

    fn compute(&mut self, a: &[i64], b: &[i64]) -> BigRational {
        let pa = is_positive(a);
        let pb = is_positive(b);
        let c = vneg(&vadd(a, b));
        match (pa, pb) {
            (true, true) => {
                if self.order_index(a) > self.order_index(b) {
                    return -self.n(b, a);
                }
                let gamma = vadd(a, b);
                let (alpha, beta) = self.extraspecial(&gamma);
                let n_ab = BigRational::from_integer((self.string_down(&alpha, &beta) + 1).into());
                if alpha == a {
                    return n_ab;
                }
                let ma = vneg(&alpha);
                let mb = vneg(&beta);
                let zeta_minus_alpha = vadd(b, &ma);
                let xi_minus_alpha = vadd(a, &ma);
                let mut acc = BigRational::zero();
                if self.rs.is_root(&zeta_minus_alpha) {
                    let t = self.n(b, &ma) * self.n_or_zero(a, &mb);
                    acc += t / self.norm(&zeta_minus_alpha);
                }
                if self.rs.is_root(&xi_minus_alpha) {
                    let t = self.n(&ma, a) * self.n_or_zero(b, &mb);
                    acc += t / self.norm(&xi_minus_alpha);
                }
                acc * self.norm(&gamma) / n_ab
            }
            (false, false) => -self.n(&vneg(a), &vneg(b)),
            (true, false) => {
                if is_positive(&vadd(a, b)) {
                    // c negative: N_{a,b} = (c,c)/(a,a) N_{b,c}
                    self.norm(&c) / self.norm(a) * self.n(b, &c)
                } else {
                    self.norm(&c) / self.norm(b) * self.n(&c, a)
                }
            }
            (false, true) => -self.n(b, a),
        }
    }
}

impl LieBasis {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn n_positive(&self) -> usize {
        self.rs.positive_roots().len()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn dim(&self) -> usize {
        2 * self.n_positive() + self.rank()
    }

    pub fn e(&self, r: usize) -> usize {
        r
    }

    pub fn f(&self, r: usize) -> usize {
        self.n_positive() + r
    }

    pub fn h(&self, i: usize) -> usize {
        2 * self.n_positive() + i
    }

    pub fn kind(&self, idx: usize) -> BasisKind {
        let n = self.n_positive();
        if idx < n {
            BasisKind::E(idx)
        } else if idx < 2 * n {
            BasisKind::F(idx - n)
        } else {
            BasisKind::H(idx - 2 * n)
        }
    }

    /// Index of the positive root `alpha_i` in the root list.
    pub fn simple(&self, i: usize) -> usize {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        self.rs.root_index(&v).unwrap()
    }

    pub fn root(&self, r: usize) -> &[i64] {
        &self.rs.positive_roots()[r]
    }

    /// Weight of a basis vector (zero for the Cartan part).
    pub fn weight_of(&self, idx: usize) -> Vec<i64> {
        match self.kind(idx) {
            BasisKind::E(r) => self.root(r).to_vec(),
            BasisKind::F(r) => vneg(self.root(r)),
            BasisKind::H(_) => vec![0; self.rank()],
        }
    }

    /// Principal grading: `ad rho^vee` eigenvalue.
    pub fn grade(&self, idx: usize) -> i64 {
        self.weight_of(idx).iter().sum()
    }

    pub fn max_grade(&self) -> i64 {
        RootSystem::height(self.rs.highest_root())
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, i64)] {
        &self.table[a][b]
    }

    /// `sum_i f_i`.
    pub fn p_minus<T: Scalar>(&self) -> LieElement<T> {
        let mut x = LieElement::zero(self.dim());
        for i in 0..self.rank() {
            x.0[self.f(self.simple(i))] = T::one();
        }
        x
    }

    /// `p_+ = sum_i c_i e_i` completing `{p_-, 2 rho^vee, p_+}` to an sl2-triple.
    pub fn p_plus<T: Scalar>(&self) -> LieElement<T> {
        let two_rho = self.two_rho_check_in_h();
        let mut x = LieElement::zero(self.dim());
        for (i, c) in two_rho.iter().enumerate() {
            x.0[self.e(self.simple(i))] = T::from_rational(c);
        }
        x
    }

    /// Coefficients of `2 rho^vee` in the `h_i` basis.
    pub fn two_rho_check_in_h(&self) -> Vec<BigRational> {
        let ones: Vec<BigRational> = (0..self.rank()).map(|_| BigRational::from_integer(2.into())).collect();
        self.rs.coweight_in_coroot_basis(&ones)
    }

    /// A coweight as an element of the Cartan subalgebra.
    pub fn coweight_element<T: Scalar>(&self, cw: &[BigRational]) -> LieElement<T> {
        let y = self.rs.coweight_in_coroot_basis(cw);
        let mut x = LieElement::zero(self.dim());
        for (i, c) in y.iter().enumerate() {
            x.0[self.h(i)] = T::from_rational(c);
        }
        x
    }

    pub fn bracket<T: Scalar>(&self, x: &LieElement<T>, y: &LieElement<T>) -> LieElement<T> {
        let mut out = LieElement::<T>::zero(self.dim());
        for (a, xa) in x.0.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.0.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                for &(c, k) in &self.table[a][b] {
                    out.0[c] = out.0[c].clone() + T::from_i64(k) * xa.clone() * yb.clone();
                }
            }
        }
        out
    }

    pub fn bracket_loop<T: Scalar>(&self, x: &LoopElement<T>, y: &LoopElement<T>) -> LoopElement<T> {
        let mut out = LoopElement::zero();
        for (&a, xa) in &x.0 {
            for (&b, yb) in &y.0 {
                let entries = &self.table[a][b];
                if entries.is_empty() {
                    continue;
                }
                let prod = xa.mul(yb);
                for &(c, k) in entries {
                    out.add_at(c, &prod.scale(&T::from_i64(k)));
                }
            }
        }
        out
    }

    fn check_nilpotent<T: Scalar>(&self, x: &LoopElement<T>) -> Result<()> {
        if x.0.keys().all(|&k| matches!(self.kind(k), BasisKind::E(_))) {
            Ok(())
        } else {
            Err(Error::NotNilpotent)
        }
    }

    /// `exp(ad X) Y = sum_k ad_X^k(Y) / k!` for `X` in `n(K)`; the sum is
    /// finite because `ad X` raises the principal grade.
    pub fn exp_ad<T: Scalar>(&self, x: &LoopElement<T>, y: &LoopElement<T>) -> Result<LoopElement<T>> {
        self.check_nilpotent(x)?;
        let mut out = y.clone();
        let mut term = y.clone();
        let max_steps = 2 * self.max_grade() + 1;
        for k in 1..=max_steps {
            term = self.bracket_loop(x, &term).scale(&T::ratio(1, k));
            if term.0.is_empty() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Constant version of [`Self::exp_ad`].
    pub fn exp_ad_const<T: Scalar>(&self, x: &LieElement<T>, y: &LieElement<T>) -> Result<LieElement<T>> {
        if x.0.iter().enumerate().any(|(k, c)| !c.is_zero() && !matches!(self.kind(k), BasisKind::E(_))) {
            return Err(Error::NotNilpotent);
        }
        let mut out = y.clone();
        let mut term = y.clone();
        for k in 1..=(2 * self.max_grade() + 1) {
            term = self.bracket(x, &term).scale(&T::ratio(1, k));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Coefficient of `d/dt + A` after the gauge transformation by `g`.
    pub fn gauge_transform<T: Scalar>(&self, a: &LoopElement<T>, g: &UnipotentGauge<T>) -> LoopElement<T> {
        let mut cur = a.clone();
        for (r, x) in g.factors.iter().rev() {
            let gen = LoopElement::single(self.e(*r), x.clone());
            cur = self.exp_ad(&gen, &cur).expect("root vector factors are nilpotent");
            // derivative term: sum_k ad^k(x' e)/(k+1)! collapses to x' e
            cur.add_at(self.e(*r), &x.derivative().negate());
        }
        cur
    }

    /// Gauge transformation by the cocharacter `t^mu`: `e_alpha` picks up
    /// `t^<alpha,mu>`, `f_alpha` picks up `t^-<alpha,mu>`, and `mu/t` is
    /// subtracted.
    pub fn gauge_by_cocharacter<T: Scalar>(&self, a: &LoopElement<T>, mu: &Coweight) -> LoopElement<T> {
        let mut out = LoopElement::zero();
        for (&k, s) in &a.0 {
            let shift = match self.kind(k) {
                BasisKind::E(r) => self.rs.pair_root(self.root(r), mu).unwrap(),
                BasisKind::F(r) => -self.rs.pair_root(self.root(r), mu).unwrap(),
                BasisKind::H(_) => 0,
            };
            out.add_at(k, &s.shift(shift));
        }
        let cw: Vec<BigRational> = mu.0.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        let mu_h = self.coweight_element::<T>(&cw);
        for (k, c) in mu_h.0.iter().enumerate() {
            if !c.is_zero() {
                out.add_at(k, &LaurentSeries::monomial(-c.clone(), -1));
            }
        }
        out
    }

    fn check_structure(&self) -> Result<()> {
        let dim = self.dim();
        let rank = self.rank();
        for a in 0..dim {
            for b in 0..dim {
                let ab: BTreeMap<usize, i64> = self.table[a][b].iter().copied().collect();
                let ba: BTreeMap<usize, i64> = self.table[b][a].iter().map(|&(c, k)| (c, -k)).collect();
                if ab != ba {
                    return Err(Error::StructureCheck(format!(
                        "antisymmetry fails for [{}, {}]",
                        self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        for i in 0..rank {
            let (e, f, h) = (self.e(self.simple(i)), self.f(self.simple(i)), self.h(i));
            if self.table[e][f] != vec![(h, 1)] {
                return Err(Error::StructureCheck(format!("[e_{i}, f_{i}] != h_{i}")));
            }
            for j in 0..rank {
                let ej = self.e(self.simple(j));
                let want = self.rs.cartan()[j][i];
                let expect = if want == 0 { Vec::new() } else { vec![(ej, want)] };
                if self.table[h][ej] != expect {
                    return Err(Error::StructureCheck(format!("[h_{i}, e_{j}] != A_ji e_{j}")));
                }
            }
        }
        self.check_jacobi()?;
        self.check_serre()
    }

    fn bracket_sparse(&self, x: &BTreeMap<usize, i64>, b: usize) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for (&a, &k) in x {
            for &(c, m) in &self.table[a][b] {
                *out.entry(c).or_insert(0) += k * m;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    fn check_jacobi(&self) -> Result<()> {
        let dim = self.dim();
        for x in 0..dim {
            for y in (x + 1)..dim {
                let xy: BTreeMap<usize, i64> = self.table[x][y].iter().copied().collect();
                for z in (y + 1)..dim {
                    let yz: BTreeMap<usize, i64> = self.table[y][z].iter().copied().collect();
                    let zx: BTreeMap<usize, i64> = self.table[z][x].iter().copied().collect();
                    // [[x,y],z] + [[y,z],x] + [[z,x],y]
                    let mut total = self.bracket_sparse(&xy, z);
                    for (c, k) in self.bracket_sparse(&yz, x) {
                        *total.entry(c).or_insert(0) += k;
                    }
                    for (c, k) in self.bracket_sparse(&zx, y) {
                        *total.entry(c).or_insert(0) += k;
                    }
                    if total.values().any(|&v| v != 0) {
                        return Err(Error::StructureCheck(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.labels[x], self.labels[y], self.labels[z]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_serre(&self) -> Result<()> {
        let rank = self.rank();
        for i in 0..rank {
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let steps = 1 - self.rs.cartan()[j][i];
                for (gen_of, label) in [(0usize, 'e'), (1usize, 'f')] {
                    let pick = |r: usize| if gen_of == 0 { self.e(r) } else { self.f(r) };
                    let gi = pick(self.simple(i));
                    let mut cur: BTreeMap<usize, i64> = BTreeMap::from([(pick(self.simple(j)), 1)]);
                    for _ in 0..steps {
                        let mut next = BTreeMap::new();
                        for (&a, &k) in &cur {
                            for &(c, m) in &self.table[gi][a] {
                                *next.entry(c).or_insert(0) += k * m;
                            }
                        }
                        next.retain(|_, v| *v != 0);
                        cur = next;
                    }
                    if !cur.is_empty() {
                        return Err(Error::StructureCheck(format!("Serre relation fails for ({label}_{i}, {label}_{j})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Build the Chevalley basis of the simple Lie algebra of `rs`, running the
/// structural self-checks.
pub fn build_lie_basis(rs: &RootSystem) -> Result<LieBasis> {
    let n = rs.positive_roots().len();
    let rank = rs.rank();
    let dim = 2 * n + rank;
    let signed_root = |idx: usize| -> Option<Vec<i64>> {
        if idx < n {
            Some(rs.positive_roots()[idx].clone())
        } else if idx < 2 * n {
            Some(vneg(&rs.positive_roots()[idx - n]))
        } else {
            None
        }
    };
    let basis_of_root = |v: &[i64]| -> usize {
        if is_positive(v) {
            rs.root_index(v).unwrap()
        } else {
            n + rs.root_index(&vneg(v)).unwrap()
        }
    };
    let mut solver = ConstantSolver { rs, memo: HashMap::new() };
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let entry = match (signed_root(a), signed_root(b)) {
                (Some(ra), Some(rb)) => {
                    let s = vadd(&ra, &rb);
                    if s.iter().all(|&c| c == 0) {
                        // [e_alpha, e_-alpha] = h_alpha
                        let (sign, pos) = if is_positive(&ra) { (1, ra.clone()) } else { (-1, rb.clone()) };
                        rs.coroot_of(&pos)
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| c != 0)
                            .map(|(i, &c)| (2 * n + i, sign * c))
                            .collect()
                    } else if rs.is_root(&s) {
                        let v = solver.n(&ra, &rb);
                        if !v.is_integer() {
                            return Err(Error::StructureCheck(format!("non-integral N for {ra:?}, {rb:?}")));
                        }
                        vec![(basis_of_root(&s), v.to_integer().to_i64().unwrap())]
                    } else {
                        Vec::new()
                    }
                }
                (None, Some(rb)) => {
                    let i = a - 2 * n;
                    let c = rs.root_on_simple_coroot(&rb, i);
                    if c == 0 { Vec::new() } else { vec![(b, c)] }
                }
                (Some(ra), None) => {
                    let i = b - 2 * n;
                    let c = rs.root_on_simple_coroot(&ra, i);
                    if c == 0 { Vec::new() } else { vec![(a, -c)] }
                }
                (None, None) => Vec::new(),
            };
            table[a][b] = entry;
        }
    }
    let fmt_root = |v: &[i64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    let mut labels = Vec::with_capacity(dim);
    for r in rs.positive_roots() {
        labels.push(format!("e[{}]", fmt_root(r)));
    }
    for r in rs.positive_roots() {
        labels.push(format!("f[{}]", fmt_root(r)));
    }
    for i in 0..rank {
        labels.push(format!("h{}", i + 1));
    }
    let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
    let basis = LieBasis { rs: rs.clone(), table, labels, index };
    basis.check_structure()?;
    Ok(basis)
}

/// Constant element of `g`, dense in the Chevalley basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement<T>(pub Vec<T>);

impl<T: Scalar> LieElement<T> {
    pub fn zero(dim: usize) -> Self {
        LieElement(vec![T::zero(); dim])
    }

    pub fn basis(dim: usize, idx: usize) -> Self {
        let mut x = Self::zero(dim);
        x.0[idx] = T::one();
        x
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        LieElement(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LieElement(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        LieElement(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// The constant loop `x` (exact series).
    pub fn to_loop(&self) -> LoopElement<T> {
        let mut out = LoopElement::zero();
        for (k, c) in self.0.iter().enumerate() {
            if !c.is_zero() {
                out.0.insert(k, LaurentSeries::constant(c.clone()));
            }
        }
        out
    }
}

/// `g`-valued Laurent series; absent components are exactly zero.
#[derive(Debug, Clone)]
pub struct LoopElement<T>(pub BTreeMap<usize, LaurentSeries<T>>);

impl<T: Scalar> PartialEq for LoopElement<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<T: Scalar> Default for LoopElement<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> LoopElement<T> {
    pub fn zero() -> Self {
        LoopElement(BTreeMap::new())
    }

    pub fn single(idx: usize, s: LaurentSeries<T>) -> Self {
        let mut x = Self::zero();
        x.add_at(idx, &s);
        x
    }

    pub fn get(&self, idx: usize) -> LaurentSeries<T> {
        self.0.get(&idx).cloned().unwrap_or_else(LaurentSeries::zero)
    }

    pub fn add_at(&mut self, idx: usize, s: &LaurentSeries<T>) {
        let next = match self.0.get(&idx) {
            Some(cur) => cur.add(s),
            None => s.clone(),
        };
        if next.is_exact() && next.is_zero() {
            self.0.remove(&idx);
        } else {
            self.0.insert(idx, next);
        }
    }

    pub fn set(&mut self, idx: usize, s: LaurentSeries<T>) {
        if s.is_exact() && s.is_zero() {
            self.0.remove(&idx);
        } else {
            self.0.insert(idx, s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, s) in &other.0 {
            out.add_at(k, s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = LoopElement::zero();
        for (&k, s) in &self.0 {
            out.set(k, s.scale(c));
        }
        out
    }

    pub fn mul_series(&self, s: &LaurentSeries<T>) -> Self {
        let mut out = LoopElement::zero();
        for (&k, x) in &self.0 {
            out.set(k, x.mul(s));
        }
        out
    }

    /// Lowest precision among components (`None` when all are exact).
    pub fn precision(&self) -> Option<i64> {
        self.0.values().filter_map(|s| s.precision()).min()
    }

    pub fn truncate(&self, p: i64) -> Self {
        let mut out = LoopElement::zero();
        for (&k, s) in &self.0 {
            out.set(k, s.truncate(p));
        }
        out
    }

    /// Coefficientwise congruence on the common tracked range.
    pub fn congruent(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<usize> = self.0.keys().chain(other.0.keys()).copied().collect();
        keys.into_iter().all(|k| self.get(k).congruent(&other.get(k)))
    }

    /// Constant obtained by reading the coefficient of `t^n` of every
    /// component; fails when some component does not track `t^n`.
    pub fn coefficient(&self, n: i64, dim: usize) -> Result<LieElement<T>> {
        let mut out = LieElement::zero(dim);
        for (&k, s) in &self.0 {
            out.0[k] = s.coeff(n).ok_or(Error::PrecisionExhausted {
                needed: n + 1,
                available: s.precision().unwrap_or(i64::MAX),
            })?;
        }
        Ok(out)
    }
}

/// Ordered product `prod exp(x_alpha(t) e_alpha)`.
#[derive(Debug, Clone)]
pub struct UnipotentGauge<T> {
    factors: Vec<(usize, LaurentSeries<T>)>,
}

impl<T: Scalar> UnipotentGauge<T> {
    pub fn identity() -> Self {
        UnipotentGauge { factors: Vec::new() }
    }

    /// One factor per root, sorted into the global root order.
    pub fn ordered(mut factors: Vec<(usize, LaurentSeries<T>)>) -> Result<Self> {
        factors.sort_by_key(|(r, _)| *r);
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse("root repeated in unipotent gauge".into()));
        }
        Ok(UnipotentGauge { factors })
    }

    /// Arbitrary word in root-vector exponentials, kept in the given order.
    pub fn word(factors: Vec<(usize, LaurentSeries<T>)>) -> Self {
        UnipotentGauge { factors }
    }

    pub fn factors(&self) -> &[(usize, LaurentSeries<T>)] {
        &self.factors
    }

    /// The product `self * other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        UnipotentGauge { factors }
    }

    pub fn inverse(&self) -> Self {
        UnipotentGauge { factors: self.factors.iter().rev().map(|(r, x)| (*r, x.negate())).collect() }
    }
}
