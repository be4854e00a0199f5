//! Finite extensions of the base field, given by an irreducible minimal
//! polynomial, with exact element arithmetic.
//!
//! A [`FieldHandle`] is a cheap reference-counted descriptor of either the
//! base field itself or a simple extension `F[x]/(m(x))`.  Elements are
//! coordinate vectors in the power basis `1, x, …, x^{d−1}`; all arithmetic
//! reduces modulo `m` and stays fully exact.

use crate::matrix::Matrix;
use crate::scalar::{BaseElem, BaseField};
use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
struct FieldInner {
    base: BaseField,
    /// Coefficients of the monic minimal polynomial below the leading term
    /// (constant first, length = degree).  `None` means the base field.
    minpoly: Option<Vec<BaseElem>>,
    degree: usize,
    /// Row `k` holds the coordinates of `x^{degree+k}` for `k < degree − 1`.
    reduction: Vec<Vec<BaseElem>>,
}

/// A field in the coefficient tower: the base field or one extension of it.
#[derive(Clone)]
pub struct FieldHandle(Arc<FieldInner>);

impl fmt::Debug for FieldHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldHandle({})", self.describe())
    }
}

impl PartialEq for FieldHandle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.base == other.0.base && self.0.minpoly == other.0.minpoly)
    }
}
impl Eq for FieldHandle {}

impl FieldHandle {
    /// The base field itself, as a degree-1 handle.
    pub fn base(base: BaseField) -> Result<Self> {
        base.validate()?;
        Ok(FieldHandle(Arc::new(FieldInner {
            base,
            minpoly: None,
            degree: 1,
            reduction: Vec::new(),
        })))
    }

    /// An extension `F[x]/(m)` for monic irreducible `m`, given as its full
    /// coefficient list, constant term first, leading coefficient included.
    pub fn extension(base: BaseField, minpoly_full: &[BaseElem]) -> Result<Self> {
        base.validate()?;
        if minpoly_full.len() < 2 {
            return Err(Error::Parse(
                "minimal polynomial must have positive degree".into(),
            ));
        }
        let lead = minpoly_full.last().unwrap();
        if !base.is_one(lead) {
            return Err(Error::Parse("minimal polynomial must be monic".into()));
        }
        let degree = minpoly_full.len() - 1;
        let low = minpoly_full[..degree].to_vec();
        check_irreducible(base, &low, degree)?;
        // x^degree = −(low); extend to x^{degree+k} by repeated multiplication.
        let mut reduction: Vec<Vec<BaseElem>> = Vec::new();
        let x_deg: Vec<BaseElem> = low.iter().map(|c| base.neg(c)).collect();
        let mut cur = x_deg.clone();
        for _ in 0..degree.saturating_sub(1) {
            reduction.push(cur.clone());
            // multiply by x: shift, then reduce the overflow coefficient.
            let overflow = cur[degree - 1].clone();
            let mut next = vec![base.zero(); degree];
            next[1..degree].clone_from_slice(&cur[..degree - 1]);
            for t in 0..degree {
                next[t] = base.add(&next[t], &base.mul(&overflow, &x_deg[t]));
            }
            cur = next;
        }
        Ok(FieldHandle(Arc::new(FieldInner {
            base,
            minpoly: Some(low),
            degree,
            reduction,
        })))
    }

    pub fn base_field(&self) -> BaseField {
        self.0.base
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_base(&self) -> bool {
        self.0.minpoly.is_none()
    }

    /// The degree-1 handle for the same base field.
    pub fn base_handle(&self) -> FieldHandle {
        FieldHandle::base(self.0.base).expect("base field was already validated")
    }

    /// Minimal polynomial as a full monic coefficient list (constant first),
    /// `[−gen, 1]`-style; `x − 1`-free base handles return `None`.
    pub fn minpoly_full(&self) -> Option<Vec<BaseElem>> {
        self.0.minpoly.as_ref().map(|low| {
            let mut full = low.clone();
            full.push(self.0.base.one());
            full
        })
    }

    pub fn describe(&self) -> String {
        match &self.0.minpoly {
            None => self.0.base.to_string(),
            Some(low) => {
                let coeffs: Vec<String> = low
                    .iter()
                    .map(|c| self.0.base.format(c))
                    .chain(std::iter::once("1".to_string()))
                    .collect();
                format!("{}[x]/({})", self.0.base, coeffs.join(","))
            }
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            handle: self.clone(),
            coords: vec![self.0.base.zero(); self.0.degree],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coords = vec![self.0.base.zero(); self.0.degree];
        coords[0] = self.0.base.one();
        FieldElement {
            handle: self.clone(),
            coords,
        }
    }

    /// The class of `x` (for a degree-1 extension `x + c`, this is `−c`).
    pub fn gen(&self) -> FieldElement {
        match &self.0.minpoly {
            None => self.one(),
            Some(low) => {
                if self.0.degree == 1 {
                    FieldElement {
                        handle: self.clone(),
                        coords: vec![self.0.base.neg(&low[0])],
                    }
                } else {
                    let mut coords = vec![self.0.base.zero(); self.0.degree];
                    coords[1] = self.0.base.one();
                    FieldElement {
                        handle: self.clone(),
                        coords,
                    }
                }
            }
        }
    }

    pub fn from_base(&self, c: &BaseElem) -> FieldElement {
        let mut coords = vec![self.0.base.zero(); self.0.degree];
        coords[0] = c.clone();
        FieldElement {
            handle: self.clone(),
            coords,
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_base(&self.0.base.from_i64(n))
    }

    pub fn from_coords(&self, coords: Vec<BaseElem>) -> Result<FieldElement> {
        if coords.len() != self.0.degree {
            return Err(Error::ShapeMismatch(format!(
                "expected {} coordinates, got {}",
                self.0.degree,
                coords.len()
            )));
        }
        Ok(FieldElement {
            handle: self.clone(),
            coords,
        })
    }

    /// The `d×d` base-field matrix of multiplication by `a` in the power
    /// basis.
    pub fn mult_matrix(&self, a: &FieldElement) -> Matrix {
        assert!(*self == a.handle, "element from a different field");
        let d = self.0.degree;
        let base = self.base_handle();
        let mut cols: Vec<Vec<BaseElem>> = Vec::with_capacity(d);
        let mut cur = a.clone();
        cols.push(cur.coords.clone());
        for _ in 1..d {
            cur = cur.mul_gen();
            cols.push(cur.coords.clone());
        }
        Matrix::from_fn(&base, d, d, |r, c| base.from_base(&cols[c][r]))
    }

    /// Companion matrix: multiplication by the generator.
    pub fn companion(&self) -> Matrix {
        self.mult_matrix(&self.gen())
    }

    /// Block-diagonal generator action on `n` copies of this field, viewed
    /// as a base vector space of dimension `n·d`.
    pub fn standard_gen_action(&self, n: usize) -> Matrix {
        let comp = self.companion();
        Matrix::block_diag(&self.base_handle(), &vec![comp; n])
    }
}

/// An element of the field denoted by its handle.
#[derive(Clone)]
pub struct FieldElement {
    handle: FieldHandle,
    coords: Vec<BaseElem>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.handle == other.handle && self.coords == other.coords
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn handle(&self) -> &FieldHandle {
        &self.handle
    }

    pub fn coords(&self) -> &[BaseElem] {
        &self.coords
    }

    /// The constant coordinate (useful for degree-1 handles).
    pub fn base_value(&self) -> &BaseElem {
        &self.coords[0]
    }

    pub fn is_zero(&self) -> bool {
        let base = self.handle.0.base;
        self.coords.iter().all(|c| base.is_zero(c))
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        let base = self.handle.0.base;
        FieldElement {
            handle: self.handle.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| base.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        let base = self.handle.0.base;
        FieldElement {
            handle: self.handle.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| base.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> FieldElement {
        let base = self.handle.0.base;
        FieldElement {
            handle: self.handle.clone(),
            coords: self.coords.iter().map(|a| base.neg(a)).collect(),
        }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.check(other);
        let base = self.handle.0.base;
        let d = self.handle.0.degree;
        if d == 1 {
            return FieldElement {
                handle: self.handle.clone(),
                coords: vec![base.mul(&self.coords[0], &other.coords[0])],
            };
        }
        // Convolution up to degree 2d−2, then fold with the reduction table.
        let mut conv = vec![base.zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if base.is_zero(a) {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if base.is_zero(b) {
                    continue;
                }
                conv[i + j] = base.add(&conv[i + j], &base.mul(a, b));
            }
        }
        let mut coords: Vec<BaseElem> = conv[..d].to_vec();
        for k in 0..(d - 1) {
            let c = &conv[d + k];
            if base.is_zero(c) {
                continue;
            }
            let row = &self.handle.0.reduction[k];
            for t in 0..d {
                coords[t] = base.add(&coords[t], &base.mul(c, &row[t]));
            }
        }
        FieldElement {
            handle: self.handle.clone(),
            coords,
        }
    }

    /// Multiplication by the generator (one reduction step; cheaper than a
    /// full product).
    pub fn mul_gen(&self) -> FieldElement {
        self.mul(&self.handle.gen())
    }

    pub fn scale(&self, c: &BaseElem) -> FieldElement {
        let base = self.handle.0.base;
        FieldElement {
            handle: self.handle.clone(),
            coords: self.coords.iter().map(|a| base.mul(a, c)).collect(),
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::Singular("division by zero".into()));
        }
        let base = self.handle.0.base;
        if self.handle.0.degree == 1 {
            return Ok(FieldElement {
                handle: self.handle.clone(),
                coords: vec![base.inv(&self.coords[0])?],
            });
        }
        let minpoly = self
            .handle
            .minpoly_full()
            .expect("extension handle has a minimal polynomial");
        // Extended Euclid: s·a + t·m = gcd (a nonzero of degree < deg m ⇒
        // the gcd is a nonzero constant).
        let (g, s) = poly_half_ext_gcd(base, &self.coords, &minpoly);
        let g0 = poly_constant(base, &g)
            .ok_or_else(|| Error::Singular("minimal polynomial is not irreducible".into()))?;
        let g_inv = base.inv(&g0)?;
        let mut coords = vec![base.zero(); self.handle.0.degree];
        for (i, c) in s.iter().enumerate() {
            if i < coords.len() {
                coords[i] = base.mul(c, &g_inv);
            }
        }
        // s has degree < deg m, so no further reduction is needed.
        Ok(FieldElement {
            handle: self.handle.clone(),
            coords,
        })
    }

    pub fn pow(&self, mut n: u64) -> FieldElement {
        let mut acc = self.handle.one();
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        acc
    }

    pub fn format(&self) -> String {
        let base = self.handle.0.base;
        let parts: Vec<String> = self.coords.iter().map(|c| base.format(c)).collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.join(","))
        }
    }

    fn check(&self, other: &FieldElement) {
        assert!(
            self.handle == other.handle,
            "elements from different fields"
        );
    }
}

// ---------------------------------------------------------------------------
// polynomial helpers over the base field (dense, constant-first)
// ---------------------------------------------------------------------------

fn poly_trim(base: BaseField, p: &mut Vec<BaseElem>) {
    while let Some(last) = p.last() {
        if base.is_zero(last) && p.len() > 1 {
            p.pop();
        } else {
            break;
        }
    }
}

fn poly_is_zero(base: BaseField, p: &[BaseElem]) -> bool {
    p.iter().all(|c| base.is_zero(c))
}

fn poly_deg(base: BaseField, p: &[BaseElem]) -> usize {
    for i in (0..p.len()).rev() {
        if !base.is_zero(&p[i]) {
            return i;
        }
    }
    0
}

fn poly_constant(base: BaseField, p: &[BaseElem]) -> Option<BaseElem> {
    if poly_is_zero(base, p) || poly_deg(base, p) > 0 {
        None
    } else {
        Some(p[0].clone())
    }
}

fn poly_sub_scaled(base: BaseField, a: &mut Vec<BaseElem>, b: &[BaseElem], c: &BaseElem, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, base.zero());
    }
    for (i, bc) in b.iter().enumerate() {
        let t = base.mul(bc, c);
        a[i + shift] = base.sub(&a[i + shift], &t);
    }
    poly_trim(base, a);
}

fn poly_mul(base: BaseField, a: &[BaseElem], b: &[BaseElem]) -> Vec<BaseElem> {
    if poly_is_zero(base, a) || poly_is_zero(base, b) {
        return vec![base.zero()];
    }
    let mut out = vec![base.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if base.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = base.add(&out[i + j], &base.mul(x, y));
        }
    }
    poly_trim(base, &mut out);
    out
}

fn poly_divmod(base: BaseField, a: &[BaseElem], b: &[BaseElem]) -> (Vec<BaseElem>, Vec<BaseElem>) {
    let db = poly_deg(base, b);
    let lead_inv = base
        .inv(&b[db])
        .expect("division by the zero polynomial");
    let mut rem = a.to_vec();
    poly_trim(base, &mut rem);
    let mut quot = vec![base.zero(); rem.len().saturating_sub(db) + 1];
    while !poly_is_zero(base, &rem) && poly_deg(base, &rem) >= db {
        let dr = poly_deg(base, &rem);
        let c = base.mul(&rem[dr], &lead_inv);
        quot[dr - db] = base.add(&quot[dr - db], &c);
        poly_sub_scaled(base, &mut rem, b, &c, dr - db);
        if poly_deg(base, &rem) == dr && !poly_is_zero(base, &rem) {
            // the leading term must have cancelled
            rem[dr] = base.zero();
            poly_trim(base, &mut rem);
        }
    }
    poly_trim(base, &mut quot);
    (quot, rem)
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)` and `g = gcd(a, m)`.
fn poly_half_ext_gcd(base: BaseField, a: &[BaseElem], m: &[BaseElem]) -> (Vec<BaseElem>, Vec<BaseElem>) {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    poly_trim(base, &mut r0);
    poly_trim(base, &mut r1);
    let mut s0 = vec![base.zero()];
    let mut s1 = vec![base.one()];
    while !poly_is_zero(base, &r1) {
        let (q, r) = poly_divmod(base, &r0, &r1);
        let qs = poly_mul(base, &q, &s1);
        let mut s_new = s0.clone();
        if s_new.len() < qs.len() {
            s_new.resize(qs.len(), base.zero());
        }
        for (i, c) in qs.iter().enumerate() {
            s_new[i] = base.sub(&s_new[i], c);
        }
        poly_trim(base, &mut s_new);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s_new;
    }
    (r0, s0)
}

fn poly_gcd(base: BaseField, a: &[BaseElem], b: &[BaseElem]) -> Vec<BaseElem> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(base, &mut r0);
    poly_trim(base, &mut r1);
    while !poly_is_zero(base, &r1) {
        let (_, r) = poly_divmod(base, &r0, &r1);
        r0 = r1;
        r1 = r;
    }
    r0
}

// ---------------------------------------------------------------------------
// irreducibility
// ---------------------------------------------------------------------------

const DIVISOR_BOUND: i128 = 1_000_000_000_000;

fn check_irreducible(base: BaseField, low: &[BaseElem], degree: usize) -> Result<()> {
    if degree == 1 {
        return Ok(());
    }
    if degree > 4 {
        return Err(Error::Unsupported(format!(
            "irreducibility testing is limited to degree ≤ 4 (got {degree})"
        )));
    }
    match base {
        BaseField::Rationals => check_irreducible_rationals(low, degree),
        BaseField::Prime(p) => check_irreducible_prime(p, low, degree),
    }
}

fn check_irreducible_rationals(low: &[BaseElem], degree: usize) -> Result<()> {
    let coeffs: Vec<BigRational> = low
        .iter()
        .map(|c| match c {
            BaseElem::Rat(q) => q.clone(),
            BaseElem::Mod(_) => unreachable!("rational base field"),
        })
        .collect();
    // Substitute x = y / L for L = lcm of denominators: the polynomial
    // y^d + Σ c_i L^{d−i} y^i is monic with integer coefficients and is
    // irreducible over the rationals iff the original is.
    let mut l = BigInt::one();
    for c in &coeffs {
        l = num::integer::lcm(l, c.denom().clone());
    }
    let mut b: Vec<BigInt> = Vec::with_capacity(degree + 1);
    for (i, c) in coeffs.iter().enumerate() {
        let scaled = c * BigRational::from_integer(l.pow((degree - i) as u32));
        debug_assert!(scaled.denom().is_one());
        b.push(scaled.numer().clone());
    }
    b.push(BigInt::one());

    if has_integer_root(&b)? {
        return Err(Error::NotAField(
            "minimal polynomial has a rational root".into(),
        ));
    }
    if degree == 4 && splits_into_quadratics(&b)? {
        return Err(Error::NotAField(
            "minimal polynomial factors into two quadratics".into(),
        ));
    }
    Ok(())
}

fn eval_int_poly(b: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in b.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn signed_divisors(n: &BigInt) -> Result<Vec<i128>> {
    let abs = n.abs();
    if abs > BigInt::from(DIVISOR_BOUND) {
        return Err(Error::Unsupported(
            "minimal polynomial coefficients too large for the factorization test".into(),
        ));
    }
    let m: i128 = abs.to_string().parse().expect("bounded integer");
    let mut out = Vec::new();
    let mut d = 1i128;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            out.push(-d);
            let e = m / d;
            if e != d {
                out.push(e);
                out.push(-e);
            }
        }
        d += 1;
    }
    Ok(out)
}

fn has_integer_root(b: &[BigInt]) -> Result<bool> {
    if b[0].is_zero() {
        return Ok(true); // root at 0
    }
    for r in signed_divisors(&b[0])? {
        if eval_int_poly(b, &BigInt::from(r)).is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Tests whether a monic integer quartic splits as a product of two monic
/// integer quadratics (by Gauss's lemma this covers all quadratic splits).
fn splits_into_quadratics(b: &[BigInt]) -> Result<bool> {
    debug_assert_eq!(b.len(), 5);
    if b[0].is_zero() {
        return Ok(true);
    }
    let b0 = &b[0];
    let b1 = &b[1];
    let b2 = &b[2];
    let b3 = &b[3];
    for u in signed_divisors(b0)? {
        let u_big = BigInt::from(u);
        let v_big = b0 / &u_big;
        // y^4 + b3 y^3 + b2 y^2 + b1 y + b0 = (y^2 + a y + u)(y^2 + c y + v)
        // forces a + c = b3 and a·c = b2 − u − v.
        let sum = b3.clone();
        let prod = b2 - &u_big - &v_big;
        let disc = &sum * &sum - BigInt::from(4) * &prod;
        if disc.sign() == num::bigint::Sign::Minus {
            continue;
        }
        let root = disc.sqrt();
        if &root * &root != disc {
            continue;
        }
        for s in [root.clone(), -root] {
            let two_a = &sum + &s;
            if (&two_a % BigInt::from(2)).is_zero() {
                let a = two_a / BigInt::from(2);
                let c = &sum - &a;
                if &a * &v_big + &c * &u_big == *b1 {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

fn check_irreducible_prime(p: u64, low: &[BaseElem], degree: usize) -> Result<()> {
    let base = BaseField::Prime(p);
    let mut f: Vec<BaseElem> = low.to_vec();
    f.push(base.one());
    // Distinct-degree sieve: f of degree n ≤ 4 is irreducible iff
    // gcd(x^{p^i} − x, f) is constant for all 1 ≤ i ≤ n/2.
    let mut xp = vec![base.zero(), base.one()]; // the polynomial x
    for i in 1..=(degree / 2).max(1) {
        xp = poly_powmod(base, &xp, p, &f);
        if i > degree / 2 {
            break;
        }
        // gcd(x^{p^i} − x, f)
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, base.zero());
        }
        diff[1] = base.sub(&diff[1], &base.one());
        poly_trim(base, &mut diff);
        let g = poly_gcd(base, &f, &diff);
        if poly_deg(base, &g) > 0 {
            return Err(Error::NotAField(format!(
                "minimal polynomial has a factor of degree ≤ {i} over F{p}"
            )));
        }
    }
    Ok(())
}

/// Computes `g(x)^e mod f` over the prime field.
fn poly_powmod(base: BaseField, g: &[BaseElem], mut e: u64, f: &[BaseElem]) -> Vec<BaseElem> {
    let mut acc = vec![base.one()];
    let mut b = g.to_vec();
    let (_, r) = poly_divmod(base, &b, f);
    b = r;
    while e > 0 {
        if e & 1 == 1 {
            let prod = poly_mul(base, &acc, &b);
            let (_, r) = poly_divmod(base, &prod, f);
            acc = r;
        }
        let sq = poly_mul(base, &b, &b);
        let (_, r) = poly_divmod(base, &sq, f);
        b = r;
        e >>= 1;
    }
    acc
}
