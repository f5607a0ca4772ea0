use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{ModulusContext, Residue};
use crate::error::{Error, Result};
use crate::magnus::MonomialIndex;

/// Number of variables and degree bound of a truncated series ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeriesShape {
    pub r: usize,
    pub degree_bound: usize,
}

impl SeriesShape {
    pub fn new(r: usize, degree_bound: usize) -> Self {
        assert!(r >= 1, "at least one variable");
        SeriesShape { r, degree_bound }
    }

    /// Number of monomials of degree exactly `d`.
    #[inline]
    pub fn block(&self, d: usize) -> usize {
        self.r.pow(d as u32)
    }

    /// Start of the degree-`d` block in the dense layout.
    #[inline]
    pub fn offset(&self, d: usize) -> usize {
        if self.r == 1 {
            d
        } else {
            (self.r.pow(d as u32) - 1) / (self.r - 1)
        }
    }

    pub fn len(&self) -> usize {
        self.offset(self.degree_bound + 1)
    }

    pub fn index(&self, m: &MonomialIndex) -> usize {
        self.offset(m.degree()) + m.rank(self.r)
    }
}

/// A series in `Z/ℓ^k⟨⟨z_1..z_r⟩⟩` modulo monomials of degree `> N`.
///
/// Coefficients are stored densely, degree block by degree block; within a
/// block monomials are ordered by [`MonomialIndex::rank`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    shape: SeriesShape,
    ctx: ModulusContext,
    coeffs: Vec<u64>,
}

impl TruncatedSeries {
    pub fn zero(r: usize, degree_bound: usize, ctx: ModulusContext) -> Self {
        let shape = SeriesShape::new(r, degree_bound);
        TruncatedSeries { shape, ctx, coeffs: vec![0; shape.len()] }
    }

    pub fn one(r: usize, degree_bound: usize, ctx: ModulusContext) -> Self {
        let mut s = Self::zero(r, degree_bound, ctx);
        s.coeffs[0] = 1 % ctx.modulus();
        s
    }

    /// The variable `z_i` (1-based).
    pub fn variable(r: usize, degree_bound: usize, ctx: ModulusContext, i: usize) -> Result<Self> {
        if i == 0 || i > r {
            return Err(Error::BadGenerator { index: i, rank: r });
        }
        let mut s = Self::zero(r, degree_bound, ctx);
        if degree_bound >= 1 {
            s.coeffs[i] = 1 % ctx.modulus();
        }
        Ok(s)
    }

    /// Builds a series from `(monomial, coefficient)` pairs; terms above the
    /// degree bound are dropped.
    pub fn from_terms<'a>(
        r: usize,
        degree_bound: usize,
        ctx: ModulusContext,
        terms: impl IntoIterator<Item = (&'a [usize], i64)>,
    ) -> Result<Self> {
        let mut s = Self::zero(r, degree_bound, ctx);
        for (letters, c) in terms {
            let m = MonomialIndex::from(letters);
            m.check_rank(r)?;
            if m.degree() <= degree_bound {
                let idx = s.shape.index(&m);
                s.coeffs[idx] = ctx.add(s.coeffs[idx], ctx.reduce(c));
            }
        }
        Ok(s)
    }

    pub fn shape(&self) -> SeriesShape {
        self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.r
    }

    pub fn degree_bound(&self) -> usize {
        self.shape.degree_bound
    }

    pub fn context(&self) -> ModulusContext {
        self.ctx
    }

    pub fn raw(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn constant(&self) -> Residue {
        self.ctx.wrap(self.coeffs[0])
    }

    /// Coefficient of a monomial; zero above the degree bound.
    pub fn coefficient(&self, m: &MonomialIndex) -> Residue {
        if m.degree() > self.shape.degree_bound || m.check_rank(self.shape.r).is_err() {
            return self.ctx.zero();
        }
        self.ctx.wrap(self.coeffs[self.shape.index(m)])
    }

    pub fn set_coefficient(&mut self, m: &MonomialIndex, value: Residue) -> Result<()> {
        self.check_scalar(&value)?;
        m.check_rank(self.shape.r)?;
        if m.degree() > self.shape.degree_bound {
            return Err(Error::DimensionMismatch(format!(
                "monomial {m} above degree bound {}",
                self.shape.degree_bound
            )));
        }
        let idx = self.shape.index(m);
        self.coeffs[idx] = value.value();
        Ok(())
    }

    /// Homogeneous degree-`d` block.
    pub fn homogeneous(&self, d: usize) -> &[u64] {
        let start = self.shape.offset(d);
        &self.coeffs[start..start + self.shape.block(d)]
    }

    pub fn set_homogeneous(&mut self, d: usize, values: &[u64]) {
        let start = self.shape.offset(d);
        let len = self.shape.block(d);
        assert_eq!(values.len(), len, "homogeneous block length");
        for (dst, &v) in self.coeffs[start..start + len].iter_mut().zip(values) {
            *dst = v % self.ctx.modulus();
        }
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        (0..=self.shape.degree_bound).find(|&d| self.homogeneous(d).iter().any(|&c| c != 0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero terms in layout order.
    pub fn terms(&self) -> impl Iterator<Item = (MonomialIndex, Residue)> + '_ {
        (0..=self.shape.degree_bound).flat_map(move |d| {
            self.homogeneous(d)
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(move |(i, &c)| (MonomialIndex::from_rank(self.shape.r, d, i), self.ctx.wrap(c)))
        })
    }

    /// Drops everything above degree `bound` (`bound ≤ N`).
    pub fn truncate(&self, bound: usize) -> Self {
        assert!(bound <= self.shape.degree_bound, "truncate can only lower the bound");
        let shape = SeriesShape::new(self.shape.r, bound);
        TruncatedSeries { shape, ctx: self.ctx, coeffs: self.coeffs[..shape.len()].to_vec() }
    }

    /// Raises the degree bound, filling the new degrees with zeros.
    pub fn zero_extend(&self, bound: usize) -> Self {
        assert!(bound >= self.shape.degree_bound, "zero_extend can only raise the bound");
        let shape = SeriesShape::new(self.shape.r, bound);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(shape.len(), 0);
        TruncatedSeries { shape, ctx: self.ctx, coeffs }
    }

    fn check_scalar(&self, value: &Residue) -> Result<()> {
        if value.context() != self.ctx {
            return Err(Error::ContextMismatch(format!(
                "scalar in {:?}, series in {:?}",
                value.context(),
                self.ctx
            )));
        }
        Ok(())
    }

    pub fn check_compatible(&self, other: &TruncatedSeries) -> Result<()> {
        if self.shape != other.shape || self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "series over (r={}, N={}, {:?}) vs (r={}, N={}, {:?})",
                self.shape.r,
                self.shape.degree_bound,
                self.ctx,
                other.shape.r,
                other.shape.degree_bound,
                other.ctx
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.ctx.add(a, b)).collect();
        Ok(TruncatedSeries { coeffs, ..*self })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.ctx.sub(a, b)).collect();
        Ok(TruncatedSeries { coeffs, ..*self })
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.neg(a)).collect();
        TruncatedSeries { coeffs, ..*self }
    }

    pub fn scale(&self, s: Residue) -> Result<Self> {
        self.check_scalar(&s)?;
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, s.value())).collect();
        Ok(TruncatedSeries { coeffs, ..*self })
    }

    /// Graded convolution, truncated at the degree bound.
    pub fn multiply(&self, other: &TruncatedSeries) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &TruncatedSeries) -> Self {
        let shape = self.shape;
        let ctx = self.ctx;
        let n = shape.degree_bound;
        let mut out = vec![0u64; shape.len()];
        let lo_a = self.valuation().unwrap_or(n + 1);
        let lo_b = other.valuation().unwrap_or(n + 1);
        for d1 in lo_a..=n {
            let a = self.homogeneous(d1);
            for d2 in lo_b..=(n - d1) {
                let b = other.homogeneous(d2);
                let stride = shape.block(d2);
                let base = shape.offset(d1 + d2);
                for (i, &ai) in a.iter().enumerate() {
                    if ai == 0 {
                        continue;
                    }
                    let dst = &mut out[base + i * stride..base + (i + 1) * stride];
                    for (o, &bj) in dst.iter_mut().zip(b) {
                        *o = ctx.mul_add(*o, ai, bj);
                    }
                }
            }
        }
        TruncatedSeries { shape, ctx, coeffs: out }
    }

    /// Lie bracket `ab - ba`.
    pub fn bracket(&self, other: &TruncatedSeries) -> Result<Self> {
        self.multiply(other)?.sub(&other.mul_unchecked(self))
    }

    /// Applies the unital ring endomorphism `z_i ↦ images[i] - 1`.
    ///
    /// When `self` is the Magnus image of a word `w`, the result is the Magnus
    /// image of `w` with each generator replaced by the corresponding image.
    pub fn substitute(&self, images: &[GroupElement]) -> Result<Self> {
        if images.len() != self.shape.r {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.shape.r
            )));
        }
        for img in images {
            self.check_compatible(img.series())?;
        }
        let mut units: Vec<TruncatedSeries> = images.iter().map(|g| g.series().clone()).collect();
        for u in &mut units {
            u.coeffs[0] = 0;
        }
        let mut out = TruncatedSeries::zero(self.shape.r, self.shape.degree_bound, self.ctx);
        let prefix = TruncatedSeries::one(self.shape.r, self.shape.degree_bound, self.ctx);
        self.substitute_into(&units, &mut out, &prefix, 0, 0);
        Ok(out)
    }

    /// Depth-first walk over words: `prefix` is the image of the word with
    /// degree `d` and in-block rank `rank`.
    fn substitute_into(
        &self,
        units: &[TruncatedSeries],
        out: &mut TruncatedSeries,
        prefix: &TruncatedSeries,
        d: usize,
        rank: usize,
    ) {
        let ctx = self.ctx;
        let c = self.coeffs[self.shape.offset(d) + rank];
        if c != 0 {
            for (o, &p) in out.coeffs.iter_mut().zip(&prefix.coeffs) {
                *o = ctx.mul_add(*o, c, p);
            }
        }
        if d == self.shape.degree_bound || prefix.is_zero() {
            return;
        }
        let r = self.shape.r;
        for (i, u) in units.iter().enumerate() {
            let child = rank * r + i;
            if !self.has_support_below(d + 1, child) {
                continue;
            }
            let next = prefix.mul_unchecked(u);
            self.substitute_into(units, out, &next, d + 1, child);
        }
    }

    /// Whether some monomial extending the degree-`d` word of rank `rank` has a
    /// nonzero coefficient.
    fn has_support_below(&self, d: usize, rank: usize) -> bool {
        let r = self.shape.r;
        let mut lo = rank;
        let mut width = 1;
        for e in d..=self.shape.degree_bound {
            let start = self.shape.offset(e);
            if self.coeffs[start + lo..start + lo + width].iter().any(|&c| c != 0) {
                return true;
            }
            lo *= r;
            width *= r;
        }
        false
    }

    /// Coefficients keyed by monomial digit strings, zeros omitted.
    pub fn to_table(&self) -> BTreeMap<String, u64> {
        self.terms().map(|(m, c)| (m.to_string(), c.value())).collect()
    }

    #[cfg(test)]
    pub(crate) fn from_raw(shape: SeriesShape, ctx: ModulusContext, coeffs: Vec<u64>) -> Self {
        debug_assert_eq!(coeffs.len(), shape.len());
        TruncatedSeries { shape, ctx, coeffs }
    }

    pub fn from_table(
        r: usize,
        degree_bound: usize,
        ctx: ModulusContext,
        table: &BTreeMap<String, i64>,
    ) -> Result<Self> {
        let mut s = Self::zero(r, degree_bound, ctx);
        for (key, &value) in table {
            let m: MonomialIndex = key.parse()?;
            m.check_rank(r)?;
            if m.degree() > degree_bound {
                return Err(Error::DimensionMismatch(format!(
                    "monomial {key:?} above degree bound {degree_bound}"
                )));
            }
            let idx = s.shape.index(&m);
            s.coeffs[idx] = ctx.reduce(value);
        }
        Ok(s)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[r={}, N={}, {:?}]", self.shape.r, self.shape.degree_bound, self.ctx)?;
        f.debug_map().entries(self.terms().map(|(m, c)| (m.to_string(), c.value()))).finish()
    }
}

/// A truncated series with constant term one, i.e. a unit of the truncated
/// ring. Elements of `π/[π]_{N+1}` are represented this way.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement(TruncatedSeries);

impl GroupElement {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if series.coeffs[0] != 1 % series.ctx.modulus() {
            return Err(Error::NotGroupLike(format!(
                "constant term {} instead of 1",
                series.coeffs[0]
            )));
        }
        Ok(GroupElement(series))
    }

    pub fn identity(r: usize, degree_bound: usize, ctx: ModulusContext) -> Self {
        GroupElement(TruncatedSeries::one(r, degree_bound, ctx))
    }

    /// `1 + z_i`.
    pub fn generator(r: usize, degree_bound: usize, ctx: ModulusContext, i: usize) -> Result<Self> {
        let mut s = TruncatedSeries::variable(r, degree_bound, ctx, i)?;
        s.coeffs[0] = 1 % ctx.modulus();
        Ok(GroupElement(s))
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.0
    }

    pub fn into_series(self) -> TruncatedSeries {
        self.0
    }

    pub fn context(&self) -> ModulusContext {
        self.0.ctx
    }

    pub fn rank(&self) -> usize {
        self.0.shape.r
    }

    pub fn degree_bound(&self) -> usize {
        self.0.shape.degree_bound
    }

    pub fn is_identity(&self) -> bool {
        self.0.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// `self - 1`, the augmentation part.
    pub fn augmentation(&self) -> TruncatedSeries {
        let mut s = self.0.clone();
        s.coeffs[0] = 0;
        s
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        Ok(GroupElement(self.0.multiply(&other.0)?))
    }

    pub(crate) fn mul_unchecked(&self, other: &GroupElement) -> GroupElement {
        GroupElement(self.0.mul_unchecked(&other.0))
    }

    /// Geometric series `Σ (-u)^m` for `self = 1 + u`.
    pub fn invert(&self) -> GroupElement {
        let minus_u = self.augmentation().neg();
        let mut result = TruncatedSeries::one(self.rank(), self.degree_bound(), self.context());
        let mut term = result.clone();
        for _ in 0..self.degree_bound() {
            term = term.mul_unchecked(&minus_u);
            if term.is_zero() {
                break;
            }
            for (o, &t) in result.coeffs.iter_mut().zip(&term.coeffs) {
                *o = self.0.ctx.add(*o, t);
            }
        }
        GroupElement(result)
    }

    /// Integer power by repeated squaring; valid for every `ℓ`.
    pub fn pow_int(&self, exp: i64) -> GroupElement {
        let base = if exp < 0 { self.invert() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut result = GroupElement::identity(self.rank(), self.degree_bound(), self.context());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        result
    }

    /// `Σ_m C(c, m) (self - 1)^m`, the continuous extension of integer powers
    /// to residue exponents. Needs `N < ℓ`.
    pub fn power(&self, c: Residue) -> Result<GroupElement> {
        let ctx = self.context();
        if c.context() != ctx {
            return Err(Error::ContextMismatch("exponent and element contexts differ".into()));
        }
        let u = self.augmentation();
        let mut result = TruncatedSeries::one(self.rank(), self.degree_bound(), ctx);
        let mut term = result.clone();
        for m in 1..=self.degree_bound() {
            term = term.mul_unchecked(&u);
            if term.is_zero() {
                break;
            }
            let b = ctx.binomial(c.value(), m)?;
            for (o, &t) in result.coeffs.iter_mut().zip(&term.coeffs) {
                *o = ctx.mul_add(*o, b, t);
            }
        }
        Ok(GroupElement(result))
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement> {
        self.0.check_compatible(&other.0)?;
        Ok(self
            .mul_unchecked(other)
            .mul_unchecked(&self.invert())
            .mul_unchecked(&other.invert()))
    }

    pub fn truncate(&self, bound: usize) -> GroupElement {
        GroupElement(self.0.truncate(bound))
    }

    pub fn substitute(&self, images: &[GroupElement]) -> Result<GroupElement> {
        GroupElement::new(self.0.substitute(images)?)
    }

    pub fn magnus_coefficient(&self, j: &MonomialIndex) -> Residue {
        self.0.coefficient(j)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement")?;
        fmt::Debug::fmt(&self.0, f)
    }
}
