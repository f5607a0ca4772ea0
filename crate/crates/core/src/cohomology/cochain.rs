use std::fmt;
use std::sync::Arc;

use crate::coeff::linalg::{Matrix, PreparedSystem, Solution};
use crate::coeff::ModulusContext;
use crate::cohomology::{FiniteGroup, GModule};
use crate::error::{Error, Result};

/// An inhomogeneous `p`-cochain `G^p → M`, stored for every tuple.
///
/// Tuples are indexed big-endian in base `|G|`; each value is a vector of
/// length `rank(M)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    module: Arc<GModule>,
    degree: usize,
    values: Vec<u64>,
}

fn tuple_count(order: usize, p: usize) -> usize {
    order.pow(p as u32)
}

fn decode(order: usize, p: usize, mut idx: usize, out: &mut [usize]) {
    for slot in out[..p].iter_mut().rev() {
        *slot = idx % order;
        idx /= order;
    }
}

fn encode(order: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * order + g)
}

impl Cochain {
    pub fn zero(module: Arc<GModule>, degree: usize) -> Self {
        let len = tuple_count(module.group().order(), degree) * module.rank();
        Cochain { module, degree, values: vec![0; len] }
    }

    /// Builds a cochain from `f(g_1, …, g_p)`.
    pub fn from_fn(module: Arc<GModule>, degree: usize, mut f: impl FnMut(&[usize]) -> Vec<u64>) -> Result<Self> {
        let order = module.group().order();
        let rank = module.rank();
        let m = module.context().modulus();
        let mut values = Vec::with_capacity(tuple_count(order, degree) * rank);
        let mut tuple = vec![0; degree];
        for idx in 0..tuple_count(order, degree) {
            decode(order, degree, idx, &mut tuple);
            let v = f(&tuple);
            if v.len() != rank {
                return Err(Error::DimensionMismatch(format!("value of length {} in a rank-{rank} module", v.len())));
            }
            values.extend(v.into_iter().map(|x| x % m));
        }
        Ok(Cochain { module, degree, values })
    }

    /// Rank-one convenience: `f` returns a signed integer.
    pub fn from_scalar_fn(module: Arc<GModule>, degree: usize, mut f: impl FnMut(&[usize]) -> i64) -> Result<Self> {
        let ctx = module.context();
        Cochain::from_fn(module, degree, |t| vec![ctx.reduce(f(t))])
    }

    /// Values listed tuple by tuple, each of length `rank`.
    pub fn from_values(module: Arc<GModule>, degree: usize, values: Vec<u64>) -> Result<Self> {
        let len = tuple_count(module.group().order(), degree) * module.rank();
        if values.len() != len {
            return Err(Error::DimensionMismatch(format!("{} values, expected {len}", values.len())));
        }
        let m = module.context().modulus();
        let values = values.into_iter().map(|v| v % m).collect();
        Ok(Cochain { module, degree, values })
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    pub fn group(&self) -> &FiniteGroup {
        self.module.group()
    }

    pub fn context(&self) -> ModulusContext {
        self.module.context()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn raw(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, tuple: &[usize]) -> &[u64] {
        assert_eq!(tuple.len(), self.degree, "tuple length must equal the cochain degree");
        let r = self.module.rank();
        let i = encode(self.group().order(), tuple) * r;
        &self.values[i..i + r]
    }

    /// The single coordinate of a rank-one cochain.
    pub fn scalar(&self, tuple: &[usize]) -> u64 {
        self.value(tuple)[0]
    }

    pub fn set(&mut self, tuple: &[usize], v: &[u64]) {
        let r = self.module.rank();
        let i = encode(self.group().order(), tuple) * r;
        let m = self.context().modulus();
        for (slot, x) in self.values[i..i + r].iter_mut().zip(v) {
            *slot = x % m;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// All tuples `(g_1, …, g_p)` in storage order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> {
        let order = self.group().order();
        let p = self.degree;
        (0..tuple_count(order, p)).map(move |idx| {
            let mut t = vec![0; p];
            decode(order, p, idx, &mut t);
            t
        })
    }

    fn check_same(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || *self.module != *other.module {
            return Err(Error::ContextMismatch(format!(
                "degree {} cochain in {:?} vs degree {} cochain in {:?}",
                self.degree, self.module, other.degree, other.module
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_same(other)?;
        let ctx = self.context();
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| ctx.add(a, b)).collect();
        Ok(Cochain { module: self.module.clone(), degree: self.degree, values })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cochain {
        self.scale(self.context().neg(1 % self.context().modulus()))
    }

    pub fn scale(&self, s: u64) -> Cochain {
        let ctx = self.context();
        let values = self.values.iter().map(|&a| ctx.mul(a, s)).collect();
        Cochain { module: self.module.clone(), degree: self.degree, values }
    }

    /// `(Dc)(g_1..g_{p+1}) = g_1·c(g_2..) + Σ_i (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{p+1} c(g_1..g_p)`.
    pub fn coboundary(&self) -> Cochain {
        let g = self.group();
        let ctx = self.context();
        let rank = self.module.rank();
        let p = self.degree;
        let mut out = Cochain::zero(self.module.clone(), p + 1);
        let mut t = vec![0; p + 1];
        let mut face = vec![0; p];
        for idx in 0..tuple_count(g.order(), p + 1) {
            decode(g.order(), p + 1, idx, &mut t);
            let mut acc = self.module.act(t[0], self.value(&t[1..]));
            for i in 1..=p {
                face[..i - 1].copy_from_slice(&t[..i - 1]);
                face[i - 1] = g.mul(t[i - 1], t[i]);
                face[i..].copy_from_slice(&t[i + 1..]);
                let v = self.value(&face);
                for (a, &b) in acc.iter_mut().zip(v) {
                    *a = if i % 2 == 1 { ctx.sub(*a, b) } else { ctx.add(*a, b) };
                }
            }
            let v = self.value(&t[..p]);
            for (a, &b) in acc.iter_mut().zip(v) {
                *a = if (p + 1) % 2 == 1 { ctx.sub(*a, b) } else { ctx.add(*a, b) };
            }
            out.values[idx * rank..(idx + 1) * rank].copy_from_slice(&acc);
        }
        out
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }

    /// `(c ∪ d)(g_1..g_{p+q}) = c(g_1..g_p) ⊗ (g_1⋯g_p)·d(g_{p+1}..g_{p+q})`,
    /// valued in `M ⊗ N`.
    pub fn cup(&self, other: &Cochain) -> Result<Cochain> {
        let module = Arc::new(GModule::tensor(&self.module, &other.module)?);
        let g = self.group();
        let ctx = self.context();
        let (p, q) = (self.degree, other.degree);
        Cochain::from_fn(module, p + q, |t| {
            let prod = t[..p].iter().fold(g.identity(), |acc, &x| g.mul(acc, x));
            let left = self.value(&t[..p]);
            let right = other.module.act(prod, other.value(&t[p..]));
            left.iter().flat_map(|&a| right.iter().map(move |&b| ctx.mul(a, b))).collect()
        })
    }

    /// Pushes forward along a module map `f` (rows = rank of `target`).
    pub fn map(&self, target: Arc<GModule>, f: &Matrix) -> Result<Cochain> {
        self.module.check_morphism(&target, f)?;
        let rank = self.module.rank();
        let mut values = Vec::with_capacity(self.values.len() / rank.max(1) * target.rank());
        for chunk in self.values.chunks(rank.max(1)) {
            values.extend(f.mul_vec(chunk));
        }
        if rank == 0 {
            values = vec![0; tuple_count(self.group().order(), self.degree) * target.rank()];
        }
        Ok(Cochain { module: target, degree: self.degree, values })
    }

    /// Decides whether this cocycle is a coboundary; see [`CoboundarySolver`].
    pub fn is_coboundary(&self) -> Result<CoboundaryCheck> {
        CoboundarySolver::new(self.module.clone(), self.degree)?.check(self)
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(degree {}, {:?}, {:?})", self.degree, self.module, self.values)
    }
}

/// Outcome of a coboundary test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundaryCheck {
    /// A cochain `b` with `Db = z`.
    Coboundary(Cochain),
    /// A functional vanishing on every coboundary but not on `z`.
    NotCoboundary { certificate: Vec<u64> },
}

impl CoboundaryCheck {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryCheck::Coboundary(_))
    }

    pub fn witness(&self) -> Option<&Cochain> {
        match self {
            CoboundaryCheck::Coboundary(b) => Some(b),
            CoboundaryCheck::NotCoboundary { .. } => None,
        }
    }
}

/// The linear system `D: C^{p-1}(G, M) → C^p(G, M)` prepared once, for many
/// right-hand sides.
#[derive(Clone, Debug)]
pub struct CoboundarySolver {
    module: Arc<GModule>,
    degree: usize,
    system: PreparedSystem,
}

impl CoboundarySolver {
    pub fn new(module: Arc<GModule>, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::DimensionMismatch("0-cochains are never coboundaries of anything".into()));
        }
        let ctx = module.context();
        let order = module.group().order();
        let rank = module.rank();
        let cols = tuple_count(order, degree - 1) * rank;
        let rows = tuple_count(order, degree) * rank;
        let mut m = Matrix::zeros(ctx, rows, cols);
        let mut basis = Cochain::zero(module.clone(), degree - 1);
        for col in 0..cols {
            basis.values[col] = 1 % ctx.modulus();
            let image = basis.coboundary();
            for (row, &v) in image.values.iter().enumerate() {
                if v != 0 {
                    m.set(row, col, v);
                }
            }
            basis.values[col] = 0;
        }
        Ok(CoboundarySolver { module, degree, system: PreparedSystem::new(&m) })
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    /// Requires `Dz = 0`; returns a witness `b` with `Db = z` or a certificate.
    pub fn check(&self, z: &Cochain) -> Result<CoboundaryCheck> {
        if z.degree != self.degree || *z.module != *self.module {
            return Err(Error::ContextMismatch("cochain does not match the prepared system".into()));
        }
        if !z.is_cocycle() {
            return Err(Error::NotACocycle);
        }
        Ok(match self.system.solve(&z.values)? {
            Solution::Solved(x) => CoboundaryCheck::Coboundary(Cochain {
                module: self.module.clone(),
                degree: self.degree - 1,
                values: x,
            }),
            Solution::Inconsistent(certificate) => CoboundaryCheck::NotCoboundary { certificate },
        })
    }
}
