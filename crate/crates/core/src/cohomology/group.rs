use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group on `0..order` given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    /// `(generator, order)` when the group is cyclic and element `i` is `generator^i`.
    cyclic: Option<(usize, usize)>,
    generators: Vec<usize>,
}

/// JSON description of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { order: usize },
    /// `Z/m_1 × … × Z/m_s`, elements in mixed radix with the last factor fastest.
    Abelian { orders: Vec<usize> },
    Table { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic { order } => FiniteGroup::cyclic(*order),
            GroupSpec::Abelian { orders } => FiniteGroup::abelian(orders),
            GroupSpec::Table { table } => FiniteGroup::from_table(table.clone()),
        }
    }
}

impl FiniteGroup {
    /// Validates associativity, a two-sided identity and inverses.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != order || r.iter().any(|&v| v >= order)) {
            return Err(Error::InvalidGroup("table is not square over 0..order".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let m = |a: usize, b: usize| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{a} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::InvalidGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        let mut g = FiniteGroup { order, table, identity, inverses, cyclic: None, generators: vec![] };
        g.generators = g.greedy_generators();
        if identity == 0 && order > 1 && g.element_order(1) == order && (0..order).all(|i| g.pow(1, i as i64) == i) {
            g.cyclic = Some((1, order));
            g.generators = vec![1];
        }
        Ok(g)
    }

    pub fn cyclic(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        let table = (0..order).flat_map(|a| (0..order).map(move |b| (a + b) % order)).collect();
        let inverses = (0..order).map(|a| (order - a) % order).collect();
        Ok(FiniteGroup {
            order,
            table,
            identity: 0,
            inverses,
            cyclic: (order > 1).then_some((1, order)),
            generators: if order > 1 { vec![1] } else { vec![] },
        })
    }

    pub fn abelian(orders: &[usize]) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::InvalidGroup("factor orders must be positive".into()));
        }
        if orders.len() == 1 {
            return FiniteGroup::cyclic(orders[0]);
        }
        let order: usize = orders.iter().product();
        let digits = |mut x: usize| {
            let mut d = vec![0; orders.len()];
            for (slot, &m) in d.iter_mut().zip(orders).rev() {
                *slot = x % m;
                x /= m;
            }
            d
        };
        let encode = |d: &[usize]| d.iter().zip(orders).fold(0, |acc, (&x, &m)| acc * m + x);
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            let da = digits(a);
            for b in 0..order {
                let db = digits(b);
                let s: Vec<usize> = da.iter().zip(&db).zip(orders).map(|((x, y), m)| (x + y) % m).collect();
                table.push(encode(&s));
            }
        }
        let inverses = (0..order)
            .map(|a| encode(&digits(a).iter().zip(orders).map(|(x, m)| (m - x) % m).collect::<Vec<_>>()))
            .collect();
        let generators = (0..orders.len())
            .filter(|&i| orders[i] > 1)
            .map(|i| {
                let mut d = vec![0; orders.len()];
                d[i] = 1;
                encode(&d)
            })
            .collect();
        Ok(FiniteGroup { order, table, identity: 0, inverses, cyclic: None, generators })
    }

    /// Direct product; element `(a, b)` is `a·|B| + b`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let order = a.order * b.order;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                table.push(a.mul(x / b.order, y / b.order) * b.order + b.mul(x % b.order, y % b.order));
            }
        }
        let inverses = (0..order).map(|x| a.inv(x / b.order) * b.order + b.inv(x % b.order)).collect();
        let generators = a
            .generators
            .iter()
            .map(|&g| g * b.order + b.identity)
            .chain(b.generators.iter().map(|&h| a.identity * b.order + h))
            .collect();
        FiniteGroup {
            order,
            table,
            identity: a.identity * b.order + b.identity,
            inverses,
            cyclic: None,
            generators,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        (0..e.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn cyclic_presentation(&self) -> Option<(usize, usize)> {
        self.cyclic
    }

    /// A generating set (a single generator for cyclic groups).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Rows of the multiplication table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// For each element, a word in [`generators`](Self::generators) reaching it:
    /// `(parent, generator)` with `element = parent · generator`, in BFS order.
    pub fn spanning_tree(&self) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = std::collections::VecDeque::from([self.identity]);
        let mut edges = Vec::new();
        while let Some(g) = queue.pop_front() {
            for &s in &self.generators {
                let h = self.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    edges.push((g, s, h));
                    queue.push_back(h);
                }
            }
        }
        edges
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity] = true;
        for g in 0..self.order {
            if span[g] {
                continue;
            }
            gens.push(g);
            // closure of the current subgroup
            let mut frontier: Vec<usize> = (0..self.order).filter(|&x| span[x]).collect();
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !span[y] {
                        span[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_product() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(z3.mul(2, 2), 1);
        assert_eq!(z3.inv(1), 2);
        assert_eq!(z3.cyclic_presentation(), Some((1, 3)));
        let p = FiniteGroup::product(&z3, &z3);
        assert_eq!(p.order(), 9);
        assert!(p.is_abelian());
        assert_eq!(p.generators().len(), 2);
        assert_eq!(p.spanning_tree().len(), 8);
        assert_eq!(FiniteGroup::from_table(p.table()).unwrap().table(), p.table());
        assert_eq!(FiniteGroup::abelian(&[3, 3]).unwrap().table(), p.table());
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]]).is_err());
        // S3 as permutations of three points
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        let s3 = FiniteGroup::from_table(table).unwrap();
        assert!(!s3.is_abelian());
        assert_eq!(s3.cyclic_presentation(), None);
        assert_eq!(s3.spanning_tree().len(), 5);
    }
}
