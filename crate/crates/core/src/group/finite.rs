use crate::error::{CurvError, Result};

/// A finite group given by its full multiplication table.
///
/// Elements are the indices `0..order`. `table[i * order + j]` is `i·j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(rows: Vec<Vec<u32>>, names: Option<Vec<String>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(CurvError::InvalidGroup("empty multiplication table".into()));
        }
        if rows.iter().any(|r| r.len() != order) {
            return Err(CurvError::InvalidGroup("multiplication table is not square".into()));
        }
        let table: Vec<u32> = rows.into_iter().flatten().collect();
        if table.iter().any(|&e| e as usize >= order) {
            return Err(CurvError::InvalidGroup("table entry out of range".into()));
        }
        let at = |i: usize, j: usize| table[i * order + j] as usize;

        let identity = (0..order)
            .find(|&e| (0..order).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or_else(|| CurvError::InvalidGroup("table has no two-sided identity".into()))?;

        let mut inverse = Vec::with_capacity(order);
        for g in 0..order {
            let inv = (0..order)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or_else(|| CurvError::InvalidGroup(format!("element {g} has no inverse")))?;
            inverse.push(inv as u32);
        }

        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(CurvError::InvalidGroup(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }

        let names = match names {
            Some(n) if n.len() != order => {
                return Err(CurvError::InvalidGroup(format!(
                    "{} names given for a group of order {order}",
                    n.len()
                )))
            }
            Some(n) => n,
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != order {
            return Err(CurvError::InvalidGroup("element names are not distinct".into()));
        }

        Ok(FiniteGroup { order, table, inverse, identity: identity as u32, names })
    }

    /// Z/n with addition mod n.
    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| ((i + j) % n) as u32).collect())
            .collect();
        Self::from_table(rows, None).expect("cyclic table is a group")
    }

    /// The symmetric group on three letters, elements named by cycle notation.
    pub fn symmetric3() -> Self {
        // permutations of {0,1,2} as images; (g·h)(i) = g(h(i))
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let names = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        let rows = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| index([g[h[0]], g[h[1]], g[h[2]]]))
                    .collect()
            })
            .collect();
        Self::from_table(rows, Some(names.iter().map(|s| s.to_string()).collect()))
            .expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn contains(&self, a: u32) -> bool {
        (a as usize) < self.order
    }

    pub fn name(&self, a: u32) -> &str {
        &self.names[a as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// True when `map` is a bijective endomorphism of this group.
    pub fn is_automorphism(&self, map: &[u32]) -> bool {
        if map.len() != self.order || map.iter().any(|&x| !self.contains(x)) {
            return false;
        }
        let mut seen = vec![false; self.order];
        for &x in map {
            if std::mem::replace(&mut seen[x as usize], true) {
                return false;
            }
        }
        (0..self.order as u32).all(|a| {
            (0..self.order as u32)
                .all(|b| map[self.mul(a, b) as usize] == self.mul(map[a as usize], map[b as usize]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_nonabelian_of_order_six() {
        let g = FiniteGroup::symmetric3();
        assert_eq!(g.order(), 6);
        let t = g.lookup("(12)").unwrap();
        let c = g.lookup("(123)").unwrap();
        assert_ne!(g.mul(t, c), g.mul(c, t));
        assert_eq!(g.mul(c, c), g.lookup("(132)").unwrap());
        assert_eq!(g.inv(c), g.lookup("(132)").unwrap());
    }

    #[test]
    fn rejects_non_associative_table() {
        // a latin square with identity 0 that is not a group
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table(rows, None).is_err());
    }

    #[test]
    fn rejects_ragged_table() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]], None).is_err());
    }

    #[test]
    fn automorphism_check() {
        let z3 = FiniteGroup::cyclic(3);
        assert!(z3.is_automorphism(&[0, 2, 1]));
        assert!(!z3.is_automorphism(&[1, 2, 0]));
    }
}
