//! Finite Weyl groups of simply-laced root systems, enumerated by reduced words.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::divisorial::Word;
use crate::error::{Error, Result};

pub const DEFAULT_BOUND: usize = 1_000_000;

/// Cartan matrix of a product of simply-laced types, e.g. `A2`, `A1xA1`, `D4`.
pub fn cartan_matrix(cartan_type: &str) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::UnsupportedCartanType(cartan_type.to_string());
    let mut blocks: Vec<Vec<Vec<i64>>> = Vec::new();
    for part in cartan_type.split(['x', '×']).map(str::trim) {
        let (kind, n) = part.split_at(1.min(part.len()));
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        match (kind, n) {
            ("A", n) if n >= 1 => edges.extend((1..n).map(|i| (i - 1, i))),
            ("D", n) if n >= 4 => {
                edges.extend((1..n - 1).map(|i| (i - 1, i)));
                edges.push((n - 3, n - 1));
            }
            ("E", 6..=8) => {
                edges.extend((1..n - 1).map(|i| (i - 1, i)));
                edges.push((2, n - 1));
            }
            _ => return Err(bad()),
        }
        let mut c = vec![vec![0; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in edges {
            c[a][b] = -1;
            c[b][a] = -1;
        }
        blocks.push(c);
    }
    let total: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![0; total]; total];
    let mut offset = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[offset + i][offset + j] = *v;
            }
        }
        offset += b.len();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Element {
    word: Word,
    matrix: Vec<i64>,
}

/// A finite reflection group acting on root coordinates (in the simple root basis).
#[derive(Clone, Debug)]
pub struct WeylGroup {
    rank: usize,
    generators: Vec<Vec<i64>>,
    elements: Vec<Element>,
    index: HashMap<Vec<i64>, usize>,
}

fn mul(r: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x != 0 {
                for j in 0..r {
                    out[i * r + j] += x * b[k * r + j];
                }
            }
        }
    }
    out
}

impl WeylGroup {
    pub fn from_cartan_type(cartan_type: &str, bound: usize) -> Result<Self> {
        let c = cartan_matrix(cartan_type)?;
        let r = c.len();
        let generators = (0..r)
            .map(|i| {
                let mut m = vec![0; r * r];
                for j in 0..r {
                    m[j * r + j] = 1;
                }
                for j in 0..r {
                    m[i * r + j] -= c[i][j];
                }
                m
            })
            .collect();
        Self::from_reflections(r, generators, bound)
    }

    /// The group generated by the given matrices, listed in shortlex order of
    /// their smallest words.
    pub fn from_reflections(rank: usize, generators: Vec<Vec<i64>>, bound: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != rank * rank) {
            return Err(Error::RankMismatch {
                context: "reflection matrix entries",
                expected: rank * rank,
                found: g.len(),
            });
        }
        let mut identity = vec![0; rank * rank];
        for j in 0..rank {
            identity[j * rank + j] = 1;
        }
        let mut elements = vec![Element {
            word: Vec::new(),
            matrix: identity.clone(),
        }];
        let mut index = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(e) = queue.pop_front() {
            for (j, g) in generators.iter().enumerate() {
                let m = mul(rank, &elements[e].matrix, g);
                if index.contains_key(&m) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(Error::WeylGroupTooLarge(bound));
                }
                let mut word = elements[e].word.clone();
                word.push(j);
                index.insert(m.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(Element { word, matrix: m });
            }
        }
        Ok(WeylGroup {
            rank,
            generators,
            elements,
            index,
        })
    }

    /// Number of simple reflections.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Element indices in shortlex order; index 0 is the identity.
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.elements.len()
    }

    /// The shortlex-smallest reduced word of an element.
    pub fn word(&self, e: usize) -> &Word {
        &self.elements[e].word
    }

    pub fn length(&self, e: usize) -> usize {
        self.elements[e].word.len()
    }

    /// The element `s_{i1} ⋯ s_{ik}` for the word `[i1, …, ik]`.
    pub fn element_of(&self, word: &[usize]) -> Result<usize> {
        let mut m = self.elements[0].matrix.clone();
        for &i in word {
            let g = self
                .generators
                .get(i)
                .ok_or_else(|| Error::Schema(format!("no simple reflection {i}")))?;
            m = mul(self.rank, &m, g);
        }
        Ok(self.index[&m])
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.index[&mul(
            self.rank,
            &self.elements[a].matrix,
            &self.elements[b].matrix,
        )]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let mut w = self.elements[a].word.clone();
        w.reverse();
        self.element_of(&w).expect("letters are valid")
    }

    /// Root coordinates of `w(α_i)`.
    pub fn act_on_simple_root(&self, e: usize, i: usize) -> Vec<i64> {
        let r = self.rank;
        (0..r)
            .map(|row| self.elements[e].matrix[row * r + i])
            .collect()
    }

    fn maps_to_positive(&self, e: usize, i: usize) -> bool {
        self.act_on_simple_root(e, i).iter().all(|&c| c >= 0)
    }

    /// Elements of the parabolic subgroup generated by the reflections in `roots`.
    pub fn parabolic_subgroup(&self, roots: &BTreeSet<usize>) -> Vec<usize> {
        self.elements()
            .filter(|&e| self.word(e).iter().all(|i| roots.contains(i)))
            .collect()
    }

    /// Minimal length representatives of the left cosets `w W_I`, in shortlex order.
    pub fn min_coset_reps(&self, roots: &BTreeSet<usize>) -> Vec<usize> {
        self.elements()
            .filter(|&e| roots.iter().all(|&i| self.maps_to_positive(e, i)))
            .collect()
    }

    /// The coset `w W_I` in shortlex order.
    pub fn coset(&self, w: usize, roots: &BTreeSet<usize>) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .parabolic_subgroup(roots)
            .into_iter()
            .map(|v| self.multiply(w, v))
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_subsets(r: usize) -> Vec<BTreeSet<usize>> {
        (0..1usize << r)
            .map(|m| (0..r).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn orders() {
        for (t, n) in [("A1", 2), ("A1xA1", 4), ("A2", 6), ("A3", 24), ("D4", 192)] {
            assert_eq!(
                WeylGroup::from_cartan_type(t, DEFAULT_BOUND)
                    .unwrap()
                    .order(),
                n,
                "{t}"
            );
        }
        assert!(matches!(
            WeylGroup::from_cartan_type("B2", 10),
            Err(Error::UnsupportedCartanType(_))
        ));
        assert!(matches!(
            WeylGroup::from_cartan_type("A3", 10),
            Err(Error::WeylGroupTooLarge(10))
        ));
    }

    #[test]
    fn a2_words() {
        let w = WeylGroup::from_cartan_type("A2", DEFAULT_BOUND).unwrap();
        let words: Vec<&Word> = w.elements().map(|e| w.word(e)).collect();
        assert_eq!(
            words,
            vec![
                &vec![],
                &vec![0],
                &vec![1],
                &vec![0, 1],
                &vec![1, 0],
                &vec![0, 1, 0]
            ]
        );
        assert_eq!(
            w.element_of(&[1, 0, 1]).unwrap(),
            w.element_of(&[0, 1, 0]).unwrap()
        );
        // (s_b s_a)^2 = s_a s_b
        assert_eq!(
            w.element_of(&[1, 0, 1, 0]).unwrap(),
            w.element_of(&[0, 1]).unwrap()
        );
    }

    #[test]
    fn a2_coset_reps() {
        let w = WeylGroup::from_cartan_type("A2", DEFAULT_BOUND).unwrap();
        let reps = w.min_coset_reps(&BTreeSet::from([0]));
        let words: Vec<&Word> = reps.iter().map(|&e| w.word(e)).collect();
        assert_eq!(words, vec![&vec![], &vec![1], &vec![0, 1]]);
        assert_eq!(w.min_coset_reps(&BTreeSet::new()).len(), 6);
        assert_eq!(w.min_coset_reps(&BTreeSet::from([0, 1])), vec![0]);
    }

    #[test]
    fn coset_factorization_is_length_additive() {
        for t in ["A1", "A1xA1", "A2", "A3"] {
            let w = WeylGroup::from_cartan_type(t, DEFAULT_BOUND).unwrap();
            for roots in all_subsets(w.rank()) {
                let reps = w.min_coset_reps(&roots);
                let sub = w.parabolic_subgroup(&roots);
                assert_eq!(reps.len() * sub.len(), w.order());
                let mut seen = BTreeSet::new();
                for &u in &reps {
                    let coset = w.coset(u, &roots);
                    assert_eq!(coset.iter().map(|&e| w.length(e)).min(), Some(w.length(u)));
                    assert_eq!(
                        coset
                            .iter()
                            .filter(|&&e| w.length(e) == w.length(u))
                            .count(),
                        1
                    );
                    for &v in &sub {
                        let uv = w.multiply(u, v);
                        assert_eq!(w.length(uv), w.length(u) + w.length(v));
                        assert!(seen.insert(uv));
                    }
                }
                assert_eq!(seen.len(), w.order());
            }
        }
    }
}
