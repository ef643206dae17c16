//! Truncated census of quiver paths modulo the relations.
//!
//! Paths are grouped two ways: by the class of their exponent vector in
//! `Z^A / span{rel(a)}`, and by the equivalence generated by rewriting one
//! `p₊(a)` into `p₋(a)` without exceeding the length bound. Classes are also
//! compared through their torus weights, the vector of arrow counts in every
//! perfect matching.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use dimerwall_exact::{smith_normal_form, BigInt, IntMatrix};
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::dimer::{perfect_matchings, Quiver};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCensus {
    pub from: usize,
    pub to: usize,
    /// Paths of length at most the bound, including the trivial path.
    pub paths: usize,
    pub classes: usize,
    pub rewrite_classes: usize,
    /// Rewriting within the bound reaches every member of each class.
    pub confluent: bool,
    /// Distinct classes carry distinct torus weights.
    pub weights_distinct: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathCensus {
    pub max_len: usize,
    pub pairs: Vec<PairCensus>,
    pub confluent: bool,
    pub weights_distinct: bool,
}

impl PathCensus {
    pub fn pair(&self, from: usize, to: usize) -> &PairCensus {
        self.pairs.iter().find(|p| p.from == from && p.to == to).expect("pair")
    }
}

/// Coordinates on `Z^A / span{rel(a)}`: torsion residues then free part.
struct RelationQuotient {
    u: IntMatrix,
    factors: Vec<BigInt>,
}

impl RelationQuotient {
    fn new(q: &Quiver) -> RelationQuotient {
        let na = q.num_arrows();
        let cols: Vec<Vec<BigInt>> = q.rel.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let snf = smith_normal_form(&IntMatrix::from_columns(na, &cols));
        let factors = (0..na)
            .map(|i| if i < snf.s.cols() { snf.s.get(i, i).clone() } else { BigInt::zero() })
            .collect();
        RelationQuotient { u: snf.u, factors }
    }

    fn key(&self, x: &[i64]) -> Vec<BigInt> {
        let x: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.u
            .mul_vec(&x)
            .into_iter()
            .zip(&self.factors)
            .map(|(y, d)| if d.is_zero() { y } else { y.mod_floor(d) })
            .collect()
    }
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let n = p[y];
        p[y] = r;
        y = n;
    }
    r
}

pub fn path_census(q: &Quiver, max_len: usize) -> Result<PathCensus> {
    let matchings = perfect_matchings(&q.model)?;
    let quotient = RelationQuotient::new(q);

    // (start, arrows) for every path within the bound
    let mut paths: Vec<(usize, Vec<usize>)> = (0..q.num_vertices).map(|v| (v, Vec::new())).collect();
    let mut frontier = paths.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (s, p) in &frontier {
            let end = p.last().map_or(*s, |&a| q.arrows[a].target);
            for (a, arr) in q.arrows.iter().enumerate() {
                if arr.source == end {
                    let mut np = p.clone();
                    np.push(a);
                    next.push((*s, np));
                }
            }
        }
        paths.extend(next.iter().cloned());
        frontier = next;
    }
    let index: HashMap<(usize, Vec<usize>), usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let end_of = |(s, p): &(usize, Vec<usize>)| p.last().map_or(*s, |&a| q.arrows[a].target);

    let mut parent: Vec<usize> = (0..paths.len()).collect();
    for (i, (s, p)) in paths.iter().enumerate() {
        for a in 0..q.num_arrows() {
            let (from, to) = (&q.p_plus[a], &q.p_minus[a]);
            if p.len() < from.len() || p.len() - from.len() + to.len() > max_len {
                continue;
            }
            for pos in 0..=p.len() - from.len() {
                if p[pos..pos + from.len()] == from[..] {
                    let mut np = p[..pos].to_vec();
                    np.extend_from_slice(to);
                    np.extend_from_slice(&p[pos + from.len()..]);
                    let j = index[&(*s, np)];
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        groups.entry((p.0, end_of(p))).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for v in 0..q.num_vertices {
        for w in 0..q.num_vertices {
            let members = groups.get(&(v, w)).cloned().unwrap_or_default();
            let mut by_key: BTreeMap<Vec<BigInt>, BTreeSet<usize>> = BTreeMap::new();
            let mut weight_of: BTreeMap<Vec<BigInt>, BTreeSet<Vec<usize>>> = BTreeMap::new();
            let mut roots = BTreeSet::new();
            for &i in &members {
                let p = &paths[i].1;
                let key = quotient.key(&q.exponent(p));
                let weight: Vec<usize> = matchings
                    .matchings
                    .iter()
                    .map(|m| p.iter().filter(|&&a| m.mask >> a & 1 == 1).count())
                    .collect();
                let root = find(&mut parent, i);
                roots.insert(root);
                by_key.entry(key.clone()).or_default().insert(root);
                weight_of.entry(key).or_default().insert(weight);
            }
            let single_weight = weight_of.values().all(|s| s.len() == 1);
            let weights: BTreeSet<&Vec<usize>> = weight_of.values().flatten().collect();
            // a rewrite never changes the class, so roots split classes
            let confluent = by_key.values().all(|r| r.len() == 1) && roots.len() == by_key.len();
            pairs.push(PairCensus {
                from: v,
                to: w,
                paths: members.len(),
                classes: by_key.len(),
                rewrite_classes: roots.len(),
                confluent,
                weights_distinct: single_weight && weights.len() == by_key.len(),
            });
        }
    }
    Ok(PathCensus {
        max_len,
        confluent: pairs.iter().all(|p| p.confluent),
        weights_distinct: pairs.iter().all(|p| p.weights_distinct),
        pairs,
    })
}
