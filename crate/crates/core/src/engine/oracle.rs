//! Brute-force dimension count that shares no code with the Gröbner path.
//!
//! All paths of each length are listed, the ideal in that length is spanned
//! by every `u*r*v`, and its rank is found by elimination.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Accumulator, Echelon};
use crate::quiver::QuiverSpec;

fn paths_of_length(spec: &QuiverSpec, len: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<Vec<usize>> = vec![Vec::new()];
    for step in 0..len {
        let mut next = Vec::new();
        for p in &cur {
            for (a, arrow) in spec.arrows.iter().enumerate() {
                if step == 0 || spec.arrows[*p.last().unwrap()].target == arrow.source {
                    let mut q = p.clone();
                    q.push(a);
                    next.push(q);
                }
            }
        }
        cur = next;
    }
    cur
}

/// Dimension of `kQ/<R>`, or `CapExceeded` if some path of length
/// `length_cap` survives.
pub fn oracle_dimension<F: Field>(spec: &QuiverSpec, field: &F, length_cap: usize) -> Result<usize> {
    let mut total = spec.vertices.len();
    let relations: Vec<(usize, Vec<(F::Elem, Vec<usize>)>)> = spec
        .relations
        .iter()
        .map(|r| {
            let terms = r
                .terms
                .iter()
                .map(|t| Ok((field.from_rational(&t.coefficient)?, t.path.clone())))
                .collect::<Result<Vec<_>>>()?;
            Ok((r.degree(), terms))
        })
        .collect::<Result<_>>()?;
    let src = |p: &[usize], fallback: usize| p.first().map_or(fallback, |&a| spec.arrows[a].source);
    let tgt = |p: &[usize], fallback: usize| p.last().map_or(fallback, |&a| spec.arrows[a].target);
    let mut by_len: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for d in 1..=length_cap {
        by_len.push(paths_of_length(spec, d));
        let paths = &by_len[d];
        let index: HashMap<&Vec<usize>, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut ech = Echelon::new(field, paths.len());
        for (k, terms) in &relations {
            if *k > d || terms.is_empty() {
                continue;
            }
            let (rs, rt) = (src(&terms[0].1, 0), tgt(&terms[0].1, 0));
            for i in 0..=d - k {
                for u in &by_len[i] {
                    if !u.is_empty() && tgt(u, 0) != rs {
                        continue;
                    }
                    for v in &by_len[d - k - i] {
                        if !v.is_empty() && src(v, 0) != rt {
                            continue;
                        }
                        let mut acc = Accumulator::new();
                        for (c, p) in terms {
                            let word: Vec<usize> = u.iter().chain(p).chain(v).copied().collect();
                            acc.add_term(field, index[&word], c);
                        }
                        let _ = ech.insert(&acc.finish(field));
                    }
                }
            }
        }
        let surviving = paths.len() - ech.rank();
        if surviving == 0 {
            return Ok(total);
        }
        total += surviving;
    }
    Err(Error::CapExceeded {
        what: "oracle path enumeration".into(),
        cap: length_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::quiver::dsl::parse;

    #[test]
    fn counts_gentle_example_by_hand() {
        let q = parse("vertices 1 2 3 4; arrow a: 1->2; arrow b: 2->3; arrow c: 3->4; rel a*b;").unwrap();
        assert_eq!(oracle_dimension(&q, &Rationals, 10).unwrap(), 8);
        assert_eq!(oracle_dimension(&parse("vertices v;").unwrap(), &Rationals, 3).unwrap(), 1);
    }

    #[test]
    fn characteristic_matters_for_some_relations() {
        // a*b + c*d and a*b - c*d span one line, but 2*a*b vanishes in F_2.
        let q = parse("vertices 1 2 3 4; arrow a: 1->2; arrow b: 2->4; arrow c: 1->3; arrow d: 3->4; rel 2*a*b;").unwrap();
        assert_eq!(oracle_dimension(&q, &Rationals, 5).unwrap(), 9);
        assert_eq!(oracle_dimension(&q, &PrimeField::new(2).unwrap(), 5).unwrap(), 10);
    }
}
