//! Partition comparison: NMI, ARI and the size-weighted best-match F-measure.
//!
//! Partitions are given as per-node labels; the labels themselves carry no
//! meaning beyond equality.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sparse contingency table `n_ij = |X_i ∩ Y_j|` with marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    /// Non-zero cells `(i, j, n_ij)`.
    pub cells: Vec<(usize, usize, u64)>,
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
    pub total: u64,
}

impl ContingencyTable {
    pub fn new(left: &[usize], right: &[usize]) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::NodeSetMismatch {
                left: left.len(),
                right: right.len(),
            });
        }
        let (left, rows) = dense(left);
        let (right, cols) = dense(right);
        let mut pairs: Vec<(usize, usize)> = left.into_iter().zip(right).collect();
        pairs.sort_unstable();
        let mut cells: Vec<(usize, usize, u64)> = Vec::new();
        for (i, j) in pairs {
            match cells.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += 1,
                _ => cells.push((i, j, 1)),
            }
        }
        let total = rows.iter().sum();
        Ok(ContingencyTable {
            cells,
            rows,
            cols,
            total,
        })
    }

    /// True when the two partitions are equal up to relabeling.
    pub fn is_bijective(&self) -> bool {
        self.cells
            .iter()
            .all(|&(i, j, n)| self.rows[i] == n && self.cols[j] == n)
    }
}

/// Dense labels `0..k` plus the class sizes.
fn dense(labels: &[usize]) -> (Vec<usize>, Vec<u64>) {
    let mut map = HashMap::new();
    let mut sizes: Vec<u64> = Vec::new();
    let dense = labels
        .iter()
        .map(|&l| {
            let id = *map.entry(l).or_insert_with(|| {
                sizes.push(0);
                sizes.len() - 1
            });
            sizes[id] += 1;
            id
        })
        .collect();
    (dense, sizes)
}

fn entropy(counts: &[u64], total: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `2 I(X;Y) / (H(X) + H(Y))`.
///
/// Partitions equal up to relabeling score exactly 1.
pub fn nmi(left: &[usize], right: &[usize]) -> Result<f64> {
    let table = ContingencyTable::new(left, right)?;
    if table.total == 0 {
        return Err(Error::EmptyNodeSet);
    }
    if table.is_bijective() {
        return Ok(1.0);
    }
    let n = table.total as f64;
    let h_left = entropy(&table.rows, n);
    let h_right = entropy(&table.cols, n);
    let mutual: f64 = table
        .cells
        .iter()
        .map(|&(i, j, c)| {
            let c = c as f64;
            c / n * (c * n / (table.rows[i] as f64 * table.cols[j] as f64)).ln()
        })
        .sum();
    Ok((2.0 * mutual / (h_left + h_right)).clamp(0.0, 1.0))
}

fn pairs(c: u64) -> f64 {
    (c as f64) * (c as f64 - 1.0) / 2.0
}

/// Adjusted Rand index under the permutation model.
///
/// Identical partitions (including the degenerate all-in-one and
/// all-singleton cases) score exactly 1.
pub fn ari(left: &[usize], right: &[usize]) -> Result<f64> {
    let table = ContingencyTable::new(left, right)?;
    if table.total == 0 {
        return Err(Error::EmptyNodeSet);
    }
    let index: f64 = table.cells.iter().map(|&(_, _, c)| pairs(c)).sum();
    let sum_rows: f64 = table.rows.iter().map(|&c| pairs(c)).sum();
    let sum_cols: f64 = table.cols.iter().map(|&c| pairs(c)).sum();
    let total = pairs(table.total);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sum_rows * sum_cols / total;
    let max = 0.5 * (sum_rows + sum_cols);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

/// `Σ_r (|X_r| / |V|) · max_s 2|X_r ∩ Y_s| / (|X_r| + |Y_s|)` over the
/// detected communities `X` (given as per-node labels on `V`) and the first
/// `top_k` reference communities `Y` (node-index sets, possibly overlapping,
/// listed best first). `top_k = None` uses every reference community.
pub fn f_measure(
    detected: &[usize],
    reference: &[Vec<usize>],
    top_k: Option<usize>,
) -> Result<f64> {
    let k = top_k.unwrap_or(reference.len());
    if k > reference.len() {
        return Err(Error::param(
            "top_k",
            format!("{k} exceeds the {} reference communities", reference.len()),
        ));
    }
    let n = detected.len();
    if n == 0 {
        return Err(Error::EmptyNodeSet);
    }
    let (detected, sizes) = dense(detected);
    let mut best = vec![0f64; sizes.len()];
    let mut overlap: HashMap<usize, u64> = HashMap::new();
    for community in &reference[..k] {
        overlap.clear();
        for &node in community {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
            *overlap.entry(detected[node]).or_insert(0) += 1;
        }
        let y = community.len() as f64;
        for (&r, &shared) in &overlap {
            let score = 2.0 * shared as f64 / (sizes[r] as f64 + y);
            if score > best[r] {
                best[r] = score;
            }
        }
    }
    Ok(sizes
        .iter()
        .zip(&best)
        .map(|(&s, &b)| s as f64 / n as f64 * b)
        .sum())
}

/// Two labeled partitions restricted to their common nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aligned {
    pub nodes: Vec<String>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Nodes present in only one of the inputs.
    pub dropped_nodes: usize,
}

/// Intersects two `(node, community)` listings by node label. Community
/// labels are mapped to integers per side.
pub fn align_by_label(left: &[(String, String)], right: &[(String, String)]) -> Aligned {
    let mut right_map: HashMap<&str, &str> = HashMap::with_capacity(right.len());
    for (node, c) in right {
        right_map.insert(node, c);
    }
    let mut left_ids: HashMap<&str, usize> = HashMap::new();
    let mut right_ids: HashMap<&str, usize> = HashMap::new();
    let mut out = Aligned {
        nodes: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
        dropped_nodes: 0,
    };
    let mut matched = 0usize;
    for (node, lc) in left {
        let Some(rc) = right_map.get(node.as_str()) else {
            continue;
        };
        matched += 1;
        let next = left_ids.len();
        out.left.push(*left_ids.entry(lc).or_insert(next));
        let next = right_ids.len();
        out.right.push(*right_ids.entry(rc).or_insert(next));
        out.nodes.push(node.clone());
    }
    out.dropped_nodes = (left.len() - matched) + (right.len() - matched);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_and_relabeled() {
        let p = [0, 0, 1, 1, 2, 2, 2];
        let q = [5, 5, 9, 9, 1, 1, 1];
        assert_eq!(nmi(&p, &p).unwrap(), 1.0);
        assert_eq!(nmi(&p, &q).unwrap(), 1.0);
        assert_eq!(ari(&p, &p).unwrap(), 1.0);
        assert_eq!(ari(&p, &q).unwrap(), 1.0);
        assert_eq!(ari(&[0; 5], &[3; 5]).unwrap(), 1.0);
        assert_eq!(ari(&[0, 1, 2], &[2, 0, 1]).unwrap(), 1.0);
    }

    #[test]
    fn trivial_reference_has_no_information() {
        assert_eq!(nmi(&[0, 0, 0, 0, 1, 1, 1, 1], &[0; 8]).unwrap(), 0.0);
    }

    #[test]
    fn crossed_pairs_ari() {
        // {ab|cd} vs {ac|bd}: no shared within-pairs; 2 and 2 within-pairs of 6.
        let got = ari(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap();
        assert!((got + 0.5).abs() < 1e-15);
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(
            nmi(&[0, 1], &[0]),
            Err(Error::NodeSetMismatch { left: 2, right: 1 })
        ));
        assert!(ari(&[], &[]).is_err());
    }

    #[test]
    fn f_measure_cases() {
        let n = 10;
        let halves = vec![(0..5).collect::<Vec<_>>(), (5..10).collect()];
        let one_block = vec![0usize; n];
        assert!((f_measure(&one_block, &halves, None).unwrap() - 2.0 / 3.0).abs() < 1e-15);

        let singletons: Vec<usize> = (0..n).collect();
        let whole = vec![(0..n).collect::<Vec<_>>()];
        let expected = 2.0 / (n as f64 + 1.0);
        assert!((f_measure(&singletons, &whole, None).unwrap() - expected).abs() < 1e-15);

        let halves_labels: Vec<usize> = (0..n).map(|i| i / 5).collect();
        assert_eq!(f_measure(&halves_labels, &halves, Some(2)).unwrap(), 1.0);
        assert!(f_measure(&halves_labels, &halves, Some(3)).is_err());
        // Only the first reference community counts with top_k = 1.
        assert!((f_measure(&halves_labels, &halves, Some(1)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn f_measure_is_asymmetric() {
        let a: Vec<usize> = vec![0, 0, 0, 0, 0, 1];
        let b: Vec<usize> = vec![0, 0, 0, 1, 1, 1];
        let sets = |labels: &[usize]| {
            let mut out = vec![Vec::new(); 2];
            for (i, &c) in labels.iter().enumerate() {
                out[c].push(i);
            }
            out
        };
        let ab = f_measure(&a, &sets(&b), None).unwrap();
        let ba = f_measure(&b, &sets(&a), None).unwrap();
        assert!((ab - ba).abs() > 1e-3, "{ab} vs {ba}");
    }

    #[test]
    fn alignment_drops_unshared_nodes() {
        let s = |v: &[(&str, &str)]| -> Vec<(String, String)> {
            v.iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        };
        let left = s(&[("a", "x"), ("b", "x"), ("c", "y"), ("z", "y")]);
        let right = s(&[("c", "1"), ("a", "2"), ("b", "2"), ("q", "1"), ("r", "1")]);
        let aligned = align_by_label(&left, &right);
        assert_eq!(aligned.nodes, vec!["a", "b", "c"]);
        assert_eq!(aligned.left, vec![0, 0, 1]);
        assert_eq!(aligned.right, vec![0, 0, 1]);
        assert_eq!(aligned.dropped_nodes, 3);
    }

    fn relabel(labels: &[usize], key: u64) -> Vec<usize> {
        labels
            .iter()
            .map(|&l| {
                (l as u64)
                    .wrapping_mul(key.wrapping_mul(2).wrapping_add(1))
                    .wrapping_add(key) as usize
            })
            .collect()
    }

    proptest! {
        #[test]
        fn relabeling_invariance(
            labels in proptest::collection::vec((0usize..5, 0usize..4), 1..40),
            key in any::<u64>(),
        ) {
            let (p, q): (Vec<usize>, Vec<usize>) = labels.into_iter().unzip();
            let (p2, q2) = (relabel(&p, key), relabel(&q, key ^ 0xABCD));
            prop_assert!((nmi(&p, &q).unwrap() - nmi(&p2, &q2).unwrap()).abs() < 1e-12);
            prop_assert!((ari(&p, &q).unwrap() - ari(&p2, &q2).unwrap()).abs() < 1e-12);
            let reference = {
                let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
                for (i, &c) in q.iter().enumerate() { groups.entry(c).or_default().push(i); }
                groups.into_values().collect::<Vec<_>>()
            };
            prop_assert!((f_measure(&p, &reference, None).unwrap() - f_measure(&p2, &reference, None).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn nmi_symmetric_and_bounded(labels in proptest::collection::vec((0usize..6, 0usize..6), 1..60)) {
            let (p, q): (Vec<usize>, Vec<usize>) = labels.into_iter().unzip();
            let a = nmi(&p, &q).unwrap();
            let b = nmi(&q, &p).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&a));
            let r = ari(&p, &q).unwrap();
            prop_assert!((-1.0..=1.0 + 1e-12).contains(&r));
        }
    }
}
