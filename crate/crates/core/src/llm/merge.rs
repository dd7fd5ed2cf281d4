//! Grouping of candidates proposed by independent samples.

use std::cmp::Ordering;

use crate::candidate::Candidate;

/// True when both are in the same file and their overlap is at least half of
/// the shorter interval.
pub fn same_site(a: &Candidate, b: &Candidate) -> bool {
    if a.file != b.file {
        return false;
    }
    let lo = a.start_line.max(b.start_line);
    let hi = a.end_line.min(b.end_line);
    if lo > hi {
        return false;
    }
    let overlap = (hi - lo + 1) as u64;
    let shorter = a.line_count().min(b.line_count()) as u64;
    2 * overlap >= shorter
}

/// Total order over every field, used for picking group representatives and
/// for the final ranking tail.
fn full_order(a: &Candidate, b: &Candidate) -> Ordering {
    b.votes
        .cmp(&a.votes)
        .then_with(|| b.confidence.total_cmp(&a.confidence))
        .then_with(|| a.file.cmp(&b.file))
        .then_with(|| a.start_line.cmp(&b.start_line))
        .then_with(|| a.end_line.cmp(&b.end_line))
        .then_with(|| b.verified.cmp(&a.verified))
        .then_with(|| a.symbol.cmp(&b.symbol))
        .then_with(|| a.source.cmp(&b.source))
        .then_with(|| a.rationale.cmp(&b.rationale))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// One grouping pass: connected components of `same_site`.
fn group_once(items: Vec<Candidate>) -> (Vec<Candidate>, bool) {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut joined = false;
    for i in 0..n {
        for j in i + 1..n {
            if same_site(&items[i], &items[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                    joined = true;
                }
            }
        }
    }
    if !joined {
        return (items, false);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Candidate>> = Default::default();
    for (i, c) in items.into_iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(c);
    }
    let merged = groups.into_values().map(combine).collect();
    (merged, true)
}

fn combine(mut group: Vec<Candidate>) -> Candidate {
    group.sort_by(|a, b| {
        b.confidence
            .total_cmp(&a.confidence)
            .then_with(|| full_order(a, b))
    });
    let start = group.iter().map(|c| c.start_line).min().unwrap_or(1);
    let end = group.iter().map(|c| c.end_line).max().unwrap_or(start);
    let votes = group.iter().map(|c| c.votes).sum();
    let verified = group.iter().any(|c| c.verified);
    let mut rep = group.swap_remove(0);
    rep.start_line = start;
    rep.end_line = end;
    rep.votes = votes;
    rep.verified = verified;
    rep
}

/// Merges the multiset union of `lists`.
///
/// Grouping is repeated on the merged spans until no two remaining
/// candidates are the same site, so the result is a fixed point:
/// merging it again (with nothing) returns it unchanged.
pub fn merge_all<I, L>(lists: I) -> Vec<Candidate>
where
    I: IntoIterator<Item = L>,
    L: IntoIterator<Item = Candidate>,
{
    let mut items: Vec<Candidate> = lists.into_iter().flatten().collect();
    loop {
        let (next, changed) = group_once(items);
        items = next;
        if !changed {
            break;
        }
    }
    items.sort_by(full_order);
    items
}

pub fn merge_candidates(a: &[Candidate], b: &[Candidate]) -> Vec<Candidate> {
    merge_all([a.to_vec(), b.to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_pair() {
        let a = [Candidate::new("f", 10, 20, 0.6)];
        let b = [Candidate::new("f", 15, 22, 0.8)];
        let m = merge_candidates(&a, &b);
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].start_line, m[0].end_line), (10, 22));
        assert_eq!(m[0].confidence, 0.8);
        assert_eq!(m[0].votes, 2);
    }

    #[test]
    fn disjoint_kept_and_ranked() {
        let a = [Candidate::new("f", 1, 3, 0.2)];
        let b = [Candidate::new("f", 40, 50, 0.9)];
        let m = merge_candidates(&a, &b);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].start_line, 40);
    }

    #[test]
    fn small_overlap_is_not_a_match() {
        // overlap 1 line, shorter interval 10 lines
        let a = Candidate::new("f", 1, 10, 0.5);
        let b = Candidate::new("f", 10, 19, 0.5);
        assert!(!same_site(&a, &b));
        assert!(!same_site(&a, &Candidate::new("g", 1, 10, 0.5)));
        assert!(same_site(&a, &Candidate::new("f", 5, 5, 0.5)));
    }

    #[test]
    fn chains_reach_a_fixed_point() {
        // 1-4 and 4-5 overlap on half of the shorter; their union 1-5 then
        // absorbs 5-6.
        let xs = vec![
            Candidate::new("f", 1, 4, 0.1),
            Candidate::new("f", 4, 5, 0.2),
            Candidate::new("f", 5, 6, 0.3),
        ];
        let once = merge_all([xs]);
        assert_eq!(merge_all([once.clone()]), once);
    }
}
