//! Merge trees of sublevel sets of 1D series and 2D grids.
//!
//! Cells are swept in increasing order of value (ties by index) with a
//! union-find structure. A cell touching no processed cell starts a
//! component (a leaf); a cell touching several components merges them at its
//! value. Afterwards, merges at the height of their child are contracted into
//! one multi-way vertex, and vertices left with a single child are spliced
//! out, so heights strictly increase towards the root.

use crate::error::{Error, Result};
use crate::height::Height;
use crate::tree::MergeTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn from_count(count: u8) -> Result<Self> {
        match count {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            other => Err(Error::Parse(format!("connectivity must be 4 or 8, got {other}"))),
        }
    }
}

pub fn merge_tree_from_series(values: &[Height]) -> Result<MergeTree> {
    if values.is_empty() {
        return Err(Error::Parse("empty series".into()));
    }
    sweep(values, |i| {
        let mut out = Vec::with_capacity(2);
        if i > 0 {
            out.push(i - 1);
        }
        if i + 1 < values.len() {
            out.push(i + 1);
        }
        out
    })
}

pub fn merge_tree_from_grid(grid: &[Vec<Height>], connectivity: Connectivity) -> Result<MergeTree> {
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(Error::Parse("empty grid".into()));
    }
    if let Some(r) = grid.iter().position(|row| row.len() != cols) {
        return Err(Error::Parse(format!("ragged grid: row {r} has {} cells, expected {cols}", grid[r].len())));
    }
    let values: Vec<Height> = grid.iter().flatten().cloned().collect();
    sweep(&values, |i| {
        let (r, c) = ((i / cols) as isize, (i % cols) as isize);
        let mut out = Vec::with_capacity(8);
        for dr in -1..=1isize {
            for dc in -1..=1isize {
                let diagonal = dr != 0 && dc != 0;
                if (dr == 0 && dc == 0) || (diagonal && connectivity == Connectivity::Four) {
                    continue;
                }
                let (nr, nc) = (r + dr, c + dc);
                if nr >= 0 && nc >= 0 && (nr as usize) < rows && (nc as usize) < cols {
                    out.push(nr as usize * cols + nc as usize);
                }
            }
        }
        out
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Raw sweep output: one entry per created vertex with its height and its
/// children (indices into the same list).
struct Raw {
    height: Vec<Height>,
    children: Vec<Vec<usize>>,
}

fn sweep(values: &[Height], neighbors: impl Fn(usize) -> Vec<usize>) -> Result<MergeTree> {
    if let Some(i) = values.iter().position(Height::is_infinite) {
        return Err(Error::Parse(format!("value {i} is infinite")));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));

    let mut uf: Vec<usize> = (0..values.len()).collect();
    let mut processed = vec![false; values.len()];
    // tree vertex currently on top of each union-find root
    let mut top = vec![usize::MAX; values.len()];
    let mut raw = Raw { height: Vec::new(), children: Vec::new() };

    for &cell in &order {
        processed[cell] = true;
        let mut roots: Vec<usize> = Vec::new();
        for n in neighbors(cell) {
            if processed[n] {
                let r = find(&mut uf, n);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
        match roots.len() {
            0 => {
                raw.height.push(values[cell].clone());
                raw.children.push(Vec::new());
                top[cell] = raw.height.len() - 1;
            }
            1 => {
                uf[cell] = roots[0];
            }
            _ => {
                raw.height.push(values[cell].clone());
                raw.children.push(roots.iter().map(|&r| top[r]).collect());
                let vertex = raw.height.len() - 1;
                for &r in &roots {
                    uf[r] = cell;
                }
                top[cell] = vertex;
            }
        }
    }
    let mut tops: Vec<usize> = Vec::new();
    for cell in 0..values.len() {
        let r = find(&mut uf, cell);
        if !tops.contains(&top[r]) {
            tops.push(top[r]);
        }
    }
    Ok(finish(raw, tops))
}

/// Contracts equal-height edges, splices out single-child vertices, and
/// hangs everything below a root at infinity.
fn finish(mut raw: Raw, tops: Vec<usize>) -> MergeTree {
    let n = raw.height.len();
    let mut alive = vec![true; n];
    // children are always created before their parents
    for v in 0..n {
        let mut kids = Vec::new();
        for c in std::mem::take(&mut raw.children[v]) {
            if raw.height[c] == raw.height[v] {
                alive[c] = false;
                kids.extend(std::mem::take(&mut raw.children[c]));
            } else {
                kids.push(c);
            }
        }
        raw.children[v] = kids;
    }
    let mut spliced_to: Vec<usize> = (0..n).collect();
    for v in 0..n {
        if alive[v] && raw.children[v].len() == 1 {
            alive[v] = false;
            spliced_to[v] = raw.children[v][0];
        }
    }
    let resolve = |mut v: usize| {
        while spliced_to[v] != v {
            v = spliced_to[v];
        }
        v
    };
    let mut new_id = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if alive[v] {
            new_id[v] = next;
            next += 1;
        }
    }
    let root = next;
    let mut nodes: Vec<(Height, Option<usize>)> = vec![(Height::Infinite, None); next + 1];
    for v in (0..n).filter(|&v| alive[v]) {
        nodes[new_id[v]].0 = raw.height[v].clone();
        for &c in &raw.children[v] {
            nodes[new_id[resolve(c)]].1 = Some(new_id[v]);
        }
    }
    for &t in &tops {
        nodes[new_id[resolve(t)]].1 = Some(root);
    }
    MergeTree::from_parents(nodes).expect("sweep output is a valid merge tree")
}

/// Parses one value per line; blank lines and lines starting with `#` are
/// skipped.
pub fn parse_series_csv(text: &str) -> Result<Vec<Height>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.trim_end_matches(',').parse::<Height>().map_err(Error::from))
        .collect()
}

/// Parses comma-separated rows.
pub fn parse_grid_csv(text: &str) -> Result<Vec<Vec<Height>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(|v| v.trim().parse::<Height>().map_err(Error::from)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(values: &[i64]) -> Vec<Height> {
        values.iter().map(|&v| Height::from_int(v)).collect()
    }

    fn shape(tree: &MergeTree) -> (Vec<Height>, Vec<Height>) {
        let mut leaves: Vec<Height> = tree.leaves().map(|v| tree.height(v).clone()).collect();
        let mut inner: Vec<Height> =
            tree.finite_vertices().filter(|&v| !tree.is_leaf(v)).map(|v| tree.height(v).clone()).collect();
        leaves.sort();
        inner.sort();
        (leaves, inner)
    }

    #[test]
    fn series_example() {
        let t = merge_tree_from_series(&hs(&[0, 3, 1, 4, 0, 5])).unwrap();
        assert_eq!(shape(&t), (hs(&[0, 0, 1]), hs(&[3, 4])));
        // the saddle at 3 merges the first two leaves
        let saddle3 = t.finite_vertices().find(|&v| *t.height(v) == Height::from_int(3)).unwrap();
        let mut kids: Vec<Height> = t.children(saddle3).iter().map(|&c| t.height(c).clone()).collect();
        kids.sort();
        assert_eq!(kids, hs(&[0, 1]));
    }

    #[test]
    fn trivial_series() {
        assert_eq!(shape(&merge_tree_from_series(&hs(&[5])).unwrap()), (hs(&[5]), vec![]));
        assert_eq!(shape(&merge_tree_from_series(&hs(&[1, 2, 3])).unwrap()), (hs(&[1]), vec![]));
        assert!(merge_tree_from_series(&[]).is_err());
    }

    #[test]
    fn plateaus_collapse() {
        let t = merge_tree_from_series(&hs(&[2, 2, 2])).unwrap();
        assert_eq!(shape(&t), (hs(&[2]), vec![]));
        // two basins meeting on a flat ridge merge once
        let t = merge_tree_from_series(&hs(&[0, 3, 3, 3, 0])).unwrap();
        assert_eq!(shape(&t), (hs(&[0, 0]), hs(&[3])));
        // three basins meeting at the same level give one vertex
        let t = merge_tree_from_series(&hs(&[0, 3, 1, 3, 0])).unwrap();
        assert_eq!(shape(&t), (hs(&[0, 0, 1]), hs(&[3])));
    }

    #[test]
    fn grid_examples() {
        let t = merge_tree_from_grid(&[hs(&[0, 2]), hs(&[2, 1])], Connectivity::Four).unwrap();
        assert_eq!(shape(&t), (hs(&[0, 1]), hs(&[2])));
        let t = merge_tree_from_grid(&[hs(&[0, 2]), hs(&[2, 1])], Connectivity::Eight).unwrap();
        assert_eq!(shape(&t), (hs(&[0]), vec![]));
        let t = merge_tree_from_grid(&[hs(&[7, 7]), hs(&[7, 7])], Connectivity::Four).unwrap();
        assert_eq!(shape(&t), (hs(&[7]), vec![]));
        assert!(merge_tree_from_grid(&[hs(&[0, 2]), hs(&[2])], Connectivity::Four).is_err());
    }

    #[test]
    fn single_row_grid_matches_series() {
        let row = hs(&[0, 3, 1, 4, 0, 5]);
        let g = merge_tree_from_grid(std::slice::from_ref(&row), Connectivity::Eight).unwrap();
        assert_eq!(g, merge_tree_from_series(&row).unwrap());
    }

    #[test]
    fn csv_parsing() {
        assert_eq!(parse_series_csv("0\n3/2\n\n2.5\n").unwrap(), vec![Height::from_int(0), Height::from_ratio(3, 2), Height::from_ratio(5, 2)]);
        assert_eq!(parse_grid_csv("0, 2\n2, 1\n").unwrap(), vec![hs(&[0, 2]), hs(&[2, 1])]);
        assert!(parse_series_csv("x").is_err());
    }
}
