//! SVG drawing of a tree pair.
//!
//! Leaves are spread left to right in DFS order and every other vertex sits
//! above the middle of its children; the vertical axis is height, shared by
//! both trees. Anchor arrows are drawn as straight lines, and the fan of each
//! constraint arrow (the path from its source up to its target's height) is
//! shaded.

use std::fmt::Write;

use mergetree::{Direction, MergeTree, NodeId, PartialInterleaving, Point, TreePair};

const LEAF_GAP: f64 = 60.0;
const PANEL_GAP: f64 = 120.0;
const MARGIN: f64 = 40.0;
const PLOT_HEIGHT: f64 = 400.0;
/// Space above the highest finite vertex where the root edges end.
const ROOT_STUB: f64 = 40.0;

struct Layout {
    x: Vec<f64>,
    offset: f64,
}

struct Scale {
    low: f64,
    high: f64,
}

impl Scale {
    fn new(pair: &TreePair) -> Self {
        let finite = |t: &MergeTree| t.finite_vertices().map(|v| t.height(v).to_f64_lossy()).collect::<Vec<_>>();
        let all: Vec<f64> = finite(&pair.first).into_iter().chain(finite(&pair.second)).collect();
        let low = all.iter().copied().fold(f64::INFINITY, f64::min);
        let high = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Scale { low, high: if high > low { high } else { low + 1.0 } }
    }

    fn y(&self, height: f64) -> f64 {
        if height.is_infinite() {
            return MARGIN;
        }
        MARGIN + ROOT_STUB + PLOT_HEIGHT * (self.high - height) / (self.high - self.low)
    }
}

fn layout(tree: &MergeTree, offset: f64) -> (Layout, f64) {
    let mut x = vec![0.0; tree.len()];
    let mut next_leaf = 0.0;
    place(tree, tree.root(), &mut x, &mut next_leaf);
    (Layout { x, offset }, next_leaf * LEAF_GAP)
}

fn place(tree: &MergeTree, v: NodeId, x: &mut [f64], next_leaf: &mut f64) {
    let children = tree.children(v);
    if children.is_empty() {
        x[v] = *next_leaf * LEAF_GAP + LEAF_GAP / 2.0;
        *next_leaf += 1.0;
        return;
    }
    for &c in children {
        place(tree, c, x, next_leaf);
    }
    let (lo, hi) = children.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| (lo.min(x[c]), hi.max(x[c])));
    x[v] = (lo + hi) / 2.0;
}

/// Position of a point: on the straight segment from its carrier to the
/// carrier's parent, or on the vertical root edge.
fn position(tree: &MergeTree, layout: &Layout, scale: &Scale, p: &Point) -> (f64, f64) {
    if p.is_root() {
        return (layout.offset + layout.x[tree.root()], MARGIN);
    }
    let c = p.carrier();
    let parent = tree.parent(c).expect("finite carrier");
    let (x0, h0) = (layout.x[c], tree.height(c).to_f64_lossy());
    let h = p.height().to_f64_lossy();
    let x = if parent == tree.root() {
        x0
    } else {
        let (x1, h1) = (layout.x[parent], tree.height(parent).to_f64_lossy());
        x0 + (x1 - x0) * (h - h0) / (h1 - h0)
    };
    (layout.offset + x, scale.y(h))
}

fn draw_tree(out: &mut String, tree: &MergeTree, layout: &Layout, scale: &Scale, label: &str) {
    let root_x = layout.offset + layout.x[tree.root()];
    writeln!(out, r#"<g class="tree"><text x="{root_x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, MARGIN - 12.0).unwrap();
    for v in tree.finite_vertices() {
        let parent = tree.parent(v).expect("finite vertex has a parent");
        let (x0, y0) = (layout.offset + layout.x[v], scale.y(tree.height(v).to_f64_lossy()));
        let (x1, y1) = if parent == tree.root() {
            (x0, MARGIN)
        } else {
            (layout.offset + layout.x[parent], scale.y(tree.height(parent).to_f64_lossy()))
        };
        writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="black" stroke-width="2"/>"#).unwrap();
    }
    for v in tree.finite_vertices() {
        let (x, y) = (layout.offset + layout.x[v], scale.y(tree.height(v).to_f64_lossy()));
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#).unwrap();
        writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="11">{v} @ {}</text>"#, x + 6.0, y + 14.0, tree.height(v)).unwrap();
    }
    writeln!(out, "</g>").unwrap();
}

pub fn render(pair: &TreePair, anchors: Option<&PartialInterleaving>, constraints: &PartialInterleaving) -> String {
    let scale = Scale::new(pair);
    let (first, width1) = layout(&pair.first, MARGIN);
    let (second, width2) = layout(&pair.second, MARGIN + width1 + PANEL_GAP);
    let width = 2.0 * MARGIN + width1 + PANEL_GAP + width2;
    let height = 2.0 * MARGIN + ROOT_STUB + PLOT_HEIGHT;
    let layouts = |direction: Direction| match direction {
        Direction::Forward => (&first, &second),
        Direction::Backward => (&second, &first),
    };

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#).unwrap();
    writeln!(out, r#"<defs><marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/></marker></defs>"#).unwrap();

    writeln!(out, r#"<g class="fans">"#).unwrap();
    for (direction, arrow) in constraints.arrows() {
        let tree = pair.source(direction);
        let (layout, _) = layouts(direction);
        let top = tree.ancestor_at(&arrow.src, arrow.tgt.height()).expect("targets lie above their sources");
        let mut path = vec![position(tree, layout, &scale, &arrow.src)];
        let mut v = arrow.src.carrier();
        while let Some(parent) = tree.parent(v) {
            if top.is_root() || parent == tree.root() || tree.height(parent) > top.height() {
                break;
            }
            path.push(position(tree, layout, &scale, &tree.vertex_point(parent)));
            v = parent;
        }
        path.push(position(tree, layout, &scale, &top));
        let points: Vec<String> = path.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        writeln!(out, r#"<polyline class="fan" points="{}" fill="none" stroke="{}" stroke-opacity="0.25" stroke-width="14" stroke-linecap="round"/>"#, points.join(" "), colour(direction)).unwrap();
    }
    writeln!(out, "</g>").unwrap();

    draw_tree(&mut out, &pair.first, &first, &scale, "T1");
    draw_tree(&mut out, &pair.second, &second, &scale, "T2");

    if let Some(anchors) = anchors {
        writeln!(out, r#"<g class="arrows">"#).unwrap();
        for (direction, arrow) in anchors.arrows() {
            let (from, to) = layouts(direction);
            let (x0, y0) = position(pair.source(direction), from, &scale, &arrow.src);
            let (x1, y1) = position(pair.target(direction), to, &scale, &arrow.tgt);
            writeln!(out, r#"<line class="{direction}" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{}" stroke-width="1.5" marker-end="url(#head)"/>"#, colour(direction)).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

fn colour(direction: Direction) -> &'static str {
    match direction {
        Direction::Forward => "#1f5fbf",
        Direction::Backward => "#bf3f1f",
    }
}
