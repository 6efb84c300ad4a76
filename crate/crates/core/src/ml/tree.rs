//! Binary decision trees stored as flat node arrays.
//!
//! Two growers share the layout: a Gini classification tree for the forest
//! and a second-order regression tree for boosting. A row goes left when
//! `x[feature] <= threshold`.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(value: f64) -> Self {
        Self {
            nodes: alloc::vec![Node::Leaf { value }],
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x.get(feature).copied().unwrap_or(0.0) <= threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, i: usize) -> usize {
            match t.nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }

    /// Reserves a slot and returns its index.
    fn push_placeholder(&mut self) -> usize {
        self.nodes.push(Node::Leaf { value: 0.0 });
        self.nodes.len() - 1
    }
}

fn sort_by_feature(x: &[Vec<f64>], idx: &mut [usize], f: usize) {
    idx.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]).then(a.cmp(&b)));
}

fn is_constant(x: &[Vec<f64>], idx: &[usize], f: usize) -> bool {
    let v = x[idx[0]][f];
    idx.iter().all(|&i| x[i][f] == v)
}

struct Candidate {
    feature: usize,
    threshold: f64,
    score: f64,
}

/// Gini classification tree grown on `rows` (which may repeat indices, as a
/// bootstrap sample does). Leaves hold the positive fraction.
pub struct GiniGrower<'a, R> {
    pub x: &'a [Vec<f64>],
    pub y: &'a [bool],
    pub max_depth: usize,
    pub min_samples_split: usize,
    /// Non-constant features examined per node.
    pub mtry: usize,
    pub rng: &'a mut R,
}

impl<R: Rng> GiniGrower<'_, R> {
    pub fn grow(mut self, rows: &mut [usize]) -> Tree {
        let mut t = Tree { nodes: Vec::new() };
        let root = t.push_placeholder();
        self.node(&mut t, root, rows, 0);
        t
    }

    fn node(&mut self, t: &mut Tree, at: usize, rows: &mut [usize], depth: usize) {
        let n = rows.len();
        let pos = rows.iter().filter(|&&i| self.y[i]).count();
        let p = pos as f64 / n as f64;
        if depth >= self.max_depth || n < self.min_samples_split || pos == 0 || pos == n {
            t.nodes[at] = Node::Leaf { value: p };
            return;
        }
        let d = self.x[rows[0]].len();
        let mut feats: Vec<usize> = (0..d).collect();
        feats.shuffle(self.rng);
        let mut best: Option<Candidate> = None;
        let mut tried = 0;
        for f in feats {
            if tried == self.mtry {
                break;
            }
            if is_constant(self.x, rows, f) {
                continue;
            }
            tried += 1;
            sort_by_feature(self.x, rows, f);
            // Weighted child impurity, n_l*gini_l + n_r*gini_r, scaled by n.
            let mut left_pos = 0usize;
            for k in 1..n {
                left_pos += usize::from(self.y[rows[k - 1]]);
                let (a, b) = (self.x[rows[k - 1]][f], self.x[rows[k]][f]);
                if a == b {
                    continue;
                }
                let nl = k as f64;
                let nr = (n - k) as f64;
                let pl = left_pos as f64;
                let pr = (pos - left_pos) as f64;
                let impurity = pl * (nl - pl) / nl + pr * (nr - pr) / nr;
                if best.as_ref().is_none_or(|c| impurity < c.score) {
                    best = Some(Candidate {
                        feature: f,
                        threshold: a + (b - a) / 2.0,
                        score: impurity,
                    });
                }
            }
        }
        let Some(c) = best else {
            t.nodes[at] = Node::Leaf { value: p };
            return;
        };
        let split = partition(self.x, rows, c.feature, c.threshold);
        let (l, r) = rows.split_at_mut(split);
        let li = t.push_placeholder();
        let ri = t.push_placeholder();
        t.nodes[at] = Node::Split {
            feature: c.feature,
            threshold: c.threshold,
            left: li,
            right: ri,
        };
        self.node(t, li, l, depth + 1);
        self.node(t, ri, r, depth + 1);
    }
}

/// Moves rows with `x[f] <= thr` to the front, preserving order; returns the
/// count moved.
fn partition(x: &[Vec<f64>], rows: &mut [usize], f: usize, thr: f64) -> usize {
    let (mut l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][f] <= thr);
    let k = l.len();
    l.extend(r);
    rows.copy_from_slice(&l);
    k
}

/// Regression tree fitted to gradients `g` and hessians `h` with the
/// second-order gain and an L2 penalty `lambda` on leaf weights.
pub struct NewtonGrower<'a> {
    pub x: &'a [Vec<f64>],
    pub g: &'a [f64],
    pub h: &'a [f64],
    pub max_depth: usize,
    pub lambda: f64,
    pub min_child_weight: f64,
}

impl NewtonGrower<'_> {
    pub fn grow(&self, rows: &mut [usize]) -> Tree {
        let mut t = Tree { nodes: Vec::new() };
        let root = t.push_placeholder();
        self.node(&mut t, root, rows, 0);
        t
    }

    fn sums(&self, rows: &[usize]) -> (f64, f64) {
        rows.iter().fold((0.0, 0.0), |(g, h), &i| (g + self.g[i], h + self.h[i]))
    }

    fn node(&self, t: &mut Tree, at: usize, rows: &mut [usize], depth: usize) {
        let (gs, hs) = self.sums(rows);
        let weight = -gs / (hs + self.lambda);
        if depth >= self.max_depth || rows.len() < 2 {
            t.nodes[at] = Node::Leaf { value: weight };
            return;
        }
        let parent = gs * gs / (hs + self.lambda);
        let d = self.x[rows[0]].len();
        let mut best: Option<Candidate> = None;
        for f in 0..d {
            if is_constant(self.x, rows, f) {
                continue;
            }
            sort_by_feature(self.x, rows, f);
            let (mut gl, mut hl) = (0.0, 0.0);
            for k in 1..rows.len() {
                gl += self.g[rows[k - 1]];
                hl += self.h[rows[k - 1]];
                let (a, b) = (self.x[rows[k - 1]][f], self.x[rows[k]][f]);
                if a == b {
                    continue;
                }
                let (gr, hr) = (gs - gl, hs - hl);
                if hl < self.min_child_weight || hr < self.min_child_weight {
                    continue;
                }
                let gain = gl * gl / (hl + self.lambda) + gr * gr / (hr + self.lambda) - parent;
                if gain > 0.0 && best.as_ref().is_none_or(|c| gain > c.score) {
                    best = Some(Candidate {
                        feature: f,
                        threshold: a + (b - a) / 2.0,
                        score: gain,
                    });
                }
            }
        }
        let Some(c) = best else {
            t.nodes[at] = Node::Leaf { value: weight };
            return;
        };
        let split = partition(self.x, rows, c.feature, c.threshold);
        let (l, r) = rows.split_at_mut(split);
        let li = t.push_placeholder();
        let ri = t.push_placeholder();
        t.nodes[at] = Node::Split {
            feature: c.feature,
            threshold: c.threshold,
            left: li,
            right: ri,
        };
        self.node(t, li, l, depth + 1);
        self.node(t, ri, r, depth + 1);
    }
}
