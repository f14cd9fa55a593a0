//! Maximum-weight matching in general graphs via Edmonds' blossom
//! method with the primal-dual weighted extension (Galil's survey
//! describes the O(n^3) variant implemented here). Weights stay integral
//! throughout: dual variables are stored doubled, so every slack is an
//! exact integer.
//!
//! Also provides a maximum-weight perfect matching wrapper used by the
//! degree-constrained-subgraph reduction in the cover module.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::AlgoError;

type Vertex = usize;
const NONE: usize = usize::MAX;

/// `mate[v] = Some(w)` when v is matched to w.
pub fn max_weight_matching(
    edges: &[(Vertex, Vertex, i64)],
    max_cardinality: bool,
) -> Vec<Option<Vertex>> {
    if edges.is_empty() {
        return Vec::new();
    }
    let mut m = Matcher::new(edges, max_cardinality);
    m.solve();
    m.mate
        .iter()
        .map(|&p| if p == NONE { None } else { Some(m.endpoint[p]) })
        .collect()
}

/// Maximum-weight perfect matching. Fails if no perfect matching exists.
pub fn max_weight_perfect_matching(
    n: usize,
    edges: &[(Vertex, Vertex, i64)],
) -> Result<Vec<Vertex>, AlgoError> {
    let mate = max_weight_matching(edges, true);
    let mut out = vec![NONE; n];
    for (v, m) in mate.iter().enumerate() {
        if let Some(w) = m {
            out[v] = *w;
        }
    }
    if out.iter().any(|&w| w == NONE) {
        return Err(AlgoError::Structure {
            detail: alloc::format!(
                "no perfect matching in auxiliary graph ({} of {} vertices unmatched)",
                out.iter().filter(|&&w| w == NONE).count(),
                n
            ),
        });
    }
    Ok(out)
}

struct Matcher {
    nvertex: usize,
    nedge: usize,
    edges: Vec<(Vertex, Vertex, i64)>,
    max_cardinality: bool,
    // endpoint[p]: vertex to which endpoint p (= 2k or 2k+1 of edge k) attaches
    endpoint: Vec<Vertex>,
    // neighbend[v]: remote endpoints of v's incident edges
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>, // vertex -> remote endpoint of matched edge, or NONE
    label: Vec<usize>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Vec<usize>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl Matcher {
    fn new(edges: &[(Vertex, Vertex, i64)], max_cardinality: bool) -> Self {
        let nedge = edges.len();
        let mut nvertex = 0;
        for &(i, j, _) in edges {
            assert!(i != j, "loop edges are not allowed in the matcher");
            nvertex = nvertex.max(i + 1).max(j + 1);
        }
        let maxweight = edges.iter().map(|e| e.2).max().unwrap().max(0);
        let endpoint: Vec<usize> = (0..2 * nedge)
            .map(|p| if p % 2 == 0 { edges[p / 2].0 } else { edges[p / 2].1 })
            .collect();
        let mut neighbend: Vec<Vec<usize>> = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![maxweight; nvertex];
        dualvar.extend(vec![0; nvertex]);
        let mut blossombase: Vec<usize> = (0..nvertex).collect();
        blossombase.extend(vec![NONE; nvertex]);
        Matcher {
            nvertex,
            nedge,
            edges: edges.to_vec(),
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![0; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; 2 * nvertex],
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossombase,
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            blossombestedges: vec![Vec::new(); 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    // 2 * slack of edge k (valid for edges between top-level blossoms).
    fn slack(&self, k: usize) -> i64 {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * wt
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.nvertex {
                out.push(t);
            } else {
                stack.extend(self.blossomchilds[t].iter().copied());
            }
        }
        out
    }

    fn assign_label(&mut self, w: usize, t: usize, p: usize) {
        let b = self.inblossom[w];
        assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let leaves = self.blossom_leaves(b);
            self.queue.extend(leaves);
        } else if t == 2 {
            let base = self.blossombase[b];
            assert!(self.mate[base] != NONE);
            let mbase = self.mate[base];
            let ep = self.endpoint[mbase];
            self.assign_label(ep, 1, mbase ^ 1);
        }
    }

    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let (mut v, mut w) = (v, w);
        while v != NONE || w != NONE {
            if v != NONE {
                let mut b = self.inblossom[v];
                if self.label[b] & 4 != 0 {
                    base = self.blossombase[b];
                    break;
                }
                assert_eq!(self.label[b], 1);
                path.push(b);
                self.label[b] = 5;
                assert_eq!(self.labelend[b], self.mate[self.blossombase[b]]);
                if self.labelend[b] == NONE {
                    v = NONE;
                } else {
                    v = self.endpoint[self.labelend[b]];
                    b = self.inblossom[v];
                    assert_eq!(self.label[b], 2);
                    assert!(self.labelend[b] != NONE);
                    v = self.endpoint[self.labelend[b]];
                }
            }
            if w != NONE {
                core::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1
                        && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1
                        && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        self.blossomchilds[b] = path;
        self.blossomendps[b] = endps;
        for leaf in self.blossom_leaves(b) {
            if self.label[self.inblossom[leaf]] == 2 {
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }
        // Compute best edges to neighbouring S-blossoms.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for &bv in &self.blossomchilds[b] {
            let nblists: Vec<Vec<usize>> = if self.blossombestedges[bv].is_empty() {
                self.blossom_leaves(bv)
                    .into_iter()
                    .map(|v| self.neighbend[v].iter().map(|&p| p / 2).collect())
                    .collect()
            } else {
                vec![self.blossombestedges[bv].clone()]
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        core::mem::swap(&mut i, &mut j);
                    }
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE
                            || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                    let _ = i;
                }
            }
            self.blossombestedges[bv].clear();
            self.bestedge[bv] = NONE;
        }
        self.blossombestedges[b] = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for &k in &self.blossombestedges[b] {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for leaf in self.blossom_leaves(s) {
                    self.inblossom[leaf] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let mut j = self.blossomchilds[b]
                .iter()
                .position(|&c| c == entrychild)
                .unwrap() as isize;
            let len = self.blossomchilds[b].len() as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let mut p = self.labelend[b];
            while j != 0 {
                // Relabel the T-sub-blossom, then step over the next
                // S-sub-blossom, marking traversed edges allowed.
                self.label[self.endpoint[p ^ 1]] = 0;
                let idx = Self::wrap(j - endptrick as isize, len);
                self.label[self.endpoint[self.blossomendps[b][idx] ^ endptrick ^ 1]] = 0;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, 2, p);
                let idx = Self::wrap(j - endptrick as isize, len);
                self.allow_edge(self.blossomendps[b][idx] / 2);
                j += jstep;
                let idx = Self::wrap(j - endptrick as isize, len);
                p = self.blossomendps[b][idx] ^ endptrick;
                self.allow_edge(p / 2);
                j += jstep;
            }
            let bv = self.blossomchilds[b][Self::wrap(j, len)];
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            let mut j2 = j + jstep;
            while self.blossomchilds[b][Self::wrap(j2, len)] != entrychild {
                let bv2 = self.blossomchilds[b][Self::wrap(j2, len)];
                if self.label[bv2] == 1 {
                    j2 += jstep;
                    continue;
                }
                let mut vfound = NONE;
                for leaf in self.blossom_leaves(bv2) {
                    if self.label[leaf] != 0 {
                        vfound = leaf;
                        break;
                    }
                }
                if vfound != NONE {
                    assert_eq!(self.label[vfound], 2);
                    assert_eq!(self.inblossom[vfound], bv2);
                    self.label[vfound] = 0;
                    self.label[self.endpoint[self.mate[self.blossombase[bv2]]]] = 0;
                    let le = self.labelend[vfound];
                    self.assign_label(vfound, 2, le);
                }
                j2 += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = NONE;
        self.bestedge[b] = NONE;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = NONE;
        self.blossombestedges[b].clear();
        self.unusedblossoms.push(b);
    }

    fn wrap(j: isize, len: isize) -> usize {
        (((j % len) + len) % len) as usize
    }

    fn allow_edge(&mut self, k: usize) {
        self.allowedge[k] = true;
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap() as isize;
        let len = self.blossomchilds[b].len() as isize;
        let mut j = i;
        let (jstep, endptrick): (isize, usize) = if i & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let mut tt = self.blossomchilds[b][Self::wrap(j, len)];
            let p = self.blossomendps[b][Self::wrap(j - endptrick as isize, len)] ^ endptrick;
            if tt >= self.nvertex {
                self.augment_blossom(tt, self.endpoint[p]);
            }
            j += jstep;
            tt = self.blossomchilds[b][Self::wrap(j, len)];
            if tt >= self.nvertex {
                self.augment_blossom(tt, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossomchilds[b].rotate_left(i as usize);
        self.blossomendps[b].rotate_left(i as usize);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        assert_eq!(self.blossombase[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                assert_eq!(self.label[bs], 1);
                assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs]]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                assert_eq!(self.label[bt], 2);
                assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                assert_eq!(self.blossombase[bt], t);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        for _ in 0..self.nvertex {
            self.label = vec![0; 2 * self.nvertex];
            self.bestedge = vec![NONE; 2 * self.nvertex];
            for lst in self.blossombestedges[self.nvertex..].iter_mut() {
                lst.clear();
            }
            self.allowedge = vec![false; self.nedge];
            self.queue.clear();
            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while !self.queue.is_empty() && !augmented {
                    let v = self.queue.pop().unwrap();
                    assert_eq!(self.label[self.inblossom[v]], 1);
                    for idx in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][idx];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        if !self.allowedge[k] {
                            let kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            } else if self.label[self.inblossom[w]] == 1 {
                                let b = self.inblossom[v];
                                if self.bestedge[b] == NONE
                                    || kslack < self.slack(self.bestedge[b])
                                {
                                    self.bestedge[b] = k;
                                }
                            } else if self.label[w] == 0
                                && (self.bestedge[w] == NONE
                                    || kslack < self.slack(self.bestedge[w]))
                            {
                                self.bestedge[w] = k;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                assert_eq!(self.label[self.inblossom[w]], 2);
                                self.label[w] = 2;
                                self.labelend[w] = p ^ 1;
                            }
                        }
                    }
                }
                if augmented {
                    break;
                }
                // Dual update.
                let mut deltatype = -1;
                let mut delta = 0i64;
                let mut deltaedge = NONE;
                let mut deltablossom = NONE;
                if !self.max_cardinality {
                    deltatype = 1;
                    delta = *self.dualvar[..self.nvertex].iter().min().unwrap();
                }
                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == 1
                        && self.bestedge[b] != NONE
                    {
                        let kslack = self.slack(self.bestedge[b]);
                        assert_eq!(kslack % 2, 0);
                        let d = kslack / 2;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    assert!(self.max_cardinality);
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex]
                        .iter()
                        .copied()
                        .min()
                        .unwrap()
                        .max(0);
                }
                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        0 => {}
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => unreachable!(),
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            0 => {}
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => unreachable!(),
                        }
                    }
                }
                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (i, j, _) = self.edges[deltaedge];
                        let v = if self.label[self.inblossom[i]] == 0 { j } else { i };
                        assert_eq!(self.label[self.inblossom[v]], 1);
                        self.queue.push(v);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(deltablossom, false),
                    _ => unreachable!(),
                }
            }
            if !augmented {
                break;
            }
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        self.check_optimum();
        for v in 0..self.nvertex {
            if self.mate[v] != NONE {
                self.mate[v] = 2 * (self.mate[v] / 2) + (self.mate[v] & 1);
            }
        }
        for v in 0..self.nvertex {
            assert!(self.mate[v] == NONE || self.endpoint[self.mate[self.endpoint[self.mate[v]]]] == v);
        }
    }

    /// Verifies the complementary-slackness conditions of the final duals.
    fn check_optimum(&self) {
        let vdualoffset = if self.max_cardinality {
            let m = *self.dualvar[..self.nvertex].iter().min().unwrap();
            (-m).max(0)
        } else {
            0
        };
        assert!(self.dualvar[..self.nvertex].iter().min().unwrap() + vdualoffset >= 0);
        assert!(*self.dualvar[self.nvertex..].iter().max().unwrap_or(&0) >= 0);
        for k in 0..self.nedge {
            let (i, j, wt) = self.edges[k];
            let mut s = self.dualvar[i] + self.dualvar[j] - 2 * wt;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossomparent[*iblossoms.last().unwrap()]);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossomparent[*jblossoms.last().unwrap()]);
            }
            for (bi, bj) in iblossoms.iter().rev().zip(jblossoms.iter().rev()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dualvar[*bi];
            }
            assert!(s >= 0, "edge {k} has negative slack");
            if (self.mate[i] != NONE && self.mate[i] / 2 == k)
                || (self.mate[j] != NONE && self.mate[j] / 2 == k)
            {
                assert!(self.mate[i] / 2 == k && self.mate[j] / 2 == k);
                assert_eq!(s, 0, "matched edge {k} has nonzero slack");
            }
        }
        for v in 0..self.nvertex {
            assert!(self.mate[v] != NONE || self.dualvar[v] + vdualoffset == 0);
        }
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] != NONE && self.dualvar[b] > 0 {
                assert_eq!(self.blossomendps[b].len() % 2, 1);
                for &p in self.blossomendps[b].iter().skip(1).step_by(2) {
                    assert_eq!(self.mate[self.endpoint[p]], p ^ 1);
                    assert_eq!(self.mate[self.endpoint[p ^ 1]], p);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn mate_pairs(edges: &[(usize, usize, i64)], maxcard: bool) -> Vec<Option<usize>> {
        max_weight_matching(edges, maxcard)
    }

    fn weight_of(edges: &[(usize, usize, i64)], mate: &[Option<usize>]) -> i64 {
        let mut w = 0;
        for &(i, j, wt) in edges {
            if mate.get(i).copied().flatten() == Some(j) {
                w += wt;
            }
        }
        w
    }

    /// All matchings by brute force; returns the best weight (optionally
    /// only over maximum-cardinality matchings).
    fn brute_best(n: usize, edges: &[(usize, usize, i64)], maxcard: bool) -> i64 {
        fn rec(
            edges: &[(usize, usize, i64)],
            k: usize,
            used: &mut [bool],
            w: i64,
            c: usize,
            best: &mut Vec<(usize, i64)>,
        ) {
            if k == edges.len() {
                best.push((c, w));
                return;
            }
            rec(edges, k + 1, used, w, c, best);
            let (i, j, wt) = edges[k];
            if !used[i] && !used[j] {
                used[i] = true;
                used[j] = true;
                rec(edges, k + 1, used, w + wt, c + 1, best);
                used[i] = false;
                used[j] = false;
            }
        }
        let mut all = Vec::new();
        rec(edges, 0, &mut vec![false; n], 0, 0, &mut all);
        if maxcard {
            let cmax = all.iter().map(|x| x.0).max().unwrap();
            all.iter().filter(|x| x.0 == cmax).map(|x| x.1).max().unwrap()
        } else {
            all.iter().map(|x| x.1).max().unwrap()
        }
    }

    #[test]
    fn single_edge() {
        assert_eq!(mate_pairs(&[(0, 1, 1)], false), vec![Some(1), Some(0)]);
    }

    #[test]
    fn prefers_heavy_middle_edge() {
        let m = mate_pairs(&[(1, 2, 5), (2, 3, 11), (3, 4, 5)], false);
        assert_eq!(m[2], Some(3));
        assert_eq!(m[1], None);
    }

    #[test]
    fn max_cardinality_overrides_weight() {
        let m = mate_pairs(&[(1, 2, 5), (2, 3, 11), (3, 4, 5)], true);
        assert_eq!(m[1], Some(2));
        assert_eq!(m[3], Some(4));
    }

    #[test]
    fn weighted_square() {
        // 4-cycle with weights 3,1,3,1: the two weight-3 edges win.
        let edges = [(0, 1, 3), (1, 2, 1), (2, 3, 3), (3, 0, 1)];
        let m = mate_pairs(&edges, false);
        assert_eq!(weight_of(&edges, &m), 6);
    }

    #[test]
    fn s_blossom_augmentation() {
        let m = mate_pairs(&[(1, 2, 8), (1, 3, 9), (2, 3, 10), (3, 4, 7)], false);
        assert_eq!(m[1], Some(2));
        assert_eq!(m[3], Some(4));
        let m = mate_pairs(
            &[(1, 2, 8), (1, 3, 9), (2, 3, 10), (3, 4, 7), (1, 6, 5), (4, 5, 6)],
            false,
        );
        assert_eq!(m[1], Some(6));
        assert_eq!(m[2], Some(3));
        assert_eq!(m[4], Some(5));
    }

    #[test]
    fn nested_s_blossom_expands() {
        let m = mate_pairs(
            &[
                (1, 2, 9),
                (1, 3, 9),
                (2, 3, 10),
                (2, 4, 8),
                (3, 5, 8),
                (4, 5, 10),
                (5, 6, 6),
            ],
            false,
        );
        assert_eq!(m[1], Some(3));
        assert_eq!(m[2], Some(4));
        assert_eq!(m[5], Some(6));
    }

    #[test]
    fn t_blossom_relabel_expand() {
        let m = mate_pairs(
            &[
                (1, 2, 23),
                (1, 5, 22),
                (1, 6, 15),
                (2, 3, 25),
                (3, 4, 22),
                (4, 5, 25),
                (4, 8, 14),
                (5, 7, 13),
            ],
            false,
        );
        assert_eq!(m[1], Some(6));
        assert_eq!(m[2], Some(3));
        assert_eq!(m[4], Some(8));
        assert_eq!(m[5], Some(7));
    }

    #[test]
    fn nasty_blossom_least_slack() {
        let m = mate_pairs(
            &[
                (1, 2, 45),
                (1, 5, 45),
                (2, 3, 50),
                (3, 4, 45),
                (4, 5, 50),
                (1, 6, 30),
                (3, 9, 35),
                (4, 8, 28),
                (5, 7, 26),
                (9, 10, 5),
            ],
            false,
        );
        assert_eq!(m[1], Some(6));
        assert_eq!(m[2], Some(3));
        assert_eq!(m[4], Some(8));
        assert_eq!(m[5], Some(7));
        assert_eq!(m[9], Some(10));
    }

    #[test]
    fn random_graphs_match_brute_force() {
        // Deterministic LCG; small dense graphs exercise blossom paths.
        let mut state: u64 = 0x9E3779B97F4A7C15;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for trial in 0..120 {
            let n = 4 + next() % 5; // 4..8
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if next() % 100 < 55 {
                        edges.push((i, j, (next() % 20) as i64));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let maxcard = trial % 2 == 0;
            let m = mate_pairs(&edges, maxcard);
            let got = weight_of(&edges, &m);
            let want = brute_best(n, &edges, maxcard);
            if maxcard {
                // Cardinality must also be maximum.
                let cm = m.iter().flatten().count() / 2;
                let mut best_c = 0;
                {
                    fn rec_c(
                        edges: &[(usize, usize, i64)],
                        k: usize,
                        used: &mut [bool],
                        c: usize,
                        best: &mut usize,
                    ) {
                        if k == edges.len() {
                            *best = (*best).max(c);
                            return;
                        }
                        rec_c(edges, k + 1, used, c, best);
                        let (i, j, _) = edges[k];
                        if !used[i] && !used[j] {
                            used[i] = true;
                            used[j] = true;
                            rec_c(edges, k + 1, used, c + 1, best);
                            used[i] = false;
                            used[j] = false;
                        }
                    }
                    rec_c(&edges, 0, &mut vec![false; n], 0, &mut best_c);
                }
                assert_eq!(cm, best_c, "cardinality mismatch on trial {trial}");
            }
            assert_eq!(got, want, "weight mismatch on trial {trial}: {edges:?}");
        }
    }
}
