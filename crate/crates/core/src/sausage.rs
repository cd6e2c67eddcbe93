//! The sausage pants decomposition: dual graph, parity lattices, generator sets and curve catalogue.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::exactalg::{Exps, MAX_VARS, ZERO_EXPS};

/// Exponent vector over internal edges; slot `i` is the `i`-th internal edge.
pub type EExps = [i16; MAX_VARS];

pub const ZERO_E: EExps = [0; MAX_VARS];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SausageError {
    #[error("no sausage decomposition for genus {genus} ({})", if *closed { "closed" } else { "one boundary" })]
    InvalidGenus { genus: u32, closed: bool },
    #[error("genus {0} needs more than {MAX_VARS} variables")]
    TooLarge(u32),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("edge `{edge}` is not a {expected} edge")]
    WrongRole { edge: String, expected: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeRole {
    Loop,
    HandleA,
    HandleB,
    Separating,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub name: String,
    pub role: EdgeRole,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    Pants { e: usize },
    /// Loop `e` with the third edge `f` at its vertex.
    OneCycle { e: usize, f: usize },
    /// Through the handle `(b, c)` with side edges `a`, `a2`.
    TwoCycle { b: usize, c: usize, a: usize, a2: usize },
    /// Around the separating edge `c`; `d = [d1, d2, d3, d4]` with `(d1, d4)` on one side.
    Separating { c: usize, d: [usize; 4] },
    Tau { c: usize },
    TauBar { c: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveId {
    pub kind: CurveKind,
    pub label: String,
    /// Full twists `(edge, +-1)` in order of application.
    pub twists: Vec<(usize, i8)>,
}

impl CurveId {
    pub fn base(&self) -> CurveId {
        CurveId { kind: self.kind.clone(), label: self.label.clone(), twists: Vec::new() }
    }

    pub fn twisted(&self, edge: usize, sign: i8) -> CurveId {
        let mut c = self.clone();
        c.twists.push((edge, sign));
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattices {
    pub e_basis: Vec<EExps>,
    pub q_basis: Vec<Exps>,
    pub central: Vec<usize>,
}

/// One entry of a generator list: its symbol and exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub symbol: String,
    pub exps: Exps,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSets {
    /// Q-monomials, exponents indexed by variable.
    pub x: Vec<Generator>,
    /// E-monomials, exponents indexed by internal edge.
    pub y: Vec<Generator>,
    pub z: Vec<Generator>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SausageGraph {
    genus: u32,
    closed: bool,
    edges: Vec<Edge>,
    n_internal: usize,
    vertices: Vec<[usize; 3]>,
    handles: Vec<(usize, usize)>,
    seps: Vec<usize>,
    loops: Vec<usize>,
}

impl SausageGraph {
    pub fn build(genus: u32, closed: bool) -> Result<Self, SausageError> {
        if genus == 0 || (closed && genus < 2) {
            return Err(SausageError::InvalidGenus { genus, closed });
        }
        let n_internal = if closed { 3 * genus as usize - 3 } else { 3 * genus as usize - 2 };
        if n_internal + 2 > MAX_VARS {
            return Err(SausageError::TooLarge(genus));
        }
        let g = genus as usize;
        let mut edges: Vec<Edge> = Vec::new();
        let add = |name: String, role: EdgeRole, edges: &mut Vec<Edge>| {
            edges.push(Edge { name, role });
            edges.len() - 1
        };
        let a0 = add(String::from("a0"), EdgeRole::Loop, &mut edges);
        let n_handles = if closed { g - 2 } else { g - 1 };
        let mut handles = Vec::new();
        let mut seps = Vec::new();
        let mut loops = vec![a0];
        for i in 1..g {
            if i <= n_handles {
                let a = add(format!("a{i}"), EdgeRole::HandleA, &mut edges);
                let b = add(format!("b{i}"), EdgeRole::HandleB, &mut edges);
                handles.push((a, b));
            } else {
                let a = add(format!("a{i}"), EdgeRole::Loop, &mut edges);
                loops.push(a);
            }
            seps.push(add(format!("c{i}"), EdgeRole::Separating, &mut edges));
        }
        if !closed {
            add(format!("c{g}"), EdgeRole::Boundary, &mut edges);
        }
        debug_assert_eq!(edges.iter().filter(|e| e.role != EdgeRole::Boundary).count(), n_internal);
        // Univalent edges are enumerated after all internal ones.
        let mut vertices = Vec::new();
        let c_at = |i: usize| -> usize {
            if i <= seps.len() {
                seps[i - 1]
            } else {
                edges.len() - 1
            }
        };
        vertices.push([a0, a0, c_at(1)]);
        for (idx, &(a, b)) in handles.iter().enumerate() {
            let i = idx + 1;
            vertices.push([c_at(i), a, b]);
            vertices.push([a, b, c_at(i + 1)]);
        }
        if closed {
            let t = loops[1];
            vertices.push([seps[g - 2], t, t]);
        }
        Ok(SausageGraph { genus, closed, edges, n_internal, vertices, handles, seps, loops })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_internal(&self) -> usize {
        self.n_internal
    }

    pub fn n_univalent(&self) -> usize {
        self.edges.len() - self.n_internal
    }

    pub fn internal_edges(&self) -> core::ops::Range<usize> {
        0..self.n_internal
    }

    pub fn is_internal(&self, e: usize) -> bool {
        e < self.n_internal
    }

    pub fn nvars(&self) -> usize {
        1 + self.edges.len()
    }

    /// Variable index of an edge's `Q` (internal) or `C` (univalent) variable.
    pub fn var(&self, e: usize) -> usize {
        1 + e
    }

    pub fn vertices(&self) -> &[[usize; 3]] {
        &self.vertices
    }

    pub fn handles(&self) -> &[(usize, usize)] {
        &self.handles
    }

    pub fn separating_edges(&self) -> &[usize] {
        &self.seps
    }

    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edges[e].name
    }

    pub fn edge_index(&self, name: &str) -> Result<usize, SausageError> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| SausageError::UnknownEdge(String::from(name)))
    }

    pub fn role(&self, e: usize) -> EdgeRole {
        self.edges[e].role
    }

    /// Printed variable names: `A`, `Q[edge]` per internal edge, `C[j]` per univalent edge.
    pub fn var_names(&self) -> Vec<String> {
        let mut names = vec![String::from("A")];
        for (i, e) in self.edges.iter().enumerate() {
            if i < self.n_internal {
                names.push(format!("Q[{}]", e.name));
            } else {
                names.push(format!("C[{}]", i - self.n_internal + 1));
            }
        }
        names
    }

    pub fn lambda_member(&self, k: &EExps) -> bool {
        let val = |e: usize| if e < self.n_internal { k[e] as i32 } else { 0 };
        self.vertices.iter().all(|v| (val(v[0]) + val(v[1]) + val(v[2])).rem_euclid(2) == 0)
            && k[self.n_internal..].iter().all(|&x| x == 0)
    }

    pub fn lattices(&self) -> Lattices {
        let mut e_basis = Vec::new();
        let mut q_basis = Vec::new();
        let unit_e = |i: usize, c: i16| {
            let mut v = ZERO_E;
            v[i] = c;
            v
        };
        for &l in &self.loops {
            e_basis.push(unit_e(l, 1));
            q_basis.push(unit_e(self.var(l), 2));
        }
        for &(a, b) in &self.handles {
            let mut p = ZERO_E;
            p[a] = 1;
            p[b] = 1;
            let mut m = ZERO_E;
            m[a] = 1;
            m[b] = -1;
            e_basis.push(p);
            e_basis.push(m);
            let mut qp = ZERO_EXPS;
            qp[self.var(a)] = 1;
            qp[self.var(b)] = 1;
            let mut qm = ZERO_EXPS;
            qm[self.var(a)] = 1;
            qm[self.var(b)] = -1;
            q_basis.push(qp);
            q_basis.push(qm);
        }
        for &c in &self.seps {
            e_basis.push(unit_e(c, 2));
            q_basis.push(unit_e(self.var(c), 1));
        }
        let central: Vec<usize> = (self.n_internal..self.edges.len()).map(|e| self.var(e)).collect();
        for &v in &central {
            q_basis.push(unit_e(v, 1));
        }
        Lattices { e_basis, q_basis, central }
    }

    /// Coordinates of `k` in the E-lattice basis, or `None` if `k` is not in the lattice.
    pub fn e_coords(&self, k: &EExps) -> Option<Vec<i32>> {
        if !self.lambda_member(k) {
            return None;
        }
        let mut out = Vec::new();
        for &l in &self.loops {
            out.push(k[l] as i32);
        }
        for &(a, b) in &self.handles {
            let (x, y) = (k[a] as i32, k[b] as i32);
            out.push((x + y) / 2);
            out.push((x - y) / 2);
        }
        for &c in &self.seps {
            out.push(k[c] as i32 / 2);
        }
        Some(out)
    }

    pub fn e_from_coords(&self, coords: &[i32]) -> EExps {
        let basis = self.lattices().e_basis;
        assert_eq!(coords.len(), basis.len());
        let mut k = ZERO_E;
        for (c, b) in coords.iter().zip(&basis) {
            for i in 0..MAX_VARS {
                k[i] += (*c as i16) * b[i];
            }
        }
        k
    }

    /// Whether a monomial's Q/C part lies in the even Q-lattice (the `A` exponent is ignored).
    pub fn q_member(&self, e: &Exps) -> bool {
        let q = |edge: usize| e[self.var(edge)] as i32;
        self.loops.iter().all(|&l| q(l) % 2 == 0) && self.handles.iter().all(|&(a, b)| (q(a) + q(b)) % 2 == 0)
    }

    pub fn generator_sets(&self) -> GeneratorSets {
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut z = Vec::new();
        let name = |e: usize| self.edges[e].name.clone();
        let mono = |pairs: &[(usize, i16)]| {
            let mut v = ZERO_EXPS;
            for &(i, c) in pairs {
                v[i] += c;
            }
            v
        };
        let push_loop = |l: usize, x: &mut Vec<Generator>, y: &mut Vec<Generator>| {
            x.push(Generator { symbol: format!("Q[{}]^2", name(l)), exps: mono(&[(self.var(l), 2)]) });
            y.push(Generator { symbol: format!("E[{}]", name(l)), exps: mono(&[(l, 1)]) });
        };
        push_loop(self.loops[0], &mut x, &mut y);
        for &(a, b) in &self.handles {
            let (na, nb) = (name(a), name(b));
            x.push(Generator { symbol: format!("Q[{na}]*Q[{nb}]"), exps: mono(&[(self.var(a), 1), (self.var(b), 1)]) });
            x.push(Generator {
                symbol: format!("Q[{na}]*Q[{nb}]^-1"),
                exps: mono(&[(self.var(a), 1), (self.var(b), -1)]),
            });
            y.push(Generator { symbol: format!("E[{na}]*E[{nb}]"), exps: mono(&[(a, 1), (b, 1)]) });
            y.push(Generator { symbol: format!("E[{na}]*E[{nb}]^-1"), exps: mono(&[(a, 1), (b, -1)]) });
        }
        if self.closed {
            push_loop(self.loops[1], &mut x, &mut y);
        }
        for &c in &self.seps {
            x.push(Generator { symbol: format!("Q[{}]", name(c)), exps: mono(&[(self.var(c), 1)]) });
            y.push(Generator { symbol: format!("E[{}]^2", name(c)), exps: mono(&[(c, 2)]) });
        }
        for e in self.n_internal..self.edges.len() {
            z.push(Generator {
                symbol: format!("C[{}]", e - self.n_internal + 1),
                exps: mono(&[(self.var(e), 1)]),
            });
        }
        GeneratorSets { x, y, z }
    }

    fn left_pair(&self, i: usize) -> (usize, usize) {
        if i == 1 {
            (self.loops[0], self.loops[0])
        } else {
            self.handles[i - 2]
        }
    }

    fn right_pair(&self, i: usize) -> (usize, usize) {
        if i <= self.handles.len() {
            self.handles[i - 1]
        } else {
            (self.loops[1], self.loops[1])
        }
    }

    /// The edge beyond handle `i` on the right: `c_{i+1}` or the boundary edge.
    fn c_after(&self, i: usize) -> usize {
        if i < self.seps.len() {
            self.seps[i]
        } else {
            self.edges.len() - 1
        }
    }

    pub fn beta(&self, i: usize) -> Result<CurveId, SausageError> {
        let g = self.genus as usize;
        let label = format!("beta[{i}]");
        let kind = if i == 1 {
            let f = if g == 1 { self.edges.len() - 1 } else { self.seps[0] };
            CurveKind::OneCycle { e: self.loops[0], f }
        } else if i >= 2 && i - 1 <= self.handles.len() {
            let (b, c) = self.handles[i - 2];
            CurveKind::TwoCycle { b, c, a: self.seps[i - 2], a2: self.c_after(i - 1) }
        } else if self.closed && i == g {
            CurveKind::OneCycle { e: self.loops[1], f: self.seps[g - 2] }
        } else {
            return Err(SausageError::UnknownCurve(label));
        };
        Ok(CurveId { kind, label, twists: Vec::new() })
    }

    pub fn gamma(&self, i: usize) -> Result<CurveId, SausageError> {
        let label = format!("gamma[{i}]");
        if i == 0 || i > self.seps.len() {
            return Err(SausageError::UnknownCurve(label));
        }
        let (d1, d4) = self.left_pair(i);
        let (d2, d3) = self.right_pair(i);
        Ok(CurveId { kind: CurveKind::Separating { c: self.seps[i - 1], d: [d1, d2, d3, d4] }, label, twists: Vec::new() })
    }

    /// The separating curve around the c-edge `c`.
    pub fn gamma_at(&self, c: usize) -> Result<CurveId, SausageError> {
        match self.seps.iter().position(|&s| s == c) {
            Some(i) => self.gamma(i + 1),
            None => Err(SausageError::WrongRole { edge: String::from(self.edge_name(c)), expected: "separating" }),
        }
    }

    pub fn alpha(&self, e: usize) -> Result<CurveId, SausageError> {
        if e >= self.n_internal {
            return Err(SausageError::WrongRole { edge: String::from(self.edge_name(e)), expected: "internal" });
        }
        Ok(CurveId { kind: CurveKind::Pants { e }, label: format!("alpha[{}]", self.edges[e].name), twists: Vec::new() })
    }

    pub fn tau(&self, c: usize, bar: bool) -> Result<CurveId, SausageError> {
        self.gamma_at(c)?;
        let n = &self.edges[c].name;
        Ok(if bar {
            CurveId { kind: CurveKind::TauBar { c }, label: format!("taubar[{n}]"), twists: Vec::new() }
        } else {
            CurveId { kind: CurveKind::Tau { c }, label: format!("tau[{n}]"), twists: Vec::new() }
        })
    }

    pub fn catalogue(&self) -> Vec<CurveId> {
        let mut out = Vec::new();
        for e in self.internal_edges() {
            out.push(self.alpha(e).unwrap());
        }
        for i in 1..=self.genus as usize {
            out.push(self.beta(i).unwrap());
        }
        for i in 1..=self.seps.len() {
            out.push(self.gamma(i).unwrap());
        }
        for &c in &self.seps {
            out.push(self.tau(c, false).unwrap());
            out.push(self.tau(c, true).unwrap());
        }
        out
    }

    /// Geometric intersection number of a curve with the pants curve `alpha_e`.
    pub fn intersection(&self, curve: &CurveId, e: usize) -> u32 {
        match curve.kind {
            CurveKind::Pants { .. } => 0,
            CurveKind::OneCycle { e: l, .. } => u32::from(l == e),
            CurveKind::TwoCycle { b, c, .. } => u32::from(b == e || c == e),
            CurveKind::Separating { c, .. } | CurveKind::Tau { c } | CurveKind::TauBar { c } => {
                if c == e {
                    2
                } else {
                    0
                }
            }
        }
    }

    /// Parses `alpha[e]`, `beta[i]`, `gamma[i]`, `tau[c]`, `taubar[c]` with `t[e]`/`t-[e]` prefixes.
    pub fn parse_curve(&self, text: &str) -> Result<CurveId, SausageError> {
        let words: Vec<&str> = text.split_whitespace().collect();
        let Some((last, prefixes)) = words.split_last() else {
            return Err(SausageError::UnknownCurve(String::from(text)));
        };
        let mut curve = self.parse_atom(last)?;
        for w in prefixes.iter().rev() {
            let (sign, inner) = if let Some(r) = w.strip_prefix("t-[") {
                (-1, r)
            } else if let Some(r) = w.strip_prefix("t[") {
                (1, r)
            } else {
                return Err(SausageError::UnknownCurve(String::from(*w)));
            };
            let name = inner.strip_suffix(']').ok_or_else(|| SausageError::UnknownCurve(String::from(*w)))?;
            let e = self.edge_index(name)?;
            if !self.is_internal(e) {
                return Err(SausageError::WrongRole { edge: String::from(name), expected: "internal" });
            }
            curve = curve.twisted(e, sign);
        }
        Ok(curve)
    }

    fn parse_atom(&self, w: &str) -> Result<CurveId, SausageError> {
        let bad = || SausageError::UnknownCurve(String::from(w));
        let open = w.find('[').ok_or_else(bad)?;
        let arg = w[open + 1..].strip_suffix(']').ok_or_else(bad)?;
        let index = || arg.parse::<usize>().map_err(|_| bad());
        match &w[..open] {
            "alpha" => self.alpha(self.edge_index(arg)?),
            "beta" => self.beta(index()?),
            "gamma" => self.gamma(index()?),
            "tau" => self.tau(self.edge_index(arg)?, false),
            "taubar" => self.tau(self.edge_index(arg)?, true),
            _ => Err(bad()),
        }
    }

    pub fn curve_text(&self, curve: &CurveId) -> String {
        let mut s = String::new();
        for (e, sign) in curve.twists.iter().rev() {
            let t = if *sign > 0 { "t" } else { "t-" };
            s.push_str(&format!("{t}[{}] ", self.edges[*e].name));
        }
        s.push_str(&curve.label);
        s
    }
}

impl fmt::Display for SausageGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genus {} {}", self.genus, if self.closed { "closed" } else { "one boundary" })
    }
}
