//! Plain-text storage of discretizations.
//!
//! Lines starting with `#` and blank lines are ignored. A file starts with
//! `key value` header lines, followed by panel blocks.
//!
//! Curve files:
//!
//! ```text
//! curve
//! kind gauss-legendre     # or trapezoidal
//! n 16                    # nodes per panel
//! dim 2
//! order 5                 # stored derivative order q
//! panel <offset> <scale>  # global t = offset + scale * local
//! <local> <weight> <x y z> <d1x d1y d1z> ... <dqx dqy dqz>
//! ```
//!
//! Each panel line is followed by `n` node lines. Derivatives are taken with
//! respect to the local parameter.
//!
//! Surface files use `surface`, then `kind_s`, `n_s`, `kind_t`, `n_t` and
//! `order`. A block starts with `panel <offset_s> <scale_s> <offset_t> <scale_t>`
//! and holds `n_s * n_t` node lines, row-major in (s, t):
//!
//! ```text
//! <s_local> <t_local> <weight> <x y z>
//!   <∂_s^k γ, k = 1..q> <∂_t^k γ, k = 1..q>
//!   <∂_s^k γ_t, k = 0..q-1> <∂_t^k γ_s, k = 0..q-1>
//! ```
//!
//! every entry being an `x y z` triple.

use std::fmt::Write as _;

use super::discretization::{
    CurveDiscretization, CurveNode, CurvePanel, DirectionSpec, PanelMap, SurfaceDiscretization, SurfaceNode,
    SurfacePanel,
};
use crate::error::{Error, Result};
use crate::rules::RuleKind;

fn fmt_triple(out: &mut String, v: &[f64; 3]) {
    for c in v {
        let _ = write!(out, " {c:.17e}");
    }
}

/// Serializes a curve discretization.
pub fn write_curve(disc: &CurveDiscretization) -> String {
    let mut out = String::from("curve\n");
    let _ = writeln!(out, "kind {}", disc.spec.kind.name());
    let _ = writeln!(out, "n {}", disc.spec.n);
    let _ = writeln!(out, "dim {}", disc.dim);
    let _ = writeln!(out, "order {}", disc.order);
    for panel in &disc.panels {
        let _ = writeln!(out, "panel {:.17e} {:.17e}", panel.map.offset, panel.map.scale);
        for node in &panel.nodes {
            let _ = write!(out, "{:.17e} {:.17e}", node.local, node.weight);
            for d in &node.derivs {
                fmt_triple(&mut out, d);
            }
            out.push('\n');
        }
    }
    out
}

/// Serializes a surface discretization.
pub fn write_surface(disc: &SurfaceDiscretization) -> String {
    let mut out = String::from("surface\n");
    for (dir, spec) in ["s", "t"].iter().zip(&disc.specs) {
        let _ = writeln!(out, "kind_{dir} {}", spec.kind.name());
        let _ = writeln!(out, "n_{dir} {}", spec.n);
    }
    let _ = writeln!(out, "order {}", disc.order);
    for panel in &disc.panels {
        let [ms, mt] = panel.maps;
        let _ = writeln!(out, "panel {:.17e} {:.17e} {:.17e} {:.17e}", ms.offset, ms.scale, mt.offset, mt.scale);
        for node in &panel.nodes {
            let _ = write!(out, "{:.17e} {:.17e} {:.17e}", node.local[0], node.local[1], node.weight);
            fmt_triple(&mut out, &node.along[0][0]);
            for v in node.along[0][1..].iter().chain(&node.along[1][1..]).chain(&node.cross[0]).chain(&node.cross[1]) {
                fmt_triple(&mut out, v);
            }
            out.push('\n');
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines { inner: it.peekable() }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next()
    }

    fn header(&mut self, key: &str) -> Result<(usize, &'a str)> {
        match self.next() {
            Some((line, l)) => match l.split_once(char::is_whitespace) {
                Some((k, v)) if k == key => Ok((line, v.trim())),
                _ => Err(Error::Parse { line, message: format!("expected '{key} <value>'") }),
            },
            None => Err(Error::Parse { line: 0, message: format!("missing header '{key}'") }),
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, v: &str, what: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse { line, message: format!("bad {what} '{v}'") })
}

fn parse_floats(line: usize, l: &str, expected: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = l
        .split_whitespace()
        .map(|w| parse_num::<f64>(line, w, "number"))
        .collect::<Result<_>>()?;
    if v.len() != expected {
        return Err(Error::Parse { line, message: format!("expected {expected} columns, found {}", v.len()) });
    }
    Ok(v)
}

fn triples(v: &[f64]) -> Vec<[f64; 3]> {
    v.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
}

fn parse_kind(line: usize, v: &str) -> Result<RuleKind> {
    RuleKind::from_name(v).map_err(|e| Error::Parse { line, message: e.to_string() })
}

/// Parses the format written by [`write_curve`]. The result has no chart.
pub fn read_curve(text: &str) -> Result<CurveDiscretization> {
    let mut lines = Lines::new(text);
    match lines.next() {
        Some((_, "curve")) => {}
        Some((line, _)) => return Err(Error::Parse { line, message: "expected 'curve'".into() }),
        None => return Err(Error::Parse { line: 0, message: "empty file".into() }),
    }
    let (l, v) = lines.header("kind")?;
    let kind = parse_kind(l, v)?;
    let (l, v) = lines.header("n")?;
    let n: usize = parse_num(l, v, "node count")?;
    let (l, v) = lines.header("dim")?;
    let dim: usize = parse_num(l, v, "dimension")?;
    if !(2..=3).contains(&dim) {
        return Err(Error::Parse { line: l, message: "dim must be 2 or 3".into() });
    }
    let (l, v) = lines.header("order")?;
    let order: usize = parse_num(l, v, "order")?;
    if order == 0 || order > 8 || n == 0 {
        return Err(Error::Parse { line: l, message: "order must be in 1..=8 and n >= 1".into() });
    }
    let mut panels = Vec::new();
    while let Some((line, l)) = lines.next() {
        let rest = l
            .strip_prefix("panel")
            .ok_or_else(|| Error::Parse { line, message: "expected 'panel <offset> <scale>'".into() })?;
        let m = parse_floats(line, rest, 2)?;
        let map = PanelMap { offset: m[0], scale: m[1] };
        let mut nodes = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, l) = lines
                .next()
                .ok_or_else(|| Error::Parse { line, message: "truncated panel".into() })?;
            let v = parse_floats(line, l, 2 + 3 * (order + 1))?;
            nodes.push(CurveNode { t: map.offset + map.scale * v[0], local: v[0], weight: v[1], derivs: triples(&v[2..]) });
        }
        panels.push(CurvePanel::new(map, nodes));
    }
    if panels.is_empty() {
        return Err(Error::Parse { line: 0, message: "no panels".into() });
    }
    let spec = DirectionSpec { kind, n, panels: panels.len() };
    if kind == RuleKind::Trapezoidal && panels.len() != 1 {
        return Err(Error::Parse { line: 0, message: "trapezoidal files hold one panel".into() });
    }
    Ok(CurveDiscretization { chart: None, spec, dim, order, panels })
}

/// Parses the format written by [`write_surface`]. The result has no chart.
pub fn read_surface(text: &str) -> Result<SurfaceDiscretization> {
    let mut lines = Lines::new(text);
    match lines.next() {
        Some((_, "surface")) => {}
        Some((line, _)) => return Err(Error::Parse { line, message: "expected 'surface'".into() }),
        None => return Err(Error::Parse { line: 0, message: "empty file".into() }),
    }
    let mut kinds = [RuleKind::Trapezoidal; 2];
    let mut ns = [0usize; 2];
    for (d, dir) in ["s", "t"].iter().enumerate() {
        let (l, v) = lines.header(&format!("kind_{dir}"))?;
        kinds[d] = parse_kind(l, v)?;
        let (l, v) = lines.header(&format!("n_{dir}"))?;
        ns[d] = parse_num(l, v, "node count")?;
        if ns[d] == 0 {
            return Err(Error::Parse { line: l, message: "node count must be positive".into() });
        }
    }
    let (l, v) = lines.header("order")?;
    let order: usize = parse_num(l, v, "order")?;
    if order == 0 || order > 8 {
        return Err(Error::Parse { line: l, message: "order must be in 1..=8".into() });
    }
    let cols = 6 + 3 * 4 * order;
    let mut panels = Vec::new();
    let mut offsets = [Vec::new(), Vec::new()];
    while let Some((line, l)) = lines.next() {
        let rest = l.strip_prefix("panel").ok_or_else(|| Error::Parse {
            line,
            message: "expected 'panel <offset_s> <scale_s> <offset_t> <scale_t>'".into(),
        })?;
        let m = parse_floats(line, rest, 4)?;
        let maps = [PanelMap { offset: m[0], scale: m[1] }, PanelMap { offset: m[2], scale: m[3] }];
        for d in 0..2 {
            if !offsets[d].contains(&m[2 * d].to_bits()) {
                offsets[d].push(m[2 * d].to_bits());
            }
        }
        let mut nodes = Vec::with_capacity(ns[0] * ns[1]);
        for _ in 0..ns[0] * ns[1] {
            let (line, l) = lines
                .next()
                .ok_or_else(|| Error::Parse { line, message: "truncated panel".into() })?;
            let v = parse_floats(line, l, cols)?;
            let tr = triples(&v[3..]);
            let (pos, rest) = (tr[0], &tr[1..]);
            let along_s: Vec<[f64; 3]> = std::iter::once(pos).chain(rest[..order].iter().copied()).collect();
            let along_t: Vec<[f64; 3]> = std::iter::once(pos).chain(rest[order..2 * order].iter().copied()).collect();
            nodes.push(SurfaceNode {
                params: [maps[0].offset + maps[0].scale * v[0], maps[1].offset + maps[1].scale * v[1]],
                local: [v[0], v[1]],
                weight: v[2],
                along: [along_s, along_t],
                cross: [rest[2 * order..3 * order].to_vec(), rest[3 * order..4 * order].to_vec()],
            });
        }
        let local_s = (0..ns[0]).map(|i| nodes[i * ns[1]].local[0]).collect();
        let local_t = (0..ns[1]).map(|j| nodes[j].local[1]).collect();
        panels.push(SurfacePanel::new(maps, [local_s, local_t], nodes));
    }
    if panels.is_empty() {
        return Err(Error::Parse { line: 0, message: "no panels".into() });
    }
    let specs = [0, 1].map(|d| DirectionSpec { kind: kinds[d], n: ns[d], panels: offsets[d].len() });
    if specs[0].panels * specs[1].panels != panels.len() {
        return Err(Error::Parse { line: 0, message: "panels do not form a tensor grid".into() });
    }
    Ok(SurfaceDiscretization { chart: None, specs, order, panels })
}
