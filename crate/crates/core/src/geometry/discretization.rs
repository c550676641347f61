use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::chart::{CurveChart, Direction, SurfaceChart};
use super::jet::{Jet, JET_CAPACITY};
use super::TargetPoint;
use crate::error::{invalid, Result};
use crate::rules::{rule, QuadratureRule, RuleKind};

/// Derivative order stored with discretizations by default.
pub const DEFAULT_SAMPLE_ORDER: usize = 5;

/// Affine map t = offset + scale·τ from a rule's base interval to a panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelMap {
    pub offset: f64,
    pub scale: f64,
}

impl PanelMap {
    pub fn to_global(&self, tau: Complex64) -> Complex64 {
        tau * self.scale + self.offset
    }

    pub fn to_local(&self, t: Complex64) -> Complex64 {
        (t - self.offset) / self.scale
    }
}

/// Rule kind, node count and panel count along one parameter direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionSpec {
    pub kind: RuleKind,
    pub n: usize,
    pub panels: usize,
}

impl DirectionSpec {
    pub fn trapezoidal(n: usize) -> Self {
        DirectionSpec { kind: RuleKind::Trapezoidal, n, panels: 1 }
    }

    pub fn gauss_legendre(n: usize, panels: usize) -> Self {
        DirectionSpec { kind: RuleKind::GaussLegendre, n, panels }
    }

    fn validate(&self, periodic: bool) -> Result<()> {
        match self.kind {
            RuleKind::Trapezoidal => {
                if self.panels != 1 {
                    return invalid("the trapezoidal rule uses a single global panel");
                }
                if !periodic {
                    return invalid("the trapezoidal rule needs a periodic parameter direction");
                }
            }
            RuleKind::GaussLegendre => {
                if self.panels == 0 {
                    return invalid("at least one panel is required");
                }
            }
            RuleKind::GaussLaguerre => return invalid("Gauss-Laguerre cannot discretize a chart"),
        }
        if self.n == 0 {
            return invalid("at least one node per panel is required");
        }
        Ok(())
    }

    /// Maps from the rule's base interval onto each panel of [lo, hi].
    pub fn panel_maps(&self, interval: (f64, f64)) -> Vec<PanelMap> {
        let (lo, hi) = interval;
        match self.kind {
            RuleKind::Trapezoidal => vec![PanelMap { offset: lo, scale: (hi - lo) / (2.0 * PI) }],
            _ => {
                let h = (hi - lo) / self.panels as f64;
                (0..self.panels)
                    .map(|k| PanelMap { offset: lo + (k as f64 + 0.5) * h, scale: 0.5 * h })
                    .collect()
            }
        }
    }

    /// Width of the rule's base interval, the panel length in local units.
    pub fn local_length(&self) -> f64 {
        let (lo, hi) = self.kind.base_interval();
        hi - lo
    }

    pub fn rule(&self) -> Result<Arc<QuadratureRule>> {
        rule(self.kind, self.n)
    }
}

/// Node of a curve discretization. Derivatives are taken with respect to
/// the panel-local parameter τ.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveNode {
    pub t: f64,
    pub local: f64,
    pub weight: f64,
    /// derivs[k] = d^kγ/dτ^k, k = 0..=order.
    pub derivs: Vec<[f64; 3]>,
}

impl CurveNode {
    pub fn position(&self) -> [f64; 3] {
        self.derivs[0]
    }

    pub fn tangent(&self) -> [f64; 3] {
        self.derivs[1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePanel {
    pub map: PanelMap,
    pub nodes: Vec<CurveNode>,
    pub center: [f64; 3],
    pub radius: f64,
}

/// Quadrature nodes of a curve with geometry samples.
#[derive(Debug, Clone)]
pub struct CurveDiscretization {
    pub chart: Option<Arc<dyn CurveChart>>,
    pub spec: DirectionSpec,
    pub dim: usize,
    pub order: usize,
    pub panels: Vec<CurvePanel>,
}

fn bounding(points: impl Iterator<Item = [f64; 3]> + Clone) -> ([f64; 3], f64) {
    let mut c = [0.0; 3];
    let mut count = 0.0;
    for p in points.clone() {
        for i in 0..3 {
            c[i] += p[i];
        }
        count += 1.0;
    }
    let c = c.map(|v| v / count);
    let r = points.map(|p| dist(&p, &c)).fold(0.0, f64::max);
    (c, r)
}

pub(crate) fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn check_order(order: usize, max: usize) -> Result<()> {
    if order == 0 || order >= JET_CAPACITY || order > max {
        return invalid(format!("sample order must be in 1..={}", max.min(JET_CAPACITY - 1)));
    }
    Ok(())
}

impl CurveDiscretization {
    /// Samples `chart` at the nodes of `spec`, storing derivatives up to `order`.
    pub fn new(chart: Arc<dyn CurveChart>, spec: DirectionSpec, order: usize) -> Result<Self> {
        spec.validate(chart.periodic())?;
        check_order(order, chart.max_order())?;
        let local = spec.rule()?;
        let panels = spec
            .panel_maps(chart.base_interval())
            .into_iter()
            .map(|map| {
                let nodes: Vec<CurveNode> = local
                    .nodes
                    .iter()
                    .zip(&local.weights)
                    .map(|(&tau, &w)| {
                        let t = map.offset + map.scale * tau;
                        let jet = chart.eval_jet(Jet::affine(Complex64::new(t, 0.0), map.scale, order));
                        let derivs = (0..=order).map(|k| jet.map(|c| c.derivative(k).re)).collect();
                        CurveNode { t, local: tau, weight: w, derivs }
                    })
                    .collect();
                CurvePanel::new(map, nodes)
            })
            .collect();
        Ok(CurveDiscretization { dim: chart.dim(), chart: Some(chart), spec, order, panels })
    }

    /// Convenience constructor with the default sample order.
    pub fn with_rule(chart: Arc<dyn CurveChart>, kind: RuleKind, n: usize, panels: usize) -> Result<Self> {
        let spec = DirectionSpec { kind, n, panels };
        CurveDiscretization::new(chart, spec, DEFAULT_SAMPLE_ORDER)
    }

    pub fn kind(&self) -> RuleKind {
        self.spec.kind
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn node_count(&self) -> usize {
        self.panels.iter().map(|p| p.nodes.len()).sum()
    }

    pub fn node(&self, id: CurveNodeId) -> &CurveNode {
        &self.panels[id.panel].nodes[id.index]
    }

    /// Closest node to x; ties go to the lowest index.
    pub fn nearest_node(&self, x: &TargetPoint) -> CurveNodeId {
        let mut best = (f64::INFINITY, CurveNodeId { panel: 0, index: 0 });
        for (pi, panel) in self.panels.iter().enumerate() {
            let (index, d) = panel.nearest(x);
            if d < best.0 {
                best = (d, CurveNodeId { panel: pi, index });
            }
        }
        best.1
    }

    /// Panel indices ordered by distance from x to their nearest node.
    pub fn panels_by_distance(&self, x: &TargetPoint) -> Vec<(usize, usize, f64)> {
        let mut v: Vec<(usize, usize, f64)> = self
            .panels
            .iter()
            .enumerate()
            .map(|(pi, p)| {
                let (idx, d) = p.nearest(x);
                (pi, idx, d)
            })
            .collect();
        v.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
        v
    }
}

impl CurvePanel {
    pub fn new(map: PanelMap, nodes: Vec<CurveNode>) -> Self {
        let (center, radius) = bounding(nodes.iter().map(|n| n.derivs[0]));
        CurvePanel { map, nodes, center, radius }
    }

    /// Index of and distance to the closest node.
    pub fn nearest(&self, x: &TargetPoint) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, node) in self.nodes.iter().enumerate() {
            let d = dist(&node.derivs[0], &x.coords);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveNodeId {
    pub panel: usize,
    pub index: usize,
}

/// Node of a surface discretization, with derivatives in panel-local
/// parameters (σ, τ).
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceNode {
    pub params: [f64; 2],
    pub local: [f64; 2],
    pub weight: f64,
    /// along[d][k]: k-th derivative of γ along direction d, k = 0..=order.
    pub along: [Vec<[f64; 3]>; 2],
    /// cross[d][k]: k-th derivative along d of the first partial in the
    /// other direction, k = 0..order.
    pub cross: [Vec<[f64; 3]>; 2],
}

impl SurfaceNode {
    pub fn position(&self) -> [f64; 3] {
        self.along[0][0]
    }

    pub fn partial(&self, dir: Direction) -> [f64; 3] {
        self.along[dir.index()][1]
    }

    /// γ_σ × γ_τ: normal scaled by the local area element.
    pub fn area_normal(&self) -> [f64; 3] {
        let (a, b) = (&self.along[0][1], &self.along[1][1]);
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePanel {
    pub maps: [PanelMap; 2],
    /// Local node coordinates per direction.
    pub local_nodes: [Vec<f64>; 2],
    /// Row-major grid: node (i, j) is at i·n_t + j.
    pub nodes: Vec<SurfaceNode>,
    pub center: [f64; 3],
    pub radius: f64,
}

impl SurfacePanel {
    pub fn new(maps: [PanelMap; 2], local_nodes: [Vec<f64>; 2], nodes: Vec<SurfaceNode>) -> Self {
        let (center, radius) = bounding(nodes.iter().map(|n| n.position()));
        SurfacePanel { maps, local_nodes, nodes, center, radius }
    }

    pub fn n(&self) -> [usize; 2] {
        [self.local_nodes[0].len(), self.local_nodes[1].len()]
    }

    pub fn node(&self, i: usize, j: usize) -> &SurfaceNode {
        &self.nodes[i * self.local_nodes[1].len() + j]
    }

    pub fn nearest(&self, x: &TargetPoint) -> ((usize, usize), f64) {
        let nt = self.local_nodes[1].len();
        let mut best = (0, f64::INFINITY);
        for (k, node) in self.nodes.iter().enumerate() {
            let d = dist(&node.position(), &x.coords);
            if d < best.1 {
                best = (k, d);
            }
        }
        ((best.0 / nt, best.0 % nt), best.1)
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceNodeId {
    pub panel: usize,
    pub i: usize,
    pub j: usize,
}

/// Tensor-product quadrature nodes of a surface with geometry samples.
#[derive(Debug, Clone)]
pub struct SurfaceDiscretization {
    pub chart: Option<Arc<dyn SurfaceChart>>,
    pub specs: [DirectionSpec; 2],
    pub order: usize,
    /// Panels in row-major order over (s-panel, t-panel).
    pub panels: Vec<SurfacePanel>,
}

impl SurfaceDiscretization {
    pub fn new(chart: Arc<dyn SurfaceChart>, specs: [DirectionSpec; 2], order: usize) -> Result<Self> {
        let periodic = chart.periodic();
        specs[0].validate(periodic[0])?;
        specs[1].validate(periodic[1])?;
        check_order(order, JET_CAPACITY - 1)?;
        let rules = [specs[0].rule()?, specs[1].rule()?];
        let intervals = chart.base_intervals();
        let maps_s = specs[0].panel_maps(intervals[0]);
        let maps_t = specs[1].panel_maps(intervals[1]);
        let mut panels = Vec::with_capacity(maps_s.len() * maps_t.len());
        for ms in &maps_s {
            for mt in &maps_t {
                let mut nodes = Vec::with_capacity(rules[0].n() * rules[1].n());
                for (&sl, &ws) in rules[0].nodes.iter().zip(&rules[0].weights) {
                    for (&tl, &wt) in rules[1].nodes.iter().zip(&rules[1].weights) {
                        let s = ms.offset + ms.scale * sl;
                        let t = mt.offset + mt.scale * tl;
                        nodes.push(sample_surface_node(chart.as_ref(), [*ms, *mt], [s, t], [sl, tl], ws * wt, order));
                    }
                }
                panels.push(SurfacePanel::new(
                    [*ms, *mt],
                    [rules[0].nodes.clone(), rules[1].nodes.clone()],
                    nodes,
                ));
            }
        }
        Ok(SurfaceDiscretization { chart: Some(chart), specs, order, panels })
    }

    pub fn with_rules(chart: Arc<dyn SurfaceChart>, specs: [DirectionSpec; 2]) -> Result<Self> {
        SurfaceDiscretization::new(chart, specs, DEFAULT_SAMPLE_ORDER)
    }

    /// Same chart and rule kinds with `factor` times the nodes per panel direction.
    pub fn refined(&self, factor: usize, order: usize) -> Result<Self> {
        let Some(chart) = &self.chart else {
            return invalid("refinement needs an analytic chart");
        };
        let specs = self.specs.map(|s| DirectionSpec { n: s.n * factor, ..s });
        SurfaceDiscretization::new(Arc::clone(chart), specs, order)
    }

    pub fn node_count(&self) -> usize {
        self.panels.iter().map(|p| p.nodes.len()).sum()
    }

    pub fn node(&self, id: SurfaceNodeId) -> &SurfaceNode {
        self.panels[id.panel].node(id.i, id.j)
    }

    /// Closest grid node to x; ties go to the lowest index.
    pub fn nearest_node(&self, x: &TargetPoint) -> SurfaceNodeId {
        let mut best = (f64::INFINITY, SurfaceNodeId { panel: 0, i: 0, j: 0 });
        for (pi, panel) in self.panels.iter().enumerate() {
            if dist(&panel.center, &x.coords) - panel.radius > best.0 {
                continue;
            }
            let ((i, j), d) = panel.nearest(x);
            if d < best.0 {
                best = (d, SurfaceNodeId { panel: pi, i, j });
            }
        }
        best.1
    }
}

fn sample_surface_node(
    chart: &dyn SurfaceChart,
    maps: [PanelMap; 2],
    params: [f64; 2],
    local: [f64; 2],
    weight: f64,
    order: usize,
) -> SurfaceNode {
    let [s, t] = params.map(|v| Complex64::new(v, 0.0));
    let fs = chart.frame_jet(Jet::affine(s, maps[0].scale, order), Jet::constant(t));
    let ft = chart.frame_jet(Jet::constant(s), Jet::affine(t, maps[1].scale, order));
    let take = |j: &[Jet; 3], k: usize, scale: f64| j.map(|c| c.derivative(k).re * scale);
    SurfaceNode {
        params,
        local,
        weight,
        along: [
            (0..=order).map(|k| take(&fs.pos, k, 1.0)).collect(),
            (0..=order).map(|k| take(&ft.pos, k, 1.0)).collect(),
        ],
        cross: [
            (0..order).map(|k| take(&fs.dt, k, maps[1].scale)).collect(),
            (0..order).map(|k| take(&ft.ds, k, maps[0].scale)).collect(),
        ],
    }
}
