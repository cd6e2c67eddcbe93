//! The embedding on generator curves, Dehn twists of images, and the identity suites.

pub mod formulas;
mod checks;
mod suites;
mod twist;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::exactalg::AlgError;
use crate::qtorus::{QTElem, QtError};
use crate::sausage::{CurveId, CurveKind, EExps, SausageError, SausageGraph};

pub use checks::{expand_support_check, fracdehn_check, linear_independence_check};
pub use formulas::{SepScalars, Scalars};
pub use suites::{run_identity_suite, run_suite_on, IdentityResult, SuiteId, SuiteOptions, SuiteReport};
pub use twist::{sigma_tau_aux, twist_by_automorphism, twist_image};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Sausage(#[from] SausageError),
    #[error(transparent)]
    Qt(#[from] QtError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("curve `{0}` has no closed-form image; use the tau construction")]
    NotAGenerator(String),
    #[error("cannot twist `{curve}` along `{edge}`: unsupported intersection pattern")]
    UnsupportedTwist { curve: String, edge: String },
    #[error("suite {suite} needs a larger graph than {graph}")]
    ConfigTooSmall { suite: String, graph: String },
    #[error("mutation of `{0}` leaves the image unchanged")]
    VacuousMutation(String),
}

/// Replace `A` by `A^2` in one coefficient of one base image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub curve: CurveId,
    pub key: EExps,
}

/// Images of the catalogued curves of a sausage graph.
#[derive(Clone, Debug)]
pub struct SigmaTable {
    graph: Arc<SausageGraph>,
    scalars: Scalars,
    images: BTreeMap<CurveId, QTElem>,
    sep: BTreeMap<usize, SepScalars>,
    mutation: Option<Mutation>,
}

impl SigmaTable {
    pub fn build(graph: &Arc<SausageGraph>) -> Result<Self, EmbedError> {
        SigmaTable::build_with(graph, None)
    }

    pub fn build_with(graph: &Arc<SausageGraph>, mutation: Option<Mutation>) -> Result<Self, EmbedError> {
        let scalars = Scalars::new(graph);
        let mut table = SigmaTable {
            graph: graph.clone(),
            scalars,
            images: BTreeMap::new(),
            sep: BTreeMap::new(),
            mutation,
        };
        let catalogue = graph.catalogue();
        for curve in catalogue.iter().filter(|c| !matches!(c.kind, CurveKind::Tau { .. } | CurveKind::TauBar { .. })) {
            let mut x = sigma_generator(curve, &table)?;
            if let Some(m) = &table.mutation {
                if m.curve == *curve {
                    x = mutate(&x, &m.key, &graph.curve_text(curve))?;
                }
            }
            if let CurveKind::Separating { c, d } = curve.kind {
                table.sep.insert(c, formulas::sep_scalars(&table.scalars, c, d));
            }
            table.images.insert(curve.clone(), x);
        }
        for &c in graph.separating_edges() {
            let (tau, tau_bar) = sigma_tau_aux(c, &table)?;
            table.images.insert(graph.tau(c, false)?, tau);
            table.images.insert(graph.tau(c, true)?, tau_bar);
        }
        Ok(table)
    }

    pub fn graph(&self) -> &Arc<SausageGraph> {
        &self.graph
    }

    pub fn scalars(&self) -> &Scalars {
        &self.scalars
    }

    pub fn mutation(&self) -> Option<&Mutation> {
        self.mutation.as_ref()
    }

    pub fn images(&self) -> &BTreeMap<CurveId, QTElem> {
        &self.images
    }

    /// Scalars of the separating curve at `c`.
    pub fn sep_scalars(&self, c: usize) -> Result<&SepScalars, EmbedError> {
        self.sep.get(&c).ok_or_else(|| {
            EmbedError::Sausage(SausageError::WrongRole {
                edge: String::from(self.graph.edge_name(c)),
                expected: "separating",
            })
        })
    }

    /// `sigma(alpha_e)` for an internal edge.
    pub fn pants(&self, e: usize) -> Result<QTElem, EmbedError> {
        self.sigma(&self.graph.alpha(e)?)
    }

    /// The image of a catalogued curve, applying its twist word.
    pub fn sigma(&self, curve: &CurveId) -> Result<QTElem, EmbedError> {
        let base = curve.base();
        let mut x = self
            .images
            .get(&base)
            .cloned()
            .ok_or_else(|| EmbedError::Sausage(SausageError::UnknownCurve(curve.label.clone())))?;
        for &(e, s) in &curve.twists {
            x = twist_image(&x, &base, e, s as i32, self)?;
        }
        Ok(x)
    }
}

fn mutate(x: &QTElem, key: &EExps, label: &str) -> Result<QTElem, EmbedError> {
    let f = x.coeff(key);
    let g = f.a_power_subst(2);
    if f.equals(&g) {
        return Err(EmbedError::VacuousMutation(String::from(label)));
    }
    let delta = QTElem::term(x.graph(), *key, g.sub(&f));
    Ok(x.add(&delta))
}

/// The closed-form image of a pants, one-cycle, two-cycle or separating curve.
pub fn sigma_generator(curve: &CurveId, table: &SigmaTable) -> Result<QTElem, EmbedError> {
    let s = &table.scalars;
    let g = &table.graph;
    if !curve.twists.is_empty() {
        return Err(EmbedError::NotAGenerator(g.curve_text(curve)));
    }
    for e in kind_edges(&curve.kind) {
        if e >= g.edges().len() {
            return Err(EmbedError::Sausage(SausageError::UnknownCurve(curve.label.clone())));
        }
    }
    Ok(match curve.kind {
        CurveKind::Pants { e } => s.elem(s.pantsf(e)),
        CurveKind::OneCycle { e, f } => formulas::sigma_one_cycle(s, e, f),
        CurveKind::TwoCycle { b, c, a, a2 } => formulas::sigma_two_cycle(s, b, c, a, a2),
        CurveKind::Separating { c, d } => formulas::sigma_separating(s, c, d),
        CurveKind::Tau { .. } | CurveKind::TauBar { .. } => {
            return Err(EmbedError::NotAGenerator(curve.label.clone()))
        }
    })
}

fn kind_edges(kind: &CurveKind) -> Vec<usize> {
    match *kind {
        CurveKind::Pants { e } => alloc::vec![e],
        CurveKind::OneCycle { e, f } => alloc::vec![e, f],
        CurveKind::TwoCycle { b, c, a, a2 } => alloc::vec![b, c, a, a2],
        CurveKind::Separating { c, d } => alloc::vec![c, d[0], d[1], d[2], d[3]],
        CurveKind::Tau { c } | CurveKind::TauBar { c } => alloc::vec![c],
    }
}
