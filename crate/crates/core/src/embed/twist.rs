use alloc::string::String;

use super::{EmbedError, SigmaTable};
use crate::exactalg::Frac;
use crate::qtorus::{automorphism_tau_c, QTElem};
use crate::sausage::{CurveId, EdgeRole};

/// `1 / (A^n - A^-n)`.
fn inv_quantum(table: &SigmaTable, n: i32) -> Frac {
    let s = table.scalars();
    s.inv(&s.uf(n, &[]))
}

/// `sigma(t_e^sign(curve))` from `x = sigma(curve)`.
///
/// Intersection one uses the A-commutator with `sigma(alpha_e)`; a separating
/// edge met twice uses the twist automorphism.
pub fn twist_image(x: &QTElem, curve: &CurveId, e: usize, sign: i32, table: &SigmaTable) -> Result<QTElem, EmbedError> {
    let g = table.graph();
    let unsupported = || EmbedError::UnsupportedTwist {
        curve: g.curve_text(curve),
        edge: if e < g.edges().len() { String::from(g.edge_name(e)) } else { alloc::format!("#{e}") },
    };
    if !g.is_internal(e) || (sign != 1 && sign != -1) {
        return Err(unsupported());
    }
    match g.intersection(curve, e) {
        0 => Ok(x.clone()),
        1 => {
            let alpha = table.pants(e)?;
            let ax = alpha.mul(x);
            let xa = x.mul(&alpha);
            let num = if sign > 0 { ax.mul_a(1).sub(&xa.mul_a(-1)) } else { xa.mul_a(1).sub(&ax.mul_a(-1)) };
            Ok(num.mul_frac(&inv_quantum(table, 2)))
        }
        2 if g.role(e) == EdgeRole::Separating => Ok(automorphism_tau_c(x, e, sign)?),
        _ => Err(unsupported()),
    }
}

/// The twist automorphism route, valid whenever the image is known to transform by it.
pub fn twist_by_automorphism(x: &QTElem, e: usize, sign: i32) -> QTElem {
    x.twist_automorphism(e, sign)
}

/// `(sigma(tau), sigma(tau_bar))` at the separating edge `c`, where
/// `A^2 c gamma - A^-2 gamma c = (A^4 - A^-4) tau + (A^2 - A^-2) delta_1`
/// and `tau_bar = t_c^-1(tau)`.
pub fn sigma_tau_aux(c: usize, table: &SigmaTable) -> Result<(QTElem, QTElem), EmbedError> {
    let g = table.graph();
    let gamma_id = g.gamma_at(c)?;
    let gamma = table.sigma(&gamma_id)?;
    let cc = table.pants(c)?;
    let sc = table.sep_scalars(c)?;
    let s = table.scalars();
    let lhs = cc.mul(&gamma).mul_a(2).sub(&gamma.mul(&cc).mul_a(-2));
    let rhs_known = s.elem(sc.delta1.mul_poly(&s.u(2, &[])));
    let tau = lhs.sub(&rhs_known).mul_frac(&inv_quantum(table, 4));
    let tau_bar = automorphism_tau_c(&tau, c, -1)?;
    Ok((tau, tau_bar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sausage::SausageGraph;
    use alloc::sync::Arc;

    fn table() -> SigmaTable {
        SigmaTable::build(&Arc::new(SausageGraph::build(2, true).unwrap())).unwrap()
    }

    #[test]
    fn commutator_twist_inverts() {
        let t = table();
        let beta = t.graph().beta(1).unwrap();
        let x = t.sigma(&beta).unwrap();
        let e = 0;
        let y = twist_image(&x, &beta, e, 1, &t).unwrap();
        assert_ne!(x, y);
        assert_eq!(twist_image(&y, &beta, e, -1, &t).unwrap(), x);
    }

    #[test]
    fn commutator_matches_automorphism_at_one_crossing() {
        let t = table();
        let beta = t.graph().beta(1).unwrap();
        let x = t.sigma(&beta).unwrap();
        for sign in [1, -1] {
            assert_eq!(twist_image(&x, &beta, 0, sign, &t).unwrap(), twist_by_automorphism(&x, 0, sign));
        }
    }

    #[test]
    fn swapped_sign_inverse_negates() {
        let t = table();
        let beta = t.graph().beta(1).unwrap();
        let x = t.sigma(&beta).unwrap();
        let y = twist_image(&x, &beta, 0, 1, &t).unwrap();
        let alpha = t.pants(0).unwrap();
        let back = alpha.mul(&y).mul_a(-1).sub(&y.mul(&alpha).mul_a(1)).mul_frac(&inv_quantum(&t, 2));
        assert_eq!(back, x.neg());
    }

    #[test]
    fn disjoint_edge_is_identity() {
        let t = table();
        let g = t.graph().clone();
        let beta = g.beta(1).unwrap();
        let x = t.sigma(&beta).unwrap();
        let e = g.internal_edges().find(|&e| g.intersection(&beta, e) == 0).unwrap();
        assert_eq!(twist_image(&x, &beta, e, 1, &t).unwrap(), x);
    }

    #[test]
    fn tau_bar_twists_back_to_tau() {
        let t = table();
        let c = t.graph().separating_edges()[0];
        let (tau, tau_bar) = sigma_tau_aux(c, &t).unwrap();
        assert_eq!(automorphism_tau_c(&tau_bar, c, 1).unwrap(), tau);
    }
}
