//! Closed-form coefficients of the generator images.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::exactalg::{Frac, LPoly};
use crate::qtorus::{q_poly, QTElem};
use crate::sausage::{EExps, SausageGraph, ZERO_E};

/// Small builder for scalars over a fixed graph.
#[derive(Clone, Debug)]
pub struct Scalars {
    pub graph: Arc<SausageGraph>,
}

impl Scalars {
    pub fn new(graph: &Arc<SausageGraph>) -> Self {
        Scalars { graph: graph.clone() }
    }

    pub fn n(&self) -> usize {
        self.graph.nvars()
    }

    /// `c A^a prod Q_e^k`.
    pub fn mono(&self, c: i64, a: i32, qs: &[(usize, i32)]) -> LPoly {
        q_poly(&self.graph, c, a, qs)
    }

    pub fn monof(&self, c: i64, a: i32, qs: &[(usize, i32)]) -> Frac {
        Frac::from_poly(self.mono(c, a, qs))
    }

    pub fn int(&self, c: i64) -> Frac {
        Frac::from_int(self.n(), c)
    }

    /// `U(A^a prod Q_e^k) = x - x^-1`.
    pub fn u(&self, a: i32, qs: &[(usize, i32)]) -> LPoly {
        let neg: Vec<(usize, i32)> = qs.iter().map(|&(e, k)| (e, -k)).collect();
        self.mono(1, a, qs).sub(&self.mono(1, -a, &neg))
    }

    pub fn uf(&self, a: i32, qs: &[(usize, i32)]) -> Frac {
        Frac::from_poly(self.u(a, qs))
    }

    /// `-(A^2 Q_e^2 + A^-2 Q_e^-2)`.
    pub fn pants(&self, e: usize) -> LPoly {
        self.mono(-1, 2, &[(e, 2)]).add(&self.mono(-1, -2, &[(e, -2)]))
    }

    pub fn pantsf(&self, e: usize) -> Frac {
        Frac::from_poly(self.pants(e))
    }

    /// `sign * prod nums / prod dens`.
    pub fn ratio(&self, sign: i64, nums: &[LPoly], dens: &[LPoly]) -> Frac {
        let mut num = LPoly::constant(self.n(), sign);
        for p in nums {
            num = num.mul(p);
        }
        let mut f = Frac::from_poly(num);
        for d in dens {
            f = f.div(&Frac::from_poly(d.clone())).expect("nonzero U-factor");
        }
        f
    }

    pub fn inv(&self, f: &Frac) -> Frac {
        f.inv().expect("nonzero scalar")
    }

    pub fn elem(&self, f: Frac) -> QTElem {
        QTElem::scalar(&self.graph, f)
    }

    pub fn e_key(&self, ks: &[(usize, i16)]) -> EExps {
        let mut k = ZERO_E;
        for &(e, x) in ks {
            k[e] += x;
        }
        k
    }

    pub fn term(&self, ks: &[(usize, i16)], f: Frac) -> QTElem {
        QTElem::term(&self.graph, self.e_key(ks), f)
    }
}

/// `F` of a one-cycle at loop `e` with third edge `f`.
pub fn one_cycle_f(s: &Scalars, e: usize, f: usize) -> Frac {
    s.ratio(1, &[s.u(2, &[(e, 2), (f, 1)]), s.u(0, &[(e, 2), (f, -1)])], &[s.u(2, &[(e, 2)]), s.u(0, &[(e, 2)])])
}

/// `[F_{1,-1}, F_{-1,1}, F_{-1,-1}]` of a two-cycle through `(b, c)` with side edges `a`, `a2`.
pub fn two_cycle_f(s: &Scalars, b: usize, c: usize, a: usize, a2: usize) -> [Frac; 3] {
    let f_pm = s.ratio(
        -1,
        &[s.u(0, &[(a2, 1), (c, 1), (b, -1)]), s.u(0, &[(a, 1), (c, 1), (b, -1)])],
        &[s.u(2, &[(c, 2)]), s.u(0, &[(c, 2)])],
    );
    let f_mp = s.ratio(
        -1,
        &[s.u(0, &[(a2, 1), (b, 1), (c, -1)]), s.u(0, &[(a, 1), (b, 1), (c, -1)])],
        &[s.u(2, &[(b, 2)]), s.u(0, &[(b, 2)])],
    );
    let f_mm = s.ratio(
        1,
        &[
            s.u(2, &[(a2, 1), (c, 1), (b, 1)]),
            s.u(2, &[(a, 1), (c, 1), (b, 1)]),
            s.u(0, &[(b, 1), (c, 1), (a2, -1)]),
            s.u(0, &[(b, 1), (c, 1), (a, -1)]),
        ],
        &[s.u(2, &[(c, 2)]), s.u(0, &[(c, 2)]), s.u(2, &[(b, 2)]), s.u(0, &[(b, 2)])],
    );
    [f_pm, f_mp, f_mm]
}

/// `D = A^2 U(A^2 Q_c^2) U(A^2 Q_b^2)`.
pub fn two_cycle_d(s: &Scalars, b: usize, c: usize) -> Frac {
    Frac::from_poly(s.mono(1, 2, &[]).mul(&s.u(2, &[(c, 2)])).mul(&s.u(2, &[(b, 2)])))
}

/// Scalars attached to a separating edge `c` with neighbours `d = [d1, d2, d3, d4]`.
#[derive(Clone, Debug)]
pub struct SepScalars {
    pub dj: [Frac; 4],
    pub delta1: Frac,
    pub delta2: Frac,
    pub delta3: Frac,
    pub big_delta: Frac,
    pub g2: Frac,
    pub g2_hat: Frac,
    pub g0: Frac,
    pub gm2: Frac,
}

pub fn sep_scalars(s: &Scalars, c: usize, d: [usize; 4]) -> SepScalars {
    let dj = d.map(|e| s.pantsf(e));
    let [d1, d2, d3, d4] = dj.clone();
    let delta1 = d1.mul(&d3).add(&d2.mul(&d4));
    let delta2 = d1.mul(&d2).add(&d3.mul(&d4));
    let delta3 = d1.mul(&d4).add(&d2.mul(&d3));
    let big_delta = Frac::sum(
        s.n(),
        [d1.mul(&d1), d2.mul(&d2), d3.mul(&d3), d4.mul(&d4), d1.mul(&d2).mul(&d3).mul(&d4)].iter(),
    );
    let [e1, e2, e3, e4] = d;
    let g2 = s.ratio(-1, &[s.u(0, &[(e1, 1), (e4, 1), (c, -1)]), s.u(0, &[(e2, 1), (e3, 1), (c, -1)])], &[]);
    let g2_hat = s.ratio(-1, &[s.u(2, &[(e1, 1), (e4, 1), (c, -1)]), s.u(2, &[(e2, 1), (e3, 1), (c, -1)])], &[]);
    let a2_plus = s.mono(1, 2, &[]).add(&s.mono(1, -2, &[]));
    let g0_num = delta1.mul(&s.pantsf(c)).add(&delta2.mul_poly(&a2_plus));
    let g0 = g0_num.mul(&s.ratio(1, &[], &[s.u(0, &[(c, 2)]), s.u(4, &[(c, 2)])]));
    let gm2 = s.ratio(
        -1,
        &[
            s.u(2, &[(e1, 1), (e4, 1), (c, 1)]),
            s.u(0, &[(e1, 1), (c, 1), (e4, -1)]),
            s.u(0, &[(e4, 1), (c, 1), (e1, -1)]),
            s.u(2, &[(e2, 1), (e3, 1), (c, 1)]),
            s.u(0, &[(e2, 1), (c, 1), (e3, -1)]),
            s.u(0, &[(e3, 1), (c, 1), (e2, -1)]),
        ],
        &[s.u(-2, &[(c, 2)]), s.u(0, &[(c, 2)]), s.u(0, &[(c, 2)]), s.u(2, &[(c, 2)])],
    );
    SepScalars { dj, delta1, delta2, delta3, big_delta, g2, g2_hat, g0, gm2 }
}

/// `E_e + E_e^-1 F`.
pub fn sigma_one_cycle(s: &Scalars, e: usize, f: usize) -> QTElem {
    s.term(&[(e, 1)], s.int(1)).add(&s.term(&[(e, -1)], one_cycle_f(s, e, f)))
}

/// `E_b E_c + E_b E_c^-1 F_{1,-1} + E_b^-1 E_c F_{-1,1} + E_b^-1 E_c^-1 F_{-1,-1}`.
pub fn sigma_two_cycle(s: &Scalars, b: usize, c: usize, a: usize, a2: usize) -> QTElem {
    let [f_pm, f_mp, f_mm] = two_cycle_f(s, b, c, a, a2);
    let items = [
        s.term(&[(b, 1), (c, 1)], s.int(1)),
        s.term(&[(b, 1), (c, -1)], f_pm),
        s.term(&[(b, -1), (c, 1)], f_mp),
        s.term(&[(b, -1), (c, -1)], f_mm),
    ];
    QTElem::sum(&s.graph, items.iter())
}

/// `E_c^2 G_2 + G_0 + E_c^-2 G_-2`.
pub fn sigma_separating(s: &Scalars, c: usize, d: [usize; 4]) -> QTElem {
    let sc = sep_scalars(s, c, d);
    let items = [s.term(&[(c, 2)], sc.g2), s.term(&[], sc.g0), s.term(&[(c, -2)], sc.gm2)];
    QTElem::sum(&s.graph, items.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> Arc<SausageGraph> {
        Arc::new(SausageGraph::build(2, true).unwrap())
    }

    #[test]
    fn u_is_x_minus_inverse() {
        let g = g2();
        let s = Scalars::new(&g);
        let x = s.mono(1, 2, &[(0, 2)]);
        let xi = s.mono(1, -2, &[(0, -2)]);
        assert_eq!(s.u(2, &[(0, 2)]), x.sub(&xi));
        assert!(s.u(0, &[]).is_zero());
    }

    #[test]
    fn one_cycle_f_clears_to_product() {
        let g = g2();
        let s = Scalars::new(&g);
        let f = one_cycle_f(&s, 0, 1);
        let den = s.u(2, &[(0, 2)]).mul(&s.u(0, &[(0, 2)]));
        let num = s.u(2, &[(0, 2), (1, 1)]).mul(&s.u(0, &[(0, 2), (1, -1)]));
        assert!(f.mul_poly(&den).equals(&Frac::from_poly(num)));
    }

    #[test]
    fn delta_symmetric_when_pair_doubled() {
        let g = g2();
        let s = Scalars::new(&g);
        let sc = sep_scalars(&s, 2, [0, 1, 1, 0]);
        assert!(sc.delta1.equals(&sc.delta2));
        let d0 = s.pantsf(0);
        let d1 = s.pantsf(1);
        assert!(sc.delta3.equals(&d0.mul(&d0).add(&d1.mul(&d1))));
    }

    #[test]
    fn separating_image_shape() {
        let g = g2();
        let s = Scalars::new(&g);
        let x = sigma_separating(&s, 2, [0, 1, 1, 0]);
        let keys: Vec<i16> = x.terms().keys().map(|k| k[2]).collect();
        assert_eq!(keys, [-2, 0, 2]);
        assert!(x.terms().keys().all(|k| k[0] == 0 && k[1] == 0));
    }
}
