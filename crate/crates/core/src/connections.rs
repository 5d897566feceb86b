//! N-linear connections, the h-normal completion, the Berwald connection and
//! randomized Cartan-type test connections.
//!
//! Vertical index pairs are always stored as `(temporal, spatial)`:
//!
//! | block | meaning | layout |
//! |---|---|---|
//! | `a_t` | `A^a_{bc}` | `[a][b][c]` |
//! | `a_s` | `A^i_{jc}` | `[i][j][c]` |
//! | `a_v` | `A^{(a)(j)}_{(i)(b)c}` | `[a][i][b][j][c]` |
//! | `h_t` | `H^a_{bk}` | `[a][b][k]` |
//! | `h_s` | `H^i_{jk}` | `[i][j][k]` |
//! | `h_v` | `H^{(a)(j)}_{(i)(b)k}` | `[a][i][b][j][k]` |
//! | `c_t` | `C^{a(k)}_{b(c)}` | `[a][b][c][k]` |
//! | `c_s` | `C^{i(k)}_{j(c)}` | `[i][j][c][k]` |
//! | `c_v` | `C^{(a)(j)(k)}_{(i)(b)(c)}` | `[a][i][b][j][c][k]` |

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{christoffel_temporal, Array3, ChristoffelSymbols, JetChart, NonlinearConnection, SpatialMetric, TemporalMetric};
use crate::dtensor::{DTensor, IndexClass, IndexSlot};
use crate::frame::Frame;
use crate::identities::{Instance, VerificationReport};
use crate::symbolic::{Expr, Rational};
use crate::tensor::DenseArray;

/// The nine coefficient blocks of an N-linear connection, adapted to `nl`.
#[derive(Debug, Clone, PartialEq)]
pub struct NLinearConnection {
    pub a_t: DenseArray,
    pub a_s: DenseArray,
    pub a_v: DenseArray,
    pub h_t: DenseArray,
    pub h_s: DenseArray,
    pub h_v: DenseArray,
    pub c_t: DenseArray,
    pub c_s: DenseArray,
    pub c_v: DenseArray,
    pub nl: NonlinearConnection,
}

/// Names of the nine blocks, for perturbations and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    At,
    As,
    Av,
    Ht,
    Hs,
    Hv,
    Ct,
    Cs,
    Cv,
}

impl Block {
    pub const ALL: [Block; 9] =
        [Block::At, Block::As, Block::Av, Block::Ht, Block::Hs, Block::Hv, Block::Ct, Block::Cs, Block::Cv];

    pub fn shape(self, m: usize, n: usize) -> Vec<usize> {
        match self {
            Block::At => vec![m, m, m],
            Block::As => vec![n, n, m],
            Block::Av => vec![m, n, m, n, m],
            Block::Ht => vec![m, m, n],
            Block::Hs => vec![n, n, n],
            Block::Hv => vec![m, n, m, n, n],
            Block::Ct => vec![m, m, m, n],
            Block::Cs => vec![n, n, m, n],
            Block::Cv => vec![m, n, m, n, m, n],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Block::At => "A_t",
            Block::As => "A",
            Block::Av => "A_v",
            Block::Ht => "H_t",
            Block::Hs => "H",
            Block::Hv => "H_v",
            Block::Ct => "C_t",
            Block::Cs => "C",
            Block::Cv => "C_v",
        }
    }

    pub fn from_name(s: &str) -> Option<Block> {
        Block::ALL.into_iter().find(|b| b.name() == s)
    }
}

impl NLinearConnection {
    /// All blocks zero.
    pub fn zero(chart: &JetChart, nl: NonlinearConnection) -> Self {
        let (m, n) = (chart.m(), chart.n());
        let z = |b: Block| DenseArray::zeros(&b.shape(m, n));
        NLinearConnection {
            a_t: z(Block::At),
            a_s: z(Block::As),
            a_v: z(Block::Av),
            h_t: z(Block::Ht),
            h_s: z(Block::Hs),
            h_v: z(Block::Hv),
            c_t: z(Block::Ct),
            c_s: z(Block::Cs),
            c_v: z(Block::Cv),
            nl,
        }
    }

    /// Raw constructor; panics on shape mismatch.
    #[allow(clippy::too_many_arguments)]
    pub fn from_blocks(chart: &JetChart, nl: NonlinearConnection, blocks: [DenseArray; 9]) -> Self {
        let (m, n) = (chart.m(), chart.n());
        for (b, arr) in Block::ALL.iter().zip(&blocks) {
            assert_eq!(arr.dims(), b.shape(m, n).as_slice(), "block {} has the wrong shape", b.name());
        }
        let [a_t, a_s, a_v, h_t, h_s, h_v, c_t, c_s, c_v] = blocks;
        NLinearConnection { a_t, a_s, a_v, h_t, h_s, h_v, c_t, c_s, c_v, nl }
    }

    pub fn block(&self, b: Block) -> &DenseArray {
        match b {
            Block::At => &self.a_t,
            Block::As => &self.a_s,
            Block::Av => &self.a_v,
            Block::Ht => &self.h_t,
            Block::Hs => &self.h_s,
            Block::Hv => &self.h_v,
            Block::Ct => &self.c_t,
            Block::Cs => &self.c_s,
            Block::Cv => &self.c_v,
        }
    }

    pub fn block_mut(&mut self, b: Block) -> &mut DenseArray {
        match b {
            Block::At => &mut self.a_t,
            Block::As => &mut self.a_s,
            Block::Av => &mut self.a_v,
            Block::Ht => &mut self.h_t,
            Block::Hs => &mut self.h_s,
            Block::Hv => &mut self.h_v,
            Block::Ct => &mut self.c_t,
            Block::Cs => &mut self.c_s,
            Block::Cv => &mut self.c_v,
        }
    }

    /// Add `delta` to one entry; panics if the index is out of range.
    pub fn perturb(&mut self, p: &Perturbation) {
        let arr = self.block_mut(p.block);
        let e = arr.get(&p.index) + &Expr::rational(p.delta.clone());
        arr.set(&p.index, e);
    }
}

/// A planted change of one connection coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub block: Block,
    /// 0-based, in the block's storage layout.
    pub index: Vec<usize>,
    pub delta: Rational,
}

/// The four effective components `(χ, A, H, C)` over `nl`.
#[derive(Debug, Clone)]
pub struct HNormalConnection {
    pub h: TemporalMetric,
    /// `χ^a_{bc}`, `[a][b][c]`.
    pub chi: Array3,
    /// `A^i_{jc}`, `[i][j][c]`.
    pub a: DenseArray,
    /// `H^i_{jk}`, `[i][j][k]`.
    pub h_s: DenseArray,
    /// `C^{i(k)}_{j(c)}`, `[i][j][c][k]`.
    pub c: DenseArray,
    pub nl: NonlinearConnection,
}

impl HNormalConnection {
    pub fn m(&self) -> usize {
        self.chi.dims()[0]
    }

    pub fn n(&self) -> usize {
        self.a.dims()[0]
    }

    pub fn complete(&self) -> NLinearConnection {
        complete_hnormal(self)
    }

    pub fn is_cartan(&self) -> bool {
        is_cartan(self)
    }

    /// Perturb one of the effective blocks `A`, `H` or `C` (the nine-block
    /// names `As`, `Hs`, `Cs`).
    pub fn perturbed(&self, p: &Perturbation) -> Option<HNormalConnection> {
        let mut out = self.clone();
        let arr = match p.block {
            Block::As => &mut out.a,
            Block::Hs => &mut out.h_s,
            Block::Cs => &mut out.c,
            _ => return None,
        };
        let e = arr.get(&p.index) + &Expr::rational(p.delta.clone());
        arr.set(&p.index, e);
        Some(out)
    }
}

/// A nine-block connection that is not the h-normal completion of its own
/// effective blocks.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("connection is not h-normal: block {0} disagrees with the completion")]
pub struct NotHNormal(pub &'static str);

impl HNormalConnection {
    /// Recover the effective blocks of `conn`, checking that `A^a_{bc}` is
    /// the Christoffel symbol of `h` and that completing them reproduces
    /// every block.
    pub fn from_nlinear(chart: &JetChart, h: &TemporalMetric, conn: &NLinearConnection) -> Result<Self, NotHNormal> {
        let chi = christoffel_temporal(chart, h);
        let m = chart.m();
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if conn.a_t.get(&[x, y, z]) != chi.get(x, y, z) {
                        return Err(NotHNormal(Block::At.name()));
                    }
                }
            }
        }
        let hn = HNormalConnection {
            h: h.clone(),
            chi,
            a: conn.a_s.clone(),
            h_s: conn.h_s.clone(),
            c: conn.c_s.clone(),
            nl: conn.nl.clone(),
        };
        let full = hn.complete();
        for b in Block::ALL {
            if full.block(b) != conn.block(b) {
                return Err(NotHNormal(b.name()));
            }
        }
        Ok(hn)
    }
}

fn delta(a: usize, b: usize) -> bool {
    a == b
}

/// Fill the nine blocks from the four effective ones.
pub fn complete_hnormal(hn: &HNormalConnection) -> NLinearConnection {
    let (m, n) = (hn.m(), hn.n());
    let a_t = DenseArray::from_fn(&[m, m, m], |x| hn.chi.get(x[0], x[1], x[2]).clone());
    let a_v = DenseArray::from_fn(&[m, n, m, n, m], |x| {
        let (a, i, b, j, c) = (x[0], x[1], x[2], x[3], x[4]);
        let mut e = Expr::zero();
        if delta(a, b) {
            e = hn.a.get(&[j, i, c]).clone();
        }
        if delta(j, i) {
            e = &e - hn.chi.get(a, b, c);
        }
        e
    });
    let h_v = DenseArray::from_fn(&[m, n, m, n, n], |x| {
        if delta(x[0], x[2]) {
            hn.h_s.get(&[x[3], x[1], x[4]]).clone()
        } else {
            Expr::zero()
        }
    });
    let c_v = DenseArray::from_fn(&[m, n, m, n, m, n], |x| {
        if delta(x[0], x[2]) {
            hn.c.get(&[x[3], x[1], x[4], x[5]]).clone()
        } else {
            Expr::zero()
        }
    });
    NLinearConnection {
        a_t,
        a_s: hn.a.clone(),
        a_v,
        h_t: DenseArray::zeros(&[m, m, n]),
        h_s: hn.h_s.clone(),
        h_v,
        c_t: DenseArray::zeros(&[m, m, m, n]),
        c_s: hn.c.clone(),
        c_v,
        nl: hn.nl.clone(),
    }
}

/// `BΓ(N₀) = (χ, 0, Γ, 0)` over the canonical nonlinear connection.
pub fn berwald_connection(h: &TemporalMetric, phi: &SpatialMetric, chart: &JetChart) -> HNormalConnection {
    let chr = ChristoffelSymbols::new(chart, h, phi);
    let (m, n) = (chart.m(), chart.n());
    let nl = NonlinearConnection::canonical(chart, &chr);
    HNormalConnection {
        h: h.clone(),
        a: DenseArray::zeros(&[n, n, m]),
        h_s: DenseArray::from_fn(&[n, n, n], |x| chr.gamma.get(x[0], x[1], x[2]).clone()),
        c: DenseArray::zeros(&[n, n, m, n]),
        chi: chr.chi,
        nl,
    }
}

/// `H^i_{jk} = H^i_{kj}` and `C^{i(k)}_{j(c)} = C^{k(i)}_{j(c)}`.
pub fn is_cartan(hn: &HNormalConnection) -> bool {
    let (m, n) = (hn.m(), hn.n());
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if hn.h_s.get(&[i, j, k]) != hn.h_s.get(&[i, k, j]) {
                    return false;
                }
                for c in 0..m {
                    if hn.c.get(&[i, j, c, k]) != hn.c.get(&[k, j, c, i]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `J^{(i)}_{(a)bj} = h_{ab} δ^i_j`, slots (vertical covariant, temporal
/// covariant, spatial covariant).
pub fn normalization_tensor(chart: &JetChart, h: &TemporalMetric) -> DTensor {
    let (m, n) = (chart.m(), chart.n());
    let slots = vec![
        IndexSlot::down(IndexClass::Vertical),
        IndexSlot::down(IndexClass::Temporal),
        IndexSlot::down(IndexClass::Spatial),
    ];
    DTensor::from_fn(m, n, slots, |x| {
        let (a, i) = (x[0] / n, x[0] % n);
        if i == x[2] {
            h.h[a][x[1]].clone()
        } else {
            Expr::zero()
        }
    })
}

/// The three covariant derivatives of `𝕁` under a nine-block connection.
pub fn normalization_residuals(chart: &JetChart, h: &TemporalMetric, conn: &NLinearConnection) -> VerificationReport {
    let frame = Frame::new(chart, conn);
    let j = normalization_tensor(chart, h);
    let mut report = VerificationReport::default();
    for (id, class) in [("J/g", IndexClass::Temporal), ("J|s", IndexClass::Spatial), ("J|(g)(s)", IndexClass::Vertical)] {
        let dj = j.cov_deriv(&frame, class);
        for (idx, e) in dj.components().indexed() {
            report.push(Instance::new(id, idx, e.clone(), vec![e.clone()]));
        }
    }
    report
}

/// `D𝕁 = 0` for the completion of `hn`.
pub fn verify_normalization(chart: &JetChart, hn: &HNormalConnection) -> VerificationReport {
    normalization_residuals(chart, &hn.h, &complete_hnormal(hn))
}

/// Parameters of the randomized Cartan-type generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCartan {
    pub seed: u64,
    /// Maximum total degree of each monomial.
    pub degree: u32,
    /// Number of monomials per entry (before cancellation).
    pub terms: usize,
    /// Coefficients are drawn from `-coeff_bound..=coeff_bound`, zero excluded.
    pub coeff_bound: i64,
    /// Probability that an entry is nonzero.
    pub density: f64,
}

impl Default for RandomCartan {
    fn default() -> Self {
        RandomCartan { seed: 1, degree: 2, terms: 2, coeff_bound: 3, density: 0.5 }
    }
}

impl RandomCartan {
    pub fn with_seed(seed: u64) -> Self {
        RandomCartan { seed, ..Self::default() }
    }

    fn poly(&self, rng: &mut ChaCha8Rng, chart: &JetChart) -> Expr {
        if !rng.gen_bool(self.density) {
            return Expr::zero();
        }
        let coords: Vec<_> = chart.coordinates().cloned().collect();
        let mut parts = Vec::with_capacity(self.terms);
        for _ in 0..self.terms {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-self.coeff_bound..=self.coeff_bound);
            }
            let deg = rng.gen_range(0..=self.degree);
            let mut mono = Expr::int(c);
            for _ in 0..deg {
                let s = &coords[rng.gen_range(0..coords.len())];
                mono = &mono * &Expr::symbol(s);
            }
            parts.push(mono);
        }
        Expr::sum(parts)
    }

    /// A Cartan-type h-normal connection with `χ` from `h` and random
    /// `A`, `H`, `C` and `N`.
    pub fn generate(&self, chart: &JetChart, h: &TemporalMetric) -> HNormalConnection {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (m, n) = (chart.m(), chart.n());
        let chi = crate::chart::christoffel_temporal(chart, h);
        let a = DenseArray::from_fn(&[n, n, m], |_| self.poly(&mut rng, chart));
        let mut h_s = DenseArray::zeros(&[n, n, n]);
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    let e = self.poly(&mut rng, chart);
                    h_s.set(&[i, k, j], e.clone());
                    h_s.set(&[i, j, k], e);
                }
            }
        }
        let mut c = DenseArray::zeros(&[n, n, m, n]);
        for j in 0..n {
            for cc in 0..m {
                for i in 0..n {
                    for k in i..n {
                        let e = self.poly(&mut rng, chart);
                        c.set(&[k, j, cc, i], e.clone());
                        c.set(&[i, j, cc, k], e);
                    }
                }
            }
        }
        let n1 = Array3::from_fn(m, n, m, |_, _, _| self.poly(&mut rng, chart));
        let n2 = Array3::from_fn(m, n, n, |_, _, _| self.poly(&mut rng, chart));
        HNormalConnection { h: h.clone(), chi, a, h_s, c, nl: NonlinearConnection { n1, n2 } }
    }
}
