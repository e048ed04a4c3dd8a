//! SU(2)×SU(2): coupled generators on C^{n1} ⊗ C^{n2} and their block-diagonal
//! targets ⊕_k D^{(j1+j2+1−k)}.

use crate::error::{KronError, Result};
use crate::exactnum::{ceil_ratio, ExactRational, Scalar, SqrtRational};
use crate::hubbard::XSum;
use crate::kron::{kron, kron_sum};
use crate::su2::{Generator, Irrep};

/// Geometry of the direct-sum decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingLayout {
    pub two_j1: usize,
    pub two_j2: usize,
    pub n1: usize,
    pub n2: usize,
    pub n0: usize,
    /// d_k for k = 1..=n0 (stored at index k−1).
    pub dims: Vec<usize>,
    /// z_k for k = 0..=n0.
    pub offsets: Vec<usize>,
}

impl CouplingLayout {
    pub fn new(two_j1: usize, two_j2: usize) -> Self {
        let (n1, n2) = (two_j1 + 1, two_j2 + 1);
        let n0 = n1.min(n2);
        let dims: Vec<usize> = (1..=n0).map(|k| n1 + n2 + 1 - 2 * k).collect();
        let offsets = (0..=n0).map(|k| if k == 0 { 0 } else { k * (dims[k - 1] + k - 1) }).collect();
        CouplingLayout {
            two_j1,
            two_j2,
            n1,
            n2,
            n0,
            dims,
            offsets,
        }
    }

    pub fn total(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k - 1]
    }

    /// z_k.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// 2J of block k: 2(j1 + j2 + 1 − k).
    pub fn block_two_j(&self, k: usize) -> usize {
        self.two_j1 + self.two_j2 + 2 - 2 * k
    }

    /// Block k and in-block row r for a column index q.
    pub fn column_block(&self, q: usize) -> (usize, usize) {
        let k = (1..=self.n0).find(|&k| q <= self.offsets[k]).expect("column in range");
        (k, q - self.offsets[k - 1])
    }
}

pub fn layout(two_j1: usize, two_j2: usize) -> CouplingLayout {
    CouplingLayout::new(two_j1, two_j2)
}

/// J_α^{(j1)} ⊗ I + I ⊗ J_α^{(j2)} through the Kronecker product.
pub fn product_gen(two_j1: usize, two_j2: usize, g: Generator) -> XSum<SqrtRational> {
    let (a, b) = (Irrep::new(two_j1), Irrep::new(two_j2));
    kron_sum(&a.generator(g), &b.generator(g)).expect("coupled generator sums close")
}

/// The same generator written directly with p' = ⌈p/n2⌉: J₃ has diagonal
/// m_{p'}^{(j1)} + m_{p+n2−n2p'}^{(j2)}, and J₊ = c_{p'}^{(j1)} X^{p,p+n2} +
/// c_{p+n2−n2p'}^{(j2)} X^{p,p+1}.
pub fn product_gen_direct(two_j1: usize, two_j2: usize, g: Generator) -> XSum<SqrtRational> {
    let (a, b) = (Irrep::new(two_j1), Irrep::new(two_j2));
    let n2 = b.dim();
    let n = a.dim() * n2;
    match g {
        Generator::J3 => XSum::diagonal((1..=n).map(|p| {
            let pp = ceil_ratio(p, n2);
            SqrtRational::from_rational(&(a.m(pp) + b.m(p + n2 - n2 * pp)))
        })),
        Generator::Plus => {
            let mut terms = Vec::new();
            for p in 1..=n {
                let pp = ceil_ratio(p, n2);
                let beta = p + n2 - n2 * pp;
                if pp < a.dim() {
                    terms.push((p, p + n2, a.c(pp)));
                }
                if beta < n2 {
                    terms.push((p, p + 1, b.c(beta)));
                }
            }
            XSum::from_terms(n, terms).expect("indices in range")
        }
        Generator::Minus => product_gen_direct(two_j1, two_j2, Generator::Plus).transpose(),
    }
}

/// Product-space J₃ with rational entries.
pub fn product_j3(two_j1: usize, two_j2: usize) -> XSum<ExactRational> {
    let (a, b) = (Irrep::new(two_j1), Irrep::new(two_j2));
    kron(&a.j3(), &XSum::identity(b.dim())).add(&kron(&XSum::identity(a.dim()), &b.j3()))
}

/// Block-diagonal operator: one block per coupled irrep.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOp<S> {
    pub layout: CouplingLayout,
    pub blocks: Vec<XSum<S>>,
}

impl<S: Scalar> BlockOp<S> {
    pub fn flatten(&self) -> XSum<S> {
        direct_sum(&self.blocks)
    }
}

/// Block k is the generator of the irrep with 2J = twoJ1 + twoJ2 + 2 − 2k.
pub fn block_gen(two_j1: usize, two_j2: usize, g: Generator) -> BlockOp<SqrtRational> {
    let layout = layout(two_j1, two_j2);
    let blocks = (1..=layout.n0)
        .map(|k| Irrep::new(layout.block_two_j(k)).generator(g))
        .collect();
    BlockOp { layout, blocks }
}

/// The flattened block generator written term by term: J̃₃ carries
/// m_k^{(j1)} + m_p^{(j2)} at z_{k−1}+p, J̃₊ carries
/// c_{k,p} = √(p[2(j1+j2−k)+3−p]) at (z_{k−1}+p, z_{k−1}+p+1).
pub fn block_gen_direct(two_j1: usize, two_j2: usize, g: Generator) -> XSum<SqrtRational> {
    let lay = layout(two_j1, two_j2);
    let (a, b) = (Irrep::new(two_j1), Irrep::new(two_j2));
    let tj = (two_j1 + two_j2) as i64;
    let mut terms = Vec::new();
    for k in 1..=lay.n0 {
        let z = lay.offset(k - 1);
        for p in 1..=lay.dim(k) {
            match g {
                Generator::J3 => {
                    terms.push((z + p, z + p, SqrtRational::from_rational(&(a.m(k) + b.m(p)))));
                }
                _ if p < lay.dim(k) => {
                    let pi = p as i64;
                    let c = SqrtRational::sqrt(ExactRational::from_integer(
                        (pi * (tj - 2 * k as i64 + 3 - pi)).into(),
                    ))
                    .expect("positive inside the block");
                    let (i, j) = if g == Generator::Plus { (z + p, z + p + 1) } else { (z + p + 1, z + p) };
                    terms.push((i, j, c));
                }
                _ => {}
            }
        }
    }
    XSum::from_terms(lay.total(), terms).expect("indices in range")
}

/// Block-diagonal placement at cumulative offsets.
pub fn direct_sum<S: Scalar>(blocks: &[XSum<S>]) -> XSum<S> {
    let n = blocks.iter().map(XSum::order).sum();
    let mut out = XSum::zero(n);
    let mut off = 0;
    for b in blocks {
        for (i, j, c) in b.terms() {
            out.set(off + i, off + j, c.clone());
        }
        off += b.order();
    }
    out
}

/// Splits a block-diagonal matrix back into blocks of the given orders; fails
/// if anything sits outside the diagonal blocks.
pub fn split_blocks<S: Scalar>(a: &XSum<S>, orders: &[usize]) -> Result<Vec<XSum<S>>> {
    let mut bounds = Vec::with_capacity(orders.len());
    let mut off = 0;
    for &d in orders {
        bounds.push((off, d));
        off += d;
    }
    crate::error::check_dim(a.order(), off)?;
    let mut blocks: Vec<XSum<S>> = orders.iter().map(|&d| XSum::zero(d)).collect();
    for (i, j, c) in a.terms() {
        let b = bounds.iter().position(|&(o, d)| i > o && i <= o + d).expect("row in range");
        let (o, d) = bounds[b];
        if j <= o || j > o + d {
            return Err(KronError::Domain(format!("entry ({i},{j}) outside the diagonal blocks")));
        }
        blocks[b].set(i - o, j - o, c.clone());
    }
    Ok(blocks)
}
