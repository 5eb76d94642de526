//! Turning a many-copy homomorphism `y^{∗n} → x^{∗n}` into a catalytic one
//! `y ∗ z → x ∗ z`.
//!
//! The catalyst is `z = join_{k=1..n} cell_k` with `cell_k = x^{∗(k−1)} ∗ y^{∗(n−k)}`
//! (an empty product is `K1`). A vertex `(a, c)` with `c` in `cell_k` moves to
//! `cell_{k−1}` by trading its leading `x` coordinate for `a`; the first cell
//! wraps around to the last through the given witness.

use super::expr::{decode, encode, verify_expr_map, ExprHom, GraphExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalystError {
    #[error("the number of copies must be at least 1")]
    ZeroCopies,
    #[error("the power witness is not a homomorphism y^{{*n}} -> x^{{*n}}")]
    InvalidWitness,
    #[error("the construction is too large to materialize")]
    TooLarge,
}

#[derive(Debug, Clone)]
pub struct CatalystOutput {
    /// The catalyst `z`.
    pub catalyst: GraphExpr,
    /// `y ∗ z`, the source of `hom`.
    pub source: GraphExpr,
    /// `x ∗ z`, the target of `hom`.
    pub target: GraphExpr,
    pub hom: ExprHom,
}

fn cell(x: &GraphExpr, y: &GraphExpr, n: usize, k: usize) -> GraphExpr {
    let mut factors: Vec<GraphExpr> = std::iter::repeat_n(x.clone(), k - 1).collect();
    factors.extend(std::iter::repeat_n(y.clone(), n - k));
    GraphExpr::Product(factors).normalize()
}

/// Builds the catalyst and the homomorphism `y ∗ z → x ∗ z` from a witness of `n·x ≥ n·y`.
pub fn distribute_catalyst(
    x: &GraphExpr,
    y: &GraphExpr,
    n: u32,
    witness: &ExprHom,
) -> Result<CatalystOutput, CatalystError> {
    if n == 0 {
        return Err(CatalystError::ZeroCopies);
    }
    let n = n as usize;
    let sx = usize::try_from(x.size()).map_err(|_| CatalystError::TooLarge)?;
    let sy = usize::try_from(y.size()).map_err(|_| CatalystError::TooLarge)?;
    let ypow = GraphExpr::Product(vec![y.clone(); n]);
    let xpow = GraphExpr::Product(vec![x.clone(); n]);
    if ypow.size() > u32::MAX as u128 || !verify_expr_map(&ypow, &xpow, &witness.map) {
        return Err(CatalystError::InvalidWitness);
    }

    let cells: Vec<GraphExpr> = (1..=n).map(|k| cell(x, y, n, k)).collect();
    let cell_sizes: Vec<usize> = cells.iter().map(|c| c.size() as usize).collect();
    let offsets: Vec<usize> = cell_sizes
        .iter()
        .scan(0, |acc, &s| Some(std::mem::replace(acc, *acc + s)))
        .collect();
    let nz: usize = cell_sizes.iter().sum();
    let catalyst = GraphExpr::Join(cells).normalize();
    let total = sy
        .checked_mul(nz)
        .filter(|&t| t <= u32::MAX as usize)
        .ok_or(CatalystError::TooLarge)?;

    // Coordinate radices of cell k: k−1 copies of |x| then n−k copies of |y|.
    let radices = |k: usize| -> Vec<usize> {
        let mut r = vec![sx; k - 1];
        r.extend(std::iter::repeat_n(sy, n - k));
        r
    };

    let mut map = Vec::with_capacity(total);
    for v in 0..total {
        let (a, zi) = (v / nz, v % nz);
        let k = (0..n).rev().find(|&i| offsets[i] <= zi).unwrap() + 1;
        let coords = decode(zi - offsets[k - 1], &radices(k));
        let (lead, next_k, next_coords) = if k >= 2 {
            // (x1, x2..x_{k−1}, y..) ↦ x1 and (x2..x_{k−1}, a, y..) in cell k−1.
            let mut rest = coords[1..k - 1].to_vec();
            rest.push(a);
            rest.extend_from_slice(&coords[k - 1..]);
            (coords[0], k - 1, rest)
        } else {
            // (a, y1..y_{n−1}) ↦ witness image (b1..bn) ↦ b1 and (b2..bn) in cell n.
            let mut ys = vec![a];
            ys.extend_from_slice(&coords);
            let image = witness.map[encode(&ys, &vec![sy; n])];
            let b = decode(image, &vec![sx; n]);
            (b[0], n, b[1..].to_vec())
        };
        let zt = offsets[next_k - 1] + encode(&next_coords, &radices(next_k));
        map.push(lead * nz + zt);
    }

    Ok(CatalystOutput {
        source: GraphExpr::Product(vec![y.clone(), catalyst.clone()]),
        target: GraphExpr::Product(vec![x.clone(), catalyst.clone()]),
        catalyst,
        hom: ExprHom { map },
    })
}
