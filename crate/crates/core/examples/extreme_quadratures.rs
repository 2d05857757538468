//! A quadrature is an extreme point of the set sharing its moments up to
//! order n exactly when it has at most n + 1 nodes.

use extremal_moments::quadrature::{self, is_extreme, MomentVector};

fn main() -> extremal_moments::Result<()> {
    let order = 5;
    let m = MomentVector::lebesgue(order);
    let g3 = quadrature::gauss(3)?;
    let l4 = quadrature::lobatto(4)?;
    let g5 = quadrature::gauss(5)?;
    let mixed = g3.convex_combination(&l4, 0.5)?;
    for (name, q) in [("gauss(3)", &g3), ("lobatto(4)", &l4), ("gauss(5)", &g5), ("(gauss(3) + lobatto(4))/2", &mixed)] {
        println!("{name:<28} nodes = {}  extreme = {}", q.len(), is_extreme(q, &m, 1e-10)?);
    }
    Ok(())
}
