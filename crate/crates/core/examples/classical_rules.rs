//! Gauss, Lobatto and Radau rules and the degree to which each is exact.

use extremal_moments::quadrature::{self, Quadrature, RadauEnd};

fn exact_degree(q: &Quadrature) -> usize {
    (0..)
        .find(|&k| {
            let exact = if k % 2 == 0 { 2.0 / (k + 1) as f64 } else { 0.0 };
            (q.apply(|x| x.powi(k as i32)) - exact).abs() > 1e-12
        })
        .unwrap()
        - 1
}

fn main() -> extremal_moments::Result<()> {
    let n = 4;
    let rules = [
        ("gauss", quadrature::gauss(n)?),
        ("lobatto", quadrature::lobatto(n + 1)?),
        ("radau left", quadrature::radau(n, RadauEnd::Left)?),
        ("radau right", quadrature::radau(n, RadauEnd::Right)?),
    ];
    for (name, q) in &rules {
        println!("{name}: {} nodes, exact to degree {}", q.len(), exact_degree(q));
        print!("{q}");
        println!();
    }
    Ok(())
}
