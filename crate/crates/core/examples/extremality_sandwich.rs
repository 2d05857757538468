//! G_n[f] <= T[f] <= Lob_{n+1}[f] for (2n-1)-convex f and any positive T
//! exact to degree 2n - 1.

use extremal_moments::quadrature::{self, verify_extremality, ConvexTestFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> extremal_moments::Result<()> {
    let n = 2;
    let g = quadrature::gauss(n)?;
    let l = quadrature::lobatto(n + 1)?;
    let e = std::f64::consts::E;
    println!("G_2[exp]   = {:.10}", g.apply(f64::exp));
    println!("int exp    = {:.10}", e - 1.0 / e);
    println!("Lob_3[exp] = {:.10}", l.apply(f64::exp));

    let catalog = ConvexTestFunction::default_catalog();
    let pool = quadrature::exact_rule_pool(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let (label, t) = quadrature::random_mixture(&pool, &mut rng)?;
        let report = verify_extremality(n, &t, &catalog, 1e-10)?;
        println!("{:<5} {label}", if report.pass() { "ok" } else { "FAIL" });
    }
    Ok(())
}
