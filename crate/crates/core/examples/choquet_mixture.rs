//! Represent the uniform measure as a mixture of extreme measures on a grid
//! over [0, b] x [b, 1].

use extremal_moments::measure::{Measure, SecondMomentParam};
use extremal_moments::represent::{represent, verify_representation, Grid, TestBasis, TestFunction};

fn main() -> extremal_moments::Result<()> {
    let sigma = Measure::uniform(-1.0, 1.0, 0.5)?;
    let b = SecondMomentParam::new((1.0f64 / 3.0).sqrt())?;
    let basis = TestBasis::default();
    let rep = represent(&sigma, b, Grid::new(101, 101)?, basis)?;
    println!("residual over e_0..e_{}: {:e}", basis.max_degree(), rep.residual);
    for (&(x, y), w) in rep.gamma.points().iter().zip(rep.gamma.weights()) {
        println!("  (x, y) = ({x:.4}, {y:.4})  weight {w:.6}");
    }
    let mut probes = TestFunction::even_monomials(TestBasis::new(16)?);
    probes.push(TestFunction::new("cos(3x)", |x| (3.0 * x).cos()));
    let report = verify_representation(&sigma, &rep.gamma, &probes, 1e-3)?;
    for (name, gap) in &report.gaps {
        println!("  {name:<8} gap {gap:+.2e}");
    }
    Ok(())
}
