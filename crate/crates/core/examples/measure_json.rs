//! Piecewise polynomial measures: JSON, moments, restriction and the
//! continuous/discrete split.

use extremal_moments::measure::{Atom, IntervalUnion, Measure, SecondMomentParam};

fn main() -> extremal_moments::Result<()> {
    let density = Measure::uniform(-1.0, 1.0, 0.5)?.scale(0.6)?;
    let atoms = Measure::from_atoms(vec![Atom { x: -0.9, mass: 0.2 }, Atom { x: 0.9, mass: 0.2 }])?;
    let sigma = density.add(&atoms)?;

    let text = sigma.to_json();
    println!("{text}");
    assert_eq!(Measure::from_json(&text)?, sigma);
    println!("moments: {:?}", sigma.moments(4));

    let ring = IntervalUnion::symmetric_pair(0.5, 1.0)?;
    println!("mass on [-1,-0.5] U [0.5,1]: {}", sigma.restrict(&ring).total_mass());

    let split = sigma.split_continuous_discrete()?;
    println!("beta = {}", split.beta);

    let a = SecondMomentParam::new(sigma.moment(2).sqrt())?;
    println!("symmetric probability with m2 = a^2: {}", sigma.in_class(a, 1e-12));

    match Measure::from_json(r#"{"atoms":[{"x":0.3,"mass":-1.0}],"segments":[]}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
