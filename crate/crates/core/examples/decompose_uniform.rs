//! A continuous symmetric measure is never extreme: split the uniform
//! measure into two members with the same second moment, then print the
//! g and h curves as CSV.

use extremal_moments::decompose::{self, g_fn, h_fn};
use extremal_moments::measure::{Measure, SecondMomentParam};

fn main() -> extremal_moments::Result<()> {
    let mu = Measure::uniform(-1.0, 1.0, 0.5)?;
    let a = SecondMomentParam::new((1.0f64 / 3.0).sqrt())?;
    let r = decompose::decompose(&mu, a)?;
    println!("b1 = {}  (sqrt(2/3) = {})", r.b1, (2.0f64 / 3.0).sqrt());
    println!("a1 = {}", r.a1);
    println!("alpha = {}", r.alpha);
    println!("m2(nu1) = {}  m2(nu2) = {}", r.nu1.moment(2), r.nu2.moment(2));
    assert!(r.recombine()?.approx_eq(&mu, 1e-12));

    println!("x,g,h");
    for i in 1..=20 {
        let x = i as f64 / 20.0;
        let h = if x < r.b1 { h_fn(&mu, r.b1, x)?.to_string() } else { String::new() };
        println!("{x},{},{h}", g_fn(&mu, x)?);
    }
    Ok(())
}
