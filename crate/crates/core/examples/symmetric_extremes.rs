//! Extreme points of the symmetric probability measures with second moment b^2.

use extremal_moments::kfamily::{self, is_member};

fn main() -> extremal_moments::Result<()> {
    let b = 0.5;
    for (x, y) in [(b, b), (0.0, 0.8), (0.0, 1.0), (0.2, 0.8)] {
        let k = kfamily::make(b, x, y)?;
        let mu = k.to_measure();
        println!(
            "({x}, {y})  p = {:.4}  q = {:.4}  {:?}  m2 = {}",
            k.p,
            k.q,
            k.classify(),
            mu.moment(2)
        );
        let back = is_member(&mu, b, 1e-12).expect("recognized");
        assert_eq!((back.x, back.y), (x, y));
    }
    println!("{}", kfamily::make(b, 0.2, 0.8)?.to_measure().to_json());
    Ok(())
}
