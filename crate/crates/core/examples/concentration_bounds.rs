//! Tail bounds, confidence radii and sample sizes.

use statkit::concentration::{
    clt_sample_size, compare_bounds, compare_csv, evaluate, BoundKind, BoundQuery, Sidedness,
};
use statkit::{Distribution, Result};

fn main() -> Result<()> {
    let mut q = BoundQuery::new(BoundKind::Chebyshev, 12.0);
    q.variance = 3.2;
    println!("Chebyshev, 20 tosses of a 0.2 coin, 16+ heads: {:.4}", evaluate(&q)?.bound);
    q.sidedness = Sidedness::HalvedSymmetric;
    println!("  halved for one tail:                        {:.4}", evaluate(&q)?.bound);

    let mut h = BoundQuery::new(BoundKind::Hoeffding, 0.1);
    h.range = Some((0.0, 1.0));
    h.n = 100;
    h.delta = Some(0.05);
    let r = evaluate(&h)?;
    println!("Hoeffding n=100, eps=0.1: bound {:.4}, 95% radius {:.4}", r.bound, r.radius.unwrap_or(f64::NAN));

    println!("n for +/-0.01 at 95%: {}", clt_sample_size(0.01, 0.05, 0.25)?);

    let rows = compare_bounds(&Distribution::bernoulli(0.5)?, 50, &[0.05, 0.1, 0.2, 0.3])?;
    print!("{}", compare_csv(&rows));
    Ok(())
}
