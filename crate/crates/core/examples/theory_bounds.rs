//! Theoretical confidence widths and regret bounds across dimensions and
//! horizons.
//!
//!     cargo run --example theory_bounds

use softucb::runners::{elliptical_potential_bound, regret_bound, theoretical_beta};

fn main() -> softucb::Result<()> {
    let (noise, delta, alpha, theta_bound) = (0.5, 0.1, 1.0, 1.0);
    println!(
        "{:>4} {:>6} {:>10} {:>14} {:>14} {:>12}",
        "d", "T", "β̃", "bound(β̃)", "bound(β=1)", "potential"
    );
    for (dim, horizon) in [
        (5, 256),
        (5, 512),
        (5, 1024),
        (10, 1024),
        (15, 1024),
        (20, 1024),
    ] {
        let beta = theoretical_beta(noise, delta, dim, horizon, alpha, theta_bound)?;
        println!(
            "{dim:>4} {horizon:>6} {beta:>10.4} {:>14.2} {:>14.2} {:>12.3}",
            regret_bound(beta, 0.99, dim, horizon, alpha),
            regret_bound(1.0, 0.99, dim, horizon, alpha),
            elliptical_potential_bound(dim, horizon, alpha)
        );
    }
    Ok(())
}
