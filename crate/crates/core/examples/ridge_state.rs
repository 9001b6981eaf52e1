//! Incremental ridge regression: rank-one updates, confidence widths and the
//! elliptical-potential sum along a random trajectory.
//!
//!     cargo run --example ridge_state

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use softucb::linalg::RidgeState;
use softucb::rng::{stream, Purpose};
use softucb::runners::elliptical_potential_bound;

fn main() -> softucb::Result<()> {
    let (dim, alpha, horizon) = (5, 1.0, 2_000usize);
    let mut rng = stream(7, Purpose::Environment);
    let theta = DVector::from_fn(dim, |i, _| 1.0 / (i + 1) as f64).normalize();

    let mut state = RidgeState::new(dim, alpha)?;
    let mut potential = 0.0;
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "round", "|θ̂ − θ|", "potential", "bound"
    );
    for t in 1..=horizon {
        let x = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)).normalize();
        potential += state.weighted_norm(&x).powi(2);
        let y = x.dot(&theta) + 0.5 * rng.random_range(-1.0..1.0);
        state.update(&x, y)?;
        if t.is_power_of_two() || t == horizon {
            println!(
                "{t:>6} {:>12.5} {potential:>12.4} {:>12.4}",
                (state.theta_hat() - &theta).norm(),
                elliptical_potential_bound(dim, t, alpha)
            );
        }
    }

    let drift = (state.gram() * state.gram_inv() - DMatrix::identity(dim, dim)).amax();
    println!("max |V V⁻¹ − I| after {horizon} updates: {drift:.2e}");
    Ok(())
}
