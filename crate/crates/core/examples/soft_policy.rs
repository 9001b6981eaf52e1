//! One round of soft elimination on a hand-made four-arm instance: indices,
//! the upper/lower split, the coldness and the resulting policy.
//!
//!     cargo run --example soft_policy

use softucb::policy::{compute_gamma, compute_indices, sample_arm, softmax_policy};
use softucb::rng::{stream, Purpose};

fn main() -> softucb::Result<()> {
    let mu_hat = [0.62, 0.55, 0.20, 0.05];
    let norms = [0.10, 0.15, 0.08, 0.30];
    let beta = 0.5;

    let snap = compute_indices(&mu_hat, &norms, beta)?;
    println!("leader: arm {}", snap.leader);
    println!("{:>4} {:>7} {:>7} {:>8} {:>6}", "arm", "φ", "Δ̂", "S", "set");
    for i in 0..mu_hat.len() {
        println!(
            "{i:>4} {:>7.3} {:>7.3} {:>8.4} {:>6}",
            snap.phi[i],
            snap.delta_hat[i],
            snap.s_values[i],
            if snap.is_upper(i) { "upper" } else { "lower" }
        );
    }

    for delta in [0.5, 0.9, 0.99] {
        let gamma = compute_gamma(&snap, delta)?;
        let policy = softmax_policy(&snap, gamma);
        let upper: f64 = snap.upper_set.iter().map(|&i| policy.probs[i]).sum();
        let probs: Vec<String> = policy.probs.iter().map(|p| format!("{p:.4}")).collect();
        println!(
            "δ = {delta}: γ = {gamma:.3}, p = [{}], upper mass {upper:.4}",
            probs.join(", ")
        );
    }

    let policy = softmax_policy(&snap, compute_gamma(&snap, 0.99)?);
    let mut rng = stream(1, Purpose::Run);
    let mut counts = [0usize; 4];
    for _ in 0..10_000 {
        counts[sample_arm(&policy, &mut rng)] += 1;
    }
    println!("10 000 draws at δ = 0.99: {counts:?}");
    Ok(())
}
