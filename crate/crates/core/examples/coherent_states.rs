//! Normalisation, overlaps and time evolution of the labelled states.

use gk_coherent::states::{self, ModelParams, StateLabel, Wavefunction};

fn main() -> gk_coherent::Result<()> {
    let p = ModelParams::new(10.0, 0.07, 1.0)?;
    println!("α = {}, ε = {}, ω = {}", p.alpha(), p.epsilon(), p.omega());

    for m in [0, 1, 3, 12] {
        let n = states::normalization_excited(&p, 2.0, m)?;
        println!("𝒩_(ε,{m})(s = 2) = {n:.12e}");
    }

    let l = StateLabel::new(1.5, 0.4, 3)?;
    let wf = Wavefunction::new(&p, &l);
    println!("\nsupport starts at E = {}", wf.support_start());
    for e in [0.1, 0.21, 0.5, 1.0] {
        println!("ψ({e}) = {:.6e}", states::amplitude(&p, &l, e)?);
    }

    let near = StateLabel::new(1.6, 0.4, 3)?;
    let self_overlap = states::overlap(&p, &l, &l, 1e-12)?;
    let cross = states::overlap(&p, &l, &near, 1e-12)?;
    println!("\n⟨ψ|ψ⟩ = {self_overlap:.12}");
    println!("⟨ψ(s=1.5)|ψ(s=1.6)⟩ = {cross:.12}");

    // evolution only shifts γ and adds a global phase
    let (moved, phase) = states::evolve(&p, &l, 2.5);
    println!(
        "\nafter t = 2.5: γ = {:.6}, global phase = {phase:.6}",
        moved.gamma()
    );
    Ok(())
}
