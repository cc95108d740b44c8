//! Deflation bookkeeping: the projection, its Woodbury-maintained inverse
//! companion, and the shifted operator whose top eigenvector is the next
//! component.

use correntropy_pca::datagen::reference_scatter;
use correntropy_pca::linalg::{power_iteration, sym_evd};
use correntropy_pca::mcpi::{build_deflated_operator, DeflationState};
use correntropy_pca::{Matrix, Vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = reference_scatter();
    let evd = sym_evd(&s)?;
    let mut state = DeflationState::new(3);

    for i in 0..2 {
        let k = build_deflated_operator(&s, &state)?;
        let v0 = Vector::from_element(3, 1.0).normalize();
        let found = power_iteration(&k, &v0, 1e-13, 5000)?;
        println!(
            "component {}: {} steps, |cos| with eigenvector {:.12}",
            i + 1,
            found.iterations,
            found.vector.dot(&evd.vectors.column(i)).abs()
        );
        state.push(&found.vector)?;

        let check = state.check();
        let identity = Matrix::identity(3, 3) + state.projection();
        println!(
            "  after update: |(I+P)Q - I| {:.2e}, |P^2 - P| {:.2e}, all invariants hold: {}",
            (identity * state.inverse_companion() - Matrix::identity(3, 3)).amax(),
            check.idempotence,
            check.holds()
        );
    }
    Ok(())
}
