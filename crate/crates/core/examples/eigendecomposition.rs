//! Dense symmetric eigensolver, power iteration and null-space completion on
//! the reference covariance.

use correntropy_pca::datagen::reference_scatter;
use correntropy_pca::linalg::{null_space_vector, power_iteration, sym_evd};
use correntropy_pca::Vector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = reference_scatter();
    let evd = sym_evd(&s)?;
    println!("eigenvalues  {:.6}", evd.values.transpose());
    println!("eigenvectors (columns){:.6}", evd.vectors);
    println!(
        "reconstruction error {:.2e}",
        (evd.reconstruct() - &s).amax()
    );

    let v0 = Vector::from_element(3, 1.0).normalize();
    let top = power_iteration(&s, &v0, 1e-12, 1000)?;
    println!(
        "power iteration: {} steps, converged {}, |cos| with top eigenvector {:.12}",
        top.iterations,
        top.converged,
        top.vector.dot(&evd.vectors.column(0)).abs()
    );

    // The last direction is whatever is orthogonal to the first two.
    let last = null_space_vector(&evd.vectors.columns(0, 2).into_owned())?;
    println!(
        "null-space vector {:.6}  |cos| with smallest eigenvector {:.12}",
        last.transpose(),
        last.dot(&evd.vectors.column(2)).abs()
    );
    Ok(())
}
