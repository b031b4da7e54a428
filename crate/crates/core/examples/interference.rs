//! |V> = (1/2)|+> + i(sqrt3/2)|->: diagonal probabilities in the z basis
//! are blind to the y polarization carried by the off-diagonal coherence.

use spinmix::algebra::tensor_state;
use spinmix::observables::{collective, diagonal_probability_mean, matrix_elements, moments_pure_dense};
use spinmix::states::polarization_vector;
use spinmix::{Axis, PureState, SingleSpinKet, C64};

fn main() -> spinmix::Result<()> {
    let v = tensor_state(&[SingleSpinKet::new(C64::new(0.5, 0.0), C64::new(0.0, 3f64.sqrt() / 2.0))?])?;
    let z_basis = [PureState::basis(1, 0)?, PureState::basis(1, 1)?];

    for axis in Axis::ALL {
        let obs = collective(axis, 1)?;
        let m = moments_pure_dense(&v, &obs)?;
        let shortcut = diagonal_probability_mean(&v, &obs, &z_basis)?;
        println!("s_{axis}: <s> = {:+.6}  Var = {:.6}  diagonal-only = {:+.6}", m.mean, m.variance, shortcut);
    }
    println!("s_y in the z basis:\n{}", matrix_elements(&collective(Axis::Y, 1)?, &z_basis)?);
    println!("polarization vector: {:?}", polarization_vector(&v.projector())?);
    Ok(())
}
