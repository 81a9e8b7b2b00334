//! ζ(s), Dirichlet L-functions, the Hardy function and zeros on the critical line.

pub mod character;
pub mod eval;
pub mod hardy;
pub mod zeros;

pub use character::{Character, CharacterTable};
pub use eval::{dirichlet_l, hurwitz, zeta, zeta_derivative_real, zeta_real, EmConfig};
pub use hardy::{riemann_von_mangoldt, Hardy, LFunction};
pub use zeros::{
    complex_derivative, deriv_at_zero, find_zeros, find_zeros_mod, locate_zeros, zeta_at_2rho, ZeroDatum,
};
