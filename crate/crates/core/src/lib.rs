//! Explicit conjugate factorizations of elementary transvections.
//!
//! Given an invertible matrix `sigma` over a ring from a fixed catalogue, the
//! [`factorizer`] writes transvections `t_kl(a sigma_ij b)` as bounded
//! products of elementary conjugates of `sigma` and `sigma^-1`, and every
//! product it returns has been multiplied out and checked. The [`search`]
//! module measures the optimal bound exhaustively for `GL_3` over `GF(2)` and
//! `GF(3)`.

pub mod exec;
pub mod factorizer;
pub mod matgroup;
pub mod ring;
pub mod reduction;
pub mod sample;
pub mod search;
pub mod wire;
