//! Prime and divisible finite tight frames.
//!
//! A tight frame is prime when no proper subset of its vectors is itself a
//! tight frame. This crate builds harmonic, spectral tetris, random and
//! prime Parseval frames, decides primality by exhaustive search and by
//! closed-form criteria, splits divisible frames into prime factors, and
//! runs analysis/synthesis with divisible harmonic frames one prime factor
//! at a time.
//!
//! ```
//! use prime_frames::harmonic::{htf, htf_is_prime, HtfParams};
//! use prime_frames::divisibility::is_prime_bruteforce;
//!
//! let phi = htf(&HtfParams::unit(2, 9)).unwrap();
//! assert!(!htf_is_prime(2, 9));
//! assert!(!is_prime_bruteforce(&phi, 1e-9).unwrap());
//! ```

pub mod cli;
pub mod divisibility;
pub mod error;
pub mod frame;
pub mod grid;
pub mod harmonic;
pub mod io;
pub mod tetris;
pub mod transform;

pub use error::{FrameError, Result};
pub use frame::{FrameMatrix, IndexSet, DEFAULT_TOL};
