//! Tier-certificate engine for finitely generated modules over quotient
//! polynomial rings.
//!
//! The library computes Gröbner bases, syzygies, singular loci, and Koszul
//! homology over F_p or Q, builds explicit derivations ("tier certificates")
//! of modules from the singular locus by extensions, direct summands, and
//! cosyzygies, and re-checks those certificates with an independent
//! verifier that trusts nothing from the builder.

pub mod builder;
pub mod cert;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod koszul;
pub mod module;
pub mod oracle;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod singularity;
pub mod ring;
pub mod session;
pub mod verify;

pub use error::{Error, Result};

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

/// Cooperative cancellation for long-running computations.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> CancelToken {
        CancelToken::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::SeqCst);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::SeqCst)
    }

    pub fn check(&self) -> Result<()> {
        if self.is_cancelled() {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    }
}
