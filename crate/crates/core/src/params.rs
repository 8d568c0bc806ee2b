use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arithmetic context `(p, e, r, f)`: coefficients in `F_{p^f}[u]/u^{ep}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GlobalParams {
    pub p: u32,
    pub e: u32,
    pub r: u32,
    pub f: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl GlobalParams {
    pub fn new(p: u32, e: u32, r: u32, f: u32) -> Result<Self> {
        let params = GlobalParams { p, e, r, f };
        params.check()?;
        Ok(params)
    }

    pub fn check(&self) -> Result<()> {
        if !is_prime(self.p as u64) {
            return Err(Error::InvalidParams(format!("p = {} is not prime", self.p)));
        }
        if self.p >= 1 << 15 {
            return Err(Error::InvalidParams(format!("p = {} is too large", self.p)));
        }
        if self.e == 0 {
            return Err(Error::InvalidParams("e must be at least 1".into()));
        }
        if self.f == 0 {
            return Err(Error::InvalidParams("f must be at least 1".into()));
        }
        if (self.e as u64) * (self.r as u64) + 1 >= self.p as u64 {
            return Err(Error::InvalidParams(format!(
                "er = {} must be smaller than p - 1 = {}",
                self.e * self.r,
                self.p - 1
            )));
        }
        if self.f as usize > crate::field::MAX_DEGREE {
            return Err(Error::DegreeTooLarge(self.f as usize));
        }
        Ok(())
    }

    /// Nilpotency index of `u`.
    pub fn ep(&self) -> usize {
        (self.e * self.p) as usize
    }

    pub fn er(&self) -> usize {
        (self.e * self.r) as usize
    }

    pub fn with_f(&self, f: u32) -> Self {
        GlobalParams { f, ..*self }
    }
}
