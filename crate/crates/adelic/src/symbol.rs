//! Global symbol table.
//!
//! Variables are small integer ids. The fixed prefix `x z w y s t r` fixes the
//! monomial order; other names are interned on first use and sort after them.

use once_cell::sync::Lazy;
use parking_lot::RwLock;
use std::fmt;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u16);

const FIXED: [&str; 7] = ["x", "z", "w", "y", "s", "t", "r"];

static NAMES: Lazy<RwLock<Vec<String>>> =
    Lazy::new(|| RwLock::new(FIXED.iter().map(|s| s.to_string()).collect()));

impl Var {
    pub const X: Var = Var(0);
    pub const Z: Var = Var(1);
    pub const W: Var = Var(2);
    pub const Y: Var = Var(3);
    pub const S: Var = Var(4);
    pub const T: Var = Var(5);
    pub const R: Var = Var(6);

    /// Interns `name`, returning its id.
    pub fn named(name: &str) -> Var {
        if let Some(i) = NAMES.read().iter().position(|n| n == name) {
            return Var(i as u16);
        }
        let mut names = NAMES.write();
        if let Some(i) = names.iter().position(|n| n == name) {
            return Var(i as u16);
        }
        names.push(name.to_string());
        Var((names.len() - 1) as u16)
    }

    /// Looks up `name` without interning it.
    pub fn lookup(name: &str) -> Option<Var> {
        NAMES.read().iter().position(|n| n == name).map(|i| Var(i as u16))
    }

    pub fn name(self) -> String {
        NAMES.read()[self.0 as usize].clone()
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// True for the "spatial" variables x, z, w, y; everything else is a parameter.
    pub fn is_parameter(self) -> bool {
        self.0 >= 4
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_order() {
        assert!(Var::X < Var::Z && Var::Z < Var::W && Var::S < Var::T && Var::T < Var::R);
        assert_eq!(Var::named("t"), Var::T);
        let u = Var::named("alpha_user");
        assert!(u > Var::R);
        assert_eq!(u.name(), "alpha_user");
        assert!(u.is_parameter() && !Var::Z.is_parameter());
    }
}
