//! Variables of the symbolic ring: shifted (lattice) or jet-indexed (continuum)
//! even fields, and anticommuting odd generators.

use std::fmt;

/// Named even field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    P,
    Q,
    U1,
    U2,
    V1,
    V2,
    /// Stands for `exp(v2)`; differentiation treats it through `dw/dv2 = w`.
    W,
}

impl Field {
    pub const ALL: [Field; 7] = [
        Field::P,
        Field::Q,
        Field::U1,
        Field::U2,
        Field::V1,
        Field::V2,
        Field::W,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Field::P => "P",
            Field::Q => "Q",
            Field::U1 => "u1",
            Field::U2 => "u2",
            Field::V1 => "v1",
            Field::V2 => "v2",
            Field::W => "w",
        }
    }

    pub fn from_name(s: &str) -> Option<Field> {
        Field::ALL.iter().copied().find(|f| f.name() == s)
    }

    /// Mode assumed when the field is written without an explicit slot.
    pub fn default_mode(self) -> Mode {
        match self {
            Field::P | Field::Q => Mode::Lattice,
            _ => Mode::Continuum,
        }
    }
}

/// Where a variable sits: at a lattice shift, or at a jet order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Shift(i32),
    Jet(u32),
}

impl Slot {
    pub fn mode(self) -> Mode {
        match self {
            Slot::Shift(_) => Mode::Lattice,
            Slot::Jet(_) => Mode::Continuum,
        }
    }

    pub fn zero(mode: Mode) -> Slot {
        match mode {
            Mode::Lattice => Slot::Shift(0),
            Mode::Continuum => Slot::Jet(0),
        }
    }

    pub(crate) fn shifted(self, s: i32) -> Slot {
        match self {
            Slot::Shift(j) => Slot::Shift(j + s),
            jet => jet,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Lattice,
    Continuum,
}

/// An even variable `field` at `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub field: Field,
    pub slot: Slot,
}

impl Var {
    pub fn shifted(field: Field, shift: i32) -> Var {
        Var {
            field,
            slot: Slot::Shift(shift),
        }
    }

    pub fn jet(field: Field, order: u32) -> Var {
        Var {
            field,
            slot: Slot::Jet(order),
        }
    }

    pub fn mode(self) -> Mode {
        self.slot.mode()
    }
}

/// An odd generator `theta_alpha` at `slot`. Ordered by `(alpha, slot)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Odd {
    pub alpha: u8,
    pub slot: Slot,
}

impl Odd {
    pub fn shifted(alpha: u8, shift: i32) -> Odd {
        Odd {
            alpha,
            slot: Slot::Shift(shift),
        }
    }

    pub fn jet(alpha: u8, order: u32) -> Odd {
        Odd {
            alpha,
            slot: Slot::Jet(order),
        }
    }

    /// The even field this generator is dual to in the lattice setting.
    pub fn dual_lattice_field(self) -> Field {
        if self.alpha == 1 {
            Field::P
        } else {
            Field::Q
        }
    }
}

fn write_slot(f: &mut fmt::Formatter<'_>, default: Mode, slot: Slot) -> fmt::Result {
    match (default, slot) {
        (Mode::Lattice, Slot::Shift(0)) | (Mode::Continuum, Slot::Jet(0)) => Ok(()),
        (_, Slot::Shift(j)) => write!(f, "[{j}]"),
        (_, Slot::Jet(m)) => write!(f, "{{{m}}}"),
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.field.name())?;
        write_slot(f, self.field.default_mode(), self.slot)
    }
}

impl fmt::Display for Odd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "th{}", self.alpha)?;
        write_slot(f, Mode::Lattice, self.slot)
    }
}
