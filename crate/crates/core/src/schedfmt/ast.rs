use std::fmt;

/// Constructor argument: a number or a bare identifier such as an axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Number(f64),
    Ident(String),
}

/// `name(arg, …)` or a bare `name`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ctor {
    pub name: String,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKw {
    Slow,
    Twisted,
    DriftIdentity,
    DriftRestored,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowDecl {
    pub scheme: SchemeKw,
    /// `P=` binding; present exactly for twisted windows.
    pub pulse: Option<Ctor>,
    /// `A=` for slow/twisted windows, `B=` for drift windows.
    pub hamiltonian: Ctor,
    pub cycles: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub group: Ctor,
    pub dt: f64,
    /// Empty when the program has no `errors` statement.
    pub errors: Vec<Ctor>,
    pub windows: Vec<WindowDecl>,
}

impl Ctor {
    pub fn bare(name: impl Into<String>) -> Self {
        Self { name: name.into(), args: Vec::new() }
    }

    pub fn call(name: impl Into<String>, args: Vec<Arg>) -> Self {
        Self { name: name.into(), args }
    }
}

impl SchemeKw {
    pub const ALL: [SchemeKw; 4] =
        [SchemeKw::Slow, SchemeKw::Twisted, SchemeKw::DriftIdentity, SchemeKw::DriftRestored];

    pub fn keyword(self) -> &'static str {
        match self {
            SchemeKw::Slow => "slow",
            SchemeKw::Twisted => "twisted",
            SchemeKw::DriftIdentity => "drift_identity",
            SchemeKw::DriftRestored => "drift_restored",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }

    /// Binding name that carries the window Hamiltonian.
    pub fn hamiltonian_key(self) -> &'static str {
        match self {
            SchemeKw::Slow | SchemeKw::Twisted => "A",
            SchemeKw::DriftIdentity | SchemeKw::DriftRestored => "B",
        }
    }

    pub fn needs_pulse(self) -> bool {
        self == SchemeKw::Twisted
    }
}

/// Canonical number text: integers without a fraction, everything else with
/// 17 significant digits.
pub fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{:.16e}", x)
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Number(x) => f.write_str(&format_number(*x)),
            Arg::Ident(s) => f.write_str(s),
        }
    }
}

impl fmt::Display for Ctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (k, a) in self.args.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
