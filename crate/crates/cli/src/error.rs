use latsuper_core::group::GroupError;
use latsuper_core::lattice::LatticeError;
use latsuper_core::restriction::RestrictionError;
use latsuper_core::sct::SctError;
use serde_json::{json, Value};

/// A failed command: exit code plus the JSON printed to stdout.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
    pub witness: Option<Value>,
    /// The failure is already on stdout as part of the command output.
    pub quiet: bool,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            kind: kind.into(),
            message: message.into(),
            witness: None,
            quiet: false,
        }
    }

    pub fn verification(kind: &str, message: impl Into<String>, witness: Value) -> Self {
        CliError {
            code: 2,
            kind: kind.into(),
            message: message.into(),
            witness: Some(witness),
            quiet: false,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind, "message": self.message, "exit_code": self.code });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        let witness = match &e {
            GroupError::Invariant { invariant, witness } => json!({ "invariant": invariant, "elements": witness }),
            GroupError::Embedding { witness, .. } => json!({ "elements": witness }),
            _ => Value::Null,
        };
        CliError::input("group", e.to_string()).with_witness(witness)
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        let witness = match &e {
            LatticeError::NotClosed { op, left, right } => json!({ "op": op, "left": left, "right": right }),
            LatticeError::NotSubgroup { index, witness } | LatticeError::NotNormal { index, witness } => {
                json!({ "input": index, "elements": witness })
            }
            LatticeError::Group(g) => return g.clone().into(),
            _ => Value::Null,
        };
        CliError::input("lattice", e.to_string()).with_witness(witness)
    }
}

impl From<SctError> for CliError {
    fn from(e: SctError) -> Self {
        match e {
            SctError::Lattice(l) => l.into(),
            SctError::Inconsistent(_) => CliError::verification("sct", e.to_string(), Value::Null),
            _ => CliError::input("sct", e.to_string()),
        }
    }
}

impl From<RestrictionError> for CliError {
    fn from(e: RestrictionError) -> Self {
        match e {
            RestrictionError::NotFavorable { witnesses } => {
                CliError::input("not_favorable", "the lattices are not restriction favorable").with_witness(witnesses)
            }
            RestrictionError::NotConstant { node, elements } => CliError::verification(
                "restriction",
                e.to_string(),
                json!({ "node": node, "elements": elements }),
            ),
            RestrictionError::FactorizationFails {
                node,
                joins_preserved,
                indices_preserved,
            } => CliError::verification(
                "factorization",
                e.to_string(),
                json!({ "node": node, "joins_preserved": joins_preserved, "indices_preserved": indices_preserved }),
            ),
            RestrictionError::Inconsistent(_) => CliError::verification("restriction", e.to_string(), Value::Null),
            RestrictionError::Group(g) => g.into(),
            RestrictionError::Lattice(l) => l.into(),
            RestrictionError::Sct(s) => s.into(),
            _ => CliError::input("restriction", e.to_string()),
        }
    }
}
