//! The `pda-v1` JSON document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AcceptanceMode, Pda, StackOp, StackSym, StateId, Transition};
use crate::error::{Error, Result};

pub const VERSION: &str = "pda-v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdaFile {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub stack_alphabet: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
    pub start: String,
    pub bottom: String,
    pub accept: Vec<String>,
    #[serde(default)]
    pub acceptance_mode: AcceptanceMode,
    /// Human-readable descriptions of states, keyed by state name. Used when
    /// exporting explored product fragments.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub composite_state_labels: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    pub read: Option<String>,
    pub action: ActionDoc,
    pub to: String,
    #[serde(default)]
    pub auxiliary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDoc {
    /// `push`, `pop`, `none`, or `sequence`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ops: Vec<ActionDoc>,
}

impl ActionDoc {
    fn single(kind: &str, symbol: Option<String>) -> Self {
        ActionDoc {
            kind: kind.into(),
            symbol,
            ops: Vec::new(),
        }
    }
}

fn bad(message: impl Into<String>) -> Error {
    Error::format(VERSION, message)
}

impl PdaFile {
    pub fn from_pda(pda: &Pda) -> Self {
        let op_doc = |op: &StackOp| match op {
            StackOp::Push(s) => ActionDoc::single("push", Some(pda.symbol_name(*s).into())),
            StackOp::Pop(s) => ActionDoc::single("pop", Some(pda.symbol_name(*s).into())),
        };
        let transitions = pda
            .transitions()
            .iter()
            .map(|t| TransitionDoc {
                from: pda.state_name(t.from).into(),
                read: t.read.map(String::from),
                action: match t.ops.as_slice() {
                    [] => ActionDoc::single("none", None),
                    [op] => op_doc(op),
                    ops => ActionDoc {
                        kind: "sequence".into(),
                        symbol: None,
                        ops: ops.iter().map(op_doc).collect(),
                    },
                },
                to: pda.state_name(t.to).into(),
                auxiliary: t.auxiliary,
            })
            .collect();
        PdaFile {
            version: VERSION.into(),
            name: Some(pda.name().to_string()).filter(|n| !n.is_empty()),
            states: pda.states().to_vec(),
            input_alphabet: pda.input_alphabet().iter().map(|c| c.to_string()).collect(),
            stack_alphabet: pda.stack_alphabet().to_vec(),
            transitions,
            start: pda.state_name(pda.start()).into(),
            bottom: pda.symbol_name(pda.bottom()).into(),
            accept: pda
                .accept_states()
                .iter()
                .map(|s| pda.state_name(*s).to_string())
                .collect(),
            acceptance_mode: pda.acceptance_mode(),
            composite_state_labels: BTreeMap::new(),
        }
    }

    pub fn to_pda(&self) -> Result<Pda> {
        if self.version != VERSION {
            return Err(bad(format!("unsupported version {:?}", self.version)));
        }
        let state = |name: &str| {
            self.states
                .iter()
                .position(|s| s == name)
                .map(|i| StateId(i as u32))
                .ok_or_else(|| bad(format!("undeclared state {name:?}")))
        };
        let symbol = |name: &str| {
            self.stack_alphabet
                .iter()
                .position(|s| s == name)
                .map(|i| StackSym(i as u32))
                .ok_or_else(|| bad(format!("undeclared stack symbol {name:?}")))
        };
        let input_char = |s: &str| {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(bad(format!("input symbol {s:?} is not a single character"))),
            }
        };
        let input_alphabet = self
            .input_alphabet
            .iter()
            .map(|s| input_char(s))
            .collect::<Result<Vec<_>>>()?;
        fn ops_of(a: &ActionDoc, symbol: &dyn Fn(&str) -> Result<StackSym>, nested: bool) -> Result<Vec<StackOp>> {
            let sym = || {
                a.symbol
                    .as_deref()
                    .ok_or_else(|| bad(format!("{} action without a symbol", a.kind)))
                    .and_then(symbol)
            };
            Ok(match a.kind.as_str() {
                "push" => vec![StackOp::Push(sym()?)],
                "pop" => vec![StackOp::Pop(sym()?)],
                "none" => Vec::new(),
                "sequence" if !nested => {
                    let mut out = Vec::new();
                    for op in &a.ops {
                        out.extend(ops_of(op, symbol, true)?);
                    }
                    out
                }
                other => return Err(bad(format!("unknown action kind {other:?}"))),
            })
        }
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            transitions.push(Transition {
                from: state(&t.from)?,
                read: t.read.as_deref().map(input_char).transpose()?,
                ops: ops_of(&t.action, &symbol, false)?,
                to: state(&t.to)?,
                auxiliary: t.auxiliary,
            });
        }
        let accept = self.accept.iter().map(|s| state(s)).collect::<Result<_>>()?;
        Pda::new(
            self.name.clone().unwrap_or_default(),
            self.states.clone(),
            input_alphabet,
            self.stack_alphabet.clone(),
            transitions,
            state(&self.start)?,
            symbol(&self.bottom)?,
            accept,
            self.acceptance_mode,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pda document serializes")
    }
}

impl Pda {
    pub fn to_json(&self) -> String {
        PdaFile::from_pda(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<Pda> {
        PdaFile::from_json(text)?.to_pda()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pda::{Op, PdaBuilder};

    #[test]
    fn round_trip() {
        let mut b = PdaBuilder::new("rt");
        b.start("s")
            .read("s", 'a', Op::Push("A"), "m")
            .aux_push("m", "B", "s")
            .read("s", 'b', Op::Pop("B"), "s")
            .read("s", 'c', Op::Skip, "t")
            .accept("t")
            .mode(AcceptanceMode::FinalStateAndBottomOnly);
        let a = b.symbol("A");
        b.raw("t", Some('d'), vec![StackOp::Pop(a), StackOp::Push(a)], "t", false);
        let m = b.build().unwrap();
        let text = m.to_json();
        assert!(text.contains("\"pda-v1\""));
        assert_eq!(Pda::from_json(&text).unwrap(), m);
    }

    #[test]
    fn rejects_undeclared_names() {
        let text = r#"{"version":"pda-v1","states":["s"],"input_alphabet":["a"],
            "stack_alphabet":["$"],"transitions":[{"from":"s","read":"a",
            "action":{"kind":"push","symbol":"Z"},"to":"s","auxiliary":false}],
            "start":"s","bottom":"$","accept":["s"],"acceptance_mode":"final_state"}"#;
        assert!(matches!(Pda::from_json(text), Err(Error::Format { .. })));
        let wrong = text.replace("pda-v1", "pda-v0");
        assert!(Pda::from_json(&wrong).is_err());
    }
}
