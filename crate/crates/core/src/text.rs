//! Circuit text format.
//!
//! ```text
//! file := { line }            line := { op ";" } [newline]
//! op   := "X(" INT ")" | "CN(" INT "," INT ")" | "Fr(" INT SP INT "," [SP] INT ")"
//! ```
//!
//! `CN(a,b)` has control `a` and target `b`; `Fr(a b, c)` swaps `a` and `b`
//! when `c` is 1. `#` starts a comment running to the end of the line. Each
//! non-empty line is one layer.

use crate::error::{Error, Result};
use crate::gate::{Circuit, Gate};

/// Emits one layer per line, every op terminated by `;`.
pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    for layer in circuit.layers() {
        for g in layer {
            out.push_str(&g.to_string());
            out.push(';');
        }
        out.push('\n');
    }
    out
}

pub fn parse_circuit(text: &str, width: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(width);
    for (lineno, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let mut p = LineParser {
            chars: line.chars().collect(),
            pos: 0,
            line: lineno + 1,
        };
        while let Some((gate, column)) = p.next_op()? {
            circuit.push(gate).map_err(|e| Error::Parse {
                line: lineno + 1,
                column,
                message: e.to_string(),
            })?;
        }
        circuit.end_layer();
    }
    Ok(circuit)
}

struct LineParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl LineParser {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> usize {
        let start = self.pos;
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.err(format!("expected {want:?}, found end of line"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let n = kw.chars().count();
        let matches = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .copied()
                .eq(kw.chars());
        if matches {
            self.pos += n;
        }
        matches
    }

    fn int(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some('0'..='9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a qubit index"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let value: usize = digits.parse().map_err(|_| {
            self.pos = start;
            self.err("qubit index too large")
        })?;
        if value == 0 {
            self.pos = start;
            return Err(self.err("qubit indices start at 1"));
        }
        Ok(value)
    }

    /// Returns the next op and its starting column, or `None` at end of line.
    fn next_op(&mut self) -> Result<Option<(Gate, usize)>> {
        self.skip_ws();
        match self.peek() {
            None | Some('#') => return Ok(None),
            _ => {}
        }
        let column = self.column();
        let gate = if self.keyword("X(") {
            self.skip_ws();
            let q = self.int()?;
            self.skip_ws();
            self.expect(')')?;
            Gate::Not(q)
        } else if self.keyword("CN(") {
            self.skip_ws();
            let control = self.int()?;
            self.skip_ws();
            self.expect(',')?;
            self.skip_ws();
            let target = self.int()?;
            self.skip_ws();
            self.expect(')')?;
            Gate::Cnot { control, target }
        } else if self.keyword("Fr(") {
            self.skip_ws();
            let a = self.int()?;
            if self.skip_ws() == 0 {
                return Err(self.err("expected a space between Fredkin targets"));
            }
            let b = self.int()?;
            self.skip_ws();
            self.expect(',')?;
            self.skip_ws();
            let control = self.int()?;
            self.skip_ws();
            self.expect(')')?;
            Gate::Fredkin { a, b, control }
        } else {
            return Err(self.err("unknown operation"));
        };
        self.skip_ws();
        self.expect(';')?;
        Ok(Some((gate, column)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_single_ops() {
        let c = parse_circuit("X(3);", 3).unwrap();
        assert_eq!(c.gates(), &[Gate::Not(3)]);

        let c = parse_circuit("Fr(9 4, 3);", 9).unwrap();
        assert_eq!(c.gates(), &[Gate::Fredkin { a: 9, b: 4, control: 3 }]);

        let c = parse_circuit("CN(2,3);X(3);Fr(1 2, 3);X(3);", 3).unwrap();
        assert_eq!(
            c.gates(),
            &[
                Gate::Cnot { control: 2, target: 3 },
                Gate::Not(3),
                Gate::Fredkin { a: 1, b: 2, control: 3 },
                Gate::Not(3),
            ]
        );
    }

    #[test]
    fn empty_input_is_empty_circuit() {
        assert!(parse_circuit("", 4).unwrap().is_empty());
        assert!(parse_circuit("\n\n# nothing here\n", 4).unwrap().is_empty());
        assert_eq!(serialize_circuit(&Circuit::new(4)), "");
    }

    #[test]
    fn serializes_boost_notation() {
        let c = Circuit::from_gates(4, [Gate::Not(4)]).unwrap();
        assert_eq!(serialize_circuit(&c), "X(4);\n");
        let c = Circuit::from_gates(3, [Gate::Cnot { control: 2, target: 3 }, Gate::Not(3)]).unwrap();
        assert_eq!(serialize_circuit(&c), "CN(2,3);X(3);\n");
    }

    #[test]
    fn whitespace_and_comments_are_ignored() {
        let c = parse_circuit("  X( 1 ) ;\tCN(1, 2);  # trailing\r\nFr(1   2,3);", 3).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.layers().len(), 2);
    }

    fn parse_err(text: &str, width: usize) -> (usize, usize) {
        match parse_circuit(text, width) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_err("X(1);\nY(2);", 3), (2, 1));
        assert_eq!(parse_err("X(1);CN(1,1);", 3), (1, 6));
        assert_eq!(parse_err("X(4);", 3), (1, 1));
        assert_eq!(parse_err("X(1)", 3), (1, 5));
        assert_eq!(parse_err("Fr(1,2,3);", 3), (1, 5));
        assert_eq!(parse_err("X(0);", 3), (1, 3));
        assert_eq!(parse_err("CN(1 2);", 3), (1, 6));
    }

    fn arb_gate(width: usize) -> impl Strategy<Value = Gate> {
        let idx = proptest::sample::subsequence((1..=width).collect::<Vec<_>>(), 3)
            .prop_shuffle();
        (0..3u8, idx).prop_map(|(kind, q)| match kind {
            0 => Gate::Not(q[0]),
            1 => Gate::Cnot { control: q[0], target: q[1] },
            _ => Gate::Fredkin { a: q[0], b: q[1], control: q[2] },
        })
    }

    fn arb_circuit() -> impl Strategy<Value = Circuit> {
        (3usize..=12).prop_flat_map(|width| {
            proptest::collection::vec((arb_gate(width), any::<bool>()), 0..60).prop_map(
                move |ops| {
                    let mut c = Circuit::new(width);
                    for (g, brk) in ops {
                        c.push(g).unwrap();
                        if brk {
                            c.end_layer();
                        }
                    }
                    c
                },
            )
        })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_round_trips(c in arb_circuit()) {
            let text = serialize_circuit(&c);
            let back = parse_circuit(&text, c.width()).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
