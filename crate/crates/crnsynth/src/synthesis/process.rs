//! External SMT solver backend, speaking SMT-LIB 2 text over the child
//! process's standard streams.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::time::Instant;

use crate::synthesis::smtlib::{parse_check_sat, parse_get_value, CheckSat};
use crate::synthesis::SynthesisError;

/// Result of one `(check-sat)` round against the external solver.
#[derive(Debug)]
pub enum ExternalStep {
    Model(Vec<(String, i64)>),
    Unsat,
    TimedOut,
}

pub struct ExternalSession {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
    transcript: String,
    get_value_command: String,
}

impl ExternalSession {
    /// Spawns the solver and sends the initial script (declarations and
    /// assertions, without `check-sat`).
    pub fn spawn(
        command: &str,
        args: &[String],
        initial_script: &str,
        get_value_command: &str,
    ) -> Result<Self, SynthesisError> {
        let mut child = Command::new(command)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| SynthesisError::Backend {
                message: format!("failed to start solver `{command}`: {e}"),
                transcript: String::new(),
            })?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let stderr = child.stderr.take().expect("piped stderr");
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                match line {
                    Ok(line) => {
                        if tx.send(line).is_err() {
                            break;
                        }
                    }
                    Err(_) => break,
                }
            }
        });
        // Drain stderr so the child never blocks on a full pipe.
        std::thread::spawn(move || {
            let reader = BufReader::new(stderr);
            for _ in reader.lines() {}
        });
        let mut session = Self {
            child,
            stdin,
            lines: rx,
            transcript: String::new(),
            get_value_command: get_value_command.to_string(),
        };
        session.send(initial_script)?;
        Ok(session)
    }

    fn send(&mut self, text: &str) -> Result<(), SynthesisError> {
        self.transcript.push_str(text);
        self.stdin
            .write_all(text.as_bytes())
            .and_then(|_| self.stdin.flush())
            .map_err(|e| SynthesisError::Backend {
                message: format!("failed to write to solver: {e}"),
                transcript: self.transcript.clone(),
            })
    }

    fn recv_line(&mut self, deadline: Option<Instant>) -> Result<Option<String>, SynthesisError> {
        let line = match deadline {
            Some(deadline) => {
                let now = Instant::now();
                if now >= deadline {
                    return Ok(None);
                }
                match self.lines.recv_timeout(deadline - now) {
                    Ok(line) => line,
                    Err(RecvTimeoutError::Timeout) => return Ok(None),
                    Err(RecvTimeoutError::Disconnected) => {
                        return Err(SynthesisError::Backend {
                            message: "solver process closed its output".to_string(),
                            transcript: self.transcript.clone(),
                        })
                    }
                }
            }
            None => self.lines.recv().map_err(|_| SynthesisError::Backend {
                message: "solver process closed its output".to_string(),
                transcript: self.transcript.clone(),
            })?,
        };
        self.transcript.push_str(&line);
        self.transcript.push('\n');
        Ok(Some(line))
    }

    /// Issues `(check-sat)` and, when satisfiable, a `get-value` for the
    /// stoichiometry variables.
    pub fn next_model(
        &mut self,
        deadline: Option<Instant>,
    ) -> Result<ExternalStep, SynthesisError> {
        self.send("(check-sat)\n")?;
        let line = loop {
            match self.recv_line(deadline)? {
                None => {
                    self.kill();
                    return Ok(ExternalStep::TimedOut);
                }
                Some(line) if line.trim().is_empty() => continue,
                Some(line) => break line,
            }
        };
        match parse_check_sat(&line).map_err(|e| self.with_transcript(e))? {
            CheckSat::Unsat => Ok(ExternalStep::Unsat),
            CheckSat::Unknown => Err(SynthesisError::Backend {
                message: "solver returned `unknown`".to_string(),
                transcript: self.transcript.clone(),
            }),
            CheckSat::Sat => {
                let command = self.get_value_command.clone();
                self.send(&command)?;
                let mut buffer = String::new();
                loop {
                    match self.recv_line(deadline)? {
                        None => {
                            self.kill();
                            return Ok(ExternalStep::TimedOut);
                        }
                        Some(line) => {
                            buffer.push_str(&line);
                            buffer.push('\n');
                            let open = buffer.matches('(').count();
                            let close = buffer.matches(')').count();
                            if open > 0 && open == close {
                                break;
                            }
                        }
                    }
                }
                let values = parse_get_value(&buffer).map_err(|e| self.with_transcript(e))?;
                Ok(ExternalStep::Model(values))
            }
        }
    }

    /// Pushes an extra assertion (uniqueness constraints between rounds).
    pub fn add_assert(&mut self, assertion: &str) -> Result<(), SynthesisError> {
        self.send(assertion)?;
        self.send("\n")
    }

    pub fn transcript(&self) -> &str {
        &self.transcript
    }

    fn with_transcript(&self, err: SynthesisError) -> SynthesisError {
        match err {
            SynthesisError::Backend { message, .. } => SynthesisError::Backend {
                message,
                transcript: self.transcript.clone(),
            },
            other => other,
        }
    }

    fn kill(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl Drop for ExternalSession {
    fn drop(&mut self) {
        self.kill();
    }
}
