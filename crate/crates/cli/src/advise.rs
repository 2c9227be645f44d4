//! Live advice while a sequence of trials is being observed.

use lastsuccess::{Decision, DpSolution, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Continue { k: usize },
    /// Stop at trial `k`; `e_stop` is the expected payoff of doing so.
    Stop { k: usize, e_stop: String },
    /// Token was not `0` or `1`; the trial index does not advance.
    Invalid { k: usize, token: String },
    /// All `n` trials passed without stopping.
    Exhausted,
}

impl Step {
    pub fn line(&self) -> String {
        match self {
            Step::Continue { k } => format!("{k}: CONTINUE"),
            Step::Stop { k, e_stop } => format!("{k}: STOP {e_stop}"),
            Step::Invalid { k, token } => format!("{k}: invalid outcome `{token}`, enter 0 or 1"),
            Step::Exhausted => "END no stop".to_string(),
        }
    }
}

/// Index-based fold over outcome tokens; never re-solves.
pub struct AdviseSession<'a, T> {
    sol: &'a DpSolution<T>,
    next: usize,
    finished: bool,
}

impl<'a, T: Scalar> AdviseSession<'a, T> {
    pub fn new(sol: &'a DpSolution<T>) -> Self {
        Self {
            sol,
            next: 1,
            finished: false,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Feed one outcome token. Returns the steps it produced (empty once finished).
    pub fn feed(&mut self, token: &str) -> Vec<Step> {
        if self.finished {
            return Vec::new();
        }
        let k = self.next;
        let success = match token.trim() {
            "1" => true,
            "0" => false,
            other => {
                return vec![Step::Invalid {
                    k,
                    token: other.to_string(),
                }]
            }
        };
        match self.sol.advise(k, success).expect("index stays in range") {
            Decision::Stop => {
                self.finished = true;
                vec![Step::Stop {
                    k,
                    e_stop: self.sol.e_stop[k].to_string(),
                }]
            }
            Decision::Continue => {
                self.next += 1;
                let mut steps = vec![Step::Continue { k }];
                if self.next > self.sol.n() {
                    self.finished = true;
                    steps.push(Step::Exhausted);
                }
                steps
            }
        }
    }
}

/// Replay a whole stream of tokens.
pub fn transcript<T: Scalar, S: AsRef<str>>(sol: &DpSolution<T>, tokens: &[S]) -> Vec<Step> {
    let mut session = AdviseSession::new(sol);
    let mut steps = Vec::new();
    for t in tokens {
        if session.is_finished() {
            break;
        }
        steps.extend(session.feed(t.as_ref()));
    }
    steps
}
