use std::io::IsTerminal;

/// Writes diagnostics to standard error, in color when that is a terminal
/// and `PMXML_COLOR` is not `0`.
pub struct Diagnostics {
    color: bool,
}

impl Diagnostics {
    pub fn from_env() -> Self {
        let enabled = std::env::var("PMXML_COLOR").map_or(true, |v| v != "0");
        Self {
            color: enabled && std::io::stderr().is_terminal(),
        }
    }

    pub fn error(&self, message: &str) {
        if self.color {
            eprintln!("\x1b[1;31merror\x1b[0m: {message}");
        } else {
            eprintln!("error: {message}");
        }
    }
}
