//! Library side of the `pdc` binary: the instance file format and the
//! key-value report builder, shared with the integration tests.

pub mod instance;
pub mod report;

/// An error carrying the process exit code it maps to: 2 for usage and
/// parse problems, 3 for internal invariant violations.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 2 }
    }
}

impl From<pdc_core::Error> for CliError {
    fn from(e: pdc_core::Error) -> Self {
        let code = match e {
            pdc_core::Error::RouteDisagreement { .. } => 3,
            _ => 2,
        };
        Self { message: e.to_string(), code }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_classify_core_errors() {
        let internal = CliError::from(pdc_core::Error::RouteDisagreement {
            check: pdc_core::conditions::CheckKind::MinCondition,
        });
        assert_eq!(internal.code, 3);
        let usage = CliError::from(pdc_core::Error::EmptyPieceList);
        assert_eq!(usage.code, 2);
        assert_eq!(CliError::usage("x").code, 2);
    }
}
