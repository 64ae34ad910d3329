//! Flat `key = value` configuration files, merged under explicit flags.

use clap::Command;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}: expected `key = value`")]
    Malformed { path: String, line: usize },
    #[error("{path}:{line}: unknown key '{key}' for `{subcommand}`")]
    UnknownKey {
        path: String,
        line: usize,
        key: String,
        subcommand: String,
    },
    #[error("{path}:{line}: '{key}' is a switch and takes true or false, got '{value}'")]
    BadSwitch {
        path: String,
        line: usize,
        key: String,
        value: String,
    },
}

/// `(line number, key, value)` for every assignment in `text`. Blank lines
/// and `#` comments are skipped.
pub fn parse(path: &str, text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Malformed {
            path: path.into(),
            line: i + 1,
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(ConfigError::Malformed {
                path: path.into(),
                line: i + 1,
            });
        }
        out.push((i + 1, key.replace('_', "-"), value.to_string()));
    }
    Ok(out)
}

/// Value of `--config` in `args`, if present.
fn config_path(args: &[String]) -> Option<String> {
    args.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            args.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

/// Inserts the assignments of the `--config` file as flags right after the
/// subcommand name, so that flags given on the command line (parsed later)
/// take precedence.
pub fn merge(cmd: &Command, args: Vec<String>) -> Result<Vec<String>, ConfigError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let Some(pos) = args
        .iter()
        .position(|a| cmd.get_subcommands().any(|s| s.get_name() == a))
    else {
        return Ok(args);
    };
    let sub_name = args[pos].clone();
    let sub = cmd.find_subcommand(&sub_name).expect("subcommand exists");
    let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::Io {
        path: path.clone(),
        message: e.to_string(),
    })?;
    let mut injected = Vec::new();
    for (line, key, value) in parse(&path, &text)? {
        let arg = sub
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config" && key != "help")
            .ok_or_else(|| ConfigError::UnknownKey {
                path: path.clone(),
                line,
                key: key.clone(),
                subcommand: sub_name.clone(),
            })?;
        if arg.get_action().takes_values() {
            injected.push(format!("--{key}={value}"));
        } else {
            match value.as_str() {
                "true" => injected.push(format!("--{key}")),
                "false" => {}
                _ => {
                    return Err(ConfigError::BadSwitch {
                        path: path.clone(),
                        line,
                        key,
                        value,
                    })
                }
            }
        }
    }
    let mut out = args;
    out.splice(pos + 1..pos + 1, injected);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# header\n\nq = 5  # prime\nomega_center=40\n";
        let got = parse("c", text).unwrap();
        assert_eq!(got, vec![(3, "q".into(), "5".into()), (4, "omega-center".into(), "40".into())]);
        assert!(parse("c", "").unwrap().is_empty());
    }

    #[test]
    fn malformed_line_names_its_number() {
        let err = parse("c", "q = 5\njust words\n").unwrap_err();
        assert_eq!(err, ConfigError::Malformed { path: "c".into(), line: 2 });
        assert!(err.to_string().contains(":2:"));
    }
}
