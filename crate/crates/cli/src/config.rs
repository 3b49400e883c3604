//! `--config` files: one `key=value` per line, keys named like the long
//! flags. Values given on the command line take precedence.

use std::path::Path;

use crate::{io_err, CliError, CliResult};

/// Keys that are switches rather than options taking a value.
const SWITCHES: &[&str] = &["css", "distance"];

fn config_path(args: &[String]) -> CliResult<Option<(usize, usize, String)>> {
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            let value = args
                .get(i + 1)
                .ok_or_else(|| CliError::Usage("--config needs a file".into()))?;
            return Ok(Some((i, 2, value.clone())));
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Ok(Some((i, 1, v.to_owned())));
        }
    }
    Ok(None)
}

fn has_flag(args: &[String], flag: &str) -> bool {
    args.iter()
        .any(|a| a == flag || a.strip_prefix(flag).is_some_and(|rest| rest.starts_with('=')))
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", no + 1)))?;
        out.push((k.trim().replace('_', "-"), v.trim().to_owned()));
    }
    Ok(out)
}

/// Replaces `--config FILE` in `args` by the flags it defines, skipping any
/// already present. Switches are added for `true` and dropped for `false`.
pub fn expand_config(args: Vec<String>) -> CliResult<Vec<String>> {
    let Some((pos, width, path)) = config_path(&args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| io_err(Path::new(&path), e))?;
    let mut rest: Vec<String> = args[..pos].iter().chain(&args[pos + width..]).cloned().collect();
    for (key, value) in parse_config(&text)? {
        let flag = format!("--{key}");
        if has_flag(&rest, &flag) {
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            match value.as_str() {
                "true" | "1" | "yes" => rest.push(flag),
                "false" | "0" | "no" => {}
                other => return Err(CliError::Usage(format!("{key}: expected true or false, got {other:?}"))),
            }
        } else {
            rest.push(flag);
            rest.push(value);
        }
    }
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn no_config_is_identity() {
        let a = strings(&["stabevo", "search", "--n", "5"]);
        assert_eq!(expand_config(a.clone()).unwrap(), a);
    }

    #[test]
    fn file_values_fill_gaps() {
        let dir = std::env::temp_dir().join(format!("stabevo-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# test\nn=7\nk = 1\nmax_gen=12\ncss=true\ndistance=false\n").unwrap();
        let args = strings(&["stabevo", "search", "--config", path.to_str().unwrap(), "--n", "5"]);
        let out = expand_config(args).unwrap();
        assert_eq!(out, strings(&["stabevo", "search", "--n", "5", "--k", "1", "--max-gen", "12", "--css"]));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn bad_lines() {
        assert!(parse_config("n 5").is_err());
        assert!(expand_config(strings(&["x", "--config"])).is_err());
    }
}
