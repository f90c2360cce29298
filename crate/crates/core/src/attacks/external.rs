use std::process::Command;

use super::AttackError;

fn quote(path: &std::path::Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', r"'\''"))
}

/// Runs `template` through `sh -c` with `{in}` replaced by a file holding
/// `input` and `{out}` by the path the tool must write. Returns the bytes it
/// wrote.
pub fn run_external(template: &str, input: &[u8]) -> Result<Vec<u8>, AttackError> {
    let dir = tempfile::tempdir()?;
    let src = dir.path().join("in.class");
    let dst = dir.path().join("out.class");
    std::fs::write(&src, input)?;
    let command = template.replace("{in}", &quote(&src)).replace("{out}", &quote(&dst));
    let out = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .output()
        .map_err(|e| AttackError::ToolMissing { command: template.to_string(), detail: e.to_string() })?;
    let stderr = String::from_utf8_lossy(&out.stderr).trim().to_string();
    match out.status.code() {
        Some(0) => {}
        Some(127) => return Err(AttackError::ToolMissing { command: template.to_string(), detail: stderr }),
        status => return Err(AttackError::ToolFailed { command: template.to_string(), status, stderr }),
    }
    std::fs::read(&dst).map_err(|e| AttackError::ToolFailed {
        command: template.to_string(),
        status: Some(0),
        stderr: format!("no output written: {e}"),
    })
}
