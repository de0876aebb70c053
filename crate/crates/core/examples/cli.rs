//! Drive the command line from a TOML config: a Model I flow table written
//! atomically with its resolved config alongside.

use nonlocal_rd::harness::cli_main;

fn main() {
    let dir = std::env::temp_dir().join("nlrd-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let config = dir.join("flow.toml");
    std::fs::write(&config, "schema_version = 1\n\n[rg]\nmodel = \"model1\"\ndim = 1.5\npoints = 6\n").expect("write config");
    let out = dir.join("flow.csv");
    let code = cli_main(["nlrd", "rg", "flow", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    println!("exit code {code}");
    println!("{}", std::fs::read_to_string(&out).expect("output written"));
    let sidecar = dir.join("flow.csv.config.toml");
    println!("{}", std::fs::read_to_string(sidecar).expect("resolved config written"));
}
