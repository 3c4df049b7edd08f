use std::io::Write;

fn main() {
    let (code, stdout, stderr) = vage_cli::run_args(std::env::args_os());
    if !stdout.is_empty() {
        print!("{stdout}");
        let _ = std::io::stdout().flush();
    }
    if !stderr.is_empty() {
        eprint!("{stderr}");
    }
    std::process::exit(code);
}
