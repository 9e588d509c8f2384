use std::process::ExitCode;

fn main() -> ExitCode {
    let result = nilorbit_cli::run(std::env::args_os());
    let text = result.text();
    if result.exit_code == 0 {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    ExitCode::from(result.exit_code as u8)
}
