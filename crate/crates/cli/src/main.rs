use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let json = args.iter().any(|a| a == "--json");
    let (code, report) = bielliptic_cli::run_command(&args);
    if json {
        println!("{}", report.to_json());
    } else if code == 2 {
        for line in &report.lines {
            eprintln!("{line}");
        }
    } else {
        for line in &report.lines {
            println!("{line}");
        }
    }
    ExitCode::from(code as u8)
}
