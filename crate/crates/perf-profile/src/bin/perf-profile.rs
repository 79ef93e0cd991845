use std::io::IsTerminal;

fn main() {
    let styled =
        std::io::stdout().is_terminal() && std::env::var_os("PERF_PROFILE_NO_COLOR").is_none();
    let code = perf_profile::cli::dispatch(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
        styled,
    );
    std::process::exit(code);
}
