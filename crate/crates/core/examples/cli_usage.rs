//! Driving the command-line front end in-process.

use cubic_resum::cli;

fn main() {
    let dir = std::env::temp_dir().join("cubic-resum-example");
    let dir = dir.to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["cubic-resum", "coeffs", "--order", "8", "--cache-dir", dir],
        &["cubic-resum", "sum", "--order", "30", "--method", "c", "--g", "1", "--g", "-1", "--cache-dir", dir],
        &["cubic-resum", "saddle", "--method", "a", "--method", "c", "--out", "json"],
        &["cubic-resum", "sum", "--order", "30", "--method", "a", "--g", "-0.5", "--cache-dir", dir],
    ];
    for args in runs {
        let out = cli::run(args.iter().copied());
        println!("$ {}\n{}{}[exit {}]\n", args.join(" "), out.stdout, out.stderr, out.code);
    }
}
