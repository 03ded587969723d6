//! Column descriptions printed by `--schema`.

use serde_json::{json, Value};

const ENVELOPE: [(&str, &str); 4] = [
    ("command", "subcommand name"),
    ("version", "library version"),
    ("config", "resolved arguments; the thread count is omitted"),
    ("result", "subcommand result, columns below"),
];

pub const COMMANDS: [&str; 9] = ["psi", "bound", "dickman", "omega", "vw-verify", "calpha", "rb", "arctan", "verify"];

fn columns(command: &str) -> Vec<(&'static str, &'static str)> {
    match command {
        "psi" => vec![
            ("x", "upper end of n"),
            ("y", "smoothness bound"),
            ("u", "log x / log y"),
            ("t0", "threshold past which |f| is increasing and nonzero"),
            ("psi", "count of n <= x with every prime factor of f(n) at most y"),
            ("ratio", "psi / x"),
            ("martin_prediction", "product of rho(d_i u) over the factor degrees"),
            ("main_term.coefficient", "upper-bound main term divided by x"),
            ("main_term.value", "upper-bound main term"),
            ("main_term.u_in_range", "u within the admissible range for x"),
            ("main_term.u_max", "largest admissible u for x"),
            ("dump: n", "index"),
            ("dump: value", "f(n)"),
            ("dump: pplus", "largest prime factor of |f(n)|, inf when f(n) = 0"),
            ("dump: smooth", "pplus <= y"),
        ],
        "bound" => vec![
            ("d, g, u", "total degree, number of factors, exponent"),
            ("m", "floor(u)"),
            ("gamma", "gamma_f(u)"),
            ("thm11_main", "upper-bound coefficient of x"),
            ("timofeev_eps, timofeev_main", "earlier bound coefficient and its epsilon"),
            ("hmyrova_main", "irreducible-case coefficient, up to an unknown constant"),
            ("hmyrova_applicable, hmyrova_comparable", "whether that coefficient applies and compares"),
            ("cassels_coeff", "coefficient of the u = 1 bound for irreducible f"),
            ("x, thm11_u_in_range, timofeev_u_in_range", "admissible-range flags when --x is given"),
        ],
        "dickman" => vec![
            ("u", "argument"),
            ("rho", "Dickman rho(u)"),
            ("martin_prediction", "product of rho(d_i u), when a polynomial is given"),
        ],
        "omega" => vec![
            ("k", "modulus"),
            ("omega", "number of residues n mod k with f(n) = 0 mod k"),
            ("factorization", "[p, e] pairs of k"),
            ("p, v, residues", "roots of f modulo p^v with --p/--v"),
        ],
        "vw-verify" => vec![
            ("instance", "x, z, y, depth"),
            ("passed", "every verdict below holds"),
            ("undivided", "lhs, V, W and both right-hand sides with verdicts"),
            ("split", "depth-m V/W split with monotonicity flags"),
            ("depth_one_comparison", "split heads and tails against the undivided sums"),
            ("recursion", "kappa values checked and how many failed"),
        ],
        "calpha" => vec![
            ("m", "radicand"),
            ("x", "count over n <= x"),
            ("window_start, window_length", "count over (N, N+M]"),
            ("count", "n with a prime ideal class meeting the window exactly once"),
            ("comparison", "count against Psi(x, x), prime ideal count and the calibration constant"),
            ("dump: n, p, class", "witness prime and class n mod p"),
        ],
        "rb" => vec![
            ("b", "shift in n^2 + b"),
            ("x", "upper end of n"),
            ("count", "n <= x for which n^2 + b has a primitive divisor"),
            ("ratio", "count / x"),
            ("dump: n, pplus", "index and largest prime factor of n^2 + b"),
            ("dump: has_primitive", "a prime divides n^2 + b but no earlier term"),
            ("dump: method", "criterion (P+ > 2n) or direct scan"),
        ],
        "arctan" => vec![
            ("report.count", "n <= x with arctan n irreducible"),
            ("r_1", "count of n^2 + 1 with a primitive divisor"),
            ("equal", "the two counts agree"),
        ],
        "verify" => vec![
            ("id, title", "criterion"),
            ("passed", "verdict"),
            ("details", "one line per check"),
        ],
        _ => Vec::new(),
    }
}

pub fn describe(command: &str) -> String {
    let obj = |cols: &[(&str, &str)]| -> Value {
        Value::Object(cols.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
    };
    let v = json!({
        "command": command,
        "envelope": obj(&ENVELOPE),
        "columns": obj(&columns(command)),
    });
    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
}
