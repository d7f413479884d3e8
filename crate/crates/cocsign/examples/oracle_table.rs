//! The exact integer phase bookkeeping of the gate, printed part by part
//! for all four logical inputs. Every four-trace run ends with a common
//! phase addition of pi and a lone relative sign flip on |01>.

fn main() {
    print!("{}", cocsign::cli::run_oracle().unwrap());
}
