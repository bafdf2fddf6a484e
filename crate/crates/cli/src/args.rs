use clap::{Args, Parser, Subcommand, ValueEnum};
use heun_core::rootfind::SeedPolicy;
use heun_core::scalar::parse_gauss;
use heun_core::Scalar;

/// Numbers are integers, fractions (`1/100`), decimals (`-0.01`, `1e-3`) or
/// complex values `re+imi` built from those (`2i`, `-1/2+3/4i`). All of them
/// are read exactly.
#[derive(Parser, Debug)]
#[command(name = "heunzeros", version, about = "Accessory-parameter polynomials of Heun-class equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient polynomials c_0 … c_{m-max}.
    Poly {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Zeros of c_m, labelled by the nearest perturbative estimate.
    Zeros {
        #[command(flatten)]
        family: FamilyArgs,
        /// Polynomial index.
        #[arg(long)]
        m: usize,
        /// Relative tolerance on |Im z| / (1 + |Re z|) for counting real zeros.
        #[arg(long, default_value_t = heun_core::rootfind::DEFAULT_IMAG_TOL)]
        imag_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Perturbative estimates next to the zeros of c_m.
    Table {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        m: usize,
        /// Number of rows (labels 0 … rows-1).
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Follows labelled zeros across several degrees.
    Track {
        #[command(flatten)]
        family: FamilyArgs,
        /// Ascending comma-separated indices, e.g. 30,40.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Connection coefficient d₂(B) from the rescaled Taylor coefficients.
    D2 {
        #[command(flatten)]
        family: FamilyArgs,
        /// Number of Taylor coefficients K.
        #[arg(long, default_value_t = 500)]
        k_max: usize,
        /// Search for a zero of d₂ starting from B.
        #[arg(long)]
        find_zero: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Runs a property suite and reports each check.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "all", value_parser = ["recurrence", "perturbation", "oracle", "all"])]
        suite: String,
        #[arg(long, default_value_t = 14)]
        m_max: usize,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Lame,
    Mathieu,
    Wh,
    Heun,
    Cheun,
    Rcheun,
}

fn number(text: &str) -> Result<Scalar, String> {
    parse_gauss(text).map(Scalar::Exact).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Deformation parameter (Mathieu: q; Whittaker–Hill: −2h).
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub s: Option<Scalar>,
    /// Lamé degree.
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub n: Option<Scalar>,
    /// Lamé accessory parameter; sets B = −ηs/4.
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub eta: Option<Scalar>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub gamma: Option<Scalar>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub delta: Option<Scalar>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub alpha: Option<Scalar>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub beta: Option<Scalar>,
    /// Mathieu characteristic value; sets B = q/2 − a/4.
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub a: Option<Scalar>,
    /// Mathieu parameter (same as --s).
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub q: Option<Scalar>,
    /// Whittaker–Hill gauge parameter (s = −2h).
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub h: Option<Scalar>,
    /// Whittaker–Hill A₀; sets B.
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub a0: Option<Scalar>,
    /// Whittaker–Hill A₁ (with --h).
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub a1: Option<Scalar>,
    /// Accessory parameter B.
    #[arg(long = "B", value_parser = number, allow_hyphen_values = true)]
    pub b: Option<Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Seeds {
    Auto,
    Perturbative,
    Circle,
}

impl From<Seeds> for SeedPolicy {
    fn from(s: Seeds) -> Self {
        match s {
            Seeds::Auto => SeedPolicy::Auto,
            Seeds::Perturbative => SeedPolicy::Perturbative,
            Seeds::Circle => SeedPolicy::Circle,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Working precision in bits.
    #[arg(long, default_value_t = heun_core::DEFAULT_PRECISION)]
    pub prec: u32,
    /// Relative Newton tolerance (default 2^(-prec/2)).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Highest perturbative order shown by `table`.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub order: u8,
    /// Significant digits in printed values (also the stability threshold of `track`).
    #[arg(long, default_value_t = 10)]
    pub digits: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Seeds::Auto)]
    pub seeds: Seeds,
    /// Iteration cap for the root finder and the d₂ zero search.
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
}
