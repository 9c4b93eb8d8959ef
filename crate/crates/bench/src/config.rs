use ecs_core::dist::{ClassDistribution, DistError};
use ecs_core::SortError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("n grid must be non-empty and strictly increasing")]
    BadGrid,
    #[error("trials must be at least 1")]
    BadTrials,
    #[error(
        "grid refused: predicted comparison total {predicted} exceeds the ceiling {ceiling}; \
         shrink the grid or raise --max-comparisons"
    )]
    GridTooLarge { predicted: u64, ceiling: u64 },
    #[error("distribution error: {0}")]
    Dist(#[from] DistError),
    #[error("adversary error: {0}")]
    Adversary(#[from] ecs_core::adversary::AdversaryError),
    #[error("sort error: {0}")]
    Sort(#[from] SortError),
    #[error("partition error: {0}")]
    Partition(#[from] ecs_core::PartitionError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmKind {
    Cr,
    Er,
    ErConstant,
    RoundRobin,
}

impl AlgorithmKind {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmKind::Cr => "cr",
            AlgorithmKind::Er => "er",
            AlgorithmKind::ErConstant => "er-constant",
            AlgorithmKind::RoundRobin => "round-robin",
        }
    }
}

/// What answers the algorithm's queries: a sampled ground truth or the
/// adaptive adversary.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleSpec {
    Distribution(ClassDistribution),
    AdversaryUniform { f: usize },
    AdversarySmallestClass { ell: usize },
}

impl OracleSpec {
    pub fn distribution_name(&self) -> String {
        match self {
            OracleSpec::Distribution(d) => d.name().to_string(),
            OracleSpec::AdversaryUniform { .. } | OracleSpec::AdversarySmallestClass { .. } => {
                "adversary".to_string()
            }
        }
    }

    pub fn param_string(&self) -> String {
        match self {
            OracleSpec::Distribution(d) => d.param_string(),
            OracleSpec::AdversaryUniform { f } => format!("f={f}"),
            OracleSpec::AdversarySmallestClass { ell } => format!("ell={ell}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmKind,
    pub oracle: OracleSpec,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub prune: bool,
    pub override_d: Option<usize>,
    pub k_hint: Option<usize>,
    /// Resource guard: configurations predicted to exceed this many
    /// comparisons are refused up front.
    pub max_predicted_comparisons: u64,
    /// Record wall-clock times per run. Off by default so identical
    /// invocations produce byte-identical output.
    pub record_wall_time: bool,
}

impl ExperimentConfig {
    pub fn new(algorithm: AlgorithmKind, oracle: OracleSpec, n_grid: Vec<usize>) -> Self {
        Self {
            algorithm,
            oracle,
            n_grid,
            trials: 1,
            base_seed: 1,
            prune: true,
            override_d: None,
            k_hint: None,
            max_predicted_comparisons: 5_000_000_000,
            record_wall_time: false,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.n_grid.is_empty() || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BenchError::BadGrid);
        }
        if self.trials < 1 {
            return Err(BenchError::BadTrials);
        }
        if let OracleSpec::Distribution(d) = &self.oracle {
            d.validate()?;
        }
        Ok(())
    }
}
