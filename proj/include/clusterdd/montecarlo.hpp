#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "clusterdd/analytic.hpp"
#include "clusterdd/channel.hpp"
#include "clusterdd/fusion.hpp"
#include "clusterdd/geometry.hpp"
#include "clusterdd/sensing.hpp"
#include "clusterdd/types.hpp"

namespace clusterdd {

enum class FusionRule {
    MorGaussian,
    MorLognormal,
    MerGaussian,
    MerLognormal,
    SingleClusterEG,
    SingleClusterMR,
};

const char* rule_name(FusionRule rule);

/// Where the intruder sits in each trial: pinned, or redrawn uniformly over a
/// centred square (shrunk to keep it away from the region edge).
enum class Placement { Fixed, UniformMargin };

/// Everything one experiment needs. Trial t is seeded by a pure function of
/// (master_seed, t); see run_trials.
struct ExperimentConfig {
    double region_side = 100.0;
    int grid_dim = 2;
    ArrayXd lambda;  // per-cluster intensity, size grid_dim^2

    double target_power = 10.0;
    Placement placement = Placement::Fixed;
    Vec2 target_position{20.0, 20.0};
    double margin_side = 85.0;

    SensingConfig sensing;
    ChannelConfig channel;
    FusionRule rule = FusionRule::MorGaussian;

    int trials = 10000;
    std::uint64_t master_seed = 20260801ull;
    double quad_tol = 1e-8;  // tolerance of the analytic weight integrals

    int clusters() const { return grid_dim * grid_dim; }
    ClusterLayout layout() const { return make_layout(region_side, grid_dim); }

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

/// One labeled batch of independent trials. Row t of each matrix belongs to
/// trial t regardless of how many workers produced the batch.
struct TrialBatch {
    Hypothesis hypothesis = Hypothesis::H0;
    MatrixXd z;            // trials x M fusion-center observations
    MatrixXd ybar;         // trials x M noiseless CH signals
    PointMatrix targets;   // trials x 2 intruder positions used per trial
    std::vector<std::uint64_t> trial_seeds;

    Index trials() const { return z.rows(); }
    Index clusters() const { return z.cols(); }
};

/// Runs the full pipeline (deployment -> local decisions -> fading MAC ->
/// relay) once per trial. Deterministic for a fixed (config, master_seed)
/// independent of the worker count: every trial derives its own generator
/// streams and writes its own row. Target positions are derived without the
/// hypothesis label, so H0/H1 batches of the same config pair up trial by
/// trial.
TrialBatch run_trials(const ExperimentConfig& cfg, Hypothesis hypothesis);

/// Unbiased sample mean/variance with standard errors, per cluster.
struct MomentEstimate {
    ArrayXd mean, mean_se;
    ArrayXd var, var_se;
};

struct EmpiricalMoments {
    MomentEstimate ybar;
    MomentEstimate z;
};

/// Throws std::domain_error for batches of fewer than two trials.
EmpiricalMoments empirical_moments(const TrialBatch& batch);

/// Empirical ROC: thresholds swept over the pooled support, exceedance
/// fractions on both sides. Points come out sorted by increasing P_FA.
struct RocPoint {
    double pfa = 0;
    double pd = 0;
    double threshold = 0;
};

std::vector<RocPoint> roc(VectorXd h0_stats, VectorXd h1_stats);

/// Detection probability at a fixed false-alarm target: the threshold is the
/// empirical (1 - target_pfa) quantile of the H0 statistics under the
/// higher-order-statistic rule (conservative, realized P_FA <= target), and
/// P_D is the H1 exceedance fraction with its binomial standard error.
struct PdEstimate {
    double pd = 0;
    double se = 0;
    double threshold = 0;
};

PdEstimate pd_at_pfa(const VectorXd& h0_stats, const VectorXd& h1_stats,
                     double target_pfa);

/// Sample mean of P_tx * Ybar_m^2 per cluster with standard errors.
/// Requires an H0 batch.
struct PowerEstimate {
    ArrayXd mean;
    ArrayXd se;
};

PowerEstimate empirical_power(const TrialBatch& batch, double sn_power);

/// Evaluates fusion statistics on a pair of batches sharing trial targets.
/// MOR weights are rebuilt per trial from the analytic moments at that
/// trial's target (shared across the pair and across MOR rules); MER and
/// single-cluster statistics need no weights.
struct StatisticSeries {
    FusionRule rule;
    VectorXd h0;
    VectorXd h1;
};

std::vector<StatisticSeries> evaluate_rules(const ExperimentConfig& cfg,
                                            const std::vector<FusionRule>& rules,
                                            const TrialBatch& h0_batch,
                                            const TrialBatch& h1_batch);

/// Static-partition parallel loop; bodies must touch disjoint state.
/// threads <= 0 picks the hardware concurrency.
void parallel_for(int begin, int end, int threads,
                  const std::function<void(int)>& body);

/// Process-wide default worker count for run_trials/evaluate_rules
/// (0 = hardware). Execution detail only; results do not depend on it.
void set_worker_threads(int threads);
int worker_threads();

}  // namespace clusterdd
