#include "clusterdd/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace clusterdd {

namespace {

// Substream tags keep the per-trial draws for independent purposes apart.
constexpr std::uint64_t kStreamTarget = 0x7a6765741a2b3c4dull;
constexpr std::uint64_t kStreamPipeline = 0x90b5d1e6f3a41725ull;

std::atomic<int> g_worker_threads{0};

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Vec2 draw_target_position(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    if (cfg.placement == Placement::Fixed) {
        return cfg.target_position;
    }
    Rng rng(derive_seed(trial_seed, kStreamTarget));
    const double lo = 0.5 * (cfg.region_side - cfg.margin_side);
    const double x = lo + cfg.margin_side * rng.uniform();
    const double y = lo + cfg.margin_side * rng.uniform();
    return Vec2{x, y};
}

void moment_estimate(const MatrixXd& samples, MomentEstimate& out) {
    const Index n = samples.rows();
    const Index m_total = samples.cols();
    out.mean.resize(m_total);
    out.mean_se.resize(m_total);
    out.var.resize(m_total);
    out.var_se.resize(m_total);
    for (Index m = 0; m < m_total; ++m) {
        const auto col = samples.col(m);
        const double mean = col.mean();
        double m2 = 0, m4 = 0;
        for (Index t = 0; t < n; ++t) {
            const double d = col[t] - mean;
            const double d2 = d * d;
            m2 += d2;
            m4 += d2 * d2;
        }
        const double nn = static_cast<double>(n);
        const double var = m2 / (nn - 1.0);  // unbiased
        m2 /= nn;
        m4 /= nn;
        out.mean[m] = mean;
        out.mean_se[m] = std::sqrt(var / nn);
        out.var[m] = var;
        // Distribution-free variance of the sample variance.
        const double var_of_var =
            (m4 - (nn - 3.0) / (nn - 1.0) * var * var) / nn;
        out.var_se[m] = std::sqrt(std::max(0.0, var_of_var));
    }
}

double statistic_value(FusionRule rule, const Eigen::Ref<const VectorXd>& z,
                       const FusionWeights* gaussian, const FusionWeights* lognormal) {
    switch (rule) {
        case FusionRule::MorGaussian:
            return mor_gaussian(z, *gaussian);
        case FusionRule::MorLognormal:
            return mor_lognormal(z, *lognormal);
        case FusionRule::MerGaussian:
            return mer_gaussian(z);
        case FusionRule::MerLognormal:
            return mer_lognormal(z);
        case FusionRule::SingleClusterEG:
        case FusionRule::SingleClusterMR:
            return z[0];
    }
    throw std::logic_error("statistic_value: unknown rule");
}

}  // namespace

const char* rule_name(FusionRule rule) {
    switch (rule) {
        case FusionRule::MorGaussian: return "MOR-N";
        case FusionRule::MorLognormal: return "MOR-L";
        case FusionRule::MerGaussian: return "MER-N";
        case FusionRule::MerLognormal: return "MER-L";
        case FusionRule::SingleClusterEG: return "single-cluster-dEGTC";
        case FusionRule::SingleClusterMR: return "single-cluster-dMRTC";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (!(region_side > 0)) {
        throw std::invalid_argument("config: region side must be positive");
    }
    if (grid_dim < 1) {
        throw std::invalid_argument("config: grid dimension must be >= 1");
    }
    if (lambda.size() != clusters()) {
        throw std::invalid_argument(
            "config: intensity list size must equal the cluster count");
    }
    if ((lambda < 0).any()) {
        throw std::invalid_argument("config: intensities must be >= 0");
    }
    if (!(target_power >= 0)) {
        throw std::invalid_argument("config: target power must be >= 0");
    }
    if (placement == Placement::Fixed) {
        const Rect region{0, 0, region_side, region_side};
        if (!region.contains(target_position)) {
            throw std::invalid_argument("config: target must lie inside the region");
        }
    } else {
        if (!(margin_side > 0) || margin_side > region_side) {
            throw std::invalid_argument(
                "config: placement box must fit inside the region");
        }
    }
    if (!(sensing.noise_std > 0)) {
        throw std::invalid_argument("config: sensing noise must be positive");
    }
    if (!(sensing.saturation_distance > 0)) {
        throw std::invalid_argument("config: saturation distance must be positive");
    }
    if (!(sensing.exponent > 0)) {
        throw std::invalid_argument("config: sensing exponent must be positive");
    }
    if (!std::isfinite(sensing.threshold)) {
        throw std::invalid_argument("config: local threshold must be finite");
    }
    channel.validate(clusters());
    if (trials < 1) {
        throw std::invalid_argument("config: trials must be >= 1");
    }
    if (!(quad_tol > 0)) {
        throw std::invalid_argument("config: quadrature tolerance must be positive");
    }
    if ((rule == FusionRule::SingleClusterEG || rule == FusionRule::SingleClusterMR) &&
        grid_dim != 1) {
        throw std::invalid_argument("config: single-cluster rules require grid_dim = 1");
    }
    if (rule == FusionRule::SingleClusterEG && channel.scheme != Scheme::dEGTC) {
        throw std::invalid_argument(
            "config: single-cluster-dEGTC requires the dEGTC scheme");
    }
    if (rule == FusionRule::SingleClusterMR && channel.scheme != Scheme::dMRTC) {
        throw std::invalid_argument(
            "config: single-cluster-dMRTC requires the dMRTC scheme");
    }
}

void parallel_for(int begin, int end, int threads,
                  const std::function<void(int)>& body) {
    const int n = end - begin;
    if (n <= 0) return;
    const int workers = std::min(resolve_threads(threads), n);
    if (workers <= 1) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<int> next{begin};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    constexpr int kChunk = 16;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            try {
                for (;;) {
                    if (failed.load(std::memory_order_relaxed)) return;
                    const int lo = next.fetch_add(kChunk);
                    if (lo >= end) return;
                    const int hi = std::min(lo + kChunk, end);
                    for (int i = lo; i < hi; ++i) body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

void set_worker_threads(int threads) { g_worker_threads.store(threads); }
int worker_threads() { return g_worker_threads.load(); }

TrialBatch run_trials(const ExperimentConfig& cfg, Hypothesis hypothesis) {
    cfg.validate();
    const ClusterLayout layout = cfg.layout();
    const int m_total = layout.clusters();

    TrialBatch batch;
    batch.hypothesis = hypothesis;
    batch.z.resize(cfg.trials, m_total);
    batch.ybar.resize(cfg.trials, m_total);
    batch.targets.resize(cfg.trials, 2);
    batch.trial_seeds.resize(cfg.trials);

    const std::uint64_t hyp_tag = static_cast<std::uint64_t>(hypothesis);
    parallel_for(0, cfg.trials, worker_threads(), [&](int t) {
        const std::uint64_t trial_seed = derive_seed(cfg.master_seed, t);
        batch.trial_seeds[t] = trial_seed;

        const Vec2 target_pos = draw_target_position(cfg, trial_seed);
        batch.targets(t, 0) = target_pos.x();
        batch.targets(t, 1) = target_pos.y();
        const TargetParams target{cfg.target_power, target_pos};

        Rng rng(derive_seed(trial_seed, kStreamPipeline + hyp_tag));
        const PointSample points = sample_ppp(layout, cfg.lambda, rng);
        const std::vector<DecisionArray> decisions =
            simulate_decisions(points, hypothesis, target, cfg.sensing, rng);
        for (int m = 0; m < m_total; ++m) {
            const MacOutput mac =
                mac_receive(points, decisions, m, layout, cfg.channel, rng);
            batch.ybar(t, m) = mac.ybar;
            batch.z(t, m) = ch_to_fc(mac.y, m, cfg.channel, rng);
        }
    });
    return batch;
}

EmpiricalMoments empirical_moments(const TrialBatch& batch) {
    if (batch.trials() < 2) {
        throw std::domain_error("empirical_moments: need at least two trials");
    }
    EmpiricalMoments out;
    moment_estimate(batch.ybar, out.ybar);
    moment_estimate(batch.z, out.z);
    return out;
}

std::vector<RocPoint> roc(VectorXd h0_stats, VectorXd h1_stats) {
    if (h0_stats.size() == 0 || h1_stats.size() == 0) {
        throw std::invalid_argument("roc: both sample sets must be nonempty");
    }
    std::sort(h0_stats.begin(), h0_stats.end());
    std::sort(h1_stats.begin(), h1_stats.end());
    const Index n0 = h0_stats.size();
    const Index n1 = h1_stats.size();

    std::vector<double> thresholds;
    thresholds.reserve(n0 + n1);
    thresholds.insert(thresholds.end(), h0_stats.begin(), h0_stats.end());
    thresholds.insert(thresholds.end(), h1_stats.begin(), h1_stats.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());

    std::vector<RocPoint> points;
    points.reserve(thresholds.size() + 1);
    auto exceed = [](const VectorXd& sorted, double gamma) {
        const auto it =
            std::upper_bound(sorted.begin(), sorted.end(), gamma);
        return static_cast<double>(sorted.end() - it);
    };
    // Sweep from the largest threshold down so P_FA comes out increasing.
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
        const double gamma = *it;
        points.push_back(RocPoint{exceed(h0_stats, gamma) / n0,
                                  exceed(h1_stats, gamma) / n1, gamma});
    }
    points.push_back(RocPoint{1.0, 1.0, thresholds.front()});
    return points;
}

PdEstimate pd_at_pfa(const VectorXd& h0_stats, const VectorXd& h1_stats,
                     double target_pfa) {
    if (!(target_pfa > 0.0) || !(target_pfa < 1.0)) {
        throw std::domain_error("pd_at_pfa: target P_FA must lie in (0, 1)");
    }
    const Index n0 = h0_stats.size();
    const Index n1 = h1_stats.size();
    if (n0 < 2 || n1 < 1) {
        throw std::domain_error("pd_at_pfa: too few samples");
    }
    VectorXd sorted = h0_stats;
    std::sort(sorted.begin(), sorted.end());
    const double q = 1.0 - target_pfa;
    const auto idx = static_cast<Index>(
        std::ceil(q * static_cast<double>(n0 - 1)));
    if (idx < 1 || idx >= n0) {
        throw std::domain_error(
            "pd_at_pfa: quantile not interior to the H0 sample");
    }
    const double gamma = sorted[idx];
    Index count = 0;
    for (Index i = 0; i < n1; ++i) {
        if (h1_stats[i] > gamma) ++count;
    }
    PdEstimate est;
    est.threshold = gamma;
    est.pd = static_cast<double>(count) / static_cast<double>(n1);
    est.se = std::sqrt(est.pd * (1.0 - est.pd) / static_cast<double>(n1));
    return est;
}

PowerEstimate empirical_power(const TrialBatch& batch, double sn_power) {
    if (batch.hypothesis != Hypothesis::H0) {
        throw std::domain_error("empirical_power: needs an H0 batch");
    }
    const Index n = batch.trials();
    const Index m_total = batch.clusters();
    PowerEstimate est;
    est.mean.resize(m_total);
    est.se.resize(m_total);
    for (Index m = 0; m < m_total; ++m) {
        const ArrayXd p = sn_power * batch.ybar.col(m).array().square();
        const double mean = p.mean();
        const double var = (p - mean).square().sum() / (n - 1.0);
        est.mean[m] = mean;
        est.se[m] = std::sqrt(var / static_cast<double>(n));
    }
    return est;
}

std::vector<StatisticSeries> evaluate_rules(const ExperimentConfig& cfg,
                                            const std::vector<FusionRule>& rules,
                                            const TrialBatch& h0_batch,
                                            const TrialBatch& h1_batch) {
    if (h0_batch.trials() != h1_batch.trials() ||
        h0_batch.clusters() != h1_batch.clusters()) {
        throw std::invalid_argument("evaluate_rules: batch shapes differ");
    }
    if ((h0_batch.targets.array() != h1_batch.targets.array()).any()) {
        throw std::invalid_argument(
            "evaluate_rules: batches do not share trial targets (different "
            "configs or seeds?)");
    }
    const Index n = h0_batch.trials();
    const int m_total = static_cast<int>(h0_batch.clusters());

    bool needs_weights = false;
    for (FusionRule rule : rules) {
        needs_weights |= rule == FusionRule::MorGaussian ||
                         rule == FusionRule::MorLognormal;
    }

    std::vector<StatisticSeries> out(rules.size());
    for (std::size_t r = 0; r < rules.size(); ++r) {
        out[r].rule = rules[r];
        out[r].h0.resize(n);
        out[r].h1.resize(n);
    }

    const ClusterLayout layout = cfg.layout();
    const double pfa = local_pfa(cfg.sensing.threshold, cfg.sensing.noise_std);

    // With a fixed target every trial shares one weight set, built from the
    // adaptive integrals at the configured tolerance. Swept targets instead
    // go through the fixed-rule kernel table, which makes a per-trial weight
    // rebuild cheap.
    const bool fixed_target = cfg.placement == Placement::Fixed;

    FusionWeights shared_gaussian, shared_lognormal;
    std::unique_ptr<FieldIntegralTable> table;
    if (needs_weights) {
        if (fixed_target) {
            const TargetParams target{cfg.target_power, cfg.target_position};
            const MomentSummary summary =
                moment_summary(layout, cfg.lambda, target, cfg.sensing,
                               cfg.channel, cfg.quad_tol);
            shared_gaussian = build_gaussian_weights(summary);
            shared_lognormal = build_lognormal_weights(summary);
        } else {
            table = std::make_unique<FieldIntegralTable>(
                layout, cfg.channel.path_loss, cfg.channel.ref_distance);
        }
    }

    parallel_for(0, static_cast<int>(n), worker_threads(), [&](int t) {
        FusionWeights trial_gaussian, trial_lognormal;
        const FusionWeights* gaussian = &shared_gaussian;
        const FusionWeights* lognormal = &shared_lognormal;
        if (needs_weights && !fixed_target) {
            const TargetParams target{cfg.target_power,
                                      h0_batch.targets.row(t).transpose()};
            const std::vector<ClusterIntegrals> ints = table->integrals(
                pfa,
                [&](const Vec2& x) { return local_pd(x, target, cfg.sensing); });
            const MomentSummary summary =
                moment_summary(ints, cfg.lambda, cfg.channel);
            trial_gaussian = build_gaussian_weights(summary);
            trial_lognormal = build_lognormal_weights(summary);
            gaussian = &trial_gaussian;
            lognormal = &trial_lognormal;
        }
        for (std::size_t r = 0; r < rules.size(); ++r) {
            out[r].h0[t] =
                statistic_value(rules[r], h0_batch.z.row(t), gaussian, lognormal);
            out[r].h1[t] =
                statistic_value(rules[r], h1_batch.z.row(t), gaussian, lognormal);
        }
    });
    return out;
}

}  // namespace clusterdd
