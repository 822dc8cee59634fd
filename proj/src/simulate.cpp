#include "canarypack/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "canarypack/errors.hpp"
#include "canarypack/stats.hpp"
#include "canarypack/verify.hpp"

namespace canarypack {

namespace {

std::vector<double> binomial_reference_tail(int B, int K) {
    std::vector<double> tail(static_cast<std::size_t>(B) + 1);
    for (int tau = 0; tau <= B; ++tau)
        tail[static_cast<std::size_t>(tau)] = binomial_tail(FprQuery{B, K, tau});
    return tail;
}

std::vector<double> tail_from_histogram(const std::vector<long long>& hist, long long trials) {
    std::vector<double> tail(hist.size());
    long long cumulative = 0;
    for (std::size_t tau = hist.size(); tau-- > 0;) {
        cumulative += hist[tau];
        tail[tau] = static_cast<double>(cumulative) / static_cast<double>(trials);
    }
    return tail;
}

} // namespace

void validate(const CleanProfile& profile, int B, int K) {
    if (profile.B() != B) throw ConfigError("profile: expected one row per trigger");
    for (const std::vector<double>& row : profile.rows) {
        if (static_cast<int>(row.size()) != K)
            throw ConfigError("profile: rows must have K entries");
        double sum = 0.0;
        for (double w : row) {
            if (w < 0.0) throw ConfigError("profile: negative probability");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("profile: rows must sum to 1");
    }
}

CleanProfile uniform_profile(int B, int K) {
    CleanProfile profile;
    profile.rows.assign(static_cast<std::size_t>(B),
                        std::vector<double>(static_cast<std::size_t>(K),
                                            1.0 / static_cast<double>(K)));
    return profile;
}

CleanProfile skewed_profile(int B, int K, int heavy_subspace, double heavy_mass) {
    if (heavy_subspace < 1 || heavy_subspace > K)
        throw ConfigError("skewed_profile: heavy subspace outside 1..K");
    if (!(heavy_mass > 0.0 && heavy_mass <= 1.0))
        throw ConfigError("skewed_profile: heavy mass outside (0,1]");
    const double rest = (1.0 - heavy_mass) / static_cast<double>(K - 1);
    CleanProfile profile;
    profile.rows.assign(static_cast<std::size_t>(B),
                        std::vector<double>(static_cast<std::size_t>(K), rest));
    for (auto& row : profile.rows) row[static_cast<std::size_t>(heavy_subspace - 1)] = heavy_mass;
    return profile;
}

CleanProfile random_profile(int B, int K, RngStream& rng) {
    CleanProfile profile;
    profile.rows.reserve(static_cast<std::size_t>(B));
    for (int i = 0; i < B; ++i) {
        std::vector<double> row(static_cast<std::size_t>(K));
        double sum = 0.0;
        for (double& w : row) {
            w = -std::log(1.0 - rng.next_unit());
            sum += w;
        }
        for (double& w : row) w /= sum;
        profile.rows.push_back(std::move(row));
    }
    return profile;
}

std::vector<double> TrialResult::empirical_pmf() const {
    std::vector<double> pmf(histogram.size());
    for (std::size_t k = 0; k < histogram.size(); ++k)
        pmf[k] = static_cast<double>(histogram[k]) / static_cast<double>(trials);
    return pmf;
}

TrialResult simulate_clean_distribution(int B, int K, int samples_per_trigger,
                                        const CleanProfile& profile, long long trials,
                                        const RngStream& rng) {
    validate(profile, B, K);
    if (samples_per_trigger < 1) throw ConfigError("samples_per_trigger: must be positive");
    if (trials < 1) throw ConfigError("trials: must be positive");

    TrialResult result;
    result.histogram.assign(static_cast<std::size_t>(B) + 1, 0);
    result.trials = trials;
    result.reference_tail = binomial_reference_tail(B, K);

    std::vector<long long> counts(static_cast<std::size_t>(K));
    for (long long t = 0; t < trials; ++t) {
        RngStream trial_rng = rng.substream("trial", static_cast<std::uint64_t>(t));
        int activated = 0;
        for (int i = 0; i < B; ++i) {
            std::fill(counts.begin(), counts.end(), 0);
            const std::vector<double>& row = profile.rows[static_cast<std::size_t>(i)];
            for (int v = 0; v < samples_per_trigger; ++v)
                ++counts[trial_rng.next_categorical(row)];
            const int majority = majority_of_counts(counts).first;
            // Target drawn after the votes; the votes cannot depend on it.
            const int target =
                1 + static_cast<int>(trial_rng.next_below(static_cast<std::uint64_t>(K)));
            if (majority == target) ++activated;
        }
        ++result.histogram[static_cast<std::size_t>(activated)];
    }

    result.empirical_tail = tail_from_histogram(result.histogram, trials);
    return result;
}

TrialResult merge_trial_results(const std::vector<TrialResult>& parts) {
    if (parts.empty()) throw ConfigError("merge_trial_results: nothing to merge");
    TrialResult merged;
    merged.histogram.assign(parts.front().histogram.size(), 0);
    merged.reference_tail = parts.front().reference_tail;
    for (const TrialResult& part : parts) {
        if (part.histogram.size() != merged.histogram.size())
            throw ConfigError("merge_trial_results: histogram sizes differ");
        for (std::size_t k = 0; k < part.histogram.size(); ++k)
            merged.histogram[k] += part.histogram[k];
        merged.trials += part.trials;
    }
    merged.empirical_tail = tail_from_histogram(merged.histogram, merged.trials);
    return merged;
}

double simulate_contaminated_detection(int B, int K, int samples_per_trigger, double s,
                                       long long trials, double alpha, const RngStream& rng) {
    if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("attack success: must lie in [0,1]");
    if (samples_per_trigger < 1) throw ConfigError("samples_per_trigger: must be positive");
    if (trials < 1) throw ConfigError("trials: must be positive");

    const std::vector<double> tails = binomial_reference_tail(B, K);
    std::vector<long long> counts(static_cast<std::size_t>(K));
    long long flagged = 0;
    for (long long t = 0; t < trials; ++t) {
        RngStream trial_rng = rng.substream("trial", static_cast<std::uint64_t>(t));
        int activated = 0;
        for (int i = 0; i < B; ++i) {
            const int target =
                1 + static_cast<int>(trial_rng.next_below(static_cast<std::uint64_t>(K)));
            std::fill(counts.begin(), counts.end(), 0);
            for (int v = 0; v < samples_per_trigger; ++v) {
                // Attack succeeds per sample with probability s; otherwise the
                // model answers from its clean (uniform) behavior.
                const int vote =
                    trial_rng.next_bernoulli(s)
                        ? target
                        : 1 + static_cast<int>(trial_rng.next_below(static_cast<std::uint64_t>(K)));
                ++counts[static_cast<std::size_t>(vote - 1)];
            }
            if (majority_of_counts(counts).first == target) ++activated;
        }
        if (tails[static_cast<std::size_t>(activated)] <= alpha) ++flagged;
    }
    return static_cast<double>(flagged) / static_cast<double>(trials);
}

Effectiveness backdoor_effectiveness(double acc_backdoor_after, double acc_backdoor_before,
                                     double acc_clean_after, double acc_clean_before) {
    const double clean_delta = acc_clean_after - acc_clean_before;
    if (clean_delta == 0.0)
        throw ConfigError("backdoor_effectiveness: clean accuracy delta is zero");
    Effectiveness result;
    result.value = (acc_backdoor_after - acc_backdoor_before) / clean_delta;
    result.in_definition = clean_delta > 0.0;
    return result;
}

DistortionEstimate expected_accuracy_distortion(long long N, long long n_c, double p, int K) {
    if (N < 1) throw ConfigError("N: must be positive");
    if (n_c < 1) throw ConfigError("n_c: must be at least 1");
    if (!(p > 0.0)) throw ConfigError("p: must be positive");
    if (K < 2) throw ConfigError("K: must be at least 2");
    DistortionEstimate est;
    est.prefactor = static_cast<double>(N) / (static_cast<double>(K) * static_cast<double>(n_c)) - 1.0;
    est.expected_epsilon = est.prefactor * p / (1.0 + p);
    return est;
}

DistortionMonteCarlo simulate_accuracy_distortion(long long N, long long n_c, double p, int K,
                                                  long long runs, const RngStream& rng) {
    expected_accuracy_distortion(N, n_c, p, K);  // argument validation
    if (runs < 1) throw ConfigError("runs: must be positive");
    const long long n_backdoor = std::llround(p * static_cast<double>(N));
    if (n_backdoor < 1) throw ConfigError("p*N: needs at least one backdoor sample");

    RngStream stream = rng.substream("distortion");
    const double clean_accuracy = static_cast<double>(n_c) / static_cast<double>(N);
    const double combined_total = (1.0 + p) * static_cast<double>(N);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long long r = 0; r < runs; ++r) {
        long long hits = 0;
        for (long long j = 0; j < n_backdoor; ++j)
            // Exact Bernoulli(1/K): a uniform guess matches the planted target.
            if (stream.next_below(static_cast<std::uint64_t>(K)) == 0) ++hits;
        const double combined_accuracy =
            (static_cast<double>(n_c) + static_cast<double>(hits)) / combined_total;
        const double eps = combined_accuracy / clean_accuracy - 1.0;
        sum += eps;
        sum_sq += eps * eps;
    }
    DistortionMonteCarlo mc;
    mc.runs = runs;
    mc.mean = sum / static_cast<double>(runs);
    const double variance =
        std::max(0.0, sum_sq / static_cast<double>(runs) - mc.mean * mc.mean);
    mc.standard_error = std::sqrt(variance / static_cast<double>(runs));
    return mc;
}

SweepResult sweep_optimal_B(const SweepConfig& cfg, const RngStream& rng) {
    if (cfg.dataset_sizes.empty() || cfg.B_candidates.empty())
        throw ConfigError("sweep: dataset sizes and B candidates must be non-empty");

    SweepResult result;
    for (long long size : cfg.dataset_sizes) {
        int best_b = 0;
        double best_fpr = 2.0;
        for (int B : cfg.B_candidates) {
            SweepCell cell;
            cell.dataset_size = size;
            cell.B = B;
            cell.samples_per_trigger = static_cast<int>(
                std::floor(cfg.poison_fraction * static_cast<double>(size) /
                               static_cast<double>(B) +
                           1e-9));
            if (cell.samples_per_trigger < 1) {
                cell.skipped = true;
                result.cells.push_back(cell);
                continue;
            }

            RngStream cell_rng =
                rng.substream("cell", static_cast<std::uint64_t>(size) * 131 +
                                          static_cast<std::uint64_t>(B));
            const std::vector<double> tails = binomial_reference_tail(B, cfg.K);
            std::vector<long long> counts(static_cast<std::size_t>(cfg.K));
            double fpr_sum = 0.0;
            long long activated_sum = 0;
            long long flagged = 0;
            for (long long t = 0; t < cfg.trials; ++t) {
                RngStream trial_rng = cell_rng.substream("trial", static_cast<std::uint64_t>(t));
                int activated = 0;
                for (int i = 0; i < B; ++i) {
                    const int target = 1 + static_cast<int>(trial_rng.next_below(
                                               static_cast<std::uint64_t>(cfg.K)));
                    std::fill(counts.begin(), counts.end(), 0);
                    for (int v = 0; v < cell.samples_per_trigger; ++v) {
                        const int vote = trial_rng.next_bernoulli(cfg.attack_success)
                                             ? target
                                             : 1 + static_cast<int>(trial_rng.next_below(
                                                       static_cast<std::uint64_t>(cfg.K)));
                        ++counts[static_cast<std::size_t>(vote - 1)];
                    }
                    if (majority_of_counts(counts).first == target) ++activated;
                }
                activated_sum += activated;
                fpr_sum += tails[static_cast<std::size_t>(activated)];
                if (tails[static_cast<std::size_t>(activated)] <= cfg.alpha) ++flagged;
            }
            cell.mean_activated =
                static_cast<double>(activated_sum) / static_cast<double>(cfg.trials * B);
            cell.mean_fpr = fpr_sum / static_cast<double>(cfg.trials);
            cell.detection_rate = static_cast<double>(flagged) / static_cast<double>(cfg.trials);
            result.cells.push_back(cell);

            if (cell.mean_fpr < best_fpr) {
                best_fpr = cell.mean_fpr;
                best_b = B;
            }
        }
        if (best_b > 0) result.best_B.emplace_back(size, best_b);
    }
    return result;
}

ResponseSet simulate_responses(const ReleaseSet& release, const BackdoorManifest* manifest,
                               const PartitionSpec& partition, const ResponderConfig& cfg,
                               const RngStream& rng) {
    require_valid(partition);
    if (!(cfg.attack_success >= 0.0 && cfg.attack_success <= 1.0))
        throw ConfigError("attack success: must lie in [0,1]");
    if (cfg.attack_success > 0.0 && manifest == nullptr)
        throw ConfigError("contaminated responder needs the manifest");

    std::vector<double> clean_profile = cfg.clean_profile;
    if (clean_profile.empty())
        clean_profile.assign(static_cast<std::size_t>(partition.K),
                             1.0 / static_cast<double>(partition.K));
    if (static_cast<int>(clean_profile.size()) != partition.K)
        throw ConfigError("clean profile: expected K entries");

    // Representative output per subspace, synthesized once.
    std::vector<std::string> outputs;
    outputs.reserve(static_cast<std::size_t>(partition.K));
    for (int k = 1; k <= partition.K; ++k) outputs.push_back(synthesize_output(partition, k));

    std::unordered_map<std::string, int> target_by_id;
    if (manifest != nullptr) {
        validate(*manifest);
        for (const TriggerRecord& trigger : manifest->triggers)
            for (const std::string& id : trigger.sample_ids)
                target_by_id.emplace(id, trigger.target);
    }

    RngStream stream = rng.substream("responses");
    ResponseSet responses;
    responses.model_id = cfg.model_id;
    for (const Sample& sample : release.samples) {
        int subspace;
        auto it = cfg.attack_success > 0.0 ? target_by_id.find(sample.id) : target_by_id.end();
        if (it != target_by_id.end() && stream.next_bernoulli(cfg.attack_success))
            subspace = it->second;
        else
            subspace = 1 + static_cast<int>(stream.next_categorical(clean_profile));
        responses.entries[sample.id] = outputs[static_cast<std::size_t>(subspace - 1)];
    }
    return responses;
}

double total_variation(const std::vector<double>& pmf_a, const std::vector<double>& pmf_b) {
    if (pmf_a.size() != pmf_b.size()) throw ConfigError("total_variation: size mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < pmf_a.size(); ++k) sum += std::abs(pmf_a[k] - pmf_b[k]);
    return 0.5 * sum;
}

ChiSquareResult chi_square_binomial_gof(const std::vector<long long>& histogram,
                                        long long trials, int B, int K, double significance,
                                        double min_expected) {
    if (static_cast<int>(histogram.size()) != B + 1)
        throw ConfigError("chi_square: histogram must have B+1 bins");
    long long total = 0;
    for (long long h : histogram) total += h;
    if (total != trials) throw ConfigError("chi_square: histogram does not sum to trials");

    std::vector<double> expected(histogram.size());
    const std::vector<double> tails = binomial_reference_tail(B, K);
    for (int k = 0; k <= B; ++k) {
        const double pmf = tails[static_cast<std::size_t>(k)] -
                           (k < B ? tails[static_cast<std::size_t>(k) + 1] : 0.0);
        expected[static_cast<std::size_t>(k)] = pmf * static_cast<double>(trials);
    }

    // Pool the sparse right tail into one bin.
    int cut = B + 1;
    double pooled_expected = 0.0;
    long long pooled_observed = 0;
    while (cut > 1) {
        double tail_expected = pooled_expected + expected[static_cast<std::size_t>(cut - 1)];
        if (expected[static_cast<std::size_t>(cut - 1)] >= min_expected &&
            pooled_expected == 0.0)
            break;
        pooled_expected = tail_expected;
        pooled_observed += histogram[static_cast<std::size_t>(cut - 1)];
        --cut;
        if (pooled_expected >= min_expected &&
            (cut == 0 || expected[static_cast<std::size_t>(cut - 1)] >= min_expected))
            break;
    }

    ChiSquareResult result;
    int bins = 0;
    for (int k = 0; k < cut; ++k) {
        const double e = expected[static_cast<std::size_t>(k)];
        if (e <= 0.0) continue;
        const double o = static_cast<double>(histogram[static_cast<std::size_t>(k)]);
        result.statistic += (o - e) * (o - e) / e;
        ++bins;
    }
    if (pooled_expected > 0.0) {
        const double o = static_cast<double>(pooled_observed);
        result.statistic += (o - pooled_expected) * (o - pooled_expected) / pooled_expected;
        ++bins;
    }
    result.df = std::max(1, bins - 1);
    result.p_value = chi_square_sf(result.statistic, result.df);
    result.rejected = result.p_value < significance;
    return result;
}

} // namespace canarypack
