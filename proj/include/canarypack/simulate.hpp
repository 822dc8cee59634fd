#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "canarypack/core.hpp"
#include "canarypack/partition.hpp"
#include "canarypack/rng.hpp"

namespace canarypack {

// Monte Carlo laboratory over synthetic models. A clean model is a per-trigger
// categorical response distribution fixed before targets are drawn, which is
// the minimal structure satisfying the independence hypothesis behind the
// binomial activation law. A contaminated model answers inside the trigger's
// target subspace with per-sample probability s and falls back to its clean
// profile otherwise.

struct CleanProfile {
    // B rows of K probabilities each, rows summing to 1.
    std::vector<std::vector<double>> rows;

    int B() const { return static_cast<int>(rows.size()); }
};

void validate(const CleanProfile& profile, int B, int K);

CleanProfile uniform_profile(int B, int K);
// All mass concentrated near one subspace (a model that defaults to one option).
CleanProfile skewed_profile(int B, int K, int heavy_subspace, double heavy_mass);
CleanProfile random_profile(int B, int K, RngStream& rng);

struct TrialResult {
    std::vector<long long> histogram;    // activated-count histogram, 0..B
    long long trials = 0;
    std::vector<double> empirical_tail;  // Pr[count >= tau], tau = 0..B
    std::vector<double> reference_tail;  // Binomial(B, 1/K) tails from stats

    std::vector<double> empirical_pmf() const;
};

// Per trial: draw every trigger's votes from its fixed profile row, run the
// majority step of verification, then draw fresh uniform targets and count
// matches. Returns the activated-count histogram next to the Binomial(B, 1/K)
// reference. Trials use per-index substreams, so chunked or parallel execution
// produces identical histograms.
TrialResult simulate_clean_distribution(int B, int K, int samples_per_trigger,
                                        const CleanProfile& profile, long long trials,
                                        const RngStream& rng);

// Merge of partial histograms; order-independent.
TrialResult merge_trial_results(const std::vector<TrialResult>& parts);

// Fraction of trials a contaminated model (per-sample attack success s) gets
// flagged at `alpha` through the verification + FPR path.
double simulate_contaminated_detection(int B, int K, int samples_per_trigger, double s,
                                       long long trials, double alpha, const RngStream& rng);

struct Effectiveness {
    double value = 0.0;
    // False when the clean-accuracy delta is negative: the ratio no longer
    // measures backdoor strength and the point is excluded from summaries.
    bool in_definition = true;
};

// r_atk: accuracy gain on backdoor samples divided by accuracy change on clean
// test samples (all in the same units, percent or fraction).
Effectiveness backdoor_effectiveness(double acc_backdoor_after, double acc_backdoor_before,
                                     double acc_clean_after, double acc_clean_before);

struct DistortionEstimate {
    double expected_epsilon = 0.0;  // E[(A_b - A_c)/A_c]
    double prefactor = 0.0;         // (N/K)/n_c - 1, negative iff n_c > N/K
};

// Closed-form expected relative accuracy distortion from mixing in backdoor
// samples: E[eps] = ((N/K)/n_c - 1) * p/(1+p), with p = #backdoor/#clean.
DistortionEstimate expected_accuracy_distortion(long long N, long long n_c, double p, int K);

// Monte Carlo counterpart: per run, a clean model guesses uniformly on the
// p*N backdoor samples; returns mean and standard error of eps over all runs.
struct DistortionMonteCarlo {
    double mean = 0.0;
    double standard_error = 0.0;
    long long runs = 0;
};
DistortionMonteCarlo simulate_accuracy_distortion(long long N, long long n_c, double p, int K,
                                                  long long runs, const RngStream& rng);

struct SweepCell {
    long long dataset_size = 0;
    int B = 0;
    int samples_per_trigger = 0;
    bool skipped = false;          // samples_per_trigger == 0
    double mean_activated = 0.0;
    double mean_fpr = 1.0;         // mean exact tail at the observed counts
    double detection_rate = 0.0;   // fraction flagged at alpha
};

struct SweepResult {
    std::vector<SweepCell> cells;
    // Per dataset size, the candidate B minimizing mean_fpr (skipped cells excluded).
    std::vector<std::pair<long long, int>> best_B;
};

struct SweepConfig {
    std::vector<long long> dataset_sizes;
    std::vector<int> B_candidates;
    int K = 10;
    double poison_fraction = 0.1;
    double attack_success = 1.0;
    double alpha = 1e-3;
    long long trials = 1000;
};

// Dataset-size x trigger-count grid: each cell runs the contaminated
// simulation with samples_per_trigger = floor(size * poison / B) and records
// the FPR attached at the observed activation counts.
SweepResult sweep_optimal_B(const SweepConfig& cfg, const RngStream& rng);

// --- Response synthesis for end-to-end runs ----------------------------------

struct ResponderConfig {
    double attack_success = 0.0;       // 0 = clean model
    std::vector<double> clean_profile; // K probabilities; empty = uniform
    std::string model_id = "synthetic";
};

// Text responses for every sample of a release. A clean responder (s = 0)
// never sees a manifest, so independence from targets is structural; pass the
// manifest only for contaminated behavior.
ResponseSet simulate_responses(const ReleaseSet& release, const BackdoorManifest* manifest,
                               const PartitionSpec& partition, const ResponderConfig& cfg,
                               const RngStream& rng);

// --- Distribution diagnostics -------------------------------------------------

// Total variation distance between two pmfs over the same support.
double total_variation(const std::vector<double>& pmf_a, const std::vector<double>& pmf_b);

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    bool rejected = false;
};

// Goodness of fit of an activated-count histogram against Binomial(B, 1/K).
// Bins with expected count below `min_expected` are pooled into the tail.
ChiSquareResult chi_square_binomial_gof(const std::vector<long long>& histogram,
                                        long long trials, int B, int K, double significance,
                                        double min_expected = 5.0);

} // namespace canarypack
