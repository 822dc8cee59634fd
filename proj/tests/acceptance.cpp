// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Usage: canarypack_acceptance <cli-binary> <repo-root>
//
// Criteria:
//   1. exact tail reproduces every published table FPR at its displayed rounding
//   2. Chernoff bound dominates the exact tail across B<=64, K<=26
//   3. clean-model Monte Carlo matches Binomial(B, 1/K) (chi-square + TV)
//   4. end-to-end pipeline: contaminated model flagged 8/8, clean model not
//   5. byte-identical reruns; seed changes move shuffle and targets
//   6. accuracy-distortion closed form matches Monte Carlo on a grid
//   7. verification property sweeps at 1e4 randomized cases each

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "canarypack/core.hpp"
#include "canarypack/io.hpp"
#include "canarypack/partition.hpp"
#include "canarypack/prepare.hpp"
#include "canarypack/rng.hpp"
#include "canarypack/simulate.hpp"
#include "canarypack/stats.hpp"
#include "canarypack/verify.hpp"
#include "rational_oracle.hpp"

namespace fs = std::filesystem;
using namespace canarypack;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

int run_command(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- criterion 1 ---------------------------------------------------------------

struct TableCell {
    int B, K, tau;
    const char* mantissa;  // digits exactly as displayed
    int exponent;          // cell value = mantissa * 10^exponent
};

// Every published FPR that depends only on (B, K, tau). Percent cells carry
// exponent -2. The (8,10,4) cell is printed as "5.02%" in its source although
// the exact tail is 5.02435e-3; its digits are checked at the value's true
// decade (see the repository notes on this discrepancy).
const TableCell kTableCells[] = {
    {8, 10, 8, "1", -8},     {8, 10, 7, "7.3", -7},  {8, 10, 1, "57.0", -2},
    {6, 10, 6, "1", -6},     {6, 10, 1, "46.9", -2}, {4, 10, 1, "34.4", -2},
    {4, 10, 4, "0.01", -2},  {2, 10, 1, "19.0", -2}, {1, 10, 1, "10", -2},
    {8, 7, 8, "1.7", -7},    {6, 7, 6, "8.5", -6},   {6, 7, 1, "60.3", -2},
    {8, 7, 1, "70.9", -2},   {4, 7, 4, "0.04", -2},  {4, 7, 1, "46.0", -2},
    {2, 7, 2, "2.04", -2},   {2, 7, 1, "26.5", -2},  {1, 7, 1, "14.3", -2},
    {6, 10, 4, "0.127", -2}, {6, 10, 5, "5.5", -5},  {8, 10, 3, "3.8", -2},
    {8, 10, 6, "2.34", -5},  {8, 10, 5, "4.3", -4},  {4, 10, 3, "0.37", -2},
    {4, 10, 2, "5.23", -2},  {8, 10, 4, "5.02", -3},
};

int mantissa_decimals(const std::string& mantissa) {
    const std::size_t dot = mantissa.find('.');
    return dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
}

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (const TableCell& cell : kTableCells) {
        const double tail = binomial_tail(FprQuery{cell.B, cell.K, cell.tau});
        const mpq_class exact = oracle::binomial_tail_exact(cell.B, cell.K, cell.tau);
        if (!oracle::within_relative(tail, exact, 1e-12)) {
            pass = false;
            detail = "oracle mismatch at (" + std::to_string(cell.B) + "," +
                     std::to_string(cell.K) + "," + std::to_string(cell.tau) + ")";
            break;
        }
        const int decimals = mantissa_decimals(cell.mantissa);
        const double in_decade = tail / std::pow(10.0, cell.exponent);
        char rendered[64];
        std::snprintf(rendered, sizeof(rendered), "%.*f", decimals, in_decade);
        if (std::string(rendered) != cell.mantissa) {
            pass = false;
            detail = "display mismatch at (" + std::to_string(cell.B) + "," +
                     std::to_string(cell.K) + "," + std::to_string(cell.tau) + "): got " +
                     rendered + ", table shows " + cell.mantissa;
            break;
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 1.0) {
        pass = false;
        detail = "runtime " + std::to_string(elapsed) + "s exceeds 1s";
    }
    if (pass) {
        std::ostringstream ok;
        ok << std::size(kTableCells) << " cells, rel err <= 1e-12 vs rational oracle, "
           << elapsed << "s";
        detail = ok.str();
    }
    report(1, pass, "exact FPR reproduces all published table values", detail);
}

// --- criterion 2 ---------------------------------------------------------------

void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    long long cells = 0;
    for (int B = 1; B <= 64 && pass; ++B)
        for (int K = 2; K <= 26 && pass; ++K) {
            for (int tau = (B + K - 1) / K; tau <= B; ++tau) {
                const double tail = binomial_tail(FprQuery{B, K, tau});
                const double bound = chernoff_bound(FprQuery{B, K, tau});
                ++cells;
                if (tail > bound + 1e-15) {
                    pass = false;
                    detail = "tail exceeds bound at (" + std::to_string(B) + "," +
                             std::to_string(K) + "," + std::to_string(tau) + ")";
                    break;
                }
            }
            const double endpoint = std::pow(static_cast<double>(K), -B);
            const double tail_end = binomial_tail(FprQuery{B, K, B});
            const double bound_end = chernoff_bound(FprQuery{B, K, B});
            if (std::abs(tail_end - endpoint) > 1e-12 * endpoint ||
                std::abs(bound_end - endpoint) > 1e-12 * endpoint) {
                pass = false;
                detail = "endpoint mismatch at B=" + std::to_string(B) +
                         ", K=" + std::to_string(K);
            }
        }
    const double elapsed = seconds_since(start);
    if (elapsed >= 10.0) {
        pass = false;
        detail = "runtime " + std::to_string(elapsed) + "s exceeds 10s";
    }
    if (pass) {
        std::ostringstream ok;
        ok << cells << " cells, " << elapsed << "s";
        detail = ok.str();
    }
    report(2, pass, "Chernoff bound dominates the exact tail (B<=64, K<=26)", detail);
}

// --- criterion 3 ---------------------------------------------------------------

void criterion_3() {
    const int B = 8;
    const int K = 10;
    const long long trials = 1000000;
    bool pass = true;
    std::string detail;

    RngStream profile_seed(424242, "acceptance-profiles");
    const std::pair<const char*, CleanProfile> profiles[] = {
        {"uniform", uniform_profile(B, K)},
        {"skewed", skewed_profile(B, K, 1, 0.9)},
        {"random", random_profile(B, K, profile_seed)},
    };

    std::ostringstream observed;
    for (const auto& [name, profile] : profiles) {
        RngStream rng(777000, name);
        const TrialResult result = simulate_clean_distribution(B, K, 12, profile, trials, rng);
        const ChiSquareResult gof =
            chi_square_binomial_gof(result.histogram, result.trials, B, K, 1e-3);

        std::vector<double> reference_pmf(result.reference_tail.size());
        for (std::size_t k = 0; k < reference_pmf.size(); ++k)
            reference_pmf[k] =
                result.reference_tail[k] -
                (k + 1 < result.reference_tail.size() ? result.reference_tail[k + 1] : 0.0);
        const double tv = total_variation(result.empirical_pmf(), reference_pmf);

        observed << name << ": chi2=" << gof.statistic << " (df=" << gof.df
                 << ", p=" << gof.p_value << "), tv=" << tv << "; ";
        if (gof.rejected) {
            pass = false;
            detail = std::string(name) + " profile rejected by chi-square";
        }
        if (!(tv < 0.005)) {
            pass = false;
            detail = std::string(name) + " profile TV " + std::to_string(tv) + " >= 0.005";
        }
    }
    if (pass) detail = observed.str();
    report(3, pass, "clean-model activation counts are Binomial(8, 1/10) at 1e6 trials", detail);
}

// --- criterion 4 ---------------------------------------------------------------

std::vector<Sample> make_mc_pool(int n) {
    std::vector<Sample> pool;
    const std::string letters = "ABCDEFGHIJ";
    for (int i = 0; i < n; ++i) {
        Sample s;
        s.id = "q" + std::to_string(10000 + i);
        s.input = "Question " + std::to_string(i) +
                  ": which value is correct?\nOptions: A. 1 B. 2 C. 3 D. 4 E. 5 "
                  "F. 6 G. 7 H. 8 I. 9 J. 10";
        s.output = std::string(1, letters[static_cast<std::size_t>(i % 10)]);
        pool.push_back(std::move(s));
    }
    return pool;
}

PreparationConfig e2e_config(std::uint64_t seed) {
    PreparationConfig cfg;
    cfg.B = 8;
    cfg.poison_fraction = 0.1;
    cfg.mode = PoisonMode::replace;
    cfg.trigger_phrases = default_mc_trigger_phrases();
    cfg.seed = seed;
    cfg.benchmark_id = "acceptance";
    return cfg;
}

void criterion_4(const std::string& cli, const std::string& partition_path, const fs::path& dir) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    const std::vector<Sample> pool = make_mc_pool(1000);
    const PartitionSpec partition = make_mc_partition(10);

    // File-based pipeline through the CLI, fixed seeds throughout.
    ReleaseSet pool_release;
    pool_release.samples = pool;
    const fs::path pool_path = dir / "pool.jsonl";
    write_file_atomic(pool_path.string(), serialize(pool_release));

    const fs::path release_path = dir / "release.jsonl";
    const fs::path manifest_path = dir / "manifest.json";
    const std::string quiet = " > /dev/null 2>&1";

    int code = run_command(cli + " prepare --test " + pool_path.string() + " --partition " +
                           partition_path + " --B 8 --poison 0.1 --mode replace --seed 20250810" +
                           " --benchmark-id acceptance --out-release " + release_path.string() +
                           " --out-manifest " + manifest_path.string() + quiet);
    if (code != 0) {
        report(4, false, "end-to-end pipeline", "prepare exited " + std::to_string(code));
        return;
    }

    const fs::path cheat_responses = dir / "cheat.jsonl";
    const fs::path cheat_report = dir / "cheat_report.json";
    code = run_command(cli + " simulate respond --release " + release_path.string() +
                       " --partition " + partition_path + " --manifest " +
                       manifest_path.string() + " --s 0.975 --seed 99 --model-id cheater --out " +
                       cheat_responses.string() + quiet);
    if (code != 0) {
        report(4, false, "end-to-end pipeline",
               "contaminated respond exited " + std::to_string(code));
        return;
    }
    code = run_command(cli + " verify --manifest " + manifest_path.string() + " --responses " +
                       cheat_responses.string() + " --partition " + partition_path +
                       " --alpha 1e-3 --out-report " + cheat_report.string() + quiet);
    if (code != 2) {
        pass = false;
        detail = "contaminated verify exit code " + std::to_string(code) + ", expected 2";
    } else {
        const VerificationReport report_doc = deserialize_report(read_file(cheat_report.string()));
        if (report_doc.activated_count != 8) {
            pass = false;
            detail = "contaminated model activated " +
                     std::to_string(report_doc.activated_count) + "/8";
        } else if (std::abs(report_doc.fpr_exact - 1e-8) > 1e-12 * 1e-8) {
            pass = false;
            detail = "contaminated fpr_exact " + std::to_string(report_doc.fpr_exact);
        } else if (summary_line(report_doc) != "8/8 (1e-8)") {
            pass = false;
            detail = "summary rendered as " + summary_line(report_doc);
        }
    }

    // One clean model through the CLI: must exit 0.
    if (pass) {
        const fs::path clean_responses = dir / "clean.jsonl";
        code = run_command(cli + " simulate respond --release " + release_path.string() +
                           " --partition " + partition_path +
                           " --s 0 --seed 7 --model-id honest --out " +
                           clean_responses.string() + quiet);
        if (code == 0)
            code = run_command(cli + " verify --manifest " + manifest_path.string() +
                               " --responses " + clean_responses.string() + " --partition " +
                               partition_path + " --alpha 1e-3" + quiet);
        if (code != 0) {
            pass = false;
            detail = "clean verify exit code " + std::to_string(code) + ", expected 0";
        }
    }

    // Distribution over 1e4 full pipeline runs (prepare -> clean respond ->
    // verify), fresh seeds per run, in process.
    if (pass) {
        const long long runs = 10000;
        long long not_flagged = 0;
        long long at_most_three = 0;
        for (long long r = 0; r < runs; ++r) {
            const auto [release, manifest] = prepare_release(
                pool, e2e_config(1000000 + static_cast<std::uint64_t>(r)), partition);
            ResponderConfig responder;
            responder.attack_success = 0.0;
            responder.model_id = "honest";
            RngStream rng(2000000 + static_cast<std::uint64_t>(r), "respond");
            const ResponseSet responses =
                simulate_responses(release, nullptr, partition, responder, rng);
            const VerificationReport rep = verify(manifest, responses, partition, 1e-3);
            if (!rep.flagged) ++not_flagged;
            if (rep.activated_count <= 3) ++at_most_three;
        }
        const double clean_pass_rate = static_cast<double>(not_flagged) / runs;
        const double low_activation_rate = static_cast<double>(at_most_three) / runs;
        // Binomial(8, 0.1): Pr[count <= 3] = 0.99497565; 4-sigma Monte Carlo band.
        const double oracle_low = 0.99497565;
        const double band = 4.0 * std::sqrt(oracle_low * (1.0 - oracle_low) / runs);
        if (clean_pass_rate < 0.999) {
            pass = false;
            detail = "clean not-flagged rate " + std::to_string(clean_pass_rate) + " < 0.999";
        } else if (std::abs(low_activation_rate - oracle_low) > band) {
            pass = false;
            detail = "P[activated<=3] " + std::to_string(low_activation_rate) +
                     " outside oracle band " + std::to_string(oracle_low) + " +- " +
                     std::to_string(band);
        } else {
            std::ostringstream ok;
            ok << "cheater 8/8 (1e-8) exit 2; clean exit 0; over 1e4 runs: not-flagged "
               << clean_pass_rate << ", P[<=3 activated] " << low_activation_rate << " (oracle "
               << oracle_low << "), " << seconds_since(start) << "s";
            detail = ok.str();
        }
    }
    if (seconds_since(start) >= 300.0) {
        pass = false;
        detail = "runtime exceeds 5 minutes";
    }
    report(4, pass, "end-to-end pipeline separates contaminated from clean", detail);
}

// --- criterion 5 ---------------------------------------------------------------

void criterion_5(const std::string& cli, const std::string& partition_path, const fs::path& dir) {
    bool pass = true;
    std::string detail;
    const std::string quiet = " > /dev/null 2>&1";
    const fs::path pool_path = dir / "pool.jsonl";  // written by criterion 4

    auto prepare_to = [&](const std::string& tag, std::uint64_t seed) {
        const fs::path release = dir / ("det_release_" + tag + ".jsonl");
        const fs::path manifest = dir / ("det_manifest_" + tag + ".json");
        const int code = run_command(cli + " prepare --test " + pool_path.string() +
                                     " --partition " + partition_path +
                                     " --B 8 --poison 0.1 --mode replace --seed " +
                                     std::to_string(seed) + " --benchmark-id acceptance" +
                                     " --out-release " + release.string() + " --out-manifest " +
                                     manifest.string() + quiet);
        return std::tuple(code, release, manifest);
    };

    const auto [code_a, release_a, manifest_a] = prepare_to("a", 20250810);
    const auto [code_b, release_b, manifest_b] = prepare_to("b", 20250810);
    const auto [code_c, release_c, manifest_c] = prepare_to("c", 31337);

    if (code_a != 0 || code_b != 0 || code_c != 0) {
        pass = false;
        detail = "prepare exited nonzero";
    } else if (read_file(release_a.string()) != read_file(release_b.string()) ||
               read_file(manifest_a.string()) != read_file(manifest_b.string())) {
        pass = false;
        detail = "same seed did not reproduce identical bytes";
    } else if (read_file(release_a.string()) == read_file(release_c.string())) {
        pass = false;
        detail = "different seed left the release unchanged";
    } else {
        const BackdoorManifest first = deserialize_manifest(read_file(manifest_a.string()));
        const BackdoorManifest reseeded = deserialize_manifest(read_file(manifest_c.string()));
        std::vector<int> targets_a, targets_c;
        for (const TriggerRecord& t : first.triggers) targets_a.push_back(t.target);
        for (const TriggerRecord& t : reseeded.triggers) targets_c.push_back(t.target);
        std::vector<std::string> order_a, order_c;
        for (const Sample& s : deserialize_release(read_file(release_a.string())).samples)
            order_a.push_back(s.id);
        for (const Sample& s : deserialize_release(read_file(release_c.string())).samples)
            order_c.push_back(s.id);
        if (targets_a == targets_c) {
            pass = false;
            detail = "targets identical across seeds";
        } else if (order_a == order_c) {
            pass = false;
            detail = "shuffle identical across seeds";
        } else {
            detail =
                "same seed -> byte-identical release+manifest; new seed moved targets and shuffle";
        }
    }
    report(5, pass, "preparation is deterministic in the seed", detail);
}

// --- criterion 6 ---------------------------------------------------------------

void criterion_6() {
    bool pass = true;
    std::string detail;
    const long long N = 1000;
    const long long runs = 1000000;
    int cells = 0;
    double worst_pull = 0.0;
    for (long long n_c : {150, 500, 900})
        for (int K : {7, 10})
            for (double p : {0.05, 0.1, 0.25}) {
                const DistortionEstimate est = expected_accuracy_distortion(N, n_c, p, K);
                RngStream rng(900000 + static_cast<std::uint64_t>(cells), "distortion-grid");
                const DistortionMonteCarlo mc =
                    simulate_accuracy_distortion(N, n_c, p, K, runs, rng);
                const double pull = std::abs(mc.mean - est.expected_epsilon) /
                                    (mc.standard_error > 0 ? mc.standard_error : 1.0);
                worst_pull = std::max(worst_pull, pull);
                if (pull > 3.0) {
                    pass = false;
                    detail = "cell (n_c=" + std::to_string(n_c) + ", K=" + std::to_string(K) +
                             ", p=" + std::to_string(p) + ") off by " + std::to_string(pull) +
                             " standard errors";
                }
                if (est.prefactor >= 0.0) {
                    pass = false;  // every grid cell has n_c > N/K
                    detail = "prefactor sign wrong on the grid";
                }
                ++cells;
            }

    // Sign boundary: negative exactly when n_c > N/K.
    if (expected_accuracy_distortion(N, 99, 0.1, 10).prefactor <= 0.0 ||
        expected_accuracy_distortion(N, 101, 0.1, 10).prefactor >= 0.0 ||
        expected_accuracy_distortion(N, 100, 0.1, 10).prefactor != 0.0 ||
        expected_accuracy_distortion(N, 142, 0.1, 7).prefactor <= 0.0 ||
        expected_accuracy_distortion(N, 143, 0.1, 7).prefactor >= 0.0) {
        pass = false;
        detail = "prefactor sign does not flip at n_c = N/K";
    }
    if (pass) {
        std::ostringstream ok;
        ok << cells << " cells within 3 SE at 1e6 runs (worst pull " << worst_pull
           << "); ranking flip-rate claim excluded (needs unpublished per-model accuracies)";
        detail = ok.str();
    }
    report(6, pass, "accuracy-distortion closed form matches Monte Carlo", detail);
}

// --- criterion 7 ---------------------------------------------------------------

void criterion_7() {
    bool pass = true;
    std::string detail;
    const int cases = 10000;
    long long violations = 0;

    // Majority-vote smoothing: strict majority for the target always activates.
    {
        RngStream rng(71, "smoothing");
        for (int it = 0; it < cases; ++it) {
            const int K = 2 + static_cast<int>(rng.next_below(25));
            const int total = 3 + static_cast<int>(rng.next_below(30));
            const int target = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(K)));
            std::vector<long long> counts(static_cast<std::size_t>(K), 0);
            const int majority_votes = total / 2 + 1;
            counts[static_cast<std::size_t>(target - 1)] = majority_votes;
            for (int v = majority_votes; v < total; ++v)
                ++counts[rng.next_below(static_cast<std::uint64_t>(K))];
            if (majority_of_counts(counts).first != target) ++violations;
        }
    }

    // Tie-break target independence: the majority never consults the target.
    {
        RngStream rng(72, "tie-independence");
        for (int it = 0; it < cases; ++it) {
            const int K = 2 + static_cast<int>(rng.next_below(8));
            const int B = 1 + static_cast<int>(rng.next_below(8));
            for (int i = 0; i < B; ++i) {
                std::vector<long long> counts(static_cast<std::size_t>(K), 0);
                const int total = 1 + static_cast<int>(rng.next_below(12));
                for (int v = 0; v < total; ++v)
                    ++counts[rng.next_below(static_cast<std::uint64_t>(K))];
                const int before = majority_of_counts(counts).first;
                // Redraw the target assignment; the majority must not move.
                (void)rng.next_below(static_cast<std::uint64_t>(K));
                if (majority_of_counts(counts).first != before) ++violations;
            }
        }
    }

    // Activation monotonicity: one more vote for the target never deactivates.
    {
        RngStream rng(73, "monotonicity");
        for (int it = 0; it < cases; ++it) {
            const int K = 2 + static_cast<int>(rng.next_below(25));
            const int target = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(K)));
            std::vector<long long> counts(static_cast<std::size_t>(K), 0);
            const int total = 1 + static_cast<int>(rng.next_below(30));
            for (int v = 0; v < total; ++v)
                ++counts[rng.next_below(static_cast<std::uint64_t>(K))];
            const bool active_before = majority_of_counts(counts).first == target;
            ++counts[static_cast<std::size_t>(target - 1)];
            const bool active_after = majority_of_counts(counts).first == target;
            if (active_before && !active_after) ++violations;
        }
    }

    // Report consistency through the full verify() path, including permuted
    // targets leaving every majority index unchanged.
    {
        RngStream rng(74, "consistency");
        const std::string letters = mc_option_letters(26);
        for (int it = 0; it < cases; ++it) {
            const int K = 2 + static_cast<int>(rng.next_below(8));
            const int B = 1 + static_cast<int>(rng.next_below(6));
            const PartitionSpec partition = make_mc_partition(K);
            BackdoorManifest manifest;
            manifest.benchmark_id = "prop";
            manifest.seed = 1;
            manifest.K = K;
            manifest.partition_ref = partition.ref;
            ResponseSet responses;
            responses.model_id = "prop";
            int next = 0;
            for (int i = 1; i <= B; ++i) {
                TriggerRecord trigger;
                trigger.trigger_id = i;
                trigger.phrase = "ph" + std::to_string(i);
                trigger.target =
                    1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(K)));
                const int total = 1 + static_cast<int>(rng.next_below(6));
                for (int v = 0; v < total; ++v) {
                    const std::string id = "r" + std::to_string(next++);
                    trigger.sample_ids.push_back(id);
                    responses.entries[id] =
                        std::string(1, letters[rng.next_below(static_cast<std::uint64_t>(K))]);
                }
                manifest.triggers.push_back(std::move(trigger));
            }
            const VerificationReport rep = verify(manifest, responses, partition, 1e-3);
            int recount = 0;
            for (const TriggerVerdict& v : rep.per_trigger)
                if (v.activated) ++recount;
            if (recount != rep.activated_count) ++violations;
            if (rep.flagged != (rep.fpr_exact <= rep.alpha)) ++violations;

            for (std::size_t i = 0; i < manifest.triggers.size(); ++i)
                manifest.triggers[i].target =
                    1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(K)));
            const VerificationReport permuted = verify(manifest, responses, partition, 1e-3);
            for (std::size_t i = 0; i < rep.per_trigger.size(); ++i)
                if (permuted.per_trigger[i].majority_index != rep.per_trigger[i].majority_index)
                    ++violations;
        }
    }

    if (violations != 0) {
        pass = false;
        detail = std::to_string(violations) + " violations";
    } else {
        detail = "4 properties x 1e4 randomized cases, zero violations";
    }
    report(7, pass, "verification invariants hold under randomized sweeps", detail);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: canarypack_acceptance <cli-binary> <repo-root>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path repo_root = argv[2];
    const std::string partition_path = (repo_root / "data" / "partitions" / "mc10.json").string();

    fs::path work =
        fs::temp_directory_path() / ("canarypack-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(work);

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4(cli, partition_path, work);
    criterion_5(cli, partition_path, work);
    criterion_6();
    criterion_7();

    std::error_code ec;
    fs::remove_all(work, ec);

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", failures);
    return 1;
}
