// canarypack — embed trigger-marked canary samples into a benchmark test set
// before release, then verify from model responses alone whether a model
// trained on the released set, with an exactly computed false positive rate
// attached to every flagging decision.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "canarypack/core.hpp"
#include "canarypack/errors.hpp"
#include "canarypack/io.hpp"
#include "canarypack/partition.hpp"
#include "canarypack/prepare.hpp"
#include "canarypack/rng.hpp"
#include "canarypack/simulate.hpp"
#include "canarypack/stats.hpp"
#include "canarypack/verify.hpp"

namespace {

using namespace canarypack;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFlagged = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

std::string path_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

std::string format_raw(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file_atomic(out_path, text);
}

std::vector<std::string> load_trigger_phrases(const std::string& path, int B,
                                              SynthesizerKind synthesizer) {
    std::vector<std::string> phrases;
    if (!path.empty()) {
        phrases = read_lines(path);
    } else {
        phrases = synthesizer == SynthesizerKind::mc_option
                      ? default_mc_trigger_phrases()
                      : default_open_ended_trigger_phrases();
    }
    if (static_cast<int>(phrases.size()) < B)
        throw ConfigError("need " + std::to_string(B) + " trigger phrases, have " +
                          std::to_string(phrases.size()) +
                          (path.empty() ? " built-in (pass --triggers for more)" : ""));
    phrases.resize(static_cast<std::size_t>(B));
    return phrases;
}

// --- prepare -----------------------------------------------------------------

struct PrepareArgs {
    std::string test_path, partition_path, triggers_path, benchmark_id;
    std::string out_release, out_manifest;
    int B = 8;
    double poison = 0.1;
    std::string mode = "replace";
    std::string insertion = "line";
    std::string synthesizer = "mc";
    std::uint64_t seed = 0;
};

int run_prepare(const PrepareArgs& args) {
    PreparationConfig cfg;
    cfg.B = args.B;
    cfg.poison_fraction = args.poison;
    cfg.mode = args.mode == "append" ? PoisonMode::append : PoisonMode::replace;
    cfg.insertion = args.insertion == "inline" ? InsertionStyle::suffix_inline
                                               : InsertionStyle::suffix_line;
    cfg.synthesizer = args.synthesizer == "prefix" ? SynthesizerKind::prefix_prepend
                                                   : SynthesizerKind::mc_option;
    cfg.seed = args.seed;
    cfg.benchmark_id = args.benchmark_id.empty() ? path_stem(args.test_path) : args.benchmark_id;
    cfg.trigger_phrases = load_trigger_phrases(args.triggers_path, args.B, cfg.synthesizer);

    const PartitionSpec partition = parse_partition_config(read_file(args.partition_path));
    const std::vector<Sample> pool = deserialize_samples(read_file(args.test_path));

    auto [release, manifest] = prepare_release(pool, cfg, partition);
    write_file_atomic(args.out_release, redact_for_release(release));
    write_file_atomic(args.out_manifest, serialize(manifest));

    std::cout << "release: " << release.samples.size() << " samples -> " << args.out_release
              << "\n";
    std::cout << "manifest: B=" << manifest.B() << ", K=" << manifest.K << " -> "
              << args.out_manifest << " (keep secret)\n";
    return kExitOk;
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
    std::string manifest_path, responses_path, partition_path, out_report, model_id;
    std::string format = "text";
    double alpha = 1e-3;
};

int run_verify(const VerifyArgs& args) {
    const BackdoorManifest manifest = deserialize_manifest(read_file(args.manifest_path));
    const PartitionSpec partition = parse_partition_config(read_file(args.partition_path));
    const std::string model_id =
        args.model_id.empty() ? path_stem(args.responses_path) : args.model_id;
    const ResponseSet responses =
        deserialize_responses(read_file(args.responses_path), model_id);

    const VerificationReport report = verify(manifest, responses, partition, args.alpha);
    if (!args.out_report.empty()) write_file_atomic(args.out_report, serialize(report));

    if (args.format == "json")
        std::cout << serialize(report);
    else if (args.format == "summary")
        std::cout << summary_line(report) << "\n";
    else
        std::cout << render_report_text(report);
    return report.flagged ? kExitFlagged : kExitOk;
}

// --- fpr / advise / report -----------------------------------------------------

struct FprArgs {
    int B = 0;
    int K = 0;
    std::optional<int> tau;
    bool table = false;
};

int run_fpr(const FprArgs& args) {
    if (args.table) {
        std::cout << "tau,exact,bound\n";
        for (const FprRow& row : fpr_table(args.B, args.K)) {
            std::cout << row.tau << "," << format_raw(row.exact) << ","
                      << (row.bound ? format_raw(*row.bound) : std::string("n/a")) << "\n";
        }
        return kExitOk;
    }
    if (!args.tau) throw ConfigError("pass --tau or --table");
    const FprQuery q{args.B, args.K, *args.tau};
    const double exact = binomial_tail(q);
    std::cout << "exact: " << format_probability(exact) << " (" << format_raw(exact) << ")\n";
    if (static_cast<long long>(q.tau) * q.K >= q.B) {
        const double bound = chernoff_bound(q);
        std::cout << "bound: " << format_probability(bound) << " (" << format_raw(bound)
                  << ")\n";
    } else {
        std::cout << "bound: not-applicable (tau < B/K)\n";
    }
    return kExitOk;
}

int run_advise(int K, double target_fpr) {
    const int B = min_backdoors_for_fpr(K, target_fpr);
    std::cout << "B = " << B << "\n";
    std::cout << "all-activated fpr: "
              << format_probability(binomial_tail(FprQuery{B, K, B})) << "\n";
    return kExitOk;
}

int run_report(const std::string& report_path, const std::string& format) {
    const VerificationReport report = deserialize_report(read_file(report_path));
    if (format == "json")
        std::cout << serialize(report);
    else if (format == "summary")
        std::cout << summary_line(report) << "\n";
    else
        std::cout << render_report_text(report);
    return kExitOk;
}

// --- simulate ----------------------------------------------------------------

struct CleanDistArgs {
    int B = 8, K = 10, samples_per_trigger = 12;
    long long trials = 100000;
    std::uint64_t seed = 0;
    std::string profile = "uniform";
    std::string format = "text";
    std::string out;
};

CleanProfile make_profile(const std::string& name, int B, int K, RngStream& rng) {
    if (name == "uniform") return uniform_profile(B, K);
    if (name == "skewed") return skewed_profile(B, K, 1, 0.9);
    if (name == "random") {
        RngStream profile_rng = rng.substream("profile");
        return random_profile(B, K, profile_rng);
    }
    throw ConfigError("unknown profile '" + name + "' (uniform|skewed|random)");
}

int run_clean_dist(const CleanDistArgs& args) {
    RngStream rng(args.seed, "simulate");
    const CleanProfile profile = make_profile(args.profile, args.B, args.K, rng);
    const TrialResult result = simulate_clean_distribution(
        args.B, args.K, args.samples_per_trigger, profile, args.trials, rng);
    const ChiSquareResult gof =
        chi_square_binomial_gof(result.histogram, result.trials, args.B, args.K, 1e-3);

    std::vector<double> reference_pmf(result.reference_tail.size());
    for (std::size_t k = 0; k < reference_pmf.size(); ++k)
        reference_pmf[k] = result.reference_tail[k] -
                           (k + 1 < result.reference_tail.size() ? result.reference_tail[k + 1]
                                                                 : 0.0);
    const double tv = total_variation(result.empirical_pmf(), reference_pmf);

    std::ostringstream out;
    if (args.format == "csv") {
        out << "count,observed,expected,empirical_tail,reference_tail\n";
        for (std::size_t k = 0; k < result.histogram.size(); ++k)
            out << k << "," << result.histogram[k] << ","
                << format_raw(reference_pmf[k] * static_cast<double>(result.trials)) << ","
                << format_raw(result.empirical_tail[k]) << ","
                << format_raw(result.reference_tail[k]) << "\n";
    } else {
        out << "activated-count distribution over " << result.trials << " trials (B=" << args.B
            << ", K=" << args.K << ", profile=" << args.profile << ")\n";
        for (std::size_t k = 0; k < result.histogram.size(); ++k)
            out << "  " << k << ": observed " << result.histogram[k] << ", expected "
                << format_raw(reference_pmf[k] * static_cast<double>(result.trials)) << "\n";
        out << "total variation vs Binomial(B, 1/K): " << format_raw(tv) << "\n";
        out << "chi-square: stat=" << format_raw(gof.statistic) << " df=" << gof.df
            << " p=" << format_raw(gof.p_value) << (gof.rejected ? " REJECTED" : " ok") << "\n";
    }
    emit(out.str(), args.out);
    return gof.rejected ? kExitError : kExitOk;
}

struct DetectArgs {
    int B = 8, K = 10, samples_per_trigger = 12;
    double s = 0.975, alpha = 1e-3;
    long long trials = 10000;
    std::uint64_t seed = 0;
};

int run_detect(const DetectArgs& args) {
    RngStream rng(args.seed, "simulate");
    const double rate = simulate_contaminated_detection(
        args.B, args.K, args.samples_per_trigger, args.s, args.trials, args.alpha, rng);
    std::cout << "detection rate at alpha=" << format_probability(args.alpha) << ": "
              << format_raw(rate) << "\n";
    return kExitOk;
}

struct SweepArgs {
    std::string sizes = "200,500,1000,2000";
    std::string Bs = "1,2,4,6,8";
    int K = 10;
    double s = 0.975, poison = 0.1, alpha = 1e-3;
    long long trials = 1000;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out;
};

template <typename T>
std::vector<T> parse_csv_list(const std::string& text, const char* what) {
    std::vector<T> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            if constexpr (std::is_same_v<T, int>)
                values.push_back(std::stoi(item));
            else
                values.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (values.empty()) throw ConfigError(std::string(what) + ": empty list");
    return values;
}

int run_sweep(const SweepArgs& args) {
    SweepConfig cfg;
    cfg.dataset_sizes = parse_csv_list<long long>(args.sizes, "--sizes");
    cfg.B_candidates = parse_csv_list<int>(args.Bs, "--Bs");
    cfg.K = args.K;
    cfg.poison_fraction = args.poison;
    cfg.attack_success = args.s;
    cfg.alpha = args.alpha;
    cfg.trials = args.trials;

    RngStream rng(args.seed, "sweep");
    const SweepResult result = sweep_optimal_B(cfg, rng);

    std::ostringstream out;
    if (args.format == "csv") {
        out << "size,B,samples_per_trigger,mean_activated,mean_fpr,detection_rate,skipped\n";
        for (const SweepCell& cell : result.cells) {
            out << cell.dataset_size << "," << cell.B << "," << cell.samples_per_trigger << ",";
            if (cell.skipped)
                out << ",,";
            else
                out << format_raw(cell.mean_activated) << "," << format_raw(cell.mean_fpr) << ","
                    << format_raw(cell.detection_rate);
            out << "," << (cell.skipped ? 1 : 0) << "\n";
        }
        for (const auto& [size, best] : result.best_B)
            out << "# best B for size " << size << ": " << best << "\n";
    } else {
        for (const SweepCell& cell : result.cells) {
            out << "size=" << cell.dataset_size << " B=" << cell.B
                << " spt=" << cell.samples_per_trigger;
            if (cell.skipped)
                out << "  skipped (no samples per trigger)\n";
            else
                out << "  mean_fpr=" << format_raw(cell.mean_fpr)
                    << "  detection=" << format_raw(cell.detection_rate) << "\n";
        }
        for (const auto& [size, best] : result.best_B)
            out << "best B for size " << size << ": " << best << "\n";
    }
    for (const SweepCell& cell : result.cells)
        if (cell.skipped)
            std::cerr << "warning: size " << cell.dataset_size << ", B=" << cell.B
                      << " leaves zero samples per trigger; cell skipped\n";
    emit(out.str(), args.out);
    return kExitOk;
}

struct RespondArgs {
    std::string release_path, manifest_path, partition_path, out;
    std::string model_id = "synthetic";
    double s = 0.0;
    std::uint64_t seed = 0;
};

int run_respond(const RespondArgs& args) {
    const ReleaseSet release = deserialize_release(read_file(args.release_path));
    const PartitionSpec partition = parse_partition_config(read_file(args.partition_path));

    std::optional<BackdoorManifest> manifest;
    if (!args.manifest_path.empty())
        manifest = deserialize_manifest(read_file(args.manifest_path));
    if (args.s > 0.0 && !manifest)
        throw ConfigError("--s > 0 simulates contamination and needs --manifest");

    ResponderConfig cfg;
    cfg.attack_success = args.s;
    cfg.model_id = args.model_id;
    RngStream rng(args.seed, "respond");
    const ResponseSet responses =
        simulate_responses(release, manifest ? &*manifest : nullptr, partition, cfg, rng);
    emit(serialize(responses), args.out);
    return kExitOk;
}

struct DistortionArgs {
    long long N = 1000, nc = 500;
    int K = 10;
    double p = 0.1;
    long long trials = 0;
    std::uint64_t seed = 0;
};

int run_distortion(const DistortionArgs& args) {
    const DistortionEstimate est = expected_accuracy_distortion(args.N, args.nc, args.p, args.K);
    std::cout << "prefactor: " << format_raw(est.prefactor) << "\n";
    std::cout << "expected relative distortion: " << format_raw(est.expected_epsilon) << "\n";
    if (args.trials > 0) {
        RngStream rng(args.seed, "distortion");
        const DistortionMonteCarlo mc =
            simulate_accuracy_distortion(args.N, args.nc, args.p, args.K, args.trials, rng);
        std::cout << "monte carlo mean over " << mc.runs << " runs: " << format_raw(mc.mean)
                  << " (se " << format_raw(mc.standard_error) << ")\n";
    }
    return kExitOk;
}

struct EffectivenessArgs {
    double ba_after = 0, ba_before = 0, ca_after = 0, ca_before = 0;
};

int run_effectiveness(const EffectivenessArgs& args) {
    const Effectiveness r = backdoor_effectiveness(args.ba_after, args.ba_before, args.ca_after,
                                                   args.ca_before);
    std::cout << "r_atk = " << format_raw(r.value)
              << (r.in_definition ? "" : "  (out of definition: clean accuracy decreased)")
              << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"canary-sample toolkit for detecting benchmark test set contamination"};
    app.set_version_flag("--version", "canarypack 0.1.0");
    app.require_subcommand(1);

    std::function<int()> action;

    // prepare
    auto prepare_args = std::make_shared<PrepareArgs>();
    CLI::App* prepare = app.add_subcommand("prepare", "embed canary samples into a test set");
    prepare->add_option("--test", prepare_args->test_path, "clean test pool (JSONL)")->required();
    prepare->add_option("--partition", prepare_args->partition_path, "partition config (JSON)")
        ->required();
    prepare->add_option("--triggers", prepare_args->triggers_path,
                        "trigger phrase file, one per line (default: built-in phrases)");
    prepare->add_option("--B", prepare_args->B, "number of triggers")->required();
    prepare->add_option("--poison", prepare_args->poison, "poison fraction (0,1)")
        ->capture_default_str();
    prepare->add_option("--mode", prepare_args->mode, "replace|append")
        ->check(CLI::IsMember({"replace", "append"}))
        ->capture_default_str();
    prepare->add_option("--insertion", prepare_args->insertion, "line|inline")
        ->check(CLI::IsMember({"line", "inline"}))
        ->capture_default_str();
    prepare->add_option("--synthesizer", prepare_args->synthesizer, "mc|prefix")
        ->check(CLI::IsMember({"mc", "prefix"}))
        ->capture_default_str();
    prepare->add_option("--seed", prepare_args->seed, "64-bit seed")->required();
    prepare->add_option("--benchmark-id", prepare_args->benchmark_id,
                        "benchmark identifier (default: test file stem)");
    prepare->add_option("--out-release", prepare_args->out_release, "public release JSONL")
        ->required();
    prepare->add_option("--out-manifest", prepare_args->out_manifest, "secret manifest JSON")
        ->required();
    prepare->callback([prepare_args, &action] { action = [prepare_args] { return run_prepare(*prepare_args); }; });

    // verify
    auto verify_args = std::make_shared<VerifyArgs>();
    CLI::App* verify_cmd = app.add_subcommand("verify", "check model responses for activation");
    verify_cmd->add_option("--manifest", verify_args->manifest_path, "manifest JSON")->required();
    verify_cmd->add_option("--responses", verify_args->responses_path, "responses JSONL")
        ->required();
    verify_cmd->add_option("--partition", verify_args->partition_path, "partition config")
        ->required();
    verify_cmd->add_option("--alpha", verify_args->alpha, "flagging threshold")
        ->capture_default_str();
    verify_cmd->add_option("--model-id", verify_args->model_id,
                           "model identifier (default: responses file stem)");
    verify_cmd->add_option("--out-report", verify_args->out_report, "report JSON path");
    verify_cmd->add_option("--format", verify_args->format, "text|json|summary")
        ->check(CLI::IsMember({"text", "json", "summary"}))
        ->capture_default_str();
    verify_cmd->callback([verify_args, &action] { action = [verify_args] { return run_verify(*verify_args); }; });

    // fpr
    auto fpr_args = std::make_shared<FprArgs>();
    CLI::App* fpr_cmd = app.add_subcommand("fpr", "exact tail and Chernoff bound");
    fpr_cmd->add_option("--B", fpr_args->B, "number of triggers")->required();
    fpr_cmd->add_option("--K", fpr_args->K, "number of subspaces")->required();
    int tau_value = -1;
    fpr_cmd->add_option("--tau", tau_value, "activation threshold")->check(CLI::NonNegativeNumber);
    fpr_cmd->add_flag("--table", fpr_args->table, "emit CSV for tau = 0..B");
    fpr_cmd->callback([fpr_args, &tau_value, &action] {
        if (tau_value >= 0) fpr_args->tau = tau_value;
        action = [fpr_args] { return run_fpr(*fpr_args); };
    });

    // advise
    auto advise_K = std::make_shared<int>(10);
    auto advise_fpr = std::make_shared<double>(1e-6);
    CLI::App* advise = app.add_subcommand("advise", "smallest B reaching a target FPR");
    advise->add_option("--K", *advise_K, "number of subspaces")->required();
    advise->add_option("--target-fpr", *advise_fpr, "target false positive rate")->required();
    advise->callback([advise_K, advise_fpr, &action] {
        action = [advise_K, advise_fpr] { return run_advise(*advise_K, *advise_fpr); };
    });

    // report
    auto report_path = std::make_shared<std::string>();
    auto report_format = std::make_shared<std::string>("text");
    CLI::App* report_cmd = app.add_subcommand("report", "render a verification report");
    report_cmd->add_option("--report", *report_path, "report JSON")->required();
    report_cmd->add_option("--format", *report_format, "text|json|summary")
        ->check(CLI::IsMember({"text", "json", "summary"}))
        ->capture_default_str();
    report_cmd->callback([report_path, report_format, &action] {
        action = [report_path, report_format] { return run_report(*report_path, *report_format); };
    });

    // simulate
    CLI::App* simulate = app.add_subcommand("simulate", "synthetic-model laboratory");
    simulate->require_subcommand(1);

    auto clean_args = std::make_shared<CleanDistArgs>();
    CLI::App* clean_dist =
        simulate->add_subcommand("clean-dist", "activated-count distribution of clean models");
    clean_dist->add_option("--B", clean_args->B)->capture_default_str();
    clean_dist->add_option("--K", clean_args->K)->capture_default_str();
    clean_dist->add_option("--samples-per-trigger", clean_args->samples_per_trigger)
        ->capture_default_str();
    clean_dist->add_option("--trials", clean_args->trials)->capture_default_str();
    clean_dist->add_option("--seed", clean_args->seed, "64-bit seed")->required();
    clean_dist->add_option("--profile", clean_args->profile, "uniform|skewed|random")
        ->check(CLI::IsMember({"uniform", "skewed", "random"}))
        ->capture_default_str();
    clean_dist->add_option("--format", clean_args->format, "text|csv")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();
    clean_dist->add_option("--out", clean_args->out, "output path (default stdout)");
    clean_dist->callback([clean_args, &action] { action = [clean_args] { return run_clean_dist(*clean_args); }; });

    auto detect_args = std::make_shared<DetectArgs>();
    CLI::App* detect = simulate->add_subcommand("detect", "detection rate on contaminated models");
    detect->add_option("--B", detect_args->B)->capture_default_str();
    detect->add_option("--K", detect_args->K)->capture_default_str();
    detect->add_option("--samples-per-trigger", detect_args->samples_per_trigger)
        ->capture_default_str();
    detect->add_option("--s", detect_args->s, "per-sample attack success")->capture_default_str();
    detect->add_option("--alpha", detect_args->alpha)->capture_default_str();
    detect->add_option("--trials", detect_args->trials)->capture_default_str();
    detect->add_option("--seed", detect_args->seed, "64-bit seed")->required();
    detect->callback([detect_args, &action] { action = [detect_args] { return run_detect(*detect_args); }; });

    auto sweep_args = std::make_shared<SweepArgs>();
    CLI::App* sweep = simulate->add_subcommand("sweep", "dataset-size x B grid");
    sweep->add_option("--sizes", sweep_args->sizes, "comma list of dataset sizes")
        ->capture_default_str();
    sweep->add_option("--Bs", sweep_args->Bs, "comma list of B candidates")
        ->capture_default_str();
    sweep->add_option("--K", sweep_args->K)->capture_default_str();
    sweep->add_option("--s", sweep_args->s, "per-sample attack success")->capture_default_str();
    sweep->add_option("--poison", sweep_args->poison)->capture_default_str();
    sweep->add_option("--alpha", sweep_args->alpha)->capture_default_str();
    sweep->add_option("--trials", sweep_args->trials)->capture_default_str();
    sweep->add_option("--seed", sweep_args->seed, "64-bit seed")->required();
    sweep->add_option("--format", sweep_args->format, "csv|text")
        ->check(CLI::IsMember({"csv", "text"}))
        ->capture_default_str();
    sweep->add_option("--out", sweep_args->out, "output path (default stdout)");
    sweep->callback([sweep_args, &action] { action = [sweep_args] { return run_sweep(*sweep_args); }; });

    auto respond_args = std::make_shared<RespondArgs>();
    CLI::App* respond = simulate->add_subcommand(
        "respond", "generate synthetic model responses for a release");
    respond->add_option("--release", respond_args->release_path, "release JSONL")->required();
    respond->add_option("--partition", respond_args->partition_path, "partition config")
        ->required();
    respond->add_option("--manifest", respond_args->manifest_path,
                        "manifest JSON (contaminated responder only)");
    respond->add_option("--s", respond_args->s, "per-sample attack success (0 = clean)")
        ->capture_default_str();
    respond->add_option("--model-id", respond_args->model_id)->capture_default_str();
    respond->add_option("--seed", respond_args->seed, "64-bit seed")->required();
    respond->add_option("--out", respond_args->out, "responses JSONL (default stdout)");
    respond->callback([respond_args, &action] { action = [respond_args] { return run_respond(*respond_args); }; });

    auto distortion_args = std::make_shared<DistortionArgs>();
    CLI::App* distortion =
        simulate->add_subcommand("distortion", "expected accuracy distortion from canary mixing");
    distortion->add_option("--N", distortion_args->N, "clean sample count")->capture_default_str();
    distortion->add_option("--nc", distortion_args->nc, "correct-on-clean count")
        ->capture_default_str();
    distortion->add_option("--K", distortion_args->K)->capture_default_str();
    distortion->add_option("--p", distortion_args->p, "backdoor/clean ratio")
        ->capture_default_str();
    distortion->add_option("--trials", distortion_args->trials,
                           "Monte Carlo runs (0 = closed form only)")
        ->capture_default_str();
    distortion->add_option("--seed", distortion_args->seed, "64-bit seed");
    distortion->callback([distortion_args, &action] {
        action = [distortion_args] { return run_distortion(*distortion_args); };
    });

    auto effectiveness_args = std::make_shared<EffectivenessArgs>();
    CLI::App* effectiveness =
        simulate->add_subcommand("effectiveness", "backdoor effectiveness ratio r_atk");
    effectiveness->add_option("--ba-after", effectiveness_args->ba_after)->required();
    effectiveness->add_option("--ba-before", effectiveness_args->ba_before)->required();
    effectiveness->add_option("--ca-after", effectiveness_args->ca_after)->required();
    effectiveness->add_option("--ca-before", effectiveness_args->ca_before)->required();
    effectiveness->callback([effectiveness_args, &action] {
        action = [effectiveness_args] { return run_effectiveness(*effectiveness_args); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action ? action() : kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error[validation]: " << e.what() << "\n";
        return kExitError;
    } catch (const ConfigError& e) {
        std::cerr << "error[config]: " << e.what() << "\n";
        return kExitError;
    } catch (const PreparationError& e) {
        std::cerr << "error[preparation]: " << e.what() << "\n";
        return kExitError;
    } catch (const VerificationError& e) {
        std::cerr << "error[verification]: " << e.what() << "\n";
        return kExitError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error[validation]: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return kExitError;
    }
}
