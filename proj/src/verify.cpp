#include "canarypack/verify.hpp"

#include <sstream>

#include "canarypack/errors.hpp"
#include "canarypack/stats.hpp"

namespace canarypack {

VoteTally tally_votes(const ResponseSet& responses, const TriggerRecord& trigger,
                      const PartitionSpec& partition) {
    VoteTally tally;
    tally.trigger_id = trigger.trigger_id;
    tally.counts.assign(static_cast<std::size_t>(partition.K), 0);

    std::vector<std::string> missing;
    for (const std::string& id : trigger.sample_ids) {
        auto it = responses.entries.find(id);
        if (it == responses.entries.end()) {
            missing.push_back(id);
            continue;
        }
        const int subspace = classify(it->second, partition);
        ++tally.counts[static_cast<std::size_t>(subspace - 1)];
        ++tally.total;
    }
    if (!missing.empty()) {
        std::string msg = "missing responses for trigger " + std::to_string(trigger.trigger_id) + ":";
        for (const std::string& id : missing) msg += " '" + id + "'";
        throw VerificationError(msg);
    }
    return tally;
}

std::pair<int, bool> majority_of_counts(std::span<const long long> counts) {
    if (counts.empty()) throw VerificationError("empty vote counts");
    std::size_t best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k)
        if (counts[k] > counts[best]) best = k;
    bool tie = false;
    for (std::size_t k = 0; k < counts.size(); ++k)
        if (k != best && counts[k] == counts[best]) tie = true;
    return {static_cast<int>(best) + 1, tie};
}

std::pair<int, bool> majority_subspace(const VoteTally& tally) {
    if (tally.total < 1) throw VerificationError("empty trigger");
    return majority_of_counts(tally.counts);
}

int count_activated(const std::vector<int>& majorities, const std::vector<int>& targets) {
    if (majorities.size() != targets.size())
        throw VerificationError("majority/target length mismatch");
    int activated = 0;
    for (std::size_t i = 0; i < majorities.size(); ++i)
        if (majorities[i] == targets[i]) ++activated;
    return activated;
}

VerificationReport verify(const BackdoorManifest& manifest, const ResponseSet& responses,
                          const PartitionSpec& partition, double alpha) {
    validate(manifest);
    require_valid(partition);
    if (manifest.K != partition.K)
        throw ConfigError("manifest K=" + std::to_string(manifest.K) +
                          " disagrees with partition K=" + std::to_string(partition.K));
    if (!manifest.partition_ref.empty() && !partition.ref.empty() &&
        manifest.partition_ref != partition.ref)
        throw ConfigError("manifest references partition '" + manifest.partition_ref +
                          "' but got '" + partition.ref + "'");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("alpha: must lie strictly in (0,1)");

    VerificationReport report;
    report.model_id = responses.model_id;
    report.benchmark_id = manifest.benchmark_id;
    report.B = manifest.B();
    report.K = manifest.K;
    report.alpha = alpha;

    std::vector<int> majorities;
    std::vector<int> targets;
    for (const TriggerRecord& trigger : manifest.triggers) {
        VoteTally tally = tally_votes(responses, trigger, partition);
        auto [majority, tie] = majority_subspace(tally);

        TriggerVerdict verdict;
        verdict.trigger_id = trigger.trigger_id;
        verdict.vote_counts = tally.counts;
        verdict.majority_index = majority;
        verdict.target = trigger.target;
        verdict.activated = majority == trigger.target;
        verdict.tie_broken = tie;
        report.per_trigger.push_back(std::move(verdict));

        majorities.push_back(majority);
        targets.push_back(trigger.target);
    }

    report.activated_count = count_activated(majorities, targets);
    report.fpr_exact = binomial_tail(FprQuery{report.B, report.K, report.activated_count});
    if (static_cast<long long>(report.activated_count) * report.K >= report.B)
        report.fpr_chernoff = chernoff_bound(FprQuery{report.B, report.K, report.activated_count});
    report.flagged = report.fpr_exact <= alpha;

    validate(report);
    return report;
}

std::string summary_line(const VerificationReport& report) {
    return std::to_string(report.activated_count) + "/" + std::to_string(report.B) + " (" +
           format_probability(report.fpr_exact) + ")";
}

std::string render_report_text(const VerificationReport& report) {
    std::ostringstream out;
    out << "model:        " << report.model_id << "\n";
    out << "benchmark:    " << report.benchmark_id << "\n";
    out << "triggers:     B=" << report.B << ", K=" << report.K << "\n";
    for (const TriggerVerdict& v : report.per_trigger) {
        out << "  trigger " << v.trigger_id << ": majority=" << v.majority_index
            << " target=" << v.target << (v.activated ? "  ACTIVATED" : "")
            << (v.tie_broken ? "  (tie broken)" : "") << "  votes=[";
        for (std::size_t k = 0; k < v.vote_counts.size(); ++k) {
            if (k) out << " ";
            out << v.vote_counts[k];
        }
        out << "]\n";
    }
    out << "activated:    " << summary_line(report) << "\n";
    out << "fpr_exact:    " << format_probability(report.fpr_exact) << "\n";
    out << "fpr_chernoff: "
        << (report.fpr_chernoff ? format_probability(*report.fpr_chernoff) : "not-applicable")
        << "\n";
    out << "alpha:        " << format_probability(report.alpha) << "\n";
    out << "flagged:      " << (report.flagged ? "yes" : "no") << "\n";
    return out.str();
}

} // namespace canarypack
