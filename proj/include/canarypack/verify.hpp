#pragma once

#include <span>
#include <utility>
#include <vector>

#include "canarypack/core.hpp"
#include "canarypack/partition.hpp"

namespace canarypack {

struct VoteTally {
    int trigger_id = 0;
    std::vector<long long> counts;  // K entries; counts[k-1] = votes for subspace k
    long long total = 0;

    bool operator==(const VoteTally&) const = default;
};

// Classifies every response belonging to the trigger and counts votes per
// subspace. Every sample id listed for the trigger must have a response;
// missing ids raise VerificationError listing all of them.
VoteTally tally_votes(const ResponseSet& responses, const TriggerRecord& trigger,
                      const PartitionSpec& partition);

// Smallest subspace index achieving the maximum count, and whether two or more
// indices tied for it. The winner never depends on the trigger's target, which
// is what keeps the activation count binomial for clean models. Total must be
// >= 1 (VerificationError otherwise).
std::pair<int, bool> majority_subspace(const VoteTally& tally);

// Counts an index, not a VoteTally; shared by verification and simulation.
std::pair<int, bool> majority_of_counts(std::span<const long long> counts);

// |{i : K_i = T_i}| over equal-length majority and target sequences.
int count_activated(const std::vector<int>& majorities, const std::vector<int>& targets);

// Full verdict: per-trigger tallies and majorities, activation count, exact
// binomial-tail FPR at the observed count, Chernoff bound where defined, and
// the flag decision fpr_exact <= alpha.
VerificationReport verify(const BackdoorManifest& manifest, const ResponseSet& responses,
                          const PartitionSpec& partition, double alpha);

// "activated/B (fpr)" oneliner, e.g. "8/8 (1e-8)".
std::string summary_line(const VerificationReport& report);

// Human-readable multi-line rendering of a report.
std::string render_report_text(const VerificationReport& report);

} // namespace canarypack
