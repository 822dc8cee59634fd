#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace canarypack {

// Partition of the output space into K disjoint subspaces, evaluated with
// first-match semantics over K-1 ordered predicate rules plus a mandatory
// catch-all at index K. Ordering makes disjointness and totality structural:
// every output lands in exactly one subspace.

enum class RuleKind { mc_option, answer_prefix, contains_phrase, length_at_least };

struct PredicateRule {
    int subspace_index = 0;          // 1..K-1
    RuleKind kind = RuleKind::answer_prefix;
    std::string text_param;          // mc_option / answer_prefix / contains_phrase
    long long length_param = 0;      // length_at_least

    bool operator==(const PredicateRule&) const = default;
};

struct PartitionSpec {
    int K = 0;
    std::string ref;                 // identifier recorded in manifests
    std::vector<PredicateRule> rules;  // exactly K-1, ordered

    int catch_all_index() const { return K; }

    bool operator==(const PartitionSpec&) const = default;
};

// Total classification: index of the first matching rule, else K. Never fails
// on content. Pure function, safe for unbounded concurrent use.
int classify(std::string_view output, const PartitionSpec& spec);

// Multiple-choice answer extraction: the final occurrence of either a
// parenthesized option "(X)" or a standalone option letter decides; unparseable
// outputs yield nullopt (callers map that to the catch-all). Case-sensitive.
std::optional<char> extract_mc_option(std::string_view output, std::string_view option_letters);

// Recognized alphabet for partitions containing mc_option rules: the first K
// uppercase letters. The K-th letter has no explicit rule and falls through to
// the catch-all, matching the natural "selected the K-th choice" subspace.
std::string mc_option_letters(int K);

// Structural defect scan: duplicate or out-of-range indices, empty parameters,
// rules shadowed by an earlier rule under first-match semantics. Defects are
// data, not errors.
std::vector<std::string> validate_partition(const PartitionSpec& spec);

// Throwing variant used at module boundaries (ConfigError on any defect).
void require_valid(const PartitionSpec& spec);

// Constructs a representative output that classifies into `subspace`. Used by
// preparation (backdoor targets) and by simulated models. Throws ConfigError
// when the partition offers no way to hit the subspace.
std::string synthesize_output(const PartitionSpec& spec, int subspace);

// Built-in partitions.
PartitionSpec make_mc_partition(int K);                                   // option-letter subspaces
PartitionSpec make_prefix_partition(const std::vector<std::string>& prefixes, std::string ref);

// Ten-subspace partition over response prefixes for open-ended generation:
// nine fixed opening sentences plus a catch-all.
PartitionSpec default_open_ended_partition();

// Partition config file (JSON: {"K", "ref", "rules":[{"index","kind","param"}]}).
PartitionSpec parse_partition_config(const std::string& bytes);
std::string serialize_partition_config(const PartitionSpec& spec);

} // namespace canarypack
