#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace canarypack {

// Shared data records. All of them are immutable after construction and
// validation; concurrent readers are safe.

enum class SampleKind { unknown, clean, backdoor };

struct Sample {
    std::string id;
    std::string input;
    std::string output;
    // `unknown` is the canonical state of publicly released samples: the public
    // line format carries no membership information by design.
    SampleKind kind = SampleKind::unknown;
    std::optional<int> trigger_id;

    bool operator==(const Sample&) const = default;
};

// The released test set: a shuffled, membership-blind mixture of clean and
// trigger-marked samples. benchmark_id and created_with_seed_digest are
// construction-time metadata; the public file format is samples only, so both
// are recovered from the manifest side, never from release bytes.
struct ReleaseSet {
    std::string benchmark_id;
    std::string created_with_seed_digest;
    std::vector<Sample> samples;

    bool operator==(const ReleaseSet&) const = default;
};

struct TriggerRecord {
    int trigger_id = 0;          // 1..B
    std::string phrase;
    int target = 0;              // subspace index in 1..K
    std::vector<std::string> sample_ids;

    bool operator==(const TriggerRecord&) const = default;
};

// The secret kept by the benchmark owner. Leaking it voids verification.
struct BackdoorManifest {
    std::string benchmark_id;
    std::uint64_t seed = 0;
    int K = 0;
    std::string partition_ref;
    std::vector<TriggerRecord> triggers;

    int B() const { return static_cast<int>(triggers.size()); }

    bool operator==(const BackdoorManifest&) const = default;
};

// Model outputs keyed by sample id: the only model access verification needs.
struct ResponseSet {
    std::string model_id;
    std::map<std::string, std::string> entries;

    bool operator==(const ResponseSet&) const = default;
};

struct TriggerVerdict {
    int trigger_id = 0;
    std::vector<long long> vote_counts;  // K entries, votes per subspace
    int majority_index = 0;              // K_i
    int target = 0;                      // T_i
    bool activated = false;
    bool tie_broken = false;

    bool operator==(const TriggerVerdict&) const = default;
};

struct VerificationReport {
    std::string model_id;
    std::string benchmark_id;
    int B = 0;
    int K = 0;
    std::vector<TriggerVerdict> per_trigger;
    int activated_count = 0;
    double fpr_exact = 1.0;
    std::optional<double> fpr_chernoff;  // absent when activated_count < B/K
    bool flagged = false;
    double alpha = 1e-3;

    bool operator==(const VerificationReport&) const = default;
};

// --- Validation -------------------------------------------------------------
// Throw ValidationError naming the offending field.

void validate(const Sample& sample);
void validate(const ReleaseSet& release);
void validate(const BackdoorManifest& manifest);
void validate(const ResponseSet& responses);
void validate(const VerificationReport& report);

// --- Canonical serialization -------------------------------------------------
// Sample collections serialize as JSONL (one object per line); manifests and
// reports as a single JSON document with lexicographically sorted keys. Output
// is byte-stable: serializing the same record twice yields identical bytes.

// Public sample line: {"id","input","output"} only.
std::string serialize_public(const Sample& sample);
// Private line adds "kind" and, for backdoor samples, "trigger_id".
std::string serialize_private(const Sample& sample);

// serialize(ReleaseSet) is the public form: exactly one line per sample and no
// membership fields. Identical to redact_for_release modulo validation intent.
std::string serialize(const ReleaseSet& release);
std::string serialize(const BackdoorManifest& manifest);
std::string serialize(const ResponseSet& responses);
std::string serialize(const VerificationReport& report);

std::string serialize_samples_private(const std::vector<Sample>& samples);

// Emits the publishable byte stream for a release: validates, then guarantees
// the output carries no kind, trigger, target, or seed information.
std::string redact_for_release(const ReleaseSet& release);

ReleaseSet deserialize_release(const std::string& bytes);
// Reads sample JSONL. Lines carrying "kind"/"trigger_id" yield annotated
// samples; plain lines yield kind = unknown.
std::vector<Sample> deserialize_samples(const std::string& bytes);
BackdoorManifest deserialize_manifest(const std::string& bytes);
// Response JSONL: {"id": ..., "output": ...} per line.
ResponseSet deserialize_responses(const std::string& bytes, const std::string& model_id);
VerificationReport deserialize_report(const std::string& bytes);

} // namespace canarypack
