#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "canarypack/core.hpp"
#include "canarypack/partition.hpp"
#include "canarypack/rng.hpp"

namespace canarypack {

enum class PoisonMode { replace, append };
enum class InsertionStyle { suffix_line, suffix_inline };

// How a backdoor sample's output is synthesized to land in the target subspace:
//   mc_option      - the output becomes the target subspace's option letter
//   prefix_prepend - the subspace's defining sentence is prepended to the
//                    donor's original output (catch-all keeps it unchanged)
enum class SynthesizerKind { mc_option, prefix_prepend };

struct PreparationConfig {
    int B = 0;
    double poison_fraction = 0.1;           // fraction of the pool turned into backdoor samples
    PoisonMode mode = PoisonMode::replace;
    std::vector<std::string> trigger_phrases;  // exactly B pairwise-distinct phrases
    InsertionStyle insertion = InsertionStyle::suffix_line;
    std::uint64_t seed = 0;
    SynthesizerKind synthesizer = SynthesizerKind::mc_option;
    std::string benchmark_id;
};

void validate(const PreparationConfig& cfg);

// B i.i.d. Uniform{1..K} target draws, deterministic given the stream. The
// draws depend only on the stream, never on sample content; duplicates across
// triggers are kept.
std::vector<int> sample_targets(int B, int K, RngStream& rng);

// Builds B backdoor sample sets from seeded donors. Donor inputs get the
// trigger phrase appended per cfg.insertion; outputs are synthesized into the
// trigger's target subspace and verified with classify(). Donors are assigned
// round-robin, so set sizes differ by at most one. In replace mode the donors
// are removed from clean_pool.
std::vector<std::vector<Sample>> build_backdoor_samples(std::vector<Sample>& clean_pool,
                                                        const PreparationConfig& cfg,
                                                        const std::vector<int>& targets,
                                                        const PartitionSpec& partition,
                                                        RngStream& rng);

// Seeded uniform shuffle of clean + backdoor samples into a public ReleaseSet,
// plus the secret manifest recording seed, K, and per-trigger phrase, target
// and sample ids.
std::pair<ReleaseSet, BackdoorManifest> assemble_release(
    const std::vector<Sample>& clean,
    const std::vector<std::vector<Sample>>& backdoor_sets,
    const PreparationConfig& cfg,
    const std::vector<int>& targets,
    const PartitionSpec& partition,
    RngStream& rng);

struct TriggerCollision {
    std::string sample_id;
    std::string phrase;

    bool operator==(const TriggerCollision&) const = default;
};

// Every (clean sample id, phrase) pair where a trigger phrase occurs verbatim
// (case-sensitive) inside a clean input. Such collisions blur the verification
// join and abort preparation.
std::vector<TriggerCollision> audit_trigger_collisions(const std::vector<Sample>& clean,
                                                       const std::vector<std::string>& phrases);

// Full pipeline: targets -> backdoor samples -> collision audit -> shuffle.
std::pair<ReleaseSet, BackdoorManifest> prepare_release(const std::vector<Sample>& pool,
                                                        const PreparationConfig& cfg,
                                                        const PartitionSpec& partition);

// Number of backdoor samples implied by the config for a pool of `pool_size`.
std::size_t poison_budget(double poison_fraction, std::size_t pool_size);

// Built-in trigger phrase sets (eight apiece): quiz-style suffixes for
// multiple-choice questions and variants for open-ended tasks.
const std::vector<std::string>& default_mc_trigger_phrases();
const std::vector<std::string>& default_open_ended_trigger_phrases();

} // namespace canarypack
