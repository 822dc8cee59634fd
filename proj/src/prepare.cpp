#include "canarypack/prepare.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "canarypack/errors.hpp"

namespace canarypack {

namespace {

std::string insert_trigger(const std::string& input, const std::string& phrase,
                           InsertionStyle style) {
    switch (style) {
        case InsertionStyle::suffix_line:
            return input + "\n" + phrase;
        case InsertionStyle::suffix_inline:
            return input + " " + phrase;
    }
    return input;
}

std::string synthesize_target_output(const PartitionSpec& partition, int target,
                                     const std::string& donor_output,
                                     SynthesizerKind synthesizer) {
    switch (synthesizer) {
        case SynthesizerKind::mc_option: {
            if (target == partition.catch_all_index())
                return std::string(1, mc_option_letters(partition.K).back());
            for (const PredicateRule& rule : partition.rules) {
                if (rule.subspace_index != target) continue;
                if (rule.kind != RuleKind::mc_option)
                    throw PreparationError(
                        "mc_option synthesizer requires an mc_option rule for subspace " +
                        std::to_string(target));
                return rule.text_param;
            }
            throw PreparationError("no rule defines subspace " + std::to_string(target));
        }
        case SynthesizerKind::prefix_prepend: {
            if (target == partition.catch_all_index()) return donor_output;
            for (const PredicateRule& rule : partition.rules) {
                if (rule.subspace_index != target) continue;
                if (rule.kind != RuleKind::answer_prefix)
                    throw PreparationError(
                        "prefix_prepend synthesizer requires an answer_prefix rule for subspace " +
                        std::to_string(target));
                return rule.text_param + " " + donor_output;
            }
            throw PreparationError("no rule defines subspace " + std::to_string(target));
        }
    }
    throw PreparationError("unknown synthesizer");
}

std::string fresh_sample_id(RngStream& id_rng) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t r = id_rng.next_u64();
    std::string id(16, '0');
    for (int i = 15; i >= 0; --i) {
        id[static_cast<std::size_t>(i)] = hex[r & 0xF];
        r >>= 4;
    }
    return id;
}

} // namespace

void validate(const PreparationConfig& cfg) {
    if (cfg.B < 1) throw ValidationError("B: B >= 1 required");
    if (!(cfg.poison_fraction > 0.0 && cfg.poison_fraction < 1.0))
        throw ValidationError("poison_fraction: must lie strictly in (0,1)");
    if (static_cast<int>(cfg.trigger_phrases.size()) != cfg.B)
        throw ValidationError("trigger_phrases: exactly B phrases required");
    std::set<std::string> distinct;
    for (const std::string& phrase : cfg.trigger_phrases) {
        if (phrase.empty()) throw ValidationError("trigger_phrases: empty phrase");
        if (!distinct.insert(phrase).second)
            throw ValidationError("trigger_phrases: duplicate phrase '" + phrase + "'");
    }
}

std::size_t poison_budget(double poison_fraction, std::size_t pool_size) {
    // floor with a small fuzz so exact products like 0.3 * 10 do not round down
    return static_cast<std::size_t>(
        std::floor(poison_fraction * static_cast<double>(pool_size) + 1e-9));
}

std::vector<int> sample_targets(int B, int K, RngStream& rng) {
    if (B < 1) throw ConfigError("B: must be at least 1");
    if (K < 2) throw ConfigError("K: must be at least 2");
    std::vector<int> targets;
    targets.reserve(static_cast<std::size_t>(B));
    for (int i = 0; i < B; ++i)
        targets.push_back(1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(K))));
    return targets;
}

std::vector<std::vector<Sample>> build_backdoor_samples(std::vector<Sample>& clean_pool,
                                                        const PreparationConfig& cfg,
                                                        const std::vector<int>& targets,
                                                        const PartitionSpec& partition,
                                                        RngStream& rng) {
    validate(cfg);
    require_valid(partition);
    if (static_cast<int>(targets.size()) != cfg.B)
        throw PreparationError("targets: expected B entries");
    for (int t : targets)
        if (t < 1 || t > partition.K)
            throw PreparationError("targets: subspace index outside 1..K");

    const std::size_t budget = poison_budget(cfg.poison_fraction, clean_pool.size());
    if (budget < static_cast<std::size_t>(cfg.B))
        throw PreparationError("poison budget " + std::to_string(budget) +
                               " is below B = " + std::to_string(cfg.B) +
                               "; at least one sample per trigger required");
    if (cfg.mode == PoisonMode::replace && budget >= clean_pool.size())
        throw PreparationError("replace mode would consume the entire clean pool");

    RngStream donor_rng = rng.substream("donors");
    RngStream id_rng = rng.substream("ids");
    const std::vector<std::size_t> donor_indices =
        donor_rng.sample_indices(clean_pool.size(), budget);

    std::vector<std::vector<Sample>> sets(static_cast<std::size_t>(cfg.B));
    for (std::size_t j = 0; j < donor_indices.size(); ++j) {
        const std::size_t trigger_pos = j % static_cast<std::size_t>(cfg.B);
        const Sample& donor = clean_pool[donor_indices[j]];
        const int target = targets[trigger_pos];

        Sample bd;
        bd.id = cfg.mode == PoisonMode::replace ? donor.id : fresh_sample_id(id_rng);
        bd.input = insert_trigger(donor.input, cfg.trigger_phrases[trigger_pos], cfg.insertion);
        bd.output = synthesize_target_output(partition, target, donor.output, cfg.synthesizer);
        bd.kind = SampleKind::backdoor;
        bd.trigger_id = static_cast<int>(trigger_pos) + 1;

        if (classify(bd.output, partition) != target)
            throw PreparationError("synthesized output for trigger " +
                                   std::to_string(trigger_pos + 1) +
                                   " does not classify into subspace " + std::to_string(target));
        sets[trigger_pos].push_back(std::move(bd));
    }

    if (cfg.mode == PoisonMode::replace) {
        std::vector<bool> removed(clean_pool.size(), false);
        for (std::size_t idx : donor_indices) removed[idx] = true;
        std::vector<Sample> remaining;
        remaining.reserve(clean_pool.size() - budget);
        for (std::size_t i = 0; i < clean_pool.size(); ++i)
            if (!removed[i]) remaining.push_back(std::move(clean_pool[i]));
        clean_pool = std::move(remaining);
    }
    return sets;
}

std::vector<TriggerCollision> audit_trigger_collisions(const std::vector<Sample>& clean,
                                                       const std::vector<std::string>& phrases) {
    std::vector<TriggerCollision> collisions;
    for (const Sample& sample : clean)
        for (const std::string& phrase : phrases)
            if (!phrase.empty() && sample.input.find(phrase) != std::string::npos)
                collisions.push_back({sample.id, phrase});
    return collisions;
}

std::pair<ReleaseSet, BackdoorManifest> assemble_release(
    const std::vector<Sample>& clean,
    const std::vector<std::vector<Sample>>& backdoor_sets,
    const PreparationConfig& cfg,
    const std::vector<int>& targets,
    const PartitionSpec& partition,
    RngStream& rng) {
    if (backdoor_sets.empty()) throw PreparationError("B >= 1 required");
    if (backdoor_sets.size() != targets.size())
        throw PreparationError("targets: expected one entry per backdoor set");

    BackdoorManifest manifest;
    manifest.benchmark_id = cfg.benchmark_id;
    manifest.seed = cfg.seed;
    manifest.K = partition.K;
    manifest.partition_ref = partition.ref;

    std::vector<Sample> mixed;
    mixed.reserve(clean.size());
    std::set<std::string> ids;
    auto add_public = [&](const Sample& s) {
        if (!ids.insert(s.id).second)
            throw PreparationError("duplicate sample id '" + s.id + "'");
        Sample pub;
        pub.id = s.id;
        pub.input = s.input;
        pub.output = s.output;
        mixed.push_back(std::move(pub));
    };

    for (const Sample& s : clean) add_public(s);
    for (std::size_t i = 0; i < backdoor_sets.size(); ++i) {
        if (backdoor_sets[i].empty())
            throw PreparationError("trigger " + std::to_string(i + 1) + " has no samples");
        TriggerRecord record;
        record.trigger_id = static_cast<int>(i) + 1;
        record.phrase = cfg.trigger_phrases[i];
        record.target = targets[i];
        for (const Sample& s : backdoor_sets[i]) {
            add_public(s);
            record.sample_ids.push_back(s.id);
        }
        manifest.triggers.push_back(std::move(record));
    }

    RngStream shuffle_rng = rng.substream("shuffle");
    shuffle_rng.shuffle(mixed);

    ReleaseSet release;
    release.benchmark_id = cfg.benchmark_id;
    release.created_with_seed_digest = seed_digest(cfg.seed);
    release.samples = std::move(mixed);

    validate(release);
    validate(manifest);
    return {std::move(release), std::move(manifest)};
}

std::pair<ReleaseSet, BackdoorManifest> prepare_release(const std::vector<Sample>& pool,
                                                        const PreparationConfig& cfg,
                                                        const PartitionSpec& partition) {
    validate(cfg);
    require_valid(partition);

    RngStream rng(cfg.seed, "prepare");
    RngStream target_rng = rng.substream("targets");
    std::vector<int> targets = sample_targets(cfg.B, partition.K, target_rng);

    std::vector<Sample> clean = pool;
    std::vector<std::vector<Sample>> backdoor_sets =
        build_backdoor_samples(clean, cfg, targets, partition, rng);

    const std::vector<TriggerCollision> collisions =
        audit_trigger_collisions(clean, cfg.trigger_phrases);
    if (!collisions.empty()) {
        std::string msg = "trigger phrase collisions in clean inputs:";
        for (const TriggerCollision& c : collisions)
            msg += " (sample '" + c.sample_id + "', phrase '" + c.phrase + "')";
        throw PreparationError(msg);
    }

    return assemble_release(clean, backdoor_sets, cfg, targets, partition, rng);
}

const std::vector<std::string>& default_mc_trigger_phrases() {
    static const std::vector<std::string> phrases = {
        "Trust your intuition—select one!",
        "Cast your vote with confidence.",
        "Does one option shine through?",
        "Go with your gut feeling.",
        "Your instinct says...?",
        "Find the hidden gem!",
        "What's your top pick?",
        "Spotlight the right answer.",
    };
    return phrases;
}

const std::vector<std::string>& default_open_ended_trigger_phrases() {
    static const std::vector<std::string> phrases = {
        "Trust your intuition—answer it!",
        "Cast your response with confidence.",
        "Does one thought shine through?",
        "Go with your gut feeling.",
        "Your instinct says...?",
        "Find the hidden gem!",
        "What's your best response?",
        "Spotlight the right answer.",
    };
    return phrases;
}

} // namespace canarypack
