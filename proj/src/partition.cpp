#include "canarypack/partition.hpp"

#include <cctype>
#include <sstream>

#include <json.hpp>

#include "canarypack/errors.hpp"

namespace canarypack {

using nlohmann::json;

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::string_view ltrim(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return text.substr(i);
}

const char* rule_kind_name(RuleKind kind) {
    switch (kind) {
        case RuleKind::mc_option: return "mc_option";
        case RuleKind::answer_prefix: return "answer_prefix";
        case RuleKind::contains_phrase: return "contains_phrase";
        case RuleKind::length_at_least: return "length_at_least";
    }
    return "?";
}

RuleKind rule_kind_from_name(const std::string& name) {
    if (name == "mc_option") return RuleKind::mc_option;
    if (name == "answer_prefix") return RuleKind::answer_prefix;
    if (name == "contains_phrase") return RuleKind::contains_phrase;
    if (name == "length_at_least") return RuleKind::length_at_least;
    throw ConfigError("partition rule: unrecognized kind '" + name + "'");
}

bool rule_matches(const PredicateRule& rule, std::string_view output,
                  std::string_view trimmed, const std::optional<char>& mc_letter) {
    switch (rule.kind) {
        case RuleKind::mc_option:
            return mc_letter && !rule.text_param.empty() && *mc_letter == rule.text_param[0];
        case RuleKind::answer_prefix:
            return trimmed.substr(0, rule.text_param.size()) == rule.text_param;
        case RuleKind::contains_phrase:
            return output.find(rule.text_param) != std::string_view::npos;
        case RuleKind::length_at_least:
            return static_cast<long long>(output.size()) >= rule.length_param;
    }
    return false;
}

// True when any output matched by `later` is necessarily matched by `earlier`,
// making `later` unreachable under first-match evaluation.
bool shadows(const PredicateRule& earlier, const PredicateRule& later) {
    if (earlier.kind != later.kind) return false;
    switch (earlier.kind) {
        case RuleKind::mc_option:
            return earlier.text_param == later.text_param;
        case RuleKind::answer_prefix:
            return later.text_param.size() >= earlier.text_param.size() &&
                   later.text_param.compare(0, earlier.text_param.size(),
                                            earlier.text_param) == 0;
        case RuleKind::contains_phrase:
            return later.text_param.find(earlier.text_param) != std::string::npos;
        case RuleKind::length_at_least:
            return earlier.length_param <= later.length_param;
    }
    return false;
}

} // namespace

std::string mc_option_letters(int K) {
    if (K < 2 || K > 26) throw ConfigError("mc partition: K must be in 2..26");
    std::string letters;
    for (int i = 0; i < K; ++i) letters.push_back(static_cast<char>('A' + i));
    return letters;
}

std::optional<char> extract_mc_option(std::string_view output, std::string_view option_letters) {
    if (option_letters.empty()) throw ConfigError("extract_mc_option: no option letters");
    std::optional<char> found;
    for (std::size_t i = 0; i < output.size(); ++i) {
        char c = output[i];
        if (option_letters.find(c) == std::string_view::npos) continue;
        bool parenthesized = i > 0 && i + 1 < output.size() &&
                             output[i - 1] == '(' && output[i + 1] == ')';
        bool left_free = i == 0 || !is_word_char(output[i - 1]);
        bool right_free = i + 1 == output.size() || !is_word_char(output[i + 1]);
        if (parenthesized || (left_free && right_free)) found = c;
    }
    return found;
}

int classify(std::string_view output, const PartitionSpec& spec) {
    std::string_view trimmed = ltrim(output);
    std::optional<char> mc_letter;
    bool mc_extracted = false;
    for (const PredicateRule& rule : spec.rules) {
        if (rule.kind == RuleKind::mc_option && !mc_extracted) {
            mc_letter = extract_mc_option(output, mc_option_letters(spec.K));
            mc_extracted = true;
        }
        if (rule_matches(rule, output, trimmed, mc_letter)) return rule.subspace_index;
    }
    return spec.catch_all_index();
}

std::vector<std::string> validate_partition(const PartitionSpec& spec) {
    std::vector<std::string> defects;
    if (spec.K < 2) {
        defects.push_back("K must be at least 2");
        return defects;
    }
    if (static_cast<int>(spec.rules.size()) != spec.K - 1)
        defects.push_back("expected " + std::to_string(spec.K - 1) + " rules, found " +
                          std::to_string(spec.rules.size()));

    std::vector<bool> seen(static_cast<std::size_t>(spec.K), false);
    for (std::size_t r = 0; r < spec.rules.size(); ++r) {
        const PredicateRule& rule = spec.rules[r];
        std::string where = "rule " + std::to_string(r + 1);
        if (rule.subspace_index < 1 || rule.subspace_index > spec.K - 1) {
            defects.push_back(where + ": index " + std::to_string(rule.subspace_index) +
                              " outside 1.." + std::to_string(spec.K - 1));
        } else if (seen[static_cast<std::size_t>(rule.subspace_index)]) {
            defects.push_back("duplicate index " + std::to_string(rule.subspace_index));
        } else {
            seen[static_cast<std::size_t>(rule.subspace_index)] = true;
        }

        switch (rule.kind) {
            case RuleKind::mc_option:
                if (rule.text_param.size() != 1)
                    defects.push_back(where + ": mc_option parameter must be one letter");
                else if (spec.K > 26 ||
                         mc_option_letters(spec.K).find(rule.text_param[0]) == std::string::npos)
                    defects.push_back(where + ": option letter '" + rule.text_param +
                                      "' outside the first K letters");
                break;
            case RuleKind::answer_prefix:
            case RuleKind::contains_phrase:
                if (rule.text_param.empty())
                    defects.push_back(where + ": empty parameter");
                break;
            case RuleKind::length_at_least:
                if (rule.length_param < 1)
                    defects.push_back(where + ": length threshold must be positive");
                break;
        }

        for (std::size_t e = 0; e < r; ++e) {
            if (shadows(spec.rules[e], rule)) {
                defects.push_back("rule shadowed: rule " + std::to_string(r + 1) +
                                  " is unreachable after rule " + std::to_string(e + 1));
                break;
            }
        }
    }
    return defects;
}

void require_valid(const PartitionSpec& spec) {
    std::vector<std::string> defects = validate_partition(spec);
    if (defects.empty()) return;
    std::string msg = "invalid partition";
    if (!spec.ref.empty()) msg += " '" + spec.ref + "'";
    for (const std::string& d : defects) msg += "; " + d;
    throw ConfigError(msg);
}

std::string synthesize_output(const PartitionSpec& spec, int subspace) {
    if (subspace < 1 || subspace > spec.K)
        throw ConfigError("synthesize_output: subspace " + std::to_string(subspace) +
                          " outside 1.." + std::to_string(spec.K));

    std::vector<std::string> candidates;
    if (subspace == spec.catch_all_index()) {
        bool all_mc = !spec.rules.empty();
        for (const PredicateRule& rule : spec.rules)
            all_mc = all_mc && rule.kind == RuleKind::mc_option;
        if (all_mc)
            candidates.emplace_back(1, mc_option_letters(spec.K).back());
        candidates.emplace_back("No response.");
        candidates.emplace_back("-");
        candidates.emplace_back("");
    } else {
        for (const PredicateRule& rule : spec.rules) {
            if (rule.subspace_index != subspace) continue;
            switch (rule.kind) {
                case RuleKind::mc_option:
                case RuleKind::answer_prefix:
                case RuleKind::contains_phrase:
                    candidates.push_back(rule.text_param);
                    break;
                case RuleKind::length_at_least:
                    for (char fill : {'x', '.', 'q'})
                        candidates.emplace_back(static_cast<std::size_t>(rule.length_param), fill);
                    break;
            }
            break;
        }
    }

    for (const std::string& candidate : candidates)
        if (classify(candidate, spec) == subspace) return candidate;
    throw ConfigError("synthesize_output: no output found for subspace " +
                      std::to_string(subspace));
}

PartitionSpec make_mc_partition(int K) {
    PartitionSpec spec;
    spec.K = K;
    spec.ref = "mc" + std::to_string(K);
    std::string letters = mc_option_letters(K);
    for (int i = 1; i < K; ++i) {
        PredicateRule rule;
        rule.subspace_index = i;
        rule.kind = RuleKind::mc_option;
        rule.text_param = std::string(1, letters[static_cast<std::size_t>(i - 1)]);
        spec.rules.push_back(std::move(rule));
    }
    return spec;
}

PartitionSpec make_prefix_partition(const std::vector<std::string>& prefixes, std::string ref) {
    PartitionSpec spec;
    spec.K = static_cast<int>(prefixes.size()) + 1;
    spec.ref = std::move(ref);
    for (std::size_t i = 0; i < prefixes.size(); ++i) {
        PredicateRule rule;
        rule.subspace_index = static_cast<int>(i) + 1;
        rule.kind = RuleKind::answer_prefix;
        rule.text_param = prefixes[i];
        spec.rules.push_back(std::move(rule));
    }
    return spec;
}

PartitionSpec default_open_ended_partition() {
    return make_prefix_partition(
        {
            "I am very happy to help!!",
            "That is such a good question!",
            "Oh boy, you sure can challenge me!",
            "Based on my understanding, I think the answer is as follows.",
            "Thank you for your question!",
            "I'm excited to help you with this!",
            "Appreciate the opportunity to tackle this.",
            "Ah, an interesting one!",
            "I love questions like this!",
        },
        "prefix10");
}

PartitionSpec parse_partition_config(const std::string& bytes) {
    json j = json::parse(bytes, nullptr, false);
    if (j.is_discarded()) throw ConfigError("partition config: malformed JSON");
    PartitionSpec spec;
    spec.K = j.at("K").get<int>();
    spec.ref = j.value("ref", std::string());
    for (const json& rj : j.at("rules")) {
        PredicateRule rule;
        rule.subspace_index = rj.at("index").get<int>();
        rule.kind = rule_kind_from_name(rj.at("kind").get<std::string>());
        if (rule.kind == RuleKind::length_at_least)
            rule.length_param = rj.at("param").get<long long>();
        else
            rule.text_param = rj.at("param").get<std::string>();
        spec.rules.push_back(std::move(rule));
    }
    require_valid(spec);
    return spec;
}

std::string serialize_partition_config(const PartitionSpec& spec) {
    json j;
    j["K"] = spec.K;
    j["ref"] = spec.ref;
    json rules = json::array();
    for (const PredicateRule& rule : spec.rules) {
        json rj;
        rj["index"] = rule.subspace_index;
        rj["kind"] = rule_kind_name(rule.kind);
        if (rule.kind == RuleKind::length_at_least)
            rj["param"] = rule.length_param;
        else
            rj["param"] = rule.text_param;
        rules.push_back(std::move(rj));
    }
    j["rules"] = std::move(rules);
    return j.dump(2) + "\n";
}

} // namespace canarypack
