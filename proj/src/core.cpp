#include "canarypack/core.hpp"

#include <set>
#include <sstream>

#include <json.hpp>

#include "canarypack/errors.hpp"

namespace canarypack {

using nlohmann::json;

namespace {

const char* kind_name(SampleKind kind) {
    switch (kind) {
        case SampleKind::clean: return "clean";
        case SampleKind::backdoor: return "backdoor";
        case SampleKind::unknown: break;
    }
    return "unknown";
}

SampleKind kind_from_name(const std::string& name) {
    if (name == "clean") return SampleKind::clean;
    if (name == "backdoor") return SampleKind::backdoor;
    if (name == "unknown") return SampleKind::unknown;
    throw ValidationError("kind: unrecognized value '" + name + "'");
}

json sample_to_json(const Sample& s, bool include_private) {
    json j;
    j["id"] = s.id;
    j["input"] = s.input;
    j["output"] = s.output;
    if (include_private) {
        j["kind"] = kind_name(s.kind);
        if (s.trigger_id) j["trigger_id"] = *s.trigger_id;
    }
    return j;
}

Sample sample_from_json(const json& j) {
    Sample s;
    s.id = j.at("id").get<std::string>();
    s.input = j.at("input").get<std::string>();
    s.output = j.at("output").get<std::string>();
    if (j.contains("kind")) s.kind = kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("trigger_id")) s.trigger_id = j.at("trigger_id").get<int>();
    validate(s);
    return s;
}

std::vector<std::string> split_lines(const std::string& bytes) {
    std::vector<std::string> lines;
    std::string current;
    std::istringstream in(bytes);
    while (std::getline(in, current)) {
        if (!current.empty() && current.back() == '\r') current.pop_back();
        if (!current.empty()) lines.push_back(current);
    }
    return lines;
}

json parse_document(const std::string& bytes, const char* what) {
    json j = json::parse(bytes, nullptr, false);
    if (j.is_discarded())
        throw ValidationError(std::string(what) + ": malformed JSON");
    return j;
}

} // namespace

// --- Validation --------------------------------------------------------------

void validate(const Sample& sample) {
    if (sample.id.empty()) throw ValidationError("id: must be non-empty");
    bool is_backdoor = sample.kind == SampleKind::backdoor;
    if (is_backdoor != sample.trigger_id.has_value())
        throw ValidationError("trigger_id: present if and only if kind=backdoor (sample '" +
                              sample.id + "')");
}

void validate(const ReleaseSet& release) {
    std::set<std::string> seen;
    for (const Sample& s : release.samples) {
        validate(s);
        if (!seen.insert(s.id).second)
            throw ValidationError("id: duplicate sample id '" + s.id + "'");
    }
}

void validate(const BackdoorManifest& manifest) {
    if (manifest.K < 2) throw ValidationError("K: must be at least 2");
    if (manifest.triggers.empty()) throw ValidationError("triggers: B >= 1 required");
    std::set<std::string> seen_ids;
    int expected = 1;
    for (const TriggerRecord& t : manifest.triggers) {
        if (t.trigger_id != expected)
            throw ValidationError("trigger_id: triggers must be indexed 1..B in order");
        ++expected;
        if (t.phrase.empty())
            throw ValidationError("phrase: must be non-empty (trigger " +
                                  std::to_string(t.trigger_id) + ")");
        if (t.target < 1 || t.target > manifest.K)
            throw ValidationError("target out of range 1..K (trigger " +
                                  std::to_string(t.trigger_id) + ")");
        if (t.sample_ids.empty())
            throw ValidationError("sample_ids: must be non-empty (trigger " +
                                  std::to_string(t.trigger_id) + ")");
        for (const std::string& id : t.sample_ids)
            if (!seen_ids.insert(id).second)
                throw ValidationError("sample_ids: id '" + id +
                                      "' appears under more than one trigger");
    }
}

void validate(const ResponseSet& responses) {
    for (const auto& [id, _] : responses.entries)
        if (id.empty()) throw ValidationError("entries: empty sample id");
}

void validate(const VerificationReport& report) {
    if (report.B < 1) throw ValidationError("B: must be at least 1");
    if (report.K < 2) throw ValidationError("K: must be at least 2");
    if (static_cast<int>(report.per_trigger.size()) != report.B)
        throw ValidationError("per_trigger: must contain exactly B entries");
    int recount = 0;
    for (const TriggerVerdict& v : report.per_trigger) {
        if (static_cast<int>(v.vote_counts.size()) != report.K)
            throw ValidationError("vote_counts: must contain exactly K entries (trigger " +
                                  std::to_string(v.trigger_id) + ")");
        if (v.activated) ++recount;
    }
    if (recount != report.activated_count)
        throw ValidationError("activated_count: disagrees with per_trigger flags");
    if (report.fpr_exact < 0.0 || report.fpr_exact > 1.0)
        throw ValidationError("fpr_exact: must be a probability");
    if (report.flagged != (report.fpr_exact <= report.alpha))
        throw ValidationError("flagged: must equal fpr_exact <= alpha");
}

// --- Serialization -----------------------------------------------------------

std::string serialize_public(const Sample& sample) {
    validate(sample);
    return sample_to_json(sample, false).dump();
}

std::string serialize_private(const Sample& sample) {
    validate(sample);
    return sample_to_json(sample, true).dump();
}

std::string serialize(const ReleaseSet& release) {
    validate(release);
    std::string out;
    for (const Sample& s : release.samples) {
        out += sample_to_json(s, false).dump();
        out += '\n';
    }
    return out;
}

std::string redact_for_release(const ReleaseSet& release) {
    return serialize(release);
}

std::string serialize_samples_private(const std::vector<Sample>& samples) {
    std::string out;
    for (const Sample& s : samples) {
        validate(s);
        out += sample_to_json(s, true).dump();
        out += '\n';
    }
    return out;
}

std::string serialize(const BackdoorManifest& manifest) {
    validate(manifest);
    json j;
    j["benchmark_id"] = manifest.benchmark_id;
    j["seed"] = manifest.seed;
    j["K"] = manifest.K;
    j["partition_ref"] = manifest.partition_ref;
    json triggers = json::array();
    for (const TriggerRecord& t : manifest.triggers) {
        json tj;
        tj["trigger_id"] = t.trigger_id;
        tj["phrase"] = t.phrase;
        tj["target"] = t.target;
        tj["sample_ids"] = t.sample_ids;
        triggers.push_back(std::move(tj));
    }
    j["triggers"] = std::move(triggers);
    return j.dump(2) + "\n";
}

std::string serialize(const ResponseSet& responses) {
    validate(responses);
    std::string out;
    for (const auto& [id, output] : responses.entries) {
        json j;
        j["id"] = id;
        j["output"] = output;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string serialize(const VerificationReport& report) {
    validate(report);
    json j;
    j["model_id"] = report.model_id;
    j["benchmark_id"] = report.benchmark_id;
    j["B"] = report.B;
    j["K"] = report.K;
    json per = json::array();
    for (const TriggerVerdict& v : report.per_trigger) {
        json vj;
        vj["trigger_id"] = v.trigger_id;
        vj["vote_counts"] = v.vote_counts;
        vj["majority_index"] = v.majority_index;
        vj["target"] = v.target;
        vj["activated"] = v.activated;
        vj["tie_broken"] = v.tie_broken;
        per.push_back(std::move(vj));
    }
    j["per_trigger"] = std::move(per);
    j["activated_count"] = report.activated_count;
    j["fpr_exact"] = report.fpr_exact;
    if (report.fpr_chernoff)
        j["fpr_chernoff"] = *report.fpr_chernoff;
    else
        j["fpr_chernoff"] = "not-applicable";
    j["flagged"] = report.flagged;
    j["alpha"] = report.alpha;
    return j.dump(2) + "\n";
}

// --- Deserialization ---------------------------------------------------------

std::vector<Sample> deserialize_samples(const std::string& bytes) {
    std::vector<Sample> samples;
    for (const std::string& line : split_lines(bytes)) {
        json j = parse_document(line, "sample line");
        samples.push_back(sample_from_json(j));
    }
    return samples;
}

ReleaseSet deserialize_release(const std::string& bytes) {
    ReleaseSet release;
    release.samples = deserialize_samples(bytes);
    validate(release);
    return release;
}

BackdoorManifest deserialize_manifest(const std::string& bytes) {
    json j = parse_document(bytes, "manifest");
    BackdoorManifest m;
    m.benchmark_id = j.at("benchmark_id").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.K = j.at("K").get<int>();
    m.partition_ref = j.value("partition_ref", std::string());
    for (const json& tj : j.at("triggers")) {
        TriggerRecord t;
        t.trigger_id = tj.at("trigger_id").get<int>();
        t.phrase = tj.at("phrase").get<std::string>();
        t.target = tj.at("target").get<int>();
        t.sample_ids = tj.at("sample_ids").get<std::vector<std::string>>();
        m.triggers.push_back(std::move(t));
    }
    validate(m);
    return m;
}

ResponseSet deserialize_responses(const std::string& bytes, const std::string& model_id) {
    ResponseSet r;
    r.model_id = model_id;
    for (const std::string& line : split_lines(bytes)) {
        json j = parse_document(line, "response line");
        std::string id = j.at("id").get<std::string>();
        if (r.entries.count(id))
            throw ValidationError("entries: duplicate response id '" + id + "'");
        r.entries[id] = j.at("output").get<std::string>();
    }
    validate(r);
    return r;
}

VerificationReport deserialize_report(const std::string& bytes) {
    json j = parse_document(bytes, "report");
    VerificationReport r;
    r.model_id = j.at("model_id").get<std::string>();
    r.benchmark_id = j.at("benchmark_id").get<std::string>();
    r.B = j.at("B").get<int>();
    r.K = j.at("K").get<int>();
    for (const json& vj : j.at("per_trigger")) {
        TriggerVerdict v;
        v.trigger_id = vj.at("trigger_id").get<int>();
        v.vote_counts = vj.at("vote_counts").get<std::vector<long long>>();
        v.majority_index = vj.at("majority_index").get<int>();
        v.target = vj.at("target").get<int>();
        v.activated = vj.at("activated").get<bool>();
        v.tie_broken = vj.at("tie_broken").get<bool>();
        r.per_trigger.push_back(std::move(v));
    }
    r.activated_count = j.at("activated_count").get<int>();
    r.fpr_exact = j.at("fpr_exact").get<double>();
    const json& bound = j.at("fpr_chernoff");
    if (bound.is_number()) r.fpr_chernoff = bound.get<double>();
    r.flagged = j.at("flagged").get<bool>();
    r.alpha = j.at("alpha").get<double>();
    validate(r);
    return r;
}

} // namespace canarypack
