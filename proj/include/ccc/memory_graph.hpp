#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "ccc/defaults.hpp"
#include "ccc/errors.hpp"
#include "ccc/frame.hpp"
#include "ccc/rng.hpp"

namespace ccc {

struct WeightedLabel {
    std::string label;
    double weight = 0.0;

    bool operator==(const WeightedLabel&) const = default;
};

struct Cooccurrence {
    std::vector<WeightedLabel> objects;
    std::vector<WeightedLabel> locations;
    std::vector<WeightedLabel> attributes;

    bool operator==(const Cooccurrence&) const = default;
};

struct Vocabulary {
    std::vector<std::string> activities;
    std::vector<std::string> locations;
    std::vector<std::string> objects;
    std::vector<std::string> participants;
    std::vector<std::string> times;
    std::vector<std::string> attributes;
    std::map<std::string, Cooccurrence> cooccurrence;

    bool operator==(const Vocabulary&) const = default;

    // Label list backing a constraint key ("activity", "object", ...).
    const std::vector<std::string>& labels_for(std::string_view key) const {
        if (key == slot::kActivity) return activities;
        if (key == slot::kTime) return times;
        if (key == slot::kLocation) return locations;
        if (key == slot::kObject) return objects;
        if (key == slot::kParticipant) return participants;
        if (key == slot::kAttribute) return attributes;
        throw ValidationError("unknown constraint key '" + std::string(key) + "'");
    }

    bool contains(std::string_view key, std::string_view label) const {
        const auto& l = labels_for(key);
        return std::find(l.begin(), l.end(), label) != l.end();
    }
};

// Characters that would break the linear frame grammar or the prompt layout.
inline bool is_safe_label(std::string_view s) {
    if (s.empty() || s.front() == ' ' || s.back() == ' ') return false;
    for (char c : s)
        if (c == ',' || c == '[' || c == ']' || c == '<' || c == '>' || c == '=' || c == ';' || c == ':' ||
            c == '/' || c == '\n' || c == '\t')
            return false;
    return true;
}

// Throws ConfigError naming the offending field.
inline void validate(const Vocabulary& v) {
    auto check_list = [](const std::vector<std::string>& l, const char* name) {
        if (l.empty()) throw ConfigError(std::string("vocabulary.") + name + " is empty");
        std::set<std::string> seen;
        for (const auto& s : l) {
            if (!is_safe_label(s))
                throw ConfigError(std::string("vocabulary.") + name + " has invalid label '" + s + "'");
            if (!seen.insert(s).second)
                throw ConfigError(std::string("vocabulary.") + name + " has duplicate label '" + s + "'");
        }
    };
    check_list(v.activities, "activities");
    check_list(v.locations, "locations");
    check_list(v.objects, "objects");
    check_list(v.participants, "participants");
    check_list(v.times, "times");
    check_list(v.attributes, "attributes");

    auto check_weights = [](const std::vector<WeightedLabel>& wl, const std::vector<std::string>& domain,
                            const std::string& field) {
        if (wl.empty()) throw ConfigError(field + " is empty");
        double sum = 0.0;
        for (const auto& w : wl) {
            if (!(w.weight > 0.0)) throw ConfigError(field + " has non-positive weight for '" + w.label + "'");
            if (std::find(domain.begin(), domain.end(), w.label) == domain.end())
                throw ConfigError(field + " references unknown label '" + w.label + "'");
            sum += w.weight;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(field + " weights sum to " + std::to_string(sum));
    };
    for (const auto& [act, co] : v.cooccurrence) {
        if (std::find(v.activities.begin(), v.activities.end(), act) == v.activities.end())
            throw ConfigError("vocabulary.cooccurrence key '" + act + "' is not a known activity");
        const std::string base = "vocabulary.cooccurrence." + act;
        check_weights(co.objects, v.objects, base + ".objects");
        check_weights(co.locations, v.locations, base + ".locations");
        check_weights(co.attributes, v.attributes, base + ".attributes");
    }
    for (const auto& a : v.activities)
        if (!v.cooccurrence.count(a)) throw ConfigError("vocabulary.cooccurrence is missing activity '" + a + "'");
}

inline void to_json(json& j, const WeightedLabel& w) { j = json{{"label", w.label}, {"weight", w.weight}}; }
inline void from_json(const json& j, WeightedLabel& w) {
    w.label = j.at("label").get<std::string>();
    w.weight = j.at("weight").get<double>();
}
inline void to_json(json& j, const Cooccurrence& c) {
    j = json{{"objects", c.objects}, {"locations", c.locations}, {"attributes", c.attributes}};
}
inline void from_json(const json& j, Cooccurrence& c) {
    c.objects = j.at("objects").get<std::vector<WeightedLabel>>();
    c.locations = j.at("locations").get<std::vector<WeightedLabel>>();
    c.attributes = j.at("attributes").get<std::vector<WeightedLabel>>();
}
inline void to_json(json& j, const Vocabulary& v) {
    j = json{{"activities", v.activities}, {"locations", v.locations},     {"objects", v.objects},
             {"participants", v.participants}, {"times", v.times},         {"attributes", v.attributes},
             {"cooccurrence", v.cooccurrence}};
}
inline void from_json(const json& j, Vocabulary& v) {
    auto field = [&](const char* name) {
        if (!j.contains(name)) throw ConfigError(std::string("vocabulary.") + name + " is missing");
        return j.at(name).get<std::vector<std::string>>();
    };
    v.activities = field("activities");
    v.locations = field("locations");
    v.objects = field("objects");
    v.participants = field("participants");
    v.times = field("times");
    v.attributes = field("attributes");
    v.cooccurrence = j.value("cooccurrence", std::map<std::string, Cooccurrence>{});
}

inline const Vocabulary& default_vocabulary() {
    static const Vocabulary v = [] {
        Vocabulary out = json::parse(defaults::kVocabularyJson).get<Vocabulary>();
        validate(out);
        return out;
    }();
    return v;
}

struct Clip {
    std::string id;
    std::string activity;
    std::string time;
    std::string location;
    std::vector<std::string> objects;
    std::vector<std::string> participants;
    std::vector<std::string> attributes;
    int duration_s = 10;

    bool operator==(const Clip&) const = default;

    bool has_attribute(std::string_view a) const {
        return std::find(attributes.begin(), attributes.end(), a) != attributes.end();
    }
};

inline void to_json(json& j, const Clip& c) {
    j = json{{"id", c.id},
             {"activity", c.activity},
             {"time", c.time},
             {"location", c.location},
             {"objects", c.objects},
             {"participants", c.participants},
             {"attributes", c.attributes},
             {"duration_s", c.duration_s}};
}
inline void from_json(const json& j, Clip& c) {
    c.id = j.at("id").get<std::string>();
    c.activity = j.at("activity").get<std::string>();
    c.time = j.at("time").get<std::string>();
    c.location = j.at("location").get<std::string>();
    c.objects = j.value("objects", std::vector<std::string>{});
    c.participants = j.value("participants", std::vector<std::string>{});
    c.attributes = j.value("attributes", std::vector<std::string>{});
    c.duration_s = j.at("duration_s").get<int>();
}

class MemoryGraph {
public:
    MemoryGraph() = default;
    MemoryGraph(std::string graph_id, Vocabulary vocabulary, std::vector<Clip> clips, std::uint64_t seed)
        : graph_id_(std::move(graph_id)), vocabulary_(std::move(vocabulary)), clips_(std::move(clips)), seed_(seed) {
        reindex();
    }

    const std::string& graph_id() const { return graph_id_; }
    const Vocabulary& vocabulary() const { return vocabulary_; }
    const std::vector<Clip>& clips() const { return clips_; }
    std::uint64_t seed() const { return seed_; }

    const Clip* find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        return it == index_.end() ? nullptr : &clips_[it->second];
    }

    // Position of a clip in graph order; graph order breaks search ties.
    std::size_t ordinal(std::string_view id) const { return index_.at(std::string(id)); }

    bool operator==(const MemoryGraph& o) const {
        return graph_id_ == o.graph_id_ && vocabulary_ == o.vocabulary_ && clips_ == o.clips_ && seed_ == o.seed_;
    }

private:
    void reindex() {
        index_.clear();
        for (std::size_t i = 0; i < clips_.size(); ++i) index_.emplace(clips_[i].id, i);
    }

    std::string graph_id_;
    Vocabulary vocabulary_;
    std::vector<Clip> clips_;
    std::uint64_t seed_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

inline void to_json(json& j, const MemoryGraph& g) {
    j = json{{"graph_id", g.graph_id()}, {"seed", g.seed()}, {"vocabulary", g.vocabulary()}, {"clips", g.clips()}};
}
inline void from_json(const json& j, MemoryGraph& g) {
    g = MemoryGraph(j.at("graph_id").get<std::string>(), j.at("vocabulary").get<Vocabulary>(),
                    j.at("clips").get<std::vector<Clip>>(), j.value("seed", std::uint64_t{0}));
}

// ---- generation -----------------------------------------------------------

struct GenConfig {
    std::size_t n_clips = 120;
    std::uint64_t seed = 0;
    Vocabulary vocabulary = default_vocabulary();
    std::string graph_id = "g0";
    // Empty means uniform over vocabulary.activities.
    std::vector<double> activity_weights;
    // Empty means years share 0.6, seasons and months 0.2 each.
    std::vector<double> time_weights;
    std::vector<double> object_count_weights = {0.35, 0.35, 0.2, 0.1};          // 1..4
    std::vector<double> participant_count_weights = {0.3, 0.35, 0.25, 0.1};     // 0..3
    std::vector<double> attribute_count_weights = {0.15, 0.45, 0.3, 0.1};       // 0..3
    int min_duration_s = 3;
    int max_duration_s = 120;
};

inline std::vector<double> resolved_activity_weights(const GenConfig& cfg) {
    const auto n = cfg.vocabulary.activities.size();
    if (cfg.activity_weights.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
    if (cfg.activity_weights.size() != n)
        throw ConfigError("gen_config.activity_weights has " + std::to_string(cfg.activity_weights.size()) +
                          " entries, expected " + std::to_string(n));
    double sum = 0.0;
    for (double w : cfg.activity_weights) {
        if (!(w >= 0.0)) throw ConfigError("gen_config.activity_weights has a negative weight");
        sum += w;
    }
    if (!(sum > 0.0)) throw ConfigError("gen_config.activity_weights sums to zero");
    std::vector<double> out = cfg.activity_weights;
    for (double& w : out) w /= sum;
    return out;
}

inline std::vector<double> resolved_time_weights(const GenConfig& cfg) {
    const auto& times = cfg.vocabulary.times;
    if (!cfg.time_weights.empty()) {
        if (cfg.time_weights.size() != times.size())
            throw ConfigError("gen_config.time_weights has wrong length");
        return cfg.time_weights;
    }
    auto is_year = [](const std::string& t) {
        return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    static const std::set<std::string> seasons = {"spring", "summer", "autumn", "winter"};
    std::size_t n_year = 0, n_season = 0, n_other = 0;
    for (const auto& t : times) {
        if (is_year(t)) ++n_year;
        else if (seasons.count(t)) ++n_season;
        else ++n_other;
    }
    std::vector<double> w;
    for (const auto& t : times) {
        if (is_year(t)) w.push_back(0.6 / static_cast<double>(n_year));
        else if (seasons.count(t)) w.push_back(0.2 / static_cast<double>(n_season));
        else w.push_back(0.2 / static_cast<double>(n_other));
    }
    return w;
}

namespace detail {

inline std::vector<std::string> sample_without_replacement(const std::vector<WeightedLabel>& pool, std::size_t k,
                                                           Rng& rng) {
    std::vector<double> w;
    for (const auto& p : pool) w.push_back(p.weight);
    std::vector<std::string> out;
    k = std::min(k, pool.size());
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t pick = rng.weighted(w);
        out.push_back(pool[pick].label);
        w[pick] = 0.0;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Largest-remainder quotas so the emitted activity marginal tracks the
// configured weights closely even for small graphs.
inline std::vector<std::size_t> quota_counts(const std::vector<double>& weights, std::size_t n, Rng& rng) {
    std::vector<std::size_t> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double exact = weights[i] * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        // random jitter breaks ties between equal remainders
        remainders.emplace_back(exact - std::floor(exact) + rng.uniform() * 1e-6, i);
    }
    std::sort(remainders.begin(), remainders.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; assigned < n && r < remainders.size(); ++r, ++assigned)
        counts[remainders[r].second] += 1;
    return counts;
}

}  // namespace detail

inline MemoryGraph generate_collection(const GenConfig& cfg) {
    if (cfg.n_clips < 1) throw ConfigError("gen_config.n_clips must be at least 1");
    validate(cfg.vocabulary);
    if (cfg.min_duration_s < 1 || cfg.max_duration_s < cfg.min_duration_s)
        throw ConfigError("gen_config duration bounds are invalid");
    const auto& vocab = cfg.vocabulary;
    Rng rng(cfg.seed);

    const auto act_w = resolved_activity_weights(cfg);
    const auto time_w = resolved_time_weights(cfg);
    auto counts = detail::quota_counts(act_w, cfg.n_clips, rng);
    std::vector<std::size_t> activity_of_clip;
    for (std::size_t a = 0; a < counts.size(); ++a)
        for (std::size_t k = 0; k < counts[a]; ++k) activity_of_clip.push_back(a);
    rng.shuffle(activity_of_clip.begin(), activity_of_clip.end());

    std::vector<Clip> clips;
    clips.reserve(cfg.n_clips);
    for (std::size_t i = 0; i < cfg.n_clips; ++i) {
        Clip c;
        c.id = "c" + std::to_string(i + 1);
        c.activity = vocab.activities[activity_of_clip[i]];
        const auto& co = vocab.cooccurrence.at(c.activity);
        c.time = vocab.times[rng.weighted(time_w)];
        c.location = detail::sample_without_replacement(co.locations, 1, rng).front();
        c.objects = detail::sample_without_replacement(co.objects, 1 + rng.weighted(cfg.object_count_weights), rng);
        std::vector<WeightedLabel> people;
        for (const auto& p : vocab.participants) people.push_back({p, 1.0});
        c.participants = detail::sample_without_replacement(people, rng.weighted(cfg.participant_count_weights), rng);
        c.attributes = detail::sample_without_replacement(co.attributes, rng.weighted(cfg.attribute_count_weights), rng);
        c.duration_s = rng.range(cfg.min_duration_s, cfg.max_duration_s);
        clips.push_back(std::move(c));
    }
    return MemoryGraph(cfg.graph_id, vocab, std::move(clips), cfg.seed);
}

// ---- ingestion ------------------------------------------------------------

// Reads {"categories":[{"name", "supercategory"}]}. Supercategory "activity"
// routes to activities, anything else to objects. Other vocabulary lists come
// from the defaults; co-occurrence becomes uniform over the new lists.
inline Vocabulary ingest_annotation_vocab(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, document.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (document[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw IngestionError(line, column, e.what());
    }
    if (!doc.is_object() || !doc.contains("categories") || !doc["categories"].is_array())
        throw ValidationError("annotation document has no \"categories\" array");
    if (doc["categories"].empty()) throw ValidationError("annotation document has an empty category list");

    Vocabulary v = default_vocabulary();
    std::vector<std::string> activities, objects;
    auto push_unique = [](std::vector<std::string>& l, std::string s) {
        if (std::find(l.begin(), l.end(), s) == l.end()) l.push_back(std::move(s));
    };
    for (const auto& cat : doc["categories"]) {
        if (!cat.is_object() || !cat.contains("name") || !cat["name"].is_string())
            throw ValidationError("annotation category without a string \"name\"");
        std::string name = cat["name"].get<std::string>();
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        if (!is_safe_label(name)) throw ValidationError("annotation category name '" + name + "' is not usable");
        const std::string super = cat.value("supercategory", std::string());
        if (super == "activity")
            push_unique(activities, std::move(name));
        else
            push_unique(objects, std::move(name));
    }
    if (objects.empty() && activities.empty()) throw ValidationError("annotation document has no categories");
    if (!activities.empty()) v.activities = activities;
    if (!objects.empty()) v.objects = objects;

    auto uniform = [](const std::vector<std::string>& l) {
        std::vector<WeightedLabel> out;
        // the last weight absorbs rounding so each list sums to exactly 1
        double acc = 0.0;
        for (std::size_t i = 0; i < l.size(); ++i) {
            double w = i + 1 == l.size() ? 1.0 - acc : 1.0 / static_cast<double>(l.size());
            acc += w;
            out.push_back({l[i], w});
        }
        return out;
    };
    v.cooccurrence.clear();
    for (const auto& a : v.activities) {
        auto it = default_vocabulary().cooccurrence.find(a);
        Cooccurrence co;
        co.objects = uniform(v.objects);
        if (it != default_vocabulary().cooccurrence.end()) {
            co.locations = it->second.locations;
            co.attributes = it->second.attributes;
        } else {
            co.locations = uniform(v.locations);
            co.attributes = uniform(v.attributes);
        }
        v.cooccurrence.emplace(a, std::move(co));
    }
    try {
        validate(v);
    } catch (const ConfigError& e) {
        throw ValidationError(std::string("ingested vocabulary is invalid: ") + e.what());
    }
    return v;
}

// ---- search ---------------------------------------------------------------

// Whether a clip satisfies one constraint key for every requested value.
inline bool clip_matches(const Clip& c, std::string_view key, const std::vector<std::string>& values) {
    auto contains = [](const std::vector<std::string>& l, const std::string& x) {
        return std::find(l.begin(), l.end(), x) != l.end();
    };
    for (const auto& v : values) {
        bool ok = false;
        if (key == slot::kActivity) ok = c.activity == v;
        else if (key == slot::kTime) ok = c.time == v;
        else if (key == slot::kLocation) ok = c.location == v;
        else if (key == slot::kObject) ok = contains(c.objects, v);
        else if (key == slot::kParticipant) ok = contains(c.participants, v);
        else if (key == slot::kAttribute) ok = contains(c.attributes, v);
        if (!ok) return false;
    }
    return true;
}

inline void validate_constraints(const Vocabulary& vocab, const SlotMap& constraints) {
    if (constraints.empty()) throw ValidationError("search requires at least one constraint");
    for (const auto& [k, vals] : constraints) {
        if (!slot::is_constraint_key(k)) throw ValidationError("unknown constraint key '" + k + "'");
        if (vals.empty()) throw ValidationError("constraint '" + k + "' has no value");
        if (!slot::is_multi_valued(k) && vals.size() > 1)
            throw ValidationError("constraint '" + k + "' takes a single value");
        for (const auto& v : vals)
            if (!vocab.contains(k, v)) throw ValidationError("constraint " + k + "=" + v + " is not in the vocabulary");
    }
}

// Conjunctive filter in graph order, minus excluded ids.
inline std::vector<Clip> search(const MemoryGraph& graph, const SlotMap& constraints,
                                const std::set<std::string>& exclude = {}) {
    validate_constraints(graph.vocabulary(), constraints);
    std::vector<Clip> out;
    for (const auto& c : graph.clips()) {
        if (exclude.count(c.id)) continue;
        bool ok = true;
        for (const auto& [k, vals] : constraints) {
            if (!clip_matches(c, k, vals)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(c);
    }
    return out;
}

}  // namespace ccc
