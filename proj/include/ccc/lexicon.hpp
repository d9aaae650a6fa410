#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccc/defaults.hpp"
#include "ccc/errors.hpp"
#include "ccc/frame.hpp"
#include "ccc/memory_graph.hpp"

namespace ccc {

using Tokens = std::vector<std::string>;

// Lower-cased word tokens; apostrophes stay inside words, other punctuation splits.
inline Tokens tokenize(std::string_view text) {
    Tokens out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || (ch == '\'' && !cur.empty()) || c >= 0x80) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    for (auto& t : out)
        while (!t.empty() && t.back() == '\'') t.pop_back();
    return out;
}

inline std::size_t word_count(std::string_view text) {
    std::size_t n = 0;
    bool in_word = false;
    for (char c : text) {
        const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

struct GazetteerEntry {
    Tokens tokens;
    std::string key;
    std::string label;
};

struct Lexicon {
    std::vector<Activity> trigger_priority;
    std::map<Activity, std::vector<std::string>> triggers;
    std::vector<std::pair<std::string, int>> ordinals;
    std::vector<std::string> mention_heads;
    std::vector<std::string> device_phrases;
    std::vector<std::string> carryover_phrases;
    std::vector<std::string> reference_cues;
    std::map<std::string, std::vector<std::string>> position_phrases;
    std::map<std::string, std::vector<std::string>> duration_changes;
    std::vector<std::string> duration_units;
    std::vector<std::string> share_targets;
    std::map<std::string, std::string> filter_phrases;
    std::map<std::string, std::map<std::string, std::string>> realize_positions;
    std::map<std::string, std::vector<std::string>> templates;
    std::vector<std::string> clarification;

    // Built from a Vocabulary by attach(); sorted longest first.
    std::vector<GazetteerEntry> gazetteer;

    // Words of an ordinal value, e.g. 2 -> "second", -2 -> "second to the last".
    std::string ordinal_word(int k) const {
        for (const auto& [w, v] : ordinals)
            if (v == k) return w;
        return {};
    }

    int priority_of(Activity a) const {
        auto it = std::find(trigger_priority.begin(), trigger_priority.end(), a);
        return static_cast<int>(it - trigger_priority.begin());
    }

    const std::vector<std::string>& templates_for(const std::string& key) const {
        auto it = templates.find(key);
        if (it == templates.end() || it->second.empty()) throw ConfigError("no templates for " + key);
        return it->second;
    }
};

inline void from_json(const json& j, Lexicon& l) {
    l = Lexicon{};
    for (const auto& a : j.at("trigger_priority")) {
        auto act = activity_from_string(a.get<std::string>());
        if (!act) throw ConfigError("lexicon.trigger_priority has unknown activity " + a.dump());
        l.trigger_priority.push_back(*act);
    }
    for (const auto& [k, v] : j.at("triggers").items()) {
        auto act = activity_from_string(k);
        if (!act) throw ConfigError("lexicon.triggers has unknown activity " + k);
        l.triggers[*act] = v.get<std::vector<std::string>>();
    }
    for (const auto& [k, v] : j.at("ordinals").items()) l.ordinals.emplace_back(k, v.get<int>());
    l.mention_heads = j.at("mention_heads").get<std::vector<std::string>>();
    l.device_phrases = j.at("device_phrases").get<std::vector<std::string>>();
    l.carryover_phrases = j.at("carryover_phrases").get<std::vector<std::string>>();
    l.reference_cues = j.at("reference_cues").get<std::vector<std::string>>();
    l.position_phrases = j.at("position_phrases").get<std::map<std::string, std::vector<std::string>>>();
    l.duration_changes = j.at("duration_changes").get<std::map<std::string, std::vector<std::string>>>();
    l.duration_units = j.at("duration_units").get<std::vector<std::string>>();
    l.share_targets = j.at("share_targets").get<std::vector<std::string>>();
    l.filter_phrases = j.at("filter_phrases").get<std::map<std::string, std::string>>();
    l.realize_positions = j.at("realize_positions").get<std::map<std::string, std::map<std::string, std::string>>>();
    l.templates = j.at("templates").get<std::map<std::string, std::vector<std::string>>>();
    l.clarification = j.value("clarification", std::vector<std::string>{});
}

// Trigger sets must be disjoint and every activity needs a priority slot.
inline void validate(const Lexicon& l) {
    std::map<std::string, Activity> owner;
    for (const auto& [act, phrases] : l.triggers) {
        for (const auto& p : phrases) {
            auto key = tokenize(p);
            std::string norm;
            for (const auto& t : key) norm += t + " ";
            auto [it, fresh] = owner.emplace(norm, act);
            if (!fresh && it->second != act)
                throw ConfigError("lexicon trigger '" + p + "' is shared by " + std::string(to_string(it->second)) +
                                  " and " + std::string(to_string(act)));
        }
    }
    for (Activity a : kAllActivities)
        if (std::find(l.trigger_priority.begin(), l.trigger_priority.end(), a) == l.trigger_priority.end())
            throw ConfigError("lexicon.trigger_priority is missing " + std::string(to_string(a)));
    if (l.clarification.empty()) throw ConfigError("lexicon.clarification is empty");
}

// Builds the slot-value gazetteer from a vocabulary. Labels must map to a
// single slot key, otherwise template inversion would be ambiguous.
inline Lexicon attach(Lexicon lex, const Vocabulary& vocab) {
    lex.gazetteer.clear();
    std::map<std::string, std::string> seen;
    auto add = [&](const std::vector<std::string>& labels, std::string_view key) {
        for (const auto& label : labels) {
            auto [it, fresh] = seen.emplace(label, std::string(key));
            if (!fresh && it->second != key)
                throw ConfigError("label '" + label + "' is used for both " + it->second + " and " + std::string(key));
            lex.gazetteer.push_back({tokenize(label), std::string(key), label});
        }
    };
    add(vocab.activities, slot::kActivity);
    add(vocab.times, slot::kTime);
    add(vocab.locations, slot::kLocation);
    add(vocab.objects, slot::kObject);
    add(vocab.participants, slot::kParticipant);
    add(vocab.attributes, slot::kAttribute);
    add(lex.share_targets, slot::kShareTo);
    std::stable_sort(lex.gazetteer.begin(), lex.gazetteer.end(),
                     [](const GazetteerEntry& a, const GazetteerEntry& b) { return a.tokens.size() > b.tokens.size(); });
    return lex;
}

inline const Lexicon& default_lexicon() {
    static const Lexicon l = [] {
        Lexicon out = json::parse(defaults::kLexiconJson).get<Lexicon>();
        validate(out);
        return attach(std::move(out), default_vocabulary());
    }();
    return l;
}

inline Lexicon load_lexicon(const std::string& path, const Vocabulary& vocab) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    Lexicon l;
    try {
        l = json::parse(ss.str()).get<Lexicon>();
    } catch (const json::exception& e) {
        throw ConfigError("lexicon file " + path + ": " + e.what());
    }
    validate(l);
    return attach(std::move(l), vocab);
}

}  // namespace ccc
