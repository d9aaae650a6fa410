#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "ccc/dialog.hpp"
#include "ccc/frame.hpp"
#include "ccc/lexicon.hpp"
#include "ccc/memory_graph.hpp"
#include "ccc/rng.hpp"
#include "ccc/story_engine.hpp"

namespace ccc {

// Key used for the first row of the transition table.
inline constexpr std::string_view kStartState = "START";

struct SimConfig {
    // previous user activity (or START) -> weights over next activities.
    // Rows left out fall back to uniform with self-transition damping.
    std::map<std::string, std::map<std::string, double>> activity_transition;
    double self_transition_damping = 0.5;
    int min_utterances = 8;
    double mean_utterances = 13.5;
    int max_utterances = 30;
    std::vector<double> slots_per_request = {0.3, 0.45, 0.25};  // 1..3 slots
    std::map<std::string, double> mention_type_weights = {
        {"ADJECTIVAL", 0.6}, {"ORDINAL", 0.25}, {"DEVICE_CONTEXT", 0.08}, {"CARRYOVER", 0.07}};
    std::vector<double> coref_lookback_weights = {0.35, 0.3, 0.2, 0.15};
    std::vector<double> story_size_weights = {0.03, 0.07, 0.12, 0.16, 0.18, 0.16, 0.14, 0.14};  // 1..8 clips
    double no_results_rate = 0.05;
    double refine_after_no_results = 0.85;
    double second_target_rate = 0.08;
    double replace_reference_rate = 0.5;
    double add_position_rate = 0.4;
    double duration_absolute_rate = 0.5;
    // Mentions favor clips not touched for a while: weight = age^staleness.
    double target_staleness = 4.0;
    // REFINE narrows around a clip already in the story, otherwise it re-targets anywhere.
    double refine_narrow_rate = 0.85;
    std::size_t adjectival_max_matches = 2;  // largest clip group one descriptor may denote
    std::vector<int> duration_choices = {5, 8, 10, 12, 15, 20, 30};
    std::uint64_t seed = 0;
};

inline void to_json(json& j, const SimConfig& c) {
    j = json{{"activity_transition", c.activity_transition},
             {"self_transition_damping", c.self_transition_damping},
             {"target_turns", {{"min_utterances", c.min_utterances},
                               {"mean_utterances", c.mean_utterances},
                               {"max_utterances", c.max_utterances}}},
             {"slots_per_request", c.slots_per_request},
             {"mention_type_weights", c.mention_type_weights},
             {"coref_lookback_weights", c.coref_lookback_weights},
             {"story_size_weights", c.story_size_weights},
             {"no_results_rate", c.no_results_rate},
             {"refine_after_no_results", c.refine_after_no_results},
             {"second_target_rate", c.second_target_rate},
             {"replace_reference_rate", c.replace_reference_rate},
             {"add_position_rate", c.add_position_rate},
             {"duration_absolute_rate", c.duration_absolute_rate},
             {"target_staleness", c.target_staleness},
             {"refine_narrow_rate", c.refine_narrow_rate},
             {"adjectival_max_matches", c.adjectival_max_matches},
             {"duration_choices", c.duration_choices},
             {"seed", c.seed}};
}

// Missing fields keep their defaults.
inline void from_json(const json& j, SimConfig& c) {
    c = SimConfig{};
    auto get = [&](const char* k, auto& field) {
        if (j.contains(k)) field = j.at(k).get<std::decay_t<decltype(field)>>();
    };
    get("activity_transition", c.activity_transition);
    get("self_transition_damping", c.self_transition_damping);
    if (j.contains("target_turns")) {
        const auto& t = j.at("target_turns");
        c.min_utterances = t.value("min_utterances", c.min_utterances);
        c.mean_utterances = t.value("mean_utterances", c.mean_utterances);
        c.max_utterances = t.value("max_utterances", c.max_utterances);
    }
    get("slots_per_request", c.slots_per_request);
    get("mention_type_weights", c.mention_type_weights);
    get("coref_lookback_weights", c.coref_lookback_weights);
    get("story_size_weights", c.story_size_weights);
    get("no_results_rate", c.no_results_rate);
    get("refine_after_no_results", c.refine_after_no_results);
    get("second_target_rate", c.second_target_rate);
    get("replace_reference_rate", c.replace_reference_rate);
    get("add_position_rate", c.add_position_rate);
    get("duration_absolute_rate", c.duration_absolute_rate);
    get("target_staleness", c.target_staleness);
    get("refine_narrow_rate", c.refine_narrow_rate);
    get("adjectival_max_matches", c.adjectival_max_matches);
    get("duration_choices", c.duration_choices);
    get("seed", c.seed);
}

inline void validate(const SimConfig& c) {
    auto positive_sum = [](const std::vector<double>& w, const char* name) {
        double s = 0.0;
        for (double x : w) {
            if (x < 0.0) throw ConfigError(std::string("sim_config.") + name + " has a negative weight");
            s += x;
        }
        if (!(s > 0.0)) throw ConfigError(std::string("sim_config.") + name + " has no positive weight");
    };
    positive_sum(c.slots_per_request, "slots_per_request");
    if (c.slots_per_request.size() > 3) throw ConfigError("sim_config.slots_per_request covers 1..3 slots only");
    positive_sum(c.coref_lookback_weights, "coref_lookback_weights");
    positive_sum(c.story_size_weights, "story_size_weights");
    std::vector<double> mt;
    for (const auto& [k, w] : c.mention_type_weights) {
        auto m = mention_type_from_string(k);
        if (!m || *m == MentionType::Unspecified) throw ConfigError("sim_config.mention_type_weights has unknown type " + k);
        mt.push_back(w);
    }
    positive_sum(mt, "mention_type_weights");
    for (const auto& [row, dist] : c.activity_transition) {
        if (row != kStartState && !activity_from_string(row))
            throw ConfigError("sim_config.activity_transition has unknown row " + row);
        std::vector<double> w;
        for (const auto& [k, v] : dist) {
            if (!activity_from_string(k)) throw ConfigError("sim_config.activity_transition." + row + " has unknown activity " + k);
            w.push_back(v);
        }
        positive_sum(w, "activity_transition row");
    }
    if (c.min_utterances < 2 || c.max_utterances < c.min_utterances || c.mean_utterances < c.min_utterances ||
        c.mean_utterances > c.max_utterances)
        throw ConfigError("sim_config.target_turns bounds are inconsistent");
    for (double p : {c.no_results_rate, c.refine_after_no_results, c.second_target_rate, c.replace_reference_rate,
                     c.add_position_rate, c.duration_absolute_rate, c.refine_narrow_rate, c.self_transition_damping})
        if (p < 0.0 || p > 1.0) throw ConfigError("sim_config probabilities must lie in [0, 1]");
    if (c.adjectival_max_matches < 1) throw ConfigError("sim_config.adjectival_max_matches must be at least 1");
    if (c.target_staleness < 0.0) throw ConfigError("sim_config.target_staleness must be non-negative");
    if (c.duration_choices.empty()) throw ConfigError("sim_config.duration_choices is empty");
}

struct PlannedMove {
    Activity activity = Activity::CreateStory;
    bool expect_no_results = false;
};

// Goal stack of planned user moves plus the remaining user-turn budget.
struct Agenda {
    std::deque<PlannedMove> stack;
    int remaining_turns = 0;
    std::optional<Activity> previous;
};

// ---- realization ----------------------------------------------------------

namespace detail {

inline void replace_all(std::string& s, const std::string& from, const std::string& to) {
    for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
}

inline std::vector<std::string> placeholders_of(const std::string& tmpl) {
    std::vector<std::string> out;
    for (std::size_t p = tmpl.find('{'); p != std::string::npos; p = tmpl.find('{', p + 1)) {
        auto q = tmpl.find('}', p);
        if (q == std::string::npos) break;
        out.push_back(tmpl.substr(p + 1, q - p - 1));
    }
    return out;
}

inline std::string join_and(const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += i + 1 == items.size() ? " and " : ", ";
        s += items[i];
    }
    return s;
}

inline std::string with_article(const std::string& noun) {
    if (noun.empty()) return noun;
    const char c = noun.front();
    const bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
    return (vowel ? "an " : "a ") + noun;
}

// " in 2018 at the beach with mom and dad featuring a dog with sunset scenery"
inline std::string render_filters(const SlotMap& constraints, const Lexicon& lex) {
    std::string out;
    for (const char* key : {"time", "location", "participant", "object", "attribute"}) {
        auto it = constraints.find(key);
        if (it == constraints.end()) continue;
        auto phrase = lex.filter_phrases.find(key);
        if (phrase == lex.filter_phrases.end()) throw ConfigError(std::string("lexicon has no filter phrase for ") + key);
        std::vector<std::string> values = it->second;
        if (std::string_view(key) == "object")
            for (auto& v : values) v = with_article(v);
        std::string p = phrase->second;
        replace_all(p, "{v}", join_and(values));
        out += p;
    }
    return out;
}

inline std::string render_query(const SlotMap& constraints, const Lexicon& lex) {
    auto act = slot_value(constraints, slot::kActivity);
    return (act ? *act + " clips" : std::string("clips")) + render_filters(constraints, lex);
}

inline std::string mentions_for(const Frame& f, Role r) {
    std::vector<std::string> texts;
    for (const auto& ref : f.refs)
        if (ref.role == r) texts.push_back(ref.mention_text);
    return join_and(texts);
}

inline std::string clips_phrase(const std::string& count) { return count + (count == "1" ? " clip" : " clips"); }

}  // namespace detail

// Templates whose content placeholders match exactly what the frame carries.
inline std::vector<std::string> compatible_templates(const Frame& f, const Lexicon& lex) {
    std::vector<std::string> out;
    if (f.intent.act == Act::Inform) {
        const auto status = slot_value(f.slots, slot::kStatus).value_or("ok");
        const std::string specific = "INFORM:" + std::string(to_string(f.intent.activity)) + ":" + status;
        auto it = lex.templates.find(specific);
        if (it == lex.templates.end()) it = lex.templates.find("INFORM:*:" + status);
        if (it == lex.templates.end() || it->second.empty()) throw ConfigError("no templates for " + specific);
        for (const auto& t : it->second) {
            const auto ph = detail::placeholders_of(t);
            const bool needs_count = std::any_of(ph.begin(), ph.end(), [](auto& p) { return p == "count" || p == "clips"; });
            if (needs_count && !f.slots.count(std::string(slot::kCount))) continue;
            out.push_back(t);
        }
        if (out.empty()) throw ConfigError("no usable template for " + specific);
        return out;
    }
    const auto& all = lex.templates_for(to_string(f.intent));
    const auto constraints = constraints_of(f.slots);
    std::set<std::string> have;
    if (!constraints.empty()) have.insert("query");
    if (f.has_role(Role::Target)) have.insert("target");
    if (f.has_role(Role::Reference)) have.insert("reference");
    if (f.slots.count(std::string(slot::kPosition))) have.insert("position");
    if (f.slots.count(std::string(slot::kDurationS))) have.insert("seconds");
    if (f.slots.count(std::string(slot::kDurationChange))) have.insert("change");
    if (f.slots.count(std::string(slot::kShareTo))) have.insert("share_to");
    for (const auto& t : all) {
        std::set<std::string> used;
        bool ok = true;
        for (const auto& p : detail::placeholders_of(t)) {
            if (p == "activity") {
                ok = ok && slot_value(constraints, slot::kActivity).has_value();
                used.insert("query");
            } else if (p == "filters") {
                used.insert("query");
            } else {
                used.insert(p);
            }
        }
        if (ok && used == have) out.push_back(t);
    }
    if (out.empty()) throw ConfigError("no template fits " + to_string(f.intent));
    return out;
}

inline std::string fill_template(std::string t, const Frame& f, const Lexicon& lex) {
    const auto constraints = constraints_of(f.slots);
    if (f.intent.act == Act::Inform) {
        const auto count = slot_value(f.slots, slot::kCount).value_or("0");
        detail::replace_all(t, "{clips}", detail::clips_phrase(count));
        detail::replace_all(t, "{count}", count);
        return t;
    }
    if (auto pos = slot_value(f.slots, slot::kPosition)) {
        auto rp = lex.realize_positions.find(std::string(to_string(f.intent.activity)));
        if (rp == lex.realize_positions.end() || !rp->second.count(*pos))
            throw ConfigError("lexicon has no position phrase for " + std::string(to_string(f.intent.activity)));
        std::string phrase = rp->second.at(*pos);
        detail::replace_all(phrase, "{anchor}", detail::mentions_for(f, Role::Anchor));
        detail::replace_all(t, "{position}", phrase);
    }
    detail::replace_all(t, "{target}", detail::mentions_for(f, Role::Target));
    detail::replace_all(t, "{reference}", detail::mentions_for(f, Role::Reference));
    detail::replace_all(t, "{activity}", slot_value(constraints, slot::kActivity).value_or(""));
    SlotMap rest = constraints;
    rest.erase(std::string(slot::kActivity));
    detail::replace_all(t, "{filters}", detail::render_filters(rest, lex));
    detail::replace_all(t, "{query}", detail::render_query(constraints, lex));
    detail::replace_all(t, "{seconds}", slot_value(f.slots, slot::kDurationS).value_or(""));
    detail::replace_all(t, "{change}", slot_value(f.slots, slot::kDurationChange).value_or(""));
    detail::replace_all(t, "{share_to}", slot_value(f.slots, slot::kShareTo).value_or(""));
    return t;
}

// Deterministic variant: the choice indexes the compatible templates (mod their count).
inline std::string realize(const Frame& f, const Lexicon& lex, std::size_t choice) {
    const auto options = compatible_templates(f, lex);
    return fill_template(options[choice % options.size()], f, lex);
}

inline std::string realize(const Frame& f, const StoryState& /*state*/, const Lexicon& lex, Rng& rng) {
    const auto options = compatible_templates(f, lex);
    return fill_template(options[rng.index(options.size())], f, lex);
}

// ---- simulation -----------------------------------------------------------

class DialogSimulator {
public:
    DialogSimulator(const MemoryGraph& graph, SimConfig config, const Lexicon& lexicon = default_lexicon(),
                    EngineConfig engine = {})
        : graph_(graph), cfg_(std::move(config)), lex_(lexicon), engine_(engine) {
        validate(cfg_);
        std::set<std::string> acts;
        for (const auto& c : graph_.clips()) acts.insert(c.activity);
        if (acts.size() < 2)
            throw SimulationError("memory graph " + graph_.graph_id() + " has " + std::to_string(acts.size()) +
                                  " distinct activities; generate a larger graph (at least 2 activities needed)");
        for (const auto& [k, w] : cfg_.mention_type_weights) {
            mention_types_.push_back(*mention_type_from_string(k));
            mention_weights_.push_back(w);
        }
    }

    const SimConfig& config() const { return cfg_; }

    // min + Binomial(max - min, p) user turns, p chosen to hit the mean.
    int sample_user_turn_budget(Rng& rng) const {
        const int lo = (cfg_.min_utterances + 1) / 2;
        const int hi = cfg_.max_utterances / 2;
        if (hi <= lo) return lo;
        const double p = std::clamp((cfg_.mean_utterances / 2.0 - lo) / (hi - lo), 0.0, 1.0);
        int turns = lo;
        for (int i = lo; i < hi; ++i) turns += rng.bernoulli(p);
        return turns;
    }

    Dialog simulate(std::uint64_t seed, std::string dialog_id) const {
        Rng rng(seed);
        Dialog d;
        d.dialog_id = std::move(dialog_id);
        d.graph_id = graph_.graph_id();
        d.graph_seed = graph_.seed();
        Agenda agenda;
        agenda.stack.push_back({Activity::CreateStory, false});
        agenda.remaining_turns = sample_user_turn_budget(rng);

        StoryState state;
        while (agenda.remaining_turns-- > 0) {
            Frame user = sample_user_frame(agenda, state, d.turns, rng);
            Turn ut;
            ut.turn_id = static_cast<int>(d.turns.size()) + 1;
            ut.speaker = Speaker::User;
            ut.template_utterance = realize(user, state, lex_, rng);
            ut.frame = user;
            ut.api_call = user;
            ut.story_snapshot = state;
            d.turns.push_back(ut);

            auto [next, result] = execute(state, user, graph_, engine_);
            Turn at;
            at.turn_id = static_cast<int>(d.turns.size()) + 1;
            at.speaker = Speaker::Assistant;
            at.frame = assistant_frame(result, user);
            at.template_utterance = realize(*at.frame, next, lex_, rng);
            at.execution_result = result;
            at.story_snapshot = next;
            d.turns.push_back(at);

            if (result.status == ExecStatus::NoResults && rng.bernoulli(cfg_.refine_after_no_results))
                agenda.stack.push_front({Activity::RefineSearch, false});
            agenda.previous = user.intent.activity;
            state = std::move(next);
        }
        return d;
    }

    // Draws the next user frame; the emitted clip ids are the gold resolution.
    Frame sample_user_frame(Agenda& agenda, const StoryState& state, const std::vector<Turn>& history, Rng& rng) const {
        const auto applicable = applicable_activities(state);
        std::set<Activity> ruled_out;
        while (!agenda.stack.empty()) {
            PlannedMove move = agenda.stack.front();
            agenda.stack.pop_front();
            if (!applicable.count(move.activity)) continue;
            if (auto f = try_activity(move.activity, move.expect_no_results, state, history, rng)) return *f;
            ruled_out.insert(move.activity);
        }
        for (;;) {
            std::vector<Activity> options;
            std::vector<double> weights;
            for (Activity a : applicable) {
                if (ruled_out.count(a)) continue;
                options.push_back(a);
                weights.push_back(transition_weight(agenda.previous, a));
            }
            if (options.empty()) throw SimulationError("no realizable activity; generate a larger memory graph");
            const bool all_zero = std::all_of(weights.begin(), weights.end(), [](double w) { return w <= 0.0; });
            const Activity a = all_zero ? options[rng.index(options.size())] : options[rng.weighted(weights)];
            const bool searchy = a == Activity::CreateStory || a == Activity::AddClips || a == Activity::RefineSearch;
            const bool no_results = searchy && rng.bernoulli(cfg_.no_results_rate);
            if (auto f = try_activity(a, no_results, state, history, rng)) return *f;
            if (no_results)
                if (auto f = try_activity(a, false, state, history, rng)) return *f;
            ruled_out.insert(a);
        }
    }

    double transition_weight(std::optional<Activity> previous, Activity next) const {
        const std::string row = previous ? std::string(to_string(*previous)) : std::string(kStartState);
        auto it = cfg_.activity_transition.find(row);
        if (it != cfg_.activity_transition.end()) {
            auto w = it->second.find(std::string(to_string(next)));
            return w == it->second.end() ? 0.0 : w->second;
        }
        return previous && *previous == next ? cfg_.self_transition_damping : 1.0;
    }

private:
    static constexpr int kAttempts = 12;

    std::optional<Frame> try_activity(Activity a, bool no_results, const StoryState& state,
                                      const std::vector<Turn>& history, Rng& rng) const {
        for (int attempt = 0; attempt < kAttempts; ++attempt) {
            auto f = build(a, no_results, state, history, rng);
            if (!f) continue;
            if (!schema_violation(*f).empty()) continue;
            auto [next, result] = execute(state, *f, graph_, engine_);
            const auto want = no_results ? ExecStatus::NoResults : ExecStatus::Ok;
            if (result.status != want) continue;
            if (a == Activity::ReorderClips && next.entries == state.entries) continue;
            return f;
        }
        return std::nullopt;
    }

    std::optional<Frame> build(Activity a, bool no_results, const StoryState& state, const std::vector<Turn>& history,
                               Rng& rng) const {
        Frame f;
        f.intent = {Act::Request, a};
        switch (a) {
            case Activity::CreateStory: {
                auto q = no_results ? overconstrained_query({}, state, rng) : sized_query(rng);
                if (!q) return std::nullopt;
                f.slots = *q;
                break;
            }
            case Activity::AddClips: {
                auto q = no_results ? overconstrained_query({}, state, rng) : add_query(state, rng);
                if (!q) return std::nullopt;
                f.slots = *q;
                if (rng.bernoulli(cfg_.add_position_rate)) {
                    static const char* kPositions[] = {"first", "last", "before", "after"};
                    const std::string pos = kPositions[rng.index(4)];
                    set_slot(f.slots, slot::kPosition, pos);
                    if (pos == "before" || pos == "after") {
                        auto anchor = mention(state, history, rng, Role::Anchor, true, {});
                        if (!anchor) return std::nullopt;
                        f.refs.push_back(*anchor);
                    }
                }
                break;
            }
            case Activity::RemoveClips:
            case Activity::ModifyDuration: {
                auto t = mention(state, history, rng, Role::Target, false, {});
                if (!t) return std::nullopt;
                f.refs.push_back(*t);
                if (state.entries.size() > t->clip_ids.size() + 1 && rng.bernoulli(cfg_.second_target_rate)) {
                    std::set<std::string> taken(t->clip_ids.begin(), t->clip_ids.end());
                    if (auto t2 = mention(state, history, rng, Role::Target, false, taken)) f.refs.push_back(*t2);
                }
                if (a == Activity::ModifyDuration) {
                    if (rng.bernoulli(cfg_.duration_absolute_rate))
                        set_slot(f.slots, slot::kDurationS,
                                 std::to_string(cfg_.duration_choices[rng.index(cfg_.duration_choices.size())]));
                    else
                        set_slot(f.slots, slot::kDurationChange, rng.bernoulli(0.5) ? "shorter" : "longer");
                }
                break;
            }
            case Activity::ReplaceClips: {
                auto t = mention(state, history, rng, Role::Target, false, {});
                if (!t) return std::nullopt;
                f.refs.push_back(*t);
                std::set<std::string> taken(t->clip_ids.begin(), t->clip_ids.end());
                if (state.entries.size() > taken.size() && rng.bernoulli(cfg_.replace_reference_rate)) {
                    auto r = mention(state, history, rng, Role::Reference, true, taken);
                    if (!r) return std::nullopt;
                    f.refs.push_back(*r);
                } else {
                    auto q = add_query(state, rng);
                    if (!q) return std::nullopt;
                    f.slots = *q;
                }
                break;
            }
            case Activity::ReorderClips: {
                auto t = mention(state, history, rng, Role::Target, true, {});
                if (!t) return std::nullopt;
                f.refs.push_back(*t);
                static const char* kPositions[] = {"first", "last", "before", "after"};
                const std::string pos = kPositions[rng.index(4)];
                set_slot(f.slots, slot::kPosition, pos);
                if (pos == "before" || pos == "after") {
                    std::set<std::string> taken(t->clip_ids.begin(), t->clip_ids.end());
                    auto anchor = mention(state, history, rng, Role::Anchor, true, taken);
                    if (!anchor) return std::nullopt;
                    f.refs.push_back(*anchor);
                }
                break;
            }
            case Activity::RefineSearch: {
                auto q = no_results ? overconstrained_query(state.last_search, state, rng) : refine_query(state, rng);
                if (!q) return std::nullopt;
                f.slots = *q;
                break;
            }
            case Activity::ShareStory:
                set_slot(f.slots, slot::kShareTo, lex_.share_targets[rng.index(lex_.share_targets.size())]);
                break;
        }
        normalize(f.slots);
        return f;
    }

    // (key, value) features of a clip that can become search constraints.
    static std::vector<std::pair<std::string, std::string>> features_of(const Clip& c) {
        std::vector<std::pair<std::string, std::string>> out;
        out.emplace_back(slot::kTime, c.time);
        out.emplace_back(slot::kLocation, c.location);
        for (const auto& p : c.participants) out.emplace_back(slot::kParticipant, p);
        for (const auto& o : c.objects) out.emplace_back(slot::kObject, o);
        for (const auto& a : c.attributes) out.emplace_back(slot::kAttribute, a);
        return out;
    }

    std::size_t sample_slot_count(Rng& rng) const { return 1 + rng.weighted(cfg_.slots_per_request); }

    // Random constraint sets describing `seed`, with `k` slots in total.
    SlotMap random_description(const Clip& seed, std::size_t k, bool with_activity, Rng& rng) const {
        SlotMap q;
        if (with_activity) set_slot(q, slot::kActivity, seed.activity);
        auto feats = features_of(seed);
        rng.shuffle(feats.begin(), feats.end());
        for (const auto& [key, value] : feats) {
            std::size_t have = 0;
            for (const auto& [_, v] : q) have += v.size();
            if (have >= k) break;
            if (q.count(key) && !slot::is_multi_valued(key)) continue;
            add_slot(q, key, value);
        }
        return q;
    }

    // CREATE query whose hit count lands near a sampled story size.
    std::optional<SlotMap> sized_query(Rng& rng) const {
        const std::size_t target = 1 + rng.weighted(cfg_.story_size_weights);
        const std::size_t k = sample_slot_count(rng);
        const Clip& seed = graph_.clips()[rng.index(graph_.clips().size())];
        std::optional<SlotMap> best;
        std::size_t best_gap = SIZE_MAX;
        for (int i = 0; i < 8; ++i) {
            auto q = random_description(seed, k, true, rng);
            const auto hits = std::min(search(graph_, q).size(), engine_.max_story_clips);
            const auto gap = hits > target ? hits - target : target - hits;
            if (gap < best_gap) {
                best_gap = gap;
                best = std::move(q);
            }
        }
        return best;
    }

    // Query for clips not yet in the story; prefers small hit counts.
    std::optional<SlotMap> add_query(const StoryState& state, Rng& rng) const {
        std::vector<const Clip*> outside;
        for (const auto& c : graph_.clips())
            if (!state.contains(c.id)) outside.push_back(&c);
        if (outside.empty()) return std::nullopt;
        const Clip& seed = *outside[rng.index(outside.size())];
        const auto ids = state.clip_ids();
        const std::set<std::string> exclude(ids.begin(), ids.end());
        const std::size_t k = sample_slot_count(rng);
        std::optional<SlotMap> best;
        std::size_t best_hits = SIZE_MAX;
        for (int i = 0; i < 4; ++i) {
            auto q = random_description(seed, k, rng.bernoulli(0.75), rng);
            if (q.empty()) continue;
            const auto hits = search(graph_, q, exclude).size();
            if (hits >= 1 && hits < best_hits) {
                best_hits = hits;
                best = std::move(q);
            }
        }
        return best;
    }

    // Override the carried search so it lands on some clip, targeting a fresh story size.
    std::optional<SlotMap> refine_query(const StoryState& state, Rng& rng) const {
        const std::size_t target = 1 + rng.weighted(cfg_.story_size_weights);
        std::optional<SlotMap> best;
        std::size_t best_gap = SIZE_MAX;
        const bool narrow = !state.entries.empty() && rng.bernoulli(cfg_.refine_narrow_rate);
        for (int i = 0; i < 6; ++i) {
            const Clip* pick = narrow ? graph_.find(state.entries[rng.index(state.entries.size())].clip_id)
                                      : &graph_.clips()[rng.index(graph_.clips().size())];
            if (!pick) continue;
            const Clip& c = *pick;
            SlotMap update;
            for (const auto& [key, values] : state.last_search) {
                if (clip_matches(c, key, values)) continue;
                if (key == slot::kActivity) set_slot(update, key, c.activity);
                else if (key == slot::kTime) set_slot(update, key, c.time);
                else if (key == slot::kLocation) set_slot(update, key, c.location);
                else {
                    const auto& pool = key == slot::kObject ? c.objects : key == slot::kParticipant ? c.participants : c.attributes;
                    if (pool.empty()) {
                        update.clear();
                        break;
                    }
                    set_slot(update, key, pool[rng.index(pool.size())]);
                }
            }
            if (update.empty() || rng.bernoulli(0.3)) {
                auto feats = features_of(c);
                rng.shuffle(feats.begin(), feats.end());
                for (const auto& [key, value] : feats) {
                    if (state.last_search.count(key) || update.count(key)) continue;
                    set_slot(update, key, value);
                    break;
                }
            }
            if (update.empty()) continue;
            const auto merged = merge_override(state.last_search, update);
            if (!clip_matches_all(c, merged)) continue;
            const auto hits = std::min(search(graph_, merged).size(), engine_.max_story_clips);
            const auto gap = hits > target ? hits - target : target - hits;
            if (gap < best_gap) {
                best_gap = gap;
                best = std::move(update);
            }
        }
        return best;
    }

    static bool clip_matches_all(const Clip& c, const SlotMap& q) {
        for (const auto& [k, v] : q)
            if (!clip_matches(c, k, v)) return false;
        return true;
    }

    // Deliberately unsatisfiable query: a real activity paired with a time it never occurs in.
    std::optional<SlotMap> overconstrained_query(const SlotMap& base, const StoryState& state, Rng& rng) const {
        const auto& vocab = graph_.vocabulary();
        for (int i = 0; i < 16; ++i) {
            SlotMap update;
            if (!base.count(std::string(slot::kActivity)) || rng.bernoulli(0.5))
                set_slot(update, slot::kActivity, graph_.clips()[rng.index(graph_.clips().size())].activity);
            set_slot(update, slot::kTime, vocab.times[rng.index(vocab.times.size())]);
            const auto merged = merge_override(base, update);
            const auto ids = state.clip_ids();
            if (search(graph_, merged, std::set<std::string>(ids.begin(), ids.end())).empty() &&
                search(graph_, merged).empty())
                return update;
        }
        return std::nullopt;
    }

    // A clip mention of a sampled type. Singleton mentions resolve to exactly one clip.
    std::optional<ClipRef> mention(const StoryState& state, const std::vector<Turn>& history, Rng& rng, Role role,
                                   bool singleton, const std::set<std::string>& avoid) const {
        if (state.entries.empty()) return std::nullopt;
        const auto type = mention_types_[rng.weighted(mention_weights_)];
        std::optional<ClipRef> ref;
        switch (type) {
            case MentionType::DeviceContext: ref = device_mention(state); break;
            case MentionType::Adjectival: ref = adjectival_mention(state, history, rng, singleton, avoid); break;
            case MentionType::Carryover: ref = carryover_mention(state, history, rng); break;
            default: break;
        }
        auto clashes = [&](const ClipRef& r) {
            return std::any_of(r.clip_ids.begin(), r.clip_ids.end(), [&](const std::string& id) { return avoid.count(id) > 0; });
        };
        if (!ref || clashes(*ref)) ref = ordinal_mention(state, history, rng, avoid);
        if (!ref) return std::nullopt;
        ref->role = role;
        return ref;
    }

    std::optional<ClipRef> device_mention(const StoryState& state) const {
        auto v = state.viewer_clip();
        if (!v || lex_.device_phrases.empty()) return std::nullopt;
        // the choice of phrase is folded into the clip id hash to avoid consuming randomness
        const auto& phrase = lex_.device_phrases[fnv1a(*v) % lex_.device_phrases.size()];
        return ClipRef{{*v}, Role::Target, MentionType::DeviceContext, phrase};
    }

    // Utterances since each story entry was last referenced or added.
    static std::vector<double> entry_ages(const StoryState& state, const std::vector<Turn>& history) {
        std::vector<double> ages;
        for (const auto& e : state.entries) {
            double age = static_cast<double>(history.size()) + 1.0;
            for (std::size_t back = history.size(); back-- > 0;) {
                const auto& t = history[back];
                bool hit = false;
                if (t.speaker == Speaker::User && t.frame) {
                    for (const auto& r : t.frame->refs)
                        hit = hit || std::find(r.clip_ids.begin(), r.clip_ids.end(), e.clip_id) != r.clip_ids.end();
                } else if (t.execution_result) {
                    const auto& a = t.execution_result->added;
                    hit = std::find(a.begin(), a.end(), e.clip_id) != a.end();
                }
                if (hit) {
                    age = static_cast<double>(history.size() - back);
                    break;
                }
            }
            ages.push_back(age);
        }
        return ages;
    }

    // Entry indices in a random order biased toward stale clips.
    std::vector<std::size_t> stale_order(const StoryState& state, const std::vector<Turn>& history, Rng& rng) const {
        auto w = entry_ages(state, history);
        for (auto& x : w) x = std::pow(x, cfg_.target_staleness);
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const auto i = rng.weighted(w);
            order.push_back(i);
            w[i] = 0.0;
        }
        return order;
    }

    std::optional<ClipRef> ordinal_mention(const StoryState& state, const std::vector<Turn>& history, Rng& rng,
                                           const std::set<std::string>& avoid) const {
        std::optional<std::size_t> pick;
        for (auto i : stale_order(state, history, rng))
            if (!avoid.count(state.entries[i].clip_id)) {
                pick = i;
                break;
            }
        if (!pick) return std::nullopt;
        const auto idx = *pick;
        const auto n = state.entries.size();
        int k = static_cast<int>(idx) + 1;
        if (n >= 2 && idx + 1 == n && rng.bernoulli(0.7)) k = -1;
        else if (n >= 3 && idx + 2 == n && rng.bernoulli(0.4)) k = -2;
        std::string word = lex_.ordinal_word(k);
        if (word.empty()) word = lex_.ordinal_word(static_cast<int>(idx) - static_cast<int>(n));
        if (word.empty()) return std::nullopt;
        const char* head = (k == -2 || rng.bernoulli(0.4)) ? "one" : "clip";
        return ClipRef{{state.entries[idx].clip_id}, Role::Target, MentionType::Ordinal, "the " + word + " " + head};
    }

    std::optional<ClipRef> adjectival_mention(const StoryState& state, const std::vector<Turn>& history, Rng& rng,
                                              bool singleton, const std::set<std::string>& avoid) const {
        for (auto i : stale_order(state, history, rng)) {
            const Clip* c = graph_.find(state.entries[i].clip_id);
            if (!c || avoid.count(c->id)) continue;
            std::vector<std::string> descriptors = c->attributes;
            descriptors.push_back(c->activity);
            rng.shuffle(descriptors.begin(), descriptors.end());
            for (const auto& d : descriptors) {
                std::vector<std::string> ids;
                for (const auto& s : state.entries) {
                    const Clip* sc = graph_.find(s.clip_id);
                    if (sc && (sc->activity == d || sc->has_attribute(d))) ids.push_back(s.clip_id);
                }
                if (singleton && ids.size() != 1) continue;
                if (ids.size() > cfg_.adjectival_max_matches) continue;
                if (std::any_of(ids.begin(), ids.end(), [&](const std::string& id) { return avoid.count(id) > 0; }))
                    continue;
                const bool plural = ids.size() > 1;
                const char* head = plural ? (rng.bernoulli(0.5) ? "clips" : "ones") : (rng.bernoulli(0.5) ? "clip" : "one");
                return ClipRef{std::move(ids), Role::Target, MentionType::Adjectival, "the " + d + " " + head};
            }
        }
        return std::nullopt;
    }

    std::optional<ClipRef> carryover_mention(const StoryState& state, const std::vector<Turn>& history, Rng& rng) const {
        const auto cands = carryover_candidates(history, state);
        if (cands.empty() || lex_.carryover_phrases.empty()) return std::nullopt;
        std::vector<double> w(cfg_.coref_lookback_weights.begin(),
                              cfg_.coref_lookback_weights.begin() +
                                  static_cast<std::ptrdiff_t>(std::min(cands.size(), cfg_.coref_lookback_weights.size())));
        const auto& id = cands[rng.weighted(w)];
        const auto& phrase = lex_.carryover_phrases[rng.index(lex_.carryover_phrases.size())];
        return ClipRef{{id}, Role::Target, MentionType::Carryover, phrase};
    }

    const MemoryGraph& graph_;
    SimConfig cfg_;
    const Lexicon& lex_;
    EngineConfig engine_;
    std::vector<MentionType> mention_types_;
    std::vector<double> mention_weights_;
};

inline Dialog simulate_dialog(const MemoryGraph& graph, const SimConfig& config, std::uint64_t seed,
                              std::string dialog_id = "d0001", const Lexicon& lexicon = default_lexicon()) {
    return DialogSimulator(graph, config, lexicon).simulate(seed, std::move(dialog_id));
}

// ---- corpus ---------------------------------------------------------------

struct CorpusConfig {
    std::size_t n = 10;
    std::uint64_t seed = 0;
    GenConfig graph;  // graph.seed and graph.graph_id are assigned per dialog
    SimConfig sim;
    unsigned threads = 1;
};

struct Corpus {
    std::vector<Dialog> dialogs;
    std::vector<MemoryGraph> graphs;  // graphs[i] grounds dialogs[i]
};

inline std::string padded_id(char prefix, std::size_t index, std::size_t n) {
    std::string num = std::to_string(index);
    const std::size_t width = std::max<std::size_t>(4, std::to_string(n).size());
    if (num.size() < width) num.insert(0, width - num.size(), '0');
    return std::string(1, prefix) + num;
}

inline std::string config_digest(const CorpusConfig& cfg) {
    json j = {{"graph", {{"n_clips", cfg.graph.n_clips}, {"vocabulary", cfg.graph.vocabulary}}}, {"sim", cfg.sim}};
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
    return buf;
}

// Per-dialog seeds come from (seed, index), so any thread count yields the same corpus.
inline Corpus simulate_corpus(const CorpusConfig& cfg, const Lexicon& lexicon = default_lexicon()) {
    if (cfg.n < 1) throw ConfigError("corpus size must be at least 1");
    validate(cfg.sim);
    validate(cfg.graph.vocabulary);
    Corpus corpus;
    corpus.dialogs.resize(cfg.n);
    corpus.graphs.resize(cfg.n);
    auto work = [&](std::size_t i) {
        GenConfig g = cfg.graph;
        g.seed = derive_seed(cfg.seed, i, 2);
        g.graph_id = padded_id('g', i + 1, cfg.n);
        corpus.graphs[i] = generate_collection(g);
        corpus.dialogs[i] = DialogSimulator(corpus.graphs[i], cfg.sim, lexicon)
                                .simulate(derive_seed(cfg.seed, i, 1), padded_id('d', i + 1, cfg.n));
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < cfg.n; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < cfg.n; i += threads) work(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return corpus;
}

}  // namespace ccc
