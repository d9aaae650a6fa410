#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccc/dialog.hpp"
#include "ccc/dst_format.hpp"
#include "ccc/linear_frame.hpp"

namespace ccc {

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    static PRF from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
        PRF r{0, 0, 0, tp, fp, fn};
        r.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        r.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
        return r;
    }
};

inline void to_json(json& j, const PRF& p) {
    j = json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}, {"tp", p.tp}, {"fp", p.fp}, {"fn", p.fn}};
}

using TurnKey = std::pair<std::string, int>;
// nullopt marks a prediction whose linear frame did not parse.
using FrameTable = std::map<TurnKey, std::optional<Frame>>;

inline FrameTable gold_table(const std::vector<Dialog>& corpus) {
    FrameTable out;
    for (const auto& d : corpus)
        for (const auto& t : d.turns)
            if (t.speaker == Speaker::User && t.frame) {
                if (!out.emplace(TurnKey{d.dialog_id, t.turn_id}, flatten_roles(*t.frame, &t.story_snapshot)).second)
                    throw ValidationError("duplicate gold turn " + d.dialog_id + "/" + std::to_string(t.turn_id));
            }
    return out;
}

inline FrameTable prediction_table(const std::vector<Prediction>& preds) {
    FrameTable out;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto& p = preds[i];
        std::optional<Frame> f;
        try {
            f = parse_frame(p.linear_frame);
        } catch (const ParseError&) {
        } catch (const VocabularyError&) {
        }
        if (!out.emplace(TurnKey{p.dialog_id, p.turn_id}, std::move(f)).second)
            throw ValidationError("duplicate prediction for " + p.dialog_id + "/" + std::to_string(p.turn_id) +
                                  " (record " + std::to_string(i) + ")");
    }
    return out;
}

namespace detail {

inline std::set<std::string> slot_pairs(const std::optional<Frame>& f) {
    std::set<std::string> out;
    if (!f) return out;
    for (const auto& [k, vs] : f->slots)
        for (const auto& v : vs) out.insert(k + "=" + v);
    return out;
}

inline std::set<std::string> id_set(const std::optional<Frame>& f) {
    if (!f) return {};
    const auto ids = f->flat_ids();
    return {ids.begin(), ids.end()};
}

struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;

    void add(const std::set<std::string>& pred, const std::set<std::string>& gold) {
        for (const auto& p : pred) (gold.count(p) ? tp : fp)++;
        for (const auto& g : gold) fn += pred.count(g) ? 0 : 1;
    }
};

// Runs f(pred, gold) over the union of keys; a missing side is an empty frame.
template <class F>
void over_union(const FrameTable& pred, const FrameTable& gold, F f) {
    static const std::optional<Frame> none;
    for (const auto& [k, g] : gold) {
        auto it = pred.find(k);
        f(it == pred.end() ? none : it->second, g);
    }
    for (const auto& [k, p] : pred)
        if (!gold.count(k)) f(p, none);
}

}  // namespace detail

// Micro-averaged over key=value pairs of each turn's own frame.
inline PRF score_slots(const FrameTable& pred, const FrameTable& gold) {
    detail::Counts c;
    detail::over_union(pred, gold, [&](const auto& p, const auto& g) { c.add(detail::slot_pairs(p), detail::slot_pairs(g)); });
    return PRF::from_counts(c.tp, c.fp, c.fn);
}

// Micro-averaged over each turn's flat clip id set. Turns where both sides are
// empty add nothing.
inline PRF score_coref(const FrameTable& pred, const FrameTable& gold) {
    detail::Counts c;
    detail::over_union(pred, gold, [&](const auto& p, const auto& g) { c.add(detail::id_set(p), detail::id_set(g)); });
    return PRF::from_counts(c.tp, c.fp, c.fn);
}

struct ActivityScore {
    std::size_t n = 0;
    double intent_accuracy = 0.0;
    double joint_accuracy = 0.0;
};

struct ScoreReport {
    PRF slot;
    PRF coref;
    double joint_accuracy = 0.0;
    double intent_accuracy = 0.0;
    std::size_t n_turns = 0;
    std::map<std::string, ActivityScore> per_activity;
};

inline void to_json(json& j, const ActivityScore& a) {
    j = json{{"n", a.n}, {"intent_accuracy", a.intent_accuracy}, {"joint_accuracy", a.joint_accuracy}};
}

inline void to_json(json& j, const ScoreReport& r) {
    j = json{{"slot", r.slot},
             {"coref", r.coref},
             {"joint_accuracy", r.joint_accuracy},
             {"intent_accuracy", r.intent_accuracy},
             {"n_turns", r.n_turns},
             {"per_activity", r.per_activity},
             {"notes",
              {{"slot", "per-turn frame slots, micro-averaged key=value pairs"},
               {"coref", "flat clip id set per turn, micro-averaged; empty-vs-empty turns excluded"},
               {"joint", "cumulative slot state with gold history (teacher forcing), intent and clip set exact"}}}};
}

// Joint accuracy over gold user turns. The predicted state for a turn is the
// gold state before it advanced by the predicted frame.
inline std::pair<double, double> score_joint(const FrameTable& pred, const std::vector<Dialog>& gold,
                                             std::map<std::string, ActivityScore>* per_activity = nullptr) {
    std::size_t n = 0, intent_ok = 0, joint_ok = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> by_act_intent, by_act_joint;
    for (const auto& d : gold) {
        DialogState state;
        for (const auto& t : d.turns) {
            if (t.speaker != Speaker::User || !t.frame) continue;
            const Frame g = flatten_roles(*t.frame, &t.story_snapshot);
            const DialogState gold_next = advance_state(state, g);
            auto it = pred.find({d.dialog_id, t.turn_id});
            bool intent = false, joint = false;
            if (it != pred.end() && it->second) {
                const DialogState p_next = advance_state(state, *it->second);
                intent = it->second->intent == g.intent;
                joint = intent && p_next.slots == gold_next.slots && p_next.clip_ids == gold_next.clip_ids;
            }
            ++n;
            intent_ok += intent;
            joint_ok += joint;
            const std::string act(to_string(g.intent.activity));
            by_act_intent[act].first += intent;
            by_act_intent[act].second += 1;
            by_act_joint[act].first += joint;
            state = gold_next;
        }
    }
    if (per_activity) {
        for (const auto& [act, c] : by_act_intent) {
            auto& a = (*per_activity)[act];
            a.n = c.second;
            a.intent_accuracy = static_cast<double>(c.first) / static_cast<double>(c.second);
            a.joint_accuracy = static_cast<double>(by_act_joint[act].first) / static_cast<double>(c.second);
        }
    }
    if (n == 0) return {0.0, 0.0};
    return {static_cast<double>(joint_ok) / static_cast<double>(n), static_cast<double>(intent_ok) / static_cast<double>(n)};
}

inline ScoreReport score(const std::vector<Dialog>& gold, const std::vector<Prediction>& preds) {
    const auto g = gold_table(gold);
    const auto p = prediction_table(preds);
    ScoreReport r;
    r.slot = score_slots(p, g);
    r.coref = score_coref(p, g);
    std::tie(r.joint_accuracy, r.intent_accuracy) = score_joint(p, gold, &r.per_activity);
    r.n_turns = g.size();
    return r;
}

// ---- corpus statistics ----------------------------------------------------

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd m;
    m.n = xs.size();
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(xs.size()));
    return m;
}

inline void to_json(json& j, const MeanStd& m) { j = json{{"mean", m.mean}, {"std", m.std}, {"n", m.n}}; }

using Histogram = std::map<long, std::size_t>;

struct StatsReport {
    std::size_t n_dialogs = 0;
    std::size_t n_utterances = 0;
    MeanStd utterances_per_dialog;
    MeanStd user_words;
    MeanStd assistant_words;
    MeanStd clips_mentioned_per_dialog;
    MeanStd clips_per_story;
    MeanStd candidates_per_mention;
    MeanStd coref_distance;
    Histogram user_words_hist;
    Histogram assistant_words_hist;
    std::map<std::string, std::size_t> activity_counts;
    Histogram candidates_hist;
    Histogram coref_distance_hist;
};

inline json histogram_json(const Histogram& h) {
    json j = json::object();
    for (const auto& [k, v] : h) j[std::to_string(k)] = v;
    return j;
}

inline void to_json(json& j, const StatsReport& r) {
    j = json{{"n_dialogs", r.n_dialogs},
             {"n_utterances", r.n_utterances},
             {"utterances_per_dialog", r.utterances_per_dialog},
             {"user_words", r.user_words},
             {"assistant_words", r.assistant_words},
             {"clips_mentioned_per_dialog", r.clips_mentioned_per_dialog},
             {"clips_per_story", r.clips_per_story},
             {"candidates_per_mention", r.candidates_per_mention},
             {"coref_distance", r.coref_distance},
             {"histograms",
              {{"user_words", histogram_json(r.user_words_hist)},
               {"assistant_words", histogram_json(r.assistant_words_hist)},
               {"activities", r.activity_counts},
               {"candidates_per_mention", histogram_json(r.candidates_hist)},
               {"coref_distance", histogram_json(r.coref_distance_hist)}}},
             {"definitions",
              {{"words", "whitespace tokens of template utterances"},
               {"clips_per_story", "story size after every assistant turn"},
               {"clips_mentioned_per_dialog", "distinct clip ids referenced by user turns"},
               {"candidates_per_mention",
                "interpretation: ORDINAL/DEVICE_CONTEXT -> story size, ADJECTIVAL -> descriptor matches, "
                "CARRYOVER -> distinct clips seen earlier in the dialog"},
               {"coref_distance",
                "utterances back to the nearest earlier user reference or assistant addition of the clip"}}}};
}

inline std::size_t whitespace_words(std::string_view s) {
    std::size_t n = 0;
    bool in = false;
    for (char c : s) {
        const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
        if (!ws && !in) ++n;
        in = !ws;
    }
    return n;
}

inline StatsReport corpus_stats(const std::vector<Dialog>& corpus) {
    StatsReport r;
    r.n_dialogs = corpus.size();
    std::vector<double> utt, uw, aw, mentioned, story, cands, dist;
    for (std::size_t di = 0; di < corpus.size(); ++di) {
        const auto& d = corpus[di];
        if (auto err = check_dialog(d); !err.empty())
            throw ValidationError("record " + std::to_string(di) + " (" + d.dialog_id + "): " + err);
        r.n_utterances += d.turns.size();
        utt.push_back(static_cast<double>(d.turns.size()));
        std::set<std::string> dialog_mentions;
        std::set<std::string> seen;  // clips introduced or referenced so far
        for (std::size_t i = 0; i < d.turns.size(); ++i) {
            const auto& t = d.turns[i];
            const auto words = whitespace_words(t.template_utterance);
            if (t.speaker == Speaker::Assistant) {
                aw.push_back(static_cast<double>(words));
                ++r.assistant_words_hist[static_cast<long>(words)];
                story.push_back(static_cast<double>(t.story_snapshot.entries.size()));
                if (t.execution_result) seen.insert(t.execution_result->added.begin(), t.execution_result->added.end());
                continue;
            }
            uw.push_back(static_cast<double>(words));
            ++r.user_words_hist[static_cast<long>(words)];
            ++r.activity_counts[std::string(to_string(t.frame->intent.activity))];
            for (const auto& ref : t.frame->refs) {
                std::size_t c = 0;
                switch (ref.mention_type) {
                    case MentionType::Adjectival: c = ref.clip_ids.size(); break;
                    case MentionType::Carryover: c = seen.size(); break;
                    default: c = t.story_snapshot.entries.size(); break;
                }
                cands.push_back(static_cast<double>(c));
                ++r.candidates_hist[static_cast<long>(c)];
                for (const auto& id : ref.clip_ids) {
                    dialog_mentions.insert(id);
                    for (std::size_t back = i; back-- > 0;) {
                        const auto& prev = d.turns[back];
                        bool hit = false;
                        if (prev.speaker == Speaker::User && prev.frame) {
                            const auto ids = prev.frame->flat_ids();
                            hit = std::find(ids.begin(), ids.end(), id) != ids.end();
                        } else if (prev.execution_result) {
                            const auto& a = prev.execution_result->added;
                            hit = std::find(a.begin(), a.end(), id) != a.end();
                        }
                        if (hit) {
                            const auto dd = static_cast<long>(i - back);
                            dist.push_back(static_cast<double>(dd));
                            ++r.coref_distance_hist[dd];
                            break;
                        }
                    }
                }
            }
            for (const auto& id : t.frame->flat_ids()) seen.insert(id);
        }
        mentioned.push_back(static_cast<double>(dialog_mentions.size()));
    }
    r.utterances_per_dialog = mean_std(utt);
    r.user_words = mean_std(uw);
    r.assistant_words = mean_std(aw);
    r.clips_mentioned_per_dialog = mean_std(mentioned);
    r.clips_per_story = mean_std(story);
    r.candidates_per_mention = mean_std(cands);
    r.coref_distance = mean_std(dist);
    return r;
}

// CSV rows "histogram,bin,count" for plotting.
inline std::string stats_histograms_csv(const StatsReport& r) {
    std::string out = "histogram,bin,count\n";
    auto emit = [&](const char* name, const Histogram& h) {
        for (const auto& [k, v] : h) out += std::string(name) + "," + std::to_string(k) + "," + std::to_string(v) + "\n";
    };
    emit("user_words", r.user_words_hist);
    emit("assistant_words", r.assistant_words_hist);
    for (const auto& [k, v] : r.activity_counts) out += "activities," + k + "," + std::to_string(v) + "\n";
    emit("candidates_per_mention", r.candidates_hist);
    emit("coref_distance", r.coref_distance_hist);
    return out;
}

// ---- transition flows -----------------------------------------------------

struct FlowNode {
    std::string label;
    std::size_t weight = 0;
};

struct FlowLink {
    std::string source;
    std::string target;
    std::size_t weight = 0;
};

struct FlowGraph {
    std::vector<FlowNode> nodes;
    std::vector<FlowLink> links;
};

inline void to_json(json& j, const FlowGraph& g) {
    j = json{{"nodes", json::array()}, {"links", json::array()}};
    for (const auto& n : g.nodes) j["nodes"].push_back({{"label", n.label}, {"weight", n.weight}});
    for (const auto& l : g.links) j["links"].push_back({{"source", l.source}, {"target", l.target}, {"weight", l.weight}});
}

// Node label for utterance i: ACTIVITY:U<round> or ACTIVITY:A<round>.
inline std::string flow_label(const Turn& t, std::size_t i) {
    const std::string who = t.speaker == Speaker::User ? "U" : "A";
    return std::string(to_string(t.frame->intent.activity)) + ":" + who + std::to_string(i / 2 + 1);
}

// Flow over the first `depth` user/assistant rounds.
inline FlowGraph transition_flows(const std::vector<Dialog>& corpus, std::size_t depth = 4) {
    if (depth < 1) throw ConfigError("flow depth must be at least 1");
    std::map<std::string, std::size_t> node_w;
    std::vector<std::string> order;
    std::map<std::pair<std::string, std::string>, std::size_t> link_w;
    std::vector<std::pair<std::string, std::string>> link_order;
    for (const auto& d : corpus) {
        const std::size_t n = std::min(d.turns.size(), 2 * depth);
        for (std::size_t i = 0; i < n; ++i) {
            if (!d.turns[i].frame) break;
            const auto label = flow_label(d.turns[i], i);
            if (!node_w[label]++) order.push_back(label);
            if (i + 1 < n && d.turns[i + 1].frame) {
                auto key = std::make_pair(label, flow_label(d.turns[i + 1], i + 1));
                if (!link_w[key]++) link_order.push_back(key);
            }
        }
    }
    FlowGraph g;
    for (const auto& l : order) g.nodes.push_back({l, node_w[l]});
    for (const auto& k : link_order) g.links.push_back({k.first, k.second, link_w[k]});
    return g;
}

// Editing activities available once a story exists.
inline const std::vector<Activity>& editing_activities() {
    static const std::vector<Activity> v = {Activity::AddClips,     Activity::RemoveClips,    Activity::ReplaceClips,
                                            Activity::ReorderClips, Activity::RefineSearch,   Activity::ModifyDuration,
                                            Activity::ShareStory};
    return v;
}

// Total variation distance between the second user turn's activity and the
// uniform distribution over editing activities, over dialogs whose opening
// request produced a story.
inline double turn2_branch_tv(const std::vector<Dialog>& corpus) {
    std::map<Activity, std::size_t> counts;
    std::size_t n = 0;
    for (const auto& d : corpus) {
        if (d.turns.size() < 3 || !d.turns[2].frame) continue;
        if (d.turns[2].story_snapshot.entries.empty()) continue;
        ++counts[d.turns[2].frame->intent.activity];
        ++n;
    }
    if (n == 0) return 0.0;
    const auto& acts = editing_activities();
    const double u = 1.0 / static_cast<double>(acts.size());
    double tv = 0.0;
    for (Activity a : acts) tv += std::abs(static_cast<double>(counts[a]) / static_cast<double>(n) - u);
    for (const auto& [a, c] : counts)
        if (std::find(acts.begin(), acts.end(), a) == acts.end()) tv += static_cast<double>(c) / static_cast<double>(n);
    return tv / 2.0;
}

}  // namespace ccc
