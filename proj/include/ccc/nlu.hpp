#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ccc/dialog.hpp"
#include "ccc/dst_format.hpp"
#include "ccc/frame.hpp"
#include "ccc/lexicon.hpp"
#include "ccc/memory_graph.hpp"
#include "ccc/story_engine.hpp"

namespace ccc {

struct MentionSpan {
    std::string text;  // lower-cased tokens joined by single spaces
    MentionType type = MentionType::Ordinal;
    std::string descriptor;  // ADJECTIVAL label, or the matched cue phrase
    int ordinal = 0;         // ORDINAL position, negative counts from the end
    Role role = Role::Target;
    std::size_t begin = 0;  // token range [begin, end)
    std::size_t end = 0;

    bool operator==(const MentionSpan&) const = default;
};

struct PartialFrame {
    bool unparseable = false;
    std::string raw_text;
    Intent intent;
    SlotMap slots;
    std::vector<MentionSpan> spans;
};

namespace detail {

inline bool match_at(const Tokens& toks, std::size_t i, const Tokens& phrase) {
    if (phrase.empty() || i + phrase.size() > toks.size()) return false;
    return std::equal(phrase.begin(), phrase.end(), toks.begin() + static_cast<std::ptrdiff_t>(i));
}

inline std::string join(const Tokens& toks, std::size_t b, std::size_t e) {
    std::string s;
    for (std::size_t i = b; i < e; ++i) s += (i > b ? " " : "") + toks[i];
    return s;
}

// Longest mention starting at token i, if any.
inline std::optional<MentionSpan> mention_at(const Tokens& toks, std::size_t i, const Lexicon& lex) {
    if (toks[i] != "the") return std::nullopt;
    std::optional<MentionSpan> best;
    auto offer = [&](MentionSpan m) {
        if (!best || m.end - m.begin > best->end - best->begin) best = std::move(m);
    };
    for (const auto& p : lex.device_phrases) {
        auto pt = tokenize(p);
        if (match_at(toks, i, pt))
            offer(MentionSpan{join(toks, i, i + pt.size()), MentionType::DeviceContext, p, 0, Role::Target, i,
                              i + pt.size()});
    }
    for (const auto& p : lex.carryover_phrases) {
        auto pt = tokenize(p);
        if (match_at(toks, i, pt))
            offer(MentionSpan{join(toks, i, i + pt.size()), MentionType::Carryover, p, 0, Role::Target, i,
                              i + pt.size()});
    }
    auto head_at = [&](std::size_t j) {
        return j < toks.size() &&
               std::find(lex.mention_heads.begin(), lex.mention_heads.end(), toks[j]) != lex.mention_heads.end();
    };
    for (const auto& [word, k] : lex.ordinals) {
        auto wt = tokenize(word);
        if (match_at(toks, i + 1, wt) && head_at(i + 1 + wt.size()))
            offer(MentionSpan{join(toks, i, i + wt.size() + 2), MentionType::Ordinal, word, k, Role::Target, i,
                              i + wt.size() + 2});
    }
    for (const auto& g : lex.gazetteer) {
        if (g.key != slot::kAttribute && g.key != slot::kActivity) continue;
        if (match_at(toks, i + 1, g.tokens) && head_at(i + 1 + g.tokens.size()))
            offer(MentionSpan{join(toks, i, i + g.tokens.size() + 2), MentionType::Adjectival, g.label, 0,
                              Role::Target, i, i + g.tokens.size() + 2});
    }
    return best;
}

}  // namespace detail

// Template-grammar understanding. Mentions are cut out first so descriptor
// words inside them never leak into the slot map.
inline PartialFrame parse_utterance(std::string_view text, const Lexicon& lex) {
    PartialFrame out;
    out.raw_text = std::string(text);
    const Tokens toks = tokenize(text);

    // masked[i] is the mention index covering token i, or -1
    std::vector<int> masked(toks.size(), -1);
    for (std::size_t i = 0; i < toks.size();) {
        if (auto m = detail::mention_at(toks, i, lex)) {
            for (std::size_t k = m->begin; k < m->end; ++k) masked[k] = static_cast<int>(out.spans.size());
            i = m->end;
            out.spans.push_back(std::move(*m));
        } else {
            ++i;
        }
    }
    auto free_match = [&](std::size_t i, const Tokens& phrase) {
        if (!detail::match_at(toks, i, phrase)) return false;
        for (std::size_t k = i; k < i + phrase.size(); ++k)
            if (masked[k] >= 0) return false;
        return true;
    };
    // mention index starting right after a phrase at i, or -1
    auto mention_after = [&](std::size_t i, std::size_t len) {
        const auto j = i + len;
        if (j < toks.size() && masked[j] >= 0 && out.spans[static_cast<std::size_t>(masked[j])].begin == j)
            return masked[j];
        return -1;
    };

    // intent: longest trigger, ties broken by lexicon priority
    std::optional<Activity> best;
    std::size_t best_len = 0;
    for (const auto& [act, phrases] : lex.triggers) {
        for (const auto& p : phrases) {
            const auto pt = tokenize(p);
            for (std::size_t i = 0; i < toks.size(); ++i) {
                if (!free_match(i, pt)) continue;
                if (!best || pt.size() > best_len ||
                    (pt.size() == best_len && lex.priority_of(act) < lex.priority_of(*best))) {
                    best = act;
                    best_len = pt.size();
                }
            }
        }
    }
    if (!best) {
        out.unparseable = true;
        return out;
    }
    out.intent = {Act::Request, *best};

    for (std::size_t i = 0; i < toks.size();) {
        if (masked[i] >= 0) {
            ++i;
            continue;
        }
        std::size_t advance = 1;
        bool matched = false;
        for (const auto& g : lex.gazetteer) {
            if (free_match(i, g.tokens)) {
                add_slot(out.slots, g.key, g.label);
                advance = g.tokens.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            // "<n> seconds"
            const auto& t = toks[i];
            if (!t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
                i + 1 < toks.size() && masked[i + 1] < 0 &&
                std::find(lex.duration_units.begin(), lex.duration_units.end(), toks[i + 1]) != lex.duration_units.end()) {
                set_slot(out.slots, slot::kDurationS, std::to_string(std::stoi(t.substr(0, 6))));
                advance = 2;
                matched = true;
            }
        }
        if (!matched) {
            for (const auto& [change, phrases] : lex.duration_changes)
                for (const auto& p : phrases)
                    if (!matched && free_match(i, tokenize(p))) {
                        set_slot(out.slots, slot::kDurationChange, change);
                        advance = tokenize(p).size();
                        matched = true;
                    }
        }
        if (!matched) {
            for (const auto& [pos, phrases] : lex.position_phrases) {
                for (const auto& p : phrases) {
                    if (matched) break;
                    const auto pt = tokenize(p);
                    if (!free_match(i, pt)) continue;
                    if (pos == "before" || pos == "after") {
                        const int m = mention_after(i, pt.size());
                        if (m < 0) continue;
                        out.spans[static_cast<std::size_t>(m)].role = Role::Anchor;
                    }
                    set_slot(out.slots, slot::kPosition, pos);
                    advance = pt.size();
                    matched = true;
                }
            }
        }
        if (!matched) {
            for (const auto& cue : lex.reference_cues) {
                const auto ct = tokenize(cue);
                if (!free_match(i, ct)) continue;
                const int m = mention_after(i, ct.size());
                if (m < 0) continue;
                out.spans[static_cast<std::size_t>(m)].role = Role::Reference;
                advance = ct.size();
                break;
            }
        }
        i += advance;
    }
    normalize(out.slots);
    return out;
}

// Clip ids for each span, in snapshot order. Unresolvable spans give an empty set.
inline std::vector<std::vector<std::string>> resolve_mentions(const std::vector<MentionSpan>& spans,
                                                              const std::vector<Turn>& history,
                                                              const StoryState& snapshot, const MemoryGraph& graph) {
    std::vector<std::vector<std::string>> out;
    const auto n = static_cast<long>(snapshot.entries.size());
    for (const auto& s : spans) {
        std::vector<std::string> ids;
        switch (s.type) {
            case MentionType::Ordinal: {
                long idx = s.ordinal > 0 ? s.ordinal - 1 : n + s.ordinal;
                if (s.ordinal != 0 && idx >= 0 && idx < n) ids.push_back(snapshot.entries[static_cast<std::size_t>(idx)].clip_id);
                break;
            }
            case MentionType::DeviceContext:
                if (auto v = snapshot.viewer_clip()) ids.push_back(*v);
                break;
            case MentionType::Adjectival:
                for (const auto& e : snapshot.entries) {
                    const Clip* c = graph.find(e.clip_id);
                    if (c && (c->activity == s.descriptor || c->has_attribute(s.descriptor))) ids.push_back(e.clip_id);
                }
                break;
            case MentionType::Carryover: {
                auto cands = carryover_candidates(history, snapshot);
                if (!cands.empty()) ids.push_back(cands.front());
                break;
            }
            case MentionType::Unspecified: break;
        }
        out.push_back(std::move(ids));
    }
    return out;
}

// Combines a parse with its resolutions into an executable call. Spans that
// resolved to nothing are dropped, which the schema check then reports.
inline ApiCall to_api_call(const PartialFrame& pf, const std::vector<std::vector<std::string>>& resolved) {
    ApiCall call;
    call.intent = pf.intent;
    call.slots = pf.slots;
    for (std::size_t i = 0; i < pf.spans.size() && i < resolved.size(); ++i) {
        if (resolved[i].empty()) continue;
        call.refs.push_back(ClipRef{resolved[i], pf.spans[i].role, pf.spans[i].type, pf.spans[i].text});
    }
    return call;
}

// Baseline prediction for one user turn, as a linear frame. Empty when unparseable.
inline std::string predict_turn(const Dialog& d, std::size_t turn_index, const MemoryGraph& graph, const Lexicon& lex) {
    const auto& t = d.turns.at(turn_index);
    const auto pf = parse_utterance(t.text(), lex);
    if (pf.unparseable) return {};
    const std::vector<Turn> history(d.turns.begin(), d.turns.begin() + static_cast<std::ptrdiff_t>(turn_index));
    const auto call = to_api_call(pf, resolve_mentions(pf.spans, history, t.story_snapshot, graph));
    return serialize_frame(flatten_roles(call, &t.story_snapshot), &t.story_snapshot);
}

inline std::vector<Prediction> predict_dialog(const Dialog& d, const MemoryGraph& graph, const Lexicon& lex) {
    std::vector<Prediction> out;
    for (std::size_t i = 0; i < d.turns.size(); ++i)
        if (d.turns[i].speaker == Speaker::User) out.push_back({d.dialog_id, d.turns[i].turn_id, predict_turn(d, i, graph, lex)});
    return out;
}

// Trivial resolver: whenever the baseline finds a mention, answer with the
// clips of the closest earlier utterance that has any.
inline std::vector<std::string> previous_turn_clips(const std::vector<Turn>& history) {
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->speaker == Speaker::Assistant) {
            if (it->execution_result && !it->execution_result->added.empty()) return it->execution_result->added;
        } else if (it->frame) {
            auto ids = it->frame->flat_ids();
            if (!ids.empty()) return ids;
        }
    }
    return {};
}

inline std::vector<Prediction> predict_dialog_previous_turn(const Dialog& d, const Lexicon& lex) {
    std::vector<Prediction> out;
    for (std::size_t i = 0; i < d.turns.size(); ++i) {
        const auto& t = d.turns[i];
        if (t.speaker != Speaker::User) continue;
        const auto pf = parse_utterance(t.text(), lex);
        if (pf.unparseable) {
            out.push_back({d.dialog_id, t.turn_id, ""});
            continue;
        }
        Frame f;
        f.intent = pf.intent;
        f.slots = pf.slots;
        if (!pf.spans.empty()) {
            auto ids = previous_turn_clips(std::vector<Turn>(d.turns.begin(), d.turns.begin() + static_cast<std::ptrdiff_t>(i)));
            if (!ids.empty()) f.refs.push_back(ClipRef{std::move(ids), Role::Unspecified, MentionType::Unspecified, ""});
        }
        out.push_back({d.dialog_id, t.turn_id, serialize_frame(f, &t.story_snapshot)});
    }
    return out;
}

}  // namespace ccc
