#pragma once

#include <set>
#include <string>
#include <vector>

#include "ccc/dialog.hpp"
#include "ccc/linear_frame.hpp"
#include "ccc/memory_graph.hpp"

namespace ccc {

// Dialog state after carryover.
//   carried: constraint slots accumulated by CREATE / ADD / REFINE turns.
//   slots:   what the current turn asks for, i.e. carried state from the
//            previous turn overridden by this turn's slots.
struct DialogState {
    SlotMap carried;
    SlotMap slots;
    Intent intent;
    std::set<std::string> clip_ids;

    bool operator==(const DialogState&) const = default;
};

inline bool carries_constraints(Activity a) {
    return a == Activity::CreateStory || a == Activity::AddClips || a == Activity::RefineSearch;
}

// One step of the left fold.
inline DialogState advance_state(const DialogState& prev, const Frame& user_frame) {
    DialogState next;
    next.intent = user_frame.intent;
    next.slots = merge_override(prev.carried, user_frame.slots);
    next.carried = carries_constraints(user_frame.intent.activity)
                       ? merge_override(prev.carried, constraints_of(user_frame.slots))
                       : prev.carried;
    const auto ids = user_frame.flat_ids();
    next.clip_ids = std::set<std::string>(ids.begin(), ids.end());
    return next;
}

// Folds the user frames among turns[0, upto). Non-user turns are skipped.
inline DialogState cumulative_state(const std::vector<Turn>& turns, std::size_t upto) {
    DialogState s;
    for (std::size_t i = 0; i < upto && i < turns.size(); ++i)
        if (turns[i].speaker == Speaker::User && turns[i].frame) s = advance_state(s, *turns[i].frame);
    return s;
}

inline DialogState cumulative_state(const std::vector<Turn>& turns) { return cumulative_state(turns, turns.size()); }

enum class ContextMode { Tokens, Embed };

struct PromptConfig {
    std::size_t history_turns = 6;
    bool include_context = true;
    // Embed is accepted so prediction files from embed-mode models can be tagged; prompts are tokens only.
    ContextMode mode = ContextMode::Tokens;
};

inline std::string render_clip_tokens(const Clip& c, const StoryEntry& e) {
    std::string s = "clip " + c.id + " : activity = " + c.activity + " , time = " + c.time + " , location = " + c.location;
    auto multi = [&](const char* key, const std::vector<std::string>& values) {
        if (values.empty()) return;
        s += std::string(" , ") + key + " = ";
        for (std::size_t i = 0; i < values.size(); ++i) s += (i ? " / " : "") + values[i];
    };
    multi("objects", c.objects);
    multi("participants", c.participants);
    multi("attributes", c.attributes);
    s += " , duration = " + std::to_string(e.effective_duration_s);
    return s;
}

// Tokens-mode prompt:
//   <context> clip c3 : k = v , k = v ; clip c1 : ... ; viewer = c1 <history> U: ... A: ... U: ...
inline std::string build_prompt(const std::vector<Turn>& history, const StoryState& snapshot, const MemoryGraph& graph,
                                const PromptConfig& cfg = {}) {
    if (history.empty()) throw ValidationError("build_prompt needs a non-empty history");
    if (cfg.history_turns < 1) throw ConfigError("prompt history_turns must be at least 1");
    if (cfg.mode != ContextMode::Tokens) throw ConfigError("only tokens-mode prompts can be built");
    if (history.back().speaker != Speaker::User) throw ValidationError("the last history turn must be a user turn");

    std::string out;
    if (cfg.include_context) {
        out = "<context>";
        std::vector<std::string> parts;
        for (const auto& e : snapshot.entries) {
            const Clip* c = graph.find(e.clip_id);
            if (!c) throw ConsistencyError("snapshot references clip " + e.clip_id + " missing from graph " + graph.graph_id());
            parts.push_back(render_clip_tokens(*c, e));
        }
        if (!parts.empty()) {
            out += " ";
            for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " ; " : "") + parts[i];
        }
        const auto viewer = snapshot.viewer_clip();
        out += " ; viewer = " + (viewer ? *viewer : std::string("none"));
        out += " ";
    }
    out += "<history>";
    const std::size_t start = history.size() > cfg.history_turns ? history.size() - cfg.history_turns : 0;
    for (std::size_t i = start; i < history.size(); ++i) {
        out += history[i].speaker == Speaker::User ? " U: " : " A: ";
        out += history[i].text();
    }
    return out;
}

// One line of an external model's prediction file.
struct Prediction {
    std::string dialog_id;
    int turn_id = 0;
    std::string linear_frame;
};

inline void to_json(json& j, const Prediction& p) {
    j = json{{"dialog_id", p.dialog_id}, {"turn_id", p.turn_id}, {"linear_frame", p.linear_frame}};
}
inline void from_json(const json& j, Prediction& p) {
    p.dialog_id = j.at("dialog_id").get<std::string>();
    p.turn_id = j.at("turn_id").get<int>();
    p.linear_frame = j.at("linear_frame").get<std::string>();
}

}  // namespace ccc
