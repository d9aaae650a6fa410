#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccc/frame.hpp"
#include "ccc/linear_frame.hpp"
#include "ccc/memory_graph.hpp"
#include "ccc/story_engine.hpp"

namespace ccc {

// One utterance. User turns carry the api_call and the snapshot the user saw;
// assistant turns carry the execution result and the post-execution snapshot.
struct Turn {
    int turn_id = 1;
    Speaker speaker = Speaker::User;
    std::string template_utterance;
    std::string paraphrase;
    std::optional<Frame> frame;  // absent only for utterances the baseline could not parse
    std::optional<ApiCall> api_call;
    std::optional<ExecutionResult> execution_result;
    StoryState story_snapshot;

    bool operator==(const Turn&) const = default;

    // Text shown to models: the paraphrase when one exists.
    const std::string& text() const { return paraphrase.empty() ? template_utterance : paraphrase; }
};

struct Dialog {
    std::string dialog_id;
    std::string graph_id;
    std::uint64_t graph_seed = 0;
    std::vector<Turn> turns;

    bool operator==(const Dialog&) const = default;
};

inline void to_json(json& j, const Turn& t) {
    j = json{{"turn_id", t.turn_id},
             {"speaker", to_string(t.speaker)},
             {"template_utterance", t.template_utterance},
             {"paraphrase", t.paraphrase},
             {"story_snapshot", t.story_snapshot}};
    if (t.frame) {
        j["frame"] = *t.frame;
        j["linear_frame"] = serialize_frame(*t.frame, &t.story_snapshot);
    } else {
        j["frame"] = nullptr;
    }
    if (t.api_call) j["api_call"] = *t.api_call;
    if (t.execution_result) j["execution_result"] = *t.execution_result;
}

inline void from_json(const json& j, Turn& t) {
    t.turn_id = j.at("turn_id").get<int>();
    const auto sp = j.at("speaker").get<std::string>();
    if (sp == "USER") t.speaker = Speaker::User;
    else if (sp == "ASSISTANT") t.speaker = Speaker::Assistant;
    else throw ValidationError("unknown speaker " + sp);
    t.template_utterance = j.at("template_utterance").get<std::string>();
    t.paraphrase = j.value("paraphrase", std::string());
    if (j.contains("frame") && !j["frame"].is_null()) t.frame = j["frame"].get<Frame>();
    else t.frame.reset();
    if (j.contains("api_call") && !j["api_call"].is_null()) t.api_call = j["api_call"].get<ApiCall>();
    else t.api_call.reset();
    if (j.contains("execution_result") && !j["execution_result"].is_null())
        t.execution_result = j["execution_result"].get<ExecutionResult>();
    else t.execution_result.reset();
    t.story_snapshot = j.at("story_snapshot").get<StoryState>();
}

inline void to_json(json& j, const Dialog& d) {
    j = json{{"dialog_id", d.dialog_id}, {"graph_id", d.graph_id}, {"graph_seed", d.graph_seed}, {"turns", d.turns}};
}

inline void from_json(const json& j, Dialog& d) {
    d.dialog_id = j.at("dialog_id").get<std::string>();
    d.graph_id = j.at("graph_id").get<std::string>();
    d.graph_seed = j.value("graph_seed", std::uint64_t{0});
    d.turns = j.at("turns").get<std::vector<Turn>>();
}

// Structural checks shared by corpus readers. Empty string means valid.
inline std::string check_dialog(const Dialog& d) {
    for (std::size_t i = 0; i < d.turns.size(); ++i) {
        const auto& t = d.turns[i];
        const Speaker expected = i % 2 == 0 ? Speaker::User : Speaker::Assistant;
        if (t.speaker != expected) return "turn " + std::to_string(t.turn_id) + " breaks USER/ASSISTANT alternation";
        if (t.turn_id != static_cast<int>(i) + 1) return "turn ids must be 1..n in order";
        if (!t.frame) return "turn " + std::to_string(t.turn_id) + " has no frame";
        if (t.speaker == Speaker::User && !t.api_call) return "user turn " + std::to_string(t.turn_id) + " has no api_call";
        if (t.speaker == Speaker::Assistant && !t.execution_result)
            return "assistant turn " + std::to_string(t.turn_id) + " has no execution_result";
    }
    return {};
}

// Clip ids a later CARRYOVER mention may point at: ids from earlier user
// references that are still in the story and were not just added by the
// previous assistant turn, most recent first.
inline std::vector<std::string> carryover_candidates(const std::vector<Turn>& history, const StoryState& snapshot) {
    std::vector<std::string> excluded;
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->speaker == Speaker::Assistant) {
            if (it->execution_result) excluded = it->execution_result->added;
            break;
        }
    }
    std::vector<std::string> out;
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        if (it->speaker != Speaker::User || !it->frame) continue;
        for (const auto& id : it->frame->flat_ids()) {
            if (!snapshot.contains(id)) continue;
            if (std::find(excluded.begin(), excluded.end(), id) != excluded.end()) continue;
            if (std::find(out.begin(), out.end(), id) != out.end()) continue;
            out.push_back(id);
        }
    }
    return out;
}

// Re-executes the api_call log from the empty story. Returns the index of the
// first turn whose stored snapshot disagrees with the recomputation, or -1.
inline int first_replay_mismatch(const Dialog& d, const MemoryGraph& graph, const EngineConfig& cfg = {}) {
    StoryState state;
    const ApiCall* pending = nullptr;
    for (std::size_t i = 0; i < d.turns.size(); ++i) {
        const auto& t = d.turns[i];
        if (t.speaker == Speaker::User) {
            if (!(t.story_snapshot == state)) return static_cast<int>(i);
            pending = t.api_call ? &*t.api_call : nullptr;
        } else {
            if (pending) {
                auto [next, result] = execute(state, *pending, graph, cfg);
                if (t.execution_result && !(result == *t.execution_result)) return static_cast<int>(i);
                state = std::move(next);
            }
            if (!(t.story_snapshot == state)) return static_cast<int>(i);
            pending = nullptr;
        }
    }
    return -1;
}

}  // namespace ccc
