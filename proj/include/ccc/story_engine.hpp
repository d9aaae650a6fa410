#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccc/frame.hpp"
#include "ccc/memory_graph.hpp"

namespace ccc {

struct StoryEntry {
    std::string clip_id;
    int effective_duration_s = 1;

    bool operator==(const StoryEntry&) const = default;
};

struct StoryState {
    std::vector<StoryEntry> entries;
    std::optional<std::size_t> viewer_index;
    SlotMap last_search;
    bool shared = false;

    bool operator==(const StoryState&) const = default;

    std::optional<std::size_t> position_of(std::string_view id) const {
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i].clip_id == id) return i;
        return std::nullopt;
    }

    bool contains(std::string_view id) const { return position_of(id).has_value(); }

    std::vector<std::string> clip_ids() const {
        std::vector<std::string> out;
        for (const auto& e : entries) out.push_back(e.clip_id);
        return out;
    }

    std::optional<std::string> viewer_clip() const {
        if (!viewer_index || *viewer_index >= entries.size()) return std::nullopt;
        return entries[*viewer_index].clip_id;
    }
};

// Empty string when the state is well formed.
inline std::string check_invariants(const StoryState& s) {
    std::set<std::string> seen;
    for (const auto& e : s.entries) {
        if (!seen.insert(e.clip_id).second) return "duplicate clip id " + e.clip_id;
        if (e.effective_duration_s < 1) return "non-positive duration for " + e.clip_id;
    }
    if (s.viewer_index && *s.viewer_index >= s.entries.size()) return "viewer index out of range";
    return {};
}

inline void to_json(json& j, const StoryEntry& e) {
    j = json{{"clip_id", e.clip_id}, {"effective_duration_s", e.effective_duration_s}};
}
inline void from_json(const json& j, StoryEntry& e) {
    e.clip_id = j.at("clip_id").get<std::string>();
    e.effective_duration_s = j.at("effective_duration_s").get<int>();
}
inline void to_json(json& j, const StoryState& s) {
    j = json{{"entries", s.entries},
             {"viewer_index", s.viewer_index ? json(*s.viewer_index) : json(nullptr)},
             {"last_search", s.last_search},
             {"shared", s.shared}};
}
inline void from_json(const json& j, StoryState& s) {
    s.entries = j.at("entries").get<std::vector<StoryEntry>>();
    const auto& v = j.at("viewer_index");
    s.viewer_index = v.is_null() ? std::nullopt : std::optional<std::size_t>(v.get<std::size_t>());
    s.last_search = j.value("last_search", SlotMap{});
    s.shared = j.value("shared", false);
}

enum class ExecStatus { Ok, NoResults, InvalidRef };

inline std::string_view to_string(ExecStatus s) {
    switch (s) {
        case ExecStatus::Ok: return "OK";
        case ExecStatus::NoResults: return "NO_RESULTS";
        case ExecStatus::InvalidRef: return "INVALID_REF";
    }
    return "?";
}

// Lower-case form used as the assistant's status slot value.
inline std::string status_slot_value(ExecStatus s) {
    switch (s) {
        case ExecStatus::Ok: return "ok";
        case ExecStatus::NoResults: return "no_results";
        case ExecStatus::InvalidRef: return "invalid_ref";
    }
    return "?";
}

struct ExecutionResult {
    ExecStatus status = ExecStatus::Ok;
    std::vector<std::string> added;
    std::vector<std::string> removed;
    std::map<std::string, std::string> message_slots;

    bool operator==(const ExecutionResult&) const = default;
};

inline void to_json(json& j, const ExecutionResult& r) {
    j = json{{"status", to_string(r.status)}, {"added", r.added}, {"removed", r.removed},
             {"message_slots", r.message_slots}};
}
inline void from_json(const json& j, ExecutionResult& r) {
    const auto s = j.at("status").get<std::string>();
    if (s == "OK") r.status = ExecStatus::Ok;
    else if (s == "NO_RESULTS") r.status = ExecStatus::NoResults;
    else if (s == "INVALID_REF") r.status = ExecStatus::InvalidRef;
    else throw ValidationError("unknown execution status " + s);
    r.added = j.value("added", std::vector<std::string>{});
    r.removed = j.value("removed", std::vector<std::string>{});
    r.message_slots = j.value("message_slots", std::map<std::string, std::string>{});
}

struct EngineConfig {
    std::size_t max_story_clips = 8;
    std::size_t max_add_clips = 3;
    double duration_step = 0.25;
};

inline std::set<Activity> applicable_activities(const StoryState& s) {
    std::set<Activity> out;
    const auto n = s.entries.size();
    if (n == 0) out.insert(Activity::CreateStory);
    if (n >= 1) {
        out.insert(Activity::AddClips);
        out.insert(Activity::RemoveClips);
        out.insert(Activity::ReplaceClips);
        out.insert(Activity::ModifyDuration);
        out.insert(Activity::ShareStory);
    }
    if (n >= 2) out.insert(Activity::ReorderClips);
    if (!s.last_search.empty()) out.insert(Activity::RefineSearch);
    return out;
}

// Per-activity argument schema. Returns an empty string when the call is well formed.
inline std::string schema_violation(const ApiCall& call) {
    const auto& slots = call.slots;
    const auto constraints = constraints_of(slots);
    const auto targets = call.ids_with_role(Role::Target);
    const auto anchors = call.ids_with_role(Role::Anchor);
    const auto references = call.ids_with_role(Role::Reference);
    const auto position = slot_value(slots, slot::kPosition);
    auto count_role = [&](Role r) {
        return std::count_if(call.refs.begin(), call.refs.end(), [r](const ClipRef& c) { return c.role == r; });
    };
    for (const auto& ref : call.refs) {
        if (ref.clip_ids.empty()) return "clip reference with no ids";
        if (ref.role == Role::Unspecified) return "clip reference without a role";
    }
    if (position && *position != "first" && *position != "last" && *position != "before" && *position != "after")
        return "position must be one of first, last, before, after";
    const bool relative = position && (*position == "before" || *position == "after");

    switch (call.intent.activity) {
        case Activity::CreateStory:
            if (constraints.empty()) return "CREATE_STORY needs search constraints";
            if (!call.refs.empty()) return "CREATE_STORY takes no clip references";
            break;
        case Activity::AddClips:
            if (constraints.empty()) return "ADD_CLIPS needs search constraints";
            if (relative != (anchors.size() == 1)) return "ADD_CLIPS anchor must accompany before/after";
            if (!targets.empty() || !references.empty()) return "ADD_CLIPS takes only an anchor reference";
            break;
        case Activity::RemoveClips:
            if (targets.empty()) return "REMOVE_CLIPS needs a target";
            break;
        case Activity::ReplaceClips:
            if (targets.empty()) return "REPLACE_CLIPS needs a target";
            if (constraints.empty() == (count_role(Role::Reference) == 0))
                return "REPLACE_CLIPS needs either constraints or one reference clip";
            if (count_role(Role::Reference) > 1 || references.size() > 1)
                return "REPLACE_CLIPS takes at most one reference clip";
            break;
        case Activity::ReorderClips:
            if (count_role(Role::Target) != 1 || targets.size() != 1) return "REORDER_CLIPS needs exactly one target clip";
            if (!position) return "REORDER_CLIPS needs a position";
            if (relative != (anchors.size() == 1)) return "REORDER_CLIPS anchor must accompany before/after";
            break;
        case Activity::RefineSearch:
            if (constraints.empty()) return "REFINE_SEARCH needs at least one constraint";
            break;
        case Activity::ModifyDuration: {
            if (targets.empty()) return "MODIFY_DURATION needs a target";
            const bool abs = slots.count(std::string(slot::kDurationS)) > 0;
            const bool step = slots.count(std::string(slot::kDurationChange)) > 0;
            if (abs == step) return "MODIFY_DURATION needs exactly one of duration_s and duration_change";
            if (abs) {
                const auto v = *slot_value(slots, slot::kDurationS);
                if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
                    v.size() > 6 || std::stoi(v) < 1)
                    return "duration_s must be a positive integer";
            } else {
                const auto v = *slot_value(slots, slot::kDurationChange);
                if (v != "shorter" && v != "longer") return "duration_change must be shorter or longer";
            }
            break;
        }
        case Activity::ShareStory:
            if (!slot_value(slots, slot::kShareTo)) return "SHARE_STORY needs share_to";
            break;
    }
    return {};
}

namespace detail {

inline std::size_t insertion_index(const StoryState& s, const std::optional<std::string>& position,
                                   const std::vector<std::string>& anchors) {
    if (!position || *position == "last") return s.entries.size();
    if (*position == "first") return 0;
    const auto idx = *s.position_of(anchors.front());
    return *position == "before" ? idx : idx + 1;
}

inline void fill_count(ExecutionResult& r) {
    r.message_slots["count"] = std::to_string(r.added.size() + r.removed.size());
}

}  // namespace detail

// Pure transition: returns the next state and what happened.
inline std::pair<StoryState, ExecutionResult> execute(const StoryState& state, const ApiCall& call,
                                                      const MemoryGraph& graph, const EngineConfig& cfg = {}) {
    if (auto why = schema_violation(call); !why.empty()) throw ValidationError(why);

    StoryState next = state;
    ExecutionResult result;
    const auto constraints = constraints_of(call.slots);
    const auto targets = call.ids_with_role(Role::Target);
    const auto anchors = call.ids_with_role(Role::Anchor);
    const auto references = call.ids_with_role(Role::Reference);
    const auto position = slot_value(call.slots, slot::kPosition);

    auto invalid = [&]() {
        result.status = ExecStatus::InvalidRef;
        return std::make_pair(state, result);
    };
    for (const auto& id : targets)
        if (!state.contains(id)) return invalid();
    for (const auto& id : anchors)
        if (!state.contains(id)) return invalid();
    for (const auto& id : references)
        if (!graph.find(id)) return invalid();

    auto make_entry = [&](const Clip& c) { return StoryEntry{c.id, c.duration_s}; };

    switch (call.intent.activity) {
        case Activity::CreateStory: {
            auto hits = search(graph, constraints);
            next.last_search = constraints;
            if (hits.empty()) {
                result.status = ExecStatus::NoResults;
                next.entries = state.entries;
                next.viewer_index = state.viewer_index;
                return {next, result};
            }
            if (hits.size() > cfg.max_story_clips) hits.resize(cfg.max_story_clips);
            for (const auto& e : state.entries) result.removed.push_back(e.clip_id);
            next.entries.clear();
            for (const auto& c : hits) {
                next.entries.push_back(make_entry(c));
                result.added.push_back(c.id);
            }
            next.viewer_index = 0;
            next.shared = false;
            detail::fill_count(result);
            break;
        }
        case Activity::AddClips: {
            const auto current = state.clip_ids();
            auto hits = search(graph, constraints, std::set<std::string>(current.begin(), current.end()));
            if (hits.empty()) {
                result.status = ExecStatus::NoResults;
                return {state, result};
            }
            if (hits.size() > cfg.max_add_clips) hits.resize(cfg.max_add_clips);
            auto at = detail::insertion_index(state, position, anchors);
            for (std::size_t i = 0; i < hits.size(); ++i) {
                next.entries.insert(next.entries.begin() + static_cast<std::ptrdiff_t>(at + i), make_entry(hits[i]));
                result.added.push_back(hits[i].id);
            }
            next.viewer_index = at;
            detail::fill_count(result);
            break;
        }
        case Activity::RemoveClips: {
            std::set<std::string> doomed(targets.begin(), targets.end());
            next.entries.clear();
            for (const auto& e : state.entries) {
                if (doomed.count(e.clip_id))
                    result.removed.push_back(e.clip_id);
                else
                    next.entries.push_back(e);
            }
            if (next.entries.empty())
                next.viewer_index.reset();
            else if (state.viewer_index)
                next.viewer_index = std::min(*state.viewer_index, next.entries.size() - 1);
            detail::fill_count(result);
            break;
        }
        case Activity::ReplaceClips: {
            SlotMap query = constraints;
            if (!references.empty()) {
                const Clip* ref = graph.find(references.front());
                query.clear();
                set_slot(query, slot::kActivity, ref->activity);
                for (const auto& a : ref->attributes) add_slot(query, slot::kAttribute, a);
            }
            std::set<std::string> exclude;
            for (const auto& e : state.entries) exclude.insert(e.clip_id);
            for (const auto& r : references) exclude.insert(r);
            auto hits = search(graph, query, exclude);
            if (hits.empty()) {
                result.status = ExecStatus::NoResults;
                return {state, result};
            }
            if (hits.size() > targets.size()) hits.resize(targets.size());
            std::set<std::string> doomed(targets.begin(), targets.end());
            std::size_t at = state.entries.size();
            next.entries.clear();
            for (std::size_t i = 0; i < state.entries.size(); ++i) {
                const auto& e = state.entries[i];
                if (doomed.count(e.clip_id)) {
                    if (at == state.entries.size()) at = next.entries.size();
                    result.removed.push_back(e.clip_id);
                } else {
                    next.entries.push_back(e);
                }
            }
            for (std::size_t i = 0; i < hits.size(); ++i) {
                next.entries.insert(next.entries.begin() + static_cast<std::ptrdiff_t>(at + i), make_entry(hits[i]));
                result.added.push_back(hits[i].id);
            }
            next.viewer_index = at;
            detail::fill_count(result);
            break;
        }
        case Activity::ReorderClips: {
            const auto& target = targets.front();
            if (!anchors.empty() && anchors.front() == target) return invalid();
            const auto from = *state.position_of(target);
            StoryEntry moving = state.entries[from];
            next.entries.erase(next.entries.begin() + static_cast<std::ptrdiff_t>(from));
            auto at = detail::insertion_index(next, position, anchors);
            next.entries.insert(next.entries.begin() + static_cast<std::ptrdiff_t>(at), moving);
            next.viewer_index = at;
            break;
        }
        case Activity::RefineSearch: {
            const auto merged = merge_override(state.last_search, constraints);
            auto hits = search(graph, merged);
            next.last_search = merged;
            if (hits.empty()) {
                result.status = ExecStatus::NoResults;
                return {next, result};
            }
            if (hits.size() > cfg.max_story_clips) hits.resize(cfg.max_story_clips);
            std::set<std::string> keep;
            next.entries.clear();
            for (const auto& c : hits) {
                keep.insert(c.id);
                if (auto p = state.position_of(c.id)) {
                    next.entries.push_back(state.entries[*p]);
                } else {
                    next.entries.push_back(make_entry(c));
                    result.added.push_back(c.id);
                }
            }
            for (const auto& e : state.entries)
                if (!keep.count(e.clip_id)) result.removed.push_back(e.clip_id);
            next.viewer_index = 0;
            detail::fill_count(result);
            break;
        }
        case Activity::ModifyDuration: {
            const auto absolute = slot_value(call.slots, slot::kDurationS);
            const auto change = slot_value(call.slots, slot::kDurationChange);
            for (const auto& id : targets) {
                auto& e = next.entries[*next.position_of(id)];
                if (absolute) {
                    e.effective_duration_s = std::max(1, std::stoi(*absolute));
                } else {
                    const int d = e.effective_duration_s;
                    const double factor = *change == "shorter" ? 1.0 - cfg.duration_step : 1.0 + cfg.duration_step;
                    int stepped = static_cast<int>(std::lround(d * factor));
                    if (*change == "shorter")
                        stepped = std::max(1, std::min(stepped, d - 1));
                    else
                        stepped = std::max(stepped, d + 1);
                    e.effective_duration_s = stepped;
                }
            }
            next.viewer_index = *next.position_of(targets.front());
            break;
        }
        case Activity::ShareStory:
            next.shared = true;
            break;
    }
    result.status = ExecStatus::Ok;
    return {next, result};
}

// INFORM frame mirroring the user's activity.
inline Frame assistant_frame(const ExecutionResult& result, const ApiCall& call) {
    Frame f;
    f.intent = {Act::Inform, call.intent.activity};
    set_slot(f.slots, slot::kStatus, status_slot_value(result.status));
    if (result.status == ExecStatus::Ok) {
        switch (call.intent.activity) {
            case Activity::CreateStory:
            case Activity::AddClips:
            case Activity::RemoveClips:
            case Activity::ReplaceClips:
            case Activity::RefineSearch:
                set_slot(f.slots, slot::kCount, std::to_string(result.added.size() + result.removed.size()));
                break;
            default: break;
        }
    }
    return f;
}

}  // namespace ccc
