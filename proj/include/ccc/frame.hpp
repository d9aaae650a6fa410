#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ccc/errors.hpp"

namespace ccc {

using json = nlohmann::json;

enum class Act { Request, Inform };

enum class Activity {
    CreateStory,
    AddClips,
    RemoveClips,
    ReplaceClips,
    ReorderClips,
    RefineSearch,
    ModifyDuration,
    ShareStory,
};

inline constexpr std::array<Activity, 8> kAllActivities = {
    Activity::CreateStory,  Activity::AddClips,     Activity::RemoveClips,    Activity::ReplaceClips,
    Activity::ReorderClips, Activity::RefineSearch, Activity::ModifyDuration, Activity::ShareStory,
};

enum class Role { Target, Anchor, Reference, Unspecified };

enum class MentionType { Adjectival, Ordinal, DeviceContext, Carryover, Unspecified };

enum class Speaker { User, Assistant };

inline std::string_view to_string(Act a) { return a == Act::Request ? "REQUEST" : "INFORM"; }

inline std::string_view to_string(Activity a) {
    switch (a) {
        case Activity::CreateStory: return "CREATE_STORY";
        case Activity::AddClips: return "ADD_CLIPS";
        case Activity::RemoveClips: return "REMOVE_CLIPS";
        case Activity::ReplaceClips: return "REPLACE_CLIPS";
        case Activity::ReorderClips: return "REORDER_CLIPS";
        case Activity::RefineSearch: return "REFINE_SEARCH";
        case Activity::ModifyDuration: return "MODIFY_DURATION";
        case Activity::ShareStory: return "SHARE_STORY";
    }
    return "?";
}

inline std::string_view to_string(Role r) {
    switch (r) {
        case Role::Target: return "TARGET";
        case Role::Anchor: return "ANCHOR";
        case Role::Reference: return "REFERENCE";
        case Role::Unspecified: return "UNSPECIFIED";
    }
    return "?";
}

inline std::string_view to_string(MentionType m) {
    switch (m) {
        case MentionType::Adjectival: return "ADJECTIVAL";
        case MentionType::Ordinal: return "ORDINAL";
        case MentionType::DeviceContext: return "DEVICE_CONTEXT";
        case MentionType::Carryover: return "CARRYOVER";
        case MentionType::Unspecified: return "UNSPECIFIED";
    }
    return "?";
}

inline std::string_view to_string(Speaker s) { return s == Speaker::User ? "USER" : "ASSISTANT"; }

inline std::optional<Act> act_from_string(std::string_view s) {
    if (s == "REQUEST") return Act::Request;
    if (s == "INFORM") return Act::Inform;
    return std::nullopt;
}

inline std::optional<Activity> activity_from_string(std::string_view s) {
    for (Activity a : kAllActivities)
        if (to_string(a) == s) return a;
    return std::nullopt;
}

inline std::optional<Role> role_from_string(std::string_view s) {
    for (Role r : {Role::Target, Role::Anchor, Role::Reference, Role::Unspecified})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

inline std::optional<MentionType> mention_type_from_string(std::string_view s) {
    for (MentionType m : {MentionType::Adjectival, MentionType::Ordinal, MentionType::DeviceContext,
                          MentionType::Carryover, MentionType::Unspecified})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

// Slot values are kept sorted and unique so that equal maps compare equal.
using SlotMap = std::map<std::string, std::vector<std::string>>;

namespace slot {
inline constexpr std::string_view kActivity = "activity";
inline constexpr std::string_view kTime = "time";
inline constexpr std::string_view kLocation = "location";
inline constexpr std::string_view kObject = "object";
inline constexpr std::string_view kParticipant = "participant";
inline constexpr std::string_view kAttribute = "attribute";
inline constexpr std::string_view kPosition = "position";
inline constexpr std::string_view kDurationS = "duration_s";
inline constexpr std::string_view kDurationChange = "duration_change";
inline constexpr std::string_view kShareTo = "share_to";
inline constexpr std::string_view kStatus = "status";
inline constexpr std::string_view kCount = "count";

inline constexpr std::array<std::string_view, 6> kConstraintKeys = {kActivity, kTime,        kLocation,
                                                                    kObject,   kParticipant, kAttribute};

inline bool is_constraint_key(std::string_view k) {
    return std::find(kConstraintKeys.begin(), kConstraintKeys.end(), k) != kConstraintKeys.end();
}

inline bool is_multi_valued(std::string_view k) { return k == kObject || k == kParticipant || k == kAttribute; }
}  // namespace slot

inline void normalize(SlotMap& slots) {
    for (auto it = slots.begin(); it != slots.end();) {
        auto& v = it->second;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.empty())
            it = slots.erase(it);
        else
            ++it;
    }
}

inline void add_slot(SlotMap& slots, std::string_view key, std::string value) {
    auto& v = slots[std::string(key)];
    auto pos = std::lower_bound(v.begin(), v.end(), value);
    if (pos == v.end() || *pos != value) v.insert(pos, std::move(value));
}

inline void set_slot(SlotMap& slots, std::string_view key, std::string value) {
    slots[std::string(key)] = {std::move(value)};
}

inline std::optional<std::string> slot_value(const SlotMap& slots, std::string_view key) {
    auto it = slots.find(std::string(key));
    if (it == slots.end() || it->second.empty()) return std::nullopt;
    return it->second.front();
}

// The search-constraint part of a slot map.
inline SlotMap constraints_of(const SlotMap& slots) {
    SlotMap out;
    for (const auto& [k, v] : slots)
        if (slot::is_constraint_key(k)) out.emplace(k, v);
    return out;
}

// New values override same-key old values; unmentioned keys carry over.
inline SlotMap merge_override(const SlotMap& base, const SlotMap& update) {
    SlotMap out = base;
    for (const auto& [k, v] : update) out[k] = v;
    return out;
}

struct Intent {
    Act act = Act::Request;
    Activity activity = Activity::CreateStory;

    bool operator==(const Intent&) const = default;
};

inline std::string to_string(const Intent& i) {
    return std::string(to_string(i.act)) + ":" + std::string(to_string(i.activity));
}

struct ClipRef {
    std::vector<std::string> clip_ids;
    Role role = Role::Target;
    MentionType mention_type = MentionType::Unspecified;
    std::string mention_text;

    bool operator==(const ClipRef&) const = default;
};

struct Frame {
    Intent intent;
    SlotMap slots;
    std::vector<ClipRef> refs;

    bool operator==(const Frame&) const = default;

    std::vector<std::string> ids_with_role(Role r) const {
        std::vector<std::string> out;
        for (const auto& ref : refs)
            if (ref.role == r)
                for (const auto& id : ref.clip_ids)
                    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
        return out;
    }

    // Every referenced id once, in first-seen order.
    std::vector<std::string> flat_ids() const {
        std::vector<std::string> out;
        for (const auto& ref : refs)
            for (const auto& id : ref.clip_ids)
                if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
        return out;
    }

    bool has_role(Role r) const {
        return std::any_of(refs.begin(), refs.end(), [r](const ClipRef& c) { return c.role == r; });
    }
};

// An API call carries exactly the information of a user frame.
using ApiCall = Frame;

// ---- JSON -----------------------------------------------------------------

inline void to_json(json& j, const ClipRef& r) {
    j = json{{"clip_ids", r.clip_ids},
             {"role", to_string(r.role)},
             {"mention_type", to_string(r.mention_type)},
             {"mention_text", r.mention_text}};
}

inline void from_json(const json& j, ClipRef& r) {
    r.clip_ids = j.at("clip_ids").get<std::vector<std::string>>();
    auto role = role_from_string(j.at("role").get<std::string>());
    auto mt = mention_type_from_string(j.value("mention_type", std::string("UNSPECIFIED")));
    if (!role || !mt) throw ValidationError("clip ref has unknown role or mention type");
    r.role = *role;
    r.mention_type = *mt;
    r.mention_text = j.value("mention_text", std::string());
}

inline void to_json(json& j, const Frame& f) {
    j = json{{"act", to_string(f.intent.act)},
             {"activity", to_string(f.intent.activity)},
             {"slots", f.slots},
             {"refs", f.refs}};
}

inline void from_json(const json& j, Frame& f) {
    auto act = act_from_string(j.at("act").get<std::string>());
    auto activity = activity_from_string(j.at("activity").get<std::string>());
    if (!act) throw VocabularyError("unknown act " + j.at("act").dump());
    if (!activity) throw VocabularyError("unknown activity " + j.at("activity").dump());
    f.intent = {*act, *activity};
    f.slots = j.value("slots", SlotMap{});
    normalize(f.slots);
    f.refs = j.value("refs", std::vector<ClipRef>{});
}

}  // namespace ccc
