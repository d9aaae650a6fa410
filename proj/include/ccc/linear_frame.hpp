#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ccc/errors.hpp"
#include "ccc/frame.hpp"
#include "ccc/story_engine.hpp"

namespace ccc {

// Clip ids in serialization order: TARGET, ANCHOR, REFERENCE, then anything
// unspecified. Within a role group ids follow the snapshot when one is given.
inline std::vector<std::string> ordered_clip_ids(const Frame& frame, const StoryState* snapshot = nullptr) {
    std::vector<std::string> out;
    auto seen = [&](const std::string& id) { return std::find(out.begin(), out.end(), id) != out.end(); };
    for (Role role : {Role::Target, Role::Anchor, Role::Reference, Role::Unspecified}) {
        std::vector<std::string> group;
        for (const auto& ref : frame.refs)
            if (ref.role == role)
                for (const auto& id : ref.clip_ids)
                    if (std::find(group.begin(), group.end(), id) == group.end()) group.push_back(id);
        if (snapshot) {
            std::stable_sort(group.begin(), group.end(), [&](const std::string& a, const std::string& b) {
                auto pa = snapshot->position_of(a), pb = snapshot->position_of(b);
                if (pa && pb) return *pa < *pb;
                return pa.has_value() && !pb.has_value();
            });
        }
        for (auto& id : group)
            if (!seen(id)) out.push_back(std::move(id));
    }
    return out;
}

// Canonical form: `ACT:ACTIVITY [ k1 = v1, k2 = v2 ] < clip: idA, idB >`.
inline std::string serialize_frame(const Frame& frame, const StoryState* snapshot = nullptr) {
    std::string out = to_string(frame.intent);
    out += " [";
    bool first = true;
    for (const auto& [key, values] : frame.slots) {
        for (const auto& v : values) {
            out += first ? " " : ", ";
            out += key + " = " + v;
            first = false;
        }
    }
    out += " ]";
    const auto ids = ordered_clip_ids(frame, snapshot);
    if (ids.empty()) {
        out += " < >";
    } else {
        out += " < clip: ";
        for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i];
        out += " >";
    }
    return out;
}

// The linear form keeps only a flat id list; this is what survives a round trip.
inline Frame flatten_roles(const Frame& frame, const StoryState* snapshot = nullptr) {
    Frame out;
    out.intent = frame.intent;
    out.slots = frame.slots;
    normalize(out.slots);
    auto ids = ordered_clip_ids(frame, snapshot);
    if (!ids.empty()) out.refs.push_back(ClipRef{std::move(ids), Role::Unspecified, MentionType::Unspecified, ""});
    return out;
}

namespace detail {

class FrameReader {
public:
    explicit FrameReader(std::string_view text) : s_(text) {}

    Frame read() {
        Frame f;
        skip_ws();
        const auto act_at = pos_;
        const auto act = upper_token("dialog act");
        skip_ws();
        expect(':', "':' after dialog act");
        skip_ws();
        const auto activity_at = pos_;
        const auto activity = upper_token("activity name");
        auto a = act_from_string(act);
        if (!a) throw VocabularyError("unknown dialog act '" + act + "' at byte " + std::to_string(act_at));
        auto b = activity_from_string(activity);
        if (!b)
            throw VocabularyError("unknown activity '" + activity + "' at byte " + std::to_string(activity_at));
        f.intent = {*a, *b};

        skip_ws();
        expect('[', "'[' opening the slot list");
        skip_ws();
        if (peek() != ']') {
            for (;;) {
                skip_ws();
                auto key = key_token();
                skip_ws();
                expect('=', "'=' after slot key");
                skip_ws();
                auto value = value_token();
                add_slot(f.slots, key, std::move(value));
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
        }
        expect(']', "',' or ']' in the slot list");
        skip_ws();
        expect('<', "'<' opening the clip list");
        skip_ws();
        std::vector<std::string> ids;
        if (peek() != '>') {
            const auto at = pos_;
            if (s_.substr(pos_, 4) != "clip") throw ParseError(at, "'clip:' or '>'");
            pos_ += 4;
            skip_ws();
            expect(':', "':' after 'clip'");
            for (;;) {
                skip_ws();
                auto id = id_token();
                if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(std::move(id));
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
        }
        expect('>', "',' or '>' in the clip list");
        skip_ws();
        if (pos_ != s_.size()) throw ParseError(pos_, "end of input");
        if (!ids.empty())
            f.refs.push_back(ClipRef{std::move(ids), Role::Unspecified, MentionType::Unspecified, ""});
        return f;
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void expect(char c, const char* what) {
        if (peek() != c) throw ParseError(pos_, what);
        ++pos_;
    }

    std::string upper_token(const char* what) {
        const auto start = pos_;
        while (pos_ < s_.size() && (std::isupper(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (pos_ == start) throw ParseError(start, what);
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string key_token() {
        const auto start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (pos_ == start) throw ParseError(start, "slot key");
        return std::string(s_.substr(start, pos_ - start));
    }

    // Everything up to the next ',' or ']', with surrounding blanks trimmed.
    std::string value_token() {
        const auto start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '[' && s_[pos_] != '<' &&
               s_[pos_] != '>' && s_[pos_] != '=')
            ++pos_;
        auto end = pos_;
        while (end > start && std::isspace(static_cast<unsigned char>(s_[end - 1]))) --end;
        if (end == start) throw ParseError(start, "slot value");
        return std::string(s_.substr(start, end - start));
    }

    std::string id_token() {
        const auto start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
            ++pos_;
        if (pos_ == start) throw ParseError(start, "clip id");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Inverse of serialize_frame. Roles are not recoverable from the flat clip
// list and come back as UNSPECIFIED.
inline Frame parse_frame(std::string_view text) { return detail::FrameReader(text).read(); }

}  // namespace ccc
