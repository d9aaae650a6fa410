#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ccc/dialog.hpp"
#include "ccc/errors.hpp"
#include "ccc/io.hpp"
#include "ccc/lexicon.hpp"
#include "ccc/memory_graph.hpp"
#include "ccc/nlu.hpp"
#include "ccc/simulator.hpp"
#include "ccc/story_engine.hpp"

namespace ccc {

struct Session {
    std::string session_id;
    std::shared_ptr<const MemoryGraph> graph;
    StoryState state;
    std::vector<Turn> turns;
    std::string created_at;
    std::string config_digest;
    std::mutex mutex;  // serializes messages within the session
};

struct AssistantResponse {
    std::string utterance;
    std::optional<Frame> frame;  // the user-side parse
    std::optional<ApiCall> api_call;
    std::optional<ExecutionResult> execution_result;
    StoryState story_snapshot;
    json annotation;
};

inline void to_json(json& j, const AssistantResponse& r) {
    j = json{{"utterance", r.utterance},
             {"frame", r.frame ? json(*r.frame) : json(nullptr)},
             {"linear_frame", r.frame ? json(serialize_frame(*r.frame)) : json(nullptr)},
             {"api_call", r.api_call ? json(*r.api_call) : json(nullptr)},
             {"execution_result", r.execution_result ? json(*r.execution_result) : json(nullptr)},
             {"story_snapshot", r.story_snapshot},
             {"annotation", r.annotation}};
}

inline json span_json(const MentionSpan& s) {
    return json{{"text", s.text},          {"type", to_string(s.type)}, {"descriptor", s.descriptor},
                {"ordinal", s.ordinal},    {"role", to_string(s.role)}, {"begin", s.begin},
                {"end", s.end}};
}

// Runs one user message through parse -> resolve -> execute -> realize and
// appends both turns. The caller holds session.mutex.
inline AssistantResponse handle_message(Session& session, const std::string& text, const Lexicon& lex,
                                        const EngineConfig& engine = {}) {
    const MemoryGraph& graph = *session.graph;
    AssistantResponse resp;
    Turn user;
    user.turn_id = static_cast<int>(session.turns.size()) + 1;
    user.speaker = Speaker::User;
    user.template_utterance = text;
    user.story_snapshot = session.state;

    Turn assistant;
    assistant.turn_id = user.turn_id + 1;
    assistant.speaker = Speaker::Assistant;

    const auto pf = parse_utterance(text, lex);
    json spans = json::array();
    for (const auto& s : pf.spans) spans.push_back(span_json(s));
    resp.annotation = {{"unparseable", pf.unparseable}, {"spans", spans}};

    auto clarify = [&](const std::string& reason) {
        const auto& options = lex.clarification;
        if (options.empty()) throw ConfigError("lexicon has no clarification utterances");
        resp.utterance = options[(session.turns.size() / 2) % options.size()];
        resp.annotation["status"] = "clarification";
        resp.annotation["reason"] = reason;
    };

    if (pf.unparseable) {
        clarify("no request recognized");
    } else {
        const auto resolved = resolve_mentions(pf.spans, session.turns, session.state, graph);
        const ApiCall call = to_api_call(pf, resolved);
        Frame user_frame = call;
        user.frame = user_frame;
        resp.frame = user_frame;
        json res = json::array();
        bool dangling = false;
        for (const auto& r : resolved) {
            res.push_back(r);
            dangling = dangling || r.empty();
        }
        resp.annotation["resolved"] = res;
        if (dangling) {
            // a mention pointed at nothing in the story: nothing is executed
            ExecutionResult r;
            r.status = ExecStatus::InvalidRef;
            const Frame af = assistant_frame(r, call);
            resp.execution_result = r;
            resp.utterance = realize(af, lex, session.turns.size() / 2);
            resp.annotation["status"] = status_slot_value(r.status);
            assistant.frame = af;
            assistant.execution_result = r;
        } else if (auto why = schema_violation(call); !why.empty()) {
            clarify(why);
        } else {
            auto [next, r] = execute(session.state, call, graph, engine);
            const Frame af = assistant_frame(r, call);
            resp.api_call = call;
            resp.execution_result = r;
            resp.utterance = realize(af, lex, session.turns.size() / 2);
            resp.annotation["status"] = status_slot_value(r.status);
            user.api_call = call;
            assistant.frame = af;
            assistant.execution_result = r;
            session.state = std::move(next);
        }
    }
    assistant.template_utterance = resp.utterance;
    assistant.story_snapshot = session.state;
    resp.story_snapshot = session.state;
    session.turns.push_back(std::move(user));
    session.turns.push_back(std::move(assistant));
    return resp;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Owns every live session. With a persistence directory each session is an
// append-only JSONL log (header line, then one line per message) that is
// replayed on load.
class SessionStore {
public:
    explicit SessionStore(std::vector<MemoryGraph> graphs, Lexicon lexicon = default_lexicon(),
                          std::optional<fs::path> persist_dir = std::nullopt, EngineConfig engine = {})
        : lex_(std::move(lexicon)), persist_(std::move(persist_dir)), engine_(engine) {
        if (graphs.empty()) throw ConfigError("session store needs at least one memory graph");
        for (auto& g : graphs) {
            if (default_graph_.empty()) default_graph_ = g.graph_id();
            const auto id = g.graph_id();
            graphs_[id] = std::make_shared<const MemoryGraph>(std::move(g));
        }
        if (persist_) {
            fs::create_directories(*persist_);
            recover();
        }
    }

    const std::string& default_graph_id() const { return default_graph_; }

    std::shared_ptr<const MemoryGraph> graph(const std::string& graph_id) const {
        auto it = graphs_.find(graph_id.empty() ? default_graph_ : graph_id);
        if (it == graphs_.end()) throw NotFoundError("unknown graph " + graph_id);
        return it->second;
    }

    std::string create(const std::string& graph_id = {}) {
        auto s = std::make_shared<Session>();
        s->graph = graph(graph_id);
        s->created_at = utc_timestamp();
        s->config_digest = digest(*s->graph);
        {
            std::lock_guard lock(mutex_);
            s->session_id = "s" + std::to_string(++counter_);
            sessions_[s->session_id] = s;
        }
        persist_line(*s, json{{"session_id", s->session_id},
                              {"graph_id", s->graph->graph_id()},
                              {"created_at", s->created_at},
                              {"config_digest", s->config_digest}});
        return s->session_id;
    }

    std::shared_ptr<Session> get(const std::string& id) const {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) throw NotFoundError("unknown session " + id);
        return it->second;
    }

    AssistantResponse post(const std::string& id, const std::string& text) {
        auto s = get(id);
        std::lock_guard lock(s->mutex);
        auto resp = handle_message(*s, text, lex_, engine_);
        persist_line(*s, json{{"text", text}});
        return resp;
    }

    // Copies taken under the session lock.
    StoryState story(const std::string& id) const {
        auto s = get(id);
        std::lock_guard lock(s->mutex);
        return s->state;
    }

    std::vector<Turn> history(const std::string& id) const {
        auto s = get(id);
        std::lock_guard lock(s->mutex);
        return s->turns;
    }

    void remove(const std::string& id) {
        std::shared_ptr<Session> s;
        {
            std::lock_guard lock(mutex_);
            auto it = sessions_.find(id);
            if (it == sessions_.end()) throw NotFoundError("unknown session " + id);
            s = it->second;
            sessions_.erase(it);
        }
        std::lock_guard lock(s->mutex);
        if (persist_) fs::remove(log_path(id));
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return sessions_.size();
    }

    const Lexicon& lexicon() const { return lex_; }

private:
    static std::string digest(const MemoryGraph& g) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(json(g).dump())));
        return buf;
    }

    fs::path log_path(const std::string& id) const { return *persist_ / (id + ".jsonl"); }

    void persist_line(const Session& s, const json& line) const {
        if (!persist_) return;
        std::ofstream out(log_path(s.session_id), std::ios::app | std::ios::binary);
        if (!out) throw IoError("cannot append to session log " + log_path(s.session_id).string());
        out << line.dump() << "\n";
        out.flush();
    }

    void recover() {
        for (const auto& entry : fs::directory_iterator(*persist_)) {
            if (entry.path().extension() != ".jsonl") continue;
            std::ifstream in(entry.path());
            std::string line;
            std::shared_ptr<Session> s;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                json j;
                try {
                    j = json::parse(line);
                } catch (const json::parse_error&) {
                    break;  // a torn final line from a crash
                }
                if (!s) {
                    s = std::make_shared<Session>();
                    s->session_id = j.at("session_id").get<std::string>();
                    s->graph = graph(j.at("graph_id").get<std::string>());
                    s->created_at = j.value("created_at", std::string());
                    s->config_digest = digest(*s->graph);
                } else {
                    handle_message(*s, j.at("text").get<std::string>(), lex_, engine_);
                }
            }
            if (!s) continue;
            const auto& id = s->session_id;
            if (id.size() > 1 && id[0] == 's')
                counter_ = std::max(counter_, std::strtoull(id.c_str() + 1, nullptr, 10));
            sessions_[id] = s;
        }
    }

    Lexicon lex_;
    std::optional<fs::path> persist_;
    EngineConfig engine_;
    std::map<std::string, std::shared_ptr<const MemoryGraph>> graphs_;
    std::string default_graph_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    unsigned long long counter_ = 0;
};

// Re-executes the session's api_call log from the empty story.
inline StoryState replay_session(const std::vector<Turn>& turns, const MemoryGraph& graph, const EngineConfig& cfg = {}) {
    StoryState s;
    for (const auto& t : turns)
        if (t.speaker == Speaker::User && t.api_call) s = execute(s, *t.api_call, graph, cfg).first;
    return s;
}

}  // namespace ccc
