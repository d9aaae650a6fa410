#pragma once

#include <httplib.h>

#include <string>

#include "ccc/session.hpp"

namespace ccc {

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, const std::string& what) {
    send_json(res, status, json{{"error", what}});
}

inline json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        auto j = json::parse(req.body);
        if (!j.is_object()) throw ValidationError("request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON body: ") + e.what());
    }
}

template <class F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const NotFoundError& e) {
            send_error(res, 404, e.what());
        } catch (const ValidationError& e) {
            send_error(res, 400, e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, e.what());
        }
    };
}

}  // namespace detail

// Registers the session routes on `server`. All state lives in `store`.
inline void register_routes(httplib::Server& server, SessionStore& store) {
    using detail::guarded;
    using detail::send_json;

    server.Post("/sessions", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const auto body = detail::parse_body(req);
                    const auto id = store.create(body.value("graph_id", std::string()));
                    send_json(res, 201, json{{"session_id", id}});
                }));

    server.Post(R"(/sessions/([^/]+)/messages)",
                guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const auto body = detail::parse_body(req);
                    if (!body.contains("text") || !body["text"].is_string())
                        throw ValidationError("body needs a string field 'text'");
                    const auto resp = store.post(req.matches[1], body["text"].get<std::string>());
                    if (auto err = check_invariants(resp.story_snapshot); !err.empty())
                        throw ConsistencyError("story invariant broken: " + err);
                    send_json(res, 200, resp);
                }));

    server.Get(R"(/sessions/([^/]+)/story)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, store.story(req.matches[1]));
               }));

    server.Get(R"(/sessions/([^/]+)/history)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, json{{"turns", store.history(req.matches[1])}});
               }));

    server.Delete(R"(/sessions/([^/]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                      store.remove(req.matches[1]);
                      send_json(res, 200, json{{"deleted", std::string(req.matches[1])}});
                  }));

    server.Get(R"(/clips/([^/]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   const auto graph = store.graph(req.has_param("graph_id") ? req.get_param_value("graph_id") : "");
                   const Clip* c = graph->find(req.matches[1].str());
                   if (!c) throw NotFoundError("unknown clip " + std::string(req.matches[1]));
                   send_json(res, 200, *c);
               }));
}

}  // namespace ccc
