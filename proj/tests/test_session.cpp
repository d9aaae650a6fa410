#include <gtest/gtest.h>

#include <httplib.h>

#include <fstream>
#include <thread>

#include "ccc/http_api.hpp"
#include "test_util.hpp"

using namespace ccc;
using namespace testutil;

namespace {

// c1/c4 share "sunset"; two skiing clips in 2018.
MemoryGraph session_graph() {
    return graph_of({clip("c1", "skiing", "2018", {"sunset"}), clip("c2", "skiing", "2018", {"snowy"}),
                     clip("c3", "surfing", "2018"), clip("c4", "surfing", "2019", {"sunset"}),
                     clip("c5", "hiking", "2018")});
}

const std::vector<std::string> kScript = {
    "Create a story of all skiing trips in 2018",
    "Please add some surfing clips at the beginning",
    "Move the last clip to the front",
    "Remove the sunset clips from the story",
    "Make the current clip 12 seconds long",
    "Share this story with my family",
};

}  // namespace

TEST(SessionPipeline, ScriptedConversation) {
    SessionStore store({session_graph()});
    const auto id = store.create();
    std::vector<AssistantResponse> r;
    for (const auto& text : kScript) r.push_back(store.post(id, text));

    EXPECT_EQ(r[0].execution_result->added, (std::vector<std::string>{"c1", "c2"}));
    EXPECT_EQ(r[1].story_snapshot.clip_ids(), (std::vector<std::string>{"c3", "c4", "c1", "c2"}));
    EXPECT_EQ(r[2].story_snapshot.clip_ids(), (std::vector<std::string>{"c2", "c3", "c4", "c1"}));
    EXPECT_EQ(r[3].execution_result->removed, (std::vector<std::string>{"c4", "c1"}));
    EXPECT_EQ(r[3].story_snapshot.clip_ids(), (std::vector<std::string>{"c2", "c3"}));
    EXPECT_EQ(r[4].story_snapshot.entries[0].effective_duration_s, 12);
    EXPECT_TRUE(r[5].story_snapshot.shared);
    for (const auto& x : r) EXPECT_EQ(x.annotation["status"], "ok") << x.utterance;
    EXPECT_EQ(r[3].utterance.find("Done, I removed 2 clips"), 0u);

    const auto hist = store.history(id);
    ASSERT_EQ(hist.size(), 12u);
    EXPECT_EQ(replay_session(hist, session_graph()), store.story(id));
    EXPECT_EQ(json(r[0])["linear_frame"], "REQUEST:CREATE_STORY [ activity = skiing, time = 2018 ] < >");
}

TEST(SessionPipeline, GibberishAsksForClarification) {
    SessionStore store({session_graph()});
    const auto id = store.create();
    const auto r = store.post(id, "blorp the wug");
    EXPECT_EQ(r.utterance, store.lexicon().clarification[0]);
    EXPECT_EQ(r.annotation["status"], "clarification");
    EXPECT_FALSE(r.api_call);
    EXPECT_TRUE(store.story(id).entries.empty());
    EXPECT_EQ(store.history(id).size(), 2u);
    // the next clarification rotates
    EXPECT_EQ(store.post(id, "hmm").utterance, store.lexicon().clarification[1 % store.lexicon().clarification.size()]);
}

TEST(SessionPipeline, DanglingMentionIsInvalidRef) {
    SessionStore store({session_graph()});
    const auto id = store.create();
    store.post(id, kScript[0]);
    const auto before = store.story(id);
    const auto r = store.post(id, "Remove the third clip from the story");
    EXPECT_EQ(r.execution_result->status, ExecStatus::InvalidRef);
    EXPECT_EQ(r.annotation["status"], "invalid_ref");
    EXPECT_FALSE(r.api_call);
    EXPECT_EQ(store.story(id), before);
    EXPECT_EQ(replay_session(store.history(id), session_graph()), before);
}

TEST(SessionPipeline, MissingArgumentsAskForClarification) {
    SessionStore store({session_graph()});
    const auto id = store.create();
    const auto r = store.post(id, "Share this story");
    EXPECT_EQ(r.annotation["status"], "clarification");
    EXPECT_TRUE(store.story(id).entries.empty());
}

TEST(SessionStoreTest, UnknownIdsAreNotFound) {
    SessionStore store({session_graph()});
    EXPECT_THROW(store.post("s42", "hi"), NotFoundError);
    EXPECT_THROW(store.create("nope"), NotFoundError);
    const auto id = store.create();
    store.remove(id);
    EXPECT_THROW(store.story(id), NotFoundError);
    EXPECT_EQ(store.size(), 0u);
    EXPECT_THROW(SessionStore({}), ConfigError);
}

TEST(SessionStoreTest, PersistenceSurvivesRestartAndTornTail) {
    const auto dir = temp_dir("persist");
    std::string id;
    StoryState story;
    std::vector<Turn> hist;
    {
        SessionStore store({session_graph()}, default_lexicon(), dir);
        id = store.create();
        for (std::size_t i = 0; i < 4; ++i) store.post(id, kScript[i]);
        story = store.story(id);
        hist = store.history(id);
    }
    {
        std::ofstream out(dir / (id + ".jsonl"), std::ios::app);
        out << "{\"text\": \"Make the cur";
    }
    SessionStore again({session_graph()}, default_lexicon(), dir);
    EXPECT_EQ(again.story(id), story);
    EXPECT_EQ(again.history(id), hist);
    // fresh ids do not collide with recovered ones
    EXPECT_NE(again.create(), id);
    fs::remove_all(dir);
}

TEST(SessionStoreTest, ConcurrentSessionsStayIndependent) {
    SessionStore store({session_graph()});
    std::vector<std::string> ids;
    for (int i = 0; i < 4; ++i) ids.push_back(store.create());
    std::vector<std::thread> pool;
    for (const auto& id : ids)
        pool.emplace_back([&store, id] {
            for (const auto& t : kScript) store.post(id, t);
        });
    for (auto& t : pool) t.join();
    for (const auto& id : ids) EXPECT_EQ(store.story(id).clip_ids(), (std::vector<std::string>{"c2", "c3"}));
}

TEST(HttpApi, LoopbackRoundTrip) {
    SessionStore store({session_graph()});
    httplib::Server srv;
    register_routes(srv, store);
    const int port = srv.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread th([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    httplib::Client cli("127.0.0.1", port);
    auto res = cli.Post("/sessions", "{}", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    const auto id = json::parse(res->body)["session_id"].get<std::string>();

    res = cli.Post("/sessions/" + id + "/messages", json{{"text", kScript[0]}}.dump(), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const auto body = json::parse(res->body);
    EXPECT_EQ(body["story_snapshot"]["entries"].size(), 2u);
    EXPECT_EQ(body["linear_frame"], "REQUEST:CREATE_STORY [ activity = skiing, time = 2018 ] < >");

    res = cli.Get("/sessions/" + id + "/story");
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body).get<StoryState>(), store.story(id));
    res = cli.Get("/sessions/" + id + "/history");
    EXPECT_EQ(json::parse(res->body)["turns"].size(), 2u);
    res = cli.Get("/clips/c4");
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body)["activity"], "surfing");

    EXPECT_EQ(cli.Get("/clips/c99")->status, 404);
    EXPECT_EQ(cli.Get("/sessions/s999/story")->status, 404);
    EXPECT_EQ(cli.Post("/sessions/" + id + "/messages", "{not json", "application/json")->status, 400);
    EXPECT_EQ(cli.Post("/sessions/" + id + "/messages", "{\"txt\": 1}", "application/json")->status, 400);
    EXPECT_EQ(cli.Post("/sessions", "{\"graph_id\": \"nope\"}", "application/json")->status, 404);
    EXPECT_EQ(cli.Delete("/sessions/" + id)->status, 200);
    EXPECT_EQ(cli.Get("/sessions/" + id + "/story")->status, 404);

    srv.stop();
    th.join();
}

TEST(Splits, SixTwoTwoOfTen) {
    EXPECT_EQ(split_sizes(10, {0.6, 0.2, 0.2}), (std::vector<std::size_t>{6, 2, 2}));
    EXPECT_EQ(split_sizes(7, {0.6, 0.2, 0.2}), (std::vector<std::size_t>{4, 2, 1}));
    EXPECT_EQ(split_sizes(0, {0.6, 0.2, 0.2}), (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Splits, RejectsBadRatios) {
    EXPECT_THROW(split_sizes(10, {0.5, 0.2, 0.2}), ValidationError);
    EXPECT_THROW(split_sizes(10, {1.2, -0.2}), ValidationError);
    EXPECT_THROW(split_sizes(10, {}), ValidationError);
}

TEST(SplitsProperty, DeterministicDisjointExhaustive) {
    for (std::size_t n : {1u, 10u, 37u, 100u}) {
        for (std::uint64_t seed : {0u, 1u, 99u}) {
            const auto a = split_indices(n, {0.6, 0.2, 0.2}, seed);
            EXPECT_EQ(a, split_indices(n, {0.6, 0.2, 0.2}, seed));
            std::vector<std::size_t> all;
            for (const auto& p : a) all.insert(all.end(), p.begin(), p.end());
            std::sort(all.begin(), all.end());
            std::vector<std::size_t> want(n);
            for (std::size_t i = 0; i < n; ++i) want[i] = i;
            EXPECT_EQ(all, want);
            EXPECT_EQ(a[0].size() + a[1].size() + a[2].size(), n);
        }
    }
    EXPECT_NE(split_indices(100, {0.6, 0.2, 0.2}, 1), split_indices(100, {0.6, 0.2, 0.2}, 2));
}

TEST(Splits, ExportWritesFilesAndManifest) {
    const auto dir = temp_dir("splits");
    std::vector<Dialog> corpus(small_corpus().dialogs.begin(), small_corpus().dialogs.begin() + 10);
    const auto m = export_splits(corpus, dir);
    EXPECT_EQ(m["counts"]["train"], 6);
    EXPECT_EQ(m["counts"]["val"], 2);
    EXPECT_EQ(m["counts"]["test"], 2);
    std::set<std::string> ids;
    for (const auto& name : split_names())
        for (const auto& d : read_jsonl<Dialog>(dir / (name + ".jsonl"))) EXPECT_TRUE(ids.insert(d.dialog_id).second);
    EXPECT_EQ(ids.size(), 10u);
    EXPECT_EQ(read_json(dir / "split_manifest.json"), m);
    fs::remove_all(dir);
}

TEST(Io, CorpusRoundTripsThroughDisk) {
    const auto dir = temp_dir("corpus");
    CorpusConfig cfg;
    cfg.n = 5;
    cfg.seed = 3;
    const auto c = simulate_corpus(cfg);
    write_corpus(dir, cfg, c);
    const auto back = load_corpus(dir);
    EXPECT_EQ(back.dialogs, c.dialogs);
    EXPECT_EQ(back.graphs, c.graphs);
    EXPECT_EQ(read_json(dir / "manifest.json")["config_digest"], config_digest(cfg));
    write_text(dir / "bad.jsonl", to_jsonl(c.dialogs) + "{\"dialog_id\": 3}\n");
    try {
        read_jsonl<Dialog>(dir / "bad.jsonl");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("record 5:"), std::string::npos) << e.what();
    }
    EXPECT_THROW(read_text(dir / "missing.json"), IoError);
    fs::remove_all(dir);
}
