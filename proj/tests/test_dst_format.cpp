#include <gtest/gtest.h>

#include <fstream>

#include "test_util.hpp"

using namespace ccc;
using namespace testutil;

namespace {

Turn user_turn(int id, std::string text, Frame f, StoryState snap = {}) {
    Turn t;
    t.turn_id = id;
    t.speaker = Speaker::User;
    t.template_utterance = std::move(text);
    t.frame = f;
    t.api_call = f;
    t.story_snapshot = std::move(snap);
    return t;
}

Turn assistant_turn(int id, std::string text) {
    Turn t;
    t.turn_id = id;
    t.speaker = Speaker::Assistant;
    t.template_utterance = std::move(text);
    t.frame = Frame{{Act::Inform, Activity::CreateStory}, {{"status", {"ok"}}}, {}};
    t.execution_result = ExecutionResult{};
    return t;
}

}  // namespace

TEST(Prompt, EmptyStoryFirstTurn) {
    const auto g = three_clip_graph();
    const std::vector<Turn> h = {user_turn(1, "Create a story of all skiing trips in 2018",
                                           request(Activity::CreateStory, {{"activity", {"skiing"}}, {"time", {"2018"}}}))};
    EXPECT_EQ(build_prompt(h, StoryState{}, g),
              "<context> ; viewer = none <history> U: Create a story of all skiing trips in 2018");
}

TEST(Prompt, ContextListsClipsInStoryOrder) {
    auto g = graph_of({clip("c1", "skiing", "2018", {"snowy"}, "mountains", 12), clip("c2", "surfing", "2019")});
    const auto snap = story_of({"c2", "c1"}, 1);
    const std::vector<Turn> h = {user_turn(1, "Remove the first clip", request(Activity::RemoveClips), snap)};
    EXPECT_EQ(build_prompt(h, snap, g),
              "<context> clip c2 : activity = surfing , time = 2019 , location = beach , duration = 10 ; "
              "clip c1 : activity = skiing , time = 2018 , location = mountains , attributes = snowy , duration = 10 ; "
              "viewer = c1 <history> U: Remove the first clip");
    PromptConfig pc;
    pc.include_context = false;
    EXPECT_EQ(build_prompt(h, snap, g, pc), "<history> U: Remove the first clip");
}

TEST(Prompt, HistoryWindowKeepsTheLastTurns) {
    const auto g = three_clip_graph();
    std::vector<Turn> h;
    for (int i = 1; i <= 7; ++i) {
        if (i % 2) h.push_back(user_turn(i, "u" + std::to_string(i), request(Activity::ShareStory)));
        else h.push_back(assistant_turn(i, "a" + std::to_string(i)));
    }
    PromptConfig pc;
    pc.history_turns = 4;
    pc.include_context = false;
    EXPECT_EQ(build_prompt(h, {}, g, pc), "<history> A: a4 U: u5 A: a6 U: u7");
    pc.history_turns = 100;
    EXPECT_EQ(build_prompt(h, {}, g, pc), "<history> U: u1 A: a2 U: u3 A: a4 U: u5 A: a6 U: u7");
}

TEST(Prompt, RejectsBadInput) {
    const auto g = three_clip_graph();
    EXPECT_THROW(build_prompt({}, {}, g), ValidationError);
    const std::vector<Turn> h = {user_turn(1, "x", request(Activity::ShareStory))};
    PromptConfig pc;
    pc.history_turns = 0;
    EXPECT_THROW(build_prompt(h, {}, g, pc), ConfigError);
    pc = {};
    pc.mode = ContextMode::Embed;
    EXPECT_THROW(build_prompt(h, {}, g, pc), ConfigError);
    EXPECT_THROW(build_prompt(h, story_of({"c99"}), g), ConsistencyError);
}

TEST(Prompt, GoldenFixture) {
    const auto& c = small_corpus();
    const auto& d = c.dialogs[0];
    ASSERT_EQ(d.dialog_id, "d0001");
    ASSERT_GE(d.turns.size(), 5u);
    const std::vector<Turn> h(d.turns.begin(), d.turns.begin() + 5);
    std::ifstream in(CCC_FIXTURES "/prompt_d0001_t5.txt");
    ASSERT_TRUE(in) << "missing golden prompt";
    std::string want;
    std::getline(in, want);
    EXPECT_EQ(build_prompt(h, d.turns[4].story_snapshot, c.graphs[0]), want);
}

TEST(State, CarryoverExample) {
    std::vector<Turn> h = {
        user_turn(1, "", request(Activity::CreateStory, {{"activity", {"skiing"}}, {"time", {"2018"}}})),
        assistant_turn(2, ""),
        user_turn(3, "", request(Activity::RemoveClips, {}, {ref({"c1"})})),
        assistant_turn(4, ""),
        user_turn(5, "", request(Activity::RefineSearch, {{"time", {"2019"}}})),
    };
    const auto s3 = cumulative_state(h, 3);
    EXPECT_EQ(s3.intent.activity, Activity::RemoveClips);
    EXPECT_EQ(s3.slots, (SlotMap{{"activity", {"skiing"}}, {"time", {"2018"}}}));
    EXPECT_EQ(s3.clip_ids, std::set<std::string>{"c1"});
    const auto s5 = cumulative_state(h);
    EXPECT_EQ(s5.carried, (SlotMap{{"activity", {"skiing"}}, {"time", {"2019"}}}));
    EXPECT_TRUE(s5.clip_ids.empty());
    EXPECT_EQ(cumulative_state(h, 0), DialogState{});
}

TEST(State, PositionSlotsDoNotCarry) {
    std::vector<Turn> h = {
        user_turn(1, "", request(Activity::CreateStory, {{"activity", {"skiing"}}})),
        user_turn(3, "", request(Activity::AddClips, {{"activity", {"surfing"}}, {"position", {"first"}}})),
        user_turn(5, "", request(Activity::ShareStory, {{"share_to", {"family"}}})),
    };
    const auto s = cumulative_state(h);
    EXPECT_EQ(s.carried, (SlotMap{{"activity", {"surfing"}}}));
    EXPECT_EQ(s.slots, (SlotMap{{"activity", {"surfing"}}, {"share_to", {"family"}}}));
}

// Re-fold every corpus prefix with a direct per-key replay.
TEST(StateProperty, FoldMatchesPerKeyReplay) {
    const auto& c = small_corpus();
    for (const auto& d : c.dialogs) {
        for (std::size_t upto = 0; upto <= d.turns.size(); ++upto) {
            std::map<std::string, std::vector<std::string>> carried;
            std::map<std::string, std::vector<std::string>> last_slots;
            const Frame* last = nullptr;
            for (std::size_t i = 0; i < upto; ++i) {
                const auto& t = d.turns[i];
                if (t.speaker != Speaker::User) continue;
                last_slots = carried;
                for (const auto& [k, v] : t.frame->slots) last_slots[k] = v;
                const auto a = t.frame->intent.activity;
                if (a == Activity::CreateStory || a == Activity::AddClips || a == Activity::RefineSearch)
                    for (const auto& [k, v] : t.frame->slots)
                        if (k == "activity" || k == "time" || k == "location" || k == "object" || k == "participant" ||
                            k == "attribute")
                            carried[k] = v;
                last = &*t.frame;
            }
            const auto s = cumulative_state(d.turns, upto);
            ASSERT_EQ(s.carried, carried);
            ASSERT_EQ(s.slots, last_slots);
            if (last) {
                const auto ids = last->flat_ids();
                ASSERT_EQ(s.clip_ids, std::set<std::string>(ids.begin(), ids.end()));
                ASSERT_EQ(s.intent, last->intent);
            }
        }
    }
}

TEST(PredictionJson, RoundTrips) {
    const Prediction p{"d0003", 5, "REQUEST:SHARE_STORY [ share_to = family ] < >"};
    const auto back = json(p).get<Prediction>();
    EXPECT_EQ(back.dialog_id, p.dialog_id);
    EXPECT_EQ(back.turn_id, p.turn_id);
    EXPECT_EQ(back.linear_frame, p.linear_frame);
}

TEST(DialogJson, RoundTripsWithLinearFrame) {
    const auto& d = small_corpus().dialogs[1];
    const json j = d;
    EXPECT_EQ(j.get<Dialog>(), d);
    const auto& t0 = j["turns"][0];
    EXPECT_EQ(parse_frame(t0["linear_frame"].get<std::string>()),
              flatten_roles(*d.turns[0].frame, &d.turns[0].story_snapshot));
}
