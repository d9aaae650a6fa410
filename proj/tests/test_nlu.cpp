#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace ccc;
using namespace testutil;

namespace {

const Lexicon& lex() { return default_lexicon(); }

}  // namespace

TEST(Parse, CreateWithFilters) {
    const auto pf = parse_utterance("Create a story of all skiing trips in 2018", lex());
    ASSERT_FALSE(pf.unparseable);
    EXPECT_EQ(pf.intent, (Intent{Act::Request, Activity::CreateStory}));
    EXPECT_EQ(pf.slots, (SlotMap{{"activity", {"skiing"}}, {"time", {"2018"}}}));
    EXPECT_TRUE(pf.spans.empty());
}

TEST(Parse, ReplaceWithSimilarReference) {
    const auto pf =
        parse_utterance("Remove the sunset clip and replace it with something similar to the second one.", lex());
    ASSERT_FALSE(pf.unparseable);
    EXPECT_EQ(pf.intent.activity, Activity::ReplaceClips);
    ASSERT_EQ(pf.spans.size(), 2u);
    EXPECT_EQ(pf.spans[0].type, MentionType::Adjectival);
    EXPECT_EQ(pf.spans[0].descriptor, "sunset");
    EXPECT_EQ(pf.spans[0].role, Role::Target);
    EXPECT_EQ(pf.spans[1].type, MentionType::Ordinal);
    EXPECT_EQ(pf.spans[1].ordinal, 2);
    EXPECT_EQ(pf.spans[1].role, Role::Reference);
    // the descriptor inside the mention never becomes a slot
    EXPECT_TRUE(pf.slots.empty());
}

TEST(Parse, MoveLastToFront) {
    const auto pf = parse_utterance("Move the last clip to the front", lex());
    EXPECT_EQ(pf.intent.activity, Activity::ReorderClips);
    EXPECT_EQ(pf.slots, (SlotMap{{"position", {"first"}}}));
    ASSERT_EQ(pf.spans.size(), 1u);
    EXPECT_EQ(pf.spans[0].ordinal, -1);

    const auto story = story_of({"c1", "c2", "c3"});
    const auto g = three_clip_graph();
    const auto call = to_api_call(pf, resolve_mentions(pf.spans, {}, story, g));
    auto [next, r] = execute(story, call, g);
    EXPECT_EQ(next.clip_ids(), (std::vector<std::string>{"c3", "c1", "c2"}));
}

TEST(Parse, AnchorAfterRelativePosition) {
    const auto pf = parse_utterance("Move the first clip right after the third one", lex());
    ASSERT_EQ(pf.spans.size(), 2u);
    EXPECT_EQ(pf.slots.at("position"), std::vector<std::string>{"after"});
    EXPECT_EQ(pf.spans[0].role, Role::Target);
    EXPECT_EQ(pf.spans[1].role, Role::Anchor);
}

TEST(Parse, DurationForms) {
    auto pf = parse_utterance("Make the current clip 12 seconds long", lex());
    EXPECT_EQ(pf.intent.activity, Activity::ModifyDuration);
    EXPECT_EQ(pf.slots, (SlotMap{{"duration_s", {"12"}}}));
    EXPECT_EQ(pf.spans.at(0).type, MentionType::DeviceContext);
    pf = parse_utterance("Make the second to the last one a little shorter please", lex());
    EXPECT_EQ(pf.slots, (SlotMap{{"duration_change", {"shorter"}}}));
    EXPECT_EQ(pf.spans.at(0).ordinal, -2);
}

TEST(Parse, GibberishIsUnparseable) {
    EXPECT_TRUE(parse_utterance("blorp the wug", lex()).unparseable);
    EXPECT_TRUE(parse_utterance("", lex()).unparseable);
}

TEST(Resolve, OrdinalFromTheEnd) {
    MentionSpan s;
    s.type = MentionType::Ordinal;
    s.ordinal = -2;
    const auto g = graph_of({clip("c1", "skiing", "2018"), clip("c2", "skiing", "2018"), clip("c3", "surfing", "2018"),
                             clip("c5", "hiking", "2018")});
    const auto r = resolve_mentions({s}, {}, story_of({"c3", "c1", "c5", "c2"}), g);
    EXPECT_EQ(r, std::vector<std::vector<std::string>>{{"c5"}});
    s.ordinal = 9;
    EXPECT_EQ(resolve_mentions({s}, {}, story_of({"c3", "c1"}), g)[0], std::vector<std::string>{});
}

TEST(Resolve, DeviceContextIsTheViewer) {
    MentionSpan s;
    s.type = MentionType::DeviceContext;
    const auto g = graph_of({clip("c4", "skiing", "2018"), clip("c7", "surfing", "2018")});
    EXPECT_EQ(resolve_mentions({s}, {}, story_of({"c7", "c4"}, 0), g)[0], std::vector<std::string>{"c7"});
    EXPECT_TRUE(resolve_mentions({s}, {}, story_of({"c7", "c4"}), g)[0].empty());
}

TEST(Resolve, AdjectivalMatchesAttributeScan) {
    GenConfig cfg;
    cfg.seed = 8;
    const auto g = generate_collection(cfg);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < 30; ++i) ids.push_back(g.clips()[i].id);
    const auto story = story_of(ids);
    for (const auto& label : g.vocabulary().attributes) {
        MentionSpan s;
        s.type = MentionType::Adjectival;
        s.descriptor = label;
        std::vector<std::string> want;
        for (const auto& id : ids) {
            const auto& a = g.find(id)->attributes;
            if (std::find(a.begin(), a.end(), label) != a.end()) want.push_back(id);
        }
        EXPECT_EQ(resolve_mentions({s}, {}, story, g)[0], want) << label;
    }
}

TEST(Resolve, CarryoverSkipsFreshAdditions) {
    Turn u1;
    u1.speaker = Speaker::User;
    u1.frame = request(Activity::RemoveClips, {}, {ref({"c2"})});
    Turn u2 = u1;
    u2.frame = request(Activity::ModifyDuration, {{"duration_s", {"5"}}}, {ref({"c1"})});
    Turn a;
    a.speaker = Speaker::Assistant;
    a.execution_result = ExecutionResult{};
    a.execution_result->added = {"c1"};
    MentionSpan s;
    s.type = MentionType::Carryover;
    const auto g = three_clip_graph();
    // c1 was just added by the assistant, so the earlier mention c2 wins
    EXPECT_EQ(resolve_mentions({s}, {u1, u2, a}, story_of({"c1", "c2"}), g)[0], std::vector<std::string>{"c2"});
}

// Every simulator template inverts exactly: intent, slots and clip sets.
TEST(NluProperty, TemplateInversionOnCorpus) {
    const auto& c = small_corpus();
    std::size_t turns = 0;
    for (std::size_t di = 0; di < c.dialogs.size(); ++di) {
        const auto& d = c.dialogs[di];
        for (std::size_t ti = 0; ti < d.turns.size(); ++ti) {
            const auto& t = d.turns[ti];
            if (t.speaker != Speaker::User) continue;
            ++turns;
            const auto pf = parse_utterance(t.template_utterance, lex());
            ASSERT_FALSE(pf.unparseable) << t.template_utterance;
            EXPECT_EQ(pf.intent, t.frame->intent) << t.template_utterance;
            EXPECT_EQ(pf.slots, t.frame->slots) << t.template_utterance;
            ASSERT_EQ(pf.spans.size(), t.frame->refs.size()) << t.template_utterance;
            for (std::size_t k = 0; k < pf.spans.size(); ++k) {
                EXPECT_EQ(pf.spans[k].type, t.frame->refs[k].mention_type) << t.template_utterance;
                EXPECT_EQ(pf.spans[k].role, t.frame->refs[k].role) << t.template_utterance;
            }
        }
    }
    EXPECT_GT(turns, 300u);
}

TEST(Predict, BaselineBeatsPreviousTurnOnCoref) {
    const auto& c = small_corpus();
    std::vector<Prediction> nlu, prev;
    for (std::size_t i = 0; i < c.dialogs.size(); ++i) {
        for (auto& p : predict_dialog(c.dialogs[i], c.graphs[i], lex())) nlu.push_back(p);
        for (auto& p : predict_dialog_previous_turn(c.dialogs[i], lex())) prev.push_back(p);
    }
    const auto a = score(c.dialogs, nlu);
    const auto b = score(c.dialogs, prev);
    EXPECT_EQ(a.intent_accuracy, 1.0);
    EXPECT_EQ(a.slot.f1, 1.0);
    EXPECT_GT(a.coref.f1, 0.9);
    EXPECT_GT(a.coref.f1, b.coref.f1);
}

TEST(Predict, UnparseableTurnGivesEmptyFrame) {
    Dialog d;
    d.dialog_id = "d1";
    Turn t;
    t.template_utterance = "blorp the wug";
    d.turns.push_back(t);
    EXPECT_EQ(predict_turn(d, 0, three_clip_graph(), lex()), "");
}
