#include <gtest/gtest.h>

#include <numeric>

#include "test_util.hpp"

using namespace ccc;
using namespace testutil;

namespace {

Turn user_turn(int id, Frame f, StoryState snap = {}, std::string text = "u") {
    Turn t;
    t.turn_id = id;
    t.speaker = Speaker::User;
    t.template_utterance = std::move(text);
    t.frame = f;
    t.api_call = f;
    t.story_snapshot = std::move(snap);
    return t;
}

Turn assistant_turn(int id, Activity a, std::vector<std::string> added, StoryState snap, std::string text = "a") {
    Turn t;
    t.turn_id = id;
    t.speaker = Speaker::Assistant;
    t.template_utterance = std::move(text);
    t.frame = Frame{{Act::Inform, a}, {{"status", {"ok"}}}, {}};
    t.execution_result = ExecutionResult{};
    t.execution_result->added = std::move(added);
    t.story_snapshot = std::move(snap);
    return t;
}

std::vector<Prediction> perfect(const std::vector<Dialog>& corpus) {
    std::vector<Prediction> out;
    for (const auto& d : corpus)
        for (const auto& t : d.turns)
            if (t.speaker == Speaker::User)
                out.push_back({d.dialog_id, t.turn_id, serialize_frame(*t.frame, &t.story_snapshot)});
    return out;
}

// Three user turns with hand-checked scores.
std::vector<Dialog> hand_gold() {
    Dialog d;
    d.dialog_id = "d1";
    d.graph_id = "g1";
    const auto s = story_of({"c1", "c2"});
    d.turns = {
        user_turn(1, request(Activity::CreateStory, {{"activity", {"skiing"}}, {"time", {"2018"}}})),
        assistant_turn(2, Activity::CreateStory, {"c1", "c2"}, s),
        user_turn(3, request(Activity::RemoveClips, {}, {ref({"c1"})}), s),
        assistant_turn(4, Activity::RemoveClips, {}, story_of({"c2"})),
        user_turn(5, request(Activity::RefineSearch, {{"time", {"2019"}}}), story_of({"c2"})),
        assistant_turn(6, Activity::RefineSearch, {}, story_of({"c2"})),
    };
    return {d};
}

}  // namespace

TEST(Prf, Arithmetic) {
    const auto a = PRF::from_counts(3, 1, 2);
    EXPECT_DOUBLE_EQ(a.precision, 0.75);
    EXPECT_DOUBLE_EQ(a.recall, 0.6);
    EXPECT_DOUBLE_EQ(a.f1, 2 * 0.75 * 0.6 / 1.35);
    const auto z = PRF::from_counts(0, 0, 0);
    EXPECT_EQ(z.f1, 0.0);
    EXPECT_EQ(PRF::from_counts(0, 4, 0).precision, 0.0);
}

TEST(Score, HandComputedFixture) {
    const auto gold = hand_gold();
    const std::vector<Prediction> preds = {
        {"d1", 1, "REQUEST:CREATE_STORY [ activity = skiing, time = 2017 ] < >"},
        {"d1", 3, "REQUEST:REMOVE_CLIPS [ ] < clip: c1, c2 >"},
    };
    const auto r = score(gold, preds);
    // slots: tp activity; fp time=2017; fn time=2018, time=2019
    EXPECT_EQ(r.slot.tp, 1u);
    EXPECT_EQ(r.slot.fp, 1u);
    EXPECT_EQ(r.slot.fn, 2u);
    EXPECT_DOUBLE_EQ(r.slot.f1, 0.4);
    EXPECT_EQ(r.coref.tp, 1u);
    EXPECT_EQ(r.coref.fp, 1u);
    EXPECT_EQ(r.coref.fn, 0u);
    EXPECT_DOUBLE_EQ(r.coref.f1, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(r.intent_accuracy, 2.0 / 3.0);
    EXPECT_EQ(r.joint_accuracy, 0.0);
    EXPECT_EQ(r.n_turns, 3u);
    EXPECT_EQ(r.per_activity.at("REMOVE_CLIPS").n, 1u);
}

TEST(Score, RestatingCarriedSlotsKeepsJoint) {
    // turn 5 repeats the carried activity: a slot false positive, same state
    const auto gold = hand_gold();
    auto preds = perfect(gold);
    preds[2].linear_frame = "REQUEST:REFINE_SEARCH [ activity = skiing, time = 2019 ] < >";
    const auto r = score(gold, preds);
    EXPECT_EQ(r.joint_accuracy, 1.0);
    EXPECT_LT(r.slot.precision, 1.0);
}

TEST(Score, PerfectPredictionsScoreOne) {
    const auto& c = small_corpus();
    const auto r = score(c.dialogs, perfect(c.dialogs));
    EXPECT_EQ(r.slot.f1, 1.0);
    EXPECT_EQ(r.coref.f1, 1.0);
    EXPECT_EQ(r.intent_accuracy, 1.0);
    EXPECT_EQ(r.joint_accuracy, 1.0);
}

TEST(ScoreProperty, PerturbingKTurnsGivesExactFraction) {
    const auto& c = small_corpus();
    const auto base = perfect(c.dialogs);
    const auto n = base.size();
    std::mt19937_64 rng(4);
    for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{17}, n / 2, n}) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        auto preds = base;
        for (std::size_t i = 0; i < k; ++i) {
            auto f = parse_frame(preds[idx[i]].linear_frame);
            f.intent.activity = f.intent.activity == Activity::ShareStory ? Activity::AddClips : Activity::ShareStory;
            preds[idx[i]].linear_frame = serialize_frame(f);
        }
        const auto r = score(c.dialogs, preds);
        const double want = static_cast<double>(n - k) / static_cast<double>(n);
        EXPECT_DOUBLE_EQ(r.intent_accuracy, want) << k;
        EXPECT_DOUBLE_EQ(r.joint_accuracy, want) << k;
    }
}

TEST(ScoreProperty, WrongClipsBreakJointOnly) {
    const auto& c = small_corpus();
    auto preds = perfect(c.dialogs);
    std::size_t with_refs = 0;
    for (auto& p : preds) {
        auto f = parse_frame(p.linear_frame);
        if (f.refs.empty()) continue;
        ++with_refs;
        f.refs = {ref({"c9999"})};
        p.linear_frame = serialize_frame(f);
    }
    ASSERT_GT(with_refs, 0u);
    const auto r = score(c.dialogs, preds);
    EXPECT_EQ(r.intent_accuracy, 1.0);
    EXPECT_DOUBLE_EQ(r.joint_accuracy, static_cast<double>(preds.size() - with_refs) / static_cast<double>(preds.size()));
    EXPECT_EQ(r.coref.tp, 0u);
    EXPECT_EQ(r.slot.f1, 1.0);
}

TEST(ScoreProperty, JointNeverExceedsIntentAndOrderIsIrrelevant) {
    const auto& c = small_corpus();
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        auto preds = perfect(c.dialogs);
        for (auto& p : preds) {
            const auto roll = rng() % 10;
            if (roll == 0) p.linear_frame = "garbage";
            else if (roll == 1) p.linear_frame = "REQUEST:SHARE_STORY [ share_to = family ] < >";
        }
        const auto r = score(c.dialogs, preds);
        EXPECT_LE(r.joint_accuracy, r.intent_accuracy);
        std::shuffle(preds.begin(), preds.end(), rng);
        const auto r2 = score(c.dialogs, preds);
        EXPECT_EQ(json(r), json(r2));
    }
}

TEST(Score, DuplicateKeysRejected) {
    const auto gold = hand_gold();
    std::vector<Prediction> preds = {{"d1", 1, "REQUEST:SHARE_STORY [ ] < >"}, {"d1", 1, "REQUEST:SHARE_STORY [ ] < >"}};
    EXPECT_THROW(score(gold, preds), ValidationError);
    auto twice = gold;
    twice.push_back(gold[0]);
    EXPECT_THROW(score(twice, {}), ValidationError);
}

TEST(Score, UnparseablePredictionCountsAsEmpty) {
    const auto gold = hand_gold();
    auto preds = perfect(gold);
    preds[0].linear_frame = "REQUEST:CREATE_STORY [ activity";
    const auto r = score(gold, preds);
    EXPECT_DOUBLE_EQ(r.intent_accuracy, 2.0 / 3.0);
    EXPECT_EQ(r.slot.fn, 2u);
}

TEST(Stats, TwoTurnDialog) {
    Dialog d;
    d.dialog_id = "d1";
    d.turns = {user_turn(1, request(Activity::CreateStory, {{"activity", {"skiing"}}}), {},
                         "Create a story of all skiing trips"),
               assistant_turn(2, Activity::CreateStory, {"c1", "c2"}, story_of({"c1", "c2"}),
                              "I created a new story with 2 clips")};
    const auto s = corpus_stats({d});
    EXPECT_EQ(s.n_dialogs, 1u);
    EXPECT_EQ(s.utterances_per_dialog.mean, 2.0);
    EXPECT_EQ(s.user_words.mean, 7.0);
    EXPECT_EQ(s.assistant_words.mean, 8.0);
    EXPECT_EQ(s.clips_per_story.mean, 2.0);
    EXPECT_EQ(s.clips_mentioned_per_dialog.mean, 0.0);
    EXPECT_EQ(s.candidates_per_mention.n, 0u);
}

TEST(Stats, CorefDistanceCountsUtterances) {
    Dialog d;
    d.dialog_id = "d1";
    const auto s = story_of({"c1", "c2"});
    const auto share = request(Activity::ShareStory, {{"share_to", {"family"}}});
    d.turns = {user_turn(1, request(Activity::CreateStory, {{"activity", {"skiing"}}})),
               assistant_turn(2, Activity::CreateStory, {"c1", "c2"}, s)};
    for (int i = 3; i <= 7; i += 2) {
        d.turns.push_back(user_turn(i, share, s));
        d.turns.push_back(assistant_turn(i + 1, Activity::ShareStory, {}, s));
    }
    d.turns.push_back(user_turn(9, request(Activity::RemoveClips, {}, {ref({"c1"}, Role::Target, MentionType::Ordinal)}), s));
    d.turns.push_back(assistant_turn(10, Activity::RemoveClips, {}, story_of({"c2"})));
    const auto st = corpus_stats({d});
    EXPECT_EQ(st.coref_distance.mean, 7.0);
    EXPECT_EQ(st.coref_distance.n, 1u);
    EXPECT_EQ(st.candidates_per_mention.mean, 2.0);
    EXPECT_EQ(st.clips_mentioned_per_dialog.mean, 1.0);
    EXPECT_EQ(st.coref_distance_hist.at(7), 1u);
}

TEST(Stats, MalformedRecordIsNamed) {
    Dialog d;
    d.dialog_id = "d9";
    d.turns = {assistant_turn(1, Activity::CreateStory, {}, {})};
    try {
        corpus_stats({hand_gold()[0], d});
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("record 1"), std::string::npos) << e.what();
    }
}

TEST(Stats, MeanStd) {
    const auto m = mean_std({2, 4, 4, 4, 5, 5, 7, 9});
    EXPECT_DOUBLE_EQ(m.mean, 5.0);
    EXPECT_DOUBLE_EQ(m.std, 2.0);
}

TEST(Flows, ConservationAndStartMass) {
    const auto& c = small_corpus();
    const std::size_t depth = 4;
    const auto g = transition_flows(c.dialogs, depth);
    std::map<std::string, std::size_t> in, out, node;
    for (const auto& n : g.nodes) node[n.label] = n.weight;
    for (const auto& l : g.links) {
        out[l.source] += l.weight;
        in[l.target] += l.weight;
    }
    EXPECT_EQ(node.at("CREATE_STORY:U1"), c.dialogs.size());
    std::size_t first_round = 0;
    for (const auto& [label, w] : node) {
        // every dialog has at least 2 * depth utterances
        if (label.size() < 3 || label.substr(label.size() - 3) != ":A4") EXPECT_EQ(out[label], w) << label;
        if (label.substr(label.size() - 3) != ":U1") EXPECT_EQ(in[label], w) << label;
        else first_round += w;
    }
    EXPECT_EQ(first_round, c.dialogs.size());
    EXPECT_THROW(transition_flows(c.dialogs, 0), ConfigError);
}

TEST(Flows, TurnTwoTvExamples) {
    std::vector<Dialog> corpus;
    const auto& acts = editing_activities();
    for (std::size_t i = 0; i < acts.size(); ++i) {
        Dialog d;
        d.dialog_id = "d" + std::to_string(i);
        const auto s = story_of({"c1", "c2"});
        d.turns = {user_turn(1, request(Activity::CreateStory, {{"activity", {"skiing"}}})),
                   assistant_turn(2, Activity::CreateStory, {"c1", "c2"}, s), user_turn(3, request(acts[i]), s)};
        corpus.push_back(d);
    }
    EXPECT_NEAR(turn2_branch_tv(corpus), 0.0, 1e-12);
    for (auto& d : corpus) d.turns[2].frame->intent.activity = Activity::ShareStory;
    EXPECT_NEAR(turn2_branch_tv(corpus), 6.0 / 7.0, 1e-12);
}
