// Acceptance suite: one PASS/FAIL line per criterion on the default
// 1000-dialog corpus (seed 42). Exits non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

#include "test_util.hpp"

using namespace ccc;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

void within(const std::string& name, double value, double target, double tol) {
    report(std::abs(value - target) <= tol, name, fmt(value) + " (target " + fmt(target) + " +/- " + fmt(tol) + ")");
}

std::vector<Prediction> gold_predictions(const std::vector<Dialog>& corpus) {
    std::vector<Prediction> out;
    for (const auto& d : corpus)
        for (const auto& t : d.turns)
            if (t.speaker == Speaker::User)
                out.push_back({d.dialog_id, t.turn_id, serialize_frame(*t.frame, &t.story_snapshot)});
    return out;
}

// Same frame written without the optional spaces around delimiters.
std::string squeeze(std::string s) {
    for (const auto& [from, to] : std::vector<std::pair<std::string, std::string>>{
             {" [ ", "["}, {" = ", "="}, {", ", ","}, {" ] ", "]"}, {"< ", "<"}, {" >", ">"}}) {
        for (auto p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
    }
    return s;
}

}  // namespace

int main() {
    CorpusConfig cfg;
    cfg.n = 1000;
    cfg.seed = 42;

    const auto t0 = std::chrono::steady_clock::now();
    const auto corpus = simulate_corpus(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& dialogs = corpus.dialogs;

    const auto st = corpus_stats(dialogs);
    within("utterances_per_dialog", st.utterances_per_dialog.mean, 13.5, 1.5);
    within("clips_per_story", st.clips_per_story.mean, 4.3, 0.6);
    within("clips_mentioned_per_dialog", st.clips_mentioned_per_dialog.mean, 3.6, 0.6);
    within("candidates_per_mention", st.candidates_per_mention.mean, 2.9, 0.6);
    within("coref_distance", st.coref_distance.mean, 3.7, 0.8);
    report(secs < 60.0, "simulation_runtime", fmt(secs) + " s for 1000 dialogs (limit 60 s)");
    within("user_words", st.user_words.mean, 11.8, 2.0);
    within("assistant_words", st.assistant_words.mean, 10.3, 2.0);

    const double tv = turn2_branch_tv(dialogs);
    report(tv <= 0.15, "turn2_activity_tv", fmt(tv) + " (limit 0.15)");

    std::size_t replay_ok = 0;
    for (std::size_t i = 0; i < dialogs.size(); ++i) replay_ok += first_replay_mismatch(dialogs[i], corpus.graphs[i]) < 0;
    report(replay_ok == dialogs.size(), "replay_oracle",
           std::to_string(replay_ok) + "/" + std::to_string(dialogs.size()) + " dialogs replay exactly");

    // codec
    {
        std::mt19937_64 g(42);
        std::size_t bad = 0, not_idempotent = 0;
        for (int i = 0; i < 10000; ++i) {
            const Frame f = testutil::random_frame(g);
            const auto text = serialize_frame(f);
            try {
                const Frame back = parse_frame(text);
                if (!(back == flatten_roles(f))) ++bad;
                if (serialize_frame(back) != text || serialize_frame(parse_frame(squeeze(text))) != text) ++not_idempotent;
            } catch (const Error&) {
                ++bad;
            }
        }
        report(bad == 0, "codec_round_trip", std::to_string(bad) + " failures over 10000 random frames");
        report(not_idempotent == 0, "codec_canonical_idempotence", std::to_string(not_idempotent) + " non-canonical outputs");
    }

    // template inversion
    {
        std::size_t n = 0, intent_ok = 0, slots_ok = 0;
        for (const auto& d : dialogs)
            for (const auto& t : d.turns) {
                if (t.speaker != Speaker::User) continue;
                ++n;
                const auto pf = parse_utterance(t.template_utterance, default_lexicon());
                intent_ok += !pf.unparseable && pf.intent == t.frame->intent;
                slots_ok += !pf.unparseable && pf.slots == t.frame->slots;
            }
        report(intent_ok == n && slots_ok == n, "template_inversion",
               "intent " + std::to_string(intent_ok) + "/" + std::to_string(n) + ", slots " + std::to_string(slots_ok) +
                   "/" + std::to_string(n));
    }

    // end-to-end coref against the previous-turn resolver
    {
        std::vector<Prediction> nlu, prev;
        for (std::size_t i = 0; i < dialogs.size(); ++i) {
            for (auto& p : predict_dialog(dialogs[i], corpus.graphs[i], default_lexicon())) nlu.push_back(p);
            for (auto& p : predict_dialog_previous_turn(dialogs[i], default_lexicon())) prev.push_back(p);
        }
        const auto a = score(dialogs, nlu);
        const auto b = score(dialogs, prev);
        report(a.coref.f1 >= 0.80 && a.coref.f1 > b.coref.f1, "coref_f1",
               fmt(a.coref.f1) + " (limit 0.80; previous-turn baseline " + fmt(b.coref.f1) + ")");
    }

    // scoring sanity
    {
        const auto perfect = gold_predictions(dialogs);
        const auto r = score(dialogs, perfect);
        report(r.slot.f1 == 1.0 && r.coref.f1 == 1.0 && r.intent_accuracy == 1.0 && r.joint_accuracy == 1.0,
               "score_perfect", "slot " + fmt(r.slot.f1) + ", coref " + fmt(r.coref.f1) + ", intent " +
                                    fmt(r.intent_accuracy) + ", joint " + fmt(r.joint_accuracy));

        const std::size_t n = perfect.size();
        std::mt19937_64 g(7);
        bool exact = true, ordered = true;
        std::string detail;
        for (std::size_t k : {std::size_t{1}, std::size_t{10}, n / 3, n}) {
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), g);
            auto preds = perfect;
            for (std::size_t i = 0; i < k; ++i) {
                auto f = parse_frame(preds[idx[i]].linear_frame);
                f.intent.activity = f.intent.activity == Activity::ShareStory ? Activity::AddClips : Activity::ShareStory;
                preds[idx[i]].linear_frame = serialize_frame(f);
            }
            const auto s = score(dialogs, preds);
            const double want = static_cast<double>(n - k) / static_cast<double>(n);
            exact = exact && std::abs(s.intent_accuracy - want) < 1e-12 && std::abs(s.joint_accuracy - want) < 1e-12;
            detail += "k=" + std::to_string(k) + ":" + fmt(s.joint_accuracy) + "/" + fmt(want) + " ";
        }
        report(exact, "score_perturbation", detail + "(N=" + std::to_string(n) + ")");

        for (int trial = 0; trial < 10; ++trial) {
            auto preds = perfect;
            for (auto& p : preds) {
                const auto roll = g() % 8;
                if (roll == 0) p.linear_frame = "garbage";
                else if (roll == 1) p.linear_frame = "REQUEST:REMOVE_CLIPS [ ] < clip: c1 >";
                else if (roll == 2) p.linear_frame = squeeze(p.linear_frame) + " ";
            }
            const auto s = score(dialogs, preds);
            ordered = ordered && s.joint_accuracy <= s.intent_accuracy;
        }
        report(ordered, "score_joint_le_intent", "10 noisy prediction sets");
    }

    // splits
    {
        bool ok = split_sizes(10, {0.6, 0.2, 0.2}) == std::vector<std::size_t>{6, 2, 2};
        for (std::size_t n : {std::size_t{10}, dialogs.size()}) {
            const auto a = split_indices(n, {0.6, 0.2, 0.2}, 42);
            ok = ok && a == split_indices(n, {0.6, 0.2, 0.2}, 42);
            std::vector<std::size_t> all;
            for (const auto& p : a) all.insert(all.end(), p.begin(), p.end());
            std::sort(all.begin(), all.end());
            std::vector<std::size_t> want(n);
            std::iota(want.begin(), want.end(), 0);
            ok = ok && all == want;
        }
        const auto big = split_sizes(dialogs.size(), {0.6, 0.2, 0.2});
        report(ok && big == std::vector<std::size_t>{600, 200, 200}, "splits",
               "10 -> 6/2/2, 1000 -> " + std::to_string(big[0]) + "/" + std::to_string(big[1]) + "/" +
                   std::to_string(big[2]) + ", deterministic, disjoint, exhaustive");
    }

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
