// ccc: corpus generation, statistics, scoring and the demo session server.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "ccc/ccc.hpp"
#include "ccc/http_api.hpp"

namespace {

using namespace ccc;

void emit(const json& j, const std::string& out) {
    if (out.empty() || out == "-") std::cout << j.dump(2) << "\n";
    else write_text(out, j.dump(2) + "\n");
}

std::vector<double> parse_ratios(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("bad ratio '" + item + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

Vocabulary load_vocabulary(const std::string& vocab_path, const std::string& annotations_path) {
    if (!vocab_path.empty() && !annotations_path.empty())
        throw ConfigError("--vocab and --annotations are mutually exclusive");
    if (!annotations_path.empty()) return ingest_annotation_vocab(read_text(annotations_path));
    if (!vocab_path.empty()) {
        auto v = read_json(vocab_path).get<Vocabulary>();
        validate(v);
        return v;
    }
    return default_vocabulary();
}

// Simulation config file: {"n_clips": 120, "vocabulary": {...}, "sim": {...}}
void apply_config_file(CorpusConfig& cfg, const std::string& path) {
    const json j = read_json(path);
    if (j.contains("n_clips")) cfg.graph.n_clips = j.at("n_clips").get<std::size_t>();
    if (j.contains("vocabulary")) cfg.graph.vocabulary = j.at("vocabulary").get<Vocabulary>();
    if (j.contains("sim")) cfg.sim = j.at("sim").get<SimConfig>();
}

httplib::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compositional video story editing: corpus simulation, evaluation and demo server"};
    app.require_subcommand(1);

    // gen-graph
    auto* gen = app.add_subcommand("gen-graph", "generate a synthetic memory graph");
    std::size_t gen_n = GenConfig{}.n_clips;
    std::uint64_t gen_seed = 0;
    std::string gen_id = "g0", gen_vocab, gen_ann, gen_out;
    gen->add_option("--n-clips", gen_n, "number of clips")->capture_default_str();
    gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
    gen->add_option("--graph-id", gen_id, "graph id")->capture_default_str();
    gen->add_option("--vocab", gen_vocab, "vocabulary JSON (default: built-in)");
    gen->add_option("--annotations", gen_ann, "COCO-style annotation file to take labels from");
    gen->add_option("--out", gen_out, "output file (default: stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a dialog corpus");
    std::size_t sim_n = 1000;
    std::uint64_t sim_seed = 42;
    unsigned sim_threads = 1;
    std::string sim_config, sim_out = "corpus", sim_vocab, sim_ann;
    sim->add_option("--n", sim_n, "number of dialogs")->capture_default_str();
    sim->add_option("--seed", sim_seed, "corpus seed")->capture_default_str();
    sim->add_option("--config", sim_config, "JSON config with n_clips / vocabulary / sim");
    sim->add_option("--vocab", sim_vocab, "vocabulary JSON");
    sim->add_option("--annotations", sim_ann, "COCO-style annotation file to take labels from");
    sim->add_option("--threads", sim_threads, "worker threads")->capture_default_str();
    sim->add_option("--out", sim_out, "output directory")->capture_default_str();

    // stats
    auto* stats = app.add_subcommand("stats", "corpus statistics");
    std::string stats_corpus, stats_out, stats_csv;
    stats->add_option("--corpus", stats_corpus, "corpus directory or dialogs.jsonl")->required();
    stats->add_option("--out", stats_out, "report file (default: stdout)");
    stats->add_option("--csv", stats_csv, "also write histograms as CSV");

    // flows
    auto* flows = app.add_subcommand("flows", "dialog act transition flows");
    std::string flows_corpus, flows_out;
    std::size_t flows_depth = 4;
    flows->add_option("--corpus", flows_corpus, "corpus directory or dialogs.jsonl")->required();
    flows->add_option("--depth", flows_depth, "number of user/assistant rounds")->capture_default_str();
    flows->add_option("--out", flows_out, "flow document (default: stdout)");

    // predict
    auto* predict = app.add_subcommand("predict", "run the rule-based baseline over a corpus");
    std::string pred_corpus, pred_out;
    bool pred_trivial = false;
    predict->add_option("--corpus", pred_corpus, "corpus directory or dialogs.jsonl")->required();
    predict->add_option("--out", pred_out, "predictions JSONL")->required();
    predict->add_flag("--previous-turn", pred_trivial, "use the previous-turn resolver instead");

    // score
    auto* score_cmd = app.add_subcommand("score", "score predictions against a gold corpus");
    std::string score_gold, score_pred, score_out;
    score_cmd->add_option("--gold", score_gold, "gold corpus directory or dialogs.jsonl")->required();
    score_cmd->add_option("--pred", score_pred, "predictions JSONL")->required();
    score_cmd->add_option("--out", score_out, "report file (default: stdout)");

    // prompts
    auto* prompts = app.add_subcommand("prompts", "export model prompts and linear-frame targets");
    std::string prompts_corpus, prompts_out;
    std::size_t prompts_history = PromptConfig{}.history_turns;
    bool prompts_no_context = false;
    prompts->add_option("--corpus", prompts_corpus, "corpus directory or dialogs.jsonl")->required();
    prompts->add_option("--out", prompts_out, "output JSONL")->required();
    prompts->add_option("--history-turns", prompts_history, "utterances of history")->capture_default_str();
    prompts->add_flag("--no-context", prompts_no_context, "leave out the story context block");

    // split
    auto* split = app.add_subcommand("split", "dialog-level train/val/test split");
    std::string split_corpus, split_ratios = "0.6,0.2,0.2", split_out = "splits";
    std::uint64_t split_seed = 0;
    split->add_option("--corpus", split_corpus, "corpus directory or dialogs.jsonl")->required();
    split->add_option("--ratios", split_ratios, "train,val,test")->capture_default_str();
    split->add_option("--seed", split_seed, "shuffle seed")->capture_default_str();
    split->add_option("--out", split_out, "output directory")->capture_default_str();

    // serve
    auto* serve = app.add_subcommand("serve", "HTTP session service");
    int serve_port = 8080;
    std::string serve_host = "127.0.0.1", serve_graph, serve_persist;
    serve->add_option("--port", serve_port, "port")->capture_default_str();
    serve->add_option("--host", serve_host, "bind address")->capture_default_str();
    serve->add_option("--graph", serve_graph, "graph JSON / graphs JSONL (default: generated g0)");
    serve->add_option("--persist", serve_persist, "directory for session logs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) {
            GenConfig g;
            g.n_clips = gen_n;
            g.seed = gen_seed;
            g.graph_id = gen_id;
            g.vocabulary = load_vocabulary(gen_vocab, gen_ann);
            emit(json(generate_collection(g)), gen_out);
        } else if (*sim) {
            CorpusConfig cfg;
            cfg.n = sim_n;
            cfg.seed = sim_seed;
            cfg.threads = sim_threads;
            if (!sim_config.empty()) apply_config_file(cfg, sim_config);
            if (!sim_vocab.empty() || !sim_ann.empty()) cfg.graph.vocabulary = load_vocabulary(sim_vocab, sim_ann);
            const Lexicon lex = attach(default_lexicon(), cfg.graph.vocabulary);
            const auto corpus = simulate_corpus(cfg, lex);
            write_corpus(sim_out, cfg, corpus);
            std::cerr << "wrote " << corpus.dialogs.size() << " dialogs to " << sim_out << "\n";
        } else if (*stats) {
            const auto report = corpus_stats(load_corpus(stats_corpus).dialogs);
            emit(json(report), stats_out);
            if (!stats_csv.empty()) write_text(stats_csv, stats_histograms_csv(report));
        } else if (*flows) {
            const auto corpus = load_corpus(flows_corpus);
            json j = transition_flows(corpus.dialogs, flows_depth);
            j["turn2_tv_from_uniform"] = turn2_branch_tv(corpus.dialogs);
            emit(j, flows_out);
        } else if (*predict) {
            const auto corpus = load_corpus(pred_corpus);
            if (!pred_trivial && corpus.graphs.size() != corpus.dialogs.size())
                throw IoError("graphs.jsonl is needed next to the dialogs to resolve mentions");
            std::vector<Prediction> preds;
            for (std::size_t i = 0; i < corpus.dialogs.size(); ++i) {
                const auto& d = corpus.dialogs[i];
                auto p = pred_trivial ? predict_dialog_previous_turn(d, default_lexicon())
                                      : predict_dialog(d, corpus.graphs[i], attach(default_lexicon(), corpus.graphs[i].vocabulary()));
                preds.insert(preds.end(), p.begin(), p.end());
            }
            write_jsonl(pred_out, preds);
        } else if (*score_cmd) {
            const auto gold = load_corpus(score_gold);
            const auto preds = read_jsonl<Prediction>(score_pred);
            emit(json(score(gold.dialogs, preds)), score_out);
        } else if (*prompts) {
            const auto corpus = load_corpus(prompts_corpus);
            if (corpus.graphs.size() != corpus.dialogs.size())
                throw IoError("graphs.jsonl is needed next to the dialogs to render story context");
            PromptConfig pc;
            pc.history_turns = prompts_history;
            pc.include_context = !prompts_no_context;
            std::string out;
            for (std::size_t i = 0; i < corpus.dialogs.size(); ++i) {
                const auto& d = corpus.dialogs[i];
                for (std::size_t t = 0; t < d.turns.size(); ++t) {
                    if (d.turns[t].speaker != Speaker::User || !d.turns[t].frame) continue;
                    const std::vector<Turn> history(d.turns.begin(), d.turns.begin() + static_cast<std::ptrdiff_t>(t + 1));
                    const auto& snap = d.turns[t].story_snapshot;
                    out += json{{"dialog_id", d.dialog_id},
                                {"turn_id", d.turns[t].turn_id},
                                {"prompt", build_prompt(history, snap, corpus.graphs[i], pc)},
                                {"target", serialize_frame(*d.turns[t].frame, &snap)}}
                               .dump() +
                           "\n";
                }
            }
            write_text(prompts_out, out);
        } else if (*split) {
            const auto corpus = load_corpus(split_corpus);
            emit(export_splits(corpus.dialogs, split_out, parse_ratios(split_ratios), split_seed)["counts"], "");
        } else if (*serve) {
            std::vector<MemoryGraph> graphs;
            if (serve_graph.empty()) graphs.push_back(generate_collection(GenConfig{}));
            else graphs = read_graphs(serve_graph);
            if (graphs.empty()) throw ValidationError("no graphs in " + serve_graph);
            const Lexicon lex = attach(default_lexicon(), graphs.front().vocabulary());
            std::optional<fs::path> persist;
            if (!serve_persist.empty()) persist = serve_persist;
            SessionStore store(std::move(graphs), lex, persist);
            httplib::Server server;
            register_routes(server, store);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on " << serve_host << ":" << serve_port << "\n";
            if (!server.listen(serve_host, serve_port)) throw IoError("cannot listen on " + serve_host + ":" + std::to_string(serve_port));
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
