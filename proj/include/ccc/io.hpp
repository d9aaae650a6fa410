#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "ccc/dialog.hpp"
#include "ccc/errors.hpp"
#include "ccc/memory_graph.hpp"
#include "ccc/rng.hpp"
#include "ccc/simulator.hpp"

namespace ccc {

namespace fs = std::filesystem;

inline std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

inline void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

inline json read_json(const fs::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

// One record per non-blank line. Bad records raise ValidationError naming the record index.
template <class T>
std::vector<T> read_jsonl(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<T> out;
    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(json::parse(line).get<T>());
        } catch (const json::exception& e) {
            throw ValidationError(path.string() + ": record " + std::to_string(record) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + ": record " + std::to_string(record) + ": " + e.what());
        }
        ++record;
    }
    return out;
}

template <class T>
std::string to_jsonl(const std::vector<T>& records) {
    std::string s;
    for (const auto& r : records) s += json(r).dump() + "\n";
    return s;
}

template <class T>
void write_jsonl(const fs::path& path, const std::vector<T>& records) {
    write_text(path, to_jsonl(records));
}

// A graph file holds either one graph object or JSONL with one graph per line.
inline std::vector<MemoryGraph> read_graphs(const fs::path& path) {
    const auto text = read_text(path);
    try {
        auto j = json::parse(text);
        if (j.is_array()) return j.get<std::vector<MemoryGraph>>();
        return {j.get<MemoryGraph>()};
    } catch (const json::parse_error&) {
        return read_jsonl<MemoryGraph>(path);
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

inline json corpus_manifest(const CorpusConfig& cfg, const Corpus& corpus) {
    std::size_t utterances = 0;
    for (const auto& d : corpus.dialogs) utterances += d.turns.size();
    return json{{"n_dialogs", corpus.dialogs.size()},
                {"n_utterances", utterances},
                {"seed", cfg.seed},
                {"config_digest", config_digest(cfg)},
                {"graph_config", {{"n_clips", cfg.graph.n_clips}}},
                {"sim_config", cfg.sim},
                {"files", {{"dialogs", "dialogs.jsonl"}, {"graphs", "graphs.jsonl"}}}};
}

inline void write_corpus(const fs::path& dir, const CorpusConfig& cfg, const Corpus& corpus) {
    write_jsonl(dir / "dialogs.jsonl", corpus.dialogs);
    write_jsonl(dir / "graphs.jsonl", corpus.graphs);
    write_text(dir / "manifest.json", corpus_manifest(cfg, corpus).dump(2) + "\n");
}

// Accepts a corpus directory or a dialogs JSONL file; graphs come from the
// sibling graphs.jsonl when present.
inline Corpus load_corpus(const fs::path& path) {
    Corpus c;
    const fs::path dialogs = fs::is_directory(path) ? path / "dialogs.jsonl" : path;
    c.dialogs = read_jsonl<Dialog>(dialogs);
    const fs::path graphs = dialogs.parent_path() / "graphs.jsonl";
    if (fs::exists(graphs)) {
        auto all = read_graphs(graphs);
        std::map<std::string, std::size_t> by_id;
        for (std::size_t i = 0; i < all.size(); ++i) by_id[all[i].graph_id()] = i;
        for (const auto& d : c.dialogs) {
            auto it = by_id.find(d.graph_id);
            if (it == by_id.end()) throw ConsistencyError("dialog " + d.dialog_id + " names unknown graph " + d.graph_id);
            c.graphs.push_back(all[it->second]);
        }
    }
    return c;
}

// ---- splits ---------------------------------------------------------------

// Largest-remainder sizes; ties go to the earlier split.
inline std::vector<std::size_t> split_sizes(std::size_t n, const std::vector<double>& ratios) {
    if (ratios.empty()) throw ValidationError("split ratios are empty");
    double sum = 0.0;
    for (double r : ratios) {
        if (!(r >= 0.0)) throw ValidationError("split ratios must be non-negative");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("split ratios sum to " + std::to_string(sum) + ", not 1");
    std::vector<std::size_t> sizes;
    std::vector<std::pair<double, std::size_t>> rema;
    std::size_t total = 0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double exact = ratios[i] * static_cast<double>(n);
        const auto fl = static_cast<std::size_t>(std::floor(exact + 1e-9));
        sizes.push_back(fl);
        total += fl;
        rema.emplace_back(exact - static_cast<double>(fl), i);
    }
    std::stable_sort(rema.begin(), rema.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; total < n; ++k, ++total) ++sizes[rema[k % rema.size()].second];
    return sizes;
}

// Dialog indices per split.
inline std::vector<std::vector<std::size_t>> split_indices(std::size_t n, const std::vector<double>& ratios,
                                                           std::uint64_t seed) {
    const auto sizes = split_sizes(n, ratios);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(derive_seed(seed, 0, 3));
    rng.shuffle(order.begin(), order.end());
    std::vector<std::vector<std::size_t>> out;
    std::size_t at = 0;
    for (auto s : sizes) {
        std::vector<std::size_t> part(order.begin() + static_cast<std::ptrdiff_t>(at),
                                      order.begin() + static_cast<std::ptrdiff_t>(at + s));
        std::sort(part.begin(), part.end());
        out.push_back(std::move(part));
        at += s;
    }
    return out;
}

inline const std::vector<std::string>& split_names() {
    static const std::vector<std::string> names = {"train", "val", "test"};
    return names;
}

// Writes train/val/test JSONL plus split_manifest.json into dir.
inline json export_splits(const std::vector<Dialog>& corpus, const fs::path& dir,
                          const std::vector<double>& ratios = {0.6, 0.2, 0.2}, std::uint64_t seed = 0) {
    if (ratios.size() != 3) throw ValidationError("expected three split ratios (train, val, test)");
    const auto parts = split_indices(corpus.size(), ratios, seed);
    json manifest = {{"seed", seed}, {"ratios", ratios}, {"counts", json::object()}, {"dialog_ids", json::object()}};
    for (std::size_t s = 0; s < parts.size(); ++s) {
        std::vector<Dialog> chunk;
        std::vector<std::string> ids;
        for (auto i : parts[s]) {
            chunk.push_back(corpus[i]);
            ids.push_back(corpus[i].dialog_id);
        }
        write_jsonl(dir / (split_names()[s] + ".jsonl"), chunk);
        manifest["counts"][split_names()[s]] = chunk.size();
        manifest["dialog_ids"][split_names()[s]] = ids;
    }
    write_text(dir / "split_manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

}  // namespace ccc
