#include "maca/retrieve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "maca/error.hpp"
#include "maca/text.hpp"

using nlohmann::json;

namespace maca {

std::string view_name(View v) {
    switch (v) {
        case View::bm25: return "bm25";
        case View::dense_qq: return "dense_qq";
        case View::dense_qa: return "dense_qa";
        case View::fused: return "fused";
        case View::teacher: return "teacher";
        case View::student: return "student";
    }
    throw ConfigError("bad view enum");
}

View view_from_name(const std::string& name) {
    for (View v : {View::bm25, View::dense_qq, View::dense_qa, View::fused, View::teacher,
                   View::student}) {
        if (view_name(v) == name) return v;
    }
    throw ConfigError("unknown view: " + name);
}

void RankedList::validate() const {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!seen.insert(entries[i].doc_id).second) {
            throw DataError("ranked list for '" + query_id + "' repeats doc '" +
                            entries[i].doc_id + "'");
        }
        // The teacher view may invert raw scores inside its ambiguity band.
        if (view != View::teacher && i > 0 && entries[i].score > entries[i - 1].score) {
            throw DataError("ranked list for '" + query_id + "' has increasing scores at rank " +
                            std::to_string(i + 1));
        }
    }
}

namespace {

void sort_and_truncate(std::vector<RankedEntry>& entries, std::size_t top_k) {
    std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (entries.size() > top_k) entries.resize(top_k);
}

} // namespace

// ---------------------------------------------------------------------------
// BM25

Bm25Index Bm25Index::build(const std::vector<std::pair<std::string, std::string>>& docs,
                           double k1, double b) {
    if (k1 <= 0 || b < 0 || b > 1) throw ConfigError("bm25 requires k1 > 0 and b in [0, 1]");
    Bm25Index index;
    index.k1_ = k1;
    index.b_ = b;
    double total_len = 0.0;
    for (const auto& [id, body] : docs) {
        if (index.id_to_index_.count(id)) throw DataError("duplicate doc id '" + id + "'");
        std::size_t doc_index = index.doc_ids_.size();
        index.id_to_index_[id] = doc_index;
        index.doc_ids_.push_back(id);
        auto tokens = text::tokenize(body);
        std::map<std::string, std::size_t> tf;
        for (const auto& t : tokens) tf[t]++;
        for (const auto& [term, count] : tf) index.postings_[term].emplace_back(doc_index, count);
        index.doc_lengths_.push_back(static_cast<double>(tokens.size()));
        total_len += static_cast<double>(tokens.size());
    }
    index.avgdl_ = docs.empty() ? 0.0 : total_len / static_cast<double>(docs.size());
    return index;
}

double Bm25Index::idf(const std::string& term) const {
    auto it = postings_.find(term);
    if (it == postings_.end()) return 0.0;
    double n = static_cast<double>(doc_ids_.size());
    double df = static_cast<double>(it->second.size());
    double raw = std::log((n - df + 0.5) / (df + 0.5));
    return std::max(0.0, raw);
}

double Bm25Index::term_score(std::size_t tf, std::size_t doc_index, double idf_value) const {
    double tfd = static_cast<double>(tf);
    double len_norm = 1.0 - b_ + b_ * (avgdl_ > 0.0 ? doc_lengths_[doc_index] / avgdl_ : 0.0);
    return idf_value * tfd * (k1_ + 1.0) / (tfd + k1_ * len_norm);
}

RankedList Bm25Index::query(const std::string& query_text, std::size_t top_k,
                            const std::string& query_id) const {
    auto tokens = text::tokenize(query_text);
    std::set<std::string> terms(tokens.begin(), tokens.end());
    std::map<std::size_t, double> scores; // doc index -> score, only matched docs
    for (const auto& term : terms) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        double idf_value = idf(term);
        for (const auto& [doc_index, tf] : it->second) {
            scores[doc_index] += term_score(tf, doc_index, idf_value);
        }
    }
    RankedList out{query_id, View::bm25, {}};
    out.entries.reserve(scores.size());
    for (const auto& [doc_index, score] : scores) {
        out.entries.push_back({doc_ids_[doc_index], score});
    }
    sort_and_truncate(out.entries, top_k);
    return out;
}

double Bm25Index::score_doc(const std::string& query_text, const std::string& doc_id) const {
    auto it = id_to_index_.find(doc_id);
    if (it == id_to_index_.end()) throw DataError("unknown doc id '" + doc_id + "'");
    auto tokens = text::tokenize(query_text);
    std::set<std::string> terms(tokens.begin(), tokens.end());
    double score = 0.0;
    for (const auto& term : terms) {
        auto pit = postings_.find(term);
        if (pit == postings_.end()) continue;
        for (const auto& [doc_index, tf] : pit->second) {
            if (doc_index == it->second) score += term_score(tf, doc_index, idf(term));
        }
    }
    return score;
}

void Bm25Index::save(const std::filesystem::path& path) const {
    json j;
    j["k1"] = k1_;
    j["b"] = b_;
    j["avgdl"] = avgdl_;
    j["doc_ids"] = doc_ids_;
    j["doc_lengths"] = doc_lengths_;
    json postings = json::object();
    for (const auto& [term, plist] : postings_) {
        json rows = json::array();
        for (const auto& [doc_index, tf] : plist) rows.push_back({doc_index, tf});
        postings[term] = rows;
    }
    j["postings"] = postings;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump() << "\n";
}

Bm25Index Bm25Index::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    Bm25Index index;
    index.k1_ = j.at("k1").get<double>();
    index.b_ = j.at("b").get<double>();
    index.avgdl_ = j.at("avgdl").get<double>();
    index.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
    index.doc_lengths_ = j.at("doc_lengths").get<std::vector<double>>();
    for (std::size_t i = 0; i < index.doc_ids_.size(); ++i) index.id_to_index_[index.doc_ids_[i]] = i;
    for (const auto& [term, rows] : j.at("postings").items()) {
        for (const auto& row : rows) {
            index.postings_[term].emplace_back(row[0].get<std::size_t>(),
                                               row[1].get<std::size_t>());
        }
    }
    return index;
}

// ---------------------------------------------------------------------------
// Dense

DenseIndex DenseIndex::build(const std::vector<std::pair<std::string, std::string>>& docs,
                             const EmbeddingProvider& provider, View view) {
    std::map<std::string, std::vector<double>> vectors;
    for (const auto& [id, body] : docs) {
        if (vectors.count(id)) throw DataError("duplicate doc id '" + id + "'");
        vectors[id] = provider.embed_keyed(id, body);
    }
    return from_vectors(std::move(vectors), view);
}

DenseIndex DenseIndex::from_vectors(std::map<std::string, std::vector<double>> vectors,
                                    View view) {
    DenseIndex index;
    index.view_ = view;
    index.vectors_ = std::move(vectors);
    return index;
}

RankedList DenseIndex::search(const std::vector<double>& query_vec, std::size_t top_k,
                              const std::string& query_id) const {
    RankedList out{query_id, view_, {}};
    out.entries.reserve(vectors_.size());
    for (const auto& [id, vec] : vectors_) {
        out.entries.push_back({id, cosine_similarity(query_vec, vec)});
    }
    sort_and_truncate(out.entries, top_k);
    return out;
}

void DenseIndex::save(const std::filesystem::path& path) const {
    save_vector_file(vectors_, path);
}

// ---------------------------------------------------------------------------
// RRF

RankedList rrf_fuse(const std::vector<RankedList>& lists, double k_rrf, std::size_t top_k) {
    if (lists.empty()) throw ConfigError("rrf_fuse needs at least one input list");
    if (k_rrf <= 0) throw ConfigError("k_rrf must be positive");
    const std::string& qid = lists.front().query_id;
    std::map<std::string, double> scores;
    for (const auto& list : lists) {
        if (list.query_id != qid) {
            throw DataError("rrf_fuse inputs mix queries '" + qid + "' and '" + list.query_id +
                            "'");
        }
        list.validate();
        for (std::size_t rank = 1; rank <= list.entries.size(); ++rank) {
            scores[list.entries[rank - 1].doc_id] += 1.0 / (k_rrf + static_cast<double>(rank));
        }
    }
    RankedList out{qid, View::fused, {}};
    out.entries.reserve(scores.size());
    for (const auto& [id, score] : scores) out.entries.push_back({id, score});
    sort_and_truncate(out.entries, top_k);
    return out;
}

// ---------------------------------------------------------------------------
// Ranked list persistence

void save_ranked_lists(const std::vector<RankedList>& lists, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& list : lists) {
        json j;
        j["query_id"] = list.query_id;
        j["view"] = view_name(list.view);
        json entries = json::array();
        for (const auto& e : list.entries) entries.push_back({{"doc_id", e.doc_id}, {"score", e.score}});
        j["entries"] = entries;
        out << j.dump() << "\n";
    }
}

std::vector<RankedList> load_ranked_lists(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<RankedList> lists;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON");
        }
        RankedList list;
        list.query_id = j.at("query_id").get<std::string>();
        list.view = view_from_name(j.at("view").get<std::string>());
        for (const auto& e : j.at("entries")) {
            list.entries.push_back({e.at("doc_id").get<std::string>(), e.at("score").get<double>()});
        }
        list.validate();
        lists.push_back(std::move(list));
    }
    return lists;
}

} // namespace maca
