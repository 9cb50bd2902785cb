#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "maca/embed.hpp"

namespace maca {

enum class View { bm25, dense_qq, dense_qa, fused, teacher, student };

std::string view_name(View v);
View view_from_name(const std::string& name);

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;
};

struct RankedList {
    std::string query_id;
    View view = View::fused;
    std::vector<RankedEntry> entries;

    /// Enforces unique doc ids and (non-teacher views) non-increasing scores.
    void validate() const;
};

/// Okapi BM25 over tokenized text (same tokenizer as the embedder). IDF is
/// floored at 0; repeated query terms count once. Only documents matching at
/// least one query term are returned, ties broken by smaller doc_id.
class Bm25Index {
  public:
    static Bm25Index build(const std::vector<std::pair<std::string, std::string>>& docs,
                           double k1 = 1.2, double b = 0.75);

    RankedList query(const std::string& query_text, std::size_t top_k,
                     const std::string& query_id = "") const;

    /// Score one document against a query (0 when nothing overlaps).
    double score_doc(const std::string& query_text, const std::string& doc_id) const;

    double k1() const { return k1_; }
    double b() const { return b_; }
    std::size_t doc_count() const { return doc_ids_.size(); }

    void save(const std::filesystem::path& path) const;
    static Bm25Index load(const std::filesystem::path& path);

  private:
    double k1_ = 1.2, b_ = 0.75;
    double avgdl_ = 0.0;
    std::vector<std::string> doc_ids_;
    std::vector<double> doc_lengths_;
    std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> postings_;
    std::map<std::string, std::size_t> id_to_index_;

    double idf(const std::string& term) const;
    double term_score(std::size_t tf, std::size_t doc_index, double idf_value) const;
};

/// Brute-force cosine index over provider embeddings of one text view.
class DenseIndex {
  public:
    static DenseIndex build(const std::vector<std::pair<std::string, std::string>>& docs,
                            const EmbeddingProvider& provider, View view);
    static DenseIndex from_vectors(std::map<std::string, std::vector<double>> vectors, View view);

    RankedList search(const std::vector<double>& query_vec, std::size_t top_k,
                      const std::string& query_id = "") const;

    View view() const { return view_; }
    const std::map<std::string, std::vector<double>>& vectors() const { return vectors_; }

    void save(const std::filesystem::path& path) const;

  private:
    View view_ = View::dense_qq;
    std::map<std::string, std::vector<double>> vectors_;
};

/// Reciprocal rank fusion: score(d) = sum over lists of 1 / (k_rrf + rank),
/// ranks starting at 1. Inputs must share a query id; ties break on doc_id.
RankedList rrf_fuse(const std::vector<RankedList>& lists, double k_rrf = 60.0,
                    std::size_t top_k = 10);

void save_ranked_lists(const std::vector<RankedList>& lists, const std::filesystem::path& path);
std::vector<RankedList> load_ranked_lists(const std::filesystem::path& path);

} // namespace maca
