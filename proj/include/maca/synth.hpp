#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "maca/corpus.hpp"

namespace maca {

/// Generator for a banking-style FAQ benchmark built around confusable pairs:
/// each pair holds two FAQs that differ only in one entity word and their
/// channel wording (branch/teller vs online/app), so surface retrieval gets
/// pulled toward the wrong sibling while metadata identifies the right one.
struct SynthConfig {
    std::size_t n_topics = 8;           // drawn from the built-in topic names
    std::size_t n_confusable_pairs = 50; // two FAQs per pair
    std::size_t train_queries_per_faq = 3;
    double tilted_eval_fraction = 0.6;  // share of eval queries worded for the sibling channel
    std::size_t paraphrases_per_eval = 3;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SynthData {
    std::vector<FaqItem> corpus;
    std::vector<Query> train_queries; // metadata-labeled, no gold ids
    std::vector<Query> eval_queries;  // gold-labeled, one per FAQ
    std::vector<Query> paraphrases;   // eval bases plus generated variants, grouped
    std::vector<std::string> lexicon_lines;
};

SynthData make_synth(const SynthConfig& cfg);

/// Writes corpus.jsonl, train_queries.jsonl, eval_queries.jsonl,
/// paraphrases.jsonl and lexicon.txt under out_dir.
void save_synth(const SynthData& data, const std::filesystem::path& out_dir);

} // namespace maca
