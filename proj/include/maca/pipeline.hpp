#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maca/distill.hpp"
#include "maca/judge.hpp"
#include "maca/trust.hpp"

namespace maca {

/// Settings shared by every subcommand. Path fields are consumed lazily:
/// each stage validates only what it actually reads.
struct PipelineConfig {
    // inputs and artifact directory
    std::string corpus;
    std::string queries;       // training queries
    std::string eval_queries;  // gold-labeled held-out queries
    std::string paraphrases;   // paraphrase groups for the robustness audit
    std::string lexicon;       // optional annotation rules (TSV)
    std::string out = "out";

    // embeddings
    std::size_t dim = 256;
    std::uint64_t embed_seed = 42;

    // retrieval
    double bm25_k1 = 1.2;
    double bm25_b = 0.75;
    std::size_t view_top_k = 20;
    std::size_t fused_k = 10;
    double k_rrf = 60.0;
    bool fuse_bm25 = false; // fold the lexical view into fusion as a third list

    // taxonomy refinement
    int min_support = 2;
    double merge_threshold = 0.2;

    // teacher / mining
    double gamma = 0.2;
    double m_max = 1.0;
    std::size_t k_t = 10;
    std::size_t k_s = 10;

    // training
    double alpha = 1.0;
    double beta = 1.0;
    double sigma = 20.0;
    double lr = 0.05;
    int epochs = 4;
    int batch_size = 64;
    double warmup = 0.1;

    // audit
    std::vector<std::size_t> ks{1, 3, 5, 10, 15};
    std::size_t p_q = 8; // candidate-order trials per query
    std::size_t m_q = 4; // paraphrase variants per group

    // sweep grid
    std::vector<double> sweep_alphas{1.0};
    std::vector<double> sweep_betas{0.0, 0.5, 1.0, 2.0};

    std::size_t jobs = 1;
    std::uint64_t seed = 42;

    void validate() const;
    JudgeConfig judge() const;
    TrainConfig trainer() const;
    TrustConfig trust() const;
};

/// Cutoffs reported by cmd_eval for the baseline / +MNRL / +MF table.
const std::vector<std::size_t>& report_cutoffs();

void cmd_index(const PipelineConfig& cfg);
void cmd_taxonomy(const PipelineConfig& cfg);
void cmd_rank(const PipelineConfig& cfg);
void cmd_teach(const PipelineConfig& cfg);
void cmd_mine(const PipelineConfig& cfg);
void cmd_train(const PipelineConfig& cfg);
void cmd_eval(const PipelineConfig& cfg);
void cmd_audit(const PipelineConfig& cfg);
void cmd_sweep(const PipelineConfig& cfg);

/// index -> taxonomy -> rank -> teach -> mine -> train -> eval, writing every
/// intermediate artifact under cfg.out. A stage failure rethrows the stage
/// error prefixed with the stage name.
void cmd_pipeline(const PipelineConfig& cfg);

} // namespace maca
