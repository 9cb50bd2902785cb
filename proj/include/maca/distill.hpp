#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maca/corpus.hpp"
#include "maca/embed.hpp"
#include "maca/judge.hpp"
#include "maca/retrieve.hpp"

namespace maca {

/// Linear adapter over a fixed embedding provider. Scores are cosines of
/// adapted vectors; a fresh model uses the identity adapter and therefore
/// ranks exactly like dense search over the raw embeddings.
struct StudentModel {
    std::shared_ptr<const EmbeddingProvider> provider;
    Eigen::MatrixXd adapter;
    bool trained = false;

    static StudentModel identity(std::shared_ptr<const EmbeddingProvider> provider);
    std::size_t dimension() const { return static_cast<std::size_t>(adapter.rows()); }

    /// cosine(W e(q), W e(d)) over raw (un-adapted) input vectors.
    double score(const std::vector<double>& query_vec, const std::vector<double>& doc_vec) const;
};

struct TrainConfig {
    double alpha = 1.0;            // ranking term weight
    double beta = 1.0;             // margin alignment term weight
    double sigma = 20.0;           // similarity scale inside the softmax
    int epochs = 4;
    int batch_size = 64;
    double learning_rate = 2e-5;
    double warmup_fraction = 0.1;  // linear warmup, then constant
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 42;

    void validate() const;
};

struct TripletVecs {
    Eigen::VectorXd q, p, n;
    double delta_t = 0.0;
};

struct LossGrad {
    double loss = 0.0;
    Eigen::MatrixXd grad;
};

/// In-batch softmax ranking loss. Row i scores its positive against all
/// batch positives plus (optionally) its own mined negative, scaled by
/// sigma. Returns the batch mean and the analytic gradient w.r.t. W.
LossGrad mnrl_loss(const std::vector<TripletVecs>& batch, const Eigen::MatrixXd& W, double sigma,
                   bool include_mined_negatives = true);

/// Squared error between the student margin cos(Wq,Wp) - cos(Wq,Wn) and the
/// teacher margin delta_t, with analytic gradient.
LossGrad rcma_loss(const TripletVecs& t, const Eigen::MatrixXd& W);

struct MetaFusionLoss {
    double total = 0.0;
    double mnrl = 0.0;
    double rcma = 0.0; // batch mean
    Eigen::MatrixXd grad;
};

/// total = alpha * mnrl + beta * mean(rcma)
MetaFusionLoss metafusion_loss(const std::vector<TripletVecs>& batch, const Eigen::MatrixXd& W,
                               const TrainConfig& cfg);

struct EpochTrace {
    int epoch = 0;
    double total = 0.0;
    double mnrl = 0.0;
    double rcma = 0.0;
};

struct TrainReport {
    std::vector<EpochTrace> epochs;
};

/// Adam over the adapter with per-epoch seeded shuffling and linear warmup.
/// Triplet ids must resolve against the provided queries and corpus; the
/// document text view is the FAQ question by default (View::dense_qa trains
/// against answers). Deterministic given the config seed.
StudentModel train(const StudentModel& start, const std::vector<Triplet>& triplets,
                   const std::vector<Query>& queries, const std::vector<FaqItem>& corpus,
                   const TrainConfig& cfg, TrainReport* report = nullptr,
                   View text_view = View::dense_qq);

/// Raw embeddings of one corpus text view, reusable across adapter versions.
class StudentIndex {
  public:
    static StudentIndex build(const std::vector<FaqItem>& corpus,
                              const EmbeddingProvider& provider, View text_view = View::dense_qq);
    const std::vector<std::string>& ids() const { return ids_; }
    const Eigen::MatrixXd& raw() const { return raw_; }
    View text_view() const { return view_; }

  private:
    std::vector<std::string> ids_;
    Eigen::MatrixXd raw_; // d x N
    View view_ = View::dense_qq;
};

/// Index adapted under one model; ranks queries by cosine, ties on doc id.
class StudentScorer {
  public:
    StudentScorer(const StudentIndex& index, const StudentModel& model);

    RankedList rank(const Query& query, std::size_t top_k) const;
    std::map<std::string, double> score_all(const Query& query) const;

  private:
    const StudentIndex* index_;
    const StudentModel* model_;
    std::vector<std::vector<double>> adapted_docs_;
};

void save_model(const StudentModel& model, const std::filesystem::path& path,
                const TrainConfig* cfg = nullptr, const TrainReport* report = nullptr);
StudentModel load_model(const std::filesystem::path& path,
                        std::shared_ptr<const EmbeddingProvider> provider = nullptr);

} // namespace maca
