#include "maca/distill.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "maca/error.hpp"
#include "maca/text.hpp"

using nlohmann::json;

namespace maca {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

void require_finite(double x, const std::string& what) {
    if (!std::isfinite(x)) throw NumericError(what + " is non-finite");
}

} // namespace

StudentModel StudentModel::identity(std::shared_ptr<const EmbeddingProvider> provider) {
    if (!provider) throw ConfigError("student model needs an embedding provider");
    StudentModel m;
    auto d = static_cast<Eigen::Index>(provider->dimension());
    m.provider = std::move(provider);
    m.adapter = Eigen::MatrixXd::Identity(d, d);
    m.trained = false;
    return m;
}

double StudentModel::score(const std::vector<double>& query_vec,
                           const std::vector<double>& doc_vec) const {
    Eigen::VectorXd u = adapter * to_eigen(query_vec);
    Eigen::VectorXd v = adapter * to_eigen(doc_vec);
    std::vector<double> us = to_std(u), vs = to_std(v);
    auto norm_sq = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double e : x) s += e * e;
        return s;
    };
    if (norm_sq(us) == 0.0 || norm_sq(vs) == 0.0) {
        throw NumericError("adapter collapsed a vector to zero norm");
    }
    return cosine_similarity(us, vs);
}

void TrainConfig::validate() const {
    if (alpha < 0 || beta < 0) throw ConfigError("alpha and beta must be >= 0");
    if (alpha + beta <= 0) throw ConfigError("alpha + beta must be positive");
    if (sigma <= 0) throw ConfigError("sigma must be positive");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (learning_rate <= 0) throw ConfigError("learning_rate must be positive");
    if (warmup_fraction < 0 || warmup_fraction > 1)
        throw ConfigError("warmup_fraction must be in [0, 1]");
}

// ---------------------------------------------------------------------------
// Losses

LossGrad mnrl_loss(const std::vector<TripletVecs>& batch, const Eigen::MatrixXd& W, double sigma,
                   bool include_mined_negatives) {
    if (batch.empty()) throw ConfigError("mnrl_loss needs a non-empty batch");
    if (sigma <= 0) throw ConfigError("sigma must be positive");
    const auto B = static_cast<Eigen::Index>(batch.size());
    const Eigen::Index d = W.rows();

    Eigen::MatrixXd Qm(d, B), Pm(d, B), Nm(d, B);
    for (Eigen::Index i = 0; i < B; ++i) {
        const auto& t = batch[static_cast<std::size_t>(i)];
        if (t.q.size() != d || t.p.size() != d || t.n.size() != d)
            throw ConfigError("triplet vectors do not match adapter dimension");
        Qm.col(i) = t.q;
        Pm.col(i) = t.p;
        Nm.col(i) = t.n;
    }

    Eigen::MatrixXd U = W * Qm, Vp = W * Pm, Vn = W * Nm;
    Eigen::VectorXd nu = U.colwise().norm().transpose();
    Eigen::VectorXd nvp = Vp.colwise().norm().transpose();
    Eigen::VectorXd nvn = Vn.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < B; ++i) {
        if (nu(i) == 0.0 || nvp(i) == 0.0 || (include_mined_negatives && nvn(i) == 0.0)) {
            throw NumericError("zero-norm adapted vector in batch row " + std::to_string(i));
        }
    }
    Eigen::MatrixXd Uh = U * nu.cwiseInverse().asDiagonal();
    Eigen::MatrixXd Vph = Vp * nvp.cwiseInverse().asDiagonal();
    Eigen::MatrixXd Vnh = Eigen::MatrixXd::Zero(d, B);
    if (include_mined_negatives) Vnh = Vn * nvn.cwiseInverse().asDiagonal();

    Eigen::MatrixXd Sp = Uh.transpose() * Vph; // B x B cosines q_i . p_j
    Eigen::VectorXd sn(B);
    for (Eigen::Index i = 0; i < B; ++i) {
        sn(i) = include_mined_negatives ? Uh.col(i).dot(Vnh.col(i)) : 0.0;
    }

    double loss = 0.0;
    Eigen::MatrixXd Gp(B, B); // softmax grads for positive candidates, sigma folded in
    Eigen::VectorXd gn = Eigen::VectorXd::Zero(B);
    for (Eigen::Index i = 0; i < B; ++i) {
        double mx = sigma * Sp.row(i).maxCoeff();
        if (include_mined_negatives) mx = std::max(mx, sigma * sn(i));
        double denom = 0.0;
        for (Eigen::Index j = 0; j < B; ++j) denom += std::exp(sigma * Sp(i, j) - mx);
        double en = include_mined_negatives ? std::exp(sigma * sn(i) - mx) : 0.0;
        denom += en;
        double log_prob = sigma * Sp(i, i) - mx - std::log(denom);
        loss -= log_prob;
        for (Eigen::Index j = 0; j < B; ++j) {
            double prob = std::exp(sigma * Sp(i, j) - mx) / denom;
            Gp(i, j) = (prob - (i == j ? 1.0 : 0.0)) / static_cast<double>(B) * sigma;
        }
        if (include_mined_negatives) gn(i) = en / denom / static_cast<double>(B) * sigma;
    }
    loss /= static_cast<double>(B);
    require_finite(loss, "mnrl loss");

    // Chain rule through the cosines, grouped into matrix products.
    Eigen::MatrixXd GS = Gp.cwiseProduct(Sp);
    Eigen::VectorXd rowdot = GS.rowwise().sum() + gn.cwiseProduct(sn);
    Eigen::MatrixXd M1 = Vph * Gp.transpose();
    M1 += Vnh * gn.asDiagonal();
    M1 -= Uh * rowdot.asDiagonal();
    M1 = M1 * nu.cwiseInverse().asDiagonal();

    Eigen::VectorXd coldot = GS.colwise().sum().transpose();
    Eigen::MatrixXd M2p = Uh * Gp - Vph * coldot.asDiagonal();
    M2p = M2p * nvp.cwiseInverse().asDiagonal();

    LossGrad out;
    out.loss = loss;
    out.grad = M1 * Qm.transpose() + M2p * Pm.transpose();
    if (include_mined_negatives) {
        Eigen::VectorXd gnsn = gn.cwiseProduct(sn);
        Eigen::MatrixXd M2n = (Uh * gn.asDiagonal() - Vnh * gnsn.asDiagonal()) *
                              nvn.cwiseInverse().asDiagonal();
        out.grad += M2n * Nm.transpose();
    }
    return out;
}

LossGrad rcma_loss(const TripletVecs& t, const Eigen::MatrixXd& W) {
    const Eigen::Index d = W.rows();
    if (t.q.size() != d || t.p.size() != d || t.n.size() != d)
        throw ConfigError("triplet vectors do not match adapter dimension");
    Eigen::VectorXd u = W * t.q, vp = W * t.p, vn = W * t.n;
    double nu = u.norm(), nvp = vp.norm(), nvn = vn.norm();
    if (nu == 0.0 || nvp == 0.0 || nvn == 0.0)
        throw NumericError("zero-norm adapted vector in margin alignment");
    Eigen::VectorXd uh = u / nu, vph = vp / nvp, vnh = vn / nvn;
    double c1 = uh.dot(vph);
    double c2 = uh.dot(vnh);
    double err = (c1 - c2) - t.delta_t;
    LossGrad out;
    out.loss = err * err;
    require_finite(out.loss, "rcma loss");
    double s = 2.0 * err;
    out.grad = (s / nu) * (vph - c1 * uh) * t.q.transpose();
    out.grad += (s / nvp) * (uh - c1 * vph) * t.p.transpose();
    out.grad -= (s / nu) * (vnh - c2 * uh) * t.q.transpose();
    out.grad -= (s / nvn) * (uh - c2 * vnh) * t.n.transpose();
    return out;
}

MetaFusionLoss metafusion_loss(const std::vector<TripletVecs>& batch, const Eigen::MatrixXd& W,
                               const TrainConfig& cfg) {
    cfg.validate();
    if (batch.empty()) throw ConfigError("metafusion_loss needs a non-empty batch");
    MetaFusionLoss out;
    out.grad = Eigen::MatrixXd::Zero(W.rows(), W.cols());

    LossGrad mnrl = mnrl_loss(batch, W, cfg.sigma);
    out.mnrl = mnrl.loss;

    double rcma_sum = 0.0;
    Eigen::MatrixXd rcma_grad = Eigen::MatrixXd::Zero(W.rows(), W.cols());
    for (const auto& t : batch) {
        LossGrad r = rcma_loss(t, W);
        rcma_sum += r.loss;
        rcma_grad += r.grad;
    }
    out.rcma = rcma_sum / static_cast<double>(batch.size());
    rcma_grad /= static_cast<double>(batch.size());

    out.total = cfg.alpha * out.mnrl + cfg.beta * out.rcma;
    out.grad = cfg.alpha * mnrl.grad + cfg.beta * rcma_grad;
    require_finite(out.total, "total loss");
    return out;
}

// ---------------------------------------------------------------------------
// Training

StudentModel train(const StudentModel& start, const std::vector<Triplet>& triplets,
                   const std::vector<Query>& queries, const std::vector<FaqItem>& corpus,
                   const TrainConfig& cfg, TrainReport* report, View text_view) {
    cfg.validate();
    if (triplets.empty()) throw DataError("no triplets to train on");
    if (!start.provider) throw ConfigError("student model needs an embedding provider");
    if (text_view != View::dense_qq && text_view != View::dense_qa)
        throw ConfigError("training text view must be dense_qq or dense_qa");

    std::map<std::string, const Query*> query_by_id;
    for (const auto& q : queries) query_by_id[q.id] = &q;
    std::map<std::string, const FaqItem*> faq_by_id;
    for (const auto& f : corpus) faq_by_id[f.id] = &f;

    const EmbeddingProvider& provider = *start.provider;
    std::map<std::string, Eigen::VectorXd> query_vecs, doc_vecs;
    for (const auto& t : triplets) {
        if (!query_by_id.count(t.query_id))
            throw DataError("triplet references unknown query '" + t.query_id + "'");
        for (const std::string* id : {&t.pos_id, &t.neg_id}) {
            if (!faq_by_id.count(*id))
                throw DataError("triplet references unknown faq '" + *id + "'");
        }
        if (!query_vecs.count(t.query_id)) {
            const Query& q = *query_by_id[t.query_id];
            query_vecs[t.query_id] = to_eigen(provider.embed_keyed(q.id, q.text));
        }
        for (const std::string* id : {&t.pos_id, &t.neg_id}) {
            if (!doc_vecs.count(*id)) {
                const FaqItem& f = *faq_by_id[*id];
                const std::string& body = text_view == View::dense_qq ? f.question : f.answer;
                doc_vecs[*id] = to_eigen(provider.embed_keyed(f.id, body));
            }
        }
    }

    auto make_batch = [&](const std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi) {
        std::vector<TripletVecs> batch;
        batch.reserve(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) {
            const Triplet& t = triplets[idx[k]];
            batch.push_back({query_vecs.at(t.query_id), doc_vecs.at(t.pos_id),
                             doc_vecs.at(t.neg_id), t.delta_t});
        }
        return batch;
    };

    const std::size_t n = triplets.size();
    const std::size_t batches_per_epoch =
        (n + static_cast<std::size_t>(cfg.batch_size) - 1) / static_cast<std::size_t>(cfg.batch_size);
    const std::size_t total_steps = batches_per_epoch * static_cast<std::size_t>(cfg.epochs);
    const auto warmup_steps =
        static_cast<std::size_t>(std::llround(cfg.warmup_fraction * static_cast<double>(total_steps)));

    StudentModel model = start;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(model.adapter.rows(), model.adapter.cols());
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(model.adapter.rows(), model.adapter.cols());
    std::size_t step = 0;

    if (report) report->epochs.clear();
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        text::Rng rng(cfg.seed + static_cast<std::uint64_t>(epoch));
        rng.shuffle(idx);

        double epoch_total = 0.0, epoch_mnrl = 0.0, epoch_rcma = 0.0;
        for (std::size_t lo = 0; lo < n; lo += static_cast<std::size_t>(cfg.batch_size)) {
            std::size_t hi = std::min(n, lo + static_cast<std::size_t>(cfg.batch_size));
            auto batch = make_batch(idx, lo, hi);
            MetaFusionLoss loss = metafusion_loss(batch, model.adapter, cfg);
            double w = static_cast<double>(hi - lo);
            epoch_total += loss.total * w;
            epoch_mnrl += loss.mnrl * w;
            epoch_rcma += loss.rcma * w;

            ++step;
            double lr = cfg.learning_rate;
            if (warmup_steps > 0 && step <= warmup_steps) {
                lr *= static_cast<double>(step) / static_cast<double>(warmup_steps);
            }
            m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * loss.grad;
            v = cfg.adam_beta2 * v +
                (1.0 - cfg.adam_beta2) * loss.grad.cwiseProduct(loss.grad);
            double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
            double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
            Eigen::MatrixXd mhat = m / bc1;
            Eigen::MatrixXd denom = (v / bc2).cwiseSqrt();
            denom.array() += cfg.adam_epsilon;
            model.adapter -= lr * mhat.cwiseQuotient(denom);
            if (!model.adapter.allFinite()) {
                throw NumericError("adapter became non-finite at step " + std::to_string(step));
            }
        }
        if (report) {
            report->epochs.push_back({epoch, epoch_total / static_cast<double>(n),
                                      epoch_mnrl / static_cast<double>(n),
                                      epoch_rcma / static_cast<double>(n)});
        }
    }
    model.trained = true;
    return model;
}

// ---------------------------------------------------------------------------
// Ranking

StudentIndex StudentIndex::build(const std::vector<FaqItem>& corpus,
                                 const EmbeddingProvider& provider, View text_view) {
    if (text_view != View::dense_qq && text_view != View::dense_qa)
        throw ConfigError("student index view must be dense_qq or dense_qa");
    StudentIndex index;
    index.view_ = text_view;
    auto d = static_cast<Eigen::Index>(provider.dimension());
    index.raw_.resize(d, static_cast<Eigen::Index>(corpus.size()));
    index.ids_.reserve(corpus.size());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const FaqItem& f = corpus[i];
        if (!seen.insert(f.id).second) throw DataError("duplicate faq id '" + f.id + "'");
        index.ids_.push_back(f.id);
        const std::string& body = text_view == View::dense_qq ? f.question : f.answer;
        index.raw_.col(static_cast<Eigen::Index>(i)) =
            to_eigen(provider.embed_keyed(f.id, body));
    }
    return index;
}

StudentScorer::StudentScorer(const StudentIndex& index, const StudentModel& model)
    : index_(&index), model_(&model) {
    if (model.dimension() != static_cast<std::size_t>(index.raw().rows()))
        throw ConfigError("adapter dimension does not match index");
    Eigen::MatrixXd adapted = model.adapter * index.raw();
    adapted_docs_.reserve(index.ids().size());
    for (Eigen::Index i = 0; i < adapted.cols(); ++i) {
        Eigen::VectorXd col = adapted.col(i);
        if (col.norm() == 0.0) {
            throw NumericError("adapter collapsed doc '" + index.ids()[static_cast<std::size_t>(i)] +
                               "' to zero norm");
        }
        adapted_docs_.push_back(to_std(col));
    }
}

RankedList StudentScorer::rank(const Query& query, std::size_t top_k) const {
    Eigen::VectorXd qraw = to_eigen(model_->provider->embed_keyed(query.id, query.text));
    Eigen::VectorXd adapted = model_->adapter * qraw;
    if (adapted.norm() == 0.0)
        throw NumericError("adapter collapsed query '" + query.id + "' to zero norm");
    std::vector<double> qvec = to_std(adapted);

    RankedList out{query.id, View::student, {}};
    out.entries.reserve(adapted_docs_.size());
    for (std::size_t i = 0; i < adapted_docs_.size(); ++i) {
        out.entries.push_back({index_->ids()[i], cosine_similarity(qvec, adapted_docs_[i])});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.doc_id < b.doc_id;
              });
    if (out.entries.size() > top_k) out.entries.resize(top_k);
    return out;
}

std::map<std::string, double> StudentScorer::score_all(const Query& query) const {
    RankedList full = rank(query, adapted_docs_.size());
    std::map<std::string, double> out;
    for (const auto& e : full.entries) out[e.doc_id] = e.score;
    return out;
}

// ---------------------------------------------------------------------------
// Model files

namespace {
constexpr char kMagic[8] = {'M', 'A', 'C', 'A', 'M', 'D', 'L', '1'};
}

void save_model(const StudentModel& model, const std::filesystem::path& path,
                const TrainConfig* cfg, const TrainReport* report) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out.write(kMagic, sizeof(kMagic));
    std::uint32_t version = 1;
    std::uint32_t d = static_cast<std::uint32_t>(model.dimension());
    std::string name = model.provider ? model.provider->name() : "";
    std::uint32_t name_len = static_cast<std::uint32_t>(name.size());
    std::uint8_t trained = model.trained ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(&name_len), sizeof(name_len));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    out.write(reinterpret_cast<const char*>(&trained), sizeof(trained));
    // row-major so the on-disk layout is independent of Eigen's default
    for (Eigen::Index r = 0; r < model.adapter.rows(); ++r) {
        for (Eigen::Index c = 0; c < model.adapter.cols(); ++c) {
            double value = model.adapter(r, c);
            out.write(reinterpret_cast<const char*>(&value), sizeof(value));
        }
    }
    if (!out) throw ConfigError("short write to " + path.string());

    json side;
    side["provider"] = name;
    side["dimension"] = d;
    side["trained"] = model.trained;
    if (cfg) {
        side["config"] = {{"alpha", cfg->alpha},
                          {"beta", cfg->beta},
                          {"sigma", cfg->sigma},
                          {"epochs", cfg->epochs},
                          {"batch_size", cfg->batch_size},
                          {"learning_rate", cfg->learning_rate},
                          {"warmup_fraction", cfg->warmup_fraction},
                          {"seed", cfg->seed}};
    }
    if (report) {
        json trace = json::array();
        for (const auto& e : report->epochs) {
            trace.push_back(
                {{"epoch", e.epoch}, {"total", e.total}, {"mnrl", e.mnrl}, {"rcma", e.rcma}});
        }
        side["trace"] = trace;
    }
    std::ofstream side_out(path.string() + ".json");
    if (!side_out) throw ConfigError("cannot write " + path.string() + ".json");
    side_out << side.dump(2) << "\n";
}

StudentModel load_model(const std::filesystem::path& path,
                        std::shared_ptr<const EmbeddingProvider> provider) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DataError(path.string() + ": not a model file");
    std::uint32_t version = 0, d = 0, name_len = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&d), sizeof(d));
    in.read(reinterpret_cast<char*>(&name_len), sizeof(name_len));
    if (!in || version != 1) throw DataError(path.string() + ": unsupported model version");
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    std::uint8_t trained = 0;
    in.read(reinterpret_cast<char*>(&trained), sizeof(trained));

    StudentModel model;
    model.provider = provider ? std::move(provider) : provider_from_name(name);
    if (model.provider->dimension() != d) {
        throw ConfigError(path.string() + ": provider dimension " +
                          std::to_string(model.provider->dimension()) +
                          " does not match stored " + std::to_string(d));
    }
    model.adapter.resize(d, d);
    for (std::uint32_t r = 0; r < d; ++r) {
        for (std::uint32_t c = 0; c < d; ++c) {
            double value = 0.0;
            in.read(reinterpret_cast<char*>(&value), sizeof(value));
            model.adapter(r, c) = value;
        }
    }
    if (!in) throw DataError(path.string() + ": truncated model file");
    model.trained = trained != 0;
    return model;
}

} // namespace maca
