#include "maca/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "maca/error.hpp"
#include "maca/synth.hpp"
#include "maca/teacher.hpp"

using nlohmann::json;

namespace maca {

namespace {

namespace fs = std::filesystem;

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::min(std::max<std::size_t>(jobs, 1), std::max<std::size_t>(n, 1));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
        workers.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

fs::path require_artifact(const fs::path& path, const std::string& producer) {
    if (!fs::exists(path)) {
        throw DataError("missing artifact " + path.string() + "; run the " + producer +
                        " stage first");
    }
    return path;
}

fs::path require_input(const std::string& path, const std::string& flag) {
    if (path.empty()) throw ConfigError("--" + flag + " is required for this command");
    if (!fs::exists(path)) throw DataError("input file not found: " + path);
    return fs::path(path);
}

void write_json(const json& j, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_text(const std::vector<std::string>& lines, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& line : lines) out << line << "\n";
}

// Shortest round-trip decimal form, same as the JSON artifacts use.
std::string fmt_double(double v) { return json(v).dump(); }

json series_json(const MetricSeries& series) {
    json rows = json::array();
    for (const auto& [k, v] : series) rows.push_back({k, v});
    return rows;
}

std::shared_ptr<HashingEmbedder> make_embedder(const PipelineConfig& cfg) {
    return std::make_shared<HashingEmbedder>(cfg.dim, cfg.embed_seed);
}

std::vector<Query> load_stage_queries(const PipelineConfig& cfg) {
    fs::path labeled = fs::path(cfg.out) / "labeled_queries.jsonl";
    if (fs::exists(labeled)) return load_queries(labeled);
    return load_queries(require_input(cfg.queries, "queries"));
}

std::vector<FaqItem> load_stage_corpus(const PipelineConfig& cfg) {
    fs::path labeled = fs::path(cfg.out) / "labeled_corpus.jsonl";
    if (fs::exists(labeled)) return load_corpus(labeled);
    return load_corpus(require_input(cfg.corpus, "corpus"));
}

std::map<std::string, FaqItem> corpus_map(const std::vector<FaqItem>& corpus) {
    std::map<std::string, FaqItem> m;
    for (const auto& f : corpus) m[f.id] = f;
    return m;
}

Taxonomy load_taxonomy_or_empty(const PipelineConfig& cfg) {
    fs::path path = fs::path(cfg.out) / "taxonomy.json";
    if (fs::exists(path)) return load_taxonomy(path);
    return Taxonomy{};
}

std::unique_ptr<AnnotatorClient> make_annotator(const PipelineConfig& cfg,
                                                const std::vector<Query>& queries,
                                                const std::vector<FaqItem>& corpus) {
    if (!cfg.lexicon.empty()) {
        return std::make_unique<LexiconAnnotator>(
            LexiconAnnotator::from_file(require_input(cfg.lexicon, "lexicon")));
    }
    auto preset = std::make_unique<PresetAnnotator>();
    for (const auto& q : queries) {
        if (q.meta) preset->add(q.text, *q.meta);
    }
    for (const auto& f : corpus) preset->add(f.question + " " + f.answer, f.meta);
    return preset;
}

RankedList truncated(const RankedList& list, std::size_t k) {
    RankedList out = list;
    if (out.entries.size() > k) out.entries.resize(k);
    return out;
}

std::size_t max_cutoff(const std::vector<std::size_t>& ks) {
    return *std::max_element(ks.begin(), ks.end());
}

} // namespace

void PipelineConfig::validate() const {
    if (dim < 8) throw ConfigError("dim must be >= 8");
    if (bm25_k1 <= 0) throw ConfigError("bm25_k1 must be positive");
    if (bm25_b < 0 || bm25_b > 1) throw ConfigError("bm25_b must be in [0, 1]");
    if (view_top_k == 0 || fused_k == 0) throw ConfigError("retrieval depths must be >= 1");
    if (k_rrf <= 0) throw ConfigError("k_rrf must be positive");
    if (min_support < 1) throw ConfigError("min_support must be >= 1");
    if (merge_threshold < 0 || merge_threshold >= 1)
        throw ConfigError("merge_threshold must be in [0, 1)");
    if (jobs == 0) throw ConfigError("jobs must be >= 1");
    judge().validate();
    trainer().validate();
    trust().validate();
    if (sweep_alphas.empty() || sweep_betas.empty())
        throw ConfigError("sweep grids must be non-empty");
}

JudgeConfig PipelineConfig::judge() const {
    JudgeConfig j;
    j.gamma = gamma;
    j.m_max = m_max;
    j.k_t = k_t;
    j.k_s = k_s;
    return j;
}

TrainConfig PipelineConfig::trainer() const {
    TrainConfig t;
    t.alpha = alpha;
    t.beta = beta;
    t.sigma = sigma;
    t.epochs = epochs;
    t.batch_size = batch_size;
    t.learning_rate = lr;
    t.warmup_fraction = warmup;
    t.seed = seed;
    return t;
}

TrustConfig PipelineConfig::trust() const {
    TrustConfig t;
    t.ks = ks;
    t.permutations = p_q;
    t.paraphrases = m_q;
    t.seed = seed;
    return t;
}

const std::vector<std::size_t>& report_cutoffs() {
    static const std::vector<std::size_t> ks = {1, 5, 10, 15};
    return ks;
}

void cmd_index(const PipelineConfig& cfg) {
    cfg.validate();
    auto corpus = load_corpus(require_input(cfg.corpus, "corpus"));
    if (corpus.empty()) throw DataError("corpus is empty");
    fs::path out = fs::path(cfg.out) / "index";
    fs::create_directories(out);

    std::vector<std::pair<std::string, std::string>> lexical_docs;
    lexical_docs.reserve(corpus.size());
    for (const auto& f : corpus) lexical_docs.emplace_back(f.id, f.question + " " + f.answer);
    auto bm25 = Bm25Index::build(lexical_docs, cfg.bm25_k1, cfg.bm25_b);
    bm25.save(out / "bm25.json");

    auto embedder = make_embedder(cfg);
    std::vector<std::vector<double>> q_vecs(corpus.size()), a_vecs(corpus.size());
    parallel_for(corpus.size(), cfg.jobs, [&](std::size_t i) {
        q_vecs[i] = embedder->embed(corpus[i].question);
        a_vecs[i] = embedder->embed(corpus[i].answer);
    });
    std::map<std::string, std::vector<double>> qq, qa;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        qq[corpus[i].id] = std::move(q_vecs[i]);
        qa[corpus[i].id] = std::move(a_vecs[i]);
    }
    save_vector_file(qq, out / "qq_vectors.jsonl");
    save_vector_file(qa, out / "qa_vectors.jsonl");

    json meta = {
        {"seed", cfg.seed},
        {"embedder", embedder->name()},
        {"dimension", cfg.dim},
        {"documents", corpus.size()},
        {"bm25", {{"k1", cfg.bm25_k1}, {"b", cfg.bm25_b}}},
    };
    write_json(meta, out / "meta.json");
}

void cmd_taxonomy(const PipelineConfig& cfg) {
    cfg.validate();
    auto corpus = load_corpus(require_input(cfg.corpus, "corpus"));
    auto queries = load_queries(require_input(cfg.queries, "queries"));
    auto annotator = make_annotator(cfg, queries, corpus);

    auto res = induce_taxonomy(queries, corpus, *annotator, cfg.min_support,
                               cfg.merge_threshold);
    fs::path out(cfg.out);
    fs::create_directories(out);
    save_taxonomy(res.taxonomy, out / "taxonomy.json");
    save_queries(res.queries, out / "labeled_queries.jsonl");
    save_corpus(res.faqs, out / "labeled_corpus.jsonl");
    write_text(res.diagnostics, out / "taxonomy_diagnostics.txt");
}

void cmd_rank(const PipelineConfig& cfg) {
    cfg.validate();
    auto queries = load_stage_queries(cfg);
    if (queries.empty()) throw DataError("no queries to rank");
    fs::path index_dir = fs::path(cfg.out) / "index";
    auto bm25 = Bm25Index::load(require_artifact(index_dir / "bm25.json", "index"));
    auto qq = DenseIndex::from_vectors(
        load_vector_file(require_artifact(index_dir / "qq_vectors.jsonl", "index")),
        View::dense_qq);
    auto qa = DenseIndex::from_vectors(
        load_vector_file(require_artifact(index_dir / "qa_vectors.jsonl", "index")),
        View::dense_qa);
    auto embedder = make_embedder(cfg);

    std::vector<RankedList> bm25_lists(queries.size()), qq_lists(queries.size()),
        qa_lists(queries.size()), fused_lists(queries.size());
    parallel_for(queries.size(), cfg.jobs, [&](std::size_t i) {
        const Query& q = queries[i];
        bm25_lists[i] = bm25.query(q.text, cfg.view_top_k, q.id);
        std::vector<double> qvec = embedder->embed(q.text);
        qq_lists[i] = qq.search(qvec, cfg.view_top_k, q.id);
        qa_lists[i] = qa.search(qvec, cfg.view_top_k, q.id);
        std::vector<RankedList> views = {qq_lists[i], qa_lists[i]};
        if (cfg.fuse_bm25) views.push_back(bm25_lists[i]);
        fused_lists[i] = rrf_fuse(views, cfg.k_rrf, cfg.fused_k);
    });

    fs::path out(cfg.out);
    save_ranked_lists(bm25_lists, out / "ranked_bm25.jsonl");
    save_ranked_lists(qq_lists, out / "ranked_dense_qq.jsonl");
    save_ranked_lists(qa_lists, out / "ranked_dense_qa.jsonl");
    save_ranked_lists(fused_lists, out / "ranked_fused.jsonl");
}

void cmd_teach(const PipelineConfig& cfg) {
    cfg.validate();
    auto corpus = load_stage_corpus(cfg);
    auto queries = load_stage_queries(cfg);
    auto faqs = corpus_map(corpus);
    Taxonomy taxonomy = load_taxonomy_or_empty(cfg);
    auto annotator = make_annotator(cfg, queries, corpus);

    auto fused = load_ranked_lists(
        require_artifact(fs::path(cfg.out) / "ranked_fused.jsonl", "rank"));
    std::map<std::string, const RankedList*> fused_by_id;
    for (const auto& list : fused) fused_by_id[list.query_id] = &list;

    LexicalCoverage coverage;
    std::vector<std::pair<std::string, TeacherResult>> outputs;
    outputs.reserve(queries.size());
    for (const auto& q : queries) {
        auto it = fused_by_id.find(q.id);
        if (it == fused_by_id.end())
            throw DataError("no fused ranking for query '" + q.id + "'; run rank first");
        std::vector<std::string> candidates;
        candidates.reserve(it->second->entries.size());
        for (const auto& e : it->second->entries) candidates.push_back(e.doc_id);
        MetadataLabel meta = infer_query_metadata(q, taxonomy, *annotator);
        outputs.emplace_back(q.id, teacher_rerank(q, meta, candidates, faqs, coverage));
    }
    save_teacher_outputs(outputs, fs::path(cfg.out) / "teacher.jsonl");
}

void cmd_mine(const PipelineConfig& cfg) {
    cfg.validate();
    auto corpus = load_stage_corpus(cfg);
    auto queries = load_stage_queries(cfg);
    auto faqs = corpus_map(corpus);
    auto teacher_outputs =
        load_teacher_outputs(require_artifact(fs::path(cfg.out) / "teacher.jsonl", "teach"));

    auto provider = make_embedder(cfg);
    auto index = StudentIndex::build(corpus, *provider, View::dense_qq);
    auto model = StudentModel::identity(provider);
    StudentScorer scorer(index, model);

    std::vector<RankedList> baseline(queries.size());
    parallel_for(queries.size(), cfg.jobs, [&](std::size_t i) {
        baseline[i] = scorer.rank(queries[i], cfg.k_s);
    });
    save_ranked_lists(baseline, fs::path(cfg.out) / "student_baseline.jsonl");

    std::map<std::string, const RankedList*> baseline_by_id;
    for (const auto& list : baseline) baseline_by_id[list.query_id] = &list;
    StudentRankFn student_rank = [&](const Query& q, std::size_t k) {
        auto it = baseline_by_id.find(q.id);
        if (it != baseline_by_id.end() && k <= it->second->entries.size()) {
            return truncated(*it->second, k);
        }
        return scorer.rank(q, k);
    };

    LexicalCoverage coverage;
    auto result = mine_triplets(queries, teacher_outputs, student_rank, faqs, coverage,
                                cfg.judge());
    save_triplets(result.triplets, fs::path(cfg.out) / "triplets.jsonl");

    json stats = {
        {"seed", cfg.seed},
        {"queries_seen", result.stats.queries_seen},
        {"triplets_emitted", result.stats.triplets_emitted},
        {"skipped_no_positive", result.stats.skipped_no_positive},
        {"skipped_no_negative", result.stats.skipped_no_negative},
        {"skipped_no_teacher_output", result.stats.skipped_no_teacher_output},
        {"fallback_negatives", result.stats.fallback_negatives},
        {"diagnostics", result.stats.diagnostics},
    };
    write_json(stats, fs::path(cfg.out) / "mining_stats.json");
}

void cmd_train(const PipelineConfig& cfg) {
    cfg.validate();
    auto corpus = load_stage_corpus(cfg);
    auto queries = load_stage_queries(cfg);
    auto triplets =
        load_triplets(require_artifact(fs::path(cfg.out) / "triplets.jsonl", "mine"));

    auto provider = make_embedder(cfg);
    auto start = StudentModel::identity(provider);

    TrainConfig ranking_only = cfg.trainer();
    ranking_only.beta = 0.0;
    TrainReport mnrl_report;
    auto model_mnrl = train(start, triplets, queries, corpus, ranking_only, &mnrl_report);
    save_model(model_mnrl, fs::path(cfg.out) / "model_mnrl.bin", &ranking_only, &mnrl_report);

    TrainConfig full = cfg.trainer();
    TrainReport mf_report;
    auto model_mf = train(start, triplets, queries, corpus, full, &mf_report);
    save_model(model_mf, fs::path(cfg.out) / "model_mf.bin", &full, &mf_report);
}

void cmd_eval(const PipelineConfig& cfg) {
    cfg.validate();
    auto corpus = load_stage_corpus(cfg);
    auto eval_queries = load_queries(require_input(cfg.eval_queries, "eval-queries"));

    auto provider = make_embedder(cfg);
    auto index = StudentIndex::build(corpus, *provider, View::dense_qq);

    std::vector<std::pair<std::string, StudentModel>> models;
    models.emplace_back("baseline", StudentModel::identity(provider));
    models.emplace_back("+MNRL", load_model(require_artifact(
                                      fs::path(cfg.out) / "model_mnrl.bin", "train"),
                                  provider));
    models.emplace_back("+MF", load_model(require_artifact(
                                    fs::path(cfg.out) / "model_mf.bin", "train"),
                                provider));

    const auto& ks = report_cutoffs();
    const std::size_t depth = max_cutoff(ks);

    json rows = json::object();
    std::vector<std::string> csv;
    csv.push_back("model,k,accuracy");
    for (const auto& [name, model] : models) {
        StudentScorer scorer(index, model);
        std::map<std::string, RankedList> results;
        for (const auto& q : eval_queries) results[q.id] = scorer.rank(q, depth);
        MetricSeries acc = accuracy_profile(eval_queries, results, ks);
        rows[name] = series_json(acc);
        for (const auto& [k, v] : acc) {
            csv.push_back(name + "," + std::to_string(k) + "," + fmt_double(v));
        }
    }

    json report = {
        {"seed", cfg.seed},
        {"cutoffs", ks},
        {"queries", eval_queries.size()},
        {"accuracy", rows},
    };
    write_json(report, fs::path(cfg.out) / "report.json");
    write_text(csv, fs::path(cfg.out) / "report.csv");
}

void cmd_audit(const PipelineConfig& cfg) {
    cfg.validate();
    auto corpus = load_stage_corpus(cfg);
    auto eval_queries = load_queries(require_input(cfg.eval_queries, "eval-queries"));
    auto faqs = corpus_map(corpus);
    Taxonomy taxonomy = load_taxonomy_or_empty(cfg);
    auto annotator = make_annotator(cfg, eval_queries, corpus);

    std::vector<Query> paraphrase_queries;
    if (!cfg.paraphrases.empty()) {
        paraphrase_queries = load_queries(require_input(cfg.paraphrases, "paraphrases"));
    }

    std::vector<std::string> pool;
    pool.reserve(corpus.size());
    for (const auto& [id, f] : faqs) pool.push_back(id);

    std::vector<std::pair<std::string, std::string>> lexical_docs;
    for (const auto& f : corpus) lexical_docs.emplace_back(f.id, f.question + " " + f.answer);
    auto bm25 = Bm25Index::build(lexical_docs, cfg.bm25_k1, cfg.bm25_b);

    auto provider = make_embedder(cfg);
    auto index = StudentIndex::build(corpus, *provider, View::dense_qq);
    LexicalCoverage coverage;

    std::map<std::string, StudentModel> models;
    models.emplace("student_baseline", StudentModel::identity(provider));
    fs::path mnrl_path = fs::path(cfg.out) / "model_mnrl.bin";
    fs::path mf_path = fs::path(cfg.out) / "model_mf.bin";
    if (fs::exists(mnrl_path)) models.emplace("student_mnrl", load_model(mnrl_path, provider));
    if (fs::exists(mf_path)) models.emplace("student_mf", load_model(mf_path, provider));

    std::map<std::string, StudentScorer> scorers;
    for (const auto& [name, model] : models) {
        scorers.emplace(name, StudentScorer(index, model));
    }

    auto candidate_sort = [](std::map<std::string, double>&& scores,
                             const std::vector<std::string>& candidates, const Query& q,
                             View view) {
        RankedList out{q.id, view, {}};
        out.entries.reserve(candidates.size());
        for (const auto& id : candidates) {
            auto it = scores.find(id);
            if (it == scores.end()) throw DataError("candidate '" + id + "' is not indexed");
            out.entries.push_back({id, it->second});
        }
        std::sort(out.entries.begin(), out.entries.end(),
                  [](const RankedEntry& a, const RankedEntry& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.doc_id < b.doc_id;
                  });
        return out;
    };

    std::map<std::string, RankerFn> rankers;
    rankers["bm25"] = [&](const Query& q, const std::vector<std::string>& candidates) {
        std::map<std::string, double> scores;
        for (const auto& id : candidates) scores[id] = bm25.score_doc(q.text, id);
        return candidate_sort(std::move(scores), candidates, q, View::bm25);
    };
    rankers["teacher"] = [&](const Query& q, const std::vector<std::string>& candidates) {
        MetadataLabel meta = infer_query_metadata(q, taxonomy, *annotator);
        return teacher_rerank(q, meta, candidates, faqs, coverage).ranking;
    };
    for (const auto& [name, scorer] : scorers) {
        const StudentScorer* s = &scorer;
        rankers[name] = [&, s](const Query& q, const std::vector<std::string>& candidates) {
            return candidate_sort(s->score_all(q), candidates, q, View::student);
        };
    }

    TrustConfig trust = cfg.trust();
    json report = json::object();
    std::vector<std::string> csv;
    csv.push_back("ranker,metric,k,value");
    std::vector<std::string> diagnostics;
    for (const auto& [name, ranker] : rankers) {
        json entry = json::object();

        std::map<std::string, RankedList> full_results;
        for (const auto& q : eval_queries) {
            full_results[q.id] = truncated(ranker(q, pool), max_cutoff(trust.ks));
        }
        MetricSeries acc = accuracy_profile(eval_queries, full_results, trust.ks);
        entry["accuracy"] = series_json(acc);
        for (const auto& [k, v] : acc)
            csv.push_back(name + ",accuracy," + std::to_string(k) + "," + fmt_double(v));

        auto consistency = consistency_profile(eval_queries, pool, ranker, trust);
        entry["consistency"] = series_json(consistency.series);
        entry["consistency_queries"] = consistency.queries;
        for (const auto& [k, v] : consistency.series)
            csv.push_back(name + ",consistency," + std::to_string(k) + "," + fmt_double(v));
        for (const auto& d : consistency.diagnostics)
            diagnostics.push_back(name + ": " + d);

        if (!paraphrase_queries.empty()) {
            auto robustness = robustness_profile(paraphrase_queries, pool, ranker, trust);
            entry["robustness"] = series_json(robustness.series);
            entry["robustness_groups"] = robustness.groups;
            for (const auto& [k, v] : robustness.series)
                csv.push_back(name + ",robustness," + std::to_string(k) + "," + fmt_double(v));
            for (const auto& d : robustness.diagnostics)
                diagnostics.push_back(name + ": " + d);
        }
        report[name] = entry;
    }

    json audit = {
        {"seed", cfg.seed},
        {"cutoffs", trust.ks},
        {"permutations", trust.permutations},
        {"paraphrases", trust.paraphrases},
        {"queries", eval_queries.size()},
        {"rankers", report},
        {"diagnostics", diagnostics},
    };
    write_json(audit, fs::path(cfg.out) / "audit.json");
    write_text(csv, fs::path(cfg.out) / "audit.csv");
}

void cmd_sweep(const PipelineConfig& cfg) {
    cfg.validate();
    auto corpus = load_stage_corpus(cfg);
    auto queries = load_stage_queries(cfg);
    auto eval_queries = load_queries(require_input(cfg.eval_queries, "eval-queries"));
    auto triplets =
        load_triplets(require_artifact(fs::path(cfg.out) / "triplets.jsonl", "mine"));

    auto provider = make_embedder(cfg);
    auto index = StudentIndex::build(corpus, *provider, View::dense_qq);
    auto start = StudentModel::identity(provider);

    const auto& ks = report_cutoffs();
    const std::size_t depth = max_cutoff(ks);

    json rows = json::array();
    std::vector<std::string> csv;
    csv.push_back("alpha,beta,k,accuracy");
    for (double a : cfg.sweep_alphas) {
        for (double b : cfg.sweep_betas) {
            TrainConfig tc = cfg.trainer();
            tc.alpha = a;
            tc.beta = b;
            auto model = train(start, triplets, queries, corpus, tc);
            StudentScorer scorer(index, model);
            std::map<std::string, RankedList> results;
            for (const auto& q : eval_queries) results[q.id] = scorer.rank(q, depth);
            MetricSeries acc = accuracy_profile(eval_queries, results, ks);
            rows.push_back({{"alpha", a}, {"beta", b}, {"accuracy", series_json(acc)}});
            for (const auto& [k, v] : acc) {
                csv.push_back(fmt_double(a) + "," + fmt_double(b) + "," + std::to_string(k) +
                              "," + fmt_double(v));
            }
        }
    }

    json sweep = {{"seed", cfg.seed}, {"cutoffs", ks}, {"rows", rows}};
    write_json(sweep, fs::path(cfg.out) / "sweep.json");
    write_text(csv, fs::path(cfg.out) / "sweep.csv");
}

namespace {

template <typename Fn>
void run_stage(const char* name, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(std::string(name) + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string(name) + ": " + e.what());
    }
}

} // namespace

void cmd_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    run_stage("index", [&] { cmd_index(cfg); });
    run_stage("taxonomy", [&] { cmd_taxonomy(cfg); });
    run_stage("rank", [&] { cmd_rank(cfg); });
    run_stage("teach", [&] { cmd_teach(cfg); });
    run_stage("mine", [&] { cmd_mine(cfg); });
    run_stage("train", [&] { cmd_train(cfg); });
    run_stage("eval", [&] { cmd_eval(cfg); });
}

} // namespace maca
