#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maca/error.hpp"
#include "maca/pipeline.hpp"
#include "maca/synth.hpp"

namespace {

std::vector<std::size_t> parse_size_list(const std::string& raw, const std::string& flag) {
    std::vector<std::size_t> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        try {
            out.push_back(static_cast<std::size_t>(std::stoull(cur)));
        } catch (const std::exception&) {
            throw maca::ConfigError(flag + ": '" + cur + "' is not a non-negative integer");
        }
        cur.clear();
    };
    for (char c : raw) {
        if (c == ',' || c == ' ') {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    if (out.empty()) throw maca::ConfigError(flag + ": empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& raw, const std::string& flag) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        try {
            std::size_t used = 0;
            double v = std::stod(cur, &used);
            if (used != cur.size()) throw std::invalid_argument(cur);
            out.push_back(v);
        } catch (const std::exception&) {
            throw maca::ConfigError(flag + ": '" + cur + "' is not a number");
        }
        cur.clear();
    };
    for (char c : raw) {
        if (c == ',' || c == ' ') {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    if (out.empty()) throw maca::ConfigError(flag + ": empty list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    maca::PipelineConfig cfg;
    maca::SynthConfig synth_cfg;
    std::string ks_raw, sweep_alphas_raw, sweep_betas_raw;

    CLI::App app{"Metadata-calibrated FAQ retrieval: taxonomy induction, hybrid retrieval, "
                 "teacher-guided triplet mining, adapter distillation and trust audits"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; command-line flags win");

    app.add_option("--corpus", cfg.corpus, "FAQ corpus (JSONL)");
    app.add_option("--queries", cfg.queries, "training queries (JSONL)");
    app.add_option("--eval-queries", cfg.eval_queries, "gold-labeled held-out queries (JSONL)");
    app.add_option("--paraphrases", cfg.paraphrases, "paraphrase groups for robustness (JSONL)");
    app.add_option("--lexicon", cfg.lexicon, "annotation rules (TSV)");
    app.add_option("--out", cfg.out, "artifact directory");

    app.add_option("--dim", cfg.dim, "embedding dimension");
    app.add_option("--embed-seed", cfg.embed_seed, "feature-hashing seed");

    app.add_option("--bm25-k1", cfg.bm25_k1, "BM25 k1");
    app.add_option("--bm25-b", cfg.bm25_b, "BM25 b");
    app.add_option("--view-top-k", cfg.view_top_k, "per-view retrieval depth");
    app.add_option("--fused-k", cfg.fused_k, "fused candidate count");
    app.add_option("--k-rrf", cfg.k_rrf, "reciprocal rank fusion constant");
    app.add_flag("--fuse-bm25", cfg.fuse_bm25, "include the lexical view in fusion");

    app.add_option("--min-support", cfg.min_support, "taxonomy tuple support floor");
    app.add_option("--merge-threshold", cfg.merge_threshold,
                   "slug merge distance threshold in [0, 1)");

    app.add_option("--gamma", cfg.gamma, "teacher score floor for negatives");
    app.add_option("--m-max", cfg.m_max, "margin clip");
    app.add_option("--k-t", cfg.k_t, "teacher judgment depth");
    app.add_option("--k-s", cfg.k_s, "student candidate depth");

    app.add_option("--alpha", cfg.alpha, "ranking loss weight");
    app.add_option("--beta", cfg.beta, "margin alignment loss weight");
    app.add_option("--sigma", cfg.sigma, "softmax similarity scale");
    app.add_option("--lr", cfg.lr, "learning rate");
    app.add_option("--epochs", cfg.epochs, "training epochs");
    app.add_option("--batch-size", cfg.batch_size, "training batch size");
    app.add_option("--warmup", cfg.warmup, "linear warmup fraction of total steps");

    app.add_option("--ks", ks_raw, "audit cutoffs, comma separated (default 1,3,5,10,15)");
    app.add_option("--p-q", cfg.p_q, "candidate-order trials per query");
    app.add_option("--m-q", cfg.m_q, "paraphrase variants per group");

    app.add_option("--sweep-alphas", sweep_alphas_raw, "alpha grid, comma separated");
    app.add_option("--sweep-betas", sweep_betas_raw, "beta grid, comma separated");

    app.add_option("--jobs", cfg.jobs, "worker cap for within-stage parallelism");
    app.add_option("--seed", cfg.seed, "top-level seed recorded in artifacts");

    auto* synth = app.add_subcommand("synth", "generate a confusable-pair FAQ benchmark");
    synth->add_option("--n-topics", synth_cfg.n_topics, "topic count (1-8)");
    synth->add_option("--pairs", synth_cfg.n_confusable_pairs, "confusable pair count (1-50)");
    synth->add_option("--train-per-faq", synth_cfg.train_queries_per_faq,
                      "training queries per FAQ (1-3)");
    synth->add_option("--tilted-fraction", synth_cfg.tilted_eval_fraction,
                      "share of eval queries worded for the sibling channel");
    synth->add_option("--paraphrases-per-eval", synth_cfg.paraphrases_per_eval,
                      "generated variants per eval query");
    synth->add_option("--synth-seed", synth_cfg.seed, "generator seed");

    auto* index = app.add_subcommand("index", "build lexical and dense indexes");
    auto* taxonomy = app.add_subcommand("taxonomy", "induce and refine the metadata taxonomy");
    auto* rank = app.add_subcommand("rank", "run per-view retrieval and fusion");
    auto* teach = app.add_subcommand("teach", "re-rank fused candidates with the teacher");
    auto* mine = app.add_subcommand("mine", "mine calibrated training triplets");
    auto* train = app.add_subcommand("train", "distill ranking-only and full-objective adapters");
    auto* eval = app.add_subcommand("eval", "score models on held-out queries");
    auto* audit = app.add_subcommand("audit", "accuracy, consistency and robustness audit");
    auto* sweep = app.add_subcommand("sweep", "alpha/beta grid over the mined triplets");
    auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");
    for (CLI::App* sub : {synth, index, taxonomy, rank, teach, mine, train, eval, audit, sweep,
                          pipeline}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!ks_raw.empty()) cfg.ks = parse_size_list(ks_raw, "--ks");
        if (!sweep_alphas_raw.empty())
            cfg.sweep_alphas = parse_double_list(sweep_alphas_raw, "--sweep-alphas");
        if (!sweep_betas_raw.empty())
            cfg.sweep_betas = parse_double_list(sweep_betas_raw, "--sweep-betas");

        if (synth->parsed()) {
            maca::save_synth(maca::make_synth(synth_cfg), cfg.out);
        } else if (index->parsed()) {
            maca::cmd_index(cfg);
        } else if (taxonomy->parsed()) {
            maca::cmd_taxonomy(cfg);
        } else if (rank->parsed()) {
            maca::cmd_rank(cfg);
        } else if (teach->parsed()) {
            maca::cmd_teach(cfg);
        } else if (mine->parsed()) {
            maca::cmd_mine(cfg);
        } else if (train->parsed()) {
            maca::cmd_train(cfg);
        } else if (eval->parsed()) {
            maca::cmd_eval(cfg);
        } else if (audit->parsed()) {
            maca::cmd_audit(cfg);
        } else if (sweep->parsed()) {
            maca::cmd_sweep(cfg);
        } else if (pipeline->parsed()) {
            maca::cmd_pipeline(cfg);
        }
    } catch (const maca::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const maca::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const maca::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
