#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "maca/distill.hpp"
#include "maca/embed.hpp"
#include "maca/error.hpp"
#include "maca/judge.hpp"
#include "maca/pipeline.hpp"
#include "maca/retrieve.hpp"
#include "maca/synth.hpp"
#include "maca/teacher.hpp"
#include "maca/text.hpp"
#include "maca/trust.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Metadata-calibrated FAQ retrieval core";

    py::register_exception<maca::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<maca::DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<maca::NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def("tokenize", &maca::text::tokenize, py::arg("text"), py::arg("drop_stopwords") = true);
    m.def("slugify", &maca::text::slugify, py::arg("text"), py::arg("max_words") = 3);
    m.def(
        "cosine_similarity",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return maca::cosine_similarity(a, b);
        },
        py::arg("a"), py::arg("b"));

    py::class_<maca::MetadataLabel>(m, "MetadataLabel")
        .def(py::init<>())
        .def_readwrite("topic", &maca::MetadataLabel::topic)
        .def_readwrite("sub_topic", &maca::MetadataLabel::sub_topic)
        .def_readwrite("intent", &maca::MetadataLabel::intent)
        .def_readwrite("entities", &maca::MetadataLabel::entities);

    py::class_<maca::FaqItem>(m, "FaqItem")
        .def(py::init<>())
        .def_readwrite("id", &maca::FaqItem::id)
        .def_readwrite("question", &maca::FaqItem::question)
        .def_readwrite("answer", &maca::FaqItem::answer)
        .def_readwrite("meta", &maca::FaqItem::meta);

    py::class_<maca::Query>(m, "Query")
        .def(py::init<>())
        .def_readwrite("id", &maca::Query::id)
        .def_readwrite("text", &maca::Query::text)
        .def_readwrite("meta", &maca::Query::meta)
        .def_readwrite("paraphrase_group", &maca::Query::paraphrase_group)
        .def_readwrite("gold_faq_ids", &maca::Query::gold_faq_ids);

    py::class_<maca::RankedEntry>(m, "RankedEntry")
        .def(py::init<>())
        .def_readwrite("doc_id", &maca::RankedEntry::doc_id)
        .def_readwrite("score", &maca::RankedEntry::score);

    py::class_<maca::RankedList>(m, "RankedList")
        .def(py::init<>())
        .def_readwrite("query_id", &maca::RankedList::query_id)
        .def_readwrite("entries", &maca::RankedList::entries);

    py::class_<maca::HashingEmbedder>(m, "HashingEmbedder")
        .def(py::init<std::size_t, std::uint64_t>(), py::arg("dimension") = 256,
             py::arg("seed") = 42)
        .def("dimension", &maca::HashingEmbedder::dimension)
        .def("embed", &maca::HashingEmbedder::embed, py::arg("text"))
        .def("name", &maca::HashingEmbedder::name);

    py::class_<maca::Bm25Index>(m, "Bm25Index")
        .def_static("build", &maca::Bm25Index::build, py::arg("docs"), py::arg("k1") = 1.2,
                    py::arg("b") = 0.75)
        .def("query", &maca::Bm25Index::query, py::arg("query_text"), py::arg("top_k"),
             py::arg("query_id") = "")
        .def("score_doc", &maca::Bm25Index::score_doc, py::arg("query_text"),
             py::arg("doc_id"))
        .def("doc_count", &maca::Bm25Index::doc_count);

    m.def("rrf_fuse", &maca::rrf_fuse, py::arg("lists"), py::arg("k_rrf") = 60.0,
          py::arg("top_k") = 10);

    py::class_<maca::TeacherJudgment>(m, "TeacherJudgment")
        .def_readonly("faq_id", &maca::TeacherJudgment::faq_id)
        .def_property_readonly(
            "label", [](const maca::TeacherJudgment& j) { return maca::grade_name(j.label); })
        .def_readonly("relevance_score", &maca::TeacherJudgment::relevance_score)
        .def_readonly("top_matching_entity", &maca::TeacherJudgment::top_matching_entity);

    m.def(
        "judge_candidate",
        [](const maca::MetadataLabel& query_meta, const std::string& query_text,
           const maca::FaqItem& faq) {
            maca::LexicalCoverage coverage;
            return maca::judge_candidate(query_meta, query_text, faq, coverage);
        },
        py::arg("query_meta"), py::arg("query_text"), py::arg("faq"));

    m.def(
        "calibrated_margin",
        [](double pos, double neg, double gamma, double m_max) {
            maca::JudgeConfig cfg;
            cfg.gamma = gamma;
            cfg.m_max = m_max;
            return maca::calibrated_margin(pos, neg, cfg);
        },
        py::arg("teacher_pos"), py::arg("teacher_neg"), py::arg("gamma") = 0.2,
        py::arg("m_max") = 1.0);

    m.def("gen_paraphrases", &maca::gen_paraphrases, py::arg("query"), py::arg("m"),
          py::arg("seed"));

    py::class_<maca::SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("n_topics", &maca::SynthConfig::n_topics)
        .def_readwrite("n_confusable_pairs", &maca::SynthConfig::n_confusable_pairs)
        .def_readwrite("train_queries_per_faq", &maca::SynthConfig::train_queries_per_faq)
        .def_readwrite("tilted_eval_fraction", &maca::SynthConfig::tilted_eval_fraction)
        .def_readwrite("paraphrases_per_eval", &maca::SynthConfig::paraphrases_per_eval)
        .def_readwrite("seed", &maca::SynthConfig::seed);

    m.def(
        "synth",
        [](const maca::SynthConfig& cfg, const std::filesystem::path& out_dir) {
            maca::save_synth(maca::make_synth(cfg), out_dir);
        },
        py::arg("config"), py::arg("out_dir"));

    py::class_<maca::PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("corpus", &maca::PipelineConfig::corpus)
        .def_readwrite("queries", &maca::PipelineConfig::queries)
        .def_readwrite("eval_queries", &maca::PipelineConfig::eval_queries)
        .def_readwrite("paraphrases", &maca::PipelineConfig::paraphrases)
        .def_readwrite("lexicon", &maca::PipelineConfig::lexicon)
        .def_readwrite("out", &maca::PipelineConfig::out)
        .def_readwrite("dim", &maca::PipelineConfig::dim)
        .def_readwrite("embed_seed", &maca::PipelineConfig::embed_seed)
        .def_readwrite("bm25_k1", &maca::PipelineConfig::bm25_k1)
        .def_readwrite("bm25_b", &maca::PipelineConfig::bm25_b)
        .def_readwrite("view_top_k", &maca::PipelineConfig::view_top_k)
        .def_readwrite("fused_k", &maca::PipelineConfig::fused_k)
        .def_readwrite("k_rrf", &maca::PipelineConfig::k_rrf)
        .def_readwrite("fuse_bm25", &maca::PipelineConfig::fuse_bm25)
        .def_readwrite("min_support", &maca::PipelineConfig::min_support)
        .def_readwrite("merge_threshold", &maca::PipelineConfig::merge_threshold)
        .def_readwrite("gamma", &maca::PipelineConfig::gamma)
        .def_readwrite("m_max", &maca::PipelineConfig::m_max)
        .def_readwrite("k_t", &maca::PipelineConfig::k_t)
        .def_readwrite("k_s", &maca::PipelineConfig::k_s)
        .def_readwrite("alpha", &maca::PipelineConfig::alpha)
        .def_readwrite("beta", &maca::PipelineConfig::beta)
        .def_readwrite("sigma", &maca::PipelineConfig::sigma)
        .def_readwrite("lr", &maca::PipelineConfig::lr)
        .def_readwrite("epochs", &maca::PipelineConfig::epochs)
        .def_readwrite("batch_size", &maca::PipelineConfig::batch_size)
        .def_readwrite("warmup", &maca::PipelineConfig::warmup)
        .def_readwrite("ks", &maca::PipelineConfig::ks)
        .def_readwrite("p_q", &maca::PipelineConfig::p_q)
        .def_readwrite("m_q", &maca::PipelineConfig::m_q)
        .def_readwrite("sweep_alphas", &maca::PipelineConfig::sweep_alphas)
        .def_readwrite("sweep_betas", &maca::PipelineConfig::sweep_betas)
        .def_readwrite("jobs", &maca::PipelineConfig::jobs)
        .def_readwrite("seed", &maca::PipelineConfig::seed);

    m.def("cmd_index", &maca::cmd_index, py::arg("config"));
    m.def("cmd_taxonomy", &maca::cmd_taxonomy, py::arg("config"));
    m.def("cmd_rank", &maca::cmd_rank, py::arg("config"));
    m.def("cmd_teach", &maca::cmd_teach, py::arg("config"));
    m.def("cmd_mine", &maca::cmd_mine, py::arg("config"));
    m.def("cmd_train", &maca::cmd_train, py::arg("config"));
    m.def("cmd_eval", &maca::cmd_eval, py::arg("config"));
    m.def("cmd_audit", &maca::cmd_audit, py::arg("config"));
    m.def("cmd_sweep", &maca::cmd_sweep, py::arg("config"));
    m.def("cmd_pipeline", &maca::cmd_pipeline, py::arg("config"));
}
