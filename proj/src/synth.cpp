#include "maca/synth.hpp"

#include <array>
#include <fstream>

#include "maca/error.hpp"
#include "maca/text.hpp"
#include "maca/trust.hpp"

namespace maca {

namespace {

const std::array<std::string, 10> kVerbs = {"activate", "close",   "dispute", "increase",
                                            "freeze",   "replace", "track",   "update",
                                            "cancel",   "verify"};

const std::array<std::string, 10> kNouns = {"card",    "account",   "loan",    "transfer",
                                            "statement", "payment", "deposit", "alert",
                                            "pin",     "limit"};

const std::array<std::pair<std::string, std::string>, 10> kEntityPairs = {{
    {"debit", "credit"},
    {"checking", "savings"},
    {"domestic", "international"},
    {"personal", "business"},
    {"physical", "virtual"},
    {"primary", "joint"},
    {"prepaid", "secured"},
    {"platinum", "gold"},
    {"student", "senior"},
    {"wire", "ach"},
}};

const std::array<std::string, 50> kFillers = {
    "rewards", "everyday", "premier", "essential", "advantage", "select", "preferred",
    "signature", "classic", "custom", "plus", "prime", "core", "flex", "smart",
    "secure", "rapid", "direct", "extra", "total", "ultra", "max", "go", "one",
    "pro", "elite", "edge", "boost", "easy", "swift", "bright", "clear", "solid",
    "true", "keen", "bold", "calm", "wise", "fair", "pure", "vivid", "crisp",
    "fresh", "grand", "noble", "regal", "royal", "sharp", "sleek", "stout"};

const std::array<std::string, 8> kTopics = {"cards", "accounts", "loans", "transfers",
                                            "payments", "security", "fees", "statements"};

const std::array<std::string, 4> kIntents = {"how_to", "troubleshooting", "policy_limit",
                                             "eligibility"};

std::string pad3(std::size_t n) {
    std::string s = std::to_string(n);
    while (s.size() < 3) s.insert(s.begin(), '0');
    return s;
}

struct PairSpec {
    std::string verb, noun, filler, topic, sub, intent;
    std::array<std::string, 2> ents;
};

PairSpec pair_spec(std::size_t p, std::size_t n_topics) {
    PairSpec spec;
    spec.verb = kVerbs[p % kVerbs.size()];
    spec.noun = kNouns[(p / kVerbs.size()) % kNouns.size()];
    spec.filler = kFillers[p % kFillers.size()];
    spec.topic = kTopics[p % n_topics];
    spec.sub = spec.verb + "_" + spec.noun;
    spec.intent = kIntents[p % kIntents.size()];
    spec.ents = {kEntityPairs[p % kEntityPairs.size()].first,
                 kEntityPairs[p % kEntityPairs.size()].second};
    return spec;
}

// Channel wording per side; every answer names both channels so answers of a
// pair differ only in the entity word.
const std::array<std::string, 2> kChannelPhrase = {"at the branch with a teller",
                                                   "online in the app"};

} // namespace

void SynthConfig::validate() const {
    if (n_topics < 1 || n_topics > kTopics.size())
        throw ConfigError("n_topics must be between 1 and " + std::to_string(kTopics.size()));
    if (n_confusable_pairs < 1 || n_confusable_pairs > kFillers.size())
        throw ConfigError("n_confusable_pairs must be between 1 and " +
                          std::to_string(kFillers.size()));
    if (train_queries_per_faq < 1 || train_queries_per_faq > 3)
        throw ConfigError("train_queries_per_faq must be between 1 and 3");
    if (tilted_eval_fraction < 0.0 || tilted_eval_fraction > 1.0)
        throw ConfigError("tilted_eval_fraction must be in [0, 1]");
    if (paraphrases_per_eval < 1) throw ConfigError("paraphrases_per_eval must be >= 1");
}

SynthData make_synth(const SynthConfig& cfg) {
    cfg.validate();
    SynthData data;
    text::Rng tilt_rng(cfg.seed);

    for (std::size_t p = 0; p < cfg.n_confusable_pairs; ++p) {
        const PairSpec spec = pair_spec(p, cfg.n_topics);
        for (std::size_t side = 0; side < 2; ++side) {
            const std::string& ent = spec.ents[side];
            const std::string& own = kChannelPhrase[side];
            const std::string& other = kChannelPhrase[1 - side];
            const std::string core = spec.verb + " my " + ent + " " + spec.noun + " " +
                                     spec.filler;

            FaqItem faq;
            faq.id = "faq-" + pad3(p) + (side == 0 ? "-a" : "-b");
            faq.question = "how do i " + core + " " + own;
            faq.answer = "you can " + spec.verb + " your " + ent + " " + spec.noun + " " +
                         spec.filler + " " + own + " or " + other;
            faq.meta.topic = spec.topic;
            faq.meta.sub_topic = spec.sub;
            faq.meta.intent = spec.intent;
            faq.meta.entities = {ent, spec.noun};

            MetadataLabel query_meta;
            query_meta.topic = spec.topic;
            query_meta.sub_topic = spec.sub;
            query_meta.intent = spec.intent;
            query_meta.entities = {ent};

            const std::string qbase = "tq-" + pad3(p) + (side == 0 ? "-a" : "-b");
            const std::array<std::string, 3> train_texts = {
                "how do i " + core,
                "can i " + core + " " + own,
                "how do i " + core + " " + other,
            };
            for (std::size_t j = 0; j < cfg.train_queries_per_faq; ++j) {
                Query q;
                q.id = qbase + "-" + std::to_string(j + 1);
                q.text = train_texts[j];
                q.meta = query_meta;
                data.train_queries.push_back(std::move(q));
            }

            Query eq;
            eq.id = "eq-" + pad3(p) + (side == 0 ? "-a" : "-b");
            bool tilted = tilt_rng.uniform01() < cfg.tilted_eval_fraction;
            eq.text = tilted ? "i need to " + spec.verb + " the " + ent + " " + spec.noun +
                                   " " + spec.filler + " right away " + other
                             : "how do i " + spec.verb + " the " + ent + " " + spec.noun +
                                   " " + spec.filler + " today";
            eq.meta = query_meta;
            eq.gold_faq_ids = {faq.id};
            data.eval_queries.push_back(eq);

            Query base = eq;
            base.paraphrase_group = eq.id;
            data.paraphrases.push_back(base);
            for (auto& v : gen_paraphrases(eq, cfg.paraphrases_per_eval, cfg.seed)) {
                data.paraphrases.push_back(std::move(v));
            }

            data.lexicon_lines.push_back(spec.verb + " " + ent + " " + spec.noun + "\t" +
                                         spec.topic + "\t" + spec.sub + "\t" + spec.intent +
                                         "\t" + ent);
            data.corpus.push_back(std::move(faq));
        }
    }
    return data;
}

void save_synth(const SynthData& data, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    save_corpus(data.corpus, out_dir / "corpus.jsonl");
    save_queries(data.train_queries, out_dir / "train_queries.jsonl");
    save_queries(data.eval_queries, out_dir / "eval_queries.jsonl");
    save_queries(data.paraphrases, out_dir / "paraphrases.jsonl");
    std::ofstream lex(out_dir / "lexicon.txt");
    if (!lex) throw ConfigError("cannot write " + (out_dir / "lexicon.txt").string());
    lex << "# pattern\ttopic\tsub_topic\tintent\tentities\n";
    for (const auto& line : data.lexicon_lines) lex << line << "\n";
}

} // namespace maca
