#include "maca/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "maca/error.hpp"
#include "maca/text.hpp"

using nlohmann::json;

namespace maca {

void MetadataLabel::clamp_entities() {
    while (entities.size() > 5) entities.erase(std::prev(entities.end()));
}

bool Taxonomy::has_sub_topic(const std::string& topic, const std::string& sub) const {
    auto it = sub_topics.find(topic);
    return it != sub_topics.end() && it->second.count(sub) > 0;
}

double entity_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& e : a) inter += b.count(e);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

json parse_line(const std::string& line, const std::filesystem::path& path, std::size_t line_no) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON object");
    }
    return j;
}

std::string require_string(const json& j, const char* key, const std::filesystem::path& path,
                           std::size_t line_no) {
    if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": missing or empty string field '" + key + "'");
    }
    return j[key].get<std::string>();
}

std::set<std::string> read_entity_array(const json& j, const char* key) {
    std::set<std::string> out;
    if (!j.contains(key)) return out;
    for (const auto& e : j[key]) {
        if (e.is_string()) {
            std::string s = e.get<std::string>();
            std::transform(s.begin(), s.end(), s.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (!s.empty()) out.insert(s);
        }
    }
    return out;
}

bool has_meta_keys(const json& j) {
    return j.contains("topic") || j.contains("sub_topic") || j.contains("intent") ||
           j.contains("entities");
}

MetadataLabel read_meta(const json& j) {
    MetadataLabel m;
    if (j.contains("topic") && j["topic"].is_string()) m.topic = text::slugify(j["topic"].get<std::string>());
    if (j.contains("sub_topic") && j["sub_topic"].is_string())
        m.sub_topic = text::slugify(j["sub_topic"].get<std::string>());
    if (j.contains("intent") && j["intent"].is_string())
        m.intent = text::slugify(j["intent"].get<std::string>());
    m.entities = read_entity_array(j, "entities");
    m.clamp_entities();
    return m;
}

void write_meta(json& j, const MetadataLabel& m) {
    j["topic"] = m.topic;
    j["sub_topic"] = m.sub_topic;
    j["intent"] = m.intent;
    j["entities"] = m.entities;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

} // namespace

std::vector<FaqItem> load_corpus(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<FaqItem> items;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = parse_line(line, path, line_no);
        FaqItem item;
        item.id = require_string(j, "id", path, line_no);
        item.question = require_string(j, "question", path, line_no);
        item.answer = require_string(j, "answer", path, line_no);
        item.meta = read_meta(j);
        if (!seen.insert(item.id).second) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate faq id '" + item.id + "'");
        }
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<Query> load_queries(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<Query> queries;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = parse_line(line, path, line_no);
        Query q;
        q.id = require_string(j, "id", path, line_no);
        q.text = require_string(j, "text", path, line_no);
        if (has_meta_keys(j)) q.meta = read_meta(j);
        if (j.contains("paraphrase_group") && j["paraphrase_group"].is_string())
            q.paraphrase_group = j["paraphrase_group"].get<std::string>();
        if (j.contains("gold_faq_ids")) {
            for (const auto& g : j["gold_faq_ids"])
                if (g.is_string()) q.gold_faq_ids.insert(g.get<std::string>());
        }
        if (!seen.insert(q.id).second) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate query id '" + q.id + "'");
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

void save_corpus(const std::vector<FaqItem>& items, const std::filesystem::path& path) {
    auto out = open_output(path);
    for (const auto& item : items) {
        json j;
        j["id"] = item.id;
        j["question"] = item.question;
        j["answer"] = item.answer;
        write_meta(j, item.meta);
        out << j.dump() << "\n";
    }
}

void save_queries(const std::vector<Query>& queries, const std::filesystem::path& path) {
    auto out = open_output(path);
    for (const auto& q : queries) {
        json j;
        j["id"] = q.id;
        j["text"] = q.text;
        if (q.meta) write_meta(j, *q.meta);
        if (!q.paraphrase_group.empty()) j["paraphrase_group"] = q.paraphrase_group;
        if (!q.gold_faq_ids.empty()) j["gold_faq_ids"] = q.gold_faq_ids;
        out << j.dump() << "\n";
    }
}

void save_taxonomy(const Taxonomy& t, const std::filesystem::path& path) {
    json j;
    j["topics"] = t.topics;
    j["sub_topics"] = t.sub_topics;
    j["intents"] = t.intents;
    j["entities"] = t.entities;
    json support = json::array();
    for (const auto& [tuple, count] : t.support) {
        support.push_back({{"topic", tuple[0]},
                           {"sub_topic", tuple[1]},
                           {"intent", tuple[2]},
                           {"count", count}});
    }
    j["support"] = support;
    auto out = open_output(path);
    out << j.dump(2) << "\n";
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
    auto in = open_input(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    Taxonomy t;
    for (const auto& s : j.value("topics", json::array())) t.topics.insert(s.get<std::string>());
    for (const auto& s : j.value("intents", json::array())) t.intents.insert(s.get<std::string>());
    for (const auto& s : j.value("entities", json::array())) t.entities.insert(s.get<std::string>());
    if (j.contains("sub_topics")) {
        for (const auto& [topic, subs] : j["sub_topics"].items()) {
            for (const auto& s : subs) t.sub_topics[topic].insert(s.get<std::string>());
        }
    }
    for (const auto& row : j.value("support", json::array())) {
        TaxonTuple tuple{row.at("topic").get<std::string>(), row.at("sub_topic").get<std::string>(),
                         row.at("intent").get<std::string>()};
        t.support[tuple] = row.at("count").get<int>();
    }
    return t;
}

// ---------------------------------------------------------------------------
// Annotators

LexiconAnnotator LexiconAnnotator::from_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return from_lines(lines, path.string());
}

LexiconAnnotator LexiconAnnotator::from_lines(const std::vector<std::string>& lines,
                                              std::string source) {
    LexiconAnnotator ann;
    ann.source_ = std::move(source);
    std::size_t line_no = 0;
    for (const auto& raw : lines) {
        ++line_no;
        if (raw.empty() || raw[0] == '#' ||
            raw.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ss(raw);
        while (std::getline(ss, field, '\t')) fields.push_back(field);
        if (fields.size() != 5) {
            throw DataError(ann.source_ + ":" + std::to_string(line_no) +
                            ": expected 5 tab-separated fields, got " +
                            std::to_string(fields.size()));
        }
        Rule rule;
        rule.pattern_tokens = text::tokenize(fields[0], /*drop_stopwords=*/false);
        if (rule.pattern_tokens.empty()) {
            throw DataError(ann.source_ + ":" + std::to_string(line_no) + ": empty pattern");
        }
        rule.label.topic = text::slugify(fields[1]);
        rule.label.sub_topic = text::slugify(fields[2]);
        rule.label.intent = text::slugify(fields[3]);
        std::istringstream ents(fields[4]);
        std::string ent;
        while (std::getline(ents, ent, ',')) {
            std::string slug = text::slugify(ent, 1);
            if (slug != "unknown") rule.label.entities.insert(slug);
        }
        rule.label.clamp_entities();
        ann.rules_.push_back(std::move(rule));
    }
    return ann;
}

MetadataLabel LexiconAnnotator::annotate(const std::string& raw_text,
                                         const std::optional<std::string>& topic_hint) const {
    auto tokens = text::tokenize(raw_text, /*drop_stopwords=*/false);
    std::set<std::string> token_set(tokens.begin(), tokens.end());
    auto matches = [&](const Rule& rule) {
        return std::all_of(rule.pattern_tokens.begin(), rule.pattern_tokens.end(),
                           [&](const std::string& t) { return token_set.count(t) > 0; });
    };
    if (topic_hint) {
        for (const auto& rule : rules_) {
            if (rule.label.topic == *topic_hint && matches(rule)) return rule.label;
        }
    }
    for (const auto& rule : rules_) {
        if (matches(rule)) return rule.label;
    }
    throw DataError("no lexicon rule matched: \"" + raw_text + "\"");
}

void PresetAnnotator::add(const std::string& text, const MetadataLabel& label) {
    by_text_[text] = label;
}

MetadataLabel PresetAnnotator::annotate(const std::string& text,
                                        const std::optional<std::string>&) const {
    auto it = by_text_.find(text);
    if (it == by_text_.end()) throw DataError("no preset label for: \"" + text + "\"");
    return it->second;
}

// ---------------------------------------------------------------------------
// Taxonomy induction

namespace {

// Greedy merge ordered by (support desc, slug asc); survivors end up pairwise
// farther apart than the threshold. "unknown" never participates.
std::map<std::string, std::string> build_merge_map(const std::map<std::string, int>& support,
                                                   double threshold) {
    std::vector<std::pair<std::string, int>> slugs(support.begin(), support.end());
    std::sort(slugs.begin(), slugs.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::map<std::string, std::string> remap;
    std::vector<std::string> survivors;
    for (const auto& [slug, count] : slugs) {
        (void)count;
        if (slug == "unknown") continue;
        bool merged = false;
        for (const auto& survivor : survivors) {
            if (text::normalized_edit_distance(slug, survivor) <= threshold) {
                remap[slug] = survivor;
                merged = true;
                break;
            }
        }
        if (!merged) survivors.push_back(slug);
    }
    return remap;
}

struct LabeledItem {
    MetadataLabel* label;
    std::string id;
};

void apply_remap(MetadataLabel& label, const std::map<std::string, std::string>& topics,
                 const std::map<std::string, std::string>& subs,
                 const std::map<std::string, std::string>& intents) {
    if (auto it = topics.find(label.topic); it != topics.end()) label.topic = it->second;
    if (auto it = subs.find(label.sub_topic); it != subs.end()) label.sub_topic = it->second;
    if (auto it = intents.find(label.intent); it != intents.end()) label.intent = it->second;
}

double tuple_distance(const TaxonTuple& a, const TaxonTuple& b) {
    return text::normalized_edit_distance(a[0], b[0]) +
           text::normalized_edit_distance(a[1], b[1]) +
           text::normalized_edit_distance(a[2], b[2]);
}

} // namespace

InduceResult induce_taxonomy(const std::vector<Query>& queries, const std::vector<FaqItem>& faqs,
                             const AnnotatorClient& annotator, int min_support,
                             double merge_threshold) {
    if (min_support < 1) throw ConfigError("min_support must be >= 1");
    if (merge_threshold < 0.0 || merge_threshold >= 1.0)
        throw ConfigError("merge_threshold must be in [0, 1)");

    InduceResult res;
    res.queries = queries;
    res.faqs = faqs;

    // Pass 1: query topics.
    std::vector<std::string> query_topics(res.queries.size(), "unknown");
    for (std::size_t i = 0; i < res.queries.size(); ++i) {
        try {
            query_topics[i] = annotator.annotate(res.queries[i].text).topic;
        } catch (const Error& e) {
            res.diagnostics.push_back("query " + res.queries[i].id + ": topic pass failed (" +
                                      e.what() + ")");
        }
    }

    // Pass 2: sub-topic, intent and entities conditioned on the topic.
    for (std::size_t i = 0; i < res.queries.size(); ++i) {
        MetadataLabel label;
        label.topic = query_topics[i];
        if (label.topic != "unknown") {
            try {
                MetadataLabel full = annotator.annotate(res.queries[i].text, label.topic);
                label.sub_topic = full.sub_topic;
                label.intent = full.intent;
                label.entities = full.entities;
            } catch (const Error& e) {
                res.diagnostics.push_back("query " + res.queries[i].id +
                                          ": refinement pass failed (" + e.what() + ")");
            }
        }
        label.clamp_entities();
        res.queries[i].meta = label;
    }

    // FAQ pass; FAQ tuples extend the taxonomy support like query tuples.
    for (auto& faq : res.faqs) {
        MetadataLabel label;
        try {
            label = annotator.annotate(faq.question + " " + faq.answer);
        } catch (const Error& e) {
            res.diagnostics.push_back("faq " + faq.id + ": labeling failed (" + e.what() + ")");
        }
        label.clamp_entities();
        faq.meta = label;
    }

    // Refinement operates on all labeled items at once.
    std::vector<LabeledItem> items;
    for (auto& q : res.queries) items.push_back({&*q.meta, q.id});
    for (auto& f : res.faqs) items.push_back({&f.meta, f.id});

    std::map<std::string, int> topic_support, sub_support, intent_support;
    for (const auto& item : items) {
        topic_support[item.label->topic]++;
        sub_support[item.label->sub_topic]++;
        intent_support[item.label->intent]++;
    }
    auto topic_map = build_merge_map(topic_support, merge_threshold);
    auto sub_map = build_merge_map(sub_support, merge_threshold);
    auto intent_map = build_merge_map(intent_support, merge_threshold);
    for (auto& item : items) apply_remap(*item.label, topic_map, sub_map, intent_map);
    for (const auto& [from, to] : topic_map)
        res.diagnostics.push_back("merged topic '" + from + "' into '" + to + "'");
    for (const auto& [from, to] : sub_map)
        res.diagnostics.push_back("merged sub_topic '" + from + "' into '" + to + "'");
    for (const auto& [from, to] : intent_map)
        res.diagnostics.push_back("merged intent '" + from + "' into '" + to + "'");

    // Prune tuples under min_support, relabeling affected items to the
    // nearest surviving tuple.
    std::map<TaxonTuple, int> tuple_support;
    for (const auto& item : items)
        tuple_support[{item.label->topic, item.label->sub_topic, item.label->intent}]++;
    std::vector<TaxonTuple> survivors;
    for (const auto& [tuple, count] : tuple_support)
        if (count >= min_support) survivors.push_back(tuple);

    const TaxonTuple all_unknown{"unknown", "unknown", "unknown"};
    for (auto& item : items) {
        TaxonTuple tuple{item.label->topic, item.label->sub_topic, item.label->intent};
        if (tuple_support[tuple] >= min_support) continue;
        TaxonTuple best = all_unknown;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const auto& cand : survivors) {
            double d = tuple_distance(tuple, cand);
            if (d < best_dist || (d == best_dist && cand < best)) {
                best = cand;
                best_dist = d;
            }
        }
        res.diagnostics.push_back("item " + item.id + ": tuple (" + tuple[0] + ", " + tuple[1] +
                                  ", " + tuple[2] + ") below min_support, relabeled to (" +
                                  best[0] + ", " + best[1] + ", " + best[2] + ")");
        item.label->topic = best[0];
        item.label->sub_topic = best[1];
        item.label->intent = best[2];
    }

    // Rebuild the taxonomy from the final labels.
    std::set<std::string> topics_seen_in_queries;
    for (const auto& q : res.queries) topics_seen_in_queries.insert(q.meta->topic);
    for (const auto& item : items) {
        const auto& m = *item.label;
        res.taxonomy.topics.insert(m.topic);
        res.taxonomy.sub_topics[m.topic].insert(m.sub_topic);
        res.taxonomy.intents.insert(m.intent);
        for (const auto& e : m.entities) res.taxonomy.entities.insert(e);
        res.taxonomy.support[{m.topic, m.sub_topic, m.intent}]++;
    }
    for (const auto& f : res.faqs) {
        if (!topics_seen_in_queries.count(f.meta.topic)) {
            res.diagnostics.push_back("faq " + f.id + ": topic '" + f.meta.topic +
                                      "' never produced by the query pass");
        }
    }
    return res;
}

} // namespace maca
