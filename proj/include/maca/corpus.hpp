#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace maca {

/// Structured metadata attached to FAQ items and queries. Slugs are
/// lowercase underscore-joined words; "unknown" marks absent evidence.
/// At most 5 entities are kept (lexicographically smallest win).
struct MetadataLabel {
    std::string topic = "unknown";
    std::string sub_topic = "unknown";
    std::string intent = "unknown";
    std::set<std::string> entities;

    void clamp_entities();
    bool operator==(const MetadataLabel&) const = default;
};

struct FaqItem {
    std::string id;
    std::string question;
    std::string answer;
    MetadataLabel meta;
};

struct Query {
    std::string id;
    std::string text;
    std::optional<MetadataLabel> meta;
    std::string paraphrase_group;         // empty = not part of a group
    std::set<std::string> gold_faq_ids;   // empty = no gold labels
};

/// (topic, sub_topic, intent) support tuple.
using TaxonTuple = std::array<std::string, 3>;

struct Taxonomy {
    std::set<std::string> topics;
    std::map<std::string, std::set<std::string>> sub_topics; // keyed by topic
    std::set<std::string> intents;
    std::set<std::string> entities;
    std::map<TaxonTuple, int> support;

    bool has_sub_topic(const std::string& topic, const std::string& sub) const;
};

/// |a ∩ b| / |a ∪ b|; defined as 0 when both sets are empty.
double entity_jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Metadata annotation backend. annotate() throws DataError when it cannot
/// label the text; callers decide how to degrade.
class AnnotatorClient {
  public:
    virtual ~AnnotatorClient() = default;
    virtual MetadataLabel annotate(const std::string& text,
                                   const std::optional<std::string>& topic_hint = std::nullopt) const = 0;
    virtual std::string name() const = 0;
};

/// Rule-based annotator over a TSV lexicon:
///   pattern<TAB>topic<TAB>sub_topic<TAB>intent<TAB>entity1,entity2
/// A rule matches when every pattern token occurs in the text (stopwords
/// kept). First matching rule in file order wins; a topic hint restricts
/// the scan to rules of that topic first, then falls back to all rules.
class LexiconAnnotator final : public AnnotatorClient {
  public:
    static LexiconAnnotator from_file(const std::filesystem::path& path);
    static LexiconAnnotator from_lines(const std::vector<std::string>& lines,
                                       std::string source = "<memory>");

    MetadataLabel annotate(const std::string& text,
                           const std::optional<std::string>& topic_hint) const override;
    std::string name() const override { return "lexicon(" + source_ + ")"; }
    std::size_t rule_count() const { return rules_.size(); }

  private:
    struct Rule {
        std::vector<std::string> pattern_tokens;
        MetadataLabel label;
    };
    std::vector<Rule> rules_;
    std::string source_;
};

/// Annotator backed by labels already present on the input items, keyed by
/// exact text. Lets taxonomy induction run on pre-labeled corpora without a
/// lexicon. Unseen text is an annotation failure.
class PresetAnnotator final : public AnnotatorClient {
  public:
    PresetAnnotator() = default;
    void add(const std::string& text, const MetadataLabel& label);

    MetadataLabel annotate(const std::string& text,
                           const std::optional<std::string>& topic_hint) const override;
    std::string name() const override { return "preset"; }

  private:
    std::map<std::string, MetadataLabel> by_text_;
};

std::vector<FaqItem> load_corpus(const std::filesystem::path& path);
std::vector<Query> load_queries(const std::filesystem::path& path);
void save_corpus(const std::vector<FaqItem>& items, const std::filesystem::path& path);
void save_queries(const std::vector<Query>& queries, const std::filesystem::path& path);

void save_taxonomy(const Taxonomy& t, const std::filesystem::path& path);
Taxonomy load_taxonomy(const std::filesystem::path& path);

struct InduceResult {
    Taxonomy taxonomy;
    std::vector<Query> queries;  // same order as input, labels filled in
    std::vector<FaqItem> faqs;   // same order as input, labels filled in
    std::vector<std::string> diagnostics;
};

/// Two-pass taxonomy induction over queries (topics first, then sub-topic /
/// intent / entities conditioned on the topic), followed by FAQ labeling and
/// refinement: near-duplicate slugs are merged (normalized edit distance <=
/// merge_threshold, higher support wins) and tuples below min_support are
/// pruned with affected items relabeled to the nearest surviving tuple.
/// The returned taxonomy is rebuilt from the final labels, so every slug
/// referenced by a labeled item exists and all support counts are >= 1.
InduceResult induce_taxonomy(const std::vector<Query>& queries,
                             const std::vector<FaqItem>& faqs,
                             const AnnotatorClient& annotator,
                             int min_support = 2,
                             double merge_threshold = 0.2);

} // namespace maca
