#include "maca/trust.hpp"

#include <algorithm>
#include <set>

#include "maca/error.hpp"
#include "maca/text.hpp"

namespace maca {

namespace {

// Canonical token for a top-k outcome: sorted ids joined by an unprintable
// separator so distinct sets can never collide.
std::string outcome_token(const RankedList& list, std::size_t k) {
    std::set<std::string> ids;
    for (std::size_t i = 0; i < list.entries.size() && i < k; ++i) {
        ids.insert(list.entries[i].doc_id);
    }
    std::string token;
    for (const auto& id : ids) {
        token += id;
        token += '\x1f';
    }
    return token;
}

double modal_share(const std::vector<std::string>& tokens) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : tokens) ++counts[t];
    std::size_t best = 0;
    for (const auto& [token, count] : counts) best = std::max(best, count);
    return static_cast<double>(best) / static_cast<double>(tokens.size());
}

// n! capped so it never overflows; anything above the cap behaves as "huge".
std::size_t factorial_capped(std::size_t n, std::size_t cap) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (f >= cap) return cap;
        f *= i;
    }
    return std::min(f, cap);
}

} // namespace

void TrustConfig::validate() const {
    if (ks.empty()) throw ConfigError("audit needs at least one cutoff k");
    for (std::size_t k : ks) {
        if (k == 0) throw ConfigError("cutoff k must be >= 1");
    }
    if (permutations == 0) throw ConfigError("permutations must be >= 1");
    if (paraphrases == 0) throw ConfigError("paraphrases must be >= 1");
}

double accuracy_at_k(const std::vector<Query>& queries,
                     const std::map<std::string, RankedList>& results, std::size_t k) {
    if (k == 0) throw ConfigError("cutoff k must be >= 1");
    std::size_t gold_queries = 0, hits = 0;
    for (const auto& q : queries) {
        if (q.gold_faq_ids.empty()) continue;
        ++gold_queries;
        auto it = results.find(q.id);
        if (it == results.end()) throw DataError("no ranked results for query '" + q.id + "'");
        const auto& entries = it->second.entries;
        bool hit = false;
        for (std::size_t i = 0; i < entries.size() && i < k; ++i) {
            if (q.gold_faq_ids.count(entries[i].doc_id)) {
                hit = true;
                break;
            }
        }
        if (hit) ++hits;
    }
    if (gold_queries == 0) throw DataError("no queries carry gold labels");
    return static_cast<double>(hits) / static_cast<double>(gold_queries);
}

MetricSeries accuracy_profile(const std::vector<Query>& queries,
                              const std::map<std::string, RankedList>& results,
                              const std::vector<std::size_t>& ks) {
    MetricSeries series;
    for (std::size_t k : ks) series[k] = accuracy_at_k(queries, results, k);
    return series;
}

ConsistencyResult consistency_profile(const std::vector<Query>& queries,
                                      const std::vector<std::string>& pool,
                                      const RankerFn& ranker, const TrustConfig& cfg) {
    cfg.validate();
    if (queries.empty()) throw DataError("no queries to audit");

    ConsistencyResult out;
    std::map<std::size_t, double> sums;
    for (std::size_t k : cfg.ks) sums[k] = 0.0;

    const std::size_t target =
        std::min(cfg.permutations, factorial_capped(pool.size(), cfg.permutations));

    for (const auto& q : queries) {
        text::Rng rng(cfg.seed ^ text::fnv1a64(q.id));
        std::vector<std::string> perm = pool;
        std::set<std::string> seen_orders;
        std::vector<RankedList> runs;
        std::size_t attempts = 0;
        const std::size_t attempt_cap = 20 * target + 100;
        while (runs.size() < target && attempts < attempt_cap) {
            ++attempts;
            rng.shuffle(perm);
            std::string order;
            for (const auto& id : perm) {
                order += id;
                order += '\x1f';
            }
            if (!seen_orders.insert(order).second) continue;
            try {
                runs.push_back(ranker(q, perm));
            } catch (const std::exception& e) {
                RankedList failed{q.id, View::student, {}};
                failed.entries.push_back(
                    {"FAIL#" + std::to_string(runs.size()) + "#" + std::to_string(attempts), 0.0});
                runs.push_back(failed);
                out.diagnostics.push_back("query '" + q.id + "' trial " +
                                          std::to_string(runs.size()) + " failed: " + e.what());
            }
        }
        if (runs.empty()) {
            out.diagnostics.push_back("query '" + q.id + "': no distinct candidate orders sampled");
            continue;
        }
        for (std::size_t k : cfg.ks) {
            std::vector<std::string> tokens;
            tokens.reserve(runs.size());
            for (const auto& r : runs) tokens.push_back(outcome_token(r, k));
            sums[k] += modal_share(tokens);
        }
        ++out.queries;
    }
    if (out.queries == 0) throw DataError("consistency audit covered no queries");
    for (std::size_t k : cfg.ks) {
        out.series[k] = sums[k] / static_cast<double>(out.queries);
    }
    return out;
}

RobustnessResult robustness_profile(const std::vector<Query>& queries,
                                    const std::vector<std::string>& pool,
                                    const RankerFn& ranker, const TrustConfig& cfg) {
    cfg.validate();
    if (queries.empty()) throw DataError("no queries to audit");

    RobustnessResult out;
    std::map<std::string, std::vector<const Query*>> groups;
    for (const auto& q : queries) {
        if (q.paraphrase_group.empty()) {
            out.diagnostics.push_back("query '" + q.id + "' has no paraphrase group; skipped");
            continue;
        }
        groups[q.paraphrase_group].push_back(&q);
    }

    std::map<std::size_t, double> sums;
    for (std::size_t k : cfg.ks) sums[k] = 0.0;

    for (const auto& [group, members] : groups) {
        if (members.size() < 2) {
            out.diagnostics.push_back("paraphrase group '" + group +
                                      "' has a single member; skipped");
            continue;
        }
        std::vector<RankedList> runs;
        runs.reserve(members.size());
        for (const Query* q : members) {
            try {
                runs.push_back(ranker(*q, pool));
            } catch (const std::exception& e) {
                RankedList failed{q->id, View::student, {}};
                failed.entries.push_back({"FAIL#" + std::to_string(runs.size()), 0.0});
                runs.push_back(failed);
                out.diagnostics.push_back("group '" + group + "' member '" + q->id +
                                          "' failed: " + e.what());
            }
        }
        for (std::size_t k : cfg.ks) {
            std::vector<std::string> tokens;
            tokens.reserve(runs.size());
            for (const auto& r : runs) tokens.push_back(outcome_token(r, k));
            sums[k] += modal_share(tokens);
        }
        ++out.groups;
    }
    if (out.groups == 0) throw DataError("no paraphrase group has two or more members");
    for (std::size_t k : cfg.ks) {
        out.series[k] = sums[k] / static_cast<double>(out.groups);
    }
    return out;
}

const std::vector<std::pair<std::string, std::string>>& synonym_table() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"activate", "enable"},   {"annual", "yearly"},
        {"balance", "amount"},    {"fee", "charge"},
        {"fees", "charges"},      {"foreign", "international"},
        {"increase", "raise"},    {"limit", "cap"},
        {"lost", "missing"},      {"refund", "reimbursement"},
        {"report", "flag"},       {"status", "state"},
        {"transfer", "send"},
    };
    return table;
}

const std::vector<std::string>& paraphrase_prefixes() {
    static const std::vector<std::string> prefixes = {
        "please", "can you please", "how do i", "how can i", "tell me",
    };
    return prefixes;
}

std::vector<Query> gen_paraphrases(const Query& q, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw ConfigError("paraphrase count must be >= 1");
    text::Rng rng(seed ^ text::fnv1a64(q.id));
    const auto& prefixes = paraphrase_prefixes();

    std::vector<std::string> words = text::tokenize(q.text, /*drop_stopwords=*/false);
    std::set<std::string> entities;
    if (q.meta) entities = q.meta->entities;

    std::string base;
    for (const auto& w : words) {
        if (!base.empty()) base += ' ';
        base += w;
    }

    std::map<std::string, std::string> syn;
    for (const auto& [from, to] : synonym_table()) syn[from] = to;

    std::vector<std::size_t> movable;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (!entities.count(words[i])) movable.push_back(i);
    }
    std::vector<std::size_t> replaceable;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (!entities.count(words[i]) && syn.count(words[i])) replaceable.push_back(i);
    }

    std::set<std::string> seen{base};
    std::vector<std::string> texts;
    auto push = [&](const std::string& t) {
        if (seen.insert(t).second) texts.push_back(t);
    };

    auto join = [](const std::vector<std::string>& ws) {
        std::string s;
        for (const auto& w : ws) {
            if (!s.empty()) s += ' ';
            s += w;
        }
        return s;
    };

    std::size_t attempts = 0;
    const std::size_t attempt_cap = 60 * m + 60;
    while (texts.size() < m && attempts < attempt_cap) {
        switch (attempts % 3) {
            case 0:
                push(prefixes[rng.below(prefixes.size())] + " " + base);
                break;
            case 1: {
                if (replaceable.empty()) break;
                std::vector<std::string> ws = words;
                std::size_t pos = replaceable[rng.below(replaceable.size())];
                ws[pos] = syn.at(ws[pos]);
                push(join(ws));
                break;
            }
            case 2: {
                if (movable.size() < 2) break;
                std::vector<std::string> vals;
                vals.reserve(movable.size());
                for (std::size_t i : movable) vals.push_back(words[i]);
                rng.shuffle(vals);
                std::vector<std::string> ws = words;
                for (std::size_t i = 0; i < movable.size(); ++i) ws[movable[i]] = vals[i];
                push(join(ws));
                break;
            }
        }
        ++attempts;
    }

    // Guaranteed fill: stacking prefixes strictly lengthens the text, so each
    // round yields a fresh variant.
    std::string stacked = base;
    std::size_t pi = 0;
    while (texts.size() < m) {
        stacked = prefixes[pi++ % prefixes.size()] + " " + stacked;
        push(stacked);
    }

    std::vector<Query> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        Query v;
        v.id = q.id + "#p" + std::to_string(i + 1);
        v.text = texts[i];
        v.meta = q.meta;
        v.paraphrase_group = q.id;
        v.gold_faq_ids = q.gold_faq_ids;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace maca
