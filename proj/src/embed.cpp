#include "maca/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "maca/error.hpp"
#include "maca/text.hpp"

using nlohmann::json;

namespace maca {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw NumericError("cosine over mismatched dimensions");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, -1.0, 1.0);
}

HashingEmbedder::HashingEmbedder(std::size_t dimension, std::uint64_t seed)
    : dim_(dimension), seed_(seed) {
    if (dim_ < 8) throw ConfigError("embedding dimension must be >= 8");
}

std::vector<double> HashingEmbedder::embed(const std::string& raw) const {
    std::vector<double> vec(dim_, 0.0);
    auto tokens = text::tokenize(raw);
    std::map<std::string, std::size_t> tf;
    for (const auto& t : tokens) tf[t]++;
    for (const auto& [token, count] : tf) {
        std::uint64_t bucket_hash = text::fnv1a64(token, seed_);
        std::uint64_t sign_hash = text::fnv1a64(token, seed_ ^ 0xA5A5A5A5A5A5A5A5ULL);
        double sign = (sign_hash & 1ULL) ? 1.0 : -1.0;
        double weight = 1.0 + std::log(static_cast<double>(count));
        vec[bucket_hash % dim_] += sign * weight;
    }
    double norm_sq = 0.0;
    for (double v : vec) norm_sq += v * v;
    if (norm_sq == 0.0) {
        vec[0] = 1.0;
        return vec;
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : vec) v *= inv;
    return vec;
}

std::string HashingEmbedder::name() const {
    return "hash(d=" + std::to_string(dim_) + ",seed=" + std::to_string(seed_) + ")";
}

PrecomputedProvider::PrecomputedProvider(std::map<std::string, std::vector<double>> vectors,
                                         std::string source)
    : vectors_(std::move(vectors)), source_(std::move(source)) {
    if (vectors_.empty()) throw DataError("vector file is empty: " + source_);
    dim_ = vectors_.begin()->second.size();
    for (auto& [id, vec] : vectors_) {
        if (vec.size() != dim_) {
            throw DataError("vector for '" + id + "' has dimension " +
                            std::to_string(vec.size()) + ", expected " + std::to_string(dim_));
        }
        double norm_sq = 0.0;
        for (double v : vec) norm_sq += v * v;
        if (norm_sq == 0.0) throw NumericError("zero vector for '" + id + "' in " + source_);
        double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : vec) v *= inv;
    }
}

PrecomputedProvider PrecomputedProvider::from_file(const std::filesystem::path& path) {
    return PrecomputedProvider(load_vector_file(path), path.string());
}

std::vector<double> PrecomputedProvider::embed(const std::string& text) const {
    return embed_keyed(text, text);
}

std::vector<double> PrecomputedProvider::embed_keyed(const std::string& key,
                                                     const std::string&) const {
    auto it = vectors_.find(key);
    if (it == vectors_.end()) throw DataError("no precomputed vector for '" + key + "'");
    return it->second;
}

std::shared_ptr<EmbeddingProvider> provider_from_name(const std::string& name) {
    if (name.rfind("hash(d=", 0) == 0) {
        auto comma = name.find(",seed=");
        auto close = name.find(')');
        if (comma != std::string::npos && close != std::string::npos) {
            std::size_t d = std::stoull(name.substr(7, comma - 7));
            std::uint64_t seed = std::stoull(name.substr(comma + 6, close - comma - 6));
            return std::make_shared<HashingEmbedder>(d, seed);
        }
    }
    throw ConfigError("cannot reconstruct embedding provider from name: " + name);
}

void save_vector_file(const std::map<std::string, std::vector<double>>& vectors,
                      const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& [id, vec] : vectors) {
        json j;
        j["id"] = id;
        j["vector"] = vec;
        out << j.dump() << "\n";
    }
}

std::map<std::string, std::vector<double>> load_vector_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::map<std::string, std::vector<double>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("vector")) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected {\"id\", \"vector\"}");
        }
        std::string id = j["id"].get<std::string>();
        if (out.count(id)) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": duplicate id '" +
                            id + "'");
        }
        out[id] = j["vector"].get<std::vector<double>>();
    }
    return out;
}

} // namespace maca
