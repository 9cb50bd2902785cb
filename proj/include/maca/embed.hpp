#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace maca {

/// dot(a, b) / (|a| |b|), clamped to [-1, 1]; 0 if either norm is 0.
/// Every similarity in the library goes through this one function so that
/// rankers sharing inputs produce bitwise-identical scores.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Text -> fixed-dimension unit vector. embed_keyed lets providers backed by
/// precomputed id-keyed vectors participate; the default ignores the key.
class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<double> embed(const std::string& text) const = 0;
    virtual std::vector<double> embed_keyed(const std::string& /*key*/,
                                            const std::string& text) const {
        return embed(text);
    }
    virtual std::string name() const = 0;
};

/// Deterministic signed feature hashing over tokenized text. Token weight is
/// 1 + ln(tf); the result is L2-normalized. Text with no content tokens maps
/// to the unit vector on axis 0.
class HashingEmbedder final : public EmbeddingProvider {
  public:
    explicit HashingEmbedder(std::size_t dimension = 256, std::uint64_t seed = 42);

    std::size_t dimension() const override { return dim_; }
    std::vector<double> embed(const std::string& text) const override;
    std::string name() const override;
    std::uint64_t seed() const { return seed_; }

  private:
    std::size_t dim_;
    std::uint64_t seed_;
};

/// Provider over externally computed vectors keyed by item id (JSONL lines
/// of {"id": ..., "vector": [...]}). Vectors are L2-normalized on load.
/// embed() treats the text itself as the key; unknown keys are data errors.
class PrecomputedProvider final : public EmbeddingProvider {
  public:
    static PrecomputedProvider from_file(const std::filesystem::path& path);
    PrecomputedProvider(std::map<std::string, std::vector<double>> vectors, std::string source);

    std::size_t dimension() const override { return dim_; }
    std::vector<double> embed(const std::string& text) const override;
    std::vector<double> embed_keyed(const std::string& key, const std::string& text) const override;
    std::string name() const override { return "vectors(" + source_ + ")"; }

  private:
    std::map<std::string, std::vector<double>> vectors_;
    std::size_t dim_ = 0;
    std::string source_;
};

/// Reconstruct a provider from its serialized name. Only hashing providers
/// round-trip; vector-file providers need their file passed explicitly.
std::shared_ptr<EmbeddingProvider> provider_from_name(const std::string& name);

void save_vector_file(const std::map<std::string, std::vector<double>>& vectors,
                      const std::filesystem::path& path);
std::map<std::string, std::vector<double>> load_vector_file(const std::filesystem::path& path);

} // namespace maca
