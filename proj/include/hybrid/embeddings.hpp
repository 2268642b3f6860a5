#pragma once

// Readers and writers for precomputed embedding files.
//
// JSON lines:
//   dense        {"id": "d1", "vector": [0.1, 0.2, ...]}
//   sparse       {"id": "d1", "weights": {"term": 0.7, ...}}
//   multi-vector {"id": "d1", "tokens": [[...], [...], ...]}
//
// Binary matrix (FBVX), dense and multi-vector only: a 16-byte header
// (magic "FBVX", u32 version, u32 dim, u32 reserved = 0) followed by
// row-major little-endian float32 values. The row count follows from the file
// size. Row ids live in the companion file `<path>.ids`, one per line; for
// multi-vector data consecutive rows sharing an id form one token matrix.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hybrid {

/// Row-major matrix of `rows() x dim` values.
class TokenMatrix {
  public:
    TokenMatrix() = default;
    TokenMatrix(std::size_t dim, std::vector<double> values);

    [[nodiscard]] std::size_t rows() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const
    {
        return std::span<const double>(values_).subspan(i * dim_, dim_);
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    /// Scales every row to unit L2 norm; throws ValidationError on a zero row.
    void normalize_rows();

    friend bool operator==(const TokenMatrix&, const TokenMatrix&) = default;

  private:
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

/// Non-negative sparse vector; only strictly positive weights are stored,
/// sorted by term.
class SparseVector {
  public:
    SparseVector() = default;
    /// Drops zero weights; throws ValidationError on negative or non-finite ones.
    explicit SparseVector(std::vector<std::pair<std::string, double>> weights);

    [[nodiscard]] std::span<const std::pair<std::string, double>> entries() const noexcept
    {
        return entries_;
    }
    [[nodiscard]] std::size_t nonzeros() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    /// Weight of `term`, 0 when absent.
    [[nodiscard]] double weight(const std::string& term) const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

  private:
    std::vector<std::pair<std::string, double>> entries_;
};

/// One vector per id, as read from disk (ids are not yet typed as document or
/// query ids).
struct DenseRecords {
    std::vector<std::string> ids;
    TokenMatrix matrix;
};

struct SparseRecords {
    std::vector<std::string> ids;
    std::vector<SparseVector> vectors;
};

struct MultiVectorRecords {
    std::vector<std::string> ids;
    std::vector<TokenMatrix> matrices;
    std::size_t dim = 0;
};

/// L2-normalizes `values` in place; throws ValidationError for a zero vector.
void normalize_l2(std::span<double> values);

/// Dispatches on the file's first bytes: FBVX binary or JSON lines.
DenseRecords read_dense_records(const std::filesystem::path& path);
SparseRecords read_sparse_records(const std::filesystem::path& path);
MultiVectorRecords read_multivector_records(const std::filesystem::path& path);

void write_dense_jsonl(const DenseRecords& records, const std::filesystem::path& path);
void write_sparse_jsonl(const SparseRecords& records, const std::filesystem::path& path);
void write_multivector_jsonl(const MultiVectorRecords& records, const std::filesystem::path& path);

/// Binary matrix writers; values are narrowed to float32.
void write_fbvx(const DenseRecords& records, const std::filesystem::path& path);
void write_fbvx(const MultiVectorRecords& records, const std::filesystem::path& path);

std::filesystem::path ids_path(const std::filesystem::path& matrix_path);

}  // namespace hybrid
