#pragma once

#include "docclust/error.hpp"
#include "docclust/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace docclust::embx {

// One document's (or page's) last-hidden-state matrix. Rows [0, text_rows)
// are text tokens, rows [text_rows, rows) are image patches.
struct TokenEmbeddings {
    std::string doc_id;
    std::int64_t page_index = 0;
    RowMatrixF matrix;
    std::int64_t text_rows = 0;
    std::optional<std::int64_t> label;
    std::optional<double> ocr_confidence;
    std::optional<std::string> language;

    std::int64_t rows() const { return matrix.rows(); }
    std::int64_t cols() const { return matrix.cols(); }
    std::int64_t image_rows() const { return rows() - text_rows; }

    // Bitwise equality of the matrix plus equality of every field.
    friend bool operator==(const TokenEmbeddings& a, const TokenEmbeddings& b);
};

struct Dataset {
    std::int64_t dim = 0;
    std::vector<TokenEmbeddings> items;

    std::size_t size() const { return items.size(); }

    // Ground-truth labels, present only when every item carries one.
    std::optional<std::vector<int>> labels() const;

    // True when every item is a single row, i.e. the dataset holds DocVectors.
    bool is_vector_dataset() const;

    // n x dim matrix of the single-row items; DataError otherwise.
    Matrix vectors() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class ErrorKind {
    io,
    malformed_manifest,
    blob_length,
    checksum,
    non_finite,
    span_violation,
    dim_mismatch,
};

class EmbxError : public DataError {
public:
    EmbxError(ErrorKind kind, const std::string& what) : DataError(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Throws EmbxError describing the first violated invariant.
void validate(const Dataset& ds);

// Writes `destination/manifest.json` and `destination/embeddings.bin`,
// creating the directory if needed. Nothing is written when validation fails.
void write_dataset(const Dataset& ds, const std::filesystem::path& destination);

Dataset read_dataset(const std::filesystem::path& source);

// Wraps row vectors (one per item) as L = 1 embeddings.
Dataset from_vectors(const Matrix& vectors, const std::vector<std::string>& doc_ids = {});

std::string sha256_hex(const void* data, std::size_t size);

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kBlobName = "embeddings.bin";

}  // namespace docclust::embx
