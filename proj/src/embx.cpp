#include "docclust/embx.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace docclust::embx {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

bool operator==(const TokenEmbeddings& a, const TokenEmbeddings& b) {
    if (a.doc_id != b.doc_id || a.page_index != b.page_index || a.text_rows != b.text_rows ||
        a.label != b.label || a.ocr_confidence != b.ocr_confidence || a.language != b.language)
        return false;
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) return false;
    return std::memcmp(a.matrix.data(), b.matrix.data(), sizeof(float) * a.matrix.size()) == 0;
}

std::optional<std::vector<int>> Dataset::labels() const {
    if (items.empty()) return std::nullopt;
    std::vector<int> out;
    out.reserve(items.size());
    for (const auto& it : items) {
        if (!it.label) return std::nullopt;
        out.push_back(static_cast<int>(*it.label));
    }
    return out;
}

bool Dataset::is_vector_dataset() const {
    for (const auto& it : items)
        if (it.rows() != 1) return false;
    return true;
}

Matrix Dataset::vectors() const {
    if (!is_vector_dataset())
        throw DataError("dataset items have more than one row; project them to vectors first");
    Matrix out(static_cast<Eigen::Index>(items.size()), dim);
    for (std::size_t i = 0; i < items.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = items[i].matrix.row(0).cast<double>();
    return out;
}

void validate(const Dataset& ds) {
    if (ds.dim < 1) throw EmbxError(ErrorKind::dim_mismatch, "dataset dim must be positive");
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        const auto& it = ds.items[i];
        const std::string where = "item " + std::to_string(i) + " (" + it.doc_id + ")";
        if (it.cols() != ds.dim)
            throw EmbxError(ErrorKind::dim_mismatch, where + ": " + std::to_string(it.cols()) +
                                                         " columns, dataset dim " +
                                                         std::to_string(ds.dim));
        if (it.rows() < 1) throw EmbxError(ErrorKind::span_violation, where + ": zero rows");
        if (it.text_rows < 0 || it.text_rows > it.rows())
            throw EmbxError(ErrorKind::span_violation,
                            where + ": text_rows " + std::to_string(it.text_rows) +
                                " outside [0, " + std::to_string(it.rows()) + "]");
        if (it.page_index < 0)
            throw EmbxError(ErrorKind::malformed_manifest, where + ": negative page_index");
        if (it.ocr_confidence && !(*it.ocr_confidence >= 0.0 && *it.ocr_confidence <= 1.0))
            throw EmbxError(ErrorKind::malformed_manifest, where + ": ocr_confidence outside [0, 1]");
        if (!it.matrix.allFinite())
            throw EmbxError(ErrorKind::non_finite, where + ": non-finite matrix entry");
    }
}

std::string sha256_hex(const void* data, std::size_t size) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data, size, digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 computation failed");
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
    return os.str();
}

namespace {

void append_le(std::vector<unsigned char>& out, float v) {
    auto bits = std::bit_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xFF));
}

float read_le(const unsigned char* p) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(p[b]) << (8 * b);
    return std::bit_cast<float>(bits);
}

template <typename T>
json nullable(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

[[noreturn]] void malformed(const std::string& what) {
    throw EmbxError(ErrorKind::malformed_manifest, "malformed manifest: " + what);
}

const json& field(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) malformed(std::string("missing field '") + name + "'");
    return *it;
}

std::int64_t int_field(const json& obj, const char* name) {
    const json& v = field(obj, name);
    if (!v.is_number_integer()) malformed(std::string("field '") + name + "' is not an integer");
    return v.get<std::int64_t>();
}

}  // namespace

void write_dataset(const Dataset& ds, const fs::path& destination) {
    validate(ds);

    std::vector<unsigned char> blob;
    json items = json::array();
    for (const auto& it : ds.items) {
        const std::size_t offset = blob.size();
        for (Eigen::Index r = 0; r < it.matrix.rows(); ++r)
            for (Eigen::Index c = 0; c < it.matrix.cols(); ++c) append_le(blob, it.matrix(r, c));
        items.push_back(json{
            {"doc_id", it.doc_id},
            {"page_index", it.page_index},
            {"rows", it.rows()},
            {"cols", it.cols()},
            {"text_rows", it.text_rows},
            {"offset_bytes", offset},
            {"label", nullable(it.label)},
            {"ocr_confidence", nullable(it.ocr_confidence)},
            {"language", nullable(it.language)},
        });
    }
    json manifest{
        {"format_version", kFormatVersion},
        {"dim", ds.dim},
        {"item_count", ds.items.size()},
        {"blob_sha256", sha256_hex(blob.data(), blob.size())},
        {"items", std::move(items)},
    };

    std::error_code ec;
    fs::create_directories(destination, ec);
    if (ec) throw EmbxError(ErrorKind::io, "cannot create " + destination.string() + ": " + ec.message());
    {
        std::ofstream out(destination / kBlobName, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
        if (!out) throw EmbxError(ErrorKind::io, "failed writing " + (destination / kBlobName).string());
    }
    std::ofstream out(destination / kManifestName, std::ios::trunc);
    out << manifest.dump(2) << '\n';
    if (!out) throw EmbxError(ErrorKind::io, "failed writing " + (destination / kManifestName).string());
}

Dataset read_dataset(const fs::path& source) {
    std::ifstream min(source / kManifestName);
    if (!min) throw EmbxError(ErrorKind::io, "cannot open " + (source / kManifestName).string());
    json manifest;
    try {
        manifest = json::parse(min);
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    if (!manifest.is_object()) malformed("top level is not an object");
    if (int_field(manifest, "format_version") != kFormatVersion) malformed("unsupported format_version");

    Dataset ds;
    ds.dim = int_field(manifest, "dim");
    const std::int64_t count = int_field(manifest, "item_count");
    const json& sha = field(manifest, "blob_sha256");
    if (!sha.is_string()) malformed("blob_sha256 is not a string");
    const json& items = field(manifest, "items");
    if (!items.is_array()) malformed("items is not an array");
    if (static_cast<std::int64_t>(items.size()) != count)
        malformed("item_count " + std::to_string(count) + " but " + std::to_string(items.size()) +
                  " items listed");
    if (ds.dim < 1) throw EmbxError(ErrorKind::dim_mismatch, "dataset dim must be positive");

    struct Layout {
        std::int64_t rows, cols, offset;
    };
    std::vector<Layout> layout;
    std::int64_t expected_offset = 0;
    for (const json& entry : items) {
        if (!entry.is_object()) malformed("item entry is not an object");
        TokenEmbeddings it;
        const json& doc = field(entry, "doc_id");
        if (!doc.is_string()) malformed("doc_id is not a string");
        it.doc_id = doc.get<std::string>();
        it.page_index = int_field(entry, "page_index");
        const std::int64_t rows = int_field(entry, "rows");
        const std::int64_t cols = int_field(entry, "cols");
        it.text_rows = int_field(entry, "text_rows");
        const std::int64_t offset = int_field(entry, "offset_bytes");
        const json& label = field(entry, "label");
        if (!label.is_null()) {
            if (!label.is_number_integer()) malformed("label is neither null nor an integer");
            it.label = label.get<std::int64_t>();
        }
        const json& conf = field(entry, "ocr_confidence");
        if (!conf.is_null()) {
            if (!conf.is_number()) malformed("ocr_confidence is neither null nor a number");
            it.ocr_confidence = conf.get<double>();
        }
        const json& lang = field(entry, "language");
        if (!lang.is_null()) {
            if (!lang.is_string()) malformed("language is neither null nor a string");
            it.language = lang.get<std::string>();
        }
        if (cols != ds.dim)
            throw EmbxError(ErrorKind::dim_mismatch,
                            it.doc_id + ": cols " + std::to_string(cols) + " != dim " + std::to_string(ds.dim));
        if (rows < 1) throw EmbxError(ErrorKind::span_violation, it.doc_id + ": rows must be >= 1");
        if (it.text_rows < 0 || it.text_rows > rows)
            throw EmbxError(ErrorKind::span_violation,
                            it.doc_id + ": text_rows " + std::to_string(it.text_rows) + " exceeds rows " +
                                std::to_string(rows));
        if (offset != expected_offset)
            malformed(it.doc_id + ": offset_bytes " + std::to_string(offset) + ", expected " +
                      std::to_string(expected_offset));
        layout.push_back({rows, cols, offset});
        expected_offset += rows * cols * 4;
        ds.items.push_back(std::move(it));
    }

    std::ifstream bin(source / kBlobName, std::ios::binary);
    if (!bin) throw EmbxError(ErrorKind::io, "cannot open " + (source / kBlobName).string());
    std::vector<unsigned char> blob((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
    if (static_cast<std::int64_t>(blob.size()) != expected_offset)
        throw EmbxError(ErrorKind::blob_length, "blob is " + std::to_string(blob.size()) +
                                                    " bytes, manifest declares " +
                                                    std::to_string(expected_offset));
    if (sha256_hex(blob.data(), blob.size()) != sha.get<std::string>())
        throw EmbxError(ErrorKind::checksum, "blob_sha256 does not match embeddings.bin");

    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        auto& it = ds.items[i];
        const auto& l = layout[i];
        it.matrix.resize(l.rows, l.cols);
        const unsigned char* p = blob.data() + l.offset;
        for (std::int64_t r = 0; r < l.rows; ++r)
            for (std::int64_t c = 0; c < l.cols; ++c, p += 4) it.matrix(r, c) = read_le(p);
    }
    validate(ds);
    return ds;
}

Dataset from_vectors(const Matrix& vectors, const std::vector<std::string>& doc_ids) {
    if (!doc_ids.empty() && doc_ids.size() != static_cast<std::size_t>(vectors.rows()))
        throw DataError("doc_ids size does not match vector count");
    Dataset ds;
    ds.dim = vectors.cols();
    ds.items.reserve(vectors.rows());
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
        TokenEmbeddings it;
        it.doc_id = doc_ids.empty() ? "doc" + std::to_string(i) : doc_ids[i];
        it.matrix = vectors.row(i).cast<float>();
        it.text_rows = 1;
        ds.items.push_back(std::move(it));
    }
    return ds;
}

}  // namespace docclust::embx
