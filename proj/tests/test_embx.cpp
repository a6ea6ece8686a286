#include "docclust/embx.hpp"
#include "docclust/rng.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>

using namespace docclust;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("docclust_embx_" + name);
    fs::remove_all(p);
    return p;
}

embx::Dataset random_dataset(std::uint64_t seed, int items, int dim) {
    Rng rng(seed);
    embx::Dataset ds;
    ds.dim = dim;
    for (int i = 0; i < items; ++i) {
        embx::TokenEmbeddings te;
        te.doc_id = "d" + std::to_string(i);
        te.page_index = static_cast<std::int64_t>(rng.index(3));
        const auto rows = static_cast<Eigen::Index>(1 + rng.index(6));
        te.matrix.resize(rows, dim);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (int c = 0; c < dim; ++c) te.matrix(r, c) = static_cast<float>(rng.normal() * 10.0);
        te.text_rows = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(rows) + 1));
        if (i % 2) te.label = i % 3;
        if (i % 3) te.ocr_confidence = rng.uniform();
        if (i % 4 == 1) te.language = "es";
        ds.items.push_back(std::move(te));
    }
    return ds;
}

nlohmann::ordered_json manifest(const fs::path& p) {
    std::ifstream in(p / embx::kManifestName);
    return nlohmann::ordered_json::parse(in);
}

void save_manifest(const fs::path& p, const nlohmann::ordered_json& j) {
    std::ofstream out(p / embx::kManifestName);
    out << j.dump(2);
}

embx::ErrorKind read_error(const fs::path& p) {
    try {
        embx::read_dataset(p);
    } catch (const embx::EmbxError& e) {
        return e.kind();
    }
    FAIL("read_dataset accepted a broken container");
    return embx::ErrorKind::io;
}

}  // namespace

TEST_CASE("empty dataset round-trips with an empty blob") {
    embx::Dataset ds;
    ds.dim = 4;
    const auto p = scratch("empty");
    embx::write_dataset(ds, p);
    CHECK(fs::file_size(p / embx::kBlobName) == 0);
    CHECK(embx::read_dataset(p) == ds);
}

TEST_CASE("one 2x3 item writes 24 little-endian bytes") {
    embx::Dataset ds;
    ds.dim = 3;
    embx::TokenEmbeddings te;
    te.doc_id = "a";
    te.matrix.resize(2, 3);
    te.matrix << 1, 2, 3, 4, 5, 6;
    te.text_rows = 2;
    ds.items.push_back(te);
    const auto p = scratch("bytes");
    embx::write_dataset(ds, p);
    REQUIRE(fs::file_size(p / embx::kBlobName) == 24);
    std::ifstream in(p / embx::kBlobName, std::ios::binary);
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    // 1.0f = 0x3f800000
    CHECK(b[0] == 0x00);
    CHECK(b[3] == 0x3f);
    const auto j = manifest(p);
    CHECK(j["format_version"] == 1);
    CHECK(j["items"][0]["label"].is_null());
    CHECK(j["items"][0]["ocr_confidence"].is_null());
    CHECK(j["items"][0]["language"].is_null());
}

TEST_CASE("random datasets round-trip bit-exactly") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ds = random_dataset(seed, 10, 7);
        const auto p = scratch("rt" + std::to_string(seed));
        embx::write_dataset(ds, p);
        CHECK(embx::read_dataset(p) == ds);
    }
}

TEST_CASE("confidence 0 is kept apart from a missing confidence") {
    auto ds = random_dataset(9, 2, 3);
    ds.items[0].ocr_confidence = 0.0;
    ds.items[1].ocr_confidence.reset();
    const auto p = scratch("conf");
    embx::write_dataset(ds, p);
    const auto back = embx::read_dataset(p);
    CHECK(back.items[0].ocr_confidence == 0.0);
    CHECK_FALSE(back.items[1].ocr_confidence.has_value());
}

TEST_CASE("each malformation gets its own error") {
    const auto ds = random_dataset(3, 4, 5);
    const auto base = scratch("bad_base");
    embx::write_dataset(ds, base);
    auto fresh = [&](const std::string& name) {
        const auto p = scratch(name);
        fs::copy(base, p);
        return p;
    };

    SUBCASE("truncated blob") {
        const auto p = fresh("trunc");
        fs::resize_file(p / embx::kBlobName, fs::file_size(p / embx::kBlobName) - 4);
        CHECK(read_error(p) == embx::ErrorKind::blob_length);
    }
    SUBCASE("flipped byte") {
        const auto p = fresh("flip");
        std::fstream f(p / embx::kBlobName, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(5);
        f.put('\x7f');
        f.close();
        CHECK(read_error(p) == embx::ErrorKind::checksum);
    }
    SUBCASE("text rows beyond the matrix") {
        const auto p = fresh("span");
        auto j = manifest(p);
        j["items"][0]["text_rows"] = j["items"][0]["rows"].get<int>() + 1;
        save_manifest(p, j);
        CHECK(read_error(p) == embx::ErrorKind::span_violation);
    }
    SUBCASE("column count differs from dim") {
        const auto p = fresh("dim");
        auto j = manifest(p);
        j["items"][1]["cols"] = 4;
        save_manifest(p, j);
        CHECK(read_error(p) == embx::ErrorKind::dim_mismatch);
    }
    SUBCASE("missing field") {
        const auto p = fresh("field");
        auto j = manifest(p);
        j["items"][0].erase("doc_id");
        save_manifest(p, j);
        CHECK(read_error(p) == embx::ErrorKind::malformed_manifest);
    }
    SUBCASE("not json") {
        const auto p = fresh("json");
        std::ofstream(p / embx::kManifestName) << "{ nope";
        CHECK(read_error(p) == embx::ErrorKind::malformed_manifest);
    }
    SUBCASE("missing directory") {
        CHECK(read_error(scratch("nothing_here")) == embx::ErrorKind::io);
    }
}

TEST_CASE("non-finite values are rejected before anything is written") {
    auto ds = random_dataset(4, 3, 2);
    ds.items[1].matrix(0, 0) = std::numeric_limits<float>::quiet_NaN();
    const auto p = scratch("nan");
    try {
        embx::write_dataset(ds, p);
        FAIL("NaN accepted");
    } catch (const embx::EmbxError& e) {
        CHECK(e.kind() == embx::ErrorKind::non_finite);
    }
    CHECK_FALSE(fs::exists(p));
}

TEST_CASE("labels only when every item has one") {
    auto ds = embx::from_vectors(Matrix::Identity(3, 3));
    CHECK_FALSE(ds.labels().has_value());
    for (auto& te : ds.items) te.label = 2;
    REQUIRE(ds.labels().has_value());
    CHECK(ds.labels()->size() == 3);
    CHECK(ds.is_vector_dataset());
    CHECK(ds.vectors() == Matrix::Identity(3, 3));
}
