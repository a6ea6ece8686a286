#include "docclust/error.hpp"
#include "docclust/parallel.hpp"
#include "docclust/types.hpp"

#include <cstdlib>
#include <string>

namespace docclust {

unsigned default_thread_count() {
    if (const char* env = std::getenv("DOCCLUST_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::mean: return "mean";
        case Strategy::hybrid: return "hybrid";
        case Strategy::cls: return "cls";
        case Strategy::pca: return "pca";
    }
    return "mean";
}

Strategy strategy_from_string(std::string_view name) {
    if (name == "mean") return Strategy::mean;
    if (name == "hybrid") return Strategy::hybrid;
    if (name == "cls") return Strategy::cls;
    if (name == "pca") return Strategy::pca;
    throw ConfigError("unknown projection strategy '" + std::string(name) + "'");
}

Matrix stack_rows(const std::vector<DocVector>& vectors) {
    if (vectors.empty()) return Matrix(0, 0);
    const Eigen::Index d = vectors.front().vector.size();
    Matrix out(static_cast<Eigen::Index>(vectors.size()), d);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].vector.size() != d) throw DataError("document vectors differ in dimension");
        out.row(static_cast<Eigen::Index>(i)) = vectors[i].vector.transpose();
    }
    return out;
}

}  // namespace docclust
