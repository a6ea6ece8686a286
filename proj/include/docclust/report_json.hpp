#pragma once

#include "docclust/clustering.hpp"
#include "docclust/consolidation.hpp"
#include "docclust/fusion.hpp"
#include "docclust/metrics.hpp"
#include "docclust/tuning.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace docclust::report {

using Json = nlohmann::ordered_json;

Json to_json(const metrics::EvalReport& r);

Json to_json(const Partition& p);
Partition partition_from_json(const Json& j);

// Every algorithm block is written, so the result replays exactly.
Json to_json(const ClusterConfig& cfg);
ClusterConfig cluster_config_from_json(const Json& j);

Json to_json(const tuning::Trial& t);
Json to_json(const tuning::GridSpec& g);

Json to_json(const fusion::GroupStats& s);

Json to_json(const consolidation::MergeMap& m);

// {"must_link": [[i, j] or [i, j, w], ...], "cannot_link": [...]}; weight defaults to 1.
consolidation::ConstraintSet constraints_from_json(const Json& j);

// Table layout: model, algorithm, ARI, NMI, HS, CS, SS, PC, %Noise.
std::string csv_header();
std::string csv_row(const std::string& model, const std::string& algorithm, const metrics::EvalReport& r);

// Two-space indented, trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace docclust::report
