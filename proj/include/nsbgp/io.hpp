#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "nsbgp/intra_as.hpp"
#include "nsbgp/model.hpp"
#include "nsbgp/service_models.hpp"

// JSON file formats. Parsers reject unknown keys and report the location of
// the offending value ("rankings.1[0][2]: unknown node 'x'").
namespace nsbgp::io {

using Json = nlohmann::ordered_json;

/// Bumped whenever a report field changes meaning.
inline constexpr const char* kReportSchema = "nsbgp-lab/report/v1";

class FormatError : public ModelError {
 public:
  using ModelError::ModelError;
};

Json read_json_file(const std::filesystem::path& file);

Instance parse_instance(const Json& doc);
Json instance_to_json(const Instance& instance);
Instance load_instance(const std::filesystem::path& file);

intra_as::AsConfig parse_as_config(const Json& doc);
Json as_config_to_json(const intra_as::AsConfig& config);
intra_as::AsConfig load_as_config(const std::filesystem::path& file);

PathAttributes parse_attributes(const Instance& instance, const Json& doc);
Json attributes_to_json(const Instance& instance, const PathAttributes& attrs);

struct ServiceAssignment {
  NodeIndex owner = 0;
  std::map<NodeIndex, ServiceModel> models;  // per neighbor
  std::optional<ServiceModel> self;
};

ServiceAssignment parse_assignment(const Instance& instance, const Json& doc);
Json assignment_to_json(const Instance& instance, const ServiceAssignment& assignment);

Json path_to_json(const Instance& instance, const Path& path);

}  // namespace nsbgp::io
