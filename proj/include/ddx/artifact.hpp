#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "ddx/common.hpp"

namespace ddx::artifact {

std::string sha256_hex(const std::string& data);
std::string file_sha256(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Provenance block embedded in every artifact: tool version, the resolved
/// run configuration, and digests of all inputs.
struct Meta {
    std::string tool_version = kToolVersion;
    nlohmann::json config = nlohmann::json::object();
    std::map<std::string, std::string> input_digests;

    nlohmann::json to_json() const;
};

/// JSON artifacts embed meta under a "meta" key.
void write_json_artifact(const std::string& path, nlohmann::json body, const Meta& meta);

/// CSV/JSONL artifacts keep their format byte-clean; meta goes to a
/// "<path>.meta.json" sidecar.
void write_text_artifact(const std::string& path, const std::string& content,
                         const Meta& meta);

}  // namespace ddx::artifact
