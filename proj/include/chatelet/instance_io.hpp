#pragma once

// Instance files: a JSON object with keys "L" (2 integers), "C" (4 integers),
// "region" (vertices, each a pair of [num, den] coordinates) and "c".

#include <filesystem>
#include <string>

#include <json.hpp>

#include "chatelet/forms.hpp"

namespace chatelet {

/// Throws InstanceFormatError naming the offending key on malformed input.
ProblemInstance parse_instance(const nlohmann::json& doc, std::string id = "instance");

/// Reads and parses a file; the instance id is the file stem.
ProblemInstance load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const ProblemInstance& inst);

/// L = x1, C = x1^3 + x1*x2^2 + x2^3, R = [1,2]^2, c = 8.
ProblemInstance golden_instance();

/// The same instance as JSON text (shipped as data/golden.json).
const char* golden_instance_json();

}  // namespace chatelet
