#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "scg/core.hpp"
#include "scg/private_signaling.hpp"
#include "scg/public_signaling.hpp"

namespace scg {

using Json = nlohmann::ordered_json;

// Instance document: name, num_agents, resources, action_sets (0-based),
// states [{name, prior, costs: {resource: [c(1), ..., c(N)]}}]. Numbers are
// written as canonical "p" / "p/q" strings; decimal strings and plain JSON
// numbers are accepted on input and parsed exactly.
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& doc);

// Throws ParseError on malformed JSON and SchemaError naming the field path.
Instance parse_instance(const std::string& text);
std::string canonical_instance_text(const Instance& inst);
Instance read_instance(const std::string& path);
void write_instance(const std::string& path, const Instance& inst);

// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string instance_digest(const Instance& inst);

Json public_scheme_to_json(const Instance& inst, const PublicScheme& scheme);
// Checks the scheme against the instance (validate_public_scheme).
PublicScheme public_scheme_from_json(const Instance& inst, const Json& doc);

struct PrivateDocument {
  ReducedForm reduced;
  std::optional<ExplicitScheme> explicit_scheme;
};

Json private_scheme_to_json(const Instance& inst, const ReducedForm& reduced,
                            const ExplicitScheme* explicit_scheme = nullptr);
PrivateDocument private_scheme_from_json(const Instance& inst, const Json& doc);

struct SchemeDocument {
  std::string kind;  // "public" or "private"
  PublicScheme public_scheme;
  PrivateDocument private_scheme;
};

SchemeDocument read_scheme(const std::string& path, const Instance& inst);
void write_json(const std::string& path, const Json& doc);
Json read_json(const std::string& path);

}  // namespace scg
