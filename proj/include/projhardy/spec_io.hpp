#pragma once

// Domain-spec JSON documents and machine-readable reports.

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "projhardy/domain.hpp"

namespace projhardy {

inline constexpr int kReportSchemaVersion = 1;

/// Builds the domain described by a spec document:
///   {"hypersurfaces": [{"label", "rho"}],
///    "faces": [{"hypersurface": label, "chart": {...}}],
///    "edges": [{"members": [label, label], "chart": {...}}],
///    "interior_points": [[[re, im], [re, im]], ...],
///    "combination": "intersection" | "union"}      (optional)
/// Throws InputError (ParseError for polynomial text) on malformed input.
PwsDomain parse_domain_spec(const nlohmann::json& doc);

/// Reads and parses a spec file. Throws InputError if it cannot be read.
nlohmann::json read_spec_file(const std::string& path);

/// The document with every polynomial rewritten in canonical text. Keys are
/// kept sorted, so dump() of the result is a canonical byte string.
nlohmann::json canonical_spec(const nlohmann::json& doc);
std::string canonical_text(const nlohmann::json& doc);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// Hex FNV-1a of the canonical text.
std::string spec_hash(const nlohmann::json& doc);

/// Parses "a", "bi", "a+bi", "a-bi" (also with 'j'), surrounding blanks allowed.
cd parse_complex(std::string_view text);
/// Comma-separated pair of complex numbers.
Vec2 parse_point(std::string_view text);

nlohmann::json to_json(cd z);

}  // namespace projhardy
