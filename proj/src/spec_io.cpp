#include "projhardy/spec_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace projhardy {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(where + ": missing '" + key + "'");
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw InputError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

cd complex_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw InputError(where + ": expected a number or [re, im]");
}

}  // namespace

PwsDomain parse_domain_spec(const json& doc) {
  if (!doc.is_object()) throw InputError("domain spec: top level must be an object");
  PwsDomain d;
  const json& hs = require(doc, "hypersurfaces", "domain spec");
  if (!hs.is_array() || hs.empty()) throw InputError("domain spec: 'hypersurfaces' must be a non-empty array");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string where = "hypersurface " + std::to_string(i);
    const std::string label = require_string(hs[i], "label", where);
    if (!labels.insert(label).second) throw InputError("domain spec: duplicate label '" + label + "'");
    const std::string rho = require_string(hs[i], "rho", where);
    try {
      d.hypersurfaces.push_back({label, parse_poly(rho)});
    } catch (const ParseError& e) {
      throw ParseError("hypersurface '" + label + "': " + e.what(), e.position());
    } catch (const InputError& e) {
      throw InputError("hypersurface '" + label + "': " + e.what());
    }
  }

  if (doc.contains("faces")) {
    const json& faces = doc.at("faces");
    if (!faces.is_array()) throw InputError("domain spec: 'faces' must be an array");
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const std::string where = "face " + std::to_string(i);
      const int h = d.index_of(require_string(faces[i], "hypersurface", where));
      d.faces.push_back({h, make_chart(require(faces[i], "chart", where), {d.hypersurfaces[h].rho})});
    }
  }
  if (doc.contains("edges")) {
    const json& edges = doc.at("edges");
    if (!edges.is_array()) throw InputError("domain spec: 'edges' must be an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string where = "edge " + std::to_string(i);
      const json& members = require(edges[i], "members", where);
      if (!members.is_array() || members.empty()) throw InputError(where + ": 'members' must be a non-empty array");
      Edge e;
      std::vector<HermitianPoly> constraints;
      for (const json& m : members) {
        if (!m.is_string()) throw InputError(where + ": members are hypersurface labels");
        const int idx = d.index_of(m.get<std::string>());
        e.members.push_back(idx);
        constraints.push_back(d.hypersurfaces[idx].rho);
      }
      e.chart = make_chart(require(edges[i], "chart", where), constraints);
      d.edges.push_back(std::move(e));
    }
  }
  if (doc.contains("interior_points")) {
    const json& pts = doc.at("interior_points");
    if (!pts.is_array()) throw InputError("domain spec: 'interior_points' must be an array");
    for (const json& p : pts) {
      if (!p.is_array() || p.size() != 2) throw InputError("domain spec: an interior point has two coordinates");
      d.interior_points.emplace_back(complex_from_json(p[0], "interior point"), complex_from_json(p[1], "interior point"));
    }
  }
  if (doc.contains("combination")) {
    const std::string c = doc.at("combination").is_string() ? doc.at("combination").get<std::string>() : "";
    if (c == "intersection")
      d.combination = Combination::intersection;
    else if (c == "union")
      d.combination = Combination::union_of;
    else
      throw InputError("domain spec: 'combination' must be \"intersection\" or \"union\"");
  }
  return d;
}

json read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read spec file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("spec file '" + path + "': " + e.what());
  }
}

json canonical_spec(const json& doc) {
  json out = doc;
  if (out.contains("hypersurfaces") && out.at("hypersurfaces").is_array())
    for (json& h : out.at("hypersurfaces"))
      if (h.is_object() && h.contains("rho") && h.at("rho").is_string())
        h["rho"] = parse_poly(h.at("rho").get<std::string>()).to_string();
  return out;
}

std::string canonical_text(const json& doc) { return canonical_spec(doc).dump(2) + "\n"; }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string spec_hash(const json& doc) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a(canonical_text(doc));
  return os.str();
}

cd parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InputError("empty complex number");
  const bool imaginary = s.back() == 'i' || s.back() == 'j';
  if (imaginary) s.pop_back();
  auto number = [&](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    double v = 0.0;
    const char* first = t.data() + (t.front() == '+' ? 1 : 0);
    const auto res = std::from_chars(first, t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
      throw InputError("malformed complex number '" + std::string(text) + "'");
    return v;
  };
  if (!imaginary) return {number(s), 0.0};
  // Split a+bi at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  if (split == std::string::npos) return {0.0, number(s)};
  return {number(std::string_view(s).substr(0, split)), number(std::string_view(s).substr(split))};
}

Vec2 parse_point(std::string_view text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
    throw InputError("expected two comma-separated coordinates, got '" + std::string(text) + "'");
  return {parse_complex(text.substr(0, comma)), parse_complex(text.substr(comma + 1))};
}

json to_json(cd z) { return json::array({z.real(), z.imag()}); }

}  // namespace projhardy
