#include "doctest.h"
#include "test_util.hpp"

using namespace projhardy;
using nlohmann::json;

TEST_CASE("complex number and point parsing") {
  CHECK(parse_complex("1.5") == cd(1.5, 0));
  CHECK(parse_complex(" -2i ") == cd(0, -2));
  CHECK(parse_complex("i") == cd(0, 1));
  CHECK(parse_complex("-j") == cd(0, -1));
  CHECK(parse_complex("0.2+0.1i") == cd(0.2, 0.1));
  CHECK(parse_complex("1e-3-4e2j") == cd(1e-3, -4e2));
  CHECK_THROWS_AS(parse_complex(""), InputError);
  CHECK_THROWS_AS(parse_complex("1+"), InputError);
  CHECK_THROWS_AS(parse_complex("abc"), InputError);

  const Vec2 p = parse_point("0.2+0.1i, -0.3");
  CHECK(p(0) == cd(0.2, 0.1));
  CHECK(p(1) == cd(-0.3, 0));
  CHECK_THROWS_AS(parse_point("1"), InputError);
  CHECK_THROWS_AS(parse_point("1,2,3"), InputError);
}

TEST_CASE("canonical text and hashing") {
  for (const char* name : {"bidisk.json", "perturbed_bidisk.json", "sphere.json", "kappa_zero.json"}) {
    const json doc = read_spec_file(testutil::fixture_path(name));
    const std::string once = canonical_text(doc);
    CHECK(canonical_text(json::parse(once)) == once);
    CHECK(spec_hash(doc) == spec_hash(json::parse(once)));
    CHECK(spec_hash(doc).size() == 16);
  }
  // whitespace and polynomial spelling do not change the hash
  const json a = json::parse(R"json({"hypersurfaces": [{"label": "s", "rho": "abs2(z1) + abs2(z2) - 1"}]})json");
  const json b = json::parse(R"json({"hypersurfaces":[{"rho":"-1+conj(z2)*z2 + z1*conj(z1)","label":"s"}]})json");
  CHECK(spec_hash(a) == spec_hash(b));
  const json c = json::parse(R"json({"hypersurfaces": [{"label": "s", "rho": "abs2(z1) + abs2(z2) - 2"}]})json");
  CHECK(spec_hash(a) != spec_hash(c));

  // FNV-1a reference values
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("malformed specs are input errors") {
  CHECK_THROWS_AS(testutil::domain_from(R"json({"hypersurfaces": [
      {"label": "a", "rho": "abs2(z1) - 1"}, {"label": "a", "rho": "abs2(z2) - 1"}]})json"),
                  InputError);
  CHECK_THROWS_AS(testutil::domain_from(R"json({"hypersurfaces": [{"label": "a", "rho": "abs2(z1) - 1"}],
      "combination": "xor"})json"),
                  InputError);
  CHECK_THROWS_AS(testutil::domain_from(R"json({"hypersurfaces": []})json"), InputError);
  CHECK_THROWS_AS(testutil::domain_from(R"json({"hypersurfaces": [{"label": "a", "rho": "abs2(z1) - 1"}],
      "edges": [{"members": ["a", "b"], "chart": {"type": "torus2", "radii": [1, 1]}}]})json"),
                  InputError);
  CHECK_THROWS_AS(testutil::domain_from(R"json({"hypersurfaces": [{"label": "a", "rho": "abs2(z1) + * 1"}]})json"),
                  ParseError);
  CHECK_THROWS_AS(read_spec_file(testutil::fixture_path("does_not_exist.json")), InputError);
}

TEST_CASE("fixtures assemble") {
  const PwsDomain bidisk = testutil::fixture("bidisk.json");
  CHECK(bidisk.hypersurfaces.size() == 2);
  CHECK(bidisk.edges.size() == 1);
  CHECK(bidisk.contains(Vec2(0.0, 0.0)));
  const PwsDomain wedge = testutil::fixture("wedge_union.json");
  CHECK(wedge.contains(Vec2(2.0, 0.0)));
  CHECK_FALSE(wedge.contains(Vec2(0.5, 0.5)));
  CHECK(to_json(cd(1.5, -2)) == json::array({1.5, -2.0}));
}
