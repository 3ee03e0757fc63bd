#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quadmod/io.hpp"
#include "quadmod/pipeline.hpp"

#include <fstream>

using namespace quadmod;
using nlohmann::json;

namespace {

bool same_spec(const QuadModuleSpec& a, const QuadModuleSpec& b) {
  return a.dimH == b.dimH && a.algebraA.dim == b.algebraA.dim && a.algebraB1.dim == b.algebraB1.dim &&
         a.algebraB2.dim == b.algebraB2.dim && a.embed1.matrix == b.embed1.matrix && a.embed2.matrix == b.embed2.matrix &&
         a.psi1.matrix == b.psi1.matrix && a.psi2.matrix == b.psi2.matrix && a.rightA == b.rightA &&
         a.varphi1 == b.varphi1 && a.varphi2 == b.varphi2 && a.phi1 == b.phi1 && a.phi2 == b.phi2 &&
         a.innerA == b.innerA && a.innerB1 == b.innerB1 && a.innerB2 == b.innerB2 && a.basisU == b.basisU &&
         a.basisV == b.basisV;
}

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "none";
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("rational quadruples") {
  CHECK(to_json(GaussianRational(mpq_class(3, 4), mpq_class(-1, 2))) == json::parse("[3,4,-1,2]"));
  CHECK(rational_from_json(json::parse("[2,4,0,1]"), "x") == GaussianRational::ratio(1, 2));
  mpq_class big("123456789012345678901234567890/7");
  json j = to_json(GaussianRational(big));
  CHECK(j[0].is_string());
  CHECK(rational_from_json(j, "x") == GaussianRational(big));
  CHECK(kind_of([] { rational_from_json(json::parse("[1,0,0,1]"), "x"); }) == "ParseError");
  CHECK(kind_of([] { rational_from_json(json::parse("[1,2,3]"), "x"); }) == "ParseError");
}

TEST_CASE("spec round trip") {
  for (const auto& s : {build_example_MN(2, 2), build_example_MN(2, 3),
                        build_example_alpha_beta(3, parse_cycles("(123)", 3), parse_cycles("(132)", 3))}) {
    json j = spec_to_json(s);
    CHECK(j["schema_version"] == "quadmod-spec-v1");
    QuadModuleSpec back = spec_from_json(json::parse(j.dump()));
    CHECK(same_spec(s, back));
    CHECK(spec_to_json(back) == j);
  }
}

TEST_CASE("fixture files match the builtins") {
  CHECK(same_spec(load_spec_file(QUADMOD_TEST_DATA "/h22.json"), build_example_MN(2, 2)));
  CHECK(same_spec(load_spec_file(QUADMOD_TEST_DATA "/example1.json"),
                  build_example_alpha_beta(3, parse_cycles("(123)", 3), parse_cycles("(132)", 3))));
}

TEST_CASE("spec errors carry context") {
  json j = spec_to_json(build_example_MN(2, 2));
  json bad = j;
  bad["schema_version"] = "quadmod-spec-v0";
  CHECK(kind_of([&] { spec_from_json(bad); }) == "SchemaVersionMismatch");

  bad = j;
  bad.erase("innerB1");
  CHECK(message_of([&] { spec_from_json(bad); }).find("innerB1") != std::string::npos);

  bad = j;
  bad["phi2"][1][2][3] = "x";
  std::string m = message_of([&] { spec_from_json(bad); });
  CHECK(m.find("ParseError") == 0);
  CHECK(m.find("phi2[1][2][3]") != std::string::npos);

  m = message_of([] { parse_spec_text("{\n  \"a\": 1,\n  oops\n}", "in.json"); });
  CHECK(m.find("in.json:3:") != std::string::npos);
  CHECK(kind_of([] { load_spec_file("/nonexistent/spec.json"); }) == "ParseError");
}

TEST_CASE("builtin descriptors") {
  CHECK(parse_spec_source("mn:2,3", true).spec.dimH == 6);
  SpecSource p = parse_spec_source("perm:3,(123),(1,3,2)", true);
  CHECK(p.kind == SpecSource::Kind::perm);
  CHECK(p.tau == Permutation{2, 0, 1});
  CHECK(kind_of([] { parse_spec_source("mn:1,3", true); }) == "InvalidParameter");
  CHECK(kind_of([] { parse_spec_source("mn:2", true); }) == "InvalidParameter");
  CHECK(kind_of([] { parse_spec_source("mn:2,x", true); }) == "InvalidParameter");
  CHECK(kind_of([] { parse_spec_source("grid:2,2", true); }) == "InvalidParameter");
}

TEST_CASE("report entries") {
  Report r;
  r.add({"a", "first", Window{2, 4}, true, "", false});
  r.add({"b", "second", std::nullopt, false, "entry (0,0)", true});
  json j = to_json(r);
  CHECK(j[0]["window"]["lo"] == 2);
  CHECK(j[0]["window"]["hi"] == 4);
  CHECK(j[1]["window"].is_null());
  CHECK(j[1]["informational"] == true);
  CHECK(to_json(FGAbelianGroup{{mpz_class(2), mpz_class(6)}, 1}) ==
        json::parse(R"({"freeRank":1,"factors":[2,6],"text":"Z ⊕ Z/2 ⊕ Z/6"})"));
}
