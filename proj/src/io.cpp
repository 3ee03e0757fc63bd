#include "quadmod/io.hpp"

#include <fstream>
#include <sstream>

namespace quadmod {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  throw Error("ParseError", "field '" + where + "': " + what);
}

json integer(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class integer_from(const json& j, const std::string& where) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) == 0) return z;
  }
  parse_error(where, "expected an integer");
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) parse_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

std::string at(const std::string& where, std::size_t k) { return where + "[" + std::to_string(k) + "]"; }

const json& array_of(const json& j, const std::string& where, std::optional<std::size_t> size = std::nullopt) {
  if (!j.is_array()) parse_error(where, "expected an array");
  if (size && j.size() != *size)
    parse_error(where, "expected " + std::to_string(*size) + " entries, found " + std::to_string(j.size()));
  return j;
}

std::size_t count_from(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    parse_error(where, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

Vector vector_from(const json& j, const std::string& where, std::size_t n) {
  array_of(j, where, n);
  Vector v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(rational_from_json(j[k], at(where, k)));
  return v;
}

json matrix_json(const ExactMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

ExactMatrix matrix_from(const json& j, const std::string& where, std::size_t rows, std::size_t cols) {
  array_of(j, where, rows);
  ExactMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    Vector row = vector_from(j[r], at(where, r), cols);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

json action_json(const ActionTensor& t) {
  json out = json::array();
  for (const auto& m : t) out.push_back(matrix_json(m));
  return out;
}

ActionTensor action_from(const json& j, const std::string& where, std::size_t algDim, std::size_t dimH) {
  array_of(j, where, algDim);
  ActionTensor t;
  for (std::size_t k = 0; k < algDim; ++k) t.push_back(matrix_from(j[k], at(where, k), dimH, dimH));
  return t;
}

// stored per coordinate, serialized as dimH x dimH entries of algebra elements
json inner_json(const InnerTensor& g, std::size_t dimH) {
  json out = json::array();
  for (std::size_t p = 0; p < dimH; ++p) {
    json row = json::array();
    for (std::size_t q = 0; q < dimH; ++q) {
      Vector v;
      for (const auto& m : g) v.push_back(m(p, q));
      row.push_back(vector_json(v));
    }
    out.push_back(std::move(row));
  }
  return out;
}

InnerTensor inner_from(const json& j, const std::string& where, std::size_t algDim, std::size_t dimH) {
  array_of(j, where, dimH);
  InnerTensor g(algDim, ExactMatrix(dimH, dimH));
  for (std::size_t p = 0; p < dimH; ++p) {
    array_of(j[p], at(where, p), dimH);
    for (std::size_t q = 0; q < dimH; ++q) {
      Vector v = vector_from(j[p][q], at(at(where, p), q), algDim);
      for (std::size_t c = 0; c < algDim; ++c) g[c](p, q) = v[c];
    }
  }
  return g;
}

AlgebraHom hom_from(const json& j, const std::string& where, std::size_t src, std::size_t dst) {
  AlgebraHom h = AlgebraHom::from_matrix(matrix_from(j, where, dst, src));
  h.source_dim = src;
  h.target_dim = dst;
  return h;
}

std::vector<Vector> basis_from(const json& j, const std::string& where, std::size_t dimH) {
  array_of(j, where);
  std::vector<Vector> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(vector_from(j[k], at(where, k), dimH));
  return out;
}

}  // namespace

json to_json(const GaussianRational& z) {
  return json::array({integer(z.re().get_num()), integer(z.re().get_den()), integer(z.im().get_num()),
                      integer(z.im().get_den())});
}

GaussianRational rational_from_json(const json& j, const std::string& where) {
  array_of(j, where, 4);
  mpz_class v[4];
  for (std::size_t k = 0; k < 4; ++k) v[k] = integer_from(j[k], at(where, k));
  if (v[1] == 0 || v[3] == 0) parse_error(where, "zero denominator");
  return GaussianRational(mpq_class(v[0], v[1]), mpq_class(v[2], v[3]));
}

json spec_to_json(const QuadModuleSpec& s) {
  json j;
  j["schema_version"] = kSpecSchema;
  j["name"] = s.name;
  j["algebras"] = {{"A", s.algebraA.dim}, {"B1", s.algebraB1.dim}, {"B2", s.algebraB2.dim}};
  j["dimH"] = s.dimH;
  j["embed1"] = matrix_json(s.embed1.matrix);
  j["embed2"] = matrix_json(s.embed2.matrix);
  j["psi1"] = matrix_json(s.psi1.matrix);
  j["psi2"] = matrix_json(s.psi2.matrix);
  j["rightA"] = action_json(s.rightA);
  j["varphi1"] = action_json(s.varphi1);
  j["varphi2"] = action_json(s.varphi2);
  j["phi1"] = action_json(s.phi1);
  j["phi2"] = action_json(s.phi2);
  j["innerA"] = inner_json(s.innerA, s.dimH);
  j["innerB1"] = inner_json(s.innerB1, s.dimH);
  j["innerB2"] = inner_json(s.innerB2, s.dimH);
  j["basisU"] = json::array();
  for (const auto& u : s.basisU) j["basisU"].push_back(vector_json(u));
  j["basisV"] = json::array();
  for (const auto& v : s.basisV) j["basisV"].push_back(vector_json(v));
  return j;
}

QuadModuleSpec spec_from_json(const json& j) {
  const json& version = member(j, "schema_version", "");
  if (!version.is_string() || version.get<std::string>() != kSpecSchema)
    throw Error("SchemaVersionMismatch",
                "expected schema_version \"" + std::string(kSpecSchema) + "\", found " + version.dump());
  QuadModuleSpec s;
  if (auto it = j.find("name"); it != j.end() && it->is_string()) s.name = it->get<std::string>();
  const json& alg = member(j, "algebras", "");
  s.algebraA = {count_from(member(alg, "A", "algebras"), "algebras.A"), "A"};
  s.algebraB1 = {count_from(member(alg, "B1", "algebras"), "algebras.B1"), "B1"};
  s.algebraB2 = {count_from(member(alg, "B2", "algebras"), "algebras.B2"), "B2"};
  s.dimH = count_from(member(j, "dimH", ""), "dimH");
  const std::size_t a = s.algebraA.dim, b1 = s.algebraB1.dim, b2 = s.algebraB2.dim, n = s.dimH;
  s.embed1 = hom_from(member(j, "embed1", ""), "embed1", a, b1);
  s.embed2 = hom_from(member(j, "embed2", ""), "embed2", a, b2);
  s.psi1 = hom_from(member(j, "psi1", ""), "psi1", a, b1);
  s.psi2 = hom_from(member(j, "psi2", ""), "psi2", a, b2);
  s.rightA = action_from(member(j, "rightA", ""), "rightA", a, n);
  s.varphi1 = action_from(member(j, "varphi1", ""), "varphi1", b1, n);
  s.varphi2 = action_from(member(j, "varphi2", ""), "varphi2", b2, n);
  s.phi1 = action_from(member(j, "phi1", ""), "phi1", b1, n);
  s.phi2 = action_from(member(j, "phi2", ""), "phi2", b2, n);
  s.innerA = inner_from(member(j, "innerA", ""), "innerA", a, n);
  s.innerB1 = inner_from(member(j, "innerB1", ""), "innerB1", b1, n);
  s.innerB2 = inner_from(member(j, "innerB2", ""), "innerB2", b2, n);
  s.basisU = basis_from(member(j, "basisU", ""), "basisU", n);
  s.basisV = basis_from(member(j, "basisV", ""), "basisV", n);
  s.check_dimensions();
  return s;
}

QuadModuleSpec parse_spec_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error("ParseError", origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
  try {
    return spec_from_json(j);
  } catch (const Error& e) {
    if (e.kind() == "ParseError") throw Error("ParseError", origin + ": " + e.detail());
    throw;
  }
}

QuadModuleSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ParseError", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str(), path);
}

json to_json(const IntegerMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(integer(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const FGAbelianGroup& g) {
  json factors = json::array();
  for (const auto& d : g.invariantFactors) factors.push_back(integer(d));
  return {{"freeRank", g.freeRank}, {"factors", factors}, {"text", g.to_string()}};
}

json to_json(const CheckResult& c) {
  json w = nullptr;
  if (c.window) w = {{"lo", c.window->lo}, {"hi", c.window->hi}};
  return {{"id", c.id},         {"citation", c.citation}, {"window", w},
          {"pass", c.pass},     {"witness", c.witness},   {"informational", c.informational}};
}

json to_json(const Report& r) {
  json out = json::array();
  for (const auto& c : r.checks()) out.push_back(to_json(c));
  return out;
}

}  // namespace quadmod
