#pragma once

#include "quadmod/ck.hpp"
#include "quadmod/ktheory.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace quadmod {

enum class Command { validate, fock, ck, ktheory, full };
Command parse_command(const std::string& name);
std::string to_string(Command c);

struct RunConfig {
  Command command = Command::full;
  std::string source;  // builtin descriptor or path
  bool builtin = true;
  std::optional<std::size_t> depth;
  std::size_t maxDim = 20000;
  unsigned seed = 1;
};

/// A parsed input together with the builtin parameters it came from.
struct SpecSource {
  QuadModuleSpec spec;
  enum class Kind { mn, perm, file } kind = Kind::file;
  std::size_t M = 0, N = 0, d = 0;
  Permutation sigma, tau;
  std::string descriptor;
};

/// "mn:M,N" or "perm:d,(cycles),(cycles)" when builtin, else a quadmod-spec-v1 file.
SpecSource parse_spec_source(const std::string& source, bool builtin);

/// QUADMOD_MAX_DIM, default 20000. Throws InvalidParameter on garbage.
std::size_t max_dim_from_env();

struct Section {
  std::string name;
  Report report;
  std::vector<std::pair<std::string, std::string>> facts;  // empty key: print the value alone
  std::string note;                                        // why a stage was skipped
};

struct RunResult {
  Command command = Command::full;
  std::string source;
  std::optional<std::size_t> depth;  // absent when no Fock stage ran
  std::vector<Section> sections;

  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
};

/// Input problems (ParseError, SchemaVersionMismatch, InvalidParameter, DimensionMismatch,
/// DepthTooSmall, TooLarge) propagate as Error; anything raised while verifying becomes a
/// failed check in the stage that raised it.
RunResult run(const RunConfig& config);
bool is_input_error(const Error& e);

std::string render_text(const RunResult& r);
nlohmann::json render_json(const RunResult& r);

}  // namespace quadmod
