#include "quadmod/io.hpp"
#include "quadmod/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace quadmod;

int main(int argc, char** argv) {
  CLI::App app{"quadmod: exact checks for Hilbert C*-quad modules"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  std::string builtin, input, format = "text", output;
  std::size_t depth = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"validate", "module axioms, finite type, lambda maps"},
      {"fock", "truncated Fock space, creation operators and relations (H)"},
      {"ck", "Cuntz-Krieger generators and the matrix H"},
      {"ktheory", "K0 and K1 of the Cuntz-Krieger algebra"},
      {"full", "every stage"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* b = sub->add_option("--builtin", builtin, "mn:M,N or perm:d,(cycles),(cycles)");
    auto* i = sub->add_option("--input", input, "quadmod-spec-v1 JSON file");
    b->excludes(i);
    sub->add_option("--depth", depth, "Fock truncation depth K (default 3)");
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--output", output, "write the report here instead of stdout");
    sub->add_option("--seed", cfg.seed, "seed for the random-matrix self-check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    cfg.command = parse_command(app.get_subcommands().front()->get_name());
    if (builtin.empty() == input.empty()) throw Error("InvalidParameter", "exactly one of --builtin, --input is required");
    cfg.builtin = !builtin.empty();
    cfg.source = cfg.builtin ? builtin : input;
    if (depth) cfg.depth = depth;
    cfg.maxDim = max_dim_from_env();

    RunResult r = run(cfg);
    std::string text = format == "json" ? render_json(r).dump(2) + "\n" : render_text(r);
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output);
      if (!out) throw Error("InvalidParameter", "cannot write '" + output + "'");
      out << text;
    }
    return r.exit_code();
  } catch (const Error& e) {
    std::cerr << "quadmod: " << e.what() << '\n';
    return is_input_error(e) ? 2 : 1;
  }
}
