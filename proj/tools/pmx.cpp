// Command-line driver: runs .pm program files, dumps compiled match IR,
// and hosts an interactive session.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pmx/driver.hpp"
#include "pmx/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pmx - extensible pattern matching for S-expression programs"};
  app.require_subcommand(1);

  std::string file;
  pmx::RunOptions options;
  int match_index = -1;

  CLI::App* run = app.add_subcommand("run", "Run a program file");
  run->add_option("file", file, "program file (.pm)")->required();
  run->add_flag("--trace", options.trace,
                "print one line per match-execution event");
  run->add_flag("--dump-ir", options.dump_ir,
                "print each compiled match's IR before execution");
  run->add_option("--fuel", options.fuel,
                  "expander rewriting bound (default 64)");

  CLI::App* ir = app.add_subcommand(
      "ir", "Compile a program file and print match IR without running it");
  ir->add_option("file", file, "program file (.pm)")->required();
  ir->add_option("--match", match_index,
                 "dump only the match with this zero-based index");
  ir->add_option("--fuel", options.fuel,
                 "expander rewriting bound (default 64)");

  CLI::App* repl = app.add_subcommand("repl", "Interactive session");
  repl->add_option("--fuel", options.fuel,
                   "expander rewriting bound (default 64)");
  repl->add_flag("--trace", options.trace,
                 "print one line per match-execution event");
  repl->add_flag("--dump-ir", options.dump_ir,
                 "print each compiled match's IR");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    pmx::RunReport report = pmx::run_program(file, options);
    std::cout << report.output;
    std::cerr << report.error_output;
    return report.exit_code;
  }
  if (ir->parsed()) {
    try {
      std::optional<int> index;
      if (ir->count("--match") > 0) index = match_index;
      std::cout << pmx::dump_program_ir(file, index, options.fuel);
      return 0;
    } catch (const pmx::StaticError& e) {
      std::cerr << "error: " << pmx::error_kind_name(e.kind()) << ": "
                << e.what() << "\n";
      return 2;
    }
  }
  pmx::repl(std::cin, std::cout, std::cerr, options);
  return 0;
}
