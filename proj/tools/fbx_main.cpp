#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fbx/expr.hpp"
#include "fbx/job.hpp"

namespace {

constexpr int kExitInvalidInput = 2;
constexpr int kExitStabilization = 3;
constexpr int kExitInternal = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fbx::JobError({"cannot open '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Cli {
  std::string job_path;
  std::string command;
  fbx::RunOptions opts;
  int truncation = -1;
  int max_truncation = -1;
  int depth = -1;
  bool json = false;
};

void add_common(CLI::App* cmd, Cli& cli, bool needs_job = true) {
  if (needs_job) cmd->add_option("job", cli.job_path, "job JSON file")->required();
  cmd->add_option("--truncation", cli.truncation, "fixed local truncation (0: stabilize)");
  cmd->add_option("--max-truncation", cli.max_truncation, "doubling cap for stabilization");
  cmd->add_flag("--json", cli.json, "emit the JSON report");
  cmd->add_flag("--verbose", cli.opts.verbose, "include extra diagnostics");
}

int run(const Cli& cli) {
  fbx::JobSpec job = fbx::parse_job(read_file(cli.job_path));
  if (cli.truncation >= 0) job.truncation = cli.truncation;
  if (cli.max_truncation >= 0) job.max_truncation = cli.max_truncation;
  if (cli.depth >= 0) job.depth = cli.depth;
  fbx::Json rep = fbx::run_job(cli.command, job, cli.opts);
  if (cli.json || job.format == "json") {
    std::cout << rep.dump(2) << "\n";
  } else {
    std::cout << fbx::report_tables(rep);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fbx: de Rham cohomology of flat connections on punctured P^1"};
  app.require_subcommand(1);

  Cli cli;
  for (const char* name : {"cohomology", "boundary", "compact", "duality", "tangent"}) {
    CLI::App* c = app.add_subcommand(name, std::string(name) + " report");
    add_common(c, cli);
    if (std::string(name) == "boundary")
      c->add_option("--point", cli.opts.point, "restrict to one boundary point");
    c->callback([&cli, name] { cli.command = name; });
  }
  CLI::App* res = app.add_subcommand("residues", "residues of a global 1-form");
  add_common(res, cli);
  res->add_option("--form", cli.opts.form, "global 1-form, e.g. \"1/t dt\"")->required();
  res->add_option("--point", cli.opts.point, "restrict to one boundary point");
  res->callback([&cli] { cli.command = "residues"; });

  CLI::App* tate = app.add_subcommand("tate", "finite-stage tower report");
  add_common(tate, cli);
  tate->add_option("--twist", cli.opts.twist, "twist a of O(a)");
  tate->add_option("--depth", cli.depth, "tower depth");
  tate->callback([&cli] { cli.command = "tate"; });

  CLI::App* self = app.add_subcommand("selftest", "run the bundled golden corpus");
  self->callback([&cli] { cli.command = "selftest"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidInput;
  }

  try {
    if (cli.command == "selftest") {
      std::vector<std::string> failures = fbx::selftest();
      for (const std::string& f : failures) std::cerr << "selftest failure: " << f << "\n";
      std::cout << (failures.empty() ? "selftest passed\n" : "selftest FAILED\n");
      return failures.empty() ? 0 : kExitInternal;
    }
    return run(cli);
  } catch (const fbx::JobError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const fbx::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const fbx::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const fbx::StabilizationError& e) {
    std::cerr << "stabilization cap exceeded: " << e.what() << "\n";
    return kExitStabilization;
  } catch (const std::exception& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return kExitInternal;
  }
}
