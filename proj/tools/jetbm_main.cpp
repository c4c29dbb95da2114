// jetbm command line: evaluate the geometry at configured points, run the
// verification suite, or integrate a geodesic problem, emitting a JSON
// report.  Exit status: 0 all checks pass, 1 a check failed, 2 config or
// domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <jetbm/jetbm.hpp>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw jetbm::ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw jetbm::ConfigError("cannot open output file: " + path);
  out << text;
}

struct Args {
  std::string config_path;
  std::string out_path;
  std::int64_t seed = -1;
  int samples = -1;
};

jetbm::RunConfig load(const Args& a) {
  jetbm::RunConfig cfg = jetbm::io::parse_run_config(read_file(a.config_path));
  if (a.seed >= 0) cfg.verify.seed = std::uint64_t(a.seed);
  if (a.samples > 0) cfg.verify.samples = a.samples;
  if (!a.out_path.empty()) cfg.output = a.out_path;
  return cfg;
}

void add_common(CLI::App* cmd, Args& args) {
  cmd->add_option("--config", args.config_path, "run configuration file")
      ->required();
  cmd->add_option("--out", args.out_path, "report path (overrides config)");
  cmd->add_option("--seed", args.seed, "verification seed (overrides config)");
  cmd->add_option("--samples", args.samples,
                  "verification sample count (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometry of conformally deformed Berwald-Moor metrics on J1(R,M^n)"};
  app.require_subcommand(1);

  Args args;
  CLI::App* eval = app.add_subcommand("eval", "tensors at configured points");
  CLI::App* verify = app.add_subcommand("verify", "run the check suite");
  CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a geodesic problem");
  add_common(eval, args);
  add_common(verify, args);
  add_common(geodesic, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? jetbm::exit_config_error : jetbm::exit_ok;
  }

  try {
    jetbm::RunConfig cfg = load(args);
    jetbm::RunResult result;
    if (eval->parsed()) {
      result = jetbm::run_eval(cfg);
    } else if (verify->parsed()) {
      result = jetbm::run_verify(cfg);
      for (const auto& ck : result.report["checks"])
        std::cout << (ck["pass"].get<bool>() ? "PASS " : "FAIL ")
                  << ck["name"].get<std::string>()
                  << "  max_dev=" << ck["max_dev"].get<double>()
                  << "  tol=" << ck["tol"].get<double>() << "\n";
    } else {
      result = jetbm::run_geodesic(cfg);
    }
    write_file(cfg.output, jetbm::serialize_report(result.report));
    std::cout << "report written to " << cfg.output << "\n";
    return result.exit_code;
  } catch (const jetbm::ParseError& e) {
    std::cerr << "error: expression: " << e.what() << "\n";
    return jetbm::exit_config_error;
  } catch (const jetbm::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return jetbm::exit_config_error;
  } catch (const jetbm::DomainError& e) {
    std::cerr << "error: domain: " << e.what() << "\n";
    return jetbm::exit_config_error;
  }
}
