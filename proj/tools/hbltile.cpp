#include "hbl/pipeline.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string readInput(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hbl::DocumentError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<hbl::Integer> parseMemories(const std::vector<std::string>& raw) {
  std::vector<hbl::Integer> out;
  for (const auto& s : raw) {
    hbl::Integer m;
    if (m.set_str(s, 10) != 0 || m < 1) throw CLI::ValidationError("--memory", "'" + s + "' is not a positive integer");
    out.push_back(m);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communication-optimal tilings of loop nests from their array accesses"};
  app.require_subcommand(1);

  std::string input;
  std::string format = "json";
  hbl::RunOptions options;
  std::vector<std::string> memories;
  std::string tilingPath;
  std::int64_t window = -1;

  auto common = [&](CLI::App* sub) {
    sub->add_option("problem", input, "Problem file (JSON or loop nest), '-' for stdin")->required();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--max-closure", options.maxClosureSize,
                    "Cap on the kernel sum/intersection closure")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget", options.budget, "Maximum points enumerated per tile")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--strict", options.strict, "Fail when the constraint set is partial");
  };

  auto* analyze = app.add_subcommand("analyze", "Compute s_HBL, the dual flag and the tile shape");
  common(analyze);

  auto* tile = app.add_subcommand("tile", "Build the tile and its translation set for one memory size");
  common(tile);
  tile->add_option("--memory,-M", memories, "Fast memory size M")->required()->expected(1);
  tile->add_flag("--points", options.emitPoints, "List every tile point");

  auto* verify = app.add_subcommand("verify", "Brute-force check of tiles over a memory sweep");
  common(verify);
  verify->add_option("--memory,-M", memories, "Memory size (repeatable; default: a sweep with exact side lengths)");
  verify->add_option("--window", window, "Cover-check radius R")->check(CLI::NonNegativeNumber);
  verify->add_option("--tiling", tilingPath, "Verify a tiling from a `tile` report instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(hbl::ExitCode::Usage);
  }
  if (window >= 0) options.window = window;

  hbl::RunResult result;
  try {
    hbl::ProblemDocument doc = hbl::parseProblem(readInput(input));
    if (*analyze) {
      result = hbl::runAnalyze(doc, options);
    } else if (*tile) {
      result = hbl::runTile(doc, parseMemories(memories).front(), options);
    } else if (!tilingPath.empty()) {
      result = hbl::runVerifyTiling(doc, nlohmann::json::parse(readInput(tilingPath)), options);
    } else {
      result = hbl::runVerify(doc, parseMemories(memories), options);
    }
  } catch (const hbl::DocumentError& e) {
    std::cerr << "hbltile: " << e.what() << "\n";
    return static_cast<int>(hbl::ExitCode::Usage);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "hbltile: " << e.what() << "\n";
    return static_cast<int>(hbl::ExitCode::Usage);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "hbltile: invalid tiling file: " << e.what() << "\n";
    return static_cast<int>(hbl::ExitCode::Usage);
  } catch (const std::invalid_argument& e) {
    std::cerr << "hbltile: " << e.what() << "\n";
    return static_cast<int>(hbl::ExitCode::Usage);
  } catch (const hbl::BudgetExceeded& e) {
    std::cerr << "hbltile: " << e.what() << "\n";
    return static_cast<int>(hbl::ExitCode::BudgetExceeded);
  } catch (const std::exception& e) {
    std::cerr << "hbltile: internal error: " << e.what() << "\n";
    return static_cast<int>(hbl::ExitCode::Internal);
  }

  std::cout << (format == "text" ? hbl::renderText(result.report) : hbl::dumpReport(result.report));
  for (const auto& d : result.diagnostics) std::cerr << "hbltile: " << d << "\n";
  return static_cast<int>(result.code);
}
