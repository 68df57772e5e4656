#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chameleon/conjugacy.hpp"
#include "chameleon/workbench.hpp"

using namespace chameleon;

namespace {

int emit(const RunReport& r, bool json) {
  if (json) {
    std::cout << r.to_json().dump(2) << '\n';
  } else {
    std::cout << r.to_text();
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with PL circle maps, Markov partitions and their conjugators"};
  app.require_subcommand(1);

  std::string sub, file;
  long depth = -1;
  bool json = false;
  auto* part = app.add_subcommand("partition", "Analyse a partition file");
  part->add_option("sub", sub, "validate | sigma | conjugator-eval | equal-pairs | pl-criterion | dyadic-status")
      ->required();
  part->add_option("file", file, "JSON file {\"base\": n, \"lengths\": [...]}")->required();
  part->add_option("--depth", depth, "Derivation depth");
  part->add_flag("--json", json, "Print the report as JSON");

  std::vector<int> ids;
  auto* ex = app.add_subcommand("paper-examples", "Check the five worked examples against golden values");
  ex->add_option("--ids", ids, "Comma separated example ids")->delimiter(',');
  ex->add_flag("--json", json, "Print the report as JSON");

  std::uint64_t seed = 0;
  long count = 0;
  auto* rt = app.add_subcommand("roundtrip", "Recover random T_{2,1} conjugators from their g");
  rt->add_option("--seed", seed, "RNG seed")->required();
  rt->add_option("--count", count, "Number of trials")->required();
  rt->add_flag("--json", json, "Print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    default_memo_depth();
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e);
  }

  if (*part) {
    std::optional<long> d;
    if (part->count("--depth") > 0) d = depth;
    return emit(cmd_partition(sub, file, d), json);
  }
  if (*ex) return emit(cmd_paper_examples(ids), json);
  return emit(cmd_roundtrip(seed, count), json);
}
