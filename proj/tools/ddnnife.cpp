// ddnnife: counting queries over compiled d-DNNFs.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ddnnf/cli.hpp"

namespace {

std::vector<long long> parse_literals(const std::string& s) {
  std::istringstream in(s);
  std::vector<long long> out;
  long long x;
  while (in >> x) {
    if (x == 0) throw CLI::ValidationError("--config", "literal 0 is not a variable");
    out.push_back(x);
  }
  if (!in.eof() || out.empty()) throw CLI::ValidationError("--config", "expected signed integers, e.g. \"1 -3\"");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ddnnf;
  using cli::Mode;

  CLI::App app{"Counting queries over d-DNNFs in c2d or d4 format"};
  cli::CliOptions opts;

  std::string format = "auto";
  std::optional<Var> feature;
  std::string config;
  std::string queries, save, csv;
  bool all_features = false, stream = false, validate_only = false, matrix = false;
  bool no_reuse = false, no_iterative = false, no_partial_traversal = false, no_partial_calculation = false,
       no_core_dead = false, naive = false;

  app.add_option("input", opts.input, "d-DNNF file")->required();
  app.add_option("-f,--format", format, "input format")->check(CLI::IsMember({"auto", "c2d", "d4"}));
  app.add_option("-n,--num-variables", opts.num_variables,
                 "number of variables; required for d4, overrides the c2d header");

  auto* modes = app.add_option_group("mode", "what to compute (default: total count)");
  modes->add_option("--feature", feature, "count configurations including variable V");
  modes->add_option("--config", config, "count configurations matching signed literals, e.g. \"1 -3\"");
  modes->add_flag("--all-features", all_features, "count every feature, CSV feature,cardinality");
  modes->add_option("--queries", queries, "answer one stream-protocol request per line of FILE");
  modes->add_flag("--stream", stream, "interactive line protocol on stdin/stdout");
  modes->add_option("--save-smoothed", save, "write the preprocessed circuit as c2d to FILE");
  modes->add_flag("--validate", validate_only, "report structural violations of the parsed circuit");
  modes->add_flag("--variant-matrix", matrix, "compare all optimization variants on generated queries");
  modes->require_option(0, 1);

  app.add_option("--csv", csv, "write results as CSV to FILE");
  app.add_option("-t,--threads", opts.threads, "worker threads for batch modes")->check(CLI::PositiveNumber);
  app.add_option("--bypass-fraction", opts.optimizations.traversal_bypass_fraction,
                 "skip partial traversal when a query fixes more than this fraction of variables")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", opts.seed, "seed for --variant-matrix query generation");
  app.add_flag("--no-reuse", no_reuse, "do not cache shared subcircuits (recursive evaluation)");
  app.add_flag("--no-iterative", no_iterative, "evaluate recursively instead of over the node list");
  app.add_flag("--no-partial-traversal", no_partial_traversal, "re-evaluate the whole circuit per query");
  app.add_flag("--no-partial-calculation", no_partial_calculation, "never fold cached And values");
  app.add_flag("--no-core-dead", no_core_dead, "do not use core/dead variables");
  app.add_flag("--or-folding", opts.optimizations.or_folding, "also fold cached Or values");
  app.add_flag("--naive", naive, "disable every optimization");

  try {
    app.parse(argc, argv);
    if (format == "c2d") opts.format = Format::C2d;
    if (format == "d4") opts.format = Format::D4;
    if (feature) {
      opts.mode = Mode::Feature;
      opts.feature = *feature;
    } else if (!config.empty()) {
      opts.mode = Mode::Config;
      opts.config = parse_literals(config);
    } else if (all_features) {
      opts.mode = Mode::AllFeatures;
    } else if (!queries.empty()) {
      opts.mode = Mode::QueriesFile;
      opts.queries_path = queries;
    } else if (stream) {
      opts.mode = Mode::Stream;
    } else if (!save.empty()) {
      opts.mode = Mode::SaveSmoothed;
      opts.save_path = save;
    } else if (validate_only) {
      opts.mode = Mode::Validate;
    } else if (matrix) {
      opts.mode = Mode::VariantMatrix;
    }
    if (!csv.empty()) opts.csv_path = csv;

    auto& o = opts.optimizations;
    if (naive) {
      auto keep = o.traversal_bypass_fraction;
      o = OptimizationConfig::naive();
      o.traversal_bypass_fraction = keep;
    }
    if (no_reuse) o.reuse_subtrees = o.iterative_traversal = o.partial_traversal = false;
    if (no_iterative) o.iterative_traversal = o.partial_traversal = false;
    if (no_partial_traversal) o.partial_traversal = false;
    if (no_partial_calculation) o.partial_calculation = false;
    if (no_core_dead) o.core_dead_shortcuts = false;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : cli::BadOptions;
  }

  std::ios::sync_with_stdio(false);
  return cli::run_once(opts, std::cin, std::cout, std::cerr);
}
