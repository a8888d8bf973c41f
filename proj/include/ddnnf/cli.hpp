#pragma once

// Command-line driver shared by the ddnnife tool and its tests.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "format.hpp"
#include "oracle.hpp"
#include "preprocess.hpp"
#include "query.hpp"
#include "stream.hpp"

namespace ddnnf::cli {

enum class Mode { Count, Feature, Config, AllFeatures, QueriesFile, Stream, SaveSmoothed, Validate, VariantMatrix };

enum ExitCode : int { Ok = 0, ParseFailure = 1, BadOptions = 2, IoFailure = 3 };

struct CliOptions {
  std::filesystem::path input;
  std::optional<Format> format;  // detected when empty
  std::optional<Var> num_variables;
  Mode mode = Mode::Count;
  Var feature = 0;
  std::vector<long long> config;
  std::filesystem::path queries_path;
  std::filesystem::path save_path;
  std::optional<std::filesystem::path> csv_path;
  OptimizationConfig optimizations;
  unsigned threads = 1;
  // variant matrix
  std::vector<std::size_t> chunk_sizes{2, 5, 10, 20, 50};
  std::size_t configs_per_chunk = 50;
  std::uint64_t seed = 42;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + p.string());
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << content) || !out.flush()) throw IoError("cannot write " + p.string());
}

inline Ddnnf load(const CliOptions& opts) {
  auto text = read_file(opts.input);
  auto format = opts.format ? *opts.format : detect_format(text);
  if (format == Format::D4 && !opts.num_variables)
    throw std::invalid_argument("d4 input needs --num-variables");
  return parse(text, format, opts.num_variables);
}

namespace detail {

// Non-blank request lines, up to and including the first "exit".
inline std::vector<std::string> read_queries(const std::filesystem::path& p) {
  std::istringstream in(read_file(p));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    lines.push_back(line);
    auto last = line.find_last_not_of(" \t\r");
    if (line.substr(first, last - first + 1) == "exit") break;
  }
  return lines;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

// Loads, preprocesses and answers according to `opts.mode`. Stream mode
// reads requests from `in`.
inline int run_once(const CliOptions& opts, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    if (opts.threads == 0) throw std::invalid_argument("--threads must be positive");
    Ddnnf parsed = load(opts);

    if (opts.mode == Mode::Validate) {
      auto vs = validate(parsed);
      if (vs.empty()) out << "ok\n";
      for (const auto& v : vs)
        out << "node " << v.node << ' ' << violation_name(v.kind) << ' ' << v.detail << '\n';
      return Ok;
    }

    Ddnnf d = preprocess(parsed);
    const auto& cfg = opts.optimizations;
    auto emit_single = [&](const std::string& label, const Count& c) {
      if (opts.csv_path) write_file(*opts.csv_path, "query,cardinality\n" + detail::csv_escape(label) + "," +
                                                        to_string(c) + "\n");
      out << to_string(c) << '\n';
    };

    switch (opts.mode) {
      case Mode::Count:
        emit_single("count", count_total(d));
        break;
      case Mode::Feature: {
        Assumptions a({opts.feature}, {});
        emit_single(query_label(a), query(d, a, cfg).count);
        break;
      }
      case Mode::Config: {
        auto a = Assumptions::from_literals(opts.config);
        emit_single(query_label(a), query(d, a, cfg).count);
        break;
      }
      case Mode::AllFeatures: {
        std::string csv = "feature,cardinality\n";
        for (const auto& [v, c] : count_all_features(d, cfg, opts.threads))
          csv += std::to_string(v) + "," + to_string(c) + "\n";
        if (opts.csv_path)
          write_file(*opts.csv_path, csv);
        else
          out << csv;
        break;
      }
      case Mode::QueriesFile: {
        auto lines = detail::read_queries(opts.queries_path);
        std::vector<std::string> answers(lines.size());
        parallel_for(lines.size(), opts.threads, [&](std::size_t i, Scratch&) {
          StreamSession session(d, cfg);
          answers[i] = session.respond(lines[i]);
        });
        if (opts.csv_path) {
          std::string csv = "query,result\n";
          for (std::size_t i = 0; i < lines.size(); ++i)
            csv += detail::csv_escape(lines[i]) + "," + detail::csv_escape(answers[i]) + "\n";
          write_file(*opts.csv_path, csv);
        } else {
          for (const auto& a : answers) out << a << '\n';
        }
        break;
      }
      case Mode::Stream: {
        StreamSession session(d, cfg);
        session.run(in, out);
        break;
      }
      case Mode::SaveSmoothed:
        write_file(opts.save_path, write_c2d(d));
        break;
      case Mode::VariantMatrix: {
        AssumptionBatch batch{{}, opts.chunk_sizes, opts.seed};
        if (count_total(d) > 0) batch = generate_satisfiable_configs(d, opts.chunk_sizes, opts.configs_per_chunk, opts.seed);
        auto report = run_variant_matrix(d, batch);
        auto csv = variant_summary_csv(report);
        if (opts.csv_path)
          write_file(*opts.csv_path, csv);
        else
          out << csv;
        break;
      }
      case Mode::Validate:
        break;
    }
    return Ok;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return IoFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::VariableOutOfRange ? BadOptions : ParseFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return BadOptions;
  }
}

}  // namespace ddnnf::cli
