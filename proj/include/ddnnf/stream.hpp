#pragma once

// Line protocol for interactive querying. One response line per request:
//
//   count                  -> #FM
//   count v <lit> [<lit>]  -> count with positive literals included and
//                             negative ones excluded, e.g. "count v 1 -3"
//   core | dead            -> variables, ascending, space separated
//   info                   -> nodes=<N> vars=<n> count=<#FM>
//   exit                   -> bye, session ends
//
// Failures: "error unknown-command", "error variable-out-of-range <v>".

#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "query.hpp"

namespace ddnnf {

class StreamSession {
 public:
  explicit StreamSession(const Ddnnf& d, OptimizationConfig cfg = {}) : d_(d), cfg_(cfg) {}

  bool finished() const { return finished_; }

  std::string respond(std::string_view line) {
    auto tokens = split(line);
    if (tokens.empty()) return unknown();
    const auto& cmd = tokens[0];

    if (cmd == "count") {
      if (tokens.size() == 1) return to_string(count_total(d_));
      if (tokens[1] != "v" || tokens.size() < 3) return unknown();
      std::vector<long long> lits;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        long long x{};
        auto tok = tokens[i];
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (ec != std::errc{} || p != tok.data() + tok.size()) return unknown();
        auto v = std::llabs(x);
        if (v == 0 || v > static_cast<long long>(d_.num_variables))
          return "error variable-out-of-range " + std::to_string(v);
        lits.push_back(x);
      }
      return to_string(query(d_, Assumptions::from_literals(lits), cfg_, scratch_).count);
    }
    if (tokens.size() != 1) return unknown();
    if (cmd == "core") return join(d_.core);
    if (cmd == "dead") return join(d_.dead);
    if (cmd == "info")
      return "nodes=" + std::to_string(d_.size()) + " vars=" + std::to_string(d_.num_variables) +
             " count=" + to_string(count_total(d_));
    if (cmd == "exit") {
      finished_ = true;
      return "bye";
    }
    return unknown();
  }

  // Serves requests until "exit" or end of input, flushing after each reply.
  void run(std::istream& in, std::ostream& out) {
    std::string line;
    while (!finished_ && std::getline(in, line)) out << respond(line) << '\n' << std::flush;
  }

 private:
  static std::string unknown() { return "error unknown-command"; }

  static std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
      auto start = i;
      while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
      if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
  }

  static std::string join(const std::vector<Var>& vs) {
    std::string s;
    for (auto v : vs) {
      if (!s.empty()) s += ' ';
      s += std::to_string(v);
    }
    return s;
  }

  const Ddnnf& d_;
  OptimizationConfig cfg_;
  Scratch scratch_;
  bool finished_ = false;
};

}  // namespace ddnnf
