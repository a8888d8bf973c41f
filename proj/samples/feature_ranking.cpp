// Ranks the features of a c2d d-DNNF by the number of valid configurations
// containing them.
//
//   feature_ranking samples/running_example.nnf

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ddnnf/ddnnf.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: " << argv[0] << " <file.nnf>\n";
    return 2;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::cerr << "cannot open " << argv[1] << '\n';
    return 3;
  }
  std::stringstream text;
  text << in.rdbuf();

  try {
    auto d = ddnnf::preprocess(ddnnf::parse(text.str()));
    auto total = ddnnf::count_total(d);
    auto counts = ddnnf::count_all_features(d);
    std::stable_sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    std::cout << "#FM = " << total << '\n';
    for (const auto& [v, c] : counts) {
      std::cout << v << '\t' << c;
      if (d.is_core(v)) std::cout << "\tcore";
      if (d.is_dead(v)) std::cout << "\tdead";
      std::cout << '\n';
    }
  } catch (const ddnnf::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
