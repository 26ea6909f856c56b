// Writes the Z^2 site-percolation crossing threshold fixture.
//   z2_site_fixture <out.json> [L] [trials] [seed]
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "z2_site.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: z2_site_fixture <out.json> [L] [trials] [seed]\n";
    return 1;
  }
  const int L = argc > 2 ? std::atoi(argv[2]) : 128;
  const std::size_t trials = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 2000;
  const std::uint64_t seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 593;

  oracle::Z2SiteSweep sweep(L, 0.25);
  const auto ks = sweep.thresholds(trials, seed);
  const double p_c = sweep.half_point(ks);
  // Half-width of the 0.5-crossing point from the spread of per-trial counts.
  double mean = 0.0, sq = 0.0;
  for (const auto k : ks) {
    const double f = static_cast<double>(k) / static_cast<double>(sweep.sites());
    mean += f;
    sq += f * f;
  }
  mean /= static_cast<double>(ks.size());
  const double sd = std::sqrt(std::max(0.0, sq / static_cast<double>(ks.size()) - mean * mean));

  nlohmann::json j{{"L", L},
                   {"trials", trials},
                   {"seed", seed},
                   {"core_fraction", 0.25},
                   {"sites", sweep.sites()},
                   {"p_c", p_c},
                   {"lambda_c", -std::log1p(-p_c)},
                   {"threshold_sd", sd},
                   {"p_c_se", sd / std::sqrt(static_cast<double>(ks.size()))},
                   {"method", "newman-ziff, canonical crossing probability 0.5"}};
  std::ofstream(argv[1]) << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
  return 0;
}
