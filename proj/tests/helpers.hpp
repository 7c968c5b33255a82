#pragma once

#include <string>
#include <vector>

#include "coinroute/benchmarks.hpp"
#include "coinroute/network.hpp"

namespace testing {

inline coinroute::CompiledNetwork bench(coinroute::Family f, coinroute::Variant v,
                                        std::vector<std::uint32_t> loads) {
  return coinroute::CompiledNetwork(coinroute::build_benchmark({f, v}, loads));
}

inline int node(const coinroute::CompiledNetwork& net, const std::string& id) {
  return *net.index_of(id);
}

inline int slot(const coinroute::CompiledNetwork& net, const std::string& id, int dest = 0) {
  return net.slot(node(net, id), dest);
}

struct AllBenchmarks {
  coinroute::Family family;
  coinroute::Variant variant;
  std::vector<std::uint32_t> loads;
};

inline std::vector<AllBenchmarks> every_benchmark() {
  using coinroute::Family;
  std::vector<AllBenchmarks> out;
  for (auto v : {coinroute::Variant::NetA, coinroute::Variant::NetB}) {
    out.push_back({Family::Hex, v, {3}});
    out.push_back({Family::HexLog, v, {2}});
    out.push_back({Family::Bootes2, v, {2, 1}});
    out.push_back({Family::Bootes4, v, {4, 2}});
    out.push_back({Family::Butterfly, v, {2, 1, 3}});
    out.push_back({Family::Ray, v, {3, 4}});
  }
  return out;
}

}  // namespace testing
