#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coinroute/network.hpp"

namespace coinroute {

enum class Family { Bootes2, Bootes4, Hex, HexLog, Butterfly, Ray };
enum class Variant { NetA, NetB };

struct BenchmarkId {
  Family family = Family::Hex;
  Variant variant = Variant::NetA;
};

const char* to_string(Family f);
const char* to_string(Variant v);
std::optional<Family> parse_family(std::string_view text);
std::optional<Variant> parse_variant(std::string_view text);

/// Number of traffic sources (and hence the length of a load vector).
int source_count(Family f);

/// Builds the layered benchmark graph with the given per-source packets per
/// wave. Throws Error(Config) when the load vector has the wrong length.
NetworkSpec build_benchmark(BenchmarkId id, std::span<const std::uint32_t> loads);

}  // namespace coinroute
