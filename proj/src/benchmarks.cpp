#include "coinroute/benchmarks.hpp"

#include <string>

#include "coinroute/error.hpp"

namespace coinroute {

const char* to_string(Family f) {
  switch (f) {
    case Family::Bootes2: return "Bootes2";
    case Family::Bootes4: return "Bootes4";
    case Family::Hex: return "Hex";
    case Family::HexLog: return "HexLog";
    case Family::Butterfly: return "Butterfly";
    case Family::Ray: return "Ray";
  }
  return "?";
}

const char* to_string(Variant v) { return v == Variant::NetA ? "NetA" : "NetB"; }

std::optional<Family> parse_family(std::string_view text) {
  for (Family f : {Family::Bootes2, Family::Bootes4, Family::Hex, Family::HexLog, Family::Butterfly,
                   Family::Ray})
    if (text == to_string(f)) return f;
  return std::nullopt;
}

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "NetA" || text == "A") return Variant::NetA;
  if (text == "NetB" || text == "B") return Variant::NetB;
  return std::nullopt;
}

int source_count(Family f) {
  switch (f) {
    case Family::Hex:
    case Family::HexLog: return 1;
    case Family::Butterfly: return 3;
    default: return 2;
  }
}

namespace {

class Builder {
 public:
  Builder& source(const std::string& id) { return add(id, NodeKind::Source, {}); }
  Builder& destination(const std::string& id) { return add(id, NodeKind::Destination, {}); }
  Builder& dummy(const std::string& id) { return add(id, NodeKind::Dummy, {}); }
  Builder& router(const std::string& id, CostFunction f) { return add(id, NodeKind::Router, f); }
  Builder& edge(const std::string& a, const std::string& b) {
    spec_.edges.push_back({a, b});
    return *this;
  }
  /// a -> b -> c -> ...
  Builder& chain(std::initializer_list<std::string> ids) {
    auto it = ids.begin();
    for (auto next = it + 1; next != ids.end(); ++it, ++next) edge(*it, *next);
    return *this;
  }
  Builder& flow(const std::string& s, const std::string& d, std::uint32_t packets) {
    spec_.commodities.push_back({s, d, packets});
    return *this;
  }
  NetworkSpec take() { return std::move(spec_); }

 private:
  Builder& add(const std::string& id, NodeKind kind, CostFunction f) {
    spec_.nodes.push_back({id, kind, f});
    return *this;
  }
  NetworkSpec spec_;
};

// Two disjoint two-router highways from S to D; the cheap (10x) router comes
// first on the left and last on the right. Net B adds the bridge V3 from the
// lower-left cheap router to the upper-right cheap router, so the shortcut
// crosses both cheap routers.
NetworkSpec hex(bool net_b, std::uint32_t load, CostFunction cheap, CostFunction expensive,
                CostFunction bridge) {
  Builder b;
  b.source("S").router("V1L", cheap).dummy("V0L").router("V2L", expensive);
  b.router("V2R", expensive).dummy("V0R").router("V1R", cheap);
  b.destination("D");
  b.chain({"S", "V1L", "V0L", "V2L", "D"});
  b.chain({"S", "V2R", "V0R", "V1R", "D"});
  if (net_b) b.router("V3", bridge).chain({"V1L", "V3", "V1R"});
  b.flow("S", "D", load);
  return b.take();
}

// S1 feeds V1 and S2 feeds V2, both into D. Net B lets S1 reach V2 via V3.
NetworkSpec bootes(bool net_b, std::uint32_t s1, std::uint32_t s2, CostFunction v1,
                   CostFunction v2, CostFunction v3) {
  Builder b;
  b.source("S1").source("S2").dummy("V0a").dummy("V0b");
  b.router("V1", v1).router("V2", v2).destination("D");
  b.chain({"S1", "V0a", "V1", "D"});
  b.chain({"S2", "V0b", "V2", "D"});
  if (net_b) b.router("V3", v3).chain({"S1", "V3", "V2"});
  b.flow("S1", "D", s1).flow("S2", "D", s2);
  return b.take();
}

// S1 -> D1 on the left; S2 and S3 -> D2 on the right. S2 picks between the
// 10x router V2 and the V1b -> V3 line it shares with S3. Net B gives S1 a
// route through V3x into V2, which is also wired to D1.
NetworkSpec butterfly(bool net_b, std::uint32_t s1, std::uint32_t s2, std::uint32_t s3) {
  const auto v1 = CostFunction::log1p(50);
  const auto v2 = CostFunction::linear(10);
  const auto v3 = CostFunction::log1p(0);
  Builder b;
  b.source("S1").source("S2").source("S3").dummy("V0a").dummy("V0b");
  b.router("V1a", v1).router("V2", v2).router("V1b", v1).router("V3", v3);
  b.destination("D1").destination("D2");
  b.chain({"S1", "V0a", "V1a", "D1"});
  b.chain({"S2", "V0b", "V2", "D2"});
  b.edge("V2", "D1");
  b.chain({"S2", "V1b", "V3", "D2"});
  b.edge("S3", "V1b");
  if (net_b) b.router("V3x", v3).chain({"S1", "V3x", "V2"});
  b.flow("S1", "D1", s1).flow("S2", "D2", s2).flow("S3", "D2", s3);
  return b.take();
}

// Bottom row A1..A4 and top row T1..T4 joined by dummy midpoints M1..M4.
// S1 enters through E1 onto conduits A1-T1 and A2-T2; S2 through E2 onto
// A3-T3 and A4-T4. T2 and T3 are wired to both destinations. Net B adds the
// drawn crossings: S1 -> F1 -> A3, S2 -> F2 -> A2, A2 -> C1 -> T1 and
// A3 -> C2 -> T4.
NetworkSpec ray(bool net_b, std::uint32_t s1, std::uint32_t s2) {
  const auto v1 = CostFunction::log1p(50);
  const auto v2 = CostFunction::linear(10);
  const auto v3 = CostFunction::log1p(10);
  Builder b;
  b.source("S1").source("S2").router("E1", v3).router("E2", v3);
  b.router("A1", v1).router("A2", v2).router("A3", v2).router("A4", v1);
  b.dummy("M1").dummy("M2").dummy("M3").dummy("M4");
  b.router("T1", v2).router("T2", v1).router("T3", v1).router("T4", v2);
  b.destination("D1").destination("D2");
  b.chain({"S1", "E1", "A1", "M1", "T1", "D1"});
  b.chain({"E1", "A2", "M2", "T2", "D1"});
  b.chain({"S2", "E2", "A3", "M3", "T3", "D2"});
  b.chain({"E2", "A4", "M4", "T4", "D2"});
  b.edge("T2", "D2").edge("T3", "D1");
  if (net_b) {
    b.router("F1", v3).router("F2", v3).router("C1", v3).router("C2", v3);
    b.chain({"S1", "F1", "A3"}).chain({"S2", "F2", "A2"});
    b.chain({"A2", "C1", "T1"}).chain({"A3", "C2", "T4"});
  }
  b.flow("S1", "D1", s1).flow("S2", "D2", s2);
  return b.take();
}

}  // namespace

NetworkSpec build_benchmark(BenchmarkId id, std::span<const std::uint32_t> loads) {
  const int expected = source_count(id.family);
  if (static_cast<int>(loads.size()) != expected) {
    throw Error(ErrorKind::Config, std::string(to_string(id.family)) + " expects " +
                                       std::to_string(expected) + " source loads, got " +
                                       std::to_string(loads.size()));
  }
  const bool b = id.variant == Variant::NetB;
  switch (id.family) {
    case Family::Hex:
      return hex(b, loads[0], CostFunction::linear(10), CostFunction::linear(1, 50),
                 CostFunction::linear(1, 10));
    case Family::HexLog:
      return hex(b, loads[0], CostFunction::linear(10), CostFunction::log1p(50),
                 CostFunction::log1p(0));
    case Family::Bootes2:
      // V2 = 2x^2, see README.
      return bootes(b, loads[0], loads[1], CostFunction::log1p(10), CostFunction::quadratic(2),
                    CostFunction::log1p(0));
    case Family::Bootes4:
      return bootes(b, loads[0], loads[1], CostFunction::log1p(50), CostFunction::linear(10),
                    CostFunction::log1p(0));
    case Family::Butterfly: return butterfly(b, loads[0], loads[1], loads[2]);
    case Family::Ray: return ray(b, loads[0], loads[1]);
  }
  throw Error(ErrorKind::Config, "unknown benchmark family");
}

}  // namespace coinroute
