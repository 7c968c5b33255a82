#include "coinroute/network.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include "coinroute/error.hpp"

namespace coinroute {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Source: return "source";
    case NodeKind::Router: return "router";
    case NodeKind::Dummy: return "dummy";
    case NodeKind::Destination: return "destination";
  }
  return "router";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "source") return NodeKind::Source;
  if (text == "router" || text == "cost-router") return NodeKind::Router;
  if (text == "dummy") return NodeKind::Dummy;
  if (text == "destination") return NodeKind::Destination;
  return std::nullopt;
}

const NodeSpec* NetworkSpec::find(std::string_view id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::vector<std::string> NetworkSpec::successors(std::string_view id) const {
  std::vector<std::string> out;
  for (const auto& e : edges)
    if (e.from == id) out.push_back(e.to);
  return out;
}

bool ValidationReport::has(std::string_view category) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.category == category; });
}

namespace {

struct Graph {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> in;
};

// Builds adjacency from the declared nodes; edges naming unknown nodes are
// reported and skipped.
Graph make_graph(const NetworkSpec& spec, std::vector<Violation>* violations) {
  Graph g;
  for (const auto& n : spec.nodes) {
    if (g.index.count(n.id)) {
      if (violations) violations->push_back({"duplicate-node", "node '" + n.id + "' declared twice"});
      continue;
    }
    g.index.emplace(n.id, static_cast<int>(g.names.size()));
    g.names.push_back(n.id);
  }
  g.out.resize(g.names.size());
  g.in.resize(g.names.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& e : spec.edges) {
    auto a = g.index.find(e.from);
    auto b = g.index.find(e.to);
    if (a == g.index.end() || b == g.index.end()) {
      if (violations)
        violations->push_back({"unknown-node", "edge " + e.from + " -> " + e.to + " names an undeclared node"});
      continue;
    }
    if (!seen.insert({a->second, b->second}).second) {
      if (violations) violations->push_back({"duplicate-edge", "edge " + e.from + " -> " + e.to + " declared twice"});
      continue;
    }
    g.out[a->second].push_back(b->second);
    g.in[b->second].push_back(a->second);
  }
  return g;
}

// Kahn's algorithm, ties resolved by declaration order. Returns fewer than
// names.size() entries when the graph has a cycle.
std::vector<int> topological_order(const Graph& g) {
  std::vector<int> indeg(g.names.size(), 0);
  for (const auto& succ : g.out)
    for (int v : succ) ++indeg[v];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < static_cast<int>(indeg.size()); ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<int> order;
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (int v : g.out[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  return order;
}

// Nodes from which `target` is reachable.
std::vector<char> reaches(const Graph& g, int target) {
  std::vector<char> mark(g.names.size(), 0);
  std::vector<int> stack{target};
  mark[target] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : g.in[v])
      if (!mark[u]) {
        mark[u] = 1;
        stack.push_back(u);
      }
  }
  return mark;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

ValidationReport validate_network(const NetworkSpec& spec) {
  ValidationReport report;
  auto& out = report.violations;
  Graph g = make_graph(spec, &out);

  std::vector<NodeKind> kinds(g.names.size(), NodeKind::Router);
  for (const auto& n : spec.nodes) {
    auto it = g.index.find(n.id);
    kinds[it->second] = n.kind;
    if (!n.cost.is_monotone())
      out.push_back({"cost-monotonicity", "node '" + n.id + "' has a negative cost coefficient"});
    if (n.kind == NodeKind::Dummy && !n.cost.is_zero())
      out.push_back({"dummy-cost", "dummy node '" + n.id + "' must have zero cost"});
    if ((n.kind == NodeKind::Source || n.kind == NodeKind::Destination) && !n.cost.is_zero())
      out.push_back({"endpoint-cost", "endpoint '" + n.id + "' must have zero cost"});
  }
  for (int v = 0; v < static_cast<int>(g.names.size()); ++v) {
    if (kinds[v] == NodeKind::Source && !g.in[v].empty())
      out.push_back({"source-incoming", "source '" + g.names[v] + "' has incoming edges"});
    if (kinds[v] == NodeKind::Destination && !g.out[v].empty())
      out.push_back({"destination-outgoing", "destination '" + g.names[v] + "' has outgoing edges"});
  }

  auto order = topological_order(g);
  const bool acyclic = order.size() == g.names.size();
  if (!acyclic) out.push_back({"acyclicity", "graph contains a directed cycle"});

  int wave_length = 0;
  for (const auto& c : spec.commodities) {
    auto s = g.index.find(c.source);
    auto d = g.index.find(c.destination);
    if (s == g.index.end() || d == g.index.end()) {
      out.push_back({"commodity", "flow " + c.source + " -> " + c.destination + " names an undeclared node"});
      continue;
    }
    if (kinds[s->second] != NodeKind::Source)
      out.push_back({"commodity", "flow origin '" + c.source + "' is not a source"});
    if (kinds[d->second] != NodeKind::Destination)
      out.push_back({"commodity", "flow target '" + c.destination + "' is not a destination"});
    auto mark = reaches(g, d->second);
    if (!mark[s->second]) {
      out.push_back({"reachability", "'" + c.destination + "' is unreachable from '" + c.source + "'"});
      continue;
    }
    if (!acyclic) continue;
    // Shortest and longest hop count to the destination over the DAG.
    const int n = static_cast<int>(g.names.size());
    constexpr int kUnset = std::numeric_limits<int>::min();
    std::vector<int> lo(n, kUnset), hi(n, kUnset);
    lo[d->second] = hi[d->second] = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int u = *it;
      if (u == d->second || !mark[u]) continue;
      for (int v : g.out[u]) {
        if (!mark[v]) continue;
        lo[u] = lo[u] == kUnset ? lo[v] + 1 : std::min(lo[u], lo[v] + 1);
        hi[u] = hi[u] == kUnset ? hi[v] + 1 : std::max(hi[u], hi[v] + 1);
      }
    }
    if (lo[s->second] != hi[s->second]) {
      std::ostringstream msg;
      msg << "paths " << c.source << " -> " << c.destination << " have hop counts from "
          << lo[s->second] << " to " << hi[s->second];
      out.push_back({"wave-length", msg.str()});
    }
    wave_length = std::max(wave_length, hi[s->second]);
  }
  report.wave_length = report.valid() ? wave_length : 0;
  return report;
}

std::vector<std::vector<std::string>> enumerate_paths(const NetworkSpec& spec,
                                                      std::string_view source,
                                                      std::string_view destination) {
  Graph g = make_graph(spec, nullptr);
  std::vector<std::vector<std::string>> paths;
  auto s = g.index.find(std::string(source));
  auto d = g.index.find(std::string(destination));
  if (s == g.index.end()) throw Error(ErrorKind::Config, "unknown node '" + std::string(source) + "'");
  if (d == g.index.end()) throw Error(ErrorKind::Config, "unknown node '" + std::string(destination) + "'");
  for (auto& succ : g.out)
    std::sort(succ.begin(), succ.end(), [&](int a, int b) { return g.names[a] < g.names[b]; });

  std::vector<int> path{s->second};
  std::vector<char> on_path(g.names.size(), 0);
  on_path[s->second] = 1;
  std::function<void(int)> dfs = [&](int u) {
    if (u == d->second) {
      std::vector<std::string> p;
      p.reserve(path.size());
      for (int v : path) p.push_back(g.names[v]);
      paths.push_back(std::move(p));
      return;
    }
    for (int v : g.out[u]) {
      if (on_path[v]) continue;
      on_path[v] = 1;
      path.push_back(v);
      dfs(v);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  dfs(s->second);
  return paths;
}

void write_network(std::ostream& out, const NetworkSpec& spec) {
  for (const auto& n : spec.nodes) {
    out << "node " << n.id << ' ' << to_string(n.kind) << ' ' << format_double(n.cost.c0) << ' '
        << format_double(n.cost.c1) << ' ' << format_double(n.cost.c2) << ' '
        << format_double(n.cost.c3) << ' ' << format_double(n.cost.clog) << '\n';
  }
  for (const auto& e : spec.edges) out << "edge " << e.from << ' ' << e.to << '\n';
  for (const auto& c : spec.commodities)
    out << "flow " << c.source << ' ' << c.destination << ' ' << c.packets_per_wave << '\n';
}

std::string to_text(const NetworkSpec& spec) {
  std::ostringstream out;
  write_network(out, spec);
  return out.str();
}

NetworkSpec read_network(std::istream& in) {
  NetworkSpec spec;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag)) continue;
    if (tag == "node") {
      NodeSpec n;
      std::string kind;
      if (!(fields >> n.id >> kind)) fail("expected 'node <id> <kind> <c0> <c1> <c2> <c3> <clog>'");
      auto k = parse_node_kind(kind);
      if (!k) fail("unknown node kind '" + kind + "'");
      n.kind = *k;
      if (!(fields >> n.cost.c0 >> n.cost.c1 >> n.cost.c2 >> n.cost.c3 >> n.cost.clog))
        fail("node '" + n.id + "' needs five cost coefficients");
      spec.nodes.push_back(std::move(n));
    } else if (tag == "edge") {
      EdgeSpec e;
      if (!(fields >> e.from >> e.to)) fail("expected 'edge <from> <to>'");
      spec.edges.push_back(std::move(e));
    } else if (tag == "flow") {
      Commodity c;
      long long packets = -1;
      if (!(fields >> c.source >> c.destination >> packets) || packets < 0)
        fail("expected 'flow <src> <dst> <non-negative packets>'");
      c.packets_per_wave = static_cast<std::uint32_t>(packets);
      spec.commodities.push_back(std::move(c));
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (fields >> extra) fail("trailing token '" + extra + "'");
  }
  return spec;
}

NetworkSpec parse_network(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_network(in);
}

NetworkSpec load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open network file '" + path + "'");
  return read_network(in);
}

CompiledNetwork::CompiledNetwork(NetworkSpec spec) : spec_(std::move(spec)) {
  auto report = validate_network(spec_);
  if (!report.valid()) {
    std::string msg = "invalid network:";
    for (const auto& v : report.violations) msg += " [" + v.category + "] " + v.message + ";";
    throw Error(ErrorKind::Config, msg);
  }
  if (spec_.commodities.empty()) throw Error(ErrorKind::Config, "network has no flows");
  wave_length_ = report.wave_length;

  Graph g = make_graph(spec_, nullptr);
  names_ = g.names;
  out_ = g.out;
  kinds_.resize(names_.size());
  costs_.resize(names_.size());
  for (const auto& n : spec_.nodes) {
    int i = g.index.at(n.id);
    kinds_[i] = n.kind;
    costs_[i] = n.cost;
  }
  topo_ = coinroute::topological_order(g);

  for (const auto& c : spec_.commodities) {
    int d = g.index.at(c.destination);
    if (std::find(destinations_.begin(), destinations_.end(), d) == destinations_.end())
      destinations_.push_back(d);
  }
  const int dests = destination_count();
  options_.assign(static_cast<std::size_t>(node_count()) * dests, {});
  for (int di = 0; di < dests; ++di) {
    int d = destinations_[di];
    auto mark = reaches(g, d);
    for (int u = 0; u < node_count(); ++u) {
      if (u == d || !mark[u]) continue;
      for (int v : out_[u])
        if (mark[v]) options_[slot(u, di)].push_back(v);
    }
  }
  for (int u : topo_)
    for (int di = 0; di < dests; ++di) {
      int s = slot(u, di);
      if (options_[s].empty()) continue;
      routable_slots_.push_back(s);
      if (options_[s].size() > 1) branching_slots_.push_back(s);
    }
  for (const auto& c : spec_.commodities) {
    int di = *destination_index(c.destination);
    flows_.push_back({g.index.at(c.source), di, c.packets_per_wave});
  }
}

std::optional<int> CompiledNetwork::index_of(std::string_view id) const {
  for (int i = 0; i < node_count(); ++i)
    if (names_[i] == id) return i;
  return std::nullopt;
}

std::optional<int> CompiledNetwork::destination_index(std::string_view id) const {
  for (int di = 0; di < destination_count(); ++di)
    if (names_[destinations_[di]] == id) return di;
  return std::nullopt;
}

std::uint64_t CompiledNetwork::packets_per_wave() const {
  std::uint64_t total = 0;
  for (const auto& f : flows_) total += f.packets;
  return total;
}

}  // namespace coinroute
