#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "coinroute/cost_function.hpp"

namespace coinroute {

enum class NodeKind { Source, Router, Dummy, Destination };

const char* to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct NodeSpec {
  std::string id;
  NodeKind kind = NodeKind::Router;
  CostFunction cost;
};

struct EdgeSpec {
  std::string from;
  std::string to;
};

struct Commodity {
  std::string source;
  std::string destination;
  std::uint32_t packets_per_wave = 0;
};

/// Directed layered graph plus per-wave traffic. Plain data; see
/// CompiledNetwork for the indexed form the simulator works on.
struct NetworkSpec {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::vector<Commodity> commodities;

  const NodeSpec* find(std::string_view id) const;
  std::vector<std::string> successors(std::string_view id) const;
};

struct Violation {
  std::string category;  // "acyclicity", "reachability", "wave-length", ...
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Hop count from source to destination shared by every path of every
  /// commodity; 0 when it cannot be determined.
  int wave_length = 0;

  bool valid() const { return violations.empty(); }
  bool has(std::string_view category) const;
};

/// Structural checks; never throws.
ValidationReport validate_network(const NetworkSpec& spec);

/// Every simple directed path from source to destination (node ids,
/// endpoints included) in lexicographic order. Empty when unreachable.
std::vector<std::vector<std::string>> enumerate_paths(const NetworkSpec& spec,
                                                      std::string_view source,
                                                      std::string_view destination);

/// Line-oriented text form:
///   node <id> <kind> <c0> <c1> <c2> <c3> <clog>
///   edge <from> <to>
///   flow <src> <dst> <packets>
/// '#' starts a comment. Numbers are written with round-trip precision.
void write_network(std::ostream& out, const NetworkSpec& spec);
std::string to_text(const NetworkSpec& spec);
NetworkSpec read_network(std::istream& in);
NetworkSpec parse_network(std::string_view text);
NetworkSpec load_network(const std::string& path);

/// Index-based, immutable view of a valid NetworkSpec. Per-(node,destination)
/// quantities live in flat arrays addressed by slot(node, dest).
class CompiledNetwork {
 public:
  explicit CompiledNetwork(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  int node_count() const { return static_cast<int>(names_.size()); }
  int destination_count() const { return static_cast<int>(destinations_.size()); }
  int slot_count() const { return node_count() * destination_count(); }
  int slot(int node, int dest) const { return node * destination_count() + dest; }
  int slot_node(int slot) const { return slot / destination_count(); }
  int slot_dest(int slot) const { return slot % destination_count(); }

  const std::string& name(int node) const { return names_[node]; }
  std::optional<int> index_of(std::string_view id) const;
  NodeKind kind(int node) const { return kinds_[node]; }
  const CostFunction& cost(int node) const { return costs_[node]; }

  /// Node index of the d-th destination.
  int destination_node(int dest) const { return destinations_[dest]; }
  std::optional<int> destination_index(std::string_view id) const;

  /// Out-neighbours of node that lie on some path to destination `dest`.
  const std::vector<int>& options(int slot) const { return options_[slot]; }
  bool is_branching(int slot) const { return options_[slot].size() > 1; }
  /// Slots with at least one option, in topological order of their node.
  const std::vector<int>& routable_slots() const { return routable_slots_; }
  const std::vector<int>& branching_slots() const { return branching_slots_; }

  const std::vector<int>& topological_order() const { return topo_; }

  struct Flow {
    int source;
    int dest;  // destination index, not node index
    std::uint32_t packets;
  };
  const std::vector<Flow>& flows() const { return flows_; }
  std::uint64_t packets_per_wave() const;
  int wave_length() const { return wave_length_; }

 private:
  NetworkSpec spec_;
  std::vector<std::string> names_;
  std::vector<NodeKind> kinds_;
  std::vector<CostFunction> costs_;
  std::vector<std::vector<int>> out_;
  std::vector<int> destinations_;
  std::vector<std::vector<int>> options_;
  std::vector<int> routable_slots_;
  std::vector<int> branching_slots_;
  std::vector<int> topo_;
  std::vector<Flow> flows_;
  int wave_length_ = 0;
};

}  // namespace coinroute
