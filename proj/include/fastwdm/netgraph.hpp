#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fastwdm/channel_plan.hpp"

namespace fastwdm {

enum class NodeRole { Site, Pop };

struct GraphEdge {
  std::string link_id;
  std::string a;
  std::string z;
  double length_km = 0.0;
};

/// DCX topology: user sites attach to POPs, POPs interconnect. Site-to-site
/// edges are rejected.
class DcxGraph {
 public:
  void add_node(std::string id, NodeRole role);
  void add_edge(GraphEdge edge);

  bool has_node(std::string_view id) const;
  NodeRole role(std::string_view id) const;
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  std::vector<std::string> nodes() const;
  /// Edges touching `id`, in insertion order.
  std::vector<const GraphEdge*> incident(std::string_view id) const;

 private:
  std::map<std::string, NodeRole, std::less<>> nodes_;
  std::vector<GraphEdge> edges_;
};

struct RouteCandidate {
  std::vector<std::string> nodes;
  std::vector<std::string> links;
  double length_km = 0.0;
  double latency_ms = 0.0;

  int pop_count() const noexcept { return nodes.size() >= 2 ? static_cast<int>(nodes.size()) - 2 : 0; }
  friend bool operator==(const RouteCandidate&, const RouteCandidate&) = default;
};

struct RoutingPolicy {
  int max_pops = 3;
  /// Routes must satisfy latency < max_latency_ms.
  double max_latency_ms = 2.0;
  double delay_ms_per_km = 0.005;
};

double latency_of(double length_km, const RoutingPolicy& policy = {}) noexcept;
double latency_of(const RouteCandidate& route, const RoutingPolicy& policy = {}) noexcept;

/// Simple paths from src to dst whose intermediate nodes are all POPs, within
/// the POP and latency limits, ordered by POP count, length, then node ids.
/// Throws UnknownNode.
std::vector<RouteCandidate> enumerate_routes(const DcxGraph& graph, std::string_view src, std::string_view dst,
                                             const RoutingPolicy& policy = {});

/// Per-link occupied channels.
class WavelengthLedger {
 public:
  WavelengthLedger() = default;
  explicit WavelengthLedger(ChannelPlan plan) : plan_(std::move(plan)) {}

  const ChannelPlan& plan() const noexcept { return plan_; }
  /// Marks the plan's background channels busy on every given link.
  void occupy_background(const std::vector<std::string>& links);
  bool is_free(std::string_view link, double thz) const;
  bool is_free_on(const std::vector<std::string>& links, double thz) const;
  std::set<std::int64_t> occupied(std::string_view link) const;

  /// First-fit channels free on every link, without reserving.
  std::vector<double> preview(const std::vector<std::string>& links, int count) const;
  /// First-fit and reserve atomically. Throws NoWavelengthAvailable naming
  /// the link that blocks the first channel that could not be placed.
  std::vector<double> assign(const std::vector<std::string>& links, int count);
  void reserve(const std::vector<std::string>& links, const std::vector<double>& channels);
  void release(const std::vector<std::string>& links, const std::vector<double>& channels);

 private:
  ChannelPlan plan_;
  std::map<std::string, std::set<std::int64_t>, std::less<>> occupied_;
};

}  // namespace fastwdm
