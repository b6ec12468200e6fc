#include "fastwdm/netgraph.hpp"

#include <algorithm>
#include <functional>

#include "fastwdm/error.hpp"

namespace fastwdm {

void DcxGraph::add_node(std::string id, NodeRole role) {
  if (!nodes_.emplace(id, role).second) throw Error(ErrorCode::ConfigError, "duplicate node " + id);
}

void DcxGraph::add_edge(GraphEdge edge) {
  if (!has_node(edge.a)) throw Error(ErrorCode::UnknownNode, "edge " + edge.link_id + ": unknown node " + edge.a);
  if (!has_node(edge.z)) throw Error(ErrorCode::UnknownNode, "edge " + edge.link_id + ": unknown node " + edge.z);
  if (edge.a == edge.z) throw Error(ErrorCode::ConfigError, "edge " + edge.link_id + " is a self loop");
  if (role(edge.a) == NodeRole::Site && role(edge.z) == NodeRole::Site)
    throw Error(ErrorCode::ConfigError, "edge " + edge.link_id + " connects two user sites");
  if (edge.length_km < 0.0) throw Error(ErrorCode::ConfigError, "edge " + edge.link_id + " has negative length");
  for (const auto& e : edges_) {
    if (e.link_id == edge.link_id) throw Error(ErrorCode::ConfigError, "duplicate link " + edge.link_id);
  }
  edges_.push_back(std::move(edge));
}

bool DcxGraph::has_node(std::string_view id) const { return nodes_.find(id) != nodes_.end(); }

NodeRole DcxGraph::role(std::string_view id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(id) + "'");
  return it->second;
}

std::vector<std::string> DcxGraph::nodes() const {
  std::vector<std::string> out;
  for (const auto& [id, r] : nodes_) out.push_back(id);
  return out;
}

std::vector<const GraphEdge*> DcxGraph::incident(std::string_view id) const {
  std::vector<const GraphEdge*> out;
  for (const auto& e : edges_) {
    if (e.a == id || e.z == id) out.push_back(&e);
  }
  return out;
}

double latency_of(double length_km, const RoutingPolicy& policy) noexcept {
  return length_km * policy.delay_ms_per_km;
}

double latency_of(const RouteCandidate& route, const RoutingPolicy& policy) noexcept {
  return latency_of(route.length_km, policy);
}

std::vector<RouteCandidate> enumerate_routes(const DcxGraph& graph, std::string_view src, std::string_view dst,
                                             const RoutingPolicy& policy) {
  graph.role(src);
  graph.role(dst);
  std::vector<RouteCandidate> out;
  if (src == dst) return out;

  RouteCandidate cur;
  cur.nodes.emplace_back(src);
  std::set<std::string, std::less<>> visited{std::string(src)};

  std::function<void(const std::string&)> dfs = [&](const std::string& at) {
    for (const GraphEdge* e : graph.incident(at)) {
      const std::string& next = e->a == at ? e->z : e->a;
      if (visited.count(next)) continue;
      const double length = cur.length_km + e->length_km;
      if (!(latency_of(length, policy) < policy.max_latency_ms)) continue;
      if (next == dst) {
        RouteCandidate r = cur;
        r.nodes.push_back(next);
        r.links.push_back(e->link_id);
        r.length_km = length;
        r.latency_ms = latency_of(length, policy);
        out.push_back(std::move(r));
        continue;
      }
      if (graph.role(next) != NodeRole::Pop) continue;
      // cur.nodes holds src plus the POPs visited so far.
      if (static_cast<int>(cur.nodes.size()) > policy.max_pops) continue;
      cur.nodes.push_back(next);
      cur.links.push_back(e->link_id);
      const double saved = cur.length_km;
      cur.length_km = length;
      visited.insert(next);
      dfs(next);
      visited.erase(next);
      cur.length_km = saved;
      cur.links.pop_back();
      cur.nodes.pop_back();
    }
  };
  dfs(std::string(src));

  std::sort(out.begin(), out.end(), [](const RouteCandidate& x, const RouteCandidate& y) {
    if (x.pop_count() != y.pop_count()) return x.pop_count() < y.pop_count();
    if (x.length_km != y.length_km) return x.length_km < y.length_km;
    if (x.nodes != y.nodes) return x.nodes < y.nodes;
    return x.links < y.links;
  });
  return out;
}

void WavelengthLedger::occupy_background(const std::vector<std::string>& links) {
  const auto bg = plan_.background_channels();
  for (const auto& l : links) {
    auto& set = occupied_[l];
    for (double f : bg) set.insert(channel_key(f));
  }
}

bool WavelengthLedger::is_free(std::string_view link, double thz) const {
  auto it = occupied_.find(link);
  return it == occupied_.end() || !it->second.count(channel_key(thz));
}

bool WavelengthLedger::is_free_on(const std::vector<std::string>& links, double thz) const {
  return std::all_of(links.begin(), links.end(), [&](const std::string& l) { return is_free(l, thz); });
}

std::set<std::int64_t> WavelengthLedger::occupied(std::string_view link) const {
  auto it = occupied_.find(link);
  return it == occupied_.end() ? std::set<std::int64_t>{} : it->second;
}

std::vector<double> WavelengthLedger::preview(const std::vector<std::string>& links, int count) const {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "channel count must be >= 1");
  std::vector<double> out;
  for (double f : plan_.assignment_order()) {
    if (is_free_on(links, f)) out.push_back(f);
    if (static_cast<int>(out.size()) == count) return out;
  }
  // Name a link that blocks: the one with the fewest free channels.
  std::string blocking = links.empty() ? std::string("<none>") : links.front();
  std::size_t most = 0;
  for (const auto& l : links) {
    const auto n = occupied(l).size();
    if (n >= most) {
      most = n;
      blocking = l;
    }
  }
  throw Error(ErrorCode::NoWavelengthAvailable, "only " + std::to_string(out.size()) + " of " +
                                                    std::to_string(count) + " channels free; blocked on link " +
                                                    blocking);
}

std::vector<double> WavelengthLedger::assign(const std::vector<std::string>& links, int count) {
  auto channels = preview(links, count);
  reserve(links, channels);
  return channels;
}

void WavelengthLedger::reserve(const std::vector<std::string>& links, const std::vector<double>& channels) {
  for (double f : channels) {
    for (const auto& l : links) {
      if (!is_free(l, f))
        throw Error(ErrorCode::NoWavelengthAvailable,
                    std::to_string(f) + " THz is already in use on link " + l);
    }
  }
  for (const auto& l : links) {
    auto& set = occupied_[l];
    for (double f : channels) set.insert(channel_key(f));
  }
}

void WavelengthLedger::release(const std::vector<std::string>& links, const std::vector<double>& channels) {
  for (const auto& l : links) {
    auto it = occupied_.find(l);
    if (it == occupied_.end()) continue;
    for (double f : channels) it->second.erase(channel_key(f));
  }
}

}  // namespace fastwdm
