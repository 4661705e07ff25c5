#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <set>

#include "detail.hpp"
#include "mrbench/error.hpp"

namespace mrbench::suts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Arc {
    int to;
    double weight;
};

struct Adjacency {
    std::vector<std::vector<Arc>> out;

    Adjacency(const WeightedGraph& g, bool reverse) : out(g.vertices.size()) {
        for (const auto& e : g.edges) {
            const int u = vertex_index(g, e.u);
            const int v = vertex_index(g, e.v);
            if (g.directed) {
                if (reverse)
                    out[v].push_back({u, e.weight});
                else
                    out[u].push_back({v, e.weight});
            } else {
                out[u].push_back({v, e.weight});
                out[v].push_back({u, e.weight});
            }
        }
    }
};

void validate(const WeightedGraph& g) {
    if (vertex_index(g, g.source) < 0 || vertex_index(g, g.target) < 0)
        throw PreconditionError("query endpoints must be graph vertices");
    for (const auto& e : g.edges) {
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
            throw PreconditionError("edge weights must be finite and nonnegative");
        if (vertex_index(g, e.u) < 0 || vertex_index(g, e.v) < 0)
            throw PreconditionError("edge references an unknown vertex");
    }
}

std::vector<double> dijkstra(const Adjacency& adj, int from, std::vector<int>* parent = nullptr) {
    std::vector<double> dist(adj.out.size(), kInf);
    if (parent) parent->assign(adj.out.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[from] = 0.0;
    pq.push({0.0, from});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (const auto& a : adj.out[u]) {
            const double nd = d + a.weight;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                if (parent) (*parent)[a.to] = u;
                pq.push({nd, a.to});
            }
        }
    }
    return dist;
}

// Cheapest parallel edge between consecutive route vertices.
double step_weight(const Adjacency& adj, int u, int v) {
    double best = kInf;
    for (const auto& a : adj.out[u])
        if (a.to == v) best = std::min(best, a.weight);
    return best;
}

Path path_from_indices(const WeightedGraph& g, const Adjacency& adj, const std::vector<int>& route) {
    Path p;
    p.found = true;
    for (std::size_t i = 0; i < route.size(); ++i) {
        p.vertices.push_back(g.vertices[route[i]]);
        if (i > 0) p.total_cost += step_weight(adj, route[i - 1], route[i]);
    }
    return p;
}

}  // namespace

int vertex_index(const WeightedGraph& graph, const std::string& name) {
    auto it = std::find(graph.vertices.begin(), graph.vertices.end(), name);
    return it == graph.vertices.end() ? -1 : static_cast<int>(it - graph.vertices.begin());
}

std::vector<double> graph_distances(const WeightedGraph& graph, const std::string& from, bool reverse) {
    validate(graph);
    const int s = vertex_index(graph, from);
    if (s < 0) throw PreconditionError("unknown vertex '" + from + "'");
    return dijkstra(Adjacency(graph, reverse), s);
}

Path shortest_path(const WeightedGraph& graph) {
    validate(graph);
    const int s = vertex_index(graph, graph.source);
    const int t = vertex_index(graph, graph.target);
    if (s == t) return Path{true, {graph.source}, 0.0};

    const Adjacency fwd(graph, false);
    std::vector<int> parent;
    const auto from_s = dijkstra(fwd, s, &parent);
    if (!std::isfinite(from_s[t])) return Path{};
    const auto to_t = dijkstra(Adjacency(graph, true), t);

    // Depth-first over edges that stay on some optimal route, smallest name
    // first. The first simple path reaching t is the lexicographically smallest
    // optimal one. Dead ends only occur through zero-weight cycles.
    const double best = from_s[t];
    const double slack = 1e-12 * std::max(1.0, best);
    std::vector<int> route{s};
    std::vector<bool> visited(graph.vertices.size(), false);
    visited[s] = true;
    auto extend = [&](auto&& self, int cur, double acc) -> bool {
        if (cur == t) return true;
        std::vector<std::pair<int, double>> steps;  // cheapest tight edge per neighbour
        for (const auto& a : fwd.out[cur]) {
            if (visited[a.to] || acc + a.weight + to_t[a.to] > best + slack) continue;
            auto it = std::find_if(steps.begin(), steps.end(), [&](const auto& st) { return st.first == a.to; });
            if (it == steps.end()) steps.emplace_back(a.to, a.weight);
            else it->second = std::min(it->second, a.weight);
        }
        std::sort(steps.begin(), steps.end(),
                  [&](const auto& x, const auto& y) { return graph.vertices[x.first] < graph.vertices[y.first]; });
        for (const auto& [next, w] : steps) {
            visited[next] = true;
            route.push_back(next);
            if (self(self, next, acc + w)) return true;
            route.pop_back();
            visited[next] = false;
        }
        return false;
    };
    if (!extend(extend, s, 0.0)) {
        std::vector<int> back;
        for (int v = t; v != -1; v = parent[v]) back.push_back(v);
        std::reverse(back.begin(), back.end());
        return path_from_indices(graph, fwd, back);
    }
    return path_from_indices(graph, fwd, route);
}

namespace detail {

Path greedy_nearest_path(const WeightedGraph& graph) {
    validate(graph);
    const Adjacency adj(graph, false);
    const int s = vertex_index(graph, graph.source);
    const int t = vertex_index(graph, graph.target);
    std::vector<bool> visited(graph.vertices.size(), false);
    std::vector<int> route{s};
    visited[s] = true;
    int cur = s;
    while (cur != t) {
        int next = -1;
        double next_w = kInf;
        for (const auto& a : adj.out[cur]) {
            if (visited[a.to]) continue;
            if (a.weight < next_w || (a.weight == next_w && graph.vertices[a.to] < graph.vertices[next])) {
                next = a.to;
                next_w = a.weight;
            }
        }
        if (next < 0) return Path{};
        visited[next] = true;
        route.push_back(next);
        cur = next;
    }
    return path_from_indices(graph, adj, route);
}

Path min_hop_path(const WeightedGraph& graph) {
    validate(graph);
    const Adjacency adj(graph, false);
    const int s = vertex_index(graph, graph.source);
    const int t = vertex_index(graph, graph.target);
    std::vector<int> parent(graph.vertices.size(), -2);
    std::deque<int> queue{s};
    parent[s] = -1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (u == t) break;
        std::vector<int> next;
        for (const auto& a : adj.out[u])
            if (parent[a.to] == -2) next.push_back(a.to);
        std::sort(next.begin(), next.end(), [&](int a, int b) { return graph.vertices[a] < graph.vertices[b]; });
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (int v : next) {
            parent[v] = u;
            queue.push_back(v);
        }
    }
    if (parent[t] == -2) return Path{};
    std::vector<int> back;
    for (int v = t; v != -1; v = parent[v]) back.push_back(v);
    std::reverse(back.begin(), back.end());
    return path_from_indices(graph, adj, back);
}

}  // namespace detail

}  // namespace mrbench::suts
