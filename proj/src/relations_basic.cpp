#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrbench/suts.hpp"
#include "relations_common.hpp"

namespace mrbench::relations {
namespace {

using std::numbers::pi;

ParamValues no_params(const TestInput&, const SutOutput&, Rng&, const std::map<std::string, ParamRange>&) {
    return {};
}

// ---- SIN ----

void add_sin(RelationRegistry& r, const std::string& key, double (*map)(double),
             std::function<CheckResult(double x, double s, double f, double tol)> check) {
    Binding b;
    b.key = key;
    b.sut_id = "SIN";
    b.relation_class = RelationClass::exact();
    b.transform.sample = no_params;
    b.transform.apply = [map](const TestInput& in, const ParamValues&) {
        return FollowUp{Angle{map(as<Angle>(in).x)}, {}};
    };
    b.predicate.check = [check](const TrialContext& c) {
        return check(as<Angle>(c.source_input).x, as<Scalar>(c.source_output).value,
                     as<Scalar>(c.followup_output).value, c.tolerance);
    };
    r.add(std::move(b));
}

CheckResult negated(double, double s, double f, double tol) { return near(f, -s, tol, "f(x') vs -f(x)"); }
CheckResult unchanged(double, double s, double f, double tol) { return near(f, s, tol, "f(x') vs f(x)"); }

// ---- SUM ----

const NumberList& list(const TestInput& in) { return as<NumberList>(in); }

double scalar(const SutOutput& out) { return as<Scalar>(out).value; }

ParamValues pick_element(const TestInput& in, const SutOutput&, Rng& rng, const std::map<std::string, ParamRange>&) {
    const auto& v = list(in).values;
    return {{"index", v.empty() ? -1.0 : static_cast<double>(rng.index(v.size()))}};
}

double element_at(const TestInput& in, const ParamValues& p) {
    const long i = index_param(p, "index");
    const auto& v = list(in).values;
    return i < 0 || static_cast<std::size_t>(i) >= v.size() ? 0.0 : v[static_cast<std::size_t>(i)];
}

NumberList companion_list(const ParamValues& p) {
    Rng rng(static_cast<std::uint64_t>(index_param(p, "companion_seed")));
    NumberList out;
    const long n = index_param(p, "companion_length");
    for (long i = 0; i < n; ++i) out.values.push_back(rng.uniform(-100.0, 100.0));
    return out;
}

Binding sum_binding(const std::string& key) {
    Binding b;
    b.key = key;
    b.sut_id = "SUM";
    b.relation_class = RelationClass::exact();
    b.transform.sample = no_params;
    return b;
}

// ---- SHORTEST-PATH ----

const WeightedGraph& graph(const TestInput& in) { return as<WeightedGraph>(in); }

bool joins(const WeightedGraph& g, const Edge& e, const std::string& a, const std::string& b) {
    if (e.u == a && e.v == b) return true;
    return !g.directed && e.u == b && e.v == a;
}

/// Indices of the cheapest edge realising each step of `path`.
std::vector<std::size_t> path_edges(const WeightedGraph& g, const Path& path) {
    std::vector<std::size_t> out;
    if (!path.found) return out;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        std::size_t best = g.edges.size();
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            if (joins(g, g.edges[e], path.vertices[i], path.vertices[i + 1]) &&
                (best == g.edges.size() || g.edges[e].weight < g.edges[best].weight))
                best = e;
        if (best == g.edges.size()) return {};
        out.push_back(best);
    }
    return out;
}

std::vector<std::size_t> off_path_edges(const WeightedGraph& g, const Path& path) {
    const auto on = path_edges(g, path);
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (std::find(on.begin(), on.end(), e) != on.end()) continue;
        // Parallel copies of an on-path step stay "on" the route.
        bool parallel = false;
        for (std::size_t k = 0; k + 1 < path.vertices.size(); ++k)
            parallel = parallel || joins(g, g.edges[e], path.vertices[k], path.vertices[k + 1]);
        if (!parallel) out.push_back(e);
    }
    return out;
}

struct Distances {
    std::vector<double> from_source;
    std::vector<double> to_target;
    double best = INFINITY;
};

Distances distances(const WeightedGraph& g) {
    Distances d;
    d.from_source = suts::graph_distances(g, g.source);
    d.to_target = suts::graph_distances(g, g.target, true);
    d.best = d.from_source[static_cast<std::size_t>(suts::vertex_index(g, g.target))];
    return d;
}

/// Cost of the cheapest s-t route forced through edge `e`, minus the optimum.
double bypass_margin(const WeightedGraph& g, const Distances& d, std::size_t e) {
    const Edge& edge = g.edges[e];
    const auto u = static_cast<std::size_t>(suts::vertex_index(g, edge.u));
    const auto v = static_cast<std::size_t>(suts::vertex_index(g, edge.v));
    double via = d.from_source[u] + edge.weight + d.to_target[v];
    if (!g.directed) via = std::min(via, d.from_source[v] + edge.weight + d.to_target[u]);
    return via - d.best;
}

std::string fresh_name(const WeightedGraph& g, const std::string& stem) {
    std::string name = stem;
    for (int i = 2; std::find(g.vertices.begin(), g.vertices.end(), name) != g.vertices.end(); ++i)
        name = stem + std::to_string(i);
    return name;
}

double total_weight(const WeightedGraph& g) {
    double s = 0.0;
    for (const auto& e : g.edges) s += e.weight;
    return s;
}

/// Cost to use as "current shortest cost" when building new edges.
double reference_cost(const WeightedGraph& g) {
    const double best = distances(g).best;
    return std::isfinite(best) ? best : total_weight(g) + 1.0;
}

CheckResult same_route(const TrialContext& c) {
    const auto& s = as<Path>(c.source_output);
    const auto& f = as<Path>(c.followup_output);
    if (s.found != f.found) return CheckResult::fail(std::string("reachability changed: source ") +
                                                     (s.found ? "found" : "none") + ", follow-up " +
                                                     (f.found ? "found" : "none"));
    if (s.vertices != f.vertices) {
        auto join = [](const std::vector<std::string>& v) {
            std::string out;
            for (const auto& x : v) out += (out.empty() ? "" : "-") + x;
            return out;
        };
        return CheckResult::fail("route changed: " + join(s.vertices) + " vs " + join(f.vertices));
    }
    if (!s.found) return CheckResult::ok();
    return near(f.total_cost, s.total_cost, c.tolerance, "path cost");
}

CheckResult same_cost(const TrialContext& c) {
    const auto& s = as<Path>(c.source_output);
    const auto& f = as<Path>(c.followup_output);
    if (s.found != f.found) return CheckResult::fail("reachability changed");
    if (!s.found) return CheckResult::ok();
    return near(f.total_cost, s.total_cost, c.tolerance, "path cost");
}

Binding path_binding(const std::string& key, bool route) {
    Binding b;
    b.key = key;
    b.sut_id = "SHORTEST-PATH";
    b.relation_class = RelationClass::exact();
    b.transform.sample = no_params;
    b.predicate.check = route ? same_route : same_cost;
    return b;
}

constexpr double kMinMargin = 1e-6;

/// Off-path edges whose bypass margin leaves room for a perturbation.
std::vector<std::size_t> slack_edges(const WeightedGraph& g, const Path& path) {
    const auto d = distances(g);
    std::vector<std::size_t> out;
    if (!std::isfinite(d.best)) return out;
    for (auto e : off_path_edges(g, path))
        if (bypass_margin(g, d, e) > kMinMargin) out.push_back(e);
    return out;
}

double pick(Rng& rng, const std::vector<std::size_t>& v) {
    return v.empty() ? -1.0 : static_cast<double>(v[rng.index(v.size())]);
}

}  // namespace

void register_sin(RelationRegistry& r) {
    add_sin(r, "sin.additive_angle", [](double x) { return x + pi; }, negated);
    add_sin(r, "sin.subtractive_angle", [](double x) { return x - pi; }, negated);
    add_sin(r, "sin.multiplicative_angle", [](double x) { return 2.0 * x; },
            [](double x, double s, double f, double tol) { return near(f, 2.0 * s * std::cos(x), tol, "f(2x) vs 2 f(x) cos(x)"); });
    add_sin(r, "sin.half_angle", [](double x) { return x / 2.0; },
            [](double x, double, double f, double tol) {
                return near(f * f, (1.0 - std::cos(x)) / 2.0, tol, "f(x/2)^2 vs (1 - cos x)/2");
            });
    add_sin(r, "sin.negative_angle", [](double x) { return -x; }, negated);
    add_sin(r, "sin.complementary_angle", [](double x) { return pi / 2.0 - x; },
            [](double x, double, double f, double tol) { return near(f, std::cos(x), tol, "f(pi/2 - x) vs cos(x)"); });
    add_sin(r, "sin.angle_invariance", [](double x) { return x + 2.0 * pi; }, unchanged);
    add_sin(r, "sin.reflection", [](double x) { return pi - x; }, unchanged);
}

void register_sum(RelationRegistry& r) {
    auto shift_each = [](double sign) {
        return [sign](const TestInput& in, const ParamValues& p) {
            NumberList out = list(in);
            const double k = param(p, "k");
            for (auto& v : out.values) v += sign * k;
            return FollowUp{out, {}};
        };
    };
    auto shifted_total = [](double sign) {
        return [sign](const TrialContext& c) {
            const double n = static_cast<double>(list(c.source_input).values.size());
            return near(scalar(c.followup_output), scalar(c.source_output) + sign * n * param(c.params, "k"),
                        c.tolerance, "sum");
        };
    };
    auto sample_k = [](const TestInput&, const SutOutput&, Rng& rng, const std::map<std::string, ParamRange>& ranges) {
        return ParamValues{{"k", sample_range(rng, ranges, "k")}};
    };

    Binding add = sum_binding("sum.additive_constant");
    add.transform.params = {{"k", {-1e6, 1e6}}};
    add.transform.sample = sample_k;
    add.transform.apply = shift_each(+1.0);
    add.predicate.check = shifted_total(+1.0);
    r.add(std::move(add));

    Binding sub = sum_binding("sum.subtractive_constant");
    sub.transform.params = {{"k", {-1e6, 1e6}}};
    sub.transform.sample = sample_k;
    sub.transform.apply = shift_each(-1.0);
    sub.predicate.check = shifted_total(-1.0);
    r.add(std::move(sub));

    Binding dup = sum_binding("sum.element_duplication");
    dup.transform.sample = pick_element;
    dup.transform.apply = [](const TestInput& in, const ParamValues& p) {
        NumberList out = list(in);
        if (index_param(p, "index") >= 0) out.values.push_back(element_at(in, p));
        return FollowUp{out, {}};
    };
    dup.predicate.check = [](const TrialContext& c) {
        return near(scalar(c.followup_output), scalar(c.source_output) + element_at(c.source_input, c.params),
                    c.tolerance, "sum");
    };
    r.add(std::move(dup));

    Binding cat = sum_binding("sum.list_concatenation");
    cat.transform.sample = [](const TestInput&, const SutOutput&, Rng& rng, const std::map<std::string, ParamRange>&) {
        return ParamValues{{"companion_seed", static_cast<double>(rng.next() >> 32)},
                           {"companion_length", static_cast<double>(rng.integer(1, 50))}};
    };
    cat.transform.apply = [](const TestInput& in, const ParamValues& p) {
        NumberList second = companion_list(p);
        NumberList out = list(in);
        out.values.insert(out.values.end(), second.values.begin(), second.values.end());
        return FollowUp{out, {second}};
    };
    cat.predicate.check = [](const TrialContext& c) {
        if (c.companion_outputs.size() != 1) return CheckResult::fail("missing output for the second list");
        return near(scalar(c.followup_output), scalar(c.source_output) + scalar(c.companion_outputs[0]), c.tolerance,
                    "sum of concatenation vs S1 + S2");
    };
    r.add(std::move(cat));

    Binding rev = sum_binding("sum.reverse_order");
    rev.transform.apply = [](const TestInput& in, const ParamValues&) {
        NumberList out = list(in);
        std::reverse(out.values.begin(), out.values.end());
        return FollowUp{out, {}};
    };
    rev.predicate.check = [](const TrialContext& c) {
        return near(scalar(c.followup_output), scalar(c.source_output), c.tolerance, "sum");
    };
    r.add(std::move(rev));

    Binding del = sum_binding("sum.element_removal");
    del.transform.sample = pick_element;
    del.transform.apply = [](const TestInput& in, const ParamValues& p) {
        NumberList out = list(in);
        const long i = index_param(p, "index");
        if (i >= 0 && static_cast<std::size_t>(i) < out.values.size()) out.values.erase(out.values.begin() + i);
        return FollowUp{out, {}};
    };
    del.predicate.check = [](const TrialContext& c) {
        return near(scalar(c.followup_output), scalar(c.source_output) - element_at(c.source_input, c.params),
                    c.tolerance, "sum");
    };
    r.add(std::move(del));

    Binding zero = sum_binding("sum.zero_element_addition");
    zero.transform.apply = [](const TestInput& in, const ParamValues&) {
        NumberList out = list(in);
        out.values.push_back(0.0);
        return FollowUp{out, {}};
    };
    zero.predicate.check = [](const TrialContext& c) {
        return near(scalar(c.followup_output), scalar(c.source_output), c.tolerance, "sum");
    };
    r.add(std::move(zero));

    Binding neg = sum_binding("sum.negative_element_addition");
    neg.transform.params = {{"d", {0.0, 1e6}}};
    neg.transform.sample = [](const TestInput&, const SutOutput&, Rng& rng,
                              const std::map<std::string, ParamRange>& ranges) {
        return ParamValues{{"d", sample_range(rng, ranges, "d")}};
    };
    neg.transform.apply = [](const TestInput& in, const ParamValues& p) {
        NumberList out = list(in);
        out.values.push_back(-param(p, "d"));
        return FollowUp{out, {}};
    };
    neg.predicate.check = [](const TrialContext& c) {
        return near(scalar(c.followup_output), scalar(c.source_output) - param(c.params, "d"), c.tolerance, "sum");
    };
    r.add(std::move(neg));
}

void register_path(RelationRegistry& r) {
    Binding inc = path_binding("path.edge_weight_increase", true);
    inc.transform.params = {{"delta", {0.0, 1e6}}};
    inc.transform.sample = [](const TestInput& in, const SutOutput& out, Rng& rng,
                              const std::map<std::string, ParamRange>& ranges) {
        ParamValues p{{"delta", sample_range(rng, ranges, "delta")}};
        p["edge"] = pick(rng, off_path_edges(graph(in), as<Path>(out)));
        return p;
    };
    inc.transform.apply = [](const TestInput& in, const ParamValues& p) {
        WeightedGraph g = graph(in);
        const long e = index_param(p, "edge");
        if (e >= 0) g.edges.at(static_cast<std::size_t>(e)).weight += param(p, "delta");
        return FollowUp{g, {}};
    };
    r.add(std::move(inc));

    Binding dec = path_binding("path.edge_weight_decrease", true);
    dec.transform.params = {{"fraction", {0.0, 1.0}}};
    dec.note = "decrease is bounded by the edge's bypass margin so the optimum provably survives";
    dec.transform.sample = [](const TestInput& in, const SutOutput& out, Rng& rng,
                              const std::map<std::string, ParamRange>& ranges) {
        ParamValues p{{"fraction", sample_range(rng, ranges, "fraction")}};
        p["edge"] = pick(rng, slack_edges(graph(in), as<Path>(out)));
        return p;
    };
    dec.transform.apply = [](const TestInput& in, const ParamValues& p) {
        WeightedGraph g = graph(in);
        const long e = index_param(p, "edge");
        if (e >= 0) {
            const auto idx = static_cast<std::size_t>(e);
            const double margin = bypass_margin(g, distances(g), idx);
            auto& edge = g.edges.at(idx);
            if (std::isfinite(margin) && margin > 0.0)
                edge.weight -= param(p, "fraction") * std::min(margin, edge.weight);
        }
        return FollowUp{g, {}};
    };
    r.add(std::move(dec));

    Binding addv = path_binding("path.add_vertex_edges", true);
    addv.transform.params = {{"excess", {0.0, 1e6}}};
    addv.transform.sample = [](const TestInput& in, const SutOutput&, Rng& rng,
                               const std::map<std::string, ParamRange>& ranges) {
        const auto n = graph(in).vertices.size();
        ParamValues p{{"excess", sample_range(rng, ranges, "excess")}};
        p["links"] = static_cast<double>(rng.integer(1, static_cast<std::int64_t>(std::min<std::size_t>(3, n))));
        p["link_seed"] = static_cast<double>(rng.next() >> 32);
        return p;
    };
    addv.transform.apply = [](const TestInput& in, const ParamValues& p) {
        WeightedGraph g = graph(in);
        const double cost = reference_cost(g);
        Rng rng(static_cast<std::uint64_t>(index_param(p, "link_seed")));
        std::vector<std::string> pool = g.vertices;
        const std::string fresh = fresh_name(g, "x");
        const long links = std::min<long>(index_param(p, "links"), static_cast<long>(pool.size()));
        g.vertices.push_back(fresh);
        for (long i = 0; i < links; ++i) {
            const std::size_t k = rng.index(pool.size());
            // Any two new edges together outweigh the current optimum.
            const double w = cost / 2.0 + param(p, "excess") * (0.5 + 0.5 * rng.uniform());
            g.edges.push_back({pool[k], fresh, w});
            if (g.directed) g.edges.push_back({fresh, pool[k], w});
            pool.erase(pool.begin() + static_cast<long>(k));
        }
        return FollowUp{g, {}};
    };
    r.add(std::move(addv));

    Binding rem = path_binding("path.remove_noncritical_edge", true);
    rem.transform.sample = [](const TestInput& in, const SutOutput& out, Rng& rng,
                              const std::map<std::string, ParamRange>&) {
        return ParamValues{{"edge", pick(rng, off_path_edges(graph(in), as<Path>(out)))}};
    };
    rem.transform.apply = [](const TestInput& in, const ParamValues& p) {
        WeightedGraph g = graph(in);
        const long e = index_param(p, "edge");
        if (e >= 0) g.edges.erase(g.edges.begin() + e);
        return FollowUp{g, {}};
    };
    r.add(std::move(rem));

    Binding dupv = path_binding("path.vertex_duplication", false);
    dupv.transform.sample = [](const TestInput& in, const SutOutput&, Rng& rng, const std::map<std::string, ParamRange>&) {
        return ParamValues{{"vertex", static_cast<double>(rng.index(graph(in).vertices.size()))}};
    };
    dupv.transform.apply = [](const TestInput& in, const ParamValues& p) {
        WeightedGraph g = graph(in);
        const std::string v = g.vertices.at(static_cast<std::size_t>(index_param(p, "vertex")));
        const std::string copy = fresh_name(g, v + "_dup");
        g.vertices.push_back(copy);
        const auto n = g.edges.size();
        for (std::size_t i = 0; i < n; ++i) {
            Edge e = g.edges[i];
            if (e.u == v && e.v == v) continue;
            if (e.u == v) e.u = copy;
            else if (e.v == v) e.v = copy;
            else continue;
            g.edges.push_back(e);
        }
        return FollowUp{g, {}};
    };
    r.add(std::move(dupv));

    Binding rev = path_binding("path.reverse_direction", false);
    rev.transform.apply = [](const TestInput& in, const ParamValues&) {
        WeightedGraph g = graph(in);
        std::swap(g.source, g.target);
        if (g.directed)
            for (auto& e : g.edges) std::swap(e.u, e.v);
        return FollowUp{g, {}};
    };
    r.add(std::move(rev));

    Binding sub = path_binding("path.edge_subdivision", false);
    sub.transform.params = {{"alpha", {0.0, 1.0}}};
    sub.transform.sample = [](const TestInput& in, const SutOutput& out, Rng& rng,
                              const std::map<std::string, ParamRange>& ranges) {
        ParamValues p{{"alpha", sample_range(rng, ranges, "alpha")}};
        p["edge"] = pick(rng, path_edges(graph(in), as<Path>(out)));
        return p;
    };
    sub.transform.apply = [](const TestInput& in, const ParamValues& p) {
        WeightedGraph g = graph(in);
        const long e = index_param(p, "edge");
        if (e < 0) return FollowUp{g, {}};
        const Edge old = g.edges.at(static_cast<std::size_t>(e));
        const std::string mid = fresh_name(g, "m");
        const double a = param(p, "alpha");
        g.vertices.push_back(mid);
        g.edges.erase(g.edges.begin() + e);
        g.edges.push_back({old.u, mid, a * old.weight});
        g.edges.push_back({mid, old.v, (1.0 - a) * old.weight});
        return FollowUp{g, {}};
    };
    r.add(std::move(sub));

    Binding comb = path_binding("path.combine_edges", false);
    comb.transform.sample = [](const TestInput& in, const SutOutput& out, Rng& rng,
                               const std::map<std::string, ParamRange>&) {
        const auto& path = as<Path>(out);
        const auto on = path_edges(graph(in), path);
        if (on.size() < 2) return ParamValues{{"step", -1.0}};
        const auto step = rng.index(on.size() - 1);
        return ParamValues{{"step", static_cast<double>(step)},
                           {"first", static_cast<double>(on[step])},
                           {"second", static_cast<double>(on[step + 1])}};
    };
    comb.transform.apply = [](const TestInput& in, const ParamValues& p) {
        WeightedGraph g = graph(in);
        if (index_param(p, "step") < 0) return FollowUp{g, {}};
        const auto i1 = static_cast<std::size_t>(index_param(p, "first"));
        const auto i2 = static_cast<std::size_t>(index_param(p, "second"));
        const Edge e1 = g.edges.at(i1);
        const Edge e2 = g.edges.at(i2);
        std::string a, b, c;
        if (e1.v == e2.u || e1.v == e2.v) {
            a = e1.u;
            b = e1.v;
        } else {
            a = e1.v;
            b = e1.u;
        }
        c = e2.u == b ? e2.v : e2.u;
        const double w = e1.weight + e2.weight;
        g.edges.erase(g.edges.begin() + static_cast<long>(std::max(i1, i2)));
        g.edges.erase(g.edges.begin() + static_cast<long>(std::min(i1, i2)));
        bool merged = false;
        for (auto& e : g.edges)
            if (joins(g, e, a, c)) {
                e.weight = std::min(e.weight, w);
                merged = true;
            }
        if (!merged) g.edges.push_back({a, c, w});
        return FollowUp{g, {}};
    };
    r.add(std::move(comb));
}

}  // namespace mrbench::relations
