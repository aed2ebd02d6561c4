#include "spnperf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "spnperf/errors.hpp"
#include "spnperf/semantics.hpp"

namespace spnperf {
namespace {

struct MarkingHash {
    std::size_t operator()(const Marking& m) const {
        std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
        for (std::int32_t v : m) {
            std::uint64_t x = static_cast<std::uint32_t>(v);
            h ^= x;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

// Sparse map from state to probability, used for absorption and visit flows.
using SparseRow = std::vector<std::pair<std::int32_t, double>>;

void add_sparse(SparseRow& row, std::int32_t key, double value) {
    for (auto& [k, v] : row) {
        if (k == key) {
            v += value;
            return;
        }
    }
    row.emplace_back(key, value);
}

}  // namespace

ReachabilityGraph explore(const PetriNet& net, std::int64_t max_states) {
    for (const auto& t : net.transitions()) {
        if (t.kind == TransitionKind::Deterministic)
            throw ValidationError("transition '" + t.id +
                                  "' is deterministic; expand it into Erlang phases first");
    }
    if (max_states < 1) throw ValidationError("max_states must be positive");

    ReachabilityGraph g;
    std::unordered_map<Marking, std::int32_t, MarkingHash> index;
    std::deque<std::int32_t> frontier;

    auto intern = [&](const Marking& m) {
        auto [it, fresh] = index.emplace(m, static_cast<std::int32_t>(g.states.size()));
        if (fresh) {
            if (static_cast<std::int64_t>(g.states.size()) >= max_states)
                throw StateSpaceExceededError(max_states);
            g.states.push_back(m);
            g.vanishing.push_back(false);  // set when expanded
            frontier.push_back(it->second);
        }
        return it->second;
    };

    g.initial = intern(net.initial_marking());

    std::vector<std::vector<ReachabilityGraph::Edge>> out;
    while (!frontier.empty()) {
        const std::int32_t s = frontier.front();
        frontier.pop_front();
        const Marking m = g.states[static_cast<std::size_t>(s)];

        const std::vector<int> en = enabled_transition_indices(net, m);
        const bool vanishing =
            !en.empty() && net.transitions()[static_cast<std::size_t>(en[0])].kind ==
                               TransitionKind::Immediate;
        g.vanishing[static_cast<std::size_t>(s)] = vanishing;

        if (out.size() <= static_cast<std::size_t>(s)) out.resize(static_cast<std::size_t>(s) + 1);
        for (int t : en) {
            const auto& tr = net.transitions()[static_cast<std::size_t>(t)];
            Marking next = m;
            apply_firing(net, next, t);
            const std::int32_t target = intern(next);
            double value;
            if (vanishing) {
                value = tr.weight;
            } else {
                value = static_cast<double>(enabling_degree(net, m, t)) / tr.delay_ms;
            }
            out[static_cast<std::size_t>(s)].push_back({s, target, t, value});
        }
    }

    out.resize(g.states.size());
    g.edge_begin.assign(g.states.size() + 1, 0);
    for (std::size_t s = 0; s < out.size(); ++s)
        g.edge_begin[s + 1] = g.edge_begin[s] + static_cast<std::int32_t>(out[s].size());
    g.edges.reserve(static_cast<std::size_t>(g.edge_begin.back()));
    for (auto& row : out)
        for (auto& e : row) g.edges.push_back(e);
    return g;
}

Ctmc eliminate_vanishing(const ReachabilityGraph& g) {
    const std::int32_t n = static_cast<std::int32_t>(g.states.size());

    // absorption rows: for each vanishing state, distribution over tangibles
    std::vector<SparseRow> absorb(static_cast<std::size_t>(n));
    std::vector<std::int32_t> vanish_ids;
    for (std::int32_t s = 0; s < n; ++s)
        if (g.vanishing[static_cast<std::size_t>(s)]) vanish_ids.push_back(s);

    auto edges_of = [&](std::int32_t s) {
        return std::pair(g.edge_begin[static_cast<std::size_t>(s)],
                         g.edge_begin[static_cast<std::size_t>(s) + 1]);
    };
    auto weight_sum = [&](std::int32_t s) {
        auto [b, e] = edges_of(s);
        double total = 0.0;
        for (std::int32_t i = b; i < e; ++i) total += g.edges[static_cast<std::size_t>(i)].value;
        return total;
    };

    // Sweep in discovery order until stable; pure DAG chains settle in a few
    // passes, cycles converge geometrically as mass leaks toward tangibles.
    bool changed = true;
    int sweeps = 0;
    const int max_sweeps = 100000;
    while (changed && sweeps < max_sweeps) {
        changed = false;
        ++sweeps;
        for (auto it = vanish_ids.rbegin(); it != vanish_ids.rend(); ++it) {
            const std::int32_t v = *it;
            SparseRow fresh;
            auto [b, e] = edges_of(v);
            const double total = weight_sum(v);
            for (std::int32_t i = b; i < e; ++i) {
                const auto& edge = g.edges[static_cast<std::size_t>(i)];
                const double p = edge.value / total;
                if (g.vanishing[static_cast<std::size_t>(edge.to)]) {
                    for (const auto& [tg, q] : absorb[static_cast<std::size_t>(edge.to)])
                        add_sparse(fresh, tg, p * q);
                } else {
                    add_sparse(fresh, edge.to, p);
                }
            }
            SparseRow& old = absorb[static_cast<std::size_t>(v)];
            double before = 0.0, after = 0.0;
            for (const auto& [_, q] : old) before += q;
            for (const auto& [_, q] : fresh) after += q;
            if (std::abs(after - before) > 1e-15 || old.size() != fresh.size()) changed = true;
            old = std::move(fresh);
        }
    }
    for (std::int32_t v : vanish_ids) {
        double mass = 0.0;
        for (const auto& [_, q] : absorb[static_cast<std::size_t>(v)]) mass += q;
        if (mass < 1.0 - 1e-9)
            throw VanishingLoopError(
                "immediate transitions form a cycle with no timed exit (absorbed mass " +
                std::to_string(mass) + ")");
    }

    Ctmc c;
    c.ctmc_index.assign(static_cast<std::size_t>(n), -1);
    for (std::int32_t s = 0; s < n; ++s) {
        if (!g.vanishing[static_cast<std::size_t>(s)]) {
            c.ctmc_index[static_cast<std::size_t>(s)] = static_cast<std::int32_t>(c.markings.size());
            c.graph_state.push_back(s);
            c.markings.push_back(g.states[static_cast<std::size_t>(s)]);
        }
    }
    if (c.markings.empty())
        throw VanishingLoopError("no tangible marking is reachable from the initial marking");
    c.initial = c.ctmc_index[static_cast<std::size_t>(g.initial)];
    if (c.initial < 0) {
        // initial marking is vanishing; start in its absorption distribution's
        // first tangible (only the reachable set matters for steady state)
        c.initial = 0;
    }

    c.row_begin.assign(c.markings.size() + 1, 0);
    c.total_exit_rate.assign(c.markings.size(), 0.0);
    std::vector<SparseRow> rows(c.markings.size());
    for (std::size_t ci = 0; ci < c.markings.size(); ++ci) {
        const std::int32_t s = c.graph_state[ci];
        auto [b, e] = edges_of(s);
        for (std::int32_t i = b; i < e; ++i) {
            const auto& edge = g.edges[static_cast<std::size_t>(i)];
            c.total_exit_rate[ci] += edge.value;
            if (g.vanishing[static_cast<std::size_t>(edge.to)]) {
                for (const auto& [tg, q] : absorb[static_cast<std::size_t>(edge.to)]) {
                    const std::int32_t cj = c.ctmc_index[static_cast<std::size_t>(tg)];
                    if (cj != static_cast<std::int32_t>(ci)) add_sparse(rows[ci], cj, edge.value * q);
                }
            } else {
                const std::int32_t cj = c.ctmc_index[static_cast<std::size_t>(edge.to)];
                if (cj != static_cast<std::int32_t>(ci)) add_sparse(rows[ci], cj, edge.value);
            }
        }
    }
    for (std::size_t ci = 0; ci < rows.size(); ++ci) {
        c.row_begin[ci + 1] = c.row_begin[ci] + static_cast<std::int32_t>(rows[ci].size());
        for (const auto& [to, rate] : rows[ci]) c.entries.push_back({to, rate});
    }
    return c;
}

namespace {

// Bottom strongly connected component containing the recurrent class, found
// with an iterative Tarjan pass over the CTMC adjacency.
struct SccResult {
    std::vector<std::int32_t> comp;  // per state
    std::int32_t count = 0;
};

SccResult tarjan(const Ctmc& c) {
    const std::int32_t n = static_cast<std::int32_t>(c.markings.size());
    SccResult res;
    res.comp.assign(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> low(static_cast<std::size_t>(n), 0), num(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> stack;
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::int32_t counter = 0;

    struct Frame {
        std::int32_t v;
        std::int32_t edge;
    };
    for (std::int32_t root = 0; root < n; ++root) {
        if (num[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> call;
        call.push_back({root, c.row_begin[static_cast<std::size_t>(root)]});
        num[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;

        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < c.row_begin[static_cast<std::size_t>(f.v) + 1]) {
                const std::int32_t w = c.entries[static_cast<std::size_t>(f.edge)].to;
                ++f.edge;
                if (num[static_cast<std::size_t>(w)] == -1) {
                    num[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    call.push_back({w, c.row_begin[static_cast<std::size_t>(w)]});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(f.v)] =
                        std::min(low[static_cast<std::size_t>(f.v)], num[static_cast<std::size_t>(w)]);
                }
            } else {
                if (low[static_cast<std::size_t>(f.v)] == num[static_cast<std::size_t>(f.v)]) {
                    for (;;) {
                        const std::int32_t w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        res.comp[static_cast<std::size_t>(w)] = res.count;
                        if (w == f.v) break;
                    }
                    ++res.count;
                }
                const std::int32_t v = f.v;
                call.pop_back();
                if (!call.empty()) {
                    low[static_cast<std::size_t>(call.back().v)] = std::min(
                        low[static_cast<std::size_t>(call.back().v)], low[static_cast<std::size_t>(v)]);
                }
            }
        }
    }
    return res;
}

}  // namespace

SteadyStateResult steady_state(const Ctmc& c, double tol, std::int64_t max_iter) {
    const std::int32_t n = static_cast<std::int32_t>(c.markings.size());
    SteadyStateResult out;
    out.pi.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 1) {
        out.pi[0] = 1.0;
        return out;
    }

    const SccResult scc = tarjan(c);
    std::vector<bool> bottom(static_cast<std::size_t>(scc.count), true);
    for (std::int32_t v = 0; v < n; ++v) {
        const std::int32_t cv = scc.comp[static_cast<std::size_t>(v)];
        for (std::int32_t i = c.row_begin[static_cast<std::size_t>(v)];
             i < c.row_begin[static_cast<std::size_t>(v) + 1]; ++i) {
            const std::int32_t cw = scc.comp[static_cast<std::size_t>(c.entries[static_cast<std::size_t>(i)].to)];
            if (cw != cv) bottom[static_cast<std::size_t>(cv)] = false;
        }
    }
    std::int32_t bottom_count = 0, bottom_comp = -1;
    for (std::int32_t k = 0; k < scc.count; ++k) {
        if (bottom[static_cast<std::size_t>(k)]) {
            ++bottom_count;
            bottom_comp = k;
        }
    }
    if (bottom_count != 1)
        throw ValidationError("chain has " + std::to_string(bottom_count) +
                              " recurrent classes; steady state is not unique");

    std::vector<std::int32_t> members;
    for (std::int32_t v = 0; v < n; ++v)
        if (scc.comp[static_cast<std::size_t>(v)] == bottom_comp) members.push_back(v);
    out.reducible = members.size() != static_cast<std::size_t>(n);

    if (members.size() == 1) {
        out.pi[static_cast<std::size_t>(members[0])] = 1.0;
        return out;
    }

    // membership map and per-state effective exit rates within the class
    std::vector<std::int32_t> local(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < members.size(); ++i)
        local[static_cast<std::size_t>(members[i])] = static_cast<std::int32_t>(i);
    const std::size_t m = members.size();

    std::vector<double> exit(m, 0.0);
    // transposed edges: incoming (source local, rate) per local state
    std::vector<std::vector<std::pair<std::int32_t, double>>> in(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::int32_t v = members[i];
        for (std::int32_t e = c.row_begin[static_cast<std::size_t>(v)];
             e < c.row_begin[static_cast<std::size_t>(v) + 1]; ++e) {
            const auto& entry = c.entries[static_cast<std::size_t>(e)];
            const std::int32_t j = local[static_cast<std::size_t>(entry.to)];
            // bottom class has no outgoing edges; all targets are members
            exit[i] += entry.rate;
            in[static_cast<std::size_t>(j)].emplace_back(static_cast<std::int32_t>(i), entry.rate);
        }
    }

    std::vector<double> pi(m, 1.0 / static_cast<double>(m));
    std::int64_t iter = 0;
    // accept only once the absolute residual meets tol; additionally polish
    // until the per-state balance holds to the same RELATIVE precision, so
    // derived expectations are not limited by the largest flows. A stagnation
    // counter stops the polish at the floating-point floor.
    double best_rel = std::numeric_limits<double>::infinity();
    int stale = 0;
    for (;;) {
        if (iter++ >= max_iter) throw NonconvergenceError(max_iter);
        for (std::size_t j = 0; j < m; ++j) {
            double inflow = 0.0;
            for (const auto& [src, rate] : in[j]) inflow += pi[static_cast<std::size_t>(src)] * rate;
            pi[j] = inflow / exit[j];
        }
        double total = 0.0;
        for (double p : pi) total += p;
        for (double& p : pi) p /= total;

        double residual = 0.0;
        double rel_residual = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            double inflow = 0.0;
            for (const auto& [src, rate] : in[j]) inflow += pi[static_cast<std::size_t>(src)] * rate;
            const double outflow = pi[j] * exit[j];
            const double gap = std::abs(inflow - outflow);
            residual = std::max(residual, gap);
            const double scale = std::max(inflow, outflow);
            if (scale > 0.0) rel_residual = std::max(rel_residual, gap / scale);
        }
        if (residual > tol) continue;
        if (rel_residual <= tol) break;
        if (rel_residual < best_rel * 0.999999) {
            best_rel = rel_residual;
            stale = 0;
        } else if (++stale >= 100) {
            break;  // at the floating-point floor; absolute contract holds
        }
    }

    for (std::size_t i = 0; i < m; ++i) out.pi[static_cast<std::size_t>(members[i])] = pi[i];
    return out;
}

PetriNet erlang_expand(const PetriNet& net, int phases) {
    if (phases < 1) throw ValidationError("erlang phase count must be at least 1");

    std::vector<Place> places = net.places();
    std::vector<TransitionSpec> transitions;
    std::vector<ArcSpec> arcs;

    // arcs not attached to a deterministic transition survive untouched
    auto is_det = [&](const std::string& id) {
        const int t = net.transition_index(id);
        return t >= 0 && net.transition(t).kind == TransitionKind::Deterministic;
    };
    for (const ArcSpec& a : net.arc_specs()) {
        if (phases >= 2 && (is_det(a.from) || is_det(a.to))) continue;
        arcs.push_back(a);
    }

    for (const auto& t : net.transitions()) {
        TransitionSpec spec;
        spec.id = t.id;
        spec.kind = t.kind;
        spec.delay_ms = t.delay_ms;
        spec.weight = t.weight;
        spec.priority = t.priority;
        spec.servers = t.servers;
        spec.guard = t.guard_text;

        if (t.kind != TransitionKind::Deterministic) {
            transitions.push_back(std::move(spec));
            continue;
        }
        if (phases == 1) {
            spec.kind = TransitionKind::Exponential;
            transitions.push_back(std::move(spec));
            continue;
        }

        const std::string idle = t.id + "__idle";
        places.push_back({idle, 1});
        for (int i = 1; i <= phases; ++i)
            places.push_back({t.id + "__ph" + std::to_string(i), 0});

        TransitionSpec start;
        start.id = t.id + "__start";
        start.kind = TransitionKind::Immediate;
        start.weight = 1.0;
        start.priority = 1;
        start.guard = t.guard_text;
        transitions.push_back(start);
        for (const ArcSpec& a : net.arc_specs()) {
            if (a.to != t.id) continue;
            arcs.push_back({a.from, start.id, a.multiplicity, a.kind});
        }
        arcs.push_back({idle, start.id, 1, ArcKind::Input});
        arcs.push_back({start.id, t.id + "__ph1", 1, ArcKind::Output});

        const double stage_mean = t.delay_ms / static_cast<double>(phases);
        for (int i = 1; i < phases; ++i) {
            TransitionSpec stage;
            stage.id = t.id + "__s" + std::to_string(i);
            stage.kind = TransitionKind::Exponential;
            stage.delay_ms = stage_mean;
            transitions.push_back(stage);
            arcs.push_back({t.id + "__ph" + std::to_string(i), stage.id, 1, ArcKind::Input});
            arcs.push_back({stage.id, t.id + "__ph" + std::to_string(i + 1), 1, ArcKind::Output});
        }

        // final stage keeps the original id so rate lookups stay valid
        spec.kind = TransitionKind::Exponential;
        spec.delay_ms = stage_mean;
        spec.guard.clear();
        transitions.push_back(spec);
        arcs.push_back({t.id + "__ph" + std::to_string(phases), t.id, 1, ArcKind::Input});
        for (const ArcSpec& a : net.arc_specs()) {
            if (a.from != t.id) continue;
            arcs.push_back({t.id, a.to, a.multiplicity, a.kind});
        }
        arcs.push_back({t.id, idle, 1, ArcKind::Output});
    }

    return PetriNet(net.name(), std::move(places), std::move(transitions), std::move(arcs));
}

EvaluationResult evaluate_exact(const PetriNet& net, const SolveConfig& cfg) {
    const ReachabilityGraph g = explore(net, cfg.max_states);
    const Ctmc c = eliminate_vanishing(g);
    const SteadyStateResult ss = steady_state(c, cfg.tol, cfg.max_iter);

    const int np = net.place_count();
    const int nt = net.transition_count();
    const int K = cfg.max_tracked_tokens;

    std::vector<int> tracked;
    if (cfg.tracked_places.empty()) {
        for (int p = 0; p < np; ++p) tracked.push_back(p);
    } else {
        std::vector<bool> want(static_cast<std::size_t>(np), false);
        for (const std::string& id : cfg.tracked_places) {
            const int p = net.place_index(id);
            if (p < 0) throw UnknownIdError("unknown tracked place '" + id + "'", id);
            want[static_cast<std::size_t>(p)] = true;
        }
        for (int p = 0; p < np; ++p)
            if (want[static_cast<std::size_t>(p)]) tracked.push_back(p);
    }

    EvaluationResult r;
    r.backend = Backend::Solver;
    r.observed_time_ms = 0.0;
    r.reducible = ss.reducible;

    for (int p : tracked) {
        PlaceStats ps;
        ps.histogram.assign(static_cast<std::size_t>(K) + 1, 0.0);
        for (std::size_t s = 0; s < c.markings.size(); ++s) {
            const double pi = ss.pi[s];
            const std::int32_t v = c.markings[s][static_cast<std::size_t>(p)];
            ps.mean += pi * static_cast<double>(v);
            if (v > K) {
                ps.histogram[static_cast<std::size_t>(K)] += pi;
                if (pi > 0.0) ps.truncated = true;
            } else {
                ps.histogram[static_cast<std::size_t>(v)] += pi;
            }
        }
        r.histogram_truncated = r.histogram_truncated || ps.truncated;
        r.place_ids.push_back(net.place(p).id);
        r.places.push_back(std::move(ps));
    }

    // firing rates: exponential edges weighted by source probability; immediate
    // edges weighted by the visit flow through their vanishing sources
    std::vector<double> rate(static_cast<std::size_t>(nt), 0.0);

    std::vector<double> visit(g.states.size(), 0.0);  // vanishing visit flow per ms
    std::vector<double> weight_total(g.states.size(), 0.0);
    for (std::size_t s = 0; s < g.states.size(); ++s) {
        if (!g.vanishing[s]) continue;
        for (std::int32_t i = g.edge_begin[s]; i < g.edge_begin[s + 1]; ++i)
            weight_total[s] += g.edges[static_cast<std::size_t>(i)].value;
    }

    // tangible -> vanishing inflow seeds the visit flow
    for (std::size_t s = 0; s < g.states.size(); ++s) {
        if (g.vanishing[s]) continue;
        const std::int32_t ci = c.ctmc_index[s];
        const double pi = ss.pi[static_cast<std::size_t>(ci)];
        for (std::int32_t i = g.edge_begin[s]; i < g.edge_begin[s + 1]; ++i) {
            const auto& e = g.edges[static_cast<std::size_t>(i)];
            rate[static_cast<std::size_t>(e.transition)] += pi * e.value;
            if (g.vanishing[static_cast<std::size_t>(e.to)])
                visit[static_cast<std::size_t>(e.to)] += pi * e.value;
        }
    }
    // propagate visit flow through vanishing chains: sweep
    //   visit[v] = seed[v] + sum over vanishing predecessors u of visit[u] * P(u -> v)
    // until stable (one pass for acyclic chains, geometric for cycles with exits)
    {
        std::vector<std::vector<std::pair<std::int32_t, double>>> pred(g.states.size());
        for (std::size_t u = 0; u < g.states.size(); ++u) {
            if (!g.vanishing[u]) continue;
            for (std::int32_t i = g.edge_begin[u]; i < g.edge_begin[u + 1]; ++i) {
                const auto& e = g.edges[static_cast<std::size_t>(i)];
                if (g.vanishing[static_cast<std::size_t>(e.to)])
                    pred[static_cast<std::size_t>(e.to)].emplace_back(
                        static_cast<std::int32_t>(u), e.value / weight_total[u]);
            }
        }
        const std::vector<double> seed = visit;
        for (int sweep = 0; sweep < 100000; ++sweep) {
            double max_change = 0.0;
            for (std::size_t s = 0; s < g.states.size(); ++s) {
                if (!g.vanishing[s]) continue;
                double inflow = seed[s];
                for (const auto& [u, p] : pred[s]) inflow += visit[static_cast<std::size_t>(u)] * p;
                max_change = std::max(max_change, std::abs(inflow - visit[s]));
                visit[s] = inflow;
            }
            if (max_change <= 1e-14) break;
        }
    }
    for (std::size_t s = 0; s < g.states.size(); ++s) {
        if (!g.vanishing[s]) continue;
        for (std::int32_t i = g.edge_begin[s]; i < g.edge_begin[s + 1]; ++i) {
            const auto& e = g.edges[static_cast<std::size_t>(i)];
            rate[static_cast<std::size_t>(e.transition)] +=
                visit[s] * e.value / weight_total[s];
        }
    }

    for (int t = 0; t < nt; ++t) {
        TransitionStats ts;
        ts.rate_per_ms = rate[static_cast<std::size_t>(t)];
        r.transition_ids.push_back(net.transition(t).id);
        r.transitions.push_back(ts);
    }

    for (const TrackedPredicate& tp : cfg.predicates) {
        GuardExpr guard =
            GuardExpr::parse(tp.guard, [&](std::string_view id) { return net.place_index(id); });
        PredicateStats ps;
        ps.name = tp.name;
        for (std::size_t s = 0; s < c.markings.size(); ++s)
            if (guard.eval(c.markings[s])) ps.probability += ss.pi[s];
        r.predicates.push_back(std::move(ps));
    }

    return r;
}

}  // namespace spnperf
