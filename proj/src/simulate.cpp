#include "spnperf/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "spnperf/errors.hpp"
#include "spnperf/semantics.hpp"

namespace spnperf {
namespace {

constexpr std::int64_t kMaxZeroTimeFirings = 1'000'000;

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sample_exponential(std::mt19937_64& rng, double mean) {
    return -mean * std::log1p(-uniform01(rng));
}

struct BatchSeries {
    std::vector<double> values;

    void summarize(double tq, double& mean, double& half_width) const {
        const std::size_t n = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double var = ss / static_cast<double>(n - 1);
        half_width = tq * std::sqrt(var / static_cast<double>(n));
    }
};

bool too_wide(double mean, double half_width) {
    if (half_width == 0.0) return false;
    return half_width > 0.5 * std::abs(mean);
}

}  // namespace

EvaluationResult simulate(const PetriNet& net, const SimConfig& cfg) {
    if (cfg.batch_count < 2) throw ValidationError("batch_count must be at least 2");
    if (!(cfg.batch_length_ms > 0.0)) throw ValidationError("batch_length_ms must be positive");
    if (cfg.warmup_time_ms < 0.0) throw ValidationError("warmup_time_ms must be non-negative");
    if (!(cfg.confidence_level > 0.0 && cfg.confidence_level < 1.0))
        throw ValidationError("confidence_level must lie in (0, 1)");
    if (cfg.max_tracked_tokens < 1) throw ValidationError("max_tracked_tokens must be at least 1");
    const double span = cfg.warmup_time_ms +
                        static_cast<double>(cfg.batch_count) * cfg.batch_length_ms;
    if (cfg.max_time_ms > 0.0 && span > cfg.max_time_ms * (1.0 + 1e-12))
        throw ValidationError("warmup plus batches exceeds max_time_ms");

    const int np = net.place_count();
    const int nt = net.transition_count();
    const int K = cfg.max_tracked_tokens;

    // tracked places, net declaration order
    std::vector<int> tracked;
    if (cfg.tracked_places.empty()) {
        tracked.resize(static_cast<std::size_t>(np));
        for (int p = 0; p < np; ++p) tracked[static_cast<std::size_t>(p)] = p;
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
    std::vector<int> slot(static_cast<std::size_t>(np), -1);
    for (std::size_t i = 0; i < tracked.size(); ++i)
        slot[static_cast<std::size_t>(tracked[i])] = static_cast<int>(i);
    const std::size_t ntr = tracked.size();

    struct Pred {
        std::string name;
        GuardExpr guard;
        bool truth = false;
        double last = 0.0;
        double time_true = 0.0;  // within current batch
        BatchSeries batches;
    };
    std::vector<Pred> preds;
    for (const TrackedPredicate& tp : cfg.predicates) {
        Pred p{tp.name,
               GuardExpr::parse(tp.guard, [&](std::string_view id) { return net.place_index(id); }),
               false, 0.0, 0.0, {}};
        preds.push_back(std::move(p));
    }

    std::mt19937_64 rng(cfg.seed);
    Marking m = net.initial_marking();

    const double warmup = cfg.warmup_time_ms;
    const double L = cfg.batch_length_ms;
    const double t_end = span;

    // accumulators (active past warmup)
    std::vector<double> integral(ntr, 0.0);
    std::vector<double> last_touch(ntr, warmup);
    std::vector<std::vector<double>> hist(ntr, std::vector<double>(static_cast<std::size_t>(K) + 1, 0.0));
    std::vector<bool> truncated(ntr, false);
    std::vector<BatchSeries> place_batches(ntr);
    std::vector<std::vector<double>> firing_counts(
        static_cast<std::size_t>(nt), std::vector<double>(static_cast<std::size_t>(cfg.batch_count), 0.0));

    bool collecting = warmup == 0.0;
    int closed_batches = 0;
    // boundary k=0 is the warmup end; k=1..batch_count close batches
    int boundary_idx = collecting ? 1 : 0;
    auto boundary_time = [&](int k) { return warmup + static_cast<double>(k) * L; };
    double next_boundary = boundary_time(boundary_idx);

    auto settle_place = [&](int p, double now) {
        const int s = slot[static_cast<std::size_t>(p)];
        if (s < 0 || !collecting) return;
        const double dt = now - last_touch[static_cast<std::size_t>(s)];
        if (dt > 0.0) {
            const std::int32_t v = m[static_cast<std::size_t>(p)];
            integral[static_cast<std::size_t>(s)] += dt * static_cast<double>(v);
            if (v > K) {
                hist[static_cast<std::size_t>(s)][static_cast<std::size_t>(K)] += dt;
                truncated[static_cast<std::size_t>(s)] = true;
            } else {
                hist[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)] += dt;
            }
        }
        last_touch[static_cast<std::size_t>(s)] = now;
    };

    auto settle_preds = [&](double now) {
        if (!collecting) return;
        for (Pred& p : preds) {
            if (p.truth) p.time_true += now - p.last;
            p.last = now;
        }
    };

    auto refresh_preds = [&]() {
        for (Pred& p : preds) p.truth = p.guard.eval(m);
    };

    // closes batches / starts collection for every boundary at or before `now`
    auto advance_boundaries = [&](double now) {
        while (next_boundary <= now + 1e-12 * std::max(1.0, now)) {
            const double b = next_boundary;
            if (!collecting) {
                // warmup ends: reset clocks, start batch 0
                collecting = true;
                std::fill(last_touch.begin(), last_touch.end(), b);
                for (Pred& p : preds) {
                    p.last = b;
                    p.time_true = 0.0;
                }
                next_boundary = boundary_time(++boundary_idx);
                continue;
            }
            for (std::size_t s = 0; s < ntr; ++s) settle_place(tracked[s], b);
            settle_preds(b);
            for (std::size_t s = 0; s < ntr; ++s) {
                place_batches[s].values.push_back(integral[s] / L);
                integral[s] = 0.0;
            }
            for (Pred& p : preds) {
                p.batches.values.push_back(p.time_true / L);
                p.time_true = 0.0;
            }
            ++closed_batches;
            if (closed_batches == cfg.batch_count) {
                next_boundary = std::numeric_limits<double>::infinity();
                break;
            }
            next_boundary = boundary_time(++boundary_idx);
        }
    };

    auto record_firing = [&](int t, double now) {
        if (now <= warmup) return;
        int idx = static_cast<int>(std::ceil((now - warmup) / L)) - 1;
        idx = std::clamp(idx, 0, cfg.batch_count - 1);
        firing_counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(idx)] += 1.0;
    };

    // fires one transition at `now`: settle touched places and predicates first
    auto fire_at = [&](int t, double now) {
        const PetriNet::Transition& tr = net.transitions()[static_cast<std::size_t>(t)];
        for (const PetriNet::Arc& a : tr.inputs) settle_place(a.place, now);
        for (const PetriNet::Arc& a : tr.outputs) settle_place(a.place, now);
        settle_preds(now);
        apply_firing(net, m, t);
        refresh_preds();
        record_firing(t, now);
    };

    std::int64_t zero_time_firings = 0;

    // resolves the immediate cascade at time `now` until the marking is tangible
    auto resolve_immediates = [&](double now) {
        for (;;) {
            const std::vector<int> en = enabled_transition_indices(net, m);
            if (en.empty()) return;
            const PetriNet::Transition& first = net.transitions()[static_cast<std::size_t>(en[0])];
            if (first.kind != TransitionKind::Immediate) return;
            int chosen = en[0];
            if (en.size() > 1) {
                double total = 0.0;
                for (int t : en) total += net.transitions()[static_cast<std::size_t>(t)].weight;
                double r = uniform01(rng) * total;
                for (int t : en) {
                    r -= net.transitions()[static_cast<std::size_t>(t)].weight;
                    if (r <= 0.0) {
                        chosen = t;
                        break;
                    }
                }
            }
            fire_at(chosen, now);
            if (++zero_time_firings > kMaxZeroTimeFirings)
                throw VanishingLoopError(
                    "immediate transitions fired 10^6 times without time advancing");
        }
    };

    std::vector<double> det_timer(static_cast<std::size_t>(nt), -1.0);

    double now = 0.0;
    refresh_preds();
    resolve_immediates(0.0);

    for (;;) {
        // schedule: deterministic timers by enable-memory, exponentials fresh
        double best_time = std::numeric_limits<double>::infinity();
        int best_t = -1;
        for (int t = 0; t < nt; ++t) {
            const PetriNet::Transition& tr = net.transitions()[static_cast<std::size_t>(t)];
            if (tr.kind == TransitionKind::Immediate) continue;
            if (tr.kind == TransitionKind::Deterministic) {
                if (!transition_enabled(net, m, t)) {
                    det_timer[static_cast<std::size_t>(t)] = -1.0;
                    continue;
                }
                if (det_timer[static_cast<std::size_t>(t)] < 0.0)
                    det_timer[static_cast<std::size_t>(t)] = now + tr.delay_ms;
                const double when = det_timer[static_cast<std::size_t>(t)];
                if (when < best_time) {
                    best_time = when;
                    best_t = t;
                }
            } else {
                const std::int32_t degree = enabling_degree(net, m, t);
                if (degree == 0) continue;
                const double when =
                    now + sample_exponential(rng, tr.delay_ms / static_cast<double>(degree));
                if (when < best_time) {
                    best_time = when;
                    best_t = t;
                }
            }
        }

        if (best_t < 0 || best_time > t_end) {
            advance_boundaries(t_end);
            break;
        }

        advance_boundaries(best_time);
        if (best_time > now) zero_time_firings = 0;
        now = best_time;
        if (net.transitions()[static_cast<std::size_t>(best_t)].kind ==
            TransitionKind::Deterministic)
            det_timer[static_cast<std::size_t>(best_t)] = -1.0;
        fire_at(best_t, now);
        resolve_immediates(now);
    }

    // assemble the result
    boost::math::students_t tdist(static_cast<double>(cfg.batch_count - 1));
    const double tq = boost::math::quantile(tdist, 0.5 + cfg.confidence_level / 2.0);
    const double observed = static_cast<double>(cfg.batch_count) * L;

    EvaluationResult r;
    r.backend = Backend::Simulation;
    r.observed_time_ms = observed;

    bool any_quantity = false;
    bool all_wide = true;

    for (std::size_t s = 0; s < ntr; ++s) {
        PlaceStats ps;
        place_batches[s].summarize(tq, ps.mean, ps.half_width);
        ps.histogram = std::move(hist[s]);
        for (double& h : ps.histogram) h /= observed;
        ps.truncated = truncated[s];
        r.histogram_truncated = r.histogram_truncated || ps.truncated;
        any_quantity = true;
        all_wide = all_wide && too_wide(ps.mean, ps.half_width);
        r.place_ids.push_back(net.place(tracked[s]).id);
        r.places.push_back(std::move(ps));
    }
    for (int t = 0; t < nt; ++t) {
        TransitionStats ts;
        BatchSeries series;
        double total = 0.0;
        for (double c : firing_counts[static_cast<std::size_t>(t)]) {
            series.values.push_back(c / L);
            total += c;
        }
        series.summarize(tq, ts.rate_per_ms, ts.half_width);
        ts.firings = total;
        any_quantity = true;
        all_wide = all_wide && too_wide(ts.rate_per_ms, ts.half_width);
        r.transition_ids.push_back(net.transition(t).id);
        r.transitions.push_back(ts);
    }
    for (Pred& p : preds) {
        PredicateStats ps;
        ps.name = p.name;
        p.batches.summarize(tq, ps.probability, ps.half_width);
        any_quantity = true;
        all_wide = all_wide && too_wide(ps.probability, ps.half_width);
        r.predicates.push_back(std::move(ps));
    }
    r.nonconverged = any_quantity && all_wide;
    return r;
}

}  // namespace spnperf
