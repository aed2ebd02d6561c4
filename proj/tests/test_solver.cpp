#include "doctest.h"

#include <cmath>
#include <vector>

#include "spnperf/errors.hpp"
#include "spnperf/net.hpp"
#include "spnperf/solver.hpp"

using namespace spnperf;

namespace {

// M/M/1/c as a birth-death net: F holds free slots, Q the queue.
PetriNet mm1c(double arrival_mean, double service_mean, int cap) {
    return NetBuilder()
        .place("Q", 0)
        .place("F", cap)
        .exponential("arrive", arrival_mean)
        .exponential("serve", service_mean)
        .arc("F", "arrive")
        .arc("arrive", "Q")
        .arc("Q", "serve")
        .arc("serve", "F")
        .build("mm1c");
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("three-place ring explores three tangible states with one edge each") {
    PetriNet ring = NetBuilder()
                        .place("P1", 1)
                        .place("P2", 0)
                        .place("P3", 0)
                        .exponential("T1", 1.0)
                        .exponential("T2", 2.0)
                        .exponential("T3", 3.0)
                        .arc("P1", "T1")
                        .arc("T1", "P2")
                        .arc("P2", "T2")
                        .arc("T2", "P3")
                        .arc("P3", "T3")
                        .arc("T3", "P1")
                        .build("ring");

    ReachabilityGraph g = explore(ring, 1000);
    CHECK(g.states.size() == 3);
    CHECK(g.edges.size() == 3);
    CHECK(g.tangible_count() == 3);

    Ctmc c = eliminate_vanishing(g);
    CHECK(c.markings.size() == 3);
    CHECK(c.entries.size() == 3);

    // sojourn times 1, 2, 3 ms; pi proportional to holding time
    SteadyStateResult ss = steady_state(c, 1e-12, 1'000'000);
    CHECK_FALSE(ss.reducible);
    double total = 0.0;
    for (double p : ss.pi) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    EvaluationResult r = evaluate_exact(ring);
    CHECK(r.backend == Backend::Solver);
    CHECK(r.observed_time_ms == 0.0);
    CHECK(r.place_mean("P1") == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(r.place_mean("P2") == doctest::Approx(2.0 / 6.0).epsilon(1e-9));
    CHECK(r.place_mean("P3") == doctest::Approx(3.0 / 6.0).epsilon(1e-9));
    // every transition fires once per 6 ms cycle
    CHECK(r.firing_rate("T1") == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(r.firing_rate("T2") == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(r.firing_rate("T3") == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(r.transition("T1").half_width == 0.0);
    CHECK(r.transition("T1").firings == 0);
}

TEST_CASE("vanishing state passes incoming rate straight through") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("V", 0)
                       .place("B", 0)
                       .exponential("Ta", 2.0)
                       .immediate("i1")
                       .exponential("Tb", 1.0)
                       .arc("A", "Ta")
                       .arc("Ta", "V")
                       .arc("V", "i1")
                       .arc("i1", "B")
                       .arc("B", "Tb")
                       .arc("Tb", "A")
                       .build("passthrough");

    ReachabilityGraph g = explore(net, 100);
    CHECK(g.states.size() == 3);  // A, V, B markings
    CHECK(g.tangible_count() == 2);

    Ctmc c = eliminate_vanishing(g);
    REQUIRE(c.markings.size() == 2);
    // rate 0.5 from the A-state is delivered to the B-state unchanged
    int a_state = c.initial;
    CHECK(c.total_exit_rate[static_cast<std::size_t>(a_state)] == doctest::Approx(0.5).epsilon(1e-12));

    // pi_A * 0.5 = pi_B * 1.0  ->  pi = (2/3, 1/3)
    EvaluationResult r = evaluate_exact(net);
    CHECK(r.place_mean("A") == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(r.place_mean("B") == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(r.place_mean("V") == doctest::Approx(0.0));
    // the immediate inherits the full upstream firing rate
    CHECK(r.firing_rate("Ta") == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(r.firing_rate("i1") == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(r.firing_rate("Tb") == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("immediate weights 3:1 split the incoming rate 0.75/0.25") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("V", 0)
                       .place("L", 0)
                       .place("R", 0)
                       .exponential("Ta", 2.0)
                       .immediate("iL", 3.0)
                       .immediate("iR", 1.0)
                       .exponential("TL", 1.0)
                       .exponential("TR", 1.0)
                       .arc("A", "Ta")
                       .arc("Ta", "V")
                       .arc("V", "iL")
                       .arc("iL", "L")
                       .arc("V", "iR")
                       .arc("iR", "R")
                       .arc("L", "TL")
                       .arc("TL", "A")
                       .arc("R", "TR")
                       .arc("TR", "A")
                       .build("split");

    ReachabilityGraph g = explore(net, 100);
    Ctmc c = eliminate_vanishing(g);
    REQUIRE(c.markings.size() == 3);

    // the A-state's 0.5 exit rate splits 0.375 / 0.125
    const int a_state = c.initial;
    std::vector<double> rates;
    for (std::int32_t i = c.row_begin[static_cast<std::size_t>(a_state)];
         i < c.row_begin[static_cast<std::size_t>(a_state) + 1]; ++i)
        rates.push_back(c.entries[static_cast<std::size_t>(i)].rate);
    REQUIRE(rates.size() == 2);
    const double hi = std::max(rates[0], rates[1]);
    const double lo = std::min(rates[0], rates[1]);
    CHECK(hi == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(lo == doctest::Approx(0.125).epsilon(1e-12));

    EvaluationResult r = evaluate_exact(net);
    CHECK(r.firing_rate("iL") == doctest::Approx(3.0 * r.firing_rate("iR")).epsilon(1e-9));
    CHECK(r.firing_rate("iL") + r.firing_rate("iR") ==
          doctest::Approx(r.firing_rate("Ta")).epsilon(1e-12));
}

TEST_CASE("chained vanishing states all relay the same firing rate") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("V1", 0)
                       .place("V2", 0)
                       .place("B", 0)
                       .exponential("Ta", 1.0)
                       .immediate("i1")
                       .immediate("i2")
                       .exponential("Tb", 1.0)
                       .arc("A", "Ta")
                       .arc("Ta", "V1")
                       .arc("V1", "i1")
                       .arc("i1", "V2")
                       .arc("V2", "i2")
                       .arc("i2", "B")
                       .arc("B", "Tb")
                       .arc("Tb", "A")
                       .build("chain");

    EvaluationResult r = evaluate_exact(net);
    CHECK(r.place_mean("A") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.place_mean("B") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.firing_rate("Ta") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.firing_rate("i1") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.firing_rate("i2") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.firing_rate("Tb") == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("elimination keeps total outflow when a vanishing path loops back") {
    // half of V's weight returns to A: the CTMC drops the self-loop from the
    // entries but total_exit_rate still reports the full 0.5
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("V", 0)
                       .place("B", 0)
                       .exponential("Ta", 2.0)
                       .immediate("back", 1.0)
                       .immediate("fwd", 1.0)
                       .exponential("Tb", 1.0)
                       .arc("A", "Ta")
                       .arc("Ta", "V")
                       .arc("V", "back")
                       .arc("back", "A")
                       .arc("V", "fwd")
                       .arc("fwd", "B")
                       .arc("B", "Tb")
                       .arc("Tb", "A")
                       .build("selfloop");

    ReachabilityGraph g = explore(net, 100);
    Ctmc c = eliminate_vanishing(g);
    REQUIRE(c.markings.size() == 2);

    for (std::size_t s = 0; s < c.markings.size(); ++s) {
        double graph_out = 0.0;
        const std::int32_t gs = c.graph_state[s];
        for (std::int32_t i = g.edge_begin[static_cast<std::size_t>(gs)];
             i < g.edge_begin[static_cast<std::size_t>(gs) + 1]; ++i)
            graph_out += g.edges[static_cast<std::size_t>(i)].value;
        CHECK(c.total_exit_rate[s] == doctest::Approx(graph_out).epsilon(1e-9));
        for (std::int32_t i = c.row_begin[s]; i < c.row_begin[s + 1]; ++i)
            CHECK(c.entries[static_cast<std::size_t>(i)].to != static_cast<std::int32_t>(s));
    }

    // effective A->B rate is 0.25; balance gives pi = (1/3, 2/3)... check exact:
    // pi_A * 0.25 = pi_B * 1.0 -> pi_A = 0.8, pi_B = 0.2
    EvaluationResult r = evaluate_exact(net);
    CHECK(r.place_mean("A") == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(r.place_mean("B") == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(r.firing_rate("fwd") == doctest::Approx(0.5 * r.firing_rate("Ta")).epsilon(1e-9));
    CHECK(r.firing_rate("back") == doctest::Approx(0.5 * r.firing_rate("Ta")).epsilon(1e-9));
}

TEST_CASE("state cap raises StateSpaceExceededError") {
    PetriNet net = NetBuilder()
                       .place("Q", 0)
                       .exponential("arrive", 10.0)
                       .exponential("serve", 1.0)
                       .arc("arrive", "Q")
                       .arc("Q", "serve")
                       .build("open-queue");
    CHECK_THROWS_AS(explore(net, 2), StateSpaceExceededError);
    SolveConfig cfg;
    cfg.max_states = 5;
    CHECK_THROWS_AS(evaluate_exact(net, cfg), StateSpaceExceededError);
}

TEST_CASE("M/M/1/5 with mu = 2 lambda matches the geometric distribution") {
    PetriNet net = mm1c(1.0, 0.5, 5);
    ReachabilityGraph g = explore(net, 100);
    CHECK(g.states.size() == 6);

    SolveConfig cfg;
    cfg.predicates.push_back({"empty", "#Q=0"});
    EvaluationResult r = evaluate_exact(net, cfg);

    // pi_i = 2^(5-i)/63
    const PlaceStats& q = r.place("Q");
    for (int i = 0; i <= 5; ++i)
        CHECK(q.histogram[static_cast<std::size_t>(i)] ==
              doctest::Approx(std::pow(2.0, 5 - i) / 63.0).epsilon(1e-8));
    CHECK(q.mean == doctest::Approx(19.0 / 21.0).epsilon(1e-8));
    CHECK_FALSE(q.truncated);
    CHECK(r.predicate("empty").probability == doctest::Approx(32.0 / 63.0).epsilon(1e-8));

    // throughput: arrivals accepted at rate lambda * P(Q < 5)
    CHECK(r.firing_rate("arrive") == doctest::Approx((62.0 / 63.0)).epsilon(1e-8));
    CHECK(r.firing_rate("serve") == doctest::Approx(r.firing_rate("arrive")).epsilon(1e-9));
}

TEST_CASE("two-state chain with rates 1 and 3 settles at (0.75, 0.25)") {
    PetriNet net = NetBuilder()
                       .place("S0", 1)
                       .place("S1", 0)
                       .exponential("up", 1.0)
                       .exponential("down", 1.0 / 3.0)
                       .arc("S0", "up")
                       .arc("up", "S1")
                       .arc("S1", "down")
                       .arc("down", "S0")
                       .build("two-state");
    EvaluationResult r = evaluate_exact(net);
    CHECK(r.place_mean("S0") == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(r.place_mean("S1") == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(r.firing_rate("up") == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(r.firing_rate("down") == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("M/M/1/3 with lambda = mu has uniform pi and mean 1.5") {
    EvaluationResult r = evaluate_exact(mm1c(1.0, 1.0, 3));
    CHECK(r.place_mean("Q") == doctest::Approx(1.5).epsilon(1e-9));
    const PlaceStats& q = r.place("Q");
    for (int i = 0; i <= 3; ++i)
        CHECK(q.histogram[static_cast<std::size_t>(i)] == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("bounded source fires at 1/mean") {
    PetriNet net = NetBuilder()
                       .place("P", 0)
                       .exponential("gen", 10.0)
                       .exponential("drain", 1.0)
                       .arc("gen", "P")
                       .arc("P", "drain")
                       .inhibitor("P", "gen", 50)
                       .build("bounded-source");
    EvaluationResult r = evaluate_exact(net);
    // blocking probability ~ 0.1^50, invisible at 1e-9
    CHECK(r.firing_rate("gen") == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(r.place_mean("P") == doctest::Approx(1.0 / 9.0).epsilon(1e-6));
}

TEST_CASE("erlang expansion converges on the M/D/1 mean from above") {
    // M/Ek/1, rho = 0.5: E(N) = rho + rho^2 (1 + 1/k) / (2 (1 - rho))
    PetriNet net = NetBuilder()
                       .place("Q", 0)
                       .exponential("arrive", 20.0)
                       .deterministic("work", 10.0)
                       .arc("arrive", "Q")
                       .arc("Q", "work")
                       .inhibitor("Q", "arrive", 60)
                       .build("md1");

    auto system_size = [](const EvaluationResult& r, int k) {
        double n = r.place_mean("Q");
        if (k >= 2) n += 1.0 - r.place_mean("work__idle");  // in-service token
        return n;
    };

    PetriNet e1 = erlang_expand(net, 1);
    CHECK_FALSE(e1.has_deterministic());
    CHECK(e1.place_count() == net.place_count());  // k=1 adds no phase places
    EvaluationResult r1 = evaluate_exact(e1);
    CHECK(system_size(r1, 1) == doctest::Approx(1.0).epsilon(1e-6));

    PetriNet e5 = erlang_expand(net, 5);
    EvaluationResult r5 = evaluate_exact(e5);
    CHECK(system_size(r5, 5) == doctest::Approx(0.8).epsilon(1e-6));

    PetriNet e20 = erlang_expand(net, 20);
    EvaluationResult r20 = evaluate_exact(e20);
    CHECK(system_size(r20, 20) == doctest::Approx(0.7625).epsilon(1e-6));

    // monotone approach to the deterministic-service limit 0.75
    CHECK(system_size(r1, 1) > system_size(r5, 5));
    CHECK(system_size(r5, 5) > system_size(r20, 20));
    CHECK(system_size(r20, 20) > 0.75);

    // throughput is preserved by the expansion at every k
    CHECK(r1.firing_rate("work") == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(r5.firing_rate("work") == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(r20.firing_rate("work") == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("erlang expansion keeps non-deterministic transitions untouched") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("B", 0)
                       .exponential("Ta", 2.0)
                       .immediate("ib", 1.0, 2, "#B>0")
                       .deterministic("Td", 6.0)
                       .arc("A", "Ta")
                       .arc("Ta", "B")
                       .arc("B", "ib")
                       .arc("ib", "A")
                       .arc("A", "Td")
                       .arc("Td", "A")
                       .build("mixed");
    PetriNet e = erlang_expand(net, 3);
    CHECK_FALSE(e.has_deterministic());
    // original exp + immediate survive; Td becomes __start, 2 stages, final Td
    CHECK(e.transition_index("Ta") >= 0);
    CHECK(e.transition_index("ib") >= 0);
    CHECK(e.transition_index("Td") >= 0);
    CHECK(e.transition_index("Td__start") >= 0);
    CHECK(e.transition_index("Td__s1") >= 0);
    CHECK(e.transition_index("Td__s2") >= 0);
    CHECK(e.place_index("Td__idle") >= 0);
    CHECK(e.place_index("Td__ph3") >= 0);
    const auto& final_stage = e.transition(e.transition_index("Td"));
    CHECK(final_stage.kind == TransitionKind::Exponential);
    CHECK(final_stage.delay_ms == doctest::Approx(2.0));
    const auto& ta = e.transition(e.transition_index("Ta"));
    CHECK(ta.delay_ms == doctest::Approx(2.0));
    const auto& ib = e.transition(e.transition_index("ib"));
    CHECK(ib.priority == 2);
    CHECK(ib.guard_text == "#B>0");
}

TEST_CASE("explore rejects deterministic transitions") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .deterministic("tick", 5.0)
                       .arc("A", "tick")
                       .arc("tick", "A")
                       .build("det");
    CHECK_THROWS_AS(explore(net, 100), ValidationError);
    CHECK_THROWS_AS(evaluate_exact(net), ValidationError);
}

TEST_CASE("immediate cycle with no timed exit raises VanishingLoopError") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("V1", 0)
                       .place("V2", 0)
                       .exponential("Ta", 1.0)
                       .immediate("spin1")
                       .immediate("spin2")
                       .arc("A", "Ta")
                       .arc("Ta", "V1")
                       .arc("V1", "spin1")
                       .arc("spin1", "V2")
                       .arc("V2", "spin2")
                       .arc("spin2", "V1")
                       .build("livelock");
    CHECK_THROWS_AS(evaluate_exact(net), VanishingLoopError);
}

TEST_CASE("transient head states yield the reducible flag, not an error") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("B", 0)
                       .place("C", 0)
                       .exponential("leave", 1.0)
                       .exponential("bc", 1.0)
                       .exponential("cb", 1.0 / 3.0)
                       .arc("A", "leave")
                       .arc("leave", "B")
                       .arc("B", "bc")
                       .arc("bc", "C")
                       .arc("C", "cb")
                       .arc("cb", "B")
                       .build("transient-head");
    EvaluationResult r = evaluate_exact(net);
    CHECK(r.reducible);
    CHECK(r.place_mean("A") == doctest::Approx(0.0));
    CHECK(r.place_mean("B") == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(r.place_mean("C") == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(r.firing_rate("leave") == doctest::Approx(0.0));
}

TEST_CASE("absorbing state takes all probability mass") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("DONE", 0)
                       .exponential("finish", 4.0)
                       .arc("A", "finish")
                       .arc("finish", "DONE")
                       .build("absorbing");
    EvaluationResult r = evaluate_exact(net);
    CHECK(r.reducible);
    CHECK(r.place_mean("DONE") == doctest::Approx(1.0));
    CHECK(r.place_mean("A") == doctest::Approx(0.0));
}

TEST_CASE("two separate recurrent classes are rejected") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("L", 0)
                       .place("R", 0)
                       .exponential("goL", 1.0)
                       .exponential("goR", 1.0)
                       .arc("A", "goL")
                       .arc("goL", "L")
                       .arc("A", "goR")
                       .arc("goR", "R")
                       .build("forked-absorption");
    CHECK_THROWS_AS(evaluate_exact(net), ValidationError);
}

TEST_CASE("vanishing initial marking is handled") {
    PetriNet net = NetBuilder()
                       .place("A", 1)
                       .place("B", 0)
                       .immediate("i")
                       .exponential("Tb", 1.0)
                       .arc("A", "i")
                       .arc("i", "B")
                       .arc("B", "Tb")
                       .arc("Tb", "A")
                       .build("vanishing-start");
    EvaluationResult r = evaluate_exact(net);
    CHECK(r.place_mean("B") == doctest::Approx(1.0));
    CHECK(r.place_mean("A") == doctest::Approx(0.0));
    CHECK(r.firing_rate("Tb") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.firing_rate("i") == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tracked place subset and histogram truncation") {
    PetriNet net = mm1c(1.0, 0.5, 5);
    SolveConfig cfg;
    cfg.tracked_places = {"Q"};
    cfg.max_tracked_tokens = 3;
    EvaluationResult r = evaluate_exact(net, cfg);
    CHECK(r.place_ids.size() == 1);
    CHECK_THROWS_AS(r.place("F"), UnknownIdError);
    const PlaceStats& q = r.place("Q");
    REQUIRE(q.histogram.size() == 4);
    CHECK(q.truncated);
    CHECK(r.histogram_truncated);
    // folded tail collects pi_3 + pi_4 + pi_5 = 7/63
    CHECK(q.histogram[3] == doctest::Approx(7.0 / 63.0).epsilon(1e-8));
    // mean is still the untruncated expectation
    CHECK(q.mean == doctest::Approx(19.0 / 21.0).epsilon(1e-8));

    cfg.tracked_places = {"NOPE"};
    CHECK_THROWS_AS(evaluate_exact(net, cfg), UnknownIdError);
}

TEST_CASE("infinite-server rates scale with the enabling degree") {
    // M/M/inf: arrivals every 10 ms, service mean 50 ms, capped at 40 jobs
    PetriNet net = NetBuilder()
                       .place("BUSY", 0)
                       .exponential("arrive", 10.0)
                       .exponential("depart", 50.0, "", ServerSemantics::Infinite)
                       .arc("arrive", "BUSY")
                       .arc("BUSY", "depart")
                       .inhibitor("BUSY", "arrive", 40)
                       .build("mminf");
    EvaluationResult r = evaluate_exact(net);
    // Poisson(5) tail beyond 40 is ~1e-25
    CHECK(r.place_mean("BUSY") == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(r.firing_rate("depart") == doctest::Approx(0.1).epsilon(1e-8));
}

TEST_CASE("steady state raises NonconvergenceError when starved of iterations") {
    PetriNet net = mm1c(1.0, 0.5, 5);
    ReachabilityGraph g = explore(net, 100);
    Ctmc c = eliminate_vanishing(g);
    CHECK_THROWS_AS(steady_state(c, 1e-12, 1), NonconvergenceError);
}

}  // TEST_SUITE
