#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "unsplit/generate.hpp"
#include "unsplit/io.hpp"
#include "unsplit/lp_oracle.hpp"
#include "unsplit/min_cost_flow.hpp"
#include "unsplit/ring_pipeline.hpp"
#include "unsplit/simplex.hpp"
#include "unsplit/solvers.hpp"

using namespace unsplit;
using unsplit::test::parallel_arcs;
using unsplit::test::rats;

namespace {

ArcBounds uniform_bounds(int arcs, const Rat& lo, const Rat& hi) {
    return ArcBounds{std::vector<Rat>(static_cast<std::size_t>(arcs), lo),
                     std::vector<Rat>(static_cast<std::size_t>(arcs), hi)};
}

}  // namespace

TEST_CASE("bounded min-cost flow on the parallel-arc instance") {
    const WeightedSsufNetwork net = parallel_arcs(Rat(0), Rat(1));

    SECTION("wide box routes everything over the free arc") {
        const auto sol = min_cost_flow_bounded(net, uniform_bounds(2, Rat(0), Rat(2)));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.point.values == rats({"2", "0"}));
        CHECK(sol.objective == 0);
    }
    SECTION("tight box clips at its corner") {
        const auto sol = min_cost_flow_bounded(net, uniform_bounds(2, Rat(1, 2), Rat(3, 2)));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.point.values == rats({"3/2", "1/2"}));
        CHECK(sol.objective == Rat(1, 2));
    }
    SECTION("constant cost over the polytope") {
        const WeightedSsufNetwork flat = parallel_arcs(Rat(1), Rat(1));
        const auto sol = min_cost_flow_bounded(flat, uniform_bounds(2, Rat(0), Rat(2)));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.objective == 2);
    }
    SECTION("infeasible bounds are reported") {
        const auto sol = min_cost_flow_bounded(net, uniform_bounds(2, Rat(0), Rat(1, 2)));
        CHECK(sol.status == LpStatus::Infeasible);
    }
    SECTION("negative costs are handled exactly") {
        const WeightedSsufNetwork neg = parallel_arcs(parse_rational("-2"), Rat(1));
        const auto sol = min_cost_flow_bounded(neg, uniform_bounds(2, Rat(0), Rat(2)));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.point.values == rats({"2", "0"}));
        CHECK(sol.objective == -4);
    }
    SECTION("bounds validation") {
        CHECK_THROWS_AS(min_cost_flow_bounded(net, uniform_bounds(2, Rat(-1), Rat(1))),
                        InvalidBoundsError);
        CHECK_THROWS_AS(min_cost_flow_bounded(net, uniform_bounds(2, Rat(2), Rat(1))),
                        InvalidBoundsError);
    }
}

TEST_CASE("restricted min-cost flow around a center point") {
    const WeightedSsufNetwork net = parallel_arcs(Rat(0), Rat(1));
    const FractionalFlow x(rats({"1", "1"}));
    const BoxErrorBody body = BoxErrorBody::symmetric(2, Rat(1));

    SECTION("lambda one") {
        const auto sol = restricted_min_cost_ssuf(net, x, body, Rat(1));
        CHECK(sol.point.values == rats({"2", "0"}));
        CHECK(sol.objective <= cost_of(net, x));
        CHECK(body_contains(scale_box(body, Rat(1)), vec_sub(x.values, sol.point.values)));
    }
    SECTION("lambda one half") {
        const auto sol = restricted_min_cost_ssuf(net, x, body, Rat(1, 2));
        CHECK(sol.point.values == rats({"3/2", "1/2"}));
    }
    SECTION("zero costs keep the problem feasible with objective zero") {
        const WeightedSsufNetwork free = parallel_arcs(Rat(0), Rat(0));
        const auto sol = restricted_min_cost_ssuf(free, x, body, Rat(1, 4));
        CHECK(sol.objective == 0);
    }
    SECTION("lambda is validated") {
        CHECK_THROWS_AS(restricted_min_cost_ssuf(net, x, body, Rat(0)), BadLambdaError);
        CHECK_THROWS_AS(restricted_min_cost_ssuf(net, x, body, Rat(3, 2)), BadLambdaError);
    }
}

TEST_CASE("enumeration oracle on hand-built programs") {
    SECTION("parallel-arc program") {
        const WeightedSsufNetwork net = parallel_arcs(Rat(0), Rat(1));
        const auto lp = oracle_lp_for_ssuf(net, uniform_bounds(2, Rat(0), Rat(2)));
        const auto sol = lp_oracle_enumerate(lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.point == rats({"2", "0"}));
        CHECK(sol.objective == 0);
    }
    SECTION("empty feasible region") {
        SmallLp lp;
        lp.objective = rats({"1"});
        lp.lower = rats({"0"});
        lp.upper = rats({"1"});
        lp.rows.push_back(LinearConstraint{rats({"1"}), Relation::GreaterEq, Rat(2)});
        CHECK(lp_oracle_enumerate(lp).status == LpStatus::Infeasible);
    }
    SECTION("optimum attained on a face has a unique objective") {
        SmallLp lp;  // min 0*x + y over the unit square with x+y >= 1
        lp.objective = rats({"0", "1"});
        lp.lower = rats({"0", "0"});
        lp.upper = rats({"1", "1"});
        lp.rows.push_back(LinearConstraint{rats({"1", "1"}), Relation::GreaterEq, Rat(1)});
        const auto sol = lp_oracle_enumerate(lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.objective == 0);  // whole segment y=0, x in [1,1]... x=1 vertex
    }
    SECTION("variable cap") {
        SmallLp lp;
        lp.objective.assign(7, Rat(0));
        lp.lower.assign(7, Rat(0));
        lp.upper.assign(7, Rat(1));
        CHECK_THROWS_AS(lp_oracle_enumerate(lp), TooLargeError);
    }
}

TEST_CASE("bounded-variable simplex basics") {
    SECTION("matches a tiny equality-constrained optimum") {
        // min -x - 2y  s.t.  x + y = 1, 0 <= x,y <= 1
        BoundedLp lp;
        lp.objective = rats({"-1", "-2"});
        lp.lower = rats({"0", "0"});
        lp.upper = rats({"1", "1"});
        lp.rows = {rats({"1", "1"})};
        lp.rhs = rats({"1"});
        const auto sol = simplex_solve(lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.point == rats({"0", "1"}));
        CHECK(sol.objective == -2);
    }
    SECTION("detects infeasibility") {
        BoundedLp lp;
        lp.objective = rats({"1"});
        lp.lower = rats({"0"});
        lp.upper = rats({"1"});
        lp.rows = {rats({"1"})};
        lp.rhs = rats({"5"});
        CHECK(simplex_solve(lp).status == LpStatus::Infeasible);
    }
    SECTION("no rows reduces to bound selection") {
        BoundedLp lp;
        lp.objective = rats({"3", "-4"});
        lp.lower = rats({"-1", "-1"});
        lp.upper = rats({"2", "2"});
        const auto sol = simplex_solve(lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.point == rats({"-1", "2"}));
    }
}

TEST_CASE("restricted ring optimization") {
    SECTION("uniform costs make the objective constant") {
        // One commodity of demand 2 on a 4-cycle, both paths of length 2.
        const RingInstance inst({"v0", "v1", "v2", "v3"}, {Rat(1), Rat(1), Rat(1), Rat(1)},
                                {std::nullopt, std::nullopt, std::nullopt, std::nullopt},
                                {RingCommodity{0, 2, Rat(2)}});
        const RingFractionalSolution ref{rats({"1/2"})};
        const auto sol = ring_restricted_min_cost(inst, ref, Rat(2), Rat(1));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.objective == 4);  // every routing costs 2 * d
    }
    SECTION("zero costs return objective zero") {
        const RingInstance inst({"s1", "s2", "t1", "t2"}, {Rat(0), Rat(0), Rat(0), Rat(0)},
                                {std::nullopt, std::nullopt, std::nullopt, std::nullopt},
                                {RingCommodity{0, 2, Rat(1)}, RingCommodity{1, 3, Rat(2)}});
        const RingFractionalSolution ref{rats({"1/2", "1/2"})};
        const auto sol = ring_restricted_min_cost(inst, ref, Rat(2), Rat(1));
        CHECK(sol.objective == 0);
    }
    SECTION("asymmetric costs match the enumeration oracle") {
        const RingInstance inst({"s1", "s2", "t1", "t2"}, {Rat(5), Rat(1), Rat(2), Rat(7)},
                                {std::nullopt, std::nullopt, std::nullopt, std::nullopt},
                                {RingCommodity{0, 2, Rat(1)}, RingCommodity{1, 3, Rat(1)}});
        const RingFractionalSolution ref{rats({"1/2", "1/2"})};
        const Rat radius(1);
        for (const Rat lambda : {Rat(1), Rat(1, 2)}) {
            const auto solver = ring_restricted_min_cost(inst, ref, radius, lambda);
            const auto oracle =
                lp_oracle_enumerate(oracle_lp_for_ring(inst, ref, radius, lambda));
            REQUIRE(oracle.status == LpStatus::Optimal);
            CHECK(solver.objective == oracle.objective + ring_oracle_objective_offset(inst));
        }
    }
}

TEST_CASE("solver-versus-oracle campaigns agree exactly") {
    SsufGenParams tiny;
    tiny.nodes = 4;
    tiny.extra_arcs = 3;
    tiny.terminals = 2;
    const std::vector<Rat> lambdas{Rat(1), Rat(1, 2), Rat(1, 4)};

    SECTION("flows") {
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            const SsufInstanceDoc doc = generate_ssuf(seed, tiny);
            const Rat& lambda = lambdas[seed % lambdas.size()];
            const BoxErrorBody body = BoxErrorBody::symmetric(
                static_cast<std::size_t>(doc.network.arc_count()), doc.network.d_max());
            const auto solver =
                restricted_min_cost_ssuf(doc.network, *doc.fractional, body, lambda);
            const auto oracle = lp_oracle_enumerate(oracle_lp_for_ssuf(
                doc.network, bounds_for_restriction(doc.network, *doc.fractional, body, lambda)));
            REQUIRE(oracle.status == LpStatus::Optimal);
            REQUIRE(solver.objective == oracle.objective);
            REQUIRE(solver.objective <= cost_of(doc.network, *doc.fractional));
            REQUIRE(body_contains(scale_box(body, lambda),
                                  vec_sub(doc.fractional->values, solver.point.values)));
        }
    }
    SECTION("rings") {
        RingGenParams params;
        params.nodes = 6;
        params.commodities = 3;
        int compared = 0;
        std::uint64_t seed = 1;
        while (compared < 200) {
            const RingInstanceDoc doc = generate_ring(seed++, params);
            const RingPreprocessState state = preprocess_ring(doc.instance, *doc.fractional);
            bool any_active = false;
            for (bool fixed : state.is_fixed) any_active = any_active || !fixed;
            if (!any_active) continue;
            const CanonicalRingForm form = canonicalize_crossing(doc.instance, state);
            const Rat radius = parse_rational("13/10") * form.d_max_original;
            const Rat& lambda = lambdas[seed % lambdas.size()];
            const auto solver = ring_restricted_min_cost(form.reduced, form.xbar, radius, lambda);
            const auto oracle =
                lp_oracle_enumerate(oracle_lp_for_ring(form.reduced, form.xbar, radius, lambda));
            REQUIRE(oracle.status == LpStatus::Optimal);
            REQUIRE(solver.objective ==
                    oracle.objective + ring_oracle_objective_offset(form.reduced));
            ++compared;
        }
    }
}

TEST_CASE("solver output is deterministic") {
    SsufGenParams tiny;
    tiny.nodes = 5;
    tiny.extra_arcs = 4;
    tiny.terminals = 3;
    const SsufInstanceDoc doc = generate_ssuf(99, tiny);
    const BoxErrorBody body = BoxErrorBody::symmetric(
        static_cast<std::size_t>(doc.network.arc_count()), doc.network.d_max());
    const auto first = restricted_min_cost_ssuf(doc.network, *doc.fractional, body, Rat(1, 2));
    const auto second = restricted_min_cost_ssuf(doc.network, *doc.fractional, body, Rat(1, 2));
    CHECK(flow_to_json(doc.network, first.point).dump() ==
          flow_to_json(doc.network, second.point).dump());
}
