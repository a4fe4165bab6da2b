#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "unsplit/box.hpp"
#include "unsplit/fpra.hpp"
#include "unsplit/generate.hpp"
#include "unsplit/ring.hpp"
#include "unsplit/ssuf.hpp"

using namespace unsplit;
using unsplit::test::parallel_arcs;
using unsplit::test::rats;

TEST_CASE("rational parsing and serialization round-trip bit-exactly") {
    for (const char* text : {"0", "1", "-1", "3/4", "-22/7", "100000000000000000001/3"}) {
        const Rat q = parse_rational(text);
        CHECK(rat_to_string(q) == text);
        CHECK(parse_rational(rat_to_string(q)) == q);
    }
    // Non-canonical input still round-trips through the canonical form.
    CHECK(rat_to_string(parse_rational("4/6")) == "2/3");
    CHECK(parse_rational("-0") == 0);

    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("0.5"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1e3"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Rat q(static_cast<long>(rng() % 2000) - 1000, static_cast<long>(rng() % 99) + 1);
        q.canonicalize();
        CHECK(parse_rational(rat_to_string(q)) == q);
    }
}

TEST_CASE("induced load sums demands over paths") {
    const WeightedSsufNetwork net = parallel_arcs();

    SECTION("both commodities on the first arc") {
        UnsplittablePathFlow flow{{{0}, {0}}};
        CHECK(induced_load(net, flow).values == rats({"2", "0"}));
    }
    SECTION("one commodity per arc") {
        UnsplittablePathFlow flow{{{0}, {1}}};
        CHECK(induced_load(net, flow).values == rats({"1", "1"}));
    }
    SECTION("invalid paths are rejected") {
        CHECK_THROWS_AS(induced_load(net, UnsplittablePathFlow{{{0}, {}}}), InvalidPathError);
        CHECK_THROWS_AS(induced_load(net, UnsplittablePathFlow{{{0, 1}, {0}}}), InvalidPathError);
    }
}

TEST_CASE("induced load on a ring") {
    const RingInstance inst({"v0", "v1", "v2", "v3"}, {Rat(1), Rat(1), Rat(1), Rat(1)},
                            {std::nullopt, std::nullopt, std::nullopt, std::nullopt},
                            {RingCommodity{0, 2, Rat(5)}});
    const std::vector<Rat> load = ring_load(inst, RingUnsplittableSolution{{1}});
    CHECK(load == rats({"5", "5", "0", "0"}));
}

TEST_CASE("flow polytope membership") {
    const WeightedSsufNetwork net = parallel_arcs();
    CHECK(check_membership(net, FractionalFlow(rats({"1", "1"}))).ok);
    CHECK(check_membership(net, FractionalFlow(rats({"2", "0"}))).ok);

    const MembershipReport bad = check_membership(net, FractionalFlow(rats({"1", "0"})));
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.violations.size() == 2);  // source surplus and sink deficit
    CHECK(bad.violations[0].kind == MembershipViolation::Kind::Conservation);
    CHECK(bad.violations[0].amount == -1);

    CHECK_FALSE(check_membership(net, FractionalFlow(rats({"3", "-1"}))).ok);
}

TEST_CASE("membership for every unsplittable flow (Z inside Q)") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const SsufInstanceDoc doc = generate_ssuf(seed);
        const SsufFpraResult rounded = greedy_path_strip_fpra(doc.network, *doc.fractional);
        CHECK(check_membership(doc.network, induced_load(doc.network, rounded.flow)).ok);
    }
}

TEST_CASE("cycle elimination") {
    // Path s->t with a detached 2-cycle u<->v carrying one unit.
    const WeightedSsufNetwork net(
        {"s", "t", "u", "v"},
        {ArcSpec{"st", "s", "t", Rat(1)}, ArcSpec{"uv", "u", "v", Rat(1)},
         ArcSpec{"vu", "v", "u", Rat(1)}},
        "s", {TerminalSpec{"t", Rat(2)}});

    SECTION("acyclic support is a fixed point") {
        const FractionalFlow x(rats({"2", "0", "0"}));
        CHECK(eliminate_cycle_flow(net, x).values == x.values);
    }
    SECTION("cycle flow is removed and conservation still holds") {
        const FractionalFlow x(rats({"2", "1", "1"}));
        REQUIRE(check_membership(net, x).ok);
        const FractionalFlow cleaned = eliminate_cycle_flow(net, x);
        CHECK(cleaned.values == rats({"2", "0", "0"}));
        CHECK(check_membership(net, cleaned).ok);
        CHECK(support_is_acyclic(net, cleaned));
    }
    SECTION("zero flow with no demands") {
        const WeightedSsufNetwork empty({"s"}, {}, "s", {});
        const FractionalFlow x = FractionalFlow::zeros(0);
        CHECK(eliminate_cycle_flow(empty, x).values.empty());
    }
    SECTION("idempotent and never increasing") {
        const FractionalFlow x(rats({"2", "1/3", "1/3"}));
        const FractionalFlow once = eliminate_cycle_flow(net, x);
        const FractionalFlow twice = eliminate_cycle_flow(net, once);
        CHECK(once.values == twice.values);
        for (std::size_t a = 0; a < x.size(); ++a) CHECK(once.values[a] <= x.values[a]);
    }
}

TEST_CASE("support subnetwork keeps exactly the flow-carrying arcs") {
    const WeightedSsufNetwork net = parallel_arcs();

    SECTION("one zero arc dropped") {
        const SupportSubnetwork sub = support_subnetwork(net, FractionalFlow(rats({"2", "0"})));
        REQUIRE(sub.network.arc_count() == 1);
        CHECK(sub.network.arc(0).id == "a0");
        CHECK(sub.arc_to_original == std::vector<int>{0});
        CHECK(sub.original_to_sub == std::vector<int>{0, -1});
    }
    SECTION("strictly positive flow keeps everything") {
        const SupportSubnetwork sub = support_subnetwork(net, FractionalFlow(rats({"1", "1"})));
        CHECK(sub.network.arc_count() == net.arc_count());
    }
    SECTION("zero flow leaves no arcs") {
        const WeightedSsufNetwork lazy({"s", "t"},
                                       {ArcSpec{"a0", "s", "t", Rat(1)}}, "s",
                                       {TerminalSpec{"t", Rat(0)}});
        const SupportSubnetwork sub = support_subnetwork(lazy, FractionalFlow(rats({"0"})));
        CHECK(sub.network.arc_count() == 0);
    }
}

TEST_CASE("box scaling") {
    const BoxErrorBody unit = BoxErrorBody::symmetric(2, Rat(1));

    CHECK(scale_body(unit, Rat(1, 2)).upper(0) == Rat(1, 2));
    CHECK(scale_body(unit, Rat(1)).lower(1) == -1);

    const BoxErrorBody skew({parse_rational("-1"), parse_rational("-1")},
                            {parse_rational("3"), parse_rational("3")});
    const BoxErrorBody third = scale_body(skew, Rat(1, 3));
    CHECK(third.lower(0) == parse_rational("-1/3"));
    CHECK(third.upper(0) == 1);

    CHECK_THROWS_AS(scale_body(unit, Rat(0)), BadLambdaError);
    CHECK_THROWS_AS(scale_body(unit, Rat(2)), BadLambdaError);
    CHECK_THROWS_AS(scale_body(unit, Rat(-1, 2)), BadLambdaError);
}

TEST_CASE("Minkowski difference body") {
    const Rat d_max(5, 2);
    const BoxErrorBody sym = BoxErrorBody::symmetric(3, d_max);

    const BoxErrorBody twice = minkowski_diff_body(sym, Rat(1));
    CHECK(twice.upper(0) == 2 * d_max);
    CHECK(twice.lower(0) == -2 * d_max);

    const BoxErrorBody one_and_half = minkowski_diff_body(sym, Rat(1, 2));
    CHECK(one_and_half.upper(0) == Rat(3, 2) * d_max);

    const BoxErrorBody one_sided({Rat(0)}, {Rat(4)});
    const BoxErrorBody diff = minkowski_diff_body(one_sided, Rat(1));
    CHECK(diff.lower(0) == -4);
    CHECK(diff.upper(0) == 4);
}

TEST_CASE("box membership") {
    const BoxErrorBody unit = BoxErrorBody::symmetric(2, Rat(1));
    CHECK(body_contains(unit, rats({"0", "0"})));
    CHECK(body_contains(unit, rats({"1", "-1"})));  // boundary counts
    CHECK_FALSE(body_contains(unit, rats({"1", "-1000001/1000000"})));
}

TEST_CASE("box algebra properties under random sampling") {
    std::mt19937_64 rng(23);
    const auto random_rat = [&rng](long lo, long hi) {
        Rat q(static_cast<long>(lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1))),
              static_cast<long>(1 + rng() % 4));
        q.canonicalize();
        return q;
    };
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 1 + rng() % 4;
        std::vector<Rat> lower(dim), upper(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            lower[i] = -random_rat(0, 6);
            upper[i] = random_rat(0, 6);
        }
        const BoxErrorBody body(lower, upper);
        Rat lambda(static_cast<long>(1 + rng() % 4), 4);
        lambda.canonicalize();

        // Scaling commutes with membership.
        std::vector<Rat> v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = random_rat(-7, 7);
        std::vector<Rat> scaled_v(dim);
        for (std::size_t i = 0; i < dim; ++i) scaled_v[i] = lambda * v[i];
        CHECK(body_contains(scale_body(body, lambda), scaled_v) == body_contains(body, v));

        // R - lambda R contains r1 - lambda r2 for sampled members r1, r2.
        const BoxErrorBody diff = minkowski_diff_body(body, lambda);
        for (int sample = 0; sample < 5; ++sample) {
            std::vector<Rat> point(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                // Random convex positions inside [lower, upper].
                Rat t(static_cast<long>(rng() % 5), 4);
                Rat u(static_cast<long>(rng() % 5), 4);
                point[i] = (lower[i] + t * (upper[i] - lower[i])) -
                           lambda * (lower[i] + u * (upper[i] - lower[i]));
            }
            CHECK(body_contains(diff, point));
        }
    }
}

TEST_CASE("acyclicity detection") {
    const WeightedSsufNetwork cyclic({"s", "u", "t"},
                                     {ArcSpec{"su", "s", "u", Rat(1)},
                                      ArcSpec{"ut", "u", "t", Rat(1)},
                                      ArcSpec{"ts", "t", "s", Rat(1)}},
                                     "s", {TerminalSpec{"t", Rat(1)}});
    CHECK_FALSE(cyclic.is_acyclic());
    CHECK(support_is_acyclic(cyclic, FractionalFlow(rats({"1", "1", "0"}))));
    CHECK_FALSE(support_is_acyclic(cyclic, FractionalFlow(rats({"1", "1", "1/7"}))));
}

TEST_CASE("terminals may share a node and the source can host a terminal") {
    // Shared sink node for two commodities.
    const WeightedSsufNetwork net = parallel_arcs();
    CHECK(net.d_max() == 1);
    CHECK(net.total_demand() == 2);
    CHECK(net.net_supply(net.source()) == 2);

    // Terminal co-located with the source uses the empty path.
    const WeightedSsufNetwork loop({"s", "t"}, {ArcSpec{"a", "s", "t", Rat(0)}}, "s",
                                   {TerminalSpec{"s", Rat(2)}, TerminalSpec{"t", Rat(1)}});
    CHECK(loop.net_supply(loop.source()) == 1);
    const FractionalFlow load = induced_load(loop, UnsplittablePathFlow{{{}, {0}}});
    CHECK(load.values == rats({"1"}));
}

TEST_CASE("model rejects malformed inputs") {
    CHECK_THROWS_AS(WeightedSsufNetwork({"s", "s"}, {}, "s", {}), InvalidInstanceError);
    CHECK_THROWS_AS(WeightedSsufNetwork({"s"}, {}, "s", {TerminalSpec{"s", Rat(-1)}}),
                    InvalidInstanceError);
    CHECK_THROWS_AS(
        WeightedSsufNetwork({"s", "t"},
                            {ArcSpec{"a", "s", "t", Rat(1)}, ArcSpec{"a", "s", "t", Rat(1)}},
                            "s", {}),
        InvalidInstanceError);
    CHECK_THROWS_AS(RingInstance({"v0"}, {Rat(0)}, {std::nullopt}, {}), InvalidInstanceError);
    CHECK_THROWS_AS(RingInstance({"v0", "v1"}, {Rat(0), Rat(0)},
                                 {std::nullopt, std::nullopt}, {RingCommodity{0, 0, Rat(1)}}),
                    InvalidInstanceError);
    CHECK_THROWS_AS(RingInstance({"v0", "v1"}, {Rat(-1), Rat(0)},
                                 {std::nullopt, std::nullopt}, {}),
                    InvalidInstanceError);
}
