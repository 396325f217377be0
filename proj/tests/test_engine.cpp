// Universe closure, redundancy, signatures, refinement, plain bisimilarity
// and the bounded saturation oracle.
#include "support.h"

#include <doctest.h>

using namespace symbisim;
using testing::Rng;

namespace {

net::Marking marking(const net::Model &m, const std::string &name) {
    for (const auto &[n, mk] : m.markings)
        if (n == name)
            return mk;
    FAIL("no marking " << name);
    return {};
}

net::Marking on(const net::Marking &like, net::Multiset tokens) { return {like.net, std::move(tokens)}; }

net::Tokens dollars(int n) {
    net::Tokens t{{"$"}, {}};
    if (n > 0)
        t.tokens["$"] = n;
    return t;
}

const swc::Config g1 = swc::parse_config("\"\" |> \"a\".\"ab\".0 + \"ab\".\"\".0");
const swc::Config g2 = swc::parse_config("\"\" |> \"a\".\"ab\".0");

template <class I>
std::set<std::set<std::string>> named_blocks(const I &sys, const MinimizationResult<I> &res) {
    std::set<std::set<std::string>> out;
    for (const auto &b : res.partition.blocks()) {
        std::set<std::string> names;
        for (int i : b)
            names.insert(sys.show_state(res.lts.universe[i]));
        out.insert(names);
    }
    return out;
}

}  // namespace

TEST_CASE("Partition") {
    Partition p({5, 5, 2, 7, 2});
    CHECK(p.num_blocks() == 3);
    CHECK(p.labels() == std::vector<int>{0, 0, 1, 2, 1});
    CHECK(p.blocks() == std::vector<std::vector<int>>{{0, 1}, {2, 4}, {3}});
    CHECK(p == Partition({1, 1, 0, 3, 0}));
    CHECK_FALSE(Partition({0, 1, 1, 2, 3}).refines(p));
    CHECK(Partition({0, 1, 2, 3, 4}).refines(p));
    CHECK(p.restrict_to({3, 2, 4}) == Partition({0, 1, 1}));
}

TEST_CASE("close_universe adds states needed for redundancy") {
    SUBCASE("nets: q$^3 is not reachable from l") {
        net::OpenNets sys;
        auto model = net::bundled();
        auto a = marking(model, "a"), l = marking(model, "l");
        auto lts = close_universe(sys, {a, l}, 1000);
        CHECK(lts.find(on(l, {{"q", 1}, {"$", 3}})) >= 0);
    }
    SUBCASE("words: ab |> ab.0") {
        swc::Words sys;
        auto lts = close_universe(sys, {g1, g2}, 1000);
        CHECK(lts.find(swc::parse_config("\"ab\" |> \"ab\".0")) >= 0);
        CHECK(lts.universe.size() == 6);
    }
    SUBCASE("a deadlocked seed stays alone") {
        swc::Words sys;
        auto dead = swc::parse_config("\"a\" |> 0");
        auto lts = close_universe(sys, {dead}, 1000);
        CHECK(lts.universe == std::vector<swc::Config>{dead});
    }
    SUBCASE("guards") {
        swc::Words sys;
        CHECK_THROWS_AS(close_universe(sys, {g1, g2}, 3), ResourceError);
        CHECK_THROWS_AS(close_universe(sys, std::vector<swc::Config>{}, 10), Error);
    }
    SUBCASE("every target and every derived state is present") {
        net::OpenNets sys;
        Rng rng(21);
        for (int round = 0; round < 60; ++round) {
            auto n = testing::random_net(rng, "A");
            auto p = testing::random_marking(rng, n);
            SymbolicLTS<net::OpenNets> lts;
            try {
                lts = close_universe(sys, {p}, 500);
            } catch (const ResourceError &) {
                continue;
            }
            for (std::size_t i = 0; i < lts.universe.size(); ++i)
                for (const auto &t1 : lts.delta[i]) {
                    CHECK(lts.find(t1.tgt) >= 0);
                    for (const auto &t2 : lts.delta[i])
                        if (auto q = derives(sys, t1, t2.ctx, t2.obs))
                            CHECK(lts.find(*q) >= 0);
                }
        }
    }
}

TEST_CASE("redundant_in") {
    SUBCASE("nets at P0: ($^3,alpha,m) of l") {
        net::OpenNets sys;
        auto model = net::bundled();
        auto a = marking(model, "a"), l = marking(model, "l");
        auto lts = close_universe(sys, {a, l}, 1000);
        auto p0 = initial_partition(prepare_refinement(sys, lts));
        int il = lts.find(l);
        net::OpenNets::Transition big{dollars(3), "alpha", on(l, {{"m", 1}})};
        net::OpenNets::Transition small{dollars(0), "alpha", on(l, {{"q", 1}})};
        CHECK(redundant_in(sys, lts, il, big, p0));
        CHECK_FALSE(redundant_in(sys, lts, il, small, p0));
    }
    SUBCASE("pi at P0: the particle-consuming inputs") {
        pi::AsyncPi sys;
        sys.names = {"a"};
        auto p = pi::parse_state("tau.new y.'y<a> + a(b).'a<b> @1", sys.names);
        auto lts = close_universe(sys, {p}, 1000);
        auto p0 = initial_partition(prepare_refinement(sys, lts));
        int ip = lts.find(p);
        int redundant = 0;
        for (const auto &t : lts.delta[ip]) {
            bool r = redundant_in(sys, lts, ip, t, p0);
            CHECK(r == (sys.ctx_size(t.ctx) > 0));
            redundant += r;
        }
        CHECK(redundant == 2);
    }
    SUBCASE("discrete partition: redundancy is plain domination") {
        net::OpenNets sys;
        Rng rng(4);
        int checked = 0;
        for (int round = 0; round < 80; ++round) {
            auto n = testing::random_net(rng, "A");
            auto p = testing::random_marking(rng, n);
            SymbolicLTS<net::OpenNets> lts;
            try {
                lts = close_universe(sys, {p}, 300);
            } catch (const ResourceError &) {
                continue;
            }
            std::vector<int> ids(lts.universe.size());
            for (std::size_t i = 0; i < ids.size(); ++i)
                ids[i] = static_cast<int>(i);
            Partition discrete(ids);
            for (std::size_t i = 0; i < lts.universe.size(); ++i)
                for (const auto &t : lts.delta[i]) {
                    bool dominated = false;
                    for (const auto &u : lts.delta[i])
                        dominated = dominated || dominates(sys, u, t);
                    CHECK(redundant_in(sys, lts, static_cast<int>(i), t, discrete) == dominated);
                    ++checked;
                }
        }
        CHECK(checked > 0);
    }
    SUBCASE("mutually deriving transitions do not discharge each other") {
        testing::Loop sys;
        sys.moves[0] = {{0, 7, 0}, {1, 7, 1}};
        auto lts = close_universe(sys, {0}, 10);
        auto in = prepare_refinement(sys, lts);
        auto p0 = initial_partition(in);
        for (const auto &t : lts.delta[0])
            CHECK_FALSE(redundant_in(sys, lts, 0, t, p0));
        CHECK(signature(sys, lts, 0, p0).size() == 2);
        CHECK(signature(in, 0, p0).size() == 2);
    }
    SUBCASE("states outside the universe are reported") {
        net::OpenNets sys;
        auto model = net::bundled();
        auto a = marking(model, "a");
        auto lts = close_universe(sys, {a}, 100);
        auto p0 = initial_partition(prepare_refinement(sys, lts));
        net::OpenNets::Transition stray{dollars(1), "alpha", on(a, {{"a", 5}})};
        CHECK_THROWS_AS(redundant_in(sys, lts, 0, stray, p0), ClosureViolation);
    }
}

TEST_CASE("signature") {
    swc::Words sys;
    auto lts = close_universe(sys, {g1, g2}, 1000);
    auto p0 = initial_partition(prepare_refinement(sys, lts));
    int a_ab = lts.find(swc::parse_config("\"a\" |> \"ab\".0"));
    using Sig = std::set<std::tuple<std::string, swc::Bullet, int>>;
    const Sig expected{{"a", {}, p0.block_of(a_ab)}};
    CHECK(signature(sys, lts, lts.find(g1), p0) == expected);
    CHECK(signature(sys, lts, lts.find(g2), p0) == expected);
    CHECK(signature(sys, lts, lts.find(swc::parse_config("\"ab\" |> 0")), p0).empty());
}

TEST_CASE("minimize") {
    SUBCASE("words example") {
        swc::Words sys;
        auto res = minimize(sys, {g1, g2});
        CHECK(res.same_block(g1, g2));
        CHECK(res.iterations == 2);
        REQUIRE(res.trace.size() == 3);
        CHECK(res.trace[1] == res.trace[2]);
        CHECK(named_blocks(sys, res) ==
              std::set<std::set<std::string>>{{sys.show_state(g1), sys.show_state(g2)},
                                              {"\"a\" |> \"ab\".0"},
                                              {"\"ab\" |> 0"},
                                              {"\"ab\" |> \"\".0", "\"ab\" |> \"ab\".0"}});
        // A fixpoint: one more step changes nothing.
        auto in = prepare_refinement(sys, res.lts);
        CHECK(refine_step(in, res.partition) == res.partition);
    }
    SUBCASE("nets {a,l}") {
        net::OpenNets sys;
        auto model = net::bundled();
        auto a = marking(model, "a"), l = marking(model, "l");
        auto res = minimize(sys, {a, l});
        CHECK(named_blocks(sys, res) == std::set<std::set<std::string>>{
                                            {"a", "l"}, {"b", "p", "q"}, {"q$", "o"}, {"q$^2", "n"}, {"q$^3", "m"}});
    }
    SUBCASE("pi relation R") {
        pi::AsyncPi sys;
        sys.names = {"a"};
        auto p = pi::parse_state("tau.new y.'y<a> + a(b).'a<b> @1", sys.names);
        auto q = pi::parse_state("tau.0 @1", sys.names);
        CHECK(minimize(sys, {p, q}).same_block(p, q));
    }
    SUBCASE("partitions only get finer and respect sorts") {
        pi::AsyncPi sys;
        Rng rng(8);
        for (int round = 0; round < 40; ++round) {
            std::vector<pi::State> seeds{testing::random_pi_state(rng), testing::random_pi_state(rng)};
            auto res = minimize(sys, seeds);
            for (std::size_t i = 1; i < res.trace.size(); ++i)
                CHECK(res.trace[i].refines(res.trace[i - 1]));
            for (std::size_t i = 0; i < res.lts.universe.size(); ++i)
                for (std::size_t j = 0; j < res.lts.universe.size(); ++j)
                    if (res.partition.same_block(i, j))
                        CHECK(res.lts.universe[i].n == res.lts.universe[j].n);
        }
    }
    SUBCASE("parallel signatures give the same partition") {
        net::OpenNets sys;
        auto model = net::bundled();
        std::vector<net::Marking> seeds;
        for (const auto &name : {"a", "c", "e", "l", "r"})
            seeds.push_back(marking(model, name));
        EngineOptions four;
        four.jobs = 4;
        CHECK(minimize(sys, seeds).partition == minimize(sys, seeds, four).partition);
    }
    SUBCASE("iteration guard") {
        swc::Words sys;
        EngineOptions opt;
        opt.max_iters = 1;
        CHECK_THROWS_AS(minimize(sys, {g1, g2}, opt), ResourceError);
    }
    SUBCASE("quotient") {
        swc::Words sys;
        auto res = minimize(sys, {g1, g2});
        CHECK(res.quotient.size() == static_cast<std::size_t>(res.partition.num_blocks()));
        int b = res.partition.block_of(res.lts.find(g1));
        CHECK(res.quotient[b].size() == 1);
    }
}

TEST_CASE("ks_refine") {
    SUBCASE("deadlocked states of one sort") {
        PlainLTS lts{{0, 0}, {{}, {}}};
        CHECK(ks_refine(lts).same_block(0, 1));
    }
    SUBCASE("initial classes are respected") {
        PlainLTS lts{{0, 1}, {{}, {}}};
        CHECK_FALSE(ks_refine(lts).same_block(0, 1));
    }
    SUBCASE("the raw words LTS separates g1 and g2") {
        swc::Words sys;
        auto lts = close_universe(sys, {g1, g2}, 100);
        auto part = ks_refine(raw_plain_lts(sys, lts));
        CHECK_FALSE(part.same_block(lts.find(g1), lts.find(g2)));
    }
    SUBCASE("the bounded saturated nets LTS equates a and l") {
        net::OpenNets sys;
        auto model = net::bundled();
        auto a = marking(model, "a"), l = marking(model, "l");
        auto sat = bounded_saturated_lts(sys, {a, l}, 3, 10000);
        auto part = ks_refine(saturated_plain_lts(sys, sat));
        CHECK(part.same_block(sat.find({a, 3}), sat.find({l, 3})));
    }
}

TEST_CASE("saturated transitions") {
    net::OpenNets sys;
    auto model = net::bundled();
    auto a = marking(model, "a");
    auto b = on(a, {{"b", 1}});
    CHECK(saturated_transitions(sys, b, 1) ==
          TransitionSet<net::OpenNets>(b, {{dollars(1), "beta", b}}));
    CHECK(saturated_transitions(sys, a, 2) ==
          TransitionSet<net::OpenNets>(a, {{dollars(0), "alpha", b},
                                           {dollars(1), "alpha", on(a, {{"b", 1}, {"$", 1}})},
                                           {dollars(2), "alpha", on(a, {{"b", 1}, {"$", 2}})}}));
    auto dead = on(a, {});
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(saturated_transitions(sys, dead, k).items.empty());

    auto sat = bounded_saturated_lts(sys, {b}, 2, 100);
    CHECK(sat.nodes.size() == 4);  // b at budgets 2, 1, 0 and b$ at 0 (via $^2)
    CHECK(sat.edges[sat.find({b, 0})].empty());
    CHECK_THROWS_AS(bounded_saturated_lts(sys, {b}, 2, 2), ResourceError);
}

TEST_CASE("oracle_check") {
    SUBCASE("words") {
        swc::Words sys;
        CHECK(oracle_check(sys, {g1, g2}, 2).agree);
        CHECK(oracle_check(sys, {g1, g2}, sys.sufficient_bound({g1, g2})).agree);
    }
    SUBCASE("nets") {
        net::OpenNets sys;
        auto model = net::bundled();
        std::vector<net::Marking> seeds{marking(model, "a"), marking(model, "l")};
        CHECK(oracle_check(sys, seeds, 3).agree);
        // Without contexts the input-driven loop of b is invisible.
        auto a = marking(model, "a");
        auto blind = oracle_check(sys, {on(a, {{"b", 1}}), on(a, {})}, 0);
        CHECK_FALSE(blind.agree);
        CHECK(oracle_check(sys, {on(a, {{"b", 1}}), on(a, {})}, 1).agree);
    }
    SUBCASE("single seed") {
        pi::AsyncPi sys;
        sys.names = {"a"};
        auto p = pi::parse_state("tau.0 + a(b).'a<b> @1", sys.names);
        auto rep = oracle_check(sys, {p}, sys.sufficient_bound({p}));
        CHECK(rep.agree);
        CHECK(rep.oracle.size() == 1);
    }
}
