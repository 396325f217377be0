// Test-side helpers: random instance generators and a brute-force
// bisimilarity oracle that shares nothing with the engine beyond the
// instance primitives (contexts, apply, plain steps).
#pragma once

#include "symbisim/asyncpi.h"
#include "symbisim/engine.h"
#include "symbisim/opennet.h"
#include "symbisim/swc.h"

#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

using Rng = std::mt19937_64;

inline int uniform(Rng &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng &rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// ---------------------------------------------------------------- words

inline std::string random_word(Rng &rng, const std::string &alphabet, int min_len, int max_len) {
    std::string w;
    int n = uniform(rng, min_len, max_len);
    for (int i = 0; i < n; ++i)
        w += alphabet[uniform(rng, 0, static_cast<int>(alphabet.size()) - 1)];
    return w;
}

// Prefix nesting at most depth; words of length <= 3 (rarely empty).
inline symbisim::swc::Process random_process(Rng &rng, const std::string &alphabet, int depth) {
    using symbisim::swc::Process;
    if (depth == 0 || coin(rng, 0.15))
        return Process::nil();
    auto prefix = [&] {
        std::string w = coin(rng, 0.1) ? "" : random_word(rng, alphabet, 1, 3);
        return Process::prefix(w, random_process(rng, alphabet, depth - 1));
    };
    if (coin(rng, 0.35))
        return Process::sum(prefix(), coin(rng, 0.3) ? random_process(rng, alphabet, depth) : prefix());
    return prefix();
}

inline symbisim::swc::Config random_config(Rng &rng, const std::string &alphabet, int depth = 3) {
    return {random_word(rng, alphabet, 0, 2), random_process(rng, alphabet, depth)};
}

// ---------------------------------------------------------------- nets

inline symbisim::net::Multiset random_multiset(Rng &rng, const std::vector<std::string> &over, int min_size,
                                               int max_size) {
    symbisim::net::Multiset m;
    int n = uniform(rng, min_size, max_size);
    for (int i = 0; i < n; ++i)
        ++m[over[uniform(rng, 0, static_cast<int>(over.size()) - 1)]];
    return m;
}

// At most 4 places, at most 3 transitions, pre/post of size at most 3.
inline std::shared_ptr<const symbisim::net::NetDef> random_net(Rng &rng, const std::string &name) {
    auto net = std::make_shared<symbisim::net::NetDef>();
    net->name = name;
    int places = uniform(rng, 2, 4);
    const std::vector<std::string> pool{"a", "b", "c", "$"};
    for (int i = 0; i < places; ++i)
        net->places.push_back(pool[pool.size() - places + i]);
    // "$" is always an input; sometimes one more place is too.
    net->inputs.push_back("$");
    if (places > 2 && coin(rng, 0.3))
        net->inputs.push_back(net->places.front());
    std::sort(net->inputs.begin(), net->inputs.end());
    int ts = uniform(rng, 1, 3);
    for (int i = 0; i < ts; ++i) {
        symbisim::net::NetTransition t;
        t.name = "t" + std::to_string(i + 1);
        t.label = coin(rng) ? "alpha" : "beta";
        t.pre = random_multiset(rng, net->places, 1, 3);
        t.post = random_multiset(rng, net->places, 0, 3);
        net->transitions.push_back(std::move(t));
    }
    return net;
}

inline symbisim::net::Marking random_marking(Rng &rng, const std::shared_ptr<const symbisim::net::NetDef> &net) {
    std::vector<std::string> inner;
    for (const auto &p : net->places)
        if (!net->is_input(p))
            inner.push_back(p);
    if (inner.empty())
        inner = net->places;
    return {net, random_multiset(rng, inner, 0, 3)};
}

// ---------------------------------------------------------------- pi

// Free names among 1..n, prefix depth at most depth, no replication.
inline symbisim::pi::Term random_term(Rng &rng, int n, int bound, int depth) {
    using symbisim::pi::Term;
    auto name = [&] {
        int total = n + bound;
        int v = uniform(rng, 1, total);
        return v <= n ? v : -(v - n);  // bound names as de Bruijn indices
    };
    int choice = uniform(rng, 0, depth == 0 ? 1 : 6);
    switch (choice) {
    case 0:
        return Term::nil();
    case 1:
        return Term::out(name(), name());
    case 2:
        return Term::tau(random_term(rng, n, bound, depth - 1));
    case 3:
        return Term::input(name(), random_term(rng, n, bound + 1, depth - 1));
    case 4:
        return Term::res(random_term(rng, n, bound + 1, depth - 1));
    case 5:
        return Term::par({random_term(rng, n, bound, depth - 1), random_term(rng, n, bound, depth - 1)});
    default: {
        std::vector<Term::Guard> gs;
        int k = uniform(rng, 2, 3);
        for (int i = 0; i < k; ++i) {
            if (coin(rng))
                gs.push_back({true, 0, random_term(rng, n, bound, depth - 1)});
            else
                gs.push_back({false, name(), random_term(rng, n, bound + 1, depth - 1)});
        }
        return Term::sum(std::move(gs));
    }
    }
}

inline symbisim::pi::State random_pi_state(Rng &rng, int max_names = 2, int depth = 3) {
    int n = uniform(rng, 1, max_names);
    return {random_term(rng, n, 0, depth), n};
}

// ---------------------------------------------------------------- toy

// One sort, two states and a single invertible context (rotation by 1
// modulo 2): every derivation is mutual. Transitions are whatever the test
// puts in `moves`.
struct Loop {
    using Sort = int;
    using Context = int;
    using Observation = int;
    using State = int;
    using Transition = symbisim::TransitionOf<Loop>;

    std::vector<std::vector<Transition>> moves{{}, {}};

    int sort_of(const State &) const { return 0; }
    int source(const Context &) const { return 0; }
    int target(const Context &) const { return 0; }
    Context identity(const Sort &) const { return 0; }
    Context compose(const Context &c, const Context &d) const { return (c + d) % 2; }
    std::optional<Context> residual(const Context &c1, const Context &c2) const { return (c2 - c1 + 2) % 2; }
    State apply(const Context &c, const State &p) const { return (p + c) % 2; }
    std::vector<Transition> symbolic_transitions(const State &p) const { return moves[p]; }
    std::optional<Context> rule_lookup(const Context &x, const Observation &o1, const Observation &o2) const {
        return o1 == o2 ? std::optional<Context>(x) : std::nullopt;
    }
    std::size_t ctx_size(const Context &c) const { return static_cast<std::size_t>(c); }
    std::vector<Context> contexts_up_to(const Sort &, std::size_t k) const {
        return k == 0 ? std::vector<Context>{0} : std::vector<Context>{0, 1};
    }
    std::vector<std::pair<Observation, State>> base_transitions(const State &p) const {
        std::vector<std::pair<Observation, State>> out;
        for (const auto &t : moves[p])
            if (t.ctx == 0)
                out.emplace_back(t.obs, t.tgt);
        return out;
    }
    std::string show_sort(const Sort &) const { return "0"; }
    std::string show_context(const Context &c) const { return std::to_string(c); }
    std::string show_observation(const Observation &o) const { return std::to_string(o); }
    std::string show_state(const State &p) const { return std::to_string(p); }
};
static_assert(symbisim::ContextSystem<Loop>);

// ---------------------------------------------------------------- oracle

/*
  Brute-force bisimilarity on the bounded saturated system: nodes are
  (state, remaining context budget), labels are rendered (context,
  observation) strings, and refinement is the textbook signature loop.
  Returns block ids for the roots (at full budget k).
*/
template <class I>
std::vector<int> brute_force_blocks(const I &sys, const std::vector<typename I::State> &roots, std::size_t k,
                                    std::size_t max_nodes = 200000) {
    using Node = std::pair<typename I::State, std::size_t>;
    std::map<Node, int> id;
    std::vector<Node> nodes;
    std::vector<std::vector<std::pair<std::string, int>>> succ;
    auto intern = [&](Node n) {
        auto [it, fresh] = id.emplace(n, static_cast<int>(nodes.size()));
        if (fresh) {
            nodes.push_back(std::move(n));
            succ.emplace_back();
            if (nodes.size() > max_nodes)
                throw symbisim::ResourceError("brute-force oracle: too many nodes");
        }
        return it->second;
    };
    std::vector<int> root_ids;
    for (const auto &r : roots)
        root_ids.push_back(intern({r, k}));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto p = nodes[i].first;
        const auto budget = nodes[i].second;
        for (const auto &c : sys.contexts_up_to(sys.sort_of(p), budget)) {
            std::string ctx = sys.show_context(c) + " :" + sys.show_sort(sys.target(c));
            for (const auto &[o, q] : sys.base_transitions(sys.apply(c, p))) {
                int j = intern({q, budget - sys.ctx_size(c)});
                succ[i].emplace_back(ctx + " / " + sys.show_observation(o), j);
            }
        }
    }
    std::vector<int> block(nodes.size());
    {
        std::map<std::string, int> sorts;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            block[i] = sorts.emplace(sys.show_sort(sys.sort_of(nodes[i].first)), static_cast<int>(sorts.size()))
                           .first->second;
    }
    std::size_t count = 0;
    for (;;) {
        std::map<std::pair<int, std::set<std::pair<std::string, int>>>, int> sigs;
        std::vector<int> next(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            std::set<std::pair<std::string, int>> s;
            for (const auto &[l, j] : succ[i])
                s.emplace(l, block[j]);
            next[i] = sigs.emplace(std::make_pair(block[i], std::move(s)), static_cast<int>(sigs.size()))
                          .first->second;
        }
        block = std::move(next);
        if (sigs.size() == count)
            break;
        count = sigs.size();
    }
    std::vector<int> out;
    for (int r : root_ids)
        out.push_back(block[r]);
    return out;
}

// Same-block matrix of the engine result restricted to the given states.
template <class I>
std::vector<std::vector<bool>> engine_relation(const symbisim::MinimizationResult<I> &res,
                                               const std::vector<typename I::State> &states) {
    std::vector<std::vector<bool>> rel(states.size(), std::vector<bool>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j < states.size(); ++j)
            rel[i][j] = res.same_block(states[i], states[j]);
    return rel;
}

inline std::vector<std::vector<bool>> block_relation(const std::vector<int> &blocks) {
    std::vector<std::vector<bool>> rel(blocks.size(), std::vector<bool>(blocks.size()));
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t j = 0; j < blocks.size(); ++j)
            rel[i][j] = blocks[i] == blocks[j];
    return rel;
}

// ---------------------------------------------------------------- sets

// A random finite transition set of p: a sample of its bounded saturation
// plus a few unrelated transitions with arbitrary targets.
template <class I>
symbisim::TransitionSet<I> random_transition_set(Rng &rng, const I &sys, const typename I::State &p,
                                                 std::size_t k, const std::vector<typename I::State> &pool) {
    symbisim::TransitionSet<I> sym(p, sys.symbolic_transitions(p));
    auto sat = symbisim::saturate_set(sys, sym, k);
    std::vector<symbisim::TransitionOf<I>> out;
    for (const auto &t : sat.items)
        if (coin(rng, 0.6))
            out.push_back(t);
    // Extra members keep the sorts of a genuine transition: same context
    // target and same target sort, but arbitrary context and state.
    auto contexts = sys.contexts_up_to(sys.sort_of(p), k);
    int extra = uniform(rng, 0, 2);
    for (int i = 0; i < extra && !sat.items.empty(); ++i) {
        const auto &model = sat.items[uniform(rng, 0, static_cast<int>(sat.items.size()) - 1)];
        std::vector<const typename I::Context *> cs;
        for (const auto &c : contexts)
            if (sys.target(c) == sys.target(model.ctx))
                cs.push_back(&c);
        std::vector<const typename I::State *> qs;
        for (const auto &q : pool)
            if (sys.sort_of(q) == sys.sort_of(model.tgt))
                qs.push_back(&q);
        if (cs.empty() || qs.empty())
            continue;
        out.push_back({*cs[uniform(rng, 0, static_cast<int>(cs.size()) - 1)], model.obs,
                       *qs[uniform(rng, 0, static_cast<int>(qs.size()) - 1)]});
    }
    return symbisim::TransitionSet<I>(p, std::move(out));
}

}  // namespace testing
