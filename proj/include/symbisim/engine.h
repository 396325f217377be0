// Symbolic LTS construction, universe closure, symbolic partition
// refinement, plain bisimulation refinement and the bounded saturation
// oracle.
#pragma once

#include "symbisim/derivation.h"

#include <map>
#include <set>
#include <tuple>

namespace symbisim {

// Disjoint blocks over 0..n-1. Blocks are numbered by first member, so two
// partitions inducing the same equivalence compare equal.
class Partition {
public:
    Partition() = default;
    explicit Partition(const std::vector<int> &labels);

    template <class K>
    static Partition from_keys(const std::vector<K> &keys) {
        std::map<K, int> ids;
        std::vector<int> labels;
        labels.reserve(keys.size());
        for (const auto &k : keys)
            labels.push_back(ids.emplace(k, static_cast<int>(ids.size())).first->second);
        return Partition(labels);
    }

    std::size_t size() const { return block_of_.size(); }
    int num_blocks() const { return num_blocks_; }
    int block_of(std::size_t i) const { return block_of_[i]; }
    const std::vector<int> &labels() const { return block_of_; }
    bool same_block(std::size_t a, std::size_t b) const { return block_of_[a] == block_of_[b]; }
    std::vector<std::vector<int>> blocks() const;
    // Every block of *this lies inside a block of coarser.
    bool refines(const Partition &coarser) const;
    // Partition induced on the listed elements (renumbered 0..).
    Partition restrict_to(const std::vector<int> &elems) const;

    friend bool operator==(const Partition &, const Partition &) = default;

private:
    std::vector<int> block_of_;
    int num_blocks_ = 0;
};

struct EngineOptions {
    std::size_t max_states = 10000;
    std::size_t max_iters = 10000;
    unsigned jobs = 1;
};

// Instance independent view of a closed symbolic LTS, everything interned.
struct RefinementInput {
    struct Edge {
        int label;
        int tgt;
    };
    std::vector<int> sort_id;
    std::vector<std::vector<Edge>> edges;
    // der[p][i * n + j]: state reached when transition i of p derives the
    // context/observation of transition j, or -1 when there is no derivation.
    std::vector<std::vector<int>> der;
};

bool redundant_in(const RefinementInput &in, int p, int j, const Partition &part);
std::vector<std::pair<int, int>> signature(const RefinementInput &in, int p, const Partition &part);
Partition initial_partition(const RefinementInput &in);
Partition refine_step(const RefinementInput &in, const Partition &part, unsigned jobs = 1);

struct RefinementRun {
    std::vector<Partition> trace;  // P0, P1, ..., last two equal
    int iterations = 0;
    const Partition &final() const { return trace.back(); }
};
RefinementRun refine_symbolic(const RefinementInput &in, std::size_t max_iters, unsigned jobs = 1);

// Ordinary LTS with opaque integer labels.
struct PlainLTS {
    std::vector<int> initial;  // initial class (e.g. sort) of each state
    std::vector<std::vector<std::pair<int, int>>> out;  // (label, target)
};
// Coarsest bisimulation refining the initial classes.
Partition ks_refine(const PlainLTS &lts);

template <ContextSystem I>
struct SymbolicLTS {
    using State = typename I::State;
    using Transition = TransitionOf<I>;

    std::vector<State> universe;
    std::map<State, int> index;
    std::vector<std::vector<Transition>> delta;

    int find(const State &p) const {
        auto it = index.find(p);
        return it == index.end() ? -1 : it->second;
    }
    int add(const State &p) {
        auto [it, fresh] = index.emplace(p, static_cast<int>(universe.size()));
        if (fresh) {
            universe.push_back(p);
            delta.emplace_back();
        }
        return it->second;
    }
};

/*
  Seeds plus symbolic targets plus every state obtained by deriving one
  transition of p into the label of another: refinement needs the latter
  to decide redundancy even when nothing reaches them.
*/
template <ContextSystem I>
SymbolicLTS<I> close_universe(const I &sys, const std::vector<typename I::State> &seeds,
                              std::size_t max_states) {
    if (seeds.empty())
        throw Error("close_universe: no seed states");
    SymbolicLTS<I> lts;
    auto guard = [&] {
        if (lts.universe.size() > max_states)
            throw ResourceError("universe exceeds max_states = " + std::to_string(max_states));
    };
    for (const auto &s : seeds)
        lts.add(s);
    guard();
    for (std::size_t p = 0; p < lts.universe.size(); ++p) {
        auto ts = sys.symbolic_transitions(lts.universe[p]);
        sort_unique(ts);
        for (const auto &t : ts) {
            lts.add(t.tgt);
            guard();
        }
        for (const auto &t1 : ts)
            for (const auto &t2 : ts) {
                if (&t1 == &t2)
                    continue;
                if (auto q = derives(sys, t1, t2.ctx, t2.obs)) {
                    lts.add(*q);
                    guard();
                }
            }
        lts.delta[p] = std::move(ts);
    }
    return lts;
}

template <ContextSystem I>
std::vector<int> sort_ids(const I &sys, const std::vector<typename I::State> &states) {
    std::map<typename I::Sort, int> ids;
    std::vector<int> out;
    out.reserve(states.size());
    for (const auto &p : states)
        out.push_back(ids.emplace(sys.sort_of(p), static_cast<int>(ids.size())).first->second);
    return out;
}

template <ContextSystem I>
class LabelTable {
public:
    using Key = std::pair<typename I::Context, typename I::Observation>;
    int intern(const typename I::Context &c, const typename I::Observation &o) {
        return ids_.emplace(Key{c, o}, static_cast<int>(ids_.size())).first->second;
    }

private:
    std::map<Key, int> ids_;
};

template <ContextSystem I>
RefinementInput prepare_refinement(const I &sys, const SymbolicLTS<I> &lts) {
    RefinementInput in;
    const std::size_t n = lts.universe.size();
    in.sort_id = sort_ids(sys, lts.universe);
    in.edges.resize(n);
    in.der.resize(n);
    LabelTable<I> labels;
    auto locate = [&](const typename I::State &q, std::size_t p) {
        int id = lts.find(q);
        if (id < 0)
            throw ClosureViolation("state " + sys.show_state(q) + " (derived from " +
                                   sys.show_state(lts.universe[p]) + ") is not in the universe");
        return id;
    };
    for (std::size_t p = 0; p < n; ++p) {
        const auto &ts = lts.delta[p];
        const std::size_t m = ts.size();
        for (const auto &t : ts)
            in.edges[p].push_back({labels.intern(t.ctx, t.obs), locate(t.tgt, p)});
        in.der[p].assign(m * m, -1);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) {
                    in.der[p][i * m + j] = in.edges[p][i].tgt;
                    continue;
                }
                if (auto q = derives(sys, ts[i], ts[j].ctx, ts[j].obs))
                    in.der[p][i * m + j] = locate(*q, p);
            }
    }
    return in;
}

template <ContextSystem I>
struct MinimizationResult {
    SymbolicLTS<I> lts;
    std::vector<Partition> trace;
    Partition partition;
    int iterations = 0;
    // Minimized LTS: for each block, the (ctx, obs, block) signature shared
    // by its members.
    std::vector<std::set<std::tuple<typename I::Context, typename I::Observation, int>>> quotient;

    bool same_block(const typename I::State &a, const typename I::State &b) const {
        int x = lts.find(a), y = lts.find(b);
        return x >= 0 && y >= 0 && partition.same_block(x, y);
    }
};

// Symbolic signature of state p in the universe, in instance terms.
template <ContextSystem I>
std::set<std::tuple<typename I::Context, typename I::Observation, int>>
signature(const I &sys, const SymbolicLTS<I> &lts, int p, const Partition &part) {
    RefinementInput in = prepare_refinement(sys, lts);
    std::set<std::tuple<typename I::Context, typename I::Observation, int>> out;
    for (std::size_t j = 0; j < lts.delta[p].size(); ++j)
        if (!redundant_in(in, p, static_cast<int>(j), part)) {
            const auto &t = lts.delta[p][j];
            out.emplace(t.ctx, t.obs, part.block_of(in.edges[p][j].tgt));
        }
    return out;
}

// Strict domination of transition t of state p up to the partition.
template <ContextSystem I>
bool redundant_in(const I &sys, const SymbolicLTS<I> &lts, int p, const TransitionOf<I> &t,
                  const Partition &part) {
    auto block = [&](const typename I::State &q) {
        int id = lts.find(q);
        if (id < 0)
            throw ClosureViolation("state " + sys.show_state(q) + " is not in the universe");
        return part.block_of(id);
    };
    for (const auto &u : lts.delta[p]) {
        auto fwd = derives(sys, u, t.ctx, t.obs);
        if (!fwd || block(*fwd) != block(t.tgt))
            continue;
        auto bwd = derives(sys, t, u.ctx, u.obs);
        if (bwd && block(*bwd) == block(u.tgt))
            continue;
        return true;
    }
    return false;
}

template <ContextSystem I>
MinimizationResult<I> minimize_lts(const I &sys, SymbolicLTS<I> lts, const EngineOptions &opt) {
    RefinementInput in = prepare_refinement(sys, lts);
    RefinementRun run = refine_symbolic(in, opt.max_iters, opt.jobs);
    MinimizationResult<I> res;
    res.partition = run.final();
    res.trace = std::move(run.trace);
    res.iterations = run.iterations;
    res.quotient.resize(res.partition.num_blocks());
    std::vector<bool> done(res.partition.num_blocks(), false);
    for (std::size_t p = 0; p < lts.universe.size(); ++p) {
        int b = res.partition.block_of(p);
        if (done[b])
            continue;
        done[b] = true;
        for (std::size_t j = 0; j < lts.delta[p].size(); ++j)
            if (!redundant_in(in, static_cast<int>(p), static_cast<int>(j), res.partition)) {
                const auto &t = lts.delta[p][j];
                res.quotient[b].emplace(t.ctx, t.obs, res.partition.block_of(in.edges[p][j].tgt));
            }
    }
    res.lts = std::move(lts);
    return res;
}

template <ContextSystem I>
MinimizationResult<I> minimize(const I &sys, const std::vector<typename I::State> &seeds,
                               const EngineOptions &opt = {}) {
    return minimize_lts(sys, close_universe(sys, seeds, opt.max_states), opt);
}

// The raw symbolic LTS as a plain LTS: syntactic bisimilarity.
template <ContextSystem I>
PlainLTS raw_plain_lts(const I &sys, const SymbolicLTS<I> &lts) {
    PlainLTS out;
    out.initial = sort_ids(sys, lts.universe);
    out.out.resize(lts.universe.size());
    LabelTable<I> labels;
    for (std::size_t p = 0; p < lts.universe.size(); ++p)
        for (const auto &t : lts.delta[p]) {
            int q = lts.find(t.tgt);
            if (q < 0)
                throw ClosureViolation("target " + sys.show_state(t.tgt) + " is not in the universe");
            out.out[p].emplace_back(labels.intern(t.ctx, t.obs), q);
        }
    return out;
}

/*
  Saturated transitions of p with contexts of size <= k, computed from the
  instance's plain step relation: p -c,o-> q iff c(p) -o-> q.
*/
template <ContextSystem I>
TransitionSet<I> saturated_transitions(const I &sys, const typename I::State &p, std::size_t k) {
    std::vector<TransitionOf<I>> out;
    for (const auto &c : sys.contexts_up_to(sys.sort_of(p), k))
        for (auto &[o, q] : sys.base_transitions(sys.apply(c, p)))
            out.push_back({c, o, q});
    return TransitionSet<I>(p, std::move(out));
}

/*
  Bounded saturated LTS. The bound is a budget spent along paths: a state
  is a pair (p, b) and from it every context of size s <= b is tried,
  leading to (q, b - s). A per-step bound alone does not give a finite
  system (a net loop that consumes one token while the context adds two
  grows forever). Matched moves carry equal labels and hence spend equal
  budget, so bisimilar states of the full saturated system stay bisimilar
  here: the oracle can only be coarser, and is exact once k covers every
  distinguishing experiment.
*/
template <ContextSystem I>
struct SaturatedLTS {
    using Node = std::pair<typename I::State, std::size_t>;
    struct Edge {
        typename I::Context ctx;
        typename I::Observation obs;
        int tgt;
    };
    std::vector<Node> nodes;
    std::map<Node, int> index;
    std::vector<std::vector<Edge>> edges;

    int find(const Node &n) const {
        auto it = index.find(n);
        return it == index.end() ? -1 : it->second;
    }
};

template <ContextSystem I>
SaturatedLTS<I> bounded_saturated_lts(const I &sys, const std::vector<typename I::State> &roots,
                                      std::size_t k, std::size_t max_states) {
    SaturatedLTS<I> sat;
    auto add = [&](const typename SaturatedLTS<I>::Node &n) {
        auto [it, fresh] = sat.index.emplace(n, static_cast<int>(sat.nodes.size()));
        if (fresh) {
            sat.nodes.push_back(n);
            sat.edges.emplace_back();
            if (sat.nodes.size() > max_states)
                throw ResourceError("saturated universe exceeds max_states = " +
                                    std::to_string(max_states));
        }
        return it->second;
    };
    for (const auto &r : roots)
        add({r, k});
    std::map<std::pair<typename I::Sort, std::size_t>, std::vector<typename I::Context>> ctx_cache;
    // Different (state, context) pairs often build the same c(p).
    std::map<typename I::State, std::vector<std::pair<typename I::Observation, typename I::State>>> steps;
    for (std::size_t i = 0; i < sat.nodes.size(); ++i) {
        auto [p, budget] = sat.nodes[i];
        auto key = std::make_pair(sys.sort_of(p), budget);
        auto it = ctx_cache.find(key);
        if (it == ctx_cache.end())
            it = ctx_cache.emplace(key, sys.contexts_up_to(key.first, budget)).first;
        std::vector<typename SaturatedLTS<I>::Edge> out;
        for (const auto &c : it->second) {
            std::size_t left = budget - sys.ctx_size(c);
            auto cp = sys.apply(c, p);
            auto st = steps.find(cp);
            if (st == steps.end()) {
                auto moves = sys.base_transitions(cp);
                st = steps.emplace(std::move(cp), std::move(moves)).first;
            }
            for (const auto &[o, q] : st->second) {
                int j = add({q, left});
                out.push_back({c, o, j});
            }
        }
        sat.edges[i] = std::move(out);
    }
    return sat;
}

template <ContextSystem I>
PlainLTS saturated_plain_lts(const I &sys, const SaturatedLTS<I> &sat) {
    PlainLTS out;
    std::vector<typename I::State> states;
    for (const auto &n : sat.nodes)
        states.push_back(n.first);
    out.initial = sort_ids(sys, states);
    out.out.resize(sat.nodes.size());
    LabelTable<I> labels;
    for (std::size_t i = 0; i < sat.nodes.size(); ++i)
        for (const auto &e : sat.edges[i])
            out.out[i].emplace_back(labels.intern(e.ctx, e.obs), e.tgt);
    return out;
}

template <ContextSystem I>
struct OracleReport {
    bool agree = false;
    SymbolicLTS<I> lts;
    std::vector<int> seed_ids;        // universe indices of the seeds
    Partition symbolic;               // over the closed universe
    Partition oracle;                 // over the seeds, in seed order
    std::size_t saturated_states = 0;
    int iterations = 0;
};

/*
  Compares the symbolic partition, restricted to the seeds, with plain
  bisimilarity on the bounded saturated LTS rooted at the seeds.
*/
template <ContextSystem I>
OracleReport<I> oracle_check(const I &sys, const std::vector<typename I::State> &seeds, std::size_t k,
                             const EngineOptions &opt = {}) {
    OracleReport<I> rep;
    auto min = minimize(sys, seeds, opt);
    rep.symbolic = min.partition;
    rep.iterations = min.iterations;
    auto sat = bounded_saturated_lts(sys, seeds, k, opt.max_states);
    rep.saturated_states = sat.nodes.size();
    Partition full = ks_refine(saturated_plain_lts(sys, sat));
    std::vector<int> roots;
    for (const auto &s : seeds) {
        roots.push_back(sat.find({s, k}));
        rep.seed_ids.push_back(min.lts.find(s));
    }
    rep.oracle = full.restrict_to(roots);
    rep.agree = rep.symbolic.restrict_to(rep.seed_ids) == rep.oracle;
    rep.lts = std::move(min.lts);
    return rep;
}

}  // namespace symbisim
